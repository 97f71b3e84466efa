use super::chunk::PromptChunk;

/// Instruction template for refining a dictionary of acronym entries. The
/// dictionary block replaces the `{text}` placeholder.
const REFINE_TEMPLATE: &str = r#"As an AI language model, you are tasked with refining a dictionary of acronyms and their explanations provided below:
{text}

Please follow these instructions carefully:

1. Each entry in the dictionary consists of an `ACRONYM` and its corresponding `value` (full form or context).
2. The `value` may contain the full form of the acronym or a context in which the acronym is used.
3. If the `value` does not start with "(context)", check the accuracy and conciseness of the full form and make adjustments as necessary.
4. If the `value` starts with "(context)", the full form of the acronym should be extracted based on the context provided.
5. If the full form cannot be determined from the context, use your best judgment to provide the most accurate and concise full form.
6. If you cannot determine the full form from the context, ignore the entry.
7. Ignore author names, publication titles, locations, roman numerals, and other proper nouns that are not acronyms.

Your output should be an updated dictionary in JSON format, adhering to the following structure:
{
    "ACRONYM": "Full Expansion of the Acronym",
    "ANOTHER_ACRONYM": "Full Expansion of Another Acronym",
    ...
}

Ensure the final dictionary is accurate, concise, and formatted correctly for JSON compatibility. Exclude any additional text, comments, notes, or explanations outside of the updated dictionary entries."#;

/// Instruction template for the direct-extraction modes: instead of refining
/// pre-extracted entries, the model is asked to discover every
/// acronym-expansion pair in a raw text chunk. Same JSON-only output
/// contract as the refinement prompt.
const DISCOVERY_TEMPLATE: &str = r#"As an AI language model, you are tasked with finding every acronym and its full form in the text provided below:
{text}

Please follow these instructions carefully:

1. Identify each acronym used in the text.
2. For each acronym, provide the most accurate and concise full form, using the surrounding text when it states one.
3. If the text does not state a full form, use your best judgment to provide the most accurate and concise full form.
4. If you cannot determine the full form of an acronym, ignore it.
5. Ignore author names, publication titles, locations, roman numerals, and other proper nouns that are not acronyms.

Your output should be a dictionary in JSON format, adhering to the following structure:
{
    "ACRONYM": "Full Expansion of the Acronym",
    "ANOTHER_ACRONYM": "Full Expansion of Another Acronym",
    ...
}

Ensure the final dictionary is accurate, concise, and formatted correctly for JSON compatibility. Exclude any additional text, comments, notes, or explanations outside of the dictionary entries."#;

/// Render the refinement prompt for a chunk of table entries.
pub fn render_prompt(chunk: &PromptChunk) -> String {
    REFINE_TEMPLATE.replace("{text}", &chunk.serialized)
}

/// Render the discovery prompt for a chunk of raw document text.
pub fn render_discovery_prompt(text_chunk: &str) -> String {
    DISCOVERY_TEMPLATE.replace("{text}", text_chunk)
}
