use std::collections::VecDeque;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

/// Time source abstraction so rate limiting can run against a virtual clock
/// in tests.
pub trait Clock: Send + Sync {
    /// Monotonic time since the clock's epoch.
    fn now(&self) -> Duration;
    fn sleep(&self, duration: Duration);
}

/// Wall-clock time relative to construction.
pub struct SystemClock {
    start: Instant,
}

impl SystemClock {
    pub fn new() -> Self {
        Self {
            start: Instant::now(),
        }
    }
}

impl Default for SystemClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for SystemClock {
    fn now(&self) -> Duration {
        self.start.elapsed()
    }

    fn sleep(&self, duration: Duration) {
        std::thread::sleep(duration);
    }
}

/// A clock where sleeping advances time instantly; time only moves forward.
#[derive(Default)]
pub struct VirtualClock {
    now_ms: AtomicU64,
}

impl VirtualClock {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn advance(&self, duration: Duration) {
        self.now_ms
            .fetch_add(duration.as_millis() as u64, Ordering::SeqCst);
    }
}

impl Clock for VirtualClock {
    fn now(&self) -> Duration {
        Duration::from_millis(self.now_ms.load(Ordering::SeqCst))
    }

    fn sleep(&self, duration: Duration) {
        self.advance(duration);
    }
}

/// Sliding-window request limiter: at most `limit` permits in any trailing
/// 60-second window.
#[derive(Debug)]
pub struct RateGate {
    limit: u32,
    window: Duration,
    grants: VecDeque<Duration>,
}

impl RateGate {
    pub fn new(requests_per_minute: u32) -> Self {
        Self {
            limit: requests_per_minute.max(1),
            window: Duration::from_secs(60),
            grants: VecDeque::new(),
        }
    }

    /// Grant a permit at `now`, or return exactly how long to wait until one
    /// becomes available. A grant is inside the window while `now - grant`
    /// is strictly less than 60 seconds.
    pub fn try_acquire(&mut self, now: Duration) -> Result<(), Duration> {
        while let Some(&oldest) = self.grants.front() {
            if oldest + self.window <= now {
                self.grants.pop_front();
            } else {
                break;
            }
        }
        if (self.grants.len() as u32) < self.limit {
            self.grants.push_back(now);
            Ok(())
        } else {
            let oldest = *self.grants.front().expect("window is full");
            Err(oldest + self.window - now)
        }
    }
}
