use std::time::Duration;

use serde::{Deserialize, Serialize};

/// Exponential backoff with jitter, capped at `max_delay`.
///
/// The delay before retry `k` (0-based) is `base * 2^k` plus a jitter drawn
/// from `[0, base * 2^(k-1))`, then capped. Delays are therefore
/// non-decreasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    #[serde(with = "millis")]
    pub base_delay: Duration,
    #[serde(with = "millis")]
    pub max_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            max_attempts: 5,
            base_delay: Duration::from_millis(500),
            max_delay: Duration::from_secs(30),
        }
    }
}

impl RetryPolicy {
    /// Delay before retry number `retry` given a jitter fraction in `[0, 1)`.
    pub fn delay(&self, retry: u32, jitter: f64) -> Duration {
        let base = self.base_delay.as_secs_f64() * 2f64.powi(retry.min(62) as i32);
        let jitter = jitter.clamp(0.0, 1.0) * base / 2.0;
        let capped = (base + jitter).min(self.max_delay.as_secs_f64());
        Duration::from_secs_f64(capped.max(0.0))
    }

    pub fn next_delay(&self, retry: u32) -> Duration {
        self.delay(retry, rand::random_range(0.0..1.0))
    }

    pub fn attempts(&self) -> u32 {
        self.max_attempts.max(1)
    }
}

pub trait Sleeper: Send + Sync {
    fn sleep(&self, d: Duration);
}

#[derive(Debug, Default, Clone, Copy)]
pub struct ThreadSleeper;

impl Sleeper for ThreadSleeper {
    fn sleep(&self, d: Duration) {
        std::thread::sleep(d);
    }
}

mod millis {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_millis() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_millis(u64::deserialize(d)?))
    }
}
