//! Cooperative time limits for the search loops.

use std::time::{Duration, Instant};

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("time limit exceeded")]
pub struct TimedOut;

#[derive(Clone, Copy, Debug, Default)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn none() -> Self {
        Deadline(None)
    }

    pub fn after(limit: Duration) -> Self {
        Deadline(Instant::now().checked_add(limit))
    }

    pub fn check(&self) -> Result<(), TimedOut> {
        match self.0 {
            Some(t) if Instant::now() >= t => Err(TimedOut),
            _ => Ok(()),
        }
    }
}
