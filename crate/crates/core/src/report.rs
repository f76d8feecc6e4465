use std::fmt;

/// Outcome of a batch of checks: how many were evaluated and which failed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Findings {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl Findings {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records one check; `describe` is only evaluated on failure.
    pub fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(describe());
        }
    }

    pub fn fail(&mut self, msg: impl Into<String>) {
        self.checked += 1;
        self.failures.push(msg.into());
    }

    pub fn merge(&mut self, other: Findings) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
    }

    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for Findings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            write!(f, "{} checks, all passed", self.checked)
        } else {
            write!(
                f,
                "{} of {} checks failed; first: {}",
                self.failures.len(),
                self.checked,
                self.failures[0]
            )
        }
    }
}
