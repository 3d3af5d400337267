use std::fmt;

/// One failed law, with the ids (elements, arrows, simplices, ...) that
/// witness the failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: &'static str,
    pub at: Vec<usize>,
    pub message: String,
}

/// Result of a validator: empty iff every checked law holds.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, rule: &'static str, at: Vec<usize>, message: impl Into<String>) {
        self.violations.push(Violation {
            rule,
            at,
            message: message.into(),
        });
    }

    pub fn extend(&mut self, other: Report) {
        self.violations.extend(other.violations);
    }

    /// True if some violation was raised by `rule`.
    pub fn has(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    pub fn into_result<T>(self, what: &'static str, value: T) -> crate::Result<T> {
        if self.is_ok() {
            Ok(value)
        } else {
            Err(crate::Error::invalid(what, self))
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        write!(f, "{} violation(s)", self.violations.len())?;
        for v in self.violations.iter().take(5) {
            write!(f, "; [{}] {}", v.rule, v.message)?;
        }
        if self.violations.len() > 5 {
            write!(f, "; ...")?;
        }
        Ok(())
    }
}
