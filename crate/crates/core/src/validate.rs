//! Collecting configuration checks so that every violation is reported at once.

use crate::error::{Error, Result, Violation};

pub(crate) const SHARE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Default)]
pub struct Validator {
    violations: Vec<Violation>,
}

impl Validator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            path: path.into(),
            message: message.into(),
        });
    }

    pub fn ensure(&mut self, ok: bool, path: &str, message: impl FnOnce() -> String) {
        if !ok {
            self.push(path, message());
        }
    }

    pub fn finite(&mut self, path: &str, value: f64) -> bool {
        if value.is_finite() {
            true
        } else {
            self.push(path, format!("must be finite, got {value}"));
            false
        }
    }

    pub fn range(&mut self, path: &str, value: f64, lo: f64, hi: f64) {
        if self.finite(path, value) && !(lo..=hi).contains(&value) {
            self.push(path, format!("must lie in [{lo}, {hi}], got {value}"));
        }
    }

    pub fn unit(&mut self, path: &str, value: f64) {
        self.range(path, value, 0.0, 1.0);
    }

    pub fn positive(&mut self, path: &str, value: f64) {
        if self.finite(path, value) && value <= 0.0 {
            self.push(path, format!("must be strictly positive, got {value}"));
        }
    }

    pub fn non_negative(&mut self, path: &str, value: f64) {
        if self.finite(path, value) && value < 0.0 {
            self.push(path, format!("must be non-negative, got {value}"));
        }
    }

    /// Category shares: non-empty, each in [0, 1], summing to 1 within 1e-9.
    pub fn shares(&mut self, path: &str, shares: &[f64]) {
        if shares.is_empty() {
            self.push(path, "share list must not be empty");
            return;
        }
        let mut ok = true;
        for (k, &s) in shares.iter().enumerate() {
            if !s.is_finite() || !(0.0..=1.0).contains(&s) {
                self.push(format!("{path}[{k}]"), format!("share must lie in [0, 1], got {s}"));
                ok = false;
            }
        }
        let total: f64 = shares.iter().sum();
        if ok && (total - 1.0).abs() > SHARE_TOLERANCE {
            self.push(path, format!("shares must sum to 1, got {total}"));
        }
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_violations(self) -> Vec<Violation> {
        self.violations
    }

    pub fn finish(self) -> Result<()> {
        if self.violations.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(self.violations))
        }
    }
}

/// Configuration sections that can check their own invariants.
pub trait Validate {
    fn validate_into(&self, path: &str, v: &mut Validator);

    fn validate(&self, path: &str) -> Result<()> {
        let mut v = Validator::new();
        self.validate_into(path, &mut v);
        v.finish()
    }
}

pub(crate) fn join(path: &str, field: &str) -> String {
    if path.is_empty() {
        field.to_string()
    } else {
        format!("{path}.{field}")
    }
}
