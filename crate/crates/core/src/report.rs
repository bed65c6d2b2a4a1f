//! Law-check reports.
//!
//! Every validator in this crate returns a [`Report`]: an order-independent
//! list of violations, each naming the law that failed, the indices at which
//! it failed, and a witness generator when one exists.

use std::fmt;

/// A single failed law instance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    /// Short law name, e.g. `"C2"`, `"X3"`, `"associativity"`.
    pub law: String,
    /// Indices the law was instantiated at (degree first, then direction
    /// indices, then face signs where relevant).
    pub indices: Vec<usize>,
    /// Generator of the domain on which the two sides differ, if known.
    pub witness: Option<String>,
}

impl Violation {
    pub fn new(law: impl Into<String>, indices: Vec<usize>, witness: Option<String>) -> Self {
        Violation {
            law: law.into(),
            indices,
            witness,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {:?}", self.law, self.indices)?;
        if let Some(w) = &self.witness {
            write!(f, " (witness {w})")?;
        }
        Ok(())
    }
}

/// Aggregated validation outcome. Violations are kept sorted by law name and
/// indices so that concurrent or reordered checks produce identical reports.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    violations: Vec<Violation>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    pub fn record(
        &mut self,
        law: impl Into<String>,
        indices: Vec<usize>,
        witness: Option<String>,
    ) {
        self.push(Violation::new(law, indices, witness));
    }

    /// Merge another report into this one.
    pub fn absorb(&mut self, other: Report) {
        self.violations.extend(other.violations);
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// Violations in canonical order.
    pub fn violations(&self) -> Vec<Violation> {
        let mut v = self.violations.clone();
        v.sort();
        v
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_clean() {
            return write!(f, "ok");
        }
        for v in self.violations() {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}
