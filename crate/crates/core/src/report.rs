//! Pass/fail reports with counterexample witnesses, shared by every audit.

use serde::{Deserialize, Serialize};

/// A point where the two sides of a checked relation disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub element: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub audit: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// Witnesses kept per check; further failures are only counted as failing.
const MAX_WITNESSES: usize = 8;

impl AuditReport {
    pub fn new(audit: impl Into<String>) -> Self {
        AuditReport {
            audit: audit.into(),
            passed: true,
            checks: Vec::new(),
        }
    }

    /// Starts a check that is filled by [`CheckBuilder::fail`] calls.
    pub fn check(&mut self, name: impl Into<String>) -> CheckBuilder<'_> {
        self.checks.push(Check {
            name: name.into(),
            passed: true,
            witnesses: Vec::new(),
        });
        CheckBuilder { report: self }
    }

    /// Records a check with a single boolean outcome.
    pub fn assert(&mut self, name: impl Into<String>, ok: bool, describe: impl FnOnce() -> Witness) {
        let mut c = self.check(name);
        if !ok {
            c.fail(describe());
        }
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub struct CheckBuilder<'a> {
    report: &'a mut AuditReport,
}

impl CheckBuilder<'_> {
    pub fn fail(&mut self, witness: Witness) {
        self.report.passed = false;
        let check = self.report.checks.last_mut().expect("builder owns a check");
        check.passed = false;
        if check.witnesses.len() < MAX_WITNESSES {
            check.witnesses.push(witness);
        }
    }

    /// Fails with a witness when `ok` is false.
    pub fn expect(&mut self, ok: bool, element: impl Into<String>, lhs: impl Into<String>, rhs: impl Into<String>) {
        if !ok {
            self.fail(Witness {
                element: element.into(),
                lhs: lhs.into(),
                rhs: rhs.into(),
            });
        }
    }
}
