//! Check records shared by every verification routine.

use std::fmt;

use crate::groups::{GroupElement, GroupModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Concrete group elements (with printable labels) that exhibit a failure,
/// together with the numbers that were compared.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub elements: Vec<GroupElement>,
    pub labels: Vec<String>,
    pub values: Vec<f64>,
}

impl Witness {
    pub fn new(group: &GroupModel, elements: Vec<GroupElement>, values: Vec<f64>) -> Self {
        let labels = elements.iter().map(|x| group.label(x)).collect();
        Witness {
            elements,
            labels,
            values,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub witness: Option<Witness>,
    /// Named numeric values (sups, residuals, bounds).
    pub values: Vec<(String, f64)>,
    pub detail: String,
    pub safe_core_radius: Option<u32>,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        Check {
            name: name.into(),
            status,
            witness: None,
            values: Vec::new(),
            detail: String::new(),
            safe_core_radius: None,
        }
    }

    pub fn pass(name: impl Into<String>) -> Self {
        Self::new(name, Status::Pass)
    }

    pub fn with_witness(mut self, witness: Option<Witness>) -> Self {
        if witness.is_some() {
            self.witness = witness;
        }
        self
    }

    pub fn with_value(mut self, key: impl Into<String>, value: f64) -> Self {
        self.values.push((key.into(), value));
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    pub fn with_safe_core(mut self, radius: Option<u32>) -> Self {
        self.safe_core_radius = radius;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn value(&self, key: &str) -> Option<f64> {
        self.values.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }
}

/// Looks up a check by name.
pub fn find<'a>(checks: &'a [Check], name: &str) -> Option<&'a Check> {
    checks.iter().find(|c| c.name == name)
}

/// Absolute comparison tolerance: exact for integer data.
pub fn tolerance(integer_valued: bool) -> f64 {
    if integer_valued {
        0.0
    } else {
        1e-12
    }
}
