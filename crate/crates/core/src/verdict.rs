//! Three-valued, truncation-aware certification results.

use serde::{Deserialize, Serialize};

use crate::scalar::{self, Scalar};
use crate::series::{MultiIndex, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    CertifiedTrue,
    CertifiedFalse,
    UnknownAtTruncation,
}

/// Evidence backing a verdict; always re-checkable from the stated data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    None,
    /// A coefficient of the named series at `index`.
    Coefficient {
        series: String,
        index: Vec<u32>,
        value: String,
    },
    /// A nonvanishing minor with one of its nonzero coefficients.
    Minor {
        rows: Vec<usize>,
        cols: Vec<usize>,
        index: Vec<u32>,
        value: String,
    },
    /// A named scalar quantity.
    Value {
        name: String,
        value: String,
    },
    Note {
        text: String,
    },
}

impl Witness {
    pub fn coefficient(series: &str, index: &MultiIndex, value: &Scalar) -> Self {
        Witness::Coefficient {
            series: series.to_string(),
            index: index.exponents().to_vec(),
            value: scalar::format(value),
        }
    }

    /// The leading coefficient of `s`, if any.
    pub fn leading(series: &str, s: &Series) -> Self {
        match s.leading_term() {
            Some((k, v)) => Self::coefficient(series, &k, &v),
            None => Witness::None,
        }
    }

    pub fn value(name: &str, value: &Scalar) -> Self {
        Witness::Value {
            name: name.to_string(),
            value: scalar::format(value),
        }
    }

    pub fn note(text: impl Into<String>) -> Self {
        Witness::Note { text: text.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub witness: Witness,
    pub degree_used: u32,
}

impl Verdict {
    pub fn new(status: Status, witness: Witness, degree_used: u32) -> Self {
        Verdict {
            status,
            witness,
            degree_used,
        }
    }

    pub fn certified_true(witness: Witness, degree_used: u32) -> Self {
        Self::new(Status::CertifiedTrue, witness, degree_used)
    }

    pub fn certified_false(witness: Witness, degree_used: u32) -> Self {
        Self::new(Status::CertifiedFalse, witness, degree_used)
    }

    pub fn unknown(witness: Witness, degree_used: u32) -> Self {
        Self::new(Status::UnknownAtTruncation, witness, degree_used)
    }

    pub fn is_true(&self) -> bool {
        self.status == Status::CertifiedTrue
    }

    pub fn is_false(&self) -> bool {
        self.status == Status::CertifiedFalse
    }

    pub fn is_certified(&self) -> bool {
        self.status != Status::UnknownAtTruncation
    }

    /// Logical negation; unknown stays unknown.
    pub fn negate(mut self) -> Self {
        self.status = match self.status {
            Status::CertifiedTrue => Status::CertifiedFalse,
            Status::CertifiedFalse => Status::CertifiedTrue,
            Status::UnknownAtTruncation => Status::UnknownAtTruncation,
        };
        self
    }
}
