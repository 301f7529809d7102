//! Three-valued outcomes of decision procedures, with certificates.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Proved,
    Refuted,
    Reduced,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Obligation {
    pub statement: String,
    pub citation: Option<String>,
}

impl Obligation {
    pub fn new(statement: impl Into<String>) -> Self {
        Obligation {
            statement: statement.into(),
            citation: None,
        }
    }

    pub fn cited(statement: impl Into<String>, citation: impl Into<String>) -> Self {
        Obligation {
            statement: statement.into(),
            citation: Some(citation.into()),
        }
    }
}

/// Witness attached to a verdict. Elements are rendered in the parser syntax.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    None,
    /// A nonzero vector with `f(v) = value` (value 0 for isotropy).
    Vector {
        coords: Vec<String>,
        value: String,
    },
    /// Positive or negative definite over the reals.
    RealDefinite {
        sign: i8,
    },
    /// A completion over which the form is anisotropic or the symbols disagree.
    LocalObstruction {
        place: String,
        detail: String,
    },
    /// Exhaustive search over a finite field.
    Exhaustive {
        field: String,
        detail: String,
    },
    /// Anisotropy or non-membership detected on a residue form.
    Residue {
        variable: String,
        detail: String,
    },
    /// Obstruction after specializing variables to constants.
    Specialization {
        point: Vec<(String, String)>,
        detail: String,
    },
    /// Classification by invariants (dimension, discriminant, signature, Hasse).
    Invariants {
        detail: String,
    },
    /// Sequence of rewriting steps each justified by a named rule.
    Chain {
        steps: Vec<String>,
    },
    /// Isotropic residue form lifted by Hensel's lemma.
    ResidueLift {
        variable: String,
        detail: String,
    },
    /// A scalar satisfying the required relation.
    Scalar {
        name: String,
        value: String,
        steps: Vec<String>,
    },
    /// Per-case analysis.
    Cases {
        cases: Vec<CaseRecord>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseRecord {
    pub case: String,
    pub obligations: Vec<String>,
    pub discharged_by: Option<String>,
    pub unused: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub certificate: Certificate,
    pub obligations: Vec<Obligation>,
}

impl Verdict {
    pub fn proved(certificate: Certificate) -> Self {
        Verdict {
            status: Status::Proved,
            certificate,
            obligations: vec![],
        }
    }

    pub fn refuted(certificate: Certificate) -> Self {
        Verdict {
            status: Status::Refuted,
            certificate,
            obligations: vec![],
        }
    }

    pub fn reduced(obligations: Vec<Obligation>) -> Self {
        Verdict {
            status: Status::Reduced,
            certificate: Certificate::None,
            obligations,
        }
    }

    pub fn reduced_one(statement: impl Into<String>) -> Self {
        Verdict::reduced(vec![Obligation::new(statement)])
    }

    pub fn is_proved(&self) -> bool {
        self.status == Status::Proved
    }

    pub fn is_refuted(&self) -> bool {
        self.status == Status::Refuted
    }

    pub fn is_reduced(&self) -> bool {
        self.status == Status::Reduced
    }

    pub fn steps(steps: Vec<String>) -> Certificate {
        Certificate::Chain { steps }
    }
}
