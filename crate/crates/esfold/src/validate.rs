//! Validation reports for the three structure kinds.
//!
//! Validators list every violated clause together with witnessing events,
//! so a report can both gate construction and drive diagnostics.

use std::fmt;

/// One violated axiom with witnesses (event names).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Causality is missing a reflexive pair.
    OrderNotReflexive { event: String },
    /// Two distinct events below each other.
    OrderNotAntisymmetric { a: String, b: String },
    /// a <= b <= c but not a <= c.
    OrderNotTransitive { a: String, b: String, c: String },
    /// Conflict holds of an event with itself.
    ConflictReflexive { event: String },
    /// a # b without b # a.
    ConflictNotSymmetric { a: String, b: String },
    /// a # b <= c but not a # c.
    ConflictNotHereditary { a: String, b: String, c: String },
    /// a < b without a matching weak-precedence arrow.
    CausalityNotInAconflict { a: String, b: String },
    /// a ↗ b < c but not a ↗ c.
    AconflictNotHereditary { a: String, b: String, c: String },
    /// The arrows below an event form a cycle.
    AconflictCyclicBelow { event: String },
    /// Arrows below a pair are cyclic but the direct arrow is missing.
    AconflictNotSaturated { a: String, b: String },
    /// Flow holds of an event with itself.
    FlowReflexive { event: String },
    /// A syntactically consistent pair that can never occur together.
    NotFaithful { a: String, b: String },
    /// An event that occurs in no configuration.
    DeadEvent { event: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            OrderNotReflexive { event } => write!(f, "causality not reflexive at {event}"),
            OrderNotAntisymmetric { a, b } => {
                write!(f, "causality not antisymmetric: {a} <= {b} and {b} <= {a}")
            }
            OrderNotTransitive { a, b, c } => {
                write!(f, "causality not transitive: {a} <= {b} <= {c} but not {a} <= {c}")
            }
            ConflictReflexive { event } => write!(f, "conflict is reflexive at {event}"),
            ConflictNotSymmetric { a, b } => {
                write!(f, "conflict not symmetric: {a} # {b} but not {b} # {a}")
            }
            ConflictNotHereditary { a, b, c } => {
                write!(f, "conflict not hereditary: {a} # {b} <= {c} but not {a} # {c}")
            }
            CausalityNotInAconflict { a, b } => {
                write!(f, "{a} < {b} without the matching conflict arrow {a} -> {b}")
            }
            AconflictNotHereditary { a, b, c } => {
                write!(f, "conflict arrows not hereditary: {a} -> {b} < {c} but no {a} -> {c}")
            }
            AconflictCyclicBelow { event } => {
                write!(f, "conflict arrows are cyclic below {event}")
            }
            AconflictNotSaturated { a, b } => write!(
                f,
                "conflict arrows cyclic below {{{a},{b}}} but {a} -> {b} is missing"
            ),
            FlowReflexive { event } => write!(f, "flow is reflexive at {event}"),
            NotFaithful { a, b } => write!(
                f,
                "{a} and {b} are never jointly executable but carry no conflict"
            ),
            DeadEvent { event } => write!(f, "{event} occurs in no configuration"),
        }
    }
}

/// Outcome of a validation pass; empty means well formed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            write!(f, "valid")
        } else {
            for (i, v) in self.violations.iter().enumerate() {
                if i > 0 {
                    writeln!(f)?;
                }
                write!(f, "{v}")?;
            }
            Ok(())
        }
    }
}
