use thiserror::Error;

use crate::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("weights must sum to zero (sum = {0})")]
    NonzeroWeightSum(i64),

    #[error("one-parameter subgroup is trivial")]
    TrivialSubgroup,

    #[error("weights are not nonincreasing: {0:?}")]
    NotNormalized(Vec<i64>),

    #[error("weights are not primitive: {0:?}")]
    NotPrimitive(Vec<i64>),

    #[error("exponent vector {exponents:?} does not have degree {degree}")]
    WrongDegree { exponents: Vec<u32>, degree: u32 },

    #[error("form has no nonzero terms")]
    EmptyForm,

    #[error("tuple must have at least one generator")]
    EmptyTuple,

    #[error("generators are linearly dependent: relation {}", fmt_relation(.relation))]
    DependentGenerators { relation: Vec<Rational> },

    #[error("transform is singular")]
    SingularTransform,

    #[error("invalid projective point: all coordinates vanish")]
    ZeroPoint,

    #[error("hyperplane has no nonzero coefficient")]
    ZeroHyperplane,

    #[error("no system of distinct representatives exists for the generator supports")]
    NoFeasibleAssignment,

    #[error("form is not a member of the linear system")]
    MemberNotInSystem,

    #[error("decomposition failed: {0}")]
    DecompositionFailed(DecompositionFailure),

    #[error("point does not lie on the hypersurface")]
    PointNotOnHypersurface,

    #[error("point is not a base point of the tuple")]
    NotABasePoint,

    #[error("affine weight vanishes; bound is undefined")]
    ZeroOmega,

    #[error("tuple needs more than one generator for this operation")]
    NeedsPencilOrLarger,

    #[error("sum of t = {sum_t} is outside the regime kd - n*sum(t) > 0 (kd/n = {limit})")]
    OutsideRegime { sum_t: Box<Rational>, limit: Box<Rational> },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("germ has a constant term")]
    GermNotVanishing,

    #[error("weights must be nonnegative and not all zero")]
    InvalidBlowupWeights,

    #[error("verdict list is empty")]
    EmptyVerdictList,

    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

/// Why the recursive omega decomposition could not be completed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionFailure {
    /// The set difference of supports at `step` was empty.
    EmptyDifference { step: usize },
    /// No member of the system has the requested monomial as its minimum.
    NoMemberWithMinimum { step: usize, monomial: Vec<u32> },
    /// The members were found but the weights do not add up.
    WeightMismatch { tuple_omega: i64, decomposed: i64 },
}

impl std::fmt::Display for DecompositionFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::EmptyDifference { step } => write!(f, "empty support difference at step {step}"),
            Self::NoMemberWithMinimum { step, monomial } => {
                write!(f, "no member has minimal monomial {monomial:?} (step {step})")
            }
            Self::WeightMismatch { tuple_omega, decomposed } => {
                write!(f, "tuple weight {tuple_omega} != decomposed sum {decomposed}")
            }
        }
    }
}

fn fmt_relation(relation: &[Rational]) -> String {
    let parts: Vec<String> = relation.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(", "))
}
