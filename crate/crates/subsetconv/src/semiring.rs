//! The tropical semirings the convolutions range over.

use crate::value::{ExtValue, Finite, Infinity, NegInfinity, Scalar};

/// (⊕, ⊗) pair of a tropical subset convolution:
/// (f ⊛ g)(S) = ⊕_{T ⊆ S} f(T) ⊗ g(S \ T).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TropicalOp {
    /// ⊕ = min, ⊗ = +; infeasible entries are +∞.
    MinSum,
    /// ⊕ = max, ⊗ = +; infeasible entries are −∞.
    MaxSum,
    /// ⊕ = min, ⊗ = max.
    MinMax,
}

impl TropicalOp {
    /// Identity of ⊕ (the "no summand yet" value).
    pub fn plus_identity<T: Scalar>(self) -> ExtValue<T> {
        match self {
            TropicalOp::MinSum | TropicalOp::MinMax => Infinity,
            TropicalOp::MaxSum => NegInfinity,
        }
    }

    pub fn plus<T: Scalar>(self, a: ExtValue<T>, b: ExtValue<T>) -> ExtValue<T> {
        match self {
            TropicalOp::MinSum | TropicalOp::MinMax => a.min(b),
            TropicalOp::MaxSum => a.max(b),
        }
    }

    pub fn times<T: Scalar>(self, a: ExtValue<T>, b: ExtValue<T>) -> ExtValue<T> {
        match self {
            TropicalOp::MinSum | TropicalOp::MaxSum => a.sat_add(b),
            TropicalOp::MinMax => a.max(b),
        }
    }

    /// The value an input table must not contain (it would act as −∞·∞).
    pub fn forbidden<T: Scalar>(self) -> ExtValue<T> {
        match self {
            TropicalOp::MinSum | TropicalOp::MinMax => NegInfinity,
            TropicalOp::MaxSum => Infinity,
        }
    }
}

/// True if `v` is legal as an input entry under `op`: finite and nonnegative,
/// or the op's own infeasibility sentinel.
pub fn valid_input<T: Scalar>(op: TropicalOp, v: &ExtValue<T>) -> bool {
    match v {
        Finite(x) => *x >= T::zero(),
        other => *other != op.forbidden(),
    }
}
