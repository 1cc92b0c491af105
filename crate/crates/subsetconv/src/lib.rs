//! Exact and (1±ε)-approximate subset convolutions over tropical semirings.

pub mod approx;
pub mod apps;
pub mod bench;
pub mod equivalence;
pub mod error;
pub mod gen;
pub mod io;
pub mod float;
pub mod lattice;
pub mod minmax;
pub mod modular;
pub mod poly;
pub mod semiring;
pub mod setfn;
pub mod value;

pub use error::{Error, Result};
pub use setfn::SetFunction;
pub use value::{Epsilon, ExtValue, Rat};

/// Set function with integer entries extended by ±∞.
pub type IntValue = ExtValue<u64>;
pub type IntSetFunction = SetFunction<IntValue>;

/// Set function with exact rational entries extended by ±∞.
pub type RatValue = ExtValue<Rat>;
pub type RatSetFunction = SetFunction<RatValue>;
