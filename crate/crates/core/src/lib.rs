//! Exact arithmetic for a family of hyperquadratic continued fractions in
//! the field of power series in `1/T` over 𝔽_p.
//!
//! * [`algebra`]: 𝔽_p and 𝔽_p[T].
//! * [`series`]: truncated Laurent series with tracked precision.
//! * [`cf`]: continuants, convergents, rational and series conversions.
//! * [`mkaouar`]: partial quotients of a root of an algebraic equation.
//! * [`construction`]: the pattern, its equations, Fibonacci identities.
//! * [`analytics`]: degree positions, partial sums, irrationality measure.

pub mod algebra;
pub mod analytics;
pub mod cf;
pub mod construction;
pub mod error;
pub mod mkaouar;
pub mod series;

pub use algebra::{FieldElement, Poly, PrimeField};
pub use cf::{ConvergentPair, PartialQuotients};
pub use construction::{PatternSpec, RDefinition, Triple};
pub use error::{Error, Result};
pub use mkaouar::{BiPoly, Expansion};
pub use series::LaurentSeries;
