//! Exact arithmetic for checking local and global parity identities of
//! elliptic curves over `Q` with a rational 2- or 3-isogeny.

pub mod arith;
pub mod corpus;
pub mod curves;
pub mod descent;
pub mod error;
pub mod fp;
pub mod localred;
pub mod parity;
pub mod poly;
pub mod symbols;
pub mod tatecurve;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

pub use corpus::{CorpusSpec, CurveVerdict, Family, Range, RunOptions};
pub use curves::{Invariants, Point, ThreeIsogenyData, TwoIsogenyPair, WeierstrassModel};
pub use descent::{parity_oracle, Direction, SelmerGroup, Torsor};
pub use error::{Error, Result};
pub use localred::{Kodaira, LocalReduction, ReductionClass, Splitting};
pub use parity::{GlobalReport, IsogenyContext, LocalParityReport};
pub use symbols::{Place, Sign};
pub use tatecurve::QSeries;
