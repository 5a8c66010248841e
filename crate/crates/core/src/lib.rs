pub mod aq;
pub mod bq;
pub mod braid;
pub mod cartan;
pub mod dq;
pub mod error;
pub mod expr;
pub mod linalg;
pub mod modules;
pub mod pairing;
pub mod scalar;
pub mod suite;
pub mod uq;

pub use cartan::{CartanDatum, CartanType, RootVec, Weight};
pub use error::{Error, Result};
pub use scalar::{QExp, QField, RatFunc};

/// The exact base field.
pub type Scalar = RatFunc;
pub type Algebra = uq::Uq<Scalar>;
pub type Element = uq::UqElement<Scalar>;
