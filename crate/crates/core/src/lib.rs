pub mod error;
pub mod exterior;
pub mod field;
pub mod foliation;
pub mod godbillon;
pub mod locus;
pub mod poisson;

pub use error::{Error, Result};
pub use exterior::{Chart, Form, MultiVector};
pub use field::{Polynomial, RatFunc, Rational};
