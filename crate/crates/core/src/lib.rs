pub mod eigensolve;
pub mod error;
pub mod hermite;
pub mod linalg;
pub mod mixfit;
pub mod moments;
pub mod poly;
pub mod rng;
pub mod scalar;
pub mod special;

pub use error::{Error, Result};

pub type Rational = num_rational::BigRational;
pub type QPoly = poly::MultiPoly<Rational>;
pub type Matrix64 = linalg::Matrix<f64>;
pub use num_complex::Complex64;
