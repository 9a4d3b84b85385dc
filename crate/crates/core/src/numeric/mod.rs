//! Numerical building blocks: special functions, adaptive quadrature and
//! bracketing root finders.

pub mod quad;
pub mod roots;
pub mod special;

pub use quad::Quadrature;
