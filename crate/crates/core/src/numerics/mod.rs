//! Generic numeric building blocks: bracketed root finding, adaptive
//! quadrature, and least-squares slope fitting.

pub mod fit;
pub mod quad;
pub mod roots;

pub use fit::{fit_loglog_slope, LineFit};
pub use quad::integrate;
pub use roots::{bisect, newton_polish};
