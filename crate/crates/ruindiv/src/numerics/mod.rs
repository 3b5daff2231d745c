//! Shared numerical routines: root bracketing and bisection, golden-section
//! maximization, adaptive quadrature, Gauss-Laguerre rules and the special
//! functions used by the closed-form scale functions.

mod gauss_laguerre;
mod golden;
mod quad;
mod roots;
mod special;

pub use gauss_laguerre::GaussLaguerre;
pub use golden::golden_section_max;
pub use quad::adaptive_simpson;
pub use roots::{bisect_decreasing, bisect_increasing, expand_upper};
pub use special::{ln_gamma, mittag_leffler, recip_gamma};
