//! Special functions, adaptive quadrature and reproducible random streams.

mod quadrature;
mod rng;
mod roots;
mod special;
mod stats;

pub use quadrature::{
    gauss_legendre, integrate_1d, integrate_1d_sqrt_start, integrate_2d, integrate_semi_infinite, QuadResult,
    QuadratureSpec, Rect,
};
pub use rng::{RngStream, StreamRng};
pub use roots::first_crossing;
pub use special::{
    bessel_k0, catalan, erfc, gamma, hyp2f1, incomplete_beta, ln_gamma, recip_gamma, sine_integral, EULER_GAMMA,
};
pub(crate) use stats::Guard;
pub use stats::{MeanEstimate, TabulatedCdf};
