//! Spectral volume kernels for `u_t + (α(x) u)_x = g` on a periodic interval.
//!
//! The crate is `no_std` (it needs `alloc`) and holds everything that is pure
//! numerics:
//!
//! * [`quadrule`]: Legendre polynomials, Gauss and left/right Radau rules.
//! * [`meshpart`]: element meshes, control-volume partitions, the coefficient `α`.
//! * [`polyfield`]: broken polynomials in a Legendre modal basis, interpolation,
//!   the transformation `T` and broken norms.
//! * [`svcore`]: the LSV/RSV semi-discrete operator with upwind interface flux.
//! * [`dgref`]: the upwind DG operator on the same broken space.
//! * [`timeint`]: classical RK4.
//! * [`metrics`]: error functionals, superconvergence points and observed orders.
//!
//! File formats, manufactured cases and the command line live in the `svkit`
//! crate.

#![no_std]

extern crate alloc;

pub mod dgref;
pub mod error;
pub mod linalg;
pub mod meshpart;
pub mod metrics;
pub mod polyfield;
pub mod quadrule;
pub mod svcore;
pub mod timeint;

pub use error::{Error, Result};

/// Largest polynomial order accepted anywhere in the crate.
pub const MAX_ORDER: usize = 12;

pub(crate) fn check_order(k: usize) -> Result<()> {
    if (1..=MAX_ORDER).contains(&k) {
        Ok(())
    } else {
        Err(Error::InvalidConfig("polynomial order must lie in 1..=12"))
    }
}
