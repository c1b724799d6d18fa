//! Per-cell achievable rates of half-duplex and full-duplex cellular
//! networks on the extended Wyner model, with single-cell processing or a
//! cloud RAN behind finite-capacity fronthaul links.
//!
//! - [`model`]: parameters, result types, `C(s)` and `q(a, b, c)`.
//! - [`spectral`]: channel response, quadrature, precoders.
//! - [`rates`]: the six scheme calculators and the power search.
//! - [`oracle`]: finite-network and exhaustive-grid cross-checks.
//! - [`cli`]: sweep configuration, CSV and SVG output.

pub mod cli;
pub mod error;
pub mod model;
pub mod oracle;
pub mod rates;
pub mod spectral;

pub use error::{Error, Result};
pub use model::{
    db_to_linear, q_clamp, shannon_c, Diagnostics, PowerAllocation, RateResult, SchemeId,
    SystemParams,
};
pub use rates::{CranSetup, PowerSearch, SicMode};
pub use spectral::{Precoder, Quadrature};
