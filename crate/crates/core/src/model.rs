//! Domain types of the extended Wyner model and the two scalar helpers
//! shared by every rate calculator.
//!
//! Powers are linear and normalized to unit noise power. Gains are
//! amplitudes; the corresponding power gains are their squares. Fronthaul
//! capacities are in bits/s/Hz of the bandwidth shared by uplink and
//! downlink.

use std::fmt;
use std::sync::Once;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Channel gains, power budgets and fronthaul capacities of one
/// (cell-symmetric) Wyner network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Inter-cell gain of the direct channel, `h_k = d_k + alpha (d_{k-1} + d_{k+1})`.
    pub alpha: f64,
    /// Inter-cell downlink-to-uplink gain.
    pub beta_du: f64,
    /// Inter-cell uplink-to-downlink gain.
    pub beta_ud: f64,
    /// Self-interference gain. Ideal cancellation is assumed, so no rate
    /// depends on it.
    pub gamma_du: f64,
    /// Intra-cell uplink-to-downlink gain.
    pub gamma_ud: f64,
    pub p_u_max: f64,
    pub p_d_max: f64,
    pub c_u: f64,
    pub c_d: f64,
}

static GAMMA_DU_WARNING: Once = Once::new();

impl SystemParams {
    /// Interference-free network with the given budgets and fronthaul.
    pub fn interference_free(alpha: f64, p_max: f64, c: f64) -> Self {
        SystemParams {
            alpha,
            beta_du: 0.0,
            beta_ud: 0.0,
            gamma_du: 0.0,
            gamma_ud: 0.0,
            p_u_max: p_max,
            p_d_max: p_max,
            c_u: c,
            c_d: c,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("alpha", self.alpha),
            ("beta_du", self.beta_du),
            ("beta_ud", self.beta_ud),
            ("gamma_du", self.gamma_du),
            ("gamma_ud", self.gamma_ud),
            ("p_u_max", self.p_u_max),
            ("p_d_max", self.p_d_max),
            ("c_u", self.c_u),
            ("c_d", self.c_d),
        ];
        for (what, value) in fields {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::Domain { what, value });
            }
        }
        if self.gamma_du != 0.0 {
            GAMMA_DU_WARNING.call_once(|| {
                log::warn!(
                    "gamma_du = {} has no effect: self-interference cancellation is ideal",
                    self.gamma_du
                )
            });
        }
        Ok(())
    }

    /// Sum of the two neighbouring-cell power gains, `2 alpha^2`.
    #[inline]
    pub(crate) fn intercell(&self) -> f64 {
        2.0 * self.alpha * self.alpha
    }
}

/// Operating transmit powers of the uplink MSs and downlink RUs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerAllocation {
    pub p_u: f64,
    pub p_d: f64,
}

impl PowerAllocation {
    pub fn new(params: &SystemParams, p_u: f64, p_d: f64) -> Result<Self> {
        if !(0.0..=params.p_u_max).contains(&p_u) {
            return Err(Error::Domain {
                what: "p_u",
                value: p_u,
            });
        }
        if !(0.0..=params.p_d_max).contains(&p_d) {
            return Err(Error::Domain {
                what: "p_d",
                value: p_d,
            });
        }
        Ok(PowerAllocation { p_u, p_d })
    }

    pub fn full(params: &SystemParams) -> Self {
        PowerAllocation {
            p_u: params.p_u_max,
            p_d: params.p_d_max,
        }
    }
}

/// Scalars reported next to the rates. Fields that a scheme does not
/// produce stay `None`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    pub sigma_u_sq: Option<f64>,
    pub sigma_d_sq: Option<f64>,
    pub p_s: Option<f64>,
    /// Uplink time fraction of half-duplex schemes.
    pub f_star: Option<f64>,
    pub p_u_star: Option<f64>,
    pub p_d_star: Option<f64>,
}

impl Diagnostics {
    /// Fills every `None` field of `self` from `other`.
    pub fn merge(self, other: Diagnostics) -> Diagnostics {
        Diagnostics {
            sigma_u_sq: self.sigma_u_sq.or(other.sigma_u_sq),
            sigma_d_sq: self.sigma_d_sq.or(other.sigma_d_sq),
            p_s: self.p_s.or(other.p_s),
            f_star: self.f_star.or(other.f_star),
            p_u_star: self.p_u_star.or(other.p_u_star),
            p_d_star: self.p_d_star.or(other.p_d_star),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateResult {
    pub r_u: f64,
    pub r_d: f64,
    pub r_eq: f64,
    pub diagnostics: Diagnostics,
}

/// The six duplexing/processing schemes. Declaration order is the row
/// order of sweep tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeId {
    HdScp,
    HdCran,
    FdScp,
    FdScpSic,
    FdCran,
    FdCranSic,
}

impl SchemeId {
    pub const ALL: [SchemeId; 6] = [
        SchemeId::HdScp,
        SchemeId::HdCran,
        SchemeId::FdScp,
        SchemeId::FdScpSic,
        SchemeId::FdCran,
        SchemeId::FdCranSic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::HdScp => "hd_scp",
            SchemeId::HdCran => "hd_cran",
            SchemeId::FdScp => "fd_scp",
            SchemeId::FdScpSic => "fd_scp_sic",
            SchemeId::FdCran => "fd_cran",
            SchemeId::FdCranSic => "fd_cran_sic",
        }
    }

    pub fn from_name(name: &str) -> Option<SchemeId> {
        SchemeId::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn is_full_duplex(self) -> bool {
        !matches!(self, SchemeId::HdScp | SchemeId::HdCran)
    }

    pub fn is_cran(self) -> bool {
        matches!(
            self,
            SchemeId::HdCran | SchemeId::FdCran | SchemeId::FdCranSic
        )
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `log2(1 + s)`, the Gaussian channel capacity at SINR `s`.
pub fn shannon_c(s: f64) -> Result<f64> {
    if !s.is_finite() || s < 0.0 {
        return Err(Error::Domain {
            what: "SINR",
            value: s,
        });
    }
    Ok(capacity(s))
}

/// Unchecked [`shannon_c`] for SINRs built from nonnegative terms.
#[inline]
pub(crate) fn capacity(s: f64) -> f64 {
    (1.0 + s).log2()
}

/// `min(a, max(b, c))`: the downlink rate left by a two-user MAC region
/// when the interfering uplink message is decoded or treated as noise.
#[inline]
pub fn q_clamp(a: f64, b: f64, c: f64) -> f64 {
    a.min(b.max(c))
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
