//! Brute-force cross-checks that share no numerics with the rate
//! calculators: finite-`n` circular Wyner networks evaluated through
//! explicit eigenvalues or dense log-determinants, time-domain precoder
//! taps, and single-resolution exhaustive power grids.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::{PowerAllocation, SystemParams};
use crate::rates::{fd_cran_rates, fd_scp_rates, CranSetup, SicMode};

pub const DEFAULT_CELLS: usize = 512;
pub const DEFAULT_RESOLUTION: usize = 512;

/// Symmetric circulant matrix given by its first row; row `k` is row 0
/// rotated right by `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantChannel {
    first_row: Vec<f64>,
}

impl CirculantChannel {
    /// `n` cells on a ring, each hearing itself with gain 1 and its two
    /// neighbours with gain `alpha`.
    pub fn wyner(alpha: f64, n: usize) -> Result<Self> {
        Self::from_taps(&[(0, 1.0), (1, alpha), (-1, alpha)], n)
    }

    /// Places `(offset, value)` taps on a ring of `n` cells; taps that wrap
    /// onto the same position add up.
    pub fn from_taps(taps: &[(i64, f64)], n: usize) -> Result<Self> {
        if n < 8 {
            return Err(Error::Domain {
                what: "cell count",
                value: n as f64,
            });
        }
        let mut first_row = vec![0.0; n];
        for &(k, v) in taps {
            first_row[k.rem_euclid(n as i64) as usize] += v;
        }
        Ok(CirculantChannel { first_row })
    }

    pub fn n(&self) -> usize {
        self.first_row.len()
    }

    pub fn first_row(&self) -> &[f64] {
        &self.first_row
    }

    /// Eigenvalues by direct DFT of the first row (real for a symmetric row).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.n();
        (0..n)
            .map(|j| {
                self.first_row
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| c * (2.0 * PI * ((j * k) % n) as f64 / n as f64).cos())
                    .sum()
            })
            .collect()
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let n = self.n();
        DMatrix::from_fn(n, n, |r, c| self.first_row[(c + n - r) % n])
    }
}

/// `(1/n) log2 det(I + s H H^T)` through the circulant eigenvalues.
pub fn circulant_mean_capacity(channel: &CirculantChannel, snr: f64) -> f64 {
    let n = channel.n() as f64;
    channel
        .eigenvalues()
        .iter()
        .map(|l| (1.0 + snr * l * l).log2())
        .sum::<f64>()
        / n
}

/// Same quantity through a dense Cholesky factorization.
pub fn dense_mean_capacity(channel: &CirculantChannel, snr: f64) -> f64 {
    let h = channel.dense();
    let n = channel.n();
    let m = DMatrix::<f64>::identity(n, n) + (&h * h.transpose()) * snr;
    (log2_det_spd(m) / n as f64).max(0.0)
}

fn log2_det_spd(m: DMatrix<f64>) -> f64 {
    let chol = m.cholesky().expect("I + s H H^T is positive definite");
    2.0 * chol.l().diagonal().iter().map(|d| d.log2()).sum::<f64>()
}

/// Per-cell HD C-RAN uplink rate of an `n`-cell ring given the compression
/// noise `sigma_u_sq`.
pub fn circulant_uplink_rate(alpha: f64, p_u: f64, sigma_u_sq: f64, n: usize) -> Result<f64> {
    let channel = CirculantChannel::wyner(alpha, n)?;
    Ok(circulant_mean_capacity(&channel, p_u / (1.0 + sigma_u_sq)))
}

/// Time-domain taps `g_k`, `|k| <= half_span`, of the unit-energy ZF filter,
/// obtained by inverse DFT of `1/H(f)` sampled at `points` frequencies.
/// Returned as `(k, g_k)` pairs.
pub fn zf_taps(alpha: f64, points: usize, half_span: usize) -> Vec<(i64, f64)> {
    let inverse: Vec<f64> = (0..points)
        .map(|j| 1.0 / (1.0 + 2.0 * alpha * (2.0 * PI * j as f64 / points as f64).cos()))
        .collect();
    let tap = |k: i64| -> f64 {
        inverse
            .iter()
            .enumerate()
            .map(|(j, v)| {
                v * (2.0 * PI * ((j as i64 * k).rem_euclid(points as i64)) as f64 / points as f64)
                    .cos()
            })
            .sum::<f64>()
            / points as f64
    };
    let span = half_span as i64;
    let raw: Vec<(i64, f64)> = (-span..=span).map(|k| (k, tap(k))).collect();
    let energy: f64 = raw.iter().map(|(_, g)| g * g).sum();
    let scale = energy.sqrt().recip();
    raw.into_iter().map(|(k, g)| (k, g * scale)).collect()
}

/// `sum_k g_k g_{k - tau}` over a finite tap list.
pub fn tap_autocorrelation(taps: &[(i64, f64)], tau: i64) -> f64 {
    taps.iter()
        .filter_map(|&(k, g)| {
            taps.iter()
                .find(|&&(j, _)| j == k - tau)
                .map(|&(_, h)| g * h)
        })
        .sum()
}

/// Result of the finite-network FD C-RAN uplink oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UplinkOracle {
    pub rate: f64,
    pub sigma_u_sq: f64,
}

/// How the oracle models the downlink transmit covariance seen through the
/// D-U interference channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DownlinkCovariance {
    /// `x_d = G s + q_d` with white compression noise `q_d`.
    Exact,
    /// Whole transmit power `p_d` shaped by the precoder, `p_d G G^T`, the
    /// covariance the closed-form compression noise assumes.
    Shaped,
}

/// FD C-RAN uplink on an `n`-cell ring with a ZF downlink, from the raw
/// signal model. Each RU receives `H x_u + B x_d + z`; the compression
/// noise follows from the per-RU received power, and the CU subtracts the
/// known `B x_d` before joint decoding.
pub fn fd_cran_uplink_oracle(
    params: &SystemParams,
    powers: PowerAllocation,
    n: usize,
    covariance: DownlinkCovariance,
) -> Result<UplinkOracle> {
    let h = CirculantChannel::wyner(params.alpha, n)?.dense();
    let b = CirculantChannel::from_taps(&[(1, params.beta_du), (-1, params.beta_du)], n)?.dense();
    let g =
        CirculantChannel::from_taps(&zf_taps(params.alpha, 4096, (n / 2 - 1).min(96)), n)?.dense();

    let PowerAllocation { p_u, p_d } = powers;
    let residual = (-params.c_d).exp2();
    let p_s = p_d * (1.0 - residual);
    let sigma_d_sq = p_d * residual;

    let eye = DMatrix::<f64>::identity(n, n);
    let tx_cov = match covariance {
        DownlinkCovariance::Exact => (&g * g.transpose()) * p_s + &eye * sigma_d_sq,
        DownlinkCovariance::Shaped => (&g * g.transpose()) * p_d,
    };
    let rx_cov = (&h * h.transpose()) * p_u + &b * tx_cov * b.transpose() + &eye;
    let rx_power = rx_cov.diagonal().mean();

    if params.c_u == 0.0 {
        return Ok(UplinkOracle {
            rate: 0.0,
            sigma_u_sq: f64::INFINITY,
        });
    }
    let sigma_u_sq = rx_power / (params.c_u.exp2() - 1.0);
    let after_cancel = &eye + (&h * h.transpose()) * (p_u / (1.0 + sigma_u_sq));
    Ok(UplinkOracle {
        rate: log2_det_spd(after_cancel) / n as f64,
        sigma_u_sq,
    })
}

/// Max-min value and argmax of `objective` on one uniform
/// `resolution x resolution` grid, no refinement. Ties within `1e-9` go to
/// the lexicographically smallest `(p_u, p_d)`.
pub fn exhaustive_max_min(
    p_u_max: f64,
    p_d_max: f64,
    resolution: usize,
    objective: impl Fn(f64, f64) -> f64,
) -> Result<(f64, f64, f64)> {
    if resolution < 64 {
        return Err(Error::Domain {
            what: "oracle grid resolution",
            value: resolution as f64,
        });
    }
    let axis = |max: f64, i: usize| {
        if i + 1 == resolution {
            max
        } else {
            max * i as f64 / (resolution - 1) as f64
        }
    };
    let mut values = Vec::with_capacity(resolution * resolution);
    for i in 0..resolution {
        for j in 0..resolution {
            let (p_u, p_d) = (axis(p_u_max, i), axis(p_d_max, j));
            values.push((objective(p_u, p_d), p_u, p_d));
        }
    }
    let best = values.iter().map(|v| v.0).fold(f64::NEG_INFINITY, f64::max);
    let chosen = values
        .into_iter()
        .find(|v| v.0 >= best - 1e-9)
        .expect("grid is non-empty");
    Ok(chosen)
}

/// Exhaustive FD single-cell-processing power optimization.
pub fn exhaustive_power_opt(
    params: &SystemParams,
    sic: SicMode,
    resolution: usize,
) -> Result<(f64, f64, f64)> {
    exhaustive_max_min(params.p_u_max, params.p_d_max, resolution, |p_u, p_d| {
        let (r_u, r_d) = fd_scp_rates(params, PowerAllocation { p_u, p_d }, sic);
        r_u.min(r_d)
    })
}

/// Exhaustive FD C-RAN power optimization.
pub fn exhaustive_cran_power_opt(
    params: &SystemParams,
    setup: &CranSetup,
    sic: SicMode,
    resolution: usize,
) -> Result<(f64, f64, f64)> {
    exhaustive_max_min(params.p_u_max, params.p_d_max, resolution, |p_u, p_d| {
        let (up, down) = fd_cran_rates(params, PowerAllocation { p_u, p_d }, setup, sic);
        up.rate.min(down.rate)
    })
}
