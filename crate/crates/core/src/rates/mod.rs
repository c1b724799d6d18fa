//! Per-cell rate calculators for the six duplexing/processing schemes.
//!
//! Half-duplex schemes run at full power and split time between the two
//! directions. Full-duplex schemes share the band and optimize the power
//! pair `(p_u, p_d)` for the max-min (equal) rate.

mod search;

use serde::{Deserialize, Serialize};

pub use search::{grid_maximize, maximize, PowerSearch, SearchOutcome, TIE_TOLERANCE};

use crate::error::{Error, Result};
use crate::model::{
    capacity, q_clamp, Diagnostics, PowerAllocation, RateResult, SchemeId, SystemParams,
};
use crate::spectral::{ChannelSpectrum, EffectiveGains, Precoder, Quadrature};

/// How the downlink MS handles the co-located uplink MS's signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SicMode {
    TreatAsNoise,
    Sic,
}

/// Equal rate of a time-shared link, `max_f min(f R_u, (1 - f) R_d)`,
/// and the maximizing uplink fraction.
pub fn time_shared_equal_rate(r_u: f64, r_d: f64) -> (f64, f64) {
    let total = r_u + r_d;
    if total == 0.0 {
        return (0.0, 0.5);
    }
    (r_u * r_d / total, r_d / total)
}

fn time_shared(r_u: f64, r_d: f64, diagnostics: Diagnostics) -> RateResult {
    let (r_eq, f_star) = time_shared_equal_rate(r_u, r_d);
    RateResult {
        r_u,
        r_d,
        r_eq,
        diagnostics: Diagnostics {
            f_star: Some(f_star),
            ..diagnostics
        },
    }
}

/// Half-duplex single-cell processing: each RU decodes/encodes its own cell,
/// treating inter-cell interference as noise, and the fronthaul caps the
/// decoded streams.
pub fn hd_scp(params: &SystemParams) -> RateResult {
    let a2 = params.intercell();
    let (pu, pd) = (params.p_u_max, params.p_d_max);
    let r_u = capacity(pu / (1.0 + a2 * pu)).min(params.c_u);
    let r_d = capacity(pd / (1.0 + a2 * pd)).min(params.c_d);
    time_shared(r_u, r_d, Diagnostics::default())
}

/// Uplink rate together with the compression noise it was computed under.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UplinkRate {
    pub rate: f64,
    /// Infinite when the fronthaul has zero capacity.
    pub sigma_u_sq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DownlinkRate {
    pub rate: f64,
    pub sigma_d_sq: f64,
    pub p_s: f64,
}

/// Everything the C-RAN calculators need beyond [`SystemParams`]: the
/// channel spectrum on the quadrature grid and the downlink precoder with
/// its derived quantities.
#[derive(Debug, Clone)]
pub struct CranSetup {
    spectrum: ChannelSpectrum,
    precoder: Precoder,
    gains: EffectiveGains,
    rg2: f64,
}

impl CranSetup {
    /// Zero-forcing downlink for the channel gain `alpha`.
    pub fn zero_forcing(alpha: f64, quad: &Quadrature) -> Result<Self> {
        Ok(Self::with_precoder(
            alpha,
            Precoder::zero_forcing(alpha, quad)?,
        ))
    }

    pub fn with_precoder(alpha: f64, precoder: Precoder) -> Self {
        let spectrum = ChannelSpectrum::new(alpha, precoder.quadrature());
        let gains = precoder.effective_gains(alpha);
        let rg2 = precoder.rg(2);
        CranSetup {
            spectrum,
            precoder,
            gains,
            rg2,
        }
    }

    pub fn spectrum(&self) -> &ChannelSpectrum {
        &self.spectrum
    }

    pub fn precoder(&self) -> &Precoder {
        &self.precoder
    }

    pub fn gains(&self) -> EffectiveGains {
        self.gains
    }

    /// `R_g(2)`, the lag-2 autocorrelation of the precoder.
    pub fn rg2(&self) -> f64 {
        self.rg2
    }

    fn check_alpha(&self, params: &SystemParams) -> Result<()> {
        if self.spectrum.alpha() != params.alpha {
            return Err(Error::Domain {
                what: "alpha (setup built for a different channel)",
                value: params.alpha,
            });
        }
        Ok(())
    }
}

/// Compression noise for fronthaul capacity `c` and received power `rx_power`.
fn compression_noise(rx_power: f64, c: f64) -> f64 {
    if c == 0.0 {
        return f64::INFINITY;
    }
    rx_power / (c.exp2() - 1.0)
}

/// Half-duplex C-RAN uplink: compress-and-forward of the received samples,
/// joint decoding at the CU.
pub fn hd_cran_uplink(params: &SystemParams, spectrum: &ChannelSpectrum) -> UplinkRate {
    let pu = params.p_u_max;
    let sigma_u_sq = compression_noise(1.0 + (1.0 + params.intercell()) * pu, params.c_u);
    let rate = if sigma_u_sq.is_finite() {
        spectrum.mean_capacity(pu / (1.0 + sigma_u_sq))
    } else {
        0.0
    };
    UplinkRate { rate, sigma_u_sq }
}

/// Half-duplex C-RAN downlink with precoding at the CU and compressed
/// baseband on the fronthaul.
pub fn hd_cran_downlink(params: &SystemParams, gains: EffectiveGains) -> DownlinkRate {
    let pd = params.p_d_max;
    let residual = (-params.c_d).exp2();
    let p_s = pd * (1.0 - residual);
    // P_s / (2^C_d - 1) rewritten so that C_d = 0 needs no special case.
    let sigma_d_sq = pd * residual;
    let noise = 1.0 + 2.0 * p_s * gains.tail_sq + sigma_d_sq * (1.0 + params.intercell());
    DownlinkRate {
        rate: capacity(p_s * gains.direct_sq / noise),
        sigma_d_sq,
        p_s,
    }
}

pub fn hd_cran(params: &SystemParams, setup: &CranSetup) -> Result<RateResult> {
    setup.check_alpha(params)?;
    let up = hd_cran_uplink(params, &setup.spectrum);
    let down = hd_cran_downlink(params, setup.gains);
    Ok(time_shared(
        up.rate,
        down.rate,
        Diagnostics {
            sigma_u_sq: up.sigma_u_sq.is_finite().then_some(up.sigma_u_sq),
            sigma_d_sq: Some(down.sigma_d_sq),
            p_s: Some(down.p_s),
            ..Default::default()
        },
    ))
}

/// Uplink and downlink rates of full-duplex single-cell processing at a
/// given power pair.
pub fn fd_scp_rates(params: &SystemParams, powers: PowerAllocation, sic: SicMode) -> (f64, f64) {
    let PowerAllocation { p_u, p_d } = powers;
    let a2 = params.intercell();
    let du = 2.0 * params.beta_du * params.beta_du * p_d;
    let ud_inter = 2.0 * params.beta_ud * params.beta_ud * p_u;
    let ud_intra = params.gamma_ud * params.gamma_ud * p_u;

    let r_u = capacity(p_u / (1.0 + a2 * p_u + du)).min(params.c_u);
    let base = 1.0 + a2 * p_d;
    let t3 = capacity(
        p_d / (base
            + (2.0 * params.beta_ud * params.beta_ud + params.gamma_ud * params.gamma_ud) * p_u),
    );
    let r_d = match sic {
        SicMode::TreatAsNoise => t3,
        SicMode::Sic => {
            let t1 = capacity(p_d / (base + ud_inter));
            let t2 = capacity((p_d + ud_intra) / (base + ud_inter));
            q_clamp(t1, t2 - r_u, t3)
        }
    };
    (r_u, r_d.min(params.c_d))
}

/// Full-duplex single-cell processing, max-min over the power box.
pub fn fd_scp(params: &SystemParams, sic: SicMode, search: &PowerSearch) -> RateResult {
    let objective = |p_u, p_d| {
        let (r_u, r_d) = fd_scp_rates(params, PowerAllocation { p_u, p_d }, sic);
        r_u.min(r_d)
    };
    let best = maximize(params.p_u_max, params.p_d_max, search, objective);
    let (r_u, r_d) = fd_scp_rates(
        params,
        PowerAllocation {
            p_u: best.p_u,
            p_d: best.p_d,
        },
        sic,
    );
    RateResult {
        r_u,
        r_d,
        r_eq: best.value,
        diagnostics: Diagnostics {
            p_u_star: Some(best.p_u),
            p_d_star: Some(best.p_d),
            ..Default::default()
        },
    }
}

/// Full-duplex C-RAN uplink. Neighbouring RUs' downlink signals raise the
/// power that must be compressed; the CU knows them and removes them after
/// decompression, so they enter only through `sigma_u_sq`.
pub fn fd_cran_uplink(
    params: &SystemParams,
    powers: PowerAllocation,
    setup: &CranSetup,
) -> UplinkRate {
    let PowerAllocation { p_u, p_d } = powers;
    let rx_power = 1.0
        + (1.0 + params.intercell()) * p_u
        + 2.0 * params.beta_du * params.beta_du * (1.0 + setup.rg2) * p_d;
    let sigma_u_sq = compression_noise(rx_power, params.c_u);
    let rate = if sigma_u_sq.is_finite() {
        setup.spectrum.mean_capacity(p_u / (1.0 + sigma_u_sq))
    } else {
        0.0
    };
    UplinkRate { rate, sigma_u_sq }
}

/// Full-duplex C-RAN downlink. With SIC the MS first decodes the intra-cell
/// uplink message of rate `r_u`; `r_u` is ignored otherwise.
pub fn fd_cran_downlink(
    params: &SystemParams,
    powers: PowerAllocation,
    setup: &CranSetup,
    sic: SicMode,
    r_u: f64,
) -> DownlinkRate {
    let PowerAllocation { p_u, p_d } = powers;
    let gains = setup.gains;
    let residual = (-params.c_d).exp2();
    let p_s = p_d * (1.0 - residual);
    let sigma_d_sq = p_d * residual;
    let signal = p_s * gains.direct_sq;
    let noise = 1.0
        + 2.0 * p_s * gains.tail_sq
        + 2.0 * params.beta_ud * params.beta_ud * p_u
        + sigma_d_sq * (1.0 + params.intercell());
    let intra = params.gamma_ud * params.gamma_ud * p_u;
    let t3 = capacity(signal / (noise + intra));
    let rate = match sic {
        SicMode::TreatAsNoise => t3,
        SicMode::Sic => {
            let t1 = capacity(signal / noise);
            let t2 = capacity((signal + intra) / noise);
            q_clamp(t1, t2 - r_u, t3)
        }
    };
    DownlinkRate {
        rate,
        sigma_d_sq,
        p_s,
    }
}

/// Both full-duplex C-RAN rates at one power pair; the uplink rate feeds
/// the SIC downlink.
pub fn fd_cran_rates(
    params: &SystemParams,
    powers: PowerAllocation,
    setup: &CranSetup,
    sic: SicMode,
) -> (UplinkRate, DownlinkRate) {
    let up = fd_cran_uplink(params, powers, setup);
    let down = fd_cran_downlink(params, powers, setup, sic, up.rate);
    (up, down)
}

pub fn fd_cran(
    params: &SystemParams,
    setup: &CranSetup,
    sic: SicMode,
    search: &PowerSearch,
) -> Result<RateResult> {
    setup.check_alpha(params)?;
    let objective = |p_u, p_d| {
        let (up, down) = fd_cran_rates(params, PowerAllocation { p_u, p_d }, setup, sic);
        up.rate.min(down.rate)
    };
    let best = maximize(params.p_u_max, params.p_d_max, search, objective);
    let powers = PowerAllocation {
        p_u: best.p_u,
        p_d: best.p_d,
    };
    let (up, down) = fd_cran_rates(params, powers, setup, sic);
    Ok(RateResult {
        r_u: up.rate,
        r_d: down.rate,
        r_eq: best.value,
        diagnostics: Diagnostics {
            sigma_u_sq: up.sigma_u_sq.is_finite().then_some(up.sigma_u_sq),
            sigma_d_sq: Some(down.sigma_d_sq),
            p_s: Some(down.p_s),
            p_u_star: Some(best.p_u),
            p_d_star: Some(best.p_d),
            f_star: None,
        },
    })
}

/// Dispatches to the calculator of `scheme`. `setup` is required for the
/// C-RAN schemes.
pub fn evaluate(
    scheme: SchemeId,
    params: &SystemParams,
    setup: Option<&CranSetup>,
    search: &PowerSearch,
) -> Result<RateResult> {
    let need_setup = || {
        setup.ok_or(Error::Precoder(format!(
            "{scheme} needs a C-RAN precoder setup"
        )))
    };
    match scheme {
        SchemeId::HdScp => Ok(hd_scp(params)),
        SchemeId::FdScp => Ok(fd_scp(params, SicMode::TreatAsNoise, search)),
        SchemeId::FdScpSic => Ok(fd_scp(params, SicMode::Sic, search)),
        SchemeId::HdCran => hd_cran(params, need_setup()?),
        SchemeId::FdCran => fd_cran(params, need_setup()?, SicMode::TreatAsNoise, search),
        SchemeId::FdCranSic => fd_cran(params, need_setup()?, SicMode::Sic, search),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::DEFAULT_PANELS;

    fn quad() -> Quadrature {
        Quadrature::new(DEFAULT_PANELS).unwrap()
    }

    fn fig2(c: f64) -> SystemParams {
        SystemParams {
            alpha: 0.4,
            beta_du: 0.4,
            beta_ud: 0.04,
            gamma_du: 0.0,
            gamma_ud: 4.0,
            p_u_max: 100.0,
            p_d_max: 100.0,
            c_u: c,
            c_d: c,
        }
    }

    #[test]
    fn hd_scp_interference_free() {
        let p = SystemParams::interference_free(0.0, 3.0, 10.0);
        let r = hd_scp(&p);
        assert_eq!((r.r_u, r.r_d, r.r_eq), (2.0, 2.0, 1.0));
        assert_eq!(r.diagnostics.f_star, Some(0.5));
    }

    #[test]
    fn hd_scp_with_interference() {
        let p = SystemParams::interference_free(0.4, 100.0, 10.0);
        let r = hd_scp(&p);
        // log2(1 + 100 / 33)
        assert!((r.r_u - 2.010_888_316_142_736).abs() < 1e-12, "{}", r.r_u);
    }

    #[test]
    fn hd_scp_zero_fronthaul() {
        let mut p = SystemParams::interference_free(0.4, 100.0, 10.0);
        p.c_u = 0.0;
        let r = hd_scp(&p);
        assert_eq!((r.r_u, r.r_eq), (0.0, 0.0));
        p.c_d = 0.0;
        assert_eq!(hd_scp(&p).r_eq, 0.0);
    }

    #[test]
    fn hd_cran_uplink_flat_channel() {
        let q = quad();
        let spectrum = ChannelSpectrum::new(0.0, &q);
        let mut p = SystemParams::interference_free(0.0, 1.0, 1.0);
        let up = hd_cran_uplink(&p, &spectrum);
        assert!((up.sigma_u_sq - 2.0).abs() < 1e-15);
        assert!((up.rate - (4.0f64 / 3.0).log2()).abs() < 1e-12);

        p.p_u_max = 100.0;
        p.c_u = 30.0;
        let up = hd_cran_uplink(&p, &spectrum);
        assert!((up.rate - 101f64.log2()).abs() < 1e-6);

        p.c_u = 0.0;
        assert_eq!(hd_cran_uplink(&p, &spectrum).rate, 0.0);
    }

    #[test]
    fn hd_cran_downlink_values() {
        let q = quad();
        let zf0 = Precoder::zero_forcing(0.0, &q).unwrap();
        let mut p = SystemParams::interference_free(0.0, 3.0, 2.0);
        let d = hd_cran_downlink(&p, zf0.effective_gains(0.0));
        assert!((d.p_s - 2.25).abs() < 1e-15);
        assert!((d.sigma_d_sq - 0.75).abs() < 1e-15);
        assert!((d.rate - (1.0f64 + 2.25 / 1.75).log2()).abs() < 1e-12);

        let zf = Precoder::zero_forcing(0.4, &q).unwrap();
        p = SystemParams::interference_free(0.4, 100.0, 1000.0);
        let d = hd_cran_downlink(&p, zf.effective_gains(0.4));
        assert!((d.rate - 22.6f64.log2()).abs() < 1e-9);

        p.c_d = 0.0;
        assert_eq!(hd_cran_downlink(&p, zf.effective_gains(0.4)).rate, 0.0);
    }

    #[test]
    fn hd_cran_equal_rate_and_zero_fronthaul() {
        let q = quad();
        let setup = CranSetup::zero_forcing(0.0, &q).unwrap();
        let p = SystemParams::interference_free(0.0, 3.0, 1000.0);
        let r = hd_cran(&p, &setup).unwrap();
        assert!((r.r_u - r.r_d).abs() < 1e-12);
        assert!((r.r_eq - r.r_u / 2.0).abs() < 1e-12);

        let mut p = fig2(10.0);
        p.c_u = 0.0;
        let setup = CranSetup::zero_forcing(0.4, &q).unwrap();
        assert_eq!(hd_cran(&p, &setup).unwrap().r_eq, 0.0);
    }

    #[test]
    fn setup_alpha_mismatch_is_rejected() {
        let setup = CranSetup::zero_forcing(0.2, &quad()).unwrap();
        assert!(hd_cran(&fig2(10.0), &setup).is_err());
    }

    #[test]
    fn fd_scp_decoupled_links_use_full_power() {
        let p = SystemParams::interference_free(0.0, 3.0, 10.0);
        for sic in [SicMode::TreatAsNoise, SicMode::Sic] {
            let r = fd_scp(&p, sic, &PowerSearch::default());
            assert_eq!(r.r_eq, 2.0);
            assert_eq!(r.diagnostics.p_u_star, Some(3.0));
            assert_eq!(r.diagnostics.p_d_star, Some(3.0));
        }
    }

    #[test]
    fn fd_scp_sic_degenerates_without_intra_cell_interference() {
        let mut p = fig2(10.0);
        p.gamma_ud = 0.0;
        let search = PowerSearch::default();
        let a = fd_scp(&p, SicMode::Sic, &search);
        let b = fd_scp(&p, SicMode::TreatAsNoise, &search);
        assert_eq!(a.r_eq, b.r_eq);
    }

    #[test]
    fn fd_cran_uplink_reductions() {
        let q = quad();
        let setup = CranSetup::zero_forcing(0.4, &q).unwrap();
        let mut p = fig2(10.0);
        p.beta_du = 0.0;
        let powers = PowerAllocation::full(&p);
        let fd = fd_cran_uplink(&p, powers, &setup);
        let hd = hd_cran_uplink(&p, setup.spectrum());
        assert_eq!(fd, hd);

        let setup0 = CranSetup::zero_forcing(0.0, &q).unwrap();
        let mut p = fig2(3.0);
        p.alpha = 0.0;
        let powers = PowerAllocation {
            p_u: 20.0,
            p_d: 50.0,
        };
        let up = fd_cran_uplink(&p, powers, &setup0);
        let expected = (1.0 + 20.0 + 2.0 * 0.16 * 50.0) / 7.0;
        assert!((up.sigma_u_sq - expected).abs() < 1e-12);
    }

    #[test]
    fn fd_cran_downlink_reductions() {
        let q = quad();
        let setup = CranSetup::zero_forcing(0.4, &q).unwrap();
        let mut p = fig2(10.0);
        p.beta_ud = 0.0;
        p.gamma_ud = 0.0;
        let powers = PowerAllocation::full(&p);
        let fd = fd_cran_downlink(&p, powers, &setup, SicMode::TreatAsNoise, 0.0);
        let hd = hd_cran_downlink(&p, setup.gains());
        assert_eq!(fd.rate, hd.rate);

        let mut p = fig2(10.0);
        p.gamma_ud = 0.0;
        let powers = PowerAllocation {
            p_u: 40.0,
            p_d: 70.0,
        };
        let a = fd_cran_downlink(&p, powers, &setup, SicMode::Sic, 3.0);
        let b = fd_cran_downlink(&p, powers, &setup, SicMode::TreatAsNoise, 3.0);
        assert_eq!(a.rate, b.rate);
    }

    #[test]
    fn fd_cran_sic_recovers_with_strong_intra_cell_interference() {
        // As gamma_ud grows, t2 - r_u eventually exceeds t1 and the SIC rate
        // settles at t1, the rate without intra-cell interference.
        let q = quad();
        let setup = CranSetup::zero_forcing(0.4, &q).unwrap();
        let powers = PowerAllocation {
            p_u: 30.0,
            p_d: 100.0,
        };
        let mut p = fig2(10.0);
        p.gamma_ud = 0.0;
        let t1 = fd_cran_downlink(&p, powers, &setup, SicMode::TreatAsNoise, 0.0).rate;
        let r_u = 4.0;
        let mut previous = f64::INFINITY;
        let mut recovered = None;
        for i in 0..=400 {
            p.gamma_ud = 0.25 * i as f64;
            let sic = fd_cran_downlink(&p, powers, &setup, SicMode::Sic, r_u).rate;
            let tan = fd_cran_downlink(&p, powers, &setup, SicMode::TreatAsNoise, r_u).rate;
            assert!(sic >= tan && sic <= t1 + 1e-15);
            assert!(tan <= previous);
            previous = tan;
            if i > 0 && recovered.is_none() && sic == t1 {
                recovered = Some(p.gamma_ud);
            }
            if let Some(g) = recovered {
                assert_eq!(
                    sic, t1,
                    "lost recovery at gamma_ud = {} (from {g})",
                    p.gamma_ud
                );
            }
        }
        assert!(recovered.is_some_and(|g| g < 100.0));
    }

    #[test]
    fn fd_cran_interference_free_is_min_of_directions() {
        let q = quad();
        let setup = CranSetup::zero_forcing(0.4, &q).unwrap();
        let p = SystemParams::interference_free(0.4, 100.0, 1000.0);
        let r = fd_cran(&p, &setup, SicMode::Sic, &PowerSearch::default()).unwrap();
        let up = hd_cran_uplink(&p, setup.spectrum()).rate;
        let down = hd_cran_downlink(&p, setup.gains()).rate;
        assert!((r.r_eq - up.min(down)).abs() < 1e-12);
    }

    #[test]
    fn argmax_reproduces_reported_rate() {
        let q = Quadrature::new(1024).unwrap();
        let p = fig2(10.0);
        let setup = CranSetup::zero_forcing(0.4, &q).unwrap();
        let search = PowerSearch::default();
        for sic in [SicMode::TreatAsNoise, SicMode::Sic] {
            let r = fd_cran(&p, &setup, sic, &search).unwrap();
            let powers = PowerAllocation {
                p_u: r.diagnostics.p_u_star.unwrap(),
                p_d: r.diagnostics.p_d_star.unwrap(),
            };
            let (up, down) = fd_cran_rates(&p, powers, &setup, sic);
            assert!((up.rate.min(down.rate) - r.r_eq).abs() < 1e-12);

            let r = fd_scp(&p, sic, &search);
            let powers = PowerAllocation {
                p_u: r.diagnostics.p_u_star.unwrap(),
                p_d: r.diagnostics.p_d_star.unwrap(),
            };
            let (u, d) = fd_scp_rates(&p, powers, sic);
            assert!((u.min(d) - r.r_eq).abs() < 1e-12);
        }
    }

    #[test]
    fn time_sharing_conventions() {
        assert_eq!(time_shared_equal_rate(0.0, 0.0).0, 0.0);
        assert_eq!(time_shared_equal_rate(0.0, 3.0), (0.0, 1.0));
        let (r, f) = time_shared_equal_rate(2.0, 6.0);
        assert_eq!(r, 1.5);
        assert_eq!(f, 0.75);
    }

    #[test]
    fn evaluate_requires_setup_for_cran() {
        let p = fig2(10.0);
        assert!(evaluate(SchemeId::HdCran, &p, None, &PowerSearch::default()).is_err());
        assert!(evaluate(SchemeId::HdScp, &p, None, &PowerSearch::default()).is_ok());
    }
}
