//! Frequency-domain machinery on the unit interval: the Wyner channel
//! response, composite Simpson quadrature, and linear downlink precoders
//! described by their (real, even) frequency response.
//!
//! Every sequence handled here is real and symmetric around tap 0, so all
//! spectra are real and even about `f = 1/2`, and taps/correlations reduce
//! to cosine integrals.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::capacity;

pub const DEFAULT_PANELS: usize = 4096;

/// ZF is rejected once `alpha` is this close to 1/2.
const ZF_MARGIN: f64 = 1e-9;

/// Custom precoders may be this far from even symmetry before rejection.
const SYMMETRY_TOLERANCE: f64 = 1e-6;

/// Off-diagonal effective taps summed for non-ZF precoders.
pub const K_MAX: usize = 8;

/// `H(f) = 1 + 2 alpha cos(2 pi f)`.
#[inline]
pub fn channel_response(alpha: f64, f: f64) -> f64 {
    1.0 + 2.0 * alpha * (2.0 * PI * f).cos()
}

/// Composite Simpson rule on `[0, 1]` with a fixed, even panel count.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    panels: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Quadrature {
    pub fn new(panels: usize) -> Result<Self> {
        if panels < 2 || !panels.is_multiple_of(2) {
            return Err(Error::Domain {
                what: "quadrature panels",
                value: panels as f64,
            });
        }
        let h = 1.0 / panels as f64;
        let nodes = (0..=panels).map(|i| i as f64 * h).collect();
        Ok(Quadrature {
            panels,
            nodes,
            weights: simpson_weights(panels, h),
        })
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    /// Sample points `f_i = i / panels`, `i = 0..=panels`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Integrates `func` over `[0, 1]`, failing on the first non-finite sample.
    pub fn integrate(&self, func: impl Fn(f64) -> f64) -> Result<f64> {
        let mut acc = 0.0;
        for (&f, &w) in self.nodes.iter().zip(&self.weights) {
            let value = func(f);
            if !value.is_finite() {
                return Err(Error::NonFinite { f, value });
            }
            acc += w * value;
        }
        Ok(acc)
    }

    /// Integrates values already sampled on [`Self::nodes`].
    pub fn integrate_samples(&self, samples: &[f64]) -> f64 {
        debug_assert_eq!(samples.len(), self.nodes.len());
        samples.iter().zip(&self.weights).map(|(s, w)| s * w).sum()
    }

    /// Integrates a function even about `f = 1/2` using only the nodes in
    /// `[0, 1/2]`. Needs `panels % 4 == 0`; otherwise falls back to the full
    /// interval.
    pub fn integrate_even(&self, func: impl Fn(f64) -> f64) -> Result<f64> {
        if !self.panels.is_multiple_of(4) {
            return self.integrate(func);
        }
        let half = self.panels / 2;
        let weights = simpson_weights(half, 1.0 / self.panels as f64);
        let mut acc = 0.0;
        for (&f, &w) in self.nodes[..=half].iter().zip(&weights) {
            let value = func(f);
            if !value.is_finite() {
                return Err(Error::NonFinite { f, value });
            }
            acc += w * value;
        }
        Ok(2.0 * acc)
    }
}

fn simpson_weights(panels: usize, h: f64) -> Vec<f64> {
    (0..=panels)
        .map(|i| {
            let m = if i == 0 || i == panels {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            m * h / 3.0
        })
        .collect()
}

/// Approximates `int_0^1 func(f) df` with composite Simpson on `panels` panels.
pub fn integrate_unit(func: impl Fn(f64) -> f64, panels: usize) -> Result<f64> {
    Quadrature::new(panels)?.integrate(func)
}

/// Precomputed `|H(f)|^2` on the half grid, for repeated evaluation of
/// `int_0^1 C(s H(f)^2) df` at different effective SNRs `s`.
///
/// Samples are grouped by quadrature weight so that one logarithm serves a
/// product of [`LOG_CHUNK`] factors.
#[derive(Debug, Clone)]
pub struct ChannelSpectrum {
    alpha: f64,
    classes: Vec<(f64, Vec<f64>)>,
}

const LOG_CHUNK: usize = 8;

impl ChannelSpectrum {
    pub fn new(alpha: f64, quad: &Quadrature) -> Self {
        // H^2 is even about 1/2; integrate twice the lower half when the
        // panel count allows it.
        let (nodes, weights) = if quad.panels.is_multiple_of(4) {
            let half = quad.panels / 2;
            let w = simpson_weights(half, 1.0 / quad.panels as f64)
                .into_iter()
                .map(|w| 2.0 * w)
                .collect();
            (&quad.nodes[..=half], w)
        } else {
            (&quad.nodes[..], quad.weights.clone())
        };
        let mut classes: Vec<(f64, Vec<f64>)> = Vec::new();
        for (&f, &w) in nodes.iter().zip(&weights) {
            let g = channel_response(alpha, f).powi(2);
            match classes.iter_mut().find(|(cw, _)| *cw == w) {
                Some((_, gains)) => gains.push(g),
                None => classes.push((w, vec![g])),
            }
        }
        ChannelSpectrum { alpha, classes }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `int_0^1 log2(1 + snr H(f)^2) df`.
    pub fn mean_capacity(&self, snr: f64) -> f64 {
        if snr == 0.0 {
            return 0.0;
        }
        self.classes
            .iter()
            .map(|(w, gains)| {
                let sum: f64 = gains
                    .chunks(LOG_CHUNK)
                    .map(|chunk| {
                        let product: f64 = chunk.iter().map(|g| 1.0 + snr * g).product();
                        if product.is_finite() {
                            product.log2()
                        } else {
                            chunk.iter().map(|g| capacity(snr * g)).sum()
                        }
                    })
                    .sum();
                w * sum
            })
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PrecoderKind {
    ZeroForcing { alpha: f64 },
    Custom,
}

/// Unit-energy, real, even precoding filter `g`, held as its frequency
/// response `G(f)` sampled on a quadrature grid.
#[derive(Debug, Clone)]
pub struct Precoder {
    kind: PrecoderKind,
    quad: Quadrature,
    response: Vec<f64>,
}

impl Precoder {
    /// Zero-forcing filter `G(f) = c / H(f)`, with `c` fixing unit energy.
    pub fn zero_forcing(alpha: f64, quad: &Quadrature) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::Domain {
                what: "alpha",
                value: alpha,
            });
        }
        if alpha >= 0.5 - ZF_MARGIN {
            return Err(Error::ZfSingular { alpha });
        }
        let inv_energy = quad.integrate(|f| channel_response(alpha, f).powi(-2))?;
        let c = inv_energy.powf(-0.5);
        let response = quad
            .nodes()
            .iter()
            .map(|&f| c / channel_response(alpha, f))
            .collect();
        Ok(Precoder {
            kind: PrecoderKind::ZeroForcing { alpha },
            quad: quad.clone(),
            response,
        })
    }

    /// Builds a precoder from `G(f)` sampled on `quad.nodes()`. The samples
    /// are symmetrized as `(G(f) + G(1 - f)) / 2` and scaled to unit energy.
    pub fn custom(samples: &[f64], quad: &Quadrature) -> Result<Self> {
        let n = quad.panels();
        if samples.len() != n + 1 {
            return Err(Error::Precoder(format!(
                "expected {} samples, got {}",
                n + 1,
                samples.len()
            )));
        }
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::NonFinite {
                f: quad.nodes()[i],
                value: samples[i],
            });
        }
        let mut response = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let (a, b) = (samples[i], samples[n - i]);
            if (a - b).abs() > SYMMETRY_TOLERANCE {
                return Err(Error::Precoder(format!(
                    "response not symmetric at f = {}: {} vs {}",
                    quad.nodes()[i],
                    a,
                    b
                )));
            }
            response.push(0.5 * (a + b));
        }
        let energy = quad.integrate_samples(&response.iter().map(|g| g * g).collect::<Vec<_>>());
        if energy.is_nan() || energy <= 0.0 {
            return Err(Error::Precoder("zero-energy response".into()));
        }
        let scale = energy.sqrt().recip();
        response.iter_mut().for_each(|g| *g *= scale);
        Ok(Precoder {
            kind: PrecoderKind::Custom,
            quad: quad.clone(),
            response,
        })
    }

    pub fn kind(&self) -> PrecoderKind {
        self.kind
    }

    pub fn quadrature(&self) -> &Quadrature {
        &self.quad
    }

    /// `G(f)` on the quadrature nodes.
    pub fn response(&self) -> &[f64] {
        &self.response
    }

    pub fn energy(&self) -> f64 {
        self.cosine_moment(|g, _| g * g, 0)
    }

    /// Autocorrelation `R_g(tau) = sum_k g_k g_{k - tau}`.
    pub fn rg(&self, tau: i64) -> f64 {
        self.cosine_moment(|g, _| g * g, tau)
    }

    /// Effective tap `h~_k = (h * g)_k` for the Wyner channel with gain `alpha`.
    pub fn h_tilde(&self, alpha: f64, k: i64) -> f64 {
        self.cosine_moment(|g, f| channel_response(alpha, f) * g, k)
    }

    /// `h~_0^2` and `sum_{k>0} h~_k^2`. The tail is identically zero for ZF
    /// at the matching `alpha`, and truncated at [`K_MAX`] otherwise.
    pub fn effective_gains(&self, alpha: f64) -> EffectiveGains {
        let direct = self.h_tilde(alpha, 0);
        let tail = match self.kind {
            PrecoderKind::ZeroForcing { alpha: a } if a == alpha => 0.0,
            _ => (1..=K_MAX as i64)
                .map(|k| self.h_tilde(alpha, k).powi(2))
                .sum(),
        };
        EffectiveGains {
            direct_sq: direct * direct,
            tail_sq: tail,
        }
    }

    fn cosine_moment(&self, weight: impl Fn(f64, f64) -> f64, lag: i64) -> f64 {
        let nodes = self.quad.nodes();
        let samples: Vec<f64> = self
            .response
            .iter()
            .zip(nodes)
            .map(|(&g, &f)| weight(g, f) * (2.0 * PI * f * lag as f64).cos())
            .collect();
        self.quad.integrate_samples(&samples)
    }
}

/// Effective downlink channel gains after precoding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveGains {
    pub direct_sq: f64,
    pub tail_sq: f64,
}

/// Free-function form of [`Precoder::zero_forcing`] on a fresh grid.
pub fn zf_precoder(alpha: f64, panels: usize) -> Result<Precoder> {
    Precoder::zero_forcing(alpha, &Quadrature::new(panels)?)
}

pub fn rg(precoder: &Precoder, tau: i64) -> f64 {
    precoder.rg(tau)
}

pub fn h_tilde(precoder: &Precoder, alpha: f64, k: i64) -> f64 {
    precoder.h_tilde(alpha, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad() -> Quadrature {
        Quadrature::new(DEFAULT_PANELS).unwrap()
    }

    #[test]
    fn channel_response_values() {
        assert_eq!(channel_response(0.0, 0.37), 1.0);
        assert!((channel_response(0.4, 0.0) - 1.8).abs() < 1e-15);
        assert!((channel_response(0.4, 0.5) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn integrate_constant_and_cosine() {
        assert!((integrate_unit(|_| 1.0, 4096).unwrap() - 1.0).abs() < 1e-14);
        assert!(
            integrate_unit(|f| (2.0 * PI * f).cos(), 4096)
                .unwrap()
                .abs()
                < 1e-12
        );
    }

    #[test]
    fn integrate_h_squared() {
        // Riemann sum on a fine grid as an independent check of 1 + 2 alpha^2.
        let n = 200_000;
        let riemann: f64 = (0..n)
            .map(|i| channel_response(0.4, i as f64 / n as f64).powi(2))
            .sum::<f64>()
            / n as f64;
        let simpson = integrate_unit(|f| channel_response(0.4, f).powi(2), 4096).unwrap();
        assert!((simpson - 1.32).abs() < 1e-12);
        assert!((riemann - 1.32).abs() < 1e-9);
    }

    #[test]
    fn panel_count_validation() {
        assert!(Quadrature::new(0).is_err());
        assert!(Quadrature::new(7).is_err());
        assert!(Quadrature::new(2).is_ok());
    }

    #[test]
    fn non_finite_sample_names_frequency() {
        let err = integrate_unit(|f| 1.0 / (f - 0.5), 4).unwrap_err();
        match err {
            Error::NonFinite { f, .. } => assert_eq!(f, 0.5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn even_integration_matches_full() {
        let q = quad();
        for alpha in [0.0, 0.2, 0.45] {
            let g = |f: f64| (1.0 + 30.0 * channel_response(alpha, f).powi(2)).log2();
            let full = q.integrate(g).unwrap();
            let half = q.integrate_even(g).unwrap();
            assert!((full - half).abs() < 1e-12, "{full} vs {half}");
            let spectrum = ChannelSpectrum::new(alpha, &q);
            assert!((spectrum.mean_capacity(30.0) - full).abs() < 1e-12);
        }
    }

    #[test]
    fn zf_identity_at_zero_alpha() {
        let p = Precoder::zero_forcing(0.0, &quad()).unwrap();
        assert!(p.response().iter().all(|&g| (g - 1.0).abs() < 1e-15));
        assert!((p.h_tilde(0.0, 0) - 1.0).abs() < 1e-14);
        assert!(p.rg(2).abs() < 1e-12);
    }

    #[test]
    fn zf_closed_form_at_point_four() {
        let p = Precoder::zero_forcing(0.4, &quad()).unwrap();
        let h0 = p.h_tilde(0.4, 0);
        assert!((h0 * h0 - 0.216).abs() < 1e-12);
        assert!((h0 - 0.216f64.sqrt()).abs() < 1e-12);
        assert!(p.h_tilde(0.4, 1).abs() < 1e-9);
        assert!((p.energy() - 1.0).abs() < 1e-12);
        assert!((p.rg(0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zf_rejects_singular_alpha() {
        assert!(matches!(
            Precoder::zero_forcing(0.5, &quad()),
            Err(Error::ZfSingular { .. })
        ));
        assert!(matches!(
            Precoder::zero_forcing(0.5 - 1e-10, &quad()),
            Err(Error::ZfSingular { .. })
        ));
        assert!(Precoder::zero_forcing(0.49, &quad()).is_ok());
    }

    #[test]
    fn custom_precoder_is_normalized_and_symmetrized() {
        let q = quad();
        let raw: Vec<f64> = q
            .nodes()
            .iter()
            .map(|&f| 3.0 + (2.0 * PI * f).cos() + 1e-7 * (2.0 * PI * f).sin())
            .collect();
        let p = Precoder::custom(&raw, &q).unwrap();
        assert_eq!(p.kind(), PrecoderKind::Custom);
        assert!((p.energy() - 1.0).abs() < 1e-12);
        let r = p.response();
        let n = q.panels();
        assert!((0..=n).all(|i| r[i] == r[n - i]));
    }

    #[test]
    fn custom_precoder_rejects_asymmetry() {
        let q = Quadrature::new(64).unwrap();
        let raw: Vec<f64> = q
            .nodes()
            .iter()
            .map(|&f| 1.0 + 0.1 * (2.0 * PI * f).sin())
            .collect();
        assert!(matches!(
            Precoder::custom(&raw, &q),
            Err(Error::Precoder(_))
        ));
        assert!(Precoder::custom(&[1.0; 3], &q).is_err());
        assert!(Precoder::custom(&vec![0.0; 65], &q).is_err());
    }

    #[test]
    fn identity_custom_has_no_tail_without_interference() {
        let q = quad();
        let p = Precoder::custom(&vec![1.0; q.panels() + 1], &q).unwrap();
        let gains = p.effective_gains(0.0);
        assert!((gains.direct_sq - 1.0).abs() < 1e-12);
        assert!(gains.tail_sq < 1e-20);
        // Unprecoded Wyner channel: h~_1 = alpha, the rest vanish.
        let gains = p.effective_gains(0.3);
        assert!((gains.tail_sq - 0.09).abs() < 1e-12);
    }
}
