//! Sweep configuration files.
//!
//! A config is a TOML document. Powers are given in dB (relative to the
//! unit noise power), gains as amplitudes, fronthaul in bits/s/Hz:
//!
//! ```toml
//! schemes = ["hd_cran", "fd_cran_sic"]
//!
//! [system]
//! alpha = 0.4
//! beta_du = 0.4
//! beta_ud = 0.04
//! gamma_du = 0.0      # optional, has no effect on any rate
//! gamma_ud = 4.0
//! p_u_db = 20.0
//! p_d_db = 20.0
//! c_u = 10.0
//! c_d = 10.0
//!
//! [sweep]
//! var = "c_u_c_d_joint"   # gamma_ud | alpha | beta_du | beta_ud | p_db_joint
//! start = 0.0
//! stop = 12.0
//! step = 0.5
//!
//! [numerics]              # optional, defaults shown
//! panels = 4096
//! grid = 64
//! refine_passes = 2
//! zoom = 8
//! starts = 2
//! full_power = false
//! verify = false
//! oracle_cells = 128
//! oracle_grid = 128
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{db_to_linear, SchemeId, SystemParams};
use crate::rates::PowerSearch;
use crate::spectral::DEFAULT_PANELS;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseConfig {
    pub alpha: f64,
    pub beta_du: f64,
    pub beta_ud: f64,
    #[serde(default)]
    pub gamma_du: f64,
    pub gamma_ud: f64,
    pub p_u_db: f64,
    pub p_d_db: f64,
    pub c_u: f64,
    pub c_d: f64,
}

impl BaseConfig {
    pub fn to_params(&self) -> SystemParams {
        SystemParams {
            alpha: self.alpha,
            beta_du: self.beta_du,
            beta_ud: self.beta_ud,
            gamma_du: self.gamma_du,
            gamma_ud: self.gamma_ud,
            p_u_max: db_to_linear(self.p_u_db),
            p_d_max: db_to_linear(self.p_d_db),
            c_u: self.c_u,
            c_d: self.c_d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVar {
    CUCDJoint,
    GammaUd,
    Alpha,
    BetaDu,
    BetaUd,
    PDbJoint,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::CUCDJoint => "c_u_c_d_joint",
            SweepVar::GammaUd => "gamma_ud",
            SweepVar::Alpha => "alpha",
            SweepVar::BetaDu => "beta_du",
            SweepVar::BetaUd => "beta_ud",
            SweepVar::PDbJoint => "p_db_joint",
        }
    }

    /// Copy of `base` with this variable set to `value`.
    pub fn apply(self, base: &BaseConfig, value: f64) -> BaseConfig {
        let mut b = base.clone();
        match self {
            SweepVar::CUCDJoint => {
                b.c_u = value;
                b.c_d = value;
            }
            SweepVar::GammaUd => b.gamma_ud = value,
            SweepVar::Alpha => b.alpha = value,
            SweepVar::BetaDu => b.beta_du = value,
            SweepVar::BetaUd => b.beta_ud = value,
            SweepVar::PDbJoint => {
                b.p_u_db = value;
                b.p_d_db = value;
            }
        }
        b
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRange {
    pub var: SweepVar,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SweepRange {
    /// Inclusive grid `start, start + step, ..., <= stop`.
    pub fn values(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| self.start + i as f64 * self.step)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Numerics {
    pub panels: usize,
    pub grid: usize,
    pub refine_passes: usize,
    pub zoom: usize,
    /// Coarse-grid local maxima refined independently.
    pub starts: usize,
    pub full_power: bool,
    pub verify: bool,
    /// Ring size of the dense finite-network uplink oracle.
    pub oracle_cells: usize,
    /// Resolution of the exhaustive power-grid oracle.
    pub oracle_grid: usize,
}

impl Default for Numerics {
    fn default() -> Self {
        let search = PowerSearch::default();
        Numerics {
            panels: DEFAULT_PANELS,
            grid: search.coarse,
            refine_passes: search.refine_passes,
            zoom: search.zoom,
            starts: search.starts,
            full_power: false,
            verify: false,
            oracle_cells: 128,
            oracle_grid: 128,
        }
    }
}

impl Numerics {
    pub fn power_search(&self) -> PowerSearch {
        PowerSearch {
            coarse: self.grid,
            refine_passes: self.refine_passes,
            zoom: self.zoom,
            starts: self.starts,
            full_power: self.full_power,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub schemes: Vec<SchemeId>,
    pub system: BaseConfig,
    pub sweep: SweepRange,
    #[serde(default)]
    pub numerics: Numerics,
}

impl SweepSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let spec: SweepSpec = toml::from_str(text).map_err(|e| {
            let location = match e.span() {
                Some(span) => {
                    let line = text[..span.start].matches('\n').count() + 1;
                    format!("line {line}")
                }
                None => "document".to_string(),
            };
            Error::config(location, e.message().to_string())
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("sweep spec always serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() {
            return Err(Error::config("schemes", "at least one scheme is required"));
        }
        let r = &self.sweep;
        if !r.step.is_finite() || r.step <= 0.0 {
            return Err(Error::config(
                "sweep.step",
                format!("must be positive, got {}", r.step),
            ));
        }
        if r.start.is_nan() || !r.stop.is_finite() || r.start > r.stop {
            return Err(Error::config(
                "sweep.start",
                format!("start {} must not exceed stop {}", r.start, r.stop),
            ));
        }
        let n = &self.numerics;
        if n.panels < 4 || !n.panels.is_multiple_of(4) {
            return Err(Error::config(
                "numerics.panels",
                "must be a positive multiple of 4",
            ));
        }
        if n.grid < 2 {
            return Err(Error::config(
                "numerics.grid",
                "need at least 2 points per axis",
            ));
        }
        if n.verify && n.oracle_grid < 64 {
            return Err(Error::config("numerics.oracle_grid", "must be at least 64"));
        }
        if n.verify && n.oracle_cells < 8 {
            return Err(Error::config("numerics.oracle_cells", "must be at least 8"));
        }
        self.system
            .to_params()
            .validate()
            .map_err(|e| Error::config("system", e.to_string()))?;
        for v in r.values() {
            r.var
                .apply(&self.system, v)
                .to_params()
                .validate()
                .map_err(|e| Error::config(format!("sweep value {v}"), e.to_string()))?;
        }
        Ok(())
    }

    /// Built-in figure presets: `fig2` sweeps the joint fronthaul capacity,
    /// `fig3` the intra-cell U-D gain.
    pub fn preset(name: &str) -> Option<SweepSpec> {
        let system = BaseConfig {
            alpha: 0.4,
            beta_du: 0.4,
            beta_ud: 0.04,
            gamma_du: 0.0,
            gamma_ud: 4.0,
            p_u_db: 20.0,
            p_d_db: 20.0,
            c_u: 10.0,
            c_d: 10.0,
        };
        match name {
            "fig2" => Some(SweepSpec {
                schemes: SchemeId::ALL.to_vec(),
                system,
                sweep: SweepRange {
                    var: SweepVar::CUCDJoint,
                    start: 0.0,
                    stop: 12.0,
                    step: 0.5,
                },
                numerics: Numerics::default(),
            }),
            "fig3" => Some(SweepSpec {
                schemes: SchemeId::ALL.to_vec(),
                system,
                sweep: SweepRange {
                    var: SweepVar::GammaUd,
                    start: 0.0,
                    stop: 8.0,
                    step: 0.25,
                },
                numerics: Numerics::default(),
            }),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
schemes = ["hd_scp", "fd_cran_sic"]

[system]
alpha = 0.4
beta_du = 0.4
beta_ud = 0.04
gamma_ud = 4.0
p_u_db = 20.0
p_d_db = 20.0
c_u = 10.0
c_d = 10.0

[sweep]
var = "gamma_ud"
start = 0.0
stop = 1.0
step = 0.25
"#;

    #[test]
    fn parses_minimal_config() {
        let spec = SweepSpec::parse(MINIMAL).unwrap();
        assert_eq!(spec.schemes, vec![SchemeId::HdScp, SchemeId::FdCranSic]);
        assert_eq!(spec.numerics, Numerics::default());
        assert_eq!(spec.sweep.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let p = spec.system.to_params();
        assert!((p.p_u_max - 100.0).abs() < 1e-12);
        assert_eq!(p.gamma_du, 0.0);
    }

    #[test]
    fn round_trips_through_toml() {
        for spec in [
            SweepSpec::parse(MINIMAL).unwrap(),
            SweepSpec::preset("fig2").unwrap(),
            SweepSpec::preset("fig3").unwrap(),
        ] {
            assert_eq!(SweepSpec::parse(&spec.to_toml()).unwrap(), spec);
        }
    }

    #[test]
    fn empty_scheme_list_is_rejected() {
        let text = MINIMAL.replace(r#"["hd_scp", "fd_cran_sic"]"#, "[]");
        match SweepSpec::parse(&text) {
            Err(Error::Config { location, .. }) => assert_eq!(location, "schemes"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_line() {
        let text = MINIMAL.replace("beta_ud = 0.04", "beta_ud = oops");
        match SweepSpec::parse(&text) {
            Err(e @ Error::Config { .. }) => {
                assert!(e.to_string().contains("line 7"), "{e}");
                assert_eq!(e.exit_code(), 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_fields_and_bad_ranges_are_rejected() {
        assert!(SweepSpec::parse(&MINIMAL.replace("c_d = 10.0", "c_d = 10.0\nc_x = 1.0")).is_err());
        assert!(SweepSpec::parse(&MINIMAL.replace("step = 0.25", "step = 0.0")).is_err());
        assert!(SweepSpec::parse(&MINIMAL.replace("stop = 1.0", "stop = -1.0")).is_err());
        assert!(SweepSpec::parse(&MINIMAL.replace("alpha = 0.4", "alpha = -0.4")).is_err());
        assert!(SweepSpec::parse(&MINIMAL.replace(r#""hd_scp""#, r#""tdd""#)).is_err());
    }

    #[test]
    fn preset_sizes() {
        assert_eq!(SweepSpec::preset("fig2").unwrap().sweep.values().len(), 25);
        assert_eq!(SweepSpec::preset("fig3").unwrap().sweep.values().len(), 33);
        assert!(SweepSpec::preset("fig9").is_none());
    }

    #[test]
    fn joint_variables_move_together() {
        let base = SweepSpec::preset("fig2").unwrap().system;
        let b = SweepVar::PDbJoint.apply(&base, 10.0);
        assert_eq!((b.p_u_db, b.p_d_db), (10.0, 10.0));
        let b = SweepVar::CUCDJoint.apply(&base, 3.5);
        assert_eq!((b.c_u, b.c_d), (3.5, 3.5));
    }
}
