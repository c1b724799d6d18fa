use std::collections::BTreeMap;

use crate::cli::config::{SweepSpec, SweepVar};
use crate::error::{Error, Result};
use crate::model::{PowerAllocation, RateResult, SchemeId, SystemParams};
use crate::oracle;
use crate::rates::{self, CranSetup, SicMode};
use crate::spectral::Quadrature;

/// Largest accepted gap between a C-RAN uplink rate and its finite-ring oracle.
pub const ORACLE_RATE_TOLERANCE: f64 = 1e-3;
/// Largest accepted shortfall of the refined power search against the
/// exhaustive grid.
pub const ORACLE_SEARCH_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub value: f64,
    pub scheme: SchemeId,
    pub result: RateResult,
    pub oracle: Option<OracleColumns>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OracleColumns {
    pub r_u: Option<f64>,
    pub r_eq: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub sweep_var: SweepVar,
    pub rows: Vec<Row>,
    pub has_oracle: bool,
}

impl Table {
    pub fn new(sweep_var: SweepVar) -> Self {
        Table {
            sweep_var,
            rows: Vec::new(),
            has_oracle: false,
        }
    }

    /// Rows grouped per scheme, in scheme order.
    pub fn series(&self) -> BTreeMap<SchemeId, Vec<(f64, f64)>> {
        let mut out: BTreeMap<SchemeId, Vec<(f64, f64)>> = BTreeMap::new();
        for row in &self.rows {
            out.entry(row.scheme)
                .or_default()
                .push((row.value, row.result.r_eq));
        }
        out
    }
}

/// Evaluates every scheme at every sweep value. Rows are ordered by sweep
/// value, then by scheme declaration order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Table> {
    spec.validate()?;
    let quad = Quadrature::new(spec.numerics.panels)?;
    let search = spec.numerics.power_search();
    let mut schemes = spec.schemes.clone();
    schemes.sort();
    schemes.dedup();
    let needs_cran = schemes.iter().any(|s| s.is_cran());

    let mut table = Table::new(spec.sweep.var);
    table.has_oracle = spec.numerics.verify;
    let mut setup: Option<CranSetup> = None;
    for value in spec.sweep.values() {
        let params = spec.sweep.var.apply(&spec.system, value).to_params();
        if needs_cran
            && setup
                .as_ref()
                .is_none_or(|s| s.spectrum().alpha() != params.alpha)
        {
            setup = Some(CranSetup::zero_forcing(params.alpha, &quad)?);
        }
        for &scheme in &schemes {
            let result = rates::evaluate(scheme, &params, setup.as_ref(), &search)?;
            let oracle = if spec.numerics.verify {
                Some(oracle_columns(
                    spec,
                    scheme,
                    &params,
                    &result,
                    setup.as_ref(),
                )?)
            } else {
                None
            };
            table.rows.push(Row {
                value,
                scheme,
                result,
                oracle,
            });
        }
    }
    Ok(table)
}

fn oracle_columns(
    spec: &SweepSpec,
    scheme: SchemeId,
    params: &SystemParams,
    result: &RateResult,
    setup: Option<&CranSetup>,
) -> Result<OracleColumns> {
    let cells = spec.numerics.oracle_cells;
    let grid = spec.numerics.oracle_grid;
    let d = &result.diagnostics;
    let mut cols = OracleColumns::default();
    match scheme {
        SchemeId::HdScp => {}
        SchemeId::HdCran => {
            cols.r_u = Some(match d.sigma_u_sq {
                Some(sigma) => oracle::circulant_uplink_rate(
                    params.alpha,
                    params.p_u_max,
                    sigma,
                    cells.max(8),
                )?,
                None => 0.0,
            });
        }
        SchemeId::FdScp | SchemeId::FdScpSic => {
            let sic = sic_of(scheme);
            cols.r_eq = Some(oracle::exhaustive_power_opt(params, sic, grid)?.0);
        }
        SchemeId::FdCran | SchemeId::FdCranSic => {
            let setup = setup.expect("C-RAN rows always have a setup");
            let powers = PowerAllocation {
                p_u: d.p_u_star.unwrap_or(params.p_u_max),
                p_d: d.p_d_star.unwrap_or(params.p_d_max),
            };
            cols.r_u = Some(
                oracle::fd_cran_uplink_oracle(
                    params,
                    powers,
                    cells,
                    oracle::DownlinkCovariance::Shaped,
                )?
                .rate,
            );
            if !spec.numerics.full_power {
                cols.r_eq =
                    Some(oracle::exhaustive_cran_power_opt(params, setup, sic_of(scheme), grid)?.0);
            }
        }
    }
    Ok(cols)
}

fn sic_of(scheme: SchemeId) -> SicMode {
    match scheme {
        SchemeId::FdScpSic | SchemeId::FdCranSic => SicMode::Sic,
        _ => SicMode::TreatAsNoise,
    }
}

/// Checks the oracle columns of a verified table against the agreement
/// thresholds; the error lists every violation.
pub fn verify_table(table: &Table) -> Result<()> {
    let mut violations = Vec::new();
    for row in &table.rows {
        let Some(cols) = row.oracle else { continue };
        if let Some(r_u) = cols.r_u {
            if (r_u - row.result.r_u).abs() > ORACLE_RATE_TOLERANCE {
                violations.push(format!(
                    "{} at {}: uplink {} vs ring oracle {}",
                    row.scheme, row.value, row.result.r_u, r_u
                ));
            }
        }
        if let Some(r_eq) = cols.r_eq {
            if row.result.r_eq < r_eq - ORACLE_SEARCH_TOLERANCE {
                violations.push(format!(
                    "{} at {}: equal rate {} below exhaustive grid {}",
                    row.scheme, row.value, row.result.r_eq, r_eq
                ));
            }
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::Verification(violations.join("; ")))
    }
}
