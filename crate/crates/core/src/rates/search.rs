//! Max-min search over the transmit power box `[0, P_u] x [0, P_d]`.
//!
//! The objective is first sampled on a uniform coarse grid. Refinement then
//! works one axis at a time, which follows the thin diagonal ridges that a
//! `min` of two rates produces:
//!
//! - every `p_d` row of the grid is refined in `p_u`, giving a profile of
//!   the best value per `p_d`;
//! - the profile is refined in `p_d`, each new `p_d` solving its own `p_u`
//!   line search warm-started from the neighbouring rows.
//!
//! A line search starts from the best few local maxima of its samples. Each
//! pass samples a window of +/- one current step at `step / zoom` spacing
//! and re-centres on the window's best point until the incumbent stops
//! moving; the step then shrinks by the zoom factor. A golden-section
//! polish inside the final bracket finishes the line. Among values within
//! [`TIE_TOLERANCE`] of the best, the lexicographically smallest
//! `(p_u, p_d)` wins.

use serde::{Deserialize, Serialize};

pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerSearch {
    /// Points per axis of the coarse grid, endpoints included.
    pub coarse: usize,
    pub refine_passes: usize,
    /// Step reduction per refinement pass.
    pub zoom: usize,
    /// Local maxima refined per line search.
    pub starts: usize,
    /// Skip the search and operate at the power budgets.
    pub full_power: bool,
}

impl Default for PowerSearch {
    fn default() -> Self {
        PowerSearch {
            coarse: 64,
            refine_passes: 2,
            zoom: 8,
            starts: 2,
            full_power: false,
        }
    }
}

impl PowerSearch {
    pub fn full_power() -> Self {
        PowerSearch {
            full_power: true,
            ..Default::default()
        }
    }

    pub fn with_coarse(coarse: usize) -> Self {
        PowerSearch {
            coarse,
            ..Default::default()
        }
    }
}

/// Best grid point of a max-min search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOutcome {
    pub value: f64,
    pub p_u: f64,
    pub p_d: f64,
}

/// Evaluates `objective` on a `points x points` uniform grid over the box
/// and returns its best point under the tie-break rule.
pub fn grid_maximize(
    p_u_max: f64,
    p_d_max: f64,
    points: usize,
    objective: impl Fn(f64, f64) -> f64,
) -> SearchOutcome {
    let us = linspace(0.0, p_u_max, points);
    let ds = linspace(0.0, p_d_max, points);
    let mut samples = Vec::with_capacity(us.len() * ds.len());
    for &p_u in &us {
        for &p_d in &ds {
            samples.push(SearchOutcome {
                value: objective(p_u, p_d),
                p_u,
                p_d,
            });
        }
    }
    select(samples)
}

/// Coarse grid plus axis-wise refinement, see the module docs.
pub fn maximize(
    p_u_max: f64,
    p_d_max: f64,
    search: &PowerSearch,
    objective: impl Fn(f64, f64) -> f64,
) -> SearchOutcome {
    if search.full_power {
        return SearchOutcome {
            value: objective(p_u_max, p_d_max),
            p_u: p_u_max,
            p_d: p_d_max,
        };
    }
    let coarse = search.coarse.max(2);
    if search.refine_passes == 0 {
        return grid_maximize(p_u_max, p_d_max, coarse, objective);
    }
    let us = linspace(0.0, p_u_max, coarse);
    let ds = linspace(0.0, p_d_max, coarse);
    let u_line = Line::new(p_u_max, coarse, search);
    let d_line = Line::new(p_d_max, coarse, search);

    let rows: Vec<SearchOutcome> = ds
        .iter()
        .map(|&p_d| {
            let samples: Vec<Point> = us
                .iter()
                .map(|&p_u| Point::new(p_u, objective(p_u, p_d)))
                .collect();
            let seeds = seeds(&samples, search.starts);
            let best = u_line.search(seeds, |p_u| (objective(p_u, p_d), 0.0));
            SearchOutcome {
                value: best.value,
                p_u: best.x,
                p_d,
            }
        })
        .collect();

    let mut candidates = rows.clone();
    if ds.len() > 1 {
        // Profile value at an arbitrary p_d: p_u line searches from the
        // argmax of the rows on either side.
        let profile = |p_d: f64| {
            let j = ds.partition_point(|&d| d <= p_d).clamp(1, ds.len() - 1);
            let mut starts: Vec<Point> = [rows[j - 1].p_u, rows[j].p_u]
                .iter()
                .map(|&p_u| Point::new(p_u, objective(p_u, p_d)))
                .collect();
            starts.sort_by(|a, b| a.x.total_cmp(&b.x));
            starts.dedup_by(|a, b| a.x == b.x);
            let best = u_line.search(starts, |p_u| (objective(p_u, p_d), 0.0));
            (best.value, best.x)
        };
        let samples: Vec<Point> = rows
            .iter()
            .map(|r| Point {
                x: r.p_d,
                value: r.value,
                aux: r.p_u,
            })
            .collect();
        let best = d_line.search(seeds(&samples, search.starts), profile);
        candidates.push(SearchOutcome {
            value: best.value,
            p_u: best.aux,
            p_d: best.x,
        });
    }
    candidates.sort_by(|a, b| a.p_u.total_cmp(&b.p_u).then(a.p_d.total_cmp(&b.p_d)));
    select(candidates)
}

/// A line-search sample; `aux` carries the inner argmax of a profile.
#[derive(Debug, Clone, Copy)]
struct Point {
    x: f64,
    value: f64,
    aux: f64,
}

impl Point {
    fn new(x: f64, value: f64) -> Self {
        Point { x, value, aux: 0.0 }
    }
}

/// One-dimensional zoom search on `[0, max]`.
struct Line {
    max: f64,
    step: f64,
    passes: usize,
    zoom: usize,
    max_moves: usize,
}

impl Line {
    fn new(max: f64, coarse: usize, search: &PowerSearch) -> Self {
        Line {
            max,
            step: max / (coarse - 1) as f64,
            passes: search.refine_passes,
            zoom: search.zoom.max(2),
            // A pass may walk at most across the whole interval.
            max_moves: 2 * coarse,
        }
    }

    /// Refines every start and returns the best result; ties go to the
    /// smallest `x`.
    fn search(&self, starts: Vec<Point>, f: impl Fn(f64) -> (f64, f64)) -> Point {
        let mut finals: Vec<Point> = starts.into_iter().map(|p| self.refine(p, &f)).collect();
        finals.sort_by(|a, b| a.x.total_cmp(&b.x));
        select_point(finals)
    }

    fn refine(&self, mut best: Point, f: &impl Fn(f64) -> (f64, f64)) -> Point {
        let eval = |x: f64| {
            let (value, aux) = f(x);
            Point { x, value, aux }
        };
        let mut step = self.step;
        for _ in 0..self.passes {
            for _ in 0..self.max_moves {
                let mut samples: Vec<Point> =
                    window_points(best.x, step, self.max, 2 * self.zoom + 1)
                        .into_iter()
                        .filter(|&x| x != best.x)
                        .map(eval)
                        .collect();
                samples.push(best);
                samples.sort_by(|a, b| a.x.total_cmp(&b.x));
                let next = select_point(samples);
                let moved = next.value > best.value + TIE_TOLERANCE;
                best = next;
                if !moved {
                    break;
                }
            }
            step /= self.zoom as f64;
        }
        let lo = (best.x - step * self.zoom as f64).max(0.0);
        let hi = (best.x + step * self.zoom as f64).min(self.max);
        let polished = golden_section(lo, hi, self.max * 1e-12, eval);
        if polished.value > best.value + TIE_TOLERANCE {
            polished
        } else {
            best
        }
    }
}

fn golden_section(mut lo: f64, mut hi: f64, tol: f64, eval: impl Fn(f64) -> Point) -> Point {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut a = eval(hi - inv_phi * (hi - lo));
    let mut b = eval(lo + inv_phi * (hi - lo));
    while hi - lo > tol && b.x > a.x {
        if a.value < b.value {
            lo = a.x;
            a = b;
            b = eval(lo + inv_phi * (hi - lo));
        } else {
            hi = b.x;
            b = a;
            a = eval(hi - inv_phi * (hi - lo));
        }
    }
    if b.value > a.value {
        b
    } else {
        a
    }
}

/// The best few local maxima of an ordered sample line, best first, always
/// including the global best under the tie-break rule.
fn seeds(samples: &[Point], count: usize) -> Vec<Point> {
    let mut peaks: Vec<Point> = (0..samples.len())
        .filter(|&i| {
            let v = samples[i].value;
            !v.is_nan()
                && (i == 0 || samples[i - 1].value <= v)
                && (i + 1 == samples.len() || samples[i + 1].value <= v)
        })
        .map(|i| samples[i])
        .collect();
    peaks.sort_by(|a, b| b.value.total_cmp(&a.value).then(a.x.total_cmp(&b.x)));
    peaks.truncate(count.max(1));
    let global = select_point(samples.to_vec());
    if !peaks.iter().any(|p| p.x == global.x) {
        peaks.push(global);
    }
    peaks
}

fn select_point(samples: Vec<Point>) -> Point {
    let top = samples
        .iter()
        .map(|s| s.value)
        .filter(|v| !v.is_nan())
        .fold(f64::NEG_INFINITY, f64::max);
    samples
        .into_iter()
        .find(|s| s.value >= top - TIE_TOLERANCE)
        .expect("line search never runs on an empty sample set")
}

/// Picks the first sample (in the given order) within the tie tolerance of
/// the maximum. NaN objective values never win.
fn select(samples: Vec<SearchOutcome>) -> SearchOutcome {
    let top = samples
        .iter()
        .map(|s| s.value)
        .filter(|v| !v.is_nan())
        .fold(f64::NEG_INFINITY, f64::max);
    samples
        .into_iter()
        .find(|s| s.value >= top - TIE_TOLERANCE)
        .expect("search grid is never empty")
}

fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points < 2 || hi == lo {
        return vec![hi];
    }
    let step = (hi - lo) / (points - 1) as f64;
    // Pin the last point to the budget itself so full power is always tried.
    (0..points)
        .map(|i| {
            if i + 1 == points {
                hi
            } else {
                lo + i as f64 * step
            }
        })
        .collect()
}

fn window_points(center: f64, step: f64, max: f64, points: usize) -> Vec<f64> {
    let lo = (center - step).max(0.0);
    let hi = (center + step).min(max);
    let mut v = linspace(lo, hi, points);
    v.dedup();
    v
}
