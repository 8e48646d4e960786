//! Randomized search for SONC polynomials close to the separation witness.
//!
//! Each restart fixes a handful of circuit shapes over an even support pool
//! and runs a coordinate search over their coefficients in floating point.
//! Outer coefficients are searched in log scale and the inner coefficient as
//! a fraction `s` of the circuit number, so `|s| <= 1` keeps a part
//! nonnegative. At checkpoints the best candidate is rationalized, pushed
//! into the exact nonnegativity region, verified as a SONC certificate and
//! measured exactly against the certified bound.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::certificate::{random_shape, verify, SoncCertificate};
use crate::circuit::CircuitData;
use crate::polycore::{BoxRegion, ExponentVector, PolyError, SparsePolynomial};
use crate::rational::{format_rational, rationalize, to_f64, Rational};
use crate::separation::{SeparatingFunctional, SeparationReport};

const LOG_COEFF_RANGE: (f64, f64) = (-40.0, 12.0);

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid attack configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone)]
pub struct AttackConfig {
    pub seed: u64,
    pub parts: usize,
    /// Even outer exponents available to the search; empty means every even
    /// point of `[0, 2d]^n`.
    pub pool: Vec<ExponentVector>,
    /// Iterations per restart.
    pub budget: usize,
    pub step_initial: f64,
    pub step_final: f64,
    /// Grid points per axis for the sup-norm estimate.
    pub resolution: usize,
    pub restarts: usize,
    /// Iterations between exact verifications.
    pub checkpoint_every: usize,
    /// Worker threads for restarts; `None` lets rayon decide.
    pub threads: Option<usize>,
}

impl Default for AttackConfig {
    fn default() -> Self {
        AttackConfig {
            seed: 0,
            parts: 6,
            pool: Vec::new(),
            budget: 10_000,
            step_initial: 1.0,
            step_final: 1e-3,
            resolution: 17,
            restarts: 1,
            checkpoint_every: 1_000,
            threads: None,
        }
    }
}

impl AttackConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: &str| Err(ExperimentError::Config(m.to_string()));
        if self.budget < 1 {
            return bad("budget must be at least 1");
        }
        if self.resolution < 8 {
            return bad("grid resolution must be at least 8 points per axis");
        }
        if self.parts < 1 {
            return bad("at least one part is required");
        }
        if self.restarts < 1 {
            return bad("at least one restart is required");
        }
        if self.checkpoint_every < 1 {
            return bad("checkpoint interval must be at least 1");
        }
        if !(self.step_initial > 0.0 && self.step_final > 0.0) {
            return bad("step sizes must be positive");
        }
        if self.pool.iter().any(|a| !a.is_even()) {
            return bad("support pool must contain even exponents only");
        }
        if self.threads == Some(0) {
            return bad("thread count must be positive");
        }
        Ok(())
    }
}

/// Every even lattice point of `[0, max_exponent]^n`.
pub fn box_pool(n: usize, max_exponent: u32) -> Vec<ExponentVector> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u32>| {
                (0..=max_exponent).step_by(2).map(move |e| {
                    let mut q = p.clone();
                    q.push(e);
                    q
                })
            })
            .collect();
    }
    let mut pool: Vec<ExponentVector> = out.into_iter().map(ExponentVector::new).collect();
    pool.sort();
    pool
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub restart: usize,
    pub iteration: usize,
    pub grid_norm_float: f64,
    #[serde(with = "crate::rational::serde_str")]
    pub four_point_gap: Rational,
    pub margin_float: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartSummary {
    pub restart: usize,
    pub seed: u64,
    #[serde(with = "crate::rational::serde_str")]
    pub best_gap: Rational,
    pub best_grid_norm: f64,
    pub verified_candidates: usize,
    pub rationalization_failures: usize,
    pub alarm: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackResult {
    #[serde(with = "crate::rational::serde_str")]
    pub best_gap: Rational,
    pub best_gap_float: f64,
    pub best_grid_norm: f64,
    #[serde(with = "crate::rational::serde_str")]
    pub lower_bound: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub margin: Rational,
    pub margin_float: f64,
    /// Some verified SONC candidate came closer than the certified bound, or
    /// a rationalized candidate failed verification.
    pub alarm: bool,
    pub best_restart: usize,
    pub best_candidate: Vec<String>,
    pub restarts: Vec<RestartSummary>,
    pub trace: Vec<TraceRow>,
}

impl AttackResult {
    pub fn trace_csv(&self) -> String {
        let mut out = String::from(
            "iteration,grid_norm_float,four_point_gap_rational,margin_float,restart\n",
        );
        for row in &self.trace {
            out.push_str(&format!(
                "{},{:e},{},{:e},{}\n",
                row.iteration,
                row.grid_norm_float,
                format_rational(&row.four_point_gap),
                row.margin_float,
                row.restart
            ));
        }
        out
    }
}

/// Largest `|f|` over the uniform grid on `K` plus `extra` points, exact.
pub fn grid_sup_norm_exact(
    f: &SparsePolynomial,
    region: &BoxRegion,
    resolution: usize,
    extra: &[Vec<Rational>],
) -> Result<Rational, PolyError> {
    if f.n() != region.n() {
        return Err(PolyError::DimensionMismatch {
            expected: region.n(),
            found: f.n(),
        });
    }
    let mut best = Rational::zero();
    for p in region.grid(resolution)?.iter().chain(extra) {
        let v = f.evaluate(p)?.abs();
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

/// `max |f|` over the uniform grid with `resolution` points per axis.
pub fn grid_sup_norm(
    f: &SparsePolynomial,
    region: &BoxRegion,
    resolution: usize,
) -> Result<f64, PolyError> {
    grid_sup_norm_exact(f, region, resolution, &[]).map(|v| to_f64(&v))
}

struct Shape {
    template: CircuitData,
    lambda: Vec<f64>,
    /// `u^(j * alpha_1)` for each outer exponent and `j = 0..4`.
    outer_vals: Vec<[f64; 4]>,
    inner_vals: [f64; 4],
}

impl Shape {
    fn new(template: CircuitData, u: f64) -> Self {
        let vals = |e: &ExponentVector| -> [f64; 4] {
            std::array::from_fn(|j| u.powi((j as u32 * e[0]) as i32))
        };
        Shape {
            lambda: template.weights().iter().map(to_f64).collect(),
            outer_vals: template.outer().iter().map(vals).collect(),
            inner_vals: vals(template.inner()),
            template,
        }
    }

    fn theta(&self, log_c: &[f64]) -> f64 {
        self.lambda
            .iter()
            .zip(log_c)
            .map(|(l, c)| l * (c - l.ln()))
            .sum::<f64>()
            .exp()
    }

    fn values(&self, log_c: &[f64], s: f64) -> [f64; 4] {
        let mut v = [0.0; 4];
        for (c, ov) in log_c.iter().zip(&self.outer_vals) {
            let c = c.exp();
            for j in 0..4 {
                v[j] += c * ov[j];
            }
        }
        if !self.template.is_degenerate() {
            let cb = s * self.theta(log_c);
            for (vj, inner) in v.iter_mut().zip(&self.inner_vals) {
                *vj += cb * inner;
            }
        }
        v
    }

    fn s_range(&self) -> (f64, f64) {
        if self.template.is_degenerate() {
            (0.0, 0.0)
        } else if self.template.inner().is_even() {
            (-1.0, 4.0)
        } else {
            (-1.0, 1.0)
        }
    }

    /// Exact parts for the float state; every returned part is a
    /// nonnegative circuit polynomial.
    fn rationalize(&self, log_c: &[f64], s: f64) -> Vec<SparsePolynomial> {
        let floor = Rational::new(1.into(), (1u64 << 32).into());
        let coeffs: Vec<Rational> = log_c
            .iter()
            .map(|c| {
                let r = rationalize(c.exp()).unwrap_or_else(|| floor.clone());
                if r.is_positive() {
                    r
                } else {
                    floor.clone()
                }
            })
            .collect();
        let cb = if self.template.is_degenerate() {
            Rational::zero()
        } else {
            rationalize(s * self.theta(log_c)).unwrap_or_else(Rational::zero)
        };
        let circuit = self
            .template
            .with_coeffs(coeffs, cb)
            .expect("positive outer coefficients")
            .project_inner_coeff();
        if circuit.inner_coeff().is_zero() && !circuit.is_degenerate() {
            circuit
                .outer()
                .iter()
                .zip(circuit.outer_coeffs())
                .map(|(a, c)| SparsePolynomial::monomial(a.clone(), c.clone()))
                .collect()
        } else {
            vec![circuit.to_polynomial()]
        }
    }
}

fn four_point_error(values: &[f64; 4], target: &[f64; 4]) -> f64 {
    values
        .iter()
        .zip(target)
        .map(|(g, f)| (g - f).abs())
        .fold(0.0, f64::max)
}

struct RestartOutcome {
    summary: RestartSummary,
    best_parts: Vec<SparsePolynomial>,
    trace: Vec<TraceRow>,
}

fn run_restart(
    report: &SeparationReport,
    functional: &SeparatingFunctional,
    cfg: &AttackConfig,
    pool: &[ExponentVector],
    restart: usize,
) -> RestartOutcome {
    let seed = cfg.seed.wrapping_add(restart as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = to_f64(&report.u);
    let n = report.n;

    let shapes: Vec<Shape> = (0..cfg.parts)
        .map(|_| {
            let template = match random_shape(&mut rng, pool, n) {
                Some((outer, inner)) if rng.random_bool(0.8) => {
                    let ones = vec![Rational::from_integer(1.into()); outer.len()];
                    CircuitData::new(outer, ones, inner, Rational::zero())
                        .expect("random shapes are circuits")
                }
                _ => {
                    let a = pool[rng.random_range(0..pool.len())].clone();
                    CircuitData::new(
                        vec![a.clone()],
                        vec![Rational::from_integer(1.into())],
                        a,
                        Rational::zero(),
                    )
                    .expect("even monomial")
                }
            };
            Shape::new(template, u)
        })
        .collect();

    let target: [f64; 4] =
        std::array::from_fn(|j| to_f64(&report.witness.evaluate(&functional.points()[j]).unwrap()));

    // start near the zero polynomial
    let mut log_c: Vec<Vec<f64>> = shapes
        .iter()
        .map(|s| vec![LOG_COEFF_RANGE.0 / 2.0; s.outer_vals.len()])
        .collect();
    let mut inner_s: Vec<f64> = vec![0.0; shapes.len()];
    let mut contrib: Vec<[f64; 4]> = shapes
        .iter()
        .zip(&log_c)
        .zip(&inner_s)
        .map(|((s, c), &t)| s.values(c, t))
        .collect();
    let total = |contrib: &[[f64; 4]]| -> [f64; 4] {
        std::array::from_fn(|j| contrib.iter().map(|c| c[j]).sum())
    };
    let mut current = four_point_error(&total(&contrib), &target);

    let extra: Vec<Vec<Rational>> = functional.points().to_vec();
    let mut summary = RestartSummary {
        restart,
        seed,
        best_gap: Rational::zero(),
        best_grid_norm: f64::INFINITY,
        verified_candidates: 0,
        rationalization_failures: 0,
        alarm: false,
    };
    let mut best_gap: Option<Rational> = None;
    let mut best_parts = Vec::new();
    let mut trace = Vec::new();
    let mut dirty = true;

    let ratio = (cfg.step_final / cfg.step_initial).max(f64::MIN_POSITIVE);
    for it in 0..cfg.budget {
        let frac = if cfg.budget > 1 {
            it as f64 / (cfg.budget - 1) as f64
        } else {
            0.0
        };
        let step = cfg.step_initial * ratio.powf(frac);

        let p = rng.random_range(0..shapes.len());
        let shape = &shapes[p];
        let coords = shape.outer_vals.len() + usize::from(!shape.template.is_degenerate());
        let k = rng.random_range(0..coords);
        let delta: f64 = step * (rng.random::<f64>() * 2.0 - 1.0);
        let mut cand_c = log_c[p].clone();
        let mut cand_s = inner_s[p];
        if k < cand_c.len() {
            cand_c[k] = (cand_c[k] + delta).clamp(LOG_COEFF_RANGE.0, LOG_COEFF_RANGE.1);
        } else {
            let (lo, hi) = shape.s_range();
            cand_s = (cand_s + delta).clamp(lo, hi);
        }
        let cand_vals = shape.values(&cand_c, cand_s);
        let old = std::mem::replace(&mut contrib[p], cand_vals);
        let err = four_point_error(&total(&contrib), &target);
        if err <= current {
            if err < current {
                dirty = true;
            }
            current = err;
            log_c[p] = cand_c;
            inner_s[p] = cand_s;
        } else {
            contrib[p] = old;
        }

        let last = it + 1 == cfg.budget;
        if dirty && ((it + 1) % cfg.checkpoint_every == 0 || last) {
            dirty = false;
            let parts: Vec<SparsePolynomial> = shapes
                .iter()
                .zip(&log_c)
                .zip(&inner_s)
                .flat_map(|((s, c), &t)| s.rationalize(c, t))
                .collect();
            let cert = SoncCertificate::from_parts(n, parts).expect("parts share dimension");
            if !verify(&cert).ok {
                summary.rationalization_failures += 1;
                summary.alarm = true;
                continue;
            }
            summary.verified_candidates += 1;
            let g = cert.total();
            let gap = functional
                .four_point_gap(&report.witness, &g)
                .expect("dimensions match");
            if gap < report.lower_bound {
                summary.alarm = true;
            }
            if best_gap.as_ref().is_none_or(|b| &gap < b) {
                let diff = &report.witness - &g;
                let norm = grid_sup_norm_exact(&diff, &report.region, cfg.resolution, &extra)
                    .expect("dimensions match");
                let norm_f = to_f64(&norm);
                summary.best_grid_norm = summary.best_grid_norm.min(norm_f);
                trace.push(TraceRow {
                    restart,
                    iteration: it + 1,
                    grid_norm_float: norm_f,
                    margin_float: to_f64(&(&gap - &report.lower_bound)),
                    four_point_gap: gap.clone(),
                });
                best_gap = Some(gap);
                best_parts = cert.parts().to_vec();
            }
        }
    }
    summary.best_gap = best_gap.unwrap_or_else(|| report.witness_at_u.clone());
    RestartOutcome {
        summary,
        best_parts,
        trace,
    }
}

/// Runs `cfg.restarts` independent searches (in parallel) and merges them by
/// smallest exact gap, ties going to the lower restart index.
pub fn attack(
    report: &SeparationReport,
    cfg: &AttackConfig,
) -> Result<AttackResult, ExperimentError> {
    cfg.validate()?;
    let functional = report.functional();
    let pool = if cfg.pool.is_empty() {
        box_pool(report.n, 2 * report.d)
    } else {
        cfg.pool.clone()
    };
    if pool.iter().any(|a| a.dim() != report.n) {
        return Err(ExperimentError::Config(
            "support pool dimension differs from the report".to_string(),
        ));
    }
    let run = || -> Vec<RestartOutcome> {
        (0..cfg.restarts)
            .into_par_iter()
            .map(|r| run_restart(report, &functional, cfg, &pool, r))
            .collect()
    };
    let outcomes = match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| ExperimentError::Config(e.to_string()))?
            .install(run),
        None => run(),
    };

    let best = outcomes
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.summary.best_gap.cmp(&b.summary.best_gap).then(i.cmp(j)))
        .map(|(i, _)| i)
        .expect("at least one restart");
    let best_gap = outcomes[best].summary.best_gap.clone();
    let margin = &best_gap - &report.lower_bound;
    let best_grid_norm = outcomes
        .iter()
        .map(|o| o.summary.best_grid_norm)
        .fold(f64::INFINITY, f64::min);
    Ok(AttackResult {
        best_gap_float: to_f64(&best_gap),
        best_grid_norm,
        lower_bound: report.lower_bound.clone(),
        margin_float: to_f64(&margin),
        alarm: outcomes.iter().any(|o| o.summary.alarm) || margin.is_negative(),
        margin,
        best_gap,
        best_restart: best,
        best_candidate: outcomes[best]
            .best_parts
            .iter()
            .map(ToString::to_string)
            .collect(),
        trace: outcomes.iter().flat_map(|o| o.trace.clone()).collect(),
        restarts: outcomes.into_iter().map(|o| o.summary).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::separation::separation_bound;

    fn standard_report() -> SeparationReport {
        let k = BoxRegion::cube(1, int(-2), int(2)).unwrap();
        separation_bound(&k, 3, None).unwrap()
    }

    #[test]
    fn sup_norm_examples() {
        let k = BoxRegion::cube(1, int(-2), int(2)).unwrap();
        assert_eq!(
            grid_sup_norm(&SparsePolynomial::one(1), &k, 9).unwrap(),
            1.0
        );
        let x = SparsePolynomial::variable(1, 0);
        for res in [2, 5, 8, 33] {
            assert_eq!(grid_sup_norm(&x, &k, res).unwrap(), 2.0);
        }
        assert!(grid_sup_norm(&x, &k, 1).is_err());
        assert!(grid_sup_norm(&SparsePolynomial::one(2), &k, 8).is_err());
    }

    #[test]
    fn sup_norm_of_witness_attained_at_left_endpoint() {
        let r = standard_report();
        let k = &r.region;
        let res = 41;
        // oracle: exact values at every grid point
        let values: Vec<Rational> = k
            .grid(res)
            .unwrap()
            .iter()
            .map(|p| r.witness.evaluate(p).unwrap().abs())
            .collect();
        let max = values.iter().max().unwrap().clone();
        assert_eq!(max, r.witness.evaluate(&[int(-2)]).unwrap());
        assert_eq!(grid_sup_norm_exact(&r.witness, k, res, &[]).unwrap(), max);
    }

    #[test]
    fn sup_norm_monotone_on_nested_grids() {
        let r = standard_report();
        let g = &r.witness - &SparsePolynomial::constant(1, ratio(7, 3));
        let coarse = grid_sup_norm_exact(&g, &r.region, 9, &[]).unwrap();
        let fine = grid_sup_norm_exact(&g, &r.region, 17, &[]).unwrap();
        let finer = grid_sup_norm_exact(&g, &r.region, 33, &[]).unwrap();
        assert!(coarse <= fine && fine <= finer);
    }

    #[test]
    fn config_validation() {
        let r = standard_report();
        let mut cfg = AttackConfig::default();
        cfg.resolution = 4;
        assert!(matches!(attack(&r, &cfg), Err(ExperimentError::Config(_))));
        cfg = AttackConfig {
            budget: 0,
            ..AttackConfig::default()
        };
        assert!(attack(&r, &cfg).is_err());
        cfg = AttackConfig {
            parts: 0,
            ..AttackConfig::default()
        };
        assert!(attack(&r, &cfg).is_err());
        cfg = AttackConfig {
            pool: vec![ExponentVector::new(vec![1])],
            ..AttackConfig::default()
        };
        assert!(attack(&r, &cfg).is_err());
    }

    #[test]
    fn single_iteration_is_near_zero_candidate() {
        let r = standard_report();
        let cfg = AttackConfig {
            budget: 1,
            parts: 1,
            ..AttackConfig::default()
        };
        let res = attack(&r, &cfg).unwrap();
        assert!(!res.alarm);
        assert!(res.best_gap >= r.lower_bound);
        // g is tiny, so the gap sits close to f(u)
        let rel = (res.best_gap_float - to_f64(&r.witness_at_u)).abs() / to_f64(&r.witness_at_u);
        assert!(rel < 1e-3, "rel = {rel}");
    }

    #[test]
    fn deterministic_and_sound() {
        let r = standard_report();
        let cfg = AttackConfig {
            budget: 3_000,
            restarts: 2,
            checkpoint_every: 250,
            ..AttackConfig::default()
        };
        let a = attack(&r, &cfg).unwrap();
        let b = attack(&r, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(!a.alarm);
        assert!(a.margin >= Rational::zero());
        for row in &a.trace {
            assert!(row.four_point_gap >= r.lower_bound);
            assert!(row.grid_norm_float >= to_f64(&row.four_point_gap) * (1.0 - 1e-12));
        }
        assert!(a.trace_csv().starts_with("iteration,grid_norm_float"));
    }

    #[test]
    fn box_pool_counts() {
        assert_eq!(box_pool(1, 6).len(), 4);
        assert_eq!(box_pool(2, 6).len(), 16);
    }
}
