//! Floating-point checks of the analytic facts behind the exact formula.
//!
//! Nothing in the exact pipeline depends on this module. It evaluates, in
//! log-coordinates `y in M_R`,
//!
//! * the potential `u(y) = log sum_i exp(<v_i, y>)` over the lattice points
//!   `v_i` of the anticanonical polytope,
//! * the model integral `int exp(-alpha <v, y>) / (sum_i exp(<v_i, y>))^(1 - alpha) dy`
//!   over growing boxes, classifying it as convergent or divergent from how
//!   the estimates grow with the cutoff,
//! * the density `exp(u) det(Hess u)`, which stays between positive
//!   constants,
//! * the integrals of the extremal family `log((exp(<v, y>) + eps) / exp(u))`.
//!
//! All sums are accumulated in log space with a fixed summation order, so
//! results are reproducible bit for bit.

use nalgebra::DMatrix;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{RatVector, Rational};
use crate::polytope::{lattice_points, AnticanonicalPolytope, Gauge, PolytopeError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("alpha must lie strictly between 0 and 1, got {0}")]
    AlphaOutOfRange(String),
    #[error("expected a vector of dimension {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("cutoffs must be positive and strictly increasing")]
    BadCutoffs,
    #[error("epsilons must be positive and strictly decreasing")]
    BadEpsilons,
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// Quadrature and classification settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleConfig {
    /// Grid spacing of the midpoint rule (rounded down so cells tile the box).
    pub step: f64,
    /// Relative increment between the last two cutoffs below which the
    /// integral is declared convergent.
    pub saturation_tolerance: f64,
    /// Minimum ratio between the last two estimates for a divergent verdict.
    pub growth_factor: f64,
    /// Largest number of grid cells evaluated for a single box.
    pub max_cells: u64,
    /// Largest lattice rank integrated.
    pub max_dim: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            step: 0.5,
            saturation_tolerance: 0.01,
            growth_factor: 1.5,
            max_cells: 4_000_000,
            max_dim: 3,
        }
    }
}

/// Exponents of the potential: the lattice points of the polytope.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialData {
    dim: usize,
    exponents: Vec<Vec<f64>>,
}

impl PotentialData {
    pub fn new(dim: usize, exponents: Vec<Vec<f64>>) -> Self {
        assert!(exponents.iter().all(|e| e.len() == dim), "exponent dimension");
        assert!(!exponents.is_empty(), "at least one exponent");
        PotentialData { dim, exponents }
    }

    pub fn from_polytope(p: &AnticanonicalPolytope) -> Result<Self, OracleError> {
        let exponents = lattice_points(p, 1)?
            .into_iter()
            .map(|pt| pt.into_iter().map(|c| c as f64).collect())
            .collect();
        Ok(PotentialData { dim: p.dim(), exponents })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn exponents(&self) -> &[Vec<f64>] {
        &self.exponents
    }

    fn pairings(&self, y: &[f64]) -> Vec<f64> {
        self.exponents.iter().map(|e| dot(e, y)).collect()
    }

    /// `log sum_i exp(<v_i, y>)`.
    pub fn log_potential(&self, y: &[f64]) -> f64 {
        log_sum_exp(&self.pairings(y))
    }

    /// Softmax weights `p_i ∝ exp(<v_i, y>)` and the log-normalizer.
    fn weights(&self, y: &[f64]) -> (Vec<f64>, f64) {
        let s = self.pairings(y);
        let lse = log_sum_exp(&s);
        (s.iter().map(|x| (x - lse).exp()).collect(), lse)
    }

    /// Hessian of the potential: the covariance of the exponents under the
    /// softmax weights, accumulated pairwise to avoid cancellation.
    pub fn hessian(&self, y: &[f64]) -> DMatrix<f64> {
        let (w, _) = self.weights(y);
        let n = self.dim;
        let mut h = DMatrix::zeros(n, n);
        for i in 0..self.exponents.len() {
            for j in i + 1..self.exponents.len() {
                let pij = w[i] * w[j];
                if pij == 0.0 {
                    continue;
                }
                let d: Vec<f64> = (0..n).map(|k| self.exponents[i][k] - self.exponents[j][k]).collect();
                for a in 0..n {
                    for b in 0..n {
                        h[(a, b)] += pij * d[a] * d[b];
                    }
                }
            }
        }
        h
    }

    /// `log det Hess u(y)`.
    pub fn log_det_hessian(&self, y: &[f64]) -> f64 {
        self.hessian(y).determinant().ln()
    }

    /// `exp(u(y)) det Hess u(y)`.
    pub fn hessian_density(&self, y: &[f64]) -> f64 {
        (self.log_potential(y) + self.log_det_hessian(y)).exp()
    }
}

pub fn hessian_density(pot: &PotentialData, y: &[f64]) -> f64 {
    pot.hessian_density(y)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || max == f64::INFINITY {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// `log(exp(a) + exp(b))`.
fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Running sum of `exp(term)` stored as `scale * exp(shift)`.
#[derive(Debug, Clone, Copy)]
struct LogAccumulator {
    shift: f64,
    scale: f64,
}

impl LogAccumulator {
    const EMPTY: LogAccumulator = LogAccumulator { shift: f64::NEG_INFINITY, scale: 0.0 };

    fn push(&mut self, term: f64) {
        if term == f64::NEG_INFINITY {
            return;
        }
        if term > self.shift {
            self.scale = self.scale * (self.shift - term).exp() + 1.0;
            self.shift = term;
        } else {
            self.scale += (term - self.shift).exp();
        }
    }

    fn merge(self, other: LogAccumulator) -> LogAccumulator {
        if other.shift == f64::NEG_INFINITY {
            return self;
        }
        if self.shift == f64::NEG_INFINITY {
            return other;
        }
        if other.shift > self.shift {
            LogAccumulator {
                shift: other.shift,
                scale: other.scale + self.scale * (self.shift - other.shift).exp(),
            }
        } else {
            LogAccumulator {
                shift: self.shift,
                scale: self.scale + other.scale * (other.shift - self.shift).exp(),
            }
        }
    }

    fn ln(self) -> f64 {
        self.shift + self.scale.ln()
    }
}

/// Midpoint-rule estimate of `log int_{[-R, R]^n} exp(log_integrand(y)) dy`,
/// or `None` when the grid would exceed the cell budget.
fn log_box_integral<F>(dim: usize, cutoff: f64, config: &OracleConfig, log_integrand: F) -> Option<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let per_axis = (2.0 * cutoff / config.step).ceil().max(1.0) as u64;
    let cells = per_axis.checked_pow(dim as u32)?;
    if cells > config.max_cells || dim == 0 {
        return None;
    }
    let h = 2.0 * cutoff / per_axis as f64;
    let centre = |i: u64| -cutoff + (i as f64 + 0.5) * h;
    let log_cell = (dim as f64) * h.ln();
    let inner = per_axis.pow(dim as u32 - 1);

    // one slab per index of the first axis, merged in index order
    let slabs: Vec<LogAccumulator> = (0..per_axis)
        .into_par_iter()
        .map(|first| {
            let mut acc = LogAccumulator::EMPTY;
            let mut y = vec![0.0; dim];
            y[0] = centre(first);
            for rest in 0..inner {
                let mut r = rest;
                for k in (1..dim).rev() {
                    y[k] = centre(r % per_axis);
                    r /= per_axis;
                }
                acc.push(log_integrand(&y));
            }
            acc
        })
        .collect();
    let total = slabs.into_iter().fold(LogAccumulator::EMPTY, LogAccumulator::merge);
    Some(total.ln() + log_cell)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Convergent,
    Divergent,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stage {
    pub cutoff: f64,
    pub log_estimate: f64,
}

impl Stage {
    /// May be infinite when the integral overflows; the log is always finite.
    pub fn estimate(&self) -> f64 {
        self.log_estimate.exp()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceVerdict {
    pub verdict: Verdict,
    pub estimates: Vec<Stage>,
    /// Ratio of the last two estimates (NaN with fewer than two stages).
    pub growth_ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn classify(estimates: Vec<Stage>, config: &OracleConfig, note: Option<String>) -> ConvergenceVerdict {
    if estimates.len() < 2 {
        return ConvergenceVerdict {
            verdict: Verdict::Inconclusive,
            estimates,
            growth_ratio: f64::NAN,
            note: note.or_else(|| Some("fewer than two cutoffs evaluated".into())),
        };
    }
    let log_ratios: Vec<f64> =
        estimates.windows(2).map(|w| w[1].log_estimate - w[0].log_estimate).collect();
    let last = *log_ratios.last().unwrap();
    let growth_ratio = last.exp();
    let verdict = if (growth_ratio - 1.0).abs() < config.saturation_tolerance {
        Verdict::Convergent
    } else if log_ratios.iter().all(|&r| r > 0.0) && last >= config.growth_factor.ln() {
        Verdict::Divergent
    } else {
        Verdict::Inconclusive
    };
    ConvergenceVerdict { verdict, estimates, growth_ratio, note }
}

fn check_alpha(alpha: f64) -> Result<(), OracleError> {
    if alpha.is_finite() && alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(OracleError::AlphaOutOfRange(alpha.to_string()))
    }
}

fn check_cutoffs(cutoffs: &[f64]) -> Result<(), OracleError> {
    let ok = cutoffs.iter().all(|c| c.is_finite() && *c > 0.0) && cutoffs.windows(2).all(|w| w[0] < w[1]);
    if ok { Ok(()) } else { Err(OracleError::BadCutoffs) }
}

/// Exact test of the sufficient condition for the model integral to be
/// finite: `-alpha / (1 - alpha) * v` lies in the interior of the polytope.
pub fn exact_convergence_predicate(
    p: &AnticanonicalPolytope,
    alpha: &Rational,
    v: &RatVector,
) -> Result<bool, OracleError> {
    if alpha <= &Rational::zero() || alpha >= &Rational::one() {
        return Err(OracleError::AlphaOutOfRange(alpha.to_string()));
    }
    if v.dim() != p.dim() {
        return Err(OracleError::Dimension { expected: p.dim(), found: v.dim() });
    }
    let scale = -(alpha / (Rational::one() - alpha));
    Ok(p.gauge(&v.scale(&scale)) < Rational::one())
}

/// Estimates the model integral over `[-R, R]^n` for each cutoff `R` and
/// classifies its behaviour as the box grows.
pub fn model_integral_estimate(
    pot: &PotentialData,
    alpha: f64,
    v: &[f64],
    cutoffs: &[f64],
    config: &OracleConfig,
) -> Result<ConvergenceVerdict, OracleError> {
    check_alpha(alpha)?;
    check_cutoffs(cutoffs)?;
    if v.len() != pot.dim {
        return Err(OracleError::Dimension { expected: pot.dim, found: v.len() });
    }
    if pot.dim > config.max_dim {
        return Ok(classify(Vec::new(), config, Some(format!("dimension {} exceeds {}", pot.dim, config.max_dim))));
    }
    let integrand = |y: &[f64]| -alpha * dot(v, y) - (1.0 - alpha) * pot.log_potential(y);
    let mut estimates = Vec::with_capacity(cutoffs.len());
    for &cutoff in cutoffs {
        match log_box_integral(pot.dim, cutoff, config, integrand) {
            Some(log_estimate) => estimates.push(Stage { cutoff, log_estimate }),
            None => {
                return Ok(classify(estimates, config, Some(format!("cell budget exceeded at cutoff {cutoff}"))));
            }
        }
    }
    Ok(classify(estimates, config, None))
}

/// Interval `[lower, upper]` around the convergence threshold found by
/// bisecting on numerical verdicts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdBracket {
    pub lower: f64,
    pub upper: f64,
    /// Every alpha probed, with its verdict.
    pub probes: Vec<(f64, Verdict)>,
}

/// Bisects on the model-integral verdict starting from an interval whose
/// ends are expected to converge and diverge. Stops early on an
/// inconclusive verdict, leaving the last honest bracket.
pub fn bisect_threshold(
    pot: &PotentialData,
    v: &[f64],
    (mut lower, mut upper): (f64, f64),
    iterations: usize,
    cutoffs: &[f64],
    config: &OracleConfig,
) -> Result<ThresholdBracket, OracleError> {
    let mut probes = Vec::new();
    for (alpha, expected) in [(lower, Verdict::Convergent), (upper, Verdict::Divergent)] {
        let verdict = model_integral_estimate(pot, alpha, v, cutoffs, config)?.verdict;
        probes.push((alpha, verdict));
        if verdict != expected {
            return Ok(ThresholdBracket { lower, upper, probes });
        }
    }
    for _ in 0..iterations {
        let mid = 0.5 * (lower + upper);
        let verdict = model_integral_estimate(pot, mid, v, cutoffs, config)?.verdict;
        probes.push((mid, verdict));
        match verdict {
            Verdict::Convergent => lower = mid,
            Verdict::Divergent => upper = mid,
            Verdict::Inconclusive => break,
        }
    }
    Ok(ThresholdBracket { lower, upper, probes })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalReport {
    pub alpha: f64,
    /// `(eps, estimate)` over the largest box, in the order given.
    pub estimates: Vec<(f64, f64)>,
    pub strictly_increasing: bool,
    /// Behaviour of the `eps = 0` limit as the box grows.
    pub limit: ConvergenceVerdict,
}

/// Integrates `exp(-alpha * phi_eps) det Hess u` for the family
/// `phi_eps = log((exp(<v, y>) + eps) / exp(u))` and checks that the
/// estimates increase as `eps` decreases.
pub fn extremal_divergence_check(
    pot: &PotentialData,
    alpha: f64,
    v_tilde: &[f64],
    epsilons: &[f64],
    cutoffs: &[f64],
    config: &OracleConfig,
) -> Result<ExtremalReport, OracleError> {
    check_alpha(alpha)?;
    check_cutoffs(cutoffs)?;
    if v_tilde.len() != pot.dim {
        return Err(OracleError::Dimension { expected: pot.dim, found: v_tilde.len() });
    }
    let ok = epsilons.iter().all(|e| e.is_finite() && *e > 0.0) && epsilons.windows(2).all(|w| w[0] > w[1]);
    if !ok || epsilons.is_empty() {
        return Err(OracleError::BadEpsilons);
    }

    let log_integrand = |log_eps: f64| {
        move |y: &[f64]| {
            let u = pot.log_potential(y);
            let phi = log_add_exp(dot(v_tilde, y), log_eps) - u;
            -alpha * phi + pot.log_det_hessian(y)
        }
    };

    let largest = *cutoffs.last().unwrap();
    let mut estimates = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let value = log_box_integral(pot.dim, largest, config, log_integrand(eps.ln()))
            .map_or(f64::NAN, f64::exp);
        estimates.push((eps, value));
    }
    let strictly_increasing = estimates.windows(2).all(|w| w[1].1 > w[0].1);

    let mut stages = Vec::with_capacity(cutoffs.len());
    let mut note = None;
    for &cutoff in cutoffs {
        match log_box_integral(pot.dim, cutoff, config, log_integrand(f64::NEG_INFINITY)) {
            Some(log_estimate) => stages.push(Stage { cutoff, log_estimate }),
            None => {
                note = Some(format!("cell budget exceeded at cutoff {cutoff}"));
                break;
            }
        }
    }
    Ok(ExtremalReport { alpha, estimates, strictly_increasing, limit: classify(stages, config, note) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::FanData;
    use crate::linalg::rat;
    use crate::polytope::build_polytope;

    fn dp2() -> AnticanonicalPolytope {
        let fan = FanData::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![-1, 0], vec![0, -1]],
            vec![vec![0, 2], vec![2, 1], vec![1, 3], vec![3, 4], vec![4, 0]],
        )
        .unwrap();
        build_polytope(&fan).unwrap()
    }

    #[test]
    fn predicate_examples() {
        let p = dp2();
        let v = RatVector::from_i64(&[-1, -1]);
        assert!(!exact_convergence_predicate(&p, &rat(1, 3), &v).unwrap());
        assert!(exact_convergence_predicate(&p, &rat(1, 4), &v).unwrap());
        assert!(exact_convergence_predicate(&p, &rat(1, 1000), &v).unwrap());
        assert!(exact_convergence_predicate(&p, &rat(1, 1), &v).is_err());
        assert!(exact_convergence_predicate(&p, &rat(0, 1), &v).is_err());
    }

    #[test]
    fn p1_density_at_origin() {
        let pot = PotentialData::new(1, vec![vec![-1.0], vec![0.0], vec![1.0]]);
        let f = pot.hessian_density(&[0.0]);
        assert!((f - 2.0).abs() < 1e-12, "{f}");
    }

    #[test]
    fn hessian_positive_definite_at_origin() {
        let pot = PotentialData::from_polytope(&dp2()).unwrap();
        let h = pot.hessian(&[0.0, 0.0]);
        assert!((h[(0, 1)] - h[(1, 0)]).abs() < 1e-15);
        assert!(h.determinant() > 0.0);
        assert!(h[(0, 0)] > 0.0);
    }

    #[test]
    fn log_accumulator_matches_direct_sum() {
        let terms = [0.5, -3.0, 2.0, 1.0, -700.0];
        let mut acc = LogAccumulator::EMPTY;
        for t in terms {
            acc.push(t);
        }
        let direct: f64 = terms.iter().map(|t| t.exp()).sum::<f64>().ln();
        assert!((acc.ln() - direct).abs() < 1e-12);
    }

    #[test]
    fn box_integral_of_gaussian() {
        let config = OracleConfig { step: 0.05, ..OracleConfig::default() };
        let log_i = log_box_integral(2, 8.0, &config, |y| -(y[0] * y[0] + y[1] * y[1])).unwrap();
        assert!((log_i.exp() - std::f64::consts::PI).abs() < 1e-3);
    }

    #[test]
    fn classification_rules() {
        let config = OracleConfig::default();
        let stages = |logs: &[f64]| {
            logs.iter().enumerate().map(|(i, &l)| Stage { cutoff: (i + 1) as f64, log_estimate: l }).collect()
        };
        assert_eq!(classify(stages(&[0.0, 0.5, 0.505]), &config, None).verdict, Verdict::Convergent);
        assert_eq!(classify(stages(&[0.0, 0.5, 1.0]), &config, None).verdict, Verdict::Divergent);
        assert_eq!(classify(stages(&[0.0, 0.1, 0.2]), &config, None).verdict, Verdict::Inconclusive);
        assert_eq!(classify(stages(&[1.0, 0.0, 0.5]), &config, None).verdict, Verdict::Inconclusive);
        assert_eq!(classify(stages(&[0.0]), &config, None).verdict, Verdict::Inconclusive);
    }

    #[test]
    fn resource_limit_is_inconclusive() {
        let pot = PotentialData::from_polytope(&dp2()).unwrap();
        let config = OracleConfig { max_cells: 1000, ..OracleConfig::default() };
        let v = model_integral_estimate(&pot, 0.25, &[-1.0, -1.0], &[4.0, 8.0, 64.0], &config).unwrap();
        assert_eq!(v.verdict, Verdict::Inconclusive);
        assert!(v.note.is_some());
        assert_eq!(v.estimates.len(), 1);
    }

    #[test]
    fn input_validation() {
        let pot = PotentialData::from_polytope(&dp2()).unwrap();
        let c = OracleConfig::default();
        assert!(model_integral_estimate(&pot, 1.0, &[1.0, 1.0], &[1.0, 2.0], &c).is_err());
        assert!(model_integral_estimate(&pot, 0.5, &[1.0], &[1.0, 2.0], &c).is_err());
        assert_eq!(
            model_integral_estimate(&pot, 0.5, &[1.0, 1.0], &[2.0, 1.0], &c).unwrap_err(),
            OracleError::BadCutoffs
        );
        assert_eq!(
            extremal_divergence_check(&pot, 0.5, &[1.0, 1.0], &[0.1, 1.0], &[1.0, 2.0], &c).unwrap_err(),
            OracleError::BadEpsilons
        );
    }
}
