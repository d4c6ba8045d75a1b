//! Finite-difference checks of the second-order expansions of divergences,
//! entropies and utilities, the scalar inequalities behind the classical
//! optima, and randomized property suites.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exponents::l_fn;
use crate::linalg::{DensityMatrix, Hermitian};
use crate::mechanisms::{
    binary_mechanism, induced_ldp, ldp_level, qldp_level, sigma_star, subset_mechanism, tilde_states, QldpMechanism,
};
use crate::metrics::{
    chernoff_information, induced_metric, overlap_minus_one, petz_f_divergence, petz_f_divergence_excess,
    petz_metric, relative_entropy, von_neumann_entropy, MetricKind, OperatorConvexF,
};
use crate::sampling::{random_density, random_hermitian, random_mean_zero, random_povm, random_traceless};

pub const DEFAULT_T_GRID: [f64; 7] = [1e-1, 5e-2, 2e-2, 1e-2, 5e-3, 2e-3, 1e-3];
pub const MIN_ORDER: f64 = 0.9;
pub const MAX_RATIO_ERROR: f64 = 0.02;
pub const DEFAULT_INSTANCES: usize = 1000;
const REFERENCE_T: f64 = 1e-2;
const NOISE_FLOOR: f64 = 1e-11;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub name: String,
    pub t_grid: Vec<f64>,
    pub predicted: Vec<f64>,
    pub observed: Vec<f64>,
    /// `|observed/predicted - 1|`, or `|observed - predicted|` where the
    /// predicted term vanishes.
    pub ratio_errors: Vec<f64>,
    /// `None` when fewer than two points clear the noise floor.
    pub fitted_order: Option<f64>,
    pub passed: bool,
}

impl ExpansionReport {
    fn new(name: impl Into<String>, t_grid: &[f64], predicted: Vec<f64>, observed: Vec<f64>) -> Self {
        let ratio_errors: Vec<f64> = predicted
            .iter()
            .zip(&observed)
            .map(|(&p, &o)| if p == 0.0 { (o - p).abs() } else { (o / p - 1.0).abs() })
            .collect();
        let fitted_order = fitted_order(t_grid, &ratio_errors);
        let mut report = ExpansionReport {
            name: name.into(),
            t_grid: t_grid.to_vec(),
            predicted,
            observed,
            ratio_errors,
            fitted_order,
            passed: false,
        };
        let smallest = report.ratio_errors.last().copied().unwrap_or(f64::NAN);
        report.passed = report.fitted_order.is_none_or(|o| o >= MIN_ORDER)
            && report.reference_error() <= MAX_RATIO_ERROR
            && smallest <= MAX_RATIO_ERROR
            && report.ratio_errors.iter().all(|e| e.is_finite());
        report
    }

    /// Ratio error at the grid point nearest `t = 1e-2`.
    pub fn reference_error(&self) -> f64 {
        self.error_at(REFERENCE_T)
    }

    pub fn error_at(&self, t: f64) -> f64 {
        self.t_grid
            .iter()
            .zip(&self.ratio_errors)
            .min_by(|a, b| (a.0.ln() - t.ln()).abs().total_cmp(&(b.0.ln() - t.ln()).abs()))
            .map_or(f64::NAN, |(_, &e)| e)
    }
}

/// Least-squares slope of `ln err` against `ln t` over the three smallest
/// `t` whose error clears the noise floor.
fn fitted_order(t_grid: &[f64], errors: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = t_grid
        .iter()
        .zip(errors)
        .rev()
        .filter(|(_, &e)| e >= NOISE_FLOOR && e.is_finite())
        .take(3)
        .map(|(&t, &e)| (t.ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() || t_grid.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
        return Err(invalid("t grid must be nonempty and positive"));
    }
    if t_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(invalid("t grid must be strictly decreasing"));
    }
    Ok(())
}

fn check_traceless(x: &Hermitian, d: usize) -> Result<()> {
    if x.dim() != d {
        return Err(Error::DimensionMismatch(d, x.dim()));
    }
    if x.trace().abs() > 1e-10 {
        return Err(invalid(format!("direction has trace {:.3e}", x.trace())));
    }
    Ok(())
}

/// `rho0 + t x`, which must stay a full-rank state.
fn perturb(rho0: &DensityMatrix, x: &Hermitian, t: f64) -> Result<DensityMatrix> {
    let rho = DensityMatrix::new(rho0.hermitian() + &x.scale(t))
        .map_err(|_| invalid(format!("rho0 + {t} X leaves the state space")))?;
    rho.require_full_rank()
        .map_err(|_| invalid(format!("rho0 + {t} X is not full rank")))?;
    Ok(rho)
}

fn grid_map(t_grid: &[f64], mut f: impl FnMut(f64) -> Result<(f64, f64)>) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut predicted = Vec::with_capacity(t_grid.len());
    let mut observed = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let (p, o) = f(t)?;
        predicted.push(p);
        observed.push(o);
    }
    Ok((predicted, observed))
}

/// `D_F(rho0 + tX1 || rho0 + tX2) - F(1)` against `(1/2) J^f[t(X1 - X2)]`.
pub fn check_fdiv_expansion(
    rho0: &DensityMatrix,
    x1: &Hermitian,
    x2: &Hermitian,
    f: OperatorConvexF,
    t_grid: &[f64],
) -> Result<ExpansionReport> {
    check_grid(t_grid)?;
    rho0.require_full_rank()?;
    check_traceless(x1, rho0.dim())?;
    check_traceless(x2, rho0.dim())?;
    let diff = x1 - x2;
    let j = induced_metric(rho0, &diff, f)?;
    let (p, o) = grid_map(t_grid, |t| {
        let o = petz_f_divergence_excess(&perturb(rho0, x1, t)?, &perturb(rho0, x2, t)?, f)?;
        Ok((0.5 * t * t * j, o))
    })?;
    Ok(ExpansionReport::new(format!("fdiv/{f}"), t_grid, p, o))
}

/// `-H(rho0 + tX) + H(rho0) - t Tr(ln rho0) X` against `(1/2) J^BKM[tX]`.
pub fn check_entropy_expansion(rho0: &DensityMatrix, x: &Hermitian, t_grid: &[f64]) -> Result<ExpansionReport> {
    check_grid(t_grid)?;
    rho0.require_full_rank()?;
    check_traceless(x, rho0.dim())?;
    let h0 = von_neumann_entropy(rho0);
    let linear = rho0.log()?.trace_product(x);
    let j = petz_metric(rho0, x, x, MetricKind::Bkm)?;
    let (p, o) = grid_map(t_grid, |t| {
        let o = -von_neumann_entropy(&perturb(rho0, x, t)?) + h0 - t * linear;
        Ok((0.5 * t * t * j, o))
    })?;
    Ok(ExpansionReport::new("entropy", t_grid, p, o))
}

/// Chernoff information against `(1/8) J^WYD(1/2)[t(X1 - X2)]`.
pub fn check_chernoff_expansion(
    rho0: &DensityMatrix,
    x1: &Hermitian,
    x2: &Hermitian,
    t_grid: &[f64],
) -> Result<ExpansionReport> {
    check_grid(t_grid)?;
    rho0.require_full_rank()?;
    check_traceless(x1, rho0.dim())?;
    check_traceless(x2, rho0.dim())?;
    let diff = x1 - x2;
    let j = petz_metric(rho0, &diff, &diff, MetricKind::Wyd(0.5))?;
    let (p, o) = grid_map(t_grid, |t| {
        let o = chernoff_information(&perturb(rho0, x1, t)?, &perturb(rho0, x2, t)?)?;
        Ok((t * t * j / 8.0, o))
    })?;
    Ok(ExpansionReport::new("chernoff", t_grid, p, o))
}

/// `1 - Tr rho1^s rho2^(1-s)` against `(s(1-s)/2) J^WYD(s)[t(X1 - X2)]`.
pub fn check_overlap_expansion(
    rho0: &DensityMatrix,
    x1: &Hermitian,
    x2: &Hermitian,
    s: f64,
    t_grid: &[f64],
) -> Result<ExpansionReport> {
    check_grid(t_grid)?;
    if !(s > 0.0 && s < 1.0) {
        return Err(invalid(format!("s = {s} must lie in (0, 1)")));
    }
    rho0.require_full_rank()?;
    check_traceless(x1, rho0.dim())?;
    check_traceless(x2, rho0.dim())?;
    let diff = x1 - x2;
    let j = petz_metric(rho0, &diff, &diff, MetricKind::Wyd(s))?;
    let (p, o) = grid_map(t_grid, |t| {
        let o = -overlap_minus_one(&perturb(rho0, x1, t)?, &perturb(rho0, x2, t)?, s)?;
        Ok((0.5 * s * (1.0 - s) * t * t * j, o))
    })?;
    Ok(ExpansionReport::new(format!("overlap/{s}"), t_grid, p, o))
}

type StateUtility = Arc<dyn Fn(&[DensityMatrix]) -> Result<f64> + Send + Sync>;

/// Quantum utility `Phi_Q` of a state family, evaluated as `Phi_Q - phi(1_n)`.
#[derive(Clone)]
pub struct QuantumUtility {
    pub name: String,
    pub n: usize,
    pub value_at_ones: f64,
    pub beta0: f64,
    excess: StateUtility,
}

impl fmt::Debug for QuantumUtility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuantumUtility")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("beta0", &self.beta0)
            .finish()
    }
}

impl QuantumUtility {
    /// Holevo information with a uniform prior.
    pub fn holevo(n: usize) -> Self {
        let nf = n as f64;
        QuantumUtility {
            name: "holevo".into(),
            n,
            value_at_ones: 0.0,
            beta0: (nf - 1.0) / (nf * nf),
            excess: Arc::new(|states: &[DensityMatrix]| {
                let k = states.len() as f64;
                let avg = DensityMatrix::mixture(&vec![1.0 / k; states.len()], states)?;
                let mut acc = 0.0;
                for rho in states {
                    acc += petz_f_divergence_excess(rho, &avg, OperatorConvexF::Kl)?;
                }
                Ok(acc / k)
            }),
        }
    }

    /// `-(1/(n(n-1))) sum_{i != j} Tr rho_i^(1/2) rho_j^(1/2)`.
    pub fn pairwise_sqrt(n: usize) -> Self {
        QuantumUtility {
            name: "pairwise_sqrt".into(),
            n,
            value_at_ones: -1.0,
            beta0: 1.0 / (2.0 * n as f64),
            excess: Arc::new(|states: &[DensityMatrix]| {
                let k = states.len();
                let mut acc = 0.0;
                for i in 0..k {
                    for j in 0..k {
                        if i != j {
                            acc += overlap_minus_one(&states[i], &states[j], 0.5)?;
                        }
                    }
                }
                Ok(-acc / (k * (k - 1)) as f64)
            }),
        }
    }

    pub fn excess(&self, states: &[DensityMatrix]) -> Result<f64> {
        if states.len() != self.n {
            return Err(Error::DimensionMismatch(self.n, states.len()));
        }
        (self.excess)(states)
    }

    pub fn eval(&self, states: &[DensityMatrix]) -> Result<f64> {
        Ok(self.value_at_ones + self.excess(states)?)
    }

    pub fn eval_mechanism(&self, mech: &QldpMechanism) -> Result<f64> {
        self.eval(mech.states())
    }
}

/// `Phi_Q(rho_avg + t delta_i) - phi(1_n)` against
/// `(beta0 n / (2(n-1))) sum_i J[t delta_i]` for mean-zero directions.
pub fn check_quadratic_assumption(
    utility: &QuantumUtility,
    rho_avg: &DensityMatrix,
    directions: &[Hermitian],
    kind: MetricKind,
    t_grid: &[f64],
) -> Result<ExpansionReport> {
    check_grid(t_grid)?;
    let n = directions.len();
    if n != utility.n || n < 2 {
        return Err(Error::DimensionMismatch(utility.n, n));
    }
    rho_avg.require_full_rank()?;
    let d = rho_avg.dim();
    let mut sum = Hermitian::zeros(d);
    let mut scale: f64 = 0.0;
    for x in directions {
        check_traceless(x, d)?;
        sum = &sum + x;
        scale = scale.max(x.matrix().frobenius_norm());
    }
    if sum.matrix().frobenius_norm() > 1e-10 * (1.0 + scale) {
        return Err(invalid("directions must sum to zero"));
    }
    let mut j = 0.0;
    for x in directions {
        j += petz_metric(rho_avg, x, x, kind)?;
    }
    let coeff = utility.beta0 * n as f64 / (2.0 * (n as f64 - 1.0));
    let (p, o) = grid_map(t_grid, |t| {
        let states: Vec<DensityMatrix> = directions.iter().map(|x| perturb(rho_avg, x, t)).collect::<Result<_>>()?;
        Ok((coeff * t * t * j, utility.excess(&states)?))
    })?;
    Ok(ExpansionReport::new(format!("quadratic/{}/{kind}", utility.name), t_grid, p, o))
}

/// Outcome of a randomized or grid-based inequality check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub name: String,
    pub instances: usize,
    pub violations: usize,
    /// Smallest slack `bound - value` seen; negative on violation.
    pub worst_margin: f64,
    pub passed: bool,
}

struct Tally {
    name: String,
    instances: usize,
    violations: usize,
    worst: f64,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally {
            name: name.into(),
            instances: 0,
            violations: 0,
            worst: f64::INFINITY,
        }
    }

    /// Records one check of `value <= bound + tol`.
    fn check(&mut self, value: f64, bound: f64, tol: f64) -> bool {
        let margin = bound - value;
        self.worst = self.worst.min(margin);
        let ok = margin >= -tol && margin.is_finite();
        if !ok {
            self.violations += 1;
        }
        ok
    }

    fn strict(&mut self, value: f64, bound: f64) {
        let margin = bound - value;
        self.worst = self.worst.min(margin);
        if !(margin > 0.0) {
            self.violations += 1;
        }
    }

    fn finish(self) -> PropertyReport {
        PropertyReport {
            passed: self.violations == 0 && self.instances > 0,
            name: self.name,
            instances: self.instances,
            violations: self.violations,
            worst_margin: self.worst,
        }
    }
}

/// Inequalities on `L(t) = t ln t` plus the binary-channel
/// divergence ordering used to restrict the classical maximization.
pub fn scalar_selftests() -> Vec<PropertyReport> {
    // L(1 + t) + L(1 - t) > t^2 on (0, 1).
    let mut part1 = Tally::new("xlogx/convexity");
    let grid1 = (1..=999).map(|k| k as f64 / 1000.0).chain((0..=30).map(|k| 10f64.powf(-3.0 + 2.0 * k as f64 / 30.0)));
    for t in grid1 {
        part1.instances += 1;
        part1.strict(t * t, l_fn(1.0 + t) + l_fn(1.0 - t));
    }
    // g - 1 - ln g < t^2/8 with g = L(1 + t)/t on (0, 100].
    let mut part2 = Tally::new("xlogx/log_gap");
    for k in 0..=1000 {
        let t = 10f64.powf(-3.0 + 5.0 * k as f64 / 1000.0);
        let h = ((1.0 + t) * t.ln_1p() - t) / t;
        part2.instances += 1;
        part2.strict(h - h.ln_1p(), t * t / 8.0);
    }
    let mut posterior = Tally::new("posterior_order");
    let mut fs = vec![OperatorConvexF::Kl, OperatorConvexF::Square];
    fs.extend([0.0, 0.1, 0.5, 1.0, 2.0, 10.0].map(OperatorConvexF::NegRatio));
    for iu in 0..=50 {
        let u = 0.5 * iu as f64 / 50.0;
        for ie in 1..=25 {
            let eps = 0.2 * ie as f64;
            for f in &fs {
                let (d1, d0) = binary_posterior_divergences(u, eps, *f);
                posterior.instances += 1;
                posterior.check(d0, d1, 1e-12);
            }
        }
    }
    vec![part1.finish(), part2.finish(), posterior.finish()]
}

/// `(D_F(P_{X|Y=1} || P_X), D_F(P_{X|Y=0} || P_X))` for prior `[1 - u, u]`
/// through the binary symmetric channel at level `eps`.
pub fn binary_posterior_divergences(u: f64, eps: f64, f: OperatorConvexF) -> (f64, f64) {
    let e = eps.exp();
    let prior = [1.0 - u, u];
    let z = [prior[0] * (e - 1.0) + 1.0, prior[1] * (e - 1.0) + 1.0];
    let post1 = [(1.0 - u) / z[1], u * e / z[1]];
    let post0 = [(1.0 - u) * e / z[0], u / z[0]];
    let div = |p: &[f64; 2]| -> f64 {
        p.iter()
            .zip(&prior)
            .filter(|(_, &q)| q > 0.0)
            .map(|(&pi, &q)| q * f.eval(pi / q))
            .sum()
    };
    (div(&post1), div(&post0))
}

fn suite_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `J^SLD <= J^f <= J^RLD` for normalized kinds on random `(rho0, X)`.
pub fn sandwich_suite(seed: u64, instances: usize) -> Result<PropertyReport> {
    let mut rng = suite_rng(seed, 1);
    let mut tally = Tally::new("metric_sandwich");
    for _ in 0..instances {
        let d = rng.random_range(2..=4);
        let floor = rng.random_range(0.01..0.5);
        let rho = random_density(&mut rng, d, floor)?;
        let x = random_hermitian(&mut rng, d);
        let sld = petz_metric(&rho, &x, &x, MetricKind::Sld)?;
        let rld = petz_metric(&rho, &x, &x, MetricKind::Rld)?;
        let tol = 1e-10 * (1.0 + rld.abs());
        tally.instances += 1;
        for kind in [MetricKind::Bkm, MetricKind::Wyd(rng.random_range(0.01..0.99))] {
            let j = petz_metric(&rho, &x, &x, kind)?;
            tally.check(sld, j, tol);
            tally.check(j, rld, tol);
        }
    }
    Ok(tally.finish())
}

/// Divergences do not grow under depolarizing with `t in {0.1, 0.5}`.
pub fn data_processing_suite(seed: u64, instances: usize) -> Result<PropertyReport> {
    let mut rng = suite_rng(seed, 2);
    let mut tally = Tally::new("data_processing");
    let fs = [
        OperatorConvexF::Kl,
        OperatorConvexF::Square,
        OperatorConvexF::NegRatio(0.5),
        OperatorConvexF::NegRatio(2.0),
        OperatorConvexF::SquaredDiff,
    ];
    let measures = |a: &DensityMatrix, b: &DensityMatrix| -> Result<Vec<f64>> {
        let mut v = vec![relative_entropy(a, b)?, chernoff_information(a, b)?];
        for f in fs {
            v.push(petz_f_divergence(a, b, f)?);
        }
        Ok(v)
    };
    for _ in 0..instances {
        let d = rng.random_range(2..=4);
        let a = random_density(&mut rng, d, 0.1)?;
        let b = random_density(&mut rng, d, 0.1)?;
        let before = measures(&a, &b)?;
        tally.instances += 1;
        for t in [0.1, 0.5] {
            let after = measures(&a.depolarize(t)?, &b.depolarize(t)?)?;
            for (x, y) in after.iter().zip(&before) {
                tally.check(*x, *y, 1e-9);
            }
        }
    }
    Ok(tally.finish())
}

/// Any POVM turns an `eps`-QLDP family into an `eps`-LDP channel.
pub fn measurement_reduction_suite(seed: u64, instances: usize) -> Result<PropertyReport> {
    let mut rng = suite_rng(seed, 3);
    let mut tally = Tally::new("measurement_reduction");
    for _ in 0..instances {
        let d = rng.random_range(2..=4);
        let n = rng.random_range(2..=4);
        let floor = rng.random_range(0.2..0.9);
        let states: Vec<DensityMatrix> = (0..n).map(|_| random_density(&mut rng, d, floor)).collect::<Result<_>>()?;
        let mech = QldpMechanism::new(states, None)?;
        let m = rng.random_range(2..=5);
        let povm = random_povm(&mut rng, d, m)?;
        let induced = induced_ldp(&mech, &povm)?;
        tally.instances += 1;
        tally.check(ldp_level(&induced)?, mech.epsilon(), 1e-9);
    }
    Ok(tally.finish())
}

fn small_level_states<R: Rng>(rng: &mut R) -> Result<Vec<DensityMatrix>> {
    match rng.random_range(0..4) {
        0 => Ok(sigma_star(rng.random_range(2..=8), rng.random_range(0.005..0.25))?.states().to_vec()),
        1 => binary_mechanism(rng.random_range(2..=6), rng.random_range(0.005..0.25), None)?.diagonal_states(),
        2 => {
            let n = rng.random_range(2..=5);
            subset_mechanism(n, rng.random_range(1..n), rng.random_range(0.005..0.25))?.diagonal_states()
        }
        _ => {
            let d = rng.random_range(2..=4);
            let n = rng.random_range(2..=4);
            let mut w = rng.random_range(0.01..0.2);
            loop {
                let states: Vec<DensityMatrix> = (0..n)
                    .map(|_| {
                        let r = random_density(rng, d, 0.0)?;
                        let m = &Hermitian::identity(d).scale((1.0 - w) / d as f64) + &r.hermitian().scale(w);
                        DensityMatrix::new(m)
                    })
                    .collect::<Result<_>>()?;
                if qldp_level(&states)? <= 0.25 {
                    return Ok(states);
                }
                w /= 2.0;
            }
        }
    }
}

/// `eta`-mixed families of `eps`-QLDP mechanisms with `eps <= 1/4` are
/// `eta eps (1 + sqrt eps)`-QLDP.
pub fn eta_mixing_suite(seed: u64, instances: usize) -> Result<PropertyReport> {
    let mut rng = suite_rng(seed, 4);
    let mut tally = Tally::new("eta_mixing");
    for _ in 0..instances {
        let states = small_level_states(&mut rng)?;
        let eps = qldp_level(&states)?;
        let eta: f64 = rng.random_range(0.01..=1.0);
        let mixed = qldp_level(&tilde_states(&states, eta)?)?;
        tally.instances += 1;
        tally.check(mixed, eta * eps * (1.0 + eps.sqrt()), 1e-10);
    }
    Ok(tally.finish())
}

pub fn property_suites(seed: u64, instances: usize) -> Result<Vec<PropertyReport>> {
    Ok(vec![
        sandwich_suite(seed, instances)?,
        data_processing_suite(seed, instances)?,
        measurement_reduction_suite(seed, instances)?,
        eta_mixing_suite(seed, instances)?,
    ])
}

fn pauli(k: usize) -> Hermitian {
    use crate::linalg::{ComplexMatrix, C64};
    let z = C64::new(0.0, 0.0);
    let rows = match k {
        0 => vec![vec![z, C64::new(1.0, 0.0)], vec![C64::new(1.0, 0.0), z]],
        1 => vec![vec![z, C64::new(0.0, -1.0)], vec![C64::new(0.0, 1.0), z]],
        _ => vec![vec![C64::new(1.0, 0.0), z], vec![z, C64::new(-1.0, 0.0)]],
    };
    Hermitian::new(ComplexMatrix::from_rows(&rows).expect("square")).expect("Pauli matrices are Hermitian")
}

/// Fixed examples plus random instances in dimensions 2 to 4.
pub fn expansion_suite(seed: u64, t_grid: &[f64]) -> Result<Vec<ExpansionReport>> {
    let mut out = Vec::new();
    let half = DensityMatrix::maximally_mixed(2);
    let x = pauli(0).scale(0.25);
    let zdir = pauli(2).scale(0.25);
    let zero = Hermitian::zeros(2);
    let neg = x.scale(-1.0);
    let named = |mut r: ExpansionReport, tag: &str| {
        r.name = format!("{}/{tag}", r.name);
        r
    };
    out.push(named(check_fdiv_expansion(&half, &x, &zero, OperatorConvexF::Kl, t_grid)?, "center"));
    out.push(named(check_fdiv_expansion(&half, &x, &x, OperatorConvexF::Kl, t_grid)?, "equal"));
    out.push(named(check_entropy_expansion(&half, &zdir, t_grid)?, "center"));
    out.push(named(check_entropy_expansion(&half, &zero, t_grid)?, "zero"));
    out.push(named(check_chernoff_expansion(&half, &x, &neg, t_grid)?, "center"));
    out.push(named(check_chernoff_expansion(&half, &x, &x, t_grid)?, "equal"));
    out.push(named(check_overlap_expansion(&half, &x, &neg, 0.5, t_grid)?, "center"));
    out.push(named(check_overlap_expansion(&half, &x, &x, 0.5, t_grid)?, "equal"));
    let three = vec![x.clone(), pauli(2).scale(0.25), &neg - &pauli(2).scale(0.25)];
    for u in [QuantumUtility::holevo(3), QuantumUtility::pairwise_sqrt(3)] {
        let kind = if u.name == "holevo" { MetricKind::Bkm } else { MetricKind::Wyd(0.5) };
        out.push(named(check_quadratic_assumption(&u, &half, &three, kind, t_grid)?, "center"));
    }

    let mut rng = suite_rng(seed, 0);
    let fs = [
        OperatorConvexF::Kl,
        OperatorConvexF::Square,
        OperatorConvexF::NegRatio(1.0),
        OperatorConvexF::SquaredDiff,
    ];
    for d in 2..=4 {
        let rho = random_density(&mut rng, d, 0.3)?;
        let norm = 0.5 * rho.spectrum().min();
        let tag = format!("random/d{d}");
        let x1 = random_traceless(&mut rng, d, norm)?;
        let x2 = random_traceless(&mut rng, d, norm)?;
        for f in fs {
            out.push(named(check_fdiv_expansion(&rho, &x1, &x2, f, t_grid)?, &tag));
        }
        out.push(named(check_entropy_expansion(&rho, &x1, t_grid)?, &tag));
        out.push(named(check_chernoff_expansion(&rho, &x1, &x2, t_grid)?, &tag));
        for s in [0.3, 0.5, 0.7] {
            out.push(named(check_overlap_expansion(&rho, &x1, &x2, s, t_grid)?, &tag));
        }
        for n in [3, 4] {
            let dirs = random_mean_zero(&mut rng, d, n, norm)?;
            let tag = format!("random/d{d}/n{n}");
            out.push(named(
                check_quadratic_assumption(&QuantumUtility::holevo(n), &rho, &dirs, MetricKind::Bkm, t_grid)?,
                &tag,
            ));
            out.push(named(
                check_quadratic_assumption(&QuantumUtility::pairwise_sqrt(n), &rho, &dirs, MetricKind::Wyd(0.5), t_grid)?,
                &tag,
            ));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Taylor,
    Properties,
    Scalar,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "taylor" => Ok(Suite::Taylor),
            "properties" => Ok(Suite::Properties),
            "scalar" => Ok(Suite::Scalar),
            "all" => Ok(Suite::All),
            other => Err(invalid(format!("unknown suite `{other}` (taylor|properties|scalar|all)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub seed: u64,
    pub expansions: Vec<ExpansionReport>,
    pub properties: Vec<PropertyReport>,
    pub passed: bool,
}

pub fn run_verification(suite: Suite, seed: u64, instances: usize) -> Result<VerificationReport> {
    let mut expansions = Vec::new();
    let mut properties = Vec::new();
    if matches!(suite, Suite::Taylor | Suite::All) {
        expansions = expansion_suite(seed, &DEFAULT_T_GRID)?;
    }
    if matches!(suite, Suite::Properties | Suite::All) {
        properties.extend(property_suites(seed, instances)?);
    }
    if matches!(suite, Suite::Scalar | Suite::All) {
        properties.extend(scalar_selftests());
    }
    let passed = expansions.iter().all(|r| r.passed) && properties.iter().all(|r| r.passed);
    Ok(VerificationReport {
        suite,
        seed,
        expansions,
        properties,
        passed,
    })
}
