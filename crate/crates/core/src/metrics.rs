//! Petz metrics and divergences, entropies, Holevo and Chernoff information.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{DensityMatrix, Hermitian, C64};

const DEGENERATE_REL: f64 = 1e-12;
const GOLDEN_WIDTH: f64 = 1e-12;
const HOLEVO_FLOOR: f64 = -1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum MetricKind {
    Sld,
    Rld,
    Bkm,
    Wyd(f64),
}

impl MetricKind {
    /// The operator monotone `f`, normalized so `f(1) = 1`.
    pub fn f(&self, t: f64) -> f64 {
        if (t - 1.0).abs() <= DEGENERATE_REL {
            return 1.0;
        }
        match *self {
            MetricKind::Sld => (1.0 + t) / 2.0,
            MetricKind::Rld => 2.0 * t / (1.0 + t),
            MetricKind::Bkm => (t - 1.0) / t.ln(),
            MetricKind::Wyd(s) => {
                let l = t.ln();
                s * (1.0 - s) * (t - 1.0).powi(2) / ((s * l).exp_m1() * ((1.0 - s) * l).exp_m1())
            }
        }
    }

    /// `1/(b f(a/b))`, evaluated without cancellation near `a = b`.
    pub fn kernel(&self, a: f64, b: f64) -> f64 {
        if (a - b).abs() <= DEGENERATE_REL * a.max(b) {
            return 1.0 / a.max(b);
        }
        match *self {
            MetricKind::Sld => 2.0 / (a + b),
            MetricKind::Rld => (1.0 / a + 1.0 / b) / 2.0,
            MetricKind::Bkm => {
                let x = (a - b) / b;
                x.ln_1p() / (b * x)
            }
            MetricKind::Wyd(s) => {
                let x = (a - b) / b;
                let l = x.ln_1p();
                (s * l).exp_m1() * ((1.0 - s) * l).exp_m1() / (s * (1.0 - s) * b * x * x)
            }
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricKind::Sld => write!(f, "sld"),
            MetricKind::Rld => write!(f, "rld"),
            MetricKind::Bkm => write!(f, "bkm"),
            MetricKind::Wyd(s) => write!(f, "wyd:{s}"),
        }
    }
}

impl FromStr for MetricKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sld" => Ok(MetricKind::Sld),
            "rld" => Ok(MetricKind::Rld),
            "bkm" => Ok(MetricKind::Bkm),
            other => {
                let s: f64 = other
                    .strip_prefix("wyd:")
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| invalid(format!("unknown metric kind `{other}` (sld|rld|bkm|wyd:s)")))?;
                if s > 0.0 && s < 1.0 {
                    Ok(MetricKind::Wyd(s))
                } else {
                    Err(invalid(format!("WYD parameter {s} must lie in (0, 1)")))
                }
            }
        }
    }
}

/// Operator convex generators of Petz F-divergences.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum OperatorConvexF {
    /// `t ln t`
    Kl,
    /// `t^2`
    Square,
    /// `-t/(t + s)`
    NegRatio(f64),
    /// `(t - 1)^2`
    SquaredDiff,
}

impl OperatorConvexF {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            OperatorConvexF::Kl => {
                if t == 0.0 {
                    0.0
                } else {
                    t * t.ln()
                }
            }
            OperatorConvexF::Square => t * t,
            OperatorConvexF::NegRatio(s) => -t / (t + s),
            OperatorConvexF::SquaredDiff => (t - 1.0).powi(2),
        }
    }

    pub fn at_one(&self) -> f64 {
        self.eval(1.0)
    }

    pub fn derivative_at_one(&self) -> f64 {
        match *self {
            OperatorConvexF::Kl => 1.0,
            OperatorConvexF::Square => 2.0,
            OperatorConvexF::NegRatio(s) => -s / ((1.0 + s) * (1.0 + s)),
            OperatorConvexF::SquaredDiff => 0.0,
        }
    }

    /// `F(1 + x) - F(1) - F'(1) x`, accurate for small `x`.
    pub fn eval_normalized(&self, x: f64) -> f64 {
        match *self {
            OperatorConvexF::Kl => {
                if x == -1.0 {
                    1.0
                } else {
                    (1.0 + x) * x.ln_1p() - x
                }
            }
            OperatorConvexF::Square | OperatorConvexF::SquaredDiff => x * x,
            OperatorConvexF::NegRatio(s) => s * x * x / ((1.0 + s) * (1.0 + s) * (1.0 + x + s)),
        }
    }

    /// Kernel `1/(b f(a/b))` of the metric induced by the normalized generator.
    pub fn kernel(&self, a: f64, b: f64) -> f64 {
        match *self {
            OperatorConvexF::Kl => MetricKind::Bkm.kernel(a, b),
            OperatorConvexF::Square | OperatorConvexF::SquaredDiff => (a + b) / (a * b),
            OperatorConvexF::NegRatio(s) => {
                if s == 0.0 {
                    0.0
                } else {
                    s * (a + b) / ((1.0 + s) * (a + s * b) * (b + s * a))
                }
            }
        }
    }
}

impl fmt::Display for OperatorConvexF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorConvexF::Kl => write!(f, "kl"),
            OperatorConvexF::Square => write!(f, "square"),
            OperatorConvexF::NegRatio(s) => write!(f, "neg_ratio:{s}"),
            OperatorConvexF::SquaredDiff => write!(f, "squared_diff"),
        }
    }
}

/// `sum_ij <j|X|i><i|Y|j> k(lambda_i, lambda_j)` in the eigenbasis of `rho0`.
pub fn petz_metric_with(
    rho0: &DensityMatrix,
    x: &Hermitian,
    y: &Hermitian,
    kernel: impl Fn(f64, f64) -> f64,
) -> Result<C64> {
    let d = rho0.dim();
    if x.dim() != d || y.dim() != d {
        return Err(Error::DimensionMismatch(d, x.dim().max(y.dim())));
    }
    rho0.require_full_rank()?;
    let spec = rho0.spectrum();
    let u = &spec.vectors;
    let xr = &(&u.adjoint() * x.matrix()) * u;
    let yr = if std::ptr::eq(x, y) {
        xr.clone()
    } else {
        &(&u.adjoint() * y.matrix()) * u
    };
    let lam = &spec.values;
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            acc += xr[(j, i)] * yr[(i, j)] * kernel(lam[i], lam[j]);
        }
    }
    Ok(acc)
}

/// Petz monotone metric `J^f_rho0[X, Y]` (real part).
pub fn petz_metric(rho0: &DensityMatrix, x: &Hermitian, y: &Hermitian, kind: MetricKind) -> Result<f64> {
    let z = petz_metric_with(rho0, x, y, |a, b| kind.kernel(a, b))?;
    if x == y && z.im.abs() > 1e-10 * (1.0 + z.re.abs()) {
        return Err(Error::Numerical(format!("metric of X with itself has imaginary part {:.3e}", z.im)));
    }
    Ok(z.re)
}

/// Metric induced by an F-divergence.
pub fn induced_metric(rho0: &DensityMatrix, x: &Hermitian, f: OperatorConvexF) -> Result<f64> {
    Ok(petz_metric_with(rho0, x, x, |a, b| f.kernel(a, b))?.re)
}

fn overlaps(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<Vec<Vec<f64>>> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch(rho1.dim(), rho2.dim()));
    }
    Ok(rho1.spectrum().overlaps(rho2.spectrum()))
}

/// `D_F(rho1 || rho2) = sum_ij lambda2_j F(lambda1_i/lambda2_j) Tr E_i F_j`.
pub fn petz_f_divergence(rho1: &DensityMatrix, rho2: &DensityMatrix, f: OperatorConvexF) -> Result<f64> {
    Ok(f.at_one() + petz_f_divergence_excess(rho1, rho2, f)?)
}

/// `D_F - F(1)`, summed with the normalized generator to avoid cancellation.
pub fn petz_f_divergence_excess(rho1: &DensityMatrix, rho2: &DensityMatrix, f: OperatorConvexF) -> Result<f64> {
    rho1.require_full_rank()?;
    rho2.require_full_rank()?;
    let w = overlaps(rho1, rho2)?;
    let a = &rho1.spectrum().values;
    let b = &rho2.spectrum().values;
    let mut acc = 0.0;
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            acc += w[i][j] * bj * f.eval_normalized((ai - bj) / bj);
        }
    }
    Ok(acc)
}

/// Umegaki relative entropy `Tr rho1 (ln rho1 - ln rho2)`.
pub fn relative_entropy(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch(rho1.dim(), rho2.dim()));
    }
    if !rho2.is_full_rank() {
        return Err(Error::SupportMismatch("second argument is rank deficient".into()));
    }
    let log2 = rho2.log()?;
    let self_term: f64 = rho1.eigenvalues().iter().filter(|&&l| l > 0.0).map(|l| l * l.ln()).sum();
    Ok(self_term - rho1.hermitian().trace_product(&log2))
}

/// `-Tr rho ln rho`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    classical_entropy(&rho.eigenvalues())
}

fn check_prior(prior: &[f64], n: usize) -> Result<()> {
    if prior.len() != n {
        return Err(Error::DimensionMismatch(prior.len(), n));
    }
    if prior.iter().any(|&p| !(p >= 0.0)) || (prior.iter().sum::<f64>() - 1.0).abs() > 1e-10 {
        return Err(invalid("prior must be a probability vector"));
    }
    Ok(())
}

/// `H(sum_x p(x) rho_x) - sum_x p(x) H(rho_x)`.
pub fn holevo_information(prior: &[f64], states: &[DensityMatrix]) -> Result<f64> {
    check_prior(prior, states.len())?;
    let avg = DensityMatrix::mixture(prior, states)?;
    let chi = von_neumann_entropy(&avg)
        - prior
            .iter()
            .zip(states)
            .map(|(p, s)| p * von_neumann_entropy(s))
            .sum::<f64>();
    if chi < HOLEVO_FLOOR {
        return Err(Error::Numerical(format!("negative Holevo information {chi:.3e}")));
    }
    Ok(chi)
}

/// Minimizes a convex function on `[0, 1]` by golden-section search.
pub fn golden_section_min(f: impl Fn(f64) -> f64, width: f64) -> (f64, f64) {
    golden_section_on(f, 0.0, 1.0, width)
}

pub fn golden_section_on(f: impl Fn(f64) -> f64, lo: f64, hi: f64, width: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > width {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let s = (a + b) / 2.0;
    (s, f(s))
}

/// `Tr A^s B^(1-s) - 1` from spectra and overlaps, summed as
/// `sum_ij w_ij b_j (r^s - 1 - s (r - 1))` with `r = a_i/b_j`.
fn overlap_excess(a: &[f64], b: &[f64], w: &[Vec<f64>], s: f64) -> f64 {
    let mut acc = 0.0;
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            if w[i][j] == 0.0 {
                continue;
            }
            let x = (ai - bj) / bj;
            let term = if x == -1.0 {
                -1.0 + s
            } else {
                (s * x.ln_1p()).exp_m1() - s * x
            };
            acc += w[i][j] * bj * term;
        }
    }
    acc
}

/// `Tr A^s B^(1-s)`.
pub fn overlap(a: &DensityMatrix, b: &DensityMatrix, s: f64) -> Result<f64> {
    Ok(1.0 + overlap_minus_one(a, b, s)?)
}

pub fn overlap_minus_one(a: &DensityMatrix, b: &DensityMatrix, s: f64) -> Result<f64> {
    a.require_full_rank()?;
    b.require_full_rank()?;
    let w = overlaps(a, b)?;
    Ok(overlap_excess(&a.spectrum().values, &b.spectrum().values, &w, s))
}

/// Chernoff information with its minimizing `s`.
pub fn chernoff_with_argmin(a: &DensityMatrix, b: &DensityMatrix) -> Result<(f64, f64)> {
    a.require_full_rank()?;
    b.require_full_rank()?;
    let w = overlaps(a, b)?;
    let (la, lb) = (&a.spectrum().values, &b.spectrum().values);
    let (s, q) = golden_section_min(|s| overlap_excess(la, lb, &w, s), GOLDEN_WIDTH);
    Ok(((-q.min(0.0).ln_1p()).max(0.0), s))
}

/// `C(A, B) = -ln min_s Tr A^s B^(1-s)`.
pub fn chernoff_information(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    Ok(chernoff_with_argmin(a, b)?.0)
}

fn check_pair(p: &[f64], q: &[f64]) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(p.len(), q.len()));
    }
    for (a, b) in p.iter().zip(q) {
        if (*a == 0.0) != (*b == 0.0) || *a < 0.0 || *b < 0.0 {
            return Err(Error::SupportMismatch("distributions differ in support".into()));
        }
    }
    Ok(())
}

pub fn classical_overlap_minus_one(p: &[f64], q: &[f64], s: f64) -> Result<f64> {
    check_pair(p, q)?;
    Ok(p.iter()
        .zip(q)
        .filter(|(_, &b)| b > 0.0)
        .map(|(&a, &b)| {
            let x = (a - b) / b;
            b * ((s * x.ln_1p()).exp_m1() - s * x)
        })
        .sum())
}

/// Classical Chernoff information `-ln min_s sum_i p_i^s q_i^(1-s)`.
pub fn classical_chernoff(p: &[f64], q: &[f64]) -> Result<f64> {
    check_pair(p, q)?;
    let (_, m) = golden_section_min(|s| classical_overlap_minus_one(p, q, s).unwrap_or(0.0), GOLDEN_WIDTH);
    Ok((-m.min(0.0).ln_1p()).max(0.0))
}

pub fn classical_relative_entropy(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(p.len(), q.len()));
    }
    let mut acc = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        if a == 0.0 {
            continue;
        }
        if b == 0.0 {
            return Err(Error::SupportMismatch("p is not absolutely continuous w.r.t. q".into()));
        }
        acc += a * (a / b).ln();
    }
    Ok(acc)
}

pub fn classical_entropy(p: &[f64]) -> f64 {
    -p.iter().filter(|&&v| v > 0.0).map(|v| v * v.ln()).sum::<f64>()
}

/// Mutual information of `prior(x) q(y|x)` with `columns[x][y] = q(y|x)`.
pub fn classical_mutual_information(prior: &[f64], columns: &[Vec<f64>]) -> Result<f64> {
    check_prior(prior, columns.len())?;
    let outputs = columns[0].len();
    let avg: Vec<f64> = (0..outputs)
        .map(|y| prior.iter().zip(columns).map(|(p, c)| p * c[y]).sum())
        .collect();
    let mut acc = 0.0;
    for (p, c) in prior.iter().zip(columns) {
        acc += p * classical_relative_entropy(c, &avg)?;
    }
    Ok(acc)
}
