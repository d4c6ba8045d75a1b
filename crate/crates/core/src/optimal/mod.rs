//! Sum-of-sublinear utilities, the classical LP optimum and the small-eps
//! predictions for classical and quantum optima.

pub mod simplex;

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exponents::l_fn;
use crate::mechanisms::LdpMechanism;

pub const MAX_LP_INPUTS: usize = 14;
const FD_STEP: f64 = 1e-4;

type Evaluator = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A positively homogeneous, subadditive `phi` on positive `n`-vectors.
#[derive(Clone)]
pub struct SublinearUtility {
    pub name: String,
    pub n: usize,
    pub symmetric: bool,
    pub value_at_ones: f64,
    pub beta0: f64,
    evaluate: Evaluator,
}

impl fmt::Debug for SublinearUtility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SublinearUtility")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("symmetric", &self.symmetric)
            .field("value_at_ones", &self.value_at_ones)
            .field("beta0", &self.beta0)
            .finish()
    }
}

impl SublinearUtility {
    /// `beta0 = d^2 phi / dz_1^2 at 1_n`; by central differences when absent.
    pub fn new(
        name: impl Into<String>,
        n: usize,
        symmetric: bool,
        beta0: Option<f64>,
        evaluate: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let ones = vec![1.0; n];
        let value_at_ones = evaluate(&ones);
        let beta0 = beta0.unwrap_or_else(|| {
            let mut up = ones.clone();
            let mut down = ones.clone();
            up[0] += FD_STEP;
            down[0] -= FD_STEP;
            (evaluate(&up) - 2.0 * value_at_ones + evaluate(&down)) / (FD_STEP * FD_STEP)
        });
        SublinearUtility {
            name: name.into(),
            n,
            symmetric,
            value_at_ones,
            beta0,
            evaluate: Arc::new(evaluate),
        }
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        (self.evaluate)(z)
    }

    /// Looks up a built-in by name (`mi` or `pairwise_sqrt`).
    pub fn builtin(name: &str, n: usize) -> Result<Self> {
        match name {
            "mi" => Ok(mutual_information(n)),
            "pairwise_sqrt" | "pairwise-sqrt" => Ok(pairwise_sqrt(n)),
            other => Err(invalid(format!("unknown utility `{other}` (mi|pairwise_sqrt)"))),
        }
    }
}

/// `phi(z) = -L(mean z) + (1/n) sum L(z_i)`; mutual information with a
/// uniform prior.
pub fn mutual_information(n: usize) -> SublinearUtility {
    let nf = n as f64;
    SublinearUtility::new("mi", n, true, Some((nf - 1.0) / (nf * nf)), move |z: &[f64]| {
        let mean = z.iter().sum::<f64>() / z.len() as f64;
        -l_fn(mean) + z.iter().map(|&v| l_fn(v)).sum::<f64>() / z.len() as f64
    })
}

/// `psi(z) = -(1/(n(n-1))) sum_{i != j} sqrt(z_i z_j)`.
pub fn pairwise_sqrt(n: usize) -> SublinearUtility {
    let nf = n as f64;
    SublinearUtility::new("pairwise_sqrt", n, true, Some(1.0 / (2.0 * nf)), move |z: &[f64]| {
        let m = z.len() as f64;
        let s: f64 = z.iter().map(|v| v.sqrt()).sum();
        let sq: f64 = z.iter().sum();
        -(s * s - sq) / (m * (m - 1.0))
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SublinearityReport {
    pub trials: usize,
    pub homogeneity_violations: usize,
    pub subadditivity_violations: usize,
    pub symmetry_violations: usize,
}

impl SublinearityReport {
    pub fn passed(&self) -> bool {
        self.homogeneity_violations + self.subadditivity_violations + self.symmetry_violations == 0
    }
}

/// Randomized check of homogeneity, subadditivity and (if declared) symmetry.
pub fn check_sublinearity<R: Rng>(phi: &SublinearUtility, rng: &mut R, trials: usize) -> SublinearityReport {
    let mut rep = SublinearityReport {
        trials,
        ..Default::default()
    };
    let n = phi.n;
    for _ in 0..trials {
        let z: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..5.0)).collect();
        let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..5.0)).collect();
        let alpha: f64 = rng.random_range(0.05..20.0);
        let fz = phi.eval(&z);
        let scaled: Vec<f64> = z.iter().map(|v| alpha * v).collect();
        if (phi.eval(&scaled) - alpha * fz).abs() > 1e-8 * (1.0 + fz.abs()) {
            rep.homogeneity_violations += 1;
        }
        let sum: Vec<f64> = z.iter().zip(&w).map(|(a, b)| a + b).collect();
        if phi.eval(&sum) > fz + phi.eval(&w) + 1e-8 {
            rep.subadditivity_violations += 1;
        }
        if phi.symmetric {
            let mut perm = z.clone();
            perm.rotate_left(rng.random_range(0..n));
            perm.swap(0, n - 1);
            if (phi.eval(&perm) - fz).abs() > 1e-10 * (1.0 + fz.abs()) {
                rep.symmetry_violations += 1;
            }
        }
    }
    rep
}

/// `Phi_C(q) = sum_y phi(q(y|1), .., q(y|n))`.
pub fn utility_of_mechanism(q: &LdpMechanism, phi: &SublinearUtility) -> Result<f64> {
    if q.n_inputs() != phi.n {
        return Err(Error::DimensionMismatch(phi.n, q.n_inputs()));
    }
    let mut total = 0.0;
    for y in 0..q.n_outputs() {
        let row: Vec<f64> = (0..q.n_inputs()).map(|x| q.q(y, x)).collect();
        if row.iter().any(|&v| v > 0.0) {
            total += phi.eval(&row);
        }
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

/// Nonzero weight `alpha_z` on the vertex `z` (bit `i` of `mask` is `z_i`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexWeight {
    pub mask: u32,
    pub alpha: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub value: f64,
    pub weights: Vec<VertexWeight>,
    pub status: LpStatus,
}

impl LpSolution {
    /// `|| sum_z alpha_z (1 + theta z) - 1_n ||_inf`.
    pub fn constraint_residual(&self, n: usize, eps: f64) -> f64 {
        let th = eps.exp_m1();
        (0..n)
            .map(|i| {
                let s: f64 = self
                    .weights
                    .iter()
                    .map(|w| w.alpha * (1.0 + th * f64::from((w.mask >> i) & 1)))
                    .sum();
                (s - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }
}

fn vertex(n: usize, mask: u32, th: f64) -> Vec<f64> {
    (0..n).map(|i| 1.0 + th * f64::from((mask >> i) & 1)).collect()
}

/// Exact classical optimum of `Phi_C` over `eps`-LDP mechanisms, as the LP
/// over weights on the vertices `1 + (e^eps - 1) z`, `z in {0,1}^n`.
pub fn kairouz_lp(n: usize, eps: f64, phi: &SublinearUtility) -> Result<LpSolution> {
    if !(2..=MAX_LP_INPUTS).contains(&n) {
        return Err(invalid(format!("the full LP supports 2 <= n <= {MAX_LP_INPUTS}")));
    }
    if phi.n != n {
        return Err(Error::DimensionMismatch(n, phi.n));
    }
    if !(eps > 0.0) {
        return Err(invalid("epsilon must be positive"));
    }
    let th = eps.exp_m1();
    let cols = 1usize << n;
    let c: Vec<f64> = (0..cols as u32).map(|m| phi.eval(&vertex(n, m, th))).collect();
    let a: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..cols as u32).map(|m| 1.0 + th * f64::from((m >> i) & 1)).collect())
        .collect();
    let sol = simplex::maximize(&a, &vec![1.0; n], &c)?;
    if sol.status == simplex::Status::Infeasible {
        return Err(Error::Numerical("vertex LP reported infeasible".into()));
    }
    let weights = sol
        .x
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.0)
        .map(|(m, &alpha)| VertexWeight { mask: m as u32, alpha })
        .collect();
    Ok(LpSolution {
        value: sol.value,
        weights,
        status: LpStatus::Optimal,
    })
}

/// `max_k phi(1 + theta z_k)/(1 + theta k/n)` for symmetric `phi`, where
/// `z_k` has `k` leading ones.
pub fn kairouz_lp_symmetric(n: usize, eps: f64, phi: &SublinearUtility) -> Result<f64> {
    if !phi.symmetric {
        return Err(invalid("the symmetric reduction needs a symmetric utility"));
    }
    if phi.n != n {
        return Err(Error::DimensionMismatch(n, phi.n));
    }
    let th = eps.exp_m1();
    Ok((0..=n)
        .map(|k| {
            let z: Vec<f64> = (0..n).map(|i| if i < k { 1.0 + th } else { 1.0 }).collect();
            phi.eval(&z) / (1.0 + th * k as f64 / n as f64)
        })
        .fold(f64::NEG_INFINITY, f64::max))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub constant: f64,
    pub classical_coeff: f64,
    pub quantum_coeff: f64,
    pub ratio: f64,
}

/// Quadratic coefficients of the classical and quantum optima as
/// `eps -> 0`, and their ratio `n(n-1)/(2 floor(n/2) ceil(n/2))`.
pub fn asymptotic_prediction(n: usize, value_at_ones: f64, beta0: f64) -> Result<Prediction> {
    if !(beta0 > 0.0) {
        return Err(invalid(format!("beta0 = {beta0} must be positive")));
    }
    let nf = n as f64;
    let fc = ((n / 2) * n.div_ceil(2)) as f64;
    Ok(Prediction {
        constant: value_at_ones,
        classical_coeff: fc * beta0 / (2.0 * (nf - 1.0)),
        quantum_coeff: beta0 * nf / 4.0,
        ratio: nf * (nf - 1.0) / (2.0 * fc),
    })
}
