//! LDP and QLDP mechanisms, exact privacy audits and eta-mixed families.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::frames::{build_eitff, FusionFrame};
use crate::linalg::{ComplexMatrix, DensityMatrix, Hermitian};

/// Absolute tolerance on eigenvalues in the PSD privacy audit.
pub const AUDIT_TOL: f64 = 1e-10;
const COLUMN_TOL: f64 = 1e-12;
const RATIO_SLACK: f64 = 1e-10;
const MU_SLACK: f64 = 1e-12;

/// A tuple of full-rank states with a declared QLDP level.
#[derive(Clone, Debug, PartialEq)]
pub struct QldpMechanism {
    states: Vec<DensityMatrix>,
    epsilon: f64,
}

impl QldpMechanism {
    /// Audits the states against `epsilon`, or declares the exact level
    /// when `epsilon` is `None`.
    pub fn new(states: Vec<DensityMatrix>, epsilon: Option<f64>) -> Result<Self> {
        if states.len() < 2 {
            return Err(invalid("a mechanism needs at least two inputs"));
        }
        let d = states[0].dim();
        for s in &states {
            if s.dim() != d {
                return Err(Error::DimensionMismatch(d, s.dim()));
            }
            if !s.is_full_rank() {
                return Err(Error::SupportMismatch(format!(
                    "state with smallest eigenvalue {:.3e} is not full rank",
                    s.spectrum().min()
                )));
            }
        }
        let epsilon = match epsilon {
            Some(eps) => {
                if !(eps >= 0.0 && eps.is_finite()) {
                    return Err(invalid(format!("privacy level {eps} must be finite and >= 0")));
                }
                if !is_qldp(&states, eps)? {
                    return Err(Error::PrivacyViolation(format!(
                        "states are not {eps}-QLDP (measured level {:.12})",
                        qldp_level(&states)?
                    )));
                }
                eps
            }
            None => qldp_level(&states)?,
        };
        Ok(QldpMechanism { states, epsilon })
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn n(&self) -> usize {
        self.states.len()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn average(&self) -> DensityMatrix {
        let w = vec![1.0 / self.n() as f64; self.n()];
        DensityMatrix::mixture(&w, &self.states).expect("average of valid states is a state")
    }
}

/// A column-stochastic matrix `q[x][y] = q(y|x)` with a declared LDP level.
#[derive(Clone, Debug, PartialEq)]
pub struct LdpMechanism {
    columns: Vec<Vec<f64>>,
    epsilon: f64,
}

impl LdpMechanism {
    pub fn new(columns: Vec<Vec<f64>>, epsilon: Option<f64>) -> Result<Self> {
        if columns.len() < 2 {
            return Err(invalid("a mechanism needs at least two inputs"));
        }
        let outputs = columns[0].len();
        if outputs < 2 {
            return Err(invalid("a mechanism needs at least two outputs"));
        }
        for col in &columns {
            if col.len() != outputs {
                return Err(Error::DimensionMismatch(outputs, col.len()));
            }
            if col.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
                return Err(invalid("conditional probabilities must be finite and >= 0"));
            }
            let s: f64 = col.iter().sum();
            if (s - 1.0).abs() > COLUMN_TOL {
                return Err(invalid(format!("column sums to {s}, not 1")));
            }
        }
        let mech = LdpMechanism { columns, epsilon: 0.0 };
        let level = ldp_level(&mech)?;
        let epsilon = match epsilon {
            Some(eps) => {
                if !(eps >= 0.0 && eps.is_finite()) {
                    return Err(invalid(format!("privacy level {eps} must be finite and >= 0")));
                }
                if level.exp() > eps.exp() * (1.0 + RATIO_SLACK) {
                    return Err(Error::PrivacyViolation(format!(
                        "mechanism is not {eps}-LDP (measured level {level:.12})"
                    )));
                }
                eps
            }
            None => level,
        };
        Ok(LdpMechanism { epsilon, ..mech })
    }

    pub fn n_inputs(&self) -> usize {
        self.columns.len()
    }

    pub fn n_outputs(&self) -> usize {
        self.columns[0].len()
    }

    /// `q(y|x)`.
    pub fn q(&self, y: usize, x: usize) -> f64 {
        self.columns[x][y]
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Each input's output distribution as a diagonal state.
    pub fn diagonal_states(&self) -> Result<Vec<DensityMatrix>> {
        self.columns.iter().map(|c| DensityMatrix::diagonal(c)).collect()
    }

    pub fn average_column(&self) -> Vec<f64> {
        let n = self.n_inputs() as f64;
        (0..self.n_outputs())
            .map(|y| self.columns.iter().map(|c| c[y]).sum::<f64>() / n)
            .collect()
    }
}

/// Smallest `eps` with `rho_x' <= e^eps rho_x` for every ordered pair.
pub fn qldp_level(states: &[DensityMatrix]) -> Result<f64> {
    let mut level: f64 = 0.0;
    for (x, rho) in states.iter().enumerate() {
        if !rho.is_full_rank() {
            return Err(Error::SupportMismatch(format!(
                "state {x} is rank deficient (smallest eigenvalue {:.3e})",
                rho.spectrum().min()
            )));
        }
        let inv_sqrt = rho.power(-0.5)?;
        for (xp, other) in states.iter().enumerate() {
            if xp == x {
                continue;
            }
            if other.dim() != rho.dim() {
                return Err(Error::DimensionMismatch(rho.dim(), other.dim()));
            }
            let m = &(inv_sqrt.matrix() * other.matrix()) * inv_sqrt.matrix();
            let top = m.hermitian_part().eigh()?.max();
            level = level.max(top.ln());
        }
    }
    Ok(level.max(0.0))
}

/// PSD audit: `min eig(e^eps rho_x - rho_x') >= -1e-10` for every pair.
pub fn is_qldp(states: &[DensityMatrix], eps: f64) -> Result<bool> {
    let scale = eps.exp();
    for (x, rho) in states.iter().enumerate() {
        for (xp, other) in states.iter().enumerate() {
            if x == xp {
                continue;
            }
            if other.dim() != rho.dim() {
                return Err(Error::DimensionMismatch(rho.dim(), other.dim()));
            }
            let gap = &rho.hermitian().scale(scale) - other.hermitian();
            if !gap.is_psd(AUDIT_TOL)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `max_{y,x,x'} ln(q(y|x')/q(y|x))`.
pub fn ldp_level(mech: &LdpMechanism) -> Result<f64> {
    let mut level: f64 = 0.0;
    for y in 0..mech.n_outputs() {
        let row = mech.columns.iter().map(|c| c[y]);
        let (lo, hi) = row.fold((f64::INFINITY, 0.0_f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if hi == 0.0 {
            continue;
        }
        if lo == 0.0 {
            return Err(Error::SupportMismatch(format!("output {y} has zero and nonzero entries")));
        }
        level = level.max((hi / lo).ln());
    }
    Ok(level)
}

/// `h_- , h_+` of the admissible region for isoclinic weights.
fn h_pair(d: usize, r: usize, c: f64, eps: f64) -> (f64, f64) {
    let k = d as f64 / (2.0 * r as f64);
    let root = root_term(c, eps);
    (k * (1.0 - root), k * (1.0 + root))
}

/// `sqrt(1 + (1 - c)/sinh^2(eps/2))`.
fn root_term(c: f64, eps: f64) -> f64 {
    let sh = (eps / 2.0).sinh();
    (1.0 + (1.0 - c) / (sh * sh)).sqrt()
}

/// `(mu_lo, mu_hi)`: the isoclinic weights for which the states are
/// `eps`-QLDP.
pub fn admissible_mu_interval(frame: &FusionFrame, eps: f64) -> (f64, f64) {
    mu_interval(frame.d, frame.r, frame.c, eps)
}

pub fn mu_interval(d: usize, r: usize, c: f64, eps: f64) -> (f64, f64) {
    let (hm, hp) = h_pair(d, r, c, eps);
    (1.0 - 1.0 / (1.0 - hm), 1.0 - 1.0 / (1.0 - hp))
}

/// `1 - mu` for the default weight:
/// `(1 - mu)^-1 = 1 - d/(2r) + (d/2r) sqrt(1 + (1 - c)/sinh^2(eps/2))`.
pub fn default_nu(d: usize, r: usize, c: f64, eps: f64) -> f64 {
    let k = d as f64 / (2.0 * r as f64);
    1.0 / (1.0 - k + k * root_term(c, eps))
}

/// `1 - mu_*` for the `d = 2r` frame on `n` inputs.
pub fn nu_star(n: usize, eps: f64) -> f64 {
    let c = (n as f64 - 2.0) / (2.0 * n as f64 - 2.0);
    1.0 / root_term(c, eps)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IsoclinicParams {
    pub frame: FusionFrame,
    pub epsilon: f64,
    pub mu: f64,
}

impl IsoclinicParams {
    pub fn nu(&self) -> f64 {
        1.0 - self.mu
    }

    pub fn u(&self) -> f64 {
        self.frame.u()
    }
}

/// `sigma_x = (mu/d) I + ((1 - mu)/r) P_x`, without any privacy audit.
pub fn isoclinic_states(frame: &FusionFrame, mu: f64) -> Result<Vec<DensityMatrix>> {
    let d = frame.d as f64;
    let r = frame.r as f64;
    let base = Hermitian::identity(frame.d).scale(mu / d);
    frame
        .projections
        .iter()
        .map(|p| DensityMatrix::new(&base + &p.scale((1.0 - mu) / r)))
        .collect()
}

pub fn isoclinic_mechanism(frame: &FusionFrame, eps: f64, mu: Option<f64>) -> Result<QldpMechanism> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(invalid(format!("epsilon {eps} must be positive")));
    }
    let mu = match mu {
        Some(mu) => {
            let (lo, hi) = admissible_mu_interval(frame, eps);
            if mu < lo - MU_SLACK || mu > hi + MU_SLACK {
                return Err(Error::PrivacyViolation(format!(
                    "mu = {mu} lies outside the admissible interval [{lo}, {hi}]"
                )));
            }
            mu
        }
        None => 1.0 - default_nu(frame.d, frame.r, frame.c, eps),
    };
    let states = isoclinic_states(frame, mu)?;
    QldpMechanism::new(states, Some(eps))
}

/// The isoclinic mechanism on the minimal `d = 2r` frame with weight `mu_*`.
pub fn sigma_star(n: usize, eps: f64) -> Result<QldpMechanism> {
    let frame = build_eitff(n, None)?;
    let mu = 1.0 - nu_star(n, eps);
    isoclinic_mechanism(&frame, eps, Some(mu))
}

/// Closed-form extremes `(lambda_+, lambda_-)` of `e^eps P_i - P_j`.
pub fn jordan_eigenvalues(eps: f64, c: f64) -> (f64, f64) {
    let sh = (eps / 2.0).sinh();
    let root = (sh * sh + 1.0 - c).sqrt();
    let pre = (eps / 2.0).exp();
    (pre * (sh + root), pre * (sh - root))
}

/// Numeric extremes `(max, min)` of `e^eps P_i - P_j`.
pub fn jordan_eigenvalues_numeric(pi: &Hermitian, pj: &Hermitian, eps: f64) -> Result<(f64, f64)> {
    let spec = (&pi.scale(eps.exp()) - pj).eigh()?;
    Ok((spec.max(), spec.min()))
}

/// Two-output mechanism that boosts the block containing the input.
///
/// `split` is the first block `A_1`; the default is `{0, .., floor(n/2) - 1}`.
pub fn binary_mechanism(n: usize, eps: f64, split: Option<&[usize]>) -> Result<LdpMechanism> {
    if n < 2 {
        return Err(invalid("binary mechanism needs n >= 2"));
    }
    let default: Vec<usize> = (0..n / 2).collect();
    let block = split.unwrap_or(&default);
    let mut member = vec![false; n];
    for &x in block {
        if x >= n || member[x] {
            return Err(invalid(format!("split is not a partition of 0..{n}")));
        }
        member[x] = true;
    }
    if block.is_empty() || block.len() == n {
        return Err(invalid("both blocks of the split must be non-empty"));
    }
    let e = eps.exp();
    let hi = e / (e + 1.0);
    let lo = 1.0 / (e + 1.0);
    let columns = member
        .iter()
        .map(|&m| if m { vec![hi, lo] } else { vec![lo, hi] })
        .collect();
    LdpMechanism::new(columns, Some(eps))
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(k).collect()
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k.min(n - k)).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// The `k`-subset mechanism: `q(S|x) = e^eps/Z` for `x in S`, else `1/Z`.
pub fn subset_mechanism(n: usize, k: usize, eps: f64) -> Result<LdpMechanism> {
    if n < 2 || k == 0 || k >= n {
        return Err(invalid(format!("subset size k = {k} must lie in [1, {}]", n.saturating_sub(1))));
    }
    let e = eps.exp();
    let z = binomial(n - 1, k - 1) * e + binomial(n - 1, k);
    let outs = subsets(n, k);
    let columns = (0..n)
        .map(|x| {
            outs.iter()
                .map(|s| if s.contains(&x) { e / z } else { 1.0 / z })
                .collect()
        })
        .collect();
    LdpMechanism::new(columns, Some(eps))
}

/// `p_k^eta(x) = eta [x = k] + (1 - eta)/n`.
#[derive(Clone, Debug, PartialEq)]
pub struct TiltedPrior {
    pub n: usize,
    pub k: usize,
    pub eta: f64,
    pub p: Vec<f64>,
}

impl TiltedPrior {
    pub fn new(n: usize, k: usize, eta: f64) -> Result<Self> {
        if k >= n {
            return Err(invalid(format!("index {k} out of range for n = {n}")));
        }
        check_eta(eta)?;
        let base = (1.0 - eta) / n as f64;
        let p = (0..n).map(|x| if x == k { eta + base } else { base }).collect();
        Ok(TiltedPrior { n, k, eta, p })
    }
}

pub(crate) fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta <= 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("eta = {eta} must lie in (0, 1]")))
    }
}

/// `rho~_k = eta rho_k + (1 - eta) rho_avg`.
pub fn tilde_states(states: &[DensityMatrix], eta: f64) -> Result<Vec<DensityMatrix>> {
    check_eta(eta)?;
    let n = states.len();
    (0..n)
        .map(|k| {
            let prior = TiltedPrior::new(n, k, eta)?;
            DensityMatrix::mixture(&prior.p, states)
        })
        .collect()
}

pub fn tilde_family(mech: &QldpMechanism, eta: f64) -> Result<QldpMechanism> {
    let states = tilde_states(&mech.states, eta)?;
    QldpMechanism::new(states, Some(mech.epsilon))
}

pub fn tilde_columns(columns: &[Vec<f64>], eta: f64) -> Result<Vec<Vec<f64>>> {
    check_eta(eta)?;
    let n = columns.len() as f64;
    let outputs = columns[0].len();
    let avg: Vec<f64> = (0..outputs)
        .map(|y| columns.iter().map(|c| c[y]).sum::<f64>() / n)
        .collect();
    Ok(columns
        .iter()
        .map(|c| c.iter().zip(&avg).map(|(q, a)| eta * q + (1.0 - eta) * a).collect())
        .collect())
}

pub fn tilde_ldp(mech: &LdpMechanism, eta: f64) -> Result<LdpMechanism> {
    LdpMechanism::new(tilde_columns(&mech.columns, eta)?, Some(mech.epsilon))
}

/// Stochastic matrix `q(y|x) = Tr M_y rho_x` induced by a POVM.
pub fn induced_ldp(mech: &QldpMechanism, povm: &[Hermitian]) -> Result<LdpMechanism> {
    let d = mech.dim();
    let mut total = ComplexMatrix::zeros(d);
    for m in povm {
        if m.dim() != d {
            return Err(Error::DimensionMismatch(d, m.dim()));
        }
        if !m.is_psd(AUDIT_TOL)? {
            return Err(invalid("POVM element is not PSD"));
        }
        total = &total + m.matrix();
    }
    if (&total - &ComplexMatrix::identity(d)).frobenius_norm() > 1e-10 {
        return Err(invalid("POVM elements do not sum to the identity"));
    }
    let columns = mech
        .states
        .iter()
        .map(|rho| {
            let col: Vec<f64> = povm.iter().map(|m| m.trace_product(rho.hermitian()).max(0.0)).collect();
            let s: f64 = col.iter().sum();
            col.into_iter().map(|v| v / s).collect()
        })
        .collect();
    LdpMechanism::new(columns, None)
}

/// Either mechanism kind, as stored on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MechanismJson", into = "MechanismJson")]
pub enum Mechanism {
    Qldp(QldpMechanism),
    Ldp(LdpMechanism),
}

impl Mechanism {
    pub fn epsilon(&self) -> f64 {
        match self {
            Mechanism::Qldp(m) => m.epsilon(),
            Mechanism::Ldp(m) => m.epsilon(),
        }
    }

    /// Exact level recomputed from the stored states or columns.
    pub fn measured_level(&self) -> Result<f64> {
        match self {
            Mechanism::Qldp(m) => qldp_level(m.states()),
            Mechanism::Ldp(m) => ldp_level(m),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MechanismJson {
    Qldp {
        n: usize,
        dim: usize,
        epsilon: f64,
        states: Vec<ComplexMatrix>,
    },
    Ldp {
        n: usize,
        outputs: usize,
        epsilon: f64,
        q: Vec<Vec<f64>>,
    },
}

impl TryFrom<MechanismJson> for Mechanism {
    type Error = Error;
    fn try_from(json: MechanismJson) -> Result<Self> {
        match json {
            MechanismJson::Qldp { n, dim, epsilon, states } => {
                if states.len() != n {
                    return Err(Error::DimensionMismatch(n, states.len()));
                }
                let states = states
                    .into_iter()
                    .map(|m| {
                        if m.dim() != dim {
                            return Err(Error::DimensionMismatch(dim, m.dim()));
                        }
                        DensityMatrix::try_from(m)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Mechanism::Qldp(QldpMechanism::new(states, Some(epsilon))?))
            }
            MechanismJson::Ldp { n, outputs, epsilon, q } => {
                if q.len() != n {
                    return Err(Error::DimensionMismatch(n, q.len()));
                }
                if let Some(col) = q.iter().find(|c| c.len() != outputs) {
                    return Err(Error::DimensionMismatch(outputs, col.len()));
                }
                Ok(Mechanism::Ldp(LdpMechanism::new(q, Some(epsilon))?))
            }
        }
    }
}

impl From<Mechanism> for MechanismJson {
    fn from(m: Mechanism) -> Self {
        match m {
            Mechanism::Qldp(m) => MechanismJson::Qldp {
                n: m.n(),
                dim: m.dim(),
                epsilon: m.epsilon,
                states: m.states.into_iter().map(ComplexMatrix::from).collect(),
            },
            Mechanism::Ldp(m) => MechanismJson::Ldp {
                n: m.n_inputs(),
                outputs: m.n_outputs(),
                epsilon: m.epsilon,
                q: m.columns,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn isoclinic_n2_is_randomized_response() {
        let frame = build_eitff(2, None).unwrap();
        let eps = 3f64.ln();
        let mech = isoclinic_mechanism(&frame, eps, None).unwrap();
        // Remark oracle: sigma_x = (I + (e^eps - 1) P_x)/(r e^eps + d - r).
        for (s, p) in mech.states().iter().zip(&frame.projections) {
            let want = (&Hermitian::identity(2) + &p.scale(2.0)).scale(1.0 / 4.0);
            assert!((s.matrix() - want.matrix()).frobenius_norm() < 1e-14);
            let mut ev = s.spectrum().values.clone();
            ev.sort_by(f64::total_cmp);
            assert_abs_diff_eq!(ev[0], 0.25, epsilon = 1e-14);
            assert_abs_diff_eq!(ev[1], 0.75, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(qldp_level(mech.states()).unwrap(), eps, epsilon = 1e-12);
    }

    #[test]
    fn mu_one_gives_maximally_mixed() {
        let frame = build_eitff(4, None).unwrap();
        let mech = isoclinic_mechanism(&frame, 0.5, Some(1.0)).unwrap();
        let mixed = DensityMatrix::maximally_mixed(frame.d);
        for s in mech.states() {
            assert!((s.matrix() - mixed.matrix()).frobenius_norm() < 1e-15);
        }
        assert!(qldp_level(mech.states()).unwrap() < 1e-14);
    }

    #[test]
    fn boundary_level() {
        let frame = build_eitff(3, None).unwrap();
        let mech = isoclinic_mechanism(&frame, 1.0, None).unwrap();
        assert_abs_diff_eq!(qldp_level(mech.states()).unwrap(), 1.0, epsilon = 1e-9);
        let (lo, _) = admissible_mu_interval(&frame, 1.0);
        assert_abs_diff_eq!(1.0 - default_nu(2, 1, 0.25, 1.0), lo, epsilon = 1e-12);
        assert_abs_diff_eq!(qldp_level(sigma_star(4, 0.3).unwrap().states()).unwrap(), 0.3, epsilon = 1e-9);
        let s10 = sigma_star(10, 0.5).unwrap();
        assert_eq!(s10.dim(), 16);
        assert_abs_diff_eq!(qldp_level(s10.states()).unwrap(), 0.5, epsilon = 1e-9);
    }

    #[test]
    fn sigma_star_n2_weight() {
        // c = 0: 1 - mu* = tanh(eps/2), which is 1/2 at eps = ln 3.
        assert_abs_diff_eq!(nu_star(2, 3f64.ln()), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(nu_star(2, 0.7), (0.35f64).tanh(), epsilon = 1e-15);
    }

    #[test]
    fn interval_matches_orthogonal_case() {
        let frame = build_eitff(2, None).unwrap();
        for eps in [0.1, 0.5, 1.0, 2.0] {
            let (lo, hi) = admissible_mu_interval(&frame, eps);
            let n = 2.0;
            assert_abs_diff_eq!(lo, n / (n - 1.0 + f64::exp(eps)), epsilon = 1e-12);
            assert_abs_diff_eq!(hi, n / (n - 1.0 + f64::exp(-eps)), epsilon = 1e-12);
            assert!(lo < 1.0 && 1.0 < hi);
        }
    }

    #[test]
    fn explicit_mu_outside_is_rejected() {
        let frame = build_eitff(3, None).unwrap();
        let (lo, hi) = admissible_mu_interval(&frame, 1.0);
        assert!(matches!(isoclinic_mechanism(&frame, 1.0, Some(lo - 1e-4)), Err(Error::PrivacyViolation(_))));
        assert!(matches!(isoclinic_mechanism(&frame, 1.0, Some(hi + 1e-4)), Err(Error::PrivacyViolation(_))));
        assert!(isoclinic_mechanism(&frame, 1.0, Some(hi)).is_ok());
    }

    #[test]
    fn jordan_closed_form() {
        let (lp, lm) = jordan_eigenvalues(3f64.ln(), 0.0);
        assert_abs_diff_eq!(lp, 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(lm, -1.0, epsilon = 1e-14);
        let frame = build_eitff(3, None).unwrap();
        let (np, nm) = jordan_eigenvalues_numeric(&frame.projections[0], &frame.projections[1], 1.0).unwrap();
        let (cp, cm) = jordan_eigenvalues(1.0, frame.c);
        assert_abs_diff_eq!(np, cp, epsilon = 1e-10);
        assert_abs_diff_eq!(nm, cm, epsilon = 1e-10);
        assert!(cp > 1f64.exp() - 1.0 && cm < 0.0);
    }

    #[test]
    fn binary_columns() {
        let eps: f64 = 0.8;
        let e = eps.exp();
        let b = binary_mechanism(3, eps, None).unwrap();
        assert_abs_diff_eq!(b.q(0, 0), e / (e + 1.0));
        assert_abs_diff_eq!(b.q(1, 0), 1.0 / (e + 1.0));
        for x in 1..3 {
            assert_abs_diff_eq!(b.q(0, x), 1.0 / (e + 1.0));
            assert_abs_diff_eq!(b.q(1, x), e / (e + 1.0));
        }
        assert_abs_diff_eq!(ldp_level(&b).unwrap(), eps, epsilon = 1e-14);
        assert_abs_diff_eq!(ldp_level(&binary_mechanism(3, 1.0, None).unwrap()).unwrap(), 1.0, epsilon = 1e-14);
        assert!(binary_mechanism(3, 1.0, Some(&[0, 0])).is_err());
        assert!(binary_mechanism(3, 1.0, Some(&[])).is_err());
        assert!(binary_mechanism(3, 1.0, Some(&[0, 1, 2])).is_err());
        assert!(binary_mechanism(3, 1.0, Some(&[5])).is_err());
    }

    #[test]
    fn ldp_levels() {
        let uniform = LdpMechanism::new(vec![vec![0.5, 0.5]; 3], None).unwrap();
        assert_eq!(ldp_level(&uniform).unwrap(), 0.0);
        let rr = LdpMechanism::new(vec![vec![0.75, 0.25], vec![0.25, 0.75]], None).unwrap();
        assert_abs_diff_eq!(ldp_level(&rr).unwrap(), 3f64.ln(), epsilon = 1e-15);
        assert!(matches!(
            LdpMechanism::new(vec![vec![1.0, 0.0], vec![0.5, 0.5]], None),
            Err(Error::SupportMismatch(_))
        ));
        assert!(matches!(
            LdpMechanism::new(vec![vec![0.75, 0.25], vec![0.25, 0.75]], Some(1.0)),
            Err(Error::PrivacyViolation(_))
        ));
    }

    #[test]
    fn subset_columns() {
        let eps: f64 = 0.6;
        let e = eps.exp();
        let m = subset_mechanism(3, 1, eps).unwrap();
        assert_eq!(m.n_outputs(), 3);
        for x in 0..3 {
            assert_abs_diff_eq!(m.q(x, x), e / (e + 2.0), epsilon = 1e-15);
        }
        assert_abs_diff_eq!(ldp_level(&m).unwrap(), eps, epsilon = 1e-14);
        let rr = subset_mechanism(2, 1, eps).unwrap();
        assert_eq!(rr.columns(), binary_mechanism(2, eps, None).unwrap().columns());
        assert!(subset_mechanism(4, 4, eps).is_err());
        assert!(subset_mechanism(4, 0, eps).is_err());
        assert_eq!(subsets(4, 2)[..3], [vec![0, 1], vec![0, 2], vec![0, 3]]);
    }

    #[test]
    fn qldp_level_diagonal_pair() {
        let a = DensityMatrix::diagonal(&[0.75, 0.25]).unwrap();
        let b = DensityMatrix::diagonal(&[0.25, 0.75]).unwrap();
        assert_abs_diff_eq!(qldp_level(&[a.clone(), b]).unwrap(), 3f64.ln(), epsilon = 1e-14);
        assert_eq!(qldp_level(&[a.clone(), a]).unwrap(), 0.0);
        let pure = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!(matches!(qldp_level(&[pure, mixed]), Err(Error::SupportMismatch(_))));
    }

    #[test]
    fn tilde_of_sigma_star_is_isoclinic() {
        let (n, eps, eta) = (5, 0.7, 0.3);
        let mech = sigma_star(n, eps).unwrap();
        let tilde = tilde_family(&mech, eta).unwrap();
        let frame = build_eitff(n, None).unwrap();
        let mu_eta = eta * (1.0 - nu_star(n, eps)) + 1.0 - eta;
        let want = isoclinic_states(&frame, mu_eta).unwrap();
        for (a, b) in tilde.states().iter().zip(&want) {
            assert!((a.matrix() - b.matrix()).frobenius_norm() < 1e-12);
        }
        let same = tilde_family(&mech, 1.0).unwrap();
        assert_eq!(same.states(), mech.states());
        let tiny = tilde_family(&mech, 1e-6).unwrap();
        assert!(qldp_level(tiny.states()).unwrap() < 1e-5);
    }

    #[test]
    fn json_round_trip_and_reaudit() {
        let m = Mechanism::Qldp(sigma_star(3, 1.0).unwrap());
        let s = serde_json::to_string(&m).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["kind"], "qldp");
        assert_eq!(v["dim"], 2);
        let back: Mechanism = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);

        let b = Mechanism::Ldp(binary_mechanism(3, 1.0, None).unwrap());
        let mut v = serde_json::to_value(&b).unwrap();
        assert_eq!(v["kind"], "ldp");
        assert_eq!(v["q"].as_array().unwrap().len(), 3);
        v["epsilon"] = serde_json::json!(0.5);
        assert!(serde_json::from_value::<Mechanism>(v).is_err());
    }

    #[test]
    fn induced_from_computational_basis() {
        let mech = sigma_star(3, 1.0).unwrap();
        let povm = vec![Hermitian::from_real_diag(&[1.0, 0.0]), Hermitian::from_real_diag(&[0.0, 1.0])];
        let q = induced_ldp(&mech, &povm).unwrap();
        assert!(q.epsilon() <= 1.0 + 1e-9);
        let bad = vec![Hermitian::from_real_diag(&[1.0, 0.0])];
        assert!(induced_ldp(&mech, &bad).is_err());
    }
}
