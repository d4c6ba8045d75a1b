//! Hypothesis-testing error exponents: direct evaluation on mechanisms,
//! closed forms for isoclinic mechanisms, classical optima and thresholds.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::mechanisms::{check_eta, tilde_columns, tilde_states, LdpMechanism, QldpMechanism};
use crate::metrics::{
    chernoff_information, classical_chernoff, golden_section_on, petz_f_divergence_excess, OperatorConvexF,
};

/// `t ln t` with `L(0) = 0`.
pub fn l_fn(t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t * t.ln()
    }
}

/// `(1 + x) ln(1 + x) - x`.
fn l_excess(x: f64) -> f64 {
    OperatorConvexF::Kl.eval_normalized(x)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentPair {
    pub sym: f64,
    pub asym: f64,
}

/// A family of hypotheses `{rho~_k}` built from a mechanism.
pub trait HypothesisFamily {
    /// `min_{i != j} C(rho~_i, rho~_j)`.
    fn sym_exponent(&self, eta: f64) -> Result<f64>;
    /// `min_x D(rho~_x || rho_avg)`.
    fn asym_exponent(&self, eta: f64) -> Result<f64>;
}

impl HypothesisFamily for QldpMechanism {
    fn sym_exponent(&self, eta: f64) -> Result<f64> {
        let t = tilde_states(self.states(), eta)?;
        let mut best = f64::INFINITY;
        for i in 0..t.len() {
            for j in (i + 1)..t.len() {
                best = best.min(chernoff_information(&t[i], &t[j])?);
            }
        }
        Ok(best)
    }

    fn asym_exponent(&self, eta: f64) -> Result<f64> {
        let t = tilde_states(self.states(), eta)?;
        let avg = self.average();
        let mut best = f64::INFINITY;
        for s in &t {
            best = best.min(petz_f_divergence_excess(s, &avg, OperatorConvexF::Kl)?);
        }
        Ok(best.max(0.0))
    }
}

impl HypothesisFamily for LdpMechanism {
    fn sym_exponent(&self, eta: f64) -> Result<f64> {
        let t = tilde_columns(self.columns(), eta)?;
        let mut best = f64::INFINITY;
        for i in 0..t.len() {
            for j in (i + 1)..t.len() {
                best = best.min(classical_chernoff(&t[i], &t[j])?);
            }
        }
        Ok(best)
    }

    fn asym_exponent(&self, eta: f64) -> Result<f64> {
        let t = tilde_columns(self.columns(), eta)?;
        let avg = self.average_column();
        let best = t
            .iter()
            .map(|col| {
                col.iter()
                    .zip(&avg)
                    .filter(|(_, &b)| b > 0.0)
                    .map(|(&a, &b)| b * l_excess((a - b) / b))
                    .sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min);
        Ok(best.max(0.0))
    }
}

pub fn sym_exponent<M: HypothesisFamily + ?Sized>(mech: &M, eta: f64) -> Result<f64> {
    mech.sym_exponent(eta)
}

pub fn asym_exponent<M: HypothesisFamily + ?Sized>(mech: &M, eta: f64) -> Result<f64> {
    mech.asym_exponent(eta)
}

/// Isoclinic parameters as functions of `u = r/d`; `nu = 1 - mu`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormParams {
    pub n: usize,
    pub u: f64,
    pub c: f64,
    pub nu: f64,
    pub eta: f64,
}

/// `c = (nu - 1)/(n - 1)`.
pub fn c_of_u(n: usize, u: f64) -> f64 {
    ((n as f64 * u - 1.0) / (n as f64 - 1.0)).max(0.0)
}

/// `1 - mu` with `(1 - mu)^-1 = 1 - 1/(2u) + (1/(2u)) sqrt(1 + (1 - c)/sinh^2(eps/2))`.
pub fn nu_of_u(n: usize, u: f64, eps: f64) -> f64 {
    let c = c_of_u(n, u);
    let sh = (eps / 2.0).sinh();
    let k = 1.0 / (2.0 * u);
    1.0 / (1.0 - k + k * (1.0 + (1.0 - c) / (sh * sh)).sqrt())
}

impl ClosedFormParams {
    pub fn with_nu(n: usize, u: f64, nu: f64, eta: f64) -> Result<Self> {
        if n < 2 {
            return Err(invalid("n must be >= 2"));
        }
        let lo = 1.0 / n as f64;
        if !(u >= lo - 1e-15 && u <= 0.5 + 1e-15) {
            return Err(invalid(format!("u = {u} must lie in [1/n, 1/2]")));
        }
        check_eta(eta)?;
        Ok(ClosedFormParams {
            n,
            u,
            c: c_of_u(n, u),
            nu,
            eta,
        })
    }

    /// Default weight for the given `u`.
    pub fn at_u(n: usize, u: f64, eps: f64, eta: f64) -> Result<Self> {
        Self::with_nu(n, u, nu_of_u(n, u, eps), eta)
    }

    /// `sigma*`: `u = 1/2`.
    pub fn star(n: usize, eps: f64, eta: f64) -> Result<Self> {
        Self::at_u(n, 0.5, eps, eta)
    }

    pub fn mu(&self) -> f64 {
        1.0 - self.nu
    }

    /// `1 - mu_eta = eta (1 - mu)`.
    pub fn nu_eta(&self) -> f64 {
        self.eta * self.nu
    }

    pub fn mu_eta(&self) -> f64 {
        1.0 - self.nu_eta()
    }
}

/// `1 - G_sym` at `t = 1 - nu`: `(1 - c)(sqrt(ut + 1 - t) - sqrt(ut))^2`.
fn g_sym_deficit(u: f64, c: f64, nu: f64) -> f64 {
    let gap = nu / ((u + nu * (1.0 - u)).sqrt() + (u * (1.0 - nu)).sqrt());
    (1.0 - c) * gap * gap
}

pub fn g_sym(u: f64, c: f64, t: f64) -> f64 {
    1.0 - g_sym_deficit(u, c, 1.0 - t)
}

/// `u L(t + (1 - t)/u) + (1 - u) L(t)`.
pub fn g_asym(u: f64, t: f64) -> f64 {
    g_asym_nu(u, 1.0 - t)
}

fn g_asym_nu(u: f64, nu: f64) -> f64 {
    u * l_excess(nu * (1.0 - u) / u) + (1.0 - u) * l_excess(-nu)
}

/// `1 - (1 - c)(1 - sqrt(t(2 - t)))`.
pub fn g_sym_star(c: f64, t: f64) -> f64 {
    1.0 - g_sym_star_deficit(c, 1.0 - t)
}

fn g_sym_star_deficit(c: f64, nu: f64) -> f64 {
    (1.0 - c) * nu * nu / (1.0 + (1.0 - nu * nu).sqrt())
}

/// `(L(2 - t) + L(t))/2`.
pub fn g_asym_star(t: f64) -> f64 {
    let nu = 1.0 - t;
    (l_excess(nu) + l_excess(-nu)) / 2.0
}

/// `(-ln G_sym(mu_eta), G_asym(mu_eta))`.
pub fn closed_form_exponents(p: &ClosedFormParams) -> Result<ExponentPair> {
    let nu = p.nu_eta();
    if !(0.0..1.0).contains(&nu) {
        return Err(invalid(format!("mu_eta = {} must lie in (0, 1]", 1.0 - nu)));
    }
    let (deficit, asym) = if p.u == 0.5 {
        (g_sym_star_deficit(p.c, nu), (l_excess(nu) + l_excess(-nu)) / 2.0)
    } else {
        (g_sym_deficit(p.u, p.c, nu), g_asym_nu(p.u, nu))
    };
    Ok(ExponentPair {
        sym: -(-deficit).ln_1p(),
        asym: asym.max(0.0),
    })
}

/// Closed-form exponents of `sigma*`.
pub fn sigma_star_exponents(n: usize, eps: f64, eta: f64) -> Result<ExponentPair> {
    closed_form_exponents(&ClosedFormParams::star(n, eps, eta)?)
}

/// `k(n - k)/(k xi^2 + n - k)`.
fn sym_weight(n: usize, k: usize, eps: f64) -> f64 {
    let (n, k) = (n as f64, k as f64);
    k * (n - k) / (k * eps.exp() + n - k)
}

/// The `k`-th candidate `-ln(1 - (xi - 1)^2/(n - 1) k(n - k)/(k xi^2 + n - k))`.
pub fn classical_sym_term(n: usize, k: usize, eps: f64) -> f64 {
    let xi_m1 = (eps / 2.0).exp_m1();
    -(-(xi_m1 * xi_m1) / (n as f64 - 1.0) * sym_weight(n, k, eps)).ln_1p()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalOptimum {
    pub value: f64,
    pub k: usize,
}

fn argmax_k(n: usize, g: impl Fn(usize) -> f64) -> (usize, f64) {
    (0..=n).map(|k| (k, g(k))).fold((0, f64::NEG_INFINITY), |best, cur| {
        if cur.1 > best.1 {
            cur
        } else {
            best
        }
    })
}

/// Exact classical symmetric optimum `S_C^1(n, eps)` with the maximizing `k`.
pub fn classical_opt_sym(n: usize, eps: f64) -> ClassicalOptimum {
    let (k, _) = argmax_k(n, |k| sym_weight(n, k, eps));
    ClassicalOptimum {
        value: classical_sym_term(n, k, eps),
        k,
    }
}

/// Upper bound on the classical symmetric optimum for `eta <= 1`.
pub fn classical_opt_sym_bound(n: usize, eps: f64, eta: f64) -> f64 {
    let nf = n as f64;
    let xi_m1 = (eps / 2.0).exp_m1();
    let fk = |k: usize| (k as f64 * eps.exp() + nf - k as f64) / nf;
    let (_, best) = argmax_k(n, |k| (k * (n - k)) as f64 / fk(k));
    let factor = (nf + eta * eta - 1.0) * xi_m1 * xi_m1 / (nf * nf * (nf - 1.0));
    -(-factor * best).ln_1p()
}

/// `F(n, k, eps)/(n f(n, k, eps))`, summed without cancellation.
pub fn classical_asym_term(n: usize, k: usize, eps: f64, eta: f64) -> f64 {
    let nf = n as f64;
    let kf = k as f64;
    let th = eps.exp_m1();
    let f = 1.0 + kf * th / nf;
    let x1 = eta * th * (nf - kf) / (nf * f);
    let x2 = -eta * th * kf / (nf * f);
    (kf * l_excess(x1) + (nf - kf) * l_excess(x2)) / nf
}

/// Exact classical asymmetric optimum `A_C^eta(n, eps)`.
pub fn classical_opt_asym(n: usize, eps: f64, eta: f64) -> ClassicalOptimum {
    let (k, value) = argmax_k(n, |k| classical_asym_term(n, k, eps, eta));
    ClassicalOptimum {
        value: value.max(0.0),
        k,
    }
}

/// `2 ln((sqrt 3 + sqrt c)/(sqrt 3 - sqrt c))`, `c = (n - 2)/(2n - 2)`.
pub fn advantage_threshold_sym(n: usize) -> f64 {
    let c = (n as f64 - 2.0) / (2.0 * n as f64 - 2.0);
    let (a, b) = (3f64.sqrt(), c.sqrt());
    2.0 * ((a + b) / (a - b)).ln()
}

/// `ln((sqrt(3(n - 1)^2 + 1) - 1)/(n - 1))`.
pub fn advantage_threshold_asym(n: usize) -> f64 {
    let m = n as f64 - 1.0;
    (((3.0 * m * m + 1.0).sqrt() - 1.0) / m).ln()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsoclinicBound {
    pub sym: f64,
    pub asym: f64,
    pub u_sym: f64,
    pub u_asym: f64,
}

fn maximize_on_grid(lo: f64, hi: f64, grid: usize, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let step = (hi - lo) / (grid - 1) as f64;
    let at = |i: usize| if i + 1 == grid { hi } else { lo + step * i as f64 };
    let (best_i, _) = (0..grid)
        .map(|i| (i, f(at(i))))
        .fold((0, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b });
    let a = at(best_i.saturating_sub(1));
    let b = at((best_i + 1).min(grid - 1));
    let (u, neg) = golden_section_on(|u| -f(u), a, b, 1e-10);
    let grid_val = f(at(best_i));
    if -neg >= grid_val {
        (u, -neg)
    } else {
        (at(best_i), grid_val)
    }
}

/// Suprema over `u in [1/n, 1/2]` of the closed-form exponents.
pub fn isoclinic_bound(n: usize, eps: f64, eta: f64, grid: usize) -> Result<IsoclinicBound> {
    if grid < 2 {
        return Err(invalid("u grid needs at least 2 points"));
    }
    check_eta(eta)?;
    let lo = 1.0 / n as f64;
    let eval = |u: f64| {
        ClosedFormParams::at_u(n, u, eps, eta)
            .and_then(|p| closed_form_exponents(&p))
            .unwrap_or(ExponentPair {
                sym: f64::NEG_INFINITY,
                asym: f64::NEG_INFINITY,
            })
    };
    let (u_sym, sym) = maximize_on_grid(lo, 0.5, grid, |u| eval(u).sym);
    let (u_asym, asym) = maximize_on_grid(lo, 0.5, grid, |u| eval(u).asym);
    Ok(IsoclinicBound { sym, asym, u_sym, u_asym })
}

/// One row of an `(n, eps, eta)` grid evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub n: usize,
    pub epsilon: f64,
    pub eta: f64,
    pub s_classical: f64,
    pub a_classical: f64,
    pub s_qstar: f64,
    pub a_qstar: f64,
    pub s_ratio: Option<f64>,
    pub a_ratio: Option<f64>,
    pub s_qalt: Option<f64>,
    pub a_qalt: Option<f64>,
}

fn ratio(q: f64, c: f64) -> Option<f64> {
    if c == 0.0 {
        None
    } else {
        Some(q / c)
    }
}

/// Classical optimum vs `sigma*` (and optionally an isoclinic mechanism at
/// `alt_u`) across an epsilon grid. For `eta < 1` the symmetric classical
/// column holds the upper bound.
pub fn ratio_sweep(n: usize, eps_grid: &[f64], eta: f64, alt_u: Option<f64>) -> Result<Vec<SweepRecord>> {
    check_eta(eta)?;
    if eps_grid.iter().any(|&e| !(e > 0.0)) {
        return Err(invalid("epsilon grid must be positive"));
    }
    if eps_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("epsilon grid must be ascending"));
    }
    eps_grid
        .par_iter()
        .map(|&eps| {
            let s_classical = if eta == 1.0 {
                classical_opt_sym(n, eps).value
            } else {
                classical_opt_sym_bound(n, eps, eta)
            };
            let a_classical = classical_opt_asym(n, eps, eta).value;
            let star = sigma_star_exponents(n, eps, eta)?;
            let alt = alt_u
                .map(|u| closed_form_exponents(&ClosedFormParams::at_u(n, u, eps, eta)?))
                .transpose()?;
            Ok(SweepRecord {
                n,
                epsilon: eps,
                eta,
                s_classical,
                a_classical,
                s_qstar: star.sym,
                a_qstar: star.asym,
                s_ratio: ratio(star.sym, s_classical),
                a_ratio: ratio(star.asym, a_classical),
                s_qalt: alt.map(|p| p.sym),
                a_qalt: alt.map(|p| p.asym),
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Sym,
    Asym,
}

impl std::str::FromStr for Mode {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sym" => Ok(Mode::Sym),
            "asym" => Ok(Mode::Asym),
            other => Err(invalid(format!("unknown mode `{other}` (sym|asym)"))),
        }
    }
}

/// `sigma*` exponent minus the classical optimum at `eta = 1`.
pub fn advantage_gap(n: usize, eps: f64, mode: Mode) -> f64 {
    let q = sigma_star_exponents(n, eps, 1.0).expect("sigma* parameters are valid");
    match mode {
        Mode::Sym => q.sym - classical_opt_sym(n, eps).value,
        Mode::Asym => q.asym - classical_opt_asym(n, eps, 1.0).value,
    }
}

pub fn advantage_threshold(n: usize, mode: Mode) -> f64 {
    match mode {
        Mode::Sym => advantage_threshold_sym(n),
        Mode::Asym => advantage_threshold_asym(n),
    }
}

/// Smallest `eps` in `(threshold, 10]` where the quantum advantage vanishes,
/// or `+inf` when the gap keeps its sign.
pub fn advantage_crossover(n: usize, mode: Mode) -> Result<f64> {
    if n < 3 {
        return Err(invalid("crossover needs n >= 3"));
    }
    let start = advantage_threshold(n, mode);
    let gap = |e: f64| advantage_gap(n, e, mode);
    let steps = 2000;
    let h = (10.0 - start) / steps as f64;
    let mut prev = start;
    for i in 1..=steps {
        let e = if i == steps { 10.0 } else { start + h * i as f64 };
        if gap(e) <= 0.0 {
            let (mut a, mut b) = (prev, e);
            while b - a > 1e-10 {
                let m = 0.5 * (a + b);
                if gap(m) > 0.0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            return Ok(0.5 * (a + b));
        }
        prev = e;
    }
    Ok(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::build_eitff;
    use crate::mechanisms::{binary_mechanism, isoclinic_mechanism, sigma_star, subset_mechanism};
    use crate::metrics::{classical_relative_entropy, classical_chernoff};
    use approx::assert_abs_diff_eq;

    #[test]
    fn trivial_families() {
        let frame = build_eitff(3, None).unwrap();
        let m = isoclinic_mechanism(&frame, 1.0, Some(1.0)).unwrap();
        assert!(sym_exponent(&m, 1.0).unwrap() < 1e-15);
        assert!(asym_exponent(&m, 1.0).unwrap() < 1e-15);
        let p = ClosedFormParams::with_nu(3, 0.5, 0.0, 1.0).unwrap();
        assert_eq!(closed_form_exponents(&p).unwrap(), ExponentPair { sym: 0.0, asym: 0.0 });
    }

    #[test]
    fn sigma_star_matches_closed_form() {
        let m = sigma_star(3, 1.0).unwrap();
        let p = ClosedFormParams::star(3, 1.0, 1.0).unwrap();
        assert_eq!(p.c, 0.25);
        let t = p.mu_eta();
        assert_abs_diff_eq!(sym_exponent(&m, 1.0).unwrap(), -g_sym_star(0.25, t).ln(), epsilon = 1e-8);
        assert_abs_diff_eq!(asym_exponent(&m, 1.0).unwrap(), g_asym_star(t), epsilon = 1e-8);
        let cf = closed_form_exponents(&p).unwrap();
        assert_abs_diff_eq!(cf.sym, -g_sym(0.5, 0.25, t).ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(cf.asym, g_asym(0.5, t), epsilon = 1e-14);
    }

    #[test]
    fn binary_star_exponents() {
        let b3 = binary_mechanism(3, 1.0, None).unwrap();
        assert_eq!(sym_exponent(&b3, 1.0).unwrap(), 0.0);
        let eps: f64 = 0.9;
        let b2 = binary_mechanism(2, eps, None).unwrap();
        let e = eps.exp();
        let p = [e / (e + 1.0), 1.0 / (e + 1.0)];
        let oracle = classical_relative_entropy(&p, &[0.5, 0.5]).unwrap();
        assert_abs_diff_eq!(asym_exponent(&b2, 1.0).unwrap(), oracle, epsilon = 1e-14);
        assert_abs_diff_eq!(classical_opt_asym(2, eps, 1.0).value, oracle, epsilon = 1e-10);
    }

    #[test]
    fn classical_sym_examples() {
        let eps: f64 = 0.7;
        let xi = (eps / 2.0).exp();
        let want = -(2.0 * xi / (xi * xi + 1.0)).ln();
        assert_abs_diff_eq!(classical_opt_sym(2, eps).value, want, epsilon = 1e-14);
        let e = eps.exp();
        let rr = classical_chernoff(&[e / (e + 1.0), 1.0 / (e + 1.0)], &[1.0 / (e + 1.0), e / (e + 1.0)]).unwrap();
        assert_abs_diff_eq!(classical_opt_sym(2, eps).value, rr, epsilon = 1e-12);
        let sub = subset_mechanism(3, 1, 1.0).unwrap();
        assert_abs_diff_eq!(classical_opt_sym(3, 1.0).value, sym_exponent(&sub, 1.0).unwrap(), epsilon = 1e-10);
        for n in 2..8 {
            assert_abs_diff_eq!(classical_opt_sym_bound(n, 0.8, 1.0), classical_opt_sym(n, 0.8).value, epsilon = 1e-15);
        }
    }

    #[test]
    fn classical_asym_examples() {
        // [L(2) - 2 L(3/2)]/3 at n = 2, e^eps = 2.
        let want = (l_fn(2.0) - 2.0 * l_fn(1.5)) / 3.0;
        assert_abs_diff_eq!(classical_opt_asym(2, 2f64.ln(), 1.0).value, want, epsilon = 1e-15);
        assert_abs_diff_eq!(want, 0.05663301226513251, epsilon = 1e-12);
        // Direct classical formula.
        let (n, eps, eta) = (5usize, 0.8f64, 0.6f64);
        for k in 0..=n {
            let f = (k as f64 * eps.exp() + (n - k) as f64) / n as f64;
            let d1 = eta * eps.exp() + (1.0 - eta) * f;
            let d2 = eta + (1.0 - eta) * f;
            let big = k as f64 * l_fn(d1) + (n - k) as f64 * l_fn(d2) - n as f64 * l_fn(f);
            assert_abs_diff_eq!(classical_asym_term(n, k, eps, eta), big / (n as f64 * f), epsilon = 1e-14);
        }
    }

    #[test]
    fn thresholds() {
        assert_abs_diff_eq!(advantage_threshold_sym(3), 2.0 * ((2.0 * 3f64.sqrt() + 1.0) / (2.0 * 3f64.sqrt() - 1.0)).ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(advantage_threshold_sym(3), 1.1885, epsilon = 1e-4);
        assert_abs_diff_eq!(advantage_threshold_asym(3), 0.2645, epsilon = 1e-4);
        assert_abs_diff_eq!(advantage_threshold_sym(1_000_000), 1.7340, epsilon = 1e-3);
        assert_abs_diff_eq!(advantage_threshold_asym(1_000_000), 0.5493, epsilon = 1e-3);
        for n in 3..50 {
            assert!(advantage_threshold_sym(n + 1) > advantage_threshold_sym(n));
            assert!(advantage_threshold_asym(n + 1) > advantage_threshold_asym(n));
        }
    }

    #[test]
    fn crossovers() {
        for n in 3..=10 {
            for mode in [Mode::Sym, Mode::Asym] {
                let x = advantage_crossover(n, mode).unwrap();
                assert!(x >= advantage_threshold(n, mode), "n = {n}");
            }
        }
        let x = advantage_crossover(3, Mode::Asym).unwrap();
        assert!(x.is_finite() && x > 0.2645);
        assert!(advantage_gap(4, 2.0, Mode::Sym) > 0.0);
        assert!(advantage_crossover(4, Mode::Sym).unwrap() > 2.0);
    }

    #[test]
    fn bound_dominates() {
        for n in 3..=10 {
            for eps in [0.25, 0.5, 1.0, 2.0] {
                let b = isoclinic_bound(n, eps, 1.0, 2048).unwrap();
                let star = sigma_star_exponents(n, eps, 1.0).unwrap();
                assert!(b.sym >= star.sym - 1e-15 && b.asym >= star.asym - 1e-15);
                assert!(b.sym >= classical_opt_sym(n, eps).value - 1e-12);
                assert!(b.asym >= classical_opt_asym(n, eps, 1.0).value - 1e-12);
            }
        }
        let b = isoclinic_bound(10, 2.0, 1.0, 2048).unwrap();
        assert!(b.u_sym < 0.5);
    }

    #[test]
    fn sweep_shape() {
        let rec = ratio_sweep(10, &[0.5, 1.0, 2.0], 1.0, Some(0.4)).unwrap();
        assert_eq!(rec.len(), 3);
        assert!(rec.iter().all(|r| r.s_qalt.is_some() && r.s_ratio.unwrap() > 0.0));
        assert!(ratio_sweep(3, &[1.0, 0.5], 1.0, None).is_err());
        assert_eq!(ratio(0.0, 0.0), None);
    }

    #[test]
    fn monotone_in_eps() {
        for n in 2..=8 {
            let mut last = (0.0, 0.0);
            for i in 1..=60 {
                let eps = 0.05 * i as f64;
                let cur = (classical_opt_sym(n, eps).value, classical_opt_asym(n, eps, 1.0).value);
                assert!(cur.0 >= last.0 && cur.1 >= last.1);
                last = cur;
            }
        }
    }
}
