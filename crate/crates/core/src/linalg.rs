//! Dense complex Hermitian linear algebra.
//!
//! Everything downstream (frames, mechanisms, divergences) is built on three
//! value types:
//!
//! - [`ComplexMatrix`]: a square row-major matrix of `Complex64`.
//! - [`Hermitian`]: a `ComplexMatrix` that passed the Hermiticity check.
//! - [`DensityMatrix`]: a unit-trace PSD `Hermitian` that carries its own
//!   cached [`Spectrum`], so repeated matrix functions cost no extra
//!   eigendecompositions.
//!
//! Eigendecomposition is cyclic complex Jacobi, which is accurate to a few
//! ulps at the dimensions used here (d <= 32).

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default threshold below which an eigenvalue counts as zero.
pub const RANK_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;
const SWEEP_TOL: f64 = 1e-13;
const TRACE_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

/// Wire form: `{"dim": d, "entries": [[re, im], ...]}`, row-major.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(json: MatrixJson) -> Result<Self> {
        if json.dim == 0 || json.entries.len() != json.dim * json.dim {
            return Err(Error::InvalidArgument(format!(
                "matrix of dim {} needs {} entries, got {}",
                json.dim,
                json.dim * json.dim,
                json.entries.len()
            )));
        }
        let data: Vec<C64> = json.entries.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite matrix entry".into()));
        }
        Ok(ComplexMatrix { dim: json.dim, data })
    }
}

impl From<ComplexMatrix> for MatrixJson {
    fn from(m: ComplexMatrix) -> Self {
        MatrixJson {
            dim: m.dim,
            entries: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { dim, data }
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), |i, j| if i == j { C64::new(diag[i], 0.0) } else { C64::new(0.0, 0.0) })
    }

    /// Builds a matrix from rows; errors unless the rows form a square.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidArgument("matrix rows must form a non-empty square".into()));
        }
        Ok(ComplexMatrix {
            dim,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_complex(&self, s: C64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn kron(&self, other: &ComplexMatrix) -> Self {
        let (a, b) = (self.dim, other.dim);
        Self::from_fn(a * b, |i, j| self[(i / b, j / b)] * other[(i % b, j % b)])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation from Hermiticity, `max |A_ij - conj(A_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(A + A^dag) / 2`, returned without re-validation.
    pub fn hermitian_part(&self) -> Hermitian {
        let m = Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5);
        Hermitian(m)
    }

    /// Spectral norm for an arbitrary square matrix, via `A^dag A`.
    pub fn operator_norm(&self) -> f64 {
        let gram = (&self.adjoint() * self).hermitian_part();
        match gram.eigh() {
            Ok(spec) => spec.max().max(0.0).sqrt(),
            Err(_) => self.frobenius_norm(),
        }
    }

    fn check_dim(&self, other: &ComplexMatrix) {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.check_dim(rhs);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.check_dim(rhs);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.check_dim(rhs);
        let d = self.dim;
        let mut out = ComplexMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * rhs.data[k * d + j];
                }
            }
        }
        out
    }
}

/// A complex matrix satisfying `max|H_ij - conj(H_ji)| <= 1e-12 (1 + ||H||)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct Hermitian(ComplexMatrix);

impl TryFrom<ComplexMatrix> for Hermitian {
    type Error = Error;
    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Hermitian::new(m)
    }
}

impl From<Hermitian> for ComplexMatrix {
    fn from(h: Hermitian) -> Self {
        h.0
    }
}

impl Hermitian {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let defect = m.hermitian_defect();
        if defect > 1e-12 {
            let scale = m.hermitian_part().operator_norm()?;
            if defect > 1e-12 * (1.0 + scale) {
                return Err(Error::NotHermitian(defect));
            }
        }
        Ok(Hermitian(m))
    }

    pub fn identity(dim: usize) -> Self {
        Hermitian(ComplexMatrix::identity(dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Hermitian(ComplexMatrix::zeros(dim))
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        Hermitian(ComplexMatrix::from_real_diag(diag))
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// Real trace.
    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn scale(&self, s: f64) -> Hermitian {
        Hermitian(self.0.scale(s))
    }

    /// `U^dag H U` for a unitary `U`.
    pub fn conjugate_by(&self, unitary: &ComplexMatrix) -> Hermitian {
        (&(&unitary.adjoint() * &self.0) * unitary).hermitian_part()
    }

    /// `U H U^dag`.
    pub fn rotate(&self, unitary: &ComplexMatrix) -> Hermitian {
        (&(unitary * &self.0) * &unitary.adjoint()).hermitian_part()
    }

    /// `Tr(A B)`, real for Hermitian arguments.
    pub fn trace_product(&self, other: &Hermitian) -> f64 {
        let d = self.dim();
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                acc += (self.0[(i, j)] * other.0[(j, i)]).re;
            }
        }
        acc
    }

    pub fn eigh(&self) -> Result<Spectrum> {
        jacobi_eigh(&self.0)
    }

    pub fn norms(&self) -> Result<Norms> {
        let spec = self.eigh()?;
        Ok(Norms {
            operator: spec.values.iter().fold(0.0_f64, |m, l| m.max(l.abs())),
            trace: spec.values.iter().map(|l| l.abs()).sum(),
            frobenius: self.0.frobenius_norm(),
        })
    }

    pub fn operator_norm(&self) -> Result<f64> {
        Ok(self.norms()?.operator)
    }

    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        Ok(self.eigh()?.min() >= -tol)
    }

    pub fn apply(&self, f: impl Fn(f64) -> Option<f64>) -> Result<Hermitian> {
        self.eigh()?.apply(f)
    }
}

impl Add for &Hermitian {
    type Output = Hermitian;
    fn add(self, rhs: &Hermitian) -> Hermitian {
        Hermitian(&self.0 + &rhs.0)
    }
}

impl Sub for &Hermitian {
    type Output = Hermitian;
    fn sub(self, rhs: &Hermitian) -> Hermitian {
        Hermitian(&self.0 - &rhs.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Norms {
    pub operator: f64,
    pub trace: f64,
    pub frobenius: f64,
}

/// Eigenvalues in ascending order with matching unitary eigenvector columns.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("non-empty spectrum")
    }

    /// `U f(diag) U^dag`; `None` from `f` marks a point outside its domain.
    pub fn apply(&self, f: impl Fn(f64) -> Option<f64>) -> Result<Hermitian> {
        let mapped: Vec<f64> = self
            .values
            .iter()
            .map(|&l| f(l).filter(|v| v.is_finite()).ok_or(Error::Domain(l)))
            .collect::<Result<_>>()?;
        Ok(self.compose(&mapped))
    }

    pub fn reconstruct(&self) -> Hermitian {
        self.compose(&self.values)
    }

    fn compose(&self, diag: &[f64]) -> Hermitian {
        let d = diag.len();
        let u = &self.vectors;
        let m = ComplexMatrix::from_fn(d, |i, j| {
            (0..d).map(|k| u[(i, k)] * u[(j, k)].conj() * diag[k]).sum()
        });
        m.hermitian_part()
    }

    /// `|<u_i|v_j>|^2` for eigenvectors of two spectra; `Tr E_i F_j` when
    /// summed over degenerate blocks.
    pub fn overlaps(&self, other: &Spectrum) -> Vec<Vec<f64>> {
        let w = &self.vectors.adjoint() * &other.vectors;
        let d = self.values.len();
        (0..d).map(|i| (0..d).map(|j| w[(i, j)].norm_sqr()).collect()).collect()
    }
}

/// Cyclic complex Jacobi on a Hermitian matrix.
fn jacobi_eigh(h: &ComplexMatrix) -> Result<Spectrum> {
    let d = h.dim;
    let mut a = h.clone();
    let mut v = ComplexMatrix::identity(d);
    let fro = a.frobenius_norm();
    let target = SWEEP_TOL * fro;
    let off_norm = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = fro == 0.0 || d == 1;
    let mut sweep = 0;
    while !converged {
        if off_norm(&a) <= target {
            converged = true;
            break;
        }
        if sweep == MAX_SWEEPS {
            break;
        }
        sweep += 1;
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = a[(p, q)];
                let abs = apq.norm();
                if abs == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let phase = (apq / abs).conj();
                // G = D J with D = diag(1, conj(phase of a_pq)) on (p, q).
                let gpp = C64::new(c, 0.0);
                let gpq = C64::new(s, 0.0);
                let gqp = phase * (-s);
                let gqq = phase * c;

                for k in 0..d {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * gpp + akq * gqp;
                    a[(k, q)] = akp * gpq + akq * gqq;
                }
                for k in 0..d {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
                    a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
                }
                for k in 0..d {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * gpp + vkq * gqp;
                    v[(k, q)] = vkp * gpq + vkq * gqq;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(d, |i, j| v[(i, order[j])]);
    Ok(Spectrum { values, vectors })
}

pub fn eigh(h: &Hermitian) -> Result<Spectrum> {
    h.eigh()
}

pub fn matrix_function(h: &Hermitian, f: impl Fn(f64) -> Option<f64>) -> Result<Hermitian> {
    h.apply(f)
}

pub fn norms(h: &Hermitian) -> Result<Norms> {
    h.norms()
}

pub fn is_psd(h: &Hermitian, tol: f64) -> Result<bool> {
    h.is_psd(tol)
}

/// A unit-trace PSD Hermitian matrix with its spectrum cached.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct DensityMatrix {
    matrix: Hermitian,
    spectrum: Spectrum,
    rank_tol: f64,
}

impl TryFrom<ComplexMatrix> for DensityMatrix {
    type Error = Error;
    fn try_from(m: ComplexMatrix) -> Result<Self> {
        DensityMatrix::new(Hermitian::new(m)?)
    }
}

impl From<DensityMatrix> for ComplexMatrix {
    fn from(rho: DensityMatrix) -> Self {
        rho.matrix.0
    }
}

impl PartialEq for DensityMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl DensityMatrix {
    pub fn new(h: Hermitian) -> Result<Self> {
        let tr = h.0.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::NotDensity(format!("trace {} differs from 1", tr.re)));
        }
        let spectrum = h.eigh()?;
        if spectrum.min() < -PSD_TOL {
            return Err(Error::NotDensity(format!(
                "smallest eigenvalue {:.3e} is negative",
                spectrum.min()
            )));
        }
        Ok(DensityMatrix {
            matrix: h,
            spectrum,
            rank_tol: RANK_TOL,
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let diag = vec![1.0 / dim as f64; dim];
        DensityMatrix::diagonal(&diag).expect("uniform vector is a state")
    }

    /// `diag(p)` for a probability vector.
    pub fn diagonal(p: &[f64]) -> Result<Self> {
        DensityMatrix::new(Hermitian::from_real_diag(p))
    }

    pub fn with_rank_tol(mut self, rank_tol: f64) -> Self {
        self.rank_tol = rank_tol;
        self
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn hermitian(&self) -> &Hermitian {
        &self.matrix
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix.0
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }

    pub fn is_full_rank(&self) -> bool {
        self.spectrum.min() >= self.rank_tol
    }

    /// Errors with [`Error::RankDeficient`] unless the state has full rank.
    pub fn require_full_rank(&self) -> Result<()> {
        if self.is_full_rank() {
            Ok(())
        } else {
            Err(Error::RankDeficient(self.spectrum.min()))
        }
    }

    /// Eigenvalues with those within `rank_tol` of zero snapped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.spectrum
            .values
            .iter()
            .map(|&l| if l.abs() < self.rank_tol { 0.0 } else { l })
            .collect()
    }

    /// Convex combination `sum w_k rho_k`; the weights must sum to 1.
    pub fn mixture(weights: &[f64], states: &[DensityMatrix]) -> Result<DensityMatrix> {
        let first = states.first().ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        if weights.len() != states.len() {
            return Err(Error::DimensionMismatch(weights.len(), states.len()));
        }
        let mut acc = ComplexMatrix::zeros(first.dim());
        for (w, s) in weights.iter().zip(states) {
            if s.dim() != first.dim() {
                return Err(Error::DimensionMismatch(first.dim(), s.dim()));
            }
            acc = &acc + &s.matrix().scale(*w);
        }
        DensityMatrix::new(acc.hermitian_part())
    }

    /// Depolarizing channel `t Tr(rho) I/d + (1 - t) rho`.
    pub fn depolarize(&self, t: f64) -> Result<DensityMatrix> {
        let d = self.dim();
        let mixed = ComplexMatrix::identity(d).scale(t / d as f64);
        DensityMatrix::new((&mixed + &self.matrix().scale(1.0 - t)).hermitian_part())
    }

    /// `U rho U^dag`.
    pub fn rotate(&self, unitary: &ComplexMatrix) -> Result<DensityMatrix> {
        DensityMatrix::new(self.matrix.rotate(unitary))
    }

    /// `rho^s` from the cached spectrum, for full-rank states.
    pub fn power(&self, s: f64) -> Result<Hermitian> {
        self.require_full_rank()?;
        self.spectrum.apply(|l| Some(l.powf(s)))
    }

    pub fn log(&self) -> Result<Hermitian> {
        let tol = self.rank_tol;
        self.spectrum.apply(|l| if l > tol { Some(l.ln()) } else { None })
    }
}
