//! Random states, directions, unitaries and POVMs for randomized checks.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{ComplexMatrix, DensityMatrix, Hermitian, C64};

fn gaussian<R: Rng>(rng: &mut R, d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

/// Ginibre state mixed with `I/d` at weight `floor`, so `lambda_min >= floor/d`.
pub fn random_density<R: Rng>(rng: &mut R, d: usize, floor: f64) -> Result<DensityMatrix> {
    let g = gaussian(rng, d);
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    let m = &w.scale((1.0 - floor) / tr) + &ComplexMatrix::identity(d).scale(floor / d as f64);
    DensityMatrix::new(m.hermitian_part())
}

pub fn random_hermitian<R: Rng>(rng: &mut R, d: usize) -> Hermitian {
    gaussian(rng, d).hermitian_part()
}

/// Traceless Hermitian direction with operator norm `norm`.
pub fn random_traceless<R: Rng>(rng: &mut R, d: usize, norm: f64) -> Result<Hermitian> {
    let h = random_hermitian(rng, d);
    let shift = Hermitian::identity(d).scale(h.trace() / d as f64);
    let x = &h - &shift;
    let op = x.operator_norm()?;
    Ok(x.scale(norm / op))
}

/// `n` traceless directions summing to zero, each with operator norm at most `norm`.
pub fn random_mean_zero<R: Rng>(rng: &mut R, d: usize, n: usize, norm: f64) -> Result<Vec<Hermitian>> {
    let raw: Vec<Hermitian> = (0..n).map(|_| random_traceless(rng, d, 1.0)).collect::<Result<_>>()?;
    let mut mean = Hermitian::zeros(d);
    for x in &raw {
        mean = &mean + &x.scale(1.0 / n as f64);
    }
    let centered: Vec<Hermitian> = raw.iter().map(|x| x - &mean).collect();
    let mut top: f64 = 0.0;
    for x in &centered {
        top = top.max(x.operator_norm()?);
    }
    Ok(centered.iter().map(|x| x.scale(norm / top)).collect())
}

/// Haar-distributed unitary via Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = gaussian(rng, d);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
    for j in 0..d {
        let mut v: Vec<C64> = (0..d).map(|i| g[(i, j)]).collect();
        for u in &cols {
            let dot: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= dot * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(d, |i, j| cols[j][i])
}

/// `m` elements `S^(-1/2) A_y S^(-1/2)` from random PSD parts `A_y`.
pub fn random_povm<R: Rng>(rng: &mut R, d: usize, m: usize) -> Result<Vec<Hermitian>> {
    let parts: Vec<ComplexMatrix> = (0..m)
        .map(|_| {
            let g = gaussian(rng, d);
            &g * &g.adjoint()
        })
        .collect();
    let mut total = ComplexMatrix::zeros(d);
    for p in &parts {
        total = &total + p;
    }
    let inv_sqrt = total.hermitian_part().apply(|l| (l > 0.0).then(|| 1.0 / l.sqrt()))?;
    Ok(parts
        .iter()
        .map(|p| (&(inv_sqrt.matrix() * p) * inv_sqrt.matrix()).hermitian_part())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 2..=5 {
            let rho = random_density(&mut rng, d, 0.1).unwrap();
            assert!(rho.spectrum().min() >= 0.1 / d as f64 - 1e-12);
            let x = random_traceless(&mut rng, d, 0.3).unwrap();
            assert!(x.trace().abs() < 1e-12);
            assert!((x.operator_norm().unwrap() - 0.3).abs() < 1e-12);
            let u = random_unitary(&mut rng, d);
            let e = &(&u.adjoint() * &u) - &ComplexMatrix::identity(d);
            assert!(e.frobenius_norm() < 1e-12);
            let povm = random_povm(&mut rng, d, 3).unwrap();
            let mut s = ComplexMatrix::zeros(d);
            for m in &povm {
                assert!(m.is_psd(1e-12).unwrap());
                s = &s + m.matrix();
            }
            assert!((&s - &ComplexMatrix::identity(d)).frobenius_norm() < 1e-10);
            let dirs = random_mean_zero(&mut rng, d, 4, 0.2).unwrap();
            let mut sum = Hermitian::zeros(d);
            for x in &dirs {
                sum = &sum + x;
            }
            assert!(sum.matrix().frobenius_norm() < 1e-12);
        }
    }
}
