//! Equi-isoclinic tight fusion frames in the `d = 2r`, `r = 2^a` family.
//!
//! Projections are `P_i = (I + A_i)/2` with `A_i = sum_k v_i(k) G_k`, where
//! `G_k` are Jordan-Wigner Clifford generators and `v_i` the vertices of a
//! regular simplex. `{A_i, A_j} = 2<v_i, v_j> I` gives `P_j P_i P_j = c P_j`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Hermitian, C64};

/// `rho_C(r) = 2a + 2` where `2^a` exactly divides `r`.
pub fn radon_hurwitz(r: u64) -> u64 {
    assert!(r >= 1, "radon_hurwitz needs r >= 1");
    2 * u64::from(r.trailing_zeros()) + 2
}

fn pauli(tag: char) -> ComplexMatrix {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let rows = match tag {
        'I' => [[one, z], [z, one]],
        'X' => [[z, one], [one, z]],
        'Y' => [[z, -i], [i, z]],
        'Z' => [[one, z], [z, -one]],
        _ => unreachable!(),
    };
    ComplexMatrix::from_fn(2, |r, c| rows[r][c])
}

fn chain(tags: &[char]) -> ComplexMatrix {
    tags.iter()
        .skip(1)
        .fold(pauli(tags[0]), |acc, &t| acc.kron(&pauli(t)))
}

/// The `2m + 1` pairwise anticommuting Hermitian unitaries on `m` qubits,
/// ordered `X I.., Y I.., Z X I.., Z Y I.., ..., Z..Z`.
pub fn clifford_generators(m: usize) -> Vec<Hermitian> {
    assert!(m >= 1, "clifford_generators needs m >= 1");
    let mut out = Vec::with_capacity(2 * m + 1);
    for k in 0..m {
        for head in ['X', 'Y'] {
            let tags: Vec<char> = (0..m)
                .map(|j| match j.cmp(&k) {
                    std::cmp::Ordering::Less => 'Z',
                    std::cmp::Ordering::Equal => head,
                    std::cmp::Ordering::Greater => 'I',
                })
                .collect();
            out.push(chain(&tags).hermitian_part());
        }
    }
    out.push(chain(&vec!['Z'; m]).hermitian_part());
    out
}

/// `n` unit vectors in `R^(n-1)` with pairwise inner product `-1/(n-1)`.
///
/// Rows of an orthonormal (Helmert) basis of the complement of the all-ones
/// vector, rescaled by `sqrt(n/(n-1))`.
pub fn simplex_vectors(n: usize) -> Vec<Vec<f64>> {
    assert!(n >= 2, "simplex_vectors needs n >= 2");
    let scale = (n as f64 / (n - 1) as f64).sqrt();
    (0..n)
        .map(|i| {
            (1..n)
                .map(|k| {
                    let norm = ((k * (k + 1)) as f64).sqrt();
                    let entry = match i.cmp(&k) {
                        std::cmp::Ordering::Less => 1.0 / norm,
                        std::cmp::Ordering::Equal => -(k as f64) / norm,
                        std::cmp::Ordering::Greater => 0.0,
                    };
                    scale * entry
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FusionFrame {
    pub d: usize,
    pub r: usize,
    pub n: usize,
    pub c: f64,
    pub projections: Vec<Hermitian>,
}

impl FusionFrame {
    /// Wraps a projection family after checking it certifies as an EITFF.
    pub fn from_projections(projections: Vec<Hermitian>, tol: f64) -> Result<Self> {
        let cert = verify_eitff(&projections, tol)?;
        if !cert.is_eitff {
            return Err(Error::InvalidArgument(format!(
                "projections are not an EITFF (residual {:.3e})",
                cert.max_residual
            )));
        }
        let d = projections[0].dim();
        let r = projections[0].trace().round() as usize;
        let n = projections.len();
        Ok(FusionFrame {
            d,
            r,
            n,
            c: frame_constant(d, r, n),
            projections,
        })
    }

    /// `u = r/d`.
    pub fn u(&self) -> f64 {
        self.r as f64 / self.d as f64
    }
}

/// `c = (nr - d)/(d(n - 1))`, reduced over the integers before the cast.
pub fn frame_constant(d: usize, r: usize, n: usize) -> f64 {
    let num = (n * r) as i64 - d as i64;
    let den = (d * (n - 1)) as i64;
    if num == 0 {
        return 0.0;
    }
    let g = gcd(num.unsigned_abs(), den as u64) as i64;
    (num / g) as f64 / (den / g) as f64
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Smallest `a` for which the `d = 2r` construction covers `n` inputs.
pub fn default_a(n: usize) -> u32 {
    (n.div_ceil(2) as i64 - 2).max(0) as u32
}

pub fn build_eitff(n: usize, a: Option<u32>) -> Result<FusionFrame> {
    if n < 2 {
        return Err(Error::InvalidArgument("a fusion frame needs n >= 2".into()));
    }
    let a = a.unwrap_or_else(|| default_a(n));
    let max = 2 * a as usize + 4;
    if n > max {
        return Err(Error::Existence { n, a, max });
    }
    let m = a as usize + 1;
    let d = 1usize << m;
    let r = d / 2;
    let gens = clifford_generators(m);
    let verts = simplex_vectors(n);
    let id = ComplexMatrix::identity(d);
    let projections = verts
        .iter()
        .map(|v| {
            let a_i = v
                .iter()
                .zip(&gens)
                .fold(ComplexMatrix::zeros(d), |acc, (w, g)| &acc + &g.matrix().scale(*w));
            (&id + &a_i).scale(0.5).hermitian_part()
        })
        .collect();
    Ok(FusionFrame {
        d,
        r,
        n,
        c: frame_constant(d, r, n),
        projections,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameCertificate {
    pub is_tight: bool,
    pub is_ectff: bool,
    pub is_eitff: bool,
    pub c_observed: f64,
    pub max_residual: f64,
}

pub fn verify_eitff(projections: &[Hermitian], tol: f64) -> Result<FrameCertificate> {
    let first = projections
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty projection family".into()))?;
    let d = first.dim();
    for p in projections {
        if p.dim() != d {
            return Err(Error::DimensionMismatch(d, p.dim()));
        }
        let sq = p.matrix() * p.matrix();
        let defect = (&sq - p.matrix()).operator_norm();
        if defect > 100.0 * tol {
            return Err(Error::NotProjection(defect));
        }
    }
    let n = projections.len();
    let r = first.trace().round().max(0.0) as usize;
    let c = if n >= 2 { frame_constant(d, r, n) } else { 0.0 };

    let mut residual: f64 = 0.0;
    for p in projections {
        residual = residual.max((p.trace() - r as f64).abs());
    }
    let sum = projections
        .iter()
        .fold(ComplexMatrix::zeros(d), |acc, p| &acc + p.matrix());
    let tight_target = ComplexMatrix::identity(d).scale((n * r) as f64 / d as f64);
    residual = residual.max((&sum - &tight_target).operator_norm());
    let is_tight = residual <= tol;

    let mut chordal_res: f64 = 0.0;
    let mut c_observed = c;
    let mut first_pair = true;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let t = projections[i].trace_product(&projections[j]);
            if first_pair && r > 0 {
                c_observed = t / r as f64;
                first_pair = false;
            }
            chordal_res = chordal_res.max((t - r as f64 * c).abs());
        }
    }
    residual = residual.max(chordal_res);
    let is_ectff = is_tight && chordal_res <= tol;

    let mut iso_res: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let pj = projections[j].matrix();
            let sandwich = &(pj * projections[i].matrix()) * pj;
            iso_res = iso_res.max((&sandwich - &pj.scale(c)).operator_norm());
        }
    }
    residual = residual.max(iso_res);
    let is_eitff = is_ectff && iso_res <= tol;

    Ok(FrameCertificate {
        is_tight,
        is_ectff,
        is_eitff,
        c_observed,
        max_residual: residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn radon_hurwitz_values() {
        assert_eq!(radon_hurwitz(1), 2);
        assert_eq!(radon_hurwitz(6), 4);
        assert_eq!(radon_hurwitz(8), 8);
    }

    fn anticommutator_residual(gens: &[Hermitian]) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in gens.iter().enumerate() {
            for (j, b) in gens.iter().enumerate() {
                let ab = a.matrix() * b.matrix();
                let ba = b.matrix() * a.matrix();
                let target = if i == j {
                    ComplexMatrix::identity(a.dim()).scale(2.0)
                } else {
                    ComplexMatrix::zeros(a.dim())
                };
                worst = worst.max((&(&ab + &ba) - &target).frobenius_norm());
            }
        }
        worst
    }

    #[test]
    fn pauli_triple() {
        let g = clifford_generators(1);
        assert_eq!(g.len(), 3);
        // Independent products: XY = iZ.
        let xy = g[0].matrix() * g[1].matrix();
        let iz = g[2].matrix().scale_complex(C64::new(0.0, 1.0));
        assert!((&xy - &iz).frobenius_norm() < 1e-15);
        assert!(anticommutator_residual(&g) < 1e-14);
    }

    #[test]
    fn generators_anticommute_and_are_traceless() {
        for m in 1..=5 {
            let g = clifford_generators(m);
            assert_eq!(g.len(), 2 * m + 1);
            assert!(anticommutator_residual(&g) <= 1e-13);
            for gk in &g {
                assert_abs_diff_eq!(gk.trace(), 0.0);
            }
        }
    }

    #[test]
    fn simplex_geometry() {
        assert_eq!(simplex_vectors(2), vec![vec![1.0], vec![-1.0]]);
        for n in 2..=12 {
            let v = simplex_vectors(n);
            for i in 0..n {
                for j in 0..n {
                    let dot: f64 = v[i].iter().zip(&v[j]).map(|(a, b)| a * b).sum();
                    let want = if i == j { 1.0 } else { -1.0 / (n - 1) as f64 };
                    assert_abs_diff_eq!(dot, want, epsilon = 1e-12);
                }
            }
            for k in 0..n - 1 {
                let s: f64 = v.iter().map(|vi| vi[k]).sum();
                assert!(s.abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn n3_frame() {
        let f = build_eitff(3, None).unwrap();
        assert_eq!((f.d, f.r, f.n), (2, 1, 3));
        assert_eq!(f.c, 0.25);
        let sum = f.projections.iter().fold(ComplexMatrix::zeros(2), |a, p| &a + p.matrix());
        assert!((&sum - &ComplexMatrix::identity(2).scale(1.5)).frobenius_norm() < 1e-14);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_abs_diff_eq!(
                        f.projections[i].trace_product(&f.projections[j]),
                        0.25,
                        epsilon = 1e-14
                    );
                }
            }
        }
    }

    #[test]
    fn built_frames_certify() {
        for n in 2..=10 {
            let f = build_eitff(n, None).unwrap();
            let cert = verify_eitff(&f.projections, 1e-10).unwrap();
            assert!(cert.is_eitff && cert.is_ectff && cert.is_tight, "n = {n}");
            assert_eq!(f.c, (n - 2) as f64 / (2 * n - 2) as f64);
            assert_abs_diff_eq!(cert.c_observed, f.c, epsilon = 1e-12);
        }
        let f = build_eitff(10, None).unwrap();
        assert_eq!((f.d, f.r), (16, 8));
        assert_eq!(f.c, 4.0 / 9.0);
    }

    #[test]
    fn larger_a_also_certifies() {
        let f = build_eitff(3, Some(2)).unwrap();
        assert_eq!((f.d, f.r), (8, 4));
        assert!(verify_eitff(&f.projections, 1e-10).unwrap().is_eitff);
    }

    #[test]
    fn existence_violation() {
        assert!(matches!(build_eitff(7, Some(1)), Err(Error::Existence { n: 7, a: 1, max: 6 })));
    }

    #[test]
    fn small_certificates() {
        let p = vec![Hermitian::from_real_diag(&[1.0, 0.0]), Hermitian::from_real_diag(&[0.0, 1.0])];
        let cert = verify_eitff(&p, 1e-10).unwrap();
        assert!(cert.is_eitff);
        assert_eq!(cert.c_observed, 0.0);

        let p = vec![
            Hermitian::from_real_diag(&[1.0, 0.0, 0.0]),
            Hermitian::from_real_diag(&[0.0, 1.0, 0.0]),
        ];
        let cert = verify_eitff(&p, 1e-10).unwrap();
        assert!(!cert.is_tight && !cert.is_eitff);

        let bad = vec![Hermitian::from_real_diag(&[0.5, 0.0])];
        assert!(matches!(verify_eitff(&bad, 1e-10), Err(Error::NotProjection(_))));
        let mixed = vec![Hermitian::identity(2), Hermitian::identity(3)];
        assert!(matches!(verify_eitff(&mixed, 1e-10), Err(Error::DimensionMismatch(2, 3))));
    }

    #[test]
    fn frame_json_shape() {
        let f = build_eitff(2, None).unwrap();
        let v: serde_json::Value = serde_json::to_value(&f).unwrap();
        for key in ["d", "r", "n", "c", "projections"] {
            assert!(v.get(key).is_some());
        }
        let back: FusionFrame = serde_json::from_value(v).unwrap();
        assert_eq!(back.projections, f.projections);
    }
}
