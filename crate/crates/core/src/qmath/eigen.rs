//! Cyclic Jacobi eigensolver for dense complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a[p][q]` and then
//! applies a real Givens rotation, so the accumulated transform stays unitary.
//! For the dimensions this crate targets (at most a few hundred) Jacobi is
//! accurate to a few ulps of the matrix norm.

use num_complex::Complex64;

use super::{check_hermitian, ComplexMatrix};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `h = V diag(values) V†` with eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Column `j` of the eigenvector matrix.
    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.vectors.get(i, j)).collect()
    }

    /// `V f(Λ) V†` for a real function applied to the eigenvalues.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let weights: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, w) in weights.iter().enumerate() {
                if *w != 0.0 {
                    acc += self.vectors.get(i, k) * self.vectors.get(j, k).conj() * *w;
                }
            }
            acc
        })
    }

    /// Projector onto the span of the eigenvectors selected by `keep`.
    pub fn spectral_projector(&self, keep: impl Fn(f64) -> bool) -> ComplexMatrix {
        self.reconstruct_with(|v| if keep(v) { 1.0 } else { 0.0 })
    }
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted in descending order. Each eigenvector is rescaled by
/// a unit phase so that its first component of magnitude above `1e-10` is real
/// and positive, which fixes the output for non-degenerate spectra.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(Error::BadShape(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    check_hermitian(h)?;
    let n = h.rows();
    // Work on the exactly Hermitian part.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (h.get(i, j) + h.get(j, i).conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);

    let scale = a.frobenius_norm();
    if scale > 0.0 {
        // Pivots below this are left in place; they perturb eigenvalues by far
        // less than one ulp of the norm.
        let tiny = 1e-3 * f64::EPSILON * scale;
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.get(p, q);
                    let mag = apq.norm();
                    if mag <= tiny {
                        continue;
                    }
                    rotate(&mut a, &mut v, p, q, apq, mag);
                    rotated = true;
                }
            }
            if !rotated {
                break;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(j, j).re.total_cmp(&a.get(i, i).re));
    let values: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
    let mut vectors = ComplexMatrix::from_fn(n, n, |i, j| v.get(i, order[j]));
    for j in 0..n {
        if let Some(lead) = (0..n).map(|i| vectors.get(i, j)).find(|z| z.norm() > 1e-10) {
            let phase = lead.conj() / lead.norm();
            for i in 0..n {
                let z = vectors.get(i, j) * phase;
                vectors.set(i, j, z);
            }
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Zero `a[p][q]` with `U = D·G`, where `D` removes the pivot phase and `G` is
/// a real rotation. Updates `a <- U† a U` and `v <- v U`.
fn rotate(
    a: &mut ComplexMatrix,
    v: &mut ComplexMatrix,
    p: usize,
    q: usize,
    apq: Complex64,
    mag: f64,
) {
    let n = a.rows();
    let phase = apq / mag; // e^{iφ}
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let ph_conj = phase.conj();

    // a <- a U (columns p, q)
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * c - akq * ph_conj * s);
        a.set(k, q, akp * s + akq * ph_conj * c);
    }
    // a <- U† a (rows p, q)
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, apk * c - aqk * phase * s);
        a.set(q, k, apk * s + aqk * phase * c);
    }
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));
    a.set(p, p, Complex64::new(a.get(p, p).re, 0.0));
    a.set(q, q, Complex64::new(a.get(q, q).re, 0.0));

    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * c - vkq * ph_conj * s);
        v.set(k, q, vkp * s + vkq * ph_conj * c);
    }
}
