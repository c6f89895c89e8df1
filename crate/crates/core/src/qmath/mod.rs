//! Dense complex linear algebra for small Hilbert spaces.
//!
//! Everything here works on immutable values: operations return fresh
//! matrices and never mutate their inputs.

mod eigen;

pub use eigen::{hermitian_eigen, HermitianEigen};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum tolerated `|h_ij - conj(h_ji)|`.
pub const TOL_HERM: f64 = 1e-9;
/// Maximum tolerated `|tr(ρ) - 1|`.
pub const TOL_TRACE: f64 = 1e-9;
/// Maximum tolerated `|‖ψ‖² - 1|`.
pub const TOL_NORM: f64 = 1e-9;
/// Eigenvalues in `[-TOL_PSD, 0)` count as zero.
pub const TOL_PSD: f64 = 1e-9;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

#[derive(Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl TryFrom<RawMatrix> for ComplexMatrix {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        ComplexMatrix::new(raw.rows, raw.cols, raw.entries)
    }
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::BadParams("matrix has non-finite entries".into()));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    /// Real matrix from rows of `f64`.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::BadShape("ragged rows".into()));
        }
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Self::new(r, c, entries)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)
        })
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| {
            Complex64::new(if i == j { diag[i] } else { 0.0 }, 0.0)
        })
    }

    /// `|ψ⟩⟨φ|`.
    pub fn outer(psi: &[Complex64], phi: &[Complex64]) -> Self {
        Self::from_fn(psi.len(), phi.len(), |i, j| psi[i] * phi[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.entries[i * self.cols + j] = z;
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.zip_map(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.zip_map(other, |a, b| a - b))
    }

    fn zip_map(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    /// Matrix product. Panics if the inner dimensions differ.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul inner dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self.get(i, k) * other.get(k, i);
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entrywise modulus of `self - other` (infinite on shape mismatch).
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r2, c2) = (other.rows, other.cols);
        Self::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            self.get(i / r2, j / c2) * other.get(i % r2, j % c2)
        })
    }

    pub fn max_hermitian_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }
}

pub(crate) fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    if !h.is_square() {
        return Err(Error::BadShape(format!(
            "{}x{} is not square",
            h.rows(),
            h.cols()
        )));
    }
    let asym = h.max_hermitian_asymmetry();
    if asym > TOL_HERM {
        return Err(Error::NotHermitian(asym));
    }
    Ok(())
}

/// Kronecker product of two matrices.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// Sum of the absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigen(a)?.values.iter().map(|v| v.abs()).sum())
}

/// Half the trace norm of `ρ - σ`.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch {
            expected: rho.dim(),
            got: sigma.dim(),
        });
    }
    let diff = rho.matrix().sub(sigma.matrix())?;
    Ok(0.5 * trace_norm(&diff)?)
}

/// Which tensor factor `partial_trace` keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Factor {
    First,
    Second,
}

/// Trace out one factor of a bipartite operator on `C^{d_a} ⊗ C^{d_b}`.
pub fn partial_trace(
    rho: &DensityOperator,
    dims: (usize, usize),
    keep: Factor,
) -> Result<DensityOperator> {
    let (da, db) = dims;
    if da * db != rho.dim() {
        return Err(Error::DimMismatch {
            expected: rho.dim(),
            got: da * db,
        });
    }
    let m = rho.matrix();
    let reduced = match keep {
        Factor::First => ComplexMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| m.get(i * db + k, j * db + k)).sum()
        }),
        Factor::Second => ComplexMatrix::from_fn(db, db, |i, j| {
            (0..da).map(|k| m.get(k * db + i, k * db + j)).sum()
        }),
    };
    validate_density(reduced)
}

/// Positive semidefinite, unit-trace Hermitian operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl TryFrom<ComplexMatrix> for DensityOperator {
    type Error = Error;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        validate_density(m)
    }
}

impl From<DensityOperator> for ComplexMatrix {
    fn from(d: DensityOperator) -> Self {
        d.matrix
    }
}

/// Checks Hermiticity, positivity and unit trace, in that order.
pub fn validate_density(m: ComplexMatrix) -> Result<DensityOperator> {
    check_hermitian(&m)?;
    let eig = hermitian_eigen(&m)?;
    let min = eig.values.last().copied().unwrap_or(0.0);
    if min < -TOL_PSD {
        return Err(Error::NotPsd(min));
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > TOL_TRACE || tr.im.abs() > TOL_TRACE {
        return Err(Error::BadTrace(tr.re));
    }
    Ok(DensityOperator { matrix: m })
}

impl DensityOperator {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale(1.0 / dim as f64),
        }
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        validate_density(ComplexMatrix::from_real_diag(probs))
    }

    /// Qubit state `(I + r·σ)/2` for a Bloch vector with `|r| ≤ 1`.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        let [x, y, z] = r;
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let m = ComplexMatrix::new(
            2,
            2,
            vec![
                c((1.0 + z) / 2.0, 0.0),
                c(x / 2.0, -y / 2.0),
                c(x / 2.0, y / 2.0),
                c((1.0 - z) / 2.0, 0.0),
            ],
        )?;
        validate_density(m)
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            matrix: ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()),
        }
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.kron(&other.matrix),
        }
    }

    /// Convex combination `Σ w_i ρ_i`. Weights must be a probability vector.
    pub fn mixture(weights: &[f64], states: &[&DensityOperator]) -> Result<Self> {
        let first = states
            .first()
            .ok_or_else(|| Error::BadParams("empty mixture".into()))?;
        let dim = first.dim();
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for (w, s) in weights.iter().zip(states) {
            if s.dim() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    got: s.dim(),
                });
            }
            acc = acc.add(&s.matrix.scale(*w))?;
        }
        validate_density(acc)
    }

    pub fn eigen(&self) -> HermitianEigen {
        hermitian_eigen(&self.matrix).expect("density operators are Hermitian")
    }
}

/// Unit vector in `C^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if amplitudes.is_empty() || (norm - 1.0).abs() > TOL_NORM {
            return Err(Error::BadParams(format!(
                "state norm² is {norm}, expected 1"
            )));
        }
        Ok(Self { amplitudes })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis vector `|index⟩` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_density, random_hermitian, random_pure, random_unitary};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn plus() -> PureState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState::from_real(&[h, h]).unwrap()
    }

    #[test]
    fn tensor_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(tensor(&i2, &i2), ComplexMatrix::identity(4));

        let a = ComplexMatrix::zeros(2, 2);
        let b = ComplexMatrix::zeros(3, 3);
        let ab = tensor(&a, &b);
        assert_eq!((ab.rows(), ab.cols()), (6, 6));

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho = random_density(&mut rng, 2);
        let zero = DensityOperator::from_pure(&PureState::basis(2, 0));
        let block = zero.tensor(&rho);
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i < 2 && j < 2 {
                    rho.matrix().get(i, j)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                assert_eq!(block.matrix().get(i, j), expected);
            }
        }
    }

    #[test]
    fn trace_norm_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = random_density(&mut rng, 3);
        let zero = rho.matrix().sub(rho.matrix()).unwrap();
        assert_eq!(trace_norm(&zero).unwrap(), 0.0);

        let p0 = DensityOperator::from_pure(&PureState::basis(2, 0));
        let p1 = DensityOperator::from_pure(&PureState::basis(2, 1));
        let d = trace_norm(&p0.matrix().sub(p1.matrix()).unwrap()).unwrap();
        assert!((d - 2.0).abs() < 1e-15);

        let pp = DensityOperator::from_pure(&plus());
        let d = trace_norm(&p0.matrix().sub(pp.matrix()).unwrap()).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn trace_distance_examples() {
        let p0 = DensityOperator::from_pure(&PureState::basis(2, 0));
        let p1 = DensityOperator::from_pure(&PureState::basis(2, 1));
        assert_eq!(trace_distance(&p0, &p0).unwrap(), 0.0);
        assert!((trace_distance(&p0, &p1).unwrap() - 1.0).abs() < 1e-15);

        let psi = PureState::from_real(&[0.6, 0.8]).unwrap();
        let d = trace_distance(&p0, &DensityOperator::from_pure(&psi)).unwrap();
        assert!((d - 0.8).abs() < 1e-12);

        // overlap 0.6 between two states that are both off the basis axes
        let a = PureState::from_real(&[0.8, 0.6]).unwrap();
        let b = PureState::from_real(&[0.0, 1.0]).unwrap();
        assert!((a.inner(&b).re - 0.6).abs() < 1e-15);
        let d = trace_distance(
            &DensityOperator::from_pure(&a),
            &DensityOperator::from_pure(&b),
        )
        .unwrap();
        assert!((d - 0.8).abs() < 1e-12);

        assert!(matches!(
            trace_distance(&p0, &DensityOperator::maximally_mixed(3)),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn partial_trace_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sigma = random_density(&mut rng, 2);
        let rho1 = random_density(&mut rng, 3);
        let joint = sigma.tensor(&rho1);
        let a = partial_trace(&joint, (2, 3), Factor::First).unwrap();
        let b = partial_trace(&joint, (2, 3), Factor::Second).unwrap();
        assert!(a.matrix().max_abs_diff(sigma.matrix()) < 1e-15);
        assert!(b.matrix().max_abs_diff(rho1.matrix()) < 1e-15);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = DensityOperator::from_pure(&PureState::from_real(&[h, 0.0, 0.0, h]).unwrap());
        let red = partial_trace(&bell, (2, 2), Factor::First).unwrap();
        assert!(
            red.matrix()
                .max_abs_diff(DensityOperator::maximally_mixed(2).matrix())
                < 1e-15
        );

        assert!(partial_trace(&bell, (2, 3), Factor::First).is_err());
    }

    #[test]
    fn validate_density_examples() {
        assert!(validate_density(ComplexMatrix::identity(2).scale(0.5)).is_ok());
        assert!(matches!(
            validate_density(ComplexMatrix::from_real_diag(&[1.5, -0.5])),
            Err(Error::NotPsd(v)) if (v + 0.5).abs() < 1e-12
        ));
        assert!(matches!(
            validate_density(ComplexMatrix::from_real_diag(&[0.6, 0.6])),
            Err(Error::BadTrace(t)) if (t - 1.2).abs() < 1e-12
        ));
        let skew = ComplexMatrix::from_real_rows(&[&[0.5, 0.1], &[0.0, 0.5]]).unwrap();
        assert!(matches!(
            validate_density(skew),
            Err(Error::NotHermitian(_))
        ));
        // Tiny negative eigenvalues are tolerated.
        assert!(validate_density(ComplexMatrix::from_real_diag(&[1.0 + 5e-10, -5e-10])).is_ok());
    }

    #[test]
    fn bloch_states() {
        let up = DensityOperator::from_bloch([0.0, 0.0, 1.0]).unwrap();
        assert!(
            up.matrix()
                .max_abs_diff(DensityOperator::from_pure(&PureState::basis(2, 0)).matrix())
                < 1e-15
        );
        assert!(matches!(
            DensityOperator::from_bloch([1.0, 1.0, 0.0]),
            Err(Error::NotPsd(_))
        ));
    }

    #[test]
    fn serde_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rho = random_density(&mut rng, 3);
        let json = serde_json::to_string(&rho).unwrap();
        let back: DensityOperator = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rho);
        let bad = r#"{"rows":2,"cols":2,"entries":[[1.5,0],[0,0],[0,0],[-0.5,0]]}"#;
        assert!(serde_json::from_str::<DensityOperator>(bad).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn trace_distance_is_a_metric(seed in any::<u64>(), dim in 1usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_density(&mut rng, dim);
            let b = random_density(&mut rng, dim);
            let c = random_density(&mut rng, dim);
            let ab = trace_distance(&a, &b).unwrap();
            let ba = trace_distance(&b, &a).unwrap();
            let bc = trace_distance(&b, &c).unwrap();
            let ac = trace_distance(&a, &c).unwrap();
            prop_assert!((ab - ba).abs() <= 1e-12);
            prop_assert!(ac <= ab + bc + 1e-9);
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&ab));
        }

        #[test]
        fn trace_norm_unitary_invariance(seed in any::<u64>(), dim in 1usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = random_hermitian(&mut rng, dim);
            let u = random_unitary(&mut rng, dim);
            let rotated = u.matmul(&h).matmul(&u.adjoint());
            let n0 = trace_norm(&h).unwrap();
            let n1 = trace_norm(&rotated).unwrap();
            prop_assert!((n0 - n1).abs() <= 1e-9);
        }

        #[test]
        fn pure_state_trace_distance(seed in any::<u64>(), dim in 2usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_pure(&mut rng, dim);
            let b = random_pure(&mut rng, dim);
            let c = a.inner(&b).norm();
            let d = trace_distance(&DensityOperator::from_pure(&a), &DensityOperator::from_pure(&b)).unwrap();
            prop_assert!((d - (1.0 - c * c).max(0.0).sqrt()).abs() <= 1e-9);
        }

        #[test]
        fn partial_trace_preserves_trace(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rho = random_density(&mut rng, da * db);
            for keep in [Factor::First, Factor::Second] {
                let red = partial_trace(&rho, (da, db), keep).unwrap();
                prop_assert!((red.matrix().trace().re - 1.0).abs() <= 1e-12);
            }
        }
    }
}
