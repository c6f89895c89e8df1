//! Measurements on probe states and the attacker's success probabilities.

use std::collections::{HashMap, HashSet};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::criteria::criterion_d_averaged;
use crate::ensembles::{average_probe, condition_on_leak, CqEnsemble, LeakSpec, ProbDist};
use crate::error::{Error, Result};
use crate::qmath::{check_hermitian, hermitian_eigen, ComplexMatrix, DensityOperator, TOL_PSD};

/// Eigenvalues at or below this are treated as zero when building
/// spectral projectors and pseudo-inverses.
pub const SPECTRAL_CUTOFF: f64 = 1e-12;
/// Label of the PGM element that completes the measurement on the kernel of `ρ_E`.
pub const NULL_OUTCOME: &str = "null";

const TOL_COMPLETENESS: f64 = 1e-9;

/// Finite set of labeled positive operators summing to the identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Povm {
    dim: usize,
    elements: Vec<(String, ComplexMatrix)>,
}

impl Povm {
    pub fn new(elements: Vec<(String, ComplexMatrix)>) -> Result<Self> {
        let dim = elements
            .first()
            .map(|(_, m)| m.rows())
            .ok_or_else(|| Error::BadPovm("no elements".into()))?;
        let mut seen = HashSet::new();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (label, m) in &elements {
            if !seen.insert(label.as_str()) {
                return Err(Error::BadPovm(format!("duplicate outcome {label:?}")));
            }
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    got: m.rows(),
                });
            }
            check_hermitian(m)?;
            let min = hermitian_eigen(m)?.values.last().copied().unwrap_or(0.0);
            if min < -TOL_PSD {
                return Err(Error::NotPsd(min));
            }
            sum = sum.add(m)?;
        }
        let gap = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if gap > TOL_COMPLETENESS {
            return Err(Error::BadPovm(format!(
                "elements sum to identity only within {gap:e}"
            )));
        }
        Ok(Self { dim, elements })
    }

    /// Rank-one projective measurement onto orthonormal vectors.
    pub fn projective(basis: Vec<(String, Vec<Complex64>)>) -> Result<Self> {
        Self::new(
            basis
                .into_iter()
                .map(|(l, v)| (l, ComplexMatrix::outer(&v, &v)))
                .collect(),
        )
    }

    /// Projective measurement in the eigenbasis of a Hermitian matrix, with
    /// outcomes labeled `e0, e1, ...` in descending eigenvalue order.
    pub fn eigenbasis(h: &ComplexMatrix) -> Result<Self> {
        let eig = hermitian_eigen(h)?;
        Self::projective(
            (0..eig.dim())
                .map(|j| (format!("e{j}"), eig.vector(j)))
                .collect(),
        )
    }

    /// Trivial measurement with the single outcome `"1"`.
    pub fn trivial(dim: usize) -> Self {
        Self {
            dim,
            elements: vec![("1".into(), ComplexMatrix::identity(dim))],
        }
    }

    /// Product measurement `{A_i ⊗ B_j}` with outcomes labeled `"i:j"`.
    pub fn product(a: &Povm, b: &Povm) -> Povm {
        let mut elements = Vec::with_capacity(a.len() * b.len());
        for (la, ea) in &a.elements {
            for (lb, eb) in &b.elements {
                elements.push((format!("{la}:{lb}"), ea.kron(eb)));
            }
        }
        Povm {
            dim: a.dim * b.dim,
            elements,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.elements.iter().map(|(l, _)| l.clone()).collect()
    }

    pub fn elements(&self) -> &[(String, ComplexMatrix)] {
        &self.elements
    }

    /// Outcome probabilities `tr(ρ E_i)`.
    pub fn outcome_distribution(&self, rho: &DensityOperator) -> Result<ProbDist> {
        if rho.dim() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: rho.dim(),
            });
        }
        let probs = self
            .elements
            .iter()
            .map(|(_, e)| rho.matrix().trace_product(e).re)
            .collect();
        ProbDist::new(self.labels(), probs)
    }
}

/// Joint distribution of a key (rows) and a measurement outcome (columns).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    rows: Vec<String>,
    cols: Vec<String>,
    mass: Vec<f64>,
}

impl JointDistribution {
    pub fn new(rows: Vec<String>, cols: Vec<String>, mass: Vec<f64>) -> Result<Self> {
        if mass.len() != rows.len() * cols.len() {
            return Err(Error::DimMismatch {
                expected: rows.len() * cols.len(),
                got: mass.len(),
            });
        }
        // validates nonnegativity and unit mass
        let flat = ProbDist::from_probs(mass)?;
        Ok(Self {
            rows,
            cols,
            mass: flat.probs().to_vec(),
        })
    }

    pub fn rows(&self) -> &[String] {
        &self.rows
    }

    pub fn cols(&self) -> &[String] {
        &self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.mass[row * self.cols.len() + col]
    }

    pub fn row_marginal(&self) -> Vec<f64> {
        (0..self.rows.len())
            .map(|r| (0..self.cols.len()).map(|c| self.get(r, c)).sum())
            .collect()
    }

    pub fn col_marginal(&self) -> Vec<f64> {
        (0..self.cols.len())
            .map(|c| (0..self.rows.len()).map(|r| self.get(r, c)).sum())
            .collect()
    }

    /// Flattened masses keyed `"row|col"`, row-major.
    pub fn as_prob_dist(&self) -> ProbDist {
        let labels = self
            .rows
            .iter()
            .flat_map(|r| self.cols.iter().map(move |c| format!("{r}|{c}")))
            .collect();
        ProbDist::new(labels, self.mass.clone()).expect("validated at construction")
    }

    /// CSV with a `key` column followed by one column per outcome.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["key".to_string()];
        header.extend(self.cols.iter().cloned());
        w.write_record(&header)?;
        for (r, key) in self.rows.iter().enumerate() {
            let mut rec = vec![key.clone()];
            rec.extend((0..self.cols.len()).map(|c| self.get(r, c).to_string()));
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Csv(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Optimal binary discrimination result.
#[derive(Debug, Clone)]
pub struct Helstrom {
    pub p_success: f64,
    /// Projector onto the positive part of `(1-p0)ρ1 - p0ρ0`; its outcome
    /// guesses hypothesis 1.
    pub projector: ComplexMatrix,
}

impl Helstrom {
    /// The two-outcome measurement `{"0": I - Π, "1": Π}`.
    pub fn povm(&self) -> Povm {
        let n = self.projector.rows();
        let rest = ComplexMatrix::identity(n)
            .sub(&self.projector)
            .expect("same shape");
        Povm {
            dim: n,
            elements: vec![("0".into(), rest), ("1".into(), self.projector.clone())],
        }
    }
}

/// Helstrom measurement for `ρ0` (prior `p0`) against `ρ1` (prior `1 - p0`).
///
/// The null space of the weighted difference goes to hypothesis 0.
pub fn helstrom_binary(
    rho0: &DensityOperator,
    rho1: &DensityOperator,
    p0: f64,
) -> Result<Helstrom> {
    if rho0.dim() != rho1.dim() {
        return Err(Error::DimMismatch {
            expected: rho0.dim(),
            got: rho1.dim(),
        });
    }
    if !(0.0..=1.0).contains(&p0) {
        return Err(Error::BadRange(p0, "prior must lie in [0, 1]".into()));
    }
    let gamma = rho1
        .matrix()
        .scale(1.0 - p0)
        .sub(&rho0.matrix().scale(p0))?;
    let eig = hermitian_eigen(&gamma)?;
    let positive: f64 = eig.values.iter().filter(|&&v| v > SPECTRAL_CUTOFF).sum();
    Ok(Helstrom {
        p_success: p0 + positive,
        projector: eig.spectral_projector(|v| v > SPECTRAL_CUTOFF),
    })
}

/// `mass(k, k') = p_k tr(ρ_E^k E_k')`.
pub fn measure_ensemble(e: &CqEnsemble, m: &Povm) -> Result<JointDistribution> {
    if e.probe_dim() != m.dim() {
        return Err(Error::DimMismatch {
            expected: m.dim(),
            got: e.probe_dim(),
        });
    }
    let mut mass = Vec::with_capacity(e.len() * m.len());
    for (_, p, rho) in e.iter() {
        for (_, el) in m.elements() {
            mass.push(p * rho.matrix().trace_product(el).re);
        }
    }
    JointDistribution::new(e.keys().to_vec(), m.labels(), mass)
}

/// Distribution of the key given a measurement outcome.
pub fn posterior(j: &JointDistribution, outcome: &str) -> Result<ProbDist> {
    let col = j
        .cols()
        .iter()
        .position(|c| c == outcome)
        .ok_or_else(|| Error::BadParams(format!("unknown outcome {outcome:?}")))?;
    let column: Vec<f64> = (0..j.rows().len()).map(|r| j.get(r, col)).collect();
    let total: f64 = column.iter().sum();
    if total <= 0.0 {
        return Err(Error::ZeroMassOutcome(outcome.to_string()));
    }
    ProbDist::new(
        j.rows().to_vec(),
        column.into_iter().map(|m| m / total).collect(),
    )
}

/// Pretty-good (square-root) measurement `ρ_E^{-1/2} p_k ρ_E^k ρ_E^{-1/2}`.
///
/// The pseudo-inverse acts on the support of `ρ_E`; the kernel projector, if
/// nonzero, is appended under [`NULL_OUTCOME`].
pub fn pgm(e: &CqEnsemble) -> Result<Povm> {
    let avg = average_probe(e);
    let eig = avg.eigen();
    let inv_sqrt = eig.reconstruct_with(|v| {
        if v > SPECTRAL_CUTOFF {
            1.0 / v.sqrt()
        } else {
            0.0
        }
    });
    let mut elements: Vec<(String, ComplexMatrix)> = e
        .iter()
        .map(|(k, p, rho)| {
            let el = inv_sqrt.matmul(&rho.matrix().scale(p)).matmul(&inv_sqrt);
            (k.to_string(), hermitian_part(&el))
        })
        .collect();
    if eig.values.iter().any(|&v| v <= SPECTRAL_CUTOFF) {
        elements.push((
            NULL_OUTCOME.into(),
            eig.spectral_projector(|v| v <= SPECTRAL_CUTOFF),
        ));
    }
    Povm::new(elements)
}

fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        (m.get(i, j) + m.get(j, i).conj()) * 0.5
    })
}

/// The guess map that reads each outcome label as the key it names.
pub fn identity_guess(m: &Povm) -> HashMap<String, String> {
    m.labels()
        .into_iter()
        .filter(|l| l != NULL_OUTCOME)
        .map(|l| (l.clone(), l))
        .collect()
}

/// `Σ_k p_k tr(ρ_E^k E_k')` over outcomes `k'` whose guess is `k`.
/// Outcomes absent from `guess` never score.
pub fn success_probability(
    e: &CqEnsemble,
    m: &Povm,
    guess: &HashMap<String, String>,
) -> Result<f64> {
    if e.probe_dim() != m.dim() {
        return Err(Error::DimMismatch {
            expected: m.dim(),
            got: e.probe_dim(),
        });
    }
    let mut total = 0.0;
    for (label, el) in m.elements() {
        let Some(key) = guess.get(label) else {
            continue;
        };
        if let Some(idx) = e.prior().index_of(key) {
            let p = e.prior().probs()[idx];
            total += p * e.probes()[idx].matrix().trace_product(el).re;
        }
    }
    Ok(total)
}

/// Post-leak binary discrimination compared with the full ensemble's `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PostLeak {
    pub p_success: f64,
    pub d_full: f64,
}

/// Condition on the leak, then run Helstrom on the two remaining hypotheses.
pub fn post_leak_discrimination(e: &CqEnsemble, leak: &LeakSpec) -> Result<PostLeak> {
    let residual = condition_on_leak(e, leak)?;
    if residual.len() != 2 {
        return Err(Error::NotBinaryResidual(residual.len()));
    }
    let p0 = residual.prior().probs()[0];
    let h = helstrom_binary(&residual.probes()[0], &residual.probes()[1], p0)?;
    Ok(PostLeak {
        p_success: h.p_success,
        d_full: criterion_d_averaged(e),
    })
}
