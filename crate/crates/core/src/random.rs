//! Seeded samplers for random states, unitaries, measurements and ensembles.
//!
//! Used by property tests, the acceptance suite and randomized CLI sweeps.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::discrimination::Povm;
use crate::ensembles::{CqEnsemble, ProbDist};
use crate::qmath::{hermitian_eigen, validate_density, ComplexMatrix, DensityOperator, PureState};

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Hermitian matrix with Gaussian entries.
pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let g = ginibre(rng, dim, dim);
    let gh = g.adjoint();
    g.add(&gh).expect("same shape").scale(0.5)
}

/// Haar-ish unitary from Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let g = ginibre(rng, dim, dim);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v: Vec<Complex64> = (0..dim).map(|i| g.get(i, j)).collect();
        for u in &cols {
            let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= proj * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= norm);
        cols.push(v);
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

pub fn random_pure(rng: &mut impl Rng, dim: usize) -> PureState {
    let v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    PureState::new(v.into_iter().map(|z| z / norm).collect()).expect("normalized")
}

/// Full-rank mixed state `G G† / tr(G G†)`.
pub fn random_density(rng: &mut impl Rng, dim: usize) -> DensityOperator {
    let g = ginibre(rng, dim, dim);
    let gg = g.matmul(&g.adjoint());
    let tr = gg.trace().re;
    let m = ComplexMatrix::from_fn(dim, dim, |i, j| {
        // enforce exact Hermitian symmetry after rounding
        (gg.get(i, j) + gg.get(j, i).conj()) * (0.5 / tr)
    });
    validate_density(m).expect("Wishart matrices are valid states")
}

/// Random state that is pure with probability 1/3 and mixed otherwise.
pub fn random_state_mixed_or_pure(rng: &mut impl Rng, dim: usize) -> DensityOperator {
    if rng.random_bool(1.0 / 3.0) {
        DensityOperator::from_pure(&random_pure(rng, dim))
    } else {
        random_density(rng, dim)
    }
}

/// Random POVM with `outcomes` elements `S^{-1/2} A_i S^{-1/2}`, `S = Σ A_i`.
pub fn random_povm(rng: &mut impl Rng, dim: usize, outcomes: usize) -> Povm {
    let parts: Vec<ComplexMatrix> = (0..outcomes)
        .map(|_| {
            let g = ginibre(rng, dim, 1);
            g.matmul(&g.adjoint())
        })
        .collect();
    let mut sum = ComplexMatrix::zeros(dim, dim);
    for p in &parts {
        sum = sum.add(p).expect("same shape");
    }
    // Add a little identity so S is safely invertible when outcomes < dim.
    sum = sum
        .add(&ComplexMatrix::identity(dim).scale(1e-3))
        .expect("same shape");
    let eig = hermitian_eigen(&sum).expect("Hermitian");
    let inv_sqrt = eig.reconstruct_with(|v| 1.0 / v.sqrt());
    let mut elements: Vec<(String, ComplexMatrix)> = parts
        .iter()
        .enumerate()
        .map(|(i, p)| (format!("o{i}"), inv_sqrt.matmul(p).matmul(&inv_sqrt)))
        .collect();
    // The identity shift leaves a small remainder; give it its own outcome.
    let rest = inv_sqrt
        .matmul(&ComplexMatrix::identity(dim).scale(1e-3))
        .matmul(&inv_sqrt);
    elements.push((format!("o{outcomes}"), rest));
    Povm::new(elements).expect("completed POVM")
}

/// Projective measurement in the eigenbasis of a random unitary.
pub fn random_projective(rng: &mut impl Rng, dim: usize) -> Povm {
    let u = random_unitary(rng, dim);
    let elements = (0..dim)
        .map(|j| {
            let col: Vec<Complex64> = (0..dim).map(|i| u.get(i, j)).collect();
            (format!("e{j}"), ComplexMatrix::outer(&col, &col))
        })
        .collect();
    Povm::new(elements).expect("projective measurement")
}

/// Random probability vector (normalized exponentials).
pub fn random_probs(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..len)
        .map(|_| -rng.random::<f64>().max(1e-300).ln())
        .collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

/// Random distribution whose masses are multiples of `2^-bits` summing to
/// exactly one, so sums and differences of masses are exact in `f64`.
pub fn random_dyadic_probs(rng: &mut impl Rng, len: usize, bits: u32) -> Vec<f64> {
    assert!(bits <= 50 && (len as u64) <= 1u64 << bits);
    let total = 1u64 << bits;
    let weights = random_probs(rng, len);
    let mut counts: Vec<u64> = weights
        .iter()
        .map(|w| (w * total as f64).floor() as u64)
        .collect();
    let mut short = total - counts.iter().sum::<u64>();
    let mut i = 0;
    while short > 0 {
        counts[i % len] += 1;
        short -= 1;
        i += 1;
    }
    let scale = (-(bits as f64)).exp2();
    counts.into_iter().map(|c| c as f64 * scale).collect()
}

/// Ensemble on `n_bits` keys with random probes of dimension `dim`.
/// With `uniform_prior = false` the prior is random too.
pub fn random_ensemble(
    rng: &mut impl Rng,
    n_bits: usize,
    dim: usize,
    uniform_prior: bool,
) -> CqEnsemble {
    let count = 1usize << n_bits;
    let probes = (0..count)
        .map(|_| random_state_mixed_or_pure(rng, dim))
        .collect();
    let prior = if uniform_prior {
        vec![1.0 / count as f64; count]
    } else {
        random_probs(rng, count)
    };
    let keys = crate::ensembles::key_labels(n_bits);
    CqEnsemble::new(
        n_bits,
        ProbDist::new(keys, prior).expect("valid prior"),
        probes,
    )
    .expect("valid ensemble")
}
