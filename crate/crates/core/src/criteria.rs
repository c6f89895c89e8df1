//! Distance criteria between a key and an ideal uniform, independent key.
//!
//! The canonical quantum criterion is `d = ½ Σ_k p_k ‖ρ_E^k - ρ_E‖₁`, which
//! equals the trace distance between the joint key-probe state and
//! `ρ_K ⊗ ρ_E`. Per-key distances are reported unhalved, as `‖ρ_E^k - ρ_E‖₁`.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::discrimination::{measure_ensemble, JointDistribution, Povm};
use crate::ensembles::{average_probe, CqEnsemble, KeyDist, ProbDist, SpikedDist};
use crate::error::{Error, Result};
use crate::qmath::{trace_norm, ComplexMatrix};

/// Largest joint (key ⊗ probe) dimension materialized by [`criterion_d_entangled`].
pub const MAX_JOINT_DIM: usize = 256;
/// Largest number of events enumerated by [`event_deviation_bound`].
pub const MAX_EVENTS: u128 = 1 << 24;

const TOL_UNIFORM: f64 = 1e-9;

/// `½ Σ_x |P(x) - Q(x)|` over the union of both label sets.
pub fn variational_distance(p: &ProbDist, q: &ProbDist) -> f64 {
    if p.labels() == q.labels() {
        return 0.5
            * p.probs()
                .iter()
                .zip(q.probs())
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>();
    }
    let q_index: HashMap<&str, f64> = q.iter().collect();
    let p_index: HashSet<&str> = p.labels().iter().map(String::as_str).collect();
    let mut total = 0.0;
    for (label, mass) in p.iter() {
        total += (mass - q_index.get(label).copied().unwrap_or(0.0)).abs();
    }
    for (label, mass) in q.iter() {
        if !p_index.contains(label) {
            total += mass;
        }
    }
    0.5 * total
}

/// `½ Σ_k p_k ‖ρ_E^k - ρ_E‖₁`.
pub fn criterion_d_averaged(e: &CqEnsemble) -> f64 {
    let avg = average_probe(e);
    let sum: f64 = e
        .iter()
        .filter(|(_, p, _)| *p > 0.0)
        .map(|(_, p, rho)| p * unhalved(rho.matrix(), avg.matrix()))
        .sum();
    0.5 * sum
}

fn unhalved(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    trace_norm(&a.sub(b).expect("equal probe dims")).expect("difference of states is Hermitian")
}

/// `½ ‖ρ_KE - ρ_K ⊗ ρ_E‖₁` on the materialized joint operator, where
/// `ρ_K = Σ_k p_k |k⟩⟨k|` (the uniform `ρ_U` for a uniform prior).
pub fn criterion_d_entangled(e: &CqEnsemble) -> Result<f64> {
    let n_keys = e.len();
    let dim = e.probe_dim();
    let joint_dim = n_keys * dim;
    if joint_dim > MAX_JOINT_DIM {
        return Err(Error::TooLarge(format!(
            "joint dimension {joint_dim} exceeds {MAX_JOINT_DIM}"
        )));
    }
    let avg = average_probe(e);
    let mut diff = ComplexMatrix::zeros(joint_dim, joint_dim);
    for (k, (_, p, rho)) in e.iter().enumerate() {
        let basis = ComplexMatrix::from_fn(n_keys, n_keys, |i, j| {
            num_complex::Complex64::new(if i == k && j == k { 1.0 } else { 0.0 }, 0.0)
        });
        let joint_block = basis.kron(&rho.matrix().scale(p));
        let product_block = basis.kron(&avg.matrix().scale(p));
        diff = diff.add(&joint_block)?.sub(&product_block)?;
    }
    Ok(0.5 * trace_norm(&diff)?)
}

/// Per-key distances `‖ρ_E^k - ρ_E‖₁` (unhalved) and their halves.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerKeyDistances {
    pub keys: Vec<String>,
    pub unhalved: Vec<f64>,
    pub halved: Vec<f64>,
}

impl PerKeyDistances {
    pub fn max_halved(&self) -> f64 {
        self.halved.iter().copied().fold(0.0, f64::max)
    }
}

pub fn d_k_per_key(e: &CqEnsemble) -> PerKeyDistances {
    let avg = average_probe(e);
    let unhalved: Vec<f64> = e
        .probes()
        .iter()
        .map(|r| unhalved(r.matrix(), avg.matrix()))
        .collect();
    PerKeyDistances {
        keys: e.keys().to_vec(),
        halved: unhalved.iter().map(|x| 0.5 * x).collect(),
        unhalved,
    }
}

/// Summary of all `d` forms for one ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub d_entangled: f64,
    pub d_averaged: f64,
    pub d_k_unhalved: BTreeMap<String, f64>,
    /// Largest halved per-key distance; never below `d_averaged`.
    pub d_max: f64,
    pub epsilon: f64,
}

pub fn criterion_report(e: &CqEnsemble, epsilon: f64) -> Result<CriterionReport> {
    let per_key = d_k_per_key(e);
    Ok(CriterionReport {
        d_entangled: criterion_d_entangled(e)?,
        d_averaged: criterion_d_averaged(e),
        d_max: per_key.max_halved(),
        d_k_unhalved: per_key.keys.into_iter().zip(per_key.unhalved).collect(),
        epsilon,
    })
}

/// Outcome of checking `‖ρ_E^{k1} - ρ_E^{k2}‖₁ ≤ 2ε` over all key pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairwiseBound {
    /// Whether every unhalved `d_k` is at most `ε`.
    pub premise_holds: bool,
    /// Whether every pair is within `2ε`.
    pub holds: bool,
    pub worst_pair: (String, String),
    pub worst_value: f64,
}

/// The first pair in key order attaining the maximum wins ties.
pub fn pairwise_distance_bound(e: &CqEnsemble, eps: f64) -> PairwiseBound {
    const SLACK: f64 = 1e-9;
    let per_key = d_k_per_key(e);
    let keys = e.keys();
    let mut worst: Option<(usize, usize, f64)> = None;
    for i in 0..e.len() {
        for j in (i + 1)..e.len() {
            let v = unhalved(e.probes()[i].matrix(), e.probes()[j].matrix());
            if worst.is_none_or(|(_, _, w)| v > w + 1e-12) {
                worst = Some((i, j, v));
            }
        }
    }
    let (i, j, v) = worst.unwrap_or((0, 0, 0.0));
    PairwiseBound {
        premise_holds: per_key.unhalved.iter().all(|&d| d <= eps + SLACK),
        holds: v <= 2.0 * eps + SLACK,
        worst_pair: (keys[i].clone(), keys[j].clone()),
        worst_value: v,
    }
}

fn check_uniform_rows(j: &JointDistribution) -> Result<()> {
    let rows = j.row_marginal();
    let u = 1.0 / rows.len() as f64;
    let dev = rows.iter().map(|r| (r - u).abs()).fold(0.0, f64::max);
    if dev > TOL_UNIFORM {
        return Err(Error::NonUniformPrior(dev));
    }
    Ok(())
}

/// `δ(P_{kk'}, U_k Q_{k'})` with `Q` the outcome marginal. Requires a uniform key marginal.
pub fn classical_dbar(j: &JointDistribution) -> Result<f64> {
    check_uniform_rows(j)?;
    let q = j.col_marginal();
    let u = 1.0 / j.rows().len() as f64;
    let mut total = 0.0;
    for r in 0..j.rows().len() {
        for (c, qc) in q.iter().enumerate() {
            total += (j.get(r, c) - u * qc).abs();
        }
    }
    Ok(0.5 * total)
}

/// Largest deviation `|p_m - 2^-m|` over all `m`-bit subsequence events.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventDeviation {
    pub max_dev: f64,
    /// Bit positions of the maximizing event.
    pub positions: Vec<usize>,
    /// Values of those bits.
    pub pattern: Vec<u8>,
}

/// Enumerates all position sets of size `m` and all `2^m` patterns for dense
/// distributions; the spiked form is evaluated in closed form.
pub fn event_deviation_bound(p: &KeyDist, m: usize) -> Result<EventDeviation> {
    let n = p.n_bits() as usize;
    if m > n {
        return Err(Error::BadParams(format!("m = {m} exceeds n = {n}")));
    }
    match p {
        KeyDist::Spiked(s) => Ok(spiked_event_deviation(s, m)),
        KeyDist::Dense { probs, .. } => {
            let events = binomial(n as u64, m as u64) * (1u128 << m);
            if events > MAX_EVENTS {
                return Err(Error::TooLarge(format!("{events} events")));
            }
            Ok(dense_event_deviation(probs, n, m))
        }
    }
}

fn dense_event_deviation(probs: &[f64], n: usize, m: usize) -> EventDeviation {
    let target = (-(m as f64)).exp2();
    let mut best = EventDeviation {
        max_dev: -1.0,
        positions: vec![],
        pattern: vec![],
    };
    let mut marginal = vec![0.0; 1 << m];
    for positions in combinations(n, m) {
        marginal.iter_mut().for_each(|x| *x = 0.0);
        for (key, &mass) in probs.iter().enumerate() {
            let mut pat = 0usize;
            for &pos in &positions {
                pat = (pat << 1) | ((key >> (n - 1 - pos)) & 1);
            }
            marginal[pat] += mass;
        }
        for (pat, &pm) in marginal.iter().enumerate() {
            let dev = (pm - target).abs();
            if dev > best.max_dev {
                best = EventDeviation {
                    max_dev: dev,
                    positions: positions.clone(),
                    pattern: (0..m).map(|b| ((pat >> (m - 1 - b)) & 1) as u8).collect(),
                };
            }
        }
    }
    best
}

fn spiked_event_deviation(s: &SpikedDist, m: usize) -> EventDeviation {
    let n = s.n() as usize;
    if m == 0 {
        return EventDeviation {
            max_dev: 0.0,
            positions: vec![],
            pattern: vec![],
        };
    }
    let target = (-(m as f64)).exp2();
    // number of keys sharing an m-bit pattern
    let block = (1u64 << (n - m)) as f64;
    let atom = s.atom_mass();
    let spike_bits: Vec<u8> = (0..m)
        .map(|b| ((s.spike() >> (n - 1 - b)) & 1) as u8)
        .collect();
    let matching = (s.spike_mass() + atom * (block - 1.0) - target).abs();
    let other = (atom * block - target).abs();
    let positions: Vec<usize> = (0..m).collect();
    if matching >= other {
        EventDeviation {
            max_dev: matching,
            positions,
            pattern: spike_bits,
        }
    } else {
        let mut pattern = spike_bits;
        let last = pattern.len() - 1;
        pattern[last] ^= 1;
        EventDeviation {
            max_dev: other,
            positions,
            pattern,
        }
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = Some((0..k).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for j in (i + 1)..k {
                    next[j] = next[j - 1] + 1;
                }
                current = Some(next);
                break;
            }
        }
        Some(out)
    })
}

/// Candidate readings of `δ_E` for a measurement on the probes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaEVariants {
    /// Outcome distribution versus uniform over all measurement outcomes.
    pub outcome_vs_uniform: f64,
    /// `δ(P_{kk'}, U_k U_{k'})`.
    pub joint_vs_product_uniform: f64,
    /// Largest `δ(P(k | k'), U_k)` over outcomes with positive mass.
    pub max_posterior_dev: f64,
    /// Outcome-weighted average of the posterior deviations.
    pub avg_posterior_dev: f64,
}

/// Uniform distributions here span every key and every measurement outcome.
pub fn delta_e_variants(e: &CqEnsemble, povm: &Povm) -> Result<DeltaEVariants> {
    let j = measure_ensemble(e, povm)?;
    let n_keys = j.rows().len();
    let n_out = j.cols().len();
    let uk = 1.0 / n_keys as f64;
    let uo = 1.0 / n_out as f64;
    let q = j.col_marginal();

    let outcome_vs_uniform = 0.5 * q.iter().map(|x| (x - uo).abs()).sum::<f64>();

    let mut joint = 0.0;
    for r in 0..n_keys {
        for c in 0..n_out {
            joint += (j.get(r, c) - uk * uo).abs();
        }
    }

    let mut max_post = 0.0f64;
    let mut avg_post = 0.0;
    for (c, &qc) in q.iter().enumerate() {
        if qc <= 0.0 {
            continue;
        }
        let dev = 0.5
            * (0..n_keys)
                .map(|r| (j.get(r, c) / qc - uk).abs())
                .sum::<f64>();
        max_post = max_post.max(dev);
        avg_post += qc * dev;
    }

    Ok(DeltaEVariants {
        outcome_vs_uniform,
        joint_vs_product_uniform: 0.5 * joint,
        max_posterior_dev: max_post,
        avg_posterior_dev: avg_post,
    })
}

/// Whether `p = (1-ε) q + ε p'` for some distribution `p'`, i.e.
/// `p(x) ≥ (1-ε) q(x)` everywhere. `ε` outside `[0, 1]` never qualifies.
pub fn decomposition_fallacy_check(p: &ProbDist, q: &ProbDist, eps: f64) -> bool {
    const SLACK: f64 = 1e-12;
    if !(0.0..=1.0).contains(&eps) {
        return false;
    }
    q.iter()
        .all(|(label, qx)| p.prob_of(label) >= (1.0 - eps) * qx - SLACK)
}
