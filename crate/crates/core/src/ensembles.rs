//! Classical-quantum ensembles `{p_k, ρ_E^k}` and the example families built on them.
//!
//! Keys are `n`-bit strings in lexicographic order with bit 0 leftmost, so key
//! index `i` has the binary expansion of `i` as its label.

use std::collections::HashSet;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{validate_density, ComplexMatrix, DensityOperator, PureState};

/// Largest key length for which dense `2^n`-dimensional objects are built.
pub const MAX_DENSE_KEY_BITS: usize = 6;
/// Largest key length for the sparse spiked distribution.
pub const MAX_SPIKED_KEY_BITS: u32 = 30;

const TOL_MASS: f64 = 1e-9;

/// Labels `"0..0"` through `"1..1"` for `n`-bit keys.
pub fn key_labels(n_bits: usize) -> Vec<String> {
    (0..1usize << n_bits)
        .map(|i| key_label(i, n_bits))
        .collect()
}

pub fn key_label(index: usize, n_bits: usize) -> String {
    (0..n_bits)
        .map(|b| {
            if (index >> (n_bits - 1 - b)) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Finite labeled probability distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDist")]
pub struct ProbDist {
    labels: Vec<String>,
    probs: Vec<f64>,
}

#[derive(Deserialize)]
struct RawDist {
    labels: Vec<String>,
    probs: Vec<f64>,
}

impl TryFrom<RawDist> for ProbDist {
    type Error = Error;

    fn try_from(raw: RawDist) -> Result<Self> {
        ProbDist::new(raw.labels, raw.probs)
    }
}

impl ProbDist {
    /// Validates nonnegativity, unit mass and label uniqueness. Masses in
    /// `[-1e-12, 0)` are rounding noise and are set to zero.
    pub fn new(labels: Vec<String>, probs: Vec<f64>) -> Result<Self> {
        if labels.len() != probs.len() {
            return Err(Error::BadDistribution(format!(
                "{} labels for {} probabilities",
                labels.len(),
                probs.len()
            )));
        }
        if labels.is_empty() {
            return Err(Error::BadDistribution("empty distribution".into()));
        }
        let mut seen = HashSet::with_capacity(labels.len());
        if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(Error::BadDistribution(format!("duplicate label {dup:?}")));
        }
        let mut probs = probs;
        for p in probs.iter_mut() {
            if !p.is_finite() || *p < -1e-12 {
                return Err(Error::BadDistribution(format!("invalid mass {p}")));
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > TOL_MASS {
            return Err(Error::BadDistribution(format!("total mass {total}")));
        }
        Ok(Self { labels, probs })
    }

    /// Labels `"0"`, `"1"`, ... for an unlabeled vector.
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        let labels = (0..probs.len()).map(|i| i.to_string()).collect();
        Self::new(labels, probs)
    }

    pub fn uniform(labels: Vec<String>) -> Result<Self> {
        let n = labels.len();
        Self::new(labels, vec![1.0 / n as f64; n])
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Mass of `label`, zero if absent.
    pub fn prob_of(&self, label: &str) -> f64 {
        self.index_of(label).map_or(0.0, |i| self.probs[i])
    }

    pub fn max_mass(&self) -> f64 {
        self.probs.iter().copied().fold(0.0, f64::max)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.labels
            .iter()
            .map(String::as_str)
            .zip(self.probs.iter().copied())
    }
}

/// Leaked key bits: `positions` (strictly increasing) and their values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeakSpec {
    positions: Vec<usize>,
    values: Vec<u8>,
}

impl LeakSpec {
    pub fn new(positions: Vec<usize>, values: Vec<u8>) -> Result<Self> {
        if positions.len() != values.len() {
            return Err(Error::BadParams(
                "leak positions and values differ in length".into(),
            ));
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadParams(
                "leak positions must be strictly increasing".into(),
            ));
        }
        if values.iter().any(|&v| v > 1) {
            return Err(Error::BadParams("leak values must be bits".into()));
        }
        Ok(Self { positions, values })
    }

    pub fn none() -> Self {
        Self {
            positions: vec![],
            values: vec![],
        }
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }
}

/// Keyed family of probe states with a prior over the keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEnsemble")]
pub struct CqEnsemble {
    n_bits: usize,
    prior: ProbDist,
    probes: Vec<DensityOperator>,
}

#[derive(Deserialize)]
struct RawEnsemble {
    n_bits: usize,
    prior: ProbDist,
    probes: Vec<DensityOperator>,
}

impl TryFrom<RawEnsemble> for CqEnsemble {
    type Error = Error;

    fn try_from(raw: RawEnsemble) -> Result<Self> {
        CqEnsemble::new(raw.n_bits, raw.prior, raw.probes)
    }
}

impl CqEnsemble {
    /// The prior's labels are the keys; there must be exactly `2^n_bits` of them.
    pub fn new(n_bits: usize, prior: ProbDist, probes: Vec<DensityOperator>) -> Result<Self> {
        if n_bits > 20 {
            return Err(Error::TooLarge(format!("{n_bits}-bit keys")));
        }
        let count = 1usize << n_bits;
        if prior.len() != count {
            return Err(Error::BadParams(format!(
                "{} keys for {n_bits}-bit ensemble",
                prior.len()
            )));
        }
        if let Some(bad) = prior
            .labels()
            .iter()
            .find(|k| k.len() != n_bits || k.chars().any(|c| c != '0' && c != '1'))
        {
            return Err(Error::BadParams(format!(
                "key {bad:?} is not a {n_bits}-bit string"
            )));
        }
        if probes.len() != count {
            return Err(Error::DimMismatch {
                expected: count,
                got: probes.len(),
            });
        }
        let dim = probes[0].dim();
        if let Some(p) = probes.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimMismatch {
                expected: dim,
                got: p.dim(),
            });
        }
        Ok(Self {
            n_bits,
            prior,
            probes,
        })
    }

    /// Ensemble with a uniform prior over lexicographically ordered keys.
    pub fn uniform(n_bits: usize, probes: Vec<DensityOperator>) -> Result<Self> {
        let prior = ProbDist::uniform(key_labels(n_bits))?;
        Self::new(n_bits, prior, probes)
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn keys(&self) -> &[String] {
        self.prior.labels()
    }

    pub fn prior(&self) -> &ProbDist {
        &self.prior
    }

    pub fn probes(&self) -> &[DensityOperator] {
        &self.probes
    }

    pub fn probe_dim(&self) -> usize {
        self.probes[0].dim()
    }

    pub fn len(&self) -> usize {
        self.probes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probes.is_empty()
    }

    pub fn probe(&self, key: &str) -> Option<&DensityOperator> {
        self.prior.index_of(key).map(|i| &self.probes[i])
    }

    /// `(key, prior mass, probe)` triples in key order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, f64, &DensityOperator)> {
        self.prior
            .iter()
            .zip(&self.probes)
            .map(|((k, p), r)| (k, p, r))
    }
}

/// `I/2^n`, the completely mixed state on the key register.
pub fn uniform_key_state(n_bits: usize) -> Result<DensityOperator> {
    if n_bits > MAX_DENSE_KEY_BITS {
        return Err(Error::TooLarge(format!(
            "key register of {n_bits} bits exceeds {MAX_DENSE_KEY_BITS}"
        )));
    }
    Ok(DensityOperator::maximally_mixed(1 << n_bits))
}

/// `ρ_E = Σ_k p_k ρ_E^k`.
pub fn average_probe(e: &CqEnsemble) -> DensityOperator {
    let dim = e.probe_dim();
    let mut acc = ComplexMatrix::zeros(dim, dim);
    for (_, p, rho) in e.iter() {
        if p > 0.0 {
            acc = acc.add(&rho.matrix().scale(p)).expect("equal probe dims");
        }
    }
    validate_density(acc).expect("convex combinations of states are states")
}

/// One-bit key with pure probes `|k0⟩ = |0⟩`, `|k1⟩ = c|0⟩ + √(1-c²)|1⟩`.
pub fn single_bit_pure_example(c: f64) -> Result<CqEnsemble> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::BadOverlap(c));
    }
    let k0 = PureState::basis(2, 0);
    let k1 = PureState::from_real(&[c, (1.0 - c * c).max(0.0).sqrt()])?;
    CqEnsemble::uniform(
        1,
        vec![
            DensityOperator::from_pure(&k0),
            DensityOperator::from_pure(&k1),
        ],
    )
}

/// Two-bit key whose second probe qubit carries `k1 ⊕ k2`:
/// `00 → σ⊗ρ1`, `01 → σ⊗ρ2`, `10 → σ⊗ρ2`, `11 → σ⊗ρ1`.
pub fn two_bit_pkl_example(
    sigma: &DensityOperator,
    rho1: &DensityOperator,
    rho2: &DensityOperator,
) -> Result<CqEnsemble> {
    for s in [sigma, rho1, rho2] {
        if s.dim() != 2 {
            return Err(Error::DimMismatch {
                expected: 2,
                got: s.dim(),
            });
        }
    }
    let a = sigma.tensor(rho1);
    let b = sigma.tensor(rho2);
    CqEnsemble::uniform(2, vec![a.clone(), b.clone(), b, a])
}

/// Restrict an ensemble to keys consistent with the leaked bits.
///
/// The result is indexed by the remaining `n - m` bits, keeps the original
/// probes, and renormalizes the prior.
pub fn condition_on_leak(e: &CqEnsemble, leak: &LeakSpec) -> Result<CqEnsemble> {
    let n = e.n_bits();
    if let Some(&p) = leak.positions().iter().find(|&&p| p >= n) {
        return Err(Error::BadParams(format!(
            "leak position {p} outside {n}-bit key"
        )));
    }
    let mut labels = Vec::new();
    let mut masses = Vec::new();
    let mut probes = Vec::new();
    for (key, p, rho) in e.iter() {
        let bits = key.as_bytes();
        let consistent = leak
            .positions()
            .iter()
            .zip(leak.values())
            .all(|(&pos, &v)| bits[pos] == b'0' + v);
        if !consistent {
            continue;
        }
        let rest: String = key
            .chars()
            .enumerate()
            .filter(|(i, _)| !leak.positions().contains(i))
            .map(|(_, c)| c)
            .collect();
        labels.push(rest);
        masses.push(p);
        probes.push(rho.clone());
    }
    let total: f64 = masses.iter().sum();
    if total <= 0.0 {
        return Err(Error::ZeroMass);
    }
    let prior = ProbDist::new(labels, masses.into_iter().map(|m| m / total).collect())?;
    CqEnsemble::new(n - leak.positions().len(), prior, probes)
}

/// Key distribution with one atom of mass `2^-l` and the rest spread evenly
/// over the other `2^n - 1` keys. Stored without materializing the atoms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpikedDist {
    n: u32,
    l: u32,
    spike: u64,
}

/// Spiked distribution with the spike on the all-zero key.
pub fn spiked_distribution(n: u32, l: u32) -> Result<SpikedDist> {
    if n == 0 || n > MAX_SPIKED_KEY_BITS {
        return Err(Error::BadParams(format!(
            "n = {n} outside 1..={MAX_SPIKED_KEY_BITS}"
        )));
    }
    if l > n {
        return Err(Error::BadParams(format!("l = {l} exceeds n = {n}")));
    }
    Ok(SpikedDist { n, l, spike: 0 })
}

impl SpikedDist {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn spike(&self) -> u64 {
        self.spike
    }

    pub fn key_count(&self) -> u64 {
        1u64 << self.n
    }

    pub fn spike_mass(&self) -> f64 {
        (-(self.l as f64)).exp2()
    }

    /// Mass of each non-spike key.
    pub fn atom_mass(&self) -> f64 {
        (1.0 - self.spike_mass()) / (self.key_count() - 1) as f64
    }

    pub fn prob(&self, key: u64) -> f64 {
        if key == self.spike {
            self.spike_mass()
        } else {
            self.atom_mass()
        }
    }

    pub fn max_mass(&self) -> f64 {
        self.spike_mass().max(self.atom_mass())
    }

    /// Closed form `δ(P, U) = 2^-l - 2^-n`.
    pub fn tv_to_uniform(&self) -> f64 {
        self.spike_mass() - (-(self.n as f64)).exp2()
    }

    /// `½ Σ_x |P(x) - 2^-n|`, summed atom by atom for `n ≤ 20` and by atom
    /// class (spike, then `2^n - 1` equal atoms) above that.
    pub fn tv_to_uniform_summed(&self) -> f64 {
        let u = (-(self.n as f64)).exp2();
        if self.n <= 20 {
            (0..self.key_count())
                .map(|k| (self.prob(k) - u).abs())
                .sum::<f64>()
                * 0.5
        } else {
            let rest = (self.key_count() - 1) as f64;
            0.5 * ((self.spike_mass() - u).abs() + rest * (self.atom_mass() - u).abs())
        }
    }

    /// Shannon entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        let h = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
        h(self.spike_mass()) + (self.key_count() - 1) as f64 * h(self.atom_mass())
    }

    /// Total mass in exact rational arithmetic.
    pub fn total_mass_exact(&self) -> Ratio<i128> {
        let spike = Ratio::new(1i128, 1i128 << self.l);
        let rest = self.key_count() as i128 - 1;
        let atom = (Ratio::from_integer(1) - spike) / Ratio::from_integer(rest);
        spike + atom * Ratio::from_integer(rest)
    }

    /// Dense form, for `n ≤ 20`.
    pub fn to_dense(&self) -> Result<KeyDist> {
        if self.n > 20 {
            return Err(Error::TooLarge(format!(
                "dense {}-bit distribution",
                self.n
            )));
        }
        Ok(KeyDist::Dense {
            n: self.n,
            probs: (0..self.key_count()).map(|k| self.prob(k)).collect(),
        })
    }
}

/// Distribution over `n`-bit keys, indexed by the key's integer value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum KeyDist {
    Dense { n: u32, probs: Vec<f64> },
    Spiked(SpikedDist),
}

impl KeyDist {
    pub fn dense(n: u32, probs: Vec<f64>) -> Result<Self> {
        if n > 24 || probs.len() != 1usize << n {
            return Err(Error::BadParams(format!(
                "{} masses for {n}-bit keys",
                probs.len()
            )));
        }
        ProbDist::from_probs(probs.clone())?;
        Ok(KeyDist::Dense { n, probs })
    }

    /// Dense key distribution from a `ProbDist` labeled by bit strings.
    pub fn from_prob_dist(p: &ProbDist) -> Result<Self> {
        let n = p.labels().first().map_or(0, |l| l.len());
        let mut probs = vec![0.0; 1usize << n];
        for (label, mass) in p.iter() {
            let idx = usize::from_str_radix(label, 2)
                .ok()
                .filter(|_| label.len() == n)
                .ok_or_else(|| Error::BadParams(format!("label {label:?} is not a {n}-bit key")))?;
            probs[idx] = mass;
        }
        Self::dense(n as u32, probs)
    }

    pub fn n_bits(&self) -> u32 {
        match self {
            KeyDist::Dense { n, .. } => *n,
            KeyDist::Spiked(s) => s.n(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::criterion_d_averaged;
    use crate::qmath::ComplexMatrix;
    use crate::random::random_ensemble;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn labels_are_lexicographic() {
        assert_eq!(key_labels(2), vec!["00", "01", "10", "11"]);
        assert_eq!(key_label(5, 4), "0101");
        assert_eq!(key_labels(0), vec![""]);
    }

    #[test]
    fn prob_dist_validation() {
        assert!(ProbDist::from_probs(vec![0.5, 0.6]).is_err());
        assert!(ProbDist::from_probs(vec![1.2, -0.2]).is_err());
        assert!(ProbDist::new(vec!["a".into(), "a".into()], vec![0.5, 0.5]).is_err());
        let p = ProbDist::new(vec!["a".into(), "b".into()], vec![1.0 + 1e-13, -1e-13]).unwrap();
        assert_eq!(p.probs()[1], 0.0);
    }

    #[test]
    fn uniform_key_state_examples() {
        assert_eq!(
            uniform_key_state(1).unwrap(),
            DensityOperator::maximally_mixed(2)
        );
        let u2 = uniform_key_state(2).unwrap();
        assert_eq!(u2.matrix(), &ComplexMatrix::identity(4).scale(0.25));
        assert_eq!(u2.matrix().trace().re, 1.0);
        assert!(matches!(uniform_key_state(7), Err(Error::TooLarge(_))));
    }

    #[test]
    fn average_probe_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = crate::random::random_density(&mut rng, 3);
        let e = CqEnsemble::uniform(2, vec![rho.clone(); 4]).unwrap();
        assert!(average_probe(&e).matrix().max_abs_diff(rho.matrix()) < 1e-15);

        let e = single_bit_pure_example(0.0).unwrap();
        assert!(
            average_probe(&e)
                .matrix()
                .max_abs_diff(DensityOperator::maximally_mixed(2).matrix())
                < 1e-15
        );

        let sigma = crate::random::random_density(&mut rng, 2);
        let r1 = crate::random::random_density(&mut rng, 2);
        let r2 = crate::random::random_density(&mut rng, 2);
        let e = two_bit_pkl_example(&sigma, &r1, &r2).unwrap();
        let mid = DensityOperator::mixture(&[0.5, 0.5], &[&r1, &r2]).unwrap();
        let expected = sigma.tensor(&mid);
        assert!(average_probe(&e).matrix().max_abs_diff(expected.matrix()) < 1e-15);
    }

    #[test]
    fn single_bit_examples() {
        for (c, d) in [(0.0, 0.5), (1.0, 0.0), (0.6, 0.4)] {
            let e = single_bit_pure_example(c).unwrap();
            assert!((criterion_d_averaged(&e) - d).abs() < 1e-12, "c = {c}");
        }
        assert!(matches!(
            single_bit_pure_example(1.5),
            Err(Error::BadOverlap(_))
        ));
        assert!(matches!(
            single_bit_pure_example(-0.1),
            Err(Error::BadOverlap(_))
        ));
    }

    #[test]
    fn two_bit_examples() {
        let sigma = DensityOperator::maximally_mixed(2);
        let r = DensityOperator::diagonal(&[0.3, 0.7]).unwrap();
        let e = two_bit_pkl_example(&sigma, &r, &r).unwrap();
        assert!(e.probes().iter().all(|p| p == &e.probes()[0]));
        assert!(criterion_d_averaged(&e).abs() < 1e-15);

        let r1 = DensityOperator::diagonal(&[1.0, 0.0]).unwrap();
        let r2 = DensityOperator::diagonal(&[0.0, 1.0]).unwrap();
        let e = two_bit_pkl_example(&sigma, &r1, &r2).unwrap();
        assert!((criterion_d_averaged(&e) - 0.5).abs() < 1e-12);
        assert_eq!(e.probe("01"), Some(&sigma.tensor(&r2)));
        assert_eq!(e.probe("11"), Some(&sigma.tensor(&r1)));

        let r1 = DensityOperator::diagonal(&[0.6, 0.4]).unwrap();
        let r2 = DensityOperator::diagonal(&[0.1, 0.9]).unwrap();
        let e = two_bit_pkl_example(&sigma, &r1, &r2).unwrap();
        assert!((criterion_d_averaged(&e) - 0.25).abs() < 1e-12);

        let big = DensityOperator::maximally_mixed(3);
        assert!(matches!(
            two_bit_pkl_example(&big, &r1, &r2),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn spiked_examples() {
        let s = spiked_distribution(8, 3).unwrap();
        assert_eq!(s.max_mass(), 0.125);
        assert_eq!(s.tv_to_uniform(), 0.12109375);
        assert!((s.tv_to_uniform_summed() - 0.12109375).abs() < 1e-12);
        let u = spiked_distribution(8, 8).unwrap();
        assert_eq!(u.tv_to_uniform(), 0.0);
        assert!(u.tv_to_uniform_summed().abs() < 1e-15);
        assert!((u.entropy_bits() - 8.0).abs() < 1e-12);
        assert!(spiked_distribution(31, 3).is_err());
        assert!(spiked_distribution(8, 9).is_err());
    }

    #[test]
    fn spiked_mass_is_exactly_one() {
        for n in 1..=30 {
            for l in [0, n / 2, n] {
                let s = spiked_distribution(n, l).unwrap();
                assert_eq!(s.total_mass_exact(), Ratio::from_integer(1), "n={n} l={l}");
            }
        }
    }

    #[test]
    fn leak_examples() {
        let sigma = DensityOperator::maximally_mixed(2);
        let r1 = DensityOperator::diagonal(&[0.6, 0.4]).unwrap();
        let r2 = DensityOperator::diagonal(&[0.1, 0.9]).unwrap();
        let e = two_bit_pkl_example(&sigma, &r1, &r2).unwrap();

        let c = condition_on_leak(&e, &LeakSpec::new(vec![0], vec![0]).unwrap()).unwrap();
        assert_eq!(c.n_bits(), 1);
        assert_eq!(c.keys(), &["0".to_string(), "1".to_string()]);
        assert_eq!(c.prior().probs(), &[0.5, 0.5]);
        assert_eq!(c.probes(), &[sigma.tensor(&r1), sigma.tensor(&r2)]);

        assert_eq!(condition_on_leak(&e, &LeakSpec::none()).unwrap(), e);

        let all = condition_on_leak(&e, &LeakSpec::new(vec![0, 1], vec![1, 0]).unwrap()).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all.probes()[0], sigma.tensor(&r2));

        assert!(LeakSpec::new(vec![1, 0], vec![0, 0]).is_err());
        assert!(condition_on_leak(&e, &LeakSpec::new(vec![2], vec![0]).unwrap()).is_err());

        let skewed = CqEnsemble::new(
            1,
            ProbDist::new(key_labels(1), vec![1.0, 0.0]).unwrap(),
            vec![sigma.clone(), sigma.clone()],
        )
        .unwrap();
        assert!(matches!(
            condition_on_leak(&skewed, &LeakSpec::new(vec![0], vec![1]).unwrap()),
            Err(Error::ZeroMass)
        ));
    }

    #[test]
    fn ensemble_json_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let e = random_ensemble(&mut rng, 2, 3, false);
        let json = serde_json::to_string(&e).unwrap();
        let back: CqEnsemble = serde_json::from_str(&json).unwrap();
        assert_eq!(back, e);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn average_probe_is_valid(seed in any::<u64>(), n in 0usize..4, dim in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let e = random_ensemble(&mut rng, n, dim, false);
            let avg = average_probe(&e);
            prop_assert!(validate_density(avg.matrix().clone()).is_ok());
        }

        #[test]
        fn conditioned_average_matches_direct(seed in any::<u64>(), bit in 0u8..2) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let e = random_ensemble(&mut rng, 3, 2, false);
            let leak = LeakSpec::new(vec![1], vec![bit]).unwrap();
            let via = average_probe(&condition_on_leak(&e, &leak).unwrap());
            // direct: weighted sum over consistent keys of the full ensemble
            let mut acc = ComplexMatrix::zeros(2, 2);
            let mut total = 0.0;
            for (k, p, r) in e.iter() {
                if k.as_bytes()[1] == b'0' + bit {
                    acc = acc.add(&r.matrix().scale(p)).unwrap();
                    total += p;
                }
            }
            let direct = acc.scale(1.0 / total);
            prop_assert!(via.matrix().max_abs_diff(&direct) <= 1e-12);
        }
    }
}
