//! Couplings of two distributions on a shared label universe.
//!
//! A maximal coupling puts `min(P(x), Q(x))` on the diagonal and achieves
//! `Pr[X ≠ X'] = δ(P, Q)`. The independent coupling `P(x)Q(x')` is the one
//! that needs no coordination between the two sides; for equal uniform
//! marginals over `N` atoms its mismatch is `1 - 1/N` while `δ = 0`.

use std::collections::HashMap;

use num_rational::Ratio;
use serde::Serialize;

use crate::ensembles::ProbDist;
use crate::error::{Error, Result};

const TOL_MARGINAL: f64 = 1e-12;

/// Joint mass over `labels × labels` with declared marginals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coupling {
    labels: Vec<String>,
    p: Vec<f64>,
    q: Vec<f64>,
    mass: Vec<f64>,
}

/// Union of the label sets: `p`'s labels in order, then `q`'s new ones.
fn aligned(p: &ProbDist, q: &ProbDist) -> (Vec<String>, Vec<f64>, Vec<f64>) {
    if p.labels() == q.labels() {
        return (p.labels().to_vec(), p.probs().to_vec(), q.probs().to_vec());
    }
    let p_index: HashMap<&str, f64> = p.iter().collect();
    let q_index: HashMap<&str, f64> = q.iter().collect();
    let mut labels: Vec<String> = p.labels().to_vec();
    labels.extend(
        q.labels()
            .iter()
            .filter(|l| !p_index.contains_key(l.as_str()))
            .cloned(),
    );
    let pv = labels
        .iter()
        .map(|l| p_index.get(l.as_str()).copied().unwrap_or(0.0))
        .collect();
    let qv = labels
        .iter()
        .map(|l| q_index.get(l.as_str()).copied().unwrap_or(0.0))
        .collect();
    (labels, pv, qv)
}

impl Coupling {
    /// Validates nonnegativity and both marginals.
    pub fn new(p: &ProbDist, q: &ProbDist, mass: Vec<f64>) -> Result<Self> {
        let (labels, pv, qv) = aligned(p, q);
        let n = labels.len();
        if mass.len() != n * n {
            return Err(Error::DimMismatch {
                expected: n * n,
                got: mass.len(),
            });
        }
        if mass.iter().any(|&m| m.is_nan() || m < 0.0) {
            return Err(Error::BadDistribution("coupling has negative mass".into()));
        }
        let c = Self {
            labels,
            p: pv,
            q: qv,
            mass,
        };
        let rows = c.row_sums();
        let cols = c.col_sums();
        let dev = rows
            .iter()
            .zip(&c.p)
            .chain(cols.iter().zip(&c.q))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if dev > TOL_MARGINAL {
            return Err(Error::BadDistribution(format!("marginals off by {dev:e}")));
        }
        Ok(c)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.mass[i * self.labels.len() + j]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        let n = self.labels.len();
        (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j)).sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let n = self.labels.len();
        (0..n)
            .map(|j| (0..n).map(|i| self.get(i, j)).sum())
            .collect()
    }

    /// CSV with an `x` column followed by one column per `x'` label.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["x".to_string()];
        header.extend(self.labels.iter().cloned());
        w.write_record(&header)?;
        for (i, label) in self.labels.iter().enumerate() {
            let mut rec = vec![label.clone()];
            rec.extend((0..self.labels.len()).map(|j| self.get(i, j).to_string()));
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Csv(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Coupling with diagonal `min(P, Q)` and the residuals joined by their
/// normalized outer product.
pub fn maximal_coupling(p: &ProbDist, q: &ProbDist) -> Coupling {
    let (labels, pv, qv) = aligned(p, q);
    let n = labels.len();
    let overlap: Vec<f64> = pv.iter().zip(&qv).map(|(a, b)| a.min(*b)).collect();
    let rp: Vec<f64> = pv.iter().zip(&overlap).map(|(a, o)| a - o).collect();
    let rq: Vec<f64> = qv.iter().zip(&overlap).map(|(b, o)| b - o).collect();
    // residual masses have disjoint supports; both total δ(P, Q)
    let delta: f64 = rp.iter().sum();
    let mut mass = vec![0.0; n * n];
    for i in 0..n {
        mass[i * n + i] = overlap[i];
        if delta > 0.0 && rp[i] > 0.0 {
            for j in 0..n {
                if rq[j] > 0.0 {
                    mass[i * n + j] += rp[i] * rq[j] / delta;
                }
            }
        }
    }
    Coupling {
        labels,
        p: pv,
        q: qv,
        mass,
    }
}

/// Product coupling `P(x) Q(x')`.
pub fn independent_coupling(p: &ProbDist, q: &ProbDist) -> Coupling {
    let (labels, pv, qv) = aligned(p, q);
    let mass = pv
        .iter()
        .flat_map(|a| qv.iter().map(move |b| a * b))
        .collect();
    Coupling {
        labels,
        p: pv,
        q: qv,
        mass,
    }
}

/// `Pr[X ≠ X'] = 1 - Σ_x c(x, x)`.
pub fn mismatch_probability(c: &Coupling) -> f64 {
    1.0 - (0..c.labels.len()).map(|i| c.get(i, i)).sum::<f64>()
}

/// Mismatch of the independent coupling, `1 - Σ_x P(x)Q(x)`, without
/// materializing the joint table.
pub fn independent_mismatch(p: &ProbDist, q: &ProbDist) -> f64 {
    let (_, pv, qv) = aligned(p, q);
    1.0 - pv.iter().zip(&qv).map(|(a, b)| a * b).sum::<f64>()
}

/// Exact independent-coupling mismatch for rational masses on a shared index set.
pub fn independent_mismatch_exact(p: &[Ratio<i128>], q: &[Ratio<i128>]) -> Result<Ratio<i128>> {
    if p.len() != q.len() {
        return Err(Error::DimMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    let agree = p
        .iter()
        .zip(q)
        .fold(Ratio::from_integer(0), |acc, (a, b)| acc + a * b);
    Ok(Ratio::from_integer(1) - agree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::variational_distance;
    use crate::random::random_probs;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dist(p: &[f64]) -> ProbDist {
        ProbDist::from_probs(p.to_vec()).unwrap()
    }

    fn uniform(n: usize) -> ProbDist {
        dist(&vec![1.0 / n as f64; n])
    }

    #[test]
    fn maximal_examples() {
        let p = dist(&[0.2, 0.5, 0.3]);
        let c = maximal_coupling(&p, &p);
        assert_eq!(mismatch_probability(&c), 0.0);
        assert_eq!(c.get(1, 1), 0.5);

        let c = maximal_coupling(&dist(&[0.7, 0.3]), &dist(&[0.4, 0.6]));
        assert!((mismatch_probability(&c) - 0.3).abs() < 1e-15);
        assert!((c.get(0, 1) - 0.3).abs() < 1e-15);

        let a = ProbDist::new(vec!["x".into()], vec![1.0]).unwrap();
        let b = ProbDist::new(vec!["y".into()], vec![1.0]).unwrap();
        let c = maximal_coupling(&a, &b);
        assert_eq!(c.labels(), &["x".to_string(), "y".to_string()]);
        assert_eq!(mismatch_probability(&c), 1.0);
    }

    #[test]
    fn independent_examples() {
        let c = independent_coupling(&uniform(4), &uniform(4));
        assert_eq!(mismatch_probability(&c), 0.75);
        assert_eq!(variational_distance(&uniform(4), &uniform(4)), 0.0);

        let c = independent_coupling(&uniform(256), &uniform(256));
        assert!((mismatch_probability(&c) - (1.0 - 1.0 / 256.0)).abs() < 1e-12);
        assert_eq!(
            independent_mismatch(&uniform(256), &uniform(256)),
            1.0 - 1.0 / 256.0
        );

        let point = dist(&[0.0, 1.0, 0.0]);
        assert_eq!(
            mismatch_probability(&independent_coupling(&point, &point)),
            0.0
        );
    }

    #[test]
    fn exact_mismatch() {
        for n in [2i128, 4, 256, 1 << 16] {
            let u = vec![Ratio::new(1, n); n as usize];
            let m = independent_mismatch_exact(&u, &u).unwrap();
            assert_eq!(m, Ratio::new(n - 1, n));
        }
        assert!(independent_mismatch_exact(&[Ratio::from_integer(1)], &[]).is_err());
    }

    #[test]
    fn coupling_validation() {
        let p = dist(&[0.5, 0.5]);
        assert!(Coupling::new(&p, &p, vec![0.5, 0.0, 0.0, 0.5]).is_ok());
        assert!(Coupling::new(&p, &p, vec![0.5, 0.0, 0.5, 0.0]).is_err());
        assert!(Coupling::new(&p, &p, vec![0.6, -0.1, -0.1, 0.6]).is_err());
        assert!(Coupling::new(&p, &p, vec![1.0]).is_err());
    }

    #[test]
    fn csv_export() {
        let c = maximal_coupling(&dist(&[0.7, 0.3]), &dist(&[0.4, 0.6]));
        let csv = c.to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,0,1");
        assert_eq!(lines.len(), 3);
    }

    /// Random coupling of `(p, q)`: a random nonnegative matrix scaled to the
    /// marginals by iterative proportional fitting.
    fn random_coupling(rng: &mut impl Rng, p: &ProbDist, q: &ProbDist) -> Coupling {
        let n = p.len();
        let mut m: Vec<f64> = (0..n * n).map(|_| rng.random::<f64>() + 1e-3).collect();
        for _ in 0..2000 {
            for i in 0..n {
                let s: f64 = (0..n).map(|j| m[i * n + j]).sum();
                if s > 0.0 {
                    (0..n).for_each(|j| m[i * n + j] *= p.probs()[i] / s);
                }
            }
            for j in 0..n {
                let s: f64 = (0..n).map(|i| m[i * n + j]).sum();
                if s > 0.0 {
                    (0..n).for_each(|i| m[i * n + j] *= q.probs()[j] / s);
                }
            }
        }
        Coupling {
            labels: p.labels().to_vec(),
            p: p.probs().to_vec(),
            q: q.probs().to_vec(),
            mass: m,
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn maximal_attains_variational(seed in any::<u64>(), n in 1usize..8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = dist(&random_probs(&mut rng, n));
            let q = dist(&random_probs(&mut rng, n));
            let c = maximal_coupling(&p, &q);
            let rebuilt = Coupling::new(&p, &q, c.mass.clone());
            prop_assert!(rebuilt.is_ok());
            prop_assert!((mismatch_probability(&c) - variational_distance(&p, &q)).abs() <= 1e-12);
        }

        #[test]
        fn any_coupling_mismatch_at_least_variational(seed in any::<u64>(), n in 2usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = dist(&random_probs(&mut rng, n));
            let q = dist(&random_probs(&mut rng, n));
            let c = random_coupling(&mut rng, &p, &q);
            prop_assert!(mismatch_probability(&c) >= variational_distance(&p, &q) - 1e-9);
            let ind = independent_coupling(&p, &q);
            prop_assert!(mismatch_probability(&ind) >= variational_distance(&p, &q) - 1e-12);
        }
    }
}
