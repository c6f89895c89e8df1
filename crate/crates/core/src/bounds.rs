//! Guarantee arithmetic: Markov budgets, the success cap implied by a
//! mixture reading of d, and the comparison of a d-certified key against a
//! uniform one.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmath::{trace_distance, DensityOperator};

/// `min(1, mean / threshold)`.
pub fn markov_bound(mean: f64, threshold: f64) -> Result<f64> {
    if !mean.is_finite() || mean < 0.0 {
        return Err(Error::BadRange(
            mean,
            "mean must be finite and nonnegative".into(),
        ));
    }
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::BadRange(
            threshold,
            "threshold must be positive".into(),
        ));
    }
    Ok((mean / threshold).min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndividualBudget {
    /// Average `E[X]` needed so that `Pr[X > eps] ≤ delta`.
    pub required_average: f64,
    /// Average that would suffice for the average guarantee alone.
    pub naive_average: f64,
    /// `required_average / naive_average`.
    pub degradation: f64,
}

fn unit_open(x: f64, what: &str) -> Result<()> {
    if x > 0.0 && x <= 1.0 {
        Ok(())
    } else {
        Err(Error::BadRange(x, format!("{what} must lie in (0, 1]")))
    }
}

/// Budget for turning an average bound into an individual one with
/// confidence `1 - delta`.
pub fn average_for_individual_guarantee(eps: f64, delta: f64) -> Result<IndividualBudget> {
    unit_open(eps, "epsilon")?;
    unit_open(delta, "delta")?;
    Ok(IndividualBudget {
        required_average: eps * delta,
        naive_average: eps,
        degradation: delta,
    })
}

/// Required average after applying the individual-guarantee rule `k` times.
pub fn chained_budget(eps: f64, delta: f64, k: u32) -> Result<f64> {
    unit_open(eps, "epsilon")?;
    unit_open(delta, "delta")?;
    Ok(eps * delta.powi(k as i32))
}

fn check_d(d: f64) -> Result<()> {
    if (0.0..=0.5).contains(&d) {
        Ok(())
    } else {
        Err(Error::BadRange(d, "d must lie in [0, 1/2]".into()))
    }
}

/// Success cap `1/2 + d/2` implied by reading `ρ_KE` as a `(1-d, d)` mixture
/// of the ideal state and an arbitrary one.
pub fn hypothesis_ii_cap(d: f64) -> Result<f64> {
    check_d(d)?;
    Ok(0.5 + d / 2.0)
}

/// Success under the mixture reading when the arbitrary component is `σ0`
/// or `σ1` with equal weight: `1/2 + (d/4) ‖σ0 - σ1‖₁`.
pub fn hypothesis_ii_exact(
    sigma0: &DensityOperator,
    sigma1: &DensityOperator,
    d: f64,
) -> Result<f64> {
    check_d(d)?;
    let half_norm = trace_distance(sigma0, sigma1)?;
    Ok(0.5 + d * half_norm / 2.0)
}

/// Parameters of a key-length comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GuaranteeScenario {
    /// Key length in bits.
    pub n: usize,
    /// Spike exponent: the worst-case single-key probability is `2^-l`.
    pub l: usize,
    /// Subsequence lengths to tabulate.
    pub ms: Vec<usize>,
    pub epsilon: f64,
    pub delta_target: f64,
}

impl GuaranteeScenario {
    pub fn new(
        n: usize,
        l: usize,
        ms: Vec<usize>,
        epsilon: f64,
        delta_target: f64,
    ) -> Result<Self> {
        if n == 0 || l > n {
            return Err(Error::BadParams(format!(
                "need 0 < n and l <= n, got n = {n}, l = {l}"
            )));
        }
        if let Some(&m) = ms.iter().find(|&&m| m == 0 || m > n) {
            return Err(Error::BadParams(format!(
                "subsequence length {m} outside 1..={n}"
            )));
        }
        if !(0.0..1.0).contains(&epsilon) {
            return Err(Error::BadRange(
                epsilon,
                "epsilon must lie in [0, 1)".into(),
            ));
        }
        unit_open(delta_target, "delta_target")?;
        Ok(Self {
            n,
            l,
            ms,
            epsilon,
            delta_target,
        })
    }

    /// 1000-bit key certified at `ε = 2^-20`.
    pub fn long_key() -> Self {
        Self::new(
            1000,
            20,
            vec![1, 10, 20, 50, 100, 200, 500, 1000],
            2f64.powi(-20),
            2f64.powi(-20),
        )
        .expect("preset is valid")
    }

    /// `10^4`-bit block at `ε = 10^-5`, roughly `2^-16`.
    pub fn finite_block() -> Self {
        Self::new(10_000, 16, vec![1, 16, 100, 1000, 10_000], 1e-5, 1e-5).expect("preset is valid")
    }
}

/// One row of the comparison table. Linear values may underflow to zero;
/// the `log2_*` fields are exact to double precision.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub m: usize,
    pub uniform_prob: f64,
    pub log2_uniform: f64,
    /// `2^-m + ε`.
    pub d_guarantee_bound: f64,
    pub log2_bound: f64,
    /// `2^-l`.
    pub spiked_worst: f64,
    pub log2_spiked_worst: f64,
    /// `bound / uniform`; `None` when it overflows.
    pub ratio: Option<f64>,
    pub log2_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonTable {
    pub scenario: GuaranteeScenario,
    pub individual_budget: IndividualBudget,
    pub rows: Vec<ComparisonRow>,
}

/// `log2(2^a + 2^b)`.
fn log2_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp2().ln_1p() / std::f64::consts::LN_2
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

pub fn uniform_comparison_table(s: &GuaranteeScenario) -> ComparisonTable {
    let log2_eps = s.epsilon.log2();
    let budget = if s.epsilon > 0.0 {
        average_for_individual_guarantee(s.epsilon, s.delta_target).expect("validated scenario")
    } else {
        IndividualBudget {
            required_average: 0.0,
            naive_average: 0.0,
            degradation: s.delta_target,
        }
    };
    let rows =
        s.ms.iter()
            .map(|&m| {
                let log2_uniform = -(m as f64);
                let log2_bound = log2_add(log2_uniform, log2_eps);
                let log2_ratio = log2_bound - log2_uniform;
                ComparisonRow {
                    m,
                    uniform_prob: log2_uniform.exp2(),
                    log2_uniform,
                    d_guarantee_bound: log2_bound.exp2(),
                    log2_bound,
                    spiked_worst: (-(s.l as f64)).exp2(),
                    log2_spiked_worst: -(s.l as f64),
                    ratio: finite(log2_ratio.exp2()),
                    log2_ratio,
                }
            })
            .collect();
    ComparisonTable {
        scenario: s.clone(),
        individual_budget: budget,
        rows,
    }
}

const TABLE_HEADER: [&str; 9] = [
    "m",
    "uniform_prob",
    "log2_uniform",
    "d_guarantee_bound",
    "log2_bound",
    "spiked_worst",
    "log2_spiked_worst",
    "ratio",
    "log2_ratio",
];

impl ComparisonRow {
    fn cells(&self) -> [String; 9] {
        [
            self.m.to_string(),
            format!("{:e}", self.uniform_prob),
            self.log2_uniform.to_string(),
            format!("{:e}", self.d_guarantee_bound),
            self.log2_bound.to_string(),
            format!("{:e}", self.spiked_worst),
            self.log2_spiked_worst.to_string(),
            self.ratio
                .map_or_else(|| "overflow".into(), |r| format!("{r:e}")),
            self.log2_ratio.to_string(),
        ]
    }
}

impl ComparisonTable {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(TABLE_HEADER)?;
        for row in &self.rows {
            w.write_record(row.cells())?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Csv(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_markdown(&self) -> String {
        let header = TABLE_HEADER.map(String::from);
        let body: Vec<[String; 9]> = self.rows.iter().map(ComparisonRow::cells).collect();
        markdown_table(&header, &body)
    }
}

/// Pipe table with every column padded to its widest cell.
pub fn markdown_table<const N: usize>(header: &[String; N], rows: &[[String; N]]) -> String {
    let widths: Vec<usize> = (0..N)
        .map(|j| {
            rows.iter()
                .map(|r| r[j].len())
                .chain([header[j].len(), 3])
                .max()
                .unwrap_or(3)
        })
        .collect();
    let line = |cells: &[String; N]| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        format!("| {} |\n", parts.join(" | "))
    };
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    let mut out = line(header);
    out.push_str(&format!("| {} |\n", rule.join(" | ")));
    rows.iter().for_each(|r| out.push_str(&line(r)));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarkovCheck {
    pub mean: f64,
    pub threshold: f64,
    pub bound: f64,
    pub observed: f64,
    pub samples: u64,
    pub std_error: f64,
}

/// Exceedance frequency of an exponential variable with the given mean,
/// next to its Markov bound.
pub fn markov_monte_carlo(
    mean: f64,
    threshold: f64,
    samples: u64,
    seed: u64,
) -> Result<MarkovCheck> {
    let bound = markov_bound(mean, threshold)?;
    if samples == 0 {
        return Err(Error::BadParams("sample count must be positive".into()));
    }
    let observed = if mean == 0.0 {
        0.0
    } else {
        let exp = Exp::new(1.0 / mean).map_err(|e| Error::BadParams(e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let hits = (0..samples)
            .filter(|_| exp.sample(&mut rng) > threshold)
            .count();
        hits as f64 / samples as f64
    };
    Ok(MarkovCheck {
        mean,
        threshold,
        bound,
        observed,
        samples,
        std_error: (observed * (1.0 - observed) / samples as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrimination::helstrom_binary;
    use crate::ensembles::single_bit_pure_example;
    use crate::qmath::PureState;
    use crate::random::random_density;
    use proptest::prelude::*;

    #[test]
    fn markov_examples() {
        assert!((markov_bound(0.001, 0.01).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(markov_bound(0.0, 0.3).unwrap(), 0.0);
        assert_eq!(markov_bound(5.0, 1.0).unwrap(), 1.0);
        assert!(markov_bound(-1.0, 1.0).is_err());
        assert!(markov_bound(1.0, 0.0).is_err());
    }

    #[test]
    fn budget_examples() {
        let b = average_for_individual_guarantee(2f64.powi(-16), 2f64.powi(-16)).unwrap();
        assert_eq!(b.required_average, 2f64.powi(-32));
        assert_eq!(b.degradation, 2f64.powi(-16));
        assert_eq!(
            average_for_individual_guarantee(0.01, 1.0)
                .unwrap()
                .required_average,
            0.01
        );
        assert_eq!(
            chained_budget(2f64.powi(-10), 2f64.powi(-5), 2).unwrap(),
            2f64.powi(-20)
        );
        assert_eq!(chained_budget(0.3, 0.5, 0).unwrap(), 0.3);
        assert!(average_for_individual_guarantee(0.0, 0.5).is_err());
    }

    #[test]
    fn cap_examples() {
        assert_eq!(hypothesis_ii_cap(0.0).unwrap(), 0.5);
        assert_eq!(hypothesis_ii_cap(0.5).unwrap(), 0.75);
        assert_eq!(hypothesis_ii_cap(0.25).unwrap(), 0.625);
        assert!(matches!(hypothesis_ii_cap(0.6), Err(Error::BadRange(..))));

        let s0 = DensityOperator::from_pure(&PureState::basis(2, 0));
        let s1 = DensityOperator::from_pure(&PureState::basis(2, 1));
        assert!((hypothesis_ii_exact(&s0, &s1, 0.3).unwrap() - 0.65).abs() < 1e-12);
        assert_eq!(hypothesis_ii_exact(&s0, &s0, 0.3).unwrap(), 0.5);
        let s3 = DensityOperator::maximally_mixed(3);
        assert!(matches!(
            hypothesis_ii_exact(&s0, &s3, 0.1),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn single_bit_margin_is_half_d() {
        for i in 0..=20 {
            let c = i as f64 / 20.0;
            let e = single_bit_pure_example(c).unwrap();
            let d = crate::criteria::criterion_d_averaged(&e);
            let h = helstrom_binary(e.probe("0").unwrap(), e.probe("1").unwrap(), 0.5)
                .unwrap()
                .p_success;
            assert!((h - hypothesis_ii_cap(d).unwrap() - d / 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn comparison_table_examples() {
        let s = GuaranteeScenario::new(1000, 20, vec![1, 100], 2f64.powi(-20), 0.5).unwrap();
        let t = uniform_comparison_table(&s);
        let row = &t.rows[1];
        assert_eq!(row.log2_uniform, -100.0);
        assert!((row.log2_bound + 20.0).abs() < 1e-12);
        assert!((row.log2_ratio - 80.0).abs() < 1e-12);
        assert_eq!(row.spiked_worst, 2f64.powi(-20));
        assert!((t.rows[0].d_guarantee_bound - (0.5 + 2f64.powi(-20))).abs() < 1e-15);

        let zero = GuaranteeScenario::new(64, 4, vec![1, 30, 64], 0.0, 0.5).unwrap();
        for row in uniform_comparison_table(&zero).rows {
            assert_eq!(row.d_guarantee_bound, row.uniform_prob);
            assert_eq!(row.log2_ratio, 0.0);
        }

        let huge = uniform_comparison_table(&GuaranteeScenario::finite_block());
        let last = huge.rows.last().unwrap();
        assert_eq!(last.uniform_prob, 0.0);
        assert_eq!(last.ratio, None);
        assert!((last.log2_ratio - (10_000.0 + 1e-5f64.log2())).abs() < 1e-9);

        assert!(GuaranteeScenario::new(10, 3, vec![11], 0.1, 0.5).is_err());
    }

    #[test]
    fn table_exports() {
        let t = uniform_comparison_table(&GuaranteeScenario::long_key());
        let csv = t.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 1 + t.rows.len());
        assert!(csv.starts_with("m,uniform_prob,"));
        let md = t.to_markdown();
        let widths: Vec<usize> = md.lines().map(str::len).collect();
        assert!(widths.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn markov_sampling_respects_bound() {
        for (mean, thr) in [(0.01, 0.05), (1.0, 2.0), (1.0, 0.5)] {
            let c = markov_monte_carlo(mean, thr, 50_000, 9).unwrap();
            assert!(c.observed <= c.bound + 4.0 * c.std_error + 1e-12);
        }
        assert_eq!(
            markov_monte_carlo(0.1, 0.2, 1000, 3).unwrap(),
            markov_monte_carlo(0.1, 0.2, 1000, 3).unwrap()
        );
    }

    proptest! {
        #[test]
        fn exact_below_cap(seed in any::<u64>(), d in 0.0f64..=0.5, dim in 2usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_density(&mut rng, dim);
            let b = random_density(&mut rng, dim);
            prop_assert!(hypothesis_ii_exact(&a, &b, d).unwrap() <= hypothesis_ii_cap(d).unwrap() + 1e-12);
        }

        #[test]
        fn markov_monotone(mean in 0.0f64..10.0, t1 in 0.01f64..10.0, t2 in 0.01f64..10.0, dm in 0.0f64..5.0) {
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            prop_assert!(markov_bound(mean, hi).unwrap() <= markov_bound(mean, lo).unwrap());
            prop_assert!(markov_bound(mean, lo).unwrap() <= markov_bound(mean + dm, lo).unwrap());
        }
    }
}
