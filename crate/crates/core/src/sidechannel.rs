//! GF(2) analysis of the classical post-processing: Toeplitz hash rank and
//! leakage, and decision-region sizes of linear codes.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::criteria::variational_distance;
use crate::ensembles::ProbDist;
use crate::error::{Error, Result};

/// Largest seed length enumerated by exhaustive singular-fraction counts.
pub const MAX_EXHAUSTIVE_SEED_BITS: usize = 24;
/// Largest block length for decision-region enumeration.
pub const MAX_CENSUS_BITS: usize = 20;

/// Dense binary matrix, each row packed into 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::BadShape(format!("{rows}x{cols} matrix")));
        }
        let words = cols.div_ceil(64);
        Ok(Self {
            rows,
            cols,
            words,
            bits: vec![0; rows * words],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, true);
        }
        Ok(m)
    }

    /// From rows of 0/1 values.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::BadShape("ragged rows".into()));
            }
            for (j, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => m.set(i, j, true),
                    _ => return Err(Error::BadParams(format!("entry {b} is not a bit"))),
                }
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.bits[i * self.words + j / 64] >> (j % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let w = &mut self.bits[i * self.words + j / 64];
        if v {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    /// `M x` over GF(2) for `n ≤ 64`, with column `j` at bit `j` of `x`
    /// and row `i` at bit `i` of the result.
    pub fn apply_u64(&self, x: u64) -> u64 {
        assert!(self.cols <= 64, "apply_u64 needs at most 64 columns");
        (0..self.rows).fold(0u64, |acc, i| {
            acc | (((self.bits[i] & x).count_ones() as u64) & 1) << i
        })
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) as u8).collect())
            .collect()
    }
}

/// Rank over GF(2) by Gaussian elimination.
pub fn gf2_rank(mat: &Gf2Matrix) -> usize {
    let mut rows: Vec<Vec<u64>> = (0..mat.rows).map(|i| mat.row(i).to_vec()).collect();
    let mut rank = 0;
    for col in 0..mat.cols {
        let (w, b) = (col / 64, 1u64 << (col % 64));
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] & b != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] & b != 0 {
                row.iter_mut().zip(&pivot_row).for_each(|(x, p)| *x ^= p);
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// `m × n` Toeplitz matrix with `entry(i, j) = seed[i - j + n - 1]`.
pub fn toeplitz_from_seed(seed: &[u8], m: usize, n: usize) -> Result<Gf2Matrix> {
    if m == 0 || n == 0 {
        return Err(Error::BadShape(format!("{m}x{n} Toeplitz matrix")));
    }
    let expected = m + n - 1;
    if seed.len() != expected {
        return Err(Error::BadSeedLength {
            expected,
            got: seed.len(),
        });
    }
    let mut mat = Gf2Matrix::zeros(m, n)?;
    for i in 0..m {
        for j in 0..n {
            match seed[i + n - 1 - j] {
                0 => {}
                1 => mat.set(i, j, true),
                b => return Err(Error::BadParams(format!("seed entry {b} is not a bit"))),
            }
        }
    }
    Ok(mat)
}

fn seed_from_bits(bits: u64, len: usize) -> Vec<u8> {
    (0..len).map(|t| ((bits >> t) & 1) as u8).collect()
}

/// Bits leaked by hashing a uniform input with `mat`: `m - rank`.
pub fn pac_leakage(mat: &Gf2Matrix) -> Result<usize> {
    if mat.rows > mat.cols {
        return Err(Error::BadShape(format!(
            "{}x{} hash expands its input",
            mat.rows, mat.cols
        )));
    }
    Ok(mat.rows - gf2_rank(mat))
}

/// Shannon entropy (bits) of `M x` for uniform `x`, by enumerating all `2^n` inputs.
pub fn output_entropy_bits(mat: &Gf2Matrix) -> Result<f64> {
    if mat.cols > 24 {
        return Err(Error::TooLarge(format!("2^{} inputs", mat.cols)));
    }
    let total = 1u64 << mat.cols;
    let mut hist: HashMap<u64, u64> = HashMap::new();
    for x in 0..total {
        *hist.entry(mat.apply_u64(x)).or_insert(0) += 1;
    }
    Ok(hist
        .values()
        .map(|&c| {
            let p = c as f64 / total as f64;
            -p * p.log2()
        })
        .sum())
}

/// How [`singular_fraction`] visits Toeplitz seeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedMode {
    Exhaustive,
    Sample { count: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularFraction {
    pub fraction: f64,
    pub singular: u64,
    pub total: u64,
    /// Binomial standard error of the estimate; zero for exhaustive counts.
    pub std_error: f64,
    pub mode: SeedMode,
}

/// Fraction of Toeplitz seeds whose matrix has rank below `min(m, n)`.
pub fn singular_fraction(m: usize, n: usize, mode: SeedMode) -> Result<SingularFraction> {
    if m == 0 || n == 0 || m > 64 || n > 64 {
        return Err(Error::BadShape(format!("{m}x{n} Toeplitz family")));
    }
    let len = m + n - 1;
    let full = m.min(n);
    let singular_seed =
        |bits: &[u8]| -> Result<bool> { Ok(gf2_rank(&toeplitz_from_seed(bits, m, n)?) < full) };
    let (singular, total) = match mode {
        SeedMode::Exhaustive => {
            if len > MAX_EXHAUSTIVE_SEED_BITS {
                return Err(Error::TooLarge(format!("2^{len} seeds")));
            }
            let total = 1u64 << len;
            let mut singular = 0;
            for s in 0..total {
                if singular_seed(&seed_from_bits(s, len))? {
                    singular += 1;
                }
            }
            (singular, total)
        }
        SeedMode::Sample { count, seed } => {
            if count == 0 {
                return Err(Error::BadParams("sample count must be positive".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut singular = 0;
            for _ in 0..count {
                let bits: Vec<u8> = (0..len).map(|_| rng.random_range(0..2u8)).collect();
                if singular_seed(&bits)? {
                    singular += 1;
                }
            }
            (singular, count)
        }
    };
    let fraction = singular as f64 / total as f64;
    let std_error = match mode {
        SeedMode::Exhaustive => 0.0,
        SeedMode::Sample { .. } => (fraction * (1.0 - fraction) / total as f64).sqrt(),
    };
    Ok(SingularFraction {
        fraction,
        singular,
        total,
        std_error,
        mode,
    })
}

/// Binary linear `[n, k]` code given by a full-rank `k × n` generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    generator: Gf2Matrix,
}

impl LinearCode {
    pub fn new(generator: Gf2Matrix) -> Result<Self> {
        let k = generator.rows();
        if k > generator.cols() {
            return Err(Error::BadShape(format!(
                "{}x{} generator",
                k,
                generator.cols()
            )));
        }
        let rank = gf2_rank(&generator);
        if rank != k {
            return Err(Error::BadParams(format!(
                "generator rank {rank} below k = {k}"
            )));
        }
        Ok(Self { generator })
    }

    /// Plain-text generator: one row of 0/1 characters per line. Blank lines
    /// and lines starting with `#` are skipped; whitespace inside rows is ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| match c {
                    '0' => Ok(0u8),
                    '1' => Ok(1u8),
                    other => Err(Error::ParseError(format!(
                        "line {}: unexpected {other:?}",
                        lineno + 1
                    ))),
                })
                .collect::<Result<Vec<u8>>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::ParseError("empty generator".into()));
        }
        Self::new(Gf2Matrix::from_rows(&rows).map_err(|e| Error::ParseError(e.to_string()))?)
    }

    pub fn to_text(&self) -> String {
        self.generator
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|b| char::from(b'0' + b)).collect::<String>() + "\n")
            .collect()
    }

    pub fn hamming74() -> Self {
        Self::from_static(&["1000110", "0100011", "0010111", "0001101"])
    }

    /// `[5, 2]` code with generator rows `10110`, `01011`.
    pub fn short_5_2() -> Self {
        Self::from_static(&["10110", "01011"])
    }

    pub fn repetition(n: usize) -> Result<Self> {
        Self::new(Gf2Matrix::from_rows(&[vec![1; n]])?)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(Gf2Matrix::identity(n)?)
    }

    fn from_static(rows: &[&str]) -> Self {
        Self::parse(&rows.join("\n")).expect("built-in generator is valid")
    }

    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &Gf2Matrix {
        &self.generator
    }

    /// Smallest Hamming weight of a nonzero codeword; `n + 1` for `k = 0`.
    pub fn min_distance(&self) -> usize {
        let rows = self.row_words();
        (1..1u32 << self.k())
            .map(|m| self.encode(&rows, m).count_ones() as usize)
            .min()
            .unwrap_or(self.n() + 1)
    }

    /// Generator rows as words with position 0 in the most significant bit.
    fn row_words(&self) -> Vec<u32> {
        let n = self.n();
        (0..self.k())
            .map(|i| {
                (0..n).fold(0u32, |acc, j| {
                    acc | (self.generator.get(i, j) as u32) << (n - 1 - j)
                })
            })
            .collect()
    }

    /// Codeword of message index `msg` (message bit 0 is the most significant).
    fn encode(&self, rows: &[u32], msg: u32) -> u32 {
        let k = self.k();
        (0..k)
            .filter(|&i| (msg >> (k - 1 - i)) & 1 == 1)
            .fold(0, |acc, i| acc ^ rows[i])
    }

    /// Parity-check rows (`n - k` of them) from the reduced row-echelon generator.
    fn parity_check_words(&self) -> Vec<u32> {
        let n = self.n();
        let pos = |j: usize| 1u32 << (n - 1 - j);
        let mut rows = self.row_words();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..n {
            let Some(p) = (r..rows.len()).find(|&i| rows[i] & pos(col) != 0) else {
                continue;
            };
            rows.swap(r, p);
            for i in 0..rows.len() {
                if i != r && rows[i] & pos(col) != 0 {
                    rows[i] ^= rows[r];
                }
            }
            pivots.push(col);
            r += 1;
        }
        (0..n)
            .filter(|c| !pivots.contains(c))
            .map(|c| {
                pivots
                    .iter()
                    .zip(&rows)
                    .filter(|(_, row)| *row & pos(c) != 0)
                    .fold(pos(c), |acc, (&pc, _)| acc | pos(pc))
            })
            .collect()
    }
}

/// Decoding rule used by [`decision_region_census`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecodingRule {
    /// Coset-leader decoding; the leader of each coset is its lowest-weight,
    /// then lowest-index, word.
    Syndrome,
    /// Nearest codeword; ties go to the lowest message index.
    MinDistanceFirstTiebreak,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionCensus {
    /// `(message, number of received words decoded to it)` in message order.
    pub region_sizes: Vec<(String, u64)>,
    /// Message distribution induced by uniform received words.
    pub message_bias: ProbDist,
    /// Variational distance of `message_bias` from uniform.
    pub bias_delta: f64,
}

impl RegionCensus {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["message", "region_size"])?;
        for (m, size) in &self.region_sizes {
            w.write_record([m.as_str(), &size.to_string()])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Csv(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Decode every received word of length `n` and count decision-region sizes.
pub fn decision_region_census(code: &LinearCode, rule: DecodingRule) -> Result<RegionCensus> {
    let (n, k) = (code.n(), code.k());
    if n > MAX_CENSUS_BITS {
        return Err(Error::TooLarge(format!("2^{n} received words")));
    }
    let rows = code.row_words();
    let codewords: Vec<u32> = (0..1u32 << k).map(|m| code.encode(&rows, m)).collect();
    let mut counts = vec![0u64; 1 << k];
    match rule {
        DecodingRule::MinDistanceFirstTiebreak => {
            for r in 0..1u32 << n {
                let mut best = (u32::MAX, 0usize);
                for (m, &c) in codewords.iter().enumerate() {
                    let d = (r ^ c).count_ones();
                    if d < best.0 {
                        best = (d, m);
                    }
                }
                counts[best.1] += 1;
            }
        }
        DecodingRule::Syndrome => {
            let checks = code.parity_check_words();
            let syndrome = |w: u32| {
                checks.iter().fold(0usize, |acc, h| {
                    (acc << 1) | ((h & w).count_ones() as usize & 1)
                })
            };
            let mut by_weight: Vec<u32> = (0..1u32 << n).collect();
            by_weight.sort_by_key(|&w| (w.count_ones(), w));
            let mut leaders: Vec<Option<u32>> = vec![None; 1 << checks.len()];
            for w in by_weight {
                let slot = &mut leaders[syndrome(w)];
                if slot.is_none() {
                    *slot = Some(w);
                }
            }
            let message_of: HashMap<u32, usize> =
                codewords.iter().enumerate().map(|(m, &c)| (c, m)).collect();
            for r in 0..1u32 << n {
                let leader = leaders[syndrome(r)].expect("every syndrome has a leader");
                counts[message_of[&(r ^ leader)]] += 1;
            }
        }
    }
    let labels = crate::ensembles::key_labels(k);
    let total = (1u64 << n) as f64;
    let message_bias = ProbDist::new(
        labels.clone(),
        counts.iter().map(|&c| c as f64 / total).collect(),
    )?;
    let uniform = ProbDist::uniform(labels.clone())?;
    Ok(RegionCensus {
        bias_delta: variational_distance(&message_bias, &uniform),
        region_sizes: labels.into_iter().zip(counts).collect(),
        message_bias,
    })
}

/// Sphere-packing equality `Σ_{i ≤ t} C(n, i) = 2^(n-k)`.
pub fn is_perfect_code(code: &LinearCode, t: usize) -> bool {
    let n = code.n() as u128;
    let mut ball = 0u128;
    let mut binom = 1u128;
    for i in 0..=(t as u128).min(n) {
        ball += binom;
        binom = binom * (n - i) / (i + 1);
    }
    ball == 1u128 << (code.n() - code.k())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&str]) -> Gf2Matrix {
        let rows: Vec<Vec<u8>> = rows
            .iter()
            .map(|r| r.bytes().map(|b| b - b'0').collect())
            .collect();
        Gf2Matrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn toeplitz_examples() {
        let z = toeplitz_from_seed(&[0; 5], 2, 4).unwrap();
        assert_eq!(z, Gf2Matrix::zeros(2, 4).unwrap());

        let mut seed = vec![0u8; 5];
        seed[2] = 1; // main diagonal position n-1
        assert_eq!(
            toeplitz_from_seed(&seed, 3, 3).unwrap(),
            Gf2Matrix::identity(3).unwrap()
        );

        // 2x2: seed = (upper, diag, lower)
        let mut members = std::collections::HashSet::new();
        for s in 0..8u64 {
            let t = toeplitz_from_seed(&seed_from_bits(s, 3), 2, 2).unwrap();
            assert_eq!(t.get(0, 0), t.get(1, 1));
            members.insert(t);
        }
        assert_eq!(members.len(), 8);

        let t = toeplitz_from_seed(&[1, 0, 1, 1], 2, 3).unwrap();
        assert_eq!(t.to_rows(), vec![vec![1, 0, 1], vec![1, 1, 0]]);

        assert!(matches!(
            toeplitz_from_seed(&[0; 4], 3, 3),
            Err(Error::BadSeedLength {
                expected: 5,
                got: 4
            })
        ));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(gf2_rank(&Gf2Matrix::identity(5).unwrap()), 5);
        assert_eq!(gf2_rank(&Gf2Matrix::zeros(3, 4).unwrap()), 0);
        assert_eq!(gf2_rank(&mat(&["11", "11"])), 1);
        assert_eq!(gf2_rank(&mat(&["110", "011", "101"])), 2);
        let wide = Gf2Matrix::identity(70).unwrap();
        assert_eq!(gf2_rank(&wide), 70);
    }

    #[test]
    fn leakage_examples() {
        assert_eq!(pac_leakage(&mat(&["100", "010"])).unwrap(), 0);
        let rank1 = mat(&["101", "101"]);
        assert_eq!(pac_leakage(&rank1).unwrap(), 1);
        assert!((output_entropy_bits(&rank1).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(pac_leakage(&Gf2Matrix::zeros(2, 3).unwrap()).unwrap(), 2);
        assert!(matches!(
            pac_leakage(&Gf2Matrix::zeros(3, 2).unwrap()),
            Err(Error::BadShape(_))
        ));
    }

    #[test]
    fn singular_fraction_examples() {
        let f = singular_fraction(2, 2, SeedMode::Exhaustive).unwrap();
        assert_eq!((f.singular, f.total), (4, 8));
        assert_eq!(f.fraction, 0.5);
        assert_eq!(
            singular_fraction(1, 1, SeedMode::Exhaustive)
                .unwrap()
                .fraction,
            0.5
        );

        let exact = singular_fraction(4, 4, SeedMode::Exhaustive).unwrap();
        let est = singular_fraction(
            4,
            4,
            SeedMode::Sample {
                count: 20_000,
                seed: 1,
            },
        )
        .unwrap();
        assert!((exact.fraction - est.fraction).abs() <= 3.0 * est.std_error);
        let again = singular_fraction(
            4,
            4,
            SeedMode::Sample {
                count: 20_000,
                seed: 1,
            },
        )
        .unwrap();
        assert_eq!(est, again);

        assert!(matches!(
            singular_fraction(13, 13, SeedMode::Exhaustive),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn census_examples() {
        let c = decision_region_census(&LinearCode::hamming74(), DecodingRule::Syndrome).unwrap();
        assert_eq!(c.region_sizes.len(), 16);
        assert!(c.region_sizes.iter().all(|(_, s)| *s == 8));
        assert_eq!(c.bias_delta, 0.0);

        let c = decision_region_census(
            &LinearCode::short_5_2(),
            DecodingRule::MinDistanceFirstTiebreak,
        )
        .unwrap();
        let sizes: Vec<u64> = c.region_sizes.iter().map(|(_, s)| *s).collect();
        assert_eq!(sizes.iter().sum::<u64>(), 32);
        assert!(sizes.iter().any(|&s| s != 8));
        assert!(c.bias_delta > 0.0);

        let c = decision_region_census(
            &LinearCode::identity(4).unwrap(),
            DecodingRule::MinDistanceFirstTiebreak,
        )
        .unwrap();
        assert!(c.region_sizes.iter().all(|(_, s)| *s == 1));
        assert_eq!(c.bias_delta, 0.0);

        let csv = c.to_csv().unwrap();
        assert!(csv.starts_with("message,region_size\n0000,1\n"));
    }

    #[test]
    fn census_rules_agree_on_hamming() {
        let a = decision_region_census(&LinearCode::hamming74(), DecodingRule::Syndrome).unwrap();
        let b = decision_region_census(
            &LinearCode::hamming74(),
            DecodingRule::MinDistanceFirstTiebreak,
        )
        .unwrap();
        assert_eq!(a.region_sizes, b.region_sizes);
    }

    #[test]
    fn parity_check_annihilates_codewords() {
        for code in [
            LinearCode::hamming74(),
            LinearCode::short_5_2(),
            LinearCode::repetition(5).unwrap(),
        ] {
            let checks = code.parity_check_words();
            assert_eq!(checks.len(), code.n() - code.k());
            let rows = code.row_words();
            for m in 0..1u32 << code.k() {
                let c = code.encode(&rows, m);
                assert!(checks.iter().all(|h| (h & c).count_ones() % 2 == 0));
            }
        }
    }

    #[test]
    fn min_distance_examples() {
        assert_eq!(LinearCode::hamming74().min_distance(), 3);
        assert_eq!(LinearCode::short_5_2().min_distance(), 3);
        assert_eq!(LinearCode::repetition(5).unwrap().min_distance(), 5);
        assert_eq!(LinearCode::identity(4).unwrap().min_distance(), 1);
    }

    #[test]
    fn perfect_code_examples() {
        assert!(is_perfect_code(&LinearCode::hamming74(), 1));
        assert!(!is_perfect_code(&LinearCode::short_5_2(), 1));
        assert!(is_perfect_code(&LinearCode::repetition(3).unwrap(), 1));
    }

    #[test]
    fn code_parsing() {
        let code = LinearCode::parse("# comment\n1 0 1 1 0\n\n01011\n").unwrap();
        assert_eq!(code, LinearCode::short_5_2());
        assert_eq!(LinearCode::parse(&code.to_text()).unwrap(), code);
        assert!(matches!(
            LinearCode::parse("10x"),
            Err(Error::ParseError(_))
        ));
        assert!(LinearCode::parse("110\n110\n").is_err());
        assert!(LinearCode::parse("").is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn leakage_matches_entropy_deficit(m in 1usize..6, extra in 0usize..5, seed_bits in any::<u64>()) {
            let n = m + extra;
            let seed = seed_from_bits(seed_bits, m + n - 1);
            let t = toeplitz_from_seed(&seed, m, n).unwrap();
            let h = output_entropy_bits(&t).unwrap();
            prop_assert!((m as f64 - h - pac_leakage(&t).unwrap() as f64).abs() < 1e-12);
        }

        #[test]
        fn region_sizes_sum(rows in proptest::collection::vec(0u32..(1 << 7), 1..4)) {
            let g: Vec<Vec<u8>> = rows.iter().map(|r| (0..7).map(|j| ((r >> j) & 1) as u8).collect()).collect();
            let Ok(code) = LinearCode::new(Gf2Matrix::from_rows(&g).unwrap()) else { return Ok(()) };
            for rule in [DecodingRule::Syndrome, DecodingRule::MinDistanceFirstTiebreak] {
                let c = decision_region_census(&code, rule).unwrap();
                prop_assert_eq!(c.region_sizes.iter().map(|(_, s)| s).sum::<u64>(), 128);
            }
        }
    }
}
