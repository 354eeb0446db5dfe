//! Deterministic classical strategies and the brute-force oracle for
//! classical bounds.
//!
//! A deterministic strategy sends one of `d` symbols per preparation and
//! decodes each measurement with a fixed function of the symbol. Mixed
//! classical strategies (shared randomness) are convex combinations of
//! these, so maximizing over deterministic strategies gives the classical
//! bound of any of the (convex) witnesses here.

use crate::error::{Error, Result};
use crate::quantum::{pair_index, pairs};
use crate::witnesses::{evaluate, ProbabilityTable, WitnessKind};

/// Upper limit on the number of canonical encodings visited by
/// [`enumerate_max`].
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

/// Number of canonical encodings of `n` preparations into at most `d`
/// symbols: `Σ_{k ≤ d} S(n, k)` (Stirling numbers of the second kind),
/// saturating at `u128::MAX`.
pub fn canonical_encoding_count(n: usize, d: usize) -> u128 {
    let kmax = d.min(n);
    // row[k] = S(i, k)
    let mut row = vec![0u128; kmax + 1];
    row[0] = 1;
    for _ in 0..n {
        for k in (1..=kmax).rev() {
            row[k] = (k as u128).saturating_mul(row[k]).saturating_add(row[k - 1]);
        }
        row[0] = 0;
    }
    row[1..].iter().fold(0u128, |acc, v| acc.saturating_add(*v))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicStrategy {
    pub n: usize,
    pub d: usize,
    /// Symbol in `1..=d` sent for each preparation `x = 1..=N`.
    pub encoding: Vec<usize>,
    /// `decoding[y−1][s−1]` is the outcome `b` (1-based) announced by
    /// measurement `y` on symbol `s`.
    pub decoding: Vec<Vec<usize>>,
}

impl DeterministicStrategy {
    /// Strategy with the best per-measurement decoding for a fixed encoding.
    ///
    /// Pair measurements fire outcome 1 exactly on the symbol of the larger
    /// preparation label when the two symbols differ. The guessing
    /// measurement maps every symbol to the smallest preparation that sends
    /// it (unused symbols go to preparation 1).
    pub fn with_optimal_decoding(kind: WitnessKind, d: usize, encoding: Vec<usize>) -> Result<Self> {
        let n = encoding.len();
        check_encoding(n, d, &encoding)?;
        let decoding = match kind {
            WitnessKind::Guessing => {
                let mut row = vec![1; d];
                for s in 1..=d {
                    if let Some(pos) = encoding.iter().position(|&e| e == s) {
                        row[s - 1] = pos + 1;
                    }
                }
                vec![row]
            }
            WitnessKind::Quadratic | WitnessKind::Linear => pairs(n)
                .map(|(x, xp)| {
                    let (sx, sxp) = (encoding[x - 1], encoding[xp - 1]);
                    (1..=d).map(|s| if sx != sxp && s == sx { 1 } else { 2 }).collect()
                })
                .collect(),
        };
        Ok(Self {
            n,
            d,
            encoding,
            decoding,
        })
    }
}

fn check_encoding(n: usize, d: usize, encoding: &[usize]) -> Result<()> {
    if d == 0 {
        return Err(Error::BadArgument("alphabet size d must be positive".into()));
    }
    if encoding.len() != n {
        return Err(Error::BadArgument(format!(
            "encoding has length {}, expected {n}",
            encoding.len()
        )));
    }
    if let Some((x, s)) = encoding.iter().enumerate().find(|(_, &s)| s == 0 || s > d) {
        return Err(Error::BadArgument(format!(
            "preparation {} sends symbol {s} outside 1..={d}",
            x + 1
        )));
    }
    Ok(())
}

/// The deterministic table `P(b|x,y) = [decoding(y, encoding(x)) = b]`.
pub fn strategy_table(s: &DeterministicStrategy, kind: WitnessKind) -> Result<ProbabilityTable> {
    check_encoding(s.n, s.d, &s.encoding)?;
    let m = kind.measurements(s.n);
    let k = kind.outcomes(s.n);
    for y in 1..=m {
        let row = s.decoding.get(y - 1);
        for sym in 1..=s.d {
            let b = row.and_then(|r| r.get(sym - 1)).ok_or(Error::IncompleteDecoding {
                measurement: y,
                symbol: sym,
            })?;
            if *b == 0 || *b > k {
                return Err(Error::BadArgument(format!(
                    "measurement {y} maps symbol {sym} to outcome {b} outside 1..={k}"
                )));
            }
        }
    }
    let mut p = vec![0.0; s.n * m * k];
    for x in 1..=s.n {
        let sym = s.encoding[x - 1];
        for y in 1..=m {
            let b = s.decoding[y - 1][sym - 1];
            p[((x - 1) * m + (y - 1)) * k + (b - 1)] = 1.0;
        }
    }
    ProbabilityTable::new(s.n, m, k, p)
}

/// Exact maximum of the witness over deterministic `d`-symbol strategies.
///
/// Only canonical encodings are visited (first symbol 1, each new symbol one
/// more than the largest seen so far), since relabeling symbols leaves every
/// witness unchanged. Among maximizers the lexicographically smallest
/// canonical encoding wins.
pub fn enumerate_max(kind: WitnessKind, n: usize, d: usize) -> Result<(f64, DeterministicStrategy)> {
    if n == 0 || d == 0 {
        return Err(Error::BadArgument(format!("need N ≥ 1 and d ≥ 1, got N={n}, d={d}")));
    }
    if canonical_encoding_count(n, d) > ENUMERATION_LIMIT as u128 {
        return Err(Error::TooLarge {
            n,
            d,
            limit: ENUMERATION_LIMIT,
        });
    }

    let mut search = Search {
        kind,
        n,
        d,
        current: Vec::with_capacity(n),
        group_sizes: vec![0; d.min(n)],
        best_score: None,
        best: Vec::new(),
    };
    search.extend(0);

    let strategy = DeterministicStrategy::with_optimal_decoding(kind, d, search.best)?;
    let value = evaluate(kind, &strategy_table(&strategy, kind)?)?;
    Ok((value, strategy))
}

struct Search {
    kind: WitnessKind,
    n: usize,
    d: usize,
    current: Vec<usize>,
    group_sizes: Vec<usize>,
    best_score: Option<usize>,
    best: Vec<usize>,
}

impl Search {
    fn extend(&mut self, used: usize) {
        if self.current.len() == self.n {
            let score = self.score(used);
            if self.best_score.is_none_or(|b| score > b) {
                self.best_score = Some(score);
                self.best = self.current.clone();
            }
            return;
        }
        let limit = (used + 1).min(self.d);
        for sym in 1..=limit {
            self.current.push(sym);
            self.group_sizes[sym - 1] += 1;
            self.extend(used.max(sym));
            self.group_sizes[sym - 1] -= 1;
            self.current.pop();
        }
    }

    /// Integer objective under optimal decoding: distinct symbols for the
    /// guessing witness, pairs with distinct symbols for the pair witnesses.
    fn score(&self, used: usize) -> usize {
        match self.kind {
            WitnessKind::Guessing => used,
            WitnessKind::Quadratic | WitnessKind::Linear => {
                let same: usize = self.group_sizes.iter().map(|g| g * g.saturating_sub(1) / 2).sum();
                self.n * (self.n - 1) / 2 - same
            }
        }
    }
}

/// `N(N−1)/2 − ⌊N/d⌋·(N − (d/2)(⌊N/d⌋ + 1))`: pairs separated by the most
/// balanced split of `N` preparations into `d` messages.
pub fn balanced_partition_value(n: usize, d: usize) -> Result<f64> {
    if n < 2 || d < 1 {
        return Err(Error::BadArgument(format!("need N ≥ 2 and d ≥ 1, got N={n}, d={d}")));
    }
    let (nf, df) = (n as f64, d as f64);
    let q = (n / d) as f64;
    Ok(nf * (nf - 1.0) / 2.0 - q * (nf - df / 2.0 * (q + 1.0)))
}

/// Group sizes of an encoding, indexed by symbol.
pub fn partition_sizes(s: &DeterministicStrategy) -> Vec<usize> {
    let mut sizes = vec![0; s.d];
    for &sym in &s.encoding {
        sizes[sym - 1] += 1;
    }
    sizes
}

/// Per-pair differences `P(1|x) − P(1|x')` of a pair strategy, in pair order.
pub fn pair_differences(s: &DeterministicStrategy) -> Vec<i32> {
    pairs(s.n)
        .map(|(x, xp)| {
            let row = &s.decoding[pair_index(x, xp)];
            let fires = |p: usize| i32::from(row[s.encoding[p - 1] - 1] == 1);
            fires(x) - fires(xp)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witnesses::{eval_guessing, eval_quadratic};

    #[test]
    fn two_preparations_distinct_symbols() {
        let s = DeterministicStrategy {
            n: 2,
            d: 2,
            encoding: vec![2, 1],
            decoding: vec![vec![1, 2]],
        };
        // pair (2,1): preparation 2 sends symbol 1 and fires, preparation 1 does not
        let t = strategy_table(&s, WitnessKind::Quadratic).unwrap();
        assert_eq!(t.pair_differences(), vec![1.0]);
        assert_eq!(eval_quadratic(&t).unwrap(), 1.0);
    }

    #[test]
    fn single_symbol_carries_nothing() {
        let s = DeterministicStrategy::with_optimal_decoding(WitnessKind::Quadratic, 1, vec![1, 1]).unwrap();
        let t = strategy_table(&s, WitnessKind::Quadratic).unwrap();
        assert_eq!(eval_quadratic(&t).unwrap(), 0.0);
    }

    #[test]
    fn balanced_four_into_two() {
        let s = DeterministicStrategy::with_optimal_decoding(WitnessKind::Quadratic, 2, vec![1, 1, 2, 2]).unwrap();
        let t = strategy_table(&s, WitnessKind::Quadratic).unwrap();
        assert_eq!(eval_quadratic(&t).unwrap(), 4.0);
        assert_eq!(balanced_partition_value(4, 2).unwrap(), 4.0);
    }

    #[test]
    fn incomplete_decoding_is_reported() {
        let s = DeterministicStrategy {
            n: 3,
            d: 2,
            encoding: vec![1, 2, 1],
            decoding: vec![vec![1, 2], vec![1]],
        };
        assert_eq!(
            strategy_table(&s, WitnessKind::Linear),
            Err(Error::IncompleteDecoding {
                measurement: 2,
                symbol: 2
            })
        );
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_max(WitnessKind::Quadratic, 7, 2).unwrap().0, 12.0);
        for n in 2..=6 {
            assert_eq!(
                enumerate_max(WitnessKind::Quadratic, n, n).unwrap().0,
                (n * (n - 1) / 2) as f64
            );
        }
        assert_eq!(enumerate_max(WitnessKind::Linear, 3, 2).unwrap().0, 2.0);
    }

    #[test]
    fn canonical_tie_break() {
        let (v, s) = enumerate_max(WitnessKind::Quadratic, 7, 3).unwrap();
        assert_eq!(v, 16.0);
        assert_eq!(s.encoding, vec![1, 1, 1, 2, 2, 3, 3]);
    }

    #[test]
    fn guessing_enumeration() {
        let (v, s) = enumerate_max(WitnessKind::Guessing, 5, 2).unwrap();
        assert_eq!(v, 0.4);
        let t = strategy_table(&s, WitnessKind::Guessing).unwrap();
        assert_eq!(eval_guessing(&t).unwrap(), 0.4);
    }

    #[test]
    fn guard_trips() {
        assert!(matches!(
            enumerate_max(WitnessKind::Quadratic, 20, 4),
            Err(Error::TooLarge { n: 20, d: 4, .. })
        ));
    }

    #[test]
    fn canonical_counts() {
        // Bell numbers when d ≥ N
        assert_eq!(canonical_encoding_count(5, 5), 52);
        assert_eq!(canonical_encoding_count(8, 8), 4140);
        assert_eq!(canonical_encoding_count(8, 20), 4140);
        // S(4,1) + S(4,2) = 1 + 7
        assert_eq!(canonical_encoding_count(4, 2), 8);
        assert_eq!(canonical_encoding_count(3, 1), 1);
    }

    #[test]
    fn balanced_partition_examples() {
        assert_eq!(balanced_partition_value(7, 3).unwrap(), 16.0);
        assert_eq!(balanced_partition_value(6, 3).unwrap(), 12.0);
        for n in 2..=9 {
            assert_eq!(balanced_partition_value(n, 1).unwrap(), 0.0);
        }
        assert!(balanced_partition_value(1, 1).is_err());
        assert!(balanced_partition_value(4, 0).is_err());
    }

    #[test]
    fn optimal_decoding_differences_are_nonnegative() {
        let s = DeterministicStrategy::with_optimal_decoding(WitnessKind::Linear, 3, vec![1, 2, 1, 3]).unwrap();
        let diffs = pair_differences(&s);
        assert!(diffs.iter().all(|&d| d == 0 || d == 1));
        assert_eq!(diffs.iter().sum::<i32>(), 5);
    }
}
