//! Lempel-Ziv match-length estimate of the entropy rate of a symbol sequence.
//!
//! For each position `i` the estimator takes the length `l_i` of the longest
//! prefix of `x[i..]` that also starts at some earlier position (matches may
//! overlap `i`). The estimate is `n log2(n) / sum(l_i + 1)` bits per symbol.
//!
//! The scan is the plain cubic one. Inputs are summary sequences, usually a
//! few dozen symbols long.

use crate::types::{LocationSymbol, SummaryTrajectory, SymbolicTrajectory};

/// Longest earlier match length at every position; the first is always 0.
pub fn match_lengths<T: PartialEq>(x: &[T]) -> Vec<usize> {
    let n = x.len();
    (0..n)
        .map(|i| {
            (0..i)
                .map(|j| {
                    let mut k = 0;
                    while i + k < n && x[j + k] == x[i + k] {
                        k += 1;
                    }
                    k
                })
                .max()
                .unwrap_or(0)
        })
        .collect()
}

/// Entropy-rate estimate in bits per symbol; 0 for sequences shorter than 2.
pub fn entropy_rate<T: PartialEq>(x: &[T]) -> f64 {
    let n = x.len();
    if n <= 1 {
        return 0.0;
    }
    let denom: usize = n + match_lengths(x).iter().sum::<usize>();
    let n = n as f64;
    n * n.log2() / denom as f64
}

/// Entropy rate of the sequence of unit locations.
pub fn summary_entropy_rate(summary: &SummaryTrajectory) -> f64 {
    let seq: Vec<&LocationSymbol> = summary.locations().collect();
    entropy_rate(&seq)
}

/// Entropy rate of the raw location sequence.
pub fn trajectory_entropy_rate(t: &SymbolicTrajectory) -> f64 {
    let seq: Vec<&LocationSymbol> = t.symbols().collect();
    entropy_rate(&seq)
}
