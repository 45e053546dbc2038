//! Jenks natural breaks via exact dynamic programming over contiguous
//! partitions of sorted data, and the GVF-driven choice of class count.

use serde::Serialize;

use crate::error::{Error, Result};

/// Prefix sums of mean-centred values for O(1) squared-deviation queries.
struct Deviations {
    s1: Vec<f64>,
    s2: Vec<f64>,
}

impl Deviations {
    fn new(values: &[f64]) -> Self {
        let mean = values.iter().sum::<f64>() / values.len().max(1) as f64;
        let mut s1 = Vec::with_capacity(values.len() + 1);
        let mut s2 = Vec::with_capacity(values.len() + 1);
        s1.push(0.0);
        s2.push(0.0);
        for &v in values {
            let c = v - mean;
            s1.push(s1.last().unwrap() + c);
            s2.push(s2.last().unwrap() + c * c);
        }
        Self { s1, s2 }
    }

    /// Sum of squared deviations from the class mean over `values[i..j]`.
    fn ssd(&self, i: usize, j: usize) -> f64 {
        let n = (j - i) as f64;
        let s = self.s1[j] - self.s1[i];
        (self.s2[j] - self.s2[i] - s * s / n).max(0.0)
    }
}

fn total_ssd(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    values.iter().map(|v| (v - mean).powi(2)).sum()
}

fn check_sorted(values: &[f64]) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParams("values must be finite".into()));
    }
    if values.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParams(
            "values must be sorted ascending".into(),
        ));
    }
    Ok(())
}

/// Splits sorted `values` into `k` contiguous classes minimizing the sum of
/// squared deviations from class means.
///
/// Returns the `k - 1` indices at which classes 2..=k start. Among optimal
/// partitions the lexicographically smallest break vector is returned.
pub fn jenks_breaks(values: &[f64], k: usize) -> Result<Vec<usize>> {
    check_sorted(values)?;
    let n = values.len();
    if k == 0 || k > n {
        return Err(Error::NotEnoughValues {
            requested: k,
            available: n,
        });
    }
    let dev = Deviations::new(values);

    // best[m - 1][i]: least cost of splitting values[i..] into m classes.
    let mut best: Vec<Vec<f64>> = Vec::with_capacity(k);
    best.push((0..n).map(|i| dev.ssd(i, n)).collect());
    for m in 2..=k {
        let prev = &best[m - 2];
        let mut row = vec![f64::INFINITY; n];
        // Valid starts leave at least m values; cut points j keep m - 1 after.
        fill_row(&dev, prev, &mut row, 0, n - m, 1, n - m + 1);
        best.push(row);
    }

    let tol = 1e-10 * dev.ssd(0, n) + f64::MIN_POSITIVE;
    let mut breaks = Vec::with_capacity(k - 1);
    let mut i = 0;
    for m in (2..=k).rev() {
        let target = best[m - 1][i];
        let next = &best[m - 2];
        let j = (i + 1..=n - m + 1)
            .find(|&j| dev.ssd(i, j) + next[j] <= target + tol)
            .expect("optimal cut exists");
        breaks.push(j);
        i = j;
    }
    Ok(breaks)
}

/// Divide-and-conquer fill of one DP row; the optimal cut is monotone in the
/// start index because the squared-deviation cost is Monge.
fn fill_row(
    dev: &Deviations,
    prev: &[f64],
    row: &mut [f64],
    lo: usize,
    hi: usize,
    cut_lo: usize,
    cut_hi: usize,
) {
    if lo > hi {
        return;
    }
    let mid = lo + (hi - lo) / 2;
    let mut best = f64::INFINITY;
    let first = cut_lo.max(mid + 1);
    let mut arg = first;
    for (j, tail) in prev.iter().enumerate().take(cut_hi + 1).skip(first) {
        let c = dev.ssd(mid, j) + tail;
        if c < best {
            best = c;
            arg = j;
        }
    }
    row[mid] = best;
    if mid > lo {
        fill_row(dev, prev, row, lo, mid - 1, cut_lo, arg);
    }
    fill_row(dev, prev, row, mid + 1, hi, arg, cut_hi);
}

/// Sum of squared deviations from class means for the given partition.
pub fn sdcm(values: &[f64], breaks: &[usize]) -> f64 {
    let mut bounds = Vec::with_capacity(breaks.len() + 2);
    bounds.push(0);
    bounds.extend_from_slice(breaks);
    bounds.push(values.len());
    bounds
        .windows(2)
        .map(|w| total_ssd(&values[w[0]..w[1]]))
        .sum()
}

/// Goodness of variance fit: `(SDAM - SDCM) / SDAM`, defined as 1 when all
/// values are equal.
pub fn gvf(values: &[f64], breaks: &[usize]) -> f64 {
    let sdam = total_ssd(values);
    if sdam == 0.0 {
        return 1.0;
    }
    ((sdam - sdcm(values, breaks)) / sdam).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValueClass {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
    pub share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UserClassification {
    pub k: usize,
    pub gvf: f64,
    /// Upper bound of every class but the last.
    pub break_values: Vec<f64>,
    pub classes: Vec<ValueClass>,
}

/// Picks the smallest class count whose Jenks partition reaches `threshold` GVF.
pub fn classify_users(values: &[f64], threshold: f64) -> Result<UserClassification> {
    if values.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut sorted = values.to_vec();
    if sorted.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParams("values must be finite".into()));
    }
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();

    let mut k = 1;
    let (breaks, fit) = loop {
        let breaks = jenks_breaks(&sorted, k)?;
        let fit = gvf(&sorted, &breaks);
        if fit >= threshold || k == n {
            break (breaks, fit);
        }
        k += 1;
    };

    let mut bounds = vec![0];
    bounds.extend_from_slice(&breaks);
    bounds.push(n);
    let classes = bounds
        .windows(2)
        .map(|w| ValueClass {
            lower: sorted[w[0]],
            upper: sorted[w[1] - 1],
            count: w[1] - w[0],
            share: (w[1] - w[0]) as f64 / n as f64,
        })
        .collect();
    Ok(UserClassification {
        k,
        gvf: fit,
        break_values: breaks.iter().map(|&b| sorted[b - 1]).collect(),
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_plateaus() {
        let v = [1.0, 1.0, 1.0, 10.0, 10.0, 10.0, 100.0, 100.0, 100.0];
        let b = jenks_breaks(&v, 3).unwrap();
        assert_eq!(b, [3, 6]);
        assert_eq!(gvf(&v, &b), 1.0);
    }

    #[test]
    fn single_class() {
        let v = [1.0, 2.0, 4.0];
        let b = jenks_breaks(&v, 1).unwrap();
        assert!(b.is_empty());
        assert_eq!(gvf(&v, &b), 0.0);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            jenks_breaks(&[1.0, 2.0], 3),
            Err(Error::NotEnoughValues {
                requested: 3,
                available: 2
            })
        ));
        assert!(jenks_breaks(&[2.0, 1.0], 1).is_err());
        assert!(jenks_breaks(&[1.0, f64::NAN], 1).is_err());
        assert!(classify_users(&[], 0.7).is_err());
    }

    #[test]
    fn ties_pick_smallest_breaks() {
        // Every 2-class split of a constant array costs zero.
        assert_eq!(jenks_breaks(&[5.0; 4], 2).unwrap(), [1]);
        assert_eq!(jenks_breaks(&[5.0; 4], 3).unwrap(), [1, 2]);
    }

    #[test]
    fn constant_values_need_one_class() {
        let c = classify_users(&[3.0; 10], 0.7).unwrap();
        assert_eq!(c.k, 1);
        assert_eq!(c.gvf, 1.0);
        assert_eq!(c.classes.len(), 1);
        assert_eq!(c.classes[0].share, 1.0);
    }

    #[test]
    fn classification_report() {
        let v = [100.0, 1.0, 10.0, 1.0, 10.0, 100.0, 1.0, 10.0];
        // Two classes already explain >99% of the variance.
        assert_eq!(classify_users(&v, 0.7).unwrap().k, 2);
        let c = classify_users(&v, 0.999).unwrap();
        assert_eq!(c.k, 3);
        assert_eq!(c.break_values, [1.0, 10.0]);
        let counts: Vec<_> = c.classes.iter().map(|c| c.count).collect();
        assert_eq!(counts, [3, 3, 2]);
        assert_eq!(c.classes[2].share, 0.25);
    }
}
