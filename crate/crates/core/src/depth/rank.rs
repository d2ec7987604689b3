//! Depth-based ranks with random tie-breaking, and tabular export.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::DepthVector;
use crate::error::Result;
use crate::fda::FunctionalDataset;

/// Ranks `1..=N`, rank 1 for the smallest score.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankVector {
    pub ranks: Vec<usize>,
    /// Number of observations that were part of an exact tie.
    pub tie_breaks_applied: usize,
}

/// Ascending ranks of `scores`; exact ties are ordered by a uniform
/// shuffle drawn from `seed`.
pub fn ranks_from_scores(scores: &[f64], seed: u64) -> RankVector {
    let n = scores.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(a.cmp(&b)));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ties = 0;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        if j - i > 1 {
            order[i..j].shuffle(&mut rng);
            ties += j - i;
        }
        i = j;
    }
    let mut ranks = vec![0; n];
    for (r, &k) in order.iter().enumerate() {
        ranks[k] = r + 1;
    }
    RankVector {
        ranks,
        tie_breaks_applied: ties,
    }
}

/// One row of a depth export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthRow {
    /// One-based observation index.
    pub index: usize,
    /// One-based group label.
    pub group: usize,
    pub depth: f64,
    pub rank: usize,
}

pub fn depth_table(ds: &FunctionalDataset, depth: &DepthVector, ranks: &RankVector) -> Vec<DepthRow> {
    (0..ds.n())
        .map(|i| DepthRow {
            index: i + 1,
            group: ds.groups()[i] + 1,
            depth: depth.values[i],
            rank: ranks.ranks[i],
        })
        .collect()
}

/// Writes rows as CSV with header `index,group,depth,rank`.
pub fn write_depth_csv<W: Write>(out: W, rows: &[DepthRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn simple_sort() {
        let r = ranks_from_scores(&[0.1, 0.4, 0.2, 0.3], 0);
        assert_eq!(r.ranks, vec![1, 4, 2, 3]);
        assert_eq!(r.tie_breaks_applied, 0);
    }

    #[test]
    fn all_tied_is_uniform() {
        let n = 5;
        let reps = 10_000;
        let mut sums = vec![0.0; n];
        let mut seen = std::collections::HashSet::new();
        for s in 0..reps {
            let r = ranks_from_scores(&vec![1.0; n], s);
            assert_eq!(r.tie_breaks_applied, n);
            for (a, &b) in sums.iter_mut().zip(&r.ranks) {
                *a += b as f64;
            }
            seen.insert(r.ranks);
        }
        assert_eq!(seen.len(), 120);
        let var = (n * n - 1) as f64 / 12.0;
        let se = (var / reps as f64).sqrt();
        for s in sums {
            assert!((s / reps as f64 - 3.0).abs() < 3.0 * se);
        }
    }

    #[test]
    fn partial_ties_keep_other_ranks() {
        let r = ranks_from_scores(&[2.0, 1.0, 2.0, 0.0], 7);
        assert_eq!(r.ranks[1], 2);
        assert_eq!(r.ranks[3], 1);
        let mut t = vec![r.ranks[0], r.ranks[2]];
        t.sort();
        assert_eq!(t, vec![3, 4]);
        assert_eq!(r.tie_breaks_applied, 2);
    }

    #[test]
    fn csv_export() {
        let rows = vec![DepthRow { index: 1, group: 2, depth: 0.5, rank: 1 }];
        let mut buf = Vec::new();
        write_depth_csv(&mut buf, &rows).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "index,group,depth,rank\n1,2,0.5,1\n");
    }

    proptest! {
        #[test]
        fn ranks_form_a_permutation(v in proptest::collection::vec(-5i32..5, 1..40), seed: u64) {
            let s: Vec<f64> = v.iter().map(|&x| x as f64).collect();
            let mut r = ranks_from_scores(&s, seed).ranks;
            r.sort();
            prop_assert_eq!(r, (1..=s.len()).collect::<Vec<_>>());
        }

        #[test]
        fn invariant_under_increasing_maps(v in proptest::collection::vec(-1e3f64..1e3, 1..40), seed: u64) {
            let mapped: Vec<f64> = v.iter().map(|x| x.powi(3) + 2.0 * x).collect();
            let a = ranks_from_scores(&v, seed);
            let b = ranks_from_scores(&mapped, seed);
            // strictly increasing maps can only merge values through rounding
            if a.tie_breaks_applied == b.tie_breaks_applied {
                prop_assert_eq!(a.ranks, b.ranks);
            }
        }
    }
}
