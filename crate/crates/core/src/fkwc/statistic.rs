use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{stream, tag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StatisticKind {
    /// Kruskal–Wallis statistic on all ranks.
    W,
    /// Percentile-modified statistic on the least deep observations.
    #[serde(rename = "M_r")]
    Percentile,
}

fn group_counts(ranks: &[usize], groups: &[usize]) -> Result<Vec<usize>> {
    if ranks.len() != groups.len() {
        return Err(Error::Dimension {
            expected: groups.len(),
            found: ranks.len(),
        });
    }
    let j = groups.iter().max().map_or(0, |m| m + 1);
    let mut counts = vec![0; j];
    groups.iter().for_each(|&g| counts[g] += 1);
    if let Some(e) = counts.iter().position(|&c| c == 0) {
        return Err(Error::param(format!("group {} has no observations", e + 1)));
    }
    Ok(counts)
}

/// Mean rank of each group (zero-based labels).
pub fn group_mean_ranks(ranks: &[usize], groups: &[usize]) -> Result<Vec<f64>> {
    let counts = group_counts(ranks, groups)?;
    let mut sums = vec![0.0; counts.len()];
    for (&r, &g) in ranks.iter().zip(groups) {
        sums[g] += r as f64;
    }
    Ok(sums.iter().zip(&counts).map(|(s, &c)| s / c as f64).collect())
}

/// `12/(N(N+1)) Σ_j N_j (R̄_j − (N+1)/2)²`.
pub fn kw_statistic(ranks: &[usize], groups: &[usize]) -> Result<f64> {
    let counts = group_counts(ranks, groups)?;
    let means = group_mean_ranks(ranks, groups)?;
    let n = ranks.len() as f64;
    let centre = (n + 1.0) / 2.0;
    let s: f64 = counts
        .iter()
        .zip(&means)
        .map(|(&c, m)| c as f64 * (m - centre).powi(2))
        .sum();
    Ok(12.0 / (n * (n + 1.0)) * s)
}

/// `⌊rN⌋`, guarded against representation error in `r·N`.
pub(crate) fn percentile_count(n: usize, r: f64) -> usize {
    ((r * n as f64) * (1.0 + 1e-12)).floor() as usize
}

/// Percentile-modified statistic using the `⌊rN⌋` least deep observations,
/// each weighted by how far it sits below rank `⌊rN⌋ + 1`.
pub fn percentile_statistic(ranks: &[usize], groups: &[usize], r: f64) -> Result<f64> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::param(format!("r must lie in (0, 1], got {r}")));
    }
    let counts = group_counts(ranks, groups)?;
    let n = ranks.len();
    let np = percentile_count(n, r).min(n);
    if np < 1 {
        return Err(Error::param(format!("r = {r} selects no observations out of {n}")));
    }
    let mut score = vec![0.0; counts.len()];
    for (&rk, &g) in ranks.iter().zip(groups) {
        if rk <= np {
            score[g] += (np - rk + 1) as f64;
        }
    }
    let (nf, npf) = (n as f64, np as f64);
    let tail = 2.0 * nf * (2.0 * npf + 1.0) - 3.0 * npf * (npf + 1.0);
    let mut total = 0.0;
    for (j, &c) in counts.iter().enumerate() {
        let nj = c as f64;
        let rho = nj * npf * (npf + 1.0) / (2.0 * nf);
        let var = nj * (nf - nj) * npf * (npf + 1.0) * tail / (12.0 * nf * nf * (nf - 1.0));
        if var > 0.0 {
            total += (1.0 - nj / nf) * (score[j] - rho).powi(2) / var;
        }
    }
    Ok(total)
}

/// Kruskal–Wallis statistics of `ranks` under `count` uniform relabellings
/// of `groups`, each drawn from its own stream.
pub fn permutation_statistics(
    ranks: &[usize],
    groups: &[usize],
    count: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    group_counts(ranks, groups)?;
    (0..count)
        .into_par_iter()
        .map(|b| {
            let mut g = groups.to_vec();
            g.shuffle(&mut stream(seed, &[tag::PERMUTE, b as u64]));
            kw_statistic(ranks, &g)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn separated_pair() {
        assert!((kw_statistic(&[1, 2, 3, 4], &[0, 0, 1, 1]).unwrap() - 2.4).abs() < 1e-12);
    }

    #[test]
    fn balanced_means_give_zero() {
        assert_eq!(kw_statistic(&[1, 4, 2, 3], &[0, 0, 1, 1]).unwrap(), 0.0);
    }

    #[test]
    fn separated_is_maximal_among_all_splits() {
        let ranks = [1, 2, 3, 4];
        let mut best = (0.0, vec![]);
        for mask in 0u32..16 {
            if mask.count_ones() != 2 {
                continue;
            }
            let g: Vec<usize> = (0..4).map(|i| (mask >> i & 1) as usize).collect();
            let w = kw_statistic(&ranks, &g).unwrap();
            if w > best.0 + 1e-12 {
                best = (w, g);
            }
        }
        assert!((best.0 - 2.4).abs() < 1e-12);
        assert!(best.1 == vec![1, 1, 0, 0] || best.1 == vec![0, 0, 1, 1]);
    }

    #[test]
    fn empty_group_is_rejected() {
        assert!(kw_statistic(&[1, 2, 3], &[0, 0, 2]).is_err());
    }

    #[test]
    fn percentile_hand_example() {
        // independent arithmetic: score 3, rho 1.5, variance 22/24
        let var = 2.0 * 2.0 * 2.0 * 3.0 * (2.0 * 4.0 * 5.0 - 3.0 * 2.0 * 3.0) / (12.0 * 16.0 * 3.0);
        let k = (3.0f64 - 1.5).powi(2) / var;
        let m = percentile_statistic(&[1, 2, 3, 4], &[0, 0, 1, 1], 0.5).unwrap();
        assert!((m - k).abs() < 1e-12);
        assert!((m - 2.454_545_454_545_45).abs() < 1e-12);
    }

    #[test]
    fn percentile_requires_an_observation() {
        assert!(percentile_statistic(&[1, 2, 3, 4], &[0, 0, 1, 1], 0.1).is_err());
    }

    /// Brute force over every labelling with fixed group sizes.
    #[test]
    fn bounds_by_enumeration() {
        for n in 2..=8usize {
            let ranks: Vec<usize> = (1..=n).collect();
            let mut max: f64 = 0.0;
            for mask in 1u32..(1 << n) - 1 {
                let g: Vec<usize> = (0..n).map(|i| (mask >> i & 1) as usize).collect();
                let w = kw_statistic(&ranks, &g).unwrap();
                assert!(w >= 0.0 && w <= (n - 1) as f64 + 1e-12);
                max = max.max(w);
            }
            // with J = N every observation is its own group and W = N − 1
            let own: Vec<usize> = (0..n).collect();
            assert!((kw_statistic(&ranks, &own).unwrap() - (n - 1) as f64).abs() < 1e-9);
            assert!(max <= (n - 1) as f64);
        }
    }

    #[test]
    fn permutation_draws_are_reproducible() {
        let ranks: Vec<usize> = (1..=12).collect();
        let groups: Vec<usize> = (0..12).map(|i| i % 3).collect();
        let a = permutation_statistics(&ranks, &groups, 50, 4).unwrap();
        assert_eq!(a, permutation_statistics(&ranks, &groups, 50, 4).unwrap());
        assert!(a.iter().any(|&w| w != a[0]));
    }

    fn random_split(rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<usize>) {
        let j = rng.random_range(2..=4);
        let n = rng.random_range(j..=40);
        let mut groups: Vec<usize> = (0..n).map(|i| if i < j { i } else { rng.random_range(0..j) }).collect();
        groups.shuffle(rng);
        let mut ranks: Vec<usize> = (1..=n).collect();
        ranks.shuffle(rng);
        (ranks, groups)
    }

    #[test]
    fn full_percentile_equals_w() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let (ranks, groups) = random_split(&mut rng);
            let w = kw_statistic(&ranks, &groups).unwrap();
            let m = percentile_statistic(&ranks, &groups, 1.0).unwrap();
            assert!((w - m).abs() < 1e-10, "{w} {m}");
        }
    }

    proptest! {
        #[test]
        fn relabelling_groups_leaves_statistics_unchanged(seed: u64, r in 0.3f64..=1.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (ranks, groups) = random_split(&mut rng);
            let j = groups.iter().max().unwrap() + 1;
            let mut relabel: Vec<usize> = (0..j).collect();
            relabel.shuffle(&mut rng);
            let moved: Vec<usize> = groups.iter().map(|&g| relabel[g]).collect();
            let a = kw_statistic(&ranks, &groups).unwrap();
            let b = kw_statistic(&ranks, &moved).unwrap();
            prop_assert!((a - b).abs() < 1e-10);
            if let (Ok(a), Ok(b)) = (percentile_statistic(&ranks, &groups, r), percentile_statistic(&ranks, &moved, r)) {
                prop_assert!((a - b).abs() < 1e-10);
            }
        }
    }
}
