//! Plain-text tables and small CSV summaries.

use std::fmt::Write;

use fkwc_core::depth::DepthRow;
use fkwc_core::fkwc::{MCResult, StatisticKind};
use fkwc_core::power::{PowerReport, SampleSize};
use fkwc_core::sim::StudyResult;
use fkwc_core::TestResult;

fn stat_name(kind: StatisticKind) -> &'static str {
    match kind {
        StatisticKind::W => "W",
        StatisticKind::Percentile => "M_r",
    }
}

/// Left-aligned first column, right-aligned rest.
fn grid(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |cells: &mut dyn Iterator<Item = &str>, out: &mut String| {
        let mut parts = Vec::new();
        for (i, c) in cells.enumerate() {
            if i == 0 {
                parts.push(format!("{c:<w$}", w = width[0]));
            } else {
                parts.push(format!("{c:>w$}", w = width[i]));
            }
        }
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(&mut header.iter().copied(), &mut out);
    for r in rows {
        line(&mut r.iter().map(String::as_str), &mut out);
    }
    out
}

fn p(x: f64) -> String {
    if x < 1e-4 && x > 0.0 {
        format!("{x:.3e}")
    } else {
        format!("{x:.6}")
    }
}

pub fn test_table(r: &TestResult) -> String {
    let mut s = String::new();
    writeln!(s, "depth      {}", r.depth).unwrap();
    writeln!(s, "statistic  {} = {:.6}", stat_name(r.statistic_kind), r.statistic).unwrap();
    writeln!(s, "df         {}", r.df).unwrap();
    writeln!(s, "p-value    {}", p(r.p_value)).unwrap();
    let decision = if r.rejected { "reject" } else { "do not reject" };
    writeln!(s, "decision   {decision} at alpha = {}", r.alpha).unwrap();
    if r.tie_breaks_applied > 0 {
        writeln!(s, "ties       {} broken at random", r.tie_breaks_applied).unwrap();
    }
    s.push('\n');
    let rows: Vec<Vec<String>> = (0..r.group_sizes.len())
        .map(|j| {
            vec![
                (j + 1).to_string(),
                r.group_sizes[j].to_string(),
                format!("{:.3}", r.group_mean_ranks[j]),
                format!("{:.3}", r.group_deviations[j]),
            ]
        })
        .collect();
    s + &grid(&["group", "n", "mean rank", "sq. deviation"], &rows)
}

pub fn test_csv(r: &TestResult) -> String {
    format!(
        "depth,statistic_kind,statistic,df,p_value,alpha,rejected\n{},{},{},{},{},{},{}\n",
        r.depth,
        stat_name(r.statistic_kind),
        r.statistic,
        r.df,
        r.p_value,
        r.alpha,
        r.rejected
    )
}

pub fn mc_table(r: &MCResult) -> String {
    let rows: Vec<Vec<String>> = r
        .comparisons
        .iter()
        .map(|c| {
            vec![
                format!("{} vs {}", c.groups.0, c.groups.1),
                format!("{:.4}", c.z),
                p(c.raw_p),
                p(c.adjusted_p),
            ]
        })
        .collect();
    let mut s = grid(&["pair", "z", "raw p", "adjusted p"], &rows);
    writeln!(
        s,
        "\n{:?} correction over {} tests",
        r.correction, r.num_comparisons
    )
    .unwrap();
    s
}

pub fn mc_csv(r: &MCResult) -> String {
    let mut s = String::from("group_a,group_b,z,raw_p,adjusted_p\n");
    for c in &r.comparisons {
        writeln!(s, "{},{},{},{},{}", c.groups.0, c.groups.1, c.z, c.raw_p, c.adjusted_p).unwrap();
    }
    s
}

pub fn power_table(r: &PowerReport) -> String {
    let mut s = String::new();
    writeln!(s, "tau              {:.6}", r.power.tau).unwrap();
    writeln!(s, "predicted power  {:.6}", r.power.predicted_power).unwrap();
    writeln!(s, "alpha            {}", r.power.alpha).unwrap();
    writeln!(s, "groups           {}", r.power.groups).unwrap();
    if let Some(n) = r.power.n {
        writeln!(s, "N                {n}").unwrap();
    }
    match &r.sample_size {
        Some(SampleSize::Feasible { n, power }) => {
            writeln!(s, "required N       {n} (power {power:.6})").unwrap()
        }
        Some(SampleSize::Infeasible { reason }) => writeln!(s, "required N       none: {reason}").unwrap(),
        None => {}
    }
    if let Some(probs) = &r.pairwise_probs {
        s.push_str("\npairwise probabilities\n");
        for row in probs {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.4}")).collect();
            writeln!(s, "  {}", cells.join("  ")).unwrap();
        }
    }
    s
}

pub fn power_csv(r: &PowerReport) -> String {
    let n = r.power.n.map(|n| n.to_string()).unwrap_or_default();
    let required = match &r.sample_size {
        Some(SampleSize::Feasible { n, .. }) => n.to_string(),
        _ => String::new(),
    };
    format!(
        "tau,predicted_power,alpha,groups,n,required_n\n{},{},{},{},{},{}\n",
        r.power.tau, r.power.predicted_power, r.power.alpha, r.power.groups, n, required
    )
}

pub fn study_table(r: &StudyResult) -> String {
    let rows: Vec<Vec<String>> = r
        .rows
        .iter()
        .map(|row| {
            vec![
                row.depth.clone(),
                row.family.clone(),
                format!("{}={}", row.param_name, row.param_value),
                row.n.to_string(),
                format!("{:.3}", row.rate),
                format!("{:.3}", row.se),
                row.replications.to_string(),
            ]
        })
        .collect();
    grid(&["depth", "family", "param", "N", "rate", "se", "R"], &rows)
}

pub fn depth_table(rows: &[DepthRow]) -> String {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.index.to_string(),
                r.group.to_string(),
                format!("{:.6}", r.depth),
                r.rank.to_string(),
            ]
        })
        .collect();
    grid(&["index", "group", "depth", "rank"], &cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_are_aligned() {
        let t = grid(&["a", "bb"], &[vec!["xyz".into(), "1".into()], vec!["q".into(), "22".into()]]);
        assert_eq!(t, "a    bb\nxyz   1\nq    22\n");
    }

    #[test]
    fn small_p_values_use_exponent() {
        assert_eq!(p(0.5), "0.500000");
        assert_eq!(p(1.5e-7), "1.500e-7");
    }
}
