use embezzle_core::embezzle::{embezzlement_fidelity, vdh_catalyst, SumMode, SPARSE_THRESHOLD};
use embezzle_core::{Limits, SchmidtVector};

use super::{par_rows, Row};
use crate::chart::Chart;
use crate::config::ExperimentConfig;
use crate::error::RunResult;
use crate::report::{Cmp, RunReport, Rule};

const COLUMNS: [&str; 8] = ["k", "n", "method", "fidelity", "lambda1", "terms", "exact", "oracle"];

/// Largest `sum_i a_i b_pi(i)` over all permutations `pi`, by enumeration.
fn permutation_max(a: &[f64], b: &[f64]) -> f64 {
    fn go(a: &[f64], b: &mut Vec<f64>, k: usize, best: &mut f64) {
        if k == b.len() {
            *best = best.max(a.iter().zip(b.iter()).map(|(x, y)| x * y).sum());
            return;
        }
        for i in k..b.len() {
            b.swap(k, i);
            go(a, b, k + 1, best);
            b.swap(k, i);
        }
    }
    let mut best = f64::NEG_INFINITY;
    go(a, &mut b.to_vec(), 0, &mut best);
    best
}

/// Brute-force fidelity for tiny catalysts: every pairing of the padded
/// catalyst with the unsorted product coefficients.
fn oracle(catalyst: &SchmidtVector, target: &SchmidtVector) -> f64 {
    let product: Vec<f64> = catalyst.coeffs().iter().flat_map(|c| target.coeffs().iter().map(move |t| c * t)).collect();
    let mut padded = catalyst.coeffs().to_vec();
    padded.resize(product.len(), 0.0);
    permutation_max(&padded, &product)
}

/// Embezzlement fidelity of the van Dam-Hayden catalyst of dimension `2^k`
/// for an EPR target, `k = 0..=max-k`.
pub fn run_e1_vdh(cfg: &ExperimentConfig) -> RunResult<RunReport> {
    let max_k = cfg.max_k.expect("resolved");
    let limits = Limits::default();
    let epr = SchmidtVector::uniform(2)?;
    let ks: Vec<u32> = (0..=max_k).collect();
    let rows = par_rows(&ks, |&k| {
        let n = 1usize << k;
        let cat = vdh_catalyst(n)?;
        let mut row: Row = vec![("k", (k as i64).into()), ("n", n.into()), ("lambda1", cat.lambda1().into())];
        if n <= SPARSE_THRESHOLD {
            let dense = cat.to_schmidt(limits)?;
            let f = embezzlement_fidelity(&dense, &epr, limits)?;
            row.extend([("method", "dense".into()), ("fidelity", f.into()), ("terms", n.into()), ("exact", true.into())]);
            if n <= 2 {
                row.push(("oracle", oracle(&dense, &epr).into()));
            }
        } else {
            let s = cat.embezzlement_fidelity(&epr, SumMode::Exact);
            row.extend([
                ("method", "sparse".into()),
                ("fidelity", s.value.into()),
                ("terms", s.terms.into()),
                ("exact", s.exact.into()),
            ]);
        }
        Ok(row)
    })?;

    let mut report = RunReport::new(cfg.experiment.name(), cfg.echo(), &COLUMNS, 1);
    for r in rows {
        report.push(r);
    }
    let mut rules = vec![
        Rule::single("n1_value", "fidelity", Cmp::Near { tol: 1e-12 }, std::f64::consts::FRAC_1_SQRT_2).when("k", 0i64),
        Rule::pair("oracle_agreement", "fidelity", Cmp::Near { tol: 1e-9 }, "oracle", 0.0),
        Rule::nondecreasing("monotone", "fidelity"),
    ];
    if max_k >= 1 {
        let want = 2.0f64.sqrt() / 3.0 + 1.0 / 3.0;
        rules.insert(1, Rule::single("n2_value", "fidelity", Cmp::Near { tol: 1e-9 }, want).when("k", 1i64));
    }
    if max_k >= 16 {
        rules.push(Rule::single("exceeds_0.99_at_2^16", "fidelity", Cmp::Gt, 0.99).when("k", 16i64));
    }
    let top = report.values("fidelity", &[]).last().copied();
    report.set_summary("max_n", 1u64 << max_k);
    report.set_summary("fidelity_at_max_n", top);
    report.chart = Some(Chart {
        title: "van Dam-Hayden embezzlement fidelity, EPR target".into(),
        x: "k".into(),
        y: "fidelity".into(),
        filter: vec![],
    });
    report.finish(rules);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_oracle() {
        assert_eq!(permutation_max(&[1.0, 0.0], &[0.0, 1.0]), 1.0);
        assert_eq!(permutation_max(&[3.0, 1.0, 2.0], &[1.0, 2.0, 3.0]), 14.0);
        let epr = SchmidtVector::uniform(2).unwrap();
        assert!((oracle(&SchmidtVector::product(), &epr) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }
}
