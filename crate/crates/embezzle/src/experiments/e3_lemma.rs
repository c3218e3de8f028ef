use embezzle_core::embezzle::{
    brute_force_rearrangement_min, grid_denominator, grid_distributions, lemma_entry, min_rearrangement_distance,
};
use embezzle_core::{Limits, ProbDist};

use super::{par_rows, Row, DISTANCE_FLOOR};
use crate::config::ExperimentConfig;
use crate::error::RunResult;
use crate::report::{Cmp, RunReport, Rule};

const COLUMNS: [&str; 11] = [
    "kind",
    "index",
    "support",
    "units",
    "denominator",
    "p1",
    "m",
    "mu",
    "distance",
    "bruteforce",
    "counterexample",
];

/// Support of the oracle comparison.
pub const ORACLE_SUPPORT: usize = 3;

fn units_text(units: &[u32]) -> String {
    units.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

/// Rearrangement lemma on the simplex grid, plus the brute-force oracle on
/// every grid distribution of support at most 3.
pub fn run_e3_lemma(cfg: &ExperimentConfig) -> RunResult<RunReport> {
    let step = cfg.grid_step.expect("resolved");
    let max_support = cfg.max_support.expect("resolved");
    let limits = Limits::default();
    let n = grid_denominator(step)?;

    let lemma_grid = grid_distributions(n, max_support, 2 * n / 3);
    let indexed: Vec<(usize, &Vec<u32>)> = lemma_grid.iter().enumerate().collect();
    let lemma_rows = par_rows(&indexed, |&(i, units)| {
        let e = lemma_entry(units, n, limits)?;
        Ok(vec![
            ("kind", "lemma".into()),
            ("index", i.into()),
            ("support", units.len().into()),
            ("units", units_text(units).into()),
            ("denominator", (n as i64).into()),
            ("p1", e.p.probs()[0].into()),
            ("m", e.m.into()),
            ("mu", e.mu.into()),
            ("distance", e.distance.into()),
            ("counterexample", e.counterexample.into()),
        ])
    })?;

    let oracle_grid = grid_distributions(n, ORACLE_SUPPORT, n);
    let indexed: Vec<(usize, &Vec<u32>)> = oracle_grid.iter().enumerate().collect();
    let oracle_rows = par_rows(&indexed, |&(i, units)| {
        let p = ProbDist::new(units.iter().map(|&u| f64::from(u) / f64::from(n)).collect())?;
        Ok::<Row, _>(vec![
            ("kind", "oracle".into()),
            ("index", i.into()),
            ("support", units.len().into()),
            ("units", units_text(units).into()),
            ("denominator", (n as i64).into()),
            ("p1", p.probs()[0].into()),
            ("distance", min_rearrangement_distance(&p, limits)?.into()),
            ("bruteforce", brute_force_rearrangement_min(&p)?.into()),
        ])
    })?;

    let mut report = RunReport::new(cfg.experiment.name(), cfg.echo(), &COLUMNS, 2);
    for r in lemma_rows.into_iter().chain(oracle_rows) {
        report.push(r);
    }
    let lemma = report.values("distance", &[("kind", "lemma".into())]);
    report.set_summary("lemma_points", lemma.len());
    report.set_summary("lemma_distance_min", lemma.iter().copied().fold(f64::INFINITY, f64::min));
    report.set_summary("counterexamples", report.values("counterexample", &[("kind", "lemma".into())]).iter().filter(|&&c| c > 0.0).count());
    report.set_summary("oracle_points", report.values("distance", &[("kind", "oracle".into())]).len());

    let mut rules = vec![
        Rule::all("lemma_bound", "distance", Cmp::Ge, DISTANCE_FLOOR).when("kind", "lemma"),
        Rule::all("no_counterexamples", "counterexample", Cmp::Le, 0.0).when("kind", "lemma"),
        Rule::pair("oracle_agreement", "distance", Cmp::Near { tol: 1e-12 }, "bruteforce", 0.0).when("kind", "oracle"),
    ];
    if n % 3 == 0 {
        let two_thirds = units_text(&[2 * n / 3, n / 3]);
        rules.push(
            Rule::single("two_thirds_example", "distance", Cmp::Near { tol: 1e-12 }, 1.0 / 3.0)
                .when("kind", "lemma")
                .when("units", two_thirds),
        );
    }
    report.finish(rules);
    Ok(report)
}
