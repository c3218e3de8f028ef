use embezzle_core::embezzle::{vdh_catalyst, NoGoReport};
use embezzle_core::qstate::schmidt_from_probs;
use embezzle_core::{Limits, ProbDist, SchmidtVector, FIDELITY_CEILING};

use super::{par_rows, seed, Row, DISTANCE_FLOOR};
use crate::chart::Chart;
use crate::config::ExperimentConfig;
use crate::error::RunResult;
use crate::report::{Cmp, RunReport, Rule};
use crate::sampling::{random_admissible_catalyst, rng_for, Stream};

const COLUMNS: [&str; 10] = [
    "family",
    "param",
    "support",
    "index",
    "lambda1",
    "admissible",
    "fidelity",
    "trace_distance",
    "lemma_distance",
    "bound_ok",
];

#[derive(Debug, Clone, Copy)]
enum Case {
    /// `p_k` proportional to `r^k`, `k < d`.
    Geometric { r: f64, d: usize },
    Vdh { n: usize },
    Random { index: u64 },
    Product,
    Epr,
}

fn geometric(r: f64, d: usize) -> RunResult<SchmidtVector> {
    let w: Vec<f64> = (0..d).map(|k| r.powi(k as i32)).collect();
    Ok(schmidt_from_probs(&ProbDist::from_weights(w)?))
}

/// Self-embezzlement no-go over truncated-geometric, van Dam-Hayden and
/// random catalysts of support up to `max-support`.
pub fn run_e2_nogo(cfg: &ExperimentConfig) -> RunResult<RunReport> {
    let step = cfg.grid_step.expect("resolved");
    let max_support = cfg.max_support.expect("resolved");
    let samples = cfg.samples.expect("resolved");
    let seed = seed(cfg);
    let limits = Limits::default();

    let mut cases = vec![Case::Product, Case::Epr];
    let mut j = 1u32;
    while f64::from(j) * step <= 1.0 + 1e-12 {
        let r = (f64::from(j) * step).min(1.0);
        cases.extend((2..=max_support).map(|d| Case::Geometric { r, d }));
        j += 1;
    }
    cases.extend((1..=max_support).map(|n| Case::Vdh { n }));
    cases.extend((0..samples).map(|index| Case::Random { index }));

    let rows = par_rows(&cases, |case| {
        let (family, param, index, lambda) = match *case {
            Case::Geometric { r, d } => ("geometric", r, 0, geometric(r, d)?),
            Case::Vdh { n } => ("vdh", 0.0, 0, vdh_catalyst(n)?.to_schmidt(limits)?),
            Case::Random { index } => {
                let mut rng = rng_for(seed, Stream::Catalyst, index);
                ("random", 0.0, index, random_admissible_catalyst(&mut rng, max_support)?)
            }
            Case::Product => ("product", 0.0, 0, SchmidtVector::product()),
            Case::Epr => ("epr", 0.0, 0, SchmidtVector::uniform(2)?),
        };
        let r = NoGoReport::evaluate(&lambda, limits)?;
        Ok::<Row, _>(vec![
            ("family", family.into()),
            ("param", param.into()),
            ("support", lambda.len().into()),
            ("index", index.into()),
            ("lambda1", r.lambda1.into()),
            ("admissible", r.admissible.into()),
            ("fidelity", r.fidelity_max.into()),
            ("trace_distance", r.trace_distance_min.into()),
            ("lemma_distance", r.lemma_distance.into()),
            ("bound_ok", r.bound_satisfied.into()),
        ])
    })?;

    let mut report = RunReport::new(cfg.experiment.name(), cfg.echo(), &COLUMNS, 4);
    for r in rows {
        report.push(r);
    }
    let admissible = report.values("fidelity", &[("admissible", true.into())]);
    report.set_summary("catalysts", report.rows.len());
    report.set_summary("admissible", admissible.len());
    report.set_summary("fidelity_max", admissible.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    let td = report.values("trace_distance", &[("admissible", true.into())]);
    report.set_summary("trace_distance_min", td.iter().copied().fold(f64::INFINITY, f64::min));
    report.set_summary("epsilon0", cfg.epsilon0.expect("resolved"));
    report.chart = Some(Chart {
        title: "self-embezzlement fidelity of van Dam-Hayden catalysts".into(),
        x: "support".into(),
        y: "fidelity".into(),
        filter: vec![("family".into(), "vdh".into())],
    });
    report.finish(vec![
        Rule::all("fidelity_ceiling", "fidelity", Cmp::Le, FIDELITY_CEILING).when("admissible", true),
        Rule::all("trace_distance_bound", "trace_distance", Cmp::Ge, DISTANCE_FLOOR).when("admissible", true),
        Rule::all("lemma_bound", "lemma_distance", Cmp::Ge, DISTANCE_FLOOR).when("admissible", true),
        Rule::single("epr_fidelity", "fidelity", Cmp::Near { tol: 1e-12 }, std::f64::consts::FRAC_1_SQRT_2)
            .when("family", "epr"),
        Rule::single("product_inadmissible", "admissible", Cmp::Le, 0.0).when("family", "product"),
        Rule::single("vdh_n1_inadmissible", "admissible", Cmp::Le, 0.0).when("family", "vdh").when("support", 1usize),
        Rule::count("vdh_only_n1_inadmissible", Cmp::Le, 1.0).when("family", "vdh").when("admissible", false),
    ]);
    Ok(report)
}
