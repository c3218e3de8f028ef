use embezzle_core::embezzle::{
    channel_selfembezzlement_fidelity, nearest_product_extension, self_embezzlement_fidelity, vdh_catalyst,
};
use embezzle_core::qstate::trace_distance_from_fidelity;
use embezzle_core::{Limits, SchmidtVector, FIDELITY_CEILING};

use super::{par_rows, seed, Row, DISTANCE_FLOOR};
use crate::config::ExperimentConfig;
use crate::error::RunResult;
use crate::report::{Cmp, RunReport, Rule};
use crate::sampling::{purification_instance, random_admissible_catalyst, random_spectrum, rng_for, Stream};

const COLUMNS: [&str; 14] = [
    "kind",
    "index",
    "lambda_support",
    "gamma_support",
    "lambda1",
    "admissible",
    "fidelity",
    "unitary_fidelity",
    "trace_distance",
    "epsilon",
    "reduced_fidelity",
    "premise_floor",
    "overlap",
    "overlap_floor",
];

/// Largest support of the environment spectrum `gamma`.
pub const GAMMA_MAX_SUPPORT: usize = 8;

fn channel_row(kind: &'static str, index: u64, lambda: &SchmidtVector, gamma: &SchmidtVector) -> RunResult<Row> {
    let limits = Limits::default();
    let f = channel_selfembezzlement_fidelity(lambda, gamma, limits)?;
    let admissible = embezzle_core::chsh::catalyst_admissible(lambda, embezzle_core::chsh::DEFAULT_EPSILON0);
    Ok(vec![
        ("kind", kind.into()),
        ("index", index.into()),
        ("lambda_support", lambda.len().into()),
        ("gamma_support", gamma.len().into()),
        ("lambda1", lambda.lambda1().into()),
        ("admissible", admissible.admissible.into()),
        ("fidelity", f.into()),
        ("unitary_fidelity", self_embezzlement_fidelity(lambda, limits)?.into()),
        ("trace_distance", trace_distance_from_fidelity(f)?.into()),
    ])
}

/// Channel self-embezzlement over random admissible catalysts and
/// environments, and the purification proposition on random instances.
pub fn run_e5_channel(cfg: &ExperimentConfig) -> RunResult<RunReport> {
    let pairs = cfg.pairs.expect("resolved");
    let samples = cfg.samples.expect("resolved");
    let max_support = cfg.max_support.expect("resolved");
    let seed = seed(cfg);

    let indices: Vec<u64> = (0..pairs).collect();
    let channel = par_rows(&indices, |&i| {
        let mut rng = rng_for(seed, Stream::ChannelPair, i);
        let lambda = random_admissible_catalyst(&mut rng, max_support)?;
        let gamma = random_spectrum(&mut rng, 1, GAMMA_MAX_SUPPORT)?;
        channel_row("channel", i, &lambda, &gamma)
    })?;

    let mut fixed = vec![SchmidtVector::uniform(2)?, SchmidtVector::uniform(3)?];
    for n in 2..=8 {
        fixed.push(vdh_catalyst(n)?.to_schmidt(Limits::default())?);
    }
    let indexed: Vec<(u64, &SchmidtVector)> = fixed.iter().enumerate().map(|(i, l)| (i as u64, l)).collect();
    let unit = par_rows(&indexed, |&(i, lambda)| channel_row("unit_gamma", i, lambda, &SchmidtVector::product()))?;

    let indices: Vec<u64> = (0..samples).collect();
    let proposition = par_rows(&indices, |&i| {
        let inst = purification_instance(&mut rng_for(seed, Stream::Purification, i));
        let ext = nearest_product_extension(&inst.phi, &inst.psi)?;
        Ok(vec![
            ("kind", "proposition".into()),
            ("index", i.into()),
            ("lambda_support", inst.phi.nrows().into()),
            ("gamma_support", inst.phi.ncols().into()),
            ("epsilon", inst.epsilon.into()),
            ("reduced_fidelity", ext.reduced_fidelity.into()),
            ("premise_floor", (1.0 - inst.epsilon).into()),
            ("overlap", ext.overlap.into()),
            ("overlap_floor", (1.0 - 2.0 * inst.epsilon).into()),
        ])
    })?;

    let mut report = RunReport::new(cfg.experiment.name(), cfg.echo(), &COLUMNS, 2);
    for r in channel.into_iter().chain(unit).chain(proposition) {
        report.push(r);
    }
    let f = report.values("fidelity", &[("kind", "channel".into())]);
    report.set_summary("channel_pairs", f.len());
    report.set_summary("channel_fidelity_max", f.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    let prop = [("kind", "proposition".into())];
    let floors = report.values("overlap_floor", &prop);
    let margin: Vec<f64> = report.values("overlap", &prop).iter().zip(&floors).map(|(o, f)| o - f).collect();
    report.set_summary("proposition_instances", margin.len());
    report.set_summary("overlap_margin_min", margin.iter().copied().fold(f64::INFINITY, f64::min));
    report.finish(vec![
        Rule::all("channel_ceiling", "fidelity", Cmp::Le, FIDELITY_CEILING).when("kind", "channel").when("admissible", true),
        Rule::all("channel_distance", "trace_distance", Cmp::Ge, DISTANCE_FLOOR)
            .when("kind", "channel")
            .when("admissible", true),
        Rule::pair("channel_dominance", "fidelity", Cmp::Le, "unitary_fidelity", 1e-12).when("kind", "channel"),
        Rule::pair("unit_gamma_is_unitary", "fidelity", Cmp::Near { tol: 1e-12 }, "unitary_fidelity", 0.0)
            .when("kind", "unit_gamma"),
        Rule::pair("proposition_premise", "reduced_fidelity", Cmp::Gt, "premise_floor", 0.0).when("kind", "proposition"),
        Rule::pair("proposition_overlap", "overlap", Cmp::Gt, "overlap_floor", 0.0).when("kind", "proposition"),
    ]);
    Ok(report)
}
