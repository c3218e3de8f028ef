use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use embezzle_core::car::{
    canonical_sigma, check_generator, enumeration_shard_count, purity_check, restrict_density, sample_chunk_count,
    verify_enumeration_shard, verify_sample_chunk, window_sites, PairingState, Register, Site, SitePermutation, Tally,
    VerificationReport, VerifyConfig,
};
use embezzle_core::chsh::{chsh_value_abstract, chsh_value_matrix, violation_factor, Bipartition, ChshSettings};
use embezzle_core::linalg::{c, CVector};
use rayon::prelude::*;

use super::{seed, Row};
use crate::config::ExperimentConfig;
use crate::error::RunResult;
use crate::generators::read_generators;
use crate::report::{Cmp, RunReport, Rule};

const COLUMNS: [&str; 11] = [
    "kind",
    "index",
    "label",
    "window",
    "enumerated",
    "sampled",
    "mismatches",
    "value",
    "expected",
    "pure",
    "detail",
];

/// Planar CHSH angles per party are multiples of `pi / PLANAR_STEPS`.
pub const PLANAR_STEPS: usize = 8;

/// Runs the self-embezzlement check on one window, sharded over rayon.
pub fn verify_parallel(sigma: &SitePermutation, cfg: VerifyConfig) -> RunResult<VerificationReport> {
    sigma.check_window(&window_sites(cfg.half_width))?;
    let shards: Vec<usize> = (0..enumeration_shard_count(&cfg)).collect();
    let tallies = shards
        .par_iter()
        .map(|&s| verify_enumeration_shard(sigma, &cfg, s))
        .collect::<Result<Vec<_>, _>>()?;
    let mut enumeration = Tally::default();
    tallies.into_iter().for_each(|t| enumeration.merge(t));
    let chunks: Vec<u64> = (0..sample_chunk_count(&cfg)).collect();
    let tallies = chunks
        .par_iter()
        .map(|&ch| verify_sample_chunk(sigma, &cfg, ch))
        .collect::<Result<Vec<_>, _>>()?;
    let mut sampling = Tally::default();
    tallies.into_iter().for_each(|t| sampling.merge(t));
    Ok(VerificationReport::from_tallies(cfg, enumeration, sampling))
}

fn site(r: Register, j: i64) -> Site {
    Site::new(r, j)
}

/// Windows of the purity check with their state and label.
fn purity_cases() -> Vec<(&'static str, PairingState, Vec<Site>)> {
    use Register::{A1, A2, B1, B2};
    let pairs = |r: Register, s: Register, ks: &[i64]| -> Vec<Site> { ks.iter().flat_map(|&k| [site(r, -k), site(s, -k)]).collect() };
    let (init, target, zero) = (PairingState::psi_initial(), PairingState::psi_target(), PairingState::all_zero());
    vec![
        ("s_psi one pair", init.clone(), pairs(A1, B1, &[1])),
        ("s_psi two pairs", init.clone(), pairs(A1, B1, &[1, 2])),
        ("s_psi three pairs", init.clone(), pairs(A1, B1, &[1, 4, 7])),
        ("s_psi pair and zero sites", init.clone(), [pairs(A1, B1, &[2]), vec![site(A1, 0), site(B2, -1)]].concat()),
        ("s_psi half pair", init.clone(), vec![site(A1, -1)]),
        ("s_psi half pairs", init.clone(), vec![site(A1, -1), site(B1, -2)]),
        ("psi both copies", target.clone(), [pairs(A1, B1, &[1]), pairs(A2, B2, &[1])].concat()),
        ("psi three pairs", target.clone(), [pairs(A1, B1, &[3]), pairs(A2, B2, &[1, 2])].concat()),
        ("psi half pair", target, vec![site(B2, -2)]),
        ("phi zero sites", zero, vec![site(A2, 0), site(B2, 0), site(A2, -1)]),
    ]
}

/// Purity implied by the pairing alone: each site whose partner lies outside
/// the window halves it.
fn expected_purity(s: &PairingState, window: &[Site]) -> f64 {
    let halves = window.iter().filter(|w| s.partner(**w).is_some_and(|p| !window.contains(&p))).count();
    0.5f64.powi(halves as i32)
}

fn epr_vector() -> CVector {
    CVector::from_vec(vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0)])
}

fn planar_grid_max() -> RunResult<f64> {
    let angles: Vec<f64> = (0..PLANAR_STEPS).map(|k| k as f64 * PI / PLANAR_STEPS as f64).collect();
    let cut = Bipartition { dim_a: 2, dim_b: 2 };
    let state = epr_vector();
    let mut best = f64::NEG_INFINITY;
    for &a0 in &angles {
        for &a1 in &angles {
            for &b0 in &angles {
                for &b1 in &angles {
                    let v = chsh_value_matrix(&state, &ChshSettings::planar(a0, a1, b0, b1), cut)?;
                    best = best.max(v);
                }
            }
        }
    }
    Ok(best)
}

/// Exact self-embezzlement in the CAR algebra, purity of the induced states,
/// and CHSH values of the catalyst.
pub fn run_e4_car(cfg: &ExperimentConfig) -> RunResult<RunReport> {
    let windows = cfg.window.clone().expect("resolved");
    let max_weight = cfg.max_weight.expect("resolved");
    let samples = cfg.samples.expect("resolved");
    let seed = seed(cfg);
    let sigma = canonical_sigma();
    let mut rows: Vec<Row> = Vec::new();

    for (i, &w) in windows.iter().enumerate() {
        let v = verify_parallel(&sigma, VerifyConfig::new(w, max_weight, samples, seed))?;
        let detail = v
            .counterexamples
            .first()
            .map(|m| format!("{} target={} initial={}", m.generator, m.target, m.initial));
        rows.push(vec![
            ("kind", "verify".into()),
            ("index", i.into()),
            ("label", format!("W={w} weight<={max_weight}").into()),
            ("window", w.into()),
            ("enumerated", v.enumerated.into()),
            ("sampled", v.sampled.into()),
            ("mismatches", v.mismatches.into()),
            ("detail", detail.into()),
        ]);
    }

    for (i, (label, state, window)) in purity_cases().into_iter().enumerate() {
        let p = purity_check(&restrict_density(&state, &window)?);
        let text = window.iter().map(ToString::to_string).collect::<Vec<_>>().join(";");
        rows.push(vec![
            ("kind", "purity".into()),
            ("index", i.into()),
            ("label", label.into()),
            ("window", window.len().into()),
            ("value", p.purity.into()),
            ("expected", expected_purity(&state, &window).into()),
            ("pure", p.is_pure.into()),
            ("detail", text.into()),
        ]);
    }

    let a1 = site(Register::A1, -1);
    let b1 = site(Register::B1, -1);
    let standard = ChshSettings::standard_on(a1, b1)?;
    let second = ChshSettings::standard_on(site(Register::A2, -1), site(Register::B2, -1))?;
    let s_psi = chsh_value_abstract(&PairingState::s_psi(), &standard)?;
    let chsh = [
        ("abstract s_psi", s_psi, 2.0 * SQRT_2),
        ("violation factor s_psi", violation_factor(s_psi), SQRT_2),
        ("abstract psi second copy", chsh_value_abstract(&PairingState::psi_target(), &second)?, 2.0 * SQRT_2),
        ("abstract phi", chsh_value_abstract(&PairingState::all_zero(), &standard)?, SQRT_2),
        (
            "matrix epr",
            chsh_value_matrix(&epr_vector(), &ChshSettings::standard(), Bipartition { dim_a: 2, dim_b: 2 })?,
            2.0 * SQRT_2,
        ),
    ];
    for (i, (label, value, expected)) in chsh.into_iter().enumerate() {
        rows.push(vec![
            ("kind", "chsh".into()),
            ("index", i.into()),
            ("label", label.into()),
            ("value", value.into()),
            ("expected", expected.into()),
        ]);
    }
    rows.push(vec![
        ("kind", "chsh_grid".into()),
        ("index", 0usize.into()),
        ("label", format!("planar grid pi/{PLANAR_STEPS}").into()),
        ("value", planar_grid_max()?.into()),
        ("expected", (2.0 * SQRT_2).into()),
    ]);

    if let Some(path) = &cfg.extra_generators {
        let (init, target) = (PairingState::psi_initial(), PairingState::psi_target());
        for (i, g) in read_generators(path)?.iter().enumerate() {
            let (t, s) = check_generator(&sigma, &init, &target, g)?;
            rows.push(vec![
                ("kind", "extra".into()),
                ("index", i.into()),
                ("label", g.to_string().into()),
                ("mismatches", i64::from(t != s).into()),
                ("value", f64::from(t).into()),
                ("expected", f64::from(s).into()),
            ]);
        }
    }

    let mut report = RunReport::new(cfg.experiment.name(), cfg.echo(), &COLUMNS, 2);
    for r in rows {
        report.push(r);
    }
    let kind = |k: &str| [("kind", k.into())];
    let total = |col: &str| report.values(col, &kind("verify")).iter().map(|&v| v as u64).sum::<u64>();
    let checked = total("enumerated") + total("sampled");
    let mismatches = total("mismatches");
    report.set_summary("generators_checked", checked);
    report.set_summary("mismatches", mismatches);
    let mut rules = vec![
        Rule::all("zero_mismatches", "mismatches", Cmp::Le, 0.0).when("kind", "verify"),
        Rule::pair("purity", "value", Cmp::Near { tol: 1e-9 }, "expected", 0.0).when("kind", "purity"),
        Rule::pair("chsh_values", "value", Cmp::Near { tol: 1e-12 }, "expected", 0.0).when("kind", "chsh"),
        Rule::pair("chsh_grid_bound", "value", Cmp::Le, "expected", 1e-9).when("kind", "chsh_grid"),
    ];
    if cfg.extra_generators.is_some() {
        rules.push(Rule::all("extra_generators", "mismatches", Cmp::Le, 0.0).when("kind", "extra"));
    }
    report.finish(rules);
    Ok(report)
}
