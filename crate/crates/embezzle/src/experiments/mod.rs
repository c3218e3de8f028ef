//! The five experiments. Each returns a finished [`RunReport`] whose verdicts
//! are rules over its own rows.

mod e1_vdh;
mod e2_nogo;
mod e3_lemma;
mod e4_car;
mod e5_channel;

pub use e1_vdh::run_e1_vdh;
pub use e2_nogo::run_e2_nogo;
pub use e3_lemma::run_e3_lemma;
pub use e4_car::run_e4_car;
pub use e5_channel::run_e5_channel;

use rayon::prelude::*;

use crate::config::{Experiment, ExperimentConfig};
use crate::error::RunResult;
use crate::report::{Cell, RunReport};

/// Bound on trace distances: `2/9` less the comparison slack.
pub const DISTANCE_FLOOR: f64 = embezzle_core::TWO_NINTHS - embezzle_core::BOUND_TOLERANCE;

/// Resolves `cfg` and runs its experiment.
pub fn run(cfg: ExperimentConfig) -> RunResult<RunReport> {
    let cfg = cfg.resolve()?;
    let start = std::time::Instant::now();
    let mut report = match cfg.experiment {
        Experiment::E1 => run_e1_vdh(&cfg)?,
        Experiment::E2 => run_e2_nogo(&cfg)?,
        Experiment::E3 => run_e3_lemma(&cfg)?,
        Experiment::E4 => run_e4_car(&cfg)?,
        Experiment::E5 => run_e5_channel(&cfg)?,
    };
    if cfg.timing {
        report.duration_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

type Row = Vec<(&'static str, Cell)>;

/// Evaluates `case` on every item in parallel, keeping input order.
fn par_rows<T: Sync>(items: &[T], case: impl Fn(&T) -> RunResult<Row> + Sync + Send) -> RunResult<Vec<Row>> {
    items.par_iter().map(case).collect()
}

fn seed(cfg: &ExperimentConfig) -> u64 {
    cfg.seed.expect("resolved configs of randomized experiments carry a seed")
}
