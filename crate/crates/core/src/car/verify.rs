use alloc::vec::Vec;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::pauli::{Letter, PauliString};
use super::perm::{apply_automorphism, SitePermutation};
use super::site::{Register, Site};
use super::state::PairingState;
use crate::{CoreError, Result};

/// Random generators drawn per independently seeded chunk.
pub const SAMPLE_CHUNK: u64 = 4096;

const MAX_COUNTEREXAMPLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Sites `[-W, W)` of every register are enumerated and sampled.
    pub half_width: i64,
    /// Full enumeration covers all generators up to this weight.
    pub max_weight: usize,
    pub sample_count: u64,
    pub sample_max_weight: usize,
    pub seed: u64,
}

impl VerifyConfig {
    pub fn new(half_width: i64, max_weight: usize, sample_count: u64, seed: u64) -> Self {
        Self { half_width, max_weight, sample_count, sample_max_weight: 16, seed }
    }

    fn validate(&self) -> Result<()> {
        if self.half_width < 1 || self.half_width > 1 << 20 {
            return Err(CoreError::InvalidParameter(alloc::format!("half width {}", self.half_width)));
        }
        if self.sample_max_weight == 0 {
            return Err(CoreError::InvalidParameter("sample weight must be >= 1".into()));
        }
        Ok(())
    }
}

/// All four registers over indices `[-W, W)`.
pub fn window_sites(half_width: i64) -> Vec<Site> {
    Register::ALL
        .iter()
        .flat_map(|&r| (-half_width..half_width).map(move |j| Site::new(r, j)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub generator: PauliString,
    pub target: u8,
    pub initial: u8,
}

/// Counts from one shard; merged in shard order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    pub checked: u64,
    pub mismatches: u64,
    pub counterexamples: Vec<Mismatch>,
}

impl Tally {
    pub fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.mismatches += other.mismatches;
        let room = MAX_COUNTEREXAMPLES.saturating_sub(self.counterexamples.len());
        self.counterexamples.extend(other.counterexamples.into_iter().take(room));
    }

    fn record(&mut self, g: &PauliString, target: u8, initial: u8) {
        self.checked += 1;
        if target != initial {
            self.mismatches += 1;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(Mismatch { generator: g.clone(), target, initial });
            }
        }
    }
}

/// `(psi_target(g), psi_initial(alpha(g)))`.
pub fn check_generator(
    sigma: &SitePermutation,
    initial: &PairingState,
    target: &PairingState,
    g: &PauliString,
) -> Result<(u8, u8)> {
    let moved = apply_automorphism(sigma, g)?;
    Ok((target.eval(g), initial.eval(&moved)))
}

/// Shard 0 is the identity; shard `i >= 1` holds the generators whose first
/// site (in window order) is site `i - 1`.
pub fn enumeration_shard_count(cfg: &VerifyConfig) -> usize {
    window_sites(cfg.half_width).len() + 1
}

pub fn verify_enumeration_shard(sigma: &SitePermutation, cfg: &VerifyConfig, shard: usize) -> Result<Tally> {
    cfg.validate()?;
    let (initial, target) = (PairingState::psi_initial(), PairingState::psi_target());
    let sites = window_sites(cfg.half_width);
    let mut tally = Tally::default();
    if shard == 0 {
        let id = PauliString::identity();
        let (t, i) = check_generator(sigma, &initial, &target, &id)?;
        tally.record(&id, t, i);
        return Ok(tally);
    }
    if cfg.max_weight == 0 || shard > sites.len() {
        return Ok(tally);
    }
    let mut chosen = alloc::vec![shard - 1];
    let mut err = None;
    extend_combinations(&sites, &mut chosen, cfg.max_weight, &mut |combo| {
        if err.is_some() {
            return;
        }
        for_each_lettering(combo.len(), |letters| {
            if err.is_some() {
                return;
            }
            let g: PauliString = combo.iter().zip(letters).map(|(&k, &l)| (sites[k], l)).collect();
            match check_generator(sigma, &initial, &target, &g) {
                Ok((t, i)) => tally.record(&g, t, i),
                Err(e) => err = Some(e),
            }
        });
    });
    match err {
        Some(e) => Err(e),
        None => Ok(tally),
    }
}

/// Visits `chosen` and every extension of it by larger site positions, up to
/// `max_len` positions.
fn extend_combinations(sites: &[Site], chosen: &mut Vec<usize>, max_len: usize, visit: &mut dyn FnMut(&[usize])) {
    visit(chosen);
    if chosen.len() == max_len {
        return;
    }
    let next = chosen.last().map_or(0, |k| k + 1);
    for k in next..sites.len() {
        chosen.push(k);
        extend_combinations(sites, chosen, max_len, visit);
        chosen.pop();
    }
}

fn for_each_lettering(len: usize, mut visit: impl FnMut(&[Letter])) {
    let mut digits = alloc::vec![0usize; len];
    let mut letters = alloc::vec![Letter::X; len];
    loop {
        for (l, d) in letters.iter_mut().zip(&digits) {
            *l = Letter::ALL[*d];
        }
        visit(&letters);
        let mut pos = 0;
        loop {
            if pos == len {
                return;
            }
            digits[pos] += 1;
            if digits[pos] < 3 {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

pub fn sample_chunk_count(cfg: &VerifyConfig) -> u64 {
    cfg.sample_count.div_ceil(SAMPLE_CHUNK)
}

/// Draws chunk `chunk` of the random generators: weight uniform in
/// `[1, sample_max_weight]`, distinct sites uniform in the window, letters
/// uniform in `{X, Z, XZ}`. Chunk `c` uses ChaCha8 stream `c` of `seed`.
pub fn verify_sample_chunk(sigma: &SitePermutation, cfg: &VerifyConfig, chunk: u64) -> Result<Tally> {
    cfg.validate()?;
    let (initial, target) = (PairingState::psi_initial(), PairingState::psi_target());
    let sites = window_sites(cfg.half_width);
    let max_w = cfg.sample_max_weight.min(sites.len());
    let start = chunk * SAMPLE_CHUNK;
    let count = cfg.sample_count.saturating_sub(start).min(SAMPLE_CHUNK);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(chunk);
    let mut tally = Tally::default();
    for _ in 0..count {
        let w = rng.gen_range(1..=max_w);
        let picks = index::sample(&mut rng, sites.len(), w);
        let g: PauliString = picks
            .iter()
            .map(|k| (sites[k], Letter::ALL[rng.gen_range(0..3)]))
            .collect();
        let (t, i) = check_generator(sigma, &initial, &target, &g)?;
        tally.record(&g, t, i);
    }
    Ok(tally)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub config: VerifyConfig,
    pub window_sites: usize,
    pub enumerated: u64,
    pub sampled: u64,
    pub mismatches: u64,
    pub counterexamples: Vec<Mismatch>,
}

impl VerificationReport {
    /// Assembles a report from shard tallies given in shard order.
    pub fn from_tallies(config: VerifyConfig, enumeration: Tally, sampling: Tally) -> Self {
        let window_sites = window_sites(config.half_width).len();
        let (enumerated, sampled) = (enumeration.checked, sampling.checked);
        let mut all = enumeration;
        all.merge(sampling);
        Self { config, window_sites, enumerated, sampled, mismatches: all.mismatches, counterexamples: all.counterexamples }
    }

    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

/// Checks `psi_initial(alpha(g)) == psi_target(g)` on every generator of the
/// window up to `max_weight`, plus `sample_count` seeded random generators,
/// with `alpha` induced by `sigma` on both parties.
pub fn verify_self_embezzlement(sigma: &SitePermutation, cfg: VerifyConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    sigma.check_window(&window_sites(cfg.half_width))?;
    let mut enumeration = Tally::default();
    for shard in 0..enumeration_shard_count(&cfg) {
        enumeration.merge(verify_enumeration_shard(sigma, &cfg, shard)?);
    }
    let mut sampling = Tally::default();
    for chunk in 0..sample_chunk_count(&cfg) {
        sampling.merge(verify_sample_chunk(sigma, &cfg, chunk)?);
    }
    Ok(VerificationReport::from_tallies(cfg, enumeration, sampling))
}
