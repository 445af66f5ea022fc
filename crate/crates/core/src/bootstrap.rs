//! Seedable with-replacement resampling of both arms into a scatter of
//! replicated ICE outcomes.
//!
//! # Determinism
//!
//! Every replicate draws from its own ChaCha8 stream seeded by a
//! SplitMix64-style mix of the master seed and the replicate index, so
//! serial and parallel execution produce bit-identical scatters. Within
//! a replicate the draw order is fixed: n_Std patient-row indices with
//! replacement from the Std arm, then n_New from the New arm, each via a
//! uniform index draw. The resampling unit is the patient row, which
//! preserves the within-patient effe–cost correlation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::data_model::{ArmSample, Variable};
use crate::scale::{standardize, IceOutcome, Perspective, ShadowPrice};

/// Smallest replication count accepted by [`resample`].
pub const MIN_REPLICATES: usize = 100;

#[derive(Debug, Error, PartialEq)]
pub enum BootstrapError {
    #[error("replication count {0} is below the minimum of {MIN_REPLICATES}")]
    BadReplicationCount(usize),
    #[error("scatter replicates must share the observed point's lambda and perspective")]
    InconsistentScatter,
    #[error("scatter must contain at least one replicate")]
    EmptyScatter,
}

/// R replicated ICE outcomes plus the observed full-sample outcome and
/// the seed that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapScatter {
    observed: IceOutcome,
    replicates: Vec<IceOutcome>,
    seed: u64,
}

impl BootstrapScatter {
    /// Assembles a scatter from parts, enforcing that every replicate
    /// shares the observed outcome's lambda and perspective. Replication
    /// counts below [`MIN_REPLICATES`] are allowed here (hand-built
    /// scatters are useful for diagnostics); [`resample`] enforces the
    /// minimum for generated ones.
    pub fn from_parts(
        observed: IceOutcome,
        replicates: Vec<IceOutcome>,
        seed: u64,
    ) -> Result<Self, BootstrapError> {
        if replicates.is_empty() {
            return Err(BootstrapError::EmptyScatter);
        }
        if replicates
            .iter()
            .any(|r| r.lambda != observed.lambda || r.perspective != observed.perspective)
        {
            return Err(BootstrapError::InconsistentScatter);
        }
        Ok(Self {
            observed,
            replicates,
            seed,
        })
    }

    pub fn observed(&self) -> IceOutcome {
        self.observed
    }

    pub fn replicates(&self) -> &[IceOutcome] {
        &self.replicates
    }

    pub fn r(&self) -> usize {
        self.replicates.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn lambda(&self) -> ShadowPrice {
        self.observed.lambda
    }

    pub fn perspective(&self) -> Perspective {
        self.observed.perspective
    }
}

/// SplitMix64 finalizer over (master seed, replicate index); the
/// documented stream-splitting function behind per-replicate RNGs.
fn replicate_stream_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn replicate_rng(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(replicate_stream_seed(master, index))
}

/// Draws `r` bootstrap replicates of the between-arm mean differences
/// and standardizes each into an [`IceOutcome`], along with the observed
/// full-sample outcome.
///
/// Identical (inputs, r, seed) produce a bit-identical scatter
/// regardless of how many threads compute it.
pub fn resample(
    std: &ArmSample,
    new: &ArmSample,
    r: usize,
    seed: u64,
    lambda: ShadowPrice,
    perspective: Perspective,
) -> Result<BootstrapScatter, BootstrapError> {
    if r < MIN_REPLICATES {
        return Err(BootstrapError::BadReplicationCount(r));
    }
    let observed = standardize(
        new.mean(Variable::Effe) - std.mean(Variable::Effe),
        new.mean(Variable::Cost) - std.mean(Variable::Cost),
        lambda,
        perspective,
    );

    let std_records = std.records();
    let new_records = new.records();
    let replicates: Vec<IceOutcome> = (0..r as u64)
        .into_par_iter()
        .map(|index| {
            let mut rng = replicate_rng(seed, index);
            let mut std_effe = 0.0;
            let mut std_cost = 0.0;
            for _ in 0..std_records.len() {
                let rec = std_records[rng.random_range(0..std_records.len())];
                std_effe += rec.effe;
                std_cost += rec.cost;
            }
            let mut new_effe = 0.0;
            let mut new_cost = 0.0;
            for _ in 0..new_records.len() {
                let rec = new_records[rng.random_range(0..new_records.len())];
                new_effe += rec.effe;
                new_cost += rec.cost;
            }
            let delta_e = new_effe / new_records.len() as f64 - std_effe / std_records.len() as f64;
            let delta_c = new_cost / new_records.len() as f64 - std_cost / std_records.len() as f64;
            standardize(delta_e, delta_c, lambda, perspective)
        })
        .collect();

    BootstrapScatter::from_parts(observed, replicates, seed)
}

/// The incremental cost-effectiveness ratio y/x of a standardized point,
/// or `None` on the x = 0 axis.
///
/// The ratio is unstable near x = 0 and conflates opposite quadrants
/// (the sign survives negating both coordinates), which is why angular
/// wedges carry the inference instead.
pub fn icer(outcome: &IceOutcome) -> Option<f64> {
    if outcome.x == 0.0 {
        None
    } else {
        Some(outcome.y / outcome.x)
    }
}
