//! Nonparametric incremental cost-effectiveness (ICE) inference.
//!
//! Given per-patient effectiveness and cost observations for a standard
//! and a new treatment, this crate resamples the between-arm mean
//! differences with replacement, places the replicates on the
//! cost-effectiveness plane, and summarizes them with wedge-shaped
//! angular confidence regions, a two-parameter family of (possibly
//! nonlinear) preference maps with executable coherence axioms,
//! cost-effectiveness frontier classification, and SVG/text reporting.
//!
//! The `ice` binary exposes the same machinery as subcommands; see the
//! [`cli`] module.

pub mod bootstrap;
pub mod cli;
pub mod data_model;
pub mod frontier;
pub mod preference;
pub mod report;
pub mod scale;
pub mod wedge;

pub use bootstrap::{icer, resample, BootstrapScatter};
pub use data_model::{
    generate_demo_data, ingest_csv, split_arms, summarize, write_csv, Arm, ArmSample,
    PatientRecord, SummaryStats, Variable,
};
pub use frontier::{
    analyze as frontier_analyze, extended_dominance, mixture_compare, strict_dominance,
    FrontierResult, TreatmentOption,
};
pub use preference::{
    omega_bounds, signed_power, AxiomReport, PreferenceMap, PreferenceValue, ReturnsToScale,
};
pub use scale::{
    ice_scale, nearest_power_of_10, standardize, IceOutcome, IceScaleResult, LambdaSource,
    Perspective, ScaleRule, ShadowPrice,
};
pub use wedge::{compute_wedge, ice_angle, quadrant_counts, ConfidenceWedge, IceAngle, TailRule};
