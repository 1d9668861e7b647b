//! Constructors turning problem families and external formats into
//! [`CspInstance`](crate::csp::CspInstance) values.

pub mod dimacs;
pub mod gf2;
pub mod graph;
pub mod ksat;
pub mod netcode;
pub mod spectrum;

pub use dimacs::{emit_dimacs, parse_dimacs};
pub use graph::{
    channel_dependent_instance, coloring_instance, scheduling_instance, InterferenceGraph,
};
pub use ksat::{clauses_for_ratio, random_ksat, random_ksat_distinct, thresholds};
pub use netcode::{network_coding_instance, CodingNetwork, NetworkCodingInstance};
pub use spectrum::{
    default_band_rules, mean_neighbors, parse_xyz, reference_deployment, spaced_deployment,
    spectrum_instance, spectrum_instance_encoded, spectrum_instance_pairwise, synthetic_deployment,
    BandRule, Deployment, Point, SpectrumEncoding,
};
