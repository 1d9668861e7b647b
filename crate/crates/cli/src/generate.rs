use std::path::PathBuf;

use clap::{Args, ValueEnum};

use cfl_core::encoders::spectrum::{
    DEFAULT_CHANNELS, REFERENCE_APS, REFERENCE_SIDE_M, REFERENCE_SPACING_M,
};
use cfl_core::encoders::{
    channel_dependent_instance, clauses_for_ratio, coloring_instance, emit_dimacs, graph,
    network_coding_instance, parse_xyz, random_ksat, random_ksat_distinct, scheduling_instance,
    spaced_deployment, spectrum_instance_encoded, BandRule, CodingNetwork, Deployment,
    InterferenceGraph, SpectrumEncoding,
};

use crate::io::{emit, read_text};
use crate::{CmdResult, Failure, SeedArgs, EXIT_OK};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Random k-SAT (DIMACS output).
    Ksat,
    /// Graph colouring from an edge list.
    Coloring,
    /// Channel-dependent interference from `u v c` rows.
    Channel,
    /// Collision-free scheduling of n transmitters over D slots.
    Scheduling,
    /// Channel allocation for an AP deployment.
    Spectrum,
    /// Network coding over GF(2).
    Netcode,
    /// Synthetic AP coordinates as `x y z` rows.
    Deployment,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub family: Family,
    /// Variables, vertices, transmitters or APs.
    #[arg(long)]
    pub n: Option<usize>,
    /// Clause count (k-SAT).
    #[arg(long, conflicts_with = "r")]
    pub m: Option<usize>,
    /// Clause density M/N (k-SAT).
    #[arg(long)]
    pub r: Option<f64>,
    /// Clause width (k-SAT).
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    /// Domain size: colours, channels or slots.
    #[arg(long = "D")]
    pub d: Option<u32>,
    /// Reject repeated clauses (k-SAT).
    #[arg(long)]
    pub distinct: bool,
    /// Edge list with 1-based `u v` rows, or `u v c` rows for `channel`.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// AP coordinates as `x y z` rows; synthetic placement when absent.
    #[arg(long)]
    pub xyz: Option<PathBuf>,
    /// Side of the synthetic square in metres.
    #[arg(long, default_value_t = REFERENCE_SIDE_M)]
    pub side: f64,
    /// Minimum synthetic AP spacing in metres.
    #[arg(long, default_value_t = REFERENCE_SPACING_M)]
    pub spacing: f64,
    /// Band rules as `radius:separation` pairs.
    #[arg(long = "radius-rules", default_value = "5:3,10:2,30:1")]
    pub radius_rules: String,
    /// Clause layout for `spectrum`.
    #[arg(long, value_enum, default_value_t = Encoding::Pairwise)]
    pub encoding: Encoding,
    /// Coding network as JSON; the butterfly when absent.
    #[arg(long)]
    pub network: Option<PathBuf>,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Encoding {
    PerAp,
    Pairwise,
}

impl From<Encoding> for SpectrumEncoding {
    fn from(e: Encoding) -> Self {
        match e {
            Encoding::PerAp => SpectrumEncoding::PerAp,
            Encoding::Pairwise => SpectrumEncoding::Pairwise,
        }
    }
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::usage(format!("{flag} is required for this family")))
}

fn graph_file(args: &GenerateArgs) -> Result<String, Failure> {
    read_text(required(args.graph.as_ref(), "--graph")?)
}

/// Deployment from `--xyz`, or synthetic from `--n`, `--side`, `--spacing`.
pub fn deployment(
    xyz: Option<&PathBuf>,
    n: Option<usize>,
    side: f64,
    spacing: f64,
    seed: impl FnOnce() -> u64,
) -> Result<Deployment, Failure> {
    match xyz {
        Some(path) => Ok(parse_xyz(&read_text(path)?)?),
        None => Ok(spaced_deployment(
            n.unwrap_or(REFERENCE_APS),
            side,
            spacing,
            seed(),
        )?),
    }
}

pub fn generate(args: GenerateArgs) -> CmdResult {
    let text = match args.family {
        Family::Ksat => {
            let n = required(args.n, "--n")?;
            let m = match (args.m, args.r) {
                (Some(m), None) => m,
                (None, Some(r)) if r.is_finite() && r >= 0.0 => clauses_for_ratio(n, r),
                (None, Some(r)) => {
                    return Err(Failure::usage(format!("--r must be nonnegative, got {r}")))
                }
                _ => return Err(Failure::usage("one of --m or --r is required for ksat")),
            };
            let seed = args.seed.resolve();
            let inst = if args.distinct {
                random_ksat_distinct(n, m, args.k, seed)?
            } else {
                random_ksat(n, m, args.k, seed)?
            };
            emit_dimacs(&inst)?
        }
        Family::Coloring => {
            let g = InterferenceGraph::parse_edge_list(&graph_file(&args)?, args.n)?;
            coloring_instance(&g, required(args.d, "--D")?)?.to_json() + "\n"
        }
        Family::Channel => {
            let channels = required(args.d, "--D")?;
            let graphs =
                graph::parse_channel_edge_list(&graph_file(&args)?, args.n, channels as usize)?;
            channel_dependent_instance(&graphs)?.to_json() + "\n"
        }
        Family::Scheduling => {
            scheduling_instance(required(args.n, "--n")?, required(args.d, "--D")?)?.to_json()
                + "\n"
        }
        Family::Spectrum => {
            let rules = BandRule::parse_list(&args.radius_rules)?;
            let dep = deployment(args.xyz.as_ref(), args.n, args.side, args.spacing, || {
                args.seed.resolve()
            })?;
            let channels = args.d.unwrap_or(DEFAULT_CHANNELS);
            spectrum_instance_encoded(&dep, &rules, channels, args.encoding.into())?.to_json()
                + "\n"
        }
        Family::Netcode => {
            let net = match &args.network {
                Some(path) => serde_json::from_str::<CodingNetwork>(&read_text(path)?)
                    .map_err(|e| Failure::from(cfl_core::Error::from(e)))?,
                None => CodingNetwork::butterfly(),
            };
            network_coding_instance(&net)?.instance.to_json() + "\n"
        }
        Family::Deployment => deployment(None, args.n, args.side, args.spacing, || {
            args.seed.resolve()
        })?
        .to_xyz(),
    };
    emit(args.out.as_ref(), &text)?;
    Ok(EXIT_OK)
}
