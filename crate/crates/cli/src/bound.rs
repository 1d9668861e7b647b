use clap::{Args, ValueEnum};

use cfl_core::cfl::{gamma, iteration_bound_log, BoundKind, CflParams};

use crate::{CmdResult, EXIT_OK};

/// Raw bounds below this are printed in decimal as well.
const RAW_LIMIT: f64 = 1e15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    General,
    Coloring,
    /// Print both and compare.
    Both,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    /// Number of variables.
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long = "D")]
    pub d: u32,
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    /// Failure probability.
    #[arg(long)]
    pub eps: f64,
    #[arg(long, value_enum, default_value_t = Kind::General)]
    pub kind: Kind,
}

fn line(label: &str, log_value: f64) -> String {
    let raw = log_value.exp();
    if raw < RAW_LIMIT {
        format!("{label}: ln = {log_value:.6}, bound = {raw:.6}")
    } else {
        format!("{label}: ln = {log_value:.6}")
    }
}

pub fn bound(args: BoundArgs) -> CmdResult {
    let params = CflParams::new(args.a, args.b)?;
    if args.d == 0 {
        return Err(crate::Failure::usage("--D must be at least 1"));
    }
    let g = gamma(&params, args.d);
    println!("gamma = {g:.9}");
    let kinds: &[(BoundKind, &str)] = match args.kind {
        Kind::General => &[(BoundKind::General, "general")],
        Kind::Coloring => &[(BoundKind::Coloring, "coloring")],
        Kind::Both => &[
            (BoundKind::General, "general"),
            (BoundKind::Coloring, "coloring"),
        ],
    };
    let mut values = Vec::new();
    for &(kind, label) in kinds {
        let v = iteration_bound_log(args.n, g, args.eps, kind)?;
        println!("{}", line(label, v));
        values.push(v);
    }
    if let [general, coloring] = values[..] {
        let rel = if coloring < general {
            "<"
        } else if coloring > general {
            ">"
        } else {
            "="
        };
        println!("coloring {rel} general");
    }
    Ok(EXIT_OK)
}
