use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "polyspectra", version, about = "Weighted pseudospectra of matrix polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues with algebraic and geometric multiplicities.
    Eigs(Common),
    /// Sampled s_n/w on a grid, with contours at each ε.
    Field {
        #[command(flatten)]
        common: Common,
        /// Overlay fault points on the SVG.
        #[arg(long)]
        faults: bool,
    },
    /// Boundary curves of Λε traced from seed points.
    Trace {
        #[command(flatten)]
        common: Common,
        /// Ray origin for a boundary seed; repeatable. Defaults to the eigenvalues.
        #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true, action = clap::ArgAction::Append)]
        seed: Vec<f64>,
    },
    /// Connected components of Λε and the eigenvalues they hold.
    Components(Common),
    /// Fault points where the two lowest distinct singular-value surfaces meet.
    Faults(Common),
    /// Distance to the nearest polynomial with a multiple eigenvalue; the
    /// first --eps value is the search limit.
    Distance(Common),
    /// Boundary perturbations realising μ as an eigenvalue.
    Perturb {
        #[command(flatten)]
        common: Common,
        #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true, required = true)]
        mu: Vec<f64>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Problem description (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Levels ε; defaults to the input's list, else a logarithmic sweep.
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    pub eps: Vec<f64>,
    #[arg(long, num_args = 2, value_names = ["NX", "NY"])]
    pub grid: Option<Vec<usize>>,
    #[arg(long, num_args = 4, value_names = ["XMIN", "XMAX", "YMIN", "YMAX"], allow_negative_numbers = true)]
    pub window: Option<Vec<f64>>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eigs(_) => "eigs",
            Command::Field { .. } => "field",
            Command::Trace { .. } => "trace",
            Command::Components(_) => "components",
            Command::Faults(_) => "faults",
            Command::Distance(_) => "distance",
            Command::Perturb { .. } => "perturb",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Eigs(c) | Command::Components(c) | Command::Faults(c) | Command::Distance(c) => c,
            Command::Field { common, .. } | Command::Trace { common, .. } | Command::Perturb { common, .. } => common,
        }
    }
}
