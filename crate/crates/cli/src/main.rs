mod commands;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

/// Simulation and analysis of photonic interferometers and free-fermion circuits.
#[derive(Parser, Debug)]
#[command(name = "fpl", version)]
pub struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Significant digits in CSV output.
    #[arg(long, global = true, default_value_t = 12)]
    pub digits: usize,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Haar-random unitary as matrix JSON.
    Haar {
        #[arg(long)]
        modes: usize,
    },
    /// Decompose a unitary into beam splitters and phase shifters.
    Reck {
        #[command(flatten)]
        matrix: MatrixArgs,
        /// Project a nearly unitary matrix onto the closest unitary first.
        #[arg(long)]
        project: bool,
    },
    /// Build a chip and emit its element list or unitary.
    Chip {
        #[command(subcommand)]
        kind: ChipKind,
        /// Emit the composed unitary instead of the element list.
        #[arg(long, global = true)]
        unitary: bool,
    },
    /// Exact output distribution as CSV.
    Dist {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_enum, default_value_t = RegimeArg::Quantum)]
        regime: RegimeArg,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Draw output samples as CSV.
    Sample {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_enum, default_value_t = RegimeArg::Quantum)]
        regime: RegimeArg,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        count: usize,
    },
    /// Birthday-paradox curves, bunching fractions and full-bunching ratios.
    /// Birthday curves use `--modes`, or the size of a given interferometer.
    Bunching {
        /// Largest photon number of the birthday curves.
        #[arg(long, default_value_t = 10)]
        max_photons: usize,
        /// Fully indistinguishable fraction; adds degraded full-bunching ratios per photon number.
        #[arg(long)]
        alpha: Option<f64>,
        /// Interferometer to analyse with --input or --photons.
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        state: StateArgs,
    },
    /// Weak simulation of two layers of Haar-random two-mode gates.
    Depth3 {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        modes: Option<usize>,
        #[arg(long)]
        count: usize,
    },
    /// Reconstruct an interferometer from characterization data.
    Tomo {
        #[command(subcommand)]
        action: TomoAction,
    },
    /// Statistical validation of sampler output.
    Validate {
        #[command(subcommand)]
        test: ValidateTest,
    },
    /// Emit the published matrices.
    Fixtures {
        /// One of U5t, U5r, U7t, U7r, U9t; all when omitted.
        #[arg(long)]
        name: Option<String>,
    },
    /// Histograms of chip figures over random-phases and Haar ensembles.
    EnsembleSim {
        #[arg(long, default_value_t = 7)]
        modes: usize,
        #[arg(long, default_value_t = 7)]
        layers: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 50)]
        bins: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum ChipKind {
    /// Random-phases chip with `layers` beam-splitter layers.
    Random {
        #[arg(long)]
        modes: usize,
        #[arg(long)]
        layers: usize,
    },
    /// Random-phases layout with phases from a CSV (rows = modes, columns = layers).
    Table {
        #[arg(long, conflicts_with = "published", required_unless_present = "published")]
        phases: Option<PathBuf>,
        /// Published table for 7 or 9 modes.
        #[arg(long)]
        published: Option<usize>,
        /// Beam-splitter layers; defaults to one more than the phase columns.
        #[arg(long)]
        layers: Option<usize>,
    },
    /// Read an element-list JSON file.
    File {
        path: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum TomoAction {
    /// Write synthetic characterization data for an interferometer.
    Simulate {
        #[command(flatten)]
        matrix: MatrixArgs,
        /// Photons per configuration; exact data when omitted.
        #[arg(long)]
        counts: Option<u64>,
        #[arg(long, default_value_t = 1.0)]
        indistinguishability: f64,
        #[arg(long)]
        dir: PathBuf,
    },
    /// Sweep every reference choice, then refine stochastically.
    Reconstruct {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 1000)]
        iterations: usize,
        /// Wall-clock limit of the refinement in seconds.
        #[arg(long)]
        seconds: Option<f64>,
        /// Perturbation widths are the error bars divided by this.
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        /// Tolerated overshoot of the arccos argument; `inf` clamps everything.
        #[arg(long)]
        slack: Option<f64>,
        /// Report the gate fidelity against this matrix.
        #[command(flatten)]
        target: TargetArgs,
    },
}

#[derive(Args, Debug, Default)]
pub struct TargetArgs {
    #[arg(long = "target-fixture")]
    pub fixture: Option<String>,
    #[arg(long = "target", conflicts_with = "fixture")]
    pub file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum ValidateTest {
    /// Row-norm test against uniform sampling.
    Aa {
        #[command(flatten)]
        setup: ValidateArgs,
    },
    /// Likelihood-ratio test against distinguishable photons.
    Likelihood {
        #[command(flatten)]
        setup: ValidateArgs,
        #[arg(long, default_value_t = fpl_core::validation::K1)]
        k1: f64,
        #[arg(long, default_value_t = fpl_core::validation::K2)]
        k2: f64,
    },
    /// Success rate as a function of the sample-set size.
    Curves {
        #[command(flatten)]
        setup: ValidateArgs,
        #[arg(long, value_enum, default_value_t = CurveKind::Aa)]
        test: CurveKind,
        #[arg(long, default_value = "quantum")]
        source: String,
        #[arg(long, value_delimiter = ',', default_value = "1,10,20,50,100,200,500")]
        set_sizes: Vec<usize>,
        #[arg(long, default_value_t = fpl_core::validation::K1)]
        k1: f64,
        #[arg(long, default_value_t = fpl_core::validation::K2)]
        k2: f64,
    },
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub matrix: MatrixArgs,
    #[command(flatten)]
    pub state: StateArgs,
    /// Sample-set size of simulated runs.
    #[arg(long, default_value_t = 500)]
    pub nset: usize,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Score this sample-list CSV instead of simulating.
    #[arg(long)]
    pub samples: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CurveKind {
    Aa,
    Likelihood,
}

/// Interferometer chosen by fixture name, matrix JSON file, or a Haar draw
/// of `--modes` modes.
#[derive(Args, Debug, Default)]
pub struct MatrixArgs {
    #[arg(long, conflicts_with = "unitary_file")]
    pub fixture: Option<String>,
    #[arg(long = "unitary-file")]
    pub unitary_file: Option<PathBuf>,
    #[arg(long)]
    pub modes: Option<usize>,
}

/// Input state as an occupation string, or `--photons` in the first modes.
#[derive(Args, Debug, Default)]
pub struct StateArgs {
    #[arg(long, conflicts_with = "photons")]
    pub input: Option<String>,
    #[arg(long)]
    pub photons: Option<usize>,
}

/// Partial distinguishability: groups of 1-based input modes whose photons
/// interfere, and the weight `r` (or pairwise indistinguishability `p`).
#[derive(Args, Debug, Default)]
pub struct ModelArgs {
    /// e.g. `1,2;3`
    #[arg(long)]
    pub groups: Option<String>,
    #[arg(long, conflicts_with = "p")]
    pub r: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    Quantum,
    Classical,
    Mixed,
}

fn configure_threads() -> Result<(), String> {
    if let Ok(value) = std::env::var("FPL_THREADS") {
        let n: usize = value.parse().map_err(|_| format!("FPL_THREADS must be a positive integer, got {value:?}"))?;
        if n == 0 {
            return Err("FPL_THREADS must be positive".into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("fpl: {e}");
        return ExitCode::from(2);
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fpl: {e}");
            ExitCode::from(if e.is_capacity() { 3 } else { 2 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::Cli;
    use clap::CommandFactory;

    #[test]
    fn argument_definitions_are_consistent() {
        Cli::command().debug_assert();
    }
}
