use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "wgamma",
    version,
    about = "Limiting spectra of partially transposed Wishart matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact moments M_1..M_p, computed by every available route.
    Moments {
        /// Decimal or fraction, e.g. 2, 0.25 or 1/3.
        #[arg(long)]
        m: String,
        #[arg(long)]
        n: String,
        #[arg(long)]
        p: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Density curve CSV: JSON header line, then x,rho rows.
    Density {
        #[arg(long)]
        m: String,
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = wgamma::transforms::DEFAULT_POINTS)]
        points: usize,
        /// Grid bounds; both default to the support hull padded by 5%.
        #[arg(long, allow_hyphen_values = true)]
        lo: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        hi: Option<String>,
        /// Output file; standard output when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Region label, positivity verdict and support edges.
    Classify {
        #[arg(long)]
        m: String,
        #[arg(long)]
        n: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Region map over a rectangular (m, n) grid.
    Sweep {
        #[arg(long)]
        m_min: String,
        #[arg(long)]
        m_max: String,
        #[arg(long)]
        m_steps: usize,
        #[arg(long)]
        n_min: String,
        #[arg(long)]
        n_max: String,
        #[arg(long)]
        n_steps: usize,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also write a gnuplot script plotting the sweep CSV.
        #[arg(long, requires = "output")]
        gnuplot: Option<PathBuf>,
    },
    /// Sample spectra of m·W^Γ and write them as CSV with a JSON sidecar.
    Simulate {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
        /// Histogram of all eigenvalues, binned over the padded support hull.
        #[arg(long)]
        histogram: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        bins: usize,
    },
    /// Empirical against exact moments, with bootstrap z-scores.
    Compare {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        d: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 4)]
        p: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}
