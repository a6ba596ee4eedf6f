use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use xxring::sweep::{Axis, FigureId, Quantity};
use xxring::table_io::Format;

#[derive(Parser, Debug)]
#[command(
    name = "xxring",
    version,
    about = "Thermal entanglement in Heisenberg XX/XXZ spin rings"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Exchange coupling J
    #[arg(long = "j", global = true, default_value_t = 1.0, allow_negative_numbers = true)]
    pub j: f64,

    /// Magnetic field B
    #[arg(long = "b", global = true, default_value_t = 0.0, allow_negative_numbers = true)]
    pub b: f64,

    /// Temperature T (k_B = 1)
    #[arg(long = "t", global = true, allow_negative_numbers = true)]
    pub t: Option<f64>,

    /// zz anisotropy Delta
    #[arg(long, global = true, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta: f64,

    /// Number of ring sites
    #[arg(long, global = true, default_value_t = 4)]
    pub n_sites: usize,

    /// Output file (directory for `figure fig1b`); stdout when omitted
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    /// Worker threads for sweeps [default: all cores]
    #[arg(long, global = true, env = "XXRING_THREADS")]
    pub threads: Option<usize>,

    /// Seed for randomised validation draws
    #[arg(long, global = true, default_value_t = xxring::validate::DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Jsonl => Format::JsonLines,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Numeric eigenvalues, next to the closed form when N = 4 and Delta = 0
    Spectrum,

    /// Summary of the thermal (or ground-manifold) state and a reduced pair state
    State {
        #[arg(long, default_value = "1,3", value_parser = parse_pair)]
        pair: (usize, usize),

        /// Use the ground-manifold state instead of a finite temperature
        #[arg(long)]
        zero_temp: bool,

        /// Also list the non-zero Hamiltonian matrix elements
        #[arg(long)]
        hamiltonian: bool,
    },

    /// Concurrence of one pair, optionally with the full entanglement report
    Concurrence {
        #[arg(long, default_value = "1,3", value_parser = parse_pair)]
        pair: (usize, usize),

        /// Add i-concurrences, global entanglement Q and the residual
        #[arg(long)]
        full: bool,

        #[arg(long)]
        zero_temp: bool,
    },

    /// Evaluate quantities over a (B, T, Delta) grid
    Sweep(SweepArgs),

    /// Regenerate a preset figure dataset
    Figure {
        #[arg(value_parser = parse_figure)]
        id: FigureId,
    },

    /// Critical temperatures of the alternate-pair concurrence
    Tc {
        #[arg(long, default_value = "0.01,5", value_parser = parse_bracket)]
        bracket: (f64, f64),

        #[arg(long, default_value_t = xxring::sweep::DEFAULT_TC_TOL)]
        tol: f64,

        /// Concurrence treated as zero at or below this value (level 0)
        #[arg(long, default_value_t = xxring::sweep::DEFAULT_POSITIVITY_FLOOR)]
        floor: f64,

        /// Contour level; 0 is the boundary of the entangled region
        #[arg(long, default_value_t = 0.0)]
        level: f64,
    },

    /// Run the self-consistency checks; exit status 0 iff all pass
    Validate {
        #[arg(long, default_value_t = xxring::validate::DEFAULT_DRAWS)]
        draws: usize,

        /// Fewer draws and coarser grids
        #[arg(long)]
        quick: bool,

        /// Run only these check ids
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Field axis: `x`, `min:max:count` or `v1,v2,...` [default: --b]
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    pub b_axis: Option<Axis>,

    /// Temperature axis, same syntax [default: --t]
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    pub t_axis: Option<Axis>,

    /// Anisotropy axis, same syntax [default: --delta]
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    pub delta_axis: Option<Axis>,

    #[arg(long, value_delimiter = ',', default_value = "c_alternate", value_parser = parse_quantity)]
    pub quantities: Vec<Quantity>,

    /// Evaluate on the ground-manifold state instead of a temperature axis
    #[arg(long)]
    pub zero_temp: bool,

    /// Closed-form C_alternate and Z when N = 4 and Delta = 0
    #[arg(long)]
    pub fast: bool,

    /// State used for q and ic
    #[arg(long, value_enum, default_value_t = GlobalState::Ground)]
    pub global_state: GlobalState,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlobalState {
    Ground,
    Thermal,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected i,j")?;
    let a = a.trim().parse().map_err(|_| format!("bad site {a:?}"))?;
    let b = b.trim().parse().map_err(|_| format!("bad site {b:?}"))?;
    Ok((a, b))
}

fn parse_bracket(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected lo,hi")?;
    let lo: f64 = a.trim().parse().map_err(|_| format!("bad number {a:?}"))?;
    let hi: f64 = b.trim().parse().map_err(|_| format!("bad number {b:?}"))?;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err("bracket must satisfy 0 < lo < hi".into());
    }
    Ok((lo, hi))
}

fn parse_figure(s: &str) -> Result<FigureId, String> {
    s.parse().map_err(|e: xxring::Error| e.to_string())
}

fn parse_quantity(s: &str) -> Result<Quantity, String> {
    s.trim().parse().map_err(|e: xxring::Error| e.to_string())
}

fn parse_axis(s: &str) -> Result<Axis, String> {
    let num = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("bad number {x:?}"));
    let axis = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, count] = parts[..] else {
            return Err("range axis is min:max:count".into());
        };
        let count = count.trim().parse().map_err(|_| format!("bad count {count:?}"))?;
        Axis::range(num(min)?, num(max)?, count)
    } else {
        Axis::Values(s.split(',').map(num).collect::<Result<_, _>>()?)
    };
    axis.validate("grid").map_err(|e| e.to_string())?;
    Ok(axis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_syntax() {
        assert_eq!(parse_axis("0.5").unwrap(), Axis::fixed(0.5));
        assert_eq!(parse_axis("-1:1:201").unwrap(), Axis::range(-1.0, 1.0, 201));
        assert_eq!(parse_axis("0.01,0.1,0.5").unwrap(), Axis::Values(vec![0.01, 0.1, 0.5]));
        assert!(parse_axis("1:0:3").is_err());
        assert!(parse_axis("0.1,0.1").is_err());
        assert!(parse_axis("1:2").is_err());
    }

    #[test]
    fn pair_and_bracket() {
        assert_eq!(parse_pair("1,2").unwrap(), (1, 2));
        assert!(parse_pair("1").is_err());
        assert_eq!(parse_bracket("0.01,5").unwrap(), (0.01, 5.0));
        assert!(parse_bracket("0,5").is_err());
    }

    #[test]
    fn negative_globals_parse() {
        let cli = Cli::try_parse_from(["xxring", "concurrence", "--b", "-0.5", "--j", "-1", "--t", "0.2"]).unwrap();
        assert_eq!(cli.global.b, -0.5);
        assert_eq!(cli.global.j, -1.0);
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
