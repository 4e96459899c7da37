mod cache;
mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cache::{Cache, Lookup};
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "qunip", version, about = "PBW and dual canonical bases of quantum unipotent subgroups")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
pub struct Common {
    /// Preset root datum: A1, A2, A3, B2, G2, A1~.
    #[arg(long = "type", global = true, value_name = "PRESET")]
    pub preset: Option<String>,
    /// Root datum as JSON {"cartan": [[..]], "symmetrizers": [..]}.
    #[arg(long, global = true, value_name = "PATH", conflicts_with = "preset")]
    pub datum_file: Option<PathBuf>,
    /// Reduced word, 1-based letters such as 1,2,1.
    #[arg(long, global = true)]
    pub word: Option<String>,
    /// Sign e of the PBW family, +1 or -1.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub sign: Option<String>,
    /// Largest height of a weight the run may touch.
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(i64).range(1..))]
    pub height: i64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Directory for the content-hashed output cache.
    #[arg(long, global = true, value_name = "DIR")]
    pub cache: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Pbw,
    DualPbw,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Weight-space dimensions (Gram ranks) against PBW counts.
    Gram {
        /// Also print the pivot Gram matrices.
        #[arg(long)]
        matrices: bool,
    },
    /// Word expansion of the PBW monomial F_e(c).
    Pbw {
        #[arg(long)]
        c: String,
    },
    /// Word expansion of the root vector F_e(β_k)^{(power)}.
    Rootvec {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        power: u32,
    },
    /// Dual PBW coordinates of the dual canonical element B^up(c).
    Dcb {
        #[arg(long)]
        c: String,
    },
    /// Straightening of a reversed pair of root vectors.
    Straighten {
        #[arg(long)]
        j: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        cj: u32,
        #[arg(long, default_value_t = 1)]
        ck: u32,
        #[arg(long, value_enum, default_value_t = BasisArg::Pbw)]
        basis: BasisArg,
    },
    /// B^up(c1) B^up(c2) in the dual canonical basis.
    Product {
        #[arg(long)]
        c1: String,
        #[arg(long)]
        c2: String,
    },
    /// Whether B^up(c1) B^up(c2) is a single q-power times a basis element.
    Compat {
        #[arg(long)]
        c1: String,
        #[arg(long)]
        c2: String,
    },
    /// Flag-minor report: exponent matrix, strong compatibility, extremal identities.
    Minors {
        /// Measure every q-commutation exponent from products.
        #[arg(long)]
        check_qcommute: bool,
        /// Check the interval-free factorization for all |c| up to the degree.
        #[arg(long)]
        check_factor: bool,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        degree: u32,
    },
    /// Initial seed record built from the flag minors.
    Seed,
    /// Apply crystal operators such as f1,e2,f*1,f2^3 to Lusztig data.
    Crystal {
        /// Starting Lusztig data for the word; u_∞ when omitted.
        #[arg(long)]
        c: Option<String>,
        #[arg(long, default_value = "")]
        ops: String,
    },
}

fn run(cli: &Cli) -> Result<(String, bool), CliError> {
    let setup = commands::Setup::new(&cli.common, &cli.cmd)?;
    let request = format!("v1|{}|{:?}|{:?}|{:?}", setup.fingerprint(), cli.common.height, cli.common.format, cli.cmd);
    let cache = match &cli.common.cache {
        Some(dir) => Some(Cache::open(dir).map_err(|e| CliError::validation(format!("cache directory: {e}")))?),
        None => None,
    };
    let key = Cache::key(&request);
    if let Some(c) = &cache {
        match c.get(&key) {
            Lookup::Hit(text) => return Ok((text, true)),
            Lookup::Corrupt => eprintln!("qunip: cache entry {key} is corrupt; recomputing"),
            Lookup::Miss => {}
        }
    }
    let out = commands::execute(&setup, &cli.cmd)?;
    let text = match cli.common.format {
        Format::Json => serde_json::to_string_pretty(&out.json).expect("json") + "\n",
        Format::Table => out.table,
    };
    if let Some(c) = &cache {
        if out.passed {
            c.put(&key, &text).map_err(|e| CliError::validation(format!("cache write: {e}")))?;
        }
    }
    Ok((text, out.passed))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((text, passed)) => {
            print!("{text}");
            if passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("qunip: verification failed");
                ExitCode::from(error::Kind::Internal.exit_code() as u8)
            }
        }
        Err(e) => {
            eprintln!("qunip: {e}");
            ExitCode::from(e.kind.exit_code() as u8)
        }
    }
}
