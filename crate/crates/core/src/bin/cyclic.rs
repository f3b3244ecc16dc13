use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cyclic_core::cli::{exit, run, Options};
use cyclic_core::io::InputDocument;

#[derive(Parser)]
#[command(name = "cyclic", version, about = "Exact Hochschild, cyclic and S¹-equivariant homology")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Exit with code 3 when a truncation is not certified.
    #[arg(long, global = true)]
    require_certified: bool,
    /// Worker threads for rank computations.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Omit the timing trailer.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Args)]
struct Common {
    path: PathBuf,
    /// Word-length bound.
    #[arg(long = "L")]
    length: Option<usize>,
    /// Degree window `a b`.
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    window: Option<Vec<i64>>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the A∞ relations, strict units and S¹-complex equations in the input.
    Validate {
        path: PathBuf,
    },
    /// Hochschild homology of the cyclic bar complex and of the non-unital complex.
    Hh(Common),
    /// Cyclic homology in one flavor.
    Hc {
        #[command(flatten)]
        common: Common,
        /// orbits|plus, fixed|minus, tate|periodic.
        #[arg(long)]
        flavor: Option<String>,
        /// auto, nu or reduced.
        #[arg(long)]
        model: Option<String>,
    },
    /// Equivariant homology of an S¹-complex and its long exact sequences.
    Equiv {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        flavor: Option<String>,
    },
    /// Extend a chain map to an S¹-equivariant morphism or report the obstruction.
    Enhance {
        path: PathBuf,
        #[arg(long)]
        jmax: Option<usize>,
    },
    /// Spectral sequence pages and the degeneration verdict.
    Ss {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rmax: Option<usize>,
    },
    /// Calabi–Yau checks: proper, strong-proper, smooth or smooth-lift.
    Cy {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "proper")]
        mode: String,
    },
}

fn common_options(c: &Common) -> Options {
    Options { length: c.length, window: c.window.as_ref().map(|w| (w[0], w[1])), ..Options::default() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(exit::INPUT as u8);
        }
    }
    let (name, path, opts) = match &cli.command {
        Command::Validate { path } => ("validate", path, Options::default()),
        Command::Hh(c) => ("hh", &c.path, common_options(c)),
        Command::Hc { common, flavor, model } => {
            ("hc", &common.path, Options { flavor: flavor.clone(), model: model.clone(), ..common_options(common) })
        }
        Command::Equiv { common, flavor } => ("equiv", &common.path, Options { flavor: flavor.clone(), ..common_options(common) }),
        Command::Enhance { path, jmax } => ("enhance", path, Options { j_max: *jmax, ..Options::default() }),
        Command::Ss { common, rmax } => ("ss", &common.path, Options { r_max: *rmax, ..common_options(common) }),
        Command::Cy { common, mode } => ("cy", &common.path, Options { mode: Some(mode.clone()), ..common_options(common) }),
    };
    let doc = std::fs::read_to_string(path)
        .map_err(|e| cyclic_core::Error::Input(format!("{}: {e}", path.display())))
        .and_then(|text| InputDocument::from_json(&text));
    let input = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let report = doc.and_then(|doc| run(name, &doc, &input, &opts));
    match report {
        Ok(r) => {
            print!("{}", r.canonical());
            if !cli.no_timing {
                print!("{}", r.trailer());
            }
            ExitCode::from(r.exit_code(cli.require_certified) as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::INPUT as u8)
        }
    }
}
