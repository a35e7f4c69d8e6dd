use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use bwlist_core::bounds::{applicable_upper, default_eta_grid, lower_eps, validate_bounds, BoundReport};
use bwlist_core::lattice::{generator_matrix, is_member_cvector};
use bwlist_core::oracle::Oracle;
use bwlist_core::rm::{gaussian_binomial, lower_bound_instance, rm_min_distance};
use bwlist_core::{parse_rational, BigRational, CVector, Decoder, Error};

mod bench;

const FORMAT_HELP: &str = "\
Vector format: whitespace-separated coordinates `re,im`, each part an integer
or a fraction `p/q` (for example `1/2,-3/4 0,1`). A level-n vector has 2^n
coordinates. Lists are printed one entry per line as `point<TAB>rsd`, where
rsd is the exact squared distance divided by 2^n, sorted by coordinate
(real part, then imaginary part).

Exit codes: 0 success, 1 parse or validation error, 2 list larger than
--max-list, 3 internal invariant or bound check failed.";

#[derive(Parser, Debug)]
#[command(name = "bwlist", version, about = "List decoding of Barnes-Wall lattices", after_help = FORMAT_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Io {
    /// Read the input vector from this file instead of stdin
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// Write results to this file instead of stdout
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Output {
    /// Write results to this file instead of stdout
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List every lattice point within relative squared distance eta of the input
    Decode {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = rational)]
        eta: BigRational,
        /// Fail with exit code 2 when the list is longer than this
        #[arg(long)]
        max_list: Option<usize>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        io: Io,
    },
    /// Same list as `decode`, by exhaustive enumeration (small n only)
    Oracle {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = rational)]
        eta: BigRational,
        #[arg(long)]
        max_list: Option<usize>,
        /// Largest level the enumeration accepts
        #[arg(long, default_value_t = bwlist_core::oracle::DEFAULT_CAP)]
        cap: u32,
        #[command(flatten)]
        io: Io,
    },
    /// Print `true` when the input vector is a lattice point
    Member {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        io: Io,
    },
    /// Print the rows of the generator matrix
    Gen {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Minimum nonzero squared norm and the number of vectors achieving it
    Kissing {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = bwlist_core::oracle::DEFAULT_CAP)]
        cap: u32,
        /// Also print the shortest vectors
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Received word with many lattice points at rsd 1 - eps, and those points
    LowerBound {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = rational)]
        eps: BigRational,
        #[command(flatten)]
        out: Output,
    },
    /// Minimum distance of the Reed-Muller code RM(d, n)
    RmMindist {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: u32,
    },
    /// Check measured list sizes against the closed-form bounds
    Bounds {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 20)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated radii (default 1/4,5/12,1/2,5/8,3/4,7/8,1)
        #[arg(long, value_parser = rational, value_delimiter = ',')]
        eta: Vec<BigRational>,
        #[command(flatten)]
        out: Output,
    },
    /// Time the decoder and count its coordinate operations
    Bench(bench::BenchArgs),
}

fn rational(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn read_input<T: FromStr<Err = Error>>(path: &Option<PathBuf>) -> Result<T, Error> {
    let text = match path {
        Some(p) => fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::Io(e.to_string()))?;
            s
        }
    };
    text.parse()
}

fn read_word(n: u32, path: &Option<PathBuf>) -> Result<CVector, Error> {
    let r: CVector = read_input(path)?;
    if r.level() != n {
        return Err(Error::Parse(format!(
            "expected {} coordinates for n = {n}, got {}",
            1usize << n,
            r.len()
        )));
    }
    Ok(r)
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(fs::File::create(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), Error> {
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Error::Io(e.to_string()))
}

fn note_upper(n: u32, eta: &BigRational) {
    match applicable_upper(n, eta) {
        Some((v, id)) => eprintln!("# list size bound: {v} ({id})"),
        None => eprintln!("# list size bound: none at this radius"),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Decode {
            n,
            eta,
            max_list,
            workers,
            io,
        } => {
            let r = read_word(n, &io.input)?;
            note_upper(n, &eta);
            let (list, stats) = Decoder::new()
                .workers(workers)
                .max_list(max_list)
                .decode_with_stats(&r, &eta)?;
            eprintln!("# {} points, {} ops, {} lane", list.len(), stats.ops, stats.lane.name());
            write_out(&mut *open_output(&io.output)?, &list.to_string())?;
        }
        Command::Oracle {
            n,
            eta,
            max_list,
            cap,
            io,
        } => {
            let r = read_word(n, &io.input)?;
            note_upper(n, &eta);
            let list = Oracle::with_cap(cap).list(&r, &eta)?;
            if let Some(cap) = max_list.filter(|&c| list.len() > c) {
                return Err(Error::ListCapExceeded { size: list.len(), cap });
            }
            write_out(&mut *open_output(&io.output)?, &list.to_string())?;
        }
        Command::Member { n, io } => {
            let w = read_word(n, &io.input)?;
            write_out(&mut *open_output(&io.output)?, &format!("{}\n", is_member_cvector(&w)))?;
        }
        Command::Gen { n, out } => {
            let mut text = String::new();
            for row in generator_matrix(n).rows() {
                text.push_str(&format!("{row}\n"));
            }
            write_out(&mut *open_output(&out.output)?, &text)?;
        }
        Command::Kissing { n, cap, list, out } => {
            let s = Oracle::with_cap(cap).shortest_vectors(n)?;
            let mut text = format!(
                "n\tmin_norm_sq\tkissing\n{n}\t{}\t{}\n",
                s.min_norm_sq,
                s.kissing_number()
            );
            if list {
                text.push_str(&s.kissing.to_string());
            }
            write_out(&mut *open_output(&out.output)?, &text)?;
        }
        Command::LowerBound { n, eps, out } => {
            let inst = lower_bound_instance(n, &eps)?;
            let bound = lower_eps(&eps, n)?;
            let text = format!(
                "# r = {}\n# k = {}\n# witnesses = {} (Gaussian binomial {})\n# formula = {}\n{}",
                inst.r,
                inst.k,
                inst.witnesses.len(),
                gaussian_binomial(n, n - inst.k),
                bound.formula,
                inst.witnesses
            );
            write_out(&mut *open_output(&out.output)?, &text)?;
        }
        Command::RmMindist { d, n } => {
            println!("{}", rm_min_distance(d, n)?);
        }
        Command::Bounds {
            n,
            trials,
            seed,
            eta,
            out,
        } => {
            let grid = if eta.is_empty() { default_eta_grid() } else { eta };
            let reports = validate_bounds(n, trials, &grid, seed)?;
            let mut text = format!("# seed = {seed}\n{}\n", BoundReport::HEADER);
            for r in &reports {
                text.push_str(&format!("{r}\n"));
            }
            write_out(&mut *open_output(&out.output)?, &text)?;
            let failed = reports.iter().filter(|r| !r.pass).count();
            if failed > 0 {
                eprintln!("{failed} of {} checks failed", reports.len());
                return Ok(ExitCode::from(3));
            }
        }
        Command::Bench(args) => bench::run(&args)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ListCapExceeded { .. } => 2,
        Error::Invariant(_) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // --help and --version also arrive here
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
