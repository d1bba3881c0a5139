//! Command-line front end: hash strings, run verification reports, emit
//! the collision-probability and bounds tables, construct witnesses, and
//! benchmark compression throughput.
//!
//! Exit codes: 0 success, 1 domain error, 2 capacity error, 3 usage error.
//! All subcommands except `bench` produce byte-identical output for a
//! fixed command line.

mod bench;
mod render;

use clap::{Args, Parser, Subcommand};
use iterhash::algebra::{divisor_max, AlgebraSpec};
use iterhash::bounds::{
    epsilon_impossible_length, min_family_size, parse_rational, stinson_min_size, table_bounds,
};
use iterhash::error::Error;
use iterhash::family::{java_signed, sample_instance, Construction, FamilySpec};
use iterhash::stringset::{parse_int_list, StringSet};
use iterhash::verifier::{exact_report, gp_table, monte_carlo_report};
use iterhash::witness::{
    binomial_collision_pair, fourwise_break, perfect_unary_hash, tau_collision_pair,
    threewise_break, unary_forced_collision, HtFamily,
};
use iterhash::{DEFAULT_BUDGET, DEFAULT_SEED};
use num_bigint_shim::BigUintArg;
use std::fs;
use std::path::PathBuf;

/// `clap` value parsing for big integers, kept local to the binary.
mod num_bigint_shim {
    #[derive(Clone, Debug)]
    pub struct BigUintArg(pub String);

    impl std::str::FromStr for BigUintArg {
        type Err = String;
        fn from_str(s: &str) -> Result<Self, Self::Err> {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(format!("{s:?} is not a non-negative integer"));
            }
            Ok(BigUintArg(s.to_string()))
        }
    }
}

#[derive(Parser)]
#[command(
    name = "iterhash",
    about = "Verification laboratory for iterated string hashing",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, clap::ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct OutputOpts {
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Hash strings under one sampled (or fixed) instance of a family.
    Hash {
        /// Family spec, e.g. `gcc-cpp` or `pearson:L=8`.
        family: String,
        /// Byte-text inputs (characters are byte values, sigma = 256).
        inputs: Vec<String>,
        /// Comma-separated character values instead of byte text.
        #[arg(long, conflicts_with = "inputs")]
        ints: Option<String>,
        /// Seed for instance sampling.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Also print the two's-complement rendering (java-string).
        #[arg(long)]
        signed: bool,
    },
    /// Exact or Monte-Carlo verification report over a string set.
    Verify {
        family: String,
        /// Maximal string length of the verified set.
        #[arg(long, default_value_t = 2)]
        max_len: usize,
        /// Override the alphabet size.
        #[arg(long)]
        sigma: Option<u64>,
        /// Verify unary strings of this character only.
        #[arg(long)]
        unary: Option<u64>,
        /// Exclude strings ending with the character 0.
        #[arg(long)]
        no_trailing_zero: bool,
        /// Independence verdict depth (2..=4).
        #[arg(long, default_value_t = 2)]
        k_max: u8,
        /// Force exact enumeration (default).
        #[arg(long, conflicts_with = "mc")]
        exact: bool,
        /// Monte-Carlo estimation instead of exact enumeration.
        #[arg(long)]
        mc: bool,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Emit the reference tables as CSV.
    Table {
        #[command(subcommand)]
        which: TableCommand,
    },
    /// Construct a forced-collision or extremal witness.
    Witness {
        #[command(subcommand)]
        which: WitnessCommand,
    },
    /// Impossibility-bound calculators.
    Bounds {
        #[command(subcommand)]
        which: BoundsCommand,
    },
    /// Compression throughput on a fixed corpus (timing output).
    Bench {
        /// Word sizes to benchmark.
        #[arg(long, value_delimiter = ',', default_values_t = vec![32u32, 64])]
        l: Vec<u32>,
        /// Bytes per measured run.
        #[arg(long, default_value_t = 1 << 22)]
        bytes: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum TableCommand {
    /// Impossibility bounds per word size (columns: L, card_universal,
    /// card_strong, struct_universal).
    Bounds {
        #[arg(long = "L", value_delimiter = ',', default_values_t = vec![2u32, 4, 8, 16])]
        l: Vec<u32>,
        /// Epsilon for the almost-universal cardinality column.
        #[arg(long, default_value = "1/2")]
        epsilon: String,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Generalized-Pearson maximal collision probabilities per length.
    Gp {
        #[arg(long = "L", default_value_t = 2)]
        l: u32,
        #[arg(long, default_value_t = 7)]
        n_max: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Growth of the running divisor-function maximum.
    Divisor {
        #[arg(long, default_value_t = 1000)]
        max: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Values of the counter family h_T on unary strings.
    Ht {
        #[arg(long = "L", default_value_t = 2)]
        l: u32,
        /// Largest unary length to print (default: separation limit).
        #[arg(long)]
        max_len: Option<u64>,
        #[command(flatten)]
        output: OutputOpts,
    },
}

#[derive(Subcommand)]
enum WitnessCommand {
    /// Equal-length CWPoly pair with collision probability exactly n/p.
    Tau {
        #[arg(long)]
        n: u64,
        /// Prime field cardinality (alternative to --gf).
        #[arg(long, conflicts_with = "gf")]
        p: Option<u64>,
        /// Binary field GF(2^L).
        #[arg(long)]
        gf: Option<u32>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Binomial-coefficient pair colliding for every odd multiplier.
    Binomial {
        #[arg(long = "L")]
        l: u32,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Unary pair of lengths 2^L and 2^L + lcm(1..2^L) colliding always.
    UnaryForced {
        #[arg(long = "L")]
        l: u32,
        #[arg(long = "char", default_value_t = 0)]
        character: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Perfect unary hash: injective on lengths 1..=2^L.
    PerfectUnary {
        #[arg(long = "L")]
        l: u32,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// The counter family h_T separating unary strings.
    Ht {
        #[arg(long = "L")]
        l: u32,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Chain equality certifying 3-wise independence fails.
    Threewise {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Zero-probability quadruple for zobrist 4-wise independence.
    Fourwise {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
}

#[derive(Subcommand)]
enum BoundsCommand {
    /// All bound columns for one word size.
    Row {
        #[arg(long = "L")]
        l: u32,
        #[arg(long, default_value = "1/2")]
        epsilon: String,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Minimum family size for epsilon-almost universality over 2^K items.
    MinSize {
        #[arg(long = "K")]
        k: u64,
        #[arg(long = "L")]
        l: u32,
        #[arg(long)]
        epsilon: String,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Stinson's lower bound on family cardinality.
    Stinson {
        #[arg(long)]
        strings: BigUintArg,
        #[arg(long)]
        values: BigUintArg,
        /// Strongly universal variant (1 + a(b-1)); default is universal.
        #[arg(long)]
        strong: bool,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Length making epsilon-almost universality impossible.
    ImpossibleLength {
        #[arg(long = "L")]
        l: u32,
        #[arg(long)]
        epsilon: String,
        #[command(flatten)]
        output: OutputOpts,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap help/version are not errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn emit(output: &OutputOpts, content: String) -> Result<(), Error> {
    match &output.out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Error::domain(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Hash {
            family,
            inputs,
            ints,
            seed,
            signed,
        } => {
            let spec = FamilySpec::parse(&family)?;
            let inst = sample_instance(&spec, seed)?;
            let strings: Vec<Vec<u64>> = match ints {
                Some(list) => vec![parse_int_list(&list)?],
                None => {
                    if inputs.is_empty() {
                        return Err(Error::parse("no input strings given"));
                    }
                    inputs
                        .iter()
                        .map(|s| s.bytes().map(u64::from).collect())
                        .collect()
                }
            };
            let mut out = String::new();
            for s in &strings {
                let h = inst.hash(s)?;
                if signed {
                    out.push_str(&format!("{} ({})\n", h, java_signed(h)));
                } else {
                    out.push_str(&format!("{h}\n"));
                }
            }
            print!("{out}");
            Ok(())
        }
        Command::Verify {
            family,
            max_len,
            sigma,
            unary,
            no_trailing_zero,
            k_max,
            exact: _,
            mc,
            trials,
            seed,
            budget,
            output,
        } => {
            let mut spec = FamilySpec::parse(&family)?;
            if let Some(sigma) = sigma {
                spec.alphabet_size = sigma;
                spec.validate()?;
            }
            let mut set = match unary {
                Some(c) => StringSet::unary(spec.alphabet_size, c, max_len),
                None => StringSet::all_up_to(spec.alphabet_size, max_len),
            };
            if no_trailing_zero || spec.construction == Construction::Multilinear {
                set = set.without_trailing_zero();
            }
            let report = if mc {
                monte_carlo_report(&spec, &set, trials, seed)?
            } else {
                exact_report(&spec, &set, k_max, budget)?
            };
            let content = match output.format {
                Format::Json => report.to_json() + "\n",
                Format::Csv => report.to_csv(),
                Format::Text => render::report_text(&report),
            };
            emit(&output, content)
        }
        Command::Table { which } => match which {
            TableCommand::Bounds { l, epsilon, output } => {
                let eps = parse_rational(&epsilon)?;
                let rows: Result<Vec<_>, _> = l.iter().map(|&bits| table_bounds(bits, &eps)).collect();
                emit(&output, render::bounds_table(&rows?, output.format))
            }
            TableCommand::Gp {
                l,
                n_max,
                budget,
                output,
            } => {
                let rows = gp_table(l, n_max, budget)?;
                emit(&output, render::gp_table_out(&rows, output.format))
            }
            TableCommand::Divisor { max, output } => {
                if max < 2 {
                    return Err(Error::domain("need --max at least 2"));
                }
                let mut out = String::from("n,divisor_max\n");
                for n in 2..=max {
                    out.push_str(&format!("{n},{}\n", divisor_max(n)?));
                }
                emit(&output, out)
            }
            TableCommand::Ht { l, max_len, output } => {
                let fam = HtFamily::new(l)?;
                let limit =
                    max_len.unwrap_or_else(|| fam.separation_limit_u64().unwrap_or(u64::MAX).min(4096));
                let periods = fam.period_count();
                let mut out = String::from("r");
                for t in 1..=periods {
                    out.push_str(&format!(",h_{t}"));
                }
                out.push('\n');
                for r in 0..=limit {
                    out.push_str(&r.to_string());
                    for t in 1..=periods {
                        out.push_str(&format!(",{}", fam.eval(t, r as u128)));
                    }
                    out.push('\n');
                }
                emit(&output, out)
            }
        },
        Command::Witness { which } => match which {
            WitnessCommand::Tau { n, p, gf, output } => {
                let field = match (p, gf) {
                    (Some(p), None) => AlgebraSpec::prime_field(p)?,
                    (None, Some(bits)) => AlgebraSpec::binary_field(bits)?,
                    (None, None) => return Err(Error::parse("give --p or --gf")),
                    _ => unreachable!("clap conflicts_with"),
                };
                let w = tau_collision_pair(n, &field)?;
                emit(&output, w.to_json() + "\n")
            }
            WitnessCommand::Binomial { l, output } => {
                emit(&output, binomial_collision_pair(l)?.to_json() + "\n")
            }
            WitnessCommand::UnaryForced { l, character, output } => {
                emit(&output, unary_forced_collision(l, character)?.to_json() + "\n")
            }
            WitnessCommand::PerfectUnary { l, output } => {
                let inst = perfect_unary_hash(l)?;
                let values: Vec<u64> = {
                    let mut v = Vec::new();
                    let mut y = inst.init;
                    for r in 1..=(1u64 << l).min(64) {
                        y = inst.compress(y, 0, r as usize)?;
                        v.push(y);
                    }
                    v
                };
                let doc = serde_json::json!({
                    "kind": "perfect-unary",
                    "word_bits": l,
                    "instance": format!("{:?}", inst.params),
                    "init": inst.init,
                    "first_values": values,
                });
                emit(&output, serde_json::to_string_pretty(&doc).unwrap() + "\n")
            }
            WitnessCommand::Ht { l, output } => {
                emit(&output, HtFamily::new(l)?.as_witness().to_json() + "\n")
            }
            WitnessCommand::Threewise { family, budget, output } => {
                let spec = FamilySpec::parse(&family)?;
                emit(&output, threewise_break(&spec, budget)?.to_json() + "\n")
            }
            WitnessCommand::Fourwise { family, budget, output } => {
                let spec = FamilySpec::parse(&family)?;
                emit(&output, fourwise_break(&spec, budget)?.to_json() + "\n")
            }
        },
        Command::Bounds { which } => match which {
            BoundsCommand::Row { l, epsilon, output } => {
                let row = table_bounds(l, &parse_rational(&epsilon)?)?;
                emit(&output, render::bounds_row(&row, output.format))
            }
            BoundsCommand::MinSize { k, l, epsilon, output } => {
                let v = min_family_size(k, l, &parse_rational(&epsilon)?)?;
                emit(&output, render::single_value("min_family_size", &v.to_string(), output.format))
            }
            BoundsCommand::Stinson {
                strings,
                values,
                strong,
                output,
            } => {
                let a = strings.0.parse().map_err(|_| Error::parse("bad --strings"))?;
                let b = values.0.parse().map_err(|_| Error::parse("bad --values"))?;
                let v = stinson_min_size(&a, &b, strong)?;
                emit(&output, render::single_value("stinson_min_size", &v.to_string(), output.format))
            }
            BoundsCommand::ImpossibleLength { l, epsilon, output } => {
                let v = epsilon_impossible_length(l, &parse_rational(&epsilon)?)?;
                emit(&output, render::single_value("impossible_length", &v.to_string(), output.format))
            }
        },
        Command::Bench { l, bytes, seed } => {
            bench::run(&l, bytes, seed);
            Ok(())
        }
    }
}
