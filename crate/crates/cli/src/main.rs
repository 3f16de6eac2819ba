use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use solviso::bench::{run_bench, write_csv};
use solviso::engine::{canon_group, generator_enumeration_iso, solvable_iso, IsoOptions};
use solviso::families::{direct_product, make_family};
use solviso::series::{enumerate_composition_series, first_composition_series};
use solviso::sylow::{all_sylow_bases, sylow_basis};
use solviso::{Error, GroupTable};

const EXIT_OK: u8 = 0;
const EXIT_NOT_ISO: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NOT_SOLVABLE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "solviso",
    version,
    about = "Isomorphism testing and canonical forms for finite solvable groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a .cayley file is a group table.
    Validate { file: PathBuf },
    /// Decide whether two groups are isomorphic.
    Iso {
        file_a: PathBuf,
        file_b: PathBuf,
        /// Prime threshold for the decomposition (default depends on the order).
        #[arg(long)]
        alpha: Option<usize>,
        #[arg(long, value_enum, default_value_t = Algo::Hybrid)]
        algo: Algo,
        /// Print the isomorphism as a 1-based permutation line.
        #[arg(long)]
        witness: bool,
    },
    /// Print the canonical form of a solvable group.
    Canon { file: PathBuf },
    /// Print composition series of the whole group.
    Series {
        file: PathBuf,
        /// List every series instead of the first one.
        #[arg(long)]
        all: bool,
    },
    /// Print a Sylow basis and the number of Sylow bases.
    Sylow { file: PathBuf },
    /// Time both isomorphism tests over the built-in corpus.
    Bench {
        #[arg(long)]
        max_order: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a group from a named family, or the direct product of two files
    /// with `directprod A B`.
    Gen {
        family: String,
        params: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Algo {
    Hybrid,
    Genenum,
}

fn read_group(path: &Path) -> anyhow::Result<GroupTable> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    GroupTable::parse_cayley(&text).with_context(|| format!("in {}", path.display()))
}

fn one_based(v: &[usize]) -> String {
    v.iter()
        .map(|x| (x + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Validate { file } => {
            let g = read_group(&file)?;
            println!(
                "ok: order {}, identity {}, {}",
                g.order(),
                g.identity() + 1,
                if g.is_solvable() {
                    "solvable"
                } else {
                    "not solvable"
                }
            );
            Ok(EXIT_OK)
        }
        Command::Iso {
            file_a,
            file_b,
            alpha,
            algo,
            witness,
        } => {
            let a = read_group(&file_a)?;
            let b = read_group(&file_b)?;
            if alpha.is_some_and(|k| k < 1) {
                return Err(Error::BadParams("--alpha must be at least 1".into()).into());
            }
            let phi = match algo {
                Algo::Hybrid => {
                    let out = solvable_iso(
                        &a,
                        &b,
                        IsoOptions {
                            alpha,
                            prefilter: true,
                        },
                    )?;
                    let c = out.counters;
                    eprintln!(
                        "alpha {} bases {} series {} sequences {} canon_nodes {}",
                        out.alpha, c.bases, c.series, c.sequences, c.canon_nodes
                    );
                    out.witness
                }
                Algo::Genenum => generator_enumeration_iso(&a, &b),
            };
            match phi {
                Some(phi) => {
                    println!("isomorphic");
                    if witness {
                        println!("{}", one_based(&phi));
                    }
                    Ok(EXIT_OK)
                }
                None => {
                    println!("not isomorphic");
                    Ok(EXIT_NOT_ISO)
                }
            }
        }
        Command::Canon { file } => {
            let g = read_group(&file)?;
            print!("{}", canon_group(&g)?.form.to_text());
            Ok(EXIT_OK)
        }
        Command::Series { file, all } => {
            let g = read_group(&file)?;
            if !g.is_solvable() {
                return Err(Error::NotSolvable.into());
            }
            let series = if all {
                enumerate_composition_series(&g, &g.whole())
            } else {
                vec![first_composition_series(&g, &g.whole())]
            };
            for (i, s) in series.iter().enumerate() {
                println!("series {} factors {:?}", i + 1, s.factor_orders());
                for level in &s.chain {
                    println!("  {}", level.display_list());
                }
            }
            Ok(EXIT_OK)
        }
        Command::Sylow { file } => {
            let g = read_group(&file)?;
            let basis = sylow_basis(&g)?;
            for (p, s) in &basis.entries {
                println!("p {p} order {}: {}", s.order(), s.display_list());
            }
            println!("bases {}", all_sylow_bases(&g)?.len());
            Ok(EXIT_OK)
        }
        Command::Bench { max_order, out } => {
            let rows = run_bench(max_order)?;
            let file =
                fs::File::create(&out).with_context(|| format!("creating {}", out.display()))?;
            write_csv(&rows, std::io::BufWriter::new(file))?;
            println!("{} rows written to {}", rows.len(), out.display());
            Ok(EXIT_OK)
        }
        Command::Gen {
            family,
            params,
            out,
        } => {
            let g = if family == "directprod" {
                let [a, b] = params.as_slice() else {
                    return Err(Error::BadParams("directprod takes two table files".into()).into());
                };
                direct_product(&read_group(Path::new(a))?, &read_group(Path::new(b))?)
            } else {
                let nums = params
                    .iter()
                    .map(|p| p.parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| {
                        Error::BadParams(format!("parameters must be integers: {params:?}"))
                    })?;
                make_family(&family, &nums)?
            };
            fs::write(&out, g.to_cayley()).with_context(|| format!("writing {}", out.display()))?;
            println!("order {} written to {}", g.order(), out.display());
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let not_solvable = e.downcast_ref::<Error>() == Some(&Error::NotSolvable);
            ExitCode::from(if not_solvable {
                EXIT_NOT_SOLVABLE
            } else {
                EXIT_INPUT
            })
        }
    }
}
