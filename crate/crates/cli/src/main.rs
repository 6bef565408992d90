use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use goeritz_cli::*;
use goeritz_core::complex::DEFAULT_MAX_WEIGHT;

#[derive(Parser)]
#[command(name = "goeritz", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the standard diagram of L(p,q) # L(p2,q2) and verify it
    Build {
        #[arg(long, default_value_t = 2)]
        p: i64,
        #[arg(long, default_value_t = 1)]
        q: i64,
        #[arg(long, default_value_t = 3)]
        p2: i64,
        #[arg(long, default_value_t = 1)]
        q2: i64,
        /// write the diagram file here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a lemma suite: conju | compo | reduce | twist-relations
    CheckLemma {
        which: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Factor a named eyeglass twist through a sphere stabilizer
    Factor {
        #[arg(long)]
        eyeglass: String,
        #[arg(long)]
        sphere: usize,
        #[arg(long, default_value_t = 400)]
        budget: usize,
    },
    /// Enumerate the reducing sphere complex at bounded radius
    Complex {
        #[arg(long, default_value_t = 3)]
        l: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_WEIGHT)]
        max_weight: u64,
        /// write DOT here; a sibling .json is written too
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Torus intersection oracle and canonical-form round-trips
    Oracle {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        slope_max: i64,
        #[arg(long, default_value_t = 1000)]
        trips: usize,
    },
}

fn finish(pass: bool, report: String) -> ExitCode {
    print!("{report}");
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Build { p, q, p2, q2, out } => cmd_build(p, q, p2, q2).map(|(text, pass, rep)| {
            if let Some(path) = out {
                if let Err(e) = std::fs::write(&path, &text) {
                    return (false, format!("{rep}write {}: {e}\n", path.display()));
                }
            } else {
                print!("{text}");
            }
            (pass, rep)
        }),
        Cmd::CheckLemma { which, seed } => cmd_check_lemma(&which, seed),
        Cmd::Factor { eyeglass, sphere, budget } => cmd_factor(&eyeglass, sphere, budget),
        Cmd::Complex { l, max_weight, out } => {
            cmd_complex(l, max_weight).map(|(pass, rep, dot, json)| {
                if let Some(path) = out {
                    let jpath = path.with_extension("json");
                    if let Err(e) = std::fs::write(&path, &dot)
                        .and_then(|()| std::fs::write(&jpath, &json))
                    {
                        return (false, format!("{rep}write graph: {e}\n"));
                    }
                }
                (pass, rep)
            })
        }
        Cmd::Oracle { seed, slope_max, trips } => cmd_oracle(seed, slope_max, trips),
    };
    match res {
        Ok((pass, rep)) => finish(pass, rep),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
