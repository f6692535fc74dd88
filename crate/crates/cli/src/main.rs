use std::process::ExitCode;

use clap::{Parser, Subcommand};
use edim::input::{write_cayley_text, GroupSpec};
use edim::report::{build_report, render_text, ReportOptions};
use edim::suites::{run_suite, SuiteOptions, SUITE_NAMES};
use edim::{Error, FiniteGroup};

/// Essential dimension of finite p-groups.
#[derive(Parser)]
#[command(name = "edim", version)]
struct Cli {
    /// Worker threads for lattice and representation enumeration.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print only the essential dimension (report) or the summary (verify).
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the chain profile, essential dimension and a witness representation.
    Report {
        /// Group spec, e.g. "quaternion(8)", "F(4)", "perm 4: (1 2 3 4), (1 3)".
        spec: String,
        #[arg(long)]
        json: bool,
        /// The field contains a primitive p^r-th root of unity but no p^(r+1)-th one.
        #[arg(long)]
        roots: Option<u32>,
        /// Expected prime; checked against the group order.
        #[arg(long)]
        prime: Option<u32>,
        /// Refuse groups larger than this.
        #[arg(long)]
        max_order: Option<usize>,
        /// Include wall-clock timings (makes output run-dependent).
        #[arg(long)]
        timings: bool,
    },
    /// Run a named verification suite.
    Verify {
        /// One of: extraspecial, ed-le-p, slnz, jly-quotient, lemma-ki, class2, oracle, divisibility.
        suite: String,
        #[arg(long)]
        max_order: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Print the Cayley table of a group in the text format accepted by `table:<path>`.
    Table { spec: String },
    /// List the suites.
    Suites,
}

enum Failure {
    Input(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn load(spec: &str, max_order: Option<usize>) -> Result<FiniteGroup, Failure> {
    let g = GroupSpec::parse(spec)?.build()?;
    if let Some(cap) = max_order {
        if g.order() > cap {
            return Err(Failure::Input(format!(
                "group of order {} exceeds --max-order {cap}",
                g.order()
            )));
        }
    }
    Ok(g)
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Input(e.to_string()))?;
    }
    match cli.command {
        Command::Report {
            spec,
            json,
            roots,
            prime,
            max_order,
            timings,
        } => {
            let g = load(&spec, max_order)?;
            if let Some(p) = prime {
                if g.order() > 1 && p != g.prime() {
                    return Err(Failure::Input(format!(
                        "group order {} is not a power of {p}",
                        g.order()
                    )));
                }
            }
            let rep = build_report(&spec, &g, &ReportOptions { roots, timings })?;
            if cli.quiet {
                println!("{}", rep.ed);
            } else if json {
                println!("{}", serde_json::to_string_pretty(&rep).expect("report serializes"));
            } else {
                print!("{}", render_text(&rep));
            }
        }
        Command::Verify { suite, max_order, json } => {
            let mut opts = SuiteOptions::default();
            if let Some(m) = max_order {
                opts.max_order = m;
            }
            let rep = run_suite(&suite, opts)?;
            let passed = rep.cases.iter().filter(|c| c.pass).count();
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&rep).expect("suite report serializes")
                );
            } else {
                for c in &rep.cases {
                    if !cli.quiet || !c.pass {
                        let mark = if c.pass { "PASS" } else { "FAIL" };
                        println!("{mark}  {}: expected {}, got {}", c.label, c.expected, c.actual);
                    }
                }
                println!("{suite}: {passed}/{} cases passed", rep.cases.len());
            }
            if !rep.passed() {
                return Err(Failure::Verification);
            }
        }
        Command::Table { spec } => {
            let g = load(&spec, None)?;
            print!("{}", write_cayley_text(&g));
        }
        Command::Suites => {
            for s in SUITE_NAMES {
                println!("{s}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
