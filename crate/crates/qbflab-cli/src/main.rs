//! Command-line interface: generation, proof search, checking, oracles,
//! extraction, size-cost-capacity verification, the random study, and the
//! self-test suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse errors,
//! 3 oracle-cap errors.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qbflab::extract::extract_strategy;
use qbflab::line::ProofLine;
use qbflab::qures::Mode;
use qbflab::response::default_response_maps;
use qbflab::scc::{verify_scc, AnyProof};
use qbflab::study::{StudyParams, CSV_HEADER};
use qbflab::{gen, oracle, qdimacs, Caps, Error, Qcnf};

#[derive(Parser)]
#[command(
    name = "qbflab",
    version,
    about = "QBF formulas, proofs, and semantic oracles"
)]
struct Cli {
    /// Variable cap for the exhaustive oracles.
    #[arg(long, global = true)]
    var_cap: Option<u32>,
    /// Combination budget for the exact multi-block cost search.
    #[arg(long, global = true)]
    strategy_budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated formula as QDIMACS.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Check a proof against a formula.
    Check {
        #[arg(value_enum)]
        system: SystemArg,
        #[command(flatten)]
        io: FormulaProof,
        /// Forbid universal resolution pivots (clause proofs only).
        #[arg(long)]
        qres: bool,
    },
    /// Search for a clause refutation.
    Prove {
        /// Proof system to search in; only `qures` is supported.
        system: String,
        #[arg(long)]
        formula: PathBuf,
        #[arg(long, value_enum, default_value = "saturate")]
        mode: ProveMode,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Game truth value of a formula.
    Truth {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
    },
    /// Exact cost of a false formula.
    Cost {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
    },
    /// Capacity of a proof.
    Capacity {
        #[arg(value_enum)]
        system: SystemArg,
        #[command(flatten)]
        io: FormulaProof,
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
    },
    /// Extract the round-based strategy from a proof and verify it.
    Extract {
        #[arg(value_enum)]
        system: SystemArg,
        #[command(flatten)]
        io: FormulaProof,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Verify the size-cost-capacity inequality for a proof.
    Scc {
        #[arg(value_enum)]
        system: SystemArg,
        #[command(flatten)]
        io: FormulaProof,
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Sample random instances and report per-component statistics.
    RandomStudy {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        cn: u32,
        #[arg(long)]
        trials: u32,
        #[arg(long)]
        seed: u64,
        /// Also run the exact cost oracle per all-false instance.
        #[arg(long)]
        exact_cost: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: ReportFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the acceptance suite and print one line per criterion.
    SelfTest,
}

#[derive(Subcommand)]
enum GenFamily {
    /// The equality family.
    Eq {
        #[arg(short)]
        n: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The Kleine Büning family.
    Kbkf {
        #[arg(short)]
        n: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The doubled variant.
    KbkfD {
        #[arg(short)]
        n: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The weakened variant (doubling variables in the last universal block).
    KbkfW {
        #[arg(short)]
        n: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The random family Q(n, m, c) with cn clauses per component.
    Randq {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        cn: u32,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Sidecar metadata path; defaults to `<output>.meta.json`.
        #[arg(long)]
        meta: Option<PathBuf>,
    },
    /// A random (1,2)-QCNF.
    #[command(name = "12qcnf")]
    TwelveQcnf {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        clauses: u32,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// A random 2-CNF (written as a purely existential QCNF).
    #[command(name = "2sat")]
    TwoSat {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        clauses: u32,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FormulaProof {
    #[arg(long)]
    formula: PathBuf,
    #[arg(long)]
    proof: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemArg {
    Qures,
    Cp,
    Pcr,
    Sem,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProveMode {
    Saturate,
    Sigma2,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut caps = Caps::default();
    if let Some(v) = cli.var_cap {
        caps.var_cap = v;
        caps.semantic_var_cap = caps.semantic_var_cap.min(v);
    }
    if let Some(b) = cli.strategy_budget {
        caps.strategy_budget = b;
    }
    match run(cli.command, &caps) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn read_formula(path: &Path) -> Result<Qcnf, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    qdimacs::parse(&text)
}

fn read_text(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))
}

fn emit(output: Option<&Path>, content: &str) -> Result<(), Error> {
    match output {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|e| Error::invalid(format!("cannot write stdout: {e}")))
        }
    }
}

enum ParsedProof {
    QuRes(qbflab::qures::QuResProof),
    Cp(qbflab::cp::CpProof),
    Pcr(qbflab::pcr::PcrProof),
    Sem(qbflab::semantic::SemanticProof),
}

impl ParsedProof {
    fn read(system: SystemArg, path: &Path, qcnf: &Qcnf) -> Result<Self, Error> {
        let text = read_text(path)?;
        Ok(match system {
            SystemArg::Qures => ParsedProof::QuRes(qbflab::qures::parse_trace(&text, qcnf)?),
            SystemArg::Cp => ParsedProof::Cp(qbflab::cp::parse_cp(&text)?),
            SystemArg::Pcr => ParsedProof::Pcr(qbflab::pcr::parse_pcr(&text)?),
            SystemArg::Sem => ParsedProof::Sem(qbflab::semantic::parse_semantic(&text)?),
        })
    }

    fn check(&self, qcnf: &Qcnf, caps: &Caps, qres: bool) -> Result<(), Error> {
        match self {
            ParsedProof::QuRes(p) => {
                qbflab::qures::check(qcnf, p, if qres { Mode::QRes } else { Mode::QuRes })
            }
            ParsedProof::Cp(p) => qbflab::cp::check(qcnf, p),
            ParsedProof::Pcr(p) => qbflab::pcr::check(qcnf, p),
            ParsedProof::Sem(p) => qbflab::semantic::check_semantic(qcnf, p, caps),
        }
    }

    fn as_any(&self) -> AnyProof<'_> {
        match self {
            ParsedProof::QuRes(p) => AnyProof::QuRes(p),
            ParsedProof::Cp(p) => AnyProof::Cp(p),
            ParsedProof::Pcr(p) => AnyProof::Pcr(p),
            ParsedProof::Sem(p) => AnyProof::Semantic(p),
        }
    }

    fn lines(&self) -> Vec<ProofLine> {
        self.as_any().lines()
    }
}

fn run(command: Command, caps: &Caps) -> Result<ExitCode, Error> {
    match command {
        Command::Gen { family } => run_gen(family),
        Command::Check { system, io, qres } => {
            let qcnf = read_formula(&io.formula)?;
            let proof = ParsedProof::read(system, &io.proof, &qcnf)?;
            match proof.check(&qcnf, caps, qres) {
                Ok(()) => {
                    emit(None, &format!("{}\n", json!({"status": "accepted"})))?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(Error::Check { step, kind }) => {
                    let report = json!({
                        "status": "rejected",
                        "step": step,
                        "error": kind.to_string(),
                    });
                    emit(None, &format!("{report}\n"))?;
                    Ok(ExitCode::from(1))
                }
                Err(other) => Err(other),
            }
        }
        Command::Prove {
            system,
            formula,
            mode,
            output,
        } => {
            if system != "qures" {
                return Err(Error::invalid(format!(
                    "unsupported prove system {system:?}; only `qures` is available"
                )));
            }
            let qcnf = read_formula(&formula)?;
            let proof = match mode {
                ProveMode::Saturate => {
                    match qbflab::qures::prove_saturate(&qcnf, caps, Mode::QuRes)? {
                        Some(p) => p,
                        None => {
                            emit(
                                None,
                                &format!("{}\n", json!({"status": "no refutation", "truth": true})),
                            )?;
                            return Ok(ExitCode::from(1));
                        }
                    }
                }
                ProveMode::Sigma2 => qbflab::qures::refute_sigma2(&qcnf)?,
            };
            qbflab::qures::check(&qcnf, &proof, Mode::QuRes)?;
            emit(output.as_deref(), &qbflab::qures::write_trace(&proof))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Truth { formula, format } => {
            let qcnf = read_formula(&formula)?;
            let value = oracle::truth(&qcnf, caps)?;
            let text = match format {
                ReportFormat::Json => format!("{}\n", json!({"truth": value})),
                ReportFormat::Csv => format!("truth\n{value}\n"),
            };
            emit(None, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Cost { formula, format } => {
            let qcnf = read_formula(&formula)?;
            let report = qbflab::scc::cost_auto(&qcnf, caps)?;
            let text = match format {
                ReportFormat::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&report).expect("serialize")
                ),
                ReportFormat::Csv => {
                    let ranges: Vec<String> =
                        report.block_ranges.iter().map(|r| r.to_string()).collect();
                    format!("cost,block_ranges\n{},{}\n", report.cost, ranges.join(";"))
                }
            };
            emit(None, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Capacity { system, io, format } => {
            let qcnf = read_formula(&io.formula)?;
            let proof = ParsedProof::read(system, &io.proof, &qcnf)?;
            proof.check(&qcnf, caps, false)?;
            let value = qbflab::response::capacity(&qcnf, &proof.lines(), caps)?;
            let text = match format {
                ReportFormat::Json => format!("{}\n", json!({"capacity": value})),
                ReportFormat::Csv => format!("capacity\n{value}\n"),
            };
            emit(None, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Extract { system, io, output } => {
            let qcnf = read_formula(&io.formula)?;
            let proof = ParsedProof::read(system, &io.proof, &qcnf)?;
            proof.check(&qcnf, caps, false)?;
            let lines = proof.lines();
            let maps = default_response_maps(&qcnf, &lines, caps)?;
            let outcome = extract_strategy(&qcnf, &lines, &maps, caps)?;
            let winning = oracle::verify_strategy(&qcnf, &outcome.strategy, caps)?;
            let report = json!({
                "winning": winning,
                "fallback_used": outcome.fallback_used,
                "strategy": outcome.strategy,
            });
            emit(
                output.as_deref(),
                &format!(
                    "{}\n",
                    serde_json::to_string_pretty(&report).expect("serialize")
                ),
            )?;
            Ok(if winning {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Scc {
            system,
            io,
            format,
            output,
        } => {
            let qcnf = read_formula(&io.formula)?;
            let proof = ParsedProof::read(system, &io.proof, &qcnf)?;
            let report = verify_scc(&qcnf, &proof.as_any(), caps)?;
            let text = match format {
                ReportFormat::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&report).expect("serialize")
                ),
                ReportFormat::Csv => format!(
                    "system,size,cost,capacity,holds\n{:?},{},{},{},{}\n",
                    report.system, report.size, report.cost, report.capacity, report.holds
                ),
            };
            emit(output.as_deref(), &text)?;
            Ok(if report.holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::RandomStudy {
            n,
            m,
            cn,
            trials,
            seed,
            exact_cost,
            format,
            output,
        } => {
            let params = StudyParams {
                n,
                m,
                cn,
                trials,
                seed,
                exact_cost,
            };
            let rows = qbflab::study::run_study(&params, caps)?;
            let text = match format {
                ReportFormat::Csv => {
                    let mut out = String::from(CSV_HEADER);
                    out.push('\n');
                    for row in &rows {
                        out.push_str(&row.to_csv());
                        out.push('\n');
                    }
                    out
                }
                ReportFormat::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&rows).expect("serialize")
                ),
            };
            emit(output.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::SelfTest => {
            let outcomes = qbflab_cli::selftest::run_all(caps);
            let mut all_passed = true;
            for o in &outcomes {
                println!("{}", o.render());
                all_passed &= o.passed;
            }
            Ok(if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn run_gen(family: GenFamily) -> Result<ExitCode, Error> {
    match family {
        GenFamily::Eq { n, output } => {
            emit(output.as_deref(), &qdimacs::write(&gen::equality(n)?))?;
        }
        GenFamily::Kbkf { n, output } => {
            emit(output.as_deref(), &qdimacs::write(&gen::kbkf(n)?))?;
        }
        GenFamily::KbkfD { n, output } => {
            emit(output.as_deref(), &qdimacs::write(&gen::kbkf_doubled(n)?))?;
        }
        GenFamily::KbkfW { n, output } => {
            emit(output.as_deref(), &qdimacs::write(&gen::kbkf_weak(n)?))?;
        }
        GenFamily::Randq {
            n,
            m,
            cn,
            seed,
            output,
            meta,
        } => {
            let (qcnf, metadata) = gen::random_q(n, m, cn, seed)?;
            emit(output.as_deref(), &qdimacs::write(&qcnf))?;
            let meta_path = meta.or_else(|| {
                output
                    .as_ref()
                    .map(|p| PathBuf::from(format!("{}.meta.json", p.display())))
            });
            let meta_json = format!(
                "{}\n",
                serde_json::to_string_pretty(&metadata).expect("serialize")
            );
            match meta_path {
                Some(p) => emit(Some(&p), &meta_json)?,
                None => emit(None, &meta_json)?,
            }
        }
        GenFamily::TwelveQcnf {
            m,
            n,
            clauses,
            seed,
            output,
        } => {
            emit(
                output.as_deref(),
                &qdimacs::write(&gen::random_12qcnf(m, n, clauses, seed)?),
            )?;
        }
        GenFamily::TwoSat {
            n,
            clauses,
            seed,
            output,
        } => {
            emit(
                output.as_deref(),
                &qdimacs::write(&gen::random_2sat(n, clauses, seed)?),
            )?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
