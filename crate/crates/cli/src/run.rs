//! Subcommand dispatch.
//!
//! Every command reads documents, runs the corresponding library
//! computation, and emits a JSON report with the fixed shape
//! `{command, result, status, violations}`. Exit codes: 0 when all checks
//! pass, 1 when a validated computation found a violation, 2 for input
//! errors (bad syntax, schema violations, out-of-range parameters,
//! unknown subcommands).

use crate::schema::{
    bundle_from_doc, bundle_to_doc, canonical_json, chain_from_doc, chain_to_doc,
    crossed_from_doc, crossed_to_doc, free_matrix, matrix_to_doc, parse_document,
    serialize_document, Document, MatrixDoc,
};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use cubal::chain::{homology, validate_chain, ChainComplex};
use cubal::crossed::{from_chain, to_chain, validate_crossed};
use cubal::cubical::{
    check_groupoid, check_interchange, check_transport, validate_identities, CubicalBundle,
};
use cubal::intlin::snf;
use cubal::nerve::{nerve, normalize, roundtrip_nerve};
use cubal::{Report, Violation};
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(
    name = "cubal",
    about = "Exact calculator for chain complexes, crossed complexes, and cubical abelian groups with connections",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Invariant factors of a homology group of a chain complex.
    Homology {
        /// Chain document.
        file: PathBuf,
        /// Degree to compute.
        #[arg(long)]
        degree: usize,
    },
    /// Run the full law suite of a bundle: structural identities,
    /// groupoid laws, interchange, and transport.
    Laws {
        /// Bundle document.
        file: PathBuf,
    },
    /// Build the nerve bundle of a chain complex.
    Nerve {
        /// Chain document.
        file: PathBuf,
        /// Truncation degree of the bundle (at most 4).
        #[arg(long = "max-dim")]
        max_dim: usize,
        /// Where to write the bundle document (stdout when omitted).
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Extract the normalized chain complex of a bundle.
    Normalize {
        /// Bundle document.
        file: PathBuf,
        /// Where to write the chain document (stdout when omitted).
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Verify that normalizing the nerve recovers the complex.
    Roundtrip {
        /// Chain document.
        file: PathBuf,
        /// Truncation degree (at least the top degree, at most 4).
        #[arg(long = "max-dim")]
        max_dim: usize,
    },
    /// Convert between crossed complexes and chain complexes.
    Crossed {
        #[command(subcommand)]
        direction: CrossedCmd,
    },
    /// Smith normal form of a bare integer matrix.
    Snf {
        /// JSON array of rows of decimal integer strings.
        file: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum CrossedCmd {
    /// Crossed complex to chain complex.
    Alpha {
        /// Crossed document.
        file: PathBuf,
        /// Where to write the chain document (stdout when omitted).
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Chain complex to crossed complex.
    Beta {
        /// Chain document.
        file: PathBuf,
        /// Where to write the crossed document (stdout when omitted).
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

/// What a finished dispatch looks like to the process shell.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Serialize)]
struct ViolationDoc {
    law: String,
    indices: Vec<usize>,
    witness: Option<String>,
}

#[derive(Serialize)]
struct ReportDoc {
    command: String,
    status: String,
    result: Value,
    violations: Vec<ViolationDoc>,
}

fn report_doc(command: &str, report: &Report, result: Value) -> (i32, String) {
    let violations: Vec<ViolationDoc> = report
        .violations()
        .into_iter()
        .map(|v: Violation| ViolationDoc {
            law: v.law,
            indices: v.indices,
            witness: v.witness,
        })
        .collect();
    let code = if violations.is_empty() { 0 } else { 1 };
    let doc = ReportDoc {
        command: command.into(),
        status: if code == 0 { "pass" } else { "fail" }.into(),
        result,
        violations,
    };
    (code, canonical_json(&doc))
}

/// Everything a command produces before it is routed to streams: the
/// report, and possibly a document artifact with its destination.
struct Produced {
    command: &'static str,
    report: Report,
    result: Value,
    artifact: Option<(Option<PathBuf>, String)>,
}

fn read_input(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn load_chain(path: &Path) -> Result<ChainComplex, String> {
    match parse_document(&read_input(path)?).map_err(|e| e.to_string())? {
        Document::Chain(doc) => chain_from_doc(&doc).map_err(|e| e.to_string()),
        other => Err(format!("expected a chain document, found {}", kind_name(&other))),
    }
}

fn load_bundle(path: &Path) -> Result<CubicalBundle, String> {
    match parse_document(&read_input(path)?).map_err(|e| e.to_string())? {
        Document::Bundle(doc) => bundle_from_doc(&doc).map_err(|e| e.to_string()),
        other => Err(format!("expected a bundle document, found {}", kind_name(&other))),
    }
}

fn kind_name(doc: &Document) -> &'static str {
    match doc {
        Document::Group(_) => "a group document",
        Document::Hom(_) => "a hom document",
        Document::Chain(_) => "a chain document",
        Document::Crossed(_) => "a crossed document",
        Document::Bundle(_) => "a bundle document",
    }
}

fn execute(cmd: &Cmd) -> Result<Produced, String> {
    match cmd {
        Cmd::Homology { file, degree } => {
            let chain = load_chain(file)?;
            let report = validate_chain(&chain);
            let result = if report.is_clean() {
                let h = homology(&chain, *degree).map_err(|e| e.to_string())?;
                let iso = h.iso_class();
                json!({
                    "degree": degree,
                    "free_rank": iso.free_rank,
                    "invariant_factors": iso.torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                    "description": iso.to_string(),
                })
            } else {
                Value::Null
            };
            Ok(Produced {
                command: "homology",
                report,
                result,
                artifact: None,
            })
        }
        Cmd::Laws { file } => {
            let bundle = load_bundle(file)?;
            let mut report = validate_identities(&bundle);
            let top = bundle.top_degree();
            for n in 1..=top {
                for i in 1..=n {
                    report.absorb(check_groupoid(&bundle, n, i));
                }
            }
            for n in 2..=top {
                for i in 1..=n {
                    for j in 1..=n {
                        if i != j {
                            report.absorb(check_interchange(&bundle, n, i, j));
                        }
                    }
                }
            }
            for n in 1..top {
                for i in 1..=n {
                    report.absorb(check_transport(&bundle, n, i));
                }
            }
            Ok(Produced {
                command: "laws",
                report,
                result: Value::Null,
                artifact: None,
            })
        }
        Cmd::Nerve { file, max_dim, output } => {
            let chain = load_chain(file)?;
            let report = validate_chain(&chain);
            let artifact = if report.is_clean() {
                let nv = nerve(&chain, *max_dim).map_err(|e| e.to_string())?;
                Some((
                    output.clone(),
                    serialize_document(&Document::Bundle(bundle_to_doc(nv.bundle()))),
                ))
            } else {
                None
            };
            Ok(Produced {
                command: "nerve",
                report,
                result: Value::Null,
                artifact,
            })
        }
        Cmd::Normalize { file, output } => {
            let bundle = load_bundle(file)?;
            let report = validate_identities(&bundle);
            let artifact = if report.is_clean() {
                let chain = normalize(&bundle).map_err(|e| e.to_string())?;
                Some((
                    output.clone(),
                    serialize_document(&Document::Chain(chain_to_doc(&chain))),
                ))
            } else {
                None
            };
            Ok(Produced {
                command: "normalize",
                report,
                result: Value::Null,
                artifact,
            })
        }
        Cmd::Roundtrip { file, max_dim } => {
            let chain = load_chain(file)?;
            let mut report = validate_chain(&chain);
            if report.is_clean() {
                report = roundtrip_nerve(&chain, *max_dim)
                    .map_err(|e| e.to_string())?
                    .report;
            }
            Ok(Produced {
                command: "roundtrip",
                report,
                result: Value::Null,
                artifact: None,
            })
        }
        Cmd::Crossed { direction } => match direction {
            CrossedCmd::Alpha { file, output } => {
                let crossed = match parse_document(&read_input(file)?).map_err(|e| e.to_string())? {
                    Document::Crossed(doc) => crossed_from_doc(&doc).map_err(|e| e.to_string())?,
                    other => {
                        return Err(format!("expected a crossed document, found {}", kind_name(&other)))
                    }
                };
                let report = validate_crossed(&crossed);
                let artifact = if report.is_clean() {
                    let chain = to_chain(&crossed).map_err(|e| e.to_string())?;
                    Some((
                        output.clone(),
                        serialize_document(&Document::Chain(chain_to_doc(&chain))),
                    ))
                } else {
                    None
                };
                Ok(Produced {
                    command: "crossed alpha",
                    report,
                    result: Value::Null,
                    artifact,
                })
            }
            CrossedCmd::Beta { file, output } => {
                let chain = load_chain(file)?;
                let report = validate_chain(&chain);
                let artifact = if report.is_clean() {
                    let crossed = from_chain(&chain).map_err(|e| e.to_string())?;
                    Some((
                        output.clone(),
                        serialize_document(&Document::Crossed(crossed_to_doc(&crossed))),
                    ))
                } else {
                    None
                };
                Ok(Produced {
                    command: "crossed beta",
                    report,
                    result: Value::Null,
                    artifact,
                })
            }
        },
        Cmd::Snf { file } => {
            let doc: MatrixDoc = serde_json::from_str(&read_input(file)?)
                .map_err(|e| format!("matrix file: {e}"))?;
            let m = free_matrix(&doc).map_err(|e| e.to_string())?;
            let form = snf(&m);
            let factors: Vec<String> = (0..form.d.rows().min(form.d.cols()))
                .map(|i| form.d[(i, i)].clone())
                .filter(|d| !d.is_zero())
                .map(|d| d.to_string())
                .collect();
            let result = json!({
                "d": matrix_to_doc(&form.d),
                "invariant_factors": factors,
                "u": matrix_to_doc(&form.u),
                "v": matrix_to_doc(&form.v),
            });
            Ok(Produced {
                command: "snf",
                report: Report::new(),
                result,
                artifact: None,
            })
        }
    }
}

/// Parses argv (without the program name) and runs the selected command.
/// Never panics on malformed input: every failure is routed to exit code
/// 1 (law violations) or 2 (input errors).
pub fn dispatch(args: &[String]) -> Outcome {
    let argv = std::iter::once("cubal".to_string()).chain(args.iter().cloned());
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                Outcome {
                    code: 0,
                    stdout: rendered,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: rendered,
                }
            };
        }
    };
    match execute(&cli.cmd) {
        Err(message) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        },
        Ok(produced) => {
            let (code, report_json) = report_doc(produced.command, &produced.report, produced.result);
            match produced.artifact {
                Some((Some(path), text)) => {
                    if let Err(e) = std::fs::write(&path, &text) {
                        return Outcome {
                            code: 2,
                            stdout: String::new(),
                            stderr: format!("error: cannot write {}: {e}\n", path.display()),
                        };
                    }
                    Outcome {
                        code,
                        stdout: report_json,
                        stderr: String::new(),
                    }
                }
                // With no output path the document itself goes to stdout,
                // so the report is omitted to keep stdout one JSON value.
                Some((None, text)) => Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                },
                None => Outcome {
                    code,
                    stdout: report_json,
                    stderr: String::new(),
                },
            }
        }
    }
}
