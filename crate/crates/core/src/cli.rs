//! Command-line front end. The binary is a thin wrapper around [`run`].

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::cone::{convert, ConversionOptions, GeneratorSet, HCone, TraceNode};
use crate::format::{self, ProblemFile, ProblemJson};
use crate::linalg::{SubdeterminantSet, DEFAULT_ENUMERATION_CAP};
use crate::polyhedron::{h_to_v_with, homogenize, polar_cone, v_to_h_with};
use crate::verify::{qsd_report, verify_conversion, QsdReport, VerifyOptions};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "polycone",
    version,
    about = "Exact H/V conversion for polyhedral cones and polyhedra"
)]
struct Cli {
    /// Emit one JSON document on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Problem file, or `-` for stdin.
    file: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// H-cone to generators, H-rep to V-rep, V-rep to H-rep.
    Convert {
        #[command(flatten)]
        input: Input,
        /// Normalize every output vector to its primitive integer direction.
        #[arg(long)]
        canonical_rays: bool,
    },
    /// Check a conversion against the double description oracle.
    Verify {
        #[command(flatten)]
        input: Input,
        /// Generators to check instead of the engine's own output (H-cone only).
        #[arg(long, value_name = "FILE")]
        generators: Option<PathBuf>,
    },
    /// Check that every generator component is a quotient of subdeterminants.
    QsdCheck {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "FILE")]
        generators: Option<PathBuf>,
        /// Cap on the number of square submatrices enumerated.
        #[arg(long, value_name = "N", default_value_t = DEFAULT_ENUMERATION_CAP)]
        limit: u128,
    },
    /// Recursion metrics of the conversion.
    Stats {
        #[command(flatten)]
        input: Input,
        /// Also print the recursion tree.
        #[arg(long)]
        trace: bool,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::EnumerationTooLarge { .. } | Error::OracleUnavailable(_) => EXIT_RESOURCE,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

struct Output {
    code: i32,
    text: String,
}

/// Runs the CLI on `args` (including the program name). Returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match dispatch(&cli, stdin) {
        Ok(o) => {
            if out.write_all(o.text.as_bytes()).is_err() {
                return EXIT_USAGE;
            }
            o.code
        }
        Err(f) => {
            let _ = writeln!(err, "polycone: {}", f.message);
            f.code
        }
    }
}

fn read_problem(path: &Path, stdin: &mut dyn Read) -> Result<ProblemFile, Failure> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        stdin
            .read_to_string(&mut text)
            .map_err(|e| Failure::usage(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    }
    format::parse(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn read_generators(path: &Path, stdin: &mut dyn Read, dim: usize) -> Result<GeneratorSet, Failure> {
    match read_problem(path, stdin)? {
        ProblemFile::Generators(g) if g.dim() == dim => Ok(g),
        ProblemFile::Generators(g) => Err(Failure::usage(format!(
            "{}: generators have dimension {}, cone has {dim}",
            path.display(),
            g.dim()
        ))),
        other => Err(Failure::usage(format!(
            "{}: expected a Generators file, found {}",
            path.display(),
            other.kind()
        ))),
    }
}

/// The cone whose conversion a problem file stands for.
fn cone_of(file: &ProblemFile) -> Result<HCone, Failure> {
    match file {
        ProblemFile::HCone(c) => Ok(c.clone()),
        ProblemFile::HPolyhedron(p) => Ok(homogenize(p)),
        ProblemFile::VPolyhedron(q) => Ok(polar_cone(q)?),
        ProblemFile::Generators(_) => Err(Failure::usage(
            "a Generators file has no inequality system; pass an H-cone, H-rep or V-rep file",
        )),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable document");
    s.push('\n');
    s
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read) -> Result<Output, Failure> {
    match &cli.command {
        Command::Convert {
            input,
            canonical_rays,
        } => {
            let options = ConversionOptions {
                canonical_rays: *canonical_rays,
            };
            let result = match read_problem(&input.file, stdin)? {
                ProblemFile::HCone(c) => ProblemFile::Generators(convert(&c, options).generators),
                ProblemFile::HPolyhedron(p) => ProblemFile::VPolyhedron(h_to_v_with(&p, options)),
                ProblemFile::VPolyhedron(q) => ProblemFile::HPolyhedron(v_to_h_with(&q, options)?),
                ProblemFile::Generators(_) => {
                    return Err(Failure::usage("nothing to convert in a Generators file"))
                }
            };
            let text = if cli.json {
                json(&ProblemJson::from(&result))
            } else {
                format::write_problem(&result)
            };
            Ok(Output {
                code: EXIT_OK,
                text,
            })
        }
        Command::Verify { input, generators } => {
            let file = read_problem(&input.file, stdin)?;
            let cone = cone_of(&file)?;
            let cert = match generators {
                Some(path) => {
                    if !matches!(file, ProblemFile::HCone(_)) {
                        return Err(Failure::usage("--generators applies to H-cone files only"));
                    }
                    let gens = read_generators(path, stdin, cone.dim())?;
                    verify_conversion(&cone, &gens, &VerifyOptions::default())
                }
                None => {
                    let conversion = convert(&cone, ConversionOptions::default());
                    verify_conversion(&cone, &conversion.generators, &VerifyOptions::default())
                        .with_recursion(conversion.stats())
                }
            };
            if let Some(e) = &cert.oracle_error {
                return Err(Failure {
                    code: EXIT_RESOURCE,
                    message: e.clone(),
                });
            }
            let code = if cert.passed() { EXIT_OK } else { EXIT_FAILED };
            let text = if cli.json {
                #[derive(Serialize)]
                struct Doc<'a> {
                    kind: &'static str,
                    input: &'static str,
                    passed: bool,
                    soundness_ok: bool,
                    completeness_ok: bool,
                    reverse_ok: bool,
                    certificate: &'a crate::verify::Certificate,
                }
                json(&Doc {
                    kind: "certificate",
                    input: file.kind(),
                    passed: cert.passed(),
                    soundness_ok: cert.soundness_ok(),
                    completeness_ok: cert.completeness_ok(),
                    reverse_ok: cert.reverse_ok(),
                    certificate: &cert,
                })
            } else {
                format::write_certificate(&cert)
            };
            Ok(Output { code, text })
        }
        Command::QsdCheck {
            input,
            generators,
            limit,
        } => {
            let file = read_problem(&input.file, stdin)?;
            let cone = cone_of(&file)?;
            let gens = match generators {
                Some(path) => read_generators(path, stdin, cone.dim())?,
                None => convert(&cone, ConversionOptions::default()).generators,
            };
            let a = cone.stacked();
            SubdeterminantSet::new(&a, *limit)?;
            let report = qsd_report(&a, &gens, *limit);
            let code = if report.all_members() {
                EXIT_OK
            } else {
                EXIT_FAILED
            };
            let text = if cli.json {
                #[derive(Serialize)]
                struct Doc<'a> {
                    kind: &'static str,
                    limit: String,
                    passed: bool,
                    report: &'a QsdReport,
                }
                json(&Doc {
                    kind: "qsd-check",
                    limit: limit.to_string(),
                    passed: report.all_members(),
                    report: &report,
                })
            } else {
                let mut s = String::new();
                for c in report
                    .components
                    .iter()
                    .filter(|c| !matches!(c.status, crate::linalg::Membership::Member))
                {
                    writeln!(
                        s,
                        "generator {} component {}: {} is not a certified member",
                        c.generator, c.component, c.value
                    )
                    .expect("String");
                }
                writeln!(s, "{}", format::qsd_line(&report)).expect("String");
                s
            };
            Ok(Output { code, text })
        }
        Command::Stats { input, trace } => {
            let file = read_problem(&input.file, stdin)?;
            let cone = cone_of(&file)?;
            let conversion = convert(&cone, ConversionOptions::default());
            let stats = conversion.stats();
            let text = if cli.json {
                #[derive(Serialize)]
                struct Doc<'a> {
                    kind: &'static str,
                    input: &'static str,
                    dim: usize,
                    inequalities: usize,
                    equations: usize,
                    stats: crate::cone::RecursionStats,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    trace: Option<&'a TraceNode>,
                }
                json(&Doc {
                    kind: "stats",
                    input: file.kind(),
                    dim: cone.dim(),
                    inequalities: cone.inequalities().rows(),
                    equations: cone.equations().rows(),
                    stats,
                    trace: trace.then_some(&conversion.trace),
                })
            } else {
                let mut s = String::new();
                writeln!(
                    s,
                    "cone: dimension {}, {} inequalities, {} equations",
                    cone.dim(),
                    cone.inequalities().rows(),
                    cone.equations().rows()
                )
                .expect("String");
                for (key, value) in [
                    ("nodes", stats.nodes),
                    ("leaves", stats.leaves),
                    ("max depth", stats.max_depth),
                    ("subspace nodes", stats.subspace_nodes),
                    ("half-subspace nodes", stats.half_subspace_nodes),
                    ("split nodes", stats.split_nodes),
                    ("emitted", stats.emitted),
                    ("output size", stats.output_size),
                ] {
                    writeln!(s, "{key}: {value}").expect("String");
                }
                if *trace {
                    s.push_str("trace:\n");
                    write_trace(&mut s, &conversion.trace);
                }
                s
            };
            Ok(Output {
                code: EXIT_OK,
                text,
            })
        }
    }
}

fn write_trace(s: &mut String, node: &TraceNode) {
    let indent = "  ".repeat(node.depth + 1);
    let case = match node.case {
        crate::cone::NodeCase::Subspace => "subspace",
        crate::cone::NodeCase::HalfSubspace => "half-subspace",
        crate::cone::NodeCase::Split => "split",
    };
    write!(
        s,
        "{indent}{case} ineq {:?} eq {:?}",
        node.inequality_rows, node.equation_rows
    )
    .expect("String");
    match &node.z {
        Some(z) => writeln!(s, " z {z}"),
        None => writeln!(s, " generators {}", node.generators),
    }
    .expect("String");
    for child in &node.children {
        write_trace(s, child);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str], stdin: &str) -> (i32, String, String) {
        let mut input = stdin.as_bytes();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("polycone").chain(args.iter().copied());
        let code = run(argv, &mut input, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    const WEDGE: &str = "H-cone 2 2 0\n-1 0\n1 -1\n";

    #[test]
    fn convert_wedge_from_stdin() {
        let (code, out, _) = run_str(&["convert", "-", "--canonical-rays"], WEDGE);
        assert_eq!(code, 0);
        assert_eq!(out, "Generators 2 2\n0 1\n1 1\n");
    }

    #[test]
    fn verify_and_stats_succeed() {
        let (code, out, _) = run_str(&["verify", "-"], WEDGE);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("RESULT PASS"));

        let (code, out, _) = run_str(&["stats", "-", "--trace"], WEDGE);
        assert_eq!(code, 0);
        assert!(out.contains("max depth"));
        assert!(out.contains("trace:"));
    }

    #[test]
    fn json_output_parses() {
        for cmd in ["convert", "verify", "qsd-check", "stats"] {
            let (code, out, _) = run_str(&[cmd, "-", "--json"], WEDGE);
            assert_eq!(code, 0, "{cmd}");
            let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
            assert!(doc.get("kind").is_some(), "{cmd}");
        }
    }

    #[test]
    fn usage_and_parse_errors() {
        assert_eq!(run_str(&[], "").0, 2);
        assert_eq!(run_str(&["frobnicate"], "").0, 2);
        let (code, _, err) = run_str(&["convert", "-"], "H-cone 2 1 0\n1 x\n");
        assert_eq!(code, 2);
        assert!(err.contains("line 2, column 3"));
        assert_eq!(run_str(&["convert", "/nonexistent/file"], "").0, 2);
        assert_eq!(run_str(&["--help"], "").0, 0);
    }

    #[test]
    fn qsd_limit_binds() {
        let (code, _, err) = run_str(&["qsd-check", "-", "--limit", "1"], WEDGE);
        assert_eq!(code, 3);
        assert!(!err.is_empty());
    }
}
