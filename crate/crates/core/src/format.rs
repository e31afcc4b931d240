//! Exact text format for cones, polyhedra and generator sets.
//!
//! ```text
//! # comment
//! H-cone n p q        p rows of B, then q rows of C, n entries each
//! H-rep m n           m rows `a_1 … a_n b`, meaning ⟨a, x⟩ ≤ b
//! V-rep n |V| |W|     |V| point rows, then |W| ray rows
//! Generators n k      k rows, read as cone(X)
//! ```
//!
//! Entries are integers or `p/q`; nothing passes through floating point.
//! Writers emit rows in ascending lexicographic order, so output is canonical.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::cone::{GeneratorSet, HCone};
use crate::linalg::{RatMatrix, RatVector, Rational};
use crate::polyhedron::{HPolyhedron, VPolyhedron};
use crate::verify::Certificate;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProblemFile {
    HCone(HCone),
    HPolyhedron(HPolyhedron),
    VPolyhedron(VPolyhedron),
    Generators(GeneratorSet),
}

impl ProblemFile {
    pub fn kind(&self) -> &'static str {
        match self {
            ProblemFile::HCone(_) => "h-cone",
            ProblemFile::HPolyhedron(_) => "h-polyhedron",
            ProblemFile::VPolyhedron(_) => "v-polyhedron",
            ProblemFile::Generators(_) => "generators",
        }
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    end_column: usize,
    tokens: Vec<Token<'a>>,
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start: Option<usize> = None;
        for (pos, ch) in content.char_indices().chain([(content.len(), ' ')]) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    tokens.push(Token {
                        text: &content[s..pos],
                        column: content[..s].chars().count() + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if !tokens.is_empty() {
            out.push(Line {
                number: idx + 1,
                end_column: content.chars().count() + 1,
                tokens,
            });
        }
    }
    out
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

/// Parses `p`, `-p`, or `p/q` with `q > 0` exactly.
pub fn parse_rational(token: &str) -> Result<Rational, String> {
    let (num, den) = match token.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (token, None),
    };
    let valid_int = |s: &str, signed: bool| {
        let digits = if signed {
            s.strip_prefix(['-', '+']).unwrap_or(s)
        } else {
            s
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid_int(num, true) {
        return Err(format!("malformed rational `{token}`"));
    }
    let numer = BigInt::from_str(num).map_err(|e| format!("malformed rational `{token}`: {e}"))?;
    let denom = match den {
        None => BigInt::from(1),
        Some(d) if valid_int(d, false) => {
            BigInt::from_str(d).map_err(|e| format!("malformed rational `{token}`: {e}"))?
        }
        Some(_) => return Err(format!("malformed rational `{token}`")),
    };
    if denom.is_zero() {
        return Err(format!("zero denominator in `{token}`"));
    }
    Ok(Rational::new(numer, denom))
}

fn parse_count(token: &Token<'_>, line: usize, what: &str) -> Result<usize, ParseError> {
    token.text.parse::<usize>().map_err(|_| {
        err(
            line,
            token.column,
            format!("expected {what}, found `{}`", token.text),
        )
    })
}

struct Rows<'a, 'b> {
    lines: std::slice::Iter<'b, Line<'a>>,
    last_line: usize,
}

impl Rows<'_, '_> {
    fn take(
        &mut self,
        count: usize,
        width: usize,
        what: &str,
    ) -> Result<Vec<RatVector>, ParseError> {
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            let Some(line) = self.lines.next() else {
                return Err(err(
                    self.last_line + 1,
                    1,
                    format!("expected {count} {what} rows, found {k}"),
                ));
            };
            self.last_line = line.number;
            if line.tokens.len() != width {
                let column = line.tokens.get(width).map_or(line.end_column, |t| t.column);
                return Err(err(
                    line.number,
                    column,
                    format!(
                        "{what} row needs {width} entries, found {}",
                        line.tokens.len()
                    ),
                ));
            }
            let mut row = Vec::with_capacity(width);
            for t in &line.tokens {
                row.push(parse_rational(t.text).map_err(|m| err(line.number, t.column, m))?);
            }
            out.push(RatVector::new(row));
        }
        Ok(out)
    }

    fn finish(mut self) -> Result<(), ParseError> {
        match self.lines.next() {
            Some(line) => Err(err(
                line.number,
                line.tokens[0].column,
                "unexpected trailing row",
            )),
            None => Ok(()),
        }
    }
}

pub fn parse(text: &str) -> Result<ProblemFile, ParseError> {
    let lines = tokenize(text);
    let Some((header, rest)) = lines.split_first() else {
        return Err(err(1, 1, "empty input, expected a header"));
    };
    let h = header.number;
    let keyword = &header.tokens[0];
    let arity = match keyword.text {
        "H-cone" | "V-rep" => 3,
        "H-rep" | "Generators" => 2,
        other => {
            return Err(err(
                h,
                keyword.column,
                format!("unknown header `{other}` (expected H-cone, H-rep, V-rep or Generators)"),
            ))
        }
    };
    if header.tokens.len() != arity + 1 {
        let column = header
            .tokens
            .get(arity + 1)
            .map_or(header.end_column, |t| t.column);
        return Err(err(
            h,
            column,
            format!("`{}` takes {arity} counts", keyword.text),
        ));
    }
    let counts: Vec<usize> = header.tokens[1..]
        .iter()
        .map(|t| parse_count(t, h, "a count"))
        .collect::<Result<_, _>>()?;

    let mut rows = Rows {
        lines: rest.iter(),
        last_line: h,
    };
    let dim_err = |m: String| err(h, header.tokens[1].column, m);

    let file = match keyword.text {
        "H-cone" => {
            let (n, p, q) = (counts[0], counts[1], counts[2]);
            if n == 0 {
                return Err(dim_err("cone dimension must be at least 1".into()));
            }
            let b = rows.take(p, n, "inequality")?;
            let c = rows.take(q, n, "equation")?;
            let cone = HCone::new(
                RatMatrix::from_rows(n, &b).expect("row widths checked"),
                RatMatrix::from_rows(n, &c).expect("row widths checked"),
            )
            .map_err(|e| dim_err(e.to_string()))?;
            ProblemFile::HCone(cone)
        }
        "H-rep" => {
            let (m, n) = (counts[0], counts[1]);
            let parsed = rows.take(m, n + 1, "inequality")?;
            let a: Vec<RatVector> = parsed.iter().map(|r| r.head(n)).collect();
            let b: Vec<Rational> = parsed.iter().map(|r| r[n].clone()).collect();
            let p = HPolyhedron::new(
                RatMatrix::from_rows(n, &a).expect("row widths checked"),
                RatVector::new(b),
            )
            .map_err(|e| dim_err(e.to_string()))?;
            ProblemFile::HPolyhedron(p)
        }
        "V-rep" => {
            let (n, nv, nw) = (counts[0], counts[1], counts[2]);
            let points = rows.take(nv, n, "point")?;
            let rays = rows.take(nw, n, "ray")?;
            ProblemFile::VPolyhedron(
                VPolyhedron::new(n, points, rays).map_err(|e| dim_err(e.to_string()))?,
            )
        }
        _ => {
            let (n, k) = (counts[0], counts[1]);
            let vectors = rows.take(k, n, "generator")?;
            ProblemFile::Generators(
                GeneratorSet::from_vectors(n, vectors).map_err(|e| dim_err(e.to_string()))?,
            )
        }
    };
    rows.finish()?;
    Ok(file)
}

fn write_row(out: &mut String, row: &[Rational]) {
    for (i, e) in row.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write!(out, "{e}").expect("writing to a String");
    }
    out.push('\n');
}

fn sorted_rows(m: &RatMatrix) -> Vec<RatVector> {
    let mut rows: Vec<RatVector> = m.row_vectors().collect();
    rows.sort();
    rows
}

pub fn write_generators(g: &GeneratorSet) -> String {
    let mut out = format!("Generators {} {}\n", g.dim(), g.len());
    for v in g.iter() {
        write_row(&mut out, v.entries());
    }
    out
}

pub fn write_problem(file: &ProblemFile) -> String {
    let mut out = String::new();
    match file {
        ProblemFile::HCone(cone) => {
            let (b, c) = (cone.inequalities(), cone.equations());
            writeln!(out, "H-cone {} {} {}", cone.dim(), b.rows(), c.rows()).expect("String");
            for r in sorted_rows(b).iter().chain(&sorted_rows(c)) {
                write_row(&mut out, r.entries());
            }
        }
        ProblemFile::HPolyhedron(p) => {
            writeln!(out, "H-rep {} {}", p.matrix().rows(), p.dim()).expect("String");
            let mut rows: Vec<RatVector> = p
                .matrix()
                .row_vectors()
                .zip(p.rhs().iter())
                .map(|(mut a, b)| {
                    a.push(b.clone());
                    a
                })
                .collect();
            rows.sort();
            for r in &rows {
                write_row(&mut out, r.entries());
            }
        }
        ProblemFile::VPolyhedron(q) => {
            writeln!(out, "V-rep {} {} {}", q.dim(), q.num_points(), q.num_rays()).expect("String");
            for v in q.points().chain(q.rays()) {
                write_row(&mut out, v.entries());
            }
        }
        ProblemFile::Generators(g) => out = write_generators(g),
    }
    out
}

/// Canonical form: what `parse(write_problem(file))` yields.
pub fn canonical(file: &ProblemFile) -> ProblemFile {
    parse(&write_problem(file)).expect("writer output always parses")
}

/// Machine-readable view of a problem file.
#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProblemJson {
    HCone {
        dim: usize,
        inequalities: Vec<RatVector>,
        equations: Vec<RatVector>,
    },
    HPolyhedron {
        dim: usize,
        /// Rows `(a, b)` meaning `⟨a, x⟩ ≤ b`.
        rows: Vec<RatVector>,
    },
    VPolyhedron {
        dim: usize,
        points: Vec<RatVector>,
        rays: Vec<RatVector>,
    },
    Generators {
        dim: usize,
        vectors: Vec<RatVector>,
    },
}

impl From<&ProblemFile> for ProblemJson {
    fn from(file: &ProblemFile) -> Self {
        match file {
            ProblemFile::HCone(c) => ProblemJson::HCone {
                dim: c.dim(),
                inequalities: sorted_rows(c.inequalities()),
                equations: sorted_rows(c.equations()),
            },
            ProblemFile::HPolyhedron(p) => {
                let mut rows: Vec<RatVector> = p
                    .matrix()
                    .row_vectors()
                    .zip(p.rhs().iter())
                    .map(|(mut a, b)| {
                        a.push(b.clone());
                        a
                    })
                    .collect();
                rows.sort();
                ProblemJson::HPolyhedron { dim: p.dim(), rows }
            }
            ProblemFile::VPolyhedron(q) => ProblemJson::VPolyhedron {
                dim: q.dim(),
                points: q.points().cloned().collect(),
                rays: q.rays().cloned().collect(),
            },
            ProblemFile::Generators(g) => ProblemJson::Generators {
                dim: g.dim(),
                vectors: g.to_vec(),
            },
        }
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

struct Failures<'a>(&'a [crate::verify::VectorCheck]);

impl fmt::Display for Failures<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.0.iter().filter(|c| !c.ok) {
            writeln!(f, "  failing: {}", c.vector)?;
        }
        Ok(())
    }
}

/// Human-readable certificate report, one PASS/FAIL line per check.
pub fn write_certificate(cert: &Certificate) -> String {
    let s = &cert.stats;
    let mut out = String::new();
    let w = &mut out;
    writeln!(
        w,
        "cone: dimension {}, {} inequalities, {} equations",
        s.dim, s.inequalities, s.equations
    )
    .expect("String");
    writeln!(
        w,
        "generators: {}, oracle rays: {}",
        s.generators, s.oracle_rays
    )
    .expect("String");
    if let Some(r) = &s.recursion {
        writeln!(
            w,
            "recursion: {} nodes, {} leaves, depth {}",
            r.nodes, r.leaves, r.max_depth
        )
        .expect("String");
    }
    let ok = |v: &[crate::verify::VectorCheck]| v.iter().filter(|c| c.ok).count();
    writeln!(
        w,
        "SOUNDNESS {} ({}/{} generators satisfy the system)",
        verdict(cert.soundness_ok()),
        ok(&cert.soundness),
        cert.soundness.len()
    )
    .expect("String");
    write!(w, "{}", Failures(&cert.soundness)).expect("String");
    match &cert.oracle_error {
        Some(e) => {
            writeln!(w, "COMPLETENESS FAIL (oracle unavailable: {e})").expect("String");
        }
        None => {
            writeln!(
                w,
                "COMPLETENESS {} ({}/{} oracle rays in cone(X))",
                verdict(cert.completeness_ok()),
                ok(&cert.completeness),
                cert.completeness.len()
            )
            .expect("String");
            write!(w, "{}", Failures(&cert.completeness)).expect("String");
            writeln!(
                w,
                "REVERSE {} ({}/{} generators in the oracle cone)",
                verdict(cert.reverse_ok()),
                ok(&cert.reverse),
                cert.reverse.len()
            )
            .expect("String");
            write!(w, "{}", Failures(&cert.reverse)).expect("String");
        }
    }
    writeln!(w, "{}", qsd_line(&cert.qsd)).expect("String");
    writeln!(w, "RESULT {}", verdict(cert.passed())).expect("String");
    out
}

pub fn qsd_line(q: &crate::verify::QsdReport) -> String {
    let method = match q.method {
        crate::verify::QsdMethod::Enumeration => "enumeration",
        crate::verify::QsdMethod::HadamardBound => "hadamard bound",
    };
    format!(
        "QSD {} ({method}: {} members, {} non-members, {} inconclusive)",
        verdict(q.all_members()),
        q.members,
        q.non_members,
        q.inconclusive
    )
}
