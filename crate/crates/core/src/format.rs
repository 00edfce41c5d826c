//! Line-oriented text formats with version headers.
//!
//! ```text
//! grope v1                      seifert v1
//! component knot                dim 2
//! branch - -                    1 0
//! branch (2 (1)*2 (2) (3)) (1 (1)*2)   1 1
//! branch (2) (2) *3
//! ```
//!
//! Operators and evidence ledgers follow the same pattern, see
//! [`parse_operator`] and [`parse_evidence`]. `#` starts a comment.
//! Printing always produces the canonical form, and parsing a canonical
//! text and printing it again reproduces it byte for byte.

use std::fmt::Write as _;

use num_bigint::BigInt;
use thiserror::Error;

use crate::bounds::{BoundEvidence, EvidenceKind};
use crate::grope::{BoundaryKind, Branch, BranchGrope, BranchRun, MultiGrope, SymmetricTree};
use crate::operators::InfectionOperator;
use crate::scalar::{format_rational, parse_rational};
use crate::seifert::{IntMatrix, SeifertMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn expect_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    name: &str,
) -> Result<(), ParseError> {
    match lines.next() {
        Some((_, l)) if l == format!("{name} v1") => Ok(()),
        Some((n, l)) => err(n, format!("expected header '{name} v1', found '{l}'")),
        None => err(0, format!("empty input, expected header '{name} v1'")),
    }
}

struct TreeParser<'a> {
    bytes: &'a [u8],
    pos: usize,
    line: usize,
}

impl TreeParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn number(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap_or("");
        text.parse().or_else(|_| {
            err(
                self.line,
                format!("expected a number at column {}", start + 1),
            )
        })
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn tree(&mut self) -> Result<SymmetricTree, ParseError> {
        if !self.eat(b'(') {
            return err(
                self.line,
                format!("expected '(' at column {}", self.pos + 1),
            );
        }
        let genus = self.number()?;
        let mut children = Vec::new();
        loop {
            self.skip_ws();
            match self.bytes.get(self.pos) {
                Some(b')') => {
                    self.pos += 1;
                    return Ok(SymmetricTree::new(genus, children));
                }
                Some(b'(') => {
                    let child = self.tree()?;
                    let copies = if self.eat(b'*') { self.number()? } else { 1 };
                    if copies == 0 {
                        return err(self.line, "child repeat count must be positive");
                    }
                    children.extend(std::iter::repeat_n(child, copies as usize));
                }
                _ => {
                    return err(
                        self.line,
                        format!("unexpected input at column {}", self.pos + 1),
                    )
                }
            }
        }
    }
}

/// Parses one tree such as `(2 (1)*2 (2) (3))`.
pub fn parse_tree(text: &str) -> Result<SymmetricTree, ParseError> {
    parse_tree_at(text, 1)
}

fn parse_tree_at(text: &str, line: usize) -> Result<SymmetricTree, ParseError> {
    let mut p = TreeParser {
        bytes: text.as_bytes(),
        pos: 0,
        line,
    };
    let tree = p.tree()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return err(
            line,
            format!("trailing input after tree at column {}", p.pos + 1),
        );
    }
    Ok(tree)
}

fn parse_side(text: &str, line: usize) -> Result<Option<SymmetricTree>, ParseError> {
    if text == "-" {
        Ok(None)
    } else {
        parse_tree_at(text, line).map(Some)
    }
}

// Splits `(..) (..) *3` into its two side texts and the copy count.
fn split_branch_line(rest: &str, line: usize) -> Result<(&str, &str, u64), ParseError> {
    let mut parts = Vec::new();
    let bytes = rest.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if bytes[i] == b'(' {
            let mut depth = 0i64;
            while i < bytes.len() {
                match bytes[i] {
                    b'(' => depth += 1,
                    b')' => {
                        depth -= 1;
                        if depth == 0 {
                            i += 1;
                            break;
                        }
                    }
                    _ => {}
                }
                i += 1;
            }
            if depth != 0 {
                return err(line, "unbalanced parentheses");
            }
        } else {
            while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
                i += 1;
            }
        }
        parts.push(&rest[start..i]);
    }
    let (left, right, copies) = match parts.as_slice() {
        [l, r] => (*l, *r, 1),
        [l, r, c] => {
            let Some(count) = c.strip_prefix('*') else {
                return err(line, format!("expected '*count', found '{c}'"));
            };
            let count: u64 = count
                .parse()
                .or_else(|_| err(line, format!("bad branch repeat '{c}'")))?;
            if count == 0 {
                return err(line, "branch repeat count must be positive");
            }
            (*l, *r, count)
        }
        _ => {
            return err(
                line,
                "branch line needs a left side, a right side and an optional *count",
            )
        }
    };
    Ok((left, right, copies))
}

fn parse_kind(text: &str, line: usize) -> Result<BoundaryKind, ParseError> {
    match text {
        "knot" => Ok(BoundaryKind::KnotSlice),
        "concordance" => Ok(BoundaryKind::Concordance),
        other => err(
            line,
            format!("unknown component kind '{other}' (knot | concordance)"),
        ),
    }
}

// Component and branch lines, shared by grope files and evidence witnesses.
fn parse_grope_body<'a>(
    lines: impl Iterator<Item = (usize, &'a str)>,
) -> Result<MultiGrope, ParseError> {
    let mut components: Vec<BranchGrope> = Vec::new();
    let mut runs: Vec<Vec<BranchRun>> = Vec::new();
    let mut kinds = Vec::new();
    for (n, line) in lines {
        let (word, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match word {
            "component" => {
                kinds.push(parse_kind(rest.trim(), n)?);
                runs.push(Vec::new());
            }
            "branch" => {
                let Some(current) = runs.last_mut() else {
                    return err(n, "branch before any component line");
                };
                let (l, r, copies) = split_branch_line(rest.trim(), n)?;
                let branch = Branch::new(parse_side(l, n)?, parse_side(r, n)?);
                current.push(BranchRun { branch, copies });
            }
            other => return err(n, format!("unknown keyword '{other}'")),
        }
    }
    for (kind, r) in kinds.into_iter().zip(runs) {
        components.push(BranchGrope::from_runs(kind, r));
    }
    Ok(MultiGrope::new(components))
}

/// Parses a `grope v1` file. Structure is not validated here.
pub fn parse_grope(text: &str) -> Result<MultiGrope, ParseError> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, "grope")?;
    let grope = parse_grope_body(lines)?;
    if grope.components().is_empty() {
        return err(0, "grope file has no component lines");
    }
    Ok(grope)
}

fn side_text(side: Option<&SymmetricTree>) -> String {
    side.map_or("-".to_string(), |t| t.to_string())
}

fn write_grope_body(out: &mut String, grope: &MultiGrope) {
    for component in grope.components() {
        let _ = writeln!(out, "component {}", component.kind());
        for run in component.canonical_runs() {
            let _ = write!(
                out,
                "branch {} {}",
                side_text(run.branch.left()),
                side_text(run.branch.right())
            );
            if run.copies > 1 {
                let _ = write!(out, " *{}", run.copies);
            }
            out.push('\n');
        }
    }
}

pub fn print_grope(grope: &MultiGrope) -> String {
    let mut out = String::from("grope v1\n");
    write_grope_body(&mut out, grope);
    out
}

fn parse_int_row(line: &str, n: usize, width: usize) -> Result<Vec<BigInt>, ParseError> {
    let row: Vec<BigInt> = line
        .split_whitespace()
        .map(|t| t.parse().or_else(|_| err(n, format!("bad integer '{t}'"))))
        .collect::<Result<_, _>>()?;
    if row.len() != width {
        return err(n, format!("expected {width} entries, found {}", row.len()));
    }
    Ok(row)
}

fn keyword_value<'a>(
    line: Option<(usize, &'a str)>,
    key: &str,
) -> Result<(usize, &'a str), ParseError> {
    match line {
        Some((n, l)) => match l.split_once(char::is_whitespace) {
            Some((k, v)) if k == key => Ok((n, v.trim())),
            _ if l == key => Ok((n, "")),
            _ => err(n, format!("expected '{key}', found '{l}'")),
        },
        None => err(0, format!("unexpected end of input, expected '{key}'")),
    }
}

fn parse_count(value: &str, n: usize, key: &str) -> Result<usize, ParseError> {
    value
        .parse()
        .or_else(|_| err(n, format!("bad {key} '{value}'")))
}

/// Parses a `seifert v1` file and checks that it is a Seifert matrix.
pub fn parse_seifert(text: &str) -> Result<SeifertMatrix, ParseError> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, "seifert")?;
    let (n, dim) = keyword_value(lines.next(), "dim")?;
    let dim = parse_count(dim, n, "dimension")?;
    let mut rows = Vec::with_capacity(dim);
    let mut last_line = n;
    for _ in 0..dim {
        let Some((n, line)) = lines.next() else {
            return err(last_line, format!("expected {dim} matrix rows"));
        };
        rows.push(parse_int_row(line, n, dim)?);
        last_line = n;
    }
    if let Some((n, l)) = lines.next() {
        return err(n, format!("unexpected trailing line '{l}'"));
    }
    let matrix = if dim == 0 {
        IntMatrix::zeros(0, 0)
    } else {
        IntMatrix::from_rows(rows)
    };
    SeifertMatrix::new(matrix).or_else(|e| err(n, e.to_string()))
}

pub fn print_seifert(matrix: &SeifertMatrix) -> String {
    format!("seifert v1\ndim {}\n{}", matrix.size(), matrix.matrix())
}

/// Parses an `operator v1` file:
///
/// ```text
/// operator v1
/// outputs 1
/// slots 1
/// winding
/// 2
/// algebraic
/// 0
/// eta (1)
/// slice_with_disks yes
/// ```
pub fn parse_operator(text: &str) -> Result<InfectionOperator, ParseError> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, "operator")?;
    let (n, v) = keyword_value(lines.next(), "outputs")?;
    let outputs = parse_count(v, n, "output count")?;
    let (n, v) = keyword_value(lines.next(), "slots")?;
    let slots = parse_count(v, n, "slot count")?;
    let mut matrix = |key: &str| -> Result<Vec<Vec<BigInt>>, ParseError> {
        keyword_value(lines.next(), key)?;
        (0..outputs)
            .map(|_| match lines.next() {
                Some((n, l)) => parse_int_row(l, n, slots),
                None => err(0, format!("unexpected end of input in {key} matrix")),
            })
            .collect()
    };
    let to_u64 = |n: &BigInt| u64::try_from(n).ok();
    let winding: Vec<Vec<u64>> = matrix("winding")?
        .iter()
        .map(|r| r.iter().map(to_u64).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()
        .ok_or(ParseError {
            line: 0,
            message: "winding counts must be nonnegative".into(),
        })?;
    let algebraic: Vec<Vec<i64>> = matrix("algebraic")?
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| i64::try_from(x).ok())
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<_>>()
        .ok_or(ParseError {
            line: 0,
            message: "algebraic winding out of range".into(),
        })?;
    let mut eta = Vec::with_capacity(slots);
    let mut last = n;
    for _ in 0..slots {
        let (n, v) = keyword_value(lines.next(), "eta")?;
        eta.push(parse_side(v, n)?);
        last = n;
    }
    let (n, v) = keyword_value(lines.next(), "slice_with_disks")?;
    let slice = match v {
        "yes" => true,
        "no" => false,
        other => return err(n, format!("expected yes|no, found '{other}'")),
    };
    if let Some((n, l)) = lines.next() {
        return err(n, format!("unexpected trailing line '{l}'"));
    }
    InfectionOperator::new(winding, algebraic, eta, slice).or_else(|e| err(last, e.to_string()))
}

pub fn print_operator(op: &InfectionOperator) -> String {
    let mut out = String::from("operator v1\n");
    let _ = writeln!(out, "outputs {}", op.outputs());
    let _ = writeln!(out, "slots {}", op.slots());
    out.push_str("winding\n");
    for row in op.winding() {
        let r: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "{}", r.join(" "));
    }
    out.push_str("algebraic\n");
    for row in op.algebraic_winding() {
        let r: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "{}", r.join(" "));
    }
    for tree in op.eta() {
        let _ = writeln!(out, "eta {}", side_text(tree.as_ref()));
    }
    let _ = writeln!(
        out,
        "slice_with_disks {}",
        if op.slice_with_disks() { "yes" } else { "no" }
    );
    out
}

/// Parses an `evidence v1` ledger. Each line is `kind args | provenance`:
///
/// ```text
/// evidence v1
/// signature 2 0 | computed
/// filtration 3 | not algebraically concordant
/// rho 1 64 | asserted
/// slice_genus 1 | unknotted curve on the Seifert surface
/// topologically_slice | asserted
/// witness begin | constructed grope
/// component knot
/// branch (8) (8)
/// end
/// ```
pub fn parse_evidence(text: &str) -> Result<Vec<BoundEvidence>, ParseError> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, "evidence")?;
    let mut out = Vec::new();
    while let Some((n, line)) = lines.next() {
        let (body, provenance) = match line.split_once('|') {
            Some((b, p)) => (b.trim(), p.trim().to_string()),
            None => (line, String::new()),
        };
        let words: Vec<&str> = body.split_whitespace().collect();
        let int = |t: &str| -> Result<i64, ParseError> {
            t.parse().or_else(|_| err(n, format!("bad integer '{t}'")))
        };
        let kind = match words.as_slice() {
            ["signature", s, a] => {
                let arf = int(a)?;
                if !(0..=1).contains(&arf) {
                    return err(n, "Arf invariant must be 0 or 1");
                }
                EvidenceKind::Signature {
                    sigma_max: int(s)?,
                    arf: arf as u8,
                }
            }
            ["filtration", k] => EvidenceKind::Filtration {
                n: u32::try_from(int(k)?).or_else(|_| err(n, "bad n"))?,
            },
            ["rho", k, r] => EvidenceKind::Rho {
                n: u32::try_from(int(k)?).or_else(|_| err(n, "bad n"))?,
                inf_abs_rho: parse_rational(r).ok_or(ParseError {
                    line: n,
                    message: format!("bad rational '{r}'"),
                })?,
            },
            ["slice_genus", g] => {
                EvidenceKind::SliceGenus(u64::try_from(int(g)?).or_else(|_| err(n, "bad genus"))?)
            }
            ["topologically_slice"] => EvidenceKind::TopologicallySlice,
            ["witness", "begin"] => {
                let mut body = Vec::new();
                let mut closed = false;
                for (m, l) in lines.by_ref() {
                    if l == "end" {
                        closed = true;
                        break;
                    }
                    body.push((m, l));
                }
                if !closed {
                    return err(n, "witness block is missing its 'end' line");
                }
                let grope = parse_grope_body(body.into_iter())?;
                if grope.components().is_empty() {
                    return err(n, "witness block has no component lines");
                }
                EvidenceKind::Witness(grope)
            }
            _ => return err(n, format!("unrecognised evidence line '{body}'")),
        };
        out.push(BoundEvidence { kind, provenance });
    }
    Ok(out)
}

pub fn print_evidence(evidence: &[BoundEvidence]) -> String {
    let mut out = String::from("evidence v1\n");
    for e in evidence {
        let head = match &e.kind {
            EvidenceKind::Signature { sigma_max, arf } => format!("signature {sigma_max} {arf}"),
            EvidenceKind::Filtration { n } => format!("filtration {n}"),
            EvidenceKind::Rho { n, inf_abs_rho } => {
                format!("rho {n} {}", format_rational(inf_abs_rho))
            }
            EvidenceKind::SliceGenus(g) => format!("slice_genus {g}"),
            EvidenceKind::TopologicallySlice => "topologically_slice".to_string(),
            EvidenceKind::Witness(_) => "witness begin".to_string(),
        };
        out.push_str(&head);
        if !e.provenance.is_empty() {
            let _ = write!(out, " | {}", e.provenance);
        }
        out.push('\n');
        if let EvidenceKind::Witness(g) = &e.kind {
            write_grope_body(&mut out, g);
            out.push_str("end\n");
        }
    }
    out
}
