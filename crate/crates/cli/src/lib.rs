//! Command line front end for `grope-norm`.
//!
//! [`run`] parses an argument vector and returns the exit status together
//! with the text destined for stdout and stderr, so the binary and the
//! tests share one code path.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use grope_norm::bounds::{
    self, combine, difference_evidence, evidence_bounds, BoundEvidence, NormInterval, Upper,
};
use grope_norm::format::{self, ParseError};
use grope_norm::operators::{self, CapAssignment, FamilyKind, FamilyWitness};
use grope_norm::scalar::{format_exact_and_decimal, format_rational, parse_rational};
use grope_norm::seifert::{self, SeifertMatrix, UnitRootAngle};
use grope_norm::{BranchGrope, MultiGrope, Rational, Side};
use rayon::prelude::*;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_PARSE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => EXIT_DOMAIN,
            _ => EXIT_PARSE,
        }
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "grope-norm",
    version,
    about = "Exact grope norms and bounds for knots and links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("'{s}' is not a rational number"))
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// q-length of a grope file.
    Length {
        file: PathBuf,
        #[arg(long, value_parser = rational, default_value = "1")]
        q: Rational,
        /// Also print each component's length.
        #[arg(long)]
        components: bool,
    },
    /// Check the symmetric grope conditions.
    Validate { file: PathBuf },
    /// Split one branch, or split until every branch is unpaired.
    Split {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        component: usize,
        #[arg(long, required_unless_present = "full", conflicts_with = "full")]
        branch: Option<u64>,
        #[arg(long, value_enum, required_unless_present = "full")]
        side: Option<SideArg>,
        #[arg(long)]
        full: bool,
    },
    /// Glue two grope concordances along their common boundary.
    Glue { first: PathBuf, second: PathBuf },
    /// Levine-Tristram signature at one angle, or the largest one in a scan.
    Signature {
        file: PathBuf,
        /// Angle p/d, meaning ω = e^{2πip/d}.
        #[arg(long, conflicts_with = "d_max")]
        angle: Option<UnitRootAngle>,
        #[arg(long)]
        d_max: Option<u64>,
        /// Also report the floating point eigenvalue signature.
        #[arg(long, requires = "angle")]
        float: bool,
    },
    /// Normalized Alexander polynomial.
    Alexander { file: PathBuf },
    /// Arf invariant.
    Arf {
        file: PathBuf,
        /// Compare with the quadratic form computation.
        #[arg(long)]
        cross_check: bool,
    },
    /// Combine an evidence file into a norm interval.
    Bounds {
        #[arg(long)]
        evidence: PathBuf,
        #[arg(long, value_parser = rational, default_value = "1")]
        q: Rational,
    },
    /// Bounds on the grope distance between two knots.
    Distance {
        #[arg(long)]
        k: PathBuf,
        #[arg(long)]
        j: PathBuf,
        #[arg(long, value_parser = rational, default_value = "1")]
        q: Rational,
        #[arg(long)]
        evidence: Option<PathBuf>,
        #[arg(long)]
        d_max: Option<u64>,
    },
    /// Grope for R(L) from gropes for the components of L.
    Infect {
        #[arg(long)]
        operator: PathBuf,
        /// Grope files; their components, in order, fill the slots.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Cap multiplicity per slot, used at every tip.
        #[arg(long, value_delimiter = ',')]
        multiplicity: Option<Vec<u64>>,
    },
    /// Contraction constant N/q of an algebraic winding zero operator.
    Contraction {
        #[arg(long)]
        operator: PathBuf,
        #[arg(long, value_parser = rational)]
        q: Rational,
    },
    /// Witness gropes for the standard families.
    Family {
        #[command(subcommand)]
        family: FamilyCommand,
    },
    /// The (m, n) defeating a quasi-isometry with constants A, B.
    Qiso {
        #[arg(long, value_parser = rational)]
        a: Rational,
        #[arg(long, value_parser = rational)]
        b: Rational,
    },
    /// Table of evidence, per-item bounds and the combined interval.
    Report {
        #[arg(long)]
        evidence: Option<PathBuf>,
        #[arg(long, requires = "j")]
        k: Option<PathBuf>,
        #[arg(long, requires = "k")]
        j: Option<PathBuf>,
        #[arg(long, value_parser = rational, default_value = "1")]
        q: Rational,
        #[arg(long)]
        d_max: Option<u64>,
    },
    /// Run every command line of a manifest file.
    Batch { manifest: PathBuf },
}

#[derive(Subcommand, Debug)]
enum FamilyCommand {
    /// K_n^m, built by iterated infection from K_0.
    Kn {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 3)]
        m: u32,
        #[arg(long, value_parser = rational, default_value = "1")]
        q: Rational,
        /// Print the witness grope instead of the summary.
        #[arg(long)]
        grope: bool,
    },
    /// Connected sum of m copies of the n-fold Whitehead double.
    Whitehead {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = rational, default_value = "1")]
        q: Rational,
        #[arg(long)]
        grope: bool,
    },
    /// The link J_i of an m-component Bing doubling family.
    Bing {
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// F(1), F(2), ...; the identity when omitted.
        #[arg(long, value_delimiter = ',')]
        f: Option<Vec<u32>>,
        #[arg(long)]
        i: usize,
        #[arg(long, value_parser = rational, default_value = "1")]
        q: Rational,
        #[arg(long)]
        grope: bool,
    },
}

/// Parses `args` (program name first) and runs the command, resolving
/// relative paths against the working directory.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_in(args, Path::new(""))
}

/// As [`run`], with relative paths resolved against `base`.
pub fn run_in<I, S>(args: I, base: &Path) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_PARSE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let ctx = Context {
        base: base.to_path_buf(),
    };
    match ctx.execute(cli.command) {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

struct Context {
    base: PathBuf,
}

impl Context {
    fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base.join(path)
        }
    }

    fn read(&self, path: &Path) -> Result<(String, String), CliError> {
        let full = self.resolve(path);
        let name = path.display().to_string();
        let text = fs::read_to_string(&full).map_err(|source| CliError::Io {
            path: name.clone(),
            source,
        })?;
        Ok((name, text))
    }

    fn load<T>(
        &self,
        path: &Path,
        parse: fn(&str) -> Result<T, ParseError>,
    ) -> Result<T, CliError> {
        let (name, text) = self.read(path)?;
        parse(&text).map_err(|source| CliError::Parse { path: name, source })
    }

    fn grope(&self, path: &Path) -> Result<MultiGrope, CliError> {
        self.load(path, format::parse_grope)
    }

    fn seifert(&self, path: &Path) -> Result<SeifertMatrix, CliError> {
        self.load(path, format::parse_seifert)
    }

    fn evidence(&self, path: &Path) -> Result<Vec<BoundEvidence>, CliError> {
        self.load(path, format::parse_evidence)
    }

    fn execute(&self, command: Command) -> Result<(i32, String), CliError> {
        let mut out = String::new();
        match command {
            Command::Length {
                file,
                q,
                components,
            } => {
                let g = self.grope(&file)?;
                let total = g.length_q(&q).map_err(domain)?;
                writeln!(out, "{}", format_exact_and_decimal(&total)).unwrap();
                if components {
                    for (i, c) in g.components().iter().enumerate() {
                        let l = c.length_q(&q).map_err(domain)?;
                        writeln!(out, "component {i}: {}", format_exact_and_decimal(&l)).unwrap();
                    }
                }
            }
            Command::Validate { file } => {
                let g = self.grope(&file)?;
                let report = g.validate();
                if !report.is_ok() {
                    return Err(CliError::Domain(report.to_string().trim_end().to_string()));
                }
                writeln!(
                    out,
                    "valid: {} component(s), {} branch(es)",
                    g.components().len(),
                    g.branch_count()
                )
                .unwrap();
            }
            Command::Split {
                file,
                component,
                branch,
                side,
                full,
            } => {
                let g = self.grope(&file)?;
                let mut parts = g.into_components();
                let count = parts.len();
                let target = parts.get(component).ok_or_else(|| {
                    CliError::Domain(format!("no component {component}; the grope has {count}"))
                })?;
                let split = if full {
                    grope_norm::split_full(target)
                } else {
                    let side = match side.expect("clap requires --side") {
                        SideArg::Left => Side::Left,
                        SideArg::Right => Side::Right,
                    };
                    grope_norm::split_branch(target, branch.expect("clap requires --branch"), side)
                }
                .map_err(domain)?;
                parts[component] = split;
                out.push_str(&format::print_grope(&MultiGrope::new(parts)));
            }
            Command::Glue { first, second } => {
                let glued = grope_norm::glue(&self.grope(&first)?, &self.grope(&second)?)
                    .map_err(domain)?;
                out.push_str(&format::print_grope(&glued));
            }
            Command::Signature {
                file,
                angle,
                d_max,
                float,
            } => {
                let a = self.seifert(&file)?;
                if let Some(angle) = angle {
                    let s = seifert::levine_tristram(&a, angle).map_err(domain)?;
                    writeln!(out, "signature at {angle}: {s}").unwrap();
                    if float {
                        let f = seifert::levine_tristram_float(&a, angle.radians());
                        writeln!(
                            out,
                            "float oracle: {} (min |eigenvalue| {:.3e})",
                            f.signature, f.min_abs_eigenvalue
                        )
                        .unwrap();
                    }
                } else {
                    let d_max = d_max.unwrap_or_else(|| bounds::default_d_max(&a));
                    let scan = seifert::max_abs_signature(&a, d_max);
                    let at = scan.at.map_or("none".to_string(), |x| x.to_string());
                    writeln!(out, "max |signature|: {} at {at}", scan.max_abs).unwrap();
                    writeln!(out, "angles evaluated: {} (d <= {d_max})", scan.evaluated).unwrap();
                    writeln!(
                        out,
                        "saturated: {}",
                        if scan.saturated { "yes" } else { "no" }
                    )
                    .unwrap();
                }
            }
            Command::Alexander { file } => {
                let a = self.seifert(&file)?;
                writeln!(out, "{}", seifert::alexander(&a)).unwrap();
            }
            Command::Arf { file, cross_check } => {
                let a = self.seifert(&file)?;
                let value = seifert::arf(&a);
                if cross_check {
                    let other = seifert::arf_quadratic_form(&a);
                    if other != value {
                        return Err(CliError::Domain(format!(
                            "Arf mismatch: Murasugi congruence {value}, quadratic form {other}"
                        )));
                    }
                    writeln!(
                        out,
                        "{value} (Murasugi congruence and quadratic form agree)"
                    )
                    .unwrap();
                } else {
                    writeln!(out, "{value}").unwrap();
                }
            }
            Command::Bounds { evidence, q } => {
                let list = self.evidence(&evidence)?;
                let interval = combine(&list, &q).map_err(domain)?;
                write_interval(&mut out, &interval);
            }
            Command::Distance {
                k,
                j,
                q,
                evidence,
                d_max,
            } => {
                let a_k = self.seifert(&k)?;
                let a_j = self.seifert(&j)?;
                let extra = match evidence {
                    Some(path) => self.evidence(&path)?,
                    None => Vec::new(),
                };
                let interval =
                    bounds::distance_bounds(&a_k, &a_j, &extra, &q, d_max).map_err(domain)?;
                write_interval(&mut out, &interval);
            }
            Command::Infect {
                operator,
                inputs,
                multiplicity,
            } => {
                let op = self.load(&operator, format::parse_operator)?;
                let mut gropes: Vec<BranchGrope> = Vec::new();
                for path in &inputs {
                    gropes.extend(self.grope(path)?.into_components());
                }
                let caps = match multiplicity {
                    Some(m) => CapAssignment::Uniform(m),
                    None => CapAssignment::ones(op.slots()),
                };
                let result = operators::infect(&gropes, &op, &caps).map_err(domain)?;
                out.push_str(&format::print_grope(&result));
            }
            Command::Contraction { operator, q } => {
                let op = self.load(&operator, format::parse_operator)?;
                let delta = operators::contraction_factor(&op, &q).map_err(domain)?;
                writeln!(out, "N = {}", op.max_slot_winding()).unwrap();
                writeln!(out, "delta = N/q = {}", format_exact_and_decimal(&delta)).unwrap();
            }
            Command::Family { family } => self.family(&mut out, family)?,
            Command::Qiso { a, b } => {
                let w = operators::quasi_isometry_counterexample(&a, &b).map_err(domain)?;
                writeln!(out, "m = {}", w.m).unwrap();
                writeln!(out, "n = {}", w.n).unwrap();
                writeln!(out, "m/A - B = {}", format_exact_and_decimal(&w.lhs)).unwrap();
                writeln!(out, "m/2^n = {}", format_exact_and_decimal(&w.rhs)).unwrap();
                let verdict = if w.certificate() { "holds" } else { "FAILS" };
                writeln!(out, "certificate m/A - B > m/2^n: {verdict}").unwrap();
                if !w.certificate() {
                    return Err(CliError::Domain(out));
                }
            }
            Command::Report {
                evidence,
                k,
                j,
                q,
                d_max,
            } => {
                let mut list = Vec::new();
                if let (Some(k), Some(j)) = (&k, &j) {
                    list.push(difference_evidence(
                        &self.seifert(k)?,
                        &self.seifert(j)?,
                        d_max,
                    ));
                }
                if let Some(path) = &evidence {
                    list.extend(self.evidence(path)?);
                }
                if list.is_empty() {
                    return Err(CliError::Usage("report needs --evidence or --k/--j".into()));
                }
                report(&mut out, &list, &q)?;
            }
            Command::Batch { manifest } => return self.batch(&manifest),
        }
        Ok((EXIT_OK, out))
    }

    fn family(&self, out: &mut String, family: FamilyCommand) -> Result<(), CliError> {
        let (witness, q, grope) = match family {
            FamilyCommand::Kn { n, m, q, grope } => (operators::family_kn(n, m), q, grope),
            FamilyCommand::Whitehead { m, n, q, grope } => {
                (operators::family_whitehead(m, n), q, grope)
            }
            FamilyCommand::Bing { m, f, i, q, grope } => {
                let f = f.unwrap_or_else(|| (1..=i as u32).collect());
                (operators::family_bing_links(m, &f, i), q, grope)
            }
        };
        let witness = witness.map_err(domain)?;
        if grope {
            out.push_str(&format::print_grope(&witness.grope));
            return Ok(());
        }
        write_family(out, &witness, &q)
    }

    fn batch(&self, manifest: &Path) -> Result<(i32, String), CliError> {
        let (name, text) = self.read(manifest)?;
        let base = self
            .resolve(manifest)
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_default();
        let entries: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let results: Vec<Outcome> = entries
            .par_iter()
            .map(|(line, entry)| {
                let words: Vec<&str> = entry.split_whitespace().collect();
                if words.first() == Some(&"batch") {
                    return Outcome {
                        code: EXIT_DOMAIN,
                        stdout: String::new(),
                        stderr: format!(
                            "error: {name}: line {line}: nested batch is not supported\n"
                        ),
                    };
                }
                run_in(std::iter::once("grope-norm").chain(words), &base)
            })
            .collect();
        let mut out = String::new();
        let mut failed = 0;
        for ((line, entry), result) in entries.iter().zip(&results) {
            writeln!(out, "== [{line}] {entry}").unwrap();
            if result.code == EXIT_OK {
                out.push_str(&result.stdout);
            } else {
                failed += 1;
                write!(out, "{}", result.stderr).unwrap();
            }
        }
        if !entries.is_empty() {
            writeln!(out, "== {} ok, {failed} failed", entries.len() - failed).unwrap();
        }
        Ok((if failed == 0 { EXIT_OK } else { EXIT_DOMAIN }, out))
    }
}

fn write_interval(out: &mut String, interval: &NormInterval<Rational>) {
    writeln!(out, "{}", interval.render()).unwrap();
    let source =
        |s: &Option<BoundEvidence>| s.as_ref().map_or("none".to_string(), |e| e.describe());
    writeln!(out, "lower from: {}", source(&interval.lower_source)).unwrap();
    writeln!(out, "upper from: {}", source(&interval.upper_source)).unwrap();
}

fn write_family(out: &mut String, w: &FamilyWitness, q: &Rational) -> Result<(), CliError> {
    let name = match &w.family {
        FamilyKind::Kn { n, m } => format!("K_n (n = {n}, m = {m})"),
        FamilyKind::Whitehead { m, n } => format!("Whitehead doubles (m = {m}, n = {n})"),
        FamilyKind::Bing { components, f } => {
            format!("Bing link ({components} components, F(i) = {f})")
        }
    };
    let length = w.length(q).map_err(domain)?;
    let (lower, upper) = w.window(q);
    writeln!(out, "family: {name}").unwrap();
    writeln!(out, "q: {}", format_rational(q)).unwrap();
    writeln!(out, "witness branches: {}", w.grope.branch_count()).unwrap();
    writeln!(out, "witness length: {}", format_exact_and_decimal(&length)).unwrap();
    writeln!(
        out,
        "window: [{}, {}]",
        format_exact_and_decimal(&lower),
        format_exact_and_decimal(&upper)
    )
    .unwrap();
    let inside = lower <= length && length <= upper;
    writeln!(
        out,
        "witness in window: {}",
        if inside { "yes" } else { "no" }
    )
    .unwrap();
    for flag in &w.asserted_flags {
        writeln!(out, "flag: {flag}").unwrap();
    }
    if !inside {
        return Err(CliError::Domain(out.clone()));
    }
    Ok(())
}

fn report(out: &mut String, list: &[BoundEvidence], q: &Rational) -> Result<(), CliError> {
    let interval = combine(list, q).map_err(domain)?;
    let cell = |b: Option<Rational>| b.map_or("-".to_string(), |v| format_exact_and_decimal(&v));
    let mut rows = vec![[
        "#".to_string(),
        "lower".to_string(),
        "upper".to_string(),
        "evidence".to_string(),
        "provenance".to_string(),
    ]];
    for (i, e) in list.iter().enumerate() {
        let (lower, upper) = evidence_bounds(e, q).map_err(domain)?;
        rows.push([
            (i + 1).to_string(),
            cell(lower),
            cell(upper),
            e.kind.to_string(),
            e.provenance.clone(),
        ]);
    }
    let widths: Vec<usize> = (0..5)
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    writeln!(
        out,
        "interval at q = {}: {}",
        format_rational(q),
        interval.render()
    )
    .unwrap();
    writeln!(out).unwrap();
    for row in &rows {
        let mut line = String::new();
        for (c, text) in row.iter().enumerate() {
            if c > 0 {
                line.push_str(" | ");
            }
            if c + 1 == row.len() {
                line.push_str(text);
            } else {
                let pad = widths[c] - text.chars().count();
                line.push_str(text);
                line.extend(std::iter::repeat_n(' ', pad));
            }
        }
        writeln!(out, "{}", line.trim_end()).unwrap();
    }
    writeln!(out).unwrap();
    let index = |s: &Option<BoundEvidence>| {
        s.as_ref()
            .and_then(|e| list.iter().position(|x| x == e))
            .map_or("none".to_string(), |i| format!("#{}", i + 1))
    };
    writeln!(
        out,
        "lower {} from {}",
        format_exact_and_decimal(&interval.lower),
        index(&interval.lower_source)
    )
    .unwrap();
    let upper = match &interval.upper {
        Upper::Finite(u) => format_exact_and_decimal(u),
        Upper::Infinite => "inf".to_string(),
    };
    writeln!(out, "upper {upper} from {}", index(&interval.upper_source)).unwrap();
    Ok(())
}
