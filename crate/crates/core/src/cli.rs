//! Command-line interface.
//!
//! Exit status: 0 on success, 1 on usage or evaluation errors, 2 when a
//! verification suite reports a failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::boxcount::{boxcount_dimension, DEFAULT_NODE_CAP};
use crate::cylinders::{
    covering_sum, cylinder_geometry, cylinder_report, has_lemma_formula, tail_extrema_oracle, verify, VerifyOptions,
    VerifyReport,
};
use crate::dimension::{family_dimension, family_dimension_with, DimensionResult};
use crate::error::{Error, Result};
use crate::families::{
    blocks_of_family, enumerate_addresses, eval_family_point, eval_md_point, expand_address, expand_md_address,
    CylinderAddress, FamilySpec, DEFAULT_CAP,
};
use crate::radix::{
    digits_from_rational, eval_negasadic, eval_sadic, fmt_rational, parse_rational, to_f64, truncation_bound,
    DigitString, Rational,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Representation {
    Sadic,
    Negasadic,
}

#[derive(Debug, Parser)]
#[command(
    name = "cantorset",
    version,
    about = "Digit-restricted Cantor-like sets: exact cylinders, verification and dimensions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Largest cylinder rank examined
    #[arg(long, global = true, default_value_t = 8)]
    pub depth: usize,

    /// Cap on enumerated addresses (and on cylinders visited per box-count scale)
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: u64,

    /// Box-count exponents n for widths s^-n, written `lo..hi`
    #[arg(long, global = true, default_value = "4..10")]
    pub scales: String,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the output to this file instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hausdorff dimension of a family
    Dim {
        family: String,
        /// Horizon of the liminf estimate for non-periodic Cantor bases
        #[arg(long, default_value_t = crate::dimension::DEFAULT_NMAX)]
        nmax: usize,
    },
    /// Block set and length histogram of a family
    Blocks { family: String },
    /// Exact value of a family point given by its symbols
    Eval {
        family: String,
        /// Comma-separated symbols, e.g. `2,1`
        symbols: String,
        /// Repeating symbol block closing the point, e.g. `2`
        #[arg(long)]
        tail: Option<String>,
        /// Gap lengths for MD points, e.g. `3,5`
        #[arg(long)]
        gaps: Option<String>,
    },
    /// Interval, diameter and orientation of one cylinder
    Cylinder {
        family: String,
        /// Address, e.g. `(2,1)` or `2,1`; empty for the whole set
        #[arg(default_value = "")]
        address: String,
        /// Child symbol whose diameter ratio is reported
        #[arg(long)]
        child: Option<u32>,
        #[arg(long, default_value_t = 10)]
        oracle_depth: usize,
    },
    /// Run the cylinder verification suite on all addresses up to --depth
    Verify {
        family: String,
        #[arg(long, default_value_t = 10)]
        oracle_depth: usize,
    },
    /// Covering sums (total cylinder length) for ranks 0..=--depth
    Cover { family: String },
    /// Box-counting dimension estimate
    Boxcount { family: String },
    /// All admissible addresses of rank --depth with their intervals
    Enumerate { family: String },
    /// Convert between s-adic and nega-s-adic digits
    Convert {
        #[arg(long)]
        base: u32,
        /// Comma-separated digits to read (with --from)
        #[arg(long, conflicts_with = "value")]
        digits: Option<String>,
        /// Rational value `p/q` to expand
        #[arg(long, allow_hyphen_values = true)]
        value: Option<String>,
        #[arg(long, value_enum, default_value_t = Representation::Sadic)]
        from: Representation,
        #[arg(long, value_enum, default_value_t = Representation::Negasadic)]
        to: Representation,
        /// Number of output digits
        #[arg(short = 'n', long = "digits-out", default_value_t = 16)]
        n: usize,
    },
}

/// Round to 12 significant digits; serialized as the shortest round-trip decimal.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Display form of an already rounded float.
fn fnum(x: f64) -> String {
    if x != 0.0 && x.is_finite() && (x.abs() < 1e-4 || x.abs() >= 1e15) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn r(x: &Rational) -> String {
    fmt_rational(x)
}

fn parse_list(text: &str) -> Result<Vec<u32>> {
    let t = text.trim().trim_start_matches('(').trim_end_matches(')').trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("`{}` is not a nonnegative integer", x.trim())))
        })
        .collect()
}

fn parse_scales(text: &str) -> Result<std::ops::RangeInclusive<u32>> {
    let bad = || Error::InvalidArgument(format!("scales `{text}` must look like 4..10"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn digits_text(d: &[u32]) -> String {
    d.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

/// Rendered command output.
struct Output {
    json: String,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    /// Summary lines printed before the table in text mode.
    text: Vec<String>,
    /// Whether text mode also prints the table.
    text_table: bool,
    status: i32,
}

impl Output {
    fn new<T: Serialize>(value: &T) -> Self {
        Self {
            json: serde_json::to_string_pretty(value).expect("serializable output"),
            header: Vec::new(),
            rows: Vec::new(),
            text: Vec::new(),
            text_table: false,
            status: 0,
        }
    }

    fn table(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.header = header.iter().map(|h| h.to_string()).collect();
        self.rows = rows;
        self
    }

    fn lines(mut self, lines: Vec<String>) -> Self {
        self.text = lines;
        self
    }

    fn with_text_table(mut self) -> Self {
        self.text_table = true;
        self
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => format!("{}\n", self.json),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).expect("in-memory write");
                for row in &self.rows {
                    w.write_record(row).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 output")
            }
            Format::Text => {
                let mut out = String::new();
                for l in &self.text {
                    let _ = writeln!(out, "{l}");
                }
                if self.text_table && !self.rows.is_empty() {
                    let widths: Vec<usize> = (0..self.header.len())
                        .map(|i| {
                            self.rows
                                .iter()
                                .map(|row| row[i].len())
                                .chain([self.header[i].len()])
                                .max()
                                .unwrap_or(0)
                        })
                        .collect();
                    let line = |cells: &[String]| {
                        cells
                            .iter()
                            .zip(&widths)
                            .map(|(c, w)| format!("{c:<w$}"))
                            .collect::<Vec<_>>()
                            .join("  ")
                            .trim_end()
                            .to_string()
                    };
                    let _ = writeln!(out, "{}", line(&self.header));
                    for row in &self.rows {
                        let _ = writeln!(out, "{}", line(row));
                    }
                }
                out
            }
        }
    }
}

#[derive(Serialize)]
struct DimOut {
    family: String,
    alpha: f64,
    method: String,
    residual: f64,
    bracket: [f64; 2],
    iterations: u32,
    degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    cross_check: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<String>,
    notes: Vec<String>,
}

impl DimOut {
    fn new(family: String, d: &DimensionResult) -> Self {
        Self {
            family,
            alpha: round12(d.alpha),
            method: d.method.to_string(),
            residual: round12(d.residual),
            bracket: [round12(d.bracket.0), round12(d.bracket.1)],
            iterations: d.iterations,
            degenerate: d.degenerate,
            cross_check: d.cross_check.map(round12),
            exact: d.exact.as_ref().map(r),
            notes: d.notes.clone(),
        }
    }

    fn output(&self) -> Output {
        let fmt_opt = |x: Option<f64>| x.map(fnum).unwrap_or_default();
        let row = vec![
            self.family.clone(),
            fnum(self.alpha),
            self.method.clone(),
            fnum(self.residual),
            fnum(self.bracket[0]),
            fnum(self.bracket[1]),
            self.iterations.to_string(),
            self.degenerate.to_string(),
            fmt_opt(self.cross_check),
            self.exact.clone().unwrap_or_default(),
        ];
        let mut lines = vec![
            format!("family: {}", self.family),
            format!("alpha: {}", fnum(self.alpha)),
            format!("method: {}", self.method),
            format!("residual: {}", fnum(self.residual)),
            format!("bracket: [{}, {}]", fnum(self.bracket[0]), fnum(self.bracket[1])),
            format!("iterations: {}", self.iterations),
            format!("degenerate: {}", self.degenerate),
        ];
        if let Some(c) = self.cross_check {
            lines.push(format!("cross_check: {}", fnum(c)));
        }
        if let Some(e) = &self.exact {
            lines.push(format!("exact: {e}"));
        }
        lines.extend(self.notes.iter().map(|n| format!("note: {n}")));
        Output::new(self)
            .table(
                &[
                    "family",
                    "alpha",
                    "method",
                    "residual",
                    "bracket_lo",
                    "bracket_hi",
                    "iterations",
                    "degenerate",
                    "cross_check",
                    "exact",
                ],
                vec![row],
            )
            .lines(lines)
    }
}

fn cmd_dim(fam: &FamilySpec, nmax: usize) -> Result<Output> {
    let d = if nmax == crate::dimension::DEFAULT_NMAX {
        family_dimension(fam)?
    } else {
        family_dimension_with(fam, nmax)?
    };
    Ok(DimOut::new(fam.to_string(), &d).output())
}

#[derive(Serialize)]
struct HistEntry {
    length: usize,
    count: u64,
}

#[derive(Serialize)]
struct BlocksOut {
    family: String,
    count: Option<usize>,
    degenerate: bool,
    histogram: Vec<HistEntry>,
    blocks: Option<Vec<String>>,
    description: String,
}

fn cmd_blocks(fam: &FamilySpec) -> Result<Output> {
    let b = blocks_of_family(fam)?;
    let histogram: Vec<(usize, u64)> = match b.histogram() {
        Some(h) => h.into_iter().collect(),
        None => (1..=9)
            .map(|k| (k, b.count_of_length(k)))
            .filter(|&(_, n)| n > 0)
            .collect(),
    };
    let blocks: Option<Vec<String>> = b.blocks().map(|bl| bl.iter().map(|x| digits_text(x)).collect());
    let out = BlocksOut {
        family: fam.to_string(),
        count: b.len(),
        degenerate: b.is_degenerate(),
        histogram: histogram
            .iter()
            .map(|&(length, count)| HistEntry { length, count })
            .collect(),
        blocks: blocks.clone(),
        description: b.render(),
    };
    let mut lines = vec![
        format!("family: {}", out.family),
        format!(
            "count: {}",
            out.count.map_or_else(|| "infinite".to_string(), |c| c.to_string())
        ),
        format!("degenerate: {}", out.degenerate),
        format!(
            "histogram: {}",
            histogram
                .iter()
                .map(|(k, n)| format!("N_{k}={n}"))
                .collect::<Vec<_>>()
                .join(" ")
        ),
    ];
    if blocks.is_none() {
        lines.push(format!("blocks: {}", out.description));
    }
    let rows = blocks
        .unwrap_or_default()
        .into_iter()
        .enumerate()
        .map(|(i, x)| {
            let len = x.split(' ').count();
            vec![i.to_string(), x, len.to_string()]
        })
        .collect();
    Ok(Output::new(&out)
        .table(&["index", "block", "length"], rows)
        .lines(lines)
        .with_text_table())
}

#[derive(Serialize)]
struct EvalOut {
    family: String,
    symbols: Vec<u32>,
    tail: Vec<u32>,
    value: String,
    approx: f64,
    digits: Option<String>,
}

fn cmd_eval(fam: &FamilySpec, symbols: &str, tail: Option<&str>, gaps: Option<&str>) -> Result<Output> {
    let symbols = parse_list(symbols)?;
    let tail = tail.map(parse_list).transpose()?.unwrap_or_default();
    let (value, digits) = match fam {
        FamilySpec::Md { s } => {
            let gaps = parse_list(gaps.ok_or_else(|| Error::InvalidArgument("MD points need --gaps".into()))?)?;
            if !tail.is_empty() {
                return Err(Error::Unsupported("MD points take explicit gaps and no tail".into()));
            }
            let d = expand_md_address(*s, &gaps, &symbols)?;
            (eval_md_point(*s, &gaps, &symbols)?, Some(digits_text(d.digits())))
        }
        _ => {
            let v = eval_family_point(fam, &symbols, &tail)?;
            let d = expand_address(fam, &CylinderAddress(symbols.clone()))
                .ok()
                .map(|d| digits_text(d.digits()));
            (v, d)
        }
    };
    let out = EvalOut {
        family: fam.to_string(),
        symbols,
        tail,
        value: r(&value),
        approx: round12(to_f64(&value)),
        digits,
    };
    let row = vec![
        out.family.clone(),
        digits_text(&out.symbols),
        digits_text(&out.tail),
        out.value.clone(),
        fnum(out.approx),
        out.digits.clone().unwrap_or_default(),
    ];
    let lines = vec![
        format!("value: {}", out.value),
        format!("approx: {}", out.approx),
        format!("digits: {}", out.digits.clone().unwrap_or_default()),
    ];
    Ok(Output::new(&out)
        .table(&["family", "symbols", "tail", "value", "approx", "digits"], vec![row])
        .lines(lines))
}

#[derive(Serialize)]
struct CylinderOut {
    family: String,
    address: String,
    source: &'static str,
    lo: String,
    hi: String,
    diameter: String,
    lo_approx: f64,
    hi_approx: f64,
    child_ratio: Option<String>,
    orientation: Option<String>,
    oracle: Option<OracleOut>,
}

#[derive(Serialize)]
struct OracleOut {
    depth: usize,
    lo: String,
    hi: String,
    bound: String,
}

fn cmd_cylinder(fam: &FamilySpec, address: &str, child: Option<u32>, oracle_depth: usize) -> Result<Output> {
    let addr = CylinderAddress(parse_list(address)?);
    let rep = cylinder_report(fam, &addr, child)?;
    let oracle = match tail_extrema_oracle(fam, &addr, oracle_depth.max(1)) {
        Ok(o) => Some(OracleOut {
            depth: oracle_depth.max(1),
            lo: r(&o.interval.lo),
            hi: r(&o.interval.hi),
            bound: r(&o.bound),
        }),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    let out = CylinderOut {
        family: fam.to_string(),
        address: addr.to_string(),
        source: if has_lemma_formula(fam) { "closed-form" } else { "hull" },
        lo: r(&rep.interval.lo),
        hi: r(&rep.interval.hi),
        diameter: r(&rep.diameter),
        lo_approx: round12(to_f64(&rep.interval.lo)),
        hi_approx: round12(to_f64(&rep.interval.hi)),
        child_ratio: rep.child_ratio.as_ref().map(r),
        orientation: rep.orientation.map(|o| o.to_string()),
        oracle,
    };
    let mut lines = vec![
        format!("family: {}", out.family),
        format!("address: {}", out.address),
        format!("interval: [{}, {}] ({})", out.lo, out.hi, out.source),
        format!("approx: [{}, {}]", out.lo_approx, out.hi_approx),
        format!("diameter: {}", out.diameter),
    ];
    if let Some(c) = &out.child_ratio {
        lines.push(format!("child_ratio: {c}"));
    }
    if let Some(o) = &out.orientation {
        lines.push(format!("orientation: {o}"));
    }
    if let Some(o) = &out.oracle {
        lines.push(format!(
            "oracle (depth {}): [{}, {}], tail bound {}",
            o.depth, o.lo, o.hi, o.bound
        ));
    }
    let row = vec![
        out.family.clone(),
        out.address.clone(),
        out.lo.clone(),
        out.hi.clone(),
        out.diameter.clone(),
        out.child_ratio.clone().unwrap_or_default(),
        out.orientation.clone().unwrap_or_default(),
    ];
    Ok(Output::new(&out)
        .table(
            &[
                "family",
                "address",
                "lo",
                "hi",
                "diameter",
                "child_ratio",
                "orientation",
            ],
            vec![row],
        )
        .lines(lines))
}

#[derive(Serialize)]
struct VerifyOut {
    family: String,
    depth: usize,
    oracle_depth: usize,
    passed: bool,
    checks: Vec<CheckOut>,
}

#[derive(Serialize)]
struct CheckOut {
    name: String,
    passed: bool,
    cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<CounterOut>,
    flags: Vec<String>,
}

#[derive(Serialize)]
struct CounterOut {
    address: String,
    what: String,
    left: String,
    right: String,
}

fn verify_output(rep: &VerifyReport) -> Output {
    let out = VerifyOut {
        family: rep.family.clone(),
        depth: rep.depth,
        oracle_depth: rep.oracle_depth,
        passed: rep.passed(),
        checks: rep
            .checks
            .iter()
            .map(|c| CheckOut {
                name: c.name.to_string(),
                passed: c.passed(),
                cases: c.cases,
                counterexample: c.counterexample.as_ref().map(|x| CounterOut {
                    address: x.address.to_string(),
                    what: x.what.clone(),
                    left: r(&x.left),
                    right: r(&x.right),
                }),
                flags: c.flags.clone(),
            })
            .collect(),
    };
    let mut lines = vec![format!(
        "{} depth {} oracle depth {}",
        out.family, out.depth, out.oracle_depth
    )];
    let mut rows = Vec::new();
    for c in &out.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        match &c.counterexample {
            None => lines.push(format!(
                "{status} {} ({} case{})",
                c.name,
                c.cases,
                if c.cases == 1 { "" } else { "s" }
            )),
            Some(x) => lines.push(format!(
                "{status} {} at {}: {}: {} vs {}",
                c.name, x.address, x.what, x.left, x.right
            )),
        }
        if !c.flags.is_empty() {
            lines.push(format!("  {} flagged: {}", c.flags.len(), c.flags[0]));
        }
        let (a, w, le, ri) = c
            .counterexample
            .as_ref()
            .map(|x| (x.address.clone(), x.what.clone(), x.left.clone(), x.right.clone()))
            .unwrap_or_default();
        rows.push(vec![
            c.name.clone(),
            c.passed.to_string(),
            c.cases.to_string(),
            a,
            w,
            le,
            ri,
            c.flags.len().to_string(),
        ]);
    }
    lines.push(if out.passed {
        "all checks passed".into()
    } else {
        "verification failed".into()
    });
    let mut o = Output::new(&out)
        .table(
            &["check", "passed", "cases", "address", "what", "left", "right", "flags"],
            rows,
        )
        .lines(lines);
    o.status = if out.passed { 0 } else { 2 };
    o
}

#[derive(Serialize)]
struct CoverRow {
    depth: usize,
    sum: String,
    approx: f64,
    ratio: Option<String>,
}

fn cmd_cover(fam: &FamilySpec, depth: usize, cap: u64) -> Result<Output> {
    let mut rows: Vec<CoverRow> = Vec::new();
    let mut prev: Option<Rational> = None;
    for n in 0..=depth {
        let sum = covering_sum(fam, n, cap)?;
        let ratio = prev
            .as_ref()
            .filter(|p| **p != Rational::from_integer(0.into()))
            .map(|p| r(&(&sum / p)));
        rows.push(CoverRow {
            depth: n,
            sum: r(&sum),
            approx: round12(to_f64(&sum)),
            ratio,
        });
        prev = Some(sum);
    }
    #[derive(Serialize)]
    struct CoverOut<'a> {
        family: String,
        rows: &'a [CoverRow],
    }
    let table = rows
        .iter()
        .map(|x| {
            vec![
                x.depth.to_string(),
                x.sum.clone(),
                fnum(x.approx),
                x.ratio.clone().unwrap_or_default(),
            ]
        })
        .collect();
    Ok(Output::new(&CoverOut {
        family: fam.to_string(),
        rows: &rows,
    })
    .table(&["depth", "covering_sum", "approx", "ratio"], table)
    .lines(vec![format!("family: {fam}")])
    .with_text_table())
}

#[derive(Serialize)]
struct BoxOut {
    family: String,
    slope: f64,
    r2: f64,
    solver_alpha: Option<f64>,
    warning: Option<String>,
    points: Vec<BoxPoint>,
}

#[derive(Serialize)]
struct BoxPoint {
    epsilon: String,
    count: u64,
    depth: usize,
}

fn cmd_boxcount(fam: &FamilySpec, scales: &str, cap: u64) -> Result<Output> {
    let range = parse_scales(scales)?;
    let cap = if cap == DEFAULT_CAP { DEFAULT_NODE_CAP } else { cap };
    let rep = boxcount_dimension(fam, range, cap)?;
    let solver = family_dimension(fam).ok().map(|d| round12(d.alpha));
    let out = BoxOut {
        family: fam.to_string(),
        slope: round12(rep.fit.slope),
        r2: round12(rep.fit.r2),
        solver_alpha: solver,
        warning: rep.fit.warning.clone(),
        points: rep
            .points
            .iter()
            .map(|p| BoxPoint {
                epsilon: r(&p.epsilon_exact),
                count: p.count,
                depth: p.depth,
            })
            .collect(),
    };
    let mut lines = vec![
        format!("family: {}", out.family),
        format!("slope: {}", out.slope),
        format!("r2: {}", out.r2),
    ];
    if let Some(a) = out.solver_alpha {
        lines.push(format!("solver alpha: {a}"));
    }
    if let Some(w) = &out.warning {
        lines.push(format!("warning: {w}"));
    }
    let rows = out
        .points
        .iter()
        .map(|p| vec![p.epsilon.clone(), p.count.to_string(), p.depth.to_string()])
        .collect();
    Ok(Output::new(&out)
        .table(&["epsilon", "count", "depth"], rows)
        .lines(lines)
        .with_text_table())
}

#[derive(Serialize)]
struct EnumRow {
    address: String,
    digits: Option<String>,
    lo: String,
    hi: String,
}

fn cmd_enumerate(fam: &FamilySpec, depth: usize, cap: u64) -> Result<Output> {
    let rows: Vec<EnumRow> = enumerate_addresses(fam, depth, cap)?
        .into_iter()
        .map(|a| {
            let iv = cylinder_geometry(fam, &a)?;
            Ok(EnumRow {
                digits: expand_address(fam, &a).ok().map(|d| digits_text(d.digits())),
                address: a.to_string(),
                lo: r(&iv.lo),
                hi: r(&iv.hi),
            })
        })
        .collect::<Result<_>>()?;
    #[derive(Serialize)]
    struct EnumOut<'a> {
        family: String,
        depth: usize,
        count: usize,
        addresses: &'a [EnumRow],
    }
    let table = rows
        .iter()
        .map(|x| {
            vec![
                x.address.clone(),
                x.digits.clone().unwrap_or_default(),
                x.lo.clone(),
                x.hi.clone(),
            ]
        })
        .collect();
    Ok(Output::new(&EnumOut {
        family: fam.to_string(),
        depth,
        count: rows.len(),
        addresses: &rows,
    })
    .table(&["address", "digits", "lo", "hi"], table)
    .lines(vec![format!("{} addresses of rank {depth} in {fam}", rows.len())])
    .with_text_table())
}

#[derive(Serialize)]
struct ConvertOut {
    base: u32,
    value: String,
    approx: f64,
    representation: String,
    digits: String,
    truncated_value: String,
    error: String,
    bound: String,
}

fn cmd_convert(
    base: u32,
    digits: Option<&str>,
    value: Option<&str>,
    from: Representation,
    to: Representation,
    n: usize,
) -> Result<Output> {
    let x = match (digits, value) {
        (Some(d), None) => {
            let ds = DigitString::new(base, parse_list(d)?)?;
            match from {
                Representation::Sadic => eval_sadic(&ds),
                Representation::Negasadic => eval_negasadic(&ds),
            }
        }
        (None, Some(v)) => parse_rational(v)?,
        _ => return Err(Error::InvalidArgument("give exactly one of --digits or --value".into())),
    };
    let negative = to == Representation::Negasadic;
    let out_digits = digits_from_rational(&x, base, n, negative)?;
    let back = if negative {
        eval_negasadic(&out_digits)
    } else {
        eval_sadic(&out_digits)
    };
    let err = crate::radix::abs_diff(&back, &x);
    let out = ConvertOut {
        base,
        value: r(&x),
        approx: round12(to_f64(&x)),
        representation: format!("{to:?}").to_lowercase(),
        digits: digits_text(out_digits.digits()),
        truncated_value: r(&back),
        error: r(&err),
        bound: r(&truncation_bound(base, n)),
    };
    let lines = vec![
        format!("value: {} (~{})", out.value, out.approx),
        format!("{} digits: {}", out.representation, out.digits),
        format!("round-trip error: {} <= {}", out.error, out.bound),
    ];
    let row = vec![
        out.base.to_string(),
        out.value.clone(),
        out.representation.clone(),
        out.digits.clone(),
        out.error.clone(),
        out.bound.clone(),
    ];
    Ok(Output::new(&out)
        .table(
            &["base", "value", "representation", "digits", "error", "bound"],
            vec![row],
        )
        .lines(lines))
}

fn execute(cli: &Cli) -> Result<Output> {
    let family = |text: &str| text.parse::<FamilySpec>();
    match &cli.command {
        Command::Dim { family: f, nmax } => cmd_dim(&family(f)?, *nmax),
        Command::Blocks { family: f } => cmd_blocks(&family(f)?),
        Command::Eval {
            family: f,
            symbols,
            tail,
            gaps,
        } => cmd_eval(&family(f)?, symbols, tail.as_deref(), gaps.as_deref()),
        Command::Cylinder {
            family: f,
            address,
            child,
            oracle_depth,
        } => cmd_cylinder(&family(f)?, address, *child, *oracle_depth),
        Command::Verify {
            family: f,
            oracle_depth,
        } => {
            let rep = verify(
                &family(f)?,
                VerifyOptions {
                    depth: cli.depth,
                    oracle_depth: *oracle_depth,
                    cap: cli.cap,
                },
            )?;
            Ok(verify_output(&rep))
        }
        Command::Cover { family: f } => cmd_cover(&family(f)?, cli.depth, cli.cap),
        Command::Boxcount { family: f } => cmd_boxcount(&family(f)?, &cli.scales, cli.cap),
        Command::Enumerate { family: f } => cmd_enumerate(&family(f)?, cli.depth, cli.cap),
        Command::Convert {
            base,
            digits,
            value,
            from,
            to,
            n,
        } => cmd_convert(*base, digits.as_deref(), value.as_deref(), *from, *to, *n),
    }
}

/// Parse arguments, run the command and write its output. Returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let output = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 1;
        }
    };
    let text = output.render(cli.format);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                return 1;
            }
        }
        None => {
            let _ = stdout.write_all(text.as_bytes());
        }
    }
    output.status
}
