// Copyright (c) 2026, The linnik Authors
// SPDX-License-Identifier: Apache-2.0

//! Command line interface.
//!
//! Every subcommand produces a metadata block and a table. CSV output puts
//! the metadata on `#` lines ahead of the header row; JSON output is
//! `{"meta": {...}, "rows": [...]}` with the same column names. Wall time
//! goes to stderr so that stdout is reproducible byte for byte.

use crate::experiments::{self, Admissibility, CellGrid, ScanRow};
use crate::forms::{self, BinaryForm};
use crate::reps::{self, TernaryForm};
use crate::spheres;
use crate::surface::{self, HalfPlanePoint, NeighborRule};
use crate::{with_jobs, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde_json::{Map, Value};
use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(_) => 2,
            _ => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "linnik", version, about = "Integer points, CM points and Hecke walks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Primitive solutions of x² + y² + z² = d
    Spheres(Params),
    /// Reduced forms of discriminant d
    Classgroup(Params),
    /// CM points of discriminant d, or of one --form
    Cm(Params),
    /// Composition of two --form arguments
    Compose(Params),
    /// Representations of --form by the diagonal --ternary (default 1,1,1)
    Reps(Params),
    /// Solutions of xy = d
    Divisors(Params),
    /// Pairs of points of norm d congruent mod p^m
    Census(Params),
    /// Hecke neighbours of a point at p
    Neighbors(Params),
    /// Non-backtracking walk on the Hecke tree
    Walk(Params),
    /// Equidistribution statistics for one d
    Stats {
        #[command(subcommand)]
        kind: StatsKind,
    },
    /// Statistics over a range of d
    Scan {
        #[command(subcommand)]
        kind: ScanKind,
    },
}

#[derive(Debug, Subcommand)]
pub enum StatsKind {
    /// Spherical cap discrepancy of the points of norm d
    Caps(Params),
    /// Spherical harmonic averages up to --lmax
    Weyl(Params),
    /// Cell discrepancy of the CM points of discriminant d
    Hyp(Params),
    /// Fraction of CM points of discriminant d with height >= H
    Cusp(Params),
}

#[derive(Debug, Subcommand)]
pub enum ScanKind {
    /// Number of points and growth exponent per d
    Volume(Params),
    /// Rotation classes of points against class numbers
    Ratio(Params),
    /// Pair census per d
    Census(Params),
    /// Cusp mass per discriminant
    Cusp(Params),
}

fn parse_ratio(s: &str) -> std::result::Result<Ratio<i64>, String> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: i64 = n.trim().parse().map_err(|e| format!("bad numerator: {e}"))?;
    let d: i64 = d.trim().parse().map_err(|e| format!("bad denominator: {e}"))?;
    if d == 0 {
        return Err("zero denominator".into());
    }
    let r = Ratio::new(n, d);
    if r <= Ratio::from_integer(0) {
        return Err("height must be positive".into());
    }
    Ok(r)
}

fn parse_triple(s: &str) -> std::result::Result<[i64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma separated integers, got {s:?}"));
    }
    let mut out = [0i64; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.trim().parse().map_err(|e| format!("{p:?}: {e}"))?;
    }
    Ok(out)
}

/// Flags shared by every subcommand. Each subcommand reads the ones it
/// needs; all of them are echoed into the output metadata.
#[derive(Debug, Clone, Args)]
pub struct Params {
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<i64>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub m: Option<u32>,
    /// Height as an exact rational, e.g. 6/5
    #[arg(long = "H", value_parser = parse_ratio)]
    pub h: Option<Ratio<i64>>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    pub dmin: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub dmax: Option<i64>,
    #[arg(long)]
    pub lmax: Option<usize>,
    #[arg(long)]
    pub caps: Option<usize>,
    /// Binary form a,b,c; repeat for compose
    #[arg(long, allow_hyphen_values = true, value_parser = parse_triple)]
    pub form: Vec<[i64; 3]>,
    /// Diagonal ternary form a,b,c
    #[arg(long, value_parser = parse_triple)]
    pub ternary: Option<[i64; 3]>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    #[arg(long)]
    pub y: Option<f64>,
    /// Always take the neighbour at this index instead of a seeded choice
    #[arg(long)]
    pub fixed: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output path, `-` for stdout
    #[arg(long, default_value = "-")]
    pub out: String,
    /// Worker threads for scans (default: available parallelism)
    #[arg(long)]
    pub jobs: Option<usize>,
}

/// A table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Null,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Null => String::new(),
        }
    }

    fn meta_text(&self) -> String {
        match self {
            Cell::Null => "null".into(),
            other => other.csv(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::from(s.clone()),
            Cell::Null => Value::Null,
        }
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<Ratio<i64>> for Cell {
    fn from(v: Ratio<i64>) -> Self {
        Cell::Text(v.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

/// Result of one subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub meta: Vec<(String, Cell)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Output {
    fn new(columns: &[&str]) -> Self {
        Self {
            meta: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn meta(&mut self, key: &str, value: impl Into<Cell>) {
        self.meta.push((key.into(), value.into()));
    }

    fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn to_csv(&self) -> CliResult<Vec<u8>> {
        let mut buf = Vec::new();
        for (k, v) in &self.meta {
            writeln!(buf, "# {k}={}", v.meta_text())?;
        }
        let mut w = csv::WriterBuilder::new()
            .quote_style(csv::QuoteStyle::Never)
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(buf);
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::csv))?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.into_error()))
    }

    pub fn to_json(&self) -> CliResult<Vec<u8>> {
        let meta: Map<String, Value> = self.meta.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Object(
                    self.columns
                        .iter()
                        .cloned()
                        .zip(r.iter().map(Cell::json))
                        .collect(),
                )
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("meta".into(), Value::Object(meta));
        doc.insert("rows".into(), Value::Array(rows));
        let mut out = serde_json::to_vec_pretty(&Value::Object(doc)).map_err(std::io::Error::from)?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn render(&self, format: Format) -> CliResult<Vec<u8>> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Usage(format!("missing required flag --{flag}")))
}

fn form_arg(f: [i64; 3]) -> BinaryForm {
    BinaryForm::new(f[0], f[1], f[2])
}

fn one_form(p: &Params) -> CliResult<BinaryForm> {
    match p.form.as_slice() {
        [f] => Ok(form_arg(*f)),
        _ => Err(CliError::Usage("expected exactly one --form a,b,c".into())),
    }
}

/// A start point given by `--form` or by `--x` and `--y`.
fn start_point(p: &Params) -> CliResult<HalfPlanePoint> {
    match (p.form.as_slice(), p.x, p.y) {
        ([f], None, None) => Ok(forms::cm_point(&form_arg(*f))?),
        ([], Some(x), Some(y)) => Ok(HalfPlanePoint::float(x, y)?),
        _ => Err(CliError::Usage("give either one --form or both --x and --y".into())),
    }
}

fn echo(out: &mut Output, command: &str, p: &Params) {
    out.meta("tool", env!("CARGO_PKG_NAME"));
    out.meta("version", env!("CARGO_PKG_VERSION"));
    out.meta("command", command);
    out.meta("d", p.d);
    out.meta("p", p.p);
    out.meta("m", p.m);
    out.meta("H", p.h);
    out.meta("steps", p.steps);
    out.meta("seed", p.seed);
    out.meta("dmin", p.dmin);
    out.meta("dmax", p.dmax);
    out.meta("lmax", p.lmax);
    out.meta("caps", p.caps);
    let forms: Vec<String> = p.form.iter().map(|f| format!("{}:{}:{}", f[0], f[1], f[2])).collect();
    out.meta("form", if forms.is_empty() { None } else { Some(forms.join(";")) });
    out.meta("ternary", p.ternary.map(|t| format!("{}:{}:{}", t[0], t[1], t[2])));
    out.meta("x", p.x);
    out.meta("y", p.y);
    out.meta("fixed", p.fixed);
    out.meta("format", match p.format {
        Format::Csv => "csv",
        Format::Json => "json",
    });
    out.meta("out", p.out.as_str());
    out.meta("jobs", p.jobs);
}

const SCAN_COLUMNS: [&str; 7] = ["d", "statistic", "value", "p", "m", "H", "seed"];

fn scan_output(rows: Vec<ScanRow>) -> Output {
    let mut out = Output::new(&SCAN_COLUMNS);
    for r in rows {
        out.row(vec![
            r.d.into(),
            r.statistic.into(),
            r.value.into(),
            r.p.into(),
            r.m.into(),
            r.h.into(),
            r.seed.into(),
        ]);
    }
    out
}

fn check_range(p: &Params) -> CliResult<(i64, i64)> {
    let lo = need(p.dmin, "dmin")?;
    let hi = need(p.dmax, "dmax")?;
    if lo > hi {
        return Err(CliError::Usage(format!("--dmin {lo} exceeds --dmax {hi}")));
    }
    Ok((lo, hi))
}

fn run_spheres(p: &Params) -> CliResult<Output> {
    let d = need(p.d, "d")?;
    if d < 1 {
        return Err(Error::Precondition(format!("norm must be positive, got {d}")).into());
    }
    let pts = spheres::enumerate_primitive_points(d);
    let mut out = Output::new(&["x", "y", "z"]);
    out.meta("count", pts.len());
    out.meta(
        "note",
        if spheres::legendre_admissible(d) {
            "Legendre-admissible"
        } else {
            "not Legendre-admissible"
        },
    );
    for v in pts.points() {
        out.row(vec![v.x().into(), v.y().into(), v.z().into()]);
    }
    Ok(out)
}

fn run_classgroup(p: &Params) -> CliResult<Output> {
    let g = forms::class_group(need(p.d, "d")?)?;
    let mut out = Output::new(&["a", "b", "c"]);
    out.meta("h", g.order());
    out.meta("two_torsion", g.two_torsion().len());
    for f in g.forms() {
        out.row(vec![f.a.into(), f.b.into(), f.c.into()]);
    }
    Ok(out)
}

fn run_cm(p: &Params) -> CliResult<Output> {
    let list: Vec<BinaryForm> = match (p.d, p.form.as_slice()) {
        (Some(d), []) => forms::class_group(d)?.forms().to_vec(),
        (None, [_]) => vec![one_form(p)?],
        _ => return Err(CliError::Usage("give either --d or one --form".into())),
    };
    let mut out = Output::new(&["a", "b", "c", "x", "y", "height"]);
    out.meta("count", list.len());
    for f in list {
        let z = surface::reduce_point(&forms::cm_point(&f)?)?;
        let (x, y) = z.to_float();
        let r = match z {
            HalfPlanePoint::Cm(r) => r,
            HalfPlanePoint::Float { .. } => unreachable!("CM points reduce exactly"),
        };
        out.row(vec![r.a.into(), r.b.into(), r.c.into(), x.into(), y.into(), surface::height(&z)?.into()]);
    }
    Ok(out)
}

fn run_compose(p: &Params) -> CliResult<Output> {
    let [f1, f2] = p.form.as_slice() else {
        return Err(CliError::Usage("compose needs exactly two --form arguments".into()));
    };
    let (f1, f2) = (form_arg(*f1), form_arg(*f2));
    let f = forms::compose(&f1, &f2)?;
    let mut out = Output::new(&["a", "b", "c"]);
    out.meta("discriminant", f.discriminant());
    out.row(vec![f.a.into(), f.b.into(), f.c.into()]);
    Ok(out)
}

fn run_reps(p: &Params) -> CliResult<Output> {
    let f = one_form(p)?;
    let [a, b, c] = p.ternary.unwrap_or([1, 1, 1]);
    let q = TernaryForm::diagonal(a, b, c);
    let r = reps::count_representations(&q, &f)?;
    let mut out = Output::new(&["embeddings", "orbits"]);
    out.meta("automorphisms", reps::integral_automorphisms(&q)?.len());
    out.row(vec![r.embeddings.into(), r.orbits.into()]);
    Ok(out)
}

fn run_divisors(p: &Params) -> CliResult<Output> {
    let d = need(p.d, "d")?;
    if d < 1 {
        return Err(Error::Precondition(format!("need d >= 1, got {d}")).into());
    }
    let count = reps::hyperbolic_representations(d as u64);
    let mut out = Output::new(&["x", "y"]);
    out.meta("positive", count.positive);
    out.meta("all", count.all);
    out.meta("tau", reps::divisor_count(d as u64));
    for x in 1..=d {
        if d % x == 0 {
            out.row(vec![x.into(), (d / x).into()]);
            out.row(vec![(-x).into(), (-d / x).into()]);
        }
    }
    Ok(out)
}

fn run_census(p: &Params) -> CliResult<Output> {
    let c = reps::basic_lemma_census(need(p.d, "d")?, need(p.p, "p")?, need(p.m, "m")?)?;
    let mut out = Output::new(&["e", "pairs"]);
    out.meta("ordered_pairs", c.ordered_pairs);
    out.meta("classes", c.classes);
    for (e, n) in &c.middle_coefficients {
        out.row(vec![(*e).into(), (*n).into()]);
    }
    Ok(out)
}

fn run_neighbors(p: &Params) -> CliResult<Output> {
    let prime = need(p.p, "p")?;
    let z = start_point(p)?;
    let nbrs = surface::hecke_neighbors(&z, prime)?;
    let mut out = Output::new(&["x", "y", "reduced_x", "reduced_y", "height"]);
    out.meta("count", nbrs.len());
    for w in nbrs {
        let (x, y) = w.to_float();
        let r = surface::reduce_point(&w)?;
        let (rx, ry) = r.to_float();
        out.row(vec![x.into(), y.into(), rx.into(), ry.into(), surface::height(&r)?.into()]);
    }
    Ok(out)
}

fn ratio_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn run_walk(p: &Params) -> CliResult<Output> {
    let prime = need(p.p, "p")?;
    let steps = need(p.steps, "steps")?;
    let z = start_point(p)?;
    let threshold = p.h.unwrap_or(Ratio::from_integer(1));
    let seed = p.seed.unwrap_or(experiments::DEFAULT_SEED);
    let rule = match p.fixed {
        Some(k) => NeighborRule::Fixed(k),
        None => NeighborRule::Seeded(seed),
    };
    let it = surface::walk_with_rule(&z, prime, steps, rule, ratio_f64(threshold))?;
    let mut out = Output::new(&["step", "x", "y", "height", "above"]);
    out.meta("threshold", threshold);
    out.meta("effective_seed", if p.fixed.is_some() { None } else { Some(seed) });
    for (i, ((x, y), (h, f))) in it
        .points
        .iter()
        .zip(it.heights.iter().zip(&it.flags))
        .enumerate()
    {
        out.row(vec![i.into(), (*x).into(), (*y).into(), (*h).into(), (*f).into()]);
    }
    Ok(out)
}

fn run_stats(kind: &StatsKind) -> CliResult<(Output, &Params, &'static str)> {
    Ok(match kind {
        StatsKind::Caps(p) => {
            let d = need(p.d, "d")?;
            let seed = p.seed.unwrap_or(experiments::DEFAULT_SEED);
            let caps = p.caps.unwrap_or(1000);
            let units = spheres::enumerate_primitive_points(d).unit_vectors();
            let v = experiments::cap_discrepancy(&units, caps, seed)?;
            let mut row = ScanRow::new(d, "cap_discrepancy", v).with_seed(seed);
            row.p = p.p;
            let mut out = scan_output(vec![row]);
            out.meta("points", units.len());
            (out, p, "stats caps")
        }
        StatsKind::Weyl(p) => {
            let d = need(p.d, "d")?;
            let lmax = p.lmax.unwrap_or(4);
            let units = spheres::enumerate_primitive_points(d).unit_vectors();
            let avgs = experiments::weyl_harmonic_sums(&units, lmax)?;
            let rows = avgs
                .iter()
                .map(|h| ScanRow::new(d, format!("weyl_l{}_m{}", h.l, h.m), h.value))
                .collect();
            let mut out = scan_output(rows);
            out.meta("points", units.len());
            (out, p, "stats weyl")
        }
        StatsKind::Hyp(p) => {
            let d = need(p.d, "d")?;
            let pts = experiments::cm_points(d)?
                .iter()
                .map(surface::reduce_point)
                .collect::<crate::Result<Vec<_>>>()?;
            let grid = CellGrid::default();
            let r = experiments::hyperbolic_cell_discrepancy(&pts, &grid)?;
            let mut out = scan_output(vec![
                ScanRow::new(d, "cell_discrepancy", r.discrepancy),
                ScanRow::new(d, "truncated_empirical", r.truncated_empirical),
                ScanRow::new(d, "truncated_mass", r.truncated_mass),
            ]);
            out.meta("points", pts.len());
            out.meta("grid", format!("{}x{}", grid.nx, grid.ny));
            out.meta("y_max", grid.y_max);
            (out, p, "stats hyp")
        }
        StatsKind::Cusp(p) => {
            let d = need(p.d, "d")?;
            let h = need(p.h, "H")?;
            let g = forms::class_group(d)?;
            let v = experiments::cusp_mass(g.forms(), h)?;
            let mut out = scan_output(vec![ScanRow::new(d, "cusp_mass", v).with_h(h)]);
            out.meta("points", g.order());
            (out, p, "stats cusp")
        }
    })
}

fn run_scan(kind: &ScanKind) -> CliResult<(Output, &Params, &'static str)> {
    Ok(match kind {
        ScanKind::Volume(p) => {
            let (lo, hi) = check_range(p)?;
            let cond = match p.p {
                Some(q) => Admissibility::Linnik(q),
                None => Admissibility::Legendre,
            };
            let rows = with_jobs(p.jobs, || experiments::volume_growth_scan(lo, hi, cond))?;
            (scan_output(rows), p, "scan volume")
        }
        ScanKind::Ratio(p) => {
            let (lo, hi) = check_range(p)?;
            let rows = with_jobs(p.jobs, || experiments::embedding_class_ratio_scan(lo, hi))?;
            let mut out = scan_output(experiments::ratio_scan_rows(&rows));
            out.meta("distinct_ratios", experiments::ratio_histogram(&rows).len());
            (out, p, "scan ratio")
        }
        ScanKind::Census(p) => {
            let (lo, hi) = check_range(p)?;
            let (q, m) = (need(p.p, "p")?, need(p.m, "m")?);
            let rows = with_jobs(p.jobs, || experiments::census_scan(lo, hi, q, m))?;
            (scan_output(rows), p, "scan census")
        }
        ScanKind::Cusp(p) => {
            let (lo, hi) = check_range(p)?;
            let h = need(p.h, "H")?;
            let rows = with_jobs(p.jobs, || experiments::cusp_scan(lo, hi, h))?;
            (scan_output(rows), p, "scan cusp")
        }
    })
}

/// Runs a parsed command, returning its output and the flags it was given.
pub fn execute(cli: &Cli) -> CliResult<(Output, &Params)> {
    let (body, params, name) = match &cli.command {
        Command::Spheres(p) => (run_spheres(p)?, p, "spheres"),
        Command::Classgroup(p) => (run_classgroup(p)?, p, "classgroup"),
        Command::Cm(p) => (run_cm(p)?, p, "cm"),
        Command::Compose(p) => (run_compose(p)?, p, "compose"),
        Command::Reps(p) => (run_reps(p)?, p, "reps"),
        Command::Divisors(p) => (run_divisors(p)?, p, "divisors"),
        Command::Census(p) => (run_census(p)?, p, "census"),
        Command::Neighbors(p) => (run_neighbors(p)?, p, "neighbors"),
        Command::Walk(p) => (run_walk(p)?, p, "walk"),
        Command::Stats { kind } => run_stats(kind)?,
        Command::Scan { kind } => run_scan(kind)?,
    };
    let mut out = Output::new(&[]);
    echo(&mut out, name, params);
    out.meta.extend(body.meta);
    out.columns = body.columns;
    out.rows = body.rows;
    Ok((out, params))
}

fn write_output(out: &Output, p: &Params) -> CliResult<()> {
    let bytes = out.render(p.format)?;
    if p.out == "-" {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        lock.write_all(&bytes)?;
        lock.flush()?;
    } else {
        std::fs::write(&p.out, bytes)?;
    }
    Ok(())
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    let result = execute(&cli).and_then(|(out, p)| write_output(&out, p));
    match result {
        Ok(()) => {
            eprintln!("# wall_time_s={:.3}", start.elapsed().as_secs_f64());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
