//! Command-line front end.
//!
//! [`run`] parses arguments, performs the command and returns the exit
//! code, the JSON report and a one-line human summary; `main` only prints.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::block::{
    classify_boundary, isolation_check, BlockError, Region, DEFAULT_ISOLATION_HORIZON,
};
use crate::degree::{degree, point_index, DegreeError, DegreeReport, Method};
use crate::field::{catalog, catalog_names, parse_field, FieldDef, FieldError};
use crate::verify::{
    boundary_component_euler, catalog_cases, check_planar_bound, random_planar_cases, region_euler,
    run_check, AntipodalMode, BoundarySummary, CheckId, EulerInputs, Verdict, VerifyError,
    VerifyOptions, VerifyReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

/// Result of one invocation.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    /// Full report; `Null` for help and version output.
    pub report: Value,
    pub summary: String,
    /// Where the report should be written instead of stdout.
    pub out: Option<PathBuf>,
}

#[derive(Parser, Debug)]
#[command(
    name = "brouwer",
    version,
    about = "Brouwer degrees, fixed-point indices and isolating blocks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Degree of a field on a region.
    Degree {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value = "auto")]
        method: Method,
        #[command(flatten)]
        common: Common,
    },
    /// Fixed-point index of an isolated zero.
    Index {
        #[command(flatten)]
        target: Target,
        /// Comma-separated coordinates of the zero.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Vec<f64>,
        /// Radius of the ball isolating the zero.
        #[arg(long)]
        radius: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Exit/entrance classification of a region's boundary.
    Classify {
        #[command(flatten)]
        target: Target,
        /// Include every boundary sample in the report.
        #[arg(long)]
        dump_boundary: bool,
        /// Run the heuristic isolation check.
        #[arg(long)]
        isolation: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Check one degree identity.
    Verify {
        check: CheckId,
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        chi: ChiArgs,
        /// Use −F (Poincaré–Hopf on attracting blocks).
        #[arg(long)]
        reverse: bool,
        /// Antipodal mode; derived from parities when absent.
        #[arg(long)]
        mode: Option<AntipodalMode>,
        #[command(flatten)]
        common: Common,
    },
    /// List catalog fields and suite cases.
    Catalog,
    /// Run every built-in check case.
    Suite {
        /// Additional random planar fields for the planar bound.
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct Target {
    /// Field components, comma-separated, in x, y, z (x1..xn beyond three).
    #[arg(long, conflicts_with = "catalog", allow_hyphen_values = true)]
    field: Option<String>,
    /// Catalog entry, e.g. `lorenz` or `attractor(3)`.
    #[arg(long)]
    catalog: Option<String>,
    /// Parameter assignment `name=value`; repeatable.
    #[arg(long = "param", value_parser = parse_param)]
    params: Vec<(String, f64)>,
    /// `ball:c:r`, `box:lo:hi` or `shell:c:rin:rout`.
    #[arg(long, allow_hyphen_values = true)]
    region: Option<String>,
}

#[derive(Args, Debug)]
struct ChiArgs {
    #[arg(long, allow_hyphen_values = true)]
    chi_n: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    chi_l: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    chi_k: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    chi_s: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    chi_s_star: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    chi_a: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    chi_r: Option<i64>,
}

impl ChiArgs {
    fn inputs(&self) -> EulerInputs {
        EulerInputs {
            chi_n: self.chi_n,
            chi_l: self.chi_l,
            chi_k: self.chi_k,
            chi_s: self.chi_s,
            chi_s_star: self.chi_s_star,
            chi_a: self.chi_a,
            chi_r: self.chi_r,
        }
    }
}

#[derive(Args, Debug)]
struct Common {
    /// JSON file with options; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the report here and the summary to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Omit timings so reports are reproducible byte for byte.
    #[arg(long)]
    no_timing: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    newton_tol: Option<f64>,
    #[arg(long)]
    tangency_tol: Option<f64>,
    #[arg(long)]
    quad_agreement: Option<f64>,
    #[arg(long)]
    max_refinements: Option<usize>,
    /// Boundary samples per planar loop.
    #[arg(long)]
    samples: Option<usize>,
    /// Boundary samples per surface.
    #[arg(long)]
    surface_samples: Option<usize>,
    /// Base sphere quadrature grid `θ,φ`.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    sphere_grid: Option<Vec<usize>>,
    /// Grid width for rasterized Euler characteristics.
    #[arg(long)]
    resolution: Option<f64>,
    #[arg(long)]
    antipodal_tol: Option<f64>,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got `{}`", s))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|_| format!("`{}` is not a number", v.trim()))?;
    if !v.is_finite() {
        return Err(format!("parameter {} must be finite", k.trim()));
    }
    Ok((k.trim().to_string(), v))
}

/// A failure classified for the exit code.
#[derive(Debug)]
enum Failure {
    Input(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Numerical(_) => EXIT_NUMERICAL,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Input(_) => "input",
            Failure::Numerical(_) => "numerical",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<FieldError> for Failure {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::Domain { .. } => Failure::Numerical(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<BlockError> for Failure {
    fn from(e: BlockError) -> Self {
        match e {
            BlockError::BoundaryZero { .. } => Failure::Numerical(e.to_string()),
            BlockError::Field(f) => f.into(),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<DegreeError> for Failure {
    fn from(e: DegreeError) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

/// Number of top-level comma-separated components in a field source.
fn component_count(src: &str) -> usize {
    let mut depth = 0i32;
    let mut n = 1;
    for ch in src.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => n += 1,
            _ => {}
        }
    }
    n
}

impl Target {
    fn field(&self) -> Result<FieldDef, Failure> {
        let params: BTreeMap<String, f64> = self.params.iter().cloned().collect();
        match (&self.field, &self.catalog) {
            (Some(src), None) => Ok(parse_field(src, component_count(src), &params)?),
            (None, Some(name)) => Ok(catalog(name, &params)?),
            _ => Err(Failure::Input(
                "give exactly one of --field or --catalog".into(),
            )),
        }
    }

    fn region(&self) -> Result<Region, Failure> {
        let s = self
            .region
            .as_deref()
            .ok_or_else(|| Failure::Input("--region is required".into()))?;
        Ok(s.parse::<Region>()?)
    }

    fn both(&self) -> Result<(FieldDef, Region), Failure> {
        let f = self.field()?;
        let r = self.region()?;
        if f.dim() != r.dim() {
            return Err(Failure::Input(format!(
                "field has dimension {}, region has dimension {}",
                f.dim(),
                r.dim()
            )));
        }
        Ok((f, r))
    }

    fn describe(&self) -> Value {
        json!({
            "field": self.field,
            "catalog": self.catalog,
            "params": self.params.iter().cloned().collect::<BTreeMap<String, f64>>(),
            "region": self.region,
        })
    }
}

impl Common {
    fn options(&self) -> Result<VerifyOptions, Failure> {
        let mut o = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    Failure::Input(format!("cannot read config {}: {}", p.display(), e))
                })?;
                serde_json::from_str::<VerifyOptions>(&text)
                    .map_err(|e| Failure::Input(format!("invalid config {}: {}", p.display(), e)))?
            }
            None => VerifyOptions::default(),
        };
        if let Some(v) = self.newton_tol {
            o.degree.newton_tol = v;
        }
        if let Some(v) = self.tangency_tol {
            o.tangency_tol = v;
        }
        if let Some(v) = self.quad_agreement {
            o.degree.quad_agreement = v;
        }
        if let Some(v) = self.max_refinements {
            o.degree.max_refinements = v;
        }
        if let Some(v) = self.samples {
            o.loop_samples = v;
        }
        if let Some(v) = self.surface_samples {
            o.surface_samples = v;
        }
        if let Some(g) = &self.sphere_grid {
            match g.as_slice() {
                [a, b] => o.degree.sphere_grid = (*a, *b),
                _ => {
                    return Err(Failure::Input(
                        "--sphere-grid takes two integers `θ,φ`".into(),
                    ))
                }
            }
        }
        if let Some(v) = self.resolution {
            o.resolution = Some(v);
        }
        if let Some(v) = self.antipodal_tol {
            o.antipodal_tol = v;
        }
        let positive = [
            ("newton-tol", o.degree.newton_tol),
            ("tangency-tol", o.tangency_tol),
            ("quad-agreement", o.degree.quad_agreement),
            ("antipodal-tol", o.antipodal_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Failure::Input(format!("--{} must be positive", name)));
            }
        }
        if o.resolution.is_some_and(|h| !(h > 0.0 && h.is_finite())) {
            return Err(Failure::Input("--resolution must be positive".into()));
        }
        if o.loop_samples < 4 || o.surface_samples < 8 {
            return Err(Failure::Input("too few boundary samples".into()));
        }
        Ok(o)
    }
}

/// Report skeleton with every documented key present.
fn skeleton(command: &str, config: Value) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("tool_version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("command".into(), json!(command));
    m.insert("config".into(), config);
    for k in [
        "method", "raw", "degree", "euler", "boundary", "verdict", "timing",
    ] {
        m.insert(k.into(), Value::Null);
    }
    m.insert("zeros".into(), json!([]));
    m.insert("warnings".into(), json!([]));
    m
}

fn put_degree(m: &mut Map<String, Value>, d: &DegreeReport) {
    m.insert("method".into(), json!(d.method));
    m.insert("raw".into(), json!(d.raw));
    m.insert("degree".into(), json!(d.degree));
    m.insert("zeros".into(), json!(d.zeros));
    m.insert("refinements".into(), json!(d.refinements));
    m.insert("min_boundary_norm".into(), json!(d.min_boundary_norm));
    m.insert("cross_check".into(), json!(d.cross_check));
    push_warnings(m, &d.warnings);
}

fn push_warnings(m: &mut Map<String, Value>, w: &[String]) {
    if let Some(Value::Array(a)) = m.get_mut("warnings") {
        a.extend(w.iter().map(|s| json!(s)));
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn fmt_side(v: Option<i64>) -> String {
    v.map_or("?".into(), |x| x.to_string())
}

fn verify_summary(r: &VerifyReport) -> String {
    let rel = match r.relation {
        crate::verify::Relation::Equal => "=",
        crate::verify::Relation::AtMost => "<=",
        crate::verify::Relation::NotEqual => "!=",
        crate::verify::Relation::Exists => "exists",
    };
    let sides = if r.lhs.is_some() || r.rhs.is_some() {
        format!(" ({} {} {})", fmt_side(r.lhs), rel, fmt_side(r.rhs))
    } else {
        String::new()
    };
    let extra = r
        .conclusion
        .as_ref()
        .map(|c| format!(": {}", c))
        .unwrap_or_default();
    format!("{} {}{}{}", r.check, verdict_name(r.verdict), sides, extra)
}

fn put_verify(m: &mut Map<String, Value>, r: &VerifyReport) {
    if let Some(d) = &r.degree {
        put_degree(m, d);
    }
    m.insert("check".into(), json!(r.check));
    m.insert("relation".into(), json!(r.relation));
    m.insert("lhs".into(), json!(r.lhs));
    m.insert("rhs".into(), json!(r.rhs));
    m.insert("verdict".into(), json!(r.verdict));
    m.insert("conclusion".into(), json!(r.conclusion));
    m.insert("euler".into(), json!(r.euler));
    m.insert("boundary".into(), json!(r.boundary));
    if let Some(a) = &r.sign_audit {
        m.insert("sign_audit".into(), json!(a));
    }
    if let Some(c) = r.chi_c {
        m.insert("chi_c".into(), json!(c));
    }
    if let Some(a) = &r.antipodal {
        m.insert("antipodal".into(), json!(a));
    }
    push_warnings(m, &r.notes);
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            return Outcome {
                code,
                report: Value::Null,
                summary: e.render().to_string(),
                out: None,
            };
        }
    };
    let started = Instant::now();
    let (name, common) = match &cli.command {
        Command::Degree { common, .. } => ("degree", Some(common)),
        Command::Index { common, .. } => ("index", Some(common)),
        Command::Classify { common, .. } => ("classify", Some(common)),
        Command::Verify { common, .. } => ("verify", Some(common)),
        Command::Catalog => ("catalog", None),
        Command::Suite { common, .. } => ("suite", Some(common)),
    };
    let out = common.and_then(|c| c.out.clone());
    let no_timing = common.is_some_and(|c| c.no_timing);
    let mut report = skeleton(name, Value::Null);
    let result = execute(&cli.command, &mut report);
    let (code, summary) = match result {
        Ok(done) => done,
        Err(f) => {
            report.insert(
                "error".into(),
                json!({"kind": f.kind(), "message": f.message()}),
            );
            (f.code(), format!("error ({}): {}", f.kind(), f.message()))
        }
    };
    if !no_timing {
        report.insert(
            "timing".into(),
            json!({"total_ms": started.elapsed().as_secs_f64() * 1e3}),
        );
    }
    Outcome {
        code,
        report: Value::Object(report),
        summary,
        out,
    }
}

fn config_value(target: Option<&Target>, opts: &VerifyOptions, seed: u64, extra: Value) -> Value {
    let mut c = json!({"options": opts, "seed": seed});
    if let Some(t) = target {
        c["target"] = t.describe();
    }
    if let (Value::Object(c), Value::Object(e)) = (&mut c, extra) {
        c.extend(e);
    }
    c
}

fn execute(cmd: &Command, m: &mut Map<String, Value>) -> Result<(i32, String), Failure> {
    match cmd {
        Command::Degree {
            target,
            method,
            common,
        } => {
            let opts = common.options()?;
            m.insert(
                "config".into(),
                config_value(Some(target), &opts, common.seed, json!({"method": method})),
            );
            let (f, r) = target.both()?;
            let d = degree(&f, &r, *method, &opts.degree)?;
            put_degree(m, &d);
            let summary = format!(
                "degree {} ({}, raw {:.6}, {} zeros)",
                d.degree,
                d.method,
                d.raw,
                d.zeros.len()
            );
            Ok((EXIT_OK, summary))
        }
        Command::Index {
            target,
            point,
            radius,
            common,
        } => {
            let opts = common.options()?;
            m.insert(
                "config".into(),
                config_value(
                    Some(target),
                    &opts,
                    common.seed,
                    json!({"point": point, "radius": radius}),
                ),
            );
            let f = target.field()?;
            if point.len() != f.dim() {
                return Err(Failure::Input(format!(
                    "point has {} coordinates, field has dimension {}",
                    point.len(),
                    f.dim()
                )));
            }
            if !(*radius > 0.0 && radius.is_finite()) {
                return Err(Failure::Input("--radius must be positive".into()));
            }
            let d = point_index(&f, point, *radius, &opts.degree)?;
            put_degree(m, &d);
            Ok((
                EXIT_OK,
                format!("index {} ({}, raw {:.6})", d.degree, d.method, d.raw),
            ))
        }
        Command::Classify {
            target,
            dump_boundary,
            isolation,
            common,
        } => {
            let opts = common.options()?;
            m.insert(
                "config".into(),
                config_value(Some(target), &opts, common.seed, json!({})),
            );
            let (f, r) = target.both()?;
            let b = classify_boundary(&f, &r, opts.density(), opts.tangency_tol)?;
            let summary = BoundarySummary::of(&b);
            let h = opts.resolution_for(&r);
            m.insert(
                "euler".into(),
                json!({
                    "chi_n": {"value": region_euler(&r, h), "provenance": {"source": "computed", "method": "rasterized region", "resolution": h}},
                    "boundary_components": boundary_component_euler(&r, h),
                }),
            );
            let mut bv = json!(summary);
            bv["detail"] = json!(b.components);
            bv["min_norm"] = json!(b.min_norm);
            bv["max_norm"] = json!(b.max_norm);
            if *dump_boundary {
                bv["samples"] = json!(b.samples);
            }
            m.insert("boundary".into(), bv);
            if *isolation {
                let iso = isolation_check(&f, &r, DEFAULT_ISOLATION_HORIZON, h)?;
                m.insert("isolation".into(), json!(iso));
            }
            let verdicts: Vec<String> = summary
                .components
                .iter()
                .map(|v| {
                    serde_json::to_value(v)
                        .unwrap()
                        .as_str()
                        .unwrap()
                        .to_string()
                })
                .collect();
            let tang = summary
                .tangency_count
                .map(|t| format!(", {} tangencies", t))
                .unwrap_or_default();
            Ok((
                EXIT_OK,
                format!("boundary components: [{}]{}", verdicts.join(", "), tang),
            ))
        }
        Command::Verify {
            check,
            target,
            chi,
            reverse,
            mode,
            common,
        } => {
            let mut opts = common.options()?;
            opts.reverse = *reverse;
            opts.antipodal_mode = *mode;
            let inputs = chi.inputs();
            m.insert(
                "config".into(),
                config_value(
                    Some(target),
                    &opts,
                    common.seed,
                    json!({"check": check, "inputs": inputs}),
                ),
            );
            let (f, r) = target.both()?;
            let rep = run_check(*check, &f, &r, &inputs, &opts)?;
            put_verify(m, &rep);
            let code = if rep.verdict == Verdict::Fail {
                EXIT_VERIFICATION_FAILED
            } else {
                EXIT_OK
            };
            Ok((code, verify_summary(&rep)))
        }
        Command::Catalog => {
            m.insert("catalog".into(), json!(catalog_names()));
            let cases: Vec<String> = catalog_cases().iter().map(|c| c.label()).collect();
            m.insert("cases".into(), json!(cases));
            Ok((
                EXIT_OK,
                format!(
                    "{} catalog fields, {} suite cases",
                    catalog_names().len(),
                    cases.len()
                ),
            ))
        }
        Command::Suite { random, common } => {
            let opts = common.options()?;
            m.insert(
                "config".into(),
                config_value(None, &opts, common.seed, json!({"random": random})),
            );
            let (results, counts) = suite(&opts, *random, common.seed);
            m.insert("results".into(), json!(results));
            let ok = counts.fail == 0 && counts.error == 0;
            m.insert("verdict".into(), json!(if ok { "pass" } else { "fail" }));
            m.insert("counts".into(), json!(counts));
            let summary = format!(
                "suite: {} pass, {} fail, {} inconclusive, {} error, {} skipped",
                counts.pass, counts.fail, counts.inconclusive, counts.error, counts.skipped
            );
            Ok((
                if ok {
                    EXIT_OK
                } else {
                    EXIT_VERIFICATION_FAILED
                },
                summary,
            ))
        }
    }
}

#[derive(Debug, Default, serde::Serialize)]
struct Counts {
    pass: usize,
    fail: usize,
    inconclusive: usize,
    error: usize,
    skipped: usize,
}

impl Counts {
    fn add(&mut self, v: Verdict) {
        match v {
            Verdict::Pass => self.pass += 1,
            Verdict::Fail => self.fail += 1,
            Verdict::Inconclusive => self.inconclusive += 1,
        }
    }
}

fn case_entry(label: String, res: Result<VerifyReport, VerifyError>, counts: &mut Counts) -> Value {
    match res {
        Ok(r) => {
            counts.add(r.verdict);
            json!({
                "case": label,
                "verdict": r.verdict,
                "lhs": r.lhs,
                "rhs": r.rhs,
                "summary": verify_summary(&r),
                "notes": r.notes,
            })
        }
        Err(e) => {
            counts.error += 1;
            json!({"case": label, "verdict": "error", "error": e.to_string()})
        }
    }
}

fn suite(opts: &VerifyOptions, random: usize, seed: u64) -> (Vec<Value>, Counts) {
    let mut counts = Counts::default();
    let mut results = Vec::new();
    for case in catalog_cases() {
        let res = case.run(opts);
        results.push(case_entry(case.label(), res, &mut counts));
    }
    if random > 0 {
        for (i, case) in random_planar_cases(seed, random).into_iter().enumerate() {
            let label = format!(
                "planar-bound/random#{} [{}] {}",
                i, case.source, case.region
            );
            match case.chi_k_from_zeros() {
                Some(k) => {
                    let inputs = EulerInputs {
                        chi_k: Some(k),
                        ..Default::default()
                    };
                    let res = check_planar_bound(&case.field, &case.region, &inputs, opts);
                    results.push(case_entry(label, res, &mut counts));
                }
                None => {
                    counts.skipped += 1;
                    results.push(json!({
                        "case": label,
                        "verdict": "skipped",
                        "reason": format!("{} zeros inside; χ(K) not determined by zero structure", case.zeros_inside().len()),
                    }));
                }
            }
        }
    }
    (results, counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Outcome {
        run(std::iter::once("brouwer").chain(args.iter().copied()))
    }

    #[test]
    fn params_parse() {
        assert_eq!(parse_param("r=24").unwrap(), ("r".into(), 24.0));
        assert!(parse_param("r").is_err());
        assert!(parse_param("r=x").is_err());
        assert!(parse_param("r=inf").is_err());
    }

    #[test]
    fn components_are_counted_at_top_level() {
        assert_eq!(component_count("x, -y"), 2);
        assert_eq!(component_count("atan2(y, x), x, z"), 3);
        assert_eq!(component_count("x"), 1);
    }

    #[test]
    fn degree_of_saddle() {
        let o = go(&[
            "degree",
            "--catalog",
            "saddle2",
            "--region",
            "box:-1,-1:1,1",
            "--no-timing",
        ]);
        assert_eq!(o.code, EXIT_OK, "{}", o.summary);
        assert_eq!(o.report["degree"], json!(-1));
        assert!(o.report["timing"].is_null());
        for key in [
            "tool_version",
            "config",
            "method",
            "raw",
            "zeros",
            "euler",
            "boundary",
            "verdict",
            "warnings",
        ] {
            assert!(o.report.get(key).is_some(), "{}", key);
        }
    }

    #[test]
    fn exit_codes() {
        let tang = go(&[
            "verify",
            "tangency",
            "--field",
            "x,-y",
            "--region",
            "box:-1,-1:1,1",
        ]);
        assert_eq!(tang.code, EXIT_OK, "{}", tang.summary);
        assert_eq!(tang.report["verdict"], json!("pass"));
        let degenerate = go(&[
            "degree",
            "--field",
            "x^2,y",
            "--region",
            "ball:0,0:1",
            "--method",
            "zeros",
        ]);
        assert_eq!(degenerate.code, EXIT_NUMERICAL, "{}", degenerate.summary);
        assert_eq!(degenerate.report["error"]["kind"], json!("numerical"));
        let bad_region = go(&["degree", "--field", "x,y", "--region", "disk:0,0:1"]);
        assert_eq!(bad_region.code, EXIT_INPUT);
        let bad_field = go(&["degree", "--field", "x+,y", "--region", "ball:0,0:1"]);
        assert_eq!(bad_field.code, EXIT_INPUT);
        let mismatch = go(&["degree", "--field", "x,y,z", "--region", "ball:0,0:1"]);
        assert_eq!(mismatch.code, EXIT_INPUT);
        let unknown_flag = go(&["degree", "--frobnicate"]);
        assert_eq!(unknown_flag.code, EXIT_INPUT);
        let failing = go(&[
            "verify",
            "eq1",
            "--field",
            "x,-y",
            "--region",
            "box:-1,-1:1,1",
            "--chi-k",
            "1",
            "--chi-s",
            "0",
        ]);
        assert_eq!(
            failing.code, EXIT_VERIFICATION_FAILED,
            "{}",
            failing.summary
        );
    }

    #[test]
    fn help_is_not_an_error() {
        let o = go(&["--help"]);
        assert_eq!(o.code, EXIT_OK);
        assert!(o.report.is_null());
        assert!(o.summary.contains("degree"));
    }

    #[test]
    fn index_of_lorenz_origin() {
        let o = go(&[
            "index",
            "--catalog",
            "lorenz",
            "--point",
            "0,0,0",
            "--radius",
            "1",
        ]);
        assert_eq!(o.code, EXIT_OK, "{}", o.summary);
        assert_eq!(o.report["degree"], json!(1));
    }

    #[test]
    fn negative_values_are_accepted() {
        let o = go(&[
            "index", "--field", "x+1,y", "--point", "-1,0", "--radius", "0.5",
        ]);
        assert_eq!(o.code, EXIT_OK, "{}", o.summary);
        let v = go(&[
            "verify",
            "connection",
            "--catalog",
            "lorenz",
            "--region",
            "ball:0,0,0:60",
            "--chi-a",
            "2",
            "--chi-r",
            "-1",
            "--chi-k",
            "1",
            "--chi-s",
            "0",
        ]);
        assert_eq!(v.code, EXIT_OK, "{}", v.summary);
        assert_eq!(v.report["chi_c"], json!(0));
    }
}
