//! Mechanical checks of degree identities for isolating blocks.
//!
//! Every identity compares two integers. Values that cannot be computed
//! from a rasterization (for instance the Euler characteristic of a strange
//! invariant set) may be supplied; reports record where each value came
//! from.

mod antipodal;
mod cases;
mod random;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use antipodal::{antipodal_search, parity_mode, AntipodalMode, AntipodalResult};
pub use cases::{catalog_cases, CatalogCase};
pub use random::{random_planar_cases, random_planar_field, PlanarCase};

use crate::block::{
    classify_boundary, exit_runs_2d, tangency_components_2d, BlockBoundary, BlockError,
    ComponentVerdict, Density, Region, DEFAULT_TANGENCY_TOL,
};
use crate::cubical::{boundary_components, close, close_cells, euler, rasterize, BoundaryFace};
use crate::degree::{degree, zero_count_degree, DegreeError, DegreeOptions, DegreeReport, Method};
use crate::field::{FieldDef, FieldError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Degree(#[from] DegreeError),
    #[error(transparent)]
    Block(#[from] BlockError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("{0}")]
    Input(String),
}

impl VerifyError {
    pub fn is_numerical(&self) -> bool {
        match self {
            VerifyError::Degree(e) => e.is_numerical(),
            VerifyError::Block(BlockError::BoundaryZero { .. }) => true,
            VerifyError::Field(FieldError::Domain { .. }) => true,
            _ => false,
        }
    }
}

/// Identifiers of the available checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CheckId {
    #[serde(rename = "conley")]
    Conley,
    #[serde(rename = "eq1")]
    Eq1,
    #[serde(rename = "planar-bound")]
    PlanarBound,
    #[serde(rename = "poincare-hopf")]
    PoincareHopf,
    #[serde(rename = "tangency")]
    Tangency,
    #[serde(rename = "nonsaddle")]
    Nonsaddle,
    #[serde(rename = "connection")]
    Connection,
    #[serde(rename = "antipodal")]
    Antipodal,
}

impl CheckId {
    pub const ALL: [CheckId; 8] = [
        CheckId::Conley,
        CheckId::Eq1,
        CheckId::PlanarBound,
        CheckId::PoincareHopf,
        CheckId::Tangency,
        CheckId::Nonsaddle,
        CheckId::Connection,
        CheckId::Antipodal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::Conley => "conley",
            CheckId::Eq1 => "eq1",
            CheckId::PlanarBound => "planar-bound",
            CheckId::PoincareHopf => "poincare-hopf",
            CheckId::Tangency => "tangency",
            CheckId::Nonsaddle => "nonsaddle",
            CheckId::Connection => "connection",
            CheckId::Antipodal => "antipodal",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckId {
    type Err = String;
    fn from_str(s: &str) -> Result<CheckId, String> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = CheckId::ALL.iter().map(|c| c.name()).collect();
                format!(
                    "unknown check `{}` (expected one of {})",
                    s,
                    names.join(", ")
                )
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// How the two sides of a check are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Equal,
    AtMost,
    /// A sufficient criterion: inequality proves the claim, equality is silent.
    NotEqual,
    /// An existence claim settled by a witness.
    Exists,
}

/// Where an Euler characteristic came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum Provenance {
    Supplied,
    Computed {
        method: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        resolution: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EulerEntry {
    pub value: i64,
    pub provenance: Provenance,
}

impl EulerEntry {
    pub fn supplied(value: i64) -> Self {
        EulerEntry {
            value,
            provenance: Provenance::Supplied,
        }
    }

    fn computed(value: i64, method: &str, resolution: Option<f64>) -> Self {
        EulerEntry {
            value,
            provenance: Provenance::Computed {
                method: method.into(),
                resolution,
            },
        }
    }
}

/// Euler characteristics entering the identities.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct EulerData {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_n: Option<EulerEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_l: Option<EulerEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_k: Option<EulerEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_s: Option<EulerEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_s_star: Option<EulerEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_a: Option<EulerEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_r: Option<EulerEntry>,
}

/// User-supplied Euler characteristics; absent entries are computed when
/// the block allows it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct EulerInputs {
    pub chi_n: Option<i64>,
    pub chi_l: Option<i64>,
    pub chi_k: Option<i64>,
    pub chi_s: Option<i64>,
    pub chi_s_star: Option<i64>,
    pub chi_a: Option<i64>,
    pub chi_r: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyOptions {
    pub degree: DegreeOptions,
    pub loop_samples: usize,
    pub surface_samples: usize,
    pub tangency_tol: f64,
    /// Grid width for rasterized Euler characteristics; derived from the
    /// region diameter when absent.
    pub resolution: Option<f64>,
    /// Run Poincaré–Hopf on −F.
    pub reverse: bool,
    pub antipodal_tol: f64,
    /// Forces the antipodal mode instead of deriving it from parities.
    pub antipodal_mode: Option<AntipodalMode>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        let d = Density::default();
        VerifyOptions {
            degree: DegreeOptions::default(),
            loop_samples: d.per_loop,
            surface_samples: d.per_surface,
            tangency_tol: DEFAULT_TANGENCY_TOL,
            resolution: None,
            reverse: false,
            antipodal_tol: 1e-6,
            antipodal_mode: None,
        }
    }
}

impl VerifyOptions {
    pub fn density(&self) -> Density {
        Density {
            per_loop: self.loop_samples,
            per_surface: self.surface_samples,
        }
    }

    /// Grid width used for rasterized Euler characteristics.
    pub fn resolution_for(&self, region: &Region) -> f64 {
        if let Region::Cubes(c) = region {
            return c.width();
        }
        self.resolution.unwrap_or_else(|| {
            let per = if region.dim() <= 2 { 48.0 } else { 32.0 };
            region.diameter() / per
        })
    }
}

/// Per-component boundary verdicts and the planar tangency count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundarySummary {
    pub components: Vec<ComponentVerdict>,
    pub samples: usize,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tangency_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tangency_reliable: Option<bool>,
}

impl BoundarySummary {
    pub fn of(b: &BlockBoundary) -> Self {
        let t = tangency_components_2d(b).ok();
        BoundarySummary {
            components: b.components.iter().map(|c| c.verdict).collect(),
            samples: b.samples.len(),
            tolerance: b.tolerance,
            tangency_count: t.as_ref().map(|t| t.count),
            tangency_reliable: t.map(|t| t.reliable),
        }
    }
}

/// Both sign conventions for the odd-dimensional non-saddle index formula.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignAudit {
    /// `½(χ(S) − χ(S*))`.
    pub exit_minus_entry: i64,
    /// `½(χ(S*) − χ(S))`.
    pub entry_minus_exit: i64,
    pub oracle: i64,
    pub exit_minus_entry_matches: bool,
    pub entry_minus_exit_matches: bool,
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub check: CheckId,
    pub field: String,
    pub region: String,
    pub relation: Relation,
    pub lhs: Option<i64>,
    pub rhs: Option<i64>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conclusion: Option<String>,
    pub inputs: EulerInputs,
    pub euler: EulerData,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<DegreeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundarySummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign_audit: Option<SignAudit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_c: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub antipodal: Option<AntipodalResult>,
    pub notes: Vec<String>,
}

impl VerifyReport {
    fn new(
        check: CheckId,
        field: &FieldDef,
        region: &Region,
        inputs: &EulerInputs,
        relation: Relation,
    ) -> Self {
        VerifyReport {
            check,
            field: field.to_string(),
            region: region.to_string(),
            relation,
            lhs: None,
            rhs: None,
            verdict: Verdict::Inconclusive,
            conclusion: None,
            inputs: inputs.clone(),
            euler: EulerData::default(),
            degree: None,
            boundary: None,
            sign_audit: None,
            chi_c: None,
            antipodal: None,
            notes: Vec::new(),
        }
    }

    /// Sets both sides and derives the verdict from the relation.
    fn compare(&mut self, lhs: i64, rhs: i64) {
        self.lhs = Some(lhs);
        self.rhs = Some(rhs);
        self.verdict = match self.relation {
            Relation::Equal => pass_if(lhs == rhs),
            Relation::AtMost => pass_if(lhs <= rhs),
            Relation::NotEqual => {
                if lhs != rhs {
                    Verdict::Pass
                } else {
                    Verdict::Inconclusive
                }
            }
            Relation::Exists => unreachable!("existence checks carry no sides"),
        };
    }

    fn inconclusive(mut self, why: impl Into<String>) -> Self {
        self.verdict = Verdict::Inconclusive;
        self.notes.push(why.into());
        self
    }
}

fn pass_if(b: bool) -> Verdict {
    if b {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn sign_n(n: usize) -> i64 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Euler characteristic of a rasterized region.
pub fn region_euler(region: &Region, h: f64) -> i64 {
    match region {
        Region::Cubes(c) => euler(&close(c)),
        _ => euler(&close(&rasterize(region, h))),
    }
}

/// Euler characteristic of each boundary component, from the boundary
/// faces of a rasterization grouped by the component they approximate.
pub fn boundary_component_euler(region: &Region, h: f64) -> Vec<i64> {
    let n = region.dim();
    let groups: Vec<Vec<BoundaryFace>> = match region {
        Region::Cubes(c) => boundary_components(c),
        _ => {
            let grid = rasterize(region, h);
            let mut groups = vec![Vec::new(); region.boundary_component_count()];
            for comp in boundary_components(&grid) {
                for f in comp {
                    let mut p = grid.center(&f.cube);
                    p[f.axis] += 0.5 * h * f.sign as f64;
                    let k = region.analytic_component_of(&p).min(groups.len() - 1);
                    groups[k].push(f);
                }
            }
            groups
        }
    };
    groups
        .iter()
        .map(|g| euler(&close_cells(n, g.iter().map(|f| &f.cell))))
        .collect()
}

/// Shared, lazily computed quantities of a (field, block) pair.
struct Analysis<'a> {
    field: &'a FieldDef,
    region: &'a Region,
    inputs: &'a EulerInputs,
    opts: &'a VerifyOptions,
    boundary: Option<BlockBoundary>,
    comp_chi: Option<Vec<i64>>,
}

impl<'a> Analysis<'a> {
    fn new(
        field: &'a FieldDef,
        region: &'a Region,
        inputs: &'a EulerInputs,
        opts: &'a VerifyOptions,
    ) -> Self {
        Analysis {
            field,
            region,
            inputs,
            opts,
            boundary: None,
            comp_chi: None,
        }
    }

    fn h(&self) -> f64 {
        self.opts.resolution_for(self.region)
    }

    fn boundary(&mut self) -> Result<&BlockBoundary, VerifyError> {
        if self.boundary.is_none() {
            self.boundary = Some(classify_boundary(
                self.field,
                self.region,
                self.opts.density(),
                self.opts.tangency_tol,
            )?);
        }
        Ok(self.boundary.as_ref().unwrap())
    }

    fn comp_chi(&mut self) -> &[i64] {
        if self.comp_chi.is_none() {
            self.comp_chi = Some(boundary_component_euler(self.region, self.h()));
        }
        self.comp_chi.as_ref().unwrap()
    }

    fn degree(&self) -> Result<DegreeReport, VerifyError> {
        Ok(degree(
            self.field,
            self.region,
            Method::Auto,
            &self.opts.degree,
        )?)
    }

    fn chi_n(&self) -> EulerEntry {
        match self.inputs.chi_n {
            Some(v) => EulerEntry::supplied(v),
            None => EulerEntry::computed(
                region_euler(self.region, self.h()),
                "rasterized region",
                Some(self.h()),
            ),
        }
    }

    fn uniform(&mut self) -> Result<bool, VerifyError> {
        Ok(self.boundary()?.is_uniform())
    }

    /// Sum of the Euler characteristics of the components with the given verdict.
    fn chi_of(&mut self, verdict: ComponentVerdict) -> Result<i64, VerifyError> {
        let verdicts: Vec<ComponentVerdict> = self
            .boundary()?
            .components
            .iter()
            .map(|c| c.verdict)
            .collect();
        let chis = self.comp_chi().to_vec();
        if chis.len() != verdicts.len() {
            return Err(VerifyError::Input(format!(
                "boundary has {} sampled components but {} rasterized ones; refine the resolution",
                verdicts.len(),
                chis.len()
            )));
        }
        Ok(verdicts
            .iter()
            .zip(&chis)
            .filter(|(v, _)| **v == verdict)
            .map(|(_, c)| c)
            .sum())
    }

    /// χ(L): supplied; from rasterized components for uniform blocks; from
    /// exit arcs along planar loops otherwise.
    fn chi_l(&mut self) -> Result<Option<EulerEntry>, VerifyError> {
        if let Some(v) = self.inputs.chi_l {
            return Ok(Some(EulerEntry::supplied(v)));
        }
        if self.uniform()? {
            let h = self.h();
            let v = self.chi_of(ComponentVerdict::Outward)?;
            return Ok(Some(EulerEntry::computed(
                v,
                "outward boundary components",
                Some(h),
            )));
        }
        if self.region.dim() == 2 {
            let runs = exit_runs_2d(self.boundary()?)?;
            let v: i64 = runs.iter().map(|r| r.map_or(0, |k| k as i64)).sum();
            return Ok(Some(EulerEntry::computed(
                v,
                "exit arcs along boundary loops",
                None,
            )));
        }
        Ok(None)
    }

    /// χ(K) for uniform blocks equals χ(N).
    fn chi_k(&mut self) -> Result<Option<EulerEntry>, VerifyError> {
        if let Some(v) = self.inputs.chi_k {
            return Ok(Some(EulerEntry::supplied(v)));
        }
        if self.uniform()? {
            let n = self.chi_n();
            return Ok(Some(EulerEntry::computed(
                n.value,
                "block retracts onto the invariant set",
                Some(self.h()),
            )));
        }
        Ok(None)
    }

    /// χ(S) (outward components) and χ(S*) (inward components) for uniform blocks.
    fn chi_sections(&mut self) -> Result<(Option<EulerEntry>, Option<EulerEntry>), VerifyError> {
        let uniform = self.uniform()?;
        let h = self.h();
        let s = match self.inputs.chi_s {
            Some(v) => Some(EulerEntry::supplied(v)),
            None if uniform => Some(EulerEntry::computed(
                self.chi_of(ComponentVerdict::Outward)?,
                "outward boundary components",
                Some(h),
            )),
            None => None,
        };
        let s_star = match self.inputs.chi_s_star {
            Some(v) => Some(EulerEntry::supplied(v)),
            None if uniform => Some(EulerEntry::computed(
                self.chi_of(ComponentVerdict::Inward)?,
                "inward boundary components",
                Some(h),
            )),
            None => None,
        };
        Ok((s, s_star))
    }
}

/// `deg(F, N) = (−1)ⁿ χ(N, L)` with `χ(N, L) = χ(N) − χ(L)`.
pub fn check_degree_conley(
    field: &FieldDef,
    region: &Region,
    inputs: &EulerInputs,
    opts: &VerifyOptions,
) -> Result<VerifyReport, VerifyError> {
    let mut a = Analysis::new(field, region, inputs, opts);
    let mut rep = VerifyReport::new(CheckId::Conley, field, region, inputs, Relation::Equal);
    rep.boundary = Some(BoundarySummary::of(a.boundary()?));
    let chi_n = a.chi_n();
    let chi_l = a.chi_l()?;
    rep.euler.chi_n = Some(chi_n.clone());
    rep.euler.chi_l = chi_l.clone();
    let Some(chi_l) = chi_l else {
        return Ok(rep.inconclusive("exit set has mixed components; supply χ(L)"));
    };
    let d = a.degree()?;
    rep.compare(d.degree, sign_n(region.dim()) * (chi_n.value - chi_l.value));
    rep.degree = Some(d);
    Ok(rep)
}

/// `deg(F, N) = (−1)ⁿ (χ(K) − χ(S))`.
pub fn check_eq1(
    field: &FieldDef,
    region: &Region,
    inputs: &EulerInputs,
    opts: &VerifyOptions,
) -> Result<VerifyReport, VerifyError> {
    let mut a = Analysis::new(field, region, inputs, opts);
    let mut rep = VerifyReport::new(CheckId::Eq1, field, region, inputs, Relation::Equal);
    rep.boundary = Some(BoundarySummary::of(a.boundary()?));
    let chi_k = a.chi_k()?;
    let (chi_s, _) = a.chi_sections()?;
    rep.euler.chi_k = chi_k.clone();
    rep.euler.chi_s = chi_s.clone();
    let (Some(k), Some(s)) = (chi_k, chi_s) else {
        return Ok(rep
            .inconclusive("χ(K) and χ(S) are needed; supply them for blocks with mixed boundary"));
    };
    let d = a.degree()?;
    rep.compare(d.degree, sign_n(region.dim()) * (k.value - s.value));
    rep.degree = Some(d);
    Ok(rep)
}

/// `deg(F, N) ≤ χ(K)` for planar blocks.
pub fn check_planar_bound(
    field: &FieldDef,
    region: &Region,
    inputs: &EulerInputs,
    opts: &VerifyOptions,
) -> Result<VerifyReport, VerifyError> {
    if region.dim() != 2 {
        return Err(VerifyError::Input(
            "planar-bound applies to planar blocks only".into(),
        ));
    }
    let mut a = Analysis::new(field, region, inputs, opts);
    let mut rep = VerifyReport::new(
        CheckId::PlanarBound,
        field,
        region,
        inputs,
        Relation::AtMost,
    );
    rep.boundary = Some(BoundarySummary::of(a.boundary()?));
    let chi_k = a.chi_k()?;
    rep.euler.chi_k = chi_k.clone();
    let Some(k) = chi_k else {
        return Ok(rep.inconclusive("χ(K) is needed; supply it for blocks with mixed boundary"));
    };
    let d = a.degree()?;
    rep.compare(d.degree, k.value);
    rep.degree = Some(d);
    Ok(rep)
}

/// For an all-outward block, `I(F|N) = χ(N)`. With `reverse`, −F is used.
pub fn check_poincare_hopf(
    field: &FieldDef,
    region: &Region,
    inputs: &EulerInputs,
    opts: &VerifyOptions,
) -> Result<VerifyReport, VerifyError> {
    let f = if opts.reverse {
        field.negated()
    } else {
        field.clone()
    };
    let mut a = Analysis::new(&f, region, inputs, opts);
    let mut rep = VerifyReport::new(CheckId::PoincareHopf, &f, region, inputs, Relation::Equal);
    let b = a.boundary()?;
    rep.boundary = Some(BoundarySummary::of(b));
    if opts.reverse {
        rep.notes.push("field reversed".into());
    }
    if !b.all_outward() {
        let hint = if b.all_inward() {
            "; the reversed field points outward (use reverse)"
        } else {
            ""
        };
        return Ok(rep.inconclusive(format!(
            "field does not point outward on the whole boundary{}",
            hint
        )));
    }
    let chi_n = a.chi_n();
    rep.euler.chi_n = Some(chi_n.clone());
    match zero_count_degree(&f, region, &opts.degree) {
        Ok(z) => {
            rep.compare(z.degree, chi_n.value);
            rep.degree = Some(z);
            Ok(rep)
        }
        Err(DegreeError::DegenerateZero { point, det_abs }) => Ok(rep.inconclusive(format!(
            "index not defined: degenerate zero at {:?} (|det DF| = {:e})",
            point, det_abs
        ))),
        Err(e) => Err(e.into()),
    }
}

/// Number of planar tangency points equals `2(χ(N) − I(F|N))`.
pub fn check_tangency(
    field: &FieldDef,
    region: &Region,
    inputs: &EulerInputs,
    opts: &VerifyOptions,
) -> Result<VerifyReport, VerifyError> {
    if region.dim() != 2 {
        return Err(VerifyError::Input(
            "tangency applies to planar blocks only".into(),
        ));
    }
    let mut a = Analysis::new(field, region, inputs, opts);
    let mut rep = VerifyReport::new(CheckId::Tangency, field, region, inputs, Relation::Equal);
    let b = a.boundary()?;
    rep.boundary = Some(BoundarySummary::of(b));
    let t = tangency_components_2d(b)?;
    let chi_n = a.chi_n();
    rep.euler.chi_n = Some(chi_n.clone());
    if !t.reliable {
        return Ok(rep.inconclusive("a boundary loop is tangent at every sample; count unreliable"));
    }
    let d = a.degree()?;
    rep.compare(t.count as i64, 2 * (chi_n.value - d.degree));
    rep.degree = Some(d);
    Ok(rep)
}

/// Non-saddle blocks: `I = χ(N)` for even n; for odd n both sign
/// conventions `½(χ(S) − χ(S*))` and `½(χ(S*) − χ(S))` are evaluated, and
/// the check compares the index with the former.
pub fn check_nonsaddle(
    field: &FieldDef,
    region: &Region,
    inputs: &EulerInputs,
    opts: &VerifyOptions,
) -> Result<VerifyReport, VerifyError> {
    let mut a = Analysis::new(field, region, inputs, opts);
    let mut rep = VerifyReport::new(CheckId::Nonsaddle, field, region, inputs, Relation::Equal);
    let b = a.boundary()?;
    rep.boundary = Some(BoundarySummary::of(b));
    if !b.is_uniform() {
        return Ok(
            rep.inconclusive("a boundary component is mixed; the block is not of non-saddle form")
        );
    }
    let chi_n = a.chi_n();
    rep.euler.chi_n = Some(chi_n.clone());
    let d = a.degree()?;
    let index = d.degree;
    if region.dim().is_multiple_of(2) {
        rep.compare(index, chi_n.value);
        rep.degree = Some(d);
        return Ok(rep);
    }
    let (s, s_star) = a.chi_sections()?;
    rep.euler.chi_s = s.clone();
    rep.euler.chi_s_star = s_star.clone();
    let (Some(s), Some(s_star)) = (s, s_star) else {
        return Ok(rep.inconclusive("χ(S) and χ(S*) are needed"));
    };
    if (s.value - s_star.value) % 2 != 0 {
        return Ok(rep.inconclusive("χ(S) − χ(S*) is odd; the half-difference is not an integer"));
    }
    let forward = (s.value - s_star.value) / 2;
    let backward = -forward;
    rep.sign_audit = Some(SignAudit {
        exit_minus_entry: forward,
        entry_minus_exit: backward,
        oracle: index,
        exit_minus_entry_matches: forward == index,
        entry_minus_exit_matches: backward == index,
    });
    rep.notes.push(format!(
        "½(χS − χS*) = {}, ½(χS* − χS) = {}, degree oracle = {}",
        forward, backward, index
    ));
    rep.compare(index, forward);
    rep.degree = Some(d);
    Ok(rep)
}

/// Connecting orbits in an attractor–repeller decomposition `{A, R}` of K:
/// `deg(F, N) ≠ (−1)ⁿ(χ(A) + χ(R) − χ(S))` proves a connection exists;
/// with χ(K) known, `χ(C) = χ(A) + χ(R) − χ(K)`.
pub fn detect_connection(
    field: &FieldDef,
    region: &Region,
    inputs: &EulerInputs,
    opts: &VerifyOptions,
) -> Result<VerifyReport, VerifyError> {
    let mut a = Analysis::new(field, region, inputs, opts);
    let mut rep = VerifyReport::new(
        CheckId::Connection,
        field,
        region,
        inputs,
        Relation::NotEqual,
    );
    let (Some(ca), Some(cr)) = (inputs.chi_a, inputs.chi_r) else {
        return Err(VerifyError::Input("connection needs χ(A) and χ(R)".into()));
    };
    rep.euler.chi_a = Some(EulerEntry::supplied(ca));
    rep.euler.chi_r = Some(EulerEntry::supplied(cr));
    if let Some(k) = inputs.chi_k {
        rep.euler.chi_k = Some(EulerEntry::supplied(k));
        rep.chi_c = Some(ca + cr - k);
    }
    let chi_s = match inputs.chi_s {
        Some(v) => Some(EulerEntry::supplied(v)),
        None => {
            rep.boundary = Some(BoundarySummary::of(a.boundary()?));
            a.chi_sections()?.0
        }
    };
    rep.euler.chi_s = chi_s.clone();
    let Some(s) = chi_s else {
        return Ok(rep.inconclusive("χ(S) is needed; supply it for blocks with mixed boundary"));
    };
    let d = a.degree()?;
    let sum = ca + cr - s.value;
    rep.notes
        .push(format!("χA + χR − χS = {} (without the (−1)ⁿ factor)", sum));
    rep.compare(d.degree, sign_n(region.dim()) * sum);
    rep.conclusion = Some(match rep.verdict {
        Verdict::Pass => "connection exists".into(),
        _ => "criterion silent".into(),
    });
    rep.degree = Some(d);
    Ok(rep)
}

/// Searches ∂N for a point where F(x) and F(−x) are parallel (same mode)
/// or antiparallel (opposite mode). The mode comes from the options or
/// from the parity of χ(K) and χ(S).
pub fn check_antipodal(
    field: &FieldDef,
    region: &Region,
    inputs: &EulerInputs,
    opts: &VerifyOptions,
) -> Result<VerifyReport, VerifyError> {
    let mut a = Analysis::new(field, region, inputs, opts);
    let mut rep = VerifyReport::new(CheckId::Antipodal, field, region, inputs, Relation::Exists);
    let parity = match (inputs.chi_k, inputs.chi_s) {
        (Some(k), Some(s)) => Some((k, s)),
        _ if a.uniform().unwrap_or(false) => {
            let k = a.chi_k()?.map(|e| e.value);
            let s = a.chi_sections()?.0.map(|e| e.value);
            k.zip(s)
        }
        _ => None,
    };
    if let Some((k, s)) = parity {
        rep.euler.chi_k = Some(EulerEntry::supplied(k));
        rep.euler.chi_s = Some(EulerEntry::supplied(s));
        if inputs.chi_k.is_none() || inputs.chi_s.is_none() {
            rep.euler.chi_k = a.chi_k()?;
            rep.euler.chi_s = a.chi_sections()?.0;
        }
    }
    let guaranteed = parity.map(|(k, s)| parity_mode(k, s));
    let mode = match (opts.antipodal_mode, guaranteed) {
        (Some(m), _) => m,
        (None, Some(m)) => m,
        (None, None) => {
            return Err(VerifyError::Input(
                "antipodal needs a mode or χ(K) and χ(S) to derive it from parity".into(),
            ))
        }
    };
    if let Some(g) = guaranteed {
        rep.notes
            .push(format!("parity rule selects the {} mode", g));
    }
    let res = antipodal_search(field, region, mode, opts.antipodal_tol)?;
    rep.verdict = if res.found {
        Verdict::Pass
    } else if guaranteed == Some(mode) {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    rep.conclusion = Some(if res.found {
        format!("{} direction at x and −x", mode)
    } else {
        "no point found".into()
    });
    rep.antipodal = Some(res);
    Ok(rep)
}

/// Runs a check by id.
pub fn run_check(
    id: CheckId,
    field: &FieldDef,
    region: &Region,
    inputs: &EulerInputs,
    opts: &VerifyOptions,
) -> Result<VerifyReport, VerifyError> {
    match id {
        CheckId::Conley => check_degree_conley(field, region, inputs, opts),
        CheckId::Eq1 => check_eq1(field, region, inputs, opts),
        CheckId::PlanarBound => check_planar_bound(field, region, inputs, opts),
        CheckId::PoincareHopf => check_poincare_hopf(field, region, inputs, opts),
        CheckId::Tangency => check_tangency(field, region, inputs, opts),
        CheckId::Nonsaddle => check_nonsaddle(field, region, inputs, opts),
        CheckId::Connection => detect_connection(field, region, inputs, opts),
        CheckId::Antipodal => check_antipodal(field, region, inputs, opts),
    }
}
