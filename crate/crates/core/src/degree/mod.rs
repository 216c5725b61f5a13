//! Brouwer degree of a field over a region by boundary winding (ℝ²), the
//! Kronecker integral (ℝ³) and signed zero counting (any dimension), with
//! cross-validation between methods.

mod quadrature;
mod zeros;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use quadrature::gauss_legendre;
pub use zeros::Zero;

use crate::block::{cross, dist, BlockError, Patch, PatchKind, Piece, Region};
use crate::field::{FieldDef, FieldError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DegreeError {
    #[error(transparent)]
    Block(#[from] BlockError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("{method} degree needs dimension {needs}, got {found}")]
    Dimension {
        method: Method,
        needs: usize,
        found: usize,
    },
    #[error(
        "field (nearly) vanishes on the boundary at {point:?}: |F| = {norm:e} against max {max:e}"
    )]
    BoundaryZero {
        point: Vec<f64>,
        norm: f64,
        max: f64,
    },
    #[error(
        "quadrature did not settle on an integer after {levels} refinements (values {values:?})"
    )]
    NonConvergent { levels: usize, values: Vec<f64> },
    #[error("degenerate zero at {point:?}: |det DF| = {det_abs:e}; its index is not defined by the Jacobian")]
    DegenerateZero { point: Vec<f64>, det_abs: f64 },
    #[error("zero at {point:?} lies on the region boundary")]
    ZeroOnBoundary { point: Vec<f64> },
    #[error("methods disagree: {boundary_method} gives {boundary} (raw {raw}), zero count gives {zeros}")]
    Disagreement {
        boundary_method: Method,
        boundary: i64,
        raw: f64,
        zeros: i64,
    },
    #[error("another zero at {point:?} lies within the index ball")]
    OtherZero { point: Vec<f64> },
    #[error("field has dimension {field}, region has dimension {region}")]
    DimensionMismatch { field: usize, region: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl DegreeError {
    /// Whether the error stems from the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        match self {
            DegreeError::Block(BlockError::BoundaryZero { .. }) => true,
            DegreeError::Field(FieldError::Domain { .. }) => true,
            DegreeError::Block(_)
            | DegreeError::Field(_)
            | DegreeError::Dimension { .. }
            | DegreeError::DimensionMismatch { .. }
            | DegreeError::InvalidArgument(_) => false,
            _ => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Winding,
    Kronecker,
    Zeros,
    Auto,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Winding => "winding",
            Method::Kronecker => "kronecker",
            Method::Zeros => "zeros",
            Method::Auto => "auto",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Method, String> {
        match s {
            "winding" => Ok(Method::Winding),
            "kronecker" => Ok(Method::Kronecker),
            "zeros" => Ok(Method::Zeros),
            "auto" => Ok(Method::Auto),
            _ => Err(format!(
                "unknown method `{}` (winding, kronecker, zeros, auto)",
                s
            )),
        }
    }
}

/// Tunables, with the documented defaults.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
#[serde(default)]
pub struct DegreeOptions {
    /// Residual bound `|F(z)|` for accepting a Newton limit.
    pub newton_tol: f64,
    /// Newton seeds per axis; dimension-dependent when absent.
    pub seeds_per_axis: Option<usize>,
    /// Two successive quadrature levels must differ by less than this.
    pub quad_agreement: f64,
    pub max_refinements: usize,
    /// Base `(θ, φ)` grid on spheres.
    pub sphere_grid: (usize, usize),
    /// Base per-face grid on flat faces.
    pub face_grid: usize,
    /// Base samples per planar boundary loop for the winding number.
    pub winding_samples: usize,
    /// Merge radius as a fraction of the region diameter.
    pub merge_ratio: f64,
    /// `|det DF| / sⁿ` below this marks a degenerate zero.
    pub degeneracy: f64,
    /// `min |F| < ratio · max |F|` on the boundary counts as a boundary zero.
    pub boundary_zero_ratio: f64,
}

impl Default for DegreeOptions {
    fn default() -> Self {
        DegreeOptions {
            newton_tol: 1e-10,
            seeds_per_axis: None,
            quad_agreement: 0.05,
            max_refinements: 6,
            sphere_grid: (128, 256),
            face_grid: 64,
            winding_samples: 256,
            merge_ratio: 1e-6,
            degeneracy: 1e-10,
            boundary_zero_ratio: 1e-8,
        }
    }
}

impl DegreeOptions {
    fn seeds_for(&self, n: usize) -> usize {
        self.seeds_per_axis.unwrap_or(match n {
            1 => 64,
            2 => 24,
            3 => 12,
            4 => 6,
            _ => 4,
        })
    }
}

/// Agreement between the boundary method and the zero count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheck {
    pub boundary_method: Method,
    pub boundary_degree: i64,
    pub zeros_degree: Option<i64>,
    pub agree: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeReport {
    pub method: Method,
    pub raw: f64,
    pub degree: i64,
    /// Quadrature doublings beyond the base grid.
    pub refinements: usize,
    pub zeros: Vec<Zero>,
    /// Smallest `|F|` seen on the boundary (boundary methods only).
    pub min_boundary_norm: Option<f64>,
    pub cross_check: Option<CrossCheck>,
    pub warnings: Vec<String>,
}

impl DegreeReport {
    fn new(method: Method, raw: f64, degree: i64) -> Self {
        DegreeReport {
            method,
            raw,
            degree,
            refinements: 0,
            zeros: Vec::new(),
            min_boundary_norm: None,
            cross_check: None,
            warnings: Vec::new(),
        }
    }
}

fn check_dims(field: &FieldDef, region: &Region) -> Result<(), DegreeError> {
    if field.dim() != region.dim() {
        return Err(DegreeError::DimensionMismatch {
            field: field.dim(),
            region: region.dim(),
        });
    }
    Ok(())
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Tracks the smallest and largest `|F|` seen on the boundary.
#[derive(Debug, Clone)]
struct NormRange {
    min: f64,
    argmin: Vec<f64>,
    max: f64,
}

impl NormRange {
    fn new() -> Self {
        NormRange {
            min: f64::INFINITY,
            argmin: Vec::new(),
            max: 0.0,
        }
    }

    fn see(&mut self, p: &[f64], v: f64) {
        if v < self.min {
            self.min = v;
            self.argmin = p.to_vec();
        }
        self.max = self.max.max(v);
    }

    fn merge(mut self, o: NormRange) -> NormRange {
        if o.min < self.min {
            self.min = o.min;
            self.argmin = o.argmin;
        }
        self.max = self.max.max(o.max);
        self
    }

    fn check(&self, ratio: f64) -> Result<(), DegreeError> {
        if !(self.min > ratio * self.max) {
            return Err(DegreeError::BoundaryZero {
                point: self.argmin.clone(),
                norm: self.min,
                max: self.max,
            });
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Winding number.

/// Signed angle from `a` to `b` in `(−π, π]`.
fn angle(a: &[f64], b: &[f64]) -> f64 {
    (a[0] * b[1] - a[1] * b[0]).atan2(a[0] * b[0] + a[1] * b[1])
}

struct Walker<'a> {
    field: &'a FieldDef,
    piece: &'a Piece,
    range: NormRange,
}

const MAX_BISECTION_DEPTH: usize = 48;

impl Walker<'_> {
    fn eval(&mut self, s: f64) -> Result<Vec<f64>, DegreeError> {
        let p = self.piece.point(s);
        let v = self.field.eval(&p)?;
        self.range.see(&p, norm(&v));
        Ok(v)
    }

    /// Angle swept by F over `[s0, s1]`, bisecting until each step turns by
    /// less than π/2 and agrees with its two halves.
    fn sweep(
        &mut self,
        s0: f64,
        f0: &[f64],
        s1: f64,
        f1: &[f64],
        depth: usize,
    ) -> Result<f64, DegreeError> {
        let whole = angle(f0, f1);
        let mid = 0.5 * (s0 + s1);
        let fm = self.eval(mid)?;
        let (a, b) = (angle(f0, &fm), angle(&fm, f1));
        if whole.abs() < FRAC_PI_2 && (a + b - whole).abs() < 1e-9 {
            return Ok(whole);
        }
        if depth >= MAX_BISECTION_DEPTH {
            let p = self.piece.point(mid);
            return Err(DegreeError::BoundaryZero {
                point: p.to_vec(),
                norm: norm(&fm),
                max: self.range.max,
            });
        }
        Ok(self.sweep(s0, f0, mid, &fm, depth + 1)? + self.sweep(mid, &fm, s1, f1, depth + 1)?)
    }
}

/// Degree over a planar region from the total turning of F along the
/// oriented boundary.
pub fn winding_degree(
    field: &FieldDef,
    region: &Region,
    opts: &DegreeOptions,
) -> Result<DegreeReport, DegreeError> {
    check_dims(field, region)?;
    if region.dim() != 2 {
        return Err(DegreeError::Dimension {
            method: Method::Winding,
            needs: 2,
            found: region.dim(),
        });
    }
    let loops = region.loops()?;
    let mut total = 0.0;
    let mut range = NormRange::new();
    for lp in &loops {
        let len = lp.length();
        for piece in &lp.pieces {
            let m = ((opts.winding_samples as f64 * piece.length() / len).ceil() as usize).max(8);
            let mut w = Walker {
                field,
                piece,
                range: NormRange::new(),
            };
            let mut prev = w.eval(0.0)?;
            for i in 1..=m {
                let s = i as f64 / m as f64;
                let cur = w.eval(s)?;
                total += w.sweep((i - 1) as f64 / m as f64, &prev, s, &cur, 0)?;
                prev = cur;
            }
            range = range.merge(w.range);
        }
    }
    range.check(opts.boundary_zero_ratio)?;
    let raw = total / TAU;
    let mut rep = DegreeReport::new(Method::Winding, raw, raw.round() as i64);
    rep.min_boundary_norm = Some(range.min);
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Kronecker integral.

/// `F · (DF·Xs × DF·Xt) / |F|³` at a patch point.
fn kronecker_integrand(
    field: &FieldDef,
    patch: &Patch,
    s: f64,
    t: f64,
    range: &mut NormRange,
) -> Result<f64, DegreeError> {
    let (x, xs, xt) = patch.frame(s, t);
    let jet = field.jacobian(&x)?;
    let f = [jet.value[0], jet.value[1], jet.value[2]];
    let j = &jet.jacobian;
    let a = [0, 1, 2].map(|r| j[(r, 0)] * xs[0] + j[(r, 1)] * xs[1] + j[(r, 2)] * xs[2]);
    let b = [0, 1, 2].map(|r| j[(r, 0)] * xt[0] + j[(r, 1)] * xt[1] + j[(r, 2)] * xt[2]);
    let c = cross(&a, &b);
    let nf = norm(&f);
    range.see(&x, nf);
    Ok((f[0] * c[0] + f[1] * c[1] + f[2] * c[2]) / (nf * nf * nf))
}

/// Integral of the Kronecker integrand over one patch at grid `(ns, nt)`.
fn patch_integral(
    field: &FieldDef,
    patch: &Patch,
    ns: usize,
    nt: usize,
) -> Result<(f64, NormRange), DegreeError> {
    let (xs, ws) = gauss_legendre(ns);
    // Periodic direction of spheres: the trapezoid rule is spectrally accurate.
    let (xt, wt) = match patch.kind {
        PatchKind::Sphere { .. } => (
            (0..nt).map(|j| j as f64 / nt as f64).collect(),
            vec![1.0 / nt as f64; nt],
        ),
        PatchKind::Rect { .. } => gauss_legendre(nt),
    };
    let rows: Vec<Result<(f64, NormRange), DegreeError>> = (0..ns)
        .into_par_iter()
        .map(|i| {
            let mut range = NormRange::new();
            let mut acc = 0.0;
            for j in 0..xt.len() {
                acc += wt[j] * kronecker_integrand(field, patch, xs[i], xt[j], &mut range)?;
            }
            Ok((ws[i] * acc, range))
        })
        .collect();
    // Sequential reduction keeps the sum independent of scheduling.
    let mut total = 0.0;
    let mut range = NormRange::new();
    for r in rows {
        let (v, rg) = r?;
        total += v;
        range = range.merge(rg);
    }
    Ok((total, range))
}

fn patch_grid(
    patch: &Patch,
    component_area: f64,
    opts: &DegreeOptions,
    level: usize,
) -> (usize, usize) {
    let scale = 1usize << level;
    match patch.kind {
        PatchKind::Sphere { .. } => (opts.sphere_grid.0 * scale, opts.sphere_grid.1 * scale),
        PatchKind::Rect { .. } => {
            let k = (opts.face_grid as f64 * (6.0 * patch.area() / component_area).sqrt()).ceil()
                as usize;
            let k = k.clamp(4, opts.face_grid) * scale;
            (k, k)
        }
    }
}

/// Degree over a region of ℝ³ as the Kronecker integral
/// `(1/4π) ∬ F·(∂sF × ∂tF)/|F|³ ds dt` over its boundary, refined by grid
/// doubling until two successive values agree on an integer.
pub fn kronecker_degree(
    field: &FieldDef,
    region: &Region,
    opts: &DegreeOptions,
) -> Result<DegreeReport, DegreeError> {
    check_dims(field, region)?;
    if region.dim() != 3 {
        return Err(DegreeError::Dimension {
            method: Method::Kronecker,
            needs: 3,
            found: region.dim(),
        });
    }
    let patches = region.patches()?;
    let mut comp_area = std::collections::BTreeMap::new();
    for p in &patches {
        *comp_area.entry(p.component).or_insert(0.0) += p.area();
    }
    let mut values = Vec::new();
    let mut min_norm = f64::INFINITY;
    for level in 0..=opts.max_refinements {
        let mut total = 0.0;
        let mut range = NormRange::new();
        for p in &patches {
            let (ns, nt) = patch_grid(p, comp_area[&p.component], opts, level);
            let (v, rg) = patch_integral(field, p, ns, nt)?;
            total += v;
            range = range.merge(rg);
        }
        range.check(opts.boundary_zero_ratio)?;
        min_norm = min_norm.min(range.min);
        let raw = total / (4.0 * PI);
        values.push(raw);
        if let [.., a, b] = values[..] {
            if (a - b).abs() < opts.quad_agreement
                && a.round() == b.round()
                && (b - b.round()).abs() < 0.5
            {
                let mut rep = DegreeReport::new(Method::Kronecker, b, b.round() as i64);
                rep.refinements = level;
                rep.min_boundary_norm = Some(min_norm);
                return Ok(rep);
            }
        }
    }
    Err(DegreeError::NonConvergent {
        levels: opts.max_refinements,
        values,
    })
}

// ---------------------------------------------------------------------------
// Zero counting.

/// Where a point sits relative to the region, up to the merge radius.
enum Placement {
    Interior,
    Boundary,
    Exterior,
}

fn placement(region: &Region, p: &[f64], merge: f64) -> Placement {
    match region.signed_distance(p) {
        Some(d) if d < -merge => Placement::Interior,
        Some(d) if d <= merge => Placement::Boundary,
        Some(_) => Placement::Exterior,
        None => {
            let probes_in = (0..p.len())
                .flat_map(|i| [-merge, merge].map(move |e| (i, e)))
                .all(|(i, e)| {
                    let mut q = p.to_vec();
                    q[i] += e;
                    region.contains(&q)
                });
            if probes_in {
                Placement::Interior
            } else if region.contains(p) {
                Placement::Boundary
            } else {
                Placement::Exterior
            }
        }
    }
}

/// Degree as the sum of `sign det DF` over the zeros of F in the region,
/// located by Newton iteration from a grid of seeds.
pub fn zero_count_degree(
    field: &FieldDef,
    region: &Region,
    opts: &DegreeOptions,
) -> Result<DegreeReport, DegreeError> {
    check_dims(field, region)?;
    if !(opts.newton_tol > 0.0) {
        return Err(DegreeError::InvalidArgument(
            "newton tolerance must be positive".into(),
        ));
    }
    let n = region.dim();
    let diam = region.diameter();
    let merge = opts.merge_ratio * diam;
    let seeds = zeros::seeds(region, opts.seeds_for(n));
    let center = region.center();
    let found = zeros::find_zeros(
        field,
        &seeds,
        opts.newton_tol,
        merge,
        (&center, 10.0 * diam),
    );
    let mut rep = DegreeReport::new(Method::Zeros, 0.0, 0);
    for z in found {
        match placement(region, &z.point, merge) {
            Placement::Exterior => continue,
            Placement::Boundary => return Err(DegreeError::ZeroOnBoundary { point: z.point }),
            Placement::Interior => {}
        }
        if z.degenerate(opts.degeneracy) {
            return Err(DegreeError::DegenerateZero {
                point: z.point,
                det_abs: z.det.abs(),
            });
        }
        let index = if z.det > 0.0 { 1 } else { -1 };
        rep.degree += index;
        rep.zeros.push(Zero {
            point: z.point,
            index,
            residual: z.residual,
            det_abs: z.det.abs(),
        });
    }
    rep.raw = rep.degree as f64;
    Ok(rep)
}

/// Index of an isolated zero `z`: the degree over the ball of the given
/// radius, after checking that no other zero lies in that ball.
pub fn point_index(
    field: &FieldDef,
    z: &[f64],
    radius: f64,
    opts: &DegreeOptions,
) -> Result<DegreeReport, DegreeError> {
    if z.len() != field.dim() {
        return Err(DegreeError::DimensionMismatch {
            field: field.dim(),
            region: z.len(),
        });
    }
    let ball = Region::ball(z.to_vec(), radius)?;
    let n = field.dim();
    let merge = opts.merge_ratio * ball.diameter();
    let seeds = zeros::seeds(&ball, opts.seeds_for(n));
    let found = zeros::find_zeros(field, &seeds, opts.newton_tol, merge, (z, 10.0 * radius));
    // Newton converges only linearly to degenerate zeros, so limits are
    // matched to z with a looser radius.
    let same = 1e-4 * radius;
    let mut warnings = Vec::new();
    for c in &found {
        if dist(&c.point, z) > same && ball.contains(&c.point) {
            return Err(DegreeError::OtherZero {
                point: c.point.clone(),
            });
        }
    }
    let fz = field.eval(z)?;
    if norm(&fz) >= opts.newton_tol {
        warnings.push(format!(
            "|F(z)| = {:e} is not below the Newton tolerance; z is not a zero",
            norm(&fz)
        ));
    }
    let mut rep = match n {
        2 => winding_degree(field, &ball, opts)?,
        3 => kronecker_degree(field, &ball, opts)?,
        _ => {
            let jet = field.jacobian(z)?;
            let scale = jet.jacobian.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            let det = jet.jacobian.determinant();
            if det.abs() / scale.powi(n as i32) < opts.degeneracy {
                return Err(DegreeError::DegenerateZero {
                    point: z.to_vec(),
                    det_abs: det.abs(),
                });
            }
            let idx = if det > 0.0 { 1 } else { -1 };
            DegreeReport::new(Method::Zeros, idx as f64, idx)
        }
    };
    rep.zeros = found
        .into_iter()
        .filter(|c| ball.contains(&c.point))
        .map(|c| Zero {
            index: if c.degenerate(opts.degeneracy) {
                rep.degree
            } else if c.det > 0.0 {
                1
            } else {
                -1
            },
            point: c.point,
            residual: c.residual,
            det_abs: c.det.abs(),
        })
        .collect();
    rep.warnings.extend(warnings);
    Ok(rep)
}

/// Boundary method for the dimension, if any.
pub fn boundary_method(n: usize) -> Option<Method> {
    match n {
        2 => Some(Method::Winding),
        3 => Some(Method::Kronecker),
        _ => None,
    }
}

/// Degree by the requested method. `Auto` runs the boundary method of the
/// dimension together with the zero count and fails if they disagree; a
/// degenerate zero only downgrades the cross-check to a warning.
pub fn degree(
    field: &FieldDef,
    region: &Region,
    method: Method,
    opts: &DegreeOptions,
) -> Result<DegreeReport, DegreeError> {
    match method {
        Method::Winding => winding_degree(field, region, opts),
        Method::Kronecker => kronecker_degree(field, region, opts),
        Method::Zeros => zero_count_degree(field, region, opts),
        Method::Auto => {
            check_dims(field, region)?;
            let Some(bm) = boundary_method(region.dim()) else {
                let mut rep = zero_count_degree(field, region, opts)?;
                rep.warnings.push(format!(
                    "no boundary method in dimension {}; zero count only",
                    region.dim()
                ));
                return Ok(rep);
            };
            let mut rep = degree(field, region, bm, opts)?;
            match zero_count_degree(field, region, opts) {
                Ok(z) => {
                    if z.degree != rep.degree {
                        return Err(DegreeError::Disagreement {
                            boundary_method: bm,
                            boundary: rep.degree,
                            raw: rep.raw,
                            zeros: z.degree,
                        });
                    }
                    rep.cross_check = Some(CrossCheck {
                        boundary_method: bm,
                        boundary_degree: rep.degree,
                        zeros_degree: Some(z.degree),
                        agree: Some(true),
                    });
                    rep.zeros = z.zeros;
                }
                Err(DegreeError::DegenerateZero { point, det_abs }) => {
                    rep.warnings.push(format!(
                        "zero count skipped: degenerate zero at {:?} (|det DF| = {:e})",
                        point, det_abs
                    ));
                    rep.cross_check = Some(CrossCheck {
                        boundary_method: bm,
                        boundary_degree: rep.degree,
                        zeros_degree: None,
                        agree: None,
                    });
                }
                Err(e) => return Err(e),
            }
            Ok(rep)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{catalog, parse_field};
    use std::collections::BTreeMap;

    fn cat(name: &str) -> FieldDef {
        catalog(name, &BTreeMap::new()).unwrap()
    }

    fn region(s: &str) -> Region {
        s.parse().unwrap()
    }

    fn opts() -> DegreeOptions {
        DegreeOptions::default()
    }

    #[test]
    fn winding_examples() {
        let w = |f: &str, r: &str| winding_degree(&cat(f), &region(r), &opts()).unwrap();
        assert_eq!(w("attractor(2)", "ball:0,0:1").degree, 1);
        assert_eq!(w("saddle2", "ball:0,0:1").degree, -1);
        assert_eq!(w("limit_cycle", "shell:0,0:0.5:1.5").degree, 0);
        assert_eq!(w("even_field", "ball:0,0:1").degree, 2);
        assert_eq!(w("saddle2", "box:-1,-1:1,1").degree, -1);
        let r = w("repeller(2)", "ball:0.3,0.2:2");
        assert!((r.raw - 1.0).abs() < 1e-9);
    }

    #[test]
    fn winding_on_cube_region() {
        let c =
            Region::cubes(crate::cubical::rasterize(&region("shell:0,0:0.5:1.5"), 0.2)).unwrap();
        assert_eq!(
            winding_degree(&cat("limit_cycle"), &c, &opts())
                .unwrap()
                .degree,
            0
        );
        let d = Region::cubes(crate::cubical::rasterize(&region("ball:0,0:1"), 0.2)).unwrap();
        assert_eq!(
            winding_degree(&cat("saddle2"), &d, &opts()).unwrap().degree,
            -1
        );
    }

    #[test]
    fn winding_detects_boundary_zero() {
        let e = winding_degree(&cat("saddle2"), &region("ball:1,0:1"), &opts());
        assert!(
            matches!(e, Err(DegreeError::BoundaryZero { .. })),
            "{:?}",
            e
        );
    }

    #[test]
    fn kronecker_examples() {
        let k = |f: &str, r: &str| kronecker_degree(&cat(f), &region(r), &opts()).unwrap();
        assert_eq!(k("attractor(3)", "ball:0,0,0:1").degree, -1);
        assert_eq!(k("repeller(3)", "ball:0,0,0:1").degree, 1);
        assert_eq!(k("repeller(3)", "box:-1,-2,-1:2,1,1").degree, 1);
        assert_eq!(k("repeller(3)", "shell:0,0,0:0.5:1").degree, 0);
        let r = k("attractor(3)", "ball:0.1,0.2,0.3:2");
        assert!((r.raw + 1.0).abs() < 1e-6, "{}", r.raw);
    }

    #[test]
    fn kronecker_on_cube_region() {
        let c = Region::cubes(crate::cubical::rasterize(&region("ball:0,0,0:1"), 0.5)).unwrap();
        assert_eq!(
            kronecker_degree(&cat("attractor(3)"), &c, &opts())
                .unwrap()
                .degree,
            -1
        );
    }

    #[test]
    fn zero_count_examples() {
        let z = zero_count_degree(&cat("repeller(2)"), &region("ball:0,0:1"), &opts()).unwrap();
        assert_eq!(z.degree, 1);
        assert_eq!(z.zeros.len(), 1);
        assert_eq!(z.zeros[0].index, 1);
        let f = parse_field("x^2, y", 2, &BTreeMap::new()).unwrap();
        let e = zero_count_degree(&f, &region("ball:0,0:1"), &opts());
        match e {
            Err(DegreeError::DegenerateZero { point, .. }) => assert!(norm(&point) < 1e-5),
            other => panic!("{:?}", other),
        }
        let s = zero_count_degree(&cat("segment_flow"), &region("box:-2,-1:2,1"), &opts()).unwrap();
        assert_eq!(s.degree, 0);
        assert_eq!(s.zeros.len(), 2);
        let four =
            zero_count_degree(&cat("attractor(4)"), &region("ball:0,0,0,0:1"), &opts()).unwrap();
        assert_eq!(four.degree, 1);
    }

    #[test]
    fn zero_on_boundary_is_an_error() {
        let e = zero_count_degree(&cat("segment_flow"), &region("box:-1,-1:1,1"), &opts());
        assert!(
            matches!(e, Err(DegreeError::ZeroOnBoundary { .. })),
            "{:?}",
            e
        );
    }

    #[test]
    fn point_index_examples() {
        let p = |f: &str, z: &[f64]| point_index(&cat(f), z, 1.0, &opts()).unwrap().degree;
        assert_eq!(p("saddle2", &[0.0, 0.0]), -1);
        assert_eq!(p("attractor(3)", &[0.0, 0.0, 0.0]), -1);
        assert_eq!(p("even_field", &[0.0, 0.0]), 2);
        assert_eq!(p("attractor(5)", &[0.0; 5]), -1);
        let e = point_index(&cat("segment_flow"), &[1.0, 0.0], 2.5, &opts());
        assert!(matches!(e, Err(DegreeError::OtherZero { .. })), "{:?}", e);
    }

    #[test]
    fn auto_cross_checks() {
        let a = degree(
            &cat("saddle2"),
            &region("ball:0,0:1"),
            Method::Auto,
            &opts(),
        )
        .unwrap();
        assert_eq!(a.method, Method::Winding);
        assert_eq!(a.cross_check.as_ref().unwrap().agree, Some(true));
        let l = degree(
            &cat("limit_cycle"),
            &region("shell:0,0:0.5:1.5"),
            Method::Auto,
            &opts(),
        )
        .unwrap();
        assert_eq!(l.degree, 0);
        assert!(l.zeros.is_empty());
        let e = degree(
            &cat("even_field"),
            &region("ball:0,0:1"),
            Method::Auto,
            &opts(),
        )
        .unwrap();
        assert_eq!(e.degree, 2);
        assert_eq!(e.cross_check.unwrap().agree, None);
        assert_eq!(e.warnings.len(), 1);
    }

    #[test]
    fn method_names_round_trip() {
        for m in [
            Method::Winding,
            Method::Kronecker,
            Method::Zeros,
            Method::Auto,
        ] {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
    }
}
