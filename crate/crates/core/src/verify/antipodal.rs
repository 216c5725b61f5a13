//! Boundary points where a field and its antipodal image are parallel.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::VerifyError;
use crate::block::{BlockError, Patch, PatchKind, Piece, Region};
use crate::field::FieldDef;

/// Whether `F(x)` and `F(−x)` are sought pointing the same way or opposite ways.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AntipodalMode {
    Same,
    Opposite,
}

impl fmt::Display for AntipodalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AntipodalMode::Same => "same",
            AntipodalMode::Opposite => "opposite",
        })
    }
}

impl FromStr for AntipodalMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "same" => Ok(AntipodalMode::Same),
            "opposite" => Ok(AntipodalMode::Opposite),
            _ => Err(format!(
                "unknown antipodal mode `{}` (expected same or opposite)",
                s
            )),
        }
    }
}

/// Equal parity of χ(K) and χ(S) guarantees a same-direction point;
/// different parity guarantees an opposite-direction point.
pub fn parity_mode(chi_k: i64, chi_s: i64) -> AntipodalMode {
    if (chi_k - chi_s).rem_euclid(2) == 0 {
        AntipodalMode::Same
    } else {
        AntipodalMode::Opposite
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AntipodalResult {
    pub found: bool,
    pub mode: AntipodalMode,
    /// Best boundary point.
    pub point: Vec<f64>,
    /// `|F(x)/|F(x)| − F(−x)/|F(−x)||` (same) or with `+` (opposite).
    pub residual: f64,
    pub tolerance: f64,
    pub samples: usize,
}

const PLANAR_SAMPLES: usize = 512;
const SURFACE_SAMPLES: usize = 10_000;
const POLISH_CANDIDATES: usize = 8;
const LM_ITERS: usize = 200;

/// A parameterized piece of the boundary.
enum Chart<'a> {
    Curve(&'a Piece),
    Surface(&'a Patch),
}

impl Chart<'_> {
    fn params(&self) -> usize {
        match self {
            Chart::Curve(_) => 1,
            Chart::Surface(_) => 2,
        }
    }

    /// Full circles and spheres are periodic; other parameters are clamped.
    fn normalize(&self, p: &mut [f64]) {
        match self {
            Chart::Curve(piece) => {
                if !piece.is_closed() {
                    p[0] = p[0].clamp(0.0, 1.0);
                }
            }
            Chart::Surface(patch) => {
                if let PatchKind::Rect { .. } = patch.kind {
                    p[0] = p[0].clamp(0.0, 1.0);
                    p[1] = p[1].clamp(0.0, 1.0);
                }
            }
        }
    }

    fn point(&self, p: &[f64]) -> Vec<f64> {
        match self {
            Chart::Curve(piece) => piece.point(p[0]).to_vec(),
            Chart::Surface(patch) => patch.frame(p[0], p[1]).0.to_vec(),
        }
    }
}

fn unit(field: &FieldDef, x: &[f64]) -> Result<Vec<f64>, VerifyError> {
    let v = field.eval(x)?;
    let l = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if !(l > 0.0) || !l.is_finite() {
        return Err(VerifyError::Block(BlockError::BoundaryZero {
            point: x.to_vec(),
            norm: l,
        }));
    }
    Ok(v.into_iter().map(|a| a / l).collect())
}

fn residual_vec(field: &FieldDef, x: &[f64], mode: AntipodalMode) -> Result<Vec<f64>, VerifyError> {
    let neg: Vec<f64> = x.iter().map(|a| -a).collect();
    let u = unit(field, x)?;
    let w = unit(field, &neg)?;
    let s = match mode {
        AntipodalMode::Same => -1.0,
        AntipodalMode::Opposite => 1.0,
    };
    Ok(u.iter().zip(&w).map(|(a, b)| a + s * b).collect())
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// Levenberg–Marquardt on the chart parameters with a forward-difference
/// Jacobian. Returns the polished parameters and residual norm.
fn polish(
    field: &FieldDef,
    chart: &Chart,
    start: Vec<f64>,
    mode: AntipodalMode,
    target: f64,
) -> Result<(Vec<f64>, f64), VerifyError> {
    let d = chart.params();
    let eval = |p: &[f64]| residual_vec(field, &chart.point(p), mode);
    let mut p = start;
    let mut r = eval(&p)?;
    let mut rn = norm(&r);
    let mut lambda = 1e-3;
    for _ in 0..LM_ITERS {
        if rn < target {
            break;
        }
        let m = r.len();
        let mut jac = DMatrix::zeros(m, d);
        for j in 0..d {
            let step = 1e-7 * (1.0 + p[j].abs());
            let mut q = p.clone();
            q[j] += step;
            let rq = eval(&q)?;
            for i in 0..m {
                jac[(i, j)] = (rq[i] - r[i]) / step;
            }
        }
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let g = &jt * DVector::from_column_slice(&r);
        let mut improved = false;
        for _ in 0..20 {
            let mut a = jtj.clone();
            for k in 0..d {
                a[(k, k)] += lambda * (1.0 + jtj[(k, k)]);
            }
            let Some(delta) = a.lu().solve(&g) else {
                lambda *= 10.0;
                continue;
            };
            let mut q: Vec<f64> = (0..d).map(|k| p[k] - delta[k]).collect();
            chart.normalize(&mut q);
            let rq = eval(&q)?;
            let qn = norm(&rq);
            if qn < rn {
                p = q;
                r = rq;
                rn = qn;
                lambda = (lambda * 0.3).max(1e-12);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    Ok((p, rn))
}

/// Samples the boundary of an origin-symmetric region, then polishes the
/// best candidates by Levenberg–Marquardt.
pub fn antipodal_search(
    field: &FieldDef,
    region: &Region,
    mode: AntipodalMode,
    tol: f64,
) -> Result<AntipodalResult, VerifyError> {
    if field.dim() != region.dim() {
        return Err(VerifyError::Block(BlockError::DimensionMismatch {
            field: field.dim(),
            region: region.dim(),
        }));
    }
    if !region.is_origin_symmetric() {
        return Err(VerifyError::Input(format!(
            "region {} is not symmetric about the origin",
            region
        )));
    }
    let loops;
    let patches;
    let mut charts: Vec<Chart> = Vec::new();
    let mut starts: Vec<(usize, Vec<f64>)> = Vec::new();
    match region.dim() {
        2 => {
            loops = region.loops()?;
            let total: f64 = loops.iter().map(|l| l.length()).sum();
            for l in &loops {
                for piece in &l.pieces {
                    let k =
                        ((PLANAR_SAMPLES as f64 * piece.length() / total).ceil() as usize).max(8);
                    let ci = charts.len();
                    charts.push(Chart::Curve(piece));
                    starts.extend((0..=k).map(|i| (ci, vec![i as f64 / k as f64])));
                }
            }
        }
        3 => {
            patches = region.patches()?;
            let total: f64 = patches.iter().map(Patch::area).sum();
            for patch in &patches {
                let ci = charts.len();
                charts.push(Chart::Surface(patch));
                let (ns, nt) = match patch.kind {
                    PatchKind::Sphere { .. } => {
                        let nt = ((SURFACE_SAMPLES as f64 / 2.0).sqrt().ceil() as usize).max(4);
                        (nt, 2 * nt)
                    }
                    PatchKind::Rect { .. } => {
                        let share = SURFACE_SAMPLES as f64 * patch.area() / total;
                        let k = (share.sqrt().ceil() as usize).max(8);
                        (k, k)
                    }
                };
                for i in 0..=ns {
                    for j in 0..nt {
                        let t = match patch.kind {
                            PatchKind::Sphere { .. } => j as f64 / nt as f64,
                            PatchKind::Rect { .. } => j as f64 / (nt - 1) as f64,
                        };
                        starts.push((ci, vec![i as f64 / ns as f64, t]));
                    }
                }
            }
        }
        n => {
            return Err(VerifyError::Block(BlockError::Dimension {
                expected: 3,
                found: n,
            }))
        }
    }
    let scored: Vec<Result<f64, VerifyError>> = starts
        .par_iter()
        .map(|(ci, p)| residual_vec(field, &charts[*ci].point(p), mode).map(|r| norm(&r)))
        .collect();
    let mut ranked: Vec<(f64, usize)> = Vec::with_capacity(scored.len());
    for (i, s) in scored.into_iter().enumerate() {
        ranked.push((s?, i));
    }
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0));
    let samples = ranked.len();
    let mut best: Option<(Vec<f64>, f64)> = None;
    for &(_, i) in ranked.iter().take(POLISH_CANDIDATES) {
        let (ci, p) = &starts[i];
        let chart = &charts[*ci];
        let (q, r) = polish(field, chart, p.clone(), mode, tol * 1e-3)?;
        if best.as_ref().is_none_or(|b| r < b.1) {
            best = Some((chart.point(&q), r));
        }
        if r < tol * 1e-3 {
            break;
        }
    }
    let (point, residual) = best.expect("boundary has samples");
    Ok(AntipodalResult {
        found: residual < tol,
        mode,
        point,
        residual,
        tolerance: tol,
        samples,
    })
}
