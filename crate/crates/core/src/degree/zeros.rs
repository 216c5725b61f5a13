//! Zeros of a field by seeded Newton iteration.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::Serialize;

use crate::block::Region;
use crate::field::FieldDef;

/// A located zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Zero {
    pub point: Vec<f64>,
    /// `sign det DF`.
    pub index: i64,
    /// `|F(point)|`.
    pub residual: f64,
    pub det_abs: f64,
}

const MAX_NEWTON_ITERS: usize = 100;

/// Outcome of one Newton run.
pub(crate) struct Converged {
    pub point: Vec<f64>,
    pub residual: f64,
    pub det: f64,
    /// `max |∂F_i/∂x_j|`, floored at 1.
    pub scale: f64,
}

impl Converged {
    pub fn degenerate(&self, threshold: f64) -> bool {
        let n = self.point.len() as i32;
        self.det.abs() / self.scale.powi(n) < threshold
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Damped Newton iteration; returns the limit if `|F| < tol` there.
pub(crate) fn newton(
    field: &FieldDef,
    x0: &[f64],
    tol: f64,
    escape: (&[f64], f64),
) -> Option<Converged> {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut fx = field.eval(&x).ok()?;
    let mut r = norm(&fx);
    for _ in 0..MAX_NEWTON_ITERS {
        if r == 0.0 {
            break;
        }
        let jet = field.jacobian(&x).ok()?;
        let rhs = DVector::from_column_slice(&fx);
        let step = jet.jacobian.lu().solve(&rhs)?;
        if step.iter().any(|v| !v.is_finite()) {
            return None;
        }
        // Backtrack on |F| so that far seeds do not shoot off.
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let trial: Vec<f64> = (0..n).map(|i| x[i] - lambda * step[i]).collect();
            if let Ok(ft) = field.eval(&trial) {
                let rt = norm(&ft);
                if rt < r {
                    accepted = Some((trial, ft, rt));
                    break;
                }
            }
            lambda *= 0.5;
        }
        // No decrease along the Newton direction: either converged to
        // rounding level or stuck at a local minimum of |F|; the residual
        // test below tells the two apart.
        let Some((trial, ft, rt)) = accepted else {
            break;
        };
        let moved = lambda * step.norm();
        x = trial;
        fx = ft;
        r = rt;
        if crate::block::dist(&x, escape.0) > escape.1 {
            return None;
        }
        if moved <= 1e-13 * (1.0 + norm(&x)) {
            break;
        }
    }
    if !(r < tol) {
        return None;
    }
    let jet = field.jacobian(&x).ok()?;
    let scale = jet.jacobian.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    Some(Converged {
        point: x,
        residual: r,
        det: jet.jacobian.determinant(),
        scale,
    })
}

/// Grid seeds at cell centers of the region's bounding box that lie in the
/// region, plus the region's center.
pub(crate) fn seeds(region: &Region, per_axis: usize) -> Vec<Vec<f64>> {
    let (lo, hi) = region.bounding_box();
    let n = lo.len();
    let mut out = Vec::new();
    let c = region.center();
    if region.contains(&c) {
        out.push(c);
    }
    let total = per_axis.pow(n as u32);
    for idx in 0..total {
        let mut rem = idx;
        let p: Vec<f64> = (0..n)
            .map(|i| {
                let k = rem % per_axis;
                rem /= per_axis;
                lo[i] + (hi[i] - lo[i]) * (k as f64 + 0.5) / per_axis as f64
            })
            .collect();
        if region.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Runs Newton from every seed and merges limits closer than `merge`.
pub(crate) fn find_zeros(
    field: &FieldDef,
    seeds: &[Vec<f64>],
    tol: f64,
    merge: f64,
    escape: (&[f64], f64),
) -> Vec<Converged> {
    let found: Vec<Option<Converged>> = seeds
        .par_iter()
        .map(|s| newton(field, s, tol, escape))
        .collect();
    let mut out: Vec<Converged> = Vec::new();
    for c in found.into_iter().flatten() {
        match out
            .iter_mut()
            .find(|z| crate::block::dist(&z.point, &c.point) <= merge)
        {
            // Keep the representative with the smaller residual.
            Some(z) => {
                if c.residual < z.residual {
                    *z = c;
                }
            }
            None => out.push(c),
        }
    }
    out.sort_by(|a, b| {
        a.point
            .partial_cmp(&b.point)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    out
}
