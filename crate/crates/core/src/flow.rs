//! Numerical flow of a vector field.
//!
//! Integration uses the Dormand–Prince 5(4) embedded pair with a mixed
//! absolute/relative local error bound and cubic Hermite dense output.
//! Everything here that approximates a limit set (ω-limits, asymptotic
//! sets) is a sampled heuristic and is labeled as such.

use rayon::prelude::*;
use thiserror::Error;

use crate::block::Region;
use crate::cubical::{rasterize, CubeSet};
use crate::field::{FieldDef, FieldError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("step size underflow at t = {t} (state {state:?})")]
    StepUnderflow { t: f64, state: Vec<f64> },
    #[error("non-finite state at t = {t} (last finite state {state:?})")]
    NonFinite { t: f64, state: Vec<f64> },
    #[error("step limit reached at t = {t}")]
    TooManySteps { t: f64 },
    #[error("field evaluation failed at t = {t}: {source}")]
    Field { t: f64, source: FieldError },
    #[error("start point {0:?} is not in the region")]
    StartOutside(Vec<f64>),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Time direction of an integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Positive,
    Negative,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Positive => 1.0,
            Direction::Negative => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TerminalStatus {
    Completed,
    LeftRegion,
    StepFailure,
}

/// A sampled orbit. `times` are elapsed times along the integration
/// direction (strictly increasing from zero); the flow time of sample `i`
/// is `t0 + direction·times[i]`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub t0: f64,
    pub direction: Direction,
    pub times: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    /// Derivative along the integration direction at each sample.
    pub slopes: Vec<Vec<f64>>,
    pub status: TerminalStatus,
    pub failure: Option<FlowError>,
}

impl Trajectory {
    pub fn last(&self) -> &[f64] {
        self.points
            .last()
            .expect("trajectory has at least its start point")
    }

    pub fn flow_time(&self, i: usize) -> f64 {
        self.t0 + self.direction.sign() * self.times[i]
    }

    /// State at elapsed time `s` by cubic Hermite interpolation.
    pub fn state_at(&self, s: f64) -> Vec<f64> {
        let k = match self.times.binary_search_by(|t| t.partial_cmp(&s).unwrap()) {
            Ok(i) => return self.points[i].clone(),
            Err(0) => return self.points[0].clone(),
            Err(i) if i >= self.times.len() => return self.last().to_vec(),
            Err(i) => i - 1,
        };
        hermite(
            self.times[k],
            &self.points[k],
            &self.slopes[k],
            self.times[k + 1],
            &self.points[k + 1],
            &self.slopes[k + 1],
            s,
        )
    }
}

fn hermite(t0: f64, y0: &[f64], f0: &[f64], t1: f64, y1: &[f64], f1: &[f64], t: f64) -> Vec<f64> {
    let h = t1 - t0;
    let u = (t - t0) / h;
    let u2 = u * u;
    let u3 = u2 * u;
    let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    let h10 = u3 - 2.0 * u2 + u;
    let h01 = -2.0 * u3 + 3.0 * u2;
    let h11 = u3 - u2;
    (0..y0.len())
        .map(|i| h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i])
        .collect()
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Fifth-order minus embedded fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const MAX_STEPS: usize = 2_000_000;

/// Integration settings shared by the public entry points.
#[derive(Debug, Clone, Copy)]
struct Run<'a> {
    tol: f64,
    direction: Direction,
    /// Stop at the first accepted step that leaves this region.
    stop_outside: Option<&'a Region>,
    /// Land exactly on the final time. Without clipping the step sequence
    /// does not depend on the horizon, which keeps horizon comparisons exact.
    clip: bool,
}

struct Rhs<'a> {
    field: &'a FieldDef,
    sign: f64,
}

impl Rhs<'_> {
    fn eval(&self, y: &[f64], out: &mut [f64], t: f64) -> Result<(), FlowError> {
        self.field
            .eval_into(y, out)
            .map_err(|source| FlowError::Field { t, source })?;
        if self.sign < 0.0 {
            out.iter_mut().for_each(|v| *v = -*v);
        }
        Ok(())
    }
}

fn drive(field: &FieldDef, x0: &[f64], duration: f64, t0: f64, run: Run<'_>) -> Trajectory {
    let n = x0.len();
    let rhs = Rhs {
        field,
        sign: run.direction.sign(),
    };
    let mut traj = Trajectory {
        t0,
        direction: run.direction,
        times: vec![0.0],
        points: vec![x0.to_vec()],
        slopes: Vec::new(),
        status: TerminalStatus::Completed,
        failure: None,
    };
    let fail = |traj: &mut Trajectory, e: FlowError| {
        traj.status = TerminalStatus::StepFailure;
        traj.failure = Some(e);
    };

    let mut k1 = vec![0.0; n];
    if let Err(e) = rhs.eval(x0, &mut k1, 0.0) {
        traj.slopes.push(vec![f64::NAN; n]);
        fail(&mut traj, e);
        return traj;
    }
    traj.slopes.push(k1.clone());
    if duration == 0.0 {
        return traj;
    }

    let norm = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut h = {
        let scale = run.tol.powf(0.2) * 0.1 * norm(x0).max(1.0);
        let speed = norm(&k1).max(1e-12);
        (scale / speed).min(1.0)
    };
    if run.clip {
        h = h.min(duration);
    }

    let mut y = x0.to_vec();
    let mut s = 0.0;
    let (mut k2, mut k3, mut k4, mut k5, mut k6, mut k7) = (
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
    );
    let mut tmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];

    for _ in 0..MAX_STEPS {
        if s >= duration {
            return traj;
        }
        if run.clip && s + h > duration {
            h = duration - s;
        }
        if h < 1e-14 * s.abs().max(1.0) {
            fail(
                &mut traj,
                FlowError::StepUnderflow {
                    t: t0 + run.direction.sign() * s,
                    state: y,
                },
            );
            return traj;
        }
        let stages = (|| -> Result<(), FlowError> {
            for i in 0..n {
                tmp[i] = y[i] + h * A21 * k1[i];
            }
            rhs.eval(&tmp, &mut k2, s + C2 * h)?;
            for i in 0..n {
                tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
            }
            rhs.eval(&tmp, &mut k3, s + C3 * h)?;
            for i in 0..n {
                tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
            }
            rhs.eval(&tmp, &mut k4, s + C4 * h)?;
            for i in 0..n {
                tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
            }
            rhs.eval(&tmp, &mut k5, s + C5 * h)?;
            for i in 0..n {
                tmp[i] = y[i]
                    + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
            }
            rhs.eval(&tmp, &mut k6, s + h)?;
            for i in 0..n {
                ynew[i] =
                    y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
            }
            rhs.eval(&ynew, &mut k7, s + h)?;
            Ok(())
        })();

        // Domain errors or overflow inside a trial step shrink the step;
        // they only become failures once the step underflows.
        let mut err = f64::INFINITY;
        if stages.is_ok() && ynew.iter().all(|v| v.is_finite()) && k7.iter().all(|v| v.is_finite())
        {
            err = 0.0;
            for i in 0..n {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = run.tol * y[i].abs().max(ynew[i].abs()).max(1.0);
                err = err.max(e.abs() / sc);
            }
        }
        if !err.is_finite() {
            h *= 0.2;
            if h < 1e-14 * s.abs().max(1.0) {
                let e = match stages {
                    Err(e) => e,
                    Ok(()) => FlowError::NonFinite {
                        t: t0 + run.direction.sign() * s,
                        state: y,
                    },
                };
                fail(&mut traj, e);
                return traj;
            }
            continue;
        }
        if err <= 1.0 {
            s += h;
            std::mem::swap(&mut y, &mut ynew);
            std::mem::swap(&mut k1, &mut k7);
            traj.times.push(s);
            traj.points.push(y.clone());
            traj.slopes.push(k1.clone());
            if let Some(region) = run.stop_outside {
                if !region.contains(&y) {
                    traj.status = TerminalStatus::LeftRegion;
                    return traj;
                }
            }
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= if err <= 1.0 { factor } else { factor.min(1.0) };
    }
    fail(
        &mut traj,
        FlowError::TooManySteps {
            t: t0 + run.direction.sign() * s,
        },
    );
    traj
}

fn check_point(field: &FieldDef, x: &[f64]) -> Result<(), FlowError> {
    if x.len() != field.dim() {
        return Err(FlowError::InvalidArgument(format!(
            "point has dimension {}, field has dimension {}",
            x.len(),
            field.dim()
        )));
    }
    Ok(())
}

/// Integrates from `x0` over `t_span = (t0, t1)`. A span with `t1 < t0`
/// integrates the reversed field. The local error of each step is bounded
/// by `tol·max(1, |y|)` componentwise.
pub fn integrate(
    field: &FieldDef,
    x0: &[f64],
    t_span: (f64, f64),
    tol: f64,
) -> Result<Trajectory, FlowError> {
    check_point(field, x0)?;
    if !(tol > 0.0) {
        return Err(FlowError::InvalidArgument(
            "tolerance must be positive".into(),
        ));
    }
    let (t0, t1) = t_span;
    if !t0.is_finite() || !t1.is_finite() {
        return Err(FlowError::InvalidArgument(
            "time span must be finite".into(),
        ));
    }
    let direction = if t1 >= t0 {
        Direction::Positive
    } else {
        Direction::Negative
    };
    let run = Run {
        tol,
        direction,
        stop_outside: None,
        clip: true,
    };
    let traj = drive(field, x0, (t1 - t0).abs(), t0, run);
    match traj.failure {
        Some(e) => Err(e),
        None => Ok(traj),
    }
}

/// Result of an exit-time query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExitTime {
    /// The orbit is in the region on `[0, t]` and leaves right after.
    Exits(f64),
    /// No crossing up to the horizon.
    StaysWithin,
}

impl ExitTime {
    pub fn time(self) -> Option<f64> {
        match self {
            ExitTime::Exits(t) => Some(t),
            ExitTime::StaysWithin => None,
        }
    }
}

/// Integration tolerance used for exit-time queries.
pub const EXIT_TOL: f64 = 1e-10;
/// Bisection tolerance on the crossing time.
pub const EXIT_TIME_RESOLUTION: f64 = 1e-9;

/// First time the forward orbit of `x` leaves `region`, i.e.
/// `max{t : x[0,t] ⊂ N}`, or [`ExitTime::StaysWithin`] if that exceeds `t_max`.
pub fn exit_time(
    field: &FieldDef,
    region: &Region,
    x: &[f64],
    t_max: f64,
) -> Result<ExitTime, FlowError> {
    exit_time_directed(field, region, x, t_max, Direction::Positive, EXIT_TOL)
}

/// Exit time along either time direction, with an explicit tolerance.
pub fn exit_time_directed(
    field: &FieldDef,
    region: &Region,
    x: &[f64],
    t_max: f64,
    direction: Direction,
    tol: f64,
) -> Result<ExitTime, FlowError> {
    check_point(field, x)?;
    if !(t_max > 0.0) {
        return Err(FlowError::InvalidArgument(
            "horizon must be positive".into(),
        ));
    }
    if !region.contains(x) {
        return Err(FlowError::StartOutside(x.to_vec()));
    }
    let run = Run {
        tol,
        direction,
        stop_outside: Some(region),
        clip: false,
    };
    let traj = drive(field, x, t_max, 0.0, run);
    if let Some(e) = traj.failure {
        return Err(e);
    }
    if traj.status != TerminalStatus::LeftRegion {
        return Ok(ExitTime::StaysWithin);
    }
    let k = traj.times.len() - 1;
    let (mut lo, mut hi) = (traj.times[k - 1], traj.times[k]);
    while hi - lo > EXIT_TIME_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if region.contains(&traj.state_at(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo > t_max {
        Ok(ExitTime::StaysWithin)
    } else {
        Ok(ExitTime::Exits(lo))
    }
}

/// Sampled orbit segment approximating the ω-limit of a point.
#[derive(Debug, Clone, serde::Serialize)]
pub struct OmegaEstimate {
    pub points: Vec<Vec<f64>>,
    pub burn_in: f64,
    pub window: f64,
    /// Always `"approximation"`: a finite orbit segment is not a limit set.
    pub label: &'static str,
}

const OMEGA_SAMPLES: usize = 256;

/// Samples the orbit of `x` over `[burn_in, burn_in + window]`.
pub fn omega_estimate(
    field: &FieldDef,
    x: &[f64],
    burn_in: f64,
    window: f64,
) -> Result<OmegaEstimate, FlowError> {
    if !(burn_in > 0.0 && window > 0.0) {
        return Err(FlowError::InvalidArgument(
            "burn-in and window must be positive".into(),
        ));
    }
    let head = integrate(field, x, (0.0, burn_in), EXIT_TOL)?;
    let tail = integrate(field, head.last(), (0.0, window), EXIT_TOL)?;
    let points = (0..OMEGA_SAMPLES)
        .map(|i| tail.state_at(window * i as f64 / (OMEGA_SAMPLES - 1) as f64))
        .collect();
    Ok(OmegaEstimate {
        points,
        burn_in,
        window,
        label: "approximation",
    })
}

/// Grid approximation of the negative (or positive) asymptotic set of a region.
#[derive(Debug, Clone)]
pub struct AsymptoticSet {
    pub region: Region,
    pub cells: CubeSet,
    /// Cells whose integration failed; neither kept nor discarded.
    pub indeterminate: Vec<Vec<i64>>,
    pub horizon: f64,
    pub direction: Direction,
    pub label: &'static str,
}

/// Keeps the grid cells whose center stays in `region` over the signed
/// horizon. Larger horizons never add cells on the same grid.
pub fn asymptotic_approx(
    field: &FieldDef,
    region: &Region,
    resolution: f64,
    horizon: f64,
    direction: Direction,
) -> Result<AsymptoticSet, FlowError> {
    if !(resolution > 0.0 && horizon > 0.0) {
        return Err(FlowError::InvalidArgument(
            "resolution and horizon must be positive".into(),
        ));
    }
    if region.dim() != field.dim() {
        return Err(FlowError::InvalidArgument(
            "region and field dimensions differ".into(),
        ));
    }
    let grid = rasterize(region, resolution);
    let cells: Vec<Vec<i64>> = grid.cells().iter().cloned().collect();
    let verdicts: Vec<Option<bool>> = cells
        .par_iter()
        .map(|k| {
            let c = grid.center(k);
            match exit_time_directed(field, region, &c, horizon, direction, EXIT_TOL) {
                Ok(ExitTime::StaysWithin) => Some(true),
                Ok(ExitTime::Exits(_)) => Some(false),
                Err(_) => None,
            }
        })
        .collect();
    let mut kept = CubeSet::new(grid.dim(), grid.width(), grid.origin().to_vec());
    let mut indeterminate = Vec::new();
    for (k, v) in cells.into_iter().zip(verdicts) {
        match v {
            Some(true) => {
                kept.insert(k);
            }
            Some(false) => {}
            None => indeterminate.push(k),
        }
    }
    Ok(AsymptoticSet {
        region: region.clone(),
        cells: kept,
        indeterminate,
        horizon,
        direction,
        label: "approximation",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::catalog;
    use std::collections::BTreeMap;

    fn cat(name: &str) -> FieldDef {
        catalog(name, &BTreeMap::new()).unwrap()
    }

    fn unit_ball2() -> Region {
        Region::ball(vec![0.0, 0.0], 1.0).unwrap()
    }

    #[test]
    fn attractor_decays_to_origin() {
        let t = integrate(&cat("attractor(2)"), &[1.0, 0.0], (0.0, 10.0), 1e-8).unwrap();
        assert_eq!(*t.times.last().unwrap(), 10.0);
        let end = t.last();
        assert!(end[0].hypot(end[1]) < 1e-3);
        assert!((end[0] - (-10.0f64).exp()).abs() < 1e-7);
    }

    #[test]
    fn limit_cycle_radius_converges() {
        let t = integrate(&cat("limit_cycle"), &[0.1, 0.0], (0.0, 50.0), 1e-9).unwrap();
        let end = t.last();
        assert!((end[0].hypot(end[1]) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn lorenz_stays_bounded_for_unit_time() {
        // With V = x² + y² + (z - σ - r)², dV/dt ≤ 0 outside an ellipsoid
        // contained in the ball of radius (σ + r)·b/(2√(b-1)) ≈ 35.1 around
        // (0, 0, σ + r); so |state| ≤ 38 + 35.1 + |x0| stays below 100.
        let mut o = BTreeMap::new();
        o.insert("r".to_string(), 28.0);
        let f = catalog("lorenz", &o).unwrap();
        let t = integrate(&f, &[1.0, 1.0, 1.0], (0.0, 1.0), 1e-9).unwrap();
        for p in &t.points {
            assert!(p.iter().all(|v| v.is_finite()));
            assert!(p.iter().map(|v| v * v).sum::<f64>().sqrt() < 100.0);
        }
    }

    #[test]
    fn times_strictly_increase_and_match_closed_form() {
        let t = integrate(&cat("repeller(2)"), &[0.3, -0.2], (0.0, 2.0), 1e-10).unwrap();
        assert!(t.times.windows(2).all(|w| w[1] > w[0]));
        for (s, p) in t.times.iter().zip(&t.points) {
            assert!((p[0] - 0.3 * s.exp()).abs() < 1e-8 * s.exp());
        }
    }

    #[test]
    fn negative_span_reverses_time() {
        let t = integrate(&cat("repeller(2)"), &[1.0, 0.0], (0.0, -3.0), 1e-10).unwrap();
        assert_eq!(t.direction, Direction::Negative);
        assert!((t.last()[0] - (-3.0f64).exp()).abs() < 1e-9);
        assert_eq!(t.flow_time(t.times.len() - 1), -3.0);
    }

    #[test]
    fn halving_tolerance_is_consistent() {
        let f = cat("limit_cycle");
        for tol in [1e-4, 1e-6, 1e-8] {
            let a = integrate(&f, &[0.3, 0.4], (0.0, 5.0), tol).unwrap();
            let b = integrate(&f, &[0.3, 0.4], (0.0, 5.0), tol / 2.0).unwrap();
            let d = a
                .last()
                .iter()
                .zip(b.last())
                .map(|(p, q)| (p - q).abs())
                .fold(0.0, f64::max);
            assert!(d < 10.0 * tol, "tol {} diff {}", tol, d);
        }
    }

    #[test]
    fn dense_output_is_accurate_between_steps() {
        let t = integrate(&cat("attractor(2)"), &[1.0, 2.0], (0.0, 4.0), 1e-10).unwrap();
        for i in 0..=40 {
            let s = 0.1 * i as f64;
            let p = t.state_at(s);
            assert!((p[1] - 2.0 * (-s).exp()).abs() < 1e-7, "s={} {:?}", s, p);
        }
    }

    #[test]
    fn singular_field_reports_failure() {
        let f = crate::field::parse_field("x^2", 1, &BTreeMap::new()).unwrap();
        // x' = x² from x = 1 blows up at t = 1.
        let err = integrate(&f, &[1.0], (0.0, 2.0), 1e-8).unwrap_err();
        assert!(
            matches!(
                err,
                FlowError::StepUnderflow { .. }
                    | FlowError::NonFinite { .. }
                    | FlowError::Field { .. }
                    | FlowError::TooManySteps { .. }
            ),
            "{:?}",
            err
        );
    }

    #[test]
    fn repeller_exit_time_from_unit_ball() {
        let e = exit_time(&cat("repeller(2)"), &unit_ball2(), &[0.5, 0.0], 10.0).unwrap();
        let t = e.time().unwrap();
        assert!((t - 2f64.ln()).abs() < 1e-6, "{}", t);
    }

    #[test]
    fn attractor_never_exits() {
        let e = exit_time(&cat("attractor(2)"), &unit_ball2(), &[0.5, 0.0], 10.0).unwrap();
        assert_eq!(e, ExitTime::StaysWithin);
    }

    #[test]
    fn saddle_exits_through_x_face() {
        let sq = Region::boxed(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
        let t = exit_time(&cat("saddle2"), &sq, &[0.5, 0.1], 10.0)
            .unwrap()
            .time()
            .unwrap();
        assert!((t - 2f64.ln()).abs() < 1e-6, "{}", t);
    }

    #[test]
    fn exit_time_requires_start_inside() {
        let e = exit_time(&cat("saddle2"), &unit_ball2(), &[2.0, 0.0], 1.0);
        assert!(matches!(e, Err(FlowError::StartOutside(_))));
    }

    #[test]
    fn exit_point_lies_on_boundary() {
        let f = cat("limit_cycle");
        let region = Region::ball(vec![0.2, -0.1], 0.7).unwrap();
        for x in [[0.3, 0.0], [0.0, 0.2], [0.5, -0.3]] {
            let t = exit_time(&f, &region, &x, 20.0).unwrap().time().unwrap();
            let traj = integrate(&f, &x, (0.0, t), 1e-12).unwrap();
            let level = region.signed_distance(traj.last()).unwrap();
            assert!(level.abs() < 1e-6, "{}", level);
        }
    }

    #[test]
    fn omega_of_attractor_is_origin() {
        let w = omega_estimate(&cat("attractor(2)"), &[1.0, 1.0], 20.0, 10.0).unwrap();
        assert_eq!(w.label, "approximation");
        assert!(w.points.iter().all(|p| p[0].hypot(p[1]) < 1e-3));
    }

    #[test]
    fn omega_of_limit_cycle_is_unit_circle() {
        let w = omega_estimate(&cat("limit_cycle"), &[2.0, 0.0], 20.0, 10.0).unwrap();
        assert!(w
            .points
            .iter()
            .all(|p| (p[0].hypot(p[1]) - 1.0).abs() < 1e-3));
    }

    #[test]
    fn omega_of_segment_flow_is_stable_end() {
        let w = omega_estimate(&cat("segment_flow"), &[-0.9, 0.5], 20.0, 10.0).unwrap();
        assert!(w.points.iter().all(|p| (p[0] - 1.0).hypot(p[1]) < 1e-3));
    }

    #[test]
    fn saddle_unstable_set_is_the_axis_strip() {
        let sq = Region::boxed(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
        let h = 2.0 / 20.0;
        let a = asymptotic_approx(&cat("saddle2"), &sq, h, 10.0, Direction::Negative).unwrap();
        assert!(a.indeterminate.is_empty());
        assert!(!a.cells.is_empty());
        for k in a.cells.cells() {
            assert!(a.cells.center(k)[1].abs() < h);
        }
        // The whole axis row survives.
        assert_eq!(a.cells.len(), 21);
    }

    #[test]
    fn invariant_balls_keep_every_cell() {
        let ball = unit_ball2();
        let full = rasterize(&ball, 0.2);
        let a =
            asymptotic_approx(&cat("attractor(2)"), &ball, 0.2, 5.0, Direction::Positive).unwrap();
        assert_eq!(a.cells, full);
        let r =
            asymptotic_approx(&cat("repeller(2)"), &ball, 0.2, 5.0, Direction::Negative).unwrap();
        assert_eq!(r.cells, full);
    }

    #[test]
    fn asymptotic_sets_shrink_with_horizon() {
        let f = cat("limit_cycle");
        let region = Region::shell(vec![0.0, 0.0], 0.5, 1.5).unwrap();
        let mut prev: Option<CubeSet> = None;
        for t in [0.25, 0.5, 1.0, 2.0] {
            let a = asymptotic_approx(&f, &region, 0.1, t, Direction::Negative).unwrap();
            if let Some(p) = &prev {
                assert!(a.cells.cells().is_subset(p.cells()));
            }
            prev = Some(a.cells);
        }
    }
}
