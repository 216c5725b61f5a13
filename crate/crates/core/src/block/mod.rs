//! Candidate isolating blocks: boundary decomposition into exit, entrance
//! and tangency sets, planar tangency counts, and a sampled isolation check.

mod region;

pub(crate) use region::{cross, dist};
pub use region::{Loop, Patch, PatchKind, Piece, Region};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cubical::{boundary_faces, rasterize};
use crate::field::{FieldDef, FieldError};
use crate::flow::{exit_time_directed, Direction, ExitTime, EXIT_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BlockError {
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("operation needs dimension {expected}, region has dimension {found}")]
    Dimension { expected: usize, found: usize },
    #[error("field has dimension {field}, region has dimension {region}")]
    DimensionMismatch { field: usize, region: usize },
    #[error("field vanishes on the boundary near {point:?} (|F| = {norm:e})")]
    BoundaryZero { point: Vec<f64>, norm: f64 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Default samples per closed boundary curve in the plane.
pub const DEFAULT_LOOP_SAMPLES: usize = 64;
/// Default samples per closed boundary surface in ℝ³.
pub const DEFAULT_SURFACE_SAMPLES: usize = 10_000;
/// Default relative tangency tolerance.
pub const DEFAULT_TANGENCY_TOL: f64 = 1e-8;
/// A boundary sample with `|F| ≤ ZERO_RATIO · max |F|` counts as a zero.
pub const ZERO_RATIO: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleClass {
    Exit,
    Entrance,
    Tangent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentVerdict {
    Outward,
    Inward,
    Mixed,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundarySample {
    pub point: Vec<f64>,
    pub normal: Vec<f64>,
    /// `F·n / |F|`.
    pub flux: f64,
    pub class: SampleClass,
    pub component: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentSummary {
    pub index: usize,
    pub exit: usize,
    pub entrance: usize,
    pub tangent: usize,
    pub verdict: ComponentVerdict,
}

/// Sampled decomposition of ∂N into exit, entrance and tangency samples.
#[derive(Debug, Clone, Serialize)]
pub struct BlockBoundary {
    pub dim: usize,
    pub tolerance: f64,
    pub samples: Vec<BoundarySample>,
    /// Planar regions only: sample indices of each boundary loop in order
    /// of travel.
    pub loops: Vec<Vec<usize>>,
    pub components: Vec<ComponentSummary>,
    pub min_norm: f64,
    pub max_norm: f64,
}

impl BlockBoundary {
    pub fn all_outward(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.verdict == ComponentVerdict::Outward)
    }

    pub fn all_inward(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.verdict == ComponentVerdict::Inward)
    }

    /// Every component is uniformly outward or uniformly inward.
    pub fn is_uniform(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.verdict != ComponentVerdict::Mixed)
    }

    pub fn count(&self, class: SampleClass) -> usize {
        self.samples.iter().filter(|s| s.class == class).count()
    }
}

/// Sampling density for [`classify_boundary`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Density {
    pub per_loop: usize,
    pub per_surface: usize,
}

impl Default for Density {
    fn default() -> Self {
        Density {
            per_loop: DEFAULT_LOOP_SAMPLES,
            per_surface: DEFAULT_SURFACE_SAMPLES,
        }
    }
}

impl Density {
    pub fn doubled(self) -> Density {
        Density {
            per_loop: 2 * self.per_loop,
            per_surface: 2 * self.per_surface,
        }
    }
}

/// Boundary points with outward normals, plus loop structure in the plane.
struct Sampling {
    points: Vec<(Vec<f64>, Vec<f64>, usize)>,
    loops: Vec<Vec<usize>>,
}

fn sample_boundary(region: &Region, density: Density) -> Result<Sampling, BlockError> {
    match region.dim() {
        2 => {
            let mut points = Vec::new();
            let mut loops = Vec::new();
            for lp in region.loops()? {
                let total = lp.length();
                let mut idx = Vec::new();
                for piece in &lp.pieces {
                    let share = density.per_loop as f64 * piece.length() / total;
                    if piece.is_closed() {
                        let m = (share.ceil() as usize).max(density.per_loop);
                        for i in 0..m {
                            push2(
                                &mut points,
                                &mut idx,
                                piece,
                                i as f64 / m as f64,
                                lp.component,
                            );
                        }
                    } else {
                        // Both endpoints, so corners are seen from each adjoining face.
                        let m = (share.ceil() as usize).max(1);
                        for i in 0..=m {
                            push2(
                                &mut points,
                                &mut idx,
                                piece,
                                i as f64 / m as f64,
                                lp.component,
                            );
                        }
                    }
                }
                loops.push(idx);
            }
            Ok(Sampling { points, loops })
        }
        3 => {
            let patches = region.patches()?;
            let n_comp = patches.iter().map(|p| p.component + 1).max().unwrap_or(0);
            let mut points = Vec::new();
            for comp in 0..n_comp {
                let members: Vec<&Patch> = patches.iter().filter(|p| p.component == comp).collect();
                let area: f64 = members.iter().map(|p| p.area()).sum();
                for p in members {
                    match p.kind {
                        PatchKind::Sphere { .. } => {
                            let nt =
                                ((density.per_surface as f64 / 2.0).sqrt().ceil() as usize).max(4);
                            let np = 2 * nt;
                            for i in 0..nt {
                                for j in 0..np {
                                    let (s, t) =
                                        ((i as f64 + 0.5) / nt as f64, j as f64 / np as f64);
                                    let (x, _, _) = p.frame(s, t);
                                    points.push((x.to_vec(), p.normal(s, t).to_vec(), comp));
                                }
                            }
                        }
                        PatchKind::Rect { .. } => {
                            let share = density.per_surface as f64 * p.area() / area;
                            let k = (share.sqrt().ceil() as usize).max(2);
                            for i in 0..k {
                                for j in 0..k {
                                    let (s, t) =
                                        (i as f64 / (k - 1) as f64, j as f64 / (k - 1) as f64);
                                    let (x, _, _) = p.frame(s, t);
                                    points.push((x.to_vec(), p.normal(s, t).to_vec(), comp));
                                }
                            }
                        }
                    }
                }
            }
            Ok(Sampling {
                points,
                loops: Vec::new(),
            })
        }
        d => Err(BlockError::Dimension {
            expected: 3,
            found: d,
        }),
    }
}

fn push2(
    points: &mut Vec<(Vec<f64>, Vec<f64>, usize)>,
    idx: &mut Vec<usize>,
    piece: &Piece,
    s: f64,
    comp: usize,
) {
    idx.push(points.len());
    points.push((piece.point(s).to_vec(), piece.normal(s).to_vec(), comp));
}

/// Classifies boundary samples as exit (`F·n > tol·|F|`), entrance
/// (`F·n < −tol·|F|`) or tangent, and summarizes each boundary component.
pub fn classify_boundary(
    field: &FieldDef,
    region: &Region,
    density: Density,
    tol: f64,
) -> Result<BlockBoundary, BlockError> {
    if field.dim() != region.dim() {
        return Err(BlockError::DimensionMismatch {
            field: field.dim(),
            region: region.dim(),
        });
    }
    if !(tol > 0.0) {
        return Err(BlockError::InvalidArgument(
            "tangency tolerance must be positive".into(),
        ));
    }
    let sampling = sample_boundary(region, density)?;
    let values: Vec<Vec<f64>> = sampling
        .points
        .par_iter()
        .map(|(x, _, _)| field.eval(x))
        .collect::<Result<_, _>>()?;
    let norms: Vec<f64> = values
        .iter()
        .map(|v| v.iter().map(|c| c * c).sum::<f64>().sqrt())
        .collect();
    let max_norm = norms.iter().cloned().fold(0.0, f64::max);
    let (imin, min_norm) =
        norms
            .iter()
            .cloned()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |acc, (i, v)| if v < acc.1 { (i, v) } else { acc },
            );
    if max_norm == 0.0 || min_norm <= ZERO_RATIO * max_norm {
        return Err(BlockError::BoundaryZero {
            point: sampling.points[imin].0.clone(),
            norm: min_norm,
        });
    }
    let n_comp = region.boundary_component_count();
    let mut components: Vec<ComponentSummary> = (0..n_comp)
        .map(|index| ComponentSummary {
            index,
            exit: 0,
            entrance: 0,
            tangent: 0,
            verdict: ComponentVerdict::Mixed,
        })
        .collect();
    let mut samples = Vec::with_capacity(values.len());
    for ((x, nrm, comp), (v, norm)) in sampling.points.into_iter().zip(values.iter().zip(&norms)) {
        let flux = v.iter().zip(&nrm).map(|(a, b)| a * b).sum::<f64>() / norm;
        let class = if flux > tol {
            SampleClass::Exit
        } else if flux < -tol {
            SampleClass::Entrance
        } else {
            SampleClass::Tangent
        };
        let c = &mut components[comp];
        match class {
            SampleClass::Exit => c.exit += 1,
            SampleClass::Entrance => c.entrance += 1,
            SampleClass::Tangent => c.tangent += 1,
        }
        samples.push(BoundarySample {
            point: x,
            normal: nrm,
            flux,
            class,
            component: comp,
        });
    }
    for c in &mut components {
        c.verdict = if c.entrance == 0 && c.tangent == 0 && c.exit > 0 {
            ComponentVerdict::Outward
        } else if c.exit == 0 && c.tangent == 0 && c.entrance > 0 {
            ComponentVerdict::Inward
        } else {
            ComponentVerdict::Mixed
        };
    }
    Ok(BlockBoundary {
        dim: region.dim(),
        tolerance: tol,
        samples,
        loops: sampling.loops,
        components,
        min_norm,
        max_norm,
    })
}

/// Result of counting tangency points along planar boundary loops.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TangencyCount {
    pub count: usize,
    pub per_loop: Vec<usize>,
    /// False when some loop is tangent at every sample.
    pub reliable: bool,
}

/// Counts tangency points along each planar boundary loop: maximal cyclic
/// runs of tangent samples, plus direct exit↔entrance switches between
/// consecutive samples (a transversal crossing that fell between samples).
pub fn tangency_components_2d(b: &BlockBoundary) -> Result<TangencyCount, BlockError> {
    if b.dim != 2 {
        return Err(BlockError::Dimension {
            expected: 2,
            found: b.dim,
        });
    }
    let mut per_loop = Vec::with_capacity(b.loops.len());
    let mut reliable = true;
    for lp in &b.loops {
        let classes: Vec<SampleClass> = lp.iter().map(|&i| b.samples[i].class).collect();
        if classes.iter().all(|c| *c == SampleClass::Tangent) {
            reliable = false;
            per_loop.push(0);
            continue;
        }
        let m = classes.len();
        let mut count = 0;
        for i in 0..m {
            let (a, c) = (classes[i], classes[(i + 1) % m]);
            match (a, c) {
                // Each tangent run is counted at its end.
                (SampleClass::Tangent, SampleClass::Exit | SampleClass::Entrance) => count += 1,
                (SampleClass::Exit, SampleClass::Entrance)
                | (SampleClass::Entrance, SampleClass::Exit) => count += 1,
                _ => {}
            }
        }
        per_loop.push(count);
    }
    Ok(TangencyCount {
        count: per_loop.iter().sum(),
        per_loop,
        reliable,
    })
}

/// Number of maximal cyclic runs of exit samples along each loop; a loop
/// that is exit everywhere contributes `None` (a whole circle).
pub fn exit_runs_2d(b: &BlockBoundary) -> Result<Vec<Option<usize>>, BlockError> {
    if b.dim != 2 {
        return Err(BlockError::Dimension {
            expected: 2,
            found: b.dim,
        });
    }
    Ok(b.loops
        .iter()
        .map(|lp| {
            let exit: Vec<bool> = lp
                .iter()
                .map(|&i| b.samples[i].class == SampleClass::Exit)
                .collect();
            if exit.iter().all(|e| *e) {
                return None;
            }
            let m = exit.len();
            Some((0..m).filter(|&i| exit[i] && !exit[(i + 1) % m]).count())
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IsolationVerdict {
    Plausible,
    Violated,
    Indeterminate,
}

#[derive(Debug, Clone, Serialize)]
pub struct IsolationReport {
    pub verdict: IsolationVerdict,
    pub horizon: f64,
    pub resolution: f64,
    pub cells_checked: usize,
    pub indeterminate_cells: usize,
    /// A boundary-adjacent sample whose orbit stayed in N over `[−T, T]`.
    pub witness: Option<Vec<f64>>,
    /// Always `"heuristic"`.
    pub label: &'static str,
}

/// Default horizon for [`isolation_check`].
pub const DEFAULT_ISOLATION_HORIZON: f64 = 5.0;

/// Sampled test of the isolating-neighborhood property: flags a violation
/// when the orbit of a sample in a boundary-adjacent grid cell stays in N
/// (up to a slack of `1e-6 · diam N`) over `[−T, T]`.
pub fn isolation_check(
    field: &FieldDef,
    region: &Region,
    horizon: f64,
    resolution: f64,
) -> Result<IsolationReport, BlockError> {
    if field.dim() != region.dim() {
        return Err(BlockError::DimensionMismatch {
            field: field.dim(),
            region: region.dim(),
        });
    }
    if !(horizon > 0.0 && resolution > 0.0) {
        return Err(BlockError::InvalidArgument(
            "horizon and resolution must be positive".into(),
        ));
    }
    let grid = rasterize(region, resolution);
    let mut cells: Vec<Vec<i64>> = boundary_faces(&grid).into_iter().map(|f| f.cube).collect();
    cells.sort();
    cells.dedup();
    let slack = region.inflated(1e-6 * region.diameter());
    let outcomes: Vec<Option<Option<Vec<f64>>>> = cells
        .par_iter()
        .map(|k| {
            let x = grid.center(k);
            if !region.contains(&x) {
                return Some(None);
            }
            let stays = |d| match exit_time_directed(field, &slack, &x, horizon, d, EXIT_TOL) {
                Ok(ExitTime::StaysWithin) => Some(true),
                Ok(ExitTime::Exits(_)) => Some(false),
                Err(_) => None,
            };
            match stays(Direction::Positive)? {
                false => Some(None),
                true => Some(stays(Direction::Negative)?.then(|| x.clone())),
            }
        })
        .collect();
    let indeterminate_cells = outcomes.iter().filter(|o| o.is_none()).count();
    let witness = outcomes.into_iter().flatten().flatten().next();
    let verdict = if witness.is_some() {
        IsolationVerdict::Violated
    } else if indeterminate_cells > 0 {
        IsolationVerdict::Indeterminate
    } else {
        IsolationVerdict::Plausible
    };
    Ok(IsolationReport {
        verdict,
        horizon,
        resolution,
        cells_checked: cells.len(),
        indeterminate_cells,
        witness,
        label: "heuristic",
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

    fn classify(f: &str, r: &str) -> BlockBoundary {
        classify_boundary(
            &cat(f),
            &r.parse().unwrap(),
            Density::default(),
            DEFAULT_TANGENCY_TOL,
        )
        .unwrap()
    }

    #[test]
    fn repeller_ball_is_all_exit() {
        let b = classify("repeller(3)", "ball:0,0,0:1");
        assert!(b.samples.len() >= DEFAULT_SURFACE_SAMPLES);
        assert_eq!(b.count(SampleClass::Exit), b.samples.len());
        assert_eq!(b.components.len(), 1);
        assert_eq!(b.components[0].verdict, ComponentVerdict::Outward);
    }

    #[test]
    fn limit_cycle_shell_is_inward_on_both_circles() {
        let b = classify("limit_cycle", "shell:0,0:0.5:1.5");
        assert_eq!(b.components.len(), 2);
        assert!(b.all_inward());
        assert_eq!(tangency_components_2d(&b).unwrap().count, 0);
    }

    #[test]
    fn saddle_square_has_four_tangencies() {
        let b = classify("saddle2", "box:-1,-1:1,1");
        assert_eq!(b.components[0].verdict, ComponentVerdict::Mixed);
        for s in &b.samples {
            let expect = if s.normal[0] != 0.0 {
                SampleClass::Exit
            } else {
                SampleClass::Entrance
            };
            assert_eq!(s.class, expect, "{:?}", s.point);
        }
        let t = tangency_components_2d(&b).unwrap();
        assert_eq!(t.count, 4);
        assert!(t.reliable);
        assert_eq!(exit_runs_2d(&b).unwrap(), vec![Some(2)]);
    }

    #[test]
    fn saddle_disk_tangencies_are_sampled_points() {
        // On the unit circle F·n = cos²θ − sin²θ vanishes at the four diagonals,
        // which are sample angles when the count is a multiple of 8.
        let b = classify("saddle2", "ball:0,0:1");
        let t = tangency_components_2d(&b).unwrap();
        assert_eq!(t.count, 4);
        assert_eq!(b.count(SampleClass::Tangent), 4);
    }

    #[test]
    fn attractor_disk_has_no_tangencies() {
        let b = classify("attractor(2)", "ball:0,0:1");
        assert!(b.all_inward());
        assert_eq!(tangency_components_2d(&b).unwrap().count, 0);
        assert_eq!(exit_runs_2d(&b).unwrap(), vec![Some(0)]);
    }

    #[test]
    fn doubling_samples_keeps_classification() {
        for (f, r) in [
            ("saddle2", "box:-1,-1:1,1"),
            ("limit_cycle", "shell:0,0:0.5:1.5"),
            ("segment_flow", "box:-2,-1:2,1"),
        ] {
            let region: Region = r.parse().unwrap();
            let a = classify_boundary(&cat(f), &region, Density::default(), 1e-8).unwrap();
            let b =
                classify_boundary(&cat(f), &region, Density::default().doubled(), 1e-8).unwrap();
            assert_eq!(
                tangency_components_2d(&a).unwrap(),
                tangency_components_2d(&b).unwrap()
            );
            let va: Vec<_> = a.components.iter().map(|c| c.verdict).collect();
            let vb: Vec<_> = b.components.iter().map(|c| c.verdict).collect();
            assert_eq!(va, vb);
        }
    }

    #[test]
    fn boundary_zero_is_rejected() {
        let r: Region = "ball:1,0:1".parse().unwrap();
        let e = classify_boundary(
            &cat("saddle2"),
            &r,
            Density {
                per_loop: 64,
                per_surface: 0,
            },
            1e-8,
        );
        assert!(matches!(e, Err(BlockError::BoundaryZero { .. })), "{:?}", e);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let r: Region = "ball:0,0,0:1".parse().unwrap();
        assert!(matches!(
            classify_boundary(&cat("saddle2"), &r, Density::default(), 1e-8),
            Err(BlockError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn cube_region_classification_matches_analytic() {
        let region = Region::cubes(rasterize(&"ball:0,0,0:1".parse().unwrap(), 0.25)).unwrap();
        let b = classify_boundary(&cat("repeller(3)"), &region, Density::default(), 1e-8).unwrap();
        // F = x has F·n = |x_axis| > 0 on every face of a centered cube set.
        assert!(b.all_outward());
    }

    #[test]
    fn isolation_examples() {
        let plausible =
            isolation_check(&cat("saddle2"), &"box:-1,-1:1,1".parse().unwrap(), 5.0, 0.1).unwrap();
        assert_eq!(plausible.verdict, IsolationVerdict::Plausible);
        assert_eq!(plausible.label, "heuristic");
        let thin = isolation_check(
            &cat("limit_cycle"),
            &"shell:0,0:0.9:1.1".parse().unwrap(),
            5.0,
            0.05,
        )
        .unwrap();
        assert_eq!(thin.verdict, IsolationVerdict::Plausible);
        let touching = isolation_check(
            &cat("limit_cycle"),
            &"shell:0,0:1:2".parse().unwrap(),
            5.0,
            0.1,
        )
        .unwrap();
        assert_eq!(touching.verdict, IsolationVerdict::Violated);
        let w = touching.witness.unwrap();
        assert!((w[0].hypot(w[1]) - 1.0).abs() < 1e-12);
    }
}
