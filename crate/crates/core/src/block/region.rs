//! Compact regions of ℝⁿ and parameterizations of their boundaries.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use crate::cubical::{boundary_components, CubeSet};

use super::BlockError;

/// An analytic or cubical compact region.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Box {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    Shell {
        center: Vec<f64>,
        inner: f64,
        outer: f64,
    },
    Cubes(CubeSet),
}

fn finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}

impl Region {
    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Region, BlockError> {
        if center.is_empty() || !finite(&center) {
            return Err(BlockError::InvalidRegion(
                "ball center must be a finite point".into(),
            ));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(BlockError::InvalidRegion(
                "ball radius must be positive".into(),
            ));
        }
        Ok(Region::Ball { center, radius })
    }

    pub fn boxed(lo: Vec<f64>, hi: Vec<f64>) -> Result<Region, BlockError> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(BlockError::InvalidRegion(
                "box corners must have equal, positive length".into(),
            ));
        }
        if !finite(&lo) || !finite(&hi) || lo.iter().zip(&hi).any(|(a, b)| a >= b) {
            return Err(BlockError::InvalidRegion(
                "box needs lo < hi in every coordinate".into(),
            ));
        }
        Ok(Region::Box { lo, hi })
    }

    pub fn shell(center: Vec<f64>, inner: f64, outer: f64) -> Result<Region, BlockError> {
        if center.is_empty() || !finite(&center) {
            return Err(BlockError::InvalidRegion(
                "shell center must be a finite point".into(),
            ));
        }
        if !(inner > 0.0 && inner < outer && outer.is_finite()) {
            return Err(BlockError::InvalidRegion(
                "shell needs 0 < inner < outer".into(),
            ));
        }
        Ok(Region::Shell {
            center,
            inner,
            outer,
        })
    }

    pub fn cubes(set: CubeSet) -> Result<Region, BlockError> {
        if set.is_empty() {
            return Err(BlockError::InvalidRegion("cube set is empty".into()));
        }
        Ok(Region::Cubes(set))
    }

    pub fn dim(&self) -> usize {
        match self {
            Region::Ball { center, .. } | Region::Shell { center, .. } => center.len(),
            Region::Box { lo, .. } => lo.len(),
            Region::Cubes(c) => c.dim(),
        }
    }

    /// A representative center: the ball/shell center, the box midpoint, or
    /// the center of the cube set's bounding box.
    pub fn center(&self) -> Vec<f64> {
        match self {
            Region::Ball { center, .. } | Region::Shell { center, .. } => center.clone(),
            Region::Box { lo, hi } => lo.iter().zip(hi).map(|(a, b)| 0.5 * (a + b)).collect(),
            Region::Cubes(c) => {
                let (lo, hi) = c.bounds().expect("cube regions are nonempty");
                lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect()
            }
        }
    }

    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            Region::Ball { center, radius: r }
            | Region::Shell {
                center, outer: r, ..
            } => (
                center.iter().map(|c| c - r).collect(),
                center.iter().map(|c| c + r).collect(),
            ),
            Region::Box { lo, hi } => (lo.clone(), hi.clone()),
            Region::Cubes(c) => c.bounds().expect("cube regions are nonempty"),
        }
    }

    pub fn diameter(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        match self {
            Region::Ball { radius, .. } => 2.0 * radius,
            Region::Shell { outer, .. } => 2.0 * outer,
            _ => lo
                .iter()
                .zip(&hi)
                .map(|(a, b)| (b - a) * (b - a))
                .sum::<f64>()
                .sqrt(),
        }
    }

    /// Closed membership.
    pub fn contains(&self, p: &[f64]) -> bool {
        match self {
            Region::Ball { center, radius } => dist(p, center) <= *radius,
            Region::Box { lo, hi } => p
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(x, (a, b))| a <= x && x <= b),
            Region::Shell {
                center,
                inner,
                outer,
            } => {
                let d = dist(p, center);
                *inner <= d && d <= *outer
            }
            Region::Cubes(c) => c.contains_point(p),
        }
    }

    /// Signed distance to the boundary, negative inside. Not available for
    /// cube sets.
    pub fn signed_distance(&self, p: &[f64]) -> Option<f64> {
        match self {
            Region::Ball { center, radius } => Some(dist(p, center) - radius),
            Region::Box { lo, hi } => {
                let mut outside = 0.0;
                let mut inside = f64::NEG_INFINITY;
                for ((x, a), b) in p.iter().zip(lo).zip(hi) {
                    let d = (a - x).max(x - b);
                    outside += d.max(0.0).powi(2);
                    inside = inside.max(d);
                }
                Some(if outside > 0.0 {
                    outside.sqrt()
                } else {
                    inside
                })
            }
            Region::Shell {
                center,
                inner,
                outer,
            } => {
                let d = dist(p, center);
                Some((d - outer).max(inner - d))
            }
            Region::Cubes(_) => None,
        }
    }

    /// The region grown by `eps` (cube sets are returned unchanged).
    pub fn inflated(&self, eps: f64) -> Region {
        match self {
            Region::Ball { center, radius } => Region::Ball {
                center: center.clone(),
                radius: radius + eps,
            },
            Region::Box { lo, hi } => Region::Box {
                lo: lo.iter().map(|v| v - eps).collect(),
                hi: hi.iter().map(|v| v + eps).collect(),
            },
            Region::Shell {
                center,
                inner,
                outer,
            } => Region::Shell {
                center: center.clone(),
                inner: (inner - eps).max(0.0),
                outer: outer + eps,
            },
            Region::Cubes(c) => Region::Cubes(c.clone()),
        }
    }

    /// Whether the region is invariant under `x ↦ −x` and contains the origin.
    pub fn is_origin_symmetric(&self) -> bool {
        let zero = vec![0.0; self.dim()];
        let sym = match self {
            Region::Ball { center, .. } | Region::Shell { center, .. } => {
                center.iter().all(|c| *c == 0.0)
            }
            Region::Box { lo, hi } => lo.iter().zip(hi).all(|(a, b)| *a == -*b),
            Region::Cubes(c) => c.cells().iter().all(|k| {
                let p: Vec<f64> = c.center(k).iter().map(|v| -v).collect();
                c.contains_cell(&c.cell_of(&p))
            }),
        };
        sym && self.contains(&zero)
    }

    /// Number of connected components of the boundary.
    pub fn boundary_component_count(&self) -> usize {
        match self {
            Region::Shell { .. } => 2,
            Region::Cubes(c) => boundary_components(c).len(),
            _ => 1,
        }
    }

    /// Index of the boundary component nearest to a boundary point.
    pub fn analytic_component_of(&self, p: &[f64]) -> usize {
        match self {
            Region::Shell {
                center,
                inner,
                outer,
            } => usize::from(dist(p, center) < 0.5 * (inner + outer)),
            _ => 0,
        }
    }

    /// Boundary loops of a planar region, each oriented with the region on
    /// its left (outer loops counter-clockwise, holes clockwise).
    pub fn loops(&self) -> Result<Vec<Loop>, BlockError> {
        if self.dim() != 2 {
            return Err(BlockError::Dimension {
                expected: 2,
                found: self.dim(),
            });
        }
        Ok(match self {
            Region::Ball { center, radius } => vec![Loop {
                component: 0,
                pieces: vec![Piece::Arc {
                    center: [center[0], center[1]],
                    radius: *radius,
                    start: 0.0,
                    sweep: TAU,
                }],
            }],
            Region::Shell {
                center,
                inner,
                outer,
            } => {
                let c = [center[0], center[1]];
                vec![
                    Loop {
                        component: 0,
                        pieces: vec![Piece::Arc {
                            center: c,
                            radius: *outer,
                            start: 0.0,
                            sweep: TAU,
                        }],
                    },
                    Loop {
                        component: 1,
                        pieces: vec![Piece::Arc {
                            center: c,
                            radius: *inner,
                            start: 0.0,
                            sweep: -TAU,
                        }],
                    },
                ]
            }
            Region::Box { lo, hi } => {
                let corners = [
                    [lo[0], lo[1]],
                    [hi[0], lo[1]],
                    [hi[0], hi[1]],
                    [lo[0], hi[1]],
                ];
                let pieces = (0..4)
                    .map(|i| Piece::Segment {
                        from: corners[i],
                        to: corners[(i + 1) % 4],
                    })
                    .collect();
                vec![Loop {
                    component: 0,
                    pieces,
                }]
            }
            Region::Cubes(c) => cube_loops(c),
        })
    }

    /// Boundary patches of a region in ℝ³, each parameterized over the unit
    /// square with `∂sX × ∂tX` pointing out of the region.
    pub fn patches(&self) -> Result<Vec<Patch>, BlockError> {
        if self.dim() != 3 {
            return Err(BlockError::Dimension {
                expected: 3,
                found: self.dim(),
            });
        }
        let v3 = |v: &[f64]| [v[0], v[1], v[2]];
        Ok(match self {
            Region::Ball { center, radius } => {
                vec![Patch {
                    component: 0,
                    kind: PatchKind::Sphere {
                        center: v3(center),
                        radius: *radius,
                        inward: false,
                    },
                }]
            }
            Region::Shell {
                center,
                inner,
                outer,
            } => vec![
                Patch {
                    component: 0,
                    kind: PatchKind::Sphere {
                        center: v3(center),
                        radius: *outer,
                        inward: false,
                    },
                },
                Patch {
                    component: 1,
                    kind: PatchKind::Sphere {
                        center: v3(center),
                        radius: *inner,
                        inward: true,
                    },
                },
            ],
            Region::Box { lo, hi } => {
                let mut out = Vec::new();
                for axis in 0..3 {
                    for sign in [-1i8, 1] {
                        let mut corner = v3(lo);
                        if sign > 0 {
                            corner[axis] = hi[axis];
                        }
                        let (i, j) = other_axes(axis);
                        let mut u = [0.0; 3];
                        let mut v = [0.0; 3];
                        u[i] = hi[i] - lo[i];
                        v[j] = hi[j] - lo[j];
                        out.push(Patch {
                            component: 0,
                            kind: oriented_rect(corner, u, v, axis, sign),
                        });
                    }
                }
                out
            }
            Region::Cubes(c) => {
                let h = c.width();
                let mut out = Vec::new();
                for (ci, comp) in boundary_components(c).into_iter().enumerate() {
                    for f in comp {
                        // Lower corner of the face: doubled coordinates halve to
                        // lattice positions.
                        let corner: Vec<f64> = f
                            .cell
                            .iter()
                            .zip(c.origin())
                            .map(|(&d, o)| o + h * d.div_euclid(2) as f64)
                            .collect();
                        let (i, j) = other_axes(f.axis);
                        let mut u = [0.0; 3];
                        let mut v = [0.0; 3];
                        u[i] = h;
                        v[j] = h;
                        out.push(Patch {
                            component: ci,
                            kind: oriented_rect(v3(&corner), u, v, f.axis, f.sign),
                        });
                    }
                }
                out
            }
        })
    }
}

fn other_axes(axis: usize) -> (usize, usize) {
    match axis {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

fn oriented_rect(corner: [f64; 3], u: [f64; 3], v: [f64; 3], axis: usize, sign: i8) -> PatchKind {
    // e_i × e_j is +e_axis for axes 0 and 2 and −e_axis for axis 1.
    let orient = if axis == 1 { -1 } else { 1 };
    if orient * sign as i32 > 0 {
        PatchKind::Rect { corner, u, v }
    } else {
        PatchKind::Rect { corner, u: v, v: u }
    }
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// A piece of a planar boundary loop, parameterized over `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Piece {
    Arc {
        center: [f64; 2],
        radius: f64,
        start: f64,
        sweep: f64,
    },
    Segment {
        from: [f64; 2],
        to: [f64; 2],
    },
}

impl Piece {
    pub fn point(&self, s: f64) -> [f64; 2] {
        match self {
            Piece::Arc {
                center,
                radius,
                start,
                sweep,
            } => {
                let a = start + sweep * s;
                [center[0] + radius * a.cos(), center[1] + radius * a.sin()]
            }
            Piece::Segment { from, to } => [
                from[0] + s * (to[0] - from[0]),
                from[1] + s * (to[1] - from[1]),
            ],
        }
    }

    /// Derivative of [`Piece::point`] with respect to the parameter.
    pub fn velocity(&self, s: f64) -> [f64; 2] {
        match self {
            Piece::Arc {
                radius,
                start,
                sweep,
                ..
            } => {
                let a = start + sweep * s;
                [-radius * sweep * a.sin(), radius * sweep * a.cos()]
            }
            Piece::Segment { from, to } => [to[0] - from[0], to[1] - from[1]],
        }
    }

    /// Outward unit normal: the velocity turned clockwise, since the region
    /// lies to the left of the direction of travel.
    pub fn normal(&self, s: f64) -> [f64; 2] {
        let v = self.velocity(s);
        let l = v[0].hypot(v[1]);
        [v[1] / l, -v[0] / l]
    }

    pub fn length(&self) -> f64 {
        match self {
            Piece::Arc { radius, sweep, .. } => radius * sweep.abs(),
            Piece::Segment { from, to } => (to[0] - from[0]).hypot(to[1] - from[1]),
        }
    }

    /// Whether the piece is closed on itself (a full circle).
    pub fn is_closed(&self) -> bool {
        matches!(self, Piece::Arc { sweep, .. } if (sweep.abs() - TAU).abs() < 1e-12)
    }
}

/// A closed boundary loop with the region on its left.
#[derive(Debug, Clone, PartialEq)]
pub struct Loop {
    /// Connected boundary component the loop belongs to.
    pub component: usize,
    pub pieces: Vec<Piece>,
}

impl Loop {
    pub fn length(&self) -> f64 {
        self.pieces.iter().map(Piece::length).sum()
    }
}

/// Chains the oriented boundary edges of a planar cube set into loops.
fn cube_loops(c: &CubeSet) -> Vec<Loop> {
    let h = c.width();
    let o = c.origin();
    let vertex = |d: [i64; 2]| [o[0] + h * (d[0] / 2) as f64, o[1] + h * (d[1] / 2) as f64];
    let mut loops = Vec::new();
    for (ci, comp) in boundary_components(c).into_iter().enumerate() {
        // Each face is an edge; orient it so that the outward normal is its
        // direction turned clockwise, i.e. direction = normal turned
        // counter-clockwise.
        let mut edges: Vec<([i64; 2], [i64; 2])> = comp
            .iter()
            .map(|f| {
                let cell = [f.cell[0], f.cell[1]];
                let along = 1 - f.axis;
                let mut a = cell;
                let mut b = cell;
                a[along] -= 1;
                b[along] += 1;
                let mut nrm = [0i64; 2];
                nrm[f.axis] = f.sign as i64;
                let dir = [-nrm[1], nrm[0]];
                let forward = (b[0] - a[0]) * dir[0] + (b[1] - a[1]) * dir[1] > 0;
                if forward {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        edges.sort();
        let mut used = vec![false; edges.len()];
        for start in 0..edges.len() {
            if used[start] {
                continue;
            }
            used[start] = true;
            let mut pieces = vec![Piece::Segment {
                from: vertex(edges[start].0),
                to: vertex(edges[start].1),
            }];
            let mut end = edges[start].1;
            while end != edges[start].0 {
                let next = (0..edges.len()).find(|&i| !used[i] && edges[i].0 == end);
                match next {
                    Some(i) => {
                        used[i] = true;
                        pieces.push(Piece::Segment {
                            from: vertex(edges[i].0),
                            to: vertex(edges[i].1),
                        });
                        end = edges[i].1;
                    }
                    None => break,
                }
            }
            loops.push(Loop {
                component: ci,
                pieces,
            });
        }
    }
    loops
}

/// A boundary patch of a region in ℝ³.
#[derive(Debug, Clone, PartialEq)]
pub struct Patch {
    pub component: usize,
    pub kind: PatchKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PatchKind {
    /// `inward` marks a cavity wall, whose outward normal points at the center.
    Sphere {
        center: [f64; 3],
        radius: f64,
        inward: bool,
    },
    /// `corner + s·u + t·v` with `u × v` pointing out of the region.
    Rect {
        corner: [f64; 3],
        u: [f64; 3],
        v: [f64; 3],
    },
}

impl Patch {
    /// Point and partial derivatives at `(s, t) ∈ [0, 1]²`.
    pub fn frame(&self, s: f64, t: f64) -> ([f64; 3], [f64; 3], [f64; 3]) {
        match &self.kind {
            PatchKind::Sphere {
                center,
                radius,
                inward,
            } => {
                let th = PI * s;
                let (ph, dph) = if *inward {
                    (TAU * (1.0 - t), -TAU)
                } else {
                    (TAU * t, TAU)
                };
                let (st, ct) = th.sin_cos();
                let (sp, cp) = ph.sin_cos();
                let x = [
                    center[0] + radius * st * cp,
                    center[1] + radius * st * sp,
                    center[2] + radius * ct,
                ];
                let xs = [
                    radius * PI * ct * cp,
                    radius * PI * ct * sp,
                    -radius * PI * st,
                ];
                let xt = [-radius * dph * st * sp, radius * dph * st * cp, 0.0];
                (x, xs, xt)
            }
            PatchKind::Rect { corner, u, v } => {
                let x = [0, 1, 2].map(|i| corner[i] + s * u[i] + t * v[i]);
                (x, *u, *v)
            }
        }
    }

    /// Outward unit normal at `(s, t)`, well defined at the sphere poles.
    pub fn normal(&self, s: f64, t: f64) -> [f64; 3] {
        match &self.kind {
            PatchKind::Sphere {
                center,
                radius,
                inward,
            } => {
                let (x, _, _) = self.frame(s, t);
                let sg = if *inward { -1.0 } else { 1.0 };
                [0, 1, 2].map(|i| sg * (x[i] - center[i]) / radius)
            }
            PatchKind::Rect { u, v, .. } => {
                let c = cross(u, v);
                let l = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
                c.map(|x| x / l)
            }
        }
    }

    pub fn area(&self) -> f64 {
        match &self.kind {
            PatchKind::Sphere { radius, .. } => 4.0 * PI * radius * radius,
            PatchKind::Rect { u, v, .. } => {
                let c = cross(u, v);
                (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt()
            }
        }
    }
}

pub(crate) fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

// ---------------------------------------------------------------------------
// Mini-grammar: `ball:c:r`, `box:lo:hi`, `shell:c:rin:rout`.

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>, BlockError> {
    s.split(',')
        .map(|t| {
            t.trim().parse::<f64>().map_err(|_| {
                BlockError::InvalidRegion(format!("bad number `{}` in {}", t.trim(), what))
            })
        })
        .collect()
}

fn parse_scalar(s: &str, what: &str) -> Result<f64, BlockError> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| BlockError::InvalidRegion(format!("bad {} `{}`", what, s.trim())))
}

impl FromStr for Region {
    type Err = BlockError;

    fn from_str(s: &str) -> Result<Region, BlockError> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let arity = |k: usize| {
            if parts.len() == k {
                Ok(())
            } else {
                Err(BlockError::InvalidRegion(format!(
                    "`{}` expects {} fields separated by `:`, found {}",
                    parts[0],
                    k - 1,
                    parts.len() - 1
                )))
            }
        };
        match parts[0].trim() {
            "ball" => {
                arity(3)?;
                Region::ball(
                    parse_list(parts[1], "center")?,
                    parse_scalar(parts[2], "radius")?,
                )
            }
            "box" => {
                arity(3)?;
                Region::boxed(
                    parse_list(parts[1], "lower corner")?,
                    parse_list(parts[2], "upper corner")?,
                )
            }
            "shell" => {
                arity(4)?;
                Region::shell(
                    parse_list(parts[1], "center")?,
                    parse_scalar(parts[2], "inner radius")?,
                    parse_scalar(parts[3], "outer radius")?,
                )
            }
            other => Err(BlockError::InvalidRegion(format!(
                "unknown region kind `{}` (expected ball, box or shell)",
                other
            ))),
        }
    }
}

fn join(v: &[f64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Ball { center, radius } => write!(f, "ball:{}:{}", join(center), radius),
            Region::Box { lo, hi } => write!(f, "box:{}:{}", join(lo), join(hi)),
            Region::Shell {
                center,
                inner,
                outer,
            } => write!(f, "shell:{}:{}:{}", join(center), inner, outer),
            Region::Cubes(c) => write!(
                f,
                "cubes[n={}, h={}, {} cells]",
                c.dim(),
                c.width(),
                c.len()
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_round_trips() {
        for s in [
            "ball:0,0,0:60",
            "box:-1,-1:1,1",
            "shell:0,0:0.5:1.5",
            "box:-6,-6,-6:6,6,6",
        ] {
            let r: Region = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
            assert_eq!(r.to_string().parse::<Region>().unwrap(), r);
        }
    }

    #[test]
    fn grammar_rejects_bad_input() {
        for s in [
            "ball:0,0",
            "ball:0,0:-1",
            "box:1,1:0,0",
            "box:0:1,1",
            "shell:0,0:2:1",
            "disk:0,0:1",
            "ball:a,0:1",
        ] {
            assert!(s.parse::<Region>().is_err(), "{}", s);
        }
    }

    #[test]
    fn membership_and_distance() {
        let b = Region::boxed(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
        assert!(b.contains(&[1.0, -1.0]));
        assert!(!b.contains(&[1.0 + 1e-12, 0.0]));
        assert_eq!(b.signed_distance(&[0.0, 0.0]), Some(-1.0));
        assert_eq!(b.signed_distance(&[4.0, 5.0]), Some(5.0));
        let s = Region::shell(vec![0.0, 0.0], 0.5, 1.5).unwrap();
        assert!(!s.contains(&[0.0, 0.0]));
        assert!(s.contains(&[1.0, 0.0]));
        assert_eq!(s.signed_distance(&[0.25, 0.0]), Some(0.25));
    }

    #[test]
    fn symmetry_detection() {
        assert!(Region::ball(vec![0.0, 0.0], 1.0)
            .unwrap()
            .is_origin_symmetric());
        assert!(!Region::ball(vec![0.1, 0.0], 1.0)
            .unwrap()
            .is_origin_symmetric());
        assert!(!Region::shell(vec![0.0, 0.0], 0.5, 1.0)
            .unwrap()
            .is_origin_symmetric());
        assert!(Region::boxed(vec![-2.0, -1.0], vec![2.0, 1.0])
            .unwrap()
            .is_origin_symmetric());
    }

    #[test]
    fn loop_normals_point_outward() {
        for r in [
            Region::ball(vec![0.3, 0.0], 2.0).unwrap(),
            Region::boxed(vec![-1.0, -2.0], vec![1.0, 3.0]).unwrap(),
            Region::shell(vec![0.0, 0.0], 0.5, 1.5).unwrap(),
        ] {
            for lp in r.loops().unwrap() {
                for p in &lp.pieces {
                    for s in [0.1, 0.5, 0.9] {
                        let x = p.point(s);
                        let nm = p.normal(s);
                        let out = [x[0] + 1e-6 * nm[0], x[1] + 1e-6 * nm[1]];
                        let inn = [x[0] - 1e-6 * nm[0], x[1] - 1e-6 * nm[1]];
                        assert!(!r.contains(&out) && r.contains(&inn), "{} at {:?}", r, x);
                    }
                }
            }
        }
    }

    #[test]
    fn cube_loops_are_closed_and_outward() {
        let r = Region::cubes(crate::cubical::rasterize(
            &Region::shell(vec![0.0, 0.0], 0.5, 1.5).unwrap(),
            0.25,
        ))
        .unwrap();
        let loops = r.loops().unwrap();
        assert_eq!(loops.len(), 2);
        for lp in &loops {
            let first = lp.pieces[0].point(0.0);
            let last = lp.pieces.last().unwrap().point(1.0);
            assert!((first[0] - last[0]).abs() < 1e-12 && (first[1] - last[1]).abs() < 1e-12);
            for p in &lp.pieces {
                let x = p.point(0.5);
                let nm = p.normal(0.5);
                let h = 0.25;
                assert!(!r.contains(&[x[0] + 0.4 * h * nm[0], x[1] + 0.4 * h * nm[1]]));
                assert!(r.contains(&[x[0] - 0.4 * h * nm[0], x[1] - 0.4 * h * nm[1]]));
            }
        }
    }

    #[test]
    fn patch_orientation_is_outward() {
        for r in [
            Region::ball(vec![0.0, 0.0, 1.0], 2.0).unwrap(),
            Region::boxed(vec![-1.0, -2.0, -3.0], vec![1.0, 2.0, 3.0]).unwrap(),
            Region::shell(vec![0.0, 0.0, 0.0], 0.5, 1.5).unwrap(),
        ] {
            for p in r.patches().unwrap() {
                for (s, t) in [(0.3, 0.2), (0.5, 0.5), (0.8, 0.9)] {
                    let (x, xs, xt) = p.frame(s, t);
                    let c = cross(&xs, &xt);
                    let nm = p.normal(s, t);
                    assert!(c.iter().zip(&nm).map(|(a, b)| a * b).sum::<f64>() > 0.0);
                    let out: Vec<f64> = (0..3).map(|i| x[i] + 1e-6 * nm[i]).collect();
                    let inn: Vec<f64> = (0..3).map(|i| x[i] - 1e-6 * nm[i]).collect();
                    assert!(!r.contains(&out) && r.contains(&inn));
                }
            }
        }
    }

    #[test]
    fn cube_patches_cover_the_surface() {
        let set = CubeSet::from_cells(3, 0.5, vec![0.0; 3], [vec![0, 0, 0], vec![1, 0, 0]]);
        let r = Region::cubes(set).unwrap();
        let patches = r.patches().unwrap();
        assert_eq!(patches.len(), 10);
        let area: f64 = patches.iter().map(Patch::area).sum();
        assert!((area - 10.0 * 0.25).abs() < 1e-12);
        for p in &patches {
            let (x, _, _) = p.frame(0.5, 0.5);
            let nm = p.normal(0.5, 0.5);
            let out: Vec<f64> = (0..3).map(|i| x[i] + 0.1 * nm[i]).collect();
            assert!(!r.contains(&out));
        }
    }
}
