//! Full-cube sets on a uniform grid and their cubical complexes.
//!
//! Elementary cells use doubled integer coordinates: an even entry `2k` is
//! the degenerate interval `[k, k]`, an odd entry `2k + 1` the unit interval
//! `[k, k + 1]`. A full n-cube at lattice index `k` is therefore the cell
//! with every coordinate odd, and the dimension of a cell is the number of
//! odd entries.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::block::Region;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CubicalError {
    #[error("complexes have different ambient dimensions ({0} and {1})")]
    DimensionMismatch(usize, usize),
    #[error("{0} cells of the pair's subspace are missing from the ambient complex")]
    NotSubcomplex(usize),
}

/// A finite set of full n-cubes of width `h`. Cube `k` occupies
/// `origin + h·[k, k + 1]` along each axis.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeSet {
    dim: usize,
    h: f64,
    origin: Vec<f64>,
    cells: BTreeSet<Vec<i64>>,
}

impl CubeSet {
    pub fn new(dim: usize, h: f64, origin: Vec<f64>) -> Self {
        assert!(h > 0.0, "cell width must be positive");
        assert_eq!(origin.len(), dim);
        CubeSet {
            dim,
            h,
            origin,
            cells: BTreeSet::new(),
        }
    }

    pub fn from_cells(
        dim: usize,
        h: f64,
        origin: Vec<f64>,
        cells: impl IntoIterator<Item = Vec<i64>>,
    ) -> Self {
        let mut s = Self::new(dim, h, origin);
        for c in cells {
            s.insert(c);
        }
        s
    }

    pub fn insert(&mut self, cell: Vec<i64>) -> bool {
        assert_eq!(cell.len(), self.dim);
        self.cells.insert(cell)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn width(&self) -> f64 {
        self.h
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn cells(&self) -> &BTreeSet<Vec<i64>> {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains_cell(&self, cell: &[i64]) -> bool {
        self.cells.contains(cell)
    }

    pub fn same_grid(&self, other: &CubeSet) -> bool {
        self.dim == other.dim && self.h == other.h && self.origin == other.origin
    }

    pub fn center(&self, cell: &[i64]) -> Vec<f64> {
        cell.iter()
            .zip(&self.origin)
            .map(|(&k, &o)| o + (k as f64 + 0.5) * self.h)
            .collect()
    }

    /// Lattice index of the cube containing `p` (half-open on the upper side).
    pub fn cell_of(&self, p: &[f64]) -> Vec<i64> {
        p.iter()
            .zip(&self.origin)
            .map(|(&x, &o)| ((x - o) / self.h).floor() as i64)
            .collect()
    }

    /// Whether `p` lies in the closed union of the cubes.
    pub fn contains_point(&self, p: &[f64]) -> bool {
        // A point on a shared face belongs to every cube touching it.
        let base = self.cell_of(p);
        let mut on_lower = Vec::with_capacity(self.dim);
        for (i, (&x, &o)) in p.iter().zip(&self.origin).enumerate() {
            let rel = (x - o) / self.h - base[i] as f64;
            on_lower.push(rel == 0.0);
        }
        let mut probe = base.clone();
        for mask in 0..(1usize << self.dim) {
            let mut valid = true;
            for i in 0..self.dim {
                let shift = (mask >> i) & 1 == 1;
                if shift && !on_lower[i] {
                    valid = false;
                    break;
                }
                probe[i] = base[i] - shift as i64;
            }
            if valid && self.cells.contains(&probe) {
                return true;
            }
        }
        false
    }

    /// Bounding box of the union, as `(lo, hi)` corners.
    pub fn bounds(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let first = self.cells.iter().next()?;
        let mut lo_k = first.clone();
        let mut hi_k = first.clone();
        for c in &self.cells {
            for i in 0..self.dim {
                lo_k[i] = lo_k[i].min(c[i]);
                hi_k[i] = hi_k[i].max(c[i]);
            }
        }
        let lo = (0..self.dim)
            .map(|i| self.origin[i] + lo_k[i] as f64 * self.h)
            .collect();
        let hi = (0..self.dim)
            .map(|i| self.origin[i] + (hi_k[i] + 1) as f64 * self.h)
            .collect();
        Some((lo, hi))
    }
}

/// A face-closed set of elementary cells, graded by dimension.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CubicalComplex {
    dim: usize,
    by_dim: Vec<HashSet<Vec<i64>>>,
}

impl CubicalComplex {
    pub fn empty(dim: usize) -> Self {
        CubicalComplex {
            dim,
            by_dim: vec![HashSet::new(); dim + 1],
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Number of cells of each dimension `0..=n`.
    pub fn counts(&self) -> Vec<usize> {
        self.by_dim.iter().map(HashSet::len).collect()
    }

    pub fn contains(&self, cell: &[i64]) -> bool {
        let k = cell_dim(cell);
        self.by_dim.get(k).is_some_and(|s| s.contains(cell))
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.iter().all(HashSet::is_empty)
    }

    /// Adds `cell` together with all of its faces.
    pub fn insert_closed(&mut self, cell: &[i64]) {
        let odd: Vec<usize> = (0..cell.len())
            .filter(|&i| cell[i].rem_euclid(2) == 1)
            .collect();
        let mut face = cell.to_vec();
        let combos = 3usize.pow(odd.len() as u32);
        for code in 0..combos {
            let mut c = code;
            for &i in &odd {
                face[i] = match c % 3 {
                    0 => cell[i],
                    1 => cell[i] - 1,
                    _ => cell[i] + 1,
                };
                c /= 3;
            }
            let k = cell_dim(&face);
            if !self.by_dim[k].contains(&face) {
                self.by_dim[k].insert(face.clone());
            }
        }
    }

    fn cells(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.by_dim.iter().flatten()
    }
}

fn cell_dim(cell: &[i64]) -> usize {
    cell.iter().filter(|c| c.rem_euclid(2) == 1).count()
}

/// Doubled coordinates of a full cube.
pub fn cube_cell(k: &[i64]) -> Vec<i64> {
    k.iter().map(|&v| 2 * v + 1).collect()
}

/// Cubes whose centers lie in the closed region. The grid is anchored so
/// that the region's center is itself a cube center. An empty result is
/// returned as an empty set.
pub fn rasterize(region: &Region, h: f64) -> CubeSet {
    assert!(h > 0.0, "cell width must be positive");
    let n = region.dim();
    let center = region.center();
    let origin: Vec<f64> = center.iter().map(|c| c - 0.5 * h).collect();
    let mut out = CubeSet::new(n, h, origin);
    let (lo, hi) = region.bounding_box();
    let ranges: Vec<(i64, i64)> = (0..n)
        .map(|i| {
            let a = ((lo[i] - center[i]) / h).floor() as i64 - 1;
            let b = ((hi[i] - center[i]) / h).ceil() as i64 + 1;
            (a, b)
        })
        .collect();
    let mut k: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    let mut p = vec![0.0; n];
    loop {
        for i in 0..n {
            p[i] = center[i] + k[i] as f64 * h;
        }
        if region.contains(&p) {
            out.insert(k.clone());
        }
        // Odometer increment.
        let mut axis = 0;
        loop {
            if axis == n {
                return out;
            }
            k[axis] += 1;
            if k[axis] <= ranges[axis].1 {
                break;
            }
            k[axis] = ranges[axis].0;
            axis += 1;
        }
    }
}

/// Closes a cube set under faces.
pub fn close(c: &CubeSet) -> CubicalComplex {
    let mut x = CubicalComplex::empty(c.dim);
    for k in &c.cells {
        x.insert_closed(&cube_cell(k));
    }
    x
}

/// Closure of a collection of elementary cells.
pub fn close_cells<'a>(
    dim: usize,
    cells: impl IntoIterator<Item = &'a Vec<i64>>,
) -> CubicalComplex {
    let mut x = CubicalComplex::empty(dim);
    for c in cells {
        x.insert_closed(c);
    }
    x
}

/// Alternating cell count `Σ (-1)^k |cells_k|`.
pub fn euler(x: &CubicalComplex) -> i64 {
    x.by_dim
        .iter()
        .enumerate()
        .map(|(k, s)| {
            if k % 2 == 0 {
                s.len() as i64
            } else {
                -(s.len() as i64)
            }
        })
        .sum()
}

/// `χ(X, A) = χ(X) − χ(A)` for a subcomplex `A ⊆ X`.
pub fn euler_pair(x: &CubicalComplex, a: &CubicalComplex) -> Result<i64, CubicalError> {
    if x.dim != a.dim {
        return Err(CubicalError::DimensionMismatch(x.dim, a.dim));
    }
    let missing = a.cells().filter(|c| !x.contains(c)).count();
    if missing > 0 {
        return Err(CubicalError::NotSubcomplex(missing));
    }
    Ok(euler(x) - euler(a))
}

/// Face-adjacency components, each sorted, ordered by least member.
pub fn components(c: &CubeSet) -> Vec<Vec<Vec<i64>>> {
    let mut seen: HashSet<&Vec<i64>> = HashSet::new();
    let mut out = Vec::new();
    // BTreeSet iteration is lexicographic, so each new component starts at
    // its least cell and components come out in order of least cell.
    for start in &c.cells {
        if seen.contains(start) {
            continue;
        }
        let mut comp = Vec::new();
        let mut queue = VecDeque::from([start.clone()]);
        seen.insert(start);
        while let Some(cur) = queue.pop_front() {
            let mut nb = cur.clone();
            for i in 0..c.dim {
                for d in [-1, 1] {
                    nb[i] = cur[i] + d;
                    if let Some(member) = c.cells.get(&nb) {
                        if seen.insert(member) {
                            queue.push_back(member.clone());
                        }
                    }
                }
                nb[i] = cur[i];
            }
            comp.push(cur);
        }
        comp.sort();
        out.push(comp);
    }
    out
}

/// A codimension-one face on the boundary of a cube set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundaryFace {
    /// Doubled coordinates of the face.
    pub cell: Vec<i64>,
    /// Lattice index of the member cube the face belongs to.
    pub cube: Vec<i64>,
    /// Axis of the outward normal.
    pub axis: usize,
    /// Sign of the outward normal, `+1` or `-1`.
    pub sign: i8,
}

impl BoundaryFace {
    pub fn normal(&self, dim: usize) -> Vec<f64> {
        let mut n = vec![0.0; dim];
        n[self.axis] = self.sign as f64;
        n
    }
}

/// Faces of member cubes not shared with another member, with outward normals.
pub fn boundary_faces(c: &CubeSet) -> Vec<BoundaryFace> {
    let mut out = Vec::new();
    for k in &c.cells {
        let mut nb = k.clone();
        for axis in 0..c.dim {
            for sign in [-1i8, 1] {
                nb[axis] = k[axis] + sign as i64;
                if !c.cells.contains(&nb) {
                    let mut cell = cube_cell(k);
                    cell[axis] += sign as i64;
                    out.push(BoundaryFace {
                        cell,
                        cube: k.clone(),
                        axis,
                        sign,
                    });
                }
            }
            nb[axis] = k[axis];
        }
    }
    out
}

/// Groups boundary faces into connected pieces (faces sharing a
/// codimension-two cell), ordered by least face cell.
pub fn boundary_components(c: &CubeSet) -> Vec<Vec<BoundaryFace>> {
    let mut faces = boundary_faces(c);
    faces.sort();
    let n = faces.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let mut owner: HashMap<Vec<i64>, usize> = HashMap::new();
    for (fi, f) in faces.iter().enumerate() {
        for sub in codim_one_faces(&f.cell) {
            match owner.get(&sub) {
                Some(&other) => {
                    let (a, b) = (find(&mut parent, fi), find(&mut parent, other));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
                None => {
                    owner.insert(sub, fi);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<BoundaryFace>> = BTreeMap::new();
    for (fi, f) in faces.into_iter().enumerate() {
        let root = find(&mut parent, fi);
        groups.entry(root).or_default().push(f);
    }
    groups.into_values().collect()
}

/// Immediate faces (one dimension lower) of an elementary cell.
pub fn codim_one_faces(cell: &[i64]) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for i in 0..cell.len() {
        if cell[i].rem_euclid(2) == 1 {
            for d in [-1, 1] {
                let mut f = cell.to_vec();
                f[i] += d;
                out.push(f);
            }
        }
    }
    out
}
