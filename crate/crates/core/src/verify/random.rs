//! Seeded random polynomial planar fields on circles that avoid their zeros.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::block::{dist, Region};
use crate::degree::{zero_count_degree, DegreeOptions};
use crate::field::{parse_field, FieldDef};

/// A random planar field together with a disk whose boundary keeps clear
/// of the field's zeros.
#[derive(Debug, Clone)]
pub struct PlanarCase {
    pub source: String,
    pub field: FieldDef,
    pub region: Region,
    /// Zeros found in the doubled disk, with their indices.
    pub zeros: Vec<(Vec<f64>, i64)>,
}

impl PlanarCase {
    /// Zeros strictly inside the disk.
    pub fn zeros_inside(&self) -> Vec<&(Vec<f64>, i64)> {
        self.zeros
            .iter()
            .filter(|z| self.region.contains(&z.0))
            .collect()
    }

    /// χ(K) read off the zero structure: an empty disk has K = ∅ and a disk
    /// around a single nondegenerate zero has K a point. With two or more
    /// zeros the invariant set depends on their connections, so no value
    /// is returned.
    pub fn chi_k_from_zeros(&self) -> Option<i64> {
        match self.zeros_inside().len() {
            0 => Some(0),
            1 => Some(1),
            _ => None,
        }
    }
}

fn monomial(i: u32, j: u32) -> String {
    let pow = |v: &str, k: u32| match k {
        0 => None,
        1 => Some(v.to_string()),
        _ => Some(format!("{}^{}", v, k)),
    };
    let factors: Vec<String> = [pow("x", i), pow("y", j)].into_iter().flatten().collect();
    factors.join("*")
}

fn polynomial(rng: &mut impl Rng, degree: u32) -> String {
    let mut s = String::new();
    for total in 0..=degree {
        for i in 0..=total {
            let c: f64 = (rng.gen_range(-1.0..1.0f64) * 1000.0).round() / 1000.0;
            if c == 0.0 {
                continue;
            }
            let m = monomial(i, total - i);
            let mag = c.abs();
            let term = if m.is_empty() {
                format!("{}", mag)
            } else {
                format!("{}*{}", mag, m)
            };
            if s.is_empty() {
                s = if c < 0.0 { format!("-{}", term) } else { term };
            } else {
                s.push_str(if c < 0.0 { " - " } else { " + " });
                s.push_str(&term);
            }
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// A polynomial planar field of total degree between 1 and `max_degree`.
pub fn random_planar_field(rng: &mut impl Rng, max_degree: u32) -> (String, FieldDef) {
    let d = rng.gen_range(1..=max_degree.max(1));
    let src = format!("{}, {}", polynomial(rng, d), polynomial(rng, d));
    let f = parse_field(&src, 2, &BTreeMap::new()).expect("generated polynomial parses");
    (src, f)
}

/// `count` cases from `seed`. A candidate is kept when Newton finds only
/// nondegenerate zeros in the doubled disk, none within 5% of the circle,
/// and `|F|` on the circle stays above `1e-3·max|F|`.
pub fn random_planar_cases(seed: u64, count: usize) -> Vec<PlanarCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = DegreeOptions::default();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (source, field) = random_planar_field(&mut rng, 3);
        let c = vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let r: f64 = rng.gen_range(0.5..1.5);
        let Ok(big) = Region::ball(c.clone(), 2.0 * r) else {
            continue;
        };
        let Ok(z) = zero_count_degree(&field, &big, &opts) else {
            continue;
        };
        if z.zeros
            .iter()
            .any(|p| (dist(&p.point, &c) - r).abs() < 0.05 * r)
        {
            continue;
        }
        let norms: Vec<f64> = (0..256)
            .filter_map(|k| {
                let a = TAU * k as f64 / 256.0;
                let v = field.eval(&[c[0] + r * a.cos(), c[1] + r * a.sin()]).ok()?;
                Some(v[0].hypot(v[1]))
            })
            .collect();
        let max = norms.iter().cloned().fold(0.0, f64::max);
        if norms.len() < 256 || norms.iter().any(|&n| !(n > 1e-3 * max)) {
            continue;
        }
        let region = Region::ball(c, r).expect("positive radius");
        let zeros = z.zeros.into_iter().map(|z| (z.point, z.index)).collect();
        out.push(PlanarCase {
            source,
            field,
            region,
            zeros,
        });
    }
    out
}
