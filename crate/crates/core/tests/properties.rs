//! Invariants checked over generated inputs.

use std::collections::BTreeMap;

use proptest::prelude::*;

use brouwer::block::{
    classify_boundary, tangency_components_2d, ComponentVerdict, Density, Region,
    DEFAULT_TANGENCY_TOL,
};
use brouwer::cubical::{close, euler, rasterize};
use brouwer::degree::{degree, winding_degree, zero_count_degree, DegreeOptions, Method};
use brouwer::field::{parse_field, FieldDef};
use brouwer::verify::random_planar_cases;

fn field(src: &str, n: usize) -> FieldDef {
    parse_field(src, n, &BTreeMap::new()).unwrap_or_else(|e| panic!("{}: {}", src, e))
}

/// Smooth expressions in x, y, z that stay bounded on [−1, 1]³.
fn expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("x".to_string()),
        Just("y".to_string()),
        Just("z".to_string()),
        (-20i32..20).prop_map(|k| format!("{}", k as f64 / 4.0)),
    ];
    leaf.prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({} + {})", a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({} - {})", a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({} * {})", a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{} / (2 + sin({}))", a, b)),
            inner.clone().prop_map(|a| format!("sin({})", a)),
            inner.clone().prop_map(|a| format!("cos({})", a)),
            inner.clone().prop_map(|a| format!("exp(sin({}))", a)),
            inner.clone().prop_map(|a| format!("sqrt(1 + ({})^2)", a)),
            inner.clone().prop_map(|a| format!("-({})^3", a)),
        ]
    })
}

fn point3() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-1.0..1.0f64, 3)
}

fn invertible(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-2.0..2.0f64, n * n).prop_filter("well conditioned", move |m| {
        let d = if n == 2 {
            m[0] * m[3] - m[1] * m[2]
        } else {
            m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6])
                + m[2] * (m[3] * m[7] - m[4] * m[6])
        };
        d.abs() > 0.2
    })
}

fn linear_source(m: &[f64], n: usize) -> String {
    let vars = ["x", "y", "z"];
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| format!("({})*{}", m[i * n + j], vars[j]))
                .collect::<Vec<_>>()
                .join(" + ")
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn det_sign(m: &[f64], n: usize) -> i64 {
    let d = if n == 2 {
        m[0] * m[3] - m[1] * m[2]
    } else {
        m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6])
            + m[2] * (m[3] * m[7] - m[4] * m[6])
    };
    d.signum() as i64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn display_reparses_to_the_same_function(src in expr(), p in point3()) {
        let f = field(&format!("{}, 0, 0", src), 3);
        let g = field(&f.to_string(), 3);
        let (a, b) = (f.eval(&p).unwrap()[0], g.eval(&p).unwrap()[0]);
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{} vs {}: {} {}", src, f, a, b);
    }

    #[test]
    fn forward_mode_matches_central_differences(a in expr(), b in expr(), c in expr(), p in point3()) {
        let f = field(&format!("{}, {}, {}", a, b, c), 3);
        let jet = f.jacobian(&p).unwrap();
        for j in 0..3 {
            let h = 1e-5;
            let (mut up, mut dn) = (p.clone(), p.clone());
            up[j] += h;
            dn[j] -= h;
            let (fu, fd) = (f.eval(&up).unwrap(), f.eval(&dn).unwrap());
            for i in 0..3 {
                let fdiff = (fu[i] - fd[i]) / (2.0 * h);
                let ad = jet.jacobian[(i, j)];
                prop_assert!((ad - fdiff).abs() <= 1e-5 * ad.abs().max(1.0), "∂{}/∂{}: {} vs {}", i, j, ad, fdiff);
            }
        }
    }

    #[test]
    fn linear_degree_is_sign_det_and_homotopy_invariant(m in invertible(2), c in 0.1..10.0f64) {
        let f = field(&linear_source(&m, 2), 2);
        let n: Region = "ball:0,0:1".parse().unwrap();
        let opts = DegreeOptions::default();
        let d = winding_degree(&f, &n, &opts).unwrap().degree;
        prop_assert_eq!(d, det_sign(&m, 2));
        prop_assert_eq!(winding_degree(&f.scaled(c), &n, &opts).unwrap().degree, d);
        prop_assert_eq!(winding_degree(&f.negated(), &n, &opts).unwrap().degree, d);
    }

    #[test]
    fn cube_regions_have_euler_one(cx in -1.0..1.0f64, cy in -1.0..1.0f64, r in 0.5..2.0f64, k in 8usize..16) {
        let h = r / k as f64;
        for region in [format!("ball:{},{}:{}", cx, cy, r), format!("box:{},{}:{},{}", cx - r, cy - r, cx + r, cy + 0.5 * r)] {
            let n: Region = region.parse().unwrap();
            prop_assert_eq!(euler(&close(&rasterize(&n, h))), 1);
            prop_assert_eq!(euler(&close(&rasterize(&n, h / 2.0))), 1);
        }
    }

    #[test]
    fn saddle_classification_is_stable_under_doubling(a in 0.2..3.0f64, b in 0.2..3.0f64, sx in any::<bool>(), sy in any::<bool>()) {
        let (a, b) = (if sx { a } else { -a }, if sy { b } else { -b });
        let f = field(&format!("{}*x, {}*y", a, b), 2);
        let n: Region = "box:-1,-1:1,1".parse().unwrap();
        let base = classify_boundary(&f, &n, Density::default(), DEFAULT_TANGENCY_TOL).unwrap();
        let fine = classify_boundary(&f, &n, Density::default().doubled(), DEFAULT_TANGENCY_TOL).unwrap();
        let verdicts = |b: &brouwer::block::BlockBoundary| b.components.iter().map(|c| c.verdict).collect::<Vec<_>>();
        prop_assert_eq!(verdicts(&base), verdicts(&fine));
        let t0 = tangency_components_2d(&base).unwrap().count;
        prop_assert_eq!(t0, tangency_components_2d(&fine).unwrap().count);
        let expected = if sx == sy { 0 } else { 4 };
        prop_assert_eq!(t0, expected);
        if sx && sy {
            prop_assert_eq!(verdicts(&base), vec![ComponentVerdict::Outward]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn three_dimensional_homotopy(m in invertible(3), c in 0.1..10.0f64) {
        let f = field(&linear_source(&m, 3), 3);
        let n: Region = "ball:0,0,0:1".parse().unwrap();
        let opts = DegreeOptions::default();
        let d = degree(&f, &n, Method::Kronecker, &opts).unwrap().degree;
        prop_assert_eq!(d, det_sign(&m, 3));
        prop_assert_eq!(degree(&f.scaled(c), &n, Method::Kronecker, &opts).unwrap().degree, d);
        // Reversing a field in odd dimension flips the degree.
        prop_assert_eq!(degree(&f.negated(), &n, Method::Kronecker, &opts).unwrap().degree, -d);
    }

    #[test]
    fn winding_matches_zero_count_on_random_fields(seed in any::<u64>()) {
        let case = random_planar_cases(seed, 1).pop().unwrap();
        let opts = DegreeOptions::default();
        let w = winding_degree(&case.field, &case.region, &opts).unwrap().degree;
        let z = zero_count_degree(&case.field, &case.region, &opts).unwrap().degree;
        prop_assert_eq!(w, z, "{} on {}", case.source, case.region);
    }
}
