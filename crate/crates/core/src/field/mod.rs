//! Vector fields defined by text expressions.
//!
//! A [`FieldDef`] holds one expression tree per component. Parameters are
//! substituted during parsing, so a parsed field is a closed, immutable
//! object that can be shared freely between threads.

mod catalog;
pub mod dual;
pub mod expr;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use thiserror::Error;

pub use catalog::{catalog, catalog_names};
use dual::{Dual, Scalar};
pub use expr::{Expr, Func};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("unknown identifier `{name}` at column {column}")]
    UnknownIdentifier { name: String, column: usize },
    #[error("expected {expected} components, found {found}")]
    ComponentCount { expected: usize, found: usize },
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("parameter `{0}` collides with a coordinate name")]
    ParameterShadowsCoordinate(String),
    #[error("parameter `{0}` is not finite")]
    NonFiniteParameter(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),
    #[error("catalog entry `{entry}` has no parameter `{param}`")]
    UnknownOverride { entry: String, param: String },
    #[error("point has dimension {found}, field has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("domain error in `{expr}`: {reason}")]
    Domain { expr: String, reason: String },
}

/// A parsed n-component vector field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldDef {
    dim: usize,
    components: Vec<Expr>,
    params: BTreeMap<String, f64>,
    names: Vec<String>,
}

/// Value and Jacobian of a field at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub point: Vec<f64>,
    pub value: Vec<f64>,
    pub jacobian: DMatrix<f64>,
}

/// Canonical coordinate names: `x, y, z` up to three dimensions, `x1..xn` beyond.
pub fn coordinate_names(n: usize) -> Vec<String> {
    const SHORT: [&str; 3] = ["x", "y", "z"];
    if n <= 3 {
        SHORT[..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{}", i)).collect()
    }
}

fn coordinate_aliases(n: usize) -> Vec<Vec<String>> {
    let short = coordinate_names(n.min(3));
    (0..n)
        .map(|i| {
            let mut a = vec![format!("x{}", i + 1)];
            if n <= 3 {
                a.push(short[i].clone());
            }
            a
        })
        .collect()
}

/// Parses a comma-separated list of `n` component expressions.
pub fn parse_field(
    source: &str,
    n: usize,
    params: &BTreeMap<String, f64>,
) -> Result<FieldDef, FieldError> {
    if n == 0 {
        return Err(FieldError::ZeroDimension);
    }
    let aliases = coordinate_aliases(n);
    for (k, v) in params {
        if aliases.iter().flatten().any(|a| a == k) {
            return Err(FieldError::ParameterShadowsCoordinate(k.clone()));
        }
        if !v.is_finite() {
            return Err(FieldError::NonFiniteParameter(k.clone()));
        }
    }
    let components = parse::parse_components(source, &aliases, params)?;
    if components.len() != n {
        return Err(FieldError::ComponentCount {
            expected: n,
            found: components.len(),
        });
    }
    Ok(FieldDef {
        dim: n,
        components,
        params: params.clone(),
        names: coordinate_names(n),
    })
}

impl FieldDef {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn coordinate_names(&self) -> &[String] {
        &self.names
    }

    /// The field `-F`, whose flow is the time reversal of this one.
    pub fn negated(&self) -> FieldDef {
        FieldDef {
            components: self.components.iter().cloned().map(Expr::neg).collect(),
            ..self.clone()
        }
    }

    /// The field `c·F`.
    pub fn scaled(&self, c: f64) -> FieldDef {
        FieldDef {
            components: self
                .components
                .iter()
                .cloned()
                .map(|e| Expr::Mul(Box::new(Expr::Num(c)), Box::new(e)))
                .collect(),
            ..self.clone()
        }
    }

    fn check_dim(&self, p: &[f64]) -> Result<(), FieldError> {
        if p.len() != self.dim {
            return Err(FieldError::DimensionMismatch {
                expected: self.dim,
                found: p.len(),
            });
        }
        Ok(())
    }

    /// Evaluates `F(p)`.
    pub fn eval(&self, p: &[f64]) -> Result<Vec<f64>, FieldError> {
        let mut out = vec![0.0; self.dim];
        self.eval_into(p, &mut out)?;
        Ok(out)
    }

    /// Evaluates `F(p)` into a caller-provided buffer.
    pub fn eval_into(&self, p: &[f64], out: &mut [f64]) -> Result<(), FieldError> {
        self.check_dim(p)?;
        for (o, c) in out.iter_mut().zip(&self.components) {
            let v = eval_expr(c, p, &self.names)?;
            if !v.is_finite() {
                return Err(self.domain(c, "non-finite value"));
            }
            *o = v;
        }
        Ok(())
    }

    /// Value and exact Jacobian at `p` by forward-mode propagation.
    pub fn jacobian(&self, p: &[f64]) -> Result<Jet, FieldError> {
        self.check_dim(p)?;
        let n = self.dim;
        let mut jac = DMatrix::zeros(n, n);
        let mut value = vec![0.0; n];
        let mut seeded: Vec<Dual> = p.iter().map(|&v| Dual::constant(v)).collect();
        for col in 0..n {
            seeded[col] = Dual::var(p[col]);
            for (row, c) in self.components.iter().enumerate() {
                let d = eval_expr(c, &seeded, &self.names)?;
                if !d.is_finite() {
                    return Err(self.domain(c, "non-finite derivative"));
                }
                jac[(row, col)] = d.dot;
                value[row] = d.val;
            }
            seeded[col] = Dual::constant(p[col]);
        }
        Ok(Jet {
            point: p.to_vec(),
            value,
            jacobian: jac,
        })
    }

    fn domain(&self, e: &Expr, reason: &str) -> FieldError {
        FieldError::Domain {
            expr: e.display(&self.names).to_string(),
            reason: reason.into(),
        }
    }
}

fn eval_expr<S: Scalar>(e: &Expr, x: &[S], names: &[String]) -> Result<S, FieldError> {
    let domain = |reason: &str| FieldError::Domain {
        expr: e.display(names).to_string(),
        reason: reason.to_string(),
    };
    Ok(match e {
        Expr::Num(v) => S::constant(*v),
        Expr::Var(i) => x[*i],
        Expr::Neg(a) => -eval_expr(a, x, names)?,
        Expr::Add(a, b) => eval_expr(a, x, names)? + eval_expr(b, x, names)?,
        Expr::Sub(a, b) => eval_expr(a, x, names)? - eval_expr(b, x, names)?,
        Expr::Mul(a, b) => eval_expr(a, x, names)? * eval_expr(b, x, names)?,
        Expr::Div(a, b) => {
            let den = eval_expr(b, x, names)?;
            if den.value() == 0.0 {
                return Err(domain("division by zero"));
            }
            eval_expr(a, x, names)? / den
        }
        Expr::Pow(a, k) => {
            let base = eval_expr(a, x, names)?;
            if *k < 0 && base.value() == 0.0 {
                return Err(domain("negative power of zero"));
            }
            base.powi(*k)
        }
        Expr::Call(f, a) => {
            let v = eval_expr(a, x, names)?;
            match f {
                Func::Sin => v.sin(),
                Func::Cos => v.cos(),
                Func::Exp => v.exp(),
                Func::Sqrt => {
                    if v.value() < 0.0 {
                        return Err(domain("square root of a negative number"));
                    }
                    v.sqrt()
                }
            }
        }
    })
}

impl fmt::Display for FieldDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", c.display(&self.names))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
        kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    fn lorenz(r: f64) -> FieldDef {
        parse_field(
            "sigma*(y-x), r*x-y-x*z, x*y-b*z",
            3,
            &params(&[("sigma", 10.0), ("r", r), ("b", 8.0 / 3.0)]),
        )
        .unwrap()
    }

    #[test]
    fn lorenz_parses_and_vanishes_at_origin() {
        let f = lorenz(28.0);
        assert_eq!(f.dim(), 3);
        assert_eq!(f.eval(&[0.0, 0.0, 0.0]).unwrap(), vec![0.0, 0.0, 0.0]);
        // Hand evaluation at (1, 2, 3): (10, 28-2-3, 2-8).
        let v = f.eval(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(v, vec![10.0, 23.0, 2.0 - 8.0]);
    }

    #[test]
    fn saddle_evaluation() {
        let f = parse_field("x, -y", 2, &BTreeMap::new()).unwrap();
        assert_eq!(f.eval(&[1.0, 1.0]).unwrap(), vec![1.0, -1.0]);
    }

    #[test]
    fn limit_cycle_on_unit_circle_is_tangent() {
        let f = parse_field("x*(1-(x^2+y^2))-y, y*(1-(x^2+y^2))+x", 2, &BTreeMap::new()).unwrap();
        assert_eq!(f.eval(&[1.0, 0.0]).unwrap(), vec![0.0, 1.0]);
    }

    #[test]
    fn malformed_input_is_a_syntax_error() {
        let err = parse_field("q*(", 1, &BTreeMap::new()).unwrap_err();
        assert!(matches!(err, FieldError::Syntax { .. }), "{:?}", err);
    }

    #[test]
    fn wrong_component_count() {
        let err = parse_field("x, y", 3, &BTreeMap::new()).unwrap_err();
        assert_eq!(
            err,
            FieldError::ComponentCount {
                expected: 3,
                found: 2
            }
        );
    }

    #[test]
    fn unknown_identifier_rejected() {
        let err = parse_field("x + k", 1, &BTreeMap::new()).unwrap_err();
        assert!(matches!(err, FieldError::UnknownIdentifier { .. }));
    }

    #[test]
    fn parameter_may_not_shadow_coordinate() {
        let err = parse_field("x", 1, &params(&[("x", 1.0)])).unwrap_err();
        assert_eq!(err, FieldError::ParameterShadowsCoordinate("x".into()));
    }

    #[test]
    fn domain_errors_name_the_subexpression() {
        let f = parse_field("sqrt(x - 2), 1/y", 2, &BTreeMap::new()).unwrap();
        match f.eval(&[1.0, 1.0]) {
            Err(FieldError::Domain { expr, .. }) => assert_eq!(expr, "sqrt((x - 2))"),
            other => panic!("{:?}", other),
        }
        match f.eval(&[3.0, 0.0]) {
            Err(FieldError::Domain { expr, reason }) => {
                assert_eq!(expr, "(1 / y)");
                assert!(reason.contains("division"));
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn lorenz_jacobian_at_origin() {
        let (s, r, b) = (10.0, 28.0, 8.0 / 3.0);
        let jet = lorenz(r).jacobian(&[0.0, 0.0, 0.0]).unwrap();
        let expect = DMatrix::from_row_slice(3, 3, &[-s, s, 0.0, r, -1.0, 0.0, 0.0, 0.0, -b]);
        assert_eq!(jet.jacobian, expect);
        assert_eq!(jet.value, vec![0.0; 3]);
    }

    #[test]
    fn linear_field_jacobian_is_its_matrix() {
        let p = params(&[("a", 1.5), ("b", -2.0), ("c", 0.25), ("d", 4.0)]);
        let f = parse_field("a*x+b*y, c*x+d*y", 2, &p).unwrap();
        for pt in [[0.0, 0.0], [3.0, -7.0], [1e3, 2e-3]] {
            let jet = f.jacobian(&pt).unwrap();
            assert_eq!(
                jet.jacobian,
                DMatrix::from_row_slice(2, 2, &[1.5, -2.0, 0.25, 4.0])
            );
        }
    }

    #[test]
    fn jacobian_value_matches_eval() {
        let f = lorenz(24.0);
        let p = [1.3, -0.4, 7.0];
        assert_eq!(f.jacobian(&p).unwrap().value, f.eval(&p).unwrap());
    }

    #[test]
    fn sqrt_at_zero_has_no_finite_derivative() {
        let f = parse_field("sqrt(x)", 1, &BTreeMap::new()).unwrap();
        assert_eq!(f.eval(&[0.0]).unwrap(), vec![0.0]);
        assert!(matches!(f.jacobian(&[0.0]), Err(FieldError::Domain { .. })));
    }

    #[test]
    fn negation_and_scaling() {
        let f = parse_field("x - y, x*y", 2, &BTreeMap::new()).unwrap();
        assert_eq!(f.negated().eval(&[2.0, 3.0]).unwrap(), vec![1.0, -6.0]);
        assert_eq!(f.scaled(2.0).eval(&[2.0, 3.0]).unwrap(), vec![-2.0, 12.0]);
    }

    #[test]
    fn display_round_trips() {
        let f = lorenz(24.0);
        let printed = f.to_string();
        let again = parse_field(&printed, 3, &BTreeMap::new()).unwrap();
        assert_eq!(again.components(), f.components());
    }

    #[test]
    fn long_coordinate_names() {
        let f = parse_field("x2, x3, x4, -x1", 4, &BTreeMap::new()).unwrap();
        assert_eq!(
            f.eval(&[1.0, 2.0, 3.0, 4.0]).unwrap(),
            vec![2.0, 3.0, 4.0, -1.0]
        );
        assert_eq!(f.to_string(), "x2, x3, x4, (-x1)");
    }
}
