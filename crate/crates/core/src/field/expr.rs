//! Expression trees for vector-field components.

use std::fmt;

/// Elementary functions admitted by the field grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sqrt,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "exp" => Some(Func::Exp),
            "sqrt" => Some(Func::Sqrt),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
        }
    }
}

/// A component expression. Parameters are already folded into `Num`
/// leaves, so evaluation needs nothing beyond the point.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    /// Coordinate by zero-based index.
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

impl Expr {
    #[allow(clippy::should_implement_trait)]
    pub fn neg(e: Expr) -> Expr {
        // Negated literals fold so that printing and re-parsing is stable.
        match e {
            Expr::Num(v) => Expr::Num(-v),
            other => Expr::Neg(Box::new(other)),
        }
    }

    /// Largest coordinate index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Num(_) => None,
            Expr::Var(i) => Some(*i),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.max_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                match (a.max_var(), b.max_var()) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                }
            }
        }
    }

    /// Value of a coordinate-free subtree.
    pub fn constant_value(&self) -> Option<f64> {
        match self {
            Expr::Num(v) => Some(*v),
            Expr::Var(_) => None,
            Expr::Neg(a) => a.constant_value().map(|v| -v),
            Expr::Add(a, b) => Some(a.constant_value()? + b.constant_value()?),
            Expr::Sub(a, b) => Some(a.constant_value()? - b.constant_value()?),
            Expr::Mul(a, b) => Some(a.constant_value()? * b.constant_value()?),
            Expr::Div(a, b) => Some(a.constant_value()? / b.constant_value()?),
            Expr::Pow(a, k) => Some(a.constant_value()?.powi(*k)),
            Expr::Call(f, a) => {
                let v = a.constant_value()?;
                Some(match f {
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Exp => v.exp(),
                    Func::Sqrt => v.sqrt(),
                })
            }
        }
    }

    /// Renders the tree with the given coordinate names. Every compound
    /// node is parenthesized, so the output re-parses to the same tree.
    pub fn display<'a>(&'a self, names: &'a [String]) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, names }
    }
}

pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    names: &'a [String],
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self.expr, self.names)
    }
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr, names: &[String]) -> fmt::Result {
    match e {
        Expr::Num(v) => {
            if v.is_sign_negative() {
                write!(f, "(-{})", -v)
            } else {
                write!(f, "{}", v)
            }
        }
        Expr::Var(i) => match names.get(*i) {
            Some(name) => f.write_str(name),
            None => write!(f, "x{}", i + 1),
        },
        Expr::Neg(a) => {
            f.write_str("(-")?;
            write_expr(f, a, names)?;
            f.write_str(")")
        }
        Expr::Add(a, b) => write_binary(f, a, " + ", b, names),
        Expr::Sub(a, b) => write_binary(f, a, " - ", b, names),
        Expr::Mul(a, b) => write_binary(f, a, " * ", b, names),
        Expr::Div(a, b) => write_binary(f, a, " / ", b, names),
        Expr::Pow(a, k) => {
            f.write_str("(")?;
            write_expr(f, a, names)?;
            write!(f, "^{})", k)
        }
        Expr::Call(func, a) => {
            write!(f, "{}(", func.name())?;
            write_expr(f, a, names)?;
            f.write_str(")")
        }
    }
}

fn write_binary(
    f: &mut fmt::Formatter<'_>,
    a: &Expr,
    op: &str,
    b: &Expr,
    names: &[String],
) -> fmt::Result {
    f.write_str("(")?;
    write_expr(f, a, names)?;
    f.write_str(op)?;
    write_expr(f, b, names)?;
    f.write_str(")")
}
