//! Recursive-descent parser for comma-separated component expressions.
//!
//! ```text
//! list    := expr (',' expr)*
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?
//! primary := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! Exponents must reduce to integer constants. Identifiers resolve against
//! the coordinate names first, then the parameter map.

use std::collections::BTreeMap;

use super::expr::{Expr, Func};
use super::FieldError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v) => format!("number {}", v),
        Tok::Ident(s) => format!("identifier `{}`", s),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::End => "end of input".into(),
    }
}

fn syntax(column: usize, message: impl Into<String>) -> FieldError {
    FieldError::Syntax {
        column,
        message: message.into(),
    }
}

/// Tokens paired with their 1-based column.
fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, FieldError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let col = i + 1;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            // Optional exponent, only when followed by a digit (after an optional sign).
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let v: f64 = text
                .parse()
                .map_err(|_| syntax(col, format!("malformed number `{}`", text)))?;
            out.push((Tok::Num(v), col));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), col));
            continue;
        }
        return Err(syntax(col, format!("unexpected character `{}`", c)));
    }
    out.push((Tok::End, src.len() + 1));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    coords: &'a [String],
    params: &'a BTreeMap<String, f64>,
    // Name resolution failures are reported only once the whole input is
    // known to be syntactically valid.
    unresolved: Option<(String, usize)>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), FieldError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(
                self.column(),
                format!(
                    "expected {}, found {}",
                    describe(&want),
                    describe(self.peek())
                ),
            ))
        }
    }

    fn list(&mut self) -> Result<Vec<Expr>, FieldError> {
        let mut items = vec![self.expr()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            items.push(self.expr()?);
        }
        if *self.peek() != Tok::End {
            return Err(syntax(
                self.column(),
                format!("unexpected {}", describe(self.peek())),
            ));
        }
        Ok(items)
    }

    fn expr(&mut self) -> Result<Expr, FieldError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, FieldError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, FieldError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(Expr::neg(self.unary()?))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, FieldError> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let col = self.column();
        let exponent = self.unary()?;
        let k = exponent
            .constant_value()
            .filter(|v| v.fract() == 0.0 && v.abs() <= i32::MAX as f64)
            .ok_or_else(|| syntax(col, "exponent must be an integer constant"))?;
        Ok(Expr::Pow(Box::new(base), k as i32))
    }

    fn primary(&mut self) -> Result<Expr, FieldError> {
        let col = self.column();
        match self.bump() {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if *self.peek() == Tok::LParen {
                    self.bump();
                    let arg = self.expr()?;
                    self.expect(Tok::RParen)?;
                    return match Func::from_name(&name) {
                        Some(func) => Ok(Expr::Call(func, Box::new(arg))),
                        None => Ok(self.unresolved(name, col)),
                    };
                }
                if let Some(i) = self.coords.iter().position(|c| *c == name) {
                    return Ok(Expr::Var(i));
                }
                if let Some(&v) = self.params.get(&name) {
                    return Ok(Expr::Num(v));
                }
                Ok(self.unresolved(name, col))
            }
            other => Err(syntax(col, format!("unexpected {}", describe(&other)))),
        }
    }

    fn unresolved(&mut self, name: String, column: usize) -> Expr {
        self.unresolved.get_or_insert((name, column));
        Expr::Num(f64::NAN)
    }
}

/// Parses `src` into component trees, resolving coordinates by index.
///
/// `coord_aliases` lists, per coordinate index, every accepted spelling.
pub(crate) fn parse_components(
    src: &str,
    coord_aliases: &[Vec<String>],
    params: &BTreeMap<String, f64>,
) -> Result<Vec<Expr>, FieldError> {
    // Flatten the alias table so the parser sees one name per slot and maps
    // back to the coordinate index afterwards.
    let mut names = Vec::new();
    let mut index_of = Vec::new();
    for (i, aliases) in coord_aliases.iter().enumerate() {
        for a in aliases {
            names.push(a.clone());
            index_of.push(i);
        }
    }
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        coords: &names,
        params,
        unresolved: None,
    };
    let items = p.list()?;
    if let Some((name, column)) = p.unresolved {
        return Err(FieldError::UnknownIdentifier { name, column });
    }
    Ok(items.into_iter().map(|e| remap(e, &index_of)).collect())
}

fn remap(e: Expr, index_of: &[usize]) -> Expr {
    let r = |b: Box<Expr>| Box::new(remap(*b, index_of));
    match e {
        Expr::Var(i) => Expr::Var(index_of[i]),
        Expr::Num(v) => Expr::Num(v),
        Expr::Neg(a) => Expr::Neg(r(a)),
        Expr::Add(a, b) => Expr::Add(r(a), r(b)),
        Expr::Sub(a, b) => Expr::Sub(r(a), r(b)),
        Expr::Mul(a, b) => Expr::Mul(r(a), r(b)),
        Expr::Div(a, b) => Expr::Div(r(a), r(b)),
        Expr::Pow(a, k) => Expr::Pow(r(a), k),
        Expr::Call(f, a) => Expr::Call(f, r(a)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Vec<Vec<String>> {
        vec![vec!["x".into(), "x1".into()], vec!["y".into(), "x2".into()]]
    }

    #[test]
    fn precedence_and_associativity() {
        let p = BTreeMap::new();
        let e = parse_components("1 - 2 - 3", &xy(), &p).unwrap();
        assert_eq!(e[0].constant_value(), Some(-4.0));
        let e = parse_components("2 * 3 ^ 2", &xy(), &p).unwrap();
        assert_eq!(e[0].constant_value(), Some(18.0));
        let e = parse_components("-2^2", &xy(), &p).unwrap();
        assert_eq!(e[0].constant_value(), Some(-4.0));
        let e = parse_components("2^-1", &xy(), &p).unwrap();
        assert_eq!(e[0].constant_value(), Some(0.5));
        let e = parse_components("8 / 2 / 2", &xy(), &p).unwrap();
        assert_eq!(e[0].constant_value(), Some(2.0));
    }

    #[test]
    fn aliases_map_to_same_index() {
        let p = BTreeMap::new();
        let a = parse_components("x*y", &xy(), &p).unwrap();
        let b = parse_components("x1*x2", &xy(), &p).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn scientific_literals() {
        let p = BTreeMap::new();
        let e = parse_components("1.5e-3 + 2E2", &xy(), &p).unwrap();
        assert_eq!(e[0].constant_value(), Some(200.0015));
    }

    #[test]
    fn error_positions() {
        let p = BTreeMap::new();
        match parse_components("x + * y", &xy(), &p) {
            Err(FieldError::Syntax { column, .. }) => assert_eq!(column, 5),
            other => panic!("unexpected {:?}", other),
        }
        match parse_components("x + w", &xy(), &p) {
            Err(FieldError::UnknownIdentifier { name, column }) => {
                assert_eq!(name, "w");
                assert_eq!(column, 5);
            }
            other => panic!("unexpected {:?}", other),
        }
        assert!(matches!(
            parse_components("x^y", &xy(), &p),
            Err(FieldError::Syntax { .. })
        ));
        assert!(matches!(
            parse_components("x^1.5", &xy(), &p),
            Err(FieldError::Syntax { .. })
        ));
        assert!(matches!(
            parse_components("tan(x)", &xy(), &p),
            Err(FieldError::UnknownIdentifier { .. })
        ));
        assert!(matches!(
            parse_components("x $ y", &xy(), &p),
            Err(FieldError::Syntax { column: 3, .. })
        ));
    }
}
