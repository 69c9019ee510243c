//! Scalar-field expressions over named coordinates.
//!
//! Grammar, lowest precedence first:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?            (right associative)
//! atom   := number | ident | func '(' expr ')' | '(' expr ')'
//! func   := 'exp' | 'log' | 'sin' | 'cos' | 'sqrt'
//! number := digits ('.' digits?)? (('e' | 'E') ('+' | '-')? digits)?
//! ident  := [A-Za-z_][A-Za-z0-9_]*
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::jet::{Jet2, JetError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },
    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("empty expression")]
    Empty,
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("domain error in `{expr}`: {reason}")]
    Domain { expr: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 5] = [Func::Exp, Func::Log, Func::Sin, Func::Cos, Func::Sqrt];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

/// Expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Replaces the named variables by literal values.
    pub fn substitute(&self, values: &[(String, f64)]) -> Expr {
        match self {
            Expr::Num(x) => Expr::Num(*x),
            Expr::Var(v) => match values.iter().find(|(n, _)| n == v) {
                Some(&(_, x)) => Expr::Num(x),
                None => Expr::Var(v.clone()),
            },
            Expr::Neg(e) => Expr::Neg(Box::new(e.substitute(values))),
            Expr::Bin(op, a, b) => Expr::Bin(*op, Box::new(a.substitute(values)), Box::new(b.substitute(values))),
            Expr::Call(f, e) => Expr::Call(*f, Box::new(e.substitute(values))),
        }
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => {
                if !out.iter().any(|o| o == v) {
                    out.push(v.clone());
                }
            }
            Expr::Neg(e) | Expr::Call(_, e) => e.collect_vars(out),
            Expr::Bin(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

/// Fully parenthesized, so that printing then parsing gives back the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(x) if *x < 0.0 || (*x == 0.0 && x.is_sign_negative()) => {
                write!(f, "(-{:?})", -x)
            }
            Expr::Num(x) => write!(f, "{x:?}"),
            Expr::Var(v) => f.write_str(v),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Bin(op, a, b) => write!(f, "({a}{}{b})", op.symbol()),
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

/// A parsed expression together with its free coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ScalarFieldExpr {
    ast: Expr,
    free_vars: Vec<String>,
}

impl ScalarFieldExpr {
    pub fn parse(source: &str) -> Result<Self, ExprError> {
        let ast = Parser::new(source).parse()?;
        Ok(Self::from_ast(ast))
    }

    pub fn from_ast(ast: Expr) -> Self {
        let mut free_vars = Vec::new();
        ast.collect_vars(&mut free_vars);
        Self { ast, free_vars }
    }

    pub fn constant(x: f64) -> Self {
        Self::from_ast(Expr::Num(x))
    }

    pub fn ast(&self) -> &Expr {
        &self.ast
    }

    /// Free coordinates in order of first appearance.
    pub fn free_variables(&self) -> &[String] {
        &self.free_vars
    }

    /// Freezes the named coordinates at the given values.
    pub fn substitute(&self, values: &[(String, f64)]) -> Self {
        Self::from_ast(self.ast.substitute(values))
    }

    /// Literal zero, as written (no simplification is attempted).
    pub fn is_literal_zero(&self) -> bool {
        matches!(self.ast, Expr::Num(x) if x == 0.0)
    }

    /// Binds identifiers to positions in `coords`.
    pub fn compile(&self, coords: &[String]) -> Result<CompiledExpr, ExprError> {
        Ok(CompiledExpr {
            root: Node::compile(&self.ast, coords)?,
            names: coords.to_vec(),
        })
    }

    /// Evaluates at `point` (values for `coords`), seeding the coordinates
    /// listed in `seeded` as jet variables in that order.
    pub fn eval_jet(&self, coords: &[String], point: &[f64], seeded: &[usize]) -> Result<Jet2, ExprError> {
        let compiled = self.compile(coords)?;
        let mut inputs: Vec<Jet2> = point.iter().map(|&x| Jet2::constant(x)).collect();
        for (k, &i) in seeded.iter().enumerate() {
            inputs[i] = Jet2::variable(point[i], k, seeded.len());
        }
        compiled.eval(&inputs)
    }
}

impl fmt::Display for ScalarFieldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.ast.fmt(f)
    }
}

impl TryFrom<String> for ScalarFieldExpr {
    type Error = ExprError;
    fn try_from(s: String) -> Result<Self, ExprError> {
        Self::parse(&s)
    }
}

impl From<ScalarFieldExpr> for String {
    fn from(e: ScalarFieldExpr) -> String {
        e.to_string()
    }
}

impl std::str::FromStr for ScalarFieldExpr {
    type Err = ExprError;
    fn from_str(s: &str) -> Result<Self, ExprError> {
        Self::parse(s)
    }
}

pub fn parse(source: &str) -> Result<ScalarFieldExpr, ExprError> {
    ScalarFieldExpr::parse(source)
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            src,
            bytes: src.as_bytes(),
            pos: 0,
        }
    }

    fn parse(mut self) -> Result<Expr, ExprError> {
        self.skip_ws();
        if self.pos == self.bytes.len() {
            return Err(ExprError::Empty);
        }
        let e = self.expr()?;
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return Err(self.error("operator or end of input"));
        }
        Ok(e)
    }

    fn error(&self, expected: &str) -> ExprError {
        ExprError::Syntax {
            offset: self.pos,
            expected: expected.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => BinOp::Add,
                Some(b'-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinOp::Mul,
                Some(b'/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.bytes.len()
                    && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                if self.peek() == Some(b'(') {
                    let func = Func::from_name(name).ok_or_else(|| ExprError::UnknownFunction {
                        name: name.to_string(),
                        offset: start,
                    })?;
                    self.pos += 1;
                    let arg = self.expr()?;
                    if !self.eat(b')') {
                        return Err(self.error("`)`"));
                    }
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                if Func::from_name(name).is_some() {
                    return Err(self.error("`(` after function name"));
                }
                Ok(Expr::Var(name.to_string()))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("`)`"));
                }
                Ok(e)
            }
            _ => Err(self.error("operand")),
        }
    }

    fn number(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.bytes.len() && p.bytes[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b'.' {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            return Err(self.error("digit"));
        }
        if self.pos < self.bytes.len() && matches!(self.bytes[self.pos], b'e' | b'E') {
            self.pos += 1;
            if self.pos < self.bytes.len() && matches!(self.bytes[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            if digits(self) == 0 {
                return Err(self.error("exponent digits"));
            }
        }
        let text = &self.src[start..self.pos];
        text.parse::<f64>().map(Expr::Num).map_err(|_| ExprError::Syntax {
            offset: start,
            expected: "number".to_string(),
        })
    }
}

#[derive(Debug, Clone)]
enum Node {
    Num(f64),
    Var(usize),
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

impl Node {
    fn compile(e: &Expr, coords: &[String]) -> Result<Node, ExprError> {
        Ok(match e {
            Expr::Num(x) => Node::Num(*x),
            Expr::Var(v) => Node::Var(
                coords
                    .iter()
                    .position(|c| c == v)
                    .ok_or_else(|| ExprError::Unbound(v.clone()))?,
            ),
            Expr::Neg(a) => Node::Neg(Box::new(Node::compile(a, coords)?)),
            Expr::Bin(op, a, b) => Node::Bin(
                *op,
                Box::new(Node::compile(a, coords)?),
                Box::new(Node::compile(b, coords)?),
            ),
            Expr::Call(f, a) => Node::Call(*f, Box::new(Node::compile(a, coords)?)),
        })
    }

    fn to_expr(&self, names: &[String]) -> Expr {
        match self {
            Node::Num(x) => Expr::Num(*x),
            Node::Var(i) => Expr::Var(names[*i].clone()),
            Node::Neg(a) => Expr::Neg(Box::new(a.to_expr(names))),
            Node::Bin(op, a, b) => Expr::Bin(*op, Box::new(a.to_expr(names)), Box::new(b.to_expr(names))),
            Node::Call(f, a) => Expr::Call(*f, Box::new(a.to_expr(names))),
        }
    }

    /// Integer value of a literal exponent, if it is one.
    fn literal_integer(&self) -> Option<i32> {
        let v = match self {
            Node::Num(x) => *x,
            Node::Neg(a) => match **a {
                Node::Num(x) => -x,
                _ => return None,
            },
            _ => return None,
        };
        (v.fract() == 0.0 && v.abs() <= i32::MAX as f64).then_some(v as i32)
    }

    fn eval(&self, inputs: &[Jet2], names: &[String]) -> Result<Jet2, ExprError> {
        let domain = |node: &Node, e: JetError| ExprError::Domain {
            expr: node.to_expr(names).to_string(),
            reason: e.to_string(),
        };
        match self {
            Node::Num(x) => Ok(Jet2::constant(*x)),
            Node::Var(i) => Ok(inputs[*i]),
            Node::Neg(a) => Ok(-a.eval(inputs, names)?),
            Node::Bin(op, a, b) => {
                let x = a.eval(inputs, names)?;
                if *op == BinOp::Pow {
                    if let Some(n) = b.literal_integer() {
                        return x.powi(n).map_err(|e| domain(self, e));
                    }
                    let y = b.eval(inputs, names)?;
                    if y.is_constant() && y.value().fract() == 0.0 && y.value().abs() <= i32::MAX as f64 {
                        return x.powi(y.value() as i32).map_err(|e| domain(self, e));
                    }
                    if !(x.value() > 0.0) {
                        return Err(domain(
                            self,
                            JetError::Domain("non-integer power of a non-positive base"),
                        ));
                    }
                    let l = x.try_ln().map_err(|e| domain(self, e))?;
                    return Ok((y * l).exp());
                }
                let y = b.eval(inputs, names)?;
                match op {
                    BinOp::Add => Ok(x + y),
                    BinOp::Sub => Ok(x - y),
                    BinOp::Mul => Ok(x * y),
                    BinOp::Div => x.checked_div(&y).map_err(|e| domain(self, e)),
                    BinOp::Pow => unreachable!(),
                }
            }
            Node::Call(f, a) => {
                let x = a.eval(inputs, names)?;
                match f {
                    Func::Exp => Ok(x.exp()),
                    Func::Sin => Ok(x.sin()),
                    Func::Cos => Ok(x.cos()),
                    Func::Log => x.try_ln().map_err(|e| domain(self, e)),
                    Func::Sqrt => x.try_sqrt().map_err(|e| domain(self, e)),
                }
            }
        }
    }
}

/// An expression with identifiers resolved to coordinate positions.
#[derive(Debug, Clone)]
pub struct CompiledExpr {
    root: Node,
    names: Vec<String>,
}

impl CompiledExpr {
    /// Evaluates with one jet per coordinate.
    pub fn eval(&self, inputs: &[Jet2]) -> Result<Jet2, ExprError> {
        debug_assert_eq!(inputs.len(), self.names.len());
        self.root.eval(inputs, &self.names)
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<f64, ExprError> {
        let inputs: Vec<Jet2> = point.iter().map(|&x| Jet2::constant(x)).collect();
        Ok(self.eval(&inputs)?.value())
    }

    /// True when the expression is a literal number (no coordinate dependence at all).
    pub fn literal(&self) -> Option<f64> {
        match self.root {
            Node::Num(x) => Some(x),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(s: &str) -> Box<Expr> {
        Box::new(Expr::Var(s.into()))
    }

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_sum_of_power_and_sine() {
        let e = parse("x1^2 + sin(x2)").unwrap();
        assert_eq!(
            *e.ast(),
            Expr::Bin(
                BinOp::Add,
                Box::new(Expr::Bin(BinOp::Pow, var("x1"), Box::new(Expr::Num(2.0)))),
                Box::new(Expr::Call(Func::Sin, var("x2"))),
            )
        );
        assert_eq!(e.free_variables(), ["x1", "x2"]);
    }

    #[test]
    fn exp_of_u_is_one_at_origin() {
        let e = parse("exp(u)").unwrap();
        assert_eq!(*e.ast(), Expr::Call(Func::Exp, var("u")));
        let j = e.eval_jet(&names(&["u"]), &[0.0], &[0]).unwrap();
        assert_eq!((j.value(), j.grad(0), j.hess(0, 0)), (1.0, 1.0, 1.0));
    }

    #[test]
    fn dangling_operator_reports_offset() {
        assert_eq!(
            parse("2*"),
            Err(ExprError::Syntax {
                offset: 2,
                expected: "operand".into()
            })
        );
    }

    #[test]
    fn empty_and_unknown_function() {
        assert_eq!(parse("   "), Err(ExprError::Empty));
        assert!(matches!(
            parse("tan(x)"),
            Err(ExprError::UnknownFunction { offset: 0, .. })
        ));
        assert!(matches!(parse("(x"), Err(ExprError::Syntax { offset: 2, .. })));
        assert!(matches!(parse("x y"), Err(ExprError::Syntax { offset: 2, .. })));
    }

    #[test]
    fn precedence_and_associativity() {
        let p = |s: &str| parse(s).unwrap().to_string();
        assert_eq!(p("-x^2"), "(-(x^2.0))");
        assert_eq!(p("2^3^2"), "(2.0^(3.0^2.0))");
        assert_eq!(p("a-b-c"), "((a-b)-c)");
        assert_eq!(p("a/b*c"), "((a/b)*c)");
        assert_eq!(p("2^-1"), "(2.0^(-1.0))");
        assert_eq!(p("1.5e-3 + .5"), "(0.0015+0.5)");
    }

    #[test]
    fn square_jet() {
        let j = parse("x^2").unwrap().eval_jet(&names(&["x"]), &[3.0], &[0]).unwrap();
        assert_eq!((j.value(), j.grad(0), j.hess(0, 0)), (9.0, 6.0, 2.0));
    }

    #[test]
    fn division_by_zero_names_subexpression() {
        let err = parse("1 + 1/x")
            .unwrap()
            .eval_jet(&names(&["x"]), &[0.0], &[0])
            .unwrap_err();
        match err {
            ExprError::Domain { expr, reason } => {
                assert_eq!(expr, "(1.0/x)");
                assert!(reason.contains("division by zero"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn free_variable_order() {
        assert_eq!(parse("x2 + x1").unwrap().free_variables(), ["x2", "x1"]);
        assert!(parse("3.5").unwrap().free_variables().is_empty());
        assert_eq!(parse("sin(a)*a").unwrap().free_variables(), ["a"]);
    }

    #[test]
    fn fractional_power_needs_positive_base() {
        let e = parse("x^0.5").unwrap();
        let j = e.eval_jet(&names(&["x"]), &[4.0], &[0]).unwrap();
        assert!((j.value() - 2.0).abs() < 1e-15);
        assert!((j.grad(0) - 0.25).abs() < 1e-15);
        assert!(matches!(
            e.eval_jet(&names(&["x"]), &[-1.0], &[0]),
            Err(ExprError::Domain { .. })
        ));
        let sq = parse("x^2").unwrap().eval_jet(&names(&["x"]), &[-3.0], &[0]).unwrap();
        assert_eq!(sq.value(), 9.0);
    }

    #[test]
    fn substitution_freezes_coordinates() {
        let e = parse("exp(u)*c").unwrap().substitute(&[("u".into(), 0.0)]);
        assert_eq!(e.free_variables(), ["c"]);
        let j = e.eval_jet(&names(&["c"]), &[2.0], &[0]).unwrap();
        assert_eq!((j.value(), j.grad(0)), (2.0, 1.0));
    }

    #[test]
    fn unbound_variable() {
        assert_eq!(
            parse("x + q").unwrap().compile(&names(&["x"])).unwrap_err(),
            ExprError::Unbound("q".into())
        );
    }

    #[test]
    fn serde_round_trip_as_string() {
        let e = parse("exp(2*u)").unwrap();
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(s, "\"exp((2.0*u))\"");
        let back: ScalarFieldExpr = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
    }
}
