//! Boolean formulas, their exhaustive semantics and compilation to circuits.
//!
//! Text grammar (ASCII, precedence `!` > `&` > `|`, binary operators left
//! associative):
//!
//! ```text
//! or    := and ('|' and)*
//! and   := unary ('&' unary)*
//! unary := '!' unary | atom
//! atom  := 'x' digits | '0' | '1' | '(' or ')'
//! ```
//!
//! Variables are numbered by first appearance, so `x3 & x1` has `x3` as
//! variable 0. Assignments list variable values in that order.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::bits::BitString;
use crate::builder::{CircuitBuilder, Operand, Wire};
use crate::circuit::{Cap, Circuit, Gate};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("assignment has {got} bits, formula has {expected} variables")]
    Arity { expected: usize, got: usize },
    #[error("{vars} variables exceed the brute-force cap {cap}")]
    TooLarge { vars: usize, cap: usize },
    #[error("variable index {index} out of range for {var_count} variables")]
    VarOutOfRange { index: usize, var_count: usize },
    #[error("variable blocks do not partition the variables: {0}")]
    Partition(String),
    #[error("formula has no variables")]
    NoVariables,
}

/// Formula syntax tree. `Var` indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(usize),
    Const(bool),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    pub fn and(a: Expr, b: Expr) -> Expr {
        Expr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Expr, b: Expr) -> Expr {
        Expr::Or(Box::new(a), Box::new(b))
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        match self {
            Expr::Var(i) => assignment[*i],
            Expr::Const(b) => *b,
            Expr::Not(e) => !e.eval(assignment),
            Expr::And(a, b) => a.eval(assignment) && b.eval(assignment),
            Expr::Or(a, b) => a.eval(assignment) || b.eval(assignment),
        }
    }

    /// Leaves have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Expr::Var(_) | Expr::Const(_) => 0,
            Expr::Not(e) => 1 + e.depth(),
            Expr::And(a, b) | Expr::Or(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Var(i) => Some(*i),
            Expr::Const(_) => None,
            Expr::Not(e) => e.max_var(),
            Expr::And(a, b) | Expr::Or(a, b) => a.max_var().max(b.max_var()),
        }
    }

    /// Constants rewritten to `x1 & !x1` and its negation.
    fn desugar(&self) -> Expr {
        match self {
            Expr::Var(i) => Expr::Var(*i),
            Expr::Const(false) => zero_expr(),
            Expr::Const(true) => Expr::not(zero_expr()),
            Expr::Not(e) => Expr::not(e.desugar()),
            Expr::And(a, b) => Expr::and(a.desugar(), b.desugar()),
            Expr::Or(a, b) => Expr::or(a.desugar(), b.desugar()),
        }
    }

    fn leaves_in_order(&self, out: &mut Vec<usize>) {
        match self {
            Expr::Var(i) => out.push(*i),
            Expr::Const(_) => unreachable!("desugared"),
            Expr::Not(e) => e.leaves_in_order(out),
            Expr::And(a, b) | Expr::Or(a, b) => {
                a.leaves_in_order(out);
                b.leaves_in_order(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Or(..) => 1,
            Expr::And(..) => 2,
            Expr::Not(_) => 3,
            Expr::Var(_) | Expr::Const(_) => 4,
        }
    }

    fn write(&self, names: &[String], min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.precedence();
        if p < min {
            f.write_str("(")?;
        }
        match self {
            Expr::Var(i) => match names.get(*i) {
                Some(name) => f.write_str(name)?,
                None => write!(f, "x{}", i + 1)?,
            },
            Expr::Const(b) => f.write_str(if *b { "1" } else { "0" })?,
            Expr::Not(e) => {
                f.write_str("!")?;
                e.write(names, 3, f)?;
            }
            Expr::And(a, b) => {
                a.write(names, 2, f)?;
                f.write_str(" & ")?;
                b.write(names, 3, f)?;
            }
            Expr::Or(a, b) => {
                a.write(names, 1, f)?;
                f.write_str(" | ")?;
                b.write(names, 2, f)?;
            }
        }
        if p < min {
            f.write_str(")")?;
        }
        Ok(())
    }
}

fn zero_expr() -> Expr {
    Expr::and(Expr::Var(0), Expr::not(Expr::Var(0)))
}

/// A formula over `var_count` named variables. Variables need not all occur.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Formula {
    expr: Expr,
    names: Vec<String>,
}

impl Formula {
    /// Variables are named `x1..x<var_count>`.
    pub fn new(expr: Expr, var_count: usize) -> Result<Formula, FormulaError> {
        Self::with_names(expr, (1..=var_count).map(|i| format!("x{i}")).collect())
    }

    pub fn with_names(expr: Expr, names: Vec<String>) -> Result<Formula, FormulaError> {
        if let Some(index) = expr.max_var().filter(|&i| i >= names.len()) {
            return Err(FormulaError::VarOutOfRange {
                index,
                var_count: names.len(),
            });
        }
        Ok(Formula { expr, names })
    }

    pub fn parse(text: &str) -> Result<Formula, FormulaError> {
        Parser::new(text).parse()
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn var_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn depth(&self) -> usize {
        self.expr.depth()
    }

    pub fn eval(&self, assignment: &BitString) -> Result<bool, FormulaError> {
        if assignment.len() != self.var_count() {
            return Err(FormulaError::Arity {
                expected: self.var_count(),
                got: assignment.len(),
            });
        }
        Ok(self.expr.eval(assignment.bits()))
    }

    /// True on all `2^var_count` assignments.
    pub fn is_tautology(&self, cap: Cap) -> Result<bool, FormulaError> {
        self.check_cap(cap)?;
        Ok(BitString::all(self.var_count()).all(|a| self.expr.eval(a.bits())))
    }

    /// Truth of `∀y ∃x B`, where `x_vars` and `y_vars` partition the variables.
    ///
    /// An empty `x` block degenerates to `∀y B`, an empty `y` block to `∃x B`.
    pub fn forall_exists(&self, x_vars: &[usize], y_vars: &[usize], cap: Cap) -> Result<bool, FormulaError> {
        self.check_partition(x_vars, y_vars)?;
        self.check_cap(cap)?;
        let mut assignment = vec![false; self.var_count()];
        for ya in BitString::all(y_vars.len()) {
            for (&v, &b) in y_vars.iter().zip(ya.bits()) {
                assignment[v] = b;
            }
            let witnessed = BitString::all(x_vars.len()).any(|xa| {
                for (&v, &b) in x_vars.iter().zip(xa.bits()) {
                    assignment[v] = b;
                }
                self.expr.eval(&assignment)
            });
            if !witnessed {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn check_partition(&self, x_vars: &[usize], y_vars: &[usize]) -> Result<(), FormulaError> {
        let mut seen = vec![0u8; self.var_count()];
        for &v in x_vars.iter().chain(y_vars) {
            if v >= self.var_count() {
                return Err(FormulaError::VarOutOfRange {
                    index: v,
                    var_count: self.var_count(),
                });
            }
            seen[v] += 1;
        }
        if let Some(v) = seen.iter().position(|&k| k != 1) {
            let what = if seen[v] == 0 { "is in neither block" } else { "is listed twice" };
            return Err(FormulaError::Partition(format!("variable {} {what}", self.names[v])));
        }
        Ok(())
    }

    fn check_cap(&self, cap: Cap) -> Result<(), FormulaError> {
        if self.var_count() > cap.0 {
            Err(FormulaError::TooLarge {
                vars: self.var_count(),
                cap: cap.0,
            })
        } else {
            Ok(())
        }
    }

    /// Occurrences of variable `v` after constants are rewritten through `x1`.
    pub fn uses(&self, v: usize) -> usize {
        let mut leaves = Vec::new();
        self.expr.desugar().leaves_in_order(&mut leaves);
        leaves.into_iter().filter(|&i| i == v).count()
    }

    /// Adds the formula to `b`, reading variable `i` from `vars[i]`, and returns
    /// the result wire. Shared variables fan out in textual order; constants
    /// tap `vars[0]`.
    pub fn compile_into(&self, b: &mut CircuitBuilder, vars: &[Wire]) -> Wire {
        assert_eq!(vars.len(), self.var_count());
        let expr = self.expr.desugar();
        if let Expr::Var(i) = expr {
            return vars[i];
        }
        let mut leaves = Vec::new();
        expr.leaves_in_order(&mut leaves);
        let mut tickets: std::vec::IntoIter<Operand> =
            leaves.iter().map(|&i| b.reserve(vars[i])).collect::<Vec<_>>().into_iter();
        build(&expr, b, &mut tickets)
    }

    /// A circuit with `var_count` inputs and one output computing the formula.
    pub fn compile(&self) -> Result<Circuit, FormulaError> {
        if self.var_count() == 0 {
            return Err(FormulaError::NoVariables);
        }
        let mut b = CircuitBuilder::new(self.var_count());
        let vars: Vec<Wire> = (1..=self.var_count()).map(|i| b.input(i)).collect();
        let w = self.compile_into(&mut b, &vars);
        b.output(w);
        Ok(b.build().expect("formula circuits use every gate"))
    }
}

/// Post-order construction; variable leaves consume pre-reserved tickets left to right.
fn build(e: &Expr, b: &mut CircuitBuilder, tickets: &mut std::vec::IntoIter<Operand>) -> Wire {
    let operand = |e: &Expr, b: &mut CircuitBuilder, tickets: &mut std::vec::IntoIter<Operand>| match e {
        Expr::Var(_) => tickets.next().expect("one ticket per leaf"),
        _ => {
            let w = build(e, b, tickets);
            b.reserve(w)
        }
    };
    match e {
        Expr::Var(_) | Expr::Const(_) => unreachable!("leaves are consumed as operands"),
        Expr::Not(x) => {
            let a = operand(x, b, tickets);
            b.gate_reserved(Gate::Not, vec![a])
        }
        Expr::And(x, y) | Expr::Or(x, y) => {
            let gate = if matches!(e, Expr::And(..)) { Gate::And } else { Gate::Or };
            let a = operand(x, b, tickets);
            let c = operand(y, b, tickets);
            b.gate_reserved(gate, vec![a, c])
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.write(&self.names, 0, f)
    }
}

impl FromStr for Formula {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Formula::parse(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: Vec<String>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            names: Vec::new(),
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, FormulaError> {
        Err(FormulaError::Syntax {
            position: self.pos,
            message: message.into(),
        })
    }

    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<Formula, FormulaError> {
        let expr = self.or()?;
        if let Some(c) = self.peek() {
            return self.error(format!("unexpected {:?}", c as char));
        }
        Ok(Formula { expr, names: self.names })
    }

    fn or(&mut self) -> Result<Expr, FormulaError> {
        let mut e = self.and()?;
        while self.peek() == Some(b'|') {
            self.pos += 1;
            e = Expr::or(e, self.and()?);
        }
        Ok(e)
    }

    fn and(&mut self) -> Result<Expr, FormulaError> {
        let mut e = self.unary()?;
        while self.peek() == Some(b'&') {
            self.pos += 1;
            e = Expr::and(e, self.unary()?);
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<Expr, FormulaError> {
        match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                Ok(Expr::not(self.unary()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.or()?;
                if self.peek() != Some(b')') {
                    return self.error("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'0') | Some(b'1') => {
                let b = self.src[self.pos] == b'1';
                self.pos += 1;
                Ok(Expr::Const(b))
            }
            Some(b'x') => {
                let start = self.pos;
                self.pos += 1;
                let digits = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if self.pos == digits {
                    self.pos = start;
                    return self.error("expected digits after 'x'");
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii").to_string();
                let index = match self.names.iter().position(|n| *n == name) {
                    Some(i) => i,
                    None => {
                        self.names.push(name);
                        self.names.len() - 1
                    }
                };
                Ok(Expr::Var(index))
            }
            Some(c) => self.error(format!("unexpected {:?}", c as char)),
            None => self.error("unexpected end of input"),
        }
    }
}
