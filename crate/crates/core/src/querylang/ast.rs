use std::fmt;

use crate::inference::{Atom, EventExpr};
use crate::ratfunc::Rational;
use crate::samplespace::{Gender, RegimeKind};

/// Surface expression; like [`EventExpr`] but may name a `let` binding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    True,
    False,
    Atom(Atom),
    Label(String),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Or(..) => 1,
            Expr::And(..) => 2,
            Expr::Not(_) => 3,
            _ => 4,
        }
    }

    /// Replaces labels by their bound expressions. Labels are checked at
    /// parse time, so an unknown label here is a caller bug.
    pub fn resolve(&self, bindings: &[Binding]) -> EventExpr {
        match self {
            Expr::True => EventExpr::True,
            Expr::False => EventExpr::False,
            Expr::Atom(a) => EventExpr::Atom(*a),
            Expr::Label(name) => {
                let (i, b) = bindings
                    .iter()
                    .enumerate()
                    .rev()
                    .find(|(_, b)| &b.name == name)
                    .unwrap_or_else(|| panic!("unresolved label `{name}`"));
                b.expr.resolve(&bindings[..i])
            }
            Expr::Not(e) => e.resolve(bindings).not(),
            Expr::And(a, b) => a.resolve(bindings).and(b.resolve(bindings)),
            Expr::Or(a, b) => a.resolve(bindings).or(b.resolve(bindings)),
        }
    }
}

impl From<&EventExpr> for Expr {
    fn from(e: &EventExpr) -> Self {
        match e {
            EventExpr::True => Expr::True,
            EventExpr::False => Expr::False,
            EventExpr::Atom(a) => Expr::Atom(*a),
            EventExpr::Not(x) => Expr::Not(Box::new(x.as_ref().into())),
            EventExpr::And(a, b) => Expr::And(Box::new(a.as_ref().into()), Box::new(b.as_ref().into())),
            EventExpr::Or(a, b) => Expr::Or(Box::new(a.as_ref().into()), Box::new(b.as_ref().into())),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |f: &mut fmt::Formatter<'_>, e: &Expr, min: u8| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::True => f.write_str("true"),
            Expr::False => f.write_str("false"),
            Expr::Atom(a) => write!(f, "{a}"),
            Expr::Label(l) => f.write_str(l),
            Expr::Not(e) => {
                f.write_str("!")?;
                sub(f, e, 3)
            }
            Expr::And(a, b) => {
                sub(f, a, 2)?;
                f.write_str(" & ")?;
                sub(f, b, 3)
            }
            Expr::Or(a, b) => {
                sub(f, a, 1)?;
                f.write_str(" + ")?;
                sub(f, b, 2)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binding {
    pub name: String,
    pub expr: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QueryKind {
    Prob(Expr),
    Cond(Expr, Expr),
    /// `odds(a : c | b)`
    Odds { a: Expr, c: Expr, b: Expr },
    /// `bf(a : c | b)`
    BayesFactor { a: Expr, c: Expr, b: Expr },
    Table,
    Factorize(Vec<Atom>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub regime: RegimeKind,
    pub named_gender: Gender,
    pub r: Option<Rational>,
    pub bindings: Vec<Binding>,
    pub kind: QueryKind,
}

impl Query {
    pub fn new(kind: QueryKind) -> Self {
        Query {
            regime: RegimeKind::UniqueNames,
            named_gender: Gender::Female,
            r: None,
            bindings: Vec::new(),
            kind,
        }
    }

    pub fn regime(&self) -> crate::samplespace::Regime {
        crate::samplespace::Regime::new(self.regime).with_named_gender(self.named_gender)
    }
}

/// Canonical text: directives, then bindings, then the query form.
impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@regime({})", self.regime.code())?;
        if self.named_gender == Gender::Male {
            f.write_str(" @named(m)")?;
        }
        if let Some(r) = &self.r {
            write!(f, " @r({r})")?;
        }
        for b in &self.bindings {
            write!(f, " let {} = {};", b.name, b.expr)?;
        }
        f.write_str(" ")?;
        match &self.kind {
            QueryKind::Prob(e) => write!(f, "P({e})"),
            QueryKind::Cond(a, b) => write!(f, "P({a} | {b})"),
            QueryKind::Odds { a, c, b } => write!(f, "odds({a} : {c} | {b})"),
            QueryKind::BayesFactor { a, c, b } => write!(f, "bf({a} : {c} | {b})"),
            QueryKind::Table => f.write_str("table"),
            QueryKind::Factorize(atoms) => {
                f.write_str("chain(")?;
                for (i, a) in atoms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}
