use serde::Serialize;
use thiserror::Error;

use super::ast::{Query, QueryKind};
use crate::inference::{
    chain_factorize, conditional, odds_update, probability, EventExpr, FactorizationStep,
    InferenceError, OddsReport,
};
use crate::ratfunc::{to_decimal, RatFuncError, Rational, RationalFunction};
use crate::samplespace::{build_distribution, JointDistribution, SampleSpaceError, TableExport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Inference(#[from] InferenceError),
    #[error(transparent)]
    SampleSpace(#[from] SampleSpaceError),
    #[error(transparent)]
    Arithmetic(#[from] RatFuncError),
    #[error("conditioning on `{event}`, which has probability zero at r = {r}")]
    ZeroAtR { event: String, r: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Trace {
    Odds(OddsReport),
    Chain { steps: Vec<FactorizationStep> },
    Table(TableExport),
}

/// Result of one query. `exact` is always present.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    pub query: String,
    pub regime: String,
    pub r: Option<String>,
    pub exact: RationalFunction,
    /// Decimal value at `r`, or of `exact` itself when it is constant.
    pub decimal: Option<String>,
    pub trace: Option<Trace>,
}

fn require_nonzero_at(p: &RationalFunction, r: Option<&Rational>, event: &dyn std::fmt::Display) -> Result<(), EvalError> {
    if let Some(r) = r {
        let v = p.eval_at(r)?;
        if v == Rational::from_integer(0.into()) {
            return Err(EvalError::ZeroAtR {
                event: event.to_string(),
                r: r.to_string(),
            });
        }
    }
    Ok(())
}

/// Evaluates a parsed query, rendering decimals with `digits` places.
pub fn evaluate(q: &Query, digits: usize) -> Result<Evaluation, EvalError> {
    let regime = q.regime();
    let r = q.r.as_ref();
    if let Some(r) = r {
        regime.check_admissible(r)?;
    }
    let d = build_distribution(regime);
    let resolve = |e: &super::Expr| e.resolve(&q.bindings);

    let (exact, trace) = match &q.kind {
        QueryKind::Prob(e) => (probability(&d, &resolve(e))?, None),
        QueryKind::Cond(a, b) => {
            let (a, b) = (resolve(a), resolve(b));
            let value = conditional(&d, &a, &b)?;
            require_nonzero_at(&probability(&d, &b)?, r, &b)?;
            (value, None)
        }
        QueryKind::Odds { a, c, b } | QueryKind::BayesFactor { a, c, b } => {
            let (a, c, b) = (resolve(a), resolve(c), resolve(b));
            let report = odds_update(&d, &a, &c, &b)?;
            check_odds_at(&d, &a, &c, &b, r)?;
            let exact = match q.kind {
                QueryKind::Odds { .. } => report.updated_odds.clone(),
                _ => report.bayes_factor.clone(),
            };
            (exact, Some(Trace::Odds(report)))
        }
        QueryKind::Table => {
            let export = TableExport::new(&d, true, r.map(|r| (r, digits)))?;
            (d.total(), Some(Trace::Table(export)))
        }
        QueryKind::Factorize(atoms) => {
            let steps = chain_factorize(&d, atoms)?;
            for (i, step) in steps.iter().enumerate() {
                let context = EventExpr::all(atoms[..i].iter().copied());
                require_nonzero_at(&probability(&d, &context)?, r, &context)?;
                debug_assert_eq!(step.given.len(), i);
            }
            let product = steps.iter().map(|s| &s.value).product();
            (product, Some(Trace::Chain { steps }))
        }
    };

    let decimal = match r {
        Some(r) => Some(to_decimal(&exact.eval_at(r)?, digits)),
        None => exact.as_constant().map(|c| to_decimal(&c, digits)),
    };
    Ok(Evaluation {
        query: q.to_string(),
        regime: q.regime.code().to_string(),
        r: r.map(ToString::to_string),
        exact,
        decimal,
        trace,
    })
}

fn check_odds_at(
    d: &JointDistribution,
    a: &EventExpr,
    c: &EventExpr,
    b: &EventExpr,
    r: Option<&Rational>,
) -> Result<(), EvalError> {
    require_nonzero_at(&probability(d, a)?, r, a)?;
    require_nonzero_at(&probability(d, c)?, r, c)?;
    let both = b.clone().and(c.clone());
    require_nonzero_at(&probability(d, &both)?, r, &both)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::querylang::parse;

    fn run(s: &str) -> Result<Evaluation, EvalError> {
        evaluate(&parse(s).unwrap(), 5)
    }

    #[test]
    fn textbook_and_table_values() {
        let e = run("@regime(i0) P(E.m & Y.m | E.m + Y.m)").unwrap();
        assert_eq!(e.exact.to_string(), "1/3");
        assert_eq!(e.decimal.as_deref(), Some("0.33333"));

        let e = run("@regime(i1) @r(1/50) P(E.f & Y.f | E.fN + Y.fN)").unwrap();
        assert_eq!(e.exact.to_string(), "(2 - r)/(4 - r)");
        assert_eq!(e.decimal.as_deref(), Some("0.49749"));

        let e = run("@regime(i2) bf(E.f & Y.f : !(E.f & Y.f) & (E.f + Y.f) | E.fN + Y.fN)").unwrap();
        assert_eq!(e.exact.to_string(), "2");
        match e.trace {
            Some(Trace::Odds(rep)) => assert_eq!(rep.updated_odds.to_string(), "1"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn numeric_preconditions() {
        assert!(matches!(
            run("@regime(i2) @r(1/2) P(E.f)"),
            Err(EvalError::SampleSpace(SampleSpaceError::Inadmissible { .. }))
        ));
        // symbolically fine, but the condition vanishes at r = 0
        assert!(run("@regime(i1) P(E.f & Y.f | E.fN + Y.fN)").is_ok());
        assert!(matches!(
            run("@regime(i1) @r(0) P(E.f & Y.f | E.fN + Y.fN)"),
            Err(EvalError::ZeroAtR { .. })
        ));
        assert!(matches!(
            run("@regime(i0) P(E.fN)"),
            Err(EvalError::Inference(InferenceError::NotModeled { .. }))
        ));
    }

    #[test]
    fn chain_and_table_traces() {
        let e = run("@regime(i2) chain(Y.f, Y.N, E.f, E.!N)").unwrap();
        assert_eq!(e.exact.to_string(), "r/4");
        let e = run("@regime(i1) @r(1/50) table").unwrap();
        assert_eq!(e.exact.to_string(), "1");
        match e.trace {
            Some(Trace::Table(t)) => assert_eq!(t.cells[1][1].as_ref().unwrap().exact, "r^2/4"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn labels_resolve_through_earlier_bindings() {
        let e = run("let A = E.f & Y.f; let B = E.fN + Y.fN; let AB = A & B; P(AB | B)").unwrap();
        assert_eq!(e.exact.to_string(), "1/2");
    }
}
