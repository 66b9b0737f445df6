use serde::Serialize;

use super::{Atom, EventExpr, InferenceError};
use crate::ratfunc::RationalFunction;
use crate::samplespace::{CellTable, JointDistribution, Regime};

pub(crate) fn validate(regime: &Regime, e: &EventExpr) -> Result<(), InferenceError> {
    match e.atoms().into_iter().find(|a| !a.descriptor.is_modeled_by(regime)) {
        Some(atom) => Err(InferenceError::NotModeled {
            atom: atom.to_string(),
            regime: regime.kind.code().to_string(),
        }),
        None => Ok(()),
    }
}

/// Sum of the cells in the denotation of `e`.
pub(crate) fn mass<T: CellTable + ?Sized>(table: &T, e: &EventExpr) -> RationalFunction {
    table
        .cells()
        .iter()
        .filter(|(o, _)| e.holds(o))
        .map(|(_, p)| p)
        .sum()
}

pub(crate) fn conditional_in<T: CellTable + ?Sized>(
    table: &T,
    a: &EventExpr,
    b: &EventExpr,
) -> Result<RationalFunction, InferenceError> {
    validate(table.regime(), a)?;
    validate(table.regime(), b)?;
    let pb = mass(table, b);
    if pb.is_zero() {
        return Err(InferenceError::ZeroProbability(b.to_string()));
    }
    let joint = mass(table, &a.clone().and(b.clone()));
    Ok(joint.checked_div(&pb)?)
}

pub fn probability(d: &JointDistribution, e: &EventExpr) -> Result<RationalFunction, InferenceError> {
    validate(d.regime(), e)?;
    Ok(mass(d, e))
}

/// `P(a | b) = P(a & b) / P(b)`. Fails when `b` is symbolically impossible.
pub fn conditional(
    d: &JointDistribution,
    a: &EventExpr,
    b: &EventExpr,
) -> Result<RationalFunction, InferenceError> {
    conditional_in(d, a, b)
}

/// Bayes' rule ingredients for updating `a` on evidence `b`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Reconditioning {
    /// `P(a)`
    pub prior: RationalFunction,
    /// `P(b | a)`
    pub likelihood: RationalFunction,
    /// `P(b)`
    pub evidence: RationalFunction,
    /// `P(b | a) / P(b) * P(a)`
    pub posterior: RationalFunction,
}

pub fn recondition(
    d: &JointDistribution,
    a: &EventExpr,
    b: &EventExpr,
) -> Result<Reconditioning, InferenceError> {
    let prior = probability(d, a)?;
    let evidence = probability(d, b)?;
    if evidence.is_zero() {
        return Err(InferenceError::ZeroProbability(b.to_string()));
    }
    let likelihood = conditional(d, b, a)?;
    let posterior = likelihood.checked_div(&evidence)? * &prior;
    debug_assert_eq!(posterior, conditional(d, a, b)?);
    Ok(Reconditioning {
        prior,
        likelihood,
        evidence,
        posterior,
    })
}

/// Odds of `a` against `c`, before and after learning `b`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OddsReport {
    /// `P(a) / P(c)`
    pub initial_odds: RationalFunction,
    /// `P(b | a) / P(b | c)`
    pub bayes_factor: RationalFunction,
    /// `bayes_factor * initial_odds`
    pub updated_odds: RationalFunction,
}

pub fn odds_update(
    d: &JointDistribution,
    a: &EventExpr,
    c: &EventExpr,
    b: &EventExpr,
) -> Result<OddsReport, InferenceError> {
    let pa = probability(d, a)?;
    let pc = probability(d, c)?;
    if pc.is_zero() {
        return Err(InferenceError::ZeroProbability(c.to_string()));
    }
    let like_a = conditional(d, b, a)?;
    let like_c = conditional(d, b, c)?;
    if like_c.is_zero() {
        return Err(InferenceError::ZeroProbability(format!("{b} given {c}")));
    }
    let initial_odds = pa.checked_div(&pc)?;
    let bayes_factor = like_a.checked_div(&like_c)?;
    let updated_odds = &bayes_factor * &initial_odds;
    Ok(OddsReport {
        initial_odds,
        bayes_factor,
        updated_odds,
    })
}

/// One factor `P(conditioned | given...)` of a chain-rule expansion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorizationStep {
    pub conditioned: Atom,
    pub given: Vec<Atom>,
    pub value: RationalFunction,
}

/// Expands `P(a1 & a2 & ... & an)` as `P(a1) P(a2 | a1) ... P(an | a1..an-1)`.
///
/// Every factor is computed by marginalizing the full joint table; no
/// independence between children is assumed. A factor whose context has
/// zero probability is an error.
pub fn chain_factorize(
    d: &JointDistribution,
    atoms: &[Atom],
) -> Result<Vec<FactorizationStep>, InferenceError> {
    let mut steps = Vec::with_capacity(atoms.len());
    for (i, atom) in atoms.iter().enumerate() {
        let given = atoms[..i].to_vec();
        let context = EventExpr::all(given.iter().copied());
        let value = conditional(d, &EventExpr::Atom(*atom), &context)?;
        steps.push(FactorizationStep {
            conditioned: *atom,
            given,
            value,
        });
    }
    Ok(steps)
}

/// `P(target | context...)` from the joint table.
pub fn conditional_name(
    d: &JointDistribution,
    target: Atom,
    context: &[Atom],
) -> Result<RationalFunction, InferenceError> {
    conditional(
        d,
        &EventExpr::Atom(target),
        &EventExpr::all(context.iter().copied()),
    )
}

#[cfg(test)]
mod tests {
    use super::super::Descriptor::*;
    use super::*;
    use crate::samplespace::{build_distribution, Slot::*};

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    fn at(slot: crate::samplespace::Slot, d: super::super::Descriptor) -> EventExpr {
        EventExpr::atom(slot, d)
    }

    fn two_girls() -> EventExpr {
        at(Eldest, Female).and(at(Youngest, Female))
    }

    fn named_girl() -> EventExpr {
        at(Eldest, FemaleTheName).or(at(Youngest, FemaleTheName))
    }

    fn one_girl() -> EventExpr {
        at(Eldest, Female)
            .and(at(Youngest, Male))
            .or(at(Eldest, Male).and(at(Youngest, Female)))
    }

    #[test]
    fn textbook_gender_questions() {
        let d = build_distribution(Regime::gender_only());
        let boys = at(Eldest, Male).and(at(Youngest, Male));
        assert_eq!(probability(&d, &boys).unwrap(), rf("1/4"));
        assert_eq!(conditional(&d, &boys, &at(Eldest, Male)).unwrap(), rf("1/2"));
        let some_boy = at(Eldest, Male).or(at(Youngest, Male));
        assert_eq!(conditional(&d, &boys, &some_boy).unwrap(), rf("1/3"));
        assert_eq!(probability(&d, &EventExpr::True).unwrap(), RationalFunction::one());
    }

    #[test]
    fn named_girl_probabilities() {
        let d1 = build_distribution(Regime::shared_names());
        assert_eq!(probability(&d1, &named_girl()).unwrap(), rf("r - r^2/4"));
        assert_eq!(conditional(&d1, &two_girls(), &named_girl()).unwrap(), rf("(2 - r)/(4 - r)"));
        let d2 = build_distribution(Regime::unique_names());
        assert_eq!(conditional(&d2, &two_girls(), &named_girl()).unwrap(), rf("1/2"));
    }

    #[test]
    fn impossible_condition_is_rejected() {
        let d = build_distribution(Regime::unique_names());
        let both_named = at(Eldest, FemaleTheName).and(at(Youngest, FemaleTheName));
        assert!(matches!(
            conditional(&d, &two_girls(), &both_named),
            Err(InferenceError::ZeroProbability(_))
        ));
        assert!(matches!(
            conditional(&d, &two_girls(), &EventExpr::False),
            Err(InferenceError::ZeroProbability(_))
        ));
    }

    #[test]
    fn name_atoms_need_a_name_model() {
        let d = build_distribution(Regime::gender_only());
        assert!(matches!(
            probability(&d, &named_girl()),
            Err(InferenceError::NotModeled { .. })
        ));
    }

    #[test]
    fn reconditioning() {
        let d2 = build_distribution(Regime::unique_names());
        let rc = recondition(&d2, &two_girls(), &named_girl()).unwrap();
        assert_eq!(rc.prior, rf("1/4"));
        assert_eq!(rc.evidence, rf("r"));
        assert_eq!(rc.likelihood, rf("2r"));
        assert_eq!(rc.posterior, rf("1/2"));

        let d0 = build_distribution(Regime::gender_only());
        let em = at(Eldest, Male);
        assert_eq!(recondition(&d0, &em, &em).unwrap().posterior, RationalFunction::one());

        let d1 = build_distribution(Regime::shared_names());
        let rc = recondition(&d1, &two_girls(), &named_girl()).unwrap();
        assert_eq!(rc.posterior, rf("(2 - r)/(4 - r)"));
    }

    #[test]
    fn odds() {
        let d2 = build_distribution(Regime::unique_names());
        let rep = odds_update(&d2, &two_girls(), &one_girl(), &named_girl()).unwrap();
        assert_eq!(rep.initial_odds, rf("1/2"));
        assert_eq!(rep.bayes_factor, rf("2"));
        assert_eq!(rep.updated_odds, rf("1"));

        let same = odds_update(&d2, &two_girls(), &two_girls(), &named_girl()).unwrap();
        assert_eq!(
            (same.initial_odds, same.bayes_factor, same.updated_odds),
            (rf("1"), rf("1"), rf("1"))
        );

        // shared names: direct ratio of cell sums
        let d1 = build_distribution(Regime::shared_names());
        let rep = odds_update(&d1, &two_girls(), &one_girl(), &named_girl()).unwrap();
        let direct = probability(&d1, &two_girls().and(named_girl())).unwrap()
            / probability(&d1, &one_girl().and(named_girl())).unwrap();
        assert_eq!(rep.updated_odds, direct);
        assert_eq!(rep.updated_odds, rf("(2 - r)/2"));
        assert_eq!(rep.bayes_factor, rf("2 - r"));
    }

    #[test]
    fn chain_rule_examples() {
        let d = build_distribution(Regime::unique_names());
        let a = |s, desc| Atom::new(s, desc);
        let values = |atoms: &[Atom]| -> Vec<RationalFunction> {
            chain_factorize(&d, atoms).unwrap().into_iter().map(|s| s.value).collect()
        };
        let v = values(&[a(Eldest, Female), a(Eldest, TheName), a(Youngest, Female), a(Youngest, TheName)]);
        assert_eq!(v, [rf("1/2"), rf("r"), rf("1/2"), rf("0")]);
        let v = values(&[a(Eldest, Female), a(Eldest, TheName), a(Youngest, Female), a(Youngest, OtherName)]);
        assert_eq!(v, [rf("1/2"), rf("r"), rf("1/2"), rf("1")]);
        let v = values(&[a(Youngest, Female), a(Youngest, TheName), a(Eldest, Female), a(Eldest, OtherName)]);
        assert_eq!(v, [rf("1/2"), rf("r"), rf("1/2"), rf("1")]);
        let product: RationalFunction = v.iter().product();
        assert_eq!(product, rf("r/4"));

        // a factor after a zero-probability prefix is undefined
        let err = chain_factorize(
            &d,
            &[a(Eldest, TheName), a(Youngest, TheName), a(Youngest, Female)],
        );
        assert!(matches!(err, Err(InferenceError::ZeroProbability(_))));
    }

    #[test]
    fn conditional_names() {
        let d = build_distribution(Regime::unique_names());
        let ctx = [
            Atom::new(Eldest, Female),
            Atom::new(Eldest, OtherName),
            Atom::new(Youngest, Female),
        ];
        assert_eq!(conditional_name(&d, Atom::new(Youngest, TheName), &ctx).unwrap(), rf("r/(1 - r)"));
        assert_eq!(
            conditional_name(&d, Atom::new(Youngest, OtherName), &ctx).unwrap(),
            rf("(1 - 2r)/(1 - r)")
        );
        assert_eq!(
            conditional_name(&d, Atom::new(Youngest, TheName), &[Atom::new(Youngest, Female)]).unwrap(),
            rf("r")
        );
        // shared names: the other girl's name carries no information
        let d1 = build_distribution(Regime::shared_names());
        assert_eq!(conditional_name(&d1, Atom::new(Youngest, TheName), &ctx).unwrap(), rf("r"));
    }
}
