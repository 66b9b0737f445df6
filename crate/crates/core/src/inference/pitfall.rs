use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use super::ops::{conditional_in, mass, validate};
use super::{EventExpr, InferenceError};
use crate::ratfunc::{Rational, RationalFunction};
use crate::samplespace::{
    marginals, CellTable, Child, FamilyOutcome, NameClass, Regime, Slot,
};

/// The unique-name table as produced by the flawed eldest-first chain
/// rule that treats the younger girl's name as independent of an older
/// sister's non-`N` name.
///
/// It sums to one but is not symmetric and does not preserve the
/// youngest child's marginals. It is a separate type from
/// [`crate::samplespace::JointDistribution`] so it cannot be used where a
/// valid distribution is expected.
#[derive(Clone, Debug, PartialEq)]
pub struct PitfallTable {
    regime: Regime,
    cells: BTreeMap<FamilyOutcome, RationalFunction>,
}

impl CellTable for PitfallTable {
    fn regime(&self) -> &Regime {
        &self.regime
    }

    fn cells(&self) -> &BTreeMap<FamilyOutcome, RationalFunction> {
        &self.cells
    }

    fn title(&self) -> String {
        "WRONG REASONING: i2 table built assuming an elder sister's other name \
         leaves the younger girl's name probabilities unchanged"
            .to_string()
    }
}

impl PitfallTable {
    pub fn probability(&self, e: &EventExpr) -> Result<RationalFunction, InferenceError> {
        validate(&self.regime, e)?;
        Ok(mass(self, e))
    }

    pub fn conditional(
        &self,
        a: &EventExpr,
        b: &EventExpr,
    ) -> Result<RationalFunction, InferenceError> {
        conditional_in(self, a, b)
    }
}

/// Builds the flawed girl-name table.
pub fn build_pitfall_table() -> PitfallTable {
    let regime = Regime::unique_names();
    let r = RationalFunction::param;
    let half = || RationalFunction::ratio(1, 2);
    let named_prior = |class: NameClass| match class {
        NameClass::NotApplicable => RationalFunction::one(),
        NameClass::TheName => r(),
        NameClass::OtherName => RationalFunction::one() - r(),
    };
    let mut cells = BTreeMap::new();
    for outcome in regime.outcome_grid() {
        if !regime.is_possible(&outcome) {
            continue;
        }
        let FamilyOutcome { eldest, youngest } = outcome;
        // P(youngest's name | youngest's gender, eldest): only the
        // elder-`N` case is handled correctly.
        let youngest_name = match (eldest.name_class, youngest.name_class) {
            (NameClass::TheName, NameClass::OtherName) => RationalFunction::one(),
            (_, class) => named_prior(class),
        };
        let value = half() * named_prior(eldest.name_class) * half() * youngest_name;
        cells.insert(outcome, value);
    }
    PitfallTable { regime, cells }
}

fn serialize_child<S: Serializer>(c: &Child, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(c)
}

/// `cell(eldest, youngest) - cell(youngest, eldest)` for a pair listed in
/// table order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellDefect {
    #[serde(serialize_with = "serialize_child")]
    pub eldest: Child,
    #[serde(serialize_with = "serialize_child")]
    pub youngest: Child,
    pub defect: RationalFunction,
}

/// A slot marginal that differs from the single-child prior.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarginalViolation {
    pub slot: Slot,
    #[serde(serialize_with = "serialize_child")]
    pub child: Child,
    pub expected: RationalFunction,
    pub actual: RationalFunction,
    /// `expected - actual`
    pub shortfall: RationalFunction,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub passed: bool,
    pub symmetric: bool,
    /// The defect of largest magnitude at `r = 1/4`; zero when symmetric.
    pub max_defect: RationalFunction,
    pub defects: Vec<CellDefect>,
    pub marginal_violations: Vec<MarginalViolation>,
}

/// Checks that a table is unchanged by swapping the eldest and youngest
/// labels and that both slot marginals equal the single-child priors.
pub fn check_symmetry<T: CellTable + ?Sized>(table: &T) -> SymmetryReport {
    let regime = *table.regime();
    let children = regime.children();
    let value = |o: &FamilyOutcome| table.cell(o).cloned().unwrap_or_default();

    let mut defects = Vec::new();
    for (i, &a) in children.iter().enumerate() {
        for &b in &children[i + 1..] {
            let o = FamilyOutcome::new(a, b);
            let defect = value(&o) - value(&o.swapped());
            if !defect.is_zero() {
                defects.push(CellDefect {
                    eldest: a,
                    youngest: b,
                    defect,
                });
            }
        }
    }

    let probe = Rational::new(1.into(), 4.into());
    let magnitude = |d: &CellDefect| {
        d.defect
            .eval_at(&probe)
            .map(|v| if v < Rational::from_integer(0.into()) { -v } else { v })
            .ok()
    };
    let max_defect = defects
        .iter()
        .max_by(|x, y| magnitude(x).cmp(&magnitude(y)))
        .map(|d| d.defect.clone())
        .unwrap_or_default();

    let mut marginal_violations = Vec::new();
    for slot in Slot::ALL {
        for (child, actual) in marginals(table, slot) {
            let expected = regime.child_prior(&child);
            let shortfall = &expected - &actual;
            if !shortfall.is_zero() {
                marginal_violations.push(MarginalViolation {
                    slot,
                    child,
                    expected,
                    actual,
                    shortfall,
                });
            }
        }
    }

    let symmetric = defects.is_empty();
    SymmetryReport {
        passed: symmetric && marginal_violations.is_empty(),
        symmetric,
        max_defect,
        defects,
        marginal_violations,
    }
}


#[cfg(test)]
mod tests {
    use super::super::Descriptor::*;
    use super::*;
    use crate::samplespace::build_distribution;

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    fn child(s: &str) -> Child {
        s.parse().unwrap()
    }

    fn cell(t: &PitfallTable, e: &str, y: &str) -> RationalFunction {
        t.cells()[&FamilyOutcome::new(child(e), child(y))].clone()
    }

    #[test]
    fn reproduces_the_flawed_table() {
        let t = build_pitfall_table();
        assert_eq!(t.cells().len(), 8);
        assert_eq!(cell(&t, "f!N", "fN"), rf("r(1 - r)/4"));
        assert_eq!(cell(&t, "f!N", "f!N"), rf("(1 - r)^2/4"));
        assert_eq!(cell(&t, "fN", "f!N"), rf("r/4"));
        assert_eq!(cell(&t, "m", "fN"), rf("r/4"));
        let total: RationalFunction = t.cells().values().sum();
        assert_eq!(total, RationalFunction::one());
        let ym = marginals(&t, Slot::Youngest);
        assert_eq!(ym[&child("fN")], rf("r/2 - r^2/4"));
        assert_eq!(ym[&child("f!N")], rf("(1 - r)/2 + r^2/4"));
    }

    #[test]
    fn flawed_table_gives_the_shared_name_answer() {
        let t = build_pitfall_table();
        let two_girls = EventExpr::atom(Slot::Eldest, Female).and(EventExpr::atom(Slot::Youngest, Female));
        let named = EventExpr::atom(Slot::Eldest, FemaleTheName)
            .or(EventExpr::atom(Slot::Youngest, FemaleTheName));
        assert_eq!(t.conditional(&two_girls, &named).unwrap(), rf("(1/2)(1 - r/2)/(1 - r/4)"));
        assert_eq!(t.probability(&named).unwrap(), rf("3r/4 + r(1 - r)/4"));
    }

    #[test]
    fn symmetry_reports() {
        let report = check_symmetry(&build_pitfall_table());
        assert!(!report.passed);
        assert!(!report.symmetric);
        assert_eq!(report.max_defect, rf("r^2/4"));
        assert_eq!(report.defects.len(), 1);
        assert_eq!(report.defects[0].eldest, child("fN"));
        assert_eq!(report.defects[0].youngest, child("f!N"));
        let fn_short = report
            .marginal_violations
            .iter()
            .find(|v| v.slot == Slot::Youngest && v.child == child("fN"))
            .unwrap();
        assert_eq!(fn_short.shortfall, rf("r^2/4"));
        assert_eq!(report.marginal_violations.len(), 2);

        for regime in [Regime::gender_only(), Regime::shared_names(), Regime::unique_names()] {
            let rep = check_symmetry(&build_distribution(regime));
            assert!(rep.passed, "{regime:?}");
            assert!(rep.max_defect.is_zero());
        }
    }
}
