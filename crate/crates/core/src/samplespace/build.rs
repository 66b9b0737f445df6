use std::collections::BTreeMap;

use super::{CellTable, Child, FamilyOutcome, Gender, NameClass, Regime, RegimeKind, Slot};
use crate::ratfunc::RationalFunction;

/// Probabilities of every possible family under one regime.
///
/// Only [`build_distribution`] creates these, so every value of this type
/// sums to one and is symmetric under relabeling eldest and youngest.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution {
    regime: Regime,
    cells: BTreeMap<FamilyOutcome, RationalFunction>,
}

impl JointDistribution {
    pub fn regime(&self) -> &Regime {
        &self.regime
    }

    pub fn cells(&self) -> &BTreeMap<FamilyOutcome, RationalFunction> {
        &self.cells
    }

    /// Value of a cell; impossible outcomes are zero.
    pub fn get(&self, outcome: &FamilyOutcome) -> RationalFunction {
        self.cells.get(outcome).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> RationalFunction {
        self.cells.values().sum()
    }
}

impl CellTable for JointDistribution {
    fn regime(&self) -> &Regime {
        &self.regime
    }

    fn cells(&self) -> &BTreeMap<FamilyOutcome, RationalFunction> {
        &self.cells
    }
}

pub fn build_distribution(regime: Regime) -> JointDistribution {
    let cells = match regime.kind {
        RegimeKind::GenderOnly | RegimeKind::SharedNames => independent_cells(&regime),
        RegimeKind::UniqueNames => {
            let repaired = repaired_unique_cells(&regime);
            let chained = chain_rule_unique_cells(&regime);
            assert!(
                repaired.len() == chained.len()
                    && repaired.iter().all(|(k, v)| chained.get(k) == Some(v)),
                "unique-name table: marginal repair and chain rule disagree"
            );
            repaired
        }
    };
    JointDistribution { regime, cells }
}

fn independent_cells(regime: &Regime) -> BTreeMap<FamilyOutcome, RationalFunction> {
    regime
        .outcome_grid()
        .into_iter()
        .map(|o| {
            let p = regime.child_prior(&o.eldest) * regime.child_prior(&o.youngest);
            (o, p)
        })
        .collect()
}

/// Start from the shared-name table, drop the both-named cell, and solve
/// the remaining named-gender block so that every row and column sum
/// keeps its single-child prior.
fn repaired_unique_cells(regime: &Regime) -> BTreeMap<FamilyOutcome, RationalFunction> {
    let shared = Regime { kind: RegimeKind::SharedNames, ..*regime };
    let mut cells = independent_cells(&shared);
    let g = regime.named_gender;
    let named = Child::new(g, NameClass::TheName);
    let other = Child::new(g, NameClass::OtherName);
    let unsplit = Child::unnamed(g.other());

    cells.remove(&FamilyOutcome::new(named, named));
    let at = |cells: &BTreeMap<_, RationalFunction>, e, y| cells[&FamilyOutcome::new(e, y)].clone();

    // row `named`: prior = cell(named, unsplit) + cell(named, other)
    let named_other = regime.child_prior(&named) - at(&cells, named, unsplit);
    // column `named`: prior = cell(unsplit, named) + cell(other, named)
    let other_named = regime.child_prior(&named) - at(&cells, unsplit, named);
    cells.insert(FamilyOutcome::new(named, other), named_other);
    cells.insert(FamilyOutcome::new(other, named), other_named.clone());
    // row `other`: prior = cell(other, unsplit) + cell(other, named) + cell(other, other)
    let other_other =
        regime.child_prior(&other) - at(&cells, other, unsplit) - other_named;
    cells.insert(FamilyOutcome::new(other, other), other_other);
    cells
}

/// Direct chain-rule products. A cell is expanded starting from whichever
/// child's conditionals are elementary; the both-`!N` cell is closed by
/// normalization.
fn chain_rule_unique_cells(regime: &Regime) -> BTreeMap<FamilyOutcome, RationalFunction> {
    let g = regime.named_gender;
    let named = Child::new(g, NameClass::TheName);
    let other = Child::new(g, NameClass::OtherName);
    let r = RationalFunction::param;
    let half = || RationalFunction::ratio(1, 2);

    // P(second child's name class | second child's gender, first child)
    let name_given = |first: &Child, second: &Child| -> RationalFunction {
        match (first.name_class, second.name_class) {
            (_, NameClass::NotApplicable) => RationalFunction::one(),
            (NameClass::TheName, NameClass::TheName) => RationalFunction::zero(),
            (NameClass::TheName, NameClass::OtherName) => RationalFunction::one(),
            (_, NameClass::TheName) => r(),
            (_, NameClass::OtherName) => RationalFunction::one() - r(),
        }
    };
    // P(first) * P(second gender | first) * P(second name | ...)
    let chain = |first: &Child, second: &Child| -> RationalFunction {
        let first_name = match first.name_class {
            NameClass::NotApplicable => RationalFunction::one(),
            NameClass::TheName => r(),
            NameClass::OtherName => RationalFunction::one() - r(),
        };
        half() * first_name * half() * name_given(first, second)
    };

    let mut cells = BTreeMap::new();
    for outcome in regime.outcome_grid() {
        let FamilyOutcome { eldest, youngest } = outcome;
        if eldest == named && youngest == named {
            continue;
        }
        if eldest == other && youngest == other {
            continue;
        }
        let value = if eldest == other {
            chain(&youngest, &eldest)
        } else {
            chain(&eldest, &youngest)
        };
        cells.insert(outcome, value);
    }
    let rest: RationalFunction = cells.values().sum();
    cells.insert(FamilyOutcome::new(other, other), RationalFunction::one() - rest);
    cells
}

/// Per-slot marginal over the regime's child categories.
pub fn marginals<T: CellTable + ?Sized>(table: &T, slot: Slot) -> BTreeMap<Child, RationalFunction> {
    let mut out: BTreeMap<Child, RationalFunction> = table
        .regime()
        .children()
        .into_iter()
        .map(|c| (c, RationalFunction::zero()))
        .collect();
    for (outcome, p) in table.cells() {
        let entry = out.entry(outcome.child(slot)).or_default();
        *entry = &*entry + p;
    }
    out
}

/// Sums cells over name classes, leaving the four gender sequences.
pub fn collapse_to_genders<T: CellTable + ?Sized>(
    table: &T,
) -> BTreeMap<(Gender, Gender), RationalFunction> {
    let mut out = BTreeMap::new();
    for (o, p) in table.cells() {
        let entry: &mut RationalFunction = out
            .entry((o.eldest.gender, o.youngest.gender))
            .or_default();
        *entry = &*entry + p;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::Rational;

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    fn child(s: &str) -> Child {
        s.parse().unwrap()
    }

    fn cell(d: &JointDistribution, e: &str, y: &str) -> Option<RationalFunction> {
        d.cells().get(&FamilyOutcome::new(child(e), child(y))).cloned()
    }

    #[test]
    fn gender_only_quarters() {
        let d = build_distribution(Regime::gender_only());
        assert_eq!(d.cells().len(), 4);
        assert!(d.cells().values().all(|p| *p == rf("1/4")));
    }

    #[test]
    fn shared_names_products() {
        let d = build_distribution(Regime::shared_names());
        assert_eq!(d.cells().len(), 9);
        assert_eq!(cell(&d, "fN", "fN").unwrap(), rf("r^2/4"));
        assert_eq!(cell(&d, "fN", "f!N").unwrap(), rf("r(1 - r)/4"));
        assert_eq!(cell(&d, "f!N", "f!N").unwrap(), rf("(1 - r)^2/4"));
        assert_eq!(cell(&d, "m", "fN").unwrap(), rf("r/4"));
    }

    #[test]
    fn unique_names_cells() {
        let d = build_distribution(Regime::unique_names());
        assert_eq!(d.cells().len(), 8);
        assert!(cell(&d, "fN", "fN").is_none());
        for (e, y) in [("m", "fN"), ("fN", "m"), ("fN", "f!N"), ("f!N", "fN")] {
            assert_eq!(cell(&d, e, y).unwrap(), rf("r/4"), "{e},{y}");
        }
        assert_eq!(cell(&d, "f!N", "f!N").unwrap(), rf("(1 - 2r)/4"));
        assert_eq!(d.total(), RationalFunction::one());
    }

    #[test]
    fn marginal_examples() {
        let d = build_distribution(Regime::unique_names());
        assert_eq!(marginals(&d, Slot::Eldest)[&child("fN")], rf("r/2"));
        let d0 = build_distribution(Regime::gender_only());
        assert_eq!(marginals(&d0, Slot::Youngest)[&child("m")], rf("1/2"));
        let d1 = build_distribution(Regime::shared_names());
        assert_eq!(marginals(&d1, Slot::Eldest), marginals(&d1, Slot::Youngest));
    }

    #[test]
    fn boy_name_variant_mirrors_girls() {
        let d = build_distribution(Regime::unique_names().with_named_gender(Gender::Male));
        assert_eq!(d.cells().len(), 8);
        assert!(cell(&d, "mN", "mN").is_none());
        assert_eq!(cell(&d, "m!N", "m!N").unwrap(), rf("(1 - 2r)/4"));
        assert_eq!(cell(&d, "f", "mN").unwrap(), rf("r/4"));
        assert_eq!(d.total(), RationalFunction::one());
    }

    #[test]
    fn zero_prevalence_drops_named_cells() {
        let d = build_distribution(Regime::unique_names());
        let zero = Rational::from_integer(0.into());
        for (o, p) in d.cells() {
            let v = p.eval_at(&zero).unwrap();
            let involves_name = o.eldest.name_class == NameClass::TheName
                || o.youngest.name_class == NameClass::TheName;
            if involves_name {
                assert_eq!(v, zero);
            } else {
                assert_eq!(v, Rational::new(1.into(), 4.into()));
            }
        }
    }
}
