//! Outcome spaces and joint distributions for two-child families.
//!
//! Three background assumptions are supported:
//!
//! * [`RegimeKind::GenderOnly`]: four equiprobable gender sequences.
//! * [`RegimeKind::SharedNames`]: one gender is split by whether the child
//!   carries the name `N` (prevalence `r`), siblings named independently.
//! * [`RegimeKind::UniqueNames`]: as above, but two siblings never share
//!   `N`; per-child marginals are preserved.

mod build;
mod table;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ratfunc::{Rational, RationalFunction};

pub use build::{build_distribution, collapse_to_genders, marginals, JointDistribution};
pub use table::{format_grid, CountTable, Discrepancy, NumericTable, TableExport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Gender {
    Male,
    Female,
}

impl Gender {
    pub fn symbol(self) -> char {
        match self {
            Gender::Male => 'm',
            Gender::Female => 'f',
        }
    }

    pub fn other(self) -> Gender {
        match self {
            Gender::Male => Gender::Female,
            Gender::Female => Gender::Male,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NameClass {
    TheName,
    OtherName,
    /// Names are not modeled for this child (the unsplit gender, or any
    /// child under the gender-only regime).
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Child {
    pub gender: Gender,
    pub name_class: NameClass,
}

impl Child {
    pub const fn new(gender: Gender, name_class: NameClass) -> Self {
        Child { gender, name_class }
    }

    pub const fn unnamed(gender: Gender) -> Self {
        Child::new(gender, NameClass::NotApplicable)
    }

    /// Short descriptor: `m`, `f`, `fN`, `f!N`, `mN`, `m!N`.
    pub fn descriptor(&self) -> String {
        let g = self.gender.symbol();
        match self.name_class {
            NameClass::TheName => format!("{g}N"),
            NameClass::OtherName => format!("{g}!N"),
            NameClass::NotApplicable => g.to_string(),
        }
    }

    /// Descriptor with the attribute renamed for captions (`fID`, `f!ID`).
    pub fn label(&self, alias: Option<AliasLabel>) -> String {
        match alias {
            Some(AliasLabel::Identification) => self.descriptor().replace('N', "ID"),
            _ => self.descriptor(),
        }
    }
}

impl fmt::Display for Child {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

impl FromStr for Child {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.replace("ID", "N");
        let (g, rest) = s.split_at(s.len().min(1));
        let gender = match g {
            "m" => Gender::Male,
            "f" => Gender::Female,
            _ => return Err(format!("unknown child descriptor `{s}`")),
        };
        let name_class = match rest {
            "" => NameClass::NotApplicable,
            "N" => NameClass::TheName,
            "!N" => NameClass::OtherName,
            _ => return Err(format!("unknown child descriptor `{s}`")),
        };
        Ok(Child::new(gender, name_class))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Slot {
    Eldest,
    Youngest,
}

impl Slot {
    pub const ALL: [Slot; 2] = [Slot::Eldest, Slot::Youngest];

    pub fn symbol(self) -> char {
        match self {
            Slot::Eldest => 'E',
            Slot::Youngest => 'Y',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FamilyOutcome {
    pub eldest: Child,
    pub youngest: Child,
}

impl FamilyOutcome {
    pub const fn new(eldest: Child, youngest: Child) -> Self {
        FamilyOutcome { eldest, youngest }
    }

    pub fn child(&self, slot: Slot) -> Child {
        match slot {
            Slot::Eldest => self.eldest,
            Slot::Youngest => self.youngest,
        }
    }

    pub fn swapped(&self) -> FamilyOutcome {
        FamilyOutcome::new(self.youngest, self.eldest)
    }
}

impl fmt::Display for FamilyOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(E.{}, Y.{})", self.eldest, self.youngest)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegimeKind {
    /// `i0`: genders only.
    GenderOnly,
    /// `i1`: siblings may share the name.
    SharedNames,
    /// `i2`: names are unique within a family.
    UniqueNames,
}

impl RegimeKind {
    pub fn code(self) -> &'static str {
        match self {
            RegimeKind::GenderOnly => "i0",
            RegimeKind::SharedNames => "i1",
            RegimeKind::UniqueNames => "i2",
        }
    }
}

impl FromStr for RegimeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "i0" => Ok(RegimeKind::GenderOnly),
            "i1" => Ok(RegimeKind::SharedNames),
            "i2" => Ok(RegimeKind::UniqueNames),
            other => Err(format!("unknown regime `{other}` (expected i0, i1 or i2)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AliasLabel {
    Name,
    Identification,
}

/// Background assumptions under which a distribution is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Regime {
    pub kind: RegimeKind,
    /// Caption label for the split attribute; does not change the math.
    pub alias: Option<AliasLabel>,
    /// Which gender is split by name. Girls by default.
    pub named_gender: Gender,
}

impl Regime {
    pub const fn new(kind: RegimeKind) -> Self {
        Regime {
            kind,
            alias: None,
            named_gender: Gender::Female,
        }
    }

    pub const fn gender_only() -> Self {
        Self::new(RegimeKind::GenderOnly)
    }

    pub const fn shared_names() -> Self {
        Self::new(RegimeKind::SharedNames)
    }

    pub const fn unique_names() -> Self {
        Self::new(RegimeKind::UniqueNames)
    }

    pub fn with_alias(mut self, alias: AliasLabel) -> Self {
        self.alias = Some(alias);
        self
    }

    pub fn with_named_gender(mut self, gender: Gender) -> Self {
        self.named_gender = gender;
        self
    }

    pub fn models_names(&self) -> bool {
        self.kind != RegimeKind::GenderOnly
    }

    /// The per-child categories in table order (unsplit gender first when
    /// it is male, split categories in `N`, `!N` order).
    pub fn children(&self) -> Vec<Child> {
        let split = |g: Gender| {
            if self.models_names() && g == self.named_gender {
                vec![
                    Child::new(g, NameClass::TheName),
                    Child::new(g, NameClass::OtherName),
                ]
            } else {
                vec![Child::unnamed(g)]
            }
        };
        let mut out = split(Gender::Male);
        out.extend(split(Gender::Female));
        out
    }

    /// All ordered (eldest, youngest) pairs over [`Regime::children`],
    /// including pairs that are impossible under this regime.
    pub fn outcome_grid(&self) -> Vec<FamilyOutcome> {
        let children = self.children();
        children
            .iter()
            .flat_map(|&e| children.iter().map(move |&y| FamilyOutcome::new(e, y)))
            .collect()
    }

    pub fn is_possible(&self, outcome: &FamilyOutcome) -> bool {
        !(self.kind == RegimeKind::UniqueNames
            && outcome.eldest.name_class == NameClass::TheName
            && outcome.youngest.name_class == NameClass::TheName)
    }

    /// Probability that a single child falls in `child`'s category when
    /// nothing else is known.
    pub fn child_prior(&self, child: &Child) -> RationalFunction {
        let half = RationalFunction::ratio(1, 2);
        match child.name_class {
            NameClass::NotApplicable => half,
            NameClass::TheName => RationalFunction::param() * half,
            NameClass::OtherName => (RationalFunction::one() - RationalFunction::param()) * half,
        }
    }

    /// Checks that `r` lies in the interval where every cell is a valid
    /// probability: `[0, 1]`, or `[0, 1/2)` when names are unique.
    pub fn check_admissible(&self, r: &Rational) -> Result<(), SampleSpaceError> {
        let zero = Rational::from_integer(0.into());
        let one = Rational::from_integer(1.into());
        let half = Rational::new(1.into(), 2.into());
        let ok = match self.kind {
            RegimeKind::GenderOnly | RegimeKind::SharedNames => *r >= zero && *r <= one,
            RegimeKind::UniqueNames => *r >= zero && *r < half,
        };
        if ok {
            Ok(())
        } else {
            Err(SampleSpaceError::Inadmissible {
                regime: self.kind.code().to_string(),
                r: r.to_string(),
                interval: self.admissible_interval().to_string(),
            })
        }
    }

    pub fn admissible_interval(&self) -> &'static str {
        match self.kind {
            RegimeKind::UniqueNames => "[0, 1/2)",
            _ => "[0, 1]",
        }
    }

    pub fn caption(&self) -> String {
        let attr = match self.alias {
            Some(AliasLabel::Identification) => "identification",
            _ => "name",
        };
        match self.kind {
            RegimeKind::GenderOnly => "i0: gender only, four equiprobable sequences".to_string(),
            RegimeKind::SharedNames => {
                format!("i1: two children may share the same {attr}")
            }
            RegimeKind::UniqueNames => {
                format!("i2: the {attr} singles out at most one child per family")
            }
        }
    }
}

impl Default for Regime {
    fn default() -> Self {
        Regime::unique_names()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SampleSpaceError {
    #[error("r = {r} is outside the admissible interval {interval} for regime {regime}")]
    Inadmissible {
        regime: String,
        r: String,
        interval: String,
    },
    #[error(transparent)]
    Arithmetic(#[from] crate::ratfunc::RatFuncError),
}

/// Read access shared by valid distributions and deliberately flawed
/// tables, so both can be rendered and audited.
pub trait CellTable {
    fn regime(&self) -> &Regime;

    /// Cell values; outcomes impossible by construction are absent.
    fn cells(&self) -> &std::collections::BTreeMap<FamilyOutcome, RationalFunction>;

    fn cell(&self, outcome: &FamilyOutcome) -> Option<&RationalFunction> {
        self.cells().get(outcome)
    }

    fn title(&self) -> String {
        self.regime().caption()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors_round_trip() {
        for regime in [
            Regime::gender_only(),
            Regime::shared_names(),
            Regime::unique_names().with_named_gender(Gender::Male),
        ] {
            for child in regime.children() {
                assert_eq!(child.descriptor().parse::<Child>().unwrap(), child);
            }
        }
        assert_eq!("f!ID".parse::<Child>().unwrap().descriptor(), "f!N");
        assert!("x".parse::<Child>().is_err());
        assert!("fQ".parse::<Child>().is_err());
    }

    #[test]
    fn children_order() {
        let names: Vec<_> = Regime::shared_names().children().iter().map(Child::descriptor).collect();
        assert_eq!(names, ["m", "fN", "f!N"]);
        let names: Vec<_> = Regime::gender_only().children().iter().map(Child::descriptor).collect();
        assert_eq!(names, ["m", "f"]);
        let boys = Regime::shared_names().with_named_gender(Gender::Male);
        let names: Vec<_> = boys.children().iter().map(Child::descriptor).collect();
        assert_eq!(names, ["mN", "m!N", "f"]);
        let id = Regime::unique_names().with_alias(AliasLabel::Identification);
        let labels: Vec<_> = id.children().iter().map(|c| c.label(id.alias)).collect();
        assert_eq!(labels, ["m", "fID", "f!ID"]);
    }

    #[test]
    fn admissible_intervals() {
        let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
        assert!(Regime::shared_names().check_admissible(&q(1, 1)).is_ok());
        assert!(Regime::shared_names().check_admissible(&q(-1, 10)).is_err());
        assert!(Regime::unique_names().check_admissible(&q(49, 100)).is_ok());
        assert!(Regime::unique_names().check_admissible(&q(1, 2)).is_err());
        assert!(Regime::unique_names().check_admissible(&q(0, 1)).is_ok());
    }
}
