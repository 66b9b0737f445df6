use std::fmt;

use serde::{Serialize, Serializer};

use crate::samplespace::{Child, FamilyOutcome, Gender, NameClass, Regime, Slot};

/// What an atom asserts about one child.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Descriptor {
    /// `m`
    Male,
    /// `f`
    Female,
    /// `fN`
    FemaleTheName,
    /// `f!N`
    FemaleOtherName,
    /// `mN`
    MaleTheName,
    /// `m!N`
    MaleOtherName,
    /// `N`: carries the name, whatever the gender.
    TheName,
    /// `!N`: carries some other name of the named gender.
    OtherName,
}

impl Descriptor {
    pub const ALL: [Descriptor; 8] = [
        Descriptor::Male,
        Descriptor::Female,
        Descriptor::FemaleTheName,
        Descriptor::FemaleOtherName,
        Descriptor::MaleTheName,
        Descriptor::MaleOtherName,
        Descriptor::TheName,
        Descriptor::OtherName,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Descriptor::Male => "m",
            Descriptor::Female => "f",
            Descriptor::FemaleTheName => "fN",
            Descriptor::FemaleOtherName => "f!N",
            Descriptor::MaleTheName => "mN",
            Descriptor::MaleOtherName => "m!N",
            Descriptor::TheName => "N",
            Descriptor::OtherName => "!N",
        }
    }

    pub fn from_code(code: &str) -> Option<Descriptor> {
        Descriptor::ALL.into_iter().find(|d| d.code() == code)
    }

    pub fn holds(self, child: &Child) -> bool {
        use Descriptor::*;
        let g = child.gender;
        let n = child.name_class;
        match self {
            Male => g == Gender::Male,
            Female => g == Gender::Female,
            FemaleTheName => g == Gender::Female && n == NameClass::TheName,
            FemaleOtherName => g == Gender::Female && n == NameClass::OtherName,
            MaleTheName => g == Gender::Male && n == NameClass::TheName,
            MaleOtherName => g == Gender::Male && n == NameClass::OtherName,
            TheName => n == NameClass::TheName,
            OtherName => n == NameClass::OtherName,
        }
    }

    /// The gender whose names this descriptor inspects, if any.
    fn name_gender(self) -> Option<Option<Gender>> {
        use Descriptor::*;
        match self {
            Male | Female => None,
            FemaleTheName | FemaleOtherName => Some(Some(Gender::Female)),
            MaleTheName | MaleOtherName => Some(Some(Gender::Male)),
            TheName | OtherName => Some(None),
        }
    }

    /// Whether the regime resolves this descriptor. Name descriptors need
    /// a regime that models names for the matching gender.
    pub fn is_modeled_by(self, regime: &Regime) -> bool {
        match self.name_gender() {
            None => true,
            Some(g) => regime.models_names() && g.is_none_or(|g| g == regime.named_gender),
        }
    }
}

/// One predicate on one child, written `E.fN`, `Y.m`, ...
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub slot: Slot,
    pub descriptor: Descriptor,
}

impl Atom {
    pub const fn new(slot: Slot, descriptor: Descriptor) -> Self {
        Atom { slot, descriptor }
    }

    pub fn holds(&self, outcome: &FamilyOutcome) -> bool {
        self.descriptor.holds(&outcome.child(self.slot))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.slot.symbol(), self.descriptor.code())
    }
}

impl Serialize for Atom {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Boolean combination of atoms. Denotes a set of family outcomes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EventExpr {
    True,
    False,
    Atom(Atom),
    Not(Box<EventExpr>),
    And(Box<EventExpr>, Box<EventExpr>),
    Or(Box<EventExpr>, Box<EventExpr>),
}

impl EventExpr {
    pub fn atom(slot: Slot, descriptor: Descriptor) -> Self {
        EventExpr::Atom(Atom::new(slot, descriptor))
    }

    pub fn and(self, rhs: EventExpr) -> Self {
        EventExpr::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: EventExpr) -> Self {
        EventExpr::Or(Box::new(self), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        EventExpr::Not(Box::new(self))
    }

    /// Left-nested conjunction; `True` when empty.
    pub fn all<I: IntoIterator<Item = Atom>>(atoms: I) -> Self {
        atoms
            .into_iter()
            .map(EventExpr::Atom)
            .reduce(EventExpr::and)
            .unwrap_or(EventExpr::True)
    }

    pub fn holds(&self, outcome: &FamilyOutcome) -> bool {
        match self {
            EventExpr::True => true,
            EventExpr::False => false,
            EventExpr::Atom(a) => a.holds(outcome),
            EventExpr::Not(e) => !e.holds(outcome),
            EventExpr::And(a, b) => a.holds(outcome) && b.holds(outcome),
            EventExpr::Or(a, b) => a.holds(outcome) || b.holds(outcome),
        }
    }

    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Atom>) {
        match self {
            EventExpr::True | EventExpr::False => {}
            EventExpr::Atom(a) => out.push(*a),
            EventExpr::Not(e) => e.collect_atoms(out),
            EventExpr::And(a, b) | EventExpr::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            EventExpr::Or(..) => 1,
            EventExpr::And(..) => 2,
            EventExpr::Not(_) => 3,
            _ => 4,
        }
    }
}

impl fmt::Display for EventExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |f: &mut fmt::Formatter<'_>, e: &EventExpr, min: u8| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            EventExpr::True => f.write_str("true"),
            EventExpr::False => f.write_str("false"),
            EventExpr::Atom(a) => write!(f, "{a}"),
            EventExpr::Not(e) => {
                f.write_str("!")?;
                child(f, e, 3)
            }
            EventExpr::And(a, b) => {
                child(f, a, 2)?;
                f.write_str(" & ")?;
                child(f, b, 3)
            }
            EventExpr::Or(a, b) => {
                child(f, a, 1)?;
                f.write_str(" + ")?;
                child(f, b, 2)
            }
        }
    }
}

impl Serialize for EventExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
