use std::fmt;

use ordered_float::OrderedFloat;

/// A monoid value.
///
/// The representation depends on the monoid family; an `Elem` on its own does
/// not know which monoid it belongs to, so every public operation on a
/// [`MonoidRef`](super::MonoidRef) checks membership first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Bool(bool),
    /// Bag multiplicities and numerical-semigroup members.
    Nat(u64),
    /// Fuzzy, nonnegative-real and min-tropical values (`+inf` allowed for the latter).
    Real(OrderedFloat<f64>),
    /// Subset of a powerset ground set, one bit per ground element.
    Set(u64),
    /// Index into the element list of a finite table.
    Index(u32),
}

impl Elem {
    /// Real-valued element with `-0.0` folded into `0.0`.
    pub fn real(x: f64) -> Elem {
        Elem::Real(OrderedFloat(if x == 0.0 { 0.0 } else { x }))
    }

    pub fn as_real(&self) -> Option<f64> {
        match self {
            Elem::Real(x) => Some(x.0),
            _ => None,
        }
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self {
            Elem::Nat(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_set(&self) -> Option<u64> {
        match self {
            Elem::Set(s) => Some(*s),
            _ => None,
        }
    }

    pub fn as_index(&self) -> Option<u32> {
        match self {
            Elem::Index(i) => Some(*i),
            _ => None,
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Bool(b) => write!(f, "{}", u8::from(*b)),
            Elem::Nat(n) => write!(f, "{n}"),
            Elem::Real(x) if x.0.is_infinite() => f.write_str("inf"),
            Elem::Real(x) => write!(f, "{}", x.0),
            Elem::Set(s) => write!(f, "set#{s:b}"),
            Elem::Index(i) => write!(f, "#{i}"),
        }
    }
}

impl From<bool> for Elem {
    fn from(b: bool) -> Self {
        Elem::Bool(b)
    }
}

impl From<u64> for Elem {
    fn from(n: u64) -> Self {
        Elem::Nat(n)
    }
}

impl From<f64> for Elem {
    fn from(x: f64) -> Self {
        Elem::real(x)
    }
}
