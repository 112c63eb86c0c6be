//! Positive commutative monoids.
//!
//! A [`MonoidRef`] is a cheap, shareable handle to one of the builtin families
//! (Boolean, bag, fuzzy, nonnegative reals, min-tropical, powerset, numerical
//! semigroups) or to an explicit finite table. Besides addition it exposes the
//! canonical preorder `a ⊑ b ⇔ ∃c. a + c = b` and a solver for production
//! instances (`b ⊑ c₁ + … + cₙ`, find `dᵢ ⊑ cᵢ` with `Σ dᵢ = b`).

mod elem;
pub mod file;
mod finite;
mod numerical;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

pub use elem::Elem;
pub use finite::{FiniteTable, Tabulated, TableViolation};
pub use numerical::NumericalSemigroup;

use crate::analysis::{self, PropertyReport, Verdict};
use crate::error::{Error, Result};

/// Powersets are tabulated for exhaustive analysis only up to this ground size.
const MAX_TABULATED_GROUND: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Boolean,
    Bag,
    FuzzyMax,
    NonnegReal,
    MinTropical,
    Powerset { ground: Vec<String> },
    Numerical(NumericalSemigroup),
    Finite(FiniteTable),
}

/// Three-valued capability flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl From<Verdict> for Tri {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Holds => Tri::Yes,
            Verdict::Fails => Tri::No,
            Verdict::Unknown => Tri::Unknown,
        }
    }
}

/// How consistency witnesses are built for a monoid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessFamily {
    /// Pointwise lattice meet of the two sides.
    LatticeMeet,
    /// Northwest-corner transportation per shared key.
    Transportation,
    /// The three-case construction driven by a production solver.
    ProductionGeneric,
    /// Exhaustive search over a finite carrier.
    BruteForce,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Capabilities {
    pub preorder_decidable: bool,
    /// The monoid has the production property, so the solver succeeds on every
    /// well-posed instance.
    pub production_solver: bool,
    pub witness_family: WitnessFamily,
    pub icp: Tri,
    pub cancellative: Tri,
}

pub struct Monoid {
    family: Family,
    label: Option<String>,
    tab: OnceLock<Option<Tabulated>>,
    production: OnceLock<PropertyReport>,
    caps: OnceLock<Capabilities>,
}

impl fmt::Debug for Monoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Monoid")
            .field("name", &self.name())
            .field("family", &self.family)
            .finish()
    }
}

/// Shared handle to an immutable monoid.
#[derive(Clone, Debug)]
pub struct MonoidRef(Arc<Monoid>);

impl PartialEq for MonoidRef {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.family == other.0.family
    }
}

impl std::ops::Deref for MonoidRef {
    type Target = Monoid;
    fn deref(&self) -> &Monoid {
        &self.0
    }
}

impl MonoidRef {
    fn from_family(family: Family, label: Option<String>) -> MonoidRef {
        MonoidRef(Arc::new(Monoid {
            family,
            label,
            tab: OnceLock::new(),
            production: OnceLock::new(),
            caps: OnceLock::new(),
        }))
    }

    pub fn boolean() -> MonoidRef {
        Self::from_family(Family::Boolean, None)
    }

    pub fn bag() -> MonoidRef {
        Self::from_family(Family::Bag, None)
    }

    pub fn fuzzy_max() -> MonoidRef {
        Self::from_family(Family::FuzzyMax, None)
    }

    pub fn nonneg_real() -> MonoidRef {
        Self::from_family(Family::NonnegReal, None)
    }

    pub fn min_tropical() -> MonoidRef {
        Self::from_family(Family::MinTropical, None)
    }

    /// Powerset monoid `(P(A), ∪, ∅)` over a ground set of at most 64 names.
    pub fn powerset<S: AsRef<str>>(ground: &[S]) -> Result<MonoidRef> {
        let ground: Vec<String> = ground.iter().map(|s| s.as_ref().to_string()).collect();
        if ground.is_empty() || ground.len() > 64 {
            return Err(Error::InvalidTable(format!(
                "powerset ground set must have 1..=64 elements, got {}",
                ground.len()
            )));
        }
        let mut sorted = ground.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != ground.len() {
            return Err(Error::InvalidTable("powerset ground set has duplicates".into()));
        }
        Ok(Self::from_family(Family::Powerset { ground }, None))
    }

    pub fn numerical_semigroup(generators: &[u64]) -> Result<MonoidRef> {
        Ok(Self::from_family(
            Family::Numerical(NumericalSemigroup::new(generators)?),
            None,
        ))
    }

    /// Validates an explicit table; see [`FiniteTable::validate`].
    pub fn finite(
        elements: &[String],
        add_table: &[Vec<String>],
        zero: &str,
    ) -> std::result::Result<MonoidRef, TableViolation> {
        let table = FiniteTable::validate(elements, add_table, zero)?;
        Ok(Self::from_family(Family::Finite(table), None))
    }

    pub fn from_table(table: FiniteTable, label: Option<String>) -> MonoidRef {
        Self::from_family(Family::Finite(table), label)
    }

    /// `N₂ = ({0,1,2}, ⊕, 0)` with `1⊕1 = 1⊕2 = 2⊕2 = 2`.
    pub fn n2() -> MonoidRef {
        let names = vec!["0".to_string(), "1".to_string(), "2".to_string()];
        let table = FiniteTable::from_fn(names, 0, |a, b| (a + b).min(2))
            .expect("N2 is a positive commutative monoid");
        Self::from_table(table, Some("N2".into()))
    }

    /// Truncated powerset `ℙₖ`: the empty set, all `(k−1)`-subsets of
    /// `{1..k}` and `{1..k}` itself, under union. Requires `3 <= k <= 16`.
    pub fn truncated_powerset(k: usize) -> Result<MonoidRef> {
        if !(3..=16).contains(&k) {
            return Err(Error::InvalidTable(format!(
                "truncated powerset needs 3 <= k <= 16, got {k}"
            )));
        }
        let full: u32 = (1u32 << k) - 1;
        let mut masks = vec![0u32];
        // (k-1)-subsets in lexicographic order of their sorted members: the
        // subset missing element i comes before the one missing element j < i.
        for missing in (0..k).rev() {
            masks.push(full & !(1 << missing));
        }
        masks.push(full);
        let name = |m: u32| {
            let members: Vec<String> = (0..k)
                .filter(|i| m & (1 << i) != 0)
                .map(|i| (i + 1).to_string())
                .collect();
            format!("{{{}}}", members.join(","))
        };
        let names: Vec<String> = masks.iter().map(|&m| name(m)).collect();
        let table = FiniteTable::from_fn(names, 0, |a, b| {
            let u = masks[a as usize] | masks[b as usize];
            masks.iter().position(|&m| m == u).map_or(u32::MAX, |p| p as u32)
        })
        .map_err(|v| Error::InvalidTable(v.to_string()))?;
        Ok(Self::from_table(table, Some(format!("P{k}"))))
    }
}

impl Monoid {
    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn name(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        match &self.family {
            Family::Boolean => "boolean".into(),
            Family::Bag => "bag".into(),
            Family::FuzzyMax => "fuzzy-max".into(),
            Family::NonnegReal => "nonneg-real".into(),
            Family::MinTropical => "min-tropical".into(),
            Family::Powerset { ground } => format!("powerset{{{}}}", ground.join(",")),
            Family::Numerical(s) => {
                let g: Vec<String> = s.generators().iter().map(u64::to_string).collect();
                format!("<{}>", g.join(","))
            }
            Family::Finite(t) => format!("finite({})", t.len()),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(
            self.family,
            Family::Boolean | Family::Powerset { .. } | Family::Finite(_)
        )
    }

    pub fn zero(&self) -> Elem {
        match &self.family {
            Family::Boolean => Elem::Bool(false),
            Family::Bag | Family::Numerical(_) => Elem::Nat(0),
            Family::FuzzyMax | Family::NonnegReal => Elem::real(0.0),
            Family::MinTropical => Elem::real(f64::INFINITY),
            Family::Powerset { .. } => Elem::Set(0),
            Family::Finite(t) => Elem::Index(t.zero),
        }
    }

    pub fn is_zero(&self, e: &Elem) -> bool {
        *e == self.zero()
    }

    pub fn contains(&self, e: &Elem) -> bool {
        match (&self.family, e) {
            (Family::Boolean, Elem::Bool(_)) => true,
            (Family::Bag, Elem::Nat(_)) => true,
            (Family::Numerical(s), Elem::Nat(n)) => s.contains(*n),
            (Family::FuzzyMax, Elem::Real(x)) => (0.0..=1.0).contains(&x.0),
            (Family::NonnegReal, Elem::Real(x)) => x.0 >= 0.0 && x.0.is_finite(),
            (Family::MinTropical, Elem::Real(x)) => !x.0.is_nan() && x.0 != f64::NEG_INFINITY,
            (Family::Powerset { ground }, Elem::Set(s)) => {
                ground.len() == 64 || *s >> ground.len() == 0
            }
            (Family::Finite(t), Elem::Index(i)) => (*i as usize) < t.len(),
            _ => false,
        }
    }

    pub fn check(&self, e: &Elem) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::ForeignElement {
                monoid: self.name(),
                elem: e.to_string(),
            })
        }
    }

    /// Monoid sum, rejecting elements outside the carrier.
    pub fn add(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.plus(a, b))
    }

    /// Monoid sum of carrier elements. Panics on representation mismatch, so
    /// callers must have validated their inputs.
    pub(crate) fn plus(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.family, a, b) {
            (Family::Boolean, Elem::Bool(x), Elem::Bool(y)) => Elem::Bool(*x || *y),
            (Family::Bag | Family::Numerical(_), Elem::Nat(x), Elem::Nat(y)) => {
                Elem::Nat(x.checked_add(*y).expect("bag multiplicity overflow"))
            }
            (Family::FuzzyMax, Elem::Real(x), Elem::Real(y)) => Elem::Real(*x.max(y)),
            (Family::NonnegReal, Elem::Real(x), Elem::Real(y)) => Elem::real(x.0 + y.0),
            (Family::MinTropical, Elem::Real(x), Elem::Real(y)) => Elem::Real(*x.min(y)),
            (Family::Powerset { .. }, Elem::Set(x), Elem::Set(y)) => Elem::Set(x | y),
            (Family::Finite(t), Elem::Index(x), Elem::Index(y)) => Elem::Index(t.add(*x, *y)),
            _ => panic!("element representation mismatch for monoid {}", self.name()),
        }
    }

    pub(crate) fn sum<'a>(&self, items: impl IntoIterator<Item = &'a Elem>) -> Elem {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.plus(&acc, x))
    }

    /// Canonical preorder. Returns `Some(c)` with `a + c = b` exactly when `a ⊑ b`.
    pub fn leq(&self, a: &Elem, b: &Elem) -> Result<Option<Elem>> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.leq_unchecked(a, b))
    }

    pub(crate) fn is_leq(&self, a: &Elem, b: &Elem) -> bool {
        match (&self.family, a, b) {
            (Family::Boolean, Elem::Bool(x), Elem::Bool(y)) => x <= y,
            (Family::Bag, Elem::Nat(x), Elem::Nat(y)) => x <= y,
            (Family::FuzzyMax | Family::NonnegReal, Elem::Real(x), Elem::Real(y)) => x <= y,
            (Family::MinTropical, Elem::Real(x), Elem::Real(y)) => y <= x,
            (Family::Powerset { .. }, Elem::Set(x), Elem::Set(y)) => x & !y == 0,
            _ => self.leq_unchecked(a, b).is_some(),
        }
    }

    pub(crate) fn leq_unchecked(&self, a: &Elem, b: &Elem) -> Option<Elem> {
        match (&self.family, a, b) {
            (Family::Boolean, Elem::Bool(x), Elem::Bool(y)) => (x <= y).then_some(*b),
            (Family::Bag, Elem::Nat(x), Elem::Nat(y)) => (x <= y).then(|| Elem::Nat(y - x)),
            (Family::Numerical(s), Elem::Nat(x), Elem::Nat(y)) => {
                (x <= y && s.contains(y - x)).then(|| Elem::Nat(y - x))
            }
            (Family::FuzzyMax, Elem::Real(x), Elem::Real(y)) => (x <= y).then_some(*b),
            (Family::NonnegReal, Elem::Real(x), Elem::Real(y)) => {
                if x > y {
                    return None;
                }
                Some(Elem::real(real_difference(x.0, y.0)))
            }
            (Family::MinTropical, Elem::Real(x), Elem::Real(y)) => (y <= x).then_some(*b),
            (Family::Powerset { .. }, Elem::Set(x), Elem::Set(y)) => (x & !y == 0).then_some(*b),
            (Family::Finite(_), Elem::Index(x), Elem::Index(y)) => {
                let tab = self.tabulated().expect("finite tables are tabulated");
                tab.leq_witness(*x, *y).map(Elem::Index)
            }
            _ => None,
        }
    }

    /// Lattice meet for the families whose addition is a lattice join.
    pub fn meet(&self, a: &Elem, b: &Elem) -> Option<Elem> {
        match (&self.family, a, b) {
            (Family::Boolean, Elem::Bool(x), Elem::Bool(y)) => Some(Elem::Bool(*x && *y)),
            (Family::Powerset { .. }, Elem::Set(x), Elem::Set(y)) => Some(Elem::Set(x & y)),
            (Family::FuzzyMax, Elem::Real(x), Elem::Real(y)) => Some(Elem::Real(*x.min(y))),
            (Family::MinTropical, Elem::Real(x), Elem::Real(y)) => Some(Elem::Real(*x.max(y))),
            _ => None,
        }
    }

    pub fn has_lattice_meet(&self) -> bool {
        matches!(
            self.family,
            Family::Boolean | Family::Powerset { .. } | Family::FuzzyMax | Family::MinTropical
        )
    }

    /// Tabulated carrier for finite monoids (and powersets over small grounds).
    pub fn tabulated(&self) -> Option<&Tabulated> {
        self.tab
            .get_or_init(|| {
                let elems: Vec<Elem> = match &self.family {
                    Family::Boolean => vec![Elem::Bool(false), Elem::Bool(true)],
                    Family::Powerset { ground } if ground.len() <= MAX_TABULATED_GROUND => {
                        (0..1u64 << ground.len()).map(Elem::Set).collect()
                    }
                    Family::Finite(t) => (0..t.len() as u32).map(Elem::Index).collect(),
                    _ => return None,
                };
                let n = elems.len();
                let zero = elems.iter().position(|e| self.is_zero(e)).unwrap() as u32;
                let table = match &self.family {
                    Family::Finite(t) => t.table.clone(),
                    _ => {
                        let index: std::collections::HashMap<Elem, u32> =
                            elems.iter().enumerate().map(|(i, e)| (*e, i as u32)).collect();
                        let mut table = Vec::with_capacity(n * n);
                        for a in &elems {
                            for b in &elems {
                                table.push(index[&self.plus(a, b)]);
                            }
                        }
                        table
                    }
                };
                Some(Tabulated::new(elems, zero, table))
            })
            .as_ref()
    }

    /// Carrier element list for finite monoids.
    pub fn elements(&self) -> Option<Vec<Elem>> {
        self.tabulated().map(|t| t.elems.clone())
    }

    /// Cached production-property (n = 2) report; see [`analysis::check_production_n2`].
    pub(crate) fn production_report(&self) -> &PropertyReport {
        self.production
            .get_or_init(|| analysis::compute_production_n2(self))
    }

    pub fn capabilities(&self) -> &Capabilities {
        self.caps.get_or_init(|| {
            let (production_solver, witness_family, icp, cancellative) = match &self.family {
                Family::Boolean
                | Family::Powerset { .. }
                | Family::FuzzyMax
                | Family::MinTropical => (true, WitnessFamily::LatticeMeet, Tri::Yes, Tri::No),
                Family::Bag | Family::NonnegReal => {
                    (true, WitnessFamily::Transportation, Tri::Yes, Tri::Yes)
                }
                Family::Numerical(s) if s.is_naturals() => {
                    (true, WitnessFamily::Transportation, Tri::Yes, Tri::Yes)
                }
                Family::Numerical(_) => (false, WitnessFamily::None, Tri::No, Tri::Yes),
                Family::Finite(_) => {
                    let prod = self.production_report().verdict == Verdict::Holds;
                    let icp = analysis::compute_transport_2x2(self).verdict.into();
                    let canc = analysis::compute_cancellative(self).verdict.into();
                    let family = if prod {
                        WitnessFamily::ProductionGeneric
                    } else {
                        WitnessFamily::BruteForce
                    };
                    (prod, family, icp, canc)
                }
            };
            Capabilities {
                preorder_decidable: true,
                production_solver,
                witness_family,
                icp,
                cancellative,
            }
        })
    }

    /// Whether the monoid has the production property; cheaper than
    /// [`capabilities`](Self::capabilities) for finite tables.
    pub fn has_production_property(&self) -> bool {
        match &self.family {
            Family::Finite(_) => self.production_report().verdict == Verdict::Holds,
            Family::Numerical(s) => s.is_naturals(),
            _ => true,
        }
    }

    /// Solves `d₁ + … + dₙ = b` with `dᵢ ⊑ cᵢ`. `Ok(None)` means provably
    /// infeasible; every returned solution has been re-checked against both
    /// contract equations.
    pub fn production_solve(&self, b: &Elem, caps: &[Elem]) -> Result<Option<Vec<Elem>>> {
        self.check(b)?;
        for c in caps {
            self.check(c)?;
        }
        if caps.is_empty() {
            return Err(Error::Contract("production instance needs n >= 1".into()));
        }
        let total = self.sum(caps);
        // Any solution gives b = Σd ⊑ Σc, so this is a complete infeasibility test.
        if !self.is_leq(b, &total) {
            return Ok(None);
        }
        let d: Vec<Elem> = match (&self.family, b) {
            (Family::Bag, Elem::Nat(b)) => {
                let mut rest = *b;
                caps.iter()
                    .map(|c| {
                        let d = rest.min(c.as_nat().unwrap());
                        rest -= d;
                        Elem::Nat(d)
                    })
                    .collect()
            }
            (Family::NonnegReal, Elem::Real(b)) => {
                let mut rest = b.0;
                caps.iter()
                    .map(|c| {
                        let d = rest.min(c.as_real().unwrap());
                        rest -= d;
                        Elem::real(d)
                    })
                    .collect()
            }
            (Family::FuzzyMax, Elem::Real(b)) => caps
                .iter()
                .map(|c| Elem::Real(*b.min(&OrderedPart::of(c))))
                .collect(),
            (Family::MinTropical, Elem::Real(b)) => caps
                .iter()
                .map(|c| Elem::Real(*b.max(&OrderedPart::of(c))))
                .collect(),
            (Family::Boolean | Family::Powerset { .. }, _) => {
                caps.iter().map(|c| self.meet(b, c).unwrap()).collect()
            }
            (Family::Numerical(s), Elem::Nat(b)) => {
                let nat: Vec<u64> = caps.iter().map(|c| c.as_nat().unwrap()).collect();
                match s.production_search(*b, &nat) {
                    Some(d) => d.into_iter().map(Elem::Nat).collect(),
                    None => return Ok(None),
                }
            }
            (Family::Finite(_), Elem::Index(b)) => {
                let report = self.production_report();
                if report.verdict != Verdict::Holds {
                    return Err(Error::Unsupported {
                        monoid: self.name(),
                        capability: "production-solver",
                        detail: Some(format!(
                            "production property fails for n=2, counterexample {}",
                            report.counterexample_text()
                        )),
                    });
                }
                let tab = self.tabulated().unwrap();
                let idx: Vec<u32> = caps.iter().map(|c| c.as_index().unwrap()).collect();
                let d = fold_production(tab, *b, &idx).ok_or_else(|| {
                    Error::Contract(format!(
                        "finite production fold failed on a feasible instance for {}",
                        self.name()
                    ))
                })?;
                d.into_iter().map(Elem::Index).collect()
            }
            _ => unreachable!("representation checked above"),
        };
        self.verify_production(b, caps, &d)?;
        Ok(Some(d))
    }

    fn verify_production(&self, b: &Elem, caps: &[Elem], d: &[Elem]) -> Result<()> {
        for (di, ci) in d.iter().zip(caps) {
            if !self.is_leq(di, ci) {
                return Err(Error::Contract(format!(
                    "production solution component {} is not below capacity {}",
                    self.format_elem(di),
                    self.format_elem(ci)
                )));
            }
        }
        let s = self.sum(d);
        if s != *b {
            return Err(Error::Contract(format!(
                "production solution sums to {} instead of {}",
                self.format_elem(&s),
                self.format_elem(b)
            )));
        }
        Ok(())
    }

    pub fn parse_elem(&self, text: &str) -> Result<Elem> {
        let token = text.trim();
        let err = |message: &str| Error::ParseElem {
            family: self.name(),
            token: token.to_string(),
            message: message.to_string(),
        };
        let e = match &self.family {
            Family::Boolean => match token {
                "0" | "false" => Elem::Bool(false),
                "1" | "true" => Elem::Bool(true),
                _ => return Err(err("expected 0 or 1")),
            },
            Family::Bag | Family::Numerical(_) => {
                Elem::Nat(token.parse::<u64>().map_err(|_| err("expected a nonnegative integer"))?)
            }
            Family::FuzzyMax | Family::NonnegReal | Family::MinTropical => {
                let lower = token.to_ascii_lowercase();
                let x = if lower == "inf" || lower == "+inf" || token == "∞" {
                    f64::INFINITY
                } else {
                    token.parse::<f64>().map_err(|_| err("expected a decimal number"))?
                };
                if x.is_nan() {
                    return Err(err("NaN is not a monoid element"));
                }
                Elem::real(x)
            }
            Family::Powerset { ground } => {
                let inner = token
                    .strip_prefix('{')
                    .and_then(|t| t.strip_suffix('}'))
                    .ok_or_else(|| err("expected a set literal like {a,b}"))?;
                let mut mask = 0u64;
                for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                    let i = ground
                        .iter()
                        .position(|g| g == part)
                        .ok_or_else(|| err(&format!("{part:?} is not in the ground set")))?;
                    mask |= 1 << i;
                }
                Elem::Set(mask)
            }
            Family::Finite(t) => {
                Elem::Index(t.index_of(token).ok_or_else(|| err("unknown element name"))?)
            }
        };
        if !self.contains(&e) {
            return Err(err("value outside the carrier"));
        }
        Ok(e)
    }

    pub fn format_elem(&self, e: &Elem) -> String {
        match (&self.family, e) {
            (Family::Powerset { ground }, Elem::Set(s)) => {
                let members: Vec<&str> = ground
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| s & (1 << i) != 0)
                    .map(|(_, g)| g.as_str())
                    .collect();
                format!("{{{}}}", members.join(","))
            }
            (Family::Finite(t), Elem::Index(i)) => t
                .names
                .get(*i as usize)
                .cloned()
                .unwrap_or_else(|| e.to_string()),
            _ => e.to_string(),
        }
    }

    /// A small pool of nonzero elements used by the random generators.
    pub fn sample_pool(&self) -> Vec<Elem> {
        let pool: Vec<Elem> = match &self.family {
            Family::Boolean => vec![Elem::Bool(true)],
            Family::Bag => (1..=4).map(Elem::Nat).collect(),
            Family::Numerical(s) => (1..=16).filter(|&n| s.contains(n)).take(6).map(Elem::Nat).collect(),
            Family::FuzzyMax => (1..=8).map(|i| Elem::real(i as f64 / 8.0)).collect(),
            Family::NonnegReal => [0.25, 0.5, 0.75, 1.0, 1.5, 2.0].iter().map(|&x| Elem::real(x)).collect(),
            Family::MinTropical => [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.5]
                .iter()
                .map(|&x| Elem::real(x))
                .collect(),
            Family::Powerset { ground } => {
                let bits = ground.len().min(6);
                (1..1u64 << bits).map(Elem::Set).collect()
            }
            Family::Finite(t) => (0..t.len() as u32)
                .filter(|&i| i != t.zero)
                .map(Elem::Index)
                .collect(),
        };
        pool
    }
}

/// Difference `y - x` for `x <= y`, nudged by a few ulps when that makes
/// `x + c == y` hold exactly in floating point.
fn real_difference(x: f64, y: f64) -> f64 {
    let c = y - x;
    if x + c == y {
        return c;
    }
    let mut lo = c;
    let mut hi = c;
    for _ in 0..4 {
        lo = lo.next_down().max(0.0);
        hi = hi.next_up();
        for cand in [lo, hi] {
            if x + cand == y {
                return cand;
            }
        }
    }
    c
}

struct OrderedPart;

impl OrderedPart {
    fn of(e: &Elem) -> ordered_float::OrderedFloat<f64> {
        match e {
            Elem::Real(x) => *x,
            _ => unreachable!("real family"),
        }
    }
}

/// Exhaustive n = 2 split on a tabulated carrier: lexicographically first
/// `(d₁, d₂)` with `d₁ ⊑ c₁`, `d₂ ⊑ c₂`, `d₁ + d₂ = b`.
pub(crate) fn split_two(tab: &Tabulated, b: u32, c1: u32, c2: u32) -> Option<(u32, u32)> {
    for &d1 in tab.down(c1) {
        for &d2 in tab.down(c2) {
            if tab.add(d1, d2) == b {
                return Some((d1, d2));
            }
        }
    }
    None
}

/// Reduces an n-ary production instance to repeated binary splits:
/// split `b` between `c₁ + … + cₙ₋₁` and `cₙ`, then recurse on the first part.
/// Only complete when the monoid has the production property for n = 2.
pub(crate) fn fold_production(tab: &Tabulated, b: u32, caps: &[u32]) -> Option<Vec<u32>> {
    match caps {
        [] => None,
        [c] => tab.leq(b, *c).then(|| vec![b]),
        [init @ .., last] => {
            let head = init.iter().fold(tab.zero(), |acc, &c| tab.add(acc, c));
            let (d, dn) = split_two(tab, b, head, *last)?;
            let mut out = fold_production(tab, d, init)?;
            out.push(dn);
            Some(out)
        }
    }
}
