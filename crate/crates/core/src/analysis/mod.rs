//! Decision procedures over monoids.
//!
//! Finite carriers are decided exhaustively, scanning candidates in element
//! order so the first counterexample found is the lexicographically smallest.
//! Infinite builtins get verdicts from closed-form arguments
//! ([`Provenance::KnownResult`]), except numerical semigroups, where the
//! preorder is bounded (`d ⊑ c` forces `d <= c`) and counterexamples are
//! searched for directly.

pub mod corpus;
mod transport;

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::monoid::{split_two, Elem, Family, Monoid, Tabulated};

pub use transport::{transport_2x2, Transport2x2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Decided by running the procedure on this monoid.
    Computed,
    /// Taken from an established result about the family, or relies on one.
    KnownResult,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Positivity,
    Cancellative,
    ProductionN2,
    Transport2x2,
    Icp,
    SemijoinExistence,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Positivity => "positivity",
            Property::Cancellative => "cancellative",
            Property::ProductionN2 => "production-n2",
            Property::Transport2x2 => "transport-2x2",
            Property::Icp => "icp",
            Property::SemijoinExistence => "semijoin-existence",
        })
    }
}

/// One named component of a counterexample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Named {
    pub name: String,
    /// Rendered by the monoid's codec.
    pub value: String,
    #[serde(skip)]
    pub elem: Elem,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyReport {
    pub property: Property,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<Named>>,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<String>,
}

impl PropertyReport {
    fn holds(property: Property, provenance: Provenance, basis: Option<&str>) -> Self {
        PropertyReport {
            property,
            verdict: Verdict::Holds,
            counterexample: None,
            provenance,
            basis: basis.map(str::to_string),
        }
    }

    fn fails(
        m: &Monoid,
        property: Property,
        provenance: Provenance,
        cx: &[(&str, Elem)],
        basis: Option<&str>,
    ) -> Self {
        PropertyReport {
            property,
            verdict: Verdict::Fails,
            counterexample: Some(
                cx.iter()
                    .map(|(n, e)| Named {
                        name: n.to_string(),
                        value: m.format_elem(e),
                        elem: *e,
                    })
                    .collect(),
            ),
            provenance,
            basis: basis.map(str::to_string),
        }
    }

    fn unknown(property: Property, basis: &str) -> Self {
        PropertyReport {
            property,
            verdict: Verdict::Unknown,
            counterexample: None,
            provenance: Provenance::KnownResult,
            basis: Some(basis.to_string()),
        }
    }

    /// Counterexample elements in order, if any.
    pub fn counterexample_elems(&self) -> Option<Vec<Elem>> {
        self.counterexample
            .as_ref()
            .map(|cx| cx.iter().map(|n| n.elem).collect())
    }

    pub fn counterexample_text(&self) -> String {
        match &self.counterexample {
            None => "none".into(),
            Some(cx) => cx
                .iter()
                .map(|n| format!("{}={}", n.name, n.value))
                .collect::<Vec<_>>()
                .join(", "),
        }
    }

    /// Re-evaluates the defining equations on the stored counterexample.
    /// Returns true when the counterexample really violates the property, and
    /// vacuously true for reports without one.
    pub fn replay(&self, m: &Monoid) -> bool {
        let Some(cx) = self.counterexample_elems() else {
            return self.verdict != Verdict::Fails;
        };
        if cx.iter().any(|e| !m.contains(e)) {
            return false;
        }
        match (self.property, cx.as_slice()) {
            (Property::Positivity, [p, q]) => {
                m.is_zero(&m.plus(p, q)) && !(m.is_zero(p) && m.is_zero(q))
            }
            (Property::Cancellative, [a, b, c]) => b != c && m.plus(a, b) == m.plus(a, c),
            (Property::ProductionN2 | Property::SemijoinExistence, [b, c1, c2]) => {
                m.is_leq(b, &m.plus(c1, c2)) && !production_split_exists(m, b, c1, c2)
            }
            (Property::Transport2x2 | Property::Icp, [b1, b2, c1, c2]) => {
                m.plus(b1, b2) == m.plus(c1, c2)
                    && matches!(transport_2x2(m, b1, b2, c1, c2), Ok(None))
            }
            _ => false,
        }
    }
}

/// Independent existence check for an n = 2 production split.
fn production_split_exists(m: &Monoid, b: &Elem, c1: &Elem, c2: &Elem) -> bool {
    match (m.family(), b, c1, c2) {
        (Family::Numerical(s), Elem::Nat(b), Elem::Nat(c1), Elem::Nat(c2)) => {
            numerical_split(s, *b, *c1, *c2)
        }
        _ => match m.tabulated() {
            Some(tab) => {
                let (Some(b), Some(c1), Some(c2)) = (tab.index(b), tab.index(c1), tab.index(c2))
                else {
                    return false;
                };
                split_two(tab, b, c1, c2).is_some()
            }
            None => matches!(m.production_solve(b, &[*c1, *c2]), Ok(Some(_))),
        },
    }
}

fn numerical_split(s: &crate::monoid::NumericalSemigroup, b: u64, c1: u64, c2: u64) -> bool {
    (0..=b.min(c1)).any(|d1| {
        let d2 = b - d1;
        d2 <= c2 && s.contains(d1) && s.contains(d2) && s.contains(c1 - d1) && s.contains(c2 - d2)
    })
}

fn tab_elems(tab: &Tabulated, idx: &[u32]) -> Vec<Elem> {
    idx.iter().map(|&i| tab.elem(i)).collect()
}

pub fn check_positivity(m: &Monoid) -> PropertyReport {
    let Some(tab) = m.tabulated() else {
        return PropertyReport::holds(
            Property::Positivity,
            Provenance::KnownResult,
            Some("builtin families are positive by construction"),
        );
    };
    let n = tab.len() as u32;
    for p in 0..n {
        for q in 0..n {
            if tab.add(p, q) == tab.zero() && (p != tab.zero() || q != tab.zero()) {
                let e = tab_elems(tab, &[p, q]);
                return PropertyReport::fails(
                    m,
                    Property::Positivity,
                    Provenance::Computed,
                    &[("p", e[0]), ("q", e[1])],
                    None,
                );
            }
        }
    }
    PropertyReport::holds(Property::Positivity, Provenance::Computed, None)
}

pub fn check_cancellative(m: &Monoid) -> PropertyReport {
    compute_cancellative(m)
}

pub(crate) fn compute_cancellative(m: &Monoid) -> PropertyReport {
    if let Some(tab) = m.tabulated() {
        let n = tab.len() as u32;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if b != c && tab.add(a, b) == tab.add(a, c) {
                        let e = tab_elems(tab, &[a, b, c]);
                        return PropertyReport::fails(
                            m,
                            Property::Cancellative,
                            Provenance::Computed,
                            &[("a", e[0]), ("b", e[1]), ("c", e[2])],
                            None,
                        );
                    }
                }
            }
        }
        return PropertyReport::holds(Property::Cancellative, Provenance::Computed, None);
    }
    let absorbing = |a: Elem, b: Elem, c: Elem, why: &str| {
        PropertyReport::fails(
            m,
            Property::Cancellative,
            Provenance::KnownResult,
            &[("a", a), ("b", b), ("c", c)],
            Some(why),
        )
    };
    match m.family() {
        Family::Bag | Family::NonnegReal | Family::Numerical(_) => PropertyReport::holds(
            Property::Cancellative,
            Provenance::KnownResult,
            Some("submonoid of the additive reals"),
        ),
        Family::FuzzyMax => absorbing(
            Elem::real(1.0),
            Elem::real(0.0),
            Elem::real(1.0),
            "max is idempotent",
        ),
        Family::MinTropical => absorbing(
            Elem::real(0.0),
            Elem::real(1.0),
            Elem::real(2.0),
            "min is idempotent",
        ),
        Family::Powerset { .. } => absorbing(Elem::Set(1), Elem::Set(0), Elem::Set(1), "union is idempotent"),
        Family::Boolean | Family::Finite(_) => unreachable!("tabulated above"),
    }
}

pub fn check_production_n2(m: &Monoid) -> PropertyReport {
    m.production_report().clone()
}

/// Bitset of every `d₁ + d₂` with `d₁ ⊑ c₁` and `d₂ ⊑ c₂`, for all pairs.
fn reachable_sums(tab: &Tabulated) -> Vec<FixedBitSet> {
    let n = tab.len();
    let mut out = Vec::with_capacity(n * n);
    for c1 in 0..n as u32 {
        for c2 in 0..n as u32 {
            let mut bits = FixedBitSet::with_capacity(n);
            for &d1 in tab.down(c1) {
                for &d2 in tab.down(c2) {
                    bits.insert(tab.add(d1, d2) as usize);
                }
            }
            out.push(bits);
        }
    }
    out
}

pub(crate) fn compute_production_n2(m: &Monoid) -> PropertyReport {
    if let Some(tab) = m.tabulated() {
        let n = tab.len() as u32;
        let reach = reachable_sums(tab);
        for b in 0..n {
            for c1 in 0..n {
                for c2 in 0..n {
                    if tab.leq(b, tab.add(c1, c2))
                        && !reach[(c1 * n + c2) as usize].contains(b as usize)
                    {
                        let e = tab_elems(tab, &[b, c1, c2]);
                        return PropertyReport::fails(
                            m,
                            Property::ProductionN2,
                            Provenance::Computed,
                            &[("b", e[0]), ("c1", e[1]), ("c2", e[2])],
                            None,
                        );
                    }
                }
            }
        }
        return PropertyReport::holds(Property::ProductionN2, Provenance::Computed, None);
    }
    match m.family() {
        Family::Bag | Family::NonnegReal => PropertyReport::holds(
            Property::ProductionN2,
            Provenance::KnownResult,
            Some("greedy allocation min(remaining, c_i) solves every instance"),
        ),
        Family::FuzzyMax | Family::MinTropical | Family::Powerset { .. } => PropertyReport::holds(
            Property::ProductionN2,
            Provenance::KnownResult,
            Some("d_i = meet(b, c_i) solves every instance in a distributive lattice"),
        ),
        Family::Numerical(s) if s.is_naturals() => PropertyReport::holds(
            Property::ProductionN2,
            Provenance::KnownResult,
            Some("the semigroup is the bag monoid"),
        ),
        Family::Numerical(s) => numerical_production_counterexample(m, s),
        Family::Boolean | Family::Finite(_) => unreachable!("tabulated above"),
    }
}

/// Lexicographically first `(b, c₁, c₂)` over members in ascending order.
///
/// With `g` the smallest generator, `h` another minimal generator and `F` the
/// Frobenius number, `(g, h, F + g)` is always a counterexample, so scanning
/// members up to `F + g + h` is guaranteed to hit one.
fn numerical_production_counterexample(
    m: &Monoid,
    s: &crate::monoid::NumericalSemigroup,
) -> PropertyReport {
    let gens = s.generators();
    let bound = s.conductor() + gens[0] + gens[gens.len() - 1];
    let members: Vec<u64> = (0..=bound).filter(|&x| s.contains(x)).collect();
    for &b in &members {
        for &c1 in &members {
            for &c2 in &members {
                let total = c1 + c2;
                if b <= total && s.contains(total - b) && !numerical_split(s, b, c1, c2) {
                    return PropertyReport::fails(
                        m,
                        Property::ProductionN2,
                        Provenance::Computed,
                        &[("b", Elem::Nat(b)), ("c1", Elem::Nat(c1)), ("c2", Elem::Nat(c2))],
                        None,
                    );
                }
            }
        }
    }
    PropertyReport::unknown(
        Property::ProductionN2,
        "no counterexample found within the search window",
    )
}

pub fn check_transport_2x2(m: &Monoid) -> PropertyReport {
    compute_transport_2x2(m)
}

pub(crate) fn compute_transport_2x2(m: &Monoid) -> PropertyReport {
    if let Some(tab) = m.tabulated() {
        let n = tab.len() as u32;
        // Column pairs grouped by their sum, each group in lexicographic order.
        let mut by_sum: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n as usize];
        for c1 in 0..n {
            for c2 in 0..n {
                by_sum[tab.add(c1, c2) as usize].push((c1, c2));
            }
        }
        for b1 in 0..n {
            for b2 in 0..n {
                for &(c1, c2) in &by_sum[tab.add(b1, b2) as usize] {
                    if transport::search_tab(tab, b1, b2, c1, c2).is_none() {
                        let e = tab_elems(tab, &[b1, b2, c1, c2]);
                        return PropertyReport::fails(
                            m,
                            Property::Transport2x2,
                            Provenance::Computed,
                            &[("b1", e[0]), ("b2", e[1]), ("c1", e[2]), ("c2", e[3])],
                            None,
                        );
                    }
                }
            }
        }
        return PropertyReport::holds(Property::Transport2x2, Provenance::Computed, None);
    }
    match m.family() {
        Family::Bag | Family::NonnegReal => PropertyReport::holds(
            Property::Transport2x2,
            Provenance::KnownResult,
            Some("northwest-corner rule"),
        ),
        Family::FuzzyMax | Family::MinTropical | Family::Powerset { .. } => PropertyReport::holds(
            Property::Transport2x2,
            Provenance::KnownResult,
            Some("d_ij = meet(b_i, c_j) in a distributive lattice"),
        ),
        Family::Numerical(s) if s.is_naturals() => PropertyReport::holds(
            Property::Transport2x2,
            Provenance::KnownResult,
            Some("northwest-corner rule"),
        ),
        Family::Numerical(_) => {
            // A production counterexample (b, c₁, c₂) with e = c₁ + c₂ − b gives
            // the transport instance rows (b, e), columns (c₁, c₂): the first
            // row of any matrix would be a production split.
            let prod = m.production_report();
            match prod.counterexample_elems().as_deref() {
                Some([Elem::Nat(b), Elem::Nat(c1), Elem::Nat(c2)]) => PropertyReport::fails(
                    m,
                    Property::Transport2x2,
                    Provenance::Computed,
                    &[
                        ("b1", Elem::Nat(*b)),
                        ("b2", Elem::Nat(c1 + c2 - b)),
                        ("c1", Elem::Nat(*c1)),
                        ("c2", Elem::Nat(*c2)),
                    ],
                    Some("derived from the production-n2 counterexample"),
                ),
                _ => PropertyReport::unknown(Property::Transport2x2, "no production counterexample"),
            }
        }
        Family::Boolean | Family::Finite(_) => unreachable!("tabulated above"),
    }
}

/// Inner consistency property. For finite monoids this is the 2×2
/// transportation verdict, which relies on the equivalence of ICP with the
/// transportation property and of that with its 2×2 case.
pub fn icp_verdict(m: &Monoid) -> PropertyReport {
    let t = compute_transport_2x2(m);
    let basis = match (m.family(), t.verdict) {
        (Family::Numerical(s), _) if !s.is_naturals() => {
            "only the bag monoid among numerical semigroups has the property"
        }
        (_, _) if t.provenance == Provenance::Computed => {
            "equivalent to the 2x2 transportation property"
        }
        _ => "transportation property of the family",
    };
    PropertyReport {
        property: Property::Icp,
        verdict: t.verdict,
        counterexample: t.counterexample,
        provenance: Provenance::KnownResult,
        basis: Some(basis.to_string()),
    }
}

/// A semijoin function exists exactly when the production property holds for n = 2.
pub fn semijoin_existence_verdict(m: &Monoid) -> PropertyReport {
    let p = m.production_report();
    PropertyReport {
        property: Property::SemijoinExistence,
        verdict: p.verdict,
        counterexample: p.counterexample.clone(),
        provenance: p.provenance,
        basis: Some("equivalent to the production property for n=2".into()),
    }
}

/// Every report printed by `monoid check`, in display order.
pub fn full_report(m: &Monoid) -> Vec<PropertyReport> {
    vec![
        check_positivity(m),
        check_cancellative(m),
        check_production_n2(m),
        check_transport_2x2(m),
        icp_verdict(m),
        semijoin_existence_verdict(m),
    ]
}
