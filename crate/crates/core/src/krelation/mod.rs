//! Finitely supported relations annotated by monoid values.
//!
//! A [`KRel`] maps tuples over an [`AttrSet`] to nonzero elements of its
//! monoid. Zero annotations are never stored, so the key set is exactly the
//! support.

mod consistency;
mod gen;
mod io;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::monoid::{Elem, MonoidRef};

pub use consistency::{
    brute_force_consistent, brute_force_global, consistent, globally_consistent, lattice_join,
    transportation_join, witness_join, ConsistencyOptions, ConsistencyResult, Strategy,
};
pub use gen::{gen_consistent_family, gen_random_krel, random_krel};

/// An attribute with its finite domain of values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Attribute {
    pub name: String,
    pub domain: Vec<String>,
}

impl Attribute {
    pub fn new<S: AsRef<str>>(name: &str, domain: &[S]) -> Attribute {
        Attribute {
            name: name.to_string(),
            domain: domain.iter().map(|d| d.as_ref().to_string()).collect(),
        }
    }

    pub fn value_index(&self, value: &str) -> Option<u32> {
        self.domain.iter().position(|d| d == value).map(|i| i as u32)
    }
}

/// A set of attributes, kept sorted by name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AttrSet {
    attrs: Vec<Arc<Attribute>>,
}

impl AttrSet {
    pub fn new(attrs: impl IntoIterator<Item = Attribute>) -> Result<AttrSet> {
        let mut attrs: Vec<Arc<Attribute>> = attrs.into_iter().map(Arc::new).collect();
        attrs.sort_by(|a, b| a.name.cmp(&b.name));
        for w in attrs.windows(2) {
            if w[0].name == w[1].name {
                return Err(Error::Attribute(format!("duplicate attribute {}", w[0].name)));
            }
        }
        if let Some(a) = attrs.iter().find(|a| a.domain.is_empty()) {
            return Err(Error::Attribute(format!("attribute {} has an empty domain", a.name)));
        }
        Ok(AttrSet { attrs })
    }

    /// Attributes sharing one domain, which is the common case in tests.
    pub fn uniform<S: AsRef<str>, D: AsRef<str>>(names: &[S], domain: &[D]) -> Result<AttrSet> {
        AttrSet::new(names.iter().map(|n| Attribute::new(n.as_ref(), domain)))
    }

    pub fn empty() -> AttrSet {
        AttrSet::default()
    }

    pub fn len(&self) -> usize {
        self.attrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attrs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Attribute> {
        self.attrs.iter().map(|a| a.as_ref())
    }

    pub fn names(&self) -> Vec<&str> {
        self.attrs.iter().map(|a| a.name.as_str()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&Attribute> {
        self.position(name).map(|i| self.attrs[i].as_ref())
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.attrs.binary_search_by(|a| a.name.as_str().cmp(name)).ok()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.position(name).is_some()
    }

    pub fn is_subset(&self, other: &AttrSet) -> bool {
        self.attrs.iter().all(|a| other.get(&a.name) == Some(a.as_ref()))
    }

    /// Union; attributes with the same name must agree on their domain.
    pub fn union(&self, other: &AttrSet) -> Result<AttrSet> {
        let mut out: Vec<Arc<Attribute>> = self.attrs.clone();
        for a in &other.attrs {
            match self.get(&a.name) {
                Some(mine) if mine != a.as_ref() => {
                    return Err(Error::Attribute(format!(
                        "attribute {} declared with two different domains",
                        a.name
                    )))
                }
                Some(_) => {}
                None => out.push(a.clone()),
            }
        }
        out.sort_by(|a, b| a.name.cmp(&b.name));
        Ok(AttrSet { attrs: out })
    }

    pub fn intersection(&self, other: &AttrSet) -> AttrSet {
        AttrSet {
            attrs: self
                .attrs
                .iter()
                .filter(|a| other.contains(&a.name))
                .cloned()
                .collect(),
        }
    }

    /// Subset by names, in any order.
    pub fn restrict<S: AsRef<str>>(&self, names: &[S]) -> Result<AttrSet> {
        let mut attrs = Vec::with_capacity(names.len());
        for n in names {
            let a = self
                .position(n.as_ref())
                .ok_or_else(|| Error::Attribute(format!("unknown attribute {}", n.as_ref())))?;
            attrs.push(self.attrs[a].clone());
        }
        attrs.sort_by(|a, b| a.name.cmp(&b.name));
        attrs.dedup_by(|a, b| a.name == b.name);
        Ok(AttrSet { attrs })
    }

    /// For each attribute of `self`, its position in `sup`.
    pub(crate) fn positions_in(&self, sup: &AttrSet) -> Result<Vec<usize>> {
        self.attrs
            .iter()
            .map(|a| {
                sup.position(&a.name)
                    .filter(|&p| sup.attrs[p] == *a)
                    .ok_or_else(|| {
                        Error::Attribute(format!(
                            "attribute {} is not among {{{}}}",
                            a.name,
                            sup.names().join(",")
                        ))
                    })
            })
            .collect()
    }

    /// Every tuple over these attributes, in lexicographic order.
    pub fn all_tuples(&self) -> Vec<Tuple> {
        let mut out = vec![Tuple(Vec::new())];
        for a in &self.attrs {
            let mut next = Vec::with_capacity(out.len() * a.domain.len());
            for t in &out {
                for v in 0..a.domain.len() as u32 {
                    let mut u = t.0.clone();
                    u.push(v);
                    next.push(Tuple(u));
                }
            }
            out = next;
        }
        out
    }

    /// Builds a tuple from domain value names, given in attribute order.
    pub fn tuple<S: AsRef<str>>(&self, values: &[S]) -> Result<Tuple> {
        if values.len() != self.len() {
            return Err(Error::Attribute(format!(
                "tuple has {} values for {} attributes",
                values.len(),
                self.len()
            )));
        }
        values
            .iter()
            .zip(&self.attrs)
            .map(|(v, a)| {
                a.value_index(v.as_ref()).ok_or_else(|| {
                    Error::Attribute(format!("{:?} is not in the domain of {}", v.as_ref(), a.name))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Tuple)
    }

    pub fn format_tuple(&self, t: &Tuple) -> Vec<String> {
        t.0.iter()
            .zip(&self.attrs)
            .map(|(&v, a)| a.domain[v as usize].clone())
            .collect()
    }
}

impl fmt::Display for AttrSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names().join(","))
    }
}

/// Domain indices, one per attribute of the owning [`AttrSet`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tuple(pub Vec<u32>);

impl Tuple {
    pub fn project(&self, positions: &[usize]) -> Tuple {
        Tuple(positions.iter().map(|&p| self.0[p]).collect())
    }
}

/// Annotated relation with normalized (zero-free) support.
#[derive(Clone, Debug, PartialEq)]
pub struct KRel {
    monoid: MonoidRef,
    attrs: AttrSet,
    entries: BTreeMap<Tuple, Elem>,
}

impl KRel {
    pub fn new(monoid: MonoidRef, attrs: AttrSet) -> KRel {
        KRel {
            monoid,
            attrs,
            entries: BTreeMap::new(),
        }
    }

    /// Builds a relation from rows of domain value names.
    pub fn from_rows<S: AsRef<str>>(
        monoid: &MonoidRef,
        attrs: &AttrSet,
        rows: &[(&[S], Elem)],
    ) -> Result<KRel> {
        let mut r = KRel::new(monoid.clone(), attrs.clone());
        for (vals, e) in rows {
            let t = attrs.tuple(vals)?;
            r.add_to(t, *e)?;
        }
        Ok(r)
    }

    pub fn monoid(&self) -> &MonoidRef {
        &self.monoid
    }

    pub fn attrs(&self) -> &AttrSet {
        &self.attrs
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Tuple, &Elem)> {
        self.entries.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Tuple> {
        self.entries.keys()
    }

    pub fn get(&self, t: &Tuple) -> Elem {
        self.entries.get(t).copied().unwrap_or_else(|| self.monoid.zero())
    }

    fn check_tuple(&self, t: &Tuple) -> Result<()> {
        if t.0.len() != self.attrs.len() {
            return Err(Error::Attribute(format!(
                "tuple of arity {} for attributes {}",
                t.0.len(),
                self.attrs
            )));
        }
        for (&v, a) in t.0.iter().zip(self.attrs.iter()) {
            if v as usize >= a.domain.len() {
                return Err(Error::Attribute(format!(
                    "value index {v} outside the domain of {}",
                    a.name
                )));
            }
        }
        Ok(())
    }

    /// Sets `R(t) = e`; a zero value removes `t` from the support.
    pub fn set(&mut self, t: Tuple, e: Elem) -> Result<()> {
        self.check_tuple(&t)?;
        self.monoid.check(&e)?;
        if self.monoid.is_zero(&e) {
            self.entries.remove(&t);
        } else {
            self.entries.insert(t, e);
        }
        Ok(())
    }

    /// `R(t) += e`.
    pub fn add_to(&mut self, t: Tuple, e: Elem) -> Result<()> {
        self.check_tuple(&t)?;
        self.monoid.check(&e)?;
        self.accumulate(t, e);
        Ok(())
    }

    /// Unchecked accumulate for internally produced tuples and values.
    pub(crate) fn accumulate(&mut self, t: Tuple, e: Elem) {
        if self.monoid.is_zero(&e) {
            return;
        }
        let m = self.monoid.clone();
        self.entries
            .entry(t)
            .and_modify(|v| *v = m.plus(v, &e))
            .or_insert(e);
    }

    fn same_monoid(&self, other: &KRel) -> Result<()> {
        if self.monoid != other.monoid {
            return Err(Error::MonoidMismatch {
                left: self.monoid.name(),
                right: other.monoid.name(),
            });
        }
        Ok(())
    }

    /// `R[Y](t) = Σ { R(r) : r[Y] = t }`.
    pub fn marginal(&self, y: &AttrSet) -> Result<KRel> {
        let pos = y.positions_in(&self.attrs)?;
        let mut out = KRel::new(self.monoid.clone(), y.clone());
        for (t, e) in &self.entries {
            out.accumulate(t.project(&pos), *e);
        }
        Ok(out)
    }

    /// Monoid sum of all annotations, i.e. the marginal onto no attributes.
    pub fn total(&self) -> Elem {
        self.monoid.sum(self.entries.values())
    }

    /// Pointwise canonical preorder `R ⊑ S`.
    pub fn rel_leq(&self, other: &KRel) -> Result<bool> {
        self.same_monoid(other)?;
        if self.attrs != other.attrs {
            return Err(Error::Attribute(format!(
                "cannot compare relations over {} and {}",
                self.attrs, other.attrs
            )));
        }
        Ok(self
            .entries
            .iter()
            .all(|(t, e)| self.monoid.is_leq(e, &other.get(t))))
    }

    /// Whether both relations agree on their shared attributes.
    pub fn inner_consistent(&self, other: &KRel) -> Result<bool> {
        self.same_monoid(other)?;
        let z = self.attrs.intersection(&other.attrs);
        Ok(self.marginal(&z)? == other.marginal(&z)?)
    }

    /// Whether `W[attrs(R)] = R` for each given `R`.
    pub fn is_witness_for(&self, rels: &[&KRel]) -> Result<bool> {
        for r in rels {
            if self.marginal(&r.attrs)? != **r {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Restriction to the tuples whose projection onto `z` equals `key`.
    pub(crate) fn group_by(&self, z: &AttrSet) -> Result<BTreeMap<Tuple, Vec<(Tuple, Elem)>>> {
        let pos = z.positions_in(&self.attrs)?;
        let mut groups: BTreeMap<Tuple, Vec<(Tuple, Elem)>> = BTreeMap::new();
        for (t, e) in &self.entries {
            groups.entry(t.project(&pos)).or_default().push((t.clone(), *e));
        }
        Ok(groups)
    }

    /// Readable listing `{(a,b):v, ...}`.
    pub fn pretty(&self) -> String {
        let items: Vec<String> = self
            .entries
            .iter()
            .map(|(t, e)| {
                format!(
                    "({}):{}",
                    self.attrs.format_tuple(t).join(","),
                    self.monoid.format_elem(e)
                )
            })
            .collect();
        format!("{{{}}}", items.join(", "))
    }
}

/// Combines an X-tuple and a Y-tuple that agree on X ∩ Y into a tuple over X ∪ Y.
pub(crate) struct TupleJoiner {
    /// For each attribute of X ∪ Y: take from x (true) or y, at this position.
    source: Vec<(bool, usize)>,
}

impl TupleJoiner {
    pub(crate) fn new(x: &AttrSet, y: &AttrSet, xy: &AttrSet) -> TupleJoiner {
        let source = xy
            .iter()
            .map(|a| match x.position(&a.name) {
                Some(p) => (true, p),
                None => (false, y.position(&a.name).expect("attribute in union")),
            })
            .collect();
        TupleJoiner { source }
    }

    pub(crate) fn join(&self, x: &Tuple, y: &Tuple) -> Tuple {
        Tuple(
            self.source
                .iter()
                .map(|&(from_x, p)| if from_x { x.0[p] } else { y.0[p] })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests;
