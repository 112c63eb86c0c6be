//! Schemas as hypergraphs, GYO reduction and running-intersection orderings.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::krelation::{AttrSet, Attribute};

/// A named hyperedge; it is also the attribute set of one relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub attrs: AttrSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    edges: Vec<Edge>,
}

impl Hypergraph {
    pub fn new(edges: Vec<Edge>) -> Result<Hypergraph> {
        if edges.is_empty() {
            return Err(Error::Attribute("a schema needs at least one hyperedge".into()));
        }
        for (i, e) in edges.iter().enumerate() {
            if e.attrs.is_empty() {
                return Err(Error::Attribute(format!("hyperedge {} is empty", e.name)));
            }
            if edges[..i].iter().any(|f| f.name == e.name) {
                return Err(Error::Attribute(format!("duplicate hyperedge name {}", e.name)));
            }
        }
        let h = Hypergraph { edges };
        h.universe()?;
        Ok(h)
    }

    /// Edges named `R1`, `R2`, … in the given order.
    pub fn from_attr_sets(sets: impl IntoIterator<Item = AttrSet>) -> Result<Hypergraph> {
        Hypergraph::new(
            sets.into_iter()
                .enumerate()
                .map(|(i, attrs)| Edge {
                    name: format!("R{}", i + 1),
                    attrs,
                })
                .collect(),
        )
    }

    /// Builds edges from attribute-name lists, all attributes sharing `domain`.
    pub fn uniform<S: AsRef<str>, D: AsRef<str>>(
        edges: &[(&str, &[S])],
        domain: &[D],
    ) -> Result<Hypergraph> {
        Hypergraph::new(
            edges
                .iter()
                .map(|(name, attrs)| {
                    Ok(Edge {
                        name: name.to_string(),
                        attrs: AttrSet::uniform(attrs, domain)?,
                    })
                })
                .collect::<Result<_>>()?,
        )
    }

    /// The path `{A1,A2}, {A2,A3}, …, {An,An+1}` with edges `R1…Rn`.
    pub fn path<D: AsRef<str>>(n: usize, domain: &[D]) -> Result<Hypergraph> {
        let names: Vec<[String; 2]> = (1..=n)
            .map(|i| [format!("A{i}"), format!("A{}", i + 1)])
            .collect();
        let edges: Vec<(String, &[String])> = names
            .iter()
            .enumerate()
            .map(|(i, a)| (format!("R{}", i + 1), &a[..]))
            .collect();
        let refs: Vec<(&str, &[String])> = edges.iter().map(|(n, a)| (n.as_str(), *a)).collect();
        Hypergraph::uniform(&refs, domain)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    /// All attributes of the schema.
    pub fn universe(&self) -> Result<AttrSet> {
        self.edges
            .iter()
            .try_fold(AttrSet::empty(), |acc, e| acc.union(&e.attrs))
    }

    pub fn from_json(text: &str) -> Result<Hypergraph> {
        let file: SchemaFile = serde_json::from_str(text)?;
        file.build()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Hypergraph> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let mut domains = BTreeMap::new();
        for e in &self.edges {
            for a in e.attrs.iter() {
                domains.insert(
                    a.name.clone(),
                    a.domain.iter().cloned().map(Value::String).collect(),
                );
            }
        }
        let file = SchemaFile {
            hyperedges: self
                .edges
                .iter()
                .map(|e| EdgeFile {
                    name: e.name.clone(),
                    attrs: e.attrs.names().iter().map(|s| s.to_string()).collect(),
                })
                .collect(),
            domains,
        };
        serde_json::to_string_pretty(&file).expect("schema files serialize")
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .edges
            .iter()
            .map(|e| format!("{}{}", e.name, e.attrs))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeFile {
    name: String,
    attrs: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SchemaFile {
    hyperedges: Vec<EdgeFile>,
    domains: BTreeMap<String, Vec<Value>>,
}

impl SchemaFile {
    fn build(self) -> Result<Hypergraph> {
        let mut attrs: BTreeMap<String, Attribute> = BTreeMap::new();
        for (name, values) in &self.domains {
            let domain = values
                .iter()
                .map(|v| match v {
                    Value::String(s) => Ok(s.clone()),
                    Value::Number(n) => Ok(n.to_string()),
                    other => Err(Error::Format(format!("domain value {other} of {name}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            attrs.insert(name.clone(), Attribute::new(name, &domain));
        }
        let edges = self
            .hyperedges
            .into_iter()
            .map(|e| {
                let set = e
                    .attrs
                    .iter()
                    .map(|a| {
                        attrs.get(a).cloned().ok_or_else(|| {
                            Error::Attribute(format!("no domain declared for attribute {a}"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Edge {
                    name: e.name,
                    attrs: AttrSet::new(set)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Hypergraph::new(edges)
    }
}

/// A running-intersection ordering `Y₁…Yₘ` of the hyperedges.
///
/// Positions are 0-based: `order[i]` is the edge index of `Yᵢ₊₁` and
/// `parents[i]` the position of its parent, `None` for the first edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RIOrdering {
    pub order: Vec<usize>,
    pub parents: Vec<Option<usize>>,
}

impl RIOrdering {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Parent of position `i` (0-based) as an edge index.
    pub fn parent_edge(&self, i: usize) -> Option<usize> {
        self.parents[i].map(|p| self.order[p])
    }

    /// `Y1=R1 Y2=R4(j=1) …`, with 1-based positions.
    pub fn describe(&self, h: &Hypergraph) -> String {
        self.order
            .iter()
            .zip(&self.parents)
            .enumerate()
            .map(|(i, (&e, p))| match p {
                None => format!("Y{}={}", i + 1, h.edge(e).name),
                Some(j) => format!("Y{}={}(j={})", i + 1, h.edge(e).name, j + 1),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Outcome of GYO reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Acyclicity {
    Acyclic(RIOrdering),
    /// The irreducible remainder: surviving edges restricted to attributes
    /// they still share with another surviving edge.
    Cyclic(Hypergraph),
}

fn names_subset(a: &[&str], b: &AttrSet) -> bool {
    a.iter().all(|n| b.contains(n))
}

/// GYO ear removal. An edge is an ear when the attributes it shares with
/// the other remaining edges all lie in a single one of them (its parent).
/// The lexicographically last ear by name is removed each round, its
/// parent being the first such edge by name. With this choice a path keeps
/// its identity order.
pub fn gyo(h: &Hypergraph) -> Acyclicity {
    let m = h.len();
    let mut alive: Vec<usize> = (0..m).collect();
    let mut removed: Vec<(usize, usize)> = Vec::new();
    let by_name = |v: &mut Vec<usize>| v.sort_by(|&a, &b| h.edge(a).name.cmp(&h.edge(b).name));
    while alive.len() > 1 {
        let mut candidates = alive.clone();
        by_name(&mut candidates);
        let mut found = None;
        'ears: for &e in candidates.iter().rev() {
            let shared: Vec<&str> = h
                .edge(e)
                .attrs
                .names()
                .into_iter()
                .filter(|a| alive.iter().any(|&f| f != e && h.edge(f).attrs.contains(a)))
                .collect();
            for &f in &candidates {
                if f != e && names_subset(&shared, &h.edge(f).attrs) {
                    found = Some((e, f));
                    break 'ears;
                }
            }
        }
        match found {
            Some((e, f)) => {
                alive.retain(|&x| x != e);
                removed.push((e, f));
            }
            None => {
                by_name(&mut alive);
                let edges = alive
                    .iter()
                    .map(|&e| {
                        let shared: Vec<&str> = h
                            .edge(e)
                            .attrs
                            .names()
                            .into_iter()
                            .filter(|a| {
                                alive.iter().any(|&f| f != e && h.edge(f).attrs.contains(a))
                            })
                            .collect();
                        Edge {
                            name: h.edge(e).name.clone(),
                            attrs: h.edge(e).attrs.restrict(&shared).expect("subset"),
                        }
                    })
                    .collect();
                return Acyclicity::Cyclic(Hypergraph { edges });
            }
        }
    }
    let mut order = vec![alive[0]];
    order.extend(removed.iter().rev().map(|&(e, _)| e));
    let pos = |edge: usize| order.iter().position(|&x| x == edge).unwrap();
    let mut parents = vec![None];
    parents.extend(removed.iter().rev().map(|&(_, f)| Some(pos(f))));
    Acyclicity::Acyclic(RIOrdering { order, parents })
}

/// Acyclic schemas yield a validated ordering; cyclic ones an error carrying the residual.
pub fn gyo_order(h: &Hypergraph) -> Result<RIOrdering> {
    match gyo(h) {
        Acyclicity::Acyclic(ord) => {
            debug_assert_eq!(validate_ordering(h, &ord), Ok(None));
            Ok(ord)
        }
        Acyclicity::Cyclic(residual) => Err(Error::Cyclic {
            residual: residual.to_string(),
        }),
    }
}

fn check_permutation(h: &Hypergraph, order: &[usize]) -> Result<()> {
    let mut seen = vec![false; h.len()];
    if order.len() != h.len() {
        return Err(Error::Ordering {
            index: order.len(),
            message: format!("ordering has {} entries for {} hyperedges", order.len(), h.len()),
        });
    }
    for (i, &e) in order.iter().enumerate() {
        if e >= h.len() || std::mem::replace(&mut seen[e], true) {
            return Err(Error::Ordering {
                index: i,
                message: "not a permutation of the hyperedges".into(),
            });
        }
    }
    Ok(())
}

/// `(Y₁ ∪ … ∪ Yᵢ₋₁) ∩ Yᵢ`, as attribute names.
fn prefix_overlap<'a>(h: &'a Hypergraph, order: &[usize], i: usize) -> Vec<&'a str> {
    h.edge(order[i])
        .attrs
        .names()
        .into_iter()
        .filter(|a| order[..i].iter().any(|&e| h.edge(e).attrs.contains(a)))
        .collect()
}

/// Replays every running-intersection containment. `Ok(None)` means valid;
/// `Ok(Some(i))` is the first failing 0-based position.
pub fn validate_ordering(h: &Hypergraph, ord: &RIOrdering) -> Result<Option<usize>> {
    check_permutation(h, &ord.order)?;
    if ord.parents.len() != ord.order.len() {
        return Err(Error::Ordering {
            index: ord.parents.len(),
            message: "one parent entry per position expected".into(),
        });
    }
    for i in 1..ord.len() {
        let j = match ord.parents[i] {
            Some(j) if j < i => j,
            _ => {
                return Err(Error::Ordering {
                    index: i,
                    message: "parent must be an earlier position".into(),
                })
            }
        };
        let overlap = prefix_overlap(h, &ord.order, i);
        if !names_subset(&overlap, &h.edge(ord.order[j]).attrs) {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Picks, for each position, the earliest valid parent. Fails with the first
/// position where no earlier edge contains the prefix overlap.
pub fn ordering_from_permutation(h: &Hypergraph, order: &[usize]) -> Result<RIOrdering> {
    check_permutation(h, order)?;
    let mut parents = vec![None];
    for i in 1..order.len() {
        let overlap = prefix_overlap(h, order, i);
        let j = (0..i)
            .find(|&j| names_subset(&overlap, &h.edge(order[j]).attrs))
            .ok_or_else(|| Error::Ordering {
                index: i,
                message: format!(
                    "no earlier hyperedge contains the overlap {{{}}}",
                    overlap.join(",")
                ),
            })?;
        parents.push(Some(j));
    }
    Ok(RIOrdering {
        order: order.to_vec(),
        parents,
    })
}

#[cfg(test)]
mod tests;
