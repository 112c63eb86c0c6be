//! Consistency decisions and witness constructions.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{AttrSet, KRel, Tuple, TupleJoiner};
use crate::error::{Error, Result};
use crate::monoid::{Elem, Tabulated, Tri, WitnessFamily};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConsistencyOptions {
    /// Node budget for exhaustive witness searches.
    pub budget: u64,
}

impl Default for ConsistencyOptions {
    fn default() -> Self {
        ConsistencyOptions { budget: 1_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// The monoid has the inner consistency property, so consistency is
    /// decided by comparing marginals.
    InnerConsistency,
    /// Exhaustive search for a witness over a finite carrier.
    BruteForce,
    /// Pairwise checks plus a witness fold along a running-intersection ordering.
    WitnessFold,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConsistencyResult {
    pub consistent: bool,
    /// Present whenever `consistent` is true; always validated.
    pub witness: Option<KRel>,
    pub strategy: Strategy,
}

fn same_monoid(rels: &[&KRel]) -> Result<()> {
    for w in rels.windows(2) {
        w[0].same_monoid(w[1])?;
    }
    Ok(())
}

/// `W(t) = meet(R(t[X]), T(t[Y]))`, for families whose addition is a lattice join.
pub fn lattice_join(r: &KRel, t: &KRel) -> Result<KRel> {
    r.same_monoid(t)?;
    let m = r.monoid();
    if !m.has_lattice_meet() {
        return Err(Error::Unsupported {
            monoid: m.name(),
            capability: "lattice meet",
            detail: None,
        });
    }
    pairwise_groups(r, t, |joined, rg, tg, out| {
        for (x, a) in rg {
            for (y, b) in tg {
                out.accumulate(joined.join(x, y), m.meet(a, b).unwrap());
            }
        }
        Ok(())
    })
}

/// Runs `fill` on each shared key that occurs on both sides.
fn pairwise_groups(
    r: &KRel,
    t: &KRel,
    mut fill: impl FnMut(&TupleJoiner, &[(Tuple, Elem)], &[(Tuple, Elem)], &mut KRel) -> Result<()>,
) -> Result<KRel> {
    let z = r.attrs().intersection(t.attrs());
    let xy = r.attrs().union(t.attrs())?;
    let joiner = TupleJoiner::new(r.attrs(), t.attrs(), &xy);
    let rg = r.group_by(&z)?;
    let tg = t.group_by(&z)?;
    let mut out = KRel::new(r.monoid().clone(), xy);
    for (key, rows) in &rg {
        if let Some(cols) = tg.get(key) {
            fill(&joiner, rows, cols, &mut out)?;
        }
    }
    Ok(out)
}

/// Northwest-corner allocation of `supply` to `demand`, both in list order.
fn northwest<T>(supply: &[T], demand: &[T], zero: T) -> Vec<(usize, usize, T)>
where
    T: Copy + PartialOrd + std::ops::Sub<Output = T>,
{
    let mut s = supply.to_vec();
    let mut d = demand.to_vec();
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < s.len() && j < d.len() {
        let a = if s[i] < d[j] { s[i] } else { d[j] };
        if a > zero {
            out.push((i, j, a));
        }
        s[i] = s[i] - a;
        d[j] = d[j] - a;
        let (si, dj) = (s[i] <= zero, d[j] <= zero);
        if si {
            i += 1;
        }
        if dj {
            j += 1;
        }
    }
    out
}

/// Per shared key, a northwest-corner transportation matrix between the
/// R-side supplies and the T-side demands, each sorted by tuple.
pub fn transportation_join(r: &KRel, t: &KRel) -> Result<KRel> {
    r.same_monoid(t)?;
    let m = r.monoid().clone();
    if m.capabilities().witness_family != WitnessFamily::Transportation {
        return Err(Error::Unsupported {
            monoid: m.name(),
            capability: "transportation witnesses",
            detail: None,
        });
    }
    pairwise_groups(r, t, |joined, rows, cols, out| {
        let cells: Vec<(usize, usize, Elem)> = match rows[0].1 {
            Elem::Nat(_) => {
                let s: Vec<u64> = rows.iter().map(|(_, e)| e.as_nat().unwrap()).collect();
                let d: Vec<u64> = cols.iter().map(|(_, e)| e.as_nat().unwrap()).collect();
                northwest(&s, &d, 0)
                    .into_iter()
                    .map(|(i, j, a)| (i, j, Elem::Nat(a)))
                    .collect()
            }
            _ => {
                let s: Vec<f64> = rows.iter().map(|(_, e)| e.as_real().unwrap()).collect();
                let d: Vec<f64> = cols.iter().map(|(_, e)| e.as_real().unwrap()).collect();
                northwest(&s, &d, 0.0)
                    .into_iter()
                    .map(|(i, j, a)| (i, j, Elem::real(a)))
                    .collect()
            }
        };
        for (i, j, a) in cells {
            out.accumulate(joined.join(&rows[i].0, &cols[j].0), a);
        }
        Ok(())
    })
}

/// Exact-sum constraint satisfaction over a tabulated carrier.
///
/// Every cell gets a value; every constraint requires the values of its cells
/// to add up to its target. Cells are filled in order; a partial sum that is
/// not below its target, or a completed constraint that misses it, prunes.
struct SumSearch<'a> {
    tab: &'a Tabulated,
    cell_constraints: Vec<Vec<usize>>,
    targets: Vec<u32>,
    budget: u64,
    nodes: u64,
}

impl SumSearch<'_> {
    fn solve(&mut self) -> Result<Option<Vec<u32>>> {
        let k = self.targets.len();
        let mut remaining = vec![0usize; k];
        for cs in &self.cell_constraints {
            for &c in cs {
                remaining[c] += 1;
            }
        }
        if (0..k).any(|c| remaining[c] == 0 && self.targets[c] != self.tab.zero()) {
            return Ok(None);
        }
        let mut partial = vec![self.tab.zero(); k];
        let mut values = Vec::with_capacity(self.cell_constraints.len());
        if self.go(0, &mut partial, &mut remaining, &mut values)? {
            Ok(Some(values))
        } else {
            Ok(None)
        }
    }

    fn go(
        &mut self,
        cell: usize,
        partial: &mut Vec<u32>,
        remaining: &mut Vec<usize>,
        values: &mut Vec<u32>,
    ) -> Result<bool> {
        if cell == self.cell_constraints.len() {
            return Ok(true);
        }
        let cs = self.cell_constraints[cell].clone();
        let first = self.targets[cs[0]];
        for &v in self.tab.down(first) {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExhausted {
                    budget: self.budget,
                });
            }
            let ok = cs.iter().all(|&c| {
                let s = self.tab.add(partial[c], v);
                if remaining[c] == 1 {
                    s == self.targets[c]
                } else {
                    self.tab.leq(s, self.targets[c])
                }
            });
            if !ok {
                continue;
            }
            let saved: Vec<u32> = cs.iter().map(|&c| partial[c]).collect();
            for &c in &cs {
                partial[c] = self.tab.add(partial[c], v);
                remaining[c] -= 1;
            }
            values.push(v);
            if self.go(cell + 1, partial, remaining, values)? {
                return Ok(true);
            }
            values.pop();
            for (&c, &p) in cs.iter().zip(&saved) {
                partial[c] = p;
                remaining[c] += 1;
            }
        }
        Ok(false)
    }
}

fn tabulated_or_unsupported(r: &KRel) -> Result<&Tabulated> {
    r.monoid().tabulated().ok_or_else(|| Error::Unsupported {
        monoid: r.monoid().name(),
        capability: "brute-force consistency",
        detail: Some("the carrier is infinite or too large to enumerate".into()),
    })
}

/// Exhaustive witness search for a pair. Candidate witness tuples are the
/// join of the two supports, which positivity makes sufficient; the search
/// splits into independent problems per shared key.
pub fn brute_force_consistent(
    r: &KRel,
    t: &KRel,
    opts: &ConsistencyOptions,
) -> Result<Option<KRel>> {
    r.same_monoid(t)?;
    let tab = tabulated_or_unsupported(r)?;
    let z = r.attrs().intersection(t.attrs());
    let rg = r.group_by(&z)?;
    let tg = t.group_by(&z)?;
    if rg.keys().ne(tg.keys()) {
        return Ok(None);
    }
    let xy = r.attrs().union(t.attrs())?;
    let joiner = TupleJoiner::new(r.attrs(), t.attrs(), &xy);
    let mut out = KRel::new(r.monoid().clone(), xy);
    let mut spent = 0u64;
    for (key, rows) in &rg {
        let cols = &tg[key];
        let mut cell_constraints = Vec::with_capacity(rows.len() * cols.len());
        for i in 0..rows.len() {
            for j in 0..cols.len() {
                cell_constraints.push(vec![i, rows.len() + j]);
            }
        }
        let idx = |e: &Elem| tab.index(e).expect("carrier element");
        let targets = rows.iter().chain(cols.iter()).map(|(_, e)| idx(e)).collect();
        let mut search = SumSearch {
            tab,
            cell_constraints,
            targets,
            budget: opts.budget - spent,
            nodes: 0,
        };
        let found = search.solve().map_err(|e| match e {
            Error::BudgetExhausted { .. } => Error::BudgetExhausted {
                budget: opts.budget,
            },
            other => other,
        })?;
        spent += search.nodes;
        let Some(values) = found else { return Ok(None) };
        let mut k = 0;
        for (x, _) in rows {
            for (y, _) in cols {
                out.accumulate(joiner.join(x, y), tab.elem(values[k]));
                k += 1;
            }
        }
    }
    Ok(Some(out))
}

/// Set-semantics join of the supports, over the union of the attributes.
fn support_join(rels: &[&KRel]) -> Result<(AttrSet, Vec<Tuple>)> {
    let mut attrs = rels[0].attrs().clone();
    let mut tuples: Vec<Tuple> = rels[0].support().cloned().collect();
    for r in &rels[1..] {
        let z = attrs.intersection(r.attrs());
        let xy = attrs.union(r.attrs())?;
        let joiner = TupleJoiner::new(&attrs, r.attrs(), &xy);
        let zl = z.positions_in(&attrs)?;
        let groups = r.group_by(&z)?;
        let mut next = Vec::new();
        for x in &tuples {
            if let Some(ys) = groups.get(&x.project(&zl)) {
                for (y, _) in ys {
                    next.push(joiner.join(x, y));
                }
            }
        }
        next.sort();
        next.dedup();
        attrs = xy;
        tuples = next;
    }
    Ok((attrs, tuples))
}

/// Exhaustive global-consistency search; same candidate bound as the pairwise case.
pub fn brute_force_global(rels: &[&KRel], opts: &ConsistencyOptions) -> Result<Option<KRel>> {
    same_monoid(rels)?;
    let tab = tabulated_or_unsupported(rels[0])?;
    let (attrs, cells) = support_join(rels)?;
    let mut offsets = Vec::with_capacity(rels.len());
    let mut targets = Vec::new();
    let mut lookup: Vec<BTreeMap<Tuple, usize>> = Vec::with_capacity(rels.len());
    for r in rels {
        offsets.push(targets.len());
        let mut map = BTreeMap::new();
        for (t, e) in r.iter() {
            map.insert(t.clone(), targets.len());
            targets.push(tab.index(e).expect("carrier element"));
        }
        lookup.push(map);
    }
    let positions: Vec<Vec<usize>> = rels
        .iter()
        .map(|r| r.attrs().positions_in(&attrs))
        .collect::<Result<_>>()?;
    let cell_constraints: Vec<Vec<usize>> = cells
        .iter()
        .map(|c| {
            (0..rels.len())
                .map(|i| lookup[i][&c.project(&positions[i])])
                .collect()
        })
        .collect();
    if cell_constraints.is_empty() {
        // Only the all-empty family is consistent with the empty witness.
        return Ok(targets.is_empty().then(|| KRel::new(rels[0].monoid().clone(), attrs)));
    }
    let mut search = SumSearch {
        tab,
        cell_constraints,
        targets,
        budget: opts.budget,
        nodes: 0,
    };
    let Some(values) = search.solve()? else {
        return Ok(None);
    };
    let mut w = KRel::new(rels[0].monoid().clone(), attrs);
    for (c, v) in cells.into_iter().zip(values) {
        w.accumulate(c, tab.elem(v));
    }
    Ok(Some(w))
}

fn validated(w: KRel, rels: &[&KRel], what: &str) -> Result<KRel> {
    if w.is_witness_for(rels)? {
        Ok(w)
    } else {
        Err(Error::Contract(format!(
            "{what} produced a relation whose marginals do not match its inputs"
        )))
    }
}

/// A witness for a pair known to be consistent, using the family's
/// constructive strategy and falling back to search on finite carriers.
fn constructive_witness(r: &KRel, t: &KRel, opts: &ConsistencyOptions) -> Result<KRel> {
    let w = match r.monoid().capabilities().witness_family {
        WitnessFamily::LatticeMeet => lattice_join(r, t)?,
        WitnessFamily::Transportation => transportation_join(r, t)?,
        _ => brute_force_consistent(r, t, opts)?.ok_or_else(|| {
            Error::Contract("inner-consistent pair of an ICP monoid has no witness".into())
        })?,
    };
    validated(w, &[r, t], "witness construction")
}

/// Decides whether some relation over `X ∪ Y` has marginals `R` and `T`.
pub fn consistent(r: &KRel, t: &KRel, opts: &ConsistencyOptions) -> Result<ConsistencyResult> {
    r.same_monoid(t)?;
    let m = r.monoid();
    if m.capabilities().icp == Tri::Yes {
        if !r.inner_consistent(t)? {
            return Ok(ConsistencyResult {
                consistent: false,
                witness: None,
                strategy: Strategy::InnerConsistency,
            });
        }
        return Ok(ConsistencyResult {
            consistent: true,
            witness: Some(constructive_witness(r, t, opts)?),
            strategy: Strategy::InnerConsistency,
        });
    }
    if m.tabulated().is_none() {
        return Err(Error::Unsupported {
            monoid: m.name(),
            capability: "consistency decision",
            detail: Some("no inner consistency property and no finite carrier".into()),
        });
    }
    let w = brute_force_consistent(r, t, opts)?;
    Ok(ConsistencyResult {
        consistent: w.is_some(),
        witness: w.map(|w| validated(w, &[r, t], "brute-force search")).transpose()?,
        strategy: Strategy::BruteForce,
    })
}

/// The family's consistency witness function: lattice meet-join,
/// northwest-corner transportation, or the production construction.
pub fn witness_join(r: &KRel, t: &KRel) -> Result<KRel> {
    r.same_monoid(t)?;
    let m = r.monoid();
    match m.capabilities().witness_family {
        WitnessFamily::LatticeMeet => lattice_join(r, t),
        WitnessFamily::Transportation => transportation_join(r, t),
        WitnessFamily::ProductionGeneric => {
            crate::semijoin::witness_production(r, t, &ConsistencyOptions::default())
        }
        WitnessFamily::BruteForce => brute_force_consistent(r, t, &ConsistencyOptions::default())?
            .ok_or_else(|| Error::Unsupported {
                monoid: m.name(),
                capability: "witness function",
                detail: Some("the pair is not consistent and the monoid lacks the production property".into()),
            }),
        WitnessFamily::None => Err(Error::Unsupported {
            monoid: m.name(),
            capability: "witness function",
            detail: None,
        }),
    }
}

/// Decides whether a single relation over all attributes has every input as a marginal.
pub fn globally_consistent(rels: &[KRel], opts: &ConsistencyOptions) -> Result<ConsistencyResult> {
    if rels.is_empty() {
        return Err(Error::Contract("global consistency needs at least one relation".into()));
    }
    let refs: Vec<&KRel> = rels.iter().collect();
    same_monoid(&refs)?;
    if rels.len() == 1 {
        return Ok(ConsistencyResult {
            consistent: true,
            witness: Some(rels[0].clone()),
            strategy: Strategy::WitnessFold,
        });
    }
    let m = rels[0].monoid();
    if m.capabilities().icp == Tri::Yes {
        let h = crate::schema::Hypergraph::from_attr_sets(rels.iter().map(|r| r.attrs().clone()))?;
        if let Ok(ord) = crate::schema::gyo_order(&h) {
            // Global consistency implies pairwise consistency; on an acyclic
            // schema over an ICP monoid the converse holds, and the fold
            // below produces the witness.
            for i in 0..rels.len() {
                for j in i + 1..rels.len() {
                    if !rels[i].inner_consistent(&rels[j])? {
                        return Ok(ConsistencyResult {
                            consistent: false,
                            witness: None,
                            strategy: Strategy::WitnessFold,
                        });
                    }
                }
            }
            let w = crate::reducer::build_global_witness(&ord, rels)?;
            return Ok(ConsistencyResult {
                consistent: true,
                witness: Some(w),
                strategy: Strategy::WitnessFold,
            });
        }
    }
    let w = brute_force_global(&refs, opts).map_err(|e| match e {
        Error::Unsupported { monoid, .. } => Error::Unsupported {
            monoid,
            capability: "global consistency decision",
            detail: Some("cyclic schema over an infinite carrier".into()),
        },
        other => other,
    })?;
    Ok(ConsistencyResult {
        consistent: w.is_some(),
        witness: w.map(|w| validated(w, &refs, "brute-force search")).transpose()?,
        strategy: Strategy::BruteForce,
    })
}
