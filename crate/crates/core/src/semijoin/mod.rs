//! Semijoin functions and the axiom audit.
//!
//! For relations `R` over `X` and `T` over `Y`, with `Z = X ∩ Y`, a semijoin
//! function returns `S(R,T)` over `X` such that
//!
//! * P1: `S(R,T) = R` whenever `R` and `T` are consistent,
//! * P2: `S(R,T) ⊑ R`,
//! * P3: `S(R,T)[Z] ⊑ T[Z]`,
//! * P4: `S(R,T)[Z] = T[Z]` whenever `T[Z] ⊑ R[Z]`.

mod audit;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::krelation::{consistent, ConsistencyOptions, KRel, Tuple, TupleJoiner};
use crate::monoid::{Elem, Family, MonoidRef};

pub use audit::{audit_axioms, AxiomReport, AxiomVerdict, ConsistencyOracle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SemijoinKind {
    /// `S(R,T)(x) = meet(R(x), T[Z](x[Z]))`.
    Lattice,
    /// The production construction, decided per shared key.
    Production,
    /// The production construction with its three cases decided on whole
    /// marginals: inner consistent, `T[Z] ⊑ R[Z]`, or neither (empty result).
    ProductionStrict,
    /// Classical semijoin on Boolean relations: keep tuples with a partner.
    BooleanStandard,
    /// Projection of the bag join, `R(x) · T[Z](x[Z])`. Not a semijoin
    /// function; kept as a negative control for the audit.
    BagJoinProjection,
}

impl SemijoinKind {
    pub fn name(self) -> &'static str {
        match self {
            SemijoinKind::Lattice => "lattice",
            SemijoinKind::Production => "production",
            SemijoinKind::ProductionStrict => "production-strict",
            SemijoinKind::BooleanStandard => "boolean-standard",
            SemijoinKind::BagJoinProjection => "bag-join-projection",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SemijoinImpl {
    monoid: MonoidRef,
    kind: SemijoinKind,
}

impl SemijoinImpl {
    pub fn new(monoid: &MonoidRef, kind: SemijoinKind) -> Result<SemijoinImpl> {
        let ok = match kind {
            SemijoinKind::Lattice => monoid.has_lattice_meet(),
            SemijoinKind::Production | SemijoinKind::ProductionStrict => {
                monoid.has_production_property()
            }
            SemijoinKind::BooleanStandard => matches!(monoid.family(), Family::Boolean),
            SemijoinKind::BagJoinProjection => {
                matches!(monoid.family(), Family::Bag | Family::NonnegReal)
            }
        };
        if !ok {
            return Err(Error::Unsupported {
                monoid: monoid.name(),
                capability: "semijoin function",
                detail: Some(format!("{} semijoin is not available", kind.name())),
            });
        }
        Ok(SemijoinImpl {
            monoid: monoid.clone(),
            kind,
        })
    }

    /// Lattice semijoin where the family has a meet, the production
    /// construction otherwise.
    pub fn for_monoid(monoid: &MonoidRef) -> Result<SemijoinImpl> {
        if monoid.has_lattice_meet() {
            SemijoinImpl::new(monoid, SemijoinKind::Lattice)
        } else {
            SemijoinImpl::new(monoid, SemijoinKind::Production)
        }
    }

    pub fn kind(&self) -> SemijoinKind {
        self.kind
    }

    pub fn monoid(&self) -> &MonoidRef {
        &self.monoid
    }

    pub fn name(&self) -> String {
        format!("{}[{}]", self.kind.name(), self.monoid.name())
    }

    pub fn apply(&self, r: &KRel, t: &KRel) -> Result<KRel> {
        if *r.monoid() != self.monoid || *t.monoid() != self.monoid {
            return Err(Error::MonoidMismatch {
                left: self.monoid.name(),
                right: if *r.monoid() != self.monoid {
                    r.monoid().name()
                } else {
                    t.monoid().name()
                },
            });
        }
        match self.kind {
            SemijoinKind::Lattice => semijoin_lattice(r, t),
            SemijoinKind::Production => semijoin_production(r, t),
            SemijoinKind::ProductionStrict => semijoin_production_strict(r, t),
            SemijoinKind::BooleanStandard => classical_semijoin(r, t),
            SemijoinKind::BagJoinProjection => bag_join_projection(r, t),
        }
    }
}

/// Per shared key `z`: the R-side group with its capacities, `R[Z](z)` and `T[Z](z)`.
struct KeyGroup {
    rows: Vec<(Tuple, Elem)>,
    total: Elem,
    demand: Elem,
    /// T-side support tuples at this key, in order.
    partners: Vec<(Tuple, Elem)>,
}

fn key_groups(r: &KRel, t: &KRel) -> Result<Vec<KeyGroup>> {
    let m = r.monoid();
    let z = r.attrs().intersection(t.attrs());
    let mut tg = t.group_by(&z)?;
    Ok(r.group_by(&z)?
        .into_iter()
        .map(|(key, rows)| {
            let partners = tg.remove(&key).unwrap_or_default();
            KeyGroup {
                total: m.sum(rows.iter().map(|(_, e)| e)),
                demand: m.sum(partners.iter().map(|(_, e)| e)),
                rows,
                partners,
            }
        })
        .collect())
}

/// `S(R,T)(x) = meet(R(x), T[Z](x[Z]))` for lattice families.
pub fn semijoin_lattice(r: &KRel, t: &KRel) -> Result<KRel> {
    let m = r.monoid();
    if !m.has_lattice_meet() {
        return Err(Error::Unsupported {
            monoid: m.name(),
            capability: "lattice semijoin",
            detail: None,
        });
    }
    let mut out = KRel::new(m.clone(), r.attrs().clone());
    for g in key_groups(r, t)? {
        for (x, a) in g.rows {
            out.accumulate(x, m.meet(&a, &g.demand).unwrap());
        }
    }
    Ok(out)
}

/// The production split of `demand` over the group's capacities.
fn solve_group(m: &MonoidRef, g: &KeyGroup) -> Result<Vec<Elem>> {
    let caps: Vec<Elem> = g.rows.iter().map(|(_, e)| *e).collect();
    m.production_solve(&g.demand, &caps)?.ok_or_else(|| {
        Error::Contract(format!(
            "production solver found no split of {} below {} on {}",
            m.format_elem(&g.demand),
            m.format_elem(&g.total),
            m.name()
        ))
    })
}

/// The production semijoin, decided key by key:
///
/// * `T[Z](z) = R[Z](z)`: the R-group at `z` is kept,
/// * `T[Z](z) ⊑ R[Z](z)`: the group is replaced by a production split of `T[Z](z)`,
/// * otherwise the group is dropped.
///
/// Keys missing from `T` have demand zero and are dropped.
pub fn semijoin_production(r: &KRel, t: &KRel) -> Result<KRel> {
    let m = r.monoid().clone();
    let mut out = KRel::new(m.clone(), r.attrs().clone());
    for g in key_groups(r, t)? {
        if g.demand == g.total {
            for (x, a) in g.rows {
                out.accumulate(x, a);
            }
        } else if !m.is_zero(&g.demand) && m.is_leq(&g.demand, &g.total) {
            let d = solve_group(&m, &g)?;
            for ((x, _), di) in g.rows.into_iter().zip(d) {
                out.accumulate(x, di);
            }
        }
    }
    Ok(out)
}

/// The production semijoin with the case split taken on whole marginals.
pub fn semijoin_production_strict(r: &KRel, t: &KRel) -> Result<KRel> {
    if r.inner_consistent(t)? {
        return Ok(r.clone());
    }
    let z = r.attrs().intersection(t.attrs());
    let m = r.monoid().clone();
    let mut out = KRel::new(m.clone(), r.attrs().clone());
    if !t.marginal(&z)?.rel_leq(&r.marginal(&z)?)? {
        return Ok(out);
    }
    for g in key_groups(r, t)? {
        if m.is_zero(&g.demand) {
            continue;
        }
        let d = solve_group(&m, &g)?;
        for ((x, _), di) in g.rows.into_iter().zip(d) {
            out.accumulate(x, di);
        }
    }
    Ok(out)
}

/// Classical semijoin: the R-tuples whose shared part occurs in `T`.
pub fn classical_semijoin(r: &KRel, t: &KRel) -> Result<KRel> {
    let z = r.attrs().intersection(t.attrs());
    let keys = t.marginal(&z)?;
    let pos = z.positions_in(r.attrs())?;
    let mut out = KRel::new(r.monoid().clone(), r.attrs().clone());
    for (x, a) in r.iter() {
        if !r.monoid().is_zero(&keys.get(&x.project(&pos))) {
            out.accumulate(x.clone(), *a);
        }
    }
    Ok(out)
}

/// `(R ⋈ T)[X]` under bag multiplication: `R(x) · T[Z](x[Z])`.
pub fn bag_join_projection(r: &KRel, t: &KRel) -> Result<KRel> {
    let m = r.monoid().clone();
    let mut out = KRel::new(m.clone(), r.attrs().clone());
    for g in key_groups(r, t)? {
        for (x, a) in g.rows {
            let prod = match (a, g.demand) {
                (Elem::Nat(p), Elem::Nat(q)) => Elem::Nat(p * q),
                (Elem::Real(p), Elem::Real(q)) => Elem::real(p.0 * q.0),
                _ => {
                    return Err(Error::Unsupported {
                        monoid: m.name(),
                        capability: "multiplication",
                        detail: None,
                    })
                }
            };
            out.accumulate(x, prod);
        }
    }
    Ok(out)
}

/// Places `values[i]` on `rows[i]` joined with the group's first T-tuple.
fn v_construction(joiner: &TupleJoiner, g: &KeyGroup, values: &[Elem], out: &mut KRel) {
    let (v, _) = &g.partners[0];
    for ((x, _), d) in g.rows.iter().zip(values) {
        out.accumulate(joiner.join(x, v), *d);
    }
}

/// A pair restricted to one shared key.
fn group_pair(r: &KRel, t: &KRel, g: &KeyGroup) -> Result<(KRel, KRel)> {
    let mut rz = KRel::new(r.monoid().clone(), r.attrs().clone());
    for (x, a) in &g.rows {
        rz.accumulate(x.clone(), *a);
    }
    let mut tz = KRel::new(t.monoid().clone(), t.attrs().clone());
    for (y, b) in &g.partners {
        tz.accumulate(y.clone(), *b);
    }
    Ok((rz, tz))
}

/// Coherent witness for [`semijoin_production`]: its marginal onto `X` equals
/// the semijoin output, and it is a consistency witness whenever `R` and `T`
/// are consistent.
///
/// Per key: when the marginals agree, a consistency witness for the key's
/// sub-pair if one exists and otherwise the R-group placed on the first
/// T-tuple; when `T[Z](z) ⊑ R[Z](z)`, the production split placed on the
/// first T-tuple; otherwise nothing.
pub fn witness_production(r: &KRel, t: &KRel, opts: &ConsistencyOptions) -> Result<KRel> {
    let m = r.monoid().clone();
    if !m.has_production_property() {
        return Err(Error::Unsupported {
            monoid: m.name(),
            capability: "production witness",
            detail: None,
        });
    }
    let xy = r.attrs().union(t.attrs())?;
    let joiner = TupleJoiner::new(r.attrs(), t.attrs(), &xy);
    let mut out = KRel::new(m.clone(), xy);
    for g in key_groups(r, t)? {
        if g.partners.is_empty() {
            continue;
        }
        if g.demand == g.total {
            let (rz, tz) = group_pair(r, t, &g)?;
            let res = consistent(&rz, &tz, opts)?;
            match res.witness {
                Some(w) => {
                    for (u, e) in w.iter() {
                        out.accumulate(u.clone(), *e);
                    }
                }
                None => {
                    let caps: Vec<Elem> = g.rows.iter().map(|(_, e)| *e).collect();
                    v_construction(&joiner, &g, &caps, &mut out);
                }
            }
        } else if m.is_leq(&g.demand, &g.total) {
            let d = solve_group(&m, &g)?;
            v_construction(&joiner, &g, &d, &mut out);
        }
    }
    Ok(out)
}

/// Witness counterpart of [`semijoin_production_strict`].
pub fn witness_production_strict(r: &KRel, t: &KRel, opts: &ConsistencyOptions) -> Result<KRel> {
    let m = r.monoid().clone();
    let xy = r.attrs().union(t.attrs())?;
    let joiner = TupleJoiner::new(r.attrs(), t.attrs(), &xy);
    let mut out = KRel::new(m.clone(), xy);
    if r.inner_consistent(t)? {
        if let Some(w) = consistent(r, t, opts)?.witness {
            return Ok(w);
        }
        for g in key_groups(r, t)? {
            let caps: Vec<Elem> = g.rows.iter().map(|(_, e)| *e).collect();
            v_construction(&joiner, &g, &caps, &mut out);
        }
        return Ok(out);
    }
    let z = r.attrs().intersection(t.attrs());
    if !t.marginal(&z)?.rel_leq(&r.marginal(&z)?)? {
        return Ok(out);
    }
    for g in key_groups(r, t)? {
        if g.partners.is_empty() {
            continue;
        }
        let d = solve_group(&m, &g)?;
        v_construction(&joiner, &g, &d, &mut out);
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
