use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AttrSet, KRel, Tuple};
use crate::error::{Error, Result};
use crate::monoid::{Elem, MonoidRef};
use crate::schema::Hypergraph;

/// Random relation with at most `max_support` tuples, values drawn from `pool`.
pub fn random_krel(
    rng: &mut impl Rng,
    m: &MonoidRef,
    attrs: &AttrSet,
    max_support: usize,
    pool: &[Elem],
) -> Result<KRel> {
    if pool.is_empty() {
        return Err(Error::Contract("value pool is empty".into()));
    }
    for e in pool {
        m.check(e)?;
        if m.is_zero(e) {
            return Err(Error::Contract("value pool contains zero".into()));
        }
    }
    let space = attrs
        .iter()
        .try_fold(1usize, |acc, a| acc.checked_mul(a.domain.len()))
        .unwrap_or(usize::MAX);
    let size = rng.random_range(0..=max_support.min(space));
    let tuples: Vec<Tuple> = if space <= 4096 {
        attrs.all_tuples().choose_multiple(rng, size).cloned().collect()
    } else {
        let mut seen = BTreeSet::new();
        while seen.len() < size {
            let t = Tuple(
                attrs
                    .iter()
                    .map(|a| rng.random_range(0..a.domain.len() as u32))
                    .collect(),
            );
            seen.insert(t);
        }
        seen.into_iter().collect()
    };
    let mut r = KRel::new(m.clone(), attrs.clone());
    for t in tuples {
        let e = *pool.choose(rng).unwrap();
        r.set(t, e)?;
    }
    Ok(r)
}

/// Seeded form of [`random_krel`]; the same seed always gives the same relation.
pub fn gen_random_krel(
    m: &MonoidRef,
    attrs: &AttrSet,
    max_support: usize,
    pool: &[Elem],
    seed: u64,
) -> Result<KRel> {
    random_krel(&mut ChaCha8Rng::seed_from_u64(seed), m, attrs, max_support, pool)
}

/// Marginals of one random witness over the attribute union, one per
/// hyperedge: a globally consistent family by construction.
pub fn gen_consistent_family(
    m: &MonoidRef,
    h: &Hypergraph,
    max_support: usize,
    pool: &[Elem],
    seed: u64,
) -> Result<Vec<KRel>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = random_krel(&mut rng, m, &h.universe()?, max_support, pool)?;
    h.edges().iter().map(|e| w.marginal(&e.attrs)).collect()
}
