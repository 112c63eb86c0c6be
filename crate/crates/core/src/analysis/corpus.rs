//! Random finite positive commutative monoids.
//!
//! Uniformly random tables are almost never associative, so the generator
//! composes structured families (saturating chains, max chains, null
//! semigroups, union-closed set families, truncated powersets, capped
//! numerical semigroups), takes direct products and finally relabels the
//! carrier with a random permutation.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::monoid::{FiniteTable, MonoidRef};

#[derive(Clone, Debug)]
struct Comp {
    n: usize,
    zero: u32,
    table: Vec<u32>,
}

impl Comp {
    fn from_fn(n: usize, zero: u32, f: impl Fn(u32, u32) -> u32) -> Comp {
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                table.push(f(a, b));
            }
        }
        Comp { n, zero, table }
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.n + b as usize]
    }

    fn product(&self, other: &Comp) -> Comp {
        let m = other.n as u32;
        Comp::from_fn(self.n * other.n, self.zero * m + other.zero, |x, y| {
            self.add(x / m, y / m) * m + other.add(x % m, y % m)
        })
    }
}

fn saturating_chain(n: usize) -> Comp {
    let top = n as u32 - 1;
    Comp::from_fn(n, 0, |a, b| (a + b).min(top))
}

fn max_chain(n: usize) -> Comp {
    Comp::from_fn(n, 0, |a, b| a.max(b))
}

/// Zero, `n - 2` atoms and an absorbing top: any two nonzero elements sum to the top.
fn null_semigroup(n: usize) -> Comp {
    let top = n as u32 - 1;
    Comp::from_fn(n, 0, |a, b| match (a, b) {
        (0, x) | (x, 0) => x,
        _ => top,
    })
}

fn truncated_powerset(n: usize) -> Option<Comp> {
    let k = n.checked_sub(2).filter(|&k| k >= 3)?;
    let m = MonoidRef::truncated_powerset(k).ok()?;
    let tab = m.tabulated()?;
    Some(Comp::from_fn(n, tab.zero(), |a, b| tab.add(a, b)))
}

fn union_closed(rng: &mut impl Rng, n: usize) -> Option<Comp> {
    for _ in 0..64 {
        let ground = rng.random_range(2..=5u32);
        if n > 1 << ground {
            continue;
        }
        let mut family: Vec<u32> = vec![0];
        for _ in 0..256 {
            if family.len() >= n {
                break;
            }
            let s = rng.random_range(1..1u32 << ground);
            if family.contains(&s) {
                continue;
            }
            let mut next = family.clone();
            next.push(s);
            // Close under union.
            let mut i = 0;
            while i < next.len() {
                for j in 0..i {
                    let u = next[i] | next[j];
                    if !next.contains(&u) {
                        next.push(u);
                    }
                }
                i += 1;
            }
            if next.len() > n {
                break;
            }
            family = next;
        }
        if family.len() == n {
            let pos = |s: u32| family.iter().position(|&f| f == s).unwrap() as u32;
            let fam = family.clone();
            return Some(Comp::from_fn(n, 0, |a, b| pos(fam[a as usize] | fam[b as usize])));
        }
    }
    None
}

/// Members of a numerical semigroup up to a cap, with sums saturating at the cap.
fn capped_numerical(rng: &mut impl Rng, n: usize) -> Option<Comp> {
    for _ in 0..32 {
        let g1 = rng.random_range(2..=4u64);
        let g2 = rng.random_range(g1 + 1..=g1 + 4);
        let s = crate::monoid::NumericalSemigroup::new(&[g1, g2]).ok()?;
        let members: Vec<u64> = (0..200).filter(|&x| s.contains(x)).take(n).collect();
        if members.len() != n {
            continue;
        }
        let cap = members[n - 1];
        let pos = |x: u64| members.iter().position(|&y| y == x.min(cap)).map(|p| p as u32);
        // Closed only when every capped sum lands on a member.
        let closed = members
            .iter()
            .all(|&a| members.iter().all(|&b| pos(a + b).is_some()));
        if closed {
            return Some(Comp::from_fn(n, 0, |a, b| {
                pos(members[a as usize] + members[b as usize]).unwrap()
            }));
        }
    }
    None
}

fn component(rng: &mut impl Rng, n: usize) -> Comp {
    loop {
        let c = match rng.random_range(0..6) {
            0 => Some(saturating_chain(n)),
            1 => Some(max_chain(n)),
            2 => Some(null_semigroup(n)),
            3 => union_closed(rng, n),
            4 => truncated_powerset(n),
            _ => capped_numerical(rng, n),
        };
        if let Some(c) = c {
            return c;
        }
    }
}

fn build(rng: &mut impl Rng, n: usize) -> Comp {
    let factors: Vec<usize> = (2..n).filter(|d| n % d == 0 && d * d <= n).collect();
    if !factors.is_empty() && rng.random_bool(0.5) {
        let d = factors[rng.random_range(0..factors.len())];
        build(rng, d).product(&build(rng, n / d))
    } else {
        component(rng, n)
    }
}

/// A random monoid with exactly `n >= 2` elements, named `e0`, `e1`, ….
pub fn random_monoid(rng: &mut impl Rng, n: usize) -> MonoidRef {
    assert!(n >= 2, "monoids need at least two elements");
    let comp = build(rng, n);
    let mut perm: Vec<u32> = (0..n as u32).collect();
    perm.shuffle(rng);
    // perm[old] = new
    let mut inv = vec![0u32; n];
    for (old, &new) in perm.iter().enumerate() {
        inv[new as usize] = old as u32;
    }
    let names = (0..n).map(|i| format!("e{i}")).collect();
    let table = FiniteTable::from_fn(names, perm[comp.zero as usize], |a, b| {
        perm[comp.add(inv[a as usize], inv[b as usize]) as usize]
    })
    .expect("generated tables are positive commutative monoids");
    MonoidRef::from_table(table, None)
}

/// `count` random monoids with sizes in `2..=max_size`, deterministic in `seed`.
pub fn random_corpus(seed: u64, count: usize, max_size: usize) -> Vec<MonoidRef> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(2..=max_size);
            random_monoid(&mut rng, n)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic_and_valid() {
        let a = random_corpus(7, 40, 8);
        let b = random_corpus(7, 40, 8);
        assert_eq!(a, b);
        for m in &a {
            let t = m.tabulated().unwrap();
            assert!((2..=8).contains(&t.len()));
        }
    }

    #[test]
    fn size_64() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random_monoid(&mut rng, 64);
        assert_eq!(m.tabulated().unwrap().len(), 64);
    }
}
