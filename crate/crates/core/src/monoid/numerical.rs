//! Numerical semigroups: cofinite submonoids of the naturals given by generators.

use crate::error::{Error, Result};

/// Largest conductor we are willing to tabulate.
const MAX_CONDUCTOR: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericalSemigroup {
    generators: Vec<u64>,
    /// Every `n >= conductor` is a member.
    conductor: u64,
    /// Membership for `0..conductor`.
    members: Vec<bool>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl NumericalSemigroup {
    pub fn new(generators: &[u64]) -> Result<Self> {
        let mut gens: Vec<u64> = generators.iter().copied().filter(|&g| g > 0).collect();
        gens.sort_unstable();
        gens.dedup();
        if gens.is_empty() {
            return Err(Error::InvalidTable(
                "numerical semigroup needs at least one positive generator".into(),
            ));
        }
        if gens.iter().fold(0, |acc, &g| gcd(acc, g)) != 1 {
            return Err(Error::InvalidTable(format!(
                "generators {gens:?} have gcd > 1, so the generated monoid is not cofinite"
            )));
        }
        let smallest = gens[0];
        // Membership by dynamic programming until `smallest` consecutive members
        // appear; from there on every integer is reachable.
        let mut member = vec![true];
        let mut run = 1u64;
        let mut n = 0u64;
        while run < smallest {
            n += 1;
            if n > MAX_CONDUCTOR {
                return Err(Error::InvalidTable(format!(
                    "conductor of {gens:?} exceeds {MAX_CONDUCTOR}"
                )));
            }
            let is_member = gens.iter().any(|&g| g <= n && member[(n - g) as usize]);
            member.push(is_member);
            run = if is_member { run + 1 } else { 0 };
        }
        // `n` is the last member of the run; the run started at n + 1 - smallest.
        let conductor = n + 1 - smallest;
        member.truncate(conductor as usize);
        Ok(NumericalSemigroup {
            generators: gens,
            conductor,
            members: member,
        })
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Largest non-member, or `None` when the semigroup is all of the naturals.
    pub fn frobenius(&self) -> Option<u64> {
        self.conductor.checked_sub(1)
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= self.conductor || self.members[n as usize]
    }

    /// True when the semigroup is the full bag monoid.
    pub fn is_naturals(&self) -> bool {
        self.conductor == 0
    }

    /// Members `d <= c` with `c - d` also a member, i.e. the canonical down-set of `c`.
    pub fn down_set(&self, c: u64) -> Vec<u64> {
        (0..=c)
            .filter(|&d| self.contains(d) && self.contains(c - d))
            .collect()
    }

    /// Exact search for `d_i ⊑ c_i` summing to `b`. The search space is finite
    /// because `d ⊑ c` forces `d <= c` numerically.
    pub fn production_search(&self, b: u64, caps: &[u64]) -> Option<Vec<u64>> {
        let n = caps.len();
        let width = b as usize + 1;
        // reach[i][s]: some choice for the first i capacities sums to s.
        let mut reach = vec![vec![false; width]; n + 1];
        reach[0][0] = true;
        let downs: Vec<Vec<u64>> = caps
            .iter()
            .map(|&c| self.down_set(c).into_iter().filter(|&d| d <= b).collect())
            .collect();
        for i in 0..n {
            for s in 0..width {
                if !reach[i][s] {
                    continue;
                }
                for &d in &downs[i] {
                    let t = s + d as usize;
                    if t < width {
                        reach[i + 1][t] = true;
                    }
                }
            }
        }
        if !reach[n][b as usize] {
            return None;
        }
        let mut out = vec![0u64; n];
        let mut s = b as usize;
        for i in (0..n).rev() {
            let d = downs[i]
                .iter()
                .copied()
                .find(|&d| (d as usize) <= s && reach[i][s - d as usize])
                .expect("reachability table is consistent");
            out[i] = d;
            s -= d as usize;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_five_members() {
        let s = NumericalSemigroup::new(&[3, 5]).unwrap();
        let listed: Vec<u64> = (0..12).filter(|&n| s.contains(n)).collect();
        assert_eq!(listed, vec![0, 3, 5, 6, 8, 9, 10, 11]);
        assert_eq!(s.frobenius(), Some(7));
        assert_eq!(s.conductor(), 8);
    }

    #[test]
    fn one_generates_naturals() {
        let s = NumericalSemigroup::new(&[1, 4]).unwrap();
        assert!(s.is_naturals());
        assert_eq!(s.frobenius(), None);
    }

    #[test]
    fn rejects_non_cofinite() {
        assert!(NumericalSemigroup::new(&[2, 4]).is_err());
        assert!(NumericalSemigroup::new(&[0]).is_err());
    }

    #[test]
    fn production_search_matches_brute_force() {
        let s = NumericalSemigroup::new(&[3, 5]).unwrap();
        let members: Vec<u64> = (0..=20).filter(|&n| s.contains(n)).collect();
        for &b in &members {
            for &c1 in &members {
                for &c2 in &members {
                    let brute = s.down_set(c1).iter().any(|&d1| {
                        d1 <= b && s.contains(b - d1) && s.down_set(c2).contains(&(b - d1))
                    });
                    let found = s.production_search(b, &[c1, c2]);
                    assert_eq!(found.is_some(), brute, "b={b} c=({c1},{c2})");
                    if let Some(d) = found {
                        assert_eq!(d[0] + d[1], b);
                        assert!(s.down_set(c1).contains(&d[0]));
                        assert!(s.down_set(c2).contains(&d[1]));
                    }
                }
            }
        }
    }
}
