use crate::error::{Error, Result};
use crate::monoid::{Elem, Family, Monoid, Tabulated};

/// A 2×2 matrix with prescribed row sums `b` and column sums `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct Transport2x2 {
    pub b: [Elem; 2],
    pub c: [Elem; 2],
    pub d: [[Elem; 2]; 2],
}

impl Transport2x2 {
    /// All four sum equations, evaluated exactly.
    pub fn satisfies(&self, m: &Monoid) -> bool {
        let d = &self.d;
        m.plus(&d[0][0], &d[0][1]) == self.b[0]
            && m.plus(&d[1][0], &d[1][1]) == self.b[1]
            && m.plus(&d[0][0], &d[1][0]) == self.c[0]
            && m.plus(&d[0][1], &d[1][1]) == self.c[1]
    }
}

/// Finds a matrix for rows `(b₁, b₂)` and columns `(c₁, c₂)`, or `None` when
/// none exists. Requires `b₁ + b₂ = c₁ + c₂`; every returned matrix has been
/// re-checked against the four equations.
pub fn transport_2x2(
    m: &Monoid,
    b1: &Elem,
    b2: &Elem,
    c1: &Elem,
    c2: &Elem,
) -> Result<Option<Transport2x2>> {
    for e in [b1, b2, c1, c2] {
        m.check(e)?;
    }
    if m.plus(b1, b2) != m.plus(c1, c2) {
        return Err(Error::Contract(
            "transportation instance needs equal row and column totals".into(),
        ));
    }
    let d = match (m.family(), b1, b2, c1) {
        (Family::Bag, Elem::Nat(b1), Elem::Nat(b2), Elem::Nat(c1)) => {
            Some(nat_northwest(*b1, *b2, *c1))
        }
        (Family::Numerical(s), Elem::Nat(b1), Elem::Nat(b2), Elem::Nat(c1)) if s.is_naturals() => {
            Some(nat_northwest(*b1, *b2, *c1))
        }
        (Family::Numerical(s), Elem::Nat(b1), Elem::Nat(b2), Elem::Nat(c1)) => (0..=(*b1).min(*c1))
            .find(|&d11| {
                let d21 = c1 - d11;
                s.contains(d11)
                    && s.contains(b1 - d11)
                    && s.contains(d21)
                    && d21 <= *b2
                    && s.contains(b2 - d21)
            })
            .map(|d11| {
                [
                    [Elem::Nat(d11), Elem::Nat(b1 - d11)],
                    [Elem::Nat(c1 - d11), Elem::Nat(b2 - (c1 - d11))],
                ]
            }),
        (Family::NonnegReal, Elem::Real(b1), Elem::Real(b2), Elem::Real(c1)) => {
            let d11 = b1.0.min(c1.0);
            let d21 = c1.0 - d11;
            Some([
                [Elem::real(d11), Elem::real(b1.0 - d11)],
                [Elem::real(d21), Elem::real((b2.0 - d21).max(0.0))],
            ])
        }
        _ if m.has_lattice_meet() => {
            let meet = |x: &Elem, y: &Elem| m.meet(x, y).unwrap();
            Some([[meet(b1, c1), meet(b1, c2)], [meet(b2, c1), meet(b2, c2)]])
        }
        _ => {
            let tab = m.tabulated().ok_or_else(|| Error::Unsupported {
                monoid: m.name(),
                capability: "transportation solver",
                detail: None,
            })?;
            let idx = |e: &Elem| tab.index(e).expect("carrier element");
            search_tab(tab, idx(b1), idx(b2), idx(c1), idx(c2)).map(|[d11, d12, d21, d22]| {
                [
                    [tab.elem(d11), tab.elem(d12)],
                    [tab.elem(d21), tab.elem(d22)],
                ]
            })
        }
    };
    let Some(d) = d else { return Ok(None) };
    let t = Transport2x2 {
        b: [*b1, *b2],
        c: [*c1, *c2],
        d,
    };
    if !t.satisfies(m) {
        return Err(Error::Contract(format!(
            "transportation matrix for {} violates its sum equations",
            m.name()
        )));
    }
    Ok(Some(t))
}

fn nat_northwest(b1: u64, b2: u64, c1: u64) -> [[Elem; 2]; 2] {
    let d11 = b1.min(c1);
    let d21 = c1 - d11;
    [
        [Elem::Nat(d11), Elem::Nat(b1 - d11)],
        [Elem::Nat(d21), Elem::Nat(b2 - d21)],
    ]
}

/// Exhaustive matrix search on a tabulated carrier, first solution in
/// lexicographic order of `(d₁₁, d₁₂, d₂₁, d₂₂)`.
pub(crate) fn search_tab(tab: &Tabulated, b1: u32, b2: u32, c1: u32, c2: u32) -> Option<[u32; 4]> {
    for &d11 in tab.down(b1) {
        if !tab.leq(d11, c1) {
            continue;
        }
        for &d12 in tab.down(b1) {
            if tab.add(d11, d12) != b1 || !tab.leq(d12, c2) {
                continue;
            }
            for &d21 in tab.down(c1) {
                if tab.add(d11, d21) != c1 || !tab.leq(d21, b2) {
                    continue;
                }
                for &d22 in tab.down(b2) {
                    if tab.add(d21, d22) == b2 && tab.add(d12, d22) == c2 {
                        return Some([d11, d12, d21, d22]);
                    }
                }
            }
        }
    }
    None
}
