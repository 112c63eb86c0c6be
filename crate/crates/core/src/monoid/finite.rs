//! Explicit finite monoids and the tabulated view shared by every finite carrier.

use std::collections::HashMap;
use std::fmt;

use super::Elem;

/// A monoid given by its element names, addition table and zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTable {
    pub(crate) names: Vec<String>,
    pub(crate) zero: u32,
    /// Row-major `n * n` table of element indices.
    pub(crate) table: Vec<u32>,
}

/// Why a candidate table is not a positive commutative monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableViolation {
    TooFewElements(usize),
    DuplicateElement(String),
    UnknownZero(String),
    Shape { rows: usize, expected: usize },
    /// A table cell names something outside the element list.
    Closure { left: String, right: String, value: String },
    Associativity { a: String, b: String, c: String },
    Commutativity { a: String, b: String },
    Neutrality { a: String },
    Positivity { p: String, q: String },
}

impl TableViolation {
    /// Short axiom name, used in reports.
    pub fn axiom(&self) -> &'static str {
        match self {
            TableViolation::TooFewElements(_) => "size",
            TableViolation::DuplicateElement(_) => "distinct-elements",
            TableViolation::UnknownZero(_) => "zero",
            TableViolation::Shape { .. } => "shape",
            TableViolation::Closure { .. } => "closure",
            TableViolation::Associativity { .. } => "associativity",
            TableViolation::Commutativity { .. } => "commutativity",
            TableViolation::Neutrality { .. } => "neutrality",
            TableViolation::Positivity { .. } => "positivity",
        }
    }
}

impl fmt::Display for TableViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableViolation::TooFewElements(n) => {
                write!(f, "fewer than two elements ({n}); monoids need at least two")
            }
            TableViolation::DuplicateElement(e) => write!(f, "duplicate element {e:?}"),
            TableViolation::UnknownZero(z) => write!(f, "zero {z:?} is not an element"),
            TableViolation::Shape { rows, expected } => {
                write!(f, "addition table must be {expected}x{expected}, found {rows} rows or a ragged row")
            }
            TableViolation::Closure { left, right, value } => {
                write!(f, "closure: {left} + {right} = {value:?} is not an element")
            }
            TableViolation::Associativity { a, b, c } => {
                write!(f, "associativity fails at ({a}, {b}, {c})")
            }
            TableViolation::Commutativity { a, b } => {
                write!(f, "commutativity fails at ({a}, {b})")
            }
            TableViolation::Neutrality { a } => write!(f, "zero is not neutral for {a}"),
            TableViolation::Positivity { p, q } => {
                write!(f, "positivity fails: {p} + {q} = 0 with a nonzero summand")
            }
        }
    }
}

impl std::error::Error for TableViolation {}

impl FiniteTable {
    /// Checks closure, associativity, commutativity, neutrality and positivity,
    /// in that order, and reports the first violation with a witness.
    pub fn validate(
        elements: &[String],
        add_table: &[Vec<String>],
        zero_name: &str,
    ) -> Result<FiniteTable, TableViolation> {
        let n = elements.len();
        if n < 2 {
            return Err(TableViolation::TooFewElements(n));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.as_str(), i as u32).is_some() {
                return Err(TableViolation::DuplicateElement(e.clone()));
            }
        }
        let zero = *index
            .get(zero_name)
            .ok_or_else(|| TableViolation::UnknownZero(zero_name.to_string()))?;
        if add_table.len() != n || add_table.iter().any(|row| row.len() != n) {
            return Err(TableViolation::Shape {
                rows: add_table.len(),
                expected: n,
            });
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in add_table.iter().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                match index.get(cell.as_str()) {
                    Some(&k) => table.push(k),
                    None => {
                        return Err(TableViolation::Closure {
                            left: elements[i].clone(),
                            right: elements[j].clone(),
                            value: cell.clone(),
                        })
                    }
                }
            }
        }
        let ft = FiniteTable {
            names: elements.to_vec(),
            zero,
            table,
        };
        ft.check_axioms()?;
        Ok(ft)
    }

    /// Builds a table from a closure over indices; used by the builtin finite families.
    pub(crate) fn from_fn(
        names: Vec<String>,
        zero: u32,
        add: impl Fn(u32, u32) -> u32,
    ) -> Result<FiniteTable, TableViolation> {
        let n = names.len() as u32;
        let mut table = Vec::with_capacity((n * n) as usize);
        for i in 0..n {
            for j in 0..n {
                let v = add(i, j);
                if v >= n {
                    return Err(TableViolation::Closure {
                        left: names[i as usize].clone(),
                        right: names[j as usize].clone(),
                        value: v.to_string(),
                    });
                }
                table.push(v);
            }
        }
        if names.len() < 2 {
            return Err(TableViolation::TooFewElements(names.len()));
        }
        let ft = FiniteTable { names, zero, table };
        ft.check_axioms()?;
        Ok(ft)
    }

    fn check_axioms(&self) -> Result<(), TableViolation> {
        let n = self.len() as u32;
        let name = |i: u32| self.names[i as usize].clone();
        for a in 0..n {
            for b in 0..n {
                let ab = self.add(a, b);
                for c in 0..n {
                    if self.add(ab, c) != self.add(a, self.add(b, c)) {
                        return Err(TableViolation::Associativity {
                            a: name(a),
                            b: name(b),
                            c: name(c),
                        });
                    }
                }
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                if self.add(a, b) != self.add(b, a) {
                    return Err(TableViolation::Commutativity { a: name(a), b: name(b) });
                }
            }
        }
        for a in 0..n {
            if self.add(a, self.zero) != a || self.add(self.zero, a) != a {
                return Err(TableViolation::Neutrality { a: name(a) });
            }
        }
        for p in 0..n {
            for q in 0..n {
                if self.add(p, q) == self.zero && (p != self.zero || q != self.zero) {
                    return Err(TableViolation::Positivity { p: name(p), q: name(q) });
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn zero_index(&self) -> u32 {
        self.zero
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.names.len() + b as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }

    /// Row-major table of names, the shape used by the monoid file format.
    pub fn name_table(&self) -> Vec<Vec<String>> {
        let n = self.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.names[self.table[i * n + j] as usize].clone())
                    .collect()
            })
            .collect()
    }
}

/// Index-level view of a finite carrier with the canonical preorder cached.
///
/// Built once per monoid; every exhaustive decision procedure runs on it.
#[derive(Debug)]
pub struct Tabulated {
    pub(crate) elems: Vec<Elem>,
    pub(crate) index: HashMap<Elem, u32>,
    pub(crate) zero: u32,
    pub(crate) table: Vec<u32>,
    /// `leq[a * n + b]`: smallest `c` with `a + c = b`, or `NONE`.
    pub(crate) leq: Vec<u32>,
    /// `down[b]`: all `a` with `a ⊑ b`, ascending.
    pub(crate) down: Vec<Vec<u32>>,
}

pub(crate) const NONE: u32 = u32::MAX;

impl Tabulated {
    pub(crate) fn new(elems: Vec<Elem>, zero: u32, table: Vec<u32>) -> Tabulated {
        let n = elems.len();
        let mut leq = vec![NONE; n * n];
        for a in 0..n {
            for c in 0..n {
                let b = table[a * n + c] as usize;
                let slot = &mut leq[a * n + b];
                if *slot == NONE {
                    *slot = c as u32;
                }
            }
        }
        let down = (0..n)
            .map(|b| {
                (0..n as u32)
                    .filter(|&a| leq[a as usize * n + b] != NONE)
                    .collect()
            })
            .collect();
        let index = elems.iter().enumerate().map(|(i, e)| (*e, i as u32)).collect();
        Tabulated {
            elems,
            index,
            zero,
            table,
            leq,
            down,
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[Elem] {
        &self.elems
    }

    pub fn zero(&self) -> u32 {
        self.zero
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.elems.len() + b as usize]
    }

    #[inline]
    pub fn leq(&self, a: u32, b: u32) -> bool {
        self.leq[a as usize * self.elems.len() + b as usize] != NONE
    }

    pub fn leq_witness(&self, a: u32, b: u32) -> Option<u32> {
        let c = self.leq[a as usize * self.elems.len() + b as usize];
        (c != NONE).then_some(c)
    }

    pub fn down(&self, b: u32) -> &[u32] {
        &self.down[b as usize]
    }

    pub fn index(&self, e: &Elem) -> Option<u32> {
        self.index.get(e).copied()
    }

    pub fn elem(&self, i: u32) -> Elem {
        self.elems[i as usize]
    }
}
