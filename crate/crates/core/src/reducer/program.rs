//! Semijoin programs and their text form.
//!
//! ```text
//! (-3) R2 := R2 <| R3
//! R1 := R1 <| R2
//! ```
//!
//! One statement per line; `#` starts a comment. The parenthesized label is optional.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::schema::{gyo_order, validate_ordering, Hypergraph, RIOrdering};

/// `X_target := X_target ⋉ X_other`, with 0-based hyperedge indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Statement {
    pub target: usize,
    pub other: usize,
    pub label: Option<i64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SemijoinProgram {
    pub statements: Vec<Statement>,
}

impl SemijoinProgram {
    pub fn new(statements: Vec<Statement>) -> SemijoinProgram {
        SemijoinProgram { statements }
    }

    pub fn len(&self) -> usize {
        self.statements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }

    /// Indices in range for `m` hyperedges, no self-semijoins.
    pub fn validate(&self, m: usize) -> Result<()> {
        for (i, s) in self.statements.iter().enumerate() {
            let bad = |message: String| Err(Error::Statement { index: i, message });
            if s.target >= m || s.other >= m {
                return bad(format!("index out of range for {m} relations"));
            }
            if s.target == s.other {
                return bad("a relation cannot be semijoined with itself".into());
            }
        }
        Ok(())
    }
}

/// The two-pass program along a GYO ordering.
pub fn compile_full_reducer(h: &Hypergraph) -> Result<SemijoinProgram> {
    compile_with_ordering(h, &gyo_order(h)?)
}

/// Down pass `X_{j_k} := X_{j_k} ⋉ X_k` for `k = m … 2`, then up pass
/// `X_k := X_k ⋉ X_{j_k}` for `k = 2 … m`. Labels are `-k` and `k`.
pub fn compile_with_ordering(h: &Hypergraph, ord: &RIOrdering) -> Result<SemijoinProgram> {
    if let Some(i) = validate_ordering(h, ord)? {
        return Err(Error::Ordering {
            index: i,
            message: "running intersection fails".into(),
        });
    }
    let m = ord.len();
    let mut statements = Vec::with_capacity(2 * m.saturating_sub(1));
    for k in (1..m).rev() {
        statements.push(Statement {
            target: ord.parent_edge(k).unwrap(),
            other: ord.order[k],
            label: Some(-(k as i64 + 1)),
        });
    }
    for k in 1..m {
        statements.push(Statement {
            target: ord.order[k],
            other: ord.parent_edge(k).unwrap(),
            label: Some(k as i64 + 1),
        });
    }
    Ok(SemijoinProgram { statements })
}

pub fn format_program(h: &Hypergraph, prog: &SemijoinProgram) -> String {
    let mut out = String::new();
    for s in &prog.statements {
        if let Some(l) = s.label {
            write!(out, "({l}) ").unwrap();
        }
        let (t, o) = (&h.edge(s.target).name, &h.edge(s.other).name);
        writeln!(out, "{t} := {t} <| {o}").unwrap();
    }
    out
}

pub fn parse_program(h: &Hypergraph, text: &str) -> Result<SemijoinProgram> {
    let mut statements = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let bad = |message: String| Error::Parse { line, message };
        let mut rest = raw.split('#').next().unwrap().trim();
        if rest.is_empty() {
            continue;
        }
        let mut label = None;
        if let Some(after) = rest.strip_prefix('(') {
            let (l, tail) = after
                .split_once(')')
                .ok_or_else(|| bad("unclosed label".into()))?;
            label = Some(
                l.trim()
                    .parse::<i64>()
                    .map_err(|_| bad(format!("label {l:?} is not an integer")))?,
            );
            rest = tail.trim();
        }
        let (lhs, rhs) = rest
            .split_once(":=")
            .ok_or_else(|| bad("expected `Ri := Ri <| Rj`".into()))?;
        let (first, second) = rhs
            .split_once("<|")
            .ok_or_else(|| bad("expected `<|` on the right-hand side".into()))?;
        let resolve = |name: &str| {
            h.index_of(name.trim())
                .ok_or_else(|| bad(format!("unknown relation {:?}", name.trim())))
        };
        let (target, first, other) = (resolve(lhs)?, resolve(first)?, resolve(second)?);
        if target != first {
            return Err(bad(format!(
                "assignment target {} must equal the first operand {}",
                lhs.trim(),
                h.edge(first).name
            )));
        }
        if target == other {
            return Err(bad("a relation cannot be semijoined with itself".into()));
        }
        statements.push(Statement { target, other, label });
    }
    Ok(SemijoinProgram { statements })
}
