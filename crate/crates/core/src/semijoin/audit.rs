//! Evaluates P1–P4 on a concrete input pair.

use serde::Serialize;

use super::SemijoinImpl;
use crate::error::{Error, Result};
use crate::krelation::{consistent, AttrSet, ConsistencyOptions, KRel, Tuple};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum AxiomVerdict {
    Holds,
    Fails {
        /// Offending tuple, rendered with domain values.
        tuple: Option<String>,
        detail: String,
    },
    /// The axiom's antecedent is false on this pair.
    NotApplicable,
    /// The consistency oracle could not decide.
    Skipped { reason: String },
}

impl AxiomVerdict {
    pub fn is_failure(&self) -> bool {
        matches!(self, AxiomVerdict::Fails { .. })
    }
}

/// How P1's antecedent is settled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConsistencyOracle {
    /// The caller knows the answer, e.g. the pair was generated as marginals of one relation.
    Known(bool),
    /// Decide with [`consistent`].
    Decide(ConsistencyOptions),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomReport {
    pub semijoin: SemijoinImpl,
    pub oracle: ConsistencyOracle,
    pub r: KRel,
    pub t: KRel,
    pub output: KRel,
    pub p1: AxiomVerdict,
    pub p2: AxiomVerdict,
    pub p3: AxiomVerdict,
    pub p4: AxiomVerdict,
}

impl AxiomReport {
    pub fn verdicts(&self) -> [(&'static str, &AxiomVerdict); 4] {
        [("P1", &self.p1), ("P2", &self.p2), ("P3", &self.p3), ("P4", &self.p4)]
    }

    /// No axiom fails. Skipped and inapplicable axioms do not count as failures.
    pub fn passed(&self) -> bool {
        self.verdicts().iter().all(|(_, v)| !v.is_failure())
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.verdicts()
            .iter()
            .filter(|(_, v)| v.is_failure())
            .map(|(n, _)| *n)
            .collect()
    }

    /// Reruns the audit on the stored inputs.
    pub fn replay(&self) -> Result<AxiomReport> {
        audit_axioms(&self.semijoin, &self.r, &self.t, self.oracle)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "semijoin": self.semijoin.name(),
            "r": self.r.to_json_value(),
            "t": self.t.to_json_value(),
            "output": self.output.to_json_value(),
            "P1": self.p1,
            "P2": self.p2,
            "P3": self.p3,
            "P4": self.p4,
        })
    }
}

fn describe(attrs: &AttrSet, t: &Tuple) -> String {
    let vals = attrs.format_tuple(t);
    let parts: Vec<String> = attrs
        .names()
        .iter()
        .zip(vals)
        .map(|(n, v)| format!("{n}={v}"))
        .collect();
    format!("({})", parts.join(","))
}

/// First tuple in the union of supports where the predicate fails.
fn first_violation(
    a: &KRel,
    b: &KRel,
    ok: impl Fn(&crate::monoid::Elem, &crate::monoid::Elem) -> bool,
) -> Option<Tuple> {
    let mut keys: Vec<&Tuple> = a.support().chain(b.support()).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter().find(|t| !ok(&a.get(t), &b.get(t))).cloned()
}

fn verdict(found: Option<Tuple>, attrs: &AttrSet, detail: &str) -> AxiomVerdict {
    match found {
        None => AxiomVerdict::Holds,
        Some(t) => AxiomVerdict::Fails {
            tuple: Some(describe(attrs, &t)),
            detail: detail.to_string(),
        },
    }
}

pub fn audit_axioms(
    s: &SemijoinImpl,
    r: &KRel,
    t: &KRel,
    oracle: ConsistencyOracle,
) -> Result<AxiomReport> {
    let m = s.monoid().clone();
    let out = s.apply(r, t)?;
    let z = r.attrs().intersection(t.attrs());
    let (rz, tz, oz) = (r.marginal(&z)?, t.marginal(&z)?, out.marginal(&z)?);

    let is_consistent = match oracle {
        ConsistencyOracle::Known(b) => Ok(b),
        ConsistencyOracle::Decide(opts) => match consistent(r, t, &opts) {
            Ok(res) => Ok(res.consistent),
            Err(e @ (Error::BudgetExhausted { .. } | Error::Unsupported { .. })) => Err(e.to_string()),
            Err(e) => return Err(e),
        },
    };
    let p1 = match is_consistent {
        Ok(true) => verdict(
            first_violation(&out, r, |a, b| a == b),
            r.attrs(),
            "output differs from R on a consistent pair",
        ),
        Ok(false) => AxiomVerdict::NotApplicable,
        Err(reason) => AxiomVerdict::Skipped { reason },
    };
    let p2 = verdict(
        first_violation(&out, r, |a, b| m.is_leq(a, b)),
        r.attrs(),
        "output is not below R",
    );
    let p3 = verdict(
        first_violation(&oz, &tz, |a, b| m.is_leq(a, b)),
        &z,
        "output marginal is not below T's marginal",
    );
    let p4 = if tz.rel_leq(&rz)? {
        verdict(
            first_violation(&oz, &tz, |a, b| a == b),
            &z,
            "output marginal differs from T's marginal",
        )
    } else {
        AxiomVerdict::NotApplicable
    };
    Ok(AxiomReport {
        semijoin: s.clone(),
        oracle,
        r: r.clone(),
        t: t.clone(),
        output: out,
        p1,
        p2,
        p3,
        p4,
    })
}
