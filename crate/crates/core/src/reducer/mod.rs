//! Semijoin programs: compilation of full reducers, traced execution,
//! global-witness folding and randomized verification.

mod program;
mod verify;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::krelation::{witness_join, KRel};
use crate::schema::{Hypergraph, RIOrdering};
use crate::semijoin::SemijoinImpl;

pub use program::{
    compile_full_reducer, compile_with_ordering, format_program, parse_program, SemijoinProgram,
    Statement,
};
pub use verify::{verify_full_reducer, CheckOutcome, ReductionReport, TrialOutcome, VerifyOptions};

/// Snapshot after one statement.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    pub statement: Statement,
    /// The assigned relation after the statement.
    pub relation: KRel,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExecutionTrace {
    pub initial: Vec<KRel>,
    pub steps: Vec<TraceStep>,
    pub outputs: Vec<KRel>,
}

impl ExecutionTrace {
    pub fn to_json(&self, h: &Hypergraph) -> Value {
        let rels = |rs: &[KRel]| -> Value {
            h.edges()
                .iter()
                .zip(rs)
                .map(|(e, r)| (e.name.clone(), r.to_json_value()))
                .collect::<serde_json::Map<_, _>>()
                .into()
        };
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| {
                json!({
                    "label": s.statement.label,
                    "target": h.edge(s.statement.target).name,
                    "other": h.edge(s.statement.other).name,
                    "relation": s.relation.to_json_value(),
                })
            })
            .collect();
        json!({ "initial": rels(&self.initial), "steps": steps, "outputs": rels(&self.outputs) })
    }

    /// Re-executes the recorded statements on the initial relations and
    /// compares each snapshot.
    pub fn replays(&self, h: &Hypergraph, s: &SemijoinImpl) -> Result<bool> {
        let prog = SemijoinProgram::new(self.steps.iter().map(|st| st.statement).collect());
        Ok(execute(h, &prog, &self.initial, s)? == *self)
    }
}

fn check_inputs(h: &Hypergraph, rels: &[KRel]) -> Result<()> {
    if rels.len() != h.len() {
        return Err(Error::Contract(format!(
            "{} relations given for {} hyperedges",
            rels.len(),
            h.len()
        )));
    }
    for (e, r) in h.edges().iter().zip(rels) {
        if r.attrs() != &e.attrs {
            return Err(Error::Attribute(format!(
                "relation for {} has attributes {}, expected {}",
                e.name,
                r.attrs(),
                e.attrs
            )));
        }
    }
    Ok(())
}

/// Runs the statements in order; `rels[i]` is the relation of hyperedge `i`.
pub fn execute(
    h: &Hypergraph,
    prog: &SemijoinProgram,
    rels: &[KRel],
    s: &SemijoinImpl,
) -> Result<ExecutionTrace> {
    check_inputs(h, rels)?;
    prog.validate(h.len())?;
    let mut env = rels.to_vec();
    let mut steps = Vec::with_capacity(prog.len());
    for (i, st) in prog.statements.iter().enumerate() {
        let next = s
            .apply(&env[st.target], &env[st.other])
            .map_err(|e| Error::Statement { index: i, message: e.to_string() })?;
        env[st.target] = next.clone();
        steps.push(TraceStep { statement: *st, relation: next });
    }
    Ok(ExecutionTrace {
        initial: rels.to_vec(),
        steps,
        outputs: env,
    })
}

/// Left fold `W₁ = R_{Y₁}`, `W_{k+1} = witness_join(W_k, R_{Y_{k+1}})` along
/// the ordering; `rels` is indexed by hyperedge. Every step and the final
/// witness are validated against the inputs.
pub fn build_global_witness(ord: &RIOrdering, rels: &[KRel]) -> Result<KRel> {
    if ord.len() != rels.len() || ord.is_empty() {
        return Err(Error::Contract(format!(
            "ordering of length {} for {} relations",
            ord.len(),
            rels.len()
        )));
    }
    let mut w = rels[ord.order[0]].clone();
    for k in 1..ord.len() {
        let next = &rels[ord.order[k]];
        let step_err = |message: String| Error::FoldStep { step: k, message };
        let joined = witness_join(&w, next).map_err(|e| step_err(e.to_string()))?;
        if !joined.is_witness_for(&[&w, next])? {
            return Err(step_err("pair is not consistent".into()));
        }
        w = joined;
    }
    for (i, r) in rels.iter().enumerate() {
        if w.marginal(r.attrs())? != *r {
            return Err(Error::FoldStep {
                step: ord.len(),
                message: format!("marginal on relation {} differs", i + 1),
            });
        }
    }
    Ok(w)
}
