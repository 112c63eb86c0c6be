//! Randomized full-reducer verification.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::{build_global_witness, compile_full_reducer, execute, SemijoinProgram};
use crate::error::{Error, Result};
use crate::krelation::{brute_force_global, gen_consistent_family, random_krel, ConsistencyOptions, KRel};
use crate::monoid::Tri;
use crate::schema::{gyo_order, Hypergraph, RIOrdering};
use crate::semijoin::SemijoinImpl;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub trials: usize,
    pub seed: u64,
    /// Maximum support per generated relation.
    pub max_support: usize,
    pub consistency: ConsistencyOptions,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            trials: 500,
            seed: 0,
            max_support: 8,
            consistency: ConsistencyOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", content = "detail", rename_all = "kebab-case")]
pub enum CheckOutcome {
    Pass,
    Fail(String),
    Skipped(String),
}

impl CheckOutcome {
    pub fn is_fail(&self) -> bool {
        matches!(self, CheckOutcome::Fail(_))
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self, CheckOutcome::Skipped(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialOutcome {
    pub trial: usize,
    pub seed: u64,
    pub global: CheckOutcome,
    pub parent_agreement: CheckOutcome,
    pub idempotent: CheckOutcome,
    /// Total support of the reduced relations; zero means the reducer emptied everything.
    pub output_support: usize,
    /// Stored when any check fails.
    pub inputs: Option<Vec<KRel>>,
}

impl TrialOutcome {
    pub fn failed(&self) -> bool {
        self.global.is_fail() || self.parent_agreement.is_fail() || self.idempotent.is_fail()
    }

    pub fn skipped(&self) -> bool {
        !self.failed()
            && (self.global.is_skipped() || self.parent_agreement.is_skipped() || self.idempotent.is_skipped())
    }
}

#[derive(Clone, Debug)]
pub struct ReductionReport {
    pub schema: Hypergraph,
    pub semijoin: SemijoinImpl,
    pub ordering: RIOrdering,
    pub program: SemijoinProgram,
    pub options: VerifyOptions,
    pub trials: Vec<TrialOutcome>,
}

impl ReductionReport {
    pub fn passed(&self) -> usize {
        self.trials.iter().filter(|t| !t.failed() && !t.skipped()).count()
    }

    pub fn failures(&self) -> Vec<&TrialOutcome> {
        self.trials.iter().filter(|t| t.failed()).collect()
    }

    pub fn skipped(&self) -> usize {
        self.trials.iter().filter(|t| t.skipped()).count()
    }

    /// Trials whose reduced relations are not all empty.
    pub fn nontrivial(&self) -> usize {
        self.trials.iter().filter(|t| t.output_support > 0).count()
    }

    pub fn all_passed(&self) -> bool {
        self.failures().is_empty()
    }

    /// Reruns the checks on a stored input collection.
    pub fn replay(&self, inputs: &[KRel]) -> Result<TrialOutcome> {
        run_checks(self, 0, 0, inputs.to_vec())
    }

    pub fn to_json(&self) -> Value {
        let h = &self.schema;
        let trials: Vec<Value> = self
            .trials
            .iter()
            .filter(|t| t.failed() || t.skipped())
            .map(|t| {
                json!({
                    "trial": t.trial,
                    "seed": t.seed,
                    "global": t.global,
                    "parent_agreement": t.parent_agreement,
                    "idempotent": t.idempotent,
                    "inputs": t.inputs.as_ref().map(|rs| {
                        h.edges()
                            .iter()
                            .zip(rs)
                            .map(|(e, r)| (e.name.clone(), r.to_json_value()))
                            .collect::<serde_json::Map<_, _>>()
                    }),
                })
            })
            .collect();
        json!({
            "schema": h.to_string(),
            "semijoin": self.semijoin.name(),
            "ordering": self.ordering.describe(h),
            "program": super::format_program(h, &self.program),
            "seed": self.options.seed,
            "trials": self.trials.len(),
            "passed": self.passed(),
            "failed": self.failures().len(),
            "skipped": self.skipped(),
            "nontrivial": self.nontrivial(),
            "reported": trials,
        })
    }
}

fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed ^ (trial as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Half of the trials are independent random relations; the other half
/// start from a consistent family and perturb one relation.
fn gen_inputs(h: &Hypergraph, s: &SemijoinImpl, opts: &VerifyOptions, seed: u64) -> Result<Vec<KRel>> {
    let m = s.monoid();
    let pool = m.sample_pool();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if rng.random_bool(0.5) {
        return h
            .edges()
            .iter()
            .map(|e| random_krel(&mut rng, m, &e.attrs, opts.max_support, &pool))
            .collect();
    }
    let mut rels = gen_consistent_family(m, h, opts.max_support, &pool, rng.random())?;
    let i = rng.random_range(0..rels.len());
    let attrs = rels[i].attrs().clone();
    let tuples = attrs.all_tuples();
    let t = tuples[rng.random_range(0..tuples.len())].clone();
    let e = pool[rng.random_range(0..pool.len())];
    if rng.random_bool(0.5) {
        rels[i].set(t, e)?;
    } else {
        rels[i].add_to(t, e)?;
    }
    Ok(rels)
}

fn check_global(r: &ReductionReport, outs: &[KRel]) -> CheckOutcome {
    let m = r.semijoin.monoid();
    if m.capabilities().icp == Tri::Yes {
        return match build_global_witness(&r.ordering, outs) {
            Ok(_) => CheckOutcome::Pass,
            Err(e) => CheckOutcome::Fail(e.to_string()),
        };
    }
    let refs: Vec<&KRel> = outs.iter().collect();
    match brute_force_global(&refs, &r.options.consistency) {
        Ok(Some(_)) => CheckOutcome::Pass,
        Ok(None) => CheckOutcome::Fail("outputs are not globally consistent".into()),
        Err(e) => CheckOutcome::Skipped(e.to_string()),
    }
}

/// `R*_k[X_{j_k} ∩ X_k] = R*_{j_k}[X_{j_k} ∩ X_k]` for every position `k ≥ 2`.
fn check_parent_agreement(r: &ReductionReport, outs: &[KRel]) -> Result<CheckOutcome> {
    for k in 1..r.ordering.len() {
        let (a, b) = (&outs[r.ordering.order[k]], &outs[r.ordering.parent_edge(k).unwrap()]);
        if !a.inner_consistent(b)? {
            return Ok(CheckOutcome::Fail(format!(
                "position {} and its parent disagree on the shared attributes",
                k + 1
            )));
        }
    }
    Ok(CheckOutcome::Pass)
}

fn run_checks(r: &ReductionReport, trial: usize, seed: u64, inputs: Vec<KRel>) -> Result<TrialOutcome> {
    let trace = execute(&r.schema, &r.program, &inputs, &r.semijoin)?;
    let outs = trace.outputs;
    let global = check_global(r, &outs);
    let parent_agreement = check_parent_agreement(r, &outs)?;
    let again = execute(&r.schema, &r.program, &outs, &r.semijoin)?;
    let idempotent = if again.outputs == outs {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail("a second run changed the outputs".into())
    };
    let mut out = TrialOutcome {
        trial,
        seed,
        global,
        parent_agreement,
        idempotent,
        output_support: outs.iter().map(KRel::len).sum(),
        inputs: None,
    };
    if out.failed() || out.skipped() {
        out.inputs = Some(inputs);
    }
    Ok(out)
}

/// Runs `opts.trials` seeded trials of the compiled full reducer. Trials run
/// in parallel; the report is independent of scheduling.
pub fn verify_full_reducer(
    h: &Hypergraph,
    s: &SemijoinImpl,
    opts: &VerifyOptions,
) -> Result<ReductionReport> {
    let m = s.monoid();
    if m.capabilities().icp != Tri::Yes && m.tabulated().is_none() {
        return Err(Error::Unsupported {
            monoid: m.name(),
            capability: "full-reducer verification",
            detail: Some("needs the inner consistency property or a finite carrier".into()),
        });
    }
    let ordering = gyo_order(h)?;
    let program = compile_full_reducer(h)?;
    let mut report = ReductionReport {
        schema: h.clone(),
        semijoin: s.clone(),
        ordering,
        program,
        options: *opts,
        trials: Vec::new(),
    };
    let trials = (0..opts.trials)
        .into_par_iter()
        .map(|i| {
            let seed = trial_seed(opts.seed, i);
            run_checks(&report, i, seed, gen_inputs(h, s, opts, seed)?)
        })
        .collect::<Result<Vec<_>>>()?;
    report.trials = trials;
    Ok(report)
}
