//! Property tests over the public API.

use ksemijoin::analysis::corpus::random_monoid;
use ksemijoin::analysis::{check_production_n2, transport_2x2, Verdict};
use ksemijoin::krelation::{consistent, gen_consistent_family, gen_random_krel};
use ksemijoin::reducer::{compile_full_reducer, execute, format_program, parse_program};
use ksemijoin::semijoin::{audit_axioms, AxiomVerdict, ConsistencyOracle, SemijoinKind};
use ksemijoin::{AttrSet, Elem, Hypergraph, KRel, MonoidRef, SemijoinImpl};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn builtins() -> Vec<MonoidRef> {
    vec![
        MonoidRef::boolean(),
        MonoidRef::bag(),
        MonoidRef::fuzzy_max(),
        MonoidRef::nonneg_real(),
        MonoidRef::min_tropical(),
        MonoidRef::powerset(&["a", "b", "c"]).unwrap(),
        MonoidRef::n2(),
        MonoidRef::numerical_semigroup(&[3, 5]).unwrap(),
    ]
}

fn monoid_strategy() -> impl Strategy<Value = MonoidRef> {
    prop::sample::select(builtins())
}

fn leq(m: &MonoidRef, a: &Elem, b: &Elem) -> bool {
    m.leq(a, b).unwrap().is_some()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn monoid_laws(m in monoid_strategy(), i in 0usize..64, j in 0usize..64, k in 0usize..64) {
        let pool = m.sample_pool();
        let (a, b, c) = (pool[i % pool.len()], pool[j % pool.len()], pool[k % pool.len()]);
        let z = m.zero();
        prop_assert_eq!(m.add(&a, &z).unwrap(), a);
        prop_assert_eq!(m.add(&a, &b).unwrap(), m.add(&b, &a).unwrap());
        let l = m.add(&m.add(&a, &b).unwrap(), &c).unwrap();
        let r = m.add(&a, &m.add(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
        // Positivity: nonzero summands never sum to zero.
        prop_assert!(!m.is_zero(&m.add(&a, &b).unwrap()));
        // a ⊑ a + b, with a witness that replays.
        let s = m.add(&a, &b).unwrap();
        let w = m.leq(&a, &s).unwrap().unwrap();
        prop_assert_eq!(m.add(&a, &w).unwrap(), s);
    }

    #[test]
    fn random_tables_are_monoids(seed in any::<u64>(), n in 2usize..10) {
        let m = random_monoid(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let els = m.elements().unwrap();
        for a in &els {
            for b in &els {
                let ab = m.add(a, b).unwrap();
                prop_assert_eq!(ab, m.add(b, a).unwrap());
                prop_assert!(!m.is_zero(&ab) || (m.is_zero(a) && m.is_zero(b)));
                for c in &els {
                    prop_assert_eq!(m.add(&ab, c).unwrap(), m.add(a, &m.add(b, c).unwrap()).unwrap());
                }
            }
        }
        let rep = check_production_n2(&m);
        prop_assert!(rep.replay(&m));
    }

    #[test]
    fn production_contract(m in monoid_strategy(), seed in any::<u64>()) {
        // The production_solve contract on monoids with the property.
        prop_assume!(m.has_production_property());
        let pool = m.sample_pool();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::Rng;
        let n = rng.random_range(1..5);
        let caps: Vec<Elem> = (0..n).map(|_| pool[rng.random_range(0..pool.len())]).collect();
        let total = caps.iter().fold(m.zero(), |s, c| m.add(&s, c).unwrap());
        // b below the total: total minus some part, or any pool element.
        let b = if rng.random_bool(0.5) { caps[0] } else { pool[rng.random_range(0..pool.len())] };
        match m.production_solve(&b, &caps).unwrap() {
            Some(d) => {
                prop_assert_eq!(d.len(), caps.len());
                for (di, ci) in d.iter().zip(&caps) {
                    prop_assert!(leq(&m, di, ci));
                }
                let s = d.iter().fold(m.zero(), |s, x| m.add(&s, x).unwrap());
                prop_assert_eq!(s, b);
            }
            None => prop_assert!(!leq(&m, &b, &total)),
        }
    }

    #[test]
    fn marginal_identities(m in monoid_strategy(), seed in any::<u64>(), ymask in 0u32..16, zmask in 0u32..16) {
        let x = AttrSet::uniform(&["A", "B", "C", "D"], &["0", "1", "2"]).unwrap();
        let r = gen_random_krel(&m, &x, 12, &m.sample_pool(), seed).unwrap();
        let names = ["A", "B", "C", "D"];
        let pick = |mask: u32| -> Vec<&str> { (0..4).filter(|b| mask >> b & 1 == 1).map(|b| names[b]).collect() };
        let y = x.restrict(&pick(ymask)).unwrap();
        let z = x.restrict(&pick(ymask & zmask)).unwrap();
        let ry = r.marginal(&y).unwrap();
        prop_assert_eq!(ry.marginal(&z).unwrap(), r.marginal(&z).unwrap());
        let positions: Vec<usize> = y.names().iter().map(|n| x.position(n).unwrap()).collect();
        let mut projected: Vec<_> = r.support().map(|t| t.project(&positions)).collect();
        projected.sort();
        projected.dedup();
        prop_assert_eq!(ry.support().cloned().collect::<Vec<_>>(), projected);
    }

    #[test]
    fn semijoin_axioms(m in monoid_strategy(), seed in any::<u64>(), consistent_pair in any::<bool>()) {
        let Ok(s) = SemijoinImpl::for_monoid(&m) else { return Ok(()) };
        let h = Hypergraph::uniform(&[("R", &["A", "B"][..]), ("T", &["B", "C"])], &["0", "1", "2"]).unwrap();
        let pool = m.sample_pool();
        let (r, t, oracle) = if consistent_pair {
            let fam = gen_consistent_family(&m, &h, 8, &pool, seed).unwrap();
            (fam[0].clone(), fam[1].clone(), ConsistencyOracle::Known(true))
        } else {
            let r = gen_random_krel(&m, &h.edge(0).attrs, 6, &pool, seed).unwrap();
            let t = gen_random_krel(&m, &h.edge(1).attrs, 6, &pool, seed ^ 1).unwrap();
            (r, t, ConsistencyOracle::Decide(Default::default()))
        };
        let rep = audit_axioms(&s, &r, &t, oracle).unwrap();
        prop_assert!(rep.passed(), "{}", rep.to_json());
        prop_assert_ne!(&rep.p2, &AxiomVerdict::NotApplicable);
        if consistent_pair {
            prop_assert_eq!(&rep.p1, &AxiomVerdict::Holds);
        }
    }

    #[test]
    fn strict_production_axioms(seed in any::<u64>()) {
        for m in [MonoidRef::bag(), MonoidRef::n2(), MonoidRef::nonneg_real()] {
            let s = SemijoinImpl::new(&m, SemijoinKind::ProductionStrict).unwrap();
            let x = AttrSet::uniform(&["A", "B"], &["0", "1"]).unwrap();
            let y = AttrSet::uniform(&["B", "C"], &["0", "1"]).unwrap();
            let r = gen_random_krel(&m, &x, 4, &m.sample_pool(), seed).unwrap();
            let t = gen_random_krel(&m, &y, 4, &m.sample_pool(), seed.rotate_left(7)).unwrap();
            let rep = audit_axioms(&s, &r, &t, ConsistencyOracle::Decide(Default::default())).unwrap();
            prop_assert!(rep.passed(), "{}", rep.to_json());
        }
    }

    #[test]
    fn witness_production_is_coherent(seed in any::<u64>()) {
        for m in [MonoidRef::bag(), MonoidRef::n2()] {
            let x = AttrSet::uniform(&["A", "B"], &["0", "1"]).unwrap();
            let y = AttrSet::uniform(&["B", "C"], &["0", "1"]).unwrap();
            let r = gen_random_krel(&m, &x, 4, &m.sample_pool(), seed).unwrap();
            let t = gen_random_krel(&m, &y, 4, &m.sample_pool(), !seed).unwrap();
            let w = ksemijoin::semijoin::witness_production(&r, &t, &Default::default()).unwrap();
            let out = ksemijoin::semijoin::semijoin_production(&r, &t).unwrap();
            prop_assert_eq!(w.marginal(&x).unwrap(), out);
            if consistent(&r, &t, &Default::default()).unwrap().consistent {
                prop_assert!(w.is_witness_for(&[&r, &t]).unwrap());
            }
        }
    }

    #[test]
    fn lattice_coherence(seed in any::<u64>()) {
        for m in [MonoidRef::boolean(), MonoidRef::fuzzy_max(), MonoidRef::min_tropical(), MonoidRef::powerset(&["a", "b"]).unwrap()] {
            let x = AttrSet::uniform(&["A", "B"], &["0", "1"]).unwrap();
            let y = AttrSet::uniform(&["B", "C"], &["0", "1"]).unwrap();
            let r = gen_random_krel(&m, &x, 4, &m.sample_pool(), seed).unwrap();
            let t = gen_random_krel(&m, &y, 4, &m.sample_pool(), seed.wrapping_add(1)).unwrap();
            let w = ksemijoin::krelation::lattice_join(&r, &t).unwrap();
            prop_assert_eq!(w.marginal(&x).unwrap(), ksemijoin::semijoin::semijoin_lattice(&r, &t).unwrap());
        }
    }

    #[test]
    fn transport_matrices_are_exact(b1 in 0u64..30, b2 in 0u64..30, c1 in 0u64..30) {
        let m = MonoidRef::bag();
        prop_assume!(c1 <= b1 + b2);
        let c2 = b1 + b2 - c1;
        let t = transport_2x2(&m, &Elem::Nat(b1), &Elem::Nat(b2), &Elem::Nat(c1), &Elem::Nat(c2)).unwrap().unwrap();
        prop_assert!(t.satisfies(&m));
    }

    #[test]
    fn reducer_invariants(m in prop::sample::select(vec![MonoidRef::bag(), MonoidRef::boolean(), MonoidRef::fuzzy_max(), MonoidRef::min_tropical()]), seed in any::<u64>(), n in 1usize..5) {
        let h = Hypergraph::path(n, &["0", "1", "2"]).unwrap();
        let s = SemijoinImpl::for_monoid(&m).unwrap();
        let pool = m.sample_pool();
        let rels: Vec<KRel> = h.edges().iter().enumerate()
            .map(|(i, e)| gen_random_krel(&m, &e.attrs, 6, &pool, seed.wrapping_add(i as u64)).unwrap())
            .collect();
        let prog = compile_full_reducer(&h).unwrap();
        prop_assert_eq!(prog.len(), 2 * (n - 1));
        prop_assert_eq!(&parse_program(&h, &format_program(&h, &prog)).unwrap(), &prog);
        let trace = execute(&h, &prog, &rels, &s).unwrap();
        prop_assert!(trace.replays(&h, &s).unwrap());
        // Monotone shrinking.
        let mut env = rels.clone();
        for step in &trace.steps {
            prop_assert!(step.relation.rel_leq(&env[step.statement.target]).unwrap());
            env[step.statement.target] = step.relation.clone();
        }
        for w in trace.outputs.windows(2) {
            prop_assert!(w[0].inner_consistent(&w[1]).unwrap());
        }
        let again = execute(&h, &prog, &trace.outputs, &s).unwrap();
        prop_assert_eq!(&again.outputs, &trace.outputs);
        let g = ksemijoin::krelation::globally_consistent(&trace.outputs, &Default::default()).unwrap();
        prop_assert!(g.consistent);
    }

    #[test]
    fn csv_round_trip(m in monoid_strategy(), seed in any::<u64>()) {
        let x = AttrSet::uniform(&["A", "B"], &["x", "y", "z"]).unwrap();
        let r = gen_random_krel(&m, &x, 9, &m.sample_pool(), seed).unwrap();
        let back = KRel::from_csv(&m, Some(&x), &r.to_csv()).unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn codec_round_trip(m in monoid_strategy(), i in 0usize..64) {
        let pool = m.sample_pool();
        let e = pool[i % pool.len()];
        prop_assert_eq!(m.parse_elem(&m.format_elem(&e)).unwrap(), e);
    }
}

#[test]
fn production_verdicts_replay_on_corpus() {
    for m in ksemijoin::analysis::corpus::random_corpus(17, 150, 7) {
        let rep = check_production_n2(&m);
        assert!(rep.replay(&m));
        if rep.verdict == Verdict::Holds {
            assert!(m.has_production_property());
        }
    }
}
