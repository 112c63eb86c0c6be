use super::*;
use crate::krelation::AttrSet;

fn attrs(names: &[&str], domain: &[&str]) -> AttrSet {
    AttrSet::uniform(names, domain).unwrap()
}

fn nat(n: u64) -> Elem {
    Elem::Nat(n)
}

/// R(A,B) = {(1,2):1, (2,2):1}, T(B,C) = {(2,1):1, (2,2):1}.
fn bag_pair() -> (KRel, KRel) {
    let m = MonoidRef::bag();
    let d = ["1", "2"];
    let r = KRel::from_rows(&m, &attrs(&["A", "B"], &d), &[(&["1", "2"], nat(1)), (&["2", "2"], nat(1))]).unwrap();
    let t = KRel::from_rows(&m, &attrs(&["B", "C"], &d), &[(&["2", "1"], nat(1)), (&["2", "2"], nat(1))]).unwrap();
    (r, t)
}

#[test]
fn bag_pair_is_kept_by_production() {
    let (r, t) = bag_pair();
    let s = SemijoinImpl::new(r.monoid(), SemijoinKind::Production).unwrap();
    assert_eq!(s.apply(&r, &t).unwrap(), r);
    let join = SemijoinImpl::new(r.monoid(), SemijoinKind::BagJoinProjection).unwrap();
    let out = join.apply(&r, &t).unwrap();
    let u = r.attrs();
    assert_eq!(out.get(&u.tuple(&["1", "2"]).unwrap()), nat(2));
    assert_eq!(out.get(&u.tuple(&["2", "2"]).unwrap()), nat(2));
}

#[test]
fn bag_join_projection_fails_p1() {
    let (r, t) = bag_pair();
    let join = SemijoinImpl::new(r.monoid(), SemijoinKind::BagJoinProjection).unwrap();
    let rep = audit_axioms(&join, &r, &t, ConsistencyOracle::Decide(Default::default())).unwrap();
    assert!(rep.p1.is_failure());
    assert_eq!(rep.replay().unwrap(), rep);
    let ok = SemijoinImpl::for_monoid(r.monoid()).unwrap();
    let rep = audit_axioms(&ok, &r, &t, ConsistencyOracle::Decide(Default::default())).unwrap();
    assert!(rep.passed());
    assert_eq!(rep.p1, AxiomVerdict::Holds);
}

fn split_instance() -> (KRel, KRel) {
    let m = MonoidRef::bag();
    let r = KRel::from_rows(
        &m,
        &AttrSet::new([
            crate::krelation::Attribute::new("U", &["u1", "u2"]),
            crate::krelation::Attribute::new("V", &["v"]),
        ])
        .unwrap(),
        &[(&["u1", "v"], nat(3)), (&["u2", "v"], nat(3))],
    )
    .unwrap();
    let t = KRel::from_rows(
        &m,
        &AttrSet::new([
            crate::krelation::Attribute::new("V", &["v"]),
            crate::krelation::Attribute::new("C", &["c1"]),
        ])
        .unwrap(),
        &[(&["c1", "v"], nat(5))],
    )
    .unwrap();
    (r, t)
}

#[test]
fn production_split_branch() {
    let (r, t) = split_instance();
    let out = semijoin_production(&r, &t).unwrap();
    let z = r.attrs().intersection(t.attrs());
    assert!(out.rel_leq(&r).unwrap());
    assert_eq!(out.marginal(&z).unwrap(), t.marginal(&z).unwrap());
    // Greedy split.
    assert_eq!(out.get(&r.attrs().tuple(&["u1", "v"]).unwrap()), nat(3));
    assert_eq!(out.get(&r.attrs().tuple(&["u2", "v"]).unwrap()), nat(2));

    let w = witness_production(&r, &t, &Default::default()).unwrap();
    assert_eq!(w.marginal(r.attrs()).unwrap(), out);
    assert_eq!(w.marginal(&z).unwrap(), t.marginal(&z).unwrap());
    let xy = w.attrs().clone();
    assert_eq!(w.get(&xy.tuple(&["c1", "u1", "v"]).unwrap()), nat(3));
    assert_eq!(w.get(&xy.tuple(&["c1", "u2", "v"]).unwrap()), nat(2));
}

#[test]
fn production_empty_branch() {
    let m = MonoidRef::bag();
    let a = attrs(&["A"], &["a"]);
    let r = KRel::from_rows(&m, &a, &[(&["a"], nat(1))]).unwrap();
    let t = KRel::from_rows(&m, &a, &[(&["a"], nat(2))]).unwrap();
    assert!(semijoin_production(&r, &t).unwrap().is_empty());
    assert!(semijoin_production_strict(&r, &t).unwrap().is_empty());
    assert!(witness_production(&r, &t, &Default::default()).unwrap().is_empty());
}

#[test]
fn consistent_pair_witness() {
    let (r, t) = bag_pair();
    let w = witness_production(&r, &t, &Default::default()).unwrap();
    assert!(w.is_witness_for(&[&r, &t]).unwrap());
}

#[test]
fn lattice_examples() {
    let p = MonoidRef::powerset(&["1", "2", "3"]).unwrap();
    let a = attrs(&["A"], &["a"]);
    let r = KRel::from_rows(&p, &a, &[(&["a"], p.parse_elem("{1,2}").unwrap())]).unwrap();
    let t = KRel::from_rows(&p, &a, &[(&["a"], p.parse_elem("{2,3}").unwrap())]).unwrap();
    let out = semijoin_lattice(&r, &t).unwrap();
    assert_eq!(out.get(&a.tuple(&["a"]).unwrap()), p.parse_elem("{2}").unwrap());

    let f = MonoidRef::fuzzy_max();
    let ab = AttrSet::new([
        crate::krelation::Attribute::new("A", &["a"]),
        crate::krelation::Attribute::new("B", &["b"]),
    ])
    .unwrap();
    let r = KRel::from_rows(&f, &a, &[(&["a"], Elem::real(0.7))]).unwrap();
    let t = KRel::from_rows(&f, &ab, &[(&["a", "b"], Elem::real(0.4))]).unwrap();
    let out = semijoin_lattice(&r, &t).unwrap();
    assert_eq!(out.get(&a.tuple(&["a"]).unwrap()), Elem::real(0.4));
}

#[test]
fn lattice_requires_meet() {
    let (r, t) = bag_pair();
    assert!(semijoin_lattice(&r, &t).is_err());
    assert!(SemijoinImpl::new(&MonoidRef::bag(), SemijoinKind::Lattice).is_err());
    let k35 = MonoidRef::numerical_semigroup(&[3, 5]).unwrap();
    assert!(matches!(
        SemijoinImpl::for_monoid(&k35),
        Err(Error::Unsupported { .. })
    ));
}

#[test]
fn n2_inner_consistent_but_not_consistent() {
    // N2 = {0,1,2} with 1+1 = 2+1 = 2+2 = 2.
    let n2 = MonoidRef::n2();
    let e = |s: &str| n2.parse_elem(s).unwrap();
    let d = ["0", "1"];
    let r = KRel::from_rows(&n2, &attrs(&["A", "B"], &d), &[(&["0", "0"], e("1")), (&["1", "0"], e("1"))]).unwrap();
    let t = KRel::from_rows(&n2, &attrs(&["B", "C"], &d), &[(&["0", "0"], e("1")), (&["0", "1"], e("2"))]).unwrap();
    assert!(r.inner_consistent(&t).unwrap());
    assert!(!consistent(&r, &t, &Default::default()).unwrap().consistent);
    let s = SemijoinImpl::for_monoid(&n2).unwrap();
    assert_eq!(s.kind(), SemijoinKind::Production);
    assert_eq!(s.apply(&r, &t).unwrap(), r);
    let w = witness_production(&r, &t, &Default::default()).unwrap();
    assert_eq!(w.marginal(r.attrs()).unwrap(), r);
    let rep = audit_axioms(&s, &r, &t, ConsistencyOracle::Decide(Default::default())).unwrap();
    assert!(rep.passed());
}

#[test]
fn boolean_agreement_small() {
    let m = MonoidRef::boolean();
    let d = ["0", "1"];
    let x = attrs(&["A", "B"], &d);
    let y = attrs(&["B", "C"], &d);
    let xt = x.all_tuples();
    let yt = y.all_tuples();
    for rm in 0u32..16 {
        for tm in 0u32..16 {
            let mut r = KRel::new(m.clone(), x.clone());
            let mut t = KRel::new(m.clone(), y.clone());
            for (i, tu) in xt.iter().enumerate() {
                if rm >> i & 1 == 1 {
                    r.set(tu.clone(), Elem::Bool(true)).unwrap();
                }
            }
            for (i, tu) in yt.iter().enumerate() {
                if tm >> i & 1 == 1 {
                    t.set(tu.clone(), Elem::Bool(true)).unwrap();
                }
            }
            let c = classical_semijoin(&r, &t).unwrap();
            assert_eq!(semijoin_lattice(&r, &t).unwrap(), c);
            assert_eq!(semijoin_production(&r, &t).unwrap(), c);
        }
    }
}

#[test]
fn mismatched_monoids_rejected() {
    let (r, _) = bag_pair();
    let s = SemijoinImpl::for_monoid(&MonoidRef::boolean()).unwrap();
    assert!(matches!(s.apply(&r, &r), Err(Error::MonoidMismatch { .. })));
}
