use super::*;
use crate::monoid::{Elem, MonoidRef};
use crate::schema::Hypergraph;

const D2: [&str; 2] = ["0", "1"];

fn b(m: &MonoidRef, attrs: &[&str], rows: &[[&str; 2]]) -> KRel {
    let a = AttrSet::uniform(attrs, &D2).unwrap();
    let rows: Vec<(&[&str], Elem)> = rows.iter().map(|r| (&r[..], Elem::Bool(true))).collect();
    KRel::from_rows(m, &a, &rows).unwrap()
}

/// R1(A,B) = {(0,0),(1,1)}, R2(B,C) = {(0,1),(1,0)}, R3(C,A) = {(0,0),(1,1)}.
fn triangle() -> Vec<KRel> {
    let m = MonoidRef::boolean();
    vec![
        b(&m, &["A", "B"], &[["0", "0"], ["1", "1"]]),
        b(&m, &["B", "C"], &[["0", "1"], ["1", "0"]]),
        b(&m, &["C", "A"], &[["0", "0"], ["1", "1"]]),
    ]
}

fn bag_pair() -> (KRel, KRel) {
    let m = MonoidRef::bag();
    let d = ["1", "2"];
    let r = KRel::from_rows(
        &m,
        &AttrSet::uniform(&["A", "B"], &d).unwrap(),
        &[(&["1", "2"], Elem::Nat(1)), (&["2", "2"], Elem::Nat(1))],
    )
    .unwrap();
    let t = KRel::from_rows(
        &m,
        &AttrSet::uniform(&["B", "C"], &d).unwrap(),
        &[(&["2", "1"], Elem::Nat(1)), (&["2", "2"], Elem::Nat(1))],
    )
    .unwrap();
    (r, t)
}

#[test]
fn attrsets_sorted_and_checked() {
    let a = AttrSet::uniform(&["C", "A", "B"], &D2).unwrap();
    assert_eq!(a.names(), vec!["A", "B", "C"]);
    assert!(AttrSet::uniform(&["A", "A"], &D2).is_err());
    let other = AttrSet::new([Attribute::new("A", &["x"])]).unwrap();
    assert!(a.union(&other).is_err());
    assert_eq!(a.all_tuples().len(), 8);
    assert_eq!(a.to_string(), "{A,B,C}");
}

#[test]
fn marginal_examples() {
    let (r, t) = bag_pair();
    let bset = r.attrs().restrict(&["B"]).unwrap();
    let rb = r.marginal(&bset).unwrap();
    assert_eq!(rb.len(), 1);
    assert_eq!(rb.get(&bset.tuple(&["2"]).unwrap()), Elem::Nat(2));
    assert_eq!(rb, t.marginal(&bset).unwrap());
    assert_eq!(r.total(), Elem::Nat(2));
    let none = r.marginal(&AttrSet::empty()).unwrap();
    assert_eq!(none.get(&Tuple(vec![])), Elem::Nat(2));
}

#[test]
fn zeros_are_dropped() {
    let m = MonoidRef::bag();
    let a = AttrSet::uniform(&["A"], &D2).unwrap();
    let mut r = KRel::new(m, a.clone());
    r.set(a.tuple(&["0"]).unwrap(), Elem::Nat(0)).unwrap();
    assert!(r.is_empty());
    r.add_to(a.tuple(&["0"]).unwrap(), Elem::Nat(2)).unwrap();
    r.add_to(a.tuple(&["0"]).unwrap(), Elem::Nat(3)).unwrap();
    assert_eq!(r.get(&a.tuple(&["0"]).unwrap()), Elem::Nat(5));
    assert!(r.set(Tuple(vec![2]), Elem::Nat(1)).is_err());
    assert!(r.set(Tuple(vec![0]), Elem::Bool(true)).is_err());
}

#[test]
fn rel_leq_examples() {
    let v = AttrSet::new([Attribute::new("V", &["v"])]).unwrap();
    let one = |m: &MonoidRef, n| KRel::from_rows(m, &v, &[(&["v"], Elem::Nat(n))]).unwrap();
    let bag = MonoidRef::bag();
    assert!(one(&bag, 5).rel_leq(&one(&bag, 6)).unwrap());
    assert!(KRel::new(bag.clone(), v.clone()).rel_leq(&one(&bag, 6)).unwrap());
    let k35 = MonoidRef::numerical_semigroup(&[3, 5]).unwrap();
    assert!(!one(&k35, 5).rel_leq(&one(&k35, 3)).unwrap());
    assert!(!one(&k35, 3).rel_leq(&one(&k35, 5)).unwrap());
    assert!(!one(&k35, 5).rel_leq(&one(&k35, 6)).unwrap());
    let other = AttrSet::uniform(&["W"], &D2).unwrap();
    assert!(KRel::new(bag.clone(), other).rel_leq(&one(&bag, 1)).is_err());
}

#[test]
fn inner_consistency_examples() {
    let (r, t) = bag_pair();
    assert!(r.inner_consistent(&t).unwrap());
    assert!(r.inner_consistent(&r).unwrap());
    let tri = triangle();
    assert!(tri[0].inner_consistent(&tri[1]).unwrap());
    assert!(r.inner_consistent(&tri[0]).is_err());
}

#[test]
fn bag_pair_consistent() {
    let (r, t) = bag_pair();
    let res = consistent(&r, &t, &Default::default()).unwrap();
    assert!(res.consistent);
    assert_eq!(res.strategy, Strategy::InnerConsistency);
    let w = res.witness.unwrap();
    assert!(w.is_witness_for(&[&r, &t]).unwrap());
    let nw = witness_join(&r, &t).unwrap();
    assert!(nw.is_witness_for(&[&r, &t]).unwrap());
    // Northwest corner with unit supplies and demands fills the diagonal.
    let xy = nw.attrs().clone();
    assert_eq!(nw.get(&xy.tuple(&["1", "2", "1"]).unwrap()), Elem::Nat(1));
    assert_eq!(nw.get(&xy.tuple(&["2", "2", "2"]).unwrap()), Elem::Nat(1));
    assert_eq!(nw.len(), 2);
}

#[test]
fn triangle_witness_and_global_verdict() {
    let tri = triangle();
    let w = witness_join(&tri[0], &tri[1]).unwrap();
    let abc = w.attrs().clone();
    let expected: Vec<Tuple> = vec![
        abc.tuple(&["0", "0", "1"]).unwrap(),
        abc.tuple(&["1", "1", "0"]).unwrap(),
    ];
    assert_eq!(w.support().cloned().collect::<Vec<_>>(), expected);
    for i in 0..3 {
        for j in i + 1..3 {
            assert!(consistent(&tri[i], &tri[j], &Default::default()).unwrap().consistent);
        }
    }
    let g = globally_consistent(&tri, &Default::default()).unwrap();
    assert!(!g.consistent);
    assert_eq!(g.strategy, Strategy::BruteForce);
}

#[test]
fn single_relation_is_globally_consistent() {
    let tri = triangle();
    let g = globally_consistent(&tri[..1], &Default::default()).unwrap();
    assert!(g.consistent);
    assert_eq!(g.witness.unwrap(), tri[0]);
}

#[test]
fn n2_disjoint_masses() {
    let n2 = MonoidRef::n2();
    let e = |s: &str| n2.parse_elem(s).unwrap();
    let a = AttrSet::new([Attribute::new("A", &["a"])]).unwrap();
    let bb = AttrSet::new([Attribute::new("B", &["b"])]).unwrap();
    let r = KRel::from_rows(&n2, &a, &[(&["a"], e("1"))]).unwrap();
    let t = KRel::from_rows(&n2, &bb, &[(&["b"], e("2"))]).unwrap();
    let res = consistent(&r, &t, &Default::default()).unwrap();
    assert!(!res.consistent);
    assert_eq!(res.strategy, Strategy::BruteForce);
}

#[test]
fn fuzzy_meet_witness() {
    let f = MonoidRef::fuzzy_max();
    let a = AttrSet::new([Attribute::new("A", &["a"])]).unwrap();
    let r = KRel::from_rows(&f, &a, &[(&["a"], Elem::real(0.5))]).unwrap();
    assert_eq!(witness_join(&r, &r).unwrap(), r);
}

#[test]
fn infinite_non_icp_is_unsupported() {
    let k35 = MonoidRef::numerical_semigroup(&[3, 5]).unwrap();
    let a = AttrSet::new([Attribute::new("A", &["a"])]).unwrap();
    let r = KRel::from_rows(&k35, &a, &[(&["a"], Elem::Nat(3))]).unwrap();
    assert!(matches!(
        consistent(&r, &r, &Default::default()),
        Err(Error::Unsupported { .. })
    ));
}

#[test]
fn boolean_consistency_matches_brute_force() {
    let m = MonoidRef::boolean();
    let x = AttrSet::uniform(&["A", "B"], &D2).unwrap();
    let y = AttrSet::uniform(&["B", "C"], &D2).unwrap();
    let from_mask = |attrs: &AttrSet, mask: u32| {
        let mut r = KRel::new(m.clone(), attrs.clone());
        for (i, t) in attrs.all_tuples().into_iter().enumerate() {
            if mask >> i & 1 == 1 {
                r.set(t, Elem::Bool(true)).unwrap();
            }
        }
        r
    };
    for rm in 0..16 {
        for tm in 0..16 {
            let (r, t) = (from_mask(&x, rm), from_mask(&y, tm));
            let fast = consistent(&r, &t, &Default::default()).unwrap().consistent;
            let slow = brute_force_consistent(&r, &t, &Default::default()).unwrap().is_some();
            assert_eq!(fast, slow);
            assert_eq!(fast, r.inner_consistent(&t).unwrap());
        }
    }
}

#[test]
fn budget_exhaustion_is_distinct() {
    let n2 = MonoidRef::n2();
    let two = n2.parse_elem("2").unwrap();
    let x = AttrSet::uniform(&["A", "B"], &["0", "1", "2", "3"]).unwrap();
    let y = AttrSet::uniform(&["B", "C"], &["0", "1", "2", "3"]).unwrap();
    let full = |a: &AttrSet| {
        let mut r = KRel::new(n2.clone(), a.clone());
        for t in a.all_tuples() {
            r.set(t, two).unwrap();
        }
        r
    };
    let tiny = ConsistencyOptions { budget: 3 };
    let res = brute_force_consistent(&full(&x), &full(&y), &tiny);
    assert!(matches!(res, Err(Error::BudgetExhausted { budget: 3 })));
}

#[test]
fn generators_are_deterministic() {
    let bag = MonoidRef::bag();
    let a = AttrSet::uniform(&["A", "B"], &D2).unwrap();
    let pool = bag.sample_pool();
    let r1 = gen_random_krel(&bag, &a, 3, &pool, 42).unwrap();
    let r2 = gen_random_krel(&bag, &a, 3, &pool, 42).unwrap();
    assert_eq!(r1, r2);
    assert!(r1.len() <= 3);

    let h = Hypergraph::path(3, &D2).unwrap();
    let fam = gen_consistent_family(&bag, &h, 6, &pool, 9).unwrap();
    for w in fam.windows(2) {
        assert!(w[0].inner_consistent(&w[1]).unwrap());
    }
    let g = globally_consistent(&fam, &Default::default()).unwrap();
    assert!(g.consistent);
    assert_eq!(g.strategy, Strategy::WitnessFold);
}

#[test]
fn csv_round_trip() {
    let (r, _) = bag_pair();
    let text = r.to_csv();
    assert_eq!(text, "A,B,#annotation\n1,2,1\n2,2,1\n");
    let back = KRel::from_csv(r.monoid(), Some(r.attrs()), &text).unwrap();
    assert_eq!(back, r);
    // Column order in the file is free.
    let swapped = KRel::from_csv(r.monoid(), Some(r.attrs()), "B,A,#annotation\n2,1,1\n2,2,1\n").unwrap();
    assert_eq!(swapped, r);
    let json = r.to_json_value();
    assert_eq!(KRel::from_json_value(r.monoid(), r.attrs(), &json).unwrap(), r);
}

#[test]
fn csv_errors_carry_lines() {
    let bag = MonoidRef::bag();
    let err = KRel::from_csv(&bag, None, "A,#annotation\nx,1\nx,2\n").unwrap_err();
    assert!(matches!(err, Error::Parse { line: 3, .. }));
    let err = KRel::from_csv(&bag, None, "A,#annotation\nx,-1\n").unwrap_err();
    assert!(matches!(err, Error::Parse { line: 2, .. }));
    assert!(KRel::from_csv(&bag, None, "A,value\nx,1\n").is_err());
}
