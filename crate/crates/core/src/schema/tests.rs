use super::*;

const D: [&str; 2] = ["0", "1"];

fn triangle() -> Hypergraph {
    Hypergraph::uniform(&[("R1", &["A", "B"][..]), ("R2", &["B", "C"]), ("R3", &["C", "A"])], &D).unwrap()
}

fn four_edge() -> Hypergraph {
    Hypergraph::uniform(
        &[
            ("R1", &["A", "B", "C"][..]),
            ("R2", &["C", "D", "E"]),
            ("R3", &["E", "F", "A"]),
            ("R4", &["A", "C", "E"]),
        ],
        &D,
    )
    .unwrap()
}

#[test]
fn triangle_is_cyclic() {
    match gyo(&triangle()) {
        Acyclicity::Cyclic(res) => assert_eq!(res.len(), 3),
        other => panic!("expected cyclic, got {other:?}"),
    }
    assert!(matches!(gyo_order(&triangle()), Err(Error::Cyclic { .. })));
}

#[test]
fn four_edge_ordering() {
    let h = four_edge();
    let ord = gyo_order(&h).unwrap();
    assert_eq!(ord.order, vec![0, 3, 1, 2]);
    assert_eq!(ord.parents, vec![None, Some(0), Some(1), Some(1)]);
    assert_eq!(ord.describe(&h), "Y1=R1 Y2=R4(j=1) Y3=R2(j=2) Y4=R3(j=2)");
    let same = ordering_from_permutation(&h, &[0, 3, 1, 2]).unwrap();
    assert_eq!(same, ord);
    // {A,B,C},{C,D,E} first leaves {E,F,A}∩prefix = {A,E} uncovered.
    assert!(ordering_from_permutation(&h, &[0, 1, 2, 3]).is_err());
}

#[test]
fn path_identity() {
    for n in 1..=6 {
        let h = Hypergraph::path(n, &D).unwrap();
        let ord = gyo_order(&h).unwrap();
        assert_eq!(ord.order, (0..n).collect::<Vec<_>>());
        let parents: Vec<Option<usize>> = (0..n).map(|i| i.checked_sub(1)).collect();
        assert_eq!(ord.parents, parents);
    }
}

#[test]
fn single_edge() {
    let h = Hypergraph::path(1, &D).unwrap();
    let ord = gyo_order(&h).unwrap();
    assert_eq!(ord.order, vec![0]);
    assert_eq!(validate_ordering(&h, &ord).unwrap(), None);
}

#[test]
fn invalid_path_order() {
    let h = Hypergraph::path(3, &D).unwrap();
    // R1, R3, R2: R3 shares nothing with R1, fine; R2 overlaps {A2,A3} but
    // neither R1 nor R3 holds both.
    let bad = RIOrdering {
        order: vec![0, 2, 1],
        parents: vec![None, Some(0), Some(0)],
    };
    assert_eq!(validate_ordering(&h, &bad).unwrap(), Some(2));
    let err = ordering_from_permutation(&h, &[0, 2, 1]).unwrap_err();
    assert!(matches!(err, Error::Ordering { index: 2, .. }));
}

#[test]
fn malformed_orderings() {
    let h = Hypergraph::path(3, &D).unwrap();
    let dup = RIOrdering { order: vec![0, 0, 1], parents: vec![None, Some(0), Some(1)] };
    assert!(validate_ordering(&h, &dup).is_err());
    let late = RIOrdering { order: vec![0, 1, 2], parents: vec![None, Some(2), Some(1)] };
    assert!(validate_ordering(&h, &late).is_err());
}

/// Brute force: acyclic iff some permutation has the running intersection property.
fn some_ordering(h: &Hypergraph) -> bool {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }
    perms(h.len()).iter().any(|p| ordering_from_permutation(h, p).is_ok())
}

#[test]
fn gyo_matches_exhaustive_search() {
    let names = ["A", "B", "C", "D"];
    // Every hypergraph with 1..=4 nonempty edges over 4 attributes, by bitmask.
    let masks: Vec<u32> = (1..16).collect();
    let mut checked = 0;
    let mut rec = |edges: &[u32]| {
        let named: Vec<(String, Vec<&str>)> = edges
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                let attrs = (0..4).filter(|b| m >> b & 1 == 1).map(|b| names[b]).collect();
                (format!("R{}", i + 1), attrs)
            })
            .collect();
        let refs: Vec<(&str, &[&str])> = named.iter().map(|(n, a)| (n.as_str(), a.as_slice())).collect();
        let h = Hypergraph::uniform(&refs, &D).unwrap();
        let acyclic = matches!(gyo(&h), Acyclicity::Acyclic(_));
        assert_eq!(acyclic, some_ordering(&h), "{h}");
        if let Ok(ord) = gyo_order(&h) {
            assert_eq!(validate_ordering(&h, &ord).unwrap(), None);
        }
        checked += 1;
    };
    for &a in &masks {
        rec(&[a]);
        for &b in &masks {
            rec(&[a, b]);
            for &c in masks.iter().filter(|&&c| c >= b) {
                rec(&[a, b, c]);
                for &d in masks.iter().filter(|&&d| d >= c && (a + b + c + d) % 3 == 0) {
                    rec(&[a, b, c, d]);
                }
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn verdict_invariant_under_permutation() {
    let h = four_edge();
    let mut edges = h.edges().to_vec();
    edges.reverse();
    let renamed: Vec<Edge> = edges
        .into_iter()
        .enumerate()
        .map(|(i, e)| Edge { name: format!("S{i}"), attrs: e.attrs })
        .collect();
    let g = Hypergraph::new(renamed).unwrap();
    assert!(matches!(gyo(&g), Acyclicity::Acyclic(_)));
    let mut t = triangle().edges().to_vec();
    t.swap(0, 2);
    assert!(matches!(gyo(&Hypergraph::new(t).unwrap()), Acyclicity::Cyclic(_)));
}

#[test]
fn json_round_trip() {
    let h = four_edge();
    let back = Hypergraph::from_json(&h.to_json()).unwrap();
    assert_eq!(back, h);
}

#[test]
fn rejects_bad_schemas() {
    assert!(Hypergraph::new(vec![]).is_err());
    let e = Edge { name: "R".into(), attrs: AttrSet::uniform(&["A"], &D).unwrap() };
    assert!(Hypergraph::new(vec![e.clone(), e]).is_err());
    assert!(Hypergraph::from_json("{\"hyperedges\": 3}").is_err());
}
