use std::collections::BTreeMap;

use proptest::prelude::*;

use exminor::embed::reduce_degree;
use exminor::generators::{generate, GenSpec, Kind};
use exminor::minor::{brute_force_is_minor, contraction_model, verify_model, MinorModel, OracleError, Verdict};
use exminor::Graph;

fn gen(kind: Kind, seed: u64) -> Graph {
    generate(&GenSpec { kind, seed }).unwrap()
}

/// Connected parts obtained by merging the endpoints of the chosen edges.
fn merged_parts(g: &Graph, picks: &[bool]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..g.n()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for (e, (u, v)) in g.edges().enumerate() {
        if picks[e % picks.len()] {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            parent[a] = b;
        }
    }
    let mut parts: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..g.n() {
        let r = find(&mut parent, v);
        parts.entry(r).or_default().push(v);
    }
    parts.into_values().collect()
}

fn shuffled(m: &MinorModel, salt: usize) -> MinorModel {
    let mut out = m.clone();
    for (i, set) in out.branch_sets.iter_mut().enumerate() {
        let k = set.len();
        if k > 0 {
            set.rotate_left((i + salt) % k);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn contraction_models_are_valid(n in 4usize..9, seed in 0u64..5000, picks in prop::collection::vec(any::<bool>(), 1..12)) {
        let g = gen(Kind::Gnp(n, 0.5), seed);
        let parts = merged_parts(&g, &picks);
        let (h, m) = contraction_model(&g, &parts).unwrap();
        prop_assert!(verify_model(&g, &h, &m).is_valid());
        prop_assert!(verify_model(&g, &h, &shuffled(&m, 3)).is_valid());
        match brute_force_is_minor(&g, &h) {
            Ok(found) => prop_assert!(found),
            Err(OracleError::Budget(_)) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
        prop_assert_eq!(MinorModel::parse(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn verdict_ignores_set_order(n in 5usize..9, seed in 0u64..5000, picks in prop::collection::vec(any::<bool>(), 1..12), salt in 0usize..5) {
        let g = gen(Kind::Gnp(n, 0.5), seed);
        let parts = merged_parts(&g, &picks);
        prop_assume!(parts.len() >= 2);
        let (h, mut m) = contraction_model(&g, &parts).unwrap();
        // Corrupt: put a vertex of set 1 into set 0 as well.
        let v = m.branch_sets[1][0];
        m.branch_sets[0].push(v);
        let a = verify_model(&g, &h, &m);
        let b = verify_model(&g, &h, &shuffled(&m, salt));
        prop_assert_eq!(&a, &b);
        match a {
            Verdict::Violations(vs) => prop_assert!(vs.iter().any(|x| x.clause() == "ii")),
            Verdict::Valid => prop_assert!(false, "shared vertex accepted"),
        }
    }
}

#[test]
fn lifted_reduction_is_a_model() {
    for h in [gen(Kind::Clique(5), 0), gen(Kind::Petersen, 0), gen(Kind::Grid(3, 3), 0)] {
        let red = reduce_degree(&h);
        assert!(red.reduced.max_degree() <= 3);
        // The reduced graph is a minor of itself through the identity model.
        let g = red.reduced.clone();
        let identity = MinorModel {
            branch_sets: (0..g.n()).map(|v| vec![v]).collect(),
            edge_paths: g.edges().map(|(u, v)| ((u, v), vec![u, v])).collect(),
        };
        assert!(verify_model(&g, &g, &identity).is_valid());
        let lifted = red.lift_model(&h, &identity);
        assert_eq!(verify_model(&g, &h, &lifted), Verdict::Valid);
    }
}

#[test]
fn oracle_refuses_large_hosts() {
    let g = gen(Kind::Cycle(11), 0);
    let h = gen(Kind::Cycle(3), 0);
    assert!(matches!(brute_force_is_minor(&g, &h), Err(OracleError::TooLarge(_))));
}
