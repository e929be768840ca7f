use proptest::prelude::*;

use exminor::generators::{generate, GenSpec, Kind};
use exminor::spectral::{dense_lambda2, exact_expansion, lambda2, sweep_cut};
use exminor::{Graph, Rational};

fn connected_gnp(n: usize, seed: u64) -> Option<Graph> {
    let g = generate(&GenSpec { kind: Kind::Gnp(n, 0.45), seed }).unwrap();
    g.is_connected().then_some(g)
}

/// Minimum sparsity over all subsets, written independently of the library.
fn naive_expansion(g: &Graph) -> Rational {
    let n = g.n();
    let mut best: Option<Rational> = None;
    for mask in 1u32..(1 << n) - 1 {
        let size = mask.count_ones() as i64;
        let crossing = g.edges().filter(|&(u, v)| (mask >> u & 1) != (mask >> v & 1)).count() as i64;
        let s = Rational::new(crossing, size.min(n as i64 - size));
        if best.is_none_or(|b| s < b) {
            best = Some(s);
        }
    }
    best.unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cheeger_sandwich(n in 3usize..12, seed in 0u64..10_000) {
        let Some(g) = connected_gnp(n, seed) else { return Ok(()) };
        let l = lambda2(&g, 1e-10).unwrap().lambda2;
        let (phi, cut) = exact_expansion(&g).unwrap();
        let phi_f = *phi.numer() as f64 / *phi.denom() as f64;
        let d = g.max_degree() as f64;
        prop_assert!(l / 2.0 - 1e-6 <= phi_f && phi_f <= (2.0 * d * l).sqrt() + 1e-6);
        prop_assert_eq!(phi, naive_expansion(&g));
        prop_assert_eq!(cut.sparsity, phi);
        let sweep = sweep_cut(&g, 1e-10).unwrap();
        prop_assert!(sweep.sparsity >= phi);
    }

    #[test]
    fn iterative_matches_dense(n in 4usize..40, seed in 0u64..10_000) {
        let n = n + n % 2;
        let g = generate(&GenSpec { kind: Kind::RandomRegular(n, 3), seed }).unwrap();
        let it = lambda2(&g, 1e-10).unwrap().lambda2;
        prop_assert!((it - dense_lambda2(&g)).abs() < 1e-6);
    }
}

#[test]
fn closed_forms() {
    // lambda2(C_n) = 2 - 2 cos(2 pi / n); lambda2(K_n) = n.
    for n in [5usize, 8, 13] {
        let c = generate(&GenSpec { kind: Kind::Cycle(n), seed: 0 }).unwrap();
        let want = 2.0 - 2.0 * (2.0 * std::f64::consts::PI / n as f64).cos();
        assert!((lambda2(&c, 1e-10).unwrap().lambda2 - want).abs() < 1e-7);
    }
    let k = generate(&GenSpec { kind: Kind::Clique(6), seed: 0 }).unwrap();
    assert!((lambda2(&k, 1e-10).unwrap().lambda2 - 6.0).abs() < 1e-7);
}
