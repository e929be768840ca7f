use proptest::prelude::*;

use exminor::generators::{generate, GenSpec, Kind};
use exminor::partition::{balanced_integer_partition, connected_cut_repair, spanning_tree_grouping};
use exminor::{Cut, Graph};

fn host(n: usize, seed: u64) -> Graph {
    let n = n + n % 2;
    generate(&GenSpec { kind: Kind::RandomRegular(n, 3), seed }).unwrap()
}

proptest! {
    #[test]
    fn balanced_sides(xs in prop::collection::vec(0u64..1000, 1..40)) {
        let total: u64 = xs.iter().sum();
        prop_assume!(total > 0 && xs.iter().all(|&x| 4 * x <= 3 * total));
        let (a, b) = balanced_integer_partition(&xs).unwrap();
        let sum = |s: &[usize]| s.iter().map(|&i| xs[i]).sum::<u64>();
        prop_assert!(4 * sum(&a) >= total && 4 * sum(&b) >= total);
        let mut all: Vec<usize> = a.iter().chain(&b).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..xs.len()).collect::<Vec<_>>());
    }

    #[test]
    fn grouping_bound(n in 8usize..48, seed in 0u64..1000, r in 1usize..6, mask in any::<u64>()) {
        let g = host(n, seed);
        let terminals: Vec<usize> = (0..g.n()).filter(|&v| mask >> (v % 64) & 1 == 1 || v % 5 == 0).collect();
        prop_assume!(terminals.len() >= r);
        let grouping = spanning_tree_grouping(&g, &terminals, r).unwrap();
        let floor = terminals.len() / (g.max_degree() * r);
        let mut seen = vec![false; g.n()];
        for (part, &t) in grouping.parts.iter().zip(&grouping.terminals_per_part) {
            prop_assert!(g.is_set_connected(part));
            prop_assert!(t >= floor);
            prop_assert_eq!(t, part.iter().filter(|v| terminals.contains(v)).count());
            for &v in part {
                prop_assert!(!seen[v]);
                seen[v] = true;
            }
        }
        prop_assert_eq!(grouping.parts.len(), r);
    }

    #[test]
    fn repair_is_monotone(n in 6usize..40, seed in 0u64..1000, mask in any::<u64>()) {
        let g = host(n, seed);
        let side: Vec<usize> = (0..g.n()).filter(|&v| mask >> (v % 64) & 1 == 1).collect();
        prop_assume!(!side.is_empty() && side.len() < g.n());
        let cut = Cut::new(&g, &side).unwrap();
        let fixed = connected_cut_repair(&g, &cut).unwrap();
        prop_assert!(fixed.sparsity <= cut.sparsity);
        prop_assert!(g.is_set_connected(&fixed.side_a) && g.is_set_connected(&fixed.side_b));
        prop_assert!(fixed.is_consistent_with(&g));
    }
}
