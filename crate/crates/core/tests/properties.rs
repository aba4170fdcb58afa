use lcdgraph::generators::graph_sequential;
use lcdgraph::maxtree::{forest_m1, spanning_recursive_exists};
use lcdgraph::rng;
use lcdgraph::stats::{loop_count, parallel_pair_count};
use lcdgraph::{generate, GenMethod, MultiGraph};
use proptest::prelude::*;

fn method() -> impl Strategy<Value = GenMethod> {
    prop::sample::select(GenMethod::ALL.to_vec())
}

fn draw(method: GenMethod, n: usize, m: usize, seed: u64) -> MultiGraph {
    generate(method, n, m, None, &mut rng::stream(seed)).unwrap().graph
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn vertex_and_edge_totals(method in method(), n in 1usize..80, m in 1usize..5, seed: u64) {
        let g = draw(method, n, m, seed);
        prop_assert_eq!(g.n(), n);
        let total: usize = g.edges().map(|(_, _, k)| k).sum();
        prop_assert_eq!(total, m * n);
        let non_loop: usize = g.edges().filter(|&(a, b, _)| a != b).map(|(_, _, k)| k).sum();
        prop_assert_eq!(loop_count(&g) + non_loop, m * n);
        let degree_sum: usize = g.degrees().iter().map(|&d| d as usize).sum();
        prop_assert_eq!(degree_sum, 2 * m * n);
    }

    #[test]
    fn every_degree_is_at_least_m(method in method(), n in 1usize..80, m in 1usize..5, seed: u64) {
        let g = draw(method, n, m, seed);
        for j in 1..=n {
            prop_assert!(g.degree(j).unwrap() >= m);
        }
    }

    #[test]
    fn trees_never_have_parallel_edges(method in method(), n in 1usize..200, seed: u64) {
        let g = draw(method, n, 1, seed);
        prop_assert_eq!(parallel_pair_count(&g), 0);
    }

    #[test]
    fn spanning_tree_iff_single_loop(method in method(), n in 1usize..200, seed: u64) {
        let g = draw(method, n, 1, seed);
        prop_assert_eq!(spanning_recursive_exists(&g), loop_count(&g) == 1);
    }

    #[test]
    fn max_trees_partition_the_vertices(method in method(), n in 1usize..200, seed: u64) {
        let g = draw(method, n, 1, seed);
        let forest = forest_m1(&g).unwrap();
        let mut root = vec![0usize; n + 1];
        for j in 1..=n {
            root[j] = match forest.parent[j - 1] {
                Some(p) => root[p as usize],
                None => j,
            };
        }
        for (&r, &size) in forest.roots.iter().zip(&forest.sizes) {
            prop_assert_eq!(g.loops_at(r).unwrap(), 1);
            prop_assert_eq!((1..=n).filter(|&j| root[j] == r).count(), size);
            let internal: usize = g
                .edges()
                .filter(|&(a, b, _)| a != b && root[a] == r && root[b] == r)
                .map(|(_, _, k)| k)
                .sum();
            prop_assert_eq!(internal, size - 1);
        }
        prop_assert_eq!(forest.sizes.iter().sum::<usize>(), n);
        prop_assert_eq!(forest.roots.len(), loop_count(&g));
    }

    #[test]
    fn same_seed_same_graph(method in method(), n in 1usize..60, m in 1usize..4, seed: u64) {
        prop_assert_eq!(draw(method, n, m, seed), draw(method, n, m, seed));
    }

    #[test]
    fn adding_a_vertex_never_lowers_a_degree(n in 1usize..80, m in 1usize..5, seed: u64) {
        let small = graph_sequential(n, m, &mut rng::stream(seed)).unwrap();
        let big = graph_sequential(n + 1, m, &mut rng::stream(seed)).unwrap();
        for j in 1..=n {
            prop_assert!(big.degree(j).unwrap() >= small.degree(j).unwrap());
            for k in j..=n {
                prop_assert_eq!(small.multiplicity(j, k).unwrap(), big.multiplicity(j, k).unwrap());
            }
        }
        let own = big.degree(n + 1).unwrap();
        prop_assert!(own >= m && own <= 2 * m);
    }
}
