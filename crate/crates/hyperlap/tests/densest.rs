mod common;

use common::rng;
use hyperlap::densest::*;
use proptest::prelude::*;
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random instance. Integer values and weights make ties between subsets common.
fn random_instance(r: &mut ChaCha8Rng, k: usize, integral: bool) -> DensestInstance<f64> {
    let value = |r: &mut ChaCha8Rng| if integral { r.random_range(1..=3) as f64 } else { r.random_range(0.1..3.0) };
    let family = |r: &mut ChaCha8Rng, count: usize| -> Vec<(Vec<usize>, f64)> {
        (0..count)
            .map(|_| {
                let size = r.random_range(1..=k.min(3));
                (sample(r, k, size).into_vec(), value(r))
            })
            .collect()
    };
    let ni = r.random_range(1..=2 * k);
    let no = r.random_range(0..=k);
    let in_edges = family(r, ni);
    let out_edges = family(r, no);
    let weights = (0..k).map(|_| if integral { r.random_range(1..=2) as f64 } else { r.random_range(0.5..2.0) }).collect();
    DensestInstance::new(weights, in_edges, out_edges).unwrap()
}

/// Density recomputed from the raw edge lists.
fn density(inst: &DensestInstance<f64>, set: &[usize]) -> f64 {
    let inside = |v: &usize| set.contains(v);
    let gain: f64 = inst.in_edges().iter().filter(|e| e.vertices.iter().all(inside)).map(|e| e.value).sum();
    let loss: f64 = inst.out_edges().iter().filter(|e| e.vertices.iter().any(inside)).map(|e| e.value).sum();
    (gain - loss) / set.iter().map(|&v| inst.weights()[v]).sum::<f64>()
}

#[test]
fn small_examples() {
    let one = DensestInstance::new(vec![1.0], vec![(vec![0], 2.0)], vec![]).unwrap();
    assert_eq!(solve_densest(&one).subset, vec![0]);
    assert_eq!(solve_densest(&one).density, 2.0);

    let two = DensestInstance::new(vec![1.0, 1.0], vec![(vec![0], 3.0)], vec![(vec![0, 1], 1.0)]).unwrap();
    let s = solve_densest(&two);
    assert_eq!((s.subset, s.density), (vec![0], 2.0));
    assert_eq!(density(&two, &[0, 1]), 1.0);
    assert_eq!(density(&two, &[1]), -1.0);

    let avoid = DensestInstance::new(vec![1.0, 1.0], vec![], vec![(vec![0], 1.0)]).unwrap();
    let b = densest_bruteforce(&avoid).unwrap();
    assert_eq!((b.subset, b.density), (vec![1], 0.0));
}

#[test]
fn equivalence_class_of_the_three_vertex_minimizer() {
    // Elements b (weight 2) and d (weight 1) receive √5 and 5 − √5.
    let s5 = 5f64.sqrt();
    let inst = DensestInstance::new(vec![2.0, 1.0], vec![(vec![0], s5), (vec![0, 1], 5.0 - s5)], vec![]).unwrap();
    let s = solve_densest(&inst);
    assert_eq!(s.subset, vec![0, 1]);
    assert!((s.density - 5.0 / 3.0).abs() < 1e-12);
}

#[test]
fn validation() {
    assert!(DensestInstance::<f64>::new(vec![], vec![], vec![]).is_err());
    assert!(DensestInstance::new(vec![0.0], vec![], vec![]).is_err());
    assert!(DensestInstance::new(vec![1.0], vec![(vec![1], 1.0)], vec![]).is_err());
    assert!(DensestInstance::new(vec![1.0], vec![(vec![], 1.0)], vec![]).is_err());
    assert!(DensestInstance::new(vec![1.0], vec![], vec![(vec![0], 0.0)]).is_err());
    let big = DensestInstance::new(vec![1.0; 17], vec![(vec![0], 1.0)], vec![]).unwrap();
    assert!(matches!(densest_bruteforce(&big), Err(hyperlap::Error::Capacity { .. })));
}

#[test]
fn tiny_instances_agree_with_enumeration() {
    let mut r = rng(10);
    for _ in 0..300 {
        let k = r.random_range(1..=3);
        let integral = r.random_bool(0.5);
        let inst = random_instance(&mut r, k, integral);
        let s = solve_densest(&inst);
        let b = densest_bruteforce(&inst).unwrap();
        assert_eq!(s.subset, b.subset);
        assert!((s.density - b.density).abs() <= 1e-10 * (1.0 + b.density.abs()));
    }
}

#[test]
fn maximizers_are_closed_under_union_and_intersection() {
    let mut r = rng(11);
    let mut nontrivial = 0;
    for _ in 0..200 {
        let inst = random_instance(&mut r, 8, true);
        let (max, sets) = densest_maximizers(&inst).unwrap();
        if sets.len() > 1 {
            nontrivial += 1;
        }
        for a in &sets {
            for b in &sets {
                let union: Vec<usize> = (0..8).filter(|v| a.contains(v) || b.contains(v)).collect();
                assert!((density(&inst, &union) - max).abs() < 1e-9);
                let inter: Vec<usize> = a.iter().copied().filter(|v| b.contains(v)).collect();
                if !inter.is_empty() {
                    assert!((density(&inst, &inter) - max).abs() < 1e-9);
                }
            }
        }
        let s = solve_densest(&inst);
        assert!(sets.iter().all(|p| p.iter().all(|v| s.subset.contains(v))));
    }
    assert!(nontrivial > 10, "only {nontrivial} instances had tied maximizers");
}

#[test]
fn removing_the_maximal_set_lowers_the_density() {
    let mut r = rng(12);
    for _ in 0..200 {
        let integral = r.random_bool(0.5);
        let inst = random_instance(&mut r, 7, integral);
        let s = solve_densest(&inst);
        if let Some((rest, map)) = inst.remove(&s.subset) {
            let next = solve_densest(&rest);
            assert!(next.density < s.density - 1e-10, "{} then {}", s.density, next.density);
            assert!(map.iter().all(|v| !s.subset.contains(v)));
        }
    }
}

#[test]
fn max_flow_matches_cut_enumeration() {
    let mut r = rng(13);
    for _ in 0..100 {
        let nodes = r.random_range(2..=10);
        let mut g = FlowNetwork::new(nodes);
        let mut arcs = Vec::new();
        for _ in 0..r.random_range(1..=3 * nodes) {
            let (a, b) = (r.random_range(0..nodes), r.random_range(0..nodes));
            if a == b {
                continue;
            }
            let cap = r.random_range(0.0..5.0);
            arcs.push((a, b, cap, g.add_edge(a, b, cap)));
        }
        let (s, t) = (0, nodes - 1);
        let res = g.max_flow(s, t);
        let inner = nodes - 2;
        let mut best = f64::INFINITY;
        for bits in 0u32..1 << inner {
            let side = |v: usize| v == s || (v != t && bits >> (v - 1) & 1 == 1);
            let cut: f64 = arcs.iter().filter(|a| side(a.0) && !side(a.1)).map(|a| a.2).sum();
            best = best.min(cut);
        }
        assert!((res.value - best).abs() < 1e-9, "{} vs {best}", res.value);
        for side in [&res.source_side, &res.maximal_source_side] {
            assert!(side[s] && !side[t]);
            let cut: f64 = arcs.iter().filter(|a| side[a.0] && !side[a.1]).map(|a| a.2).sum();
            assert!((cut - best).abs() < 1e-9);
        }
        assert!(res.source_side.iter().zip(&res.maximal_source_side).all(|(&a, &b)| !a || b));
        for v in 0..nodes {
            if v == s || v == t {
                continue;
            }
            let net: f64 = arcs.iter().map(|a| if a.1 == v { g.flow(a.3) } else if a.0 == v { -g.flow(a.3) } else { 0.0 }).sum();
            assert!(net.abs() < 1e-9);
        }
        assert!(arcs.iter().all(|a| g.flow(a.3) >= -1e-12 && g.flow(a.3) <= a.2 + 1e-9));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn solver_matches_brute_force(seed in 0u64..100_000, k in 1usize..=12, integral: bool) {
        let mut r = rng(seed);
        let inst = random_instance(&mut r, k, integral);
        let s = solve_densest(&inst);
        let b = densest_bruteforce(&inst).unwrap();
        prop_assert_eq!(&s.subset, &b.subset);
        prop_assert!((s.density - b.density).abs() <= 1e-10 * (1.0 + b.density.abs()));
        prop_assert!((density(&inst, &s.subset) - s.density).abs() <= 1e-9);
    }
}
