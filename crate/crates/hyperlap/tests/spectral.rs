mod common;

use common::*;
use hyperlap::fixtures::{four_vertex_mixed, nested_chain, two_edge_path};
use hyperlap::laplacian::apply_laplacian;
use hyperlap::spectral::*;
use hyperlap::{discrepancy_ratio, Hypergraph64, Space, SpaceVector};

const S5: f64 = 2.236_067_977_499_79;

/// Cosine similarity in the weighted inner product.
fn wcos(w: &[f64], a: &[f64], b: &[f64]) -> f64 {
    wdot(w, a, b) / (wdot(w, a, a) * wdot(w, b, b)).sqrt()
}

#[test]
fn oracle_reproduces_two_edge_path_table() {
    let h: Hypergraph64 = two_edge_path();
    let set = exact_minimizers(&h, 3).unwrap();
    assert_eq!(set.ratios[0], 0.0);
    assert_close(set.ratios[1], (5.0 - S5) / 4.0, 1e-7, "γ2");
    assert_close(set.ratios[2], (11.0 + S5) / 8.0, 1e-7, "γ3");
    let w = h.weights();
    let f2 = [S5 - 1.0, (3.0 - S5) / 2.0, -1.0, -1.0];
    assert!(wcos(w, &set.vectors[1], &f2).abs() > 1.0 - 1e-7);
    let f3 = [S5 - 1.0, -1.0, 4.0 - S5, -1.0];
    let f3m = [S5 - 1.0, -1.0, -1.0, 4.0 - S5];
    let c = wcos(w, &set.vectors[2], &f3).abs().max(wcos(w, &set.vectors[2], &f3m).abs());
    assert!(c > 1.0 - 1e-7, "f3 direction, cos = {c}");
    assert!(set.orthonormality_error(w) < 1e-9);
}

#[test]
fn oracle_depends_on_which_second_minimizer_is_chosen() {
    let h: Hypergraph64 = nested_chain();
    let first = MinimizerSet::constant(&h, Method::Given);
    let (g2, _) = exact_gamma(&h, &first).unwrap();
    assert_close(g2, 5.0 / 6.0, 1e-7, "γ2");
    for (f2, g3) in [([1.0, 1.0, 1.0, -4.0, -4.0], 113.0 / 99.0), ([2.0, 2.0, -3.0, -3.0, -3.0], 181.0 / 165.0)] {
        assert_close(discrepancy_ratio(&h, &SpaceVector::weighted(f2.to_vec())).unwrap(), 5.0 / 6.0, 1e-12, "D(f2)");
        let mut prior = first.vectors.clone();
        prior.push(f2.to_vec());
        let prior = MinimizerSet::from_vectors(&h, prior, Method::Given).unwrap();
        let (g, _) = exact_gamma(&h, &prior).unwrap();
        assert_close(g, g3, 1e-7, "γ3");
    }
}

#[test]
fn oracle_second_vector_is_an_eigenvector() {
    let mut g = rng(3);
    for _ in 0..5 {
        let h = random_connected(&mut g, 6, 3, 4);
        let set = exact_minimizers(&h, 2).unwrap();
        let x = SpaceVector::weighted(set.vectors[1].clone()).to_space(Space::Normalized, h.weights());
        let lx = apply_laplacian(&h, &x).unwrap();
        let gamma = set.ratios[1];
        let res: f64 = lx.values().iter().zip(x.values()).map(|(a, b)| (a - gamma * b).powi(2)).sum::<f64>().sqrt();
        let nx: f64 = x.values().iter().map(|a| a * a).sum::<f64>().sqrt();
        assert!(res <= 1e-6 * nx, "‖Lx − γx‖ = {res}");
    }
}

#[test]
fn oracle_rejects_large_instances() {
    let h = Hypergraph64::new(9, (0..8).map(|i| (vec![i, i + 1], 1.0))).unwrap();
    assert!(exact_gamma(&h, &MinimizerSet::constant(&h, Method::Oracle)).is_err());
}

#[test]
fn sdp_relaxes_the_two_edge_path() {
    let h: Hypergraph64 = two_edge_path();
    let cfg = SdpConfig::default();
    let exact = exact_minimizers(&h, 3).unwrap();
    let prior1 = MinimizerSet::from_vectors(&h, exact.vectors[..1].to_vec(), Method::Oracle).unwrap();
    let sol = solve_sdp(&h, &prior1, &cfg, 1).unwrap();
    assert!(sol.objective <= (5.0 - S5) / 4.0 + 1e-3, "sdpval {}", sol.objective);
    assert!(sol.max_residual() <= 1e-6);
    assert_close(GramSolution::evaluate(&h, &sol.vectors), sol.objective, 1e-9, "objective recomputed");
    let prior2 = MinimizerSet::from_vectors(&h, exact.vectors[..2].to_vec(), Method::Oracle).unwrap();
    let sol3 = solve_sdp(&h, &prior2, &cfg, 2).unwrap();
    assert!(sol3.objective <= (11.0 + S5) / 8.0 + 1e-3, "sdpval {}", sol3.objective);

    let f = gaussian_round(&h, &sol, &prior1, 200, 9).unwrap();
    let d = discrepancy_ratio(&h, &f).unwrap();
    assert!(d <= 384.0 * 3f64.ln() * sol.objective);
    let along = wdot(h.weights(), f.values(), &prior1.vectors[0]).abs();
    assert!(along <= 1e-8 * wdot(h.weights(), f.values(), f.values()).sqrt());
    eprintln!("rounded D_w = {d}, γ2 = {}, sdpval = {}", (5.0 - S5) / 4.0, sol.objective);
}

#[test]
fn sdp_of_disconnected_hypergraph_vanishes() {
    let h = Hypergraph64::new(4, [(vec![0, 1], 1.0), (vec![2, 3], 1.0)]).unwrap();
    let sol = solve_sdp(&h, &MinimizerSet::constant(&h, Method::Sdp), &SdpConfig::default(), 4).unwrap();
    assert!(sol.objective < 1e-4, "{}", sol.objective);
    let set = approx_procedural_minimizers(&h, 2, &SdpConfig::default(), ROUNDING_TRIALS, 4).unwrap();
    assert!(set.ratios[1] <= 1e-4);
}

#[test]
fn rounding_constant_vectors_gives_zero_ratio() {
    let h: Hypergraph64 = two_edge_path();
    let sol = GramSolution { vectors: vec![vec![0.5, 0.1]; 4], objective: 0.0, residual_norm: 0.0, residual_orth: vec![], restart: 0 };
    let f = gaussian_round(&h, &sol, &MinimizerSet::empty(Method::Sdp), 3, 0).unwrap();
    assert_eq!(discrepancy_ratio(&h, &f).unwrap(), 0.0);
    // rescaling the vectors rescales the output
    let scaled = GramSolution { vectors: vec![vec![1.5, 0.3]; 4], ..sol.clone() };
    let g = gaussian_round(&h, &scaled, &MinimizerSet::empty(Method::Sdp), 3, 0).unwrap();
    for (a, b) in f.values().iter().zip(g.values()) {
        assert_close(3.0 * a, *b, 1e-12, "linearity");
    }
}

#[test]
fn approximate_minimizers_respect_the_rounding_bound() {
    let h: Hypergraph64 = two_edge_path();
    let one = approx_procedural_minimizers(&h, 1, &SdpConfig::default(), 10, 0).unwrap();
    assert_eq!(one.ratios, vec![0.0]);
    let set = approx_procedural_minimizers(&h, 3, &SdpConfig::default(), 200, 17).unwrap();
    let exact = exact_minimizers(&h, 3).unwrap();
    assert!(set.orthonormality_error(h.weights()) < 1e-9);
    for i in 1..3 {
        let bound = 384.0 * (i + 1) as f64 * 3f64.ln() * exact.ratios[i];
        assert!(set.ratios[i] <= bound);
    }
    eprintln!("approx ratios {:?} vs exact {:?}", set.ratios, exact.ratios);
}

#[test]
fn report_on_mixed_example() {
    let h: Hypergraph64 = four_vertex_mixed(2.0);
    let cands = MinimizerSet::from_vectors(&h, vec![vec![0.0, 0.0, 1.0, 1.0], vec![1.0, 1.0, 0.0, 0.0]], Method::Given).unwrap();
    let exact = exact_minimizers(&h, 2).unwrap();
    assert_close(exact.ratios[1], 2.0 / 3.0, 1e-7, "γ2");
    let rep = minimaximizer_report(&h, &cands, Some(exact.ratios[1]));
    assert_close(rep.xi_upper, 1.0 / 3.0, 1e-12, "ξ2 bound");
    assert!(rep.xi_upper < rep.gamma.unwrap());
    assert!(rep.span_bound_holds);
}

#[test]
fn report_recovers_gamma2_as_span_maximum() {
    let mut g = rng(8);
    for _ in 0..3 {
        let h = random_connected(&mut g, 6, 4, 3);
        let exact = exact_minimizers(&h, 2).unwrap();
        let rep = minimaximizer_report(&h, &exact, Some(exact.ratios[1]));
        assert_close(rep.span_max_sampled, exact.ratios[1], 1e-6, "ζ2 = γ2");
    }
    let h: Hypergraph64 = two_edge_path();
    let one = MinimizerSet::constant(&h, Method::Given);
    let rep = minimaximizer_report(&h, &one, Some(0.0));
    assert_eq!((rep.xi_upper, rep.span_max_sampled), (0.0, 0.0));
}
