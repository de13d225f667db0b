mod common;

use common::{pairwise_numerator, random_connected, rng};
use hyperlap::fixtures::two_edge_path;
use hyperlap::laplacian::*;
use hyperlap::spectral::{exact_gamma, exact_minimizers, Method, MinimizerSet};
use hyperlap::*;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

fn single_edge() -> Hypergraph64 {
    Hypergraph64::new(2, [(vec![0, 1], 1.0)]).unwrap()
}

fn gamma2(h: &Hypergraph64) -> f64 {
    exact_gamma(h, &MinimizerSet::constant(h, Method::Oracle)).unwrap().0
}

fn random_distribution(r: &mut impl Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| r.random_range(0.0..1.0)).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

/// Two unit-weight cliques of pairs joined by the hyperedge {a−1, a, a+1} at the seam.
fn dumbbell(size: usize) -> Hypergraph64 {
    let mut edges = Vec::new();
    for c in 0..2 {
        for i in 0..size {
            for j in i + 1..size {
                edges.push((vec![c * size + i, c * size + j], 1.0));
            }
        }
    }
    edges.push((vec![size - 2, size - 1, size], 1.0));
    Hypergraph64::new(2 * size, edges).unwrap()
}

fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

#[test]
fn stationary_start_stays_put() {
    let h: Hypergraph64 = two_edge_path();
    let star = h.stationary(1.0);
    let t = simulate_diffusion(&h, &SpaceVector::measure(star.clone()), 2.0, 0.01).unwrap();
    for s in &t.states {
        assert!(l1(s, &star) < 1e-14);
    }
    assert_eq!(t.mixing_time(1e-9), Some(0.0));
}

#[test]
fn two_vertices_follow_the_closed_form() {
    let h = single_edge();
    let step = 1e-4;
    let t = simulate_diffusion(&h, &SpaceVector::measure(vec![1.0, 0.0]), 2.0, step).unwrap();
    for (time, d) in t.times.iter().zip(&t.l1_to_stationary) {
        let exact = (-2.0 * time).exp();
        assert!((d - exact).abs() <= 4.0 * step * exact + 1e-15, "t={time}: {d} vs {exact}");
    }
    let last = t.final_state();
    assert!((last[0] - 0.5).abs() < 0.5 * (-4.0f64).exp() * 1.01);
}

#[test]
fn mass_is_conserved_and_stays_nonnegative() {
    let mut r = rng(20);
    for _ in 0..10 {
        let h = random_connected(&mut r, 7, 6, 4);
        let phi0 = random_distribution(&mut r, 7);
        let t = simulate_diffusion(&h, &SpaceVector::measure(phi0), 3.0, 0.01).unwrap();
        for s in &t.states {
            assert!((s.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(s.iter().all(|&x| x >= -1e-12));
        }
    }
}

#[test]
fn norm_derivative_and_rayleigh_monotonicity() {
    let mut r = rng(21);
    let step = 1e-3;
    for _ in 0..6 {
        let h = random_connected(&mut r, 6, 5, 4);
        let w = h.weights().to_vec();
        let phi0 = random_distribution(&mut r, 6);
        let t = simulate_diffusion(&h, &SpaceVector::measure(phi0), 0.5, step).unwrap();
        let f = |s: &[f64]| -> Vec<f64> { s.iter().zip(&w).map(|(p, wu)| p / wu).collect() };
        let norm = |g: &[f64]| -> f64 { g.iter().zip(&w).map(|(x, wu)| wu * x * x).sum() };
        for i in 0..t.states.len() - 1 {
            let (a, b) = (f(&t.states[i]), f(&t.states[i + 1]));
            let slope = (norm(&b) - norm(&a)) / (t.times[i + 1] - t.times[i]);
            let analytic = -2.0 * pairwise_numerator(&h, &a);
            assert!((slope - analytic).abs() <= 50.0 * step * (1.0 + analytic.abs()), "{slope} vs {analytic}");
            assert!(t.rayleigh[i + 1] <= t.rayleigh[i] + 10.0 * step * t.rayleigh[i] + 1e-12);
        }
    }
}

#[test]
fn mixing_happens_before_the_spectral_bound() {
    let mut r = rng(22);
    let delta = 0.05;
    for _ in 0..5 {
        let h = random_connected(&mut r, 6, 4, 3);
        let g = gamma2(&h);
        let bound = mixing_time_upper_bound(&h, g, delta);
        let phi0 = random_distribution(&mut r, 6);
        let t = simulate_diffusion(&h, &SpaceVector::measure(phi0), bound, 0.005).unwrap();
        assert!(t.final_distance() <= delta, "distance {} at t = {bound}", t.final_distance());
        assert!(t.mixing_time(delta).unwrap() <= bound);
    }
    let t = simulate_diffusion(&single_edge(), &SpaceVector::measure(vec![1.0, 0.0]), 3.0, 0.001).unwrap();
    let bound = mixing_time_upper_bound(&single_edge(), 2.0, delta);
    assert!(t.mixing_time(delta).unwrap() <= bound);
}

#[test]
fn zero_noise_is_the_deterministic_run() {
    let h: Hypergraph64 = two_edge_path();
    let phi0 = SpaceVector::measure(vec![0.7, 0.1, 0.1, 0.1]);
    let a = simulate_diffusion(&h, &phi0, 1.0, 0.01).unwrap();
    let b = simulate_stochastic(&h, &phi0, 1.0, 0.01, 0.0, 99).unwrap();
    assert_eq!(a.states, b.states);
    assert_eq!(a.l1_to_stationary, b.l1_to_stationary);
    let c = simulate_stochastic(&h, &phi0, 1.0, 0.01, 0.1, 5).unwrap();
    let d = simulate_stochastic(&h, &phi0, 1.0, 0.01, 0.1, 5).unwrap();
    assert_eq!(c.states, d.states);
    assert!(simulate_stochastic(&h, &phi0, 1.0, 0.01, -1.0, 5).is_err());
}

#[test]
fn ornstein_uhlenbeck_variance_on_an_edge() {
    // The transient coordinate z = (φ_a − φ_b)/√2 solves dz = −2z dt + √η dB.
    let h = single_edge();
    let (eta, horizon, step) = (0.5, 0.5, 0.005);
    let runs = 2000;
    let zs: Vec<f64> = (0..runs as u64)
        .map(|seed| {
            let t = simulate_stochastic(&h, &SpaceVector::measure(vec![0.5, 0.5]), horizon, step, eta, seed).unwrap();
            let s = t.final_state();
            (s[0] - s[1]) / 2f64.sqrt()
        })
        .collect();
    let var = zs.iter().map(|z| z * z).sum::<f64>() / runs as f64;
    let gamma = 2.0;
    let exact = eta * (1.0 - (-2.0 * gamma * horizon).exp()) / (2.0 * gamma);
    let se = exact * (2.0 / runs as f64).sqrt();
    assert!((var - exact).abs() <= 4.0 * se + 2.0 * step * exact, "{var} vs {exact}");
}

#[test]
fn noisy_transient_is_dominated() {
    let h: Hypergraph64 = two_edge_path();
    let g = gamma2(&h);
    let (eta, horizon, step) = (0.2, 1.0, 0.01);
    let phi0 = SpaceVector::measure(vec![0.6, 0.2, 0.1, 0.1]);
    let x0 = transient_component(&h, &phi0).into_values();
    let runs = 600;
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let observed: Vec<f64> = (0..runs as u64)
        .map(|seed| {
            let t = simulate_stochastic(&h, &phi0, horizon, step, eta, seed).unwrap();
            norm(transient_component(&h, &SpaceVector::measure(t.final_state().to_vec())).values())
        })
        .collect();
    let mut r = rng(23);
    let decay = (-g * horizon).exp();
    let spread = (eta * (1.0 - (-2.0 * g * horizon).exp()) / (2.0 * g)).sqrt();
    let dominating: Vec<f64> = (0..runs)
        .map(|_| {
            let v: Vec<f64> = x0
                .iter()
                .map(|x| {
                    let z: f64 = StandardNormal.sample(&mut r);
                    decay * x + spread * z
                })
                .collect();
            norm(&v)
        })
        .collect();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let sd = |v: &[f64]| {
        let m = mean(v);
        (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
    };
    let se = (sd(&observed).powi(2) / runs as f64 + sd(&dominating).powi(2) / runs as f64).sqrt();
    assert!(mean(&observed) <= mean(&dominating) + 3.0 * se, "{} vs {}", mean(&observed), mean(&dominating));
}

#[test]
fn slow_start_postconditions() {
    let h: Hypergraph64 = two_edge_path();
    let set = exact_minimizers(&h, 2).unwrap();
    let y = SpaceVector::weighted(set.vectors[1].clone()).to_space(Space::Normalized, h.weights());
    let ry = rayleigh_quotient(&h, &y).unwrap();
    let phi0 = slow_mixing_start(&h, &y).unwrap();
    let p = phi0.values();
    assert!(p.iter().all(|&x| x >= 0.0));
    assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!(l1(p, &h.stationary(1.0)) >= 0.5);
    let yhat = transient_component(&h, &phi0);
    assert!(rayleigh_quotient(&h, &yhat).unwrap() <= 4.0 * ry + 1e-12);

    let split = Hypergraph64::new(4, [(vec![0, 1], 1.0), (vec![2, 3], 1.0)]).unwrap();
    let y = SpaceVector::weighted(vec![1.0, 1.0, -1.0, -1.0]);
    let phi0 = slow_mixing_start(&split, &y).unwrap();
    let on: Vec<bool> = phi0.values().iter().map(|&x| x > 0.0).collect();
    assert!(on == [true, true, false, false] || on == [false, false, true, true]);
    assert_eq!(rayleigh_quotient(&split, &transient_component(&split, &phi0)).unwrap(), 0.0);

    assert!(slow_mixing_start(&h, &SpaceVector::weighted(vec![1.0, 0.0, 0.0, 0.0])).is_err());
}

#[test]
fn slow_start_respects_the_lower_mixing_bound() {
    let h: Hypergraph64 = two_edge_path();
    let set = exact_minimizers(&h, 2).unwrap();
    let y = SpaceVector::weighted(set.vectors[1].clone());
    let gamma = rayleigh_quotient(&h, &y).unwrap();
    let phi0 = slow_mixing_start(&h, &y).unwrap();
    let delta = 0.02;
    let bound = mixing_time_lower_bound(&h, gamma, delta);
    assert!(bound > 0.0);
    let t = simulate_diffusion(&h, &phi0, bound, 0.001).unwrap();
    assert!(t.l1_to_stationary.iter().all(|&d| d >= delta));
}

#[test]
fn cut_from_diffusion() {
    let split = Hypergraph64::new(4, [(vec![0, 1], 1.0), (vec![2, 3], 1.0)]).unwrap();
    let phi0 = SpaceVector::measure(vec![0.5, 0.5, 0.0, 0.0]);
    let cut = cut_from_slow_mixing(&split, &phi0, 1.0, 0.01, 0.1).unwrap();
    assert_eq!(cut.expansion, 0.0);
    assert!(cut.subset_weight <= split.total_weight() / 2.0);

    let h = dumbbell(5);
    let mut p = vec![0.0; 10];
    p[..5].iter_mut().for_each(|x| *x = 0.2);
    let phi0 = SpaceVector::measure(p);
    let (horizon, delta) = (2.0, 0.05);
    let cut = cut_from_slow_mixing(&h, &phi0, horizon, 0.005, delta).unwrap();
    assert!(cut.expansion <= slow_mixing_cut_bound(&h, &phi0, horizon, delta) + 1e-12);
    assert!(cut.subset_weight <= h.total_weight() / 2.0 + 1e-12);
    assert!(cut.expansion < 0.1, "expansion {}", cut.expansion);

    let mixed = cut_from_slow_mixing(&single_edge(), &SpaceVector::measure(vec![1.0, 0.0]), 5.0, 0.01, 0.01);
    assert!(matches!(mixed, Err(Error::Precondition(_))));
}

#[test]
fn large_deterministic_steps_stay_within_the_initial_range() {
    let h = dumbbell(5);
    let mut p = vec![0.0; 10];
    p[0] = 1.0;
    let w = h.weights().to_vec();
    let f0: Vec<f64> = p.iter().zip(&w).map(|(a, b)| a / b).collect();
    let (lo, hi) = (0.0, f0.iter().copied().fold(0.0, f64::max));
    let t = simulate_diffusion(&h, &SpaceVector::measure(p), 200.0, 20.0).unwrap();
    for s in &t.states {
        assert!((s.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for (x, wu) in s.iter().zip(&w) {
            assert!(x / wu >= lo - 1e-12 && x / wu <= hi + 1e-12);
        }
    }
    assert!(t.final_distance() < 1e-6);
}

#[test]
fn large_noisy_steps_diverge() {
    let h = dumbbell(5);
    let mut p = vec![0.0; 10];
    p[0] = 1.0;
    let out = simulate_stochastic(&h, &SpaceVector::measure(p), 1e4, 20.0, 1e-6, 3);
    assert!(matches!(out, Err(Error::Divergence { .. })));
}

#[test]
fn trajectory_csv_has_the_documented_columns() {
    let t = simulate_diffusion(&single_edge(), &SpaceVector::measure(vec![1.0, 0.0]), 0.1, 0.05).unwrap();
    let mut buf = Vec::new();
    t.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,phi_1,phi_2,l1_dist_to_stationary,rayleigh_transient");
    assert_eq!(lines.count(), 3);
}
