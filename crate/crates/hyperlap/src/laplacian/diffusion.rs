use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::operator::transient_rayleigh;
use super::rate::{rate_weighted, EdgeActivity, RateConfig};
use crate::error::{Error, Result};
use crate::hypergraph::cut::{balanced_parts, check_len, check_orthogonal_to_one};
use crate::hypergraph::{sweep_cut, CutResult, Hypergraph, Space, SpaceVector, SweepMode};
use crate::scalar::{wdot, Scalar};

/// Parameters echoed into every trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffusionConfig {
    pub step: f64,
    pub horizon: f64,
    pub eta: f64,
    pub seed: u64,
}

/// Sampled path of a (possibly noisy) diffusion in measure space.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T> {
    pub times: Vec<T>,
    pub states: Vec<Vec<T>>,
    /// ‖φ_t − φ*‖₁ per sample.
    pub l1_to_stationary: Vec<T>,
    /// Rayleigh quotient of the transient component per sample.
    pub rayleigh: Vec<T>,
    pub config: DiffusionConfig,
}

impl<T: Scalar> Trajectory<T> {
    pub fn final_state(&self) -> &[T] {
        self.states.last().expect("trajectories hold at least the initial state")
    }

    pub fn final_distance(&self) -> T {
        *self.l1_to_stationary.last().expect("non-empty")
    }

    /// Earliest sampled time after which every sample is within `delta` of stationarity.
    pub fn mixing_time(&self, delta: T) -> Option<T> {
        let last_far = self.l1_to_stationary.iter().rposition(|&d| d > delta);
        match last_far {
            None => self.times.first().copied(),
            Some(i) => self.times.get(i + 1).copied(),
        }
    }

    /// CSV with columns `t, phi_1..phi_n, l1_dist_to_stationary, rayleigh_transient`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        let n = self.states.first().map_or(0, Vec::len);
        let mut header = vec!["t".to_string()];
        header.extend((1..=n).map(|i| format!("phi_{i}")));
        header.push("l1_dist_to_stationary".into());
        header.push("rayleigh_transient".into());
        wtr.write_record(&header)?;
        for i in 0..self.times.len() {
            let mut row = vec![self.times[i].to_string()];
            row.extend(self.states[i].iter().map(|x| x.to_string()));
            row.push(self.l1_to_stationary[i].to_string());
            row.push(self.rayleigh[i].to_string());
            wtr.write_record(&row)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Deterministic diffusion dφ/dt = −𝔏φ by explicit Euler, with steps cut at tie events.
pub fn simulate_diffusion<T: Scalar>(
    h: &Hypergraph<T>,
    phi0: &SpaceVector<T>,
    horizon: T,
    step: T,
) -> Result<Trajectory<T>> {
    integrate(h, phi0, horizon, step, T::zero(), 0)
}

/// Euler–Maruyama for dΦ = −𝔏Φ dt + √η W^{1/2} dB. With η = 0 this is exactly the deterministic run.
pub fn simulate_stochastic<T: Scalar>(
    h: &Hypergraph<T>,
    phi0: &SpaceVector<T>,
    horizon: T,
    step: T,
    eta: T,
    seed: u64,
) -> Result<Trajectory<T>> {
    if !(eta >= T::zero()) {
        return Err(Error::domain("noise rate must be non-negative"));
    }
    integrate(h, phi0, horizon, step, eta, seed)
}

fn integrate<T: Scalar>(
    h: &Hypergraph<T>,
    phi0: &SpaceVector<T>,
    horizon: T,
    step: T,
    eta: T,
    seed: u64,
) -> Result<Trajectory<T>> {
    check_len(h, phi0.len())?;
    if !(step > T::zero()) || !(horizon >= T::zero()) || !horizon.is_finite() {
        return Err(Error::domain("step must be positive and horizon non-negative"));
    }
    let w = h.weights();
    let mut phi = phi0.to_space(Space::Measure, w).into_values();
    if phi.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("initial state is not finite"));
    }
    let mass: T = phi.iter().copied().sum();
    let config = DiffusionConfig { step: step.f64(), horizon: horizon.f64(), eta: eta.f64(), seed };
    let steps = (horizon / step - T::tol(1e-9)).ceil().to_usize().unwrap_or(0);
    let stride = steps.div_ceil(1000).max(1);
    let sqrt_w: Vec<T> = w.iter().map(|x| x.sqrt()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noisy = eta > T::zero();

    let mut traj = Trajectory { times: Vec::new(), states: Vec::new(), l1_to_stationary: Vec::new(), rayleigh: Vec::new(), config };
    let record = |traj: &mut Trajectory<T>, t: T, phi: &[T]| {
        let f: Vec<T> = phi.iter().zip(w).map(|(&p, &wu)| p / wu).collect();
        let total: T = phi.iter().copied().sum();
        let star = h.stationary(if noisy { total } else { mass });
        traj.times.push(t);
        traj.l1_to_stationary.push(phi.iter().zip(&star).map(|(&a, &b)| (a - b).abs()).sum());
        traj.rayleigh.push(transient_rayleigh(h, &f));
        traj.states.push(phi.to_vec());
    };
    record(&mut traj, T::zero(), &phi);
    for k in 1..=steps {
        let t_prev = step * T::of_usize(k - 1);
        let dt = step.min(horizon - t_prev);
        if noisy {
            let f: Vec<T> = phi.iter().zip(w).map(|(&p, &wu)| p / wu).collect();
            let rate = rate_weighted(h, &f, RateConfig::default());
            for (p, &rho) in phi.iter_mut().zip(&rate.measure_rate) {
                *p += dt * rho;
            }
            let amp = (eta * dt).sqrt();
            for (p, &s) in phi.iter_mut().zip(&sqrt_w) {
                let xi: f64 = StandardNormal.sample(&mut rng);
                *p += amp * s * T::of(xi);
            }
        } else {
            drift_step(h, &mut phi, dt);
        }
        if phi.iter().any(|x| !x.is_finite()) {
            return Err(Error::Divergence { step: k, time: (t_prev + dt).f64() });
        }
        if k % stride == 0 || k == steps {
            let t = if k == steps { horizon } else { step * T::of_usize(k) };
            record(&mut traj, t, &phi);
        }
    }
    Ok(traj)
}

/// Euler step of length `dt` split at the instants where a vertex reaches the maximum or the
/// minimum of an edge, so that newly tied coordinates stay tied instead of chattering.
fn drift_step<T: Scalar>(h: &Hypergraph<T>, phi: &mut [T], dt: T) {
    let w = h.weights();
    let mut left = dt;
    for _ in 0..8 * h.n() + 8 {
        let f: Vec<T> = phi.iter().zip(w).map(|(&p, &wu)| p / wu).collect();
        let rate = rate_weighted(h, &f, RateConfig::default());
        let tau = first_merge(h, &f, &rate.rate, &rate.edges).map_or(left, |t| t.min(left));
        for (p, &rho) in phi.iter_mut().zip(&rate.measure_rate) {
            *p += tau * rho;
        }
        left -= tau;
        if !(left > T::zero()) {
            return;
        }
    }
    let f: Vec<T> = phi.iter().zip(w).map(|(&p, &wu)| p / wu).collect();
    let rate = rate_weighted(h, &f, RateConfig::default());
    for (p, &rho) in phi.iter_mut().zip(&rate.measure_rate) {
        *p += left * rho;
    }
}

/// Time until some vertex catches up with the extreme group of an edge it belongs to.
fn first_merge<T: Scalar>(h: &Hypergraph<T>, f: &[T], r: &[T], edges: &[EdgeActivity<T>]) -> Option<T> {
    let mut best: Option<T> = None;
    let mut offer = |t: T| {
        if t > T::zero() && best.is_none_or(|b| t < b) {
            best = Some(t);
        }
    };
    for (e, act) in h.edges().iter().zip(edges) {
        if !act.is_active() {
            continue;
        }
        let top = f[act.supremum[0]];
        let r_top = act.supremum.iter().map(|&u| r[u]).fold(T::neg_infinity(), T::max);
        let bottom = f[act.infimum[0]];
        let r_bottom = act.infimum.iter().map(|&u| r[u]).fold(T::infinity(), T::min);
        for &v in e.vertices() {
            if !act.supremum.contains(&v) && r[v] > r_top {
                offer((top - f[v]) / (r[v] - r_top));
            }
            if !act.infimum.contains(&v) && r[v] < r_bottom {
                offer((f[v] - bottom) / (r_bottom - r[v]));
            }
        }
    }
    best
}

/// Mixing time guaranteed by the spectral gap: t ≥ (1/γ₂)·ln(1/(δ√φ*_min)) suffices for a
/// probability distribution to be δ-close to stationarity in ℓ₁.
pub fn mixing_time_upper_bound<T: Scalar>(h: &Hypergraph<T>, gamma2: T, delta: T) -> T {
    let pmin = h.min_vertex_weight() / h.total_weight();
    (T::one() / (delta * pmin.sqrt())).ln() / gamma2
}

/// Time before which a start built by [`slow_mixing_start`] from a vector of Rayleigh
/// quotient at most `gamma` is still δ-far from stationarity.
pub fn mixing_time_lower_bound<T: Scalar>(h: &Hypergraph<T>, gamma: T, delta: T) -> T {
    let pmin = h.min_vertex_weight() / h.total_weight();
    (pmin.sqrt() / (T::of(2.0) * delta)).ln() / (T::of(4.0) * gamma)
}

/// Turns a vector orthogonal to x₁ into a probability distribution that mixes slowly.
pub fn slow_mixing_start<T: Scalar>(h: &Hypergraph<T>, y: &SpaceVector<T>) -> Result<SpaceVector<T>> {
    check_len(h, y.len())?;
    let w = h.weights();
    let f = y.weighted_values(w);
    if f.iter().all(|x| x.is_zero()) {
        return Err(Error::domain("slow-mixing start from the zero vector"));
    }
    check_orthogonal_to_one(w, &f)?;
    let (plus, minus) = balanced_parts(w, &f);
    let transient_norm = |g: &[T]| {
        let mean = g.iter().zip(w).map(|(&x, &wu)| x * wu).sum::<T>() / h.total_weight();
        let c: Vec<T> = g.iter().map(|&x| x - mean).collect();
        wdot(w, &c, &c)
    };
    let part = if transient_norm(&minus) > transient_norm(&plus) { minus } else { plus };
    let measure: Vec<T> = part.iter().zip(w).map(|(&x, &wu)| x * wu).collect();
    let total: T = measure.iter().copied().sum();
    Ok(SpaceVector::measure(measure.into_iter().map(|x| x / total).collect()))
}

/// Runs the diffusion to `horizon` and sweeps the transient part of the final state.
pub fn cut_from_slow_mixing<T: Scalar>(
    h: &Hypergraph<T>,
    phi0: &SpaceVector<T>,
    horizon: T,
    step: T,
    delta: T,
) -> Result<CutResult<T>> {
    let traj = simulate_diffusion(h, phi0, horizon, step)?;
    let dist = traj.final_distance();
    if dist <= delta {
        return Err(Error::Precondition(format!("diffusion already mixed: ‖φ_T − φ*‖₁ = {dist} ≤ δ = {delta}")));
    }
    let w = h.weights();
    let f: Vec<T> = traj.final_state().iter().zip(w).map(|(&p, &wu)| p / wu).collect();
    let mean = f.iter().zip(w).map(|(&x, &wu)| x * wu).sum::<T>() / h.total_weight();
    let g: Vec<T> = f.iter().map(|&x| x - mean).collect();
    sweep_cut(h, &SpaceVector::weighted(g), SweepMode::Balanced)
}

/// Bound on the expansion of the cut from [`cut_from_slow_mixing`]: with
/// R = (1/T)·ln(‖φ₀ − φ*‖₁ / (√φ*_min·δ)), the cut satisfies φ(S) ≤ R + 2√(R / r_min).
pub fn slow_mixing_cut_bound<T: Scalar>(h: &Hypergraph<T>, phi0: &SpaceVector<T>, horizon: T, delta: T) -> T {
    let phi = phi0.to_space(Space::Measure, h.weights()).into_values();
    let mass: T = phi.iter().copied().sum();
    let star = h.stationary(mass);
    let dist: T = phi.iter().zip(&star).map(|(&a, &b)| (a - b).abs()).sum();
    let pmin = h.min_vertex_weight() / h.total_weight() * mass;
    let r = ((dist / (pmin.sqrt() * delta)).ln() / horizon).max(T::zero());
    r + T::of(2.0) * (r / T::of_usize(h.r_min())).sqrt()
}
