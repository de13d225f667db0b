//! Subcommand implementations. Each returns the JSON report it also writes to the output
//! directory.

use std::path::Path;

use hyperlap::laplacian::{
    apply_laplacian, cut_from_slow_mixing, mixing_time_lower_bound, mixing_time_upper_bound, rayleigh_quotient,
    simulate_stochastic, slow_mixing_cut_bound, slow_mixing_start,
};
use hyperlap::partition::{
    demand_sparsity_bruteforce, load_demands, multiway_partition, required_parts, small_set_expansion_with,
    sparsest_cut_demands_with, DemandConfig, DemandInstance, DemandSdpConfig, SseConfig,
};
use hyperlap::spectral::{
    approx_procedural_minimizers, exact_gamma, exact_minimizers, minimaximizer_report, Method, MinimizerSet, SdpConfig,
    ORACLE_MAX_N,
};
use hyperlap::{
    expansion, hypergraph_expansion_bruteforce, load_hypergraph, sweep_cut, Error, Hypergraph64, Result, Space,
    SpaceVector, SweepMode,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::{envelope, write_cuts_csv, write_partition_csv, Sink};
use crate::verify::{verify_examples, ExampleFixtures};
use crate::{Cli, Command, CutArgs, DemandsArgs, DiffuseArgs, MinimizerArgs, MultiwayArgs, SpectralArgs, SseArgs};

/// Slack for the inequality checks reported by the commands.
const CHECK_TOL: f64 = 1e-9;

pub struct Outcome {
    pub report: Value,
    /// False when a checked inequality or closed form failed.
    pub passed: bool,
    pub diagnostics: Vec<String>,
}

pub fn dispatch(cli: &Cli) -> Result<Outcome> {
    let (seed, out) = (cli.seed, cli.out.as_path());
    match &cli.command {
        Command::Spectral(a) => spectral(a, seed, out),
        Command::Diffuse(a) => diffuse(a, seed, out),
        Command::Cut(a) => cut(a, seed, out),
        Command::Sse(a) => sse(a, seed, out),
        Command::Multiway(a) => multiway(a, seed, out),
        Command::Demands(a) => demands(a, seed, out),
        Command::VerifyExamples => verify(&ExampleFixtures::default(), out),
    }
}

fn config(seed: u64, args: &impl Serialize) -> Value {
    json!({ "seed": seed, "args": args })
}

/// Prefixes I/O errors with the offending path.
fn with_path<T>(r: Result<T>, path: &Path) -> Result<T> {
    r.map_err(|e| match e {
        Error::Io(io) => Error::Io(std::io::Error::new(io.kind(), format!("{}: {io}", path.display()))),
        other => other,
    })
}

fn load(path: &Path) -> Result<Hypergraph64> {
    with_path(load_hypergraph(path), path)
}

/// Reads `vertex,f1,...` rows; `#` lines are comments.
pub fn read_vectors(path: &Path, n: usize) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = rec
            .iter()
            .skip(1)
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse { line: i + 2, msg: e.to_string() })?;
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::Validation(format!("vector file has {} rows for {n} vertices", rows.len())));
    }
    let k = rows.first().map_or(0, Vec::len);
    if k == 0 || rows.iter().any(|r| r.len() != k) {
        return Err(Error::Validation("vector file rows must all hold the same positive number of values".into()));
    }
    Ok((0..k).map(|j| rows.iter().map(|r| r[j]).collect()).collect())
}

/// k minimizers from the requested source: a vector file, the oracle, or the SDP. Without a
/// choice the oracle is used when it fits.
fn minimizers(h: &Hypergraph64, k: usize, src: &MinimizerArgs, seed: u64) -> Result<(MinimizerSet<f64>, &'static str)> {
    if let Some(path) = &src.vectors {
        let mut vs = read_vectors(path, h.n())?;
        if vs.len() < k {
            return Err(Error::Validation(format!("vector file holds {} vectors, {k} requested", vs.len())));
        }
        vs.truncate(k);
        return Ok((MinimizerSet::from_vectors(h, vs, Method::Given)?, "given"));
    }
    if src.oracle || (!src.sdp && h.n() <= ORACLE_MAX_N) {
        return Ok((exact_minimizers(h, k)?, "oracle"));
    }
    let cfg = SdpConfig { iterations: src.sdp_iterations, restarts: src.sdp_restarts, ..SdpConfig::default() };
    Ok((approx_procedural_minimizers(h, k, &cfg, src.trials, seed)?, "sdp"))
}

fn spectral(a: &SpectralArgs, seed: u64, out: &Path) -> Result<Outcome> {
    let h = load(&a.file)?;
    let (set, method) = minimizers(&h, a.k, &a.source, seed)?;
    let mut passed = true;
    let mut result = json!({
        "n": h.n(),
        "m": h.m(),
        "method": method,
        "minimizers": set.metadata_json(),
        "orthonormality_error": set.orthonormality_error(h.weights()),
        "minimaximizers": minimaximizer_report(&h, &set, None),
    });
    if method == "oracle" && set.len() >= 2 {
        let x = SpaceVector::weighted(set.vectors[1].clone()).to_space(Space::Normalized, h.weights());
        let lx = apply_laplacian(&h, &x)?;
        let g = set.ratios[1];
        let res: f64 = lx.values().iter().zip(x.values()).map(|(p, q)| (p - g * q).powi(2)).sum::<f64>().sqrt();
        let nx: f64 = x.values().iter().map(|q| q * q).sum::<f64>().sqrt();
        result["eigen_residual"] = json!(res / nx);
    }
    if method == "sdp" && h.n() <= ORACLE_MAX_N {
        let log_r = (h.r_max().max(2) as f64).ln();
        let mut rows = Vec::new();
        for i in 1..set.len() {
            let prior = MinimizerSet::from_vectors(&h, set.vectors[..i].to_vec(), Method::Given)?;
            let (gamma, _) = exact_gamma(&h, &prior)?;
            let bound = 384.0 * log_r * gamma;
            let holds = set.ratios[i] <= bound + CHECK_TOL;
            passed &= holds;
            rows.push(json!({ "index": i + 1, "ratio": set.ratios[i], "gamma": gamma, "bound": bound, "holds": holds }));
        }
        result["rounding_bound"] = json!(rows);
    }
    let report = envelope("spectral", &config(seed, a), result)?;
    let sink = Sink::new(out, &report["config"])?;
    set.write_vectors_csv(sink.csv("minimizers.csv")?)?;
    sink.json("spectral.json", &report)?;
    Ok(Outcome { report, passed, diagnostics: Vec::new() })
}

fn diffuse(a: &DiffuseArgs, seed: u64, out: &Path) -> Result<Outcome> {
    let h = load(&a.file)?;
    let n = h.n();
    let mut result = json!({});
    let phi0 = if a.slow_start {
        let (set, method) = minimizers(&h, 2, &a.source, seed)?;
        let y = SpaceVector::weighted(set.vectors[1].clone());
        let gamma = rayleigh_quotient(&h, &y)?;
        result["slow_start"] = json!({
            "method": method,
            "rayleigh": gamma,
            "mixing_lower_bound": mixing_time_lower_bound(&h, gamma, a.delta),
        });
        slow_mixing_start(&h, &y)?
    } else if let Some(s) = &a.start {
        if s.len() != n {
            return Err(Error::Validation(format!("start has {} values for {n} vertices", s.len())));
        }
        SpaceVector::measure(s.clone())
    } else {
        let mut p = vec![0.0; n];
        p[0] = 1.0;
        SpaceVector::measure(p)
    };
    let traj = simulate_stochastic(&h, &phi0, a.horizon, a.step, a.eta, seed)?;
    result["start"] = json!(phi0.values());
    result["final_state"] = json!(traj.final_state());
    result["final_distance"] = json!(traj.final_distance());
    result["mixing_time"] = json!(traj.mixing_time(a.delta));
    if n <= ORACLE_MAX_N && h.is_connected() && n > 1 {
        let (g, _) = exact_gamma(&h, &MinimizerSet::constant(&h, Method::Oracle))?;
        result["gamma2"] = json!(g);
        result["mixing_upper_bound"] = json!(mixing_time_upper_bound(&h, g, a.delta));
    }
    let mut cut_rows = None;
    if a.cut {
        let c = cut_from_slow_mixing(&h, &phi0, a.horizon, a.step, a.delta)?;
        let bound = slow_mixing_cut_bound(&h, &phi0, a.horizon, a.delta);
        result["cut"] = json!({ "cut": c, "bound": bound, "holds": c.expansion <= bound + CHECK_TOL });
        cut_rows = Some(c);
    }
    let report = envelope("diffuse", &config(seed, a), result)?;
    let sink = Sink::new(out, &report["config"])?;
    traj.write_csv(sink.csv("trajectory.csv")?)?;
    if let Some(c) = &cut_rows {
        write_cuts_csv(sink.csv("cut.csv")?, &[("diffusion", c)])?;
    }
    sink.json("diffuse.json", &report)?;
    Ok(Outcome { report, passed: true, diagnostics: Vec::new() })
}

fn cut(a: &CutArgs, seed: u64, out: &Path) -> Result<Outcome> {
    let h = load(&a.file)?;
    let w = h.weights().to_vec();
    let (set, method) = minimizers(&h, 2, &a.source, seed)?;
    let gamma2 = set.ratios[1];
    let exact = method == "oracle";
    let f = match &a.vector {
        Some(v) => {
            if v.len() != h.n() {
                return Err(Error::Validation(format!("vector has {} values for {} vertices", v.len(), h.n())));
            }
            let mean = v.iter().zip(&w).map(|(x, y)| x * y).sum::<f64>() / h.total_weight();
            v.iter().map(|x| x - mean).collect()
        }
        None => set.vectors[1].clone(),
    };
    let sweep = sweep_cut(&h, &SpaceVector::weighted(f), SweepMode::Balanced)?;
    let brute = match hypergraph_expansion_bruteforce(&h) {
        Ok((_, s)) => Some(expansion(&h, &s)?),
        Err(Error::Capacity { .. }) => None,
        Err(e) => return Err(e),
    };
    let mut passed = true;
    let mut result = json!({ "method": method, "gamma2": gamma2, "sweep": sweep, "bruteforce": brute });
    if let Some(b) = &brute {
        // The exhaustive set is the smaller-weight side, so its expansion is the symmetrized φ_H.
        let phi = b.expansion;
        result["phi_h"] = json!(phi);
        if exact {
            let lower = gamma2 / 2.0;
            let upper = 2.0 * gamma2.sqrt();
            let refined = gamma2 + 2.0 * (gamma2 / h.r_min() as f64).sqrt();
            let holds = lower <= phi + CHECK_TOL && phi <= upper + CHECK_TOL && phi <= refined + CHECK_TOL;
            passed &= holds;
            result["sandwich"] = json!({ "lower": lower, "upper": upper, "refined_upper": refined, "holds": holds });
        }
    }
    let report = envelope("cut", &config(seed, a), result)?;
    let sink = Sink::new(out, &report["config"])?;
    let mut rows = vec![("sweep", &sweep)];
    if let Some(b) = &brute {
        rows.push(("bruteforce", b));
    }
    write_cuts_csv(sink.csv("cut.csv")?, &rows)?;
    sink.json("cut.json", &report)?;
    Ok(Outcome { report, passed, diagnostics: Vec::new() })
}

fn sse(a: &SseArgs, seed: u64, out: &Path) -> Result<Outcome> {
    let h = load(&a.file)?;
    let cfg = SseConfig { beta: a.beta, failure_probability: a.failure_probability, ..SseConfig::default() };
    let (set, method) = minimizers(&h, a.k, &a.source, seed)?;
    let res = small_set_expansion_with(&h, &set, &cfg, seed)?;
    let size_bound = 24.0 * h.n() as f64 / a.k as f64;
    let size_ok = res.cut.subset.len() as f64 <= size_bound;
    let result = json!({
        "method": method,
        "sse": res,
        "resolved": cfg,
        "rounds_budget": cfg.rounds(),
        "size_bound": size_bound,
        "size_ok": size_ok,
    });
    let report = envelope("sse", &config(seed, a), result)?;
    let sink = Sink::new(out, &report["config"])?;
    write_cuts_csv(sink.csv("sse.csv")?, &[("small-set", &res.cut)])?;
    sink.json("sse.json", &report)?;
    Ok(Outcome { report, passed: size_ok, diagnostics: Vec::new() })
}

fn multiway(a: &MultiwayArgs, seed: u64, out: &Path) -> Result<Outcome> {
    let h = load(&a.file)?;
    let (set, method) = minimizers(&h, a.k, &a.source, seed)?;
    let res = multiway_partition(&h, &set, a.eps, seed)?;
    let result = json!({ "method": method, "required": required_parts(a.k, a.eps), "partition": res });
    let report = envelope("multiway", &config(seed, a), result)?;
    let sink = Sink::new(out, &report["config"])?;
    write_partition_csv(sink.csv("multiway.csv")?, &res.parts, &res.merged_measures)?;
    sink.json("multiway.json", &report)?;
    Ok(Outcome { report, passed: true, diagnostics: Vec::new() })
}

fn demands(a: &DemandsArgs, seed: u64, out: &Path) -> Result<Outcome> {
    let h = load(&a.file)?;
    let inst = DemandInstance::new(h, with_path(load_demands(&a.demands), &a.demands)?)?;
    let cfg = DemandConfig {
        sdp: DemandSdpConfig { restarts: a.restarts, ..DemandSdpConfig::default() },
        projections: a.projections,
    };
    let res = sparsest_cut_demands_with(&inst, &cfg, seed)?;
    let mut passed = true;
    let mut result = json!({ "cut": res, "resolved": cfg });
    match demand_sparsity_bruteforce(&inst) {
        Ok((best, set)) => {
            let holds = res.sparsity >= best * (1.0 - CHECK_TOL) - CHECK_TOL
                && res.sdp_objective <= best * (1.0 + 1e-6) + CHECK_TOL
                && res.sparsity <= res.line_ratio * (1.0 + CHECK_TOL) + CHECK_TOL;
            passed &= holds;
            let ratio = if best > 0.0 { Some(res.sparsity / best) } else { None };
            result["bruteforce"] = json!({ "sparsity": best, "subset": set, "ratio": ratio, "holds": holds });
        }
        Err(Error::Capacity { .. }) => {}
        Err(e) => return Err(e),
    }
    let report = envelope("demands", &config(seed, a), result)?;
    let sink = Sink::new(out, &report["config"])?;
    write_cuts_csv(sink.csv("demands.csv")?, &[("demands", &res.cut)])?;
    sink.json("demands.json", &report)?;
    Ok(Outcome { report, passed, diagnostics: Vec::new() })
}

/// Runs the reference checks on `fx` and writes `verify.json`.
pub fn verify(fx: &ExampleFixtures, out: &Path) -> Result<Outcome> {
    let rep = verify_examples(fx);
    let diagnostics = rep
        .failures()
        .map(|c| {
            let why = c.error.as_deref().map(|e| format!(" ({e})")).unwrap_or_default();
            format!("FAIL {}: {}: expected {:?}, got {:?}{why}", c.fixture, c.name, c.expected, c.actual)
        })
        .collect();
    let passed = rep.passed();
    let report = envelope("verify-examples", &json!({}), serde_json::to_value(&rep)?)?;
    Sink::new(out, &report["config"])?.json("verify.json", &report)?;
    Ok(Outcome { report, passed, diagnostics })
}
