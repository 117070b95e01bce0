use std::collections::BTreeMap;

use serde_json::{json, Value};

use schurdist::distillation::{
    distill_law, dominance_check, exact_tail, expected_ebits, guaranteed_rate, probability_upper_bound, rate_statistics,
    tail_bound, ProtocolSimulator,
};
use schurdist::ensembles::{
    bernstein_epsilon, concentration_check, entropy_test_instance, moment_distance,
    planted_entropies, EnsembleSpec, BERNSTEIN_FAILURE,
};
use schurdist::partitions::Partition;
use schurdist::quantum::{haar_state, BipartiteState, DensityOperator, Spectrum, C64};
use schurdist::sampling::trial_rng;
use schurdist::schur_weyl::{
    schur_law, schur_law_bruteforce, schur_law_jacobi_trudi, schur_law_via_characters,
    verify_iid_decomposition,
};
use schurdist::tomography::{locc_tomography_plan, pct_budget, rate_bounds};
use schurdist::Limits;

use crate::args::*;
use crate::report::{to_value, ExperimentReport};
use crate::{CliError, Context};

type Out = Result<ExperimentReport, CliError>;

pub fn run(cmd: &Command, seed: u64, limits: &Limits) -> Out {
    match cmd {
        Command::RateTable(a) => rate_table(a, seed, limits),
        Command::SchurLaw(a) => schur_law_cmd(a, seed, limits),
        Command::VerifyIid(a) => verify_iid(a, seed, limits),
        Command::Bounds(a) => bounds(a, seed, limits),
        Command::Dominance(a) => dominance(a, seed, limits),
        Command::MomentDistance(a) => moment_distance_cmd(a, seed, limits),
        Command::Concentration(a) => concentration(a, seed, limits),
        Command::PlantedEntropy(a) => planted_entropy(a, seed),
        Command::EntropyTestInstance(a) => entropy_test(a, seed, limits),
        Command::TomoPlan(a) => tomo_plan(a, seed),
        Command::RateBounds(a) => rate_bounds_cmd(a, seed),
        Command::RunProtocol(a) => run_protocol_cmd(a, seed, limits),
    }
}

fn spectrum(p: &[f64]) -> Result<Spectrum, CliError> {
    if p.is_empty() {
        return Err(CliError::Usage("--spectrum is required".into()));
    }
    Spectrum::new(p.to_vec()).ctx("--spectrum")
}

fn rate_table(a: &RateTableArgs, seed: u64, limits: &Limits) -> Out {
    let s = spectrum(&a.spectrum)?;
    let mut r = ExperimentReport::new("rate-table", seed, &["k", "lambda", "prob", "ebits"]);
    r.param("spectrum", &a.spectrum.0).param("k", &a.k).param("thresholds", &a.thresholds);
    let mut per_k = Vec::new();
    for &k in &a.k {
        let rep = rate_statistics(&s, k, &a.thresholds, limits).ctx(format_args!("--k {k}"))?;
        for o in &rep.outcomes {
            r.row(vec![json!(k), to_value(&o.lambda), json!(o.probability), json!(o.ebits)]);
        }
        per_k.push(json!({
            "k": k,
            "expected_ebits": rep.expected_ebits,
            "expected_rate": rep.expected_rate,
            "tail_probabilities": rep.thresholds,
            "guaranteed_rate": rep.guaranteed,
            "guarantee_preconditions_met": rep.guaranteed.preconditions_met(),
        }));
    }
    r.summary("s_min", schurdist::quantum::renyi_entropy(&s, schurdist::quantum::RenyiOrder::Infinity));
    r.summary("per_k", per_k);
    Ok(r)
}

fn schur_law_cmd(a: &SchurLawArgs, seed: u64, limits: &Limits) -> Out {
    let s = spectrum(&a.spectrum)?;
    let law = match a.method {
        LawMethod::Branching => schur_law(&s, a.k, limits),
        LawMethod::Characters => schur_law_via_characters(&s, a.k, limits),
        LawMethod::JacobiTrudi => schur_law_jacobi_trudi(&s, a.k, limits),
        LawMethod::Bruteforce => DensityOperator::diagonal(s.probabilities(), vec![s.len()])
            .and_then(|rho| schur_law_bruteforce(&rho, a.k, limits)),
    }
    .ctx("schur-law")?;
    let mut r = ExperimentReport::new("schur-law", seed, &["lambda", "prob"]);
    r.param("spectrum", &a.spectrum.0).param("k", a.k).param("method", format!("{:?}", a.method).to_lowercase());
    for e in &law.entries {
        r.row(vec![to_value(&e.lambda), json!(e.prob)]);
    }
    r.summary("total", law.total()).summary("outcomes", law.entries.len());
    Ok(r)
}

fn verify_iid(a: &VerifyIidArgs, seed: u64, limits: &Limits) -> Out {
    let dim = 1usize << (a.n_a + a.n_b);
    let psi = if a.amplitudes.is_empty() {
        let s = haar_state(dim, &mut trial_rng(seed, 0));
        BipartiteState::new(s, a.n_a, a.n_b)
    } else {
        if a.amplitudes.len() != dim {
            return Err(CliError::Usage(format!("--amplitudes: expected {dim} values, got {}", a.amplitudes.len())));
        }
        let norm = a.amplitudes.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(CliError::Usage("--amplitudes: zero vector".into()));
        }
        BipartiteState::from_amplitudes(a.amplitudes.iter().map(|x| C64::new(x / norm, 0.0)).collect(), a.n_a, a.n_b)
    }
    .ctx("--amplitudes")?;
    let rep = verify_iid_decomposition(&psi, a.k, limits).ctx(format_args!("--k {}", a.k))?;
    let mut r = ExperimentReport::new(
        "verify-iid",
        seed,
        &["lambda", "probability", "dim_v", "ebits", "cross_mass", "cluster_sizes", "multiplicities_divisible", "fidelity"],
    );
    r.param("n_a", a.n_a).param("n_b", a.n_b).param("k", a.k).param("amplitudes", &a.amplitudes);
    for e in &rep.entries {
        r.row(vec![
            to_value(&e.lambda),
            json!(e.probability),
            json!(e.dim_v),
            json!(e.ebits),
            json!(e.cross_mass),
            to_value(&e.cluster_sizes),
            json!(e.multiplicities_divisible),
            json!(e.fidelity),
        ]);
    }
    r.summary("passed", rep.passed())
        .summary("max_cross_mass", rep.max_cross_mass())
        .summary("min_fidelity", rep.min_fidelity());
    Ok(r)
}

fn bounds(a: &BoundsArgs, seed: u64, limits: &Limits) -> Out {
    let s = spectrum(&a.spectrum)?;
    let rep = rate_statistics(&s, a.k, &[], limits).ctx(format_args!("--k {}", a.k))?;
    let mut r = ExperimentReport::new("bounds", seed, &["lambda", "prob", "upper_bound", "ebits"]);
    r.param("spectrum", &a.spectrum.0).param("k", a.k).param("c", a.c);
    for o in &rep.outcomes {
        r.row(vec![
            to_value(&o.lambda),
            json!(o.probability),
            json!(probability_upper_bound(&o.lambda, &s, a.k)),
            json!(o.ebits),
        ]);
    }
    r.summary("tail_bound", tail_bound(a.k, a.c))
        .summary("exact_tail", exact_tail(&s, a.k, a.c, limits).ctx("exact tail")?)
        .summary("guaranteed_rate", guaranteed_rate(rep.s_min, a.k));
    Ok(r)
}

fn dominance(a: &SpectrumK, seed: u64, limits: &Limits) -> Out {
    let s = spectrum(&a.spectrum)?;
    let rep = dominance_check(&s, a.k, limits).ctx(format_args!("--k {}", a.k))?;
    let mut r = ExperimentReport::new("dominance", seed, &["ebits", "tail_k", "tail_k_plus_one"]);
    r.param("spectrum", &a.spectrum.0).param("k", a.k);
    for row in &rep.rows {
        r.row(vec![json!(row.ebits), json!(row.tail_k), json!(row.tail_k_plus_one)]);
    }
    r.summary("holds", rep.holds).summary("max_violation", rep.max_violation);
    Ok(r)
}

/// The subsystem size setting the `k²/2^m` scale, if either side has one.
fn subsystem_m(spec: &EnsembleSpec) -> Option<usize> {
    match spec {
        EnsembleSpec::HaarSubsystem { m, .. } | EnsembleSpec::RestrictedHaarSubsystem { m, .. } => Some(*m),
        EnsembleSpec::Pseudoentangled { inner, .. } => subsystem_m(inner),
        EnsembleSpec::Haar { .. } => None,
    }
}

fn moment_distance_cmd(a: &MomentDistanceArgs, seed: u64, limits: &Limits) -> Out {
    let d = moment_distance(&a.a, &a.b, a.k, a.samples, seed, limits).ctx("moment-distance")?;
    let mut r = ExperimentReport::new(
        "moment-distance",
        seed,
        &["k", "trace_norm", "trace_distance", "error_budget", "method"],
    );
    r.param("a", a.a.to_string()).param("b", a.b.to_string()).param("k", a.k).param("samples", a.samples);
    r.row(vec![json!(d.k), json!(d.trace_norm), json!(d.trace_distance), json!(d.error_budget), json!(d.method)]);
    let m = match (subsystem_m(&a.a), subsystem_m(&a.b)) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    r.summary("exact", d.exact)
        .summary("reference_m", m)
        .summary("reference_scale", m.map(|m| (a.k * a.k) as f64 / 2f64.powi(m as i32)));
    if !d.exact {
        r.summary("samples", a.samples)
            .summary("bernstein_epsilon", bernstein_epsilon(a.a.dim(), a.k, a.samples, BERNSTEIN_FAILURE))
            .summary("failure_probability", BERNSTEIN_FAILURE);
    }
    Ok(r)
}

fn concentration(a: &ConcentrationArgs, seed: u64, limits: &Limits) -> Out {
    let mut r = ExperimentReport::new(
        "concentration",
        seed,
        &["samples", "empirical_trace_norm", "bernstein_epsilon", "pass"],
    );
    r.param("ensemble", a.ensemble.to_string()).param("k", a.k).param("samples", &a.samples);
    let mut norms = Vec::new();
    for (i, &n) in a.samples.iter().enumerate() {
        let rep = concentration_check(&a.ensemble, a.k, n, &mut trial_rng(seed, i as u64), limits)
            .ctx(format_args!("--samples {n}"))?;
        r.row(vec![json!(n), json!(rep.empirical_trace_norm), json!(rep.bernstein_epsilon), json!(rep.pass)]);
        norms.push(rep.empirical_trace_norm);
    }
    let all_pass = r.rows.iter().all(|row| row[3] == json!(true));
    r.summary("all_pass", all_pass)
        .summary("decreasing", norms.windows(2).all(|w| w[1] <= w[0]))
        .summary("failure_probability", BERNSTEIN_FAILURE);
    Ok(r)
}

fn planted_entropy(a: &PlantedEntropyArgs, seed: u64) -> Out {
    let p = planted_entropies(a.eta, a.s_min, a.inner_s1, a.inner_smin).ctx("planted-entropy")?;
    let mut r = ExperimentReport::new("planted-entropy", seed, &["s1", "s_min"]);
    r.param("eta", a.eta).param("s_min", a.s_min).param("inner_s1", a.inner_s1).param("inner_smin", a.inner_smin);
    r.row(vec![json!(p.s1), json!(p.s_min)]);
    Ok(r)
}

fn entropy_test(a: &EntropyTestArgs, seed: u64, limits: &Limits) -> Out {
    let inst = entropy_test_instance(a.alpha, a.beta, a.n, a.samples, &mut trial_rng(seed, 0), limits)
        .ctx("entropy-test-instance")?;
    let mut r = ExperimentReport::new("entropy-test-instance", seed, &["family", "spec", "s1", "s_min"]);
    r.param("alpha", a.alpha).param("beta", a.beta).param("n", a.n).param("samples", a.samples);
    r.row(vec![
        json!("haar"),
        json!(inst.haar_family.to_string()),
        json!(inst.haar_entropies.s1),
        json!(inst.haar_entropies.s_min),
    ]);
    r.row(vec![
        json!("subsystem"),
        json!(inst.subsystem_family.to_string()),
        json!(inst.subsystem_entropies.s1),
        json!(inst.subsystem_entropies.s_min),
    ]);
    r.summary("m", inst.m).summary("eta", inst.eta).summary("sample_lower_bound", inst.sample_lower_bound);
    Ok(r)
}

fn tomo_plan(a: &TomoPlanArgs, seed: u64) -> Out {
    let default_budget = || {
        let d = 1u64.checked_shl(a.n as u32).filter(|_| a.n < 64).ok_or_else(|| CliError::Usage(format!("--n {} too large", a.n)))?;
        pct_budget(d, a.eps).ctx("--eps")
    };
    let ka = match a.ka {
        Some(v) => v,
        None => default_budget()?,
    };
    let kb = match a.kb {
        Some(v) => v,
        None => default_budget()?,
    };
    let plan = locc_tomography_plan(a.n, a.eps, a.kn, ka, kb, a.s_min).ctx("tomo-plan")?;
    let mut r = ExperimentReport::new("tomo-plan", seed, &["branch", "branch_copies", "total_copies"]);
    r.param("n", a.n).param("eps", a.eps).param("kn", a.kn).param("ka", ka).param("kb", kb).param("s_min", a.s_min);
    r.row(vec![to_value(plan.branch), json!(plan.branch_copies), json!(plan.total_copies)]);
    if let Value::Object(fields) = to_value(&plan) {
        let fields: BTreeMap<String, Value> = fields.into_iter().collect();
        for (k, v) in fields {
            r.summary(&k, v);
        }
    }
    Ok(r)
}

fn rate_bounds_cmd(a: &RateBoundsArgs, seed: u64) -> Out {
    let b = rate_bounds(a.s1, a.na, a.p, a.eps).ctx("rate-bounds")?;
    let mut r = ExperimentReport::new("rate-bounds", seed, &["distill_upper", "dilute_lower", "dilute_informative"]);
    r.param("s1", a.s1).param("na", a.na).param("p", a.p).param("eps", a.eps);
    r.row(vec![json!(b.distill_upper), json!(b.dilute_lower), json!(b.dilute_informative)]);
    Ok(r)
}

/// `Σ √p_i |i⟩|i⟩`, zero-padded to a power-of-two local dimension.
fn schmidt_state(p: &[f64]) -> Result<BipartiteState, CliError> {
    let s = spectrum(p)?;
    let d = p.len().next_power_of_two();
    let n = d.trailing_zeros() as usize;
    let mut amps = vec![C64::new(0.0, 0.0); d * d];
    for (i, &pi) in s.probabilities().iter().enumerate() {
        amps[i * d + i] = C64::new(pi.sqrt(), 0.0);
    }
    BipartiteState::from_amplitudes(amps, n, n).ctx("--schmidt")
}

fn run_protocol_cmd(a: &RunProtocolArgs, seed: u64, limits: &Limits) -> Out {
    let psi = schmidt_state(&a.schmidt)?;
    let sim = ProtocolSimulator::new(&psi, a.k, limits).ctx(format_args!("--k {}", a.k))?;
    let runs = sim.run_many(seed, a.trials);
    let mut by_label: BTreeMap<Partition, (u64, f64, f64, f64)> = BTreeMap::new();
    for run in &runs {
        let e = by_label.entry(run.lambda.clone()).or_insert((0, run.probability, run.ebits, f64::INFINITY));
        e.0 += 1;
        e.3 = e.3.min(run.fidelity);
    }
    let mut r = ExperimentReport::new(
        "run-protocol",
        seed,
        &["lambda", "count", "frequency", "probability", "ebits", "min_fidelity"],
    );
    r.param("schmidt", &a.schmidt.0).param("k", a.k).param("trials", a.trials);
    // descending labels, as in the exact law
    for (lambda, (count, p, ebits, fid)) in by_label.iter().rev() {
        r.row(vec![
            to_value(lambda),
            json!(count),
            json!(*count as f64 / a.trials.max(1) as f64),
            json!(p),
            json!(ebits),
            json!(fid),
        ]);
    }
    let mean = runs.iter().map(|x| x.ebits).sum::<f64>() / runs.len().max(1) as f64;
    let law = distill_law(&spectrum(&a.schmidt)?, a.k, limits).ctx(format_args!("--k {}", a.k))?;
    r.summary("mean_ebits", mean)
        .summary("exact_expected_ebits", expected_ebits(&law))
        .summary("min_fidelity", runs.iter().map(|x| x.fidelity).fold(1.0, f64::min));
    Ok(r)
}
