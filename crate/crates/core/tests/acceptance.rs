//! Acceptance criteria, one test each. Every test writes a single
//! `criterion N: PASS|FAIL ...` line straight to stderr (bypassing capture).

use dfactor::bounds::{self, BoundTable, Provider, Regime};
use dfactor::graph_core::GraphKey;
use dfactor::oracle::{self, DEFAULT_STATE_BUDGET};
use dfactor::regular_gen::{initial_state, pairing_sample};
use dfactor::samplers::{Algorithm, Sampler, SamplerConfig};
use dfactor::solver;
use dfactor::switchings::{Sign, SwitchClass, SwitchType};
use dfactor::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use std::io::Write;
use std::time::Instant;

const SEEDS: [u64; 3] = [0xA11CE, 0xB0B, 0xC0FFEE];
const SAMPLES: usize = 200_000;

fn report(id: &str, pass: bool, detail: &str) {
    let line = format!("criterion {id}: {} {detail}\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn circulant(n: u32, k: u32) -> Vec<Pair> {
    let mut v: Vec<Pair> = (0..n).map(|i| graph_core::pair(i, (i + k) % n)).collect();
    v.sort();
    v.dedup();
    v
}

fn c8() -> HostInstance {
    load_instance(8, 2, &circulant(8, 1)).unwrap()
}

fn support(h: &HostInstance) -> Vec<GraphKey> {
    oracle::enumerate_d_factors(h, DEFAULT_STATE_BUDGET).unwrap().iter().map(|e| GraphKey::from_edges(h.n(), e)).collect()
}

/// Small instances for the exhaustive checks: n ∈ {6, 8}, d = 2, Δ ≤ 2.
fn small_instances() -> Vec<HostInstance> {
    vec![
        load_instance(6, 2, &[(0, 1), (2, 3), (4, 5)]).unwrap(),
        load_instance(6, 2, &circulant(6, 1)).unwrap(),
        load_instance(6, 2, &[(0, 1), (1, 2), (3, 4)]).unwrap(),
        load_instance(8, 2, &circulant(8, 4)).unwrap(),
        c8(),
    ]
}

fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

#[test]
fn criterion_01_expected_red_edges() {
    let t = Instant::now();
    let small = oracle::expectation_check(&load_instance(5, 2, &[(0, 1), (0, 2)]).unwrap(), DEFAULT_STATE_BUDGET).unwrap();
    let t_small = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let cyc = oracle::expectation_check(&c8(), DEFAULT_STATE_BUDGET).unwrap();
    let t_cyc = t.elapsed().as_secs_f64();
    let pass = small.pass
        && cyc.pass
        && small.mean == int(1)
        && cyc.mean == BigRational::new(16.into(), 7.into())
        && t_small < 1.0
        && t_cyc < 120.0;
    report("1", pass, &format!("mean {} ({t_small:.3}s), mean {} ({t_cyc:.3}s)", small.mean, cyc.mean));
    assert!(pass);
}

#[test]
fn criterion_02_bijection_identity() {
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut moves = 0u128;
    for h in small_instances() {
        let r = oracle::bijection_check(&h, DEFAULT_STATE_BUDGET).unwrap();
        moves += r.rows.iter().map(|row| row.moves).sum::<u128>();
        for row in r.rows.iter().filter(|row| !row.mismatches.is_empty()) {
            bad.push(format!("n={} Δ={} {}: {} mismatches", r.n, r.delta, row.class, row.mismatches.len()));
        }
    }
    let secs = t.elapsed().as_secs_f64();
    let pass = bad.is_empty() && secs <= 600.0;
    report("2", pass, &format!("{moves} forward moves checked in {secs:.1}s {bad:?}"));
    assert!(pass);
}

#[test]
fn criterion_03_sandwich() {
    let mut comparisons = 0;
    let mut skipped = 0;
    let mut bad = Vec::new();
    for h in small_instances() {
        let r = oracle::sandwich_check(&h, DEFAULT_STATE_BUDGET).unwrap();
        comparisons += r.comparisons;
        skipped += r.skipped;
        bad.extend(r.violations);
    }
    let pass = bad.is_empty();
    report("3", pass, &format!("{comparisons} comparisons, {skipped} skipped (bound not positive) {bad:?}"));
    assert!(pass);
}

/// Majority of seeds with p >= 1e-3, and TV <= 0.02 on every seed.
fn uniformity(h: &HostInstance, alg: Algorithm) -> (bool, String) {
    let cfg = SamplerConfig { provider: Provider::Oracle, ..SamplerConfig::new(alg) };
    let s = Sampler::new(h, cfg).unwrap();
    let sup = support(h);
    let mut good = 0;
    let mut tv_ok = true;
    let mut lines = Vec::new();
    for seed in SEEDS {
        let b = s.sample_map(seed, SAMPLES, None, |g| g.key()).unwrap();
        let r = oracle::uniformity_test(&b.outputs, &sup, seed).unwrap();
        good += (r.p_value >= 1e-3) as usize;
        tv_ok &= r.tv <= 0.02;
        lines.push(format!("[TV {:.4} p {:.3} {:.0}s]", r.tv, r.p_value, b.total.wall_ms / 1e3));
    }
    (good >= 2 && tv_ok, format!("support {} {}", sup.len(), lines.join(" ")))
}

#[test]
fn criterion_04_factor_easy_uniform() {
    let t = Instant::now();
    let (ok, detail) = uniformity(&c8(), Algorithm::Easy);
    let secs = t.elapsed().as_secs_f64();
    let pass = ok && secs <= 900.0;
    report("4", pass, &format!("{detail} total {secs:.0}s"));
    assert!(pass);
}

#[test]
fn criterion_05_factor_uniform_uniform() {
    let (ok, detail) = uniformity(&c8(), Algorithm::Uniform);
    report("5a", ok, &format!("oracle provider: {detail}"));
    let (found, tried) = oracle::find_analytic_instance(1, DEFAULT_STATE_BUDGET).unwrap();
    let ok_b = match &found {
        Some(h) => {
            let cfg = SamplerConfig::new(Algorithm::Uniform);
            let s = Sampler::new(h, cfg).unwrap();
            let sup = support(h);
            let mut good = 0;
            let mut tv_ok = true;
            for seed in SEEDS {
                let b = s.sample_map(seed, SAMPLES, None, |g| g.key()).unwrap();
                let r = oracle::uniformity_test(&b.outputs, &sup, seed).unwrap();
                good += (r.p_value >= 1e-3) as usize;
                tv_ok &= r.tv <= 0.02;
            }
            let pass = good >= 2 && tv_ok;
            report("5b", pass, &format!("analytic provider on n={} d={} Δ={}", h.n(), h.d(), h.delta()));
            pass
        }
        None => {
            let why: Vec<String> = tried
                .iter()
                .map(|c| format!("(n={} d={} Δ={}: {})", c.n, c.d, c.delta, c.failures.first().cloned().unwrap_or_default()))
                .collect();
            report("5b", false, &format!("no enumerable instance passes the analytic guards; tried {}", why.join(" ")));
            false
        }
    };
    assert!(ok && ok_b);
}

#[test]
fn criterion_06_factor_approx() {
    let h = c8();
    let s = Sampler::new(&h, SamplerConfig::new(Algorithm::Approx)).unwrap();
    let seed = SEEDS[0];
    let mut keys = Vec::with_capacity(SAMPLES);
    let mut dead = 0usize;
    let mut invalid = 0usize;
    for k in 0..SAMPLES {
        match s.sample(&mut RngStream::new(seed, k as u64)) {
            Ok((g, _)) => {
                invalid += !graph_core::is_d_factor(&h, &g) as usize;
                keys.push(g.key());
            }
            Err(Error::BudgetExhausted { .. }) => dead += 1,
            Err(e) => panic!("{e}"),
        }
    }
    let r = oracle::uniformity_test(&keys, &support(&h), seed).unwrap();
    let pass = dead == 0 && invalid == 0 && r.tv <= 0.05;
    report(
        "6",
        pass,
        &format!("{} valid of {SAMPLES} runs, {dead} stuck in states with no Type I switching, TV {:.4}", keys.len() - invalid, r.tv),
    );
    assert!(pass);
}

#[test]
fn criterion_07_solver() {
    let t = Instant::now();
    let mut rng = RngStream::new(7, 0);
    let h = load_instance(10_000, 3, &pairing_sample(10_000, 3, &mut rng).unwrap()).unwrap();
    let table = BoundTable::analytic(&h, Regime::Uniform).unwrap();
    let p = solver::solve_parameters(&table).unwrap();
    let fixed = solver::fixed_point_residuals(&p, &table);
    let v = solver::validate_parameters(&p, &table, &h);
    let secs = t.elapsed().as_secs_f64();
    let pass = fixed.is_empty() && v.pass() && secs < 10.0;
    report("7", pass, &format!("i1 {} solved and checked in {secs:.2}s {fixed:?} {:?}", table.i1, v));
    assert!(pass);
}

#[test]
fn criterion_08_formula_values() {
    let mut rng = RngStream::new(8, 0);
    let h = load_instance(100, 2, &pairing_sample(100, 2, &mut rng).unwrap()).unwrap();
    let ten = load_instance(10, 2, &circulant(10, 1)).unwrap();
    let checks = [
        ("m̄_I", bounds::uniform_upper(&h, SwitchType::I, 1), int(20_076_800)),
        ("m̲_A", bounds::uniform_lower(&h, SwitchClass::A, 0), int(18_560_000)),
        ("m̲_B1", bounds::uniform_lower(&h, SwitchClass::B1(Sign::Plus), 1), int(44_168)),
        ("m̲_B2", bounds::uniform_lower(&h, SwitchClass::B2(Sign::Plus), 1), int(499_200)),
        ("m̲_C", bounds::uniform_lower(&h, SwitchClass::C(Sign::Plus), 0), int(435_200)),
        ("m̲̂_IIb", bounds::gadget_lower(&h, SwitchType::IIb(Sign::Plus), 2).unwrap(), int(762_228_736)),
        ("ε", bounds::epsilon(&h), BigRational::new(8.into(), 1000.into())),
        ("i1_easy", int(bounds::i1_easy(&ten) as i64), int(4)),
        ("i1_easy C8", int(bounds::i1_easy(&c8()) as i64), int(4)),
        ("i1_uniform d=2 Δ=2", int(bounds::i1_uniform(&h).unwrap() as i64), int(2)),
    ];
    let mut rng = RngStream::new(8, 1);
    let h34 = load_instance(12, 3, &pairing_sample(12, 4, &mut rng).unwrap()).unwrap();
    let i34 = bounds::i1_uniform(&h34).unwrap();
    let bad: Vec<String> =
        checks.iter().filter(|(_, got, want)| got != want).map(|(what, got, want)| format!("{what}: {got} != {want}")).collect();
    let pass = bad.is_empty() && i34 == 8;
    report("8", pass, &format!("{} values {bad:?}", checks.len() + 1));
    assert!(pass);
}

#[test]
fn criterion_09_engine_equivalence() {
    let mut rng = RngStream::new(9, 0);
    let h = load_instance(200, 3, &pairing_sample(200, 2, &mut rng).unwrap()).unwrap();
    let (g, _) = initial_state(&h, bounds::i1_uniform(&h).unwrap(), &mut rng, 10_000).unwrap();
    let r = oracle::engine_trajectory_check(&h, &g, 1000, &mut rng).unwrap();
    let secs = r.wall_ms / 1e3;
    let pass = r.pass() && secs <= 300.0;
    let max_stratum = r.strata.iter().max().copied().unwrap_or(0);
    report(
        "9",
        pass,
        &format!(
            "{} steps, {} queries, {} mismatches, strata up to {max_stratum}, {secs:.0}s (limit 300s)",
            r.steps,
            r.queries,
            r.mismatches.len()
        ),
    );
    assert!(pass, "{:?}", &r.mismatches[..r.mismatches.len().min(5)]);
}

#[test]
fn criterion_10_scaling() {
    let mut per_sample = Vec::new();
    for (n, count) in [(1_000usize, 400usize), (10_000, 100), (100_000, 20)] {
        let mut rng = RngStream::new(10, n as u64);
        let h = load_instance(n, 3, &pairing_sample(n, 3, &mut rng).unwrap()).unwrap();
        let s = Sampler::new(&h, SamplerConfig::new(Algorithm::Approx)).unwrap();
        let b = s.sample_map(10, count, None, |g| g.stratum()).unwrap();
        assert!(b.outputs.iter().all(|&i| i == 0));
        per_sample.push((n, b.total.wall_ms / count as f64));
    }
    let per_vertex: Vec<f64> = per_sample.iter().map(|&(n, ms)| ms / n as f64).collect();
    let spread = per_vertex.iter().cloned().fold(f64::MIN, f64::max) / per_vertex.iter().cloned().fold(f64::MAX, f64::min);
    let mut fractions = Vec::new();
    for (n, count) in [(200usize, 1000usize), (2000, 300)] {
        let mut rng = RngStream::new(11, n as u64);
        let h = load_instance(n, 2, &pairing_sample(n, 2, &mut rng).unwrap()).unwrap();
        let s = Sampler::new(&h, SamplerConfig::new(Algorithm::Easy)).unwrap();
        let b = s.sample_many(11, count, None).unwrap();
        fractions.push(b.total.restart_fraction());
    }
    let pass = spread <= 3.0 && fractions[1] < 0.2 && fractions[1] < fractions[0];
    let times: Vec<String> = per_sample.iter().map(|(n, ms)| format!("n={n}: {ms:.2}ms")).collect();
    report(
        "10",
        pass,
        &format!(
            "approx per sample {} (per-vertex spread {spread:.2}x); easy restart fraction n=200 {:.3}, n=2000 {:.3}",
            times.join(", "),
            fractions[0],
            fractions[1]
        ),
    );
    assert!(pass);
}
