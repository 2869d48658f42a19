//! FactorEasy, FactorUniform and FactorApprox.
//!
//! Every sampler starts from a uniform d-regular graph with few red edges and
//! walks down the strata. Rejections always restart from a fresh initial draw.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{i1_easy, i1_uniform, BoundTable, Provider, Regime};
use crate::counting::{Counter, EngineKind};
use crate::error::{Error, Result};
use crate::graph_core::{is_d_factor, ColoredState, GraphKey, HostInstance, Vertex};
use crate::oracle::{oracle_bound_table, DEFAULT_STATE_BUDGET};
use crate::regular_gen::{pairing_sample, DEFAULT_RESTART_BUDGET};
use crate::rng::RngStream;
use crate::solver::{solve_parameters, ParameterTable};
use crate::switchings::{
    move_toggles, resolve_move, to_plus_frame, toggles_3edge, toggles_octagon, validate_3edge, validate_type_i, Sign,
    SwitchClass, SwitchMove, SwitchType,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Algorithm {
    #[default]
    Easy,
    Uniform,
    Approx,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Easy => "easy",
            Algorithm::Uniform => "uniform",
            Algorithm::Approx => "approx",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub algorithm: Algorithm,
    pub provider: Provider,
    pub engine: EngineKind,
    /// Attempts (initial draws) allowed per output.
    pub restart_budget: u64,
    /// Switching steps allowed per attempt; `None` means 1000 (i1 + 1).
    pub step_budget: Option<u64>,
    /// FactorApprox proposals allowed per step.
    pub proposal_budget: u64,
    /// Backtracking nodes for the oracle provider's enumeration.
    pub state_budget: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            algorithm: Algorithm::Easy,
            provider: Provider::Analytic,
            engine: EngineKind::Naive,
            restart_budget: DEFAULT_RESTART_BUDGET,
            step_budget: None,
            proposal_budget: 10_000_000,
            state_budget: DEFAULT_STATE_BUDGET,
        }
    }
}

impl SamplerConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        SamplerConfig { algorithm, ..Default::default() }
    }
}

/// Counters for one output (or summed over many).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunTelemetry {
    pub samples: u64,
    /// Attempts that ended without output, including rejected initial draws.
    pub restarts: u64,
    pub initial_draws: u64,
    pub initial_rejections: u64,
    pub steps: u64,
    pub t_rejections: u64,
    pub f_rejections: u64,
    pub pre_b_rejections: u64,
    pub b_rejections: u64,
    /// FactorApprox proposals, valid or not.
    pub proposals: u64,
    /// Accepted moves by switching type ("3-edge" for FactorEasy).
    pub moves: BTreeMap<String, u64>,
    /// Accepted Type I moves by class.
    pub classes: BTreeMap<String, u64>,
    pub wall_ms: f64,
}

impl RunTelemetry {
    pub fn absorb(&mut self, o: &RunTelemetry) {
        self.samples += o.samples;
        self.restarts += o.restarts;
        self.initial_draws += o.initial_draws;
        self.initial_rejections += o.initial_rejections;
        self.steps += o.steps;
        self.t_rejections += o.t_rejections;
        self.f_rejections += o.f_rejections;
        self.pre_b_rejections += o.pre_b_rejections;
        self.b_rejections += o.b_rejections;
        self.proposals += o.proposals;
        for (k, v) in &o.moves {
            *self.moves.entry(k.clone()).or_default() += v;
        }
        for (k, v) in &o.classes {
            *self.classes.entry(k.clone()).or_default() += v;
        }
        self.wall_ms += o.wall_ms;
    }

    /// Restarts over attempts.
    pub fn restart_fraction(&self) -> f64 {
        let attempts = self.restarts + self.samples;
        if attempts == 0 {
            0.0
        } else {
            self.restarts as f64 / attempts as f64
        }
    }

    fn bump(map: &mut BTreeMap<String, u64>, key: String) {
        *map.entry(key).or_default() += 1;
    }
}

/// Outputs of [`Sampler::sample_map`] in sample-index order.
#[derive(Debug, Clone)]
pub struct Batch<T> {
    pub outputs: Vec<T>,
    pub per_sample: Vec<RunTelemetry>,
    pub total: RunTelemetry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Query {
    BEasy,
    F(SwitchType),
    B(SwitchClass),
}

/// A sampler with its bound table and parameters computed once.
#[derive(Debug)]
pub struct Sampler<'h> {
    host: &'h HostInstance,
    config: SamplerConfig,
    i1: usize,
    table: Option<BoundTable>,
    params: Option<ParameterTable>,
    /// Per stratum: (type, ρ / remaining mass) for sequential type selection.
    choice: Vec<Vec<(SwitchType, BigRational)>>,
    /// Count memo, kept only when the oracle provider has enumerated the strata.
    memo: Option<Mutex<HashMap<(GraphKey, Query), u128>>>,
}

/// Result of the first half of a FactorUniform step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    TReject,
    Output,
    FReject,
    Proposed(SwitchMove),
}

enum Attempt {
    Done(ColoredState),
    Restart,
}

impl<'h> Sampler<'h> {
    pub fn new(host: &'h HostInstance, config: SamplerConfig) -> Result<Sampler<'h>> {
        let regime = match config.algorithm {
            Algorithm::Easy => Regime::Easy,
            _ => Regime::Uniform,
        };
        let i1 = match regime {
            Regime::Easy => i1_easy(host),
            Regime::Uniform => i1_uniform(host)?,
        };
        let table = match config.algorithm {
            Algorithm::Approx => None,
            _ => Some(match config.provider {
                Provider::Analytic => BoundTable::analytic(host, regime)?,
                Provider::Oracle => oracle_bound_table(host, regime, config.state_budget)?,
            }),
        };
        let params = match (config.algorithm, &table) {
            (Algorithm::Uniform, Some(t)) => Some(solve_parameters(t)?),
            _ => None,
        };
        let choice = params.as_ref().map(|p| Self::choice_table(p, i1)).unwrap_or_default();
        let memo = (config.provider == Provider::Oracle && config.algorithm != Algorithm::Approx)
            .then(|| Mutex::new(HashMap::new()));
        Ok(Sampler { host, config, i1, table, params, choice, memo })
    }

    fn choice_table(p: &ParameterTable, i1: usize) -> Vec<Vec<(SwitchType, BigRational)>> {
        (0..=i1)
            .map(|i| {
                let mut remaining = BigRational::one();
                let mut out = Vec::new();
                for ty in SwitchType::ALL {
                    let r = p.rho(ty, i);
                    if !r.is_positive() || !remaining.is_positive() {
                        continue;
                    }
                    out.push((ty, &r / &remaining));
                    remaining -= r;
                }
                out
            })
            .collect()
    }

    pub fn host(&self) -> &HostInstance {
        self.host
    }
    pub fn config(&self) -> &SamplerConfig {
        &self.config
    }
    pub fn i1(&self) -> usize {
        self.i1
    }
    pub fn table(&self) -> Option<&BoundTable> {
        self.table.as_ref()
    }
    pub fn params(&self) -> Option<&ParameterTable> {
        self.params.as_ref()
    }

    fn counted(&self, counter: &mut Counter, g: &ColoredState, q: Query) -> u128 {
        let run = |c: &mut Counter| match q {
            Query::BEasy => c.b_easy(self.host, g),
            Query::F(ty) => c.f_type(self.host, g, ty),
            Query::B(alpha) => c.b_class(self.host, g, alpha),
        };
        let Some(memo) = &self.memo else {
            return run(counter);
        };
        let key = (g.key(), q);
        if let Some(&v) = memo.lock().expect("memo lock").get(&key) {
            return v;
        }
        let v = run(counter);
        memo.lock().expect("memo lock").insert(key, v);
        v
    }

    fn step_budget(&self) -> u64 {
        self.config.step_budget.unwrap_or(1000 * (self.i1 as u64 + 1))
    }

    /// One output and its telemetry.
    pub fn sample(&self, rng: &mut RngStream) -> Result<(ColoredState, RunTelemetry)> {
        let start = Instant::now();
        let mut tel = RunTelemetry::default();
        let g = match self.config.algorithm {
            Algorithm::Approx => self.approx(rng, &mut tel)?,
            alg => {
                let mut counter: Option<Counter> = None;
                let mut attempts = 0u64;
                loop {
                    if attempts == self.config.restart_budget {
                        return Err(Error::BudgetExhausted { what: "restarts".into(), budget: self.config.restart_budget });
                    }
                    attempts += 1;
                    let r = match alg {
                        Algorithm::Easy => self.easy_attempt(rng, &mut tel, &mut counter)?,
                        _ => self.uniform_attempt(rng, &mut tel, &mut counter)?,
                    };
                    match r {
                        Attempt::Done(g) => break g,
                        Attempt::Restart => tel.restarts += 1,
                    }
                }
            }
        };
        assert!(is_d_factor(self.host, &g), "sampler output must be a d-factor");
        tel.samples = 1;
        tel.wall_ms = start.elapsed().as_secs_f64() * 1e3;
        Ok((g, tel))
    }

    /// `count` outputs; output k uses stream k of `seed`, so results do not
    /// depend on `jobs`.
    pub fn sample_map<T: Send>(
        &self,
        seed: u64,
        count: usize,
        jobs: Option<usize>,
        f: impl Fn(ColoredState) -> T + Sync,
    ) -> Result<Batch<T>> {
        let start = Instant::now();
        let run = |k: usize| -> Result<(T, RunTelemetry)> {
            let mut rng = RngStream::new(seed, k as u64);
            let (g, t) = self.sample(&mut rng)?;
            Ok((f(g), t))
        };
        let results: Vec<Result<(T, RunTelemetry)>> = match jobs {
            Some(j) if j > 1 => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(j)
                    .build()
                    .map_err(|e| Error::Io(e.to_string()))?;
                pool.install(|| (0..count).into_par_iter().map(run).collect())
            }
            _ => (0..count).map(run).collect(),
        };
        let mut outputs = Vec::with_capacity(count);
        let mut per_sample = Vec::with_capacity(count);
        let mut total = RunTelemetry::default();
        for r in results {
            let (x, t) = r?;
            total.absorb(&t);
            outputs.push(x);
            per_sample.push(t);
        }
        total.wall_ms = start.elapsed().as_secs_f64() * 1e3;
        Ok(Batch { outputs, per_sample, total })
    }

    pub fn sample_many(&self, seed: u64, count: usize, jobs: Option<usize>) -> Result<Batch<ColoredState>> {
        self.sample_map(seed, count, jobs, |g| g)
    }

    /// One pairing-model draw, kept only if it has at most i1 red edges.
    fn draw_initial(&self, rng: &mut RngStream, tel: &mut RunTelemetry) -> Result<Option<ColoredState>> {
        tel.initial_draws += 1;
        let edges = pairing_sample(self.host.n(), self.host.d(), rng)?;
        let red = edges.iter().filter(|&&(u, v)| self.host.is_red(u, v)).count();
        if red > self.i1 {
            tel.initial_rejections += 1;
            return Ok(None);
        }
        Ok(Some(ColoredState::from_edges(self.host, &edges)?))
    }

    fn tick(&self, steps: &mut u64, tel: &mut RunTelemetry) -> Result<()> {
        let budget = self.step_budget();
        if *steps == budget {
            return Err(Error::BudgetExhausted { what: "steps".into(), budget });
        }
        *steps += 1;
        tel.steps += 1;
        Ok(())
    }

    fn fresh_counter<'c>(&self, slot: &'c mut Option<Counter>, g: &ColoredState) -> &'c mut Counter {
        match slot {
            Some(c) => {
                c.reset(self.host, g);
                c
            }
            None => slot.insert(Counter::new(self.config.engine, self.host, g)),
        }
    }

    fn easy_attempt(&self, rng: &mut RngStream, tel: &mut RunTelemetry, slot: &mut Option<Counter>) -> Result<Attempt> {
        let host = self.host;
        let table = self.table.as_ref().expect("easy sampler has a table");
        let Some(mut g) = self.draw_initial(rng, tel)? else {
            return Ok(Attempt::Restart);
        };
        let counter = self.fresh_counter(slot, &g);
        let mut steps = 0;
        while g.stratum() > 0 {
            self.tick(&mut steps, tel)?;
            let i = g.stratum();
            let Some(t) = easy_proposal(host, &g, rng) else {
                tel.f_rejections += 1;
                return Ok(Attempt::Restart);
            };
            let (rem, add) = toggles_3edge(&t);
            counter.apply_toggles(host, &mut g, &rem, &add)?;
            let b = self.counted(counter, &g, Query::BEasy);
            let lower = table.easy_lower(i - 1);
            table.check_lower("b", i - 1, &lower, b)?;
            if !rng.bernoulli_rational(&ratio(&lower, b)) {
                tel.b_rejections += 1;
                return Ok(Attempt::Restart);
            }
            RunTelemetry::bump(&mut tel.moves, "3-edge".into());
        }
        Ok(Attempt::Done(g))
    }

    fn choose_type(&self, i: usize, rng: &mut RngStream) -> Option<SwitchType> {
        for (ty, p) in self.choice.get(i)? {
            if rng.bernoulli_rational(p) {
                return Some(*ty);
            }
        }
        None
    }

    fn uniform_attempt(&self, rng: &mut RngStream, tel: &mut RunTelemetry, slot: &mut Option<Counter>) -> Result<Attempt> {
        let host = self.host;
        let table = self.table.as_ref().expect("uniform sampler has a table");
        let Some(mut g) = self.draw_initial(rng, tel)? else {
            return Ok(Attempt::Restart);
        };
        let counter = self.fresh_counter(slot, &g);
        let mut steps = 0;
        loop {
            self.tick(&mut steps, tel)?;
            let m = match self.uniform_proposal(&g, counter, rng)? {
                StepOutcome::TReject => {
                    tel.t_rejections += 1;
                    return Ok(Attempt::Restart);
                }
                StepOutcome::Output => return Ok(Attempt::Done(g)),
                StepOutcome::FReject => {
                    tel.f_rejections += 1;
                    return Ok(Attempt::Restart);
                }
                StepOutcome::Proposed(m) => m,
            };
            let ty = m.ty.expect("typed move");
            let (rem, add) = move_toggles(ty, &m.v);
            counter.apply_toggles(host, &mut g, &rem, &add)?;
            let j = g.stratum();
            debug_assert_eq!(j, m.to);
            if ty.gadget_count() > 0 {
                let bh = counter.bhat(host, &g, &m.v[..8], ty)?;
                let lower = table.gadget(ty, j);
                table.check_lower(&format!("b̂_{}", ty.name()), j, &lower, bh)?;
                if !rng.bernoulli_rational(&ratio(&lower, bh)) {
                    tel.pre_b_rejections += 1;
                    return Ok(Attempt::Restart);
                }
            }
            let alpha = m.class.expect("typed moves carry a class");
            let b = self.counted(counter, &g, Query::B(alpha));
            let lower = table.lower(alpha, j);
            table.check_lower(&format!("b_{}", alpha.name()), j, &lower, b)?;
            if !rng.bernoulli_rational(&ratio(&lower, b)) {
                tel.b_rejections += 1;
                return Ok(Attempt::Restart);
            }
            RunTelemetry::bump(&mut tel.moves, ty.name());
            if ty == SwitchType::I {
                RunTelemetry::bump(&mut tel.classes, alpha.name());
            }
        }
    }

    /// Type selection and f-rejection for one FactorUniform step at `g`.
    pub fn uniform_proposal(&self, g: &ColoredState, counter: &mut Counter, rng: &mut RngStream) -> Result<StepOutcome> {
        let table = self.table.as_ref().ok_or(Error::Parse("sampler has no bound table".into()))?;
        let i = g.stratum();
        let Some(ty) = self.choose_type(i, rng) else {
            return Ok(StepOutcome::TReject);
        };
        if i == 0 && ty == SwitchType::I {
            return Ok(StepOutcome::Output);
        }
        Ok(match self.propose(ty, g, counter, rng, table)? {
            Some(m) => StepOutcome::Proposed(m),
            None => StepOutcome::FReject,
        })
    }

    /// A move of type `ty` chosen with probability exactly 1/m̄_τ(i) each, or
    /// `None` (f-rejection) with the remaining probability.
    fn propose(
        &self,
        ty: SwitchType,
        g: &ColoredState,
        counter: &mut Counter,
        rng: &mut RngStream,
        table: &BoundTable,
    ) -> Result<Option<SwitchMove>> {
        let i = g.stratum();
        let upper = table.upper(ty, i);
        if ty != SwitchType::I && table.provider == Provider::Analytic {
            // for a regular forbidden graph the booster tuple space has exactly m̄_τ(i) elements
            return Ok(booster_tuple(self.host, g, ty, rng).and_then(|w| resolve_move(self.host, g, ty, &w)));
        }
        let f = self.counted(counter, g, Query::F(ty));
        if f == 0 {
            return Ok(None);
        }
        table.check_upper(&format!("f_{}", ty.name()), i, &upper, f)?;
        if !rng.bernoulli_rational(&ratio_inv(f, &upper)) {
            return Ok(None);
        }
        counter.pick_uniform_move_with_total(self.host, g, ty, f, rng).map(Some)
    }

    fn approx(&self, rng: &mut RngStream, tel: &mut RunTelemetry) -> Result<ColoredState> {
        let host = self.host;
        let mut g = loop {
            if tel.initial_draws == self.config.restart_budget {
                return Err(Error::BudgetExhausted { what: "initial graph draws".into(), budget: self.config.restart_budget });
            }
            match self.draw_initial(rng, tel)? {
                Some(g) => break g,
                None => tel.restarts += 1,
            }
        };
        let mut steps = 0;
        while g.stratum() > 0 {
            self.tick(&mut steps, tel)?;
            let mut tries = 0u64;
            let (v, class) = loop {
                if tries == self.config.proposal_budget {
                    return Err(Error::BudgetExhausted { what: "proposals".into(), budget: self.config.proposal_budget });
                }
                tries += 1;
                if tries == STALL_CHECK && Counter::naive(&g).f_type(host, &g, SwitchType::I) == 0 {
                    tel.proposals += tries;
                    return Err(Error::BudgetExhausted {
                        what: "proposals (no valid Type I switching exists)".into(),
                        budget: self.config.proposal_budget,
                    });
                }
                let (v0, v1) = red_oriented(&g, rng);
                let (v2, v3) = edge_oriented(&g, rng);
                let (v4, v5) = edge_oriented(&g, rng);
                let (v6, v7) = edge_oriented(&g, rng);
                let v = [v0, v1, v2, v3, v4, v5, v6, v7];
                if let Some(c) = validate_type_i(host, &g, &v) {
                    break (v, c);
                }
            };
            tel.proposals += tries;
            let (rem, add) = toggles_octagon(&v);
            g.apply_switch_toggles(host, &rem, &add)?;
            RunTelemetry::bump(&mut tel.moves, SwitchType::I.name());
            RunTelemetry::bump(&mut tel.classes, class.name());
        }
        Ok(g)
    }
}

/// Failed proposals after which FactorApprox checks for a dead end.
const STALL_CHECK: u64 = 10_000;

/// lower / b.
fn ratio(lower: &BigRational, b: u128) -> BigRational {
    if b == 0 {
        return BigRational::zero();
    }
    lower / BigRational::from_integer(BigInt::from(b))
}

/// f / upper.
fn ratio_inv(f: u128, upper: &BigRational) -> BigRational {
    if !upper.is_positive() {
        return BigRational::zero();
    }
    BigRational::from_integer(BigInt::from(f)) / upper
}

/// One FactorEasy proposal at `g`: uniform over the 2i (dn)² tuples, kept if valid.
/// Each valid 3-edge switching is returned with probability exactly 1/m̄(i).
pub fn easy_proposal(host: &HostInstance, g: &ColoredState, rng: &mut RngStream) -> Option<[Vertex; 6]> {
    let (v0, v1) = red_oriented(g, rng);
    let (v2, v3) = edge_oriented(g, rng);
    let (v4, v5) = edge_oriented(g, rng);
    let t = [v0, v1, v2, v3, v4, v5];
    validate_3edge(host, g, &t).then_some(t)
}

fn red_oriented(g: &ColoredState, rng: &mut RngStream) -> (Vertex, Vertex) {
    let red = g.red_edges();
    let (a, b) = red[rng.below_usize(red.len())];
    if rng.below(2) == 0 {
        (a, b)
    } else {
        (b, a)
    }
}

/// Uniform over the dn oriented edges of a d-regular graph.
fn edge_oriented(g: &ColoredState, rng: &mut RngStream) -> (Vertex, Vertex) {
    let u = rng.below_usize(g.n()) as Vertex;
    let l = g.neighbors(u);
    (u, l[rng.below_usize(l.len())])
}

fn pick<T: Copy>(l: &[T], rng: &mut RngStream) -> Option<T> {
    if l.is_empty() {
        None
    } else {
        Some(l[rng.below_usize(l.len())])
    }
}

/// Uniform tuple from the booster's tuple space, in the type's own frame.
/// `None` when a factor of the space is empty.
fn booster_tuple(host: &HostInstance, g: &ColoredState, ty: SwitchType, rng: &mut RngStream) -> Option<Vec<Vertex>> {
    let mut u: Vec<Vertex> = vec![0; 8 + 4 * ty.gadget_count()];
    match ty {
        SwitchType::IIa(_) => {
            if g.stratum() == 0 {
                return None;
            }
            (u[0], u[1]) = red_oriented(g, rng);
        }
        _ => {
            u[0] = rng.below_usize(g.n()) as Vertex;
            u[1] = pick(host.red_neighbors(u[0]), rng)?;
        }
    }
    match ty {
        SwitchType::IIa(_) | SwitchType::III(_) => {
            u[2] = pick(host.red_neighbors(u[1]), rng)?;
            u[7] = pick(host.red_neighbors(u[0]), rng)?;
            u[3] = pick(g.neighbors(u[2]), rng)?;
            u[6] = pick(g.neighbors(u[7]), rng)?;
            (u[4], u[5]) = edge_oriented(g, rng);
        }
        _ => {
            u[2] = pick(host.red_neighbors(u[1]), rng)?;
            u[7] = match ty {
                SwitchType::IIb(_) => pick(g.neighbors(u[0]), rng)?,
                _ => pick(host.red_neighbors(u[0]), rng)?,
            };
            (u[3], u[4]) = edge_oriented(g, rng);
            (u[5], u[6]) = edge_oriented(g, rng);
            let ends: &[(usize, usize)] = &[(0, 1), (1, 2), (0, 7)][..ty.gadget_count()];
            for (idx, &(p, q)) in ends.iter().enumerate() {
                let b = 8 + 4 * idx;
                u[b] = pick(g.neighbors(u[p]), rng)?;
                (u[b + 1], u[b + 3]) = edge_oriented(g, rng);
                u[b + 2] = pick(g.neighbors(u[q]), rng)?;
            }
        }
    }
    Some(match ty.sign() {
        Sign::Plus => u,
        Sign::Minus => to_plus_frame(&u),
    })
}

pub fn factor_easy(host: &HostInstance, config: &SamplerConfig, rng: &mut RngStream) -> Result<(ColoredState, RunTelemetry)> {
    Sampler::new(host, SamplerConfig { algorithm: Algorithm::Easy, ..config.clone() })?.sample(rng)
}

pub fn factor_uniform(host: &HostInstance, config: &SamplerConfig, rng: &mut RngStream) -> Result<(ColoredState, RunTelemetry)> {
    Sampler::new(host, SamplerConfig { algorithm: Algorithm::Uniform, ..config.clone() })?.sample(rng)
}

pub fn factor_approx(host: &HostInstance, config: &SamplerConfig, rng: &mut RngStream) -> Result<(ColoredState, RunTelemetry)> {
    Sampler::new(host, SamplerConfig { algorithm: Algorithm::Approx, ..config.clone() })?.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_core::load_instance;

    fn cycle(n: u32) -> Vec<(u32, u32)> {
        (0..n).map(|i| (i, (i + 1) % n)).collect()
    }

    #[test]
    fn star_host_exhausts_restarts() {
        let h = load_instance(4, 2, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let cfg = SamplerConfig { restart_budget: 500, ..SamplerConfig::new(Algorithm::Easy) };
        let err = factor_easy(&h, &cfg, &mut RngStream::new(1, 0)).unwrap_err();
        assert!(matches!(err, Error::BudgetExhausted { .. }));
    }

    #[test]
    fn empty_forbidden_graph_outputs_first_draw() {
        let h = load_instance(10, 3, &[]).unwrap();
        for alg in [Algorithm::Easy, Algorithm::Approx] {
            let s = Sampler::new(&h, SamplerConfig::new(alg)).unwrap();
            let b = s.sample_many(3, 5, None).unwrap();
            assert_eq!(b.total.restarts, 0);
            assert_eq!(b.total.steps, 0);
        }
    }

    #[test]
    fn outputs_avoid_red_edges() {
        let h = load_instance(8, 2, &cycle(8)).unwrap();
        for alg in [Algorithm::Easy, Algorithm::Uniform] {
            let cfg = SamplerConfig { provider: Provider::Oracle, ..SamplerConfig::new(alg) };
            let s = Sampler::new(&h, cfg).unwrap();
            let b = s.sample_many(11, 50, None).unwrap();
            for g in &b.outputs {
                assert!(g.edges().iter().all(|&(u, v)| !h.is_red(u, v)));
            }
            assert_eq!(b.total.samples, 50);
        }
    }

    #[test]
    fn approx_reports_dead_ends_as_budget_errors() {
        // C8 has a few states of stratum > 0 with no valid Type I switching.
        let h = load_instance(8, 2, &cycle(8)).unwrap();
        let s = Sampler::new(&h, SamplerConfig::new(Algorithm::Approx)).unwrap();
        let (mut ok, mut dead) = (0, 0);
        for k in 0..200 {
            match s.sample(&mut RngStream::new(11, k)) {
                Ok((g, _)) => {
                    assert!(g.edges().iter().all(|&(u, v)| !h.is_red(u, v)));
                    ok += 1;
                }
                Err(Error::BudgetExhausted { .. }) => dead += 1,
                Err(e) => panic!("{e}"),
            }
        }
        assert!(ok > 150 && dead < 50, "ok {ok} dead {dead}");
    }

    #[test]
    fn jobs_do_not_change_outputs() {
        let h = load_instance(8, 2, &cycle(8)).unwrap();
        let cfg = SamplerConfig { provider: Provider::Oracle, ..SamplerConfig::new(Algorithm::Uniform) };
        let s = Sampler::new(&h, cfg).unwrap();
        let a = s.sample_map(5, 40, None, |g| g.key()).unwrap();
        let b = s.sample_map(5, 40, Some(3), |g| g.key()).unwrap();
        assert_eq!(a.outputs, b.outputs);
        assert_eq!(a.total.restarts, b.total.restarts);
    }
}
