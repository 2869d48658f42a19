//! Brute-force ground truth for small instances: exhaustive enumeration of
//! regular graphs and d-factors, flat switching counts, the forward/inverse
//! bijection, bound sandwiches and distribution tests.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::bounds::{self, BoundTable, Provider, Regime};
use crate::counting::Counter;
use crate::error::{Error, Result};
use crate::graph_core::{load_instance, ColoredState, GraphKey, HostInstance, Pair, Vertex};
use crate::regular_gen::pairing_sample;
use crate::rng::RngStream;
use crate::solver;
use crate::switchings::{
    move_toggles, patterns, resolve_move, to_plus_frame, validate_3edge, validate_booster, validate_type_i, B1Variant,
    Col, Pattern, Rel, Sign, SwitchClass, SwitchType, SIGMA,
};

/// Default cap on backtracking nodes for one enumeration.
pub const DEFAULT_STATE_BUDGET: u64 = 50_000_000;

fn enumerate_with(n: usize, d: usize, allowed: &dyn Fn(u32, u32) -> bool, budget: u64) -> Result<Vec<Vec<Pair>>> {
    if d == 0 || d >= n {
        return Err(Error::DegreeOutOfRange { n, d });
    }
    if n * d % 2 == 1 {
        return Err(Error::OddProduct { n, d });
    }
    struct S<'a> {
        n: usize,
        d: usize,
        deg: Vec<usize>,
        edges: Vec<Pair>,
        out: Vec<Vec<Pair>>,
        nodes: u64,
        budget: u64,
        allowed: &'a dyn Fn(u32, u32) -> bool,
    }
    fn rec(s: &mut S<'_>, v: usize, start: usize) -> Result<()> {
        s.nodes += 1;
        if s.nodes > s.budget {
            return Err(Error::BudgetExhausted { what: "graph enumeration nodes".into(), budget: s.budget });
        }
        if v == s.n {
            s.out.push(s.edges.clone());
            return Ok(());
        }
        if s.deg[v] == s.d {
            return rec(s, v + 1, v + 2);
        }
        let need = s.d - s.deg[v];
        let avail = (start..s.n).filter(|&w| s.deg[w] < s.d && (s.allowed)(v as u32, w as u32)).count();
        if avail < need {
            return Ok(());
        }
        for w in start..s.n {
            if s.deg[w] < s.d && (s.allowed)(v as u32, w as u32) {
                s.deg[v] += 1;
                s.deg[w] += 1;
                s.edges.push((v as u32, w as u32));
                let r = rec(s, v, w + 1);
                s.edges.pop();
                s.deg[v] -= 1;
                s.deg[w] -= 1;
                r?;
            }
        }
        Ok(())
    }
    let mut s = S { n, d, deg: vec![0; n], edges: Vec::new(), out: Vec::new(), nodes: 0, budget, allowed };
    rec(&mut s, 0, 1)?;
    for e in &mut s.out {
        e.sort_unstable();
    }
    Ok(s.out)
}

/// Every labelled simple d-regular graph on n vertices, as sorted edge lists.
pub fn enumerate_d_regular(n: usize, d: usize, budget: u64) -> Result<Vec<Vec<Pair>>> {
    enumerate_with(n, d, &|_, _| true, budget)
}

/// Every d-regular graph avoiding the forbidden pairs.
pub fn enumerate_d_factors(host: &HostInstance, budget: u64) -> Result<Vec<Vec<Pair>>> {
    enumerate_with(host.n(), host.d(), &|u, v| !host.is_forbidden_pair(u, v), budget)
}

/// Every d-regular graph on the host's vertex set, grouped by red-edge count.
#[derive(Debug, Clone)]
pub struct StrataCatalog {
    pub strata: Vec<Vec<ColoredState>>,
}

impl StrataCatalog {
    pub fn build(host: &HostInstance, i_max: usize, budget: u64) -> Result<StrataCatalog> {
        let mut strata = vec![Vec::new(); i_max + 1];
        for edges in enumerate_d_regular(host.n(), host.d(), budget)? {
            let g = ColoredState::from_edges(host, &edges)?;
            if g.stratum() <= i_max {
                strata[g.stratum()].push(g);
            }
        }
        Ok(StrataCatalog { strata })
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.strata.iter().map(|s| s.len()).collect()
    }

    pub fn total(&self) -> usize {
        self.strata.iter().map(|s| s.len()).sum()
    }

    pub fn graphs(&self) -> impl Iterator<Item = &ColoredState> {
        self.strata.iter().flatten()
    }
}

/// Exact mean red-edge count over all d-regular graphs against |E(H̄)| d / (n-1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectationReport {
    pub graphs: usize,
    pub mean: BigRational,
    pub expected: BigRational,
    pub pass: bool,
}

pub fn expectation_check(host: &HostInstance, budget: u64) -> Result<ExpectationReport> {
    let all = enumerate_d_regular(host.n(), host.d(), budget)?;
    let mut total = BigInt::zero();
    for e in &all {
        total += e.iter().filter(|&&(u, v)| host.is_forbidden_pair(u, v)).count();
    }
    let mean = BigRational::new(total, BigInt::from(all.len()));
    let expected = crate::graph_core::expected_red_edges(host);
    Ok(ExpectationReport { graphs: all.len(), pass: mean == expected, mean, expected })
}

// ---------------------------------------------------------------------------
// flat counts

fn oriented(g: &ColoredState) -> Vec<Pair> {
    let mut out = Vec::with_capacity(2 * g.edge_count());
    for (u, v) in g.edges() {
        out.push((u, v));
        out.push((v, u));
    }
    out
}

fn oriented_red_edges(g: &ColoredState) -> Vec<Pair> {
    g.red_edges().iter().flat_map(|&(u, v)| [(u, v), (v, u)]).collect()
}

fn oriented_red_pairs(host: &HostInstance) -> Vec<Pair> {
    host.forbidden().iter().flat_map(|&(u, v)| [(u, v), (v, u)]).collect()
}

/// All tuples matching `pat` whose first `fixed.len()` positions are `fixed`,
/// by position-order backtracking.
pub fn match_pattern(host: &HostInstance, g: &ColoredState, pat: &Pattern, fixed: &[Vertex]) -> Vec<Vec<Vertex>> {
    fn rec(host: &HostInstance, g: &ColoredState, pat: &Pattern, a: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        let p = a.len();
        if p == pat.k {
            out.push(a.clone());
            return;
        }
        let mut cand: Option<Vec<Vertex>> = None;
        for &(i, j, r) in &pat.cons {
            let q = if j == p && i < p {
                i
            } else if i == p && j < p {
                j
            } else {
                continue;
            };
            match r {
                Rel::Edge(_) => {
                    cand = Some(g.neighbors(a[q]).to_vec());
                    break;
                }
                Rel::NonEdge(Col::Red) => cand = Some(host.red_neighbors(a[q]).to_vec()),
                _ => {}
            }
        }
        let cand = cand.unwrap_or_else(|| (0..g.n() as Vertex).collect());
        for c in cand {
            a.push(c);
            let ok = (0..p).all(|q| a[q] != c || pat.may_coincide(q, p))
                && pat.cons.iter().all(|&(i, j, r)| i.max(j) != p || r.holds(host, g, a[i], a[j]));
            if ok {
                rec(host, g, pat, a, out);
            }
            a.pop();
        }
    }
    let mut out = Vec::new();
    let mut a = fixed.to_vec();
    if fixed.iter().any(|&v| v as usize >= g.n()) {
        return out;
    }
    let pre_ok = pat
        .cons
        .iter()
        .all(|&(i, j, r)| i.max(j) >= fixed.len() || r.holds(host, g, fixed[i], fixed[j]));
    if pre_ok {
        rec(host, g, pat, &mut a, &mut out);
    }
    out
}

fn in_frame(u: &[Vertex], s: Sign) -> Vec<Vertex> {
    match s {
        Sign::Plus => u.to_vec(),
        Sign::Minus => to_plus_frame(u),
    }
}

/// Valid 3-edge tuples by scanning red edge x ordered edge x ordered edge.
pub fn flat_easy_moves(host: &HostInstance, g: &ColoredState) -> Vec<[Vertex; 6]> {
    let ed = oriented(g);
    let mut out = Vec::new();
    for &(a, b) in &oriented_red_edges(g) {
        for &(c, d) in &ed {
            for &(e, f) in &ed {
                let t = [a, b, c, d, e, f];
                if validate_3edge(host, g, &t) {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// Valid forward tuples of one type (own frame). Type I, IIa and III scan the
/// full tuple space of their first pair times three ordered edges; IIb and IIc
/// use the pattern matcher.
pub fn flat_moves(host: &HostInstance, g: &ColoredState, ty: SwitchType) -> Vec<Vec<Vertex>> {
    let ed = oriented(g);
    let scan = |firsts: Vec<Pair>, keep: &dyn Fn(&[Vertex]) -> bool| {
        let mut out = Vec::new();
        for &(a, b) in &firsts {
            for &(c, d) in &ed {
                for &(e, f) in &ed {
                    for &(x, y) in &ed {
                        let u = [a, b, c, d, e, f, x, y];
                        if keep(&u) {
                            out.push(u.to_vec());
                        }
                    }
                }
            }
        }
        out
    };
    match ty {
        SwitchType::I => scan(oriented_red_edges(g), &|u| validate_type_i(host, g, u).is_some()),
        SwitchType::IIa(s) => scan(oriented_red_edges(g), &|u| validate_booster(host, g, ty, &in_frame(u, s)))
            .into_iter()
            .map(|u| in_frame(&u, s))
            .collect(),
        SwitchType::III(s) => scan(oriented_red_pairs(host), &|u| validate_booster(host, g, ty, &in_frame(u, s)))
            .into_iter()
            .map(|u| in_frame(&u, s))
            .collect(),
        SwitchType::IIb(s) | SwitchType::IIc(s) => {
            let pat = if matches!(ty, SwitchType::IIb(_)) { &patterns().iib } else { &patterns().iic };
            match_pattern(host, g, pat, &[]).into_iter().map(|u| in_frame(&u, s)).collect()
        }
    }
}

fn signed(pat: &Pattern, s: Sign) -> Pattern {
    match s {
        Sign::Plus => pat.clone(),
        Sign::Minus => pat.relabel(&SIGMA),
    }
}

pub fn flat_b_easy(host: &HostInstance, g: &ColoredState) -> u128 {
    match_pattern(host, g, &patterns().easy_inv, &[]).len() as u128
}

/// B1 octagons of one orientation (own frame) with their variants.
pub fn flat_b1_octagons(host: &HostInstance, g: &ColoredState, s: Sign) -> Vec<(Vec<Vertex>, B1Variant)> {
    let mut out = Vec::new();
    for v in B1Variant::ALL {
        for w in match_pattern(host, g, &signed(&patterns().b1[v.index()], s), &[]) {
            out.push((w, v));
        }
    }
    out
}

pub fn flat_b_class(host: &HostInstance, g: &ColoredState, alpha: SwitchClass) -> u128 {
    let p = patterns();
    let m = |pat: &Pattern, s: Sign| match_pattern(host, g, &signed(pat, s), &[]).len() as u128;
    match alpha {
        SwitchClass::A => m(&p.inv_a, Sign::Plus),
        SwitchClass::B1(s) => flat_b1_octagons(host, g, s).len() as u128,
        SwitchClass::B2(s) => m(&p.inv_b2, s),
        SwitchClass::C(s) => m(&p.inv_c, s) + flat_moves(host, g, SwitchType::III(s)).len() as u128,
    }
}

/// Gadget completions on a B1 octagon `w` (own frame) of the matching variant.
pub fn flat_bhat(host: &HostInstance, g: &ColoredState, w: &[Vertex], ty: SwitchType) -> u128 {
    let pat = match ty {
        SwitchType::IIb(_) => &patterns().bhat_iib,
        SwitchType::IIc(_) => &patterns().bhat_iic,
        _ => return 0,
    };
    let u = in_frame(w, ty.sign());
    match_pattern(host, g, pat, &u).len() as u128
}

/// Compares every counting-module query with its flat count on one graph.
/// Returns a description of each disagreement.
pub fn count_agreement(host: &HostInstance, g: &ColoredState, counter: &mut Counter) -> Vec<String> {
    let mut bad = Vec::new();
    let mut cmp = |what: String, a: u128, b: u128| {
        if a != b {
            bad.push(format!("{what}: counting {a}, flat {b}"));
        }
    };
    cmp("f_easy".into(), counter.f_easy(host, g), flat_easy_moves(host, g).len() as u128);
    cmp("b_easy".into(), counter.b_easy(host, g), flat_b_easy(host, g));
    for ty in SwitchType::ALL {
        cmp(format!("f_{}", ty.name()), counter.f_type(host, g, ty), flat_moves(host, g, ty).len() as u128);
    }
    for alpha in SwitchClass::ALL {
        cmp(format!("b_{}", alpha.name()), counter.b_class(host, g, alpha), flat_b_class(host, g, alpha));
    }
    for s in [Sign::Plus, Sign::Minus] {
        for (w, v) in flat_b1_octagons(host, g, s) {
            if matches!(v, B1Variant::IIb | B1Variant::IIc) {
                let ty = v.switch_type(s);
                let c = counter.bhat(host, g, &w, ty).unwrap_or(u128::MAX);
                cmp(format!("bhat_{} {:?}", ty.name(), w), c, flat_bhat(host, g, &w, ty));
            }
        }
    }
    bad
}

/// Queries compared along engine trajectories. IIb/IIc counts and b̂ are left
/// out: their plans have no two-edge tail, so both engines run the same code,
/// and they are infeasible at trajectory sizes.
pub const TRAJECTORY_TYPES: [SwitchType; 5] = [
    SwitchType::I,
    SwitchType::IIa(Sign::Plus),
    SwitchType::IIa(Sign::Minus),
    SwitchType::III(Sign::Plus),
    SwitchType::III(Sign::Minus),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryReport {
    pub steps: usize,
    pub queries: usize,
    pub mismatches: Vec<String>,
    /// Stratum after each step.
    pub strata: Vec<usize>,
    pub wall_ms: f64,
}

impl TrajectoryReport {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Walks `steps` random double-edge swaps from `start`, keeping a cached
/// counter in step with the graph, and compares every query of the cached
/// engine with a from-scratch naive count after each step. The cache itself
/// is also compared with a rebuild.
pub fn engine_trajectory_check(
    host: &HostInstance,
    start: &ColoredState,
    steps: usize,
    rng: &mut RngStream,
) -> Result<TrajectoryReport> {
    let t0 = std::time::Instant::now();
    let mut g = start.clone();
    let mut cached = Counter::new(crate::counting::EngineKind::Cached, host, &g);
    let mut naive = Counter::naive(&g);
    let mut report = TrajectoryReport { steps, queries: 0, mismatches: Vec::new(), strata: Vec::new(), wall_ms: 0.0 };
    for step in 0..steps {
        let (rem, add) = random_swap(&g, rng);
        cached.apply_toggles(host, &mut g, &rem, &add)?;
        let mut cmp = |what: String, c: u128, n: u128| {
            report.queries += 1;
            if c != n {
                report.mismatches.push(format!("step {step}: {what}: cached {c}, naive {n}"));
            }
        };
        cmp("f_easy".into(), cached.f_easy(host, &g), naive.f_easy(host, &g));
        cmp("b_easy".into(), cached.b_easy(host, &g), naive.b_easy(host, &g));
        for ty in TRAJECTORY_TYPES {
            cmp(format!("f_{}", ty.name()), cached.f_type(host, &g, ty), naive.f_type(host, &g, ty));
        }
        for alpha in SwitchClass::ALL {
            cmp(format!("b_{}", alpha.name()), cached.b_class(host, &g, alpha), naive.b_class(host, &g, alpha));
        }
        if cached.cache() != Some(&crate::counting::StructureCache::build(host, &g)) {
            report.mismatches.push(format!("step {step}: structure cache differs from rebuild"));
        }
        report.strata.push(g.stratum());
    }
    report.wall_ms = t0.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// A uniformly chosen valid double-edge swap {ab, cd} -> {ac, bd}.
fn random_swap(g: &ColoredState, rng: &mut RngStream) -> (Vec<Pair>, Vec<Pair>) {
    let edge = |rng: &mut RngStream| {
        let u = rng.below_usize(g.n()) as Vertex;
        let l = g.neighbors(u);
        (u, l[rng.below_usize(l.len())])
    };
    loop {
        let (a, b) = edge(rng);
        let (c, d) = edge(rng);
        let distinct = a != c && a != d && b != c && b != d;
        if distinct && !g.has_edge(a, c) && !g.has_edge(b, d) {
            return (vec![(a, b), (c, d)], vec![(a, c), (b, d)]);
        }
    }
}

// ---------------------------------------------------------------------------
// bijection

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BijectionRow {
    /// Class name, or "3-edge".
    pub class: String,
    pub graphs: usize,
    /// Total forward moves landing in this class.
    pub moves: u128,
    /// (target graph edges, forward count, inverse count) for each disagreement.
    pub mismatches: Vec<(Vec<Pair>, u128, u128)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BijectionReport {
    pub n: usize,
    pub d: usize,
    pub delta: usize,
    pub rows: Vec<BijectionRow>,
}

impl BijectionReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.mismatches.is_empty())
    }
}

/// For every d-regular graph G' and every class, counts forward moves (found
/// by flat enumeration from every source graph) that land on G' with that
/// class, and compares with the counting module's inverse count. For B1 the
/// inverse side weights each IIb/IIc-variant octagon by its gadget count,
/// since every gadget completion is a distinct forward move.
pub fn bijection_check(host: &HostInstance, budget: u64) -> Result<BijectionReport> {
    let all = enumerate_d_regular(host.n(), host.d(), budget)?;
    let graphs: Vec<ColoredState> = all.iter().map(|e| ColoredState::from_edges(host, e)).collect::<Result<_>>()?;
    let mut easy_in: HashMap<GraphKey, u128> = HashMap::new();
    let mut class_in: HashMap<(GraphKey, SwitchClass), u128> = HashMap::new();
    for g in &graphs {
        for t in flat_easy_moves(host, g) {
            let (rem, add) = crate::switchings::toggles_3edge(&t);
            *easy_in.entry(g.toggled(host, &rem, &add)?.key()).or_default() += 1;
        }
        for ty in SwitchType::ALL {
            for w in flat_moves(host, g, ty) {
                let m = resolve_move(host, g, ty, &w).ok_or(Error::InvalidMove)?;
                let (rem, add) = move_toggles(ty, &w);
                let h = g.toggled(host, &rem, &add)?;
                *class_in.entry((h.key(), m.class.expect("typed"))).or_default() += 1;
            }
        }
    }
    let mut counter = Counter::naive(&graphs[0]);
    let mut rows = vec![BijectionRow { class: "3-edge".into(), graphs: graphs.len(), moves: 0, mismatches: vec![] }];
    for alpha in SwitchClass::ALL {
        rows.push(BijectionRow { class: alpha.name(), graphs: graphs.len(), moves: 0, mismatches: vec![] });
    }
    for g in &graphs {
        let key = g.key();
        let fwd = easy_in.get(&key).copied().unwrap_or(0);
        let inv = counter.b_easy(host, g);
        rows[0].moves += fwd;
        if fwd != inv {
            rows[0].mismatches.push((g.edges(), fwd, inv));
        }
        for (k, alpha) in SwitchClass::ALL.into_iter().enumerate() {
            let fwd = class_in.get(&(key.clone(), alpha)).copied().unwrap_or(0);
            let inv = match alpha {
                SwitchClass::B1(s) => {
                    let mut total = 0u128;
                    for (w, v) in counter.b1_octagons(host, g, s) {
                        total += match v {
                            B1Variant::I | B1Variant::IIa => 1,
                            _ => counter.bhat(host, g, &w, v.switch_type(s))?,
                        };
                    }
                    total
                }
                _ => counter.b_class(host, g, alpha),
            };
            rows[k + 1].moves += fwd;
            if fwd != inv {
                rows[k + 1].mismatches.push((g.edges(), fwd, inv));
            }
        }
    }
    Ok(BijectionReport { n: host.n(), d: host.d(), delta: host.delta(), rows })
}

// ---------------------------------------------------------------------------
// sandwich

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub comparisons: u64,
    /// Comparisons skipped because the analytic value was not positive.
    pub skipped: u64,
    pub violations: Vec<String>,
}

impl SandwichReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

struct Sandwich {
    r: SandwichReport,
}

impl Sandwich {
    fn upper(&mut self, what: &str, i: usize, bound: &BigRational, value: u128) {
        if !bound.is_positive() {
            self.r.skipped += 1;
            return;
        }
        self.r.comparisons += 1;
        if BigRational::from_integer(BigInt::from(value)) > *bound {
            self.r.violations.push(format!("{what} at stratum {i}: value {value} > bound {bound}"));
        }
    }
    fn lower(&mut self, what: &str, i: usize, bound: &BigRational, value: u128) {
        if !bound.is_positive() {
            self.r.skipped += 1;
            return;
        }
        self.r.comparisons += 1;
        if BigRational::from_integer(BigInt::from(value)) < *bound {
            self.r.violations.push(format!("{what} at stratum {i}: value {value} < bound {bound}"));
        }
    }
}

/// Analytic bounds against exact per-stratum extrema, for strata up to the
/// stratum caps (the 3-edge bounds up to i1_easy; the 4-edge bounds up to
/// i1_uniform when the forbidden graph is regular).
pub fn sandwich_check(host: &HostInstance, budget: u64) -> Result<SandwichReport> {
    let ie = bounds::i1_easy(host);
    let iu = bounds::i1_uniform(host).ok();
    let top = ie.max(iu.unwrap_or(0));
    let cat = StrataCatalog::build(host, top, budget)?;
    let mut sw = Sandwich { r: SandwichReport { comparisons: 0, skipped: 0, violations: vec![] } };
    let mut counter = Counter::naive(&ColoredState::from_edges(host, &[])?);
    for (i, stratum) in cat.strata.iter().enumerate() {
        for g in stratum {
            if i <= ie {
                let (up, lo) = bounds::easy_bounds(host, i);
                sw.upper("f_easy <= m̄", i, &BigRational::from_integer(up), counter.f_easy(host, g));
                sw.lower("b_easy >= m̲", i, &BigRational::from_integer(lo), counter.b_easy(host, g));
            }
            let Some(iu) = iu else { continue };
            if i > iu {
                continue;
            }
            for ty in SwitchType::ALL {
                let f = counter.f_type(host, g, ty);
                sw.upper(&format!("f_{} <= m̄", ty.name()), i, &bounds::uniform_upper(host, ty, i), f);
                if let SwitchType::III(_) = ty {
                    sw.lower("f_III >= m̄_III(1-8(d+Δ)/n)", i, &bounds::iii_lower(host), f);
                }
            }
            for alpha in SwitchClass::ALL {
                let b = counter.b_class(host, g, alpha);
                sw.lower(&format!("b_{} >= m̲", alpha.name()), i, &bounds::uniform_lower(host, alpha, i), b);
                match alpha {
                    SwitchClass::B2(_) => sw.upper("b_B2 <= (Δn-2i)Δd⁴n", i, &bounds::b2_upper(host, i), b),
                    SwitchClass::C(_) => sw.upper("b_C <= d³Δ³n²", i, &bounds::c_upper(host), b),
                    _ => {}
                }
            }
            for s in [Sign::Plus, Sign::Minus] {
                for (w, v) in counter.b1_octagons(host, g, s) {
                    if matches!(v, B1Variant::IIb | B1Variant::IIc) {
                        let ty = v.switch_type(s);
                        let lo = bounds::gadget_lower(host, ty, i)?;
                        sw.lower(&format!("bhat_{} >= m̲̂", ty.name()), i, &lo, counter.bhat(host, g, &w, ty)?);
                    }
                }
            }
        }
    }
    Ok(sw.r)
}

// ---------------------------------------------------------------------------
// oracle bound provider

/// Exact extrema over the enumerated strata 0..=i1. See [`bounds::oracle_extrema`].
///
/// - m̄ values are maxima of the forward counts, with m̄_I floored at 1;
/// - m̲ values are minima of the inverse counts;
/// - m̲̂ is the minimum gadget count over octagons of the variant, or 1 if
///   there are none;
/// - if some IIb/IIc-variant octagon in S_i has no gadget completion, that
///   variant cannot be produced at the rate the others are, so m̲_B1(i) is 0
///   (class B1 moves into S_i are always b-rejected) and the booster is off;
/// - ε is the closed form capped at 1/2.
pub fn oracle_bound_table(host: &HostInstance, regime: Regime, budget: u64) -> Result<BoundTable> {
    let i1 = bounds::i1(host, regime)?;
    let cat = StrataCatalog::build(host, i1, budget)?;
    let mut t = BoundTable::analytic(host, regime)?;
    t.provider = Provider::Oracle;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if t.epsilon > half {
        t.epsilon = half;
    }
    let r = |x: u128| BigRational::from_integer(BigInt::from(x));
    let mut counter = Counter::naive(&ColoredState::from_edges(host, &[])?);
    let ups = [
        SwitchType::I,
        SwitchType::IIa(Sign::Plus),
        SwitchType::IIb(Sign::Plus),
        SwitchType::IIc(Sign::Plus),
        SwitchType::III(Sign::Plus),
    ];
    let lows = [SwitchClass::A, SwitchClass::B1(Sign::Plus), SwitchClass::B2(Sign::Plus), SwitchClass::C(Sign::Plus)];
    for (i, stratum) in cat.strata.iter().enumerate() {
        let mut f_easy = 0u128;
        let mut b_easy: Option<u128> = None;
        let mut up = [0u128; 5];
        let mut low: [Option<u128>; 4] = [None; 4];
        let mut gad: [Option<u128>; 2] = [None; 2];
        for g in stratum {
            f_easy = f_easy.max(counter.f_easy(host, g));
            let b = counter.b_easy(host, g);
            b_easy = Some(b_easy.map_or(b, |m| m.min(b)));
            // orientations give equal counts (the minus pattern is a relabelling),
            // but both are included so the extrema do not rely on that
            for (k, &ty) in ups.iter().enumerate() {
                let mut f = counter.f_type(host, g, ty);
                if ty != SwitchType::I {
                    let minus = match ty {
                        SwitchType::IIa(_) => SwitchType::IIa(Sign::Minus),
                        SwitchType::IIb(_) => SwitchType::IIb(Sign::Minus),
                        SwitchType::IIc(_) => SwitchType::IIc(Sign::Minus),
                        _ => SwitchType::III(Sign::Minus),
                    };
                    f = f.max(counter.f_type(host, g, minus));
                }
                up[k] = up[k].max(f);
            }
            for (k, &alpha) in lows.iter().enumerate() {
                let mut b = counter.b_class(host, g, alpha);
                let minus = match alpha {
                    SwitchClass::A => SwitchClass::A,
                    SwitchClass::B1(_) => SwitchClass::B1(Sign::Minus),
                    SwitchClass::B2(_) => SwitchClass::B2(Sign::Minus),
                    SwitchClass::C(_) => SwitchClass::C(Sign::Minus),
                };
                b = b.min(counter.b_class(host, g, minus));
                low[k] = Some(low[k].map_or(b, |m| m.min(b)));
            }
            for s in [Sign::Plus, Sign::Minus] {
                for (w, v) in counter.b1_octagons(host, g, s) {
                    let k = match v {
                        B1Variant::IIb => 0,
                        B1Variant::IIc => 1,
                        _ => continue,
                    };
                    let bh = counter.bhat(host, g, &w, v.switch_type(s))?;
                    gad[k] = Some(gad[k].map_or(bh, |m| m.min(bh)));
                }
            }
        }
        t.easy_upper[i] = r(f_easy);
        t.easy_lower[i] = r(b_easy.unwrap_or(0));
        for k in 0..5 {
            t.upper[k][i] = r(up[k]);
        }
        if up[0] == 0 {
            t.upper[0][i] = r(1);
        }
        for k in 0..4 {
            t.lower[k][i] = r(low[k].unwrap_or(0));
        }
        for k in 0..2 {
            t.gadget[k][i] = r(gad[k].unwrap_or(1));
        }
        if gad.iter().any(|g| *g == Some(0)) {
            t.lower[1][i] = BigRational::zero();
        }
    }
    Ok(t)
}

// ---------------------------------------------------------------------------
// distribution tests

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionReport {
    pub support: usize,
    pub samples: u64,
    pub counts: Vec<u64>,
    pub tv: f64,
    pub chi2: f64,
    pub p_value: f64,
    pub seed: u64,
}

impl DistributionReport {
    pub fn text(&self) -> String {
        format!(
            "support {} samples {} seed {}: TV {:.5}, chi2 {:.2} (df {}), p {:.4}",
            self.support,
            self.samples,
            self.seed,
            self.tv,
            self.chi2,
            self.support.saturating_sub(1),
            self.p_value
        )
    }
}

/// Total variation distance and chi-square test of `samples` against the
/// uniform distribution on `support`.
pub fn uniformity_test(samples: &[GraphKey], support: &[GraphKey], seed: u64) -> Result<DistributionReport> {
    let index: HashMap<&GraphKey, usize> = support.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut counts = vec![0u64; support.len()];
    for s in samples {
        let i = *index.get(s).ok_or(Error::UnknownOutcome)?;
        counts[i] += 1;
    }
    let total = samples.len() as f64;
    let expected = total / support.len() as f64;
    if expected < 5.0 {
        return Err(Error::InsufficientSamples { expected });
    }
    let tv = 0.5 * counts.iter().map(|&c| (c as f64 / total - 1.0 / support.len() as f64).abs()).sum::<f64>();
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let p_value = if support.len() > 1 {
        ChiSquared::new((support.len() - 1) as f64).map(|d| d.sf(chi2)).unwrap_or(f64::NAN)
    } else {
        1.0
    };
    Ok(DistributionReport { support: support.len(), samples: samples.len() as u64, counts, tv, chi2, p_value, seed })
}

// ---------------------------------------------------------------------------
// search for an instance the analytic bounds can handle

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticCandidate {
    pub n: usize,
    pub d: usize,
    pub delta: usize,
    /// Empty when every guard passes.
    pub failures: Vec<String>,
}

/// Analytic lower bounds that FactorUniform would use and that are not positive.
pub fn nonpositive_uniform_bounds(host: &HostInstance, t: &BoundTable) -> Vec<String> {
    let _ = host;
    let mut out = Vec::new();
    let i1 = t.i1;
    let mut need = |what: &str, i: usize, v: BigRational| {
        if !v.is_positive() {
            out.push(format!("{what}({i}) = {v}"));
        }
    };
    for i in 0..=i1 {
        if i < i1 {
            need("m̲_A", i, t.lower(SwitchClass::A, i));
        }
        // no move lands in S_0 with class B1 (no red edge to rotate)
        if i >= 1 {
            need("m̲_B1", i, t.lower(SwitchClass::B1(Sign::Plus), i));
        }
        if i + 2 <= i1 {
            need("m̲_B2", i, t.lower(SwitchClass::B2(Sign::Plus), i));
        }
        need("m̲_C", i, t.lower(SwitchClass::C(Sign::Plus), i));
        if i >= 2 {
            need("m̲̂_IIb", i, t.gadget(SwitchType::IIb(Sign::Plus), i));
        }
        if i >= 3 {
            need("m̲̂_IIc", i, t.gadget(SwitchType::IIc(Sign::Plus), i));
        }
    }
    out
}

/// Tries Δ-regular forbidden graphs at the largest enumerable sizes and reports,
/// for each candidate, why the analytic provider cannot run on it (positivity of
/// the lower bounds, the parameter solver, and domination of the exact extrema).
pub fn find_analytic_instance(seed: u64, budget: u64) -> Result<(Option<HostInstance>, Vec<AnalyticCandidate>)> {
    let mut tried = Vec::new();
    let mut rng = RngStream::new(seed, 0);
    for &(n, d) in &[(10usize, 2usize), (8, 3), (9, 2), (8, 2)] {
        for delta in 1..n - d {
            if n * delta % 2 == 1 {
                continue;
            }
            let forb = pairing_sample(n, delta, &mut rng)?;
            let host = load_instance(n, d, &forb)?;
            let t = BoundTable::analytic(&host, Regime::Uniform)?;
            let mut failures = nonpositive_uniform_bounds(&host, &t);
            if failures.is_empty() {
                if let Err(e) = solver::solve_parameters(&t) {
                    failures.push(e.to_string());
                }
            }
            if failures.is_empty() {
                let s = sandwich_check(&host, budget)?;
                failures.extend(s.violations);
            }
            let ok = failures.is_empty();
            tried.push(AnalyticCandidate { n, d, delta, failures });
            if ok {
                return Ok((Some(host), tried));
            }
        }
    }
    Ok((None, tried))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: u32) -> Vec<Pair> {
        (0..n).map(|i| (i, (i + 1) % n)).collect()
    }

    #[test]
    fn regular_graph_counts() {
        assert_eq!(enumerate_d_regular(4, 1, DEFAULT_STATE_BUDGET).unwrap().len(), 3);
        assert_eq!(enumerate_d_regular(5, 2, DEFAULT_STATE_BUDGET).unwrap().len(), 12);
        assert_eq!(enumerate_d_regular(4, 2, DEFAULT_STATE_BUDGET).unwrap().len(), 3);
        // labelled 2-regular graphs on 6 and 8 vertices
        assert_eq!(enumerate_d_regular(6, 2, DEFAULT_STATE_BUDGET).unwrap().len(), 70);
        assert_eq!(enumerate_d_regular(8, 2, DEFAULT_STATE_BUDGET).unwrap().len(), 3507);
        assert!(matches!(enumerate_d_regular(8, 2, 10), Err(Error::BudgetExhausted { .. })));
    }

    #[test]
    fn factor_lists() {
        let h = load_instance(6, 2, &[]).unwrap();
        assert_eq!(enumerate_d_factors(&h, DEFAULT_STATE_BUDGET).unwrap().len(), 70);
        let star = load_instance(4, 2, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(enumerate_d_factors(&star, DEFAULT_STATE_BUDGET).unwrap().is_empty());
    }

    #[test]
    fn expectation_examples() {
        let h = load_instance(5, 2, &[(0, 1), (0, 2)]).unwrap();
        let r = expectation_check(&h, DEFAULT_STATE_BUDGET).unwrap();
        assert!(r.pass);
        assert_eq!(r.mean, BigRational::one());
        let h = load_instance(5, 2, &[]).unwrap();
        assert!(expectation_check(&h, DEFAULT_STATE_BUDGET).unwrap().mean.is_zero());
    }

    #[test]
    fn fixed_sampler_tv_is_half() {
        let h = load_instance(4, 1, &[]).unwrap();
        let support: Vec<GraphKey> =
            enumerate_d_regular(4, 1, DEFAULT_STATE_BUDGET).unwrap()[..2].iter().map(|e| GraphKey::from_edges(4, e)).collect();
        let samples = vec![support[0].clone(); 100];
        let r = uniformity_test(&samples, &support, 0).unwrap();
        assert!((r.tv - 0.5).abs() < 1e-12);
        let _ = h;
        assert_eq!(uniformity_test(&samples[..3], &support, 0).unwrap_err(), Error::InsufficientSamples { expected: 1.5 });
        let other = GraphKey::from_edges(4, &[(0, 3), (1, 2)]);
        assert_eq!(uniformity_test(&[other], &support, 0).unwrap_err(), Error::UnknownOutcome);
    }

    #[test]
    fn counting_matches_flat_on_cycle_host() {
        let h = load_instance(8, 2, &cycle(8)).unwrap();
        let mut c = Counter::naive(&ColoredState::from_edges(&h, &[]).unwrap());
        for e in enumerate_d_regular(8, 2, DEFAULT_STATE_BUDGET).unwrap().iter().step_by(37) {
            let g = ColoredState::from_edges(&h, e).unwrap();
            assert_eq!(count_agreement(&h, &g, &mut c), Vec::<String>::new());
        }
    }

    #[test]
    fn symmetric_relabelling_preserves_factor_list() {
        let h = load_instance(8, 2, &cycle(8)).unwrap();
        let list = enumerate_d_factors(&h, DEFAULT_STATE_BUDGET).unwrap();
        let keys: std::collections::HashSet<GraphKey> = list.iter().map(|e| GraphKey::from_edges(8, e)).collect();
        // rotation by one fixes the forbidden cycle
        for e in &list {
            let rot: Vec<Pair> = e.iter().map(|&(u, v)| crate::graph_core::pair((u + 1) % 8, (v + 1) % 8)).collect();
            assert!(keys.contains(&GraphKey::from_edges(8, &rot)));
        }
    }
}
