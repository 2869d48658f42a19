//! Plan walker: counts, enumerates and picks pattern tuples.

use super::cache::StructureCache;
use super::plan::{Check, Excl, Plan, Step, Tail, MAX_K};
use crate::graph_core::{ColoredState, HostInstance, Vertex};
use crate::rng::RngStream;
use crate::switchings::Col;

/// Stamp-based vertex set: O(1) clear, insertion-ordered list of members.
#[derive(Debug, Clone, Default)]
pub struct Marker {
    stamp: Vec<u32>,
    gen: u32,
    pub list: Vec<Vertex>,
}

impl Marker {
    pub fn new(n: usize) -> Self {
        Marker { stamp: vec![0; n], gen: 1, list: Vec::new() }
    }
    pub fn clear(&mut self) {
        self.gen = self.gen.wrapping_add(1);
        if self.gen == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.gen = 1;
        }
        self.list.clear();
    }
    #[inline]
    pub fn insert(&mut self, v: Vertex) {
        let s = &mut self.stamp[v as usize];
        if *s != self.gen {
            *s = self.gen;
            self.list.push(v);
        }
    }
    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        self.stamp[v as usize] == self.gen
    }
}

/// Scratch sets reused across tail evaluations.
#[derive(Debug, Clone)]
pub struct Scratch {
    pub m: [Marker; 8],
}

impl Scratch {
    pub fn new(n: usize) -> Self {
        Scratch { m: std::array::from_fn(|_| Marker::new(n)) }
    }
}

/// Read-only view of the graph plus per-vertex red degrees in G.
pub struct View<'a> {
    pub host: &'a HostInstance,
    pub g: &'a ColoredState,
    pub red_deg: &'a [u32],
}

impl View<'_> {
    #[inline]
    pub fn deg(&self, v: Vertex, c: Col) -> u64 {
        let all = self.g.degree(v) as u64;
        match c {
            Col::Any => all,
            Col::Red => self.red_deg[v as usize] as u64,
            Col::Black => all - self.red_deg[v as usize] as u64,
        }
    }
    /// Number of oriented G-edges of colour `c`.
    pub fn oriented_edges(&self, c: Col) -> u64 {
        let all = 2 * self.g.edge_count() as u64;
        let red = 2 * self.g.stratum() as u64;
        match c {
            Col::Any => all,
            Col::Red => red,
            Col::Black => all - red,
        }
    }
    #[inline]
    pub fn col_ok(&self, u: Vertex, v: Vertex, c: Col) -> bool {
        match c {
            Col::Any => true,
            _ => c.admits(self.host.is_red(u, v)),
        }
    }
    pub fn fill_excl(&self, m: &mut Marker, ex: &[Excl], assign: &[Vertex]) {
        m.clear();
        for e in ex {
            self.excl_vertices(*e, assign, |v| m.insert(v));
        }
    }

    /// Vertices excluded by one entry (with repeats).
    #[inline]
    pub fn excl_vertices(&self, e: Excl, assign: &[Vertex], mut f: impl FnMut(Vertex)) {
        let w = assign[e.position()];
        f(w);
        match e {
            Excl::Vertex(_) => {}
            Excl::NonEdgeAny(_) => self.g.neighbors(w).iter().for_each(|&x| f(x)),
            Excl::NonEdgeBlack(_) => {
                self.g.neighbors(w).iter().for_each(|&x| f(x));
                self.host.red_neighbors(w).iter().for_each(|&x| f(x));
            }
        }
    }
}

pub fn red_degrees(host: &HostInstance, g: &ColoredState) -> Vec<u32> {
    let mut r = vec![0u32; g.n()];
    let _ = host;
    for &(u, v) in g.red_edges() {
        r[u as usize] += 1;
        r[v as usize] += 1;
    }
    r
}

pub struct Walker<'a> {
    pub view: View<'a>,
    pub plan: &'a Plan,
    pub cache: Option<&'a StructureCache>,
}

pub type Assign = [Vertex; MAX_K];

impl<'a> Walker<'a> {
    #[inline]
    fn checks_ok(&self, si: usize, a: &Assign) -> bool {
        let (host, g) = (self.view.host, self.view.g);
        self.plan.checks[si].iter().all(|c| match *c {
            Check::Rel(i, j, r) => r.holds(host, g, a[i], a[j]),
            Check::Distinct(i, j) => a[i] != a[j],
        })
    }

    /// Calls `f` for every assignment of step `si` passing its checks.
    #[inline]
    fn descend<F: FnMut(&mut Assign) -> bool>(&self, si: usize, a: &mut Assign, mut f: F) {
        let g = self.view.g;
        let host = self.view.host;
        match self.plan.steps[si] {
            Step::RedEdge(p, q) => {
                for &(u, v) in g.red_edges() {
                    for (x, y) in [(u, v), (v, u)] {
                        a[p] = x;
                        a[q] = y;
                        if self.checks_ok(si, a) && !f(a) {
                            return;
                        }
                    }
                }
            }
            Step::RedPair(p, q) => {
                for &(u, v) in host.forbidden() {
                    for (x, y) in [(u, v), (v, u)] {
                        a[p] = x;
                        a[q] = y;
                        if self.checks_ok(si, a) && !f(a) {
                            return;
                        }
                    }
                }
            }
            Step::AllVertices(p) => {
                for x in 0..g.n() as Vertex {
                    a[p] = x;
                    if self.checks_ok(si, a) && !f(a) {
                        return;
                    }
                }
            }
            Step::Edges(p, q, c) => {
                for x in 0..g.n() as Vertex {
                    for &y in g.neighbors(x) {
                        if !self.view.col_ok(x, y, c) {
                            continue;
                        }
                        a[p] = x;
                        a[q] = y;
                        if self.checks_ok(si, a) && !f(a) {
                            return;
                        }
                    }
                }
            }
            Step::Nbr(from, to, c) => {
                let x = a[from];
                for &y in g.neighbors(x) {
                    if !self.view.col_ok(x, y, c) {
                        continue;
                    }
                    a[to] = y;
                    if self.checks_ok(si, a) && !f(a) {
                        return;
                    }
                }
            }
            Step::RedNbr(from, to) => {
                let x = a[from];
                for &y in host.red_neighbors(x) {
                    a[to] = y;
                    if self.checks_ok(si, a) && !f(a) {
                        return;
                    }
                }
            }
        }
    }

    fn count_from(&self, si: usize, a: &mut Assign, s: &mut Scratch) -> u128 {
        if si == self.plan.steps.len() {
            return self.tail_count(a, s);
        }
        if si + 1 == self.plan.steps.len() && matches!(self.plan.tail, Tail::One { .. }) {
            return self.count_last_step(si, a, s);
        }
        let mut total = 0u128;
        self.descend(si, a, |a| {
            total += self.count_from(si + 1, a, s);
            true
        });
        total
    }

    /// Last explicit step followed by a one-edge tail. Exclusions that only
    /// involve earlier positions are built once; each leaf adds the rest.
    fn count_last_step(&self, si: usize, a: &mut Assign, s: &mut Scratch) -> u128 {
        let Tail::One { a: pa, b: pb, col } = self.plan.tail else { unreachable!() };
        let last = self.plan.steps[si].positions();
        let view = &self.view;
        let [sa, sb, da, db, ..] = &mut s.m;
        let (exa, exb) = (&self.plan.excl[pa], &self.plan.excl[pb]);
        let (mut dyn_a, mut dyn_b) = (Vec::new(), Vec::new());
        sa.clear();
        sb.clear();
        for (ex, m, dyn_list) in [(exa, &mut *sa, &mut dyn_a), (exb, &mut *sb, &mut dyn_b)] {
            for &e in ex {
                if last.contains(&e.position()) {
                    if !dyn_list.contains(&e) {
                        dyn_list.push(e);
                    }
                } else {
                    view.excl_vertices(e, a, |v| m.insert(v));
                }
            }
        }
        let base = one_edge_count(view, col, sa, sb) as i128;
        let (sa, sb) = (&*sa, &*sb);
        let mut total = 0u128;
        self.descend(si, a, |a| {
            da.clear();
            db.clear();
            for &e in &dyn_a {
                view.excl_vertices(e, a, |v| {
                    if !sa.contains(v) {
                        da.insert(v)
                    }
                });
            }
            for &e in &dyn_b {
                view.excl_vertices(e, a, |v| {
                    if !sb.contains(v) {
                        db.insert(v)
                    }
                });
            }
            let mut t = base;
            for &x in &da.list {
                t -= view.deg(x, col) as i128;
            }
            for &y in &db.list {
                t -= view.deg(y, col) as i128;
                for &x in view.g.neighbors(y) {
                    if sa.contains(x) && view.col_ok(x, y, col) {
                        t += 1;
                    }
                }
            }
            for &x in &da.list {
                for &y in view.g.neighbors(x) {
                    if (sb.contains(y) || db.contains(y)) && view.col_ok(x, y, col) {
                        t += 1;
                    }
                }
            }
            debug_assert!(t >= 0);
            total += t as u128;
            true
        });
        total
    }

    /// Number of tuples extending the fixed positions already in `a`.
    pub fn count(&self, a: &mut Assign, s: &mut Scratch) -> u128 {
        if self.view.g.n() < self.plan.min_vertices {
            return 0;
        }
        self.count_from(0, a, s)
    }

    fn tail_count(&self, a: &Assign, s: &mut Scratch) -> u128 {
        match self.plan.tail {
            Tail::Empty => 1,
            Tail::One { a: pa, b: pb, col } => {
                let [ma, mb, ..] = &mut s.m;
                self.view.fill_excl(ma, &self.plan.excl[pa], a);
                self.view.fill_excl(mb, &self.plan.excl[pb], a);
                one_edge_count(&self.view, col, ma, mb) as u128
            }
            Tail::Two { .. } => {
                let cache = self.cache.expect("two-edge tail needs the structure cache");
                cache.two_tail(&self.view, self.plan, a, s) as u128
            }
        }
    }

    /// Visits every complete tuple (plans without a two-edge tail).
    pub fn enumerate<F: FnMut(&[Vertex])>(&self, a: &mut Assign, s: &mut Scratch, f: &mut F) {
        if self.view.g.n() < self.plan.min_vertices {
            return;
        }
        self.enum_from(0, a, s, f);
    }

    fn enum_from<F: FnMut(&[Vertex])>(&self, si: usize, a: &mut Assign, s: &mut Scratch, f: &mut F) {
        if si == self.plan.steps.len() {
            self.tail_visit(a, s, &mut |t| {
                f(t);
                true
            });
            return;
        }
        self.descend(si, a, |a| {
            self.enum_from(si + 1, a, s, f);
            true
        });
    }

    fn tail_visit(&self, a: &mut Assign, s: &mut Scratch, f: &mut dyn FnMut(&[Vertex]) -> bool) -> bool {
        let k = self.plan.k;
        match self.plan.tail {
            Tail::Empty => f(&a[..k]),
            Tail::One { a: pa, b: pb, col } => {
                let [ma, mb, ..] = &mut s.m;
                self.view.fill_excl(ma, &self.plan.excl[pa], a);
                self.view.fill_excl(mb, &self.plan.excl[pb], a);
                let g = self.view.g;
                for x in 0..g.n() as Vertex {
                    if ma.contains(x) {
                        continue;
                    }
                    for &y in g.neighbors(x) {
                        if mb.contains(y) || !self.view.col_ok(x, y, col) {
                            continue;
                        }
                        a[pa] = x;
                        a[pb] = y;
                        if !f(&a[..k]) {
                            return false;
                        }
                    }
                }
                true
            }
            Tail::Two { .. } => panic!("enumeration uses expanded plans"),
        }
    }

    /// The `r`-th tuple in walk order, where counts of subtrees come from this
    /// walker and the final levels are expanded with `expanded` (same prefix).
    pub fn select(&self, expanded: &Walker<'_>, mut r: u128, a: &mut Assign, s: &mut Scratch) -> Option<Vec<Vertex>> {
        let mut si = 0;
        while si < self.plan.steps.len() {
            let mut chosen: Option<Assign> = None;
            self.descend(si, a, |a| {
                let c = self.count_from(si + 1, &mut a.clone(), s);
                if r < c {
                    chosen = Some(*a);
                    false
                } else {
                    r -= c;
                    true
                }
            });
            *a = chosen?;
            si += 1;
        }
        // remaining levels: explicit enumeration in the expanded plan
        expanded.select_tail(si, r, a, s)
    }

    fn select_tail(&self, si: usize, mut r: u128, a: &mut Assign, s: &mut Scratch) -> Option<Vec<Vertex>> {
        if si < self.plan.steps.len() {
            let mut chosen: Option<Assign> = None;
            self.descend(si, a, |a| {
                let c = self.count_from(si + 1, &mut a.clone(), s);
                if r < c {
                    chosen = Some(*a);
                    false
                } else {
                    r -= c;
                    true
                }
            });
            *a = chosen?;
            return self.select_tail(si + 1, r, a, s);
        }
        let mut out = None;
        self.tail_visit(a, s, &mut |t| {
            if r == 0 {
                out = Some(t.to_vec());
                false
            } else {
                r -= 1;
                true
            }
        });
        out
    }

    /// Uniform tuple among `total` (which must equal the count).
    pub fn pick(&self, expanded: &Walker<'_>, total: u128, a: &mut Assign, s: &mut Scratch, rng: &mut RngStream) -> Option<Vec<Vertex>> {
        if total == 0 {
            return None;
        }
        let r = rng.below(total);
        self.select(expanded, r, a, s)
    }
}

/// Ordered (x, y) with xy a G-edge of colour `col`, x outside `xa`, y outside `xb`.
pub fn one_edge_count(view: &View<'_>, col: Col, xa: &Marker, xb: &Marker) -> u64 {
    let mut total = view.oriented_edges(col) as i128;
    for &x in &xa.list {
        total -= view.deg(x, col) as i128;
    }
    for &y in &xb.list {
        total -= view.deg(y, col) as i128;
    }
    for &x in &xa.list {
        for &y in view.g.neighbors(x) {
            if xb.contains(y) && view.col_ok(x, y, col) {
                total += 1;
            }
        }
    }
    debug_assert!(total >= 0);
    total as u64
}
