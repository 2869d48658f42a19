//! Incrementally maintained global structure counts, and the two-edge tail
//! count built on them (global aggregate minus local corrections).

use super::engine::{one_edge_count, Assign, Marker, Scratch, View};
use super::plan::{Plan, Tail};
use crate::error::Result;
use crate::graph_core::{ColoredState, HostInstance, Pair, Vertex};
use crate::switchings::Col;

type Agg = [[i128; 2]; 2];

/// Colour indices: 0 = black, 1 = red.
fn cols(c: Col) -> &'static [usize] {
    match c {
        Col::Black => &[0],
        Col::Red => &[1],
        Col::Any => &[0, 1],
    }
}

fn agg(a: &Agg, c1: Col, c2: Col) -> i128 {
    let mut s = 0;
    for &i in cols(c1) {
        for &j in cols(c2) {
            s += a[i][j];
        }
    }
    s
}

fn meet(c1: Col, c2: Col) -> Option<Col> {
    match (c1, c2) {
        (Col::Any, c) | (c, Col::Any) => Some(c),
        (a, b) if a == b => Some(a),
        _ => None,
    }
}

/// Global counts over the current graph G, indexed by edge colours.
///
/// * `gsum[i][j]`  = sum over x of deg_i(x) deg_j(x)
/// * `tot_g[i][j]` = sum over oriented G-edges bc of deg_i(b) deg_j(c)
/// * `tot_rn[i][j]`= the same over oriented red non-edges
/// * `tri[i][j]`   = ordered (a,b,c) with ab in G of colour i, bc in G, ca in G of colour j
/// * `rtri[i][j]`  = the same with bc a red non-edge
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureCache {
    pub red_deg: Vec<u32>,
    pub gsum: Agg,
    pub tot_g: Agg,
    pub tot_rn: Agg,
    pub tri: Agg,
    pub rtri: Agg,
}

#[derive(Default)]
struct Local {
    gsum: Agg,
    tot_g: Agg,
    tot_rn: Agg,
    tri: Agg,
    rtri: Agg,
}

#[inline]
fn ci(host: &HostInstance, u: Vertex, v: Vertex) -> usize {
    host.is_red(u, v) as usize
}

fn degs(g: &ColoredState, red_deg: &[u32], x: Vertex) -> [i128; 2] {
    let r = red_deg[x as usize] as i128;
    [g.degree(x) as i128 - r, r]
}

fn red_non_nbrs<'a>(host: &'a HostInstance, g: &'a ColoredState, x: Vertex) -> impl Iterator<Item = Vertex> + 'a {
    host.red_neighbors(x).iter().copied().filter(move |&y| !g.has_edge(x, y))
}

/// Contributions of all structures meeting `u` (a marker of vertices).
fn local(host: &HostInstance, g: &ColoredState, red_deg: &[u32], u: &Marker) -> Local {
    let mut l = Local::default();
    let in_u = |x: Vertex| u.contains(x);
    for &x in &u.list {
        let dx = degs(g, red_deg, x);
        for i in 0..2 {
            for j in 0..2 {
                l.gsum[i][j] += dx[i] * dx[j];
            }
        }
        for &y in g.neighbors(x) {
            let dy = degs(g, red_deg, y);
            for i in 0..2 {
                for j in 0..2 {
                    l.tot_g[i][j] += dx[i] * dy[j];
                    if !in_u(y) {
                        l.tot_g[i][j] += dy[i] * dx[j];
                    }
                }
            }
        }
        for y in red_non_nbrs(host, g, x) {
            let dy = degs(g, red_deg, y);
            for i in 0..2 {
                for j in 0..2 {
                    l.tot_rn[i][j] += dx[i] * dy[j];
                    if !in_u(y) {
                        l.tot_rn[i][j] += dy[i] * dx[j];
                    }
                }
            }
        }
        let nx = g.neighbors(x);
        // triangles with x as their smallest vertex from u
        for (yi, &y) in nx.iter().enumerate() {
            for &z in &nx[yi + 1..] {
                if !g.has_edge(y, z) || (in_u(y) && y < x) || (in_u(z) && z < x) {
                    continue;
                }
                let t = [x, y, z];
                for (a, b, c) in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)] {
                    l.tri[ci(host, t[a], t[b])][ci(host, t[c], t[a])] += 1;
                }
            }
        }
        // x as apex of a red-based cherry
        for (yi, &y) in nx.iter().enumerate() {
            for &z in &nx[yi + 1..] {
                if !host.is_red(y, z) || g.has_edge(y, z) || (in_u(y) && y < x) || (in_u(z) && z < x) {
                    continue;
                }
                l.rtri[ci(host, x, y)][ci(host, z, x)] += 1;
                l.rtri[ci(host, x, z)][ci(host, y, x)] += 1;
            }
        }
        // x as a base vertex: other base y, apex z
        for y in red_non_nbrs(host, g, x) {
            if in_u(y) && y < x {
                continue;
            }
            for &z in nx {
                if !g.has_edge(y, z) || (in_u(z) && z < x) {
                    continue;
                }
                l.rtri[ci(host, z, x)][ci(host, y, z)] += 1;
                l.rtri[ci(host, z, y)][ci(host, x, z)] += 1;
            }
        }
    }
    l
}

fn add(a: &mut Agg, b: &Agg, sign: i128) {
    for i in 0..2 {
        for j in 0..2 {
            a[i][j] += sign * b[i][j];
        }
    }
}

impl StructureCache {
    pub fn build(host: &HostInstance, g: &ColoredState) -> Self {
        let red_deg = super::engine::red_degrees(host, g);
        let mut all = Marker::new(g.n());
        for x in 0..g.n() as Vertex {
            all.insert(x);
        }
        let l = local(host, g, &red_deg, &all);
        StructureCache { red_deg, gsum: l.gsum, tot_g: l.tot_g, tot_rn: l.tot_rn, tri: l.tri, rtri: l.rtri }
    }

    fn shift(&mut self, l: &Local, sign: i128) {
        add(&mut self.gsum, &l.gsum, sign);
        add(&mut self.tot_g, &l.tot_g, sign);
        add(&mut self.tot_rn, &l.tot_rn, sign);
        add(&mut self.tri, &l.tri, sign);
        add(&mut self.rtri, &l.rtri, sign);
    }

    /// Applies the toggle to `g` and updates the cache to match.
    pub fn toggle(
        &mut self,
        host: &HostInstance,
        g: &mut ColoredState,
        remove: &[Pair],
        add_: &[Pair],
        switch_originated: bool,
    ) -> Result<()> {
        let mut u = Marker::new(g.n());
        for &(a, b) in remove.iter().chain(add_) {
            u.insert(a);
            u.insert(b);
        }
        if u.list.is_empty() {
            return Ok(());
        }
        let before = local(host, g, &self.red_deg, &u);
        if switch_originated {
            g.apply_switch_toggles(host, remove, add_)?;
        } else {
            g.toggle_set(host, remove, add_)?;
        }
        for &x in &u.list {
            self.red_deg[x as usize] = g.neighbors(x).iter().filter(|&&y| host.is_red(x, y)).count() as u32;
        }
        let after = local(host, g, &self.red_deg, &u);
        self.shift(&before, -1);
        self.shift(&after, 1);
        Ok(())
    }

    /// Count of the two-edge tail of `plan` given the assigned prefix.
    pub fn two_tail(&self, view: &View<'_>, plan: &Plan, asg: &Assign, s: &mut Scratch) -> i128 {
        let Tail::Two { a, b, c, d, c1, c2, link, ad_allowed } = plan.tail else {
            unreachable!()
        };
        let g = view.g;
        let host = view.host;
        let [ma, mb, mc, md, m4, m5, m6, m7] = &mut s.m;
        view.fill_excl(ma, &plan.excl[a], asg);
        view.fill_excl(mb, &plan.excl[b], asg);
        view.fill_excl(mc, &plan.excl[c], asg);
        view.fill_excl(md, &plan.excl[d], asg);
        let (ma, mb, mc, md) = (&*ma, &*mb, &*mc, &*md);

        let nb_in = |x: Vertex, col: Col, m: &Marker| -> i128 {
            g.neighbors(x).iter().filter(|&&y| m.contains(y) && view.col_ok(x, y, col)).count() as i128
        };
        let d1 = |x: Vertex| view.deg(x, c1) as i128;
        let d2 = |x: Vertex| view.deg(x, c2) as i128;
        let p = |x: Vertex| d1(x) - nb_in(x, c1, ma);
        let q = |x: Vertex| d2(x) - nb_in(x, c2, md);
        let fill_nbrs = |m: &mut Marker, base: &[&Marker], from: &[(&Marker, Col)]| {
            m.clear();
            for bm in base {
                for &x in &bm.list {
                    m.insert(x);
                }
            }
            for &(fm, col) in from {
                for &w in &fm.list {
                    for &x in g.neighbors(w) {
                        if view.col_ok(w, x, col) {
                            m.insert(x);
                        }
                    }
                }
            }
        };

        let n_empty = one_edge_count(view, c1, ma, mb) as i128 * one_edge_count(view, c2, mc, md) as i128;

        // b = c
        fill_nbrs(m4, &[mb, mc], &[(ma, c1), (md, c2)]);
        let mut n_f0 = agg(&self.gsum, c1, c2);
        for &x in &m4.list {
            let w = if mb.contains(x) || mc.contains(x) { 0 } else { p(x) * q(x) };
            n_f0 += w - d1(x) * d2(x);
        }

        // bc an edge of G, or a red non-edge when the link must be black
        fill_nbrs(m5, &[mb], &[(ma, c1)]);
        fill_nbrs(m6, &[mc], &[(md, c2)]);
        let (sb, sc) = (&*m5, &*m6);
        let pair_w = |bv: Vertex, cv: Vertex| -> i128 {
            let w = if mb.contains(bv) || mc.contains(cv) { 0 } else { p(bv) * q(cv) };
            w - d1(bv) * d2(cv)
        };
        let mut n_f1 = agg(&self.tot_g, c1, c2);
        for &bv in &sb.list {
            for &cv in g.neighbors(bv) {
                n_f1 += pair_w(bv, cv);
            }
        }
        for &cv in &sc.list {
            for &bv in g.neighbors(cv) {
                if !sb.contains(bv) {
                    n_f1 += pair_w(bv, cv);
                }
            }
        }
        let mut n_f2 = 0;
        if link == Col::Black {
            n_f2 = agg(&self.tot_rn, c1, c2);
            for &bv in &sb.list {
                for cv in red_non_nbrs(host, g, bv) {
                    n_f2 += pair_w(bv, cv);
                }
            }
            for &cv in &sc.list {
                for bv in red_non_nbrs(host, g, cv) {
                    if !sb.contains(bv) {
                        n_f2 += pair_w(bv, cv);
                    }
                }
            }
        }
        let mut total = n_empty - n_f0 - n_f1 - n_f2;
        if ad_allowed {
            return total;
        }

        // a = d
        let pp = |x: Vertex| d1(x) - nb_in(x, c1, mb);
        let qq = |x: Vertex| d2(x) - nb_in(x, c2, mc);
        fill_nbrs(m7, &[ma, md], &[]);
        let ad = &*m7;
        fill_nbrs(m4, &[ma, md], &[(mb, c1), (mc, c2)]);
        let mut n_ead = agg(&self.gsum, c1, c2);
        for &x in &m4.list {
            let w = if ad.contains(x) { 0 } else { pp(x) * qq(x) };
            n_ead += w - d1(x) * d2(x);
        }
        // a = d and b = c: a single edge carrying both colours
        let mut n_f0_ead = 0;
        if let Some(c12) = meet(c1, c2) {
            fill_nbrs(m5, &[mb, mc], &[]);
            n_f0_ead = one_edge_count(view, c12, ad, m5) as i128;
        }
        // a = d and bc an edge (triangles) or red non-edge (red-based cherries)
        let ca_ok = |cv: Vertex, av: Vertex| g.has_edge(cv, av) && view.col_ok(cv, av, c2);
        let ab_ok = |av: Vertex, bv: Vertex| g.has_edge(av, bv) && view.col_ok(av, bv, c1);
        let mut touched_tri = 0i128;
        let mut touched_rtri = 0i128;
        let rn = |x: Vertex| -> Vec<Vertex> { red_non_nbrs(host, g, x).collect() };
        for &av in &ad.list {
            for &bv in g.neighbors(av) {
                if !view.col_ok(av, bv, c1) {
                    continue;
                }
                touched_tri += g.neighbors(bv).iter().filter(|&&cv| cv != av && ca_ok(cv, av)).count() as i128;
                if link == Col::Black {
                    touched_rtri += rn(bv).into_iter().filter(|&cv| cv != av && ca_ok(cv, av)).count() as i128;
                }
            }
        }
        for &bv in &mb.list {
            for &av in g.neighbors(bv) {
                if ad.contains(av) || !view.col_ok(bv, av, c1) {
                    continue;
                }
                touched_tri += g.neighbors(bv).iter().filter(|&&cv| cv != av && ca_ok(cv, av)).count() as i128;
                if link == Col::Black {
                    touched_rtri += rn(bv).into_iter().filter(|&cv| cv != av && ca_ok(cv, av)).count() as i128;
                }
            }
        }
        for &cv in &mc.list {
            for &av in g.neighbors(cv) {
                if ad.contains(av) || !view.col_ok(cv, av, c2) {
                    continue;
                }
                touched_tri += g
                    .neighbors(cv)
                    .iter()
                    .filter(|&&bv| bv != av && !mb.contains(bv) && ab_ok(av, bv))
                    .count() as i128;
                if link == Col::Black {
                    touched_rtri +=
                        rn(cv).into_iter().filter(|&bv| bv != av && !mb.contains(bv) && ab_ok(av, bv)).count() as i128;
                }
            }
        }
        let n_f1_ead = agg(&self.tri, c1, c2) - touched_tri;
        let n_f2_ead = if link == Col::Black { agg(&self.rtri, c1, c2) - touched_rtri } else { 0 };
        total -= n_ead - n_f0_ead - n_f1_ead - n_f2_ead;
        total
    }
}
