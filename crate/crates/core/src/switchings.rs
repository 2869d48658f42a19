//! Switching patterns: validity, classification and application.
//!
//! Every pattern is written for the plus labelling. The minus labelling of an
//! octagon `w` is checked by evaluating the plus pattern on `u[k] = w[SIGMA[k]]`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph_core::{pair, ColoredState, HostInstance, Pair, Vertex};

/// Octagon relabelling between the plus and minus frames (an involution).
pub const SIGMA: [usize; 8] = [1, 0, 7, 6, 5, 4, 3, 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Col {
    Black,
    Red,
    Any,
}

impl Col {
    #[inline]
    pub fn admits(self, red: bool) -> bool {
        match self {
            Col::Black => !red,
            Col::Red => red,
            Col::Any => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rel {
    Edge(Col),
    NonEdge(Col),
}

impl Rel {
    #[inline]
    pub fn holds(self, host: &HostInstance, g: &ColoredState, u: Vertex, v: Vertex) -> bool {
        if u == v {
            return false;
        }
        match self {
            Rel::Edge(c) => g.has_edge(u, v) && c.admits(host.is_red(u, v)),
            Rel::NonEdge(c) => !g.has_edge(u, v) && c.admits(host.is_red(u, v)),
        }
    }
}

/// A labelled vertex pattern: pair constraints plus a distinctness rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub k: usize,
    pub cons: Vec<(usize, usize, Rel)>,
    /// Pairs of positions allowed to hold the same vertex.
    pub may_equal: Vec<(usize, usize)>,
}

impl Pattern {
    pub fn may_coincide(&self, i: usize, j: usize) -> bool {
        self.may_equal.iter().any(|&(a, b)| (a, b) == (i, j) || (a, b) == (j, i))
    }

    pub fn matches(&self, host: &HostInstance, g: &ColoredState, t: &[Vertex]) -> bool {
        debug_assert_eq!(t.len(), self.k);
        if t.iter().any(|&v| v as usize >= g.n()) {
            return false;
        }
        for i in 0..self.k {
            for j in i + 1..self.k {
                if t[i] == t[j] && !self.may_coincide(i, j) {
                    return false;
                }
            }
        }
        self.cons.iter().all(|&(i, j, r)| r.holds(host, g, t[i], t[j]))
    }

    /// The same pattern read through `perm`: position `i` becomes `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Pattern {
        let p = |i: usize| if i < perm.len() { perm[i] } else { i };
        Pattern {
            k: self.k,
            cons: self.cons.iter().map(|&(i, j, r)| (p(i), p(j), r)).collect(),
            may_equal: self.may_equal.iter().map(|&(i, j)| (p(i), p(j))).collect(),
        }
    }
}

fn pat(k: usize, cons: &[(usize, usize, Rel)], may_equal: &[(usize, usize)]) -> Pattern {
    Pattern { k, cons: cons.to_vec(), may_equal: may_equal.to_vec() }
}

use Col::{Any, Black as B, Red as R};
use Rel::{Edge as E, NonEdge as N};

/// Gadget on octagon positions (p, q) with extra positions y1..y4 = base..base+3.
/// `present` is the state where the alternating path is in the graph.
fn gadget(p: usize, q: usize, base: usize, present: bool) -> Vec<(usize, usize, Rel)> {
    let (y1, y2, y3, y4) = (base, base + 1, base + 2, base + 3);
    let (on, off) = if present { (E(B), N(B)) } else { (N(B), E(B)) };
    vec![(p, y1, on), (y2, y4, on), (q, y3, on), (y1, y2, off), (y3, y4, off)]
}

/// All patterns, plus frame.
#[derive(Debug)]
pub struct Patterns {
    pub easy_fwd: Pattern,
    pub easy_inv: Pattern,
    /// Type I split by connector colours: (L none, R any), (r,b), (b,r), (r,r).
    pub type_i: [Pattern; 4],
    pub iia: Pattern,
    pub iii: Pattern,
    /// Octagon context of IIb / IIc sources (without gadgets).
    pub iib_ctx: Pattern,
    pub iic_ctx: Pattern,
    pub iib: Pattern,
    pub iic: Pattern,
    pub inv_a: Pattern,
    pub inv_b2: Pattern,
    pub inv_c: Pattern,
    /// Result octagons indexed by [`B1Variant`].
    pub b1: [Pattern; 4],
    /// Gadget completions in the result graph, octagon fixed.
    pub bhat_iib: Pattern,
    pub bhat_iic: Pattern,
}

pub fn patterns() -> &'static Patterns {
    static P: OnceLock<Patterns> = OnceLock::new();
    P.get_or_init(build_patterns)
}

fn build_patterns() -> Patterns {
    let easy_fwd = pat(
        6,
        &[(0, 1, E(R)), (2, 3, E(B)), (4, 5, E(B)), (0, 5, N(B)), (1, 2, N(B)), (3, 4, N(B))],
        &[(2, 5)],
    );
    let easy_inv = pat(
        6,
        &[(0, 1, N(R)), (1, 2, E(B)), (0, 5, E(B)), (3, 4, E(B)), (2, 3, N(B)), (4, 5, N(B))],
        &[(2, 5)],
    );
    let oct_common_fwd = [(0, 1, E(R)), (4, 5, E(B)), (3, 4, N(B)), (5, 6, N(B))];
    let ti = |c12: Rel, c23: Rel, c07: Rel, c67: Rel| {
        let mut c = oct_common_fwd.to_vec();
        c.extend([(1, 2, c12), (2, 3, c23), (0, 7, c07), (6, 7, c67)]);
        pat(8, &c, &[(2, 7)])
    };
    let type_i = [
        ti(N(B), E(B), N(Any), E(Any)),
        ti(N(R), E(B), N(B), E(B)),
        ti(N(B), E(R), N(B), E(B)),
        ti(N(R), E(R), N(B), E(B)),
    ];
    let lower = [(2, 3, E(B)), (6, 7, E(B)), (4, 5, E(B)), (3, 4, N(B)), (5, 6, N(B))];
    let mut c = lower.to_vec();
    c.extend([(0, 1, E(R)), (1, 2, N(R)), (0, 7, N(R))]);
    let iia = pat(8, &c, &[(2, 7)]);
    let mut c = lower.to_vec();
    c.extend([(0, 1, N(R)), (1, 2, N(R)), (0, 7, N(R))]);
    let iii = pat(8, &c, &[(2, 7)]);

    let ctx = |c07: Rel| {
        pat(
            8,
            &[
                (0, 1, N(R)),
                (1, 2, N(R)),
                (0, 7, c07),
                (3, 4, E(B)),
                (5, 6, E(B)),
                (2, 3, N(B)),
                (4, 5, N(B)),
                (6, 7, N(B)),
            ],
            &[(2, 7)],
        )
    };
    let iib_ctx = ctx(E(B));
    let iic_ctx = ctx(N(R));
    let with_gadgets = |base: &Pattern, g: &[(usize, usize)], present: bool| {
        let mut c = base.cons.clone();
        for (idx, &(p, q)) in g.iter().enumerate() {
            c.extend(gadget(p, q, 8 + 4 * idx, present));
        }
        pat(8 + 4 * g.len(), &c, &[(2, 7)])
    };
    let iib = with_gadgets(&iib_ctx, &[(0, 1), (1, 2)], true);
    let iic = with_gadgets(&iic_ctx, &[(0, 1), (1, 2), (0, 7)], true);

    let inv_a = pat(
        8,
        &[
            (0, 1, N(R)),
            (1, 2, E(B)),
            (3, 4, E(B)),
            (5, 6, E(B)),
            (0, 7, E(B)),
            (2, 3, N(B)),
            (4, 5, N(B)),
            (6, 7, N(B)),
        ],
        &[(2, 7)],
    );
    let inv_b2 = pat(
        8,
        &[
            (0, 1, N(R)),
            (2, 3, N(R)),
            (1, 2, E(B)),
            (0, 7, E(B)),
            (3, 4, E(B)),
            (5, 6, E(B)),
            (4, 5, N(B)),
            (6, 7, N(B)),
        ],
        &[(2, 7)],
    );
    let inv_c = pat(
        8,
        &[
            (0, 1, N(R)),
            (1, 2, E(R)),
            (2, 3, N(R)),
            (3, 4, E(B)),
            (5, 6, E(B)),
            (0, 7, E(B)),
            (4, 5, N(B)),
            (6, 7, N(B)),
        ],
        &[(2, 7)],
    );
    let b1v = |c01: Rel, c07: Rel| {
        pat(
            8,
            &[
                (1, 2, E(R)),
                (0, 1, c01),
                (0, 7, c07),
                (3, 4, E(B)),
                (5, 6, E(B)),
                (2, 3, N(B)),
                (4, 5, N(B)),
                (6, 7, N(B)),
            ],
            &[(2, 7)],
        )
    };
    let b1 = [b1v(N(R), E(B)), b1v(N(R), E(R)), b1v(E(R), E(B)), b1v(E(R), E(R))];
    let empty = pat(8, &[], &[(2, 7)]);
    let bhat_iib = with_gadgets(&empty, &[(0, 1), (1, 2)], false);
    let bhat_iic = with_gadgets(&empty, &[(0, 1), (1, 2), (0, 7)], false);
    Patterns {
        easy_fwd,
        easy_inv,
        type_i,
        iia,
        iii,
        iib_ctx,
        iic_ctx,
        iib,
        iic,
        inv_a,
        inv_b2,
        inv_c,
        b1,
        bhat_iib,
        bhat_iic,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SwitchType {
    I,
    IIa(Sign),
    IIb(Sign),
    IIc(Sign),
    III(Sign),
}

impl SwitchType {
    pub const ALL: [SwitchType; 9] = [
        SwitchType::I,
        SwitchType::IIa(Sign::Plus),
        SwitchType::IIa(Sign::Minus),
        SwitchType::IIb(Sign::Plus),
        SwitchType::IIb(Sign::Minus),
        SwitchType::IIc(Sign::Plus),
        SwitchType::IIc(Sign::Minus),
        SwitchType::III(Sign::Plus),
        SwitchType::III(Sign::Minus),
    ];

    pub fn sign(self) -> Sign {
        match self {
            SwitchType::I => Sign::Plus,
            SwitchType::IIa(s) | SwitchType::IIb(s) | SwitchType::IIc(s) | SwitchType::III(s) => s,
        }
    }

    /// Stratum change of a booster; Type I depends on the class.
    pub fn booster_delta(self) -> Option<isize> {
        match self {
            SwitchType::I => None,
            SwitchType::IIa(_) => Some(1),
            SwitchType::IIb(_) => Some(2),
            SwitchType::IIc(_) => Some(3),
            SwitchType::III(_) => Some(0),
        }
    }

    /// Class of the result configuration for a booster type.
    pub fn booster_class(self) -> Option<SwitchClass> {
        match self {
            SwitchType::I => None,
            SwitchType::IIa(s) | SwitchType::IIb(s) | SwitchType::IIc(s) => Some(SwitchClass::B1(s)),
            SwitchType::III(s) => Some(SwitchClass::C(s)),
        }
    }

    pub fn gadget_count(self) -> usize {
        match self {
            SwitchType::IIb(_) => 2,
            SwitchType::IIc(_) => 3,
            _ => 0,
        }
    }

    pub fn name(self) -> String {
        let s = |s: Sign| if s == Sign::Plus { "+" } else { "-" };
        match self {
            SwitchType::I => "I".into(),
            SwitchType::IIa(g) => format!("IIa{}", s(g)),
            SwitchType::IIb(g) => format!("IIb{}", s(g)),
            SwitchType::IIc(g) => format!("IIc{}", s(g)),
            SwitchType::III(g) => format!("III{}", s(g)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SwitchClass {
    A,
    B1(Sign),
    B2(Sign),
    C(Sign),
}

impl SwitchClass {
    pub const ALL: [SwitchClass; 7] = [
        SwitchClass::A,
        SwitchClass::B1(Sign::Plus),
        SwitchClass::B1(Sign::Minus),
        SwitchClass::B2(Sign::Plus),
        SwitchClass::B2(Sign::Minus),
        SwitchClass::C(Sign::Plus),
        SwitchClass::C(Sign::Minus),
    ];

    /// Stratum change of a forward Type I move of this class.
    pub fn type_i_delta(self) -> isize {
        match self {
            SwitchClass::A | SwitchClass::C(_) => -1,
            SwitchClass::B1(_) => 0,
            SwitchClass::B2(_) => -2,
        }
    }

    pub fn sign(self) -> Sign {
        match self {
            SwitchClass::A => Sign::Plus,
            SwitchClass::B1(s) | SwitchClass::B2(s) | SwitchClass::C(s) => s,
        }
    }

    pub fn name(self) -> String {
        let s = |s: Sign| if s == Sign::Plus { "+" } else { "-" };
        match self {
            SwitchClass::A => "A".into(),
            SwitchClass::B1(g) => format!("B1{}", s(g)),
            SwitchClass::B2(g) => format!("B2{}", s(g)),
            SwitchClass::C(g) => format!("C{}", s(g)),
        }
    }
}

/// Which move produced a B1 octagon, read off v0v1 presence and v0v7 colour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum B1Variant {
    I,
    IIa,
    IIb,
    IIc,
}

impl B1Variant {
    pub const ALL: [B1Variant; 4] = [B1Variant::I, B1Variant::IIa, B1Variant::IIb, B1Variant::IIc];

    pub fn index(self) -> usize {
        self as usize
    }

    /// The type producing this variant, given the octagon orientation.
    pub fn switch_type(self, s: Sign) -> SwitchType {
        match self {
            B1Variant::I => SwitchType::I,
            B1Variant::IIa => SwitchType::IIa(s),
            B1Variant::IIb => SwitchType::IIb(s),
            B1Variant::IIc => SwitchType::IIc(s),
        }
    }
}

/// Maps a tuple between frames (plus to minus and back; SIGMA is an involution).
/// Gadget positions past the octagon are unchanged.
pub fn to_plus_frame(w: &[Vertex]) -> Vec<Vertex> {
    let mut u = w.to_vec();
    for k in 0..8 {
        u[k] = w[SIGMA[k]];
    }
    u
}

fn frame(w: &[Vertex], s: Sign) -> Vec<Vertex> {
    match s {
        Sign::Plus => w.to_vec(),
        Sign::Minus => to_plus_frame(w),
    }
}

/// A resolved, ready-to-apply switching.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SwitchMove {
    /// `None` for the 3-edge switching.
    pub ty: Option<SwitchType>,
    /// Tuple as given: 6 vertices (3-edge), 8 (octagon) or 8 + gadget vertices.
    pub v: Vec<Vertex>,
    pub class: Option<SwitchClass>,
    pub from: usize,
    pub to: usize,
}

impl SwitchMove {
    pub fn octagon(&self) -> &[Vertex] {
        &self.v[..self.v.len().min(8)]
    }
    pub fn gadgets(&self) -> &[Vertex] {
        if self.v.len() > 8 {
            &self.v[8..]
        } else {
            &[]
        }
    }
}

pub fn validate_3edge(host: &HostInstance, g: &ColoredState, t: &[Vertex; 6]) -> bool {
    patterns().easy_fwd.matches(host, g, t)
}

pub fn toggles_3edge(t: &[Vertex]) -> (Vec<Pair>, Vec<Pair>) {
    (
        vec![pair(t[0], t[1]), pair(t[2], t[3]), pair(t[4], t[5])],
        vec![pair(t[1], t[2]), pair(t[3], t[4]), pair(t[0], t[5])],
    )
}

pub fn apply_3edge(host: &HostInstance, g: &mut ColoredState, t: &[Vertex; 6]) -> Result<()> {
    if !validate_3edge(host, g, t) {
        return Err(Error::InvalidMove);
    }
    let (rem, add) = toggles_3edge(t);
    g.apply_switch_toggles(host, &rem, &add)
}

/// Type I validity and class. Written out directly rather than via [`Patterns::type_i`]
/// so the two descriptions can be checked against each other.
pub fn validate_type_i(host: &HostInstance, g: &ColoredState, v: &[Vertex]) -> Option<SwitchClass> {
    if v.len() != 8 || v.iter().any(|&x| x as usize >= g.n()) {
        return None;
    }
    for i in 0..8 {
        for j in i + 1..8 {
            if v[i] == v[j] && (i, j) != (2, 7) {
                return None;
            }
        }
    }
    let e = |i: usize, j: usize| g.has_edge(v[i], v[j]);
    let red = |i: usize, j: usize| host.is_red(v[i], v[j]);
    if !(e(0, 1) && red(0, 1)) {
        return None;
    }
    if !(e(2, 3) && e(4, 5) && e(6, 7)) {
        return None;
    }
    if e(0, 7) || e(1, 2) || e(3, 4) || e(5, 6) {
        return None;
    }
    if red(3, 4) || red(4, 5) || red(5, 6) {
        return None;
    }
    match (red(1, 2), red(2, 3), red(0, 7), red(6, 7)) {
        (false, false, false, false) => Some(SwitchClass::A),
        (true, false, false, false) => Some(SwitchClass::B1(Sign::Plus)),
        (false, false, true, false) => Some(SwitchClass::B1(Sign::Minus)),
        (false, true, false, false) => Some(SwitchClass::B2(Sign::Plus)),
        (false, false, false, true) => Some(SwitchClass::B2(Sign::Minus)),
        (true, true, false, false) => Some(SwitchClass::C(Sign::Plus)),
        (false, false, true, true) => Some(SwitchClass::C(Sign::Minus)),
        _ => None,
    }
}

/// Octagon toggles shared by Type I and IIa (removes 01,23,45,67; adds 07,12,34,56).
/// The set is the same in both frames.
pub fn toggles_octagon(v: &[Vertex]) -> (Vec<Pair>, Vec<Pair>) {
    (
        vec![pair(v[0], v[1]), pair(v[2], v[3]), pair(v[4], v[5]), pair(v[6], v[7])],
        vec![pair(v[0], v[7]), pair(v[1], v[2]), pair(v[3], v[4]), pair(v[5], v[6])],
    )
}

fn toggles_gadgets(u: &[Vertex], ty: SwitchType) -> (Vec<Pair>, Vec<Pair>) {
    let mut rem = Vec::new();
    let mut add = Vec::new();
    let ends: &[(usize, usize)] = match ty {
        SwitchType::IIb(_) => &[(0, 1), (1, 2)],
        SwitchType::IIc(_) => &[(0, 1), (1, 2), (0, 7)],
        _ => &[],
    };
    for (idx, &(p, q)) in ends.iter().enumerate() {
        let y = &u[8 + 4 * idx..12 + 4 * idx];
        rem.extend([pair(u[p], y[0]), pair(y[1], y[3]), pair(u[q], y[2])]);
        add.extend([pair(u[p], u[q]), pair(y[0], y[1]), pair(y[2], y[3])]);
    }
    (rem, add)
}

/// Edge toggles of a typed move (tuple in its own frame).
pub fn move_toggles(ty: SwitchType, w: &[Vertex]) -> (Vec<Pair>, Vec<Pair>) {
    match ty {
        SwitchType::I | SwitchType::IIa(_) => toggles_octagon(w),
        SwitchType::III(_) => (Vec::new(), Vec::new()),
        SwitchType::IIb(s) | SwitchType::IIc(s) => toggles_gadgets(&frame(w, s), ty),
    }
}

/// Plus-frame pattern of a booster type.
pub fn booster_pattern(ty: SwitchType) -> &'static Pattern {
    let p = patterns();
    match ty {
        SwitchType::IIa(_) => &p.iia,
        SwitchType::IIb(_) => &p.iib,
        SwitchType::IIc(_) => &p.iic,
        SwitchType::III(_) => &p.iii,
        SwitchType::I => panic!("Type I has no single pattern"),
    }
}

pub fn validate_booster(host: &HostInstance, g: &ColoredState, ty: SwitchType, w: &[Vertex]) -> bool {
    let p = booster_pattern(ty);
    w.len() == p.k && p.matches(host, g, &frame(w, ty.sign()))
}

/// Validates a typed tuple and returns the move it determines.
pub fn resolve_move(host: &HostInstance, g: &ColoredState, ty: SwitchType, w: &[Vertex]) -> Option<SwitchMove> {
    let i = g.stratum();
    let class = match ty {
        SwitchType::I => validate_type_i(host, g, w)?,
        _ => {
            if !validate_booster(host, g, ty, w) {
                return None;
            }
            ty.booster_class().expect("booster")
        }
    };
    let delta = match ty {
        SwitchType::I => class.type_i_delta(),
        _ => ty.booster_delta().expect("booster"),
    };
    Some(SwitchMove {
        ty: Some(ty),
        v: w.to_vec(),
        class: Some(class),
        from: i,
        to: (i as isize + delta) as usize,
    })
}

/// Validates and applies; III leaves the graph unchanged.
pub fn apply_typed(host: &HostInstance, g: &mut ColoredState, ty: SwitchType, w: &[Vertex]) -> Result<SwitchMove> {
    let m = resolve_move(host, g, ty, w).ok_or(Error::InvalidMove)?;
    let (rem, add) = move_toggles(ty, w);
    g.apply_switch_toggles(host, &rem, &add)?;
    debug_assert_eq!(g.stratum(), m.to);
    Ok(m)
}

/// Applies a move produced by [`resolve_move`] or the counting engine, revalidating it.
pub fn apply_move(host: &HostInstance, g: &mut ColoredState, m: &SwitchMove) -> Result<()> {
    match m.ty {
        None => {
            let t: [Vertex; 6] = m.v.as_slice().try_into().map_err(|_| Error::InvalidMove)?;
            apply_3edge(host, g, &t)
        }
        Some(ty) => apply_typed(host, g, ty, &m.v).map(|_| ()),
    }
}

/// Variant of a B1 octagon (given in its own frame), or `None` if it is not one.
pub fn b1_octagon_variant(host: &HostInstance, g: &ColoredState, w: &[Vertex], s: Sign) -> Option<B1Variant> {
    if w.len() != 8 {
        return None;
    }
    let u = frame(w, s);
    let p = patterns();
    B1Variant::ALL.into_iter().find(|v| p.b1[v.index()].matches(host, g, &u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_core::load_instance;

    fn cycle(n: u32) -> Vec<Pair> {
        (0..n).map(|i| (i, (i + 1) % n)).collect()
    }

    #[test]
    fn three_edge_examples() {
        let h = load_instance(6, 2, &[(0, 1)]).unwrap();
        let g = ColoredState::from_edges(&h, &cycle(6)).unwrap();
        assert!(validate_3edge(&h, &g, &[0, 1, 3, 2, 5, 4]));
        assert!(!validate_3edge(&h, &g, &[0, 1, 2, 3, 4, 5]));
        // v0v1 black
        assert!(!validate_3edge(&h, &g, &[1, 2, 4, 3, 0, 5]));
        let mut g2 = g.clone();
        apply_3edge(&h, &mut g2, &[0, 1, 3, 2, 5, 4]).unwrap();
        assert_eq!(g2.stratum(), 0);
        assert!(g2.is_regular(2));
        let (rem, add) = toggles_3edge(&[0, 1, 3, 2, 5, 4]);
        g2.toggle_set(&h, &add, &rem).unwrap();
        assert_eq!(g2, g);
    }

    #[test]
    fn sigma_is_involution() {
        for k in 0..8 {
            assert_eq!(SIGMA[SIGMA[k]], k);
        }
        let w: Vec<u32> = (10..18).collect();
        assert_eq!(to_plus_frame(&to_plus_frame(&w)), w);
    }

    #[test]
    fn octagon_toggles_frame_invariant() {
        let w: Vec<u32> = (0..8).collect();
        let (mut r1, mut a1) = toggles_octagon(&w);
        let (mut r2, mut a2) = toggles_octagon(&to_plus_frame(&w));
        r1.sort();
        r2.sort();
        a1.sort();
        a2.sort();
        assert_eq!((r1, a1), (r2, a2));
    }

    // Octagon on 0..7 in a 16-vertex host with chosen red pairs; filler edges
    // make a graph where the octagon edges 01,23,45,67 are present.
    fn octagon_host(red: &[Pair]) -> (HostInstance, ColoredState) {
        let h = load_instance(16, 1, red).unwrap();
        let edges = vec![(0, 1), (2, 3), (4, 5), (6, 7), (8, 9), (10, 11), (12, 13), (14, 15)];
        let g = ColoredState::from_edges(&h, &edges).unwrap();
        (h, g)
    }

    #[test]
    fn type_i_classes() {
        let o: Vec<u32> = (0..8).collect();
        let (h, g) = octagon_host(&[(0, 1)]);
        assert_eq!(validate_type_i(&h, &g, &o), Some(SwitchClass::A));
        let (h, g) = octagon_host(&[(0, 1), (3, 4)]);
        assert_eq!(validate_type_i(&h, &g, &o), None);
        let (h, g) = octagon_host(&[(0, 1), (1, 2)]);
        assert_eq!(validate_type_i(&h, &g, &o), Some(SwitchClass::B1(Sign::Plus)));
        let (h, g) = octagon_host(&[(0, 1), (0, 7)]);
        assert_eq!(validate_type_i(&h, &g, &o), Some(SwitchClass::B1(Sign::Minus)));
        let (h, g) = octagon_host(&[(0, 1), (2, 3)]);
        assert_eq!(validate_type_i(&h, &g, &o), Some(SwitchClass::B2(Sign::Plus)));
        let (h, g) = octagon_host(&[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(validate_type_i(&h, &g, &o), Some(SwitchClass::C(Sign::Plus)));
        let (h, g) = octagon_host(&[(0, 1), (0, 7), (6, 7)]);
        assert_eq!(validate_type_i(&h, &g, &o), Some(SwitchClass::C(Sign::Minus)));
        // both left and right connector red: IIa territory, never Type I
        let (h, g) = octagon_host(&[(0, 1), (1, 2), (0, 7)]);
        assert_eq!(validate_type_i(&h, &g, &o), None);
        assert!(validate_booster(&h, &g, SwitchType::IIa(Sign::Plus), &o));
        let (h, g) = octagon_host(&[(0, 1), (1, 2)]);
        assert!(!validate_booster(&h, &g, SwitchType::IIa(Sign::Plus), &o));
    }

    #[test]
    fn type_i_patterns_agree_with_direct_check() {
        let o: Vec<u32> = (0..8).collect();
        let pairs: Vec<Pair> = vec![(1, 2), (2, 3), (0, 7), (6, 7), (3, 4)];
        for mask in 0..(1u32 << pairs.len()) {
            let mut red = vec![(0, 1)];
            red.extend(pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p));
            let (h, g) = octagon_host(&red);
            let direct = validate_type_i(&h, &g, &o).is_some();
            let via = patterns().type_i.iter().filter(|p| p.matches(&h, &g, &o)).count();
            assert!(via <= 1);
            assert_eq!(direct, via == 1, "mask {mask}");
        }
    }

    #[test]
    fn iia_result_is_iia_octagon() {
        let o: Vec<u32> = (0..8).collect();
        let (h, mut g) = octagon_host(&[(0, 1), (1, 2), (0, 7)]);
        let m = apply_typed(&h, &mut g, SwitchType::IIa(Sign::Plus), &o).unwrap();
        assert_eq!((m.from, m.to), (1, 2));
        assert_eq!(b1_octagon_variant(&h, &g, &o, Sign::Plus), Some(B1Variant::IIa));
    }

    #[test]
    fn type_i_b1_result_is_variant_i() {
        let o: Vec<u32> = (0..8).collect();
        let (h, mut g) = octagon_host(&[(0, 1), (1, 2)]);
        let m = apply_typed(&h, &mut g, SwitchType::I, &o).unwrap();
        assert_eq!(m.class, Some(SwitchClass::B1(Sign::Plus)));
        assert_eq!(b1_octagon_variant(&h, &g, &o, Sign::Plus), Some(B1Variant::I));
        // the minus reading of the same octagon is a different (invalid) structure
        assert_eq!(b1_octagon_variant(&h, &g, &o, Sign::Minus), None);
        let w = to_plus_frame(&o);
        assert_eq!(b1_octagon_variant(&h, &g, &w, Sign::Minus), Some(B1Variant::I));
    }

    #[test]
    fn iii_is_identity() {
        let o: Vec<u32> = (0..8).collect();
        let h = load_instance(16, 1, &[(0, 1), (1, 2), (0, 7)]).unwrap();
        let edges = vec![(0, 8), (1, 9), (2, 3), (4, 5), (6, 7), (10, 11), (12, 13), (14, 15)];
        let g = ColoredState::from_edges(&h, &edges).unwrap();
        let mut g2 = g.clone();
        let m = apply_typed(&h, &mut g2, SwitchType::III(Sign::Plus), &o).unwrap();
        assert_eq!(g2, g);
        assert_eq!((m.from, m.to), (0, 0));
        assert_eq!(m.class, Some(SwitchClass::C(Sign::Plus)));
    }
}
