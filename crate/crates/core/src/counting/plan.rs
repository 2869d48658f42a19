//! Enumeration plans: the order in which pattern positions are assigned, and
//! the closed-form tail that counts the last one or two edges.

use std::sync::OnceLock;

use crate::switchings::{patterns, Col, Pattern, Rel, SIGMA};

pub const MAX_K: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// Oriented red edges of G.
    RedEdge(usize, usize),
    /// Oriented forbidden pairs, present or not.
    RedPair(usize, usize),
    AllVertices(usize),
    /// Oriented edges of G of the given colour.
    Edges(usize, usize, Col),
    /// `to` ranges over G-neighbours of `from` with the given edge colour.
    Nbr(usize, usize, Col),
    /// `to` ranges over forbidden partners of `from`.
    RedNbr(usize, usize),
}

impl Step {
    pub fn positions(self) -> Vec<usize> {
        match self {
            Step::RedEdge(a, b) | Step::RedPair(a, b) | Step::Edges(a, b, _) => vec![a, b],
            Step::AllVertices(a) | Step::Nbr(_, a, _) | Step::RedNbr(_, a) => vec![a],
        }
    }
    fn relabel(self, p: &impl Fn(usize) -> usize) -> Step {
        match self {
            Step::RedEdge(a, b) => Step::RedEdge(p(a), p(b)),
            Step::RedPair(a, b) => Step::RedPair(p(a), p(b)),
            Step::AllVertices(a) => Step::AllVertices(p(a)),
            Step::Edges(a, b, c) => Step::Edges(p(a), p(b), c),
            Step::Nbr(f, t, c) => Step::Nbr(p(f), p(t), c),
            Step::RedNbr(f, t) => Step::RedNbr(p(f), p(t)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    Empty,
    /// Last edge (a, b) of colour `col`, counted by inclusion-exclusion.
    One { a: usize, b: usize, col: Col },
    /// Edges (a,b) and (c,d) joined by the non-edge bc of colour `link`.
    Two { a: usize, b: usize, c: usize, d: usize, c1: Col, c2: Col, link: Col, ad_allowed: bool },
}

impl Tail {
    fn positions(self) -> Vec<usize> {
        match self {
            Tail::Empty => vec![],
            Tail::One { a, b, .. } => vec![a, b],
            Tail::Two { a, b, c, d, .. } => vec![a, b, c, d],
        }
    }
    fn relabel(self, p: &impl Fn(usize) -> usize) -> Tail {
        match self {
            Tail::Empty => Tail::Empty,
            Tail::One { a, b, col } => Tail::One { a: p(a), b: p(b), col },
            Tail::Two { a, b, c, d, c1, c2, link, ad_allowed } => {
                Tail::Two { a: p(a), b: p(b), c: p(c), d: p(d), c1, c2, link, ad_allowed }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Rel(usize, usize, Rel),
    Distinct(usize, usize),
}

/// A tail vertex must avoid a set built from an assigned position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Excl {
    Vertex(usize),
    /// The vertex, its G-neighbours and its forbidden partners.
    NonEdgeBlack(usize),
    /// The vertex and its G-neighbours.
    NonEdgeAny(usize),
}

impl Excl {
    pub fn position(self) -> usize {
        match self {
            Excl::Vertex(w) | Excl::NonEdgeBlack(w) | Excl::NonEdgeAny(w) => w,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlanSpec {
    pub fixed: Vec<usize>,
    pub steps: Vec<Step>,
    pub tail: Tail,
}

impl PlanSpec {
    pub fn relabel(&self, perm: &[usize]) -> PlanSpec {
        let p = |i: usize| if i < perm.len() { perm[i] } else { i };
        PlanSpec {
            fixed: self.fixed.iter().map(|&i| p(i)).collect(),
            steps: self.steps.iter().map(|s| s.relabel(&p)).collect(),
            tail: self.tail.relabel(&p),
        }
    }

    /// Replaces a two-edge tail by an explicit edge step and a one-edge tail.
    pub fn expanded(&self) -> PlanSpec {
        match self.tail {
            Tail::Two { a, b, c, d, c1, c2, .. } => {
                let mut steps = self.steps.clone();
                steps.push(Step::Edges(a, b, c1));
                PlanSpec { fixed: self.fixed.clone(), steps, tail: Tail::One { a: c, b: d, col: c2 } }
            }
            _ => self.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Plan {
    pub k: usize,
    pub fixed: Vec<usize>,
    pub steps: Vec<Step>,
    pub checks: Vec<Vec<Check>>,
    pub tail: Tail,
    pub excl: Vec<Vec<Excl>>,
    /// No tuple exists on fewer vertices than this.
    pub min_vertices: usize,
}

fn rel_to_excl(r: Rel, w: usize) -> Option<Excl> {
    match r {
        Rel::NonEdge(Col::Black) => Some(Excl::NonEdgeBlack(w)),
        Rel::NonEdge(Col::Any) => Some(Excl::NonEdgeAny(w)),
        _ => None,
    }
}

/// Compiles a plan against its pattern; panics if the plan does not cover the
/// pattern exactly, so every shipped plan is checked by the unit tests.
pub fn compile(pat: &Pattern, spec: &PlanSpec) -> Plan {
    let k = pat.k;
    const UNSET: usize = usize::MAX;
    // stage[i]: 0 = fixed, s+1 = step s, steps+1 = tail
    let mut stage = vec![UNSET; k];
    for &f in &spec.fixed {
        stage[f] = 0;
    }
    for (s, st) in spec.steps.iter().enumerate() {
        for p in st.positions() {
            assert_eq!(stage[p], UNSET, "position {p} assigned twice");
            stage[p] = s + 1;
        }
    }
    let tail_stage = spec.steps.len() + 1;
    let tail_pos = spec.tail.positions();
    for &p in &tail_pos {
        assert_eq!(stage[p], UNSET, "tail position {p} assigned twice");
        stage[p] = tail_stage;
    }
    assert!(stage.iter().all(|&s| s != UNSET), "plan leaves positions unassigned");

    let mut checks = vec![Vec::new(); spec.steps.len()];
    let mut excl = vec![Vec::new(); k];
    let mut structural: Vec<(usize, usize, Rel)> = Vec::new();
    match spec.tail {
        Tail::One { a, b, col } => structural.push((a, b, Rel::Edge(col))),
        Tail::Two { a, b, c, d, c1, c2, link, ad_allowed } => {
            assert!(matches!(link, Col::Black | Col::Any), "two-edge tail needs an excludable link");
            assert_eq!(ad_allowed, pat.may_coincide(a, d));
            structural.extend([(a, b, Rel::Edge(c1)), (c, d, Rel::Edge(c2)), (b, c, Rel::NonEdge(link))]);
        }
        Tail::Empty => {}
    }
    let same_pair = |x: (usize, usize), y: (usize, usize)| x == y || x == (y.1, y.0);
    let mut seen_struct = vec![false; structural.len()];
    for &(i, j, r) in &pat.cons {
        let (si, sj) = (stage[i], stage[j]);
        if si == tail_stage && sj == tail_stage {
            let idx = structural
                .iter()
                .position(|&(x, y, rr)| same_pair((x, y), (i, j)) && rr == r)
                .unwrap_or_else(|| panic!("constraint {i}-{j} {r:?} not representable in tail"));
            seen_struct[idx] = true;
        } else if si == tail_stage || sj == tail_stage {
            let (t, w) = if si == tail_stage { (i, j) } else { (j, i) };
            excl[t].push(rel_to_excl(r, w).unwrap_or_else(|| panic!("constraint {i}-{j} {r:?} not excludable")));
        } else if si.max(sj) > 0 {
            checks[si.max(sj) - 1].push(Check::Rel(i, j, r));
        }
    }
    assert!(seen_struct.iter().all(|&x| x), "tail structure not backed by pattern");
    for i in 0..k {
        for j in i + 1..k {
            if pat.may_coincide(i, j) {
                continue;
            }
            let (si, sj) = (stage[i], stage[j]);
            if si == tail_stage && sj == tail_stage {
                continue; // guaranteed by the tail formulas
            } else if si == tail_stage || sj == tail_stage {
                let (t, w) = if si == tail_stage { (i, j) } else { (j, i) };
                excl[t].push(Excl::Vertex(w));
            } else if si.max(sj) > 0 {
                checks[si.max(sj) - 1].push(Check::Distinct(i, j));
            }
        }
    }
    Plan {
        k,
        fixed: spec.fixed.clone(),
        steps: spec.steps.clone(),
        checks,
        tail: spec.tail,
        excl,
        min_vertices: k - pat.may_equal.len(),
    }
}

/// Identifies a countable pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlanId {
    EasyFwd,
    EasyInv,
    TypeI(usize),
    IIa,
    III,
    IIb,
    IIc,
    InvA,
    InvB2,
    InvC,
    B1(usize),
    BhatIIb,
    BhatIIc,
    /// Gadget completions in the source graph, octagon fixed.
    GadgetsIIb,
    GadgetsIIc,
}

/// Compiled plans in both frames and both engine forms.
#[derive(Debug)]
pub struct PlanSet {
    pub naive: [Plan; 2],
    pub cached: [Plan; 2],
}

fn spec_of(id: PlanId) -> (Pattern, PlanSpec) {
    use Col::{Any, Black as B, Red as R};
    use Step::*;
    let p = patterns();
    let two = |a, b, c, d, c1, c2, ad_allowed| Tail::Two { a, b, c, d, c1, c2, link: B, ad_allowed };
    let s = |steps: Vec<Step>, tail: Tail| PlanSpec { fixed: vec![], steps, tail };
    let oct: Vec<usize> = (0..8).collect();
    match id {
        PlanId::EasyFwd => (p.easy_fwd.clone(), s(vec![RedEdge(0, 1)], two(2, 3, 4, 5, B, B, true))),
        PlanId::EasyInv => (
            p.easy_inv.clone(),
            s(vec![RedPair(0, 1), Nbr(1, 2, B), Nbr(0, 5, B)], Tail::One { a: 3, b: 4, col: B }),
        ),
        PlanId::TypeI(k) => {
            let head = match k {
                0 => vec![RedEdge(0, 1), Edges(2, 3, B)],
                1 => vec![RedEdge(0, 1), RedNbr(1, 2), Nbr(2, 3, B)],
                2 => vec![RedEdge(0, 1), Edges(2, 3, R)],
                3 => vec![RedEdge(0, 1), RedNbr(1, 2), Nbr(2, 3, R)],
                _ => unreachable!(),
            };
            let c2 = if k == 0 { Any } else { B };
            (p.type_i[k].clone(), s(head, two(4, 5, 6, 7, B, c2, false)))
        }
        PlanId::IIa => (
            p.iia.clone(),
            s(
                vec![RedEdge(0, 1), RedNbr(1, 2), RedNbr(0, 7), Nbr(2, 3, B), Nbr(7, 6, B)],
                Tail::One { a: 4, b: 5, col: B },
            ),
        ),
        PlanId::III => (
            p.iii.clone(),
            s(
                vec![RedPair(0, 1), RedNbr(1, 2), RedNbr(0, 7), Nbr(2, 3, B), Nbr(7, 6, B)],
                Tail::One { a: 4, b: 5, col: B },
            ),
        ),
        PlanId::IIb => (
            p.iib.clone(),
            s(
                vec![
                    RedPair(0, 1),
                    RedNbr(1, 2),
                    Nbr(0, 7, B),
                    Edges(3, 4, B),
                    Edges(5, 6, B),
                    Nbr(0, 8, B),
                    Nbr(1, 10, B),
                    Edges(9, 11, B),
                    Nbr(1, 12, B),
                    Nbr(2, 14, B),
                ],
                Tail::One { a: 13, b: 15, col: B },
            ),
        ),
        PlanId::IIc => (
            p.iic.clone(),
            s(
                vec![
                    RedPair(0, 1),
                    RedNbr(1, 2),
                    RedNbr(0, 7),
                    Edges(3, 4, B),
                    Edges(5, 6, B),
                    Nbr(0, 8, B),
                    Nbr(1, 10, B),
                    Edges(9, 11, B),
                    Nbr(1, 12, B),
                    Nbr(2, 14, B),
                    Edges(13, 15, B),
                    Nbr(0, 16, B),
                    Nbr(7, 18, B),
                ],
                Tail::One { a: 17, b: 19, col: B },
            ),
        ),
        PlanId::GadgetsIIb | PlanId::GadgetsIIc => {
            let mut steps = vec![Nbr(0, 8, B), Nbr(1, 10, B), Edges(9, 11, B), Nbr(1, 12, B), Nbr(2, 14, B)];
            let (pat, tail) = if id == PlanId::GadgetsIIb {
                (p.iib.clone(), Tail::One { a: 13, b: 15, col: B })
            } else {
                steps.extend([Edges(13, 15, B), Nbr(0, 16, B), Nbr(7, 18, B)]);
                (p.iic.clone(), Tail::One { a: 17, b: 19, col: B })
            };
            (pat, PlanSpec { fixed: oct, steps, tail })
        }
        PlanId::InvA => (
            p.inv_a.clone(),
            s(vec![RedPair(0, 1), Nbr(1, 2, B), Nbr(0, 7, B)], two(3, 4, 5, 6, B, B, false)),
        ),
        PlanId::InvB2 => (
            p.inv_b2.clone(),
            s(
                vec![RedPair(0, 1), Nbr(1, 2, B), Nbr(0, 7, B), RedNbr(2, 3), Nbr(3, 4, B)],
                Tail::One { a: 5, b: 6, col: B },
            ),
        ),
        PlanId::InvC => (
            p.inv_c.clone(),
            s(
                vec![RedEdge(1, 2), RedNbr(1, 0), Nbr(0, 7, B), RedNbr(2, 3), Nbr(3, 4, B)],
                Tail::One { a: 5, b: 6, col: B },
            ),
        ),
        PlanId::B1(v) => {
            let zero = if v < 2 { RedNbr(1, 0) } else { Nbr(1, 0, R) };
            let seven = if v % 2 == 0 { Nbr(0, 7, B) } else { Nbr(0, 7, R) };
            (p.b1[v].clone(), s(vec![RedEdge(1, 2), zero, seven], two(3, 4, 5, 6, B, B, false)))
        }
        PlanId::BhatIIb => (
            p.bhat_iib.clone(),
            PlanSpec { fixed: oct, steps: vec![Edges(8, 9, B), Edges(11, 10, B)], tail: two(12, 13, 15, 14, B, B, false) },
        ),
        PlanId::BhatIIc => (
            p.bhat_iic.clone(),
            PlanSpec {
                fixed: oct,
                steps: vec![Edges(8, 9, B), Edges(11, 10, B), Edges(12, 13, B), Edges(15, 14, B)],
                tail: two(16, 17, 19, 18, B, B, false),
            },
        ),
    }
}

fn build(id: PlanId) -> PlanSet {
    let (pat, spec) = spec_of(id);
    // 3-edge patterns have no orientation; their minus slot repeats the plus plan
    let (minus_pat, minus_spec) =
        if pat.k >= 8 { (pat.relabel(&SIGMA), spec.relabel(&SIGMA)) } else { (pat.clone(), spec.clone()) };
    PlanSet {
        naive: [compile(&pat, &spec.expanded()), compile(&minus_pat, &minus_spec.expanded())],
        cached: [compile(&pat, &spec), compile(&minus_pat, &minus_spec)],
    }
}

pub const ALL_IDS: [PlanId; 21] = [
    PlanId::EasyFwd,
    PlanId::EasyInv,
    PlanId::TypeI(0),
    PlanId::TypeI(1),
    PlanId::TypeI(2),
    PlanId::TypeI(3),
    PlanId::IIa,
    PlanId::III,
    PlanId::IIb,
    PlanId::IIc,
    PlanId::InvA,
    PlanId::InvB2,
    PlanId::InvC,
    PlanId::B1(0),
    PlanId::B1(1),
    PlanId::B1(2),
    PlanId::B1(3),
    PlanId::BhatIIb,
    PlanId::BhatIIc,
    PlanId::GadgetsIIb,
    PlanId::GadgetsIIc,
];

fn slot(id: PlanId) -> usize {
    match id {
        PlanId::EasyFwd => 0,
        PlanId::EasyInv => 1,
        PlanId::TypeI(k) => 2 + k,
        PlanId::IIa => 6,
        PlanId::III => 7,
        PlanId::IIb => 8,
        PlanId::IIc => 9,
        PlanId::InvA => 10,
        PlanId::InvB2 => 11,
        PlanId::InvC => 12,
        PlanId::B1(v) => 13 + v,
        PlanId::BhatIIb => 17,
        PlanId::BhatIIc => 18,
        PlanId::GadgetsIIb => 19,
        PlanId::GadgetsIIc => 20,
    }
}

pub fn plan_set(id: PlanId) -> &'static PlanSet {
    static SETS: OnceLock<Vec<PlanSet>> = OnceLock::new();
    let sets = SETS.get_or_init(|| ALL_IDS.iter().map(|&id| build(id)).collect());
    &sets[slot(id)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_plan_compiles() {
        for id in &ALL_IDS {
            let s = plan_set(*id);
            assert_eq!(s.naive[0].k, s.cached[0].k);
        }
    }

    #[test]
    fn slots_are_consistent() {
        for (i, id) in ALL_IDS.iter().enumerate() {
            assert_eq!(slot(*id), i);
        }
    }

    #[test]
    #[should_panic]
    fn incomplete_plan_rejected() {
        let p = patterns();
        compile(&p.easy_fwd, &PlanSpec { fixed: vec![], steps: vec![Step::RedEdge(0, 1)], tail: Tail::Empty });
    }
}
