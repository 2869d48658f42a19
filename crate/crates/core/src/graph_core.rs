//! Host instances (the forbidden "red" graph) and coloured d-regular states.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = u32;
pub type Pair = (Vertex, Vertex);

/// Canonical (min, max) form of an unordered pair.
#[inline]
pub fn pair(u: Vertex, v: Vertex) -> Pair {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairColor {
    Black,
    Red,
}

/// Problem description: n, target degree d, and the forbidden pairs E(H̄).
#[derive(Debug, Clone)]
pub struct HostInstance {
    n: usize,
    d: usize,
    delta: usize,
    m_red_total: usize,
    regular_complement: bool,
    forbidden: Vec<Pair>,
    forbidden_set: HashSet<Pair>,
    red_adj: Vec<Vec<Vertex>>,
    /// Row-major n×n bit matrix of forbidden pairs, kept for small n.
    red_bits: Option<Vec<u64>>,
    duplicate_pairs: usize,
}

const DENSE_RED_MAX_N: usize = 4096;

/// On-disk instance format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub d: usize,
    #[serde(default)]
    pub forbidden: Vec<[u32; 2]>,
}

/// Builds a [`HostInstance`], deduplicating repeated pairs.
pub fn load_instance(n: usize, d: usize, forbidden: &[Pair]) -> Result<HostInstance> {
    if d < 1 || d >= n {
        return Err(Error::DegreeOutOfRange { n, d });
    }
    if (d * n) % 2 == 1 {
        return Err(Error::OddProduct { n, d });
    }
    let mut set = HashSet::with_capacity(forbidden.len());
    let mut list = Vec::with_capacity(forbidden.len());
    let mut dups = 0;
    for &(u, v) in forbidden {
        for w in [u, v] {
            if w as usize >= n {
                return Err(Error::VertexOutOfRange { v: w as usize, n });
            }
        }
        if u == v {
            return Err(Error::Loop(u));
        }
        let p = pair(u, v);
        if set.insert(p) {
            list.push(p);
        } else {
            dups += 1;
        }
    }
    list.sort_unstable();
    let mut red_adj = vec![Vec::new(); n];
    for &(u, v) in &list {
        red_adj[u as usize].push(v);
        red_adj[v as usize].push(u);
    }
    for l in &mut red_adj {
        l.sort_unstable();
    }
    let delta = red_adj.iter().map(Vec::len).max().unwrap_or(0);
    let regular_complement = red_adj.iter().all(|l| l.len() == delta);
    let red_bits = (n <= DENSE_RED_MAX_N).then(|| {
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; n * words];
        for &(u, v) in &list {
            for (a, b) in [(u as usize, v as usize), (v as usize, u as usize)] {
                bits[a * words + b / 64] |= 1 << (b % 64);
            }
        }
        bits
    });
    Ok(HostInstance {
        n,
        d,
        delta,
        m_red_total: list.len(),
        regular_complement,
        forbidden: list,
        forbidden_set: set,
        red_adj,
        red_bits,
        duplicate_pairs: dups,
    })
}

impl HostInstance {
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn d(&self) -> usize {
        self.d
    }
    pub fn delta(&self) -> usize {
        self.delta
    }
    pub fn m_red_total(&self) -> usize {
        self.m_red_total
    }
    pub fn regular_complement(&self) -> bool {
        self.regular_complement
    }
    /// Number of duplicate pairs dropped while loading.
    pub fn duplicate_pairs(&self) -> usize {
        self.duplicate_pairs
    }
    /// Sorted canonical forbidden pairs.
    pub fn forbidden(&self) -> &[Pair] {
        &self.forbidden
    }
    pub fn red_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.red_adj[v as usize]
    }
    #[inline]
    pub fn is_red(&self, u: Vertex, v: Vertex) -> bool {
        if let Some(bits) = &self.red_bits {
            let (u, v) = (u as usize, v as usize);
            return bits[u * self.n.div_ceil(64) + v / 64] >> (v % 64) & 1 == 1;
        }
        let (a, b) = if self.red_adj[u as usize].len() <= self.red_adj[v as usize].len() {
            (u, v)
        } else {
            (v, u)
        };
        let l = &self.red_adj[a as usize];
        if l.len() <= 16 {
            l.contains(&b)
        } else {
            l.binary_search(&b).is_ok()
        }
    }
    /// Set-based membership; same answer as [`HostInstance::is_red`].
    pub fn is_forbidden_pair(&self, u: Vertex, v: Vertex) -> bool {
        self.forbidden_set.contains(&pair(u, v))
    }
    pub fn color(&self, u: Vertex, v: Vertex) -> PairColor {
        if self.is_red(u, v) {
            PairColor::Red
        } else {
            PairColor::Black
        }
    }
    pub fn with_d(&self, d: usize) -> Result<HostInstance> {
        load_instance(self.n, d, &self.forbidden)
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            n: self.n,
            d: self.d,
            forbidden: self.forbidden.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }

    pub fn from_json_str(s: &str) -> Result<HostInstance> {
        let f: InstanceFile = serde_json::from_str(s)?;
        let pairs: Vec<Pair> = f.forbidden.iter().map(|p| (p[0], p[1])).collect();
        load_instance(f.n, f.d, &pairs)
    }

    pub fn from_json_file(path: &Path) -> Result<HostInstance> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    /// Plain edge list, one `u v` pair per line; `#` starts a comment.
    pub fn from_edge_list_str(n: usize, d: usize, text: &str) -> Result<HostInstance> {
        load_instance(n, d, &parse_edge_list(text)?)
    }
}

pub fn parse_edge_list(text: &str) -> Result<Vec<Pair>> {
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let mut next = || -> Result<u32> {
            it.next()
                .ok_or_else(|| Error::Parse(format!("line {}: expected two vertices", lineno + 1)))?
                .parse::<u32>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
        };
        let u = next()?;
        let v = next()?;
        pairs.push((u, v));
    }
    Ok(pairs)
}

/// Lemma-style expectation of red edges in a uniform d-regular graph: |E(H̄)| d / (n-1).
pub fn expected_red_edges(host: &HostInstance) -> BigRational {
    BigRational::new(
        BigInt::from(host.m_red_total * host.d),
        BigInt::from(host.n - 1),
    )
}

/// Bitset encoding of an edge set over the n(n-1)/2 pair slots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphKey(pub Vec<u64>);

#[inline]
fn pair_index(n: usize, u: Vertex, v: Vertex) -> usize {
    let (u, v) = (u as usize, v as usize);
    u * n - u * (u + 1) / 2 + (v - u - 1)
}

impl GraphKey {
    pub fn from_edges(n: usize, edges: &[Pair]) -> GraphKey {
        let slots = n * (n - 1) / 2;
        let mut bits = vec![0u64; slots.div_ceil(64).max(1)];
        for &(u, v) in edges {
            let (u, v) = pair(u, v);
            let i = pair_index(n, u, v);
            bits[i / 64] |= 1 << (i % 64);
        }
        GraphKey(bits)
    }

    pub fn edges(&self, n: usize) -> Vec<Pair> {
        let mut out = Vec::new();
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                let i = pair_index(n, u, v);
                if self.0[i / 64] >> (i % 64) & 1 == 1 {
                    out.push((u, v));
                }
            }
        }
        out
    }
}

/// Current graph G with its red edges; stratum = number of red edges.
#[derive(Debug, Clone)]
pub struct ColoredState {
    adj: Vec<Vec<Vertex>>,
    red: Vec<Pair>,
    red_pos: HashMap<Pair, usize>,
    edge_count: usize,
}

impl PartialEq for ColoredState {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj
    }
}
impl Eq for ColoredState {}

impl ColoredState {
    /// Any simple graph on the host's vertex set (regularity is not required here).
    pub fn from_edges(host: &HostInstance, edges: &[Pair]) -> Result<ColoredState> {
        let n = host.n();
        let mut s = ColoredState {
            adj: vec![Vec::new(); n],
            red: Vec::new(),
            red_pos: HashMap::new(),
            edge_count: 0,
        };
        for &(u, v) in edges {
            for w in [u, v] {
                if w as usize >= n {
                    return Err(Error::VertexOutOfRange { v: w as usize, n });
                }
            }
            if u == v {
                return Err(Error::Loop(u));
            }
            if s.has_edge(u, v) {
                return Err(Error::EdgePresent(u.min(v), u.max(v)));
            }
            s.insert(host, u, v);
        }
        Ok(s)
    }

    pub fn from_key(host: &HostInstance, key: &GraphKey) -> ColoredState {
        ColoredState::from_edges(host, &key.edges(host.n())).expect("keys encode simple graphs")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }
    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize].len()
    }
    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize]
    }
    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        let l = &self.adj[u as usize];
        if l.len() <= 16 {
            l.contains(&v)
        } else {
            l.binary_search(&v).is_ok()
        }
    }
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }
    /// Current stratum index i (maintained incrementally).
    pub fn stratum(&self) -> usize {
        self.red.len()
    }
    /// Red edges of G in insertion order (deterministic for a fixed history).
    pub fn red_edges(&self) -> &[Pair] {
        &self.red
    }
    pub fn edges(&self) -> Vec<Pair> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (u, l) in self.adj.iter().enumerate() {
            for &v in l {
                if (u as Vertex) < v {
                    out.push((u as Vertex, v));
                }
            }
        }
        out
    }
    pub fn key(&self) -> GraphKey {
        GraphKey::from_edges(self.n(), &self.edges())
    }
    pub fn is_regular(&self, d: usize) -> bool {
        self.adj.iter().all(|l| l.len() == d)
    }

    fn insert(&mut self, host: &HostInstance, u: Vertex, v: Vertex) {
        let lu = &mut self.adj[u as usize];
        let pos = lu.partition_point(|&x| x < v);
        lu.insert(pos, v);
        let lv = &mut self.adj[v as usize];
        let pos = lv.partition_point(|&x| x < u);
        lv.insert(pos, u);
        self.edge_count += 1;
        if host.is_red(u, v) {
            let p = pair(u, v);
            self.red_pos.insert(p, self.red.len());
            self.red.push(p);
        }
    }

    fn delete(&mut self, host: &HostInstance, u: Vertex, v: Vertex) {
        let lu = &mut self.adj[u as usize];
        let pos = lu.partition_point(|&x| x < v);
        lu.remove(pos);
        let lv = &mut self.adj[v as usize];
        let pos = lv.partition_point(|&x| x < u);
        lv.remove(pos);
        self.edge_count -= 1;
        if host.is_red(u, v) {
            let p = pair(u, v);
            let idx = self.red_pos.remove(&p).expect("red edge indexed");
            let last = self.red.pop().expect("nonempty");
            if last != p {
                self.red[idx] = last;
                self.red_pos.insert(last, idx);
            }
        }
    }

    /// Removes `remove` and adds `add`; all-or-nothing.
    pub fn toggle_set(&mut self, host: &HostInstance, remove: &[Pair], add: &[Pair]) -> Result<()> {
        let rem: HashSet<Pair> = remove.iter().map(|&(u, v)| pair(u, v)).collect();
        for &(u, v) in &rem {
            if !self.has_edge(u, v) {
                return Err(Error::EdgeMissing(u, v));
            }
        }
        let mut seen = HashSet::new();
        for &(u, v) in add {
            let p = pair(u, v);
            if u == v {
                return Err(Error::Loop(u));
            }
            if rem.contains(&p) || !seen.insert(p) || self.has_edge(u, v) {
                return Err(Error::EdgePresent(p.0, p.1));
            }
        }
        for &(u, v) in remove {
            self.delete(host, u, v);
        }
        for &(u, v) in add {
            self.insert(host, u, v);
        }
        Ok(())
    }

    /// Copying variant of [`ColoredState::toggle_set`].
    pub fn toggled(&self, host: &HostInstance, remove: &[Pair], add: &[Pair]) -> Result<ColoredState> {
        let mut s = self.clone();
        s.toggle_set(host, remove, add)?;
        Ok(s)
    }

    /// Toggle coming from a switching: degrees of touched vertices must stay d.
    pub fn apply_switch_toggles(&mut self, host: &HostInstance, remove: &[Pair], add: &[Pair]) -> Result<()> {
        self.toggle_set(host, remove, add)?;
        for &(u, v) in remove.iter().chain(add) {
            for w in [u, v] {
                if self.degree(w) != host.d() {
                    let got = self.degree(w);
                    // restore before reporting
                    self.toggle_set(host, add, remove).expect("inverse toggle is valid");
                    return Err(Error::DegreeBroken { v: w, got, want: host.d() });
                }
            }
        }
        Ok(())
    }
}

/// Full recount of |E(G) ∩ E(H̄)|.
pub fn red_count(host: &HostInstance, state: &ColoredState) -> usize {
    state.edges().iter().filter(|&&(u, v)| host.is_red(u, v)).count()
}

/// True iff G is d-regular and has no red edge.
pub fn is_d_factor(host: &HostInstance, state: &ColoredState) -> bool {
    state.is_regular(host.d()) && red_count(host, state) == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: u32) -> Vec<Pair> {
        (0..n).map(|i| (i, (i + 1) % n)).collect()
    }

    #[test]
    fn instance_examples() {
        let h = load_instance(4, 2, &[]).unwrap();
        assert_eq!((h.delta(), h.m_red_total(), h.regular_complement()), (0, 0, true));
        let h = load_instance(8, 2, &cycle(8)).unwrap();
        assert_eq!((h.delta(), h.m_red_total(), h.regular_complement()), (2, 8, true));
        let h = load_instance(5, 2, &[(0, 1), (0, 2)]).unwrap();
        assert_eq!((h.delta(), h.m_red_total(), h.regular_complement()), (2, 2, false));
    }

    #[test]
    fn instance_errors() {
        assert_eq!(load_instance(3, 1, &[]).unwrap_err(), Error::OddProduct { n: 3, d: 1 });
        assert_eq!(load_instance(4, 4, &[]).unwrap_err(), Error::DegreeOutOfRange { n: 4, d: 4 });
        assert_eq!(load_instance(4, 0, &[]).unwrap_err(), Error::DegreeOutOfRange { n: 4, d: 0 });
        let h = load_instance(4, 2, &[(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(h.m_red_total(), 1);
        assert_eq!(h.duplicate_pairs(), 2);
    }

    #[test]
    fn red_count_examples() {
        let h = load_instance(3, 2, &[(0, 1)]).unwrap();
        let s = ColoredState::from_edges(&h, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(red_count(&h, &s), 1);
        assert_eq!(s.stratum(), 1);
        let h = load_instance(8, 2, &cycle(8)).unwrap();
        let s = ColoredState::from_edges(&h, &cycle(8)).unwrap();
        assert_eq!(red_count(&h, &s), 8);
        let h = load_instance(8, 2, &[]).unwrap();
        let s = ColoredState::from_edges(&h, &cycle(8)).unwrap();
        assert_eq!(red_count(&h, &s), 0);
    }

    #[test]
    fn toggle_examples() {
        let h = load_instance(6, 2, &[]).unwrap();
        let mut s = ColoredState::from_edges(&h, &cycle(6)).unwrap();
        let before = s.clone();
        s.toggle_set(&h, &[], &[]).unwrap();
        assert_eq!(s, before);
        s.toggle_set(&h, &[(0, 1), (2, 3), (4, 5)], &[(1, 3), (2, 5), (0, 4)]).unwrap();
        let mut e = s.edges();
        e.sort();
        let mut want = vec![(1, 2), (3, 4), (0, 5), (1, 3), (2, 5), (0, 4)];
        want.sort();
        assert_eq!(e, want);
        assert!(s.is_regular(2));
        assert_eq!(s.toggle_set(&h, &[(0, 1)], &[]).unwrap_err(), Error::EdgeMissing(0, 1));
        assert_eq!(s.toggle_set(&h, &[], &[(1, 2)]).unwrap_err(), Error::EdgePresent(1, 2));
    }

    #[test]
    fn degree_guard_reverts() {
        let h = load_instance(6, 2, &[]).unwrap();
        let mut s = ColoredState::from_edges(&h, &cycle(6)).unwrap();
        let before = s.clone();
        let err = s.apply_switch_toggles(&h, &[(0, 1)], &[(0, 2)]).unwrap_err();
        assert!(matches!(err, Error::DegreeBroken { .. }));
        assert_eq!(s, before);
    }

    #[test]
    fn d_factor_examples() {
        let h = load_instance(6, 2, &[]).unwrap();
        assert!(is_d_factor(&h, &ColoredState::from_edges(&h, &cycle(6)).unwrap()));
        let h1 = load_instance(6, 2, &[(0, 1)]).unwrap();
        assert!(!is_d_factor(&h1, &ColoredState::from_edges(&h1, &cycle(6)).unwrap()));
        let path: Vec<Pair> = (0..5).map(|i| (i, i + 1)).collect();
        assert!(!is_d_factor(&h, &ColoredState::from_edges(&h, &path).unwrap()));
    }

    #[test]
    fn expectation_values() {
        let h = load_instance(5, 2, &[(0, 1), (0, 2)]).unwrap();
        assert_eq!(expected_red_edges(&h), BigRational::from_integer(1.into()));
        let h = load_instance(8, 2, &cycle(8)).unwrap();
        assert_eq!(expected_red_edges(&h), BigRational::new(16.into(), 7.into()));
        let h = load_instance(8, 2, &[]).unwrap();
        assert_eq!(expected_red_edges(&h), BigRational::from_integer(0.into()));
    }

    #[test]
    fn key_roundtrip() {
        let h = load_instance(7, 2, &[]).unwrap();
        let s = ColoredState::from_edges(&h, &cycle(7)).unwrap();
        let k = s.key();
        assert_eq!(ColoredState::from_key(&h, &k), s);
    }

    #[test]
    fn loaders() {
        let h = HostInstance::from_json_str(r#"{"n":5,"d":2,"forbidden":[[0,1],[0,2]]}"#).unwrap();
        assert_eq!(h.m_red_total(), 2);
        let h = HostInstance::from_edge_list_str(5, 2, "0 1\n# c\n\n0 2\n").unwrap();
        assert_eq!(h.m_red_total(), 2);
        assert!(HostInstance::from_edge_list_str(5, 2, "0\n").is_err());
    }
}
