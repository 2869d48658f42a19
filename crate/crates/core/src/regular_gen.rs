//! Uniform simple d-regular graphs via the pairing model with full rejection.

use crate::error::{Error, Result};
use crate::graph_core::{ColoredState, HostInstance, Pair};
use crate::rng::RngStream;

pub const DEFAULT_RESTART_BUDGET: u64 = 10_000;

fn check_params(n: usize, d: usize) -> Result<()> {
    if d < 1 || d >= n {
        return Err(Error::DegreeOutOfRange { n, d });
    }
    if (n * d) % 2 == 1 {
        return Err(Error::OddProduct { n, d });
    }
    Ok(())
}

/// One uniform simple d-regular graph on `n` labelled vertices.
///
/// Pairs the `dn` points of a random permutation and restarts on the first
/// loop or repeated pair, so accepted outputs are uniform over simple graphs.
pub fn pairing_sample(n: usize, d: usize, rng: &mut RngStream) -> Result<Vec<Pair>> {
    check_params(n, d)?;
    let mut points: Vec<u32> = (0..n * d).map(|p| (p / d) as u32).collect();
    let mut adj: Vec<Vec<u32>> = vec![Vec::with_capacity(d); n];
    'retry: loop {
        for l in adj.iter_mut() {
            l.clear();
        }
        // Fisher-Yates, pairing positions (2k, 2k+1) as soon as they are fixed.
        let len = points.len();
        let mut edges = Vec::with_capacity(len / 2);
        for k in 0..len / 2 {
            for pos in [2 * k, 2 * k + 1] {
                let j = pos + rng.below_usize(len - pos);
                points.swap(pos, j);
            }
            let (u, v) = (points[2 * k], points[2 * k + 1]);
            if u == v || adj[u as usize].contains(&v) {
                continue 'retry;
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
            edges.push(if u < v { (u, v) } else { (v, u) });
        }
        return Ok(edges);
    }
}

/// Repeated independent draws until one has at most `i_max` red edges.
/// Returns the state and the number of draws used.
pub fn initial_state(
    host: &HostInstance,
    i_max: usize,
    rng: &mut RngStream,
    restart_budget: u64,
) -> Result<(ColoredState, u64)> {
    for draw in 1..=restart_budget {
        let edges = pairing_sample(host.n(), host.d(), rng)?;
        let red = edges.iter().filter(|&&(u, v)| host.is_red(u, v)).count();
        if red <= i_max {
            return Ok((ColoredState::from_edges(host, &edges)?, draw));
        }
    }
    Err(Error::BudgetExhausted { what: "initial graph draws".into(), budget: restart_budget })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_core::load_instance;

    #[test]
    fn trivial_cases() {
        let mut rng = RngStream::new(0, 0);
        assert_eq!(pairing_sample(2, 1, &mut rng).unwrap(), vec![(0, 1)]);
        assert_eq!(pairing_sample(3, 1, &mut rng).unwrap_err(), Error::OddProduct { n: 3, d: 1 });
        for _ in 0..50 {
            let e = pairing_sample(10, 3, &mut rng).unwrap();
            let h = load_instance(10, 3, &[]).unwrap();
            assert!(ColoredState::from_edges(&h, &e).unwrap().is_regular(3));
        }
    }

    #[test]
    fn empty_forbidden_accepts_first_draw() {
        let h = load_instance(8, 2, &[]).unwrap();
        let mut rng = RngStream::new(5, 0);
        for _ in 0..20 {
            assert_eq!(initial_state(&h, 0, &mut rng, 1).unwrap().1, 1);
        }
    }

    #[test]
    fn conditioning_respected() {
        let c8: Vec<Pair> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
        let h = load_instance(8, 2, &c8).unwrap();
        let mut rng = RngStream::new(9, 0);
        for _ in 0..200 {
            let (s, _) = initial_state(&h, 0, &mut rng, 10_000).unwrap();
            assert_eq!(s.stratum(), 0);
        }
    }

    #[test]
    fn deterministic() {
        let a = pairing_sample(30, 3, &mut RngStream::new(11, 4)).unwrap();
        let b = pairing_sample(30, 3, &mut RngStream::new(11, 4)).unwrap();
        assert_eq!(a, b);
    }
}
