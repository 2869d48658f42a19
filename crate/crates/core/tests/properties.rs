use dfactor::counting::Counter;
use dfactor::regular_gen::{initial_state, pairing_sample};
use dfactor::switchings::{toggles_3edge, toggles_octagon, validate_3edge, validate_type_i, SwitchType, SIGMA};
use dfactor::*;
use proptest::prelude::*;

fn setup(n: usize, d: usize, delta: usize, seed: u64) -> (HostInstance, ColoredState) {
    let mut rng = RngStream::new(seed, 0);
    let forb = pairing_sample(n, delta, &mut rng).unwrap();
    let h = load_instance(n, d, &forb).unwrap();
    let g = initial_state(&h, n, &mut rng, 10_000).unwrap().0;
    (h, g)
}

fn rotate(t: &[Vertex]) -> Vec<Vertex> {
    let mut r = t[1..].to_vec();
    r.push(t[0]);
    r
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn red_lookup_agrees_with_set(n in 6usize..60, delta in 1usize..4, seed in 0u64..1000) {
        prop_assume!(n * delta % 2 == 0 && delta < n);
        let mut rng = RngStream::new(seed, 0);
        let forb = pairing_sample(n, delta, &mut rng).unwrap();
        let d = if n % 2 == 0 { 1 } else { 2 };
        let h = load_instance(n, d, &forb).unwrap();
        for u in 0..n as Vertex {
            for v in 0..n as Vertex {
                prop_assert_eq!(h.is_red(u, v), h.is_forbidden_pair(u, v));
            }
        }
    }

    #[test]
    fn easy_switching_drops_one_red_edge(seed in 0u64..10_000, pick in any::<u64>()) {
        let (h, g) = setup(12, 3, 3, seed);
        prop_assume!(g.stratum() > 0);
        let moves = Counter::naive(&g).enumerate_easy(&h, &g);
        prop_assume!(!moves.is_empty());
        let t = &moves[(pick % moves.len() as u64) as usize];
        let t6: [Vertex; 6] = t.as_slice().try_into().unwrap();
        prop_assert!(validate_3edge(&h, &g, &t6));
        let (rem, add) = toggles_3edge(t);
        let g2 = g.toggled(&h, &rem, &add).unwrap();
        prop_assert!(g2.is_regular(3));
        prop_assert_eq!(g2.stratum() + 1, g.stratum());
        // the rotated tuple undoes it
        let (rem, add) = toggles_3edge(&rotate(t));
        prop_assert_eq!(g2.toggled(&h, &rem, &add).unwrap().key(), g.key());
    }

    #[test]
    fn type_i_moves_change_stratum_by_class(seed in 0u64..10_000, pick in any::<u64>()) {
        let (h, g) = setup(14, 3, 3, seed);
        prop_assume!(g.stratum() > 0);
        let moves = Counter::naive(&g).enumerate_moves(&h, &g, SwitchType::I);
        prop_assume!(!moves.is_empty());
        let m = &moves[(pick % moves.len() as u64) as usize];
        let class = validate_type_i(&h, &g, &m.v).unwrap();
        prop_assert_eq!(Some(class), m.class);
        let (rem, add) = toggles_octagon(&m.v);
        let g2 = g.toggled(&h, &rem, &add).unwrap();
        prop_assert!(g2.is_regular(3));
        prop_assert_eq!(g2.stratum() as isize - g.stratum() as isize, class.type_i_delta());
        prop_assert_eq!(g2.stratum(), m.to);
        // same edge set in the reversed frame, and the rotated octagon undoes it
        let s: Vec<Vertex> = SIGMA.iter().map(|&k| m.v[k]).collect();
        let (mut r1, mut a1) = toggles_octagon(&s);
        let (mut r0, mut a0) = (rem.clone(), add.clone());
        r0.sort();
        a0.sort();
        r1.sort();
        a1.sort();
        prop_assert_eq!((r0, a0), (r1, a1));
        let (rem, add) = toggles_octagon(&rotate(&m.v));
        prop_assert_eq!(g2.toggled(&h, &rem, &add).unwrap().key(), g.key());
    }

    #[test]
    fn typed_moves_preserve_degrees(seed in 0u64..10_000, ty_ix in 0usize..9, pick in any::<u64>()) {
        let (h, g) = setup(10, 2, 2, seed);
        let ty = SwitchType::ALL[ty_ix];
        let moves = Counter::naive(&g).enumerate_moves(&h, &g, ty);
        prop_assume!(!moves.is_empty());
        let m = &moves[(pick % moves.len() as u64) as usize];
        let (rem, add) = switchings::move_toggles(ty, &m.v);
        let g2 = g.toggled(&h, &rem, &add).unwrap();
        prop_assert!(g2.is_regular(2));
        prop_assert_eq!(g2.stratum(), m.to);
        prop_assert_eq!(m.from, g.stratum());
    }

    #[test]
    fn pairing_samples_are_simple_and_regular(n in 4usize..40, d in 1usize..4, seed in 0u64..1000) {
        prop_assume!(n * d % 2 == 0 && d < n);
        let e = pairing_sample(n, d, &mut RngStream::new(seed, 0)).unwrap();
        prop_assert_eq!(e.len(), n * d / 2);
        let mut deg = vec![0usize; n];
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &e {
            prop_assert!(u < v);
            prop_assert!(seen.insert((u, v)));
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        prop_assert!(deg.iter().all(|&x| x == d));
    }
}
