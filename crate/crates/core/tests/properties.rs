use hypercube_orient::cube::{edge_index, flip, guess, in_degrees, observation, simulate, Orientation, Vertex};
use hypercube_orient::feasibility::{enumerate_feasible, solve_counts};
use hypercube_orient::hamming::HammingCode;
use hypercube_orient::io::{read_hco, read_khm, write_hco, write_khm};
use hypercube_orient::kary::{kary_blowup, kary_lift, mark_degrees, KaryCube, Marking};
use hypercube_orient::reductions::{construct, reverse};
use hypercube_orient::verify::verify;
use num_bigint::BigUint;
use proptest::prelude::*;

fn orientation(max_n: u32) -> impl Strategy<Value = Orientation> {
    (1..=max_n).prop_flat_map(|n| {
        let words = Orientation::new(n).unwrap().words().len();
        let edges = n as u64 * (1 << (n - 1));
        proptest::collection::vec(any::<u64>(), words).prop_map(move |mut w| {
            if !edges.is_multiple_of(64) {
                *w.last_mut().unwrap() &= (1 << (edges % 64)) - 1;
            }
            Orientation::from_words(n, w).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn hco_roundtrip(o in orientation(9), a in 0u32..5, b in 0u32..9) {
        let text = write_hco(&o, a, b);
        let back = read_hco(&text).unwrap();
        prop_assert_eq!(back.orientation, o);
        prop_assert_eq!((back.a, back.b), (a, b));
    }

    #[test]
    fn in_degrees_sum_to_edge_count(o in orientation(10)) {
        let total: u64 = in_degrees(&o).as_slice().iter().map(|&d| d as u64).sum();
        prop_assert_eq!(total, o.num_edges());
    }

    #[test]
    fn reversal_complements_degrees(o in orientation(8)) {
        let n = o.dim();
        let (d, r) = (in_degrees(&o), in_degrees(&reverse(&o)));
        for v in 0..o.num_vertices() {
            prop_assert_eq!(d.of(Vertex(v)) + r.of(Vertex(v)), n);
        }
    }

    #[test]
    fn correct_guesses_equal_in_degree(o in orientation(8), seed in any::<u64>()) {
        let v = Vertex(seed % o.num_vertices());
        prop_assert_eq!(simulate(&o, v).unwrap(), in_degrees(&o).of(v));
    }

    #[test]
    fn guess_is_head_bit(o in orientation(7), seed in any::<u64>(), p in 0u32..7) {
        let n = o.dim();
        let player = p % n;
        let v = Vertex(seed % o.num_vertices());
        let other = flip(v, player, n).unwrap();
        // both endpoints of the edge see the same thing, so they guess alike
        let g = guess(&o, player, observation(v, player)).unwrap();
        prop_assert_eq!(g, guess(&o, player, observation(other, player)).unwrap());
        let lo = v.0 & !(1 << player);
        let idx = edge_index(n, lo, player);
        prop_assert_eq!(g == 1, o.bit(idx));
    }

    #[test]
    fn counts_satisfy_both_equations(n in 1u32..300, a in 0u32..300, b in 0u32..300) {
        prop_assume!(a <= n && b <= n);
        let (a, b) = (a.min(b), a.max(b));
        if let Some(c) = solve_counts(b, a, n) {
            let half = BigUint::from(1u8) << (n - 1);
            prop_assert_eq!(&c.s + &c.t, &half * 2u8);
            prop_assert_eq!(&c.s * a + &c.t * b, half * n);
        }
    }

    #[test]
    fn feasible_pairs_straddle_half(n in 1u32..200) {
        for p in enumerate_feasible(n) {
            prop_assert!(2 * p.a < n && n < 2 * p.b);
        }
    }

    #[test]
    fn decode_lands_within_distance_one(k in 1u32..=4, seed in any::<u64>()) {
        let code = HammingCode::new(k).unwrap();
        let v = seed % (1 << code.len());
        let (h, pos) = code.decode(v);
        prop_assert!(code.is_codeword(h));
        match pos {
            None => prop_assert_eq!(h, v),
            Some(i) => prop_assert_eq!(h ^ v, 1 << (i - 1)),
        }
    }

    #[test]
    fn khm_roundtrip(k in 2u32..5, n in 1u32..4, seed in any::<u64>()) {
        let cube = KaryCube::new(k, n).unwrap();
        let mut s = seed;
        let marks = (0..cube.num_lines()).map(|_| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 33) % k as u64) as u8
        }).collect();
        let m = Marking::new(cube, marks).unwrap();
        prop_assert_eq!(read_khm(&write_khm(&m)).unwrap(), m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn constructions_verify(n in 1u32..=11, pick in any::<prop::sample::Index>()) {
        let pairs = enumerate_feasible(n);
        let p = &pairs[pick.index(pairs.len())];
        let o = construct(p.a, p.b, n).unwrap();
        prop_assert!(verify(&o, p.a, p.b).pass);
    }

    #[test]
    fn kary_lift_and_blowup_shift_and_scale(k in 2u32..4, digit in 0u8..3, l in 1u32..3) {
        prop_assume!((digit as u32) < k);
        let base = Marking::new(KaryCube::new(k, 1).unwrap(), vec![digit]).unwrap();
        let lifted = kary_lift(&base).unwrap();
        let support: Vec<u32> = mark_degrees(&lifted).support();
        prop_assert_eq!(support, vec![1, 2]);
        let blown = kary_blowup(&base, l).unwrap();
        prop_assert_eq!(mark_degrees(&blown).support(), vec![0, l]);
    }
}
