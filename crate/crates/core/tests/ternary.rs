use menger_knots::geom::{int, rat, Rational};
use menger_knots::ternary::oracle::subdivision_oracle;
use menger_knots::ternary::*;
use proptest::prelude::*;

const SPACES: [Space; 4] = [Space::Cantor, Space::CarpetFace, Space::Sponge, Space::Carpet2];

/// Rationals in [0, 1], half of them with a power-of-three denominator so
/// that cell boundaries are hit often.
fn unit_rat() -> impl Strategy<Value = Rational> {
    prop_oneof![
        (1i64..=6561).prop_flat_map(|d| (0..=d).prop_map(move |n| rat(n, d))),
        (0u32..=8).prop_flat_map(|j| {
            let d = 3i64.pow(j);
            (0..=d).prop_map(move |n| rat(n, d))
        }),
    ]
}

fn point(dim: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(unit_rat(), dim)
}

fn cantor_point() -> impl Strategy<Value = Rational> {
    // finite sums of 2/3^i, optionally ending in a repeating tail of 2s
    (prop::collection::vec(prop::bool::ANY, 0..12), prop::bool::ANY).prop_map(|(bits, tail)| {
        let mut x = int(0);
        let mut w = int(1);
        for b in &bits {
            w /= int(3);
            if *b {
                x += int(2) * &w;
            }
        }
        if tail {
            x += w;
        }
        x
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn digit_predicate_matches_oracle(space in prop::sample::select(SPACES.to_vec()), seed in point(3), k in 0usize..=5) {
        let c = &seed[..space.dim()];
        prop_assert_eq!(in_stage(space, c, k).unwrap(), subdivision_oracle(space, c, k));
    }

    #[test]
    fn stages_are_nested(space in prop::sample::select(SPACES.to_vec()), seed in point(3), k in 0usize..6) {
        let c = &seed[..space.dim()];
        if in_stage(space, c, k + 1).unwrap() {
            prop_assert!(in_stage(space, c, k).unwrap());
        }
    }

    #[test]
    fn limit_set_is_the_intersection(space in prop::sample::select(SPACES.to_vec()), seed in point(3)) {
        let c = &seed[..space.dim()];
        let limit = in_space(space, c).unwrap();
        if limit {
            for k in 0..=8 {
                prop_assert!(in_stage(space, c, k).unwrap());
            }
            prop_assert!(witness(space, c).unwrap().is_some());
        } else {
            let (k, _) = refutation(space, c, 256).unwrap().expect("refuted");
            prop_assert!(!in_stage(space, c, k).unwrap());
        }
    }

    #[test]
    fn cantor_dust_lies_in_sponge(x in cantor_point(), y in cantor_point(), z in unit_rat()) {
        prop_assert!(in_cantor(&x).unwrap());
        prop_assert!(in_sponge(&x, &y, &z).unwrap());
        prop_assert!(in_sponge(&z, &x, &y).unwrap());
    }

    #[test]
    fn sponge_inside_both_carpets(p in point(3)) {
        if in_sponge(&p[0], &p[1], &p[2]).unwrap() {
            prop_assert!(in_carpet2(&p[0], &p[1], &p[2]).unwrap());
        }
    }

    #[test]
    fn digits_reconstruct_value(x in unit_rat(), k in 1usize..10) {
        let exps = expansions(&x).unwrap();
        let mut prefixes: Vec<Vec<u8>> = exps.iter().map(|e| e.prefix(k)).collect();
        prefixes.dedup();
        for e in &exps {
            prop_assert_eq!(e.value(), x.clone());
        }
        prop_assert_eq!(ternary_digits(&x, k).unwrap(), prefixes);
    }
}

#[test]
fn classic_members() {
    assert!(in_cantor(&rat(1, 4)).unwrap());
    assert!(in_cantor(&rat(3, 4)).unwrap());
    assert!(in_cantor(&rat(1, 10)).unwrap());
    assert!(!in_cantor(&rat(1, 2)).unwrap());
    assert!(in_cantor(&rat(1, 3)).unwrap());
    assert!(!in_sponge(&rat(1, 2), &rat(1, 2), &int(0)).unwrap());
    assert!(in_carpet2(&rat(1, 2), &rat(1, 2), &int(0)).unwrap());
    assert!(!in_carpet2(&rat(1, 2), &rat(1, 2), &rat(1, 2)).unwrap());
}

#[test]
fn out_of_range_is_an_error() {
    assert!(in_cantor(&rat(4, 3)).is_err());
    assert!(in_stage(Space::Sponge, &[int(0), int(-1), int(0)], 2).is_err());
}

#[test]
fn cantor_endpoint_segments_stay_in_stage() {
    for k in 0..5u32 {
        let e = cantor_endpoints(k);
        assert_eq!(e.len(), 1 << (k + 1));
        for w in e.chunks(2) {
            let s = AxisSegment::new(Axis::Y, [int(1), int(0)], w[0].clone(), w[1].clone());
            assert!(segment_in_stage(&s, k as usize, Space::Sponge));
        }
    }
}
