use std::collections::BTreeMap;

use menger_knots::embed::embed_grid;
use menger_knots::geom::{rat, Point3};
use menger_knots::grid::catalog;
use menger_knots::necklace::*;
use menger_knots::wildknot::site_count;
use menger_knots::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn necklace(n: usize) -> Necklace {
    let (poly, _) = embed_grid(&catalog("trefoil").unwrap(), None).unwrap();
    make_necklace(&poly, n).unwrap()
}

fn check_levels(t: &Necklace, levels: &[Vec<Pearl>]) {
    let mut by_word: BTreeMap<&[usize], &Pearl> = BTreeMap::new();
    for (g, level) in levels.iter().enumerate() {
        assert_eq!(level.len() as u64, pearl_count(t.n as u64, g as u32));
        for p in level {
            assert_eq!(p.generation(), g);
            by_word.insert(&p.word, p);
        }
    }
    let mut families: BTreeMap<&[usize], Vec<&Pearl>> = BTreeMap::new();
    for p in levels.iter().flatten() {
        if let Some(parent) = p.parent_word() {
            assert!(strictly_inside(p, by_word[parent]), "{:?}", p.word);
            families.entry(parent).or_default().push(p);
        }
    }
    for kids in families.values() {
        for (i, a) in kids.iter().enumerate() {
            for b in &kids[i + 1..] {
                assert!(disjoint(a, b), "{:?} {:?}", a.word, b.word);
            }
        }
    }
}

#[test]
fn counts_nesting_and_disjointness() {
    for n in 3..=5 {
        let t = necklace(n);
        let levels = t.iterate(5).unwrap();
        check_levels(&t, &levels);
    }
}

#[test]
fn words_address_pearls() {
    let t = necklace(4);
    let levels = t.iterate(3).unwrap();
    for p in &levels[3] {
        assert_eq!(&t.pearl(&p.word).unwrap(), p);
    }
    assert!(matches!(t.pearl(&[1, 1, 0]), Err(Error::NonReducedWord(_))));
    assert!(t.pearl(&[]).is_err());
}

#[test]
fn inversions_are_involutions() {
    let t = necklace(3);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let mut c = || rat(rng.gen_range(-3000..3000), rng.gen_range(1..1000));
        let x = Point3::new(c(), c(), c());
        let ball = &t.pearls[rng.gen_range(0..3)];
        if x == ball.center {
            continue;
        }
        let y = invert_point(ball, &x).unwrap();
        assert_eq!(invert_point(ball, &y).unwrap(), x);
    }
}

#[test]
fn ledger_tracks_splice_sites() {
    let l = summand_ledger(3, 6);
    for q in 1..=6 {
        assert_eq!(l.increment(q), site_count(q as u32));
    }
    assert_eq!(summand_ledger(3, 2).totals(), (7, 3));
}

#[test]
fn too_few_pearls() {
    let (poly, _) = embed_grid(&catalog("trefoil").unwrap(), None).unwrap();
    assert!(make_necklace(&poly, 2).is_err());
    assert!(make_necklace(&poly, 21).is_err());
}
