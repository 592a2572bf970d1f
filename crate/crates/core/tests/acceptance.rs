//! Acceptance suite: one PASS/FAIL line per criterion. Run with
//! `cargo test -p menger-knots --test acceptance`.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use menger_knots::embed::{containment, embed_grid, stage_for};
use menger_knots::geom::{int, pow3, rat, third_pow, Point3, Rational};
use menger_knots::grid::catalog;
use menger_knots::invariants::diagram::standard;
use menger_knots::invariants::{generic_directions, is_simple, project, project_collapsing};
use menger_knots::necklace::{disjoint, invert_point, make_necklace, pearl_count, strictly_inside, summand_ledger, Pearl};
use menger_knots::squareflake::{replaced_count, squareflake, unchanged_segments, vertex_count};
use menger_knots::ternary::oracle::subdivision_oracle;
use menger_knots::ternary::{in_sponge, in_stage, segment_in_stage, Axis, AxisSegment, Space};
use menger_knots::wildknot::{
    approximant, clearance_sq, neighborhood_census, sites, wild_set_plan, Approximant, BuildOptions, KnotAssignment,
    Summand,
};
use menger_knots::Error;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn depth() -> Point3 {
    Point3::from_ratios([(0, 1), (0, 1), (1, 1)])
}

fn depth_det(p: &menger_knots::ClosedPolyline3) -> BigInt {
    project_collapsing(p, &depth()).unwrap().determinant().unwrap()
}

fn random_unit(rng: &mut ChaCha8Rng) -> Rational {
    let d = rng.gen_range(1..=6561i64);
    rat(rng.gen_range(0..=d), d)
}

fn random_triadic(rng: &mut ChaCha8Rng) -> Rational {
    let d = 3i64.pow(rng.gen_range(0..=8));
    rat(rng.gen_range(0..=d), d)
}

fn predicates_match_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut points: Vec<[Rational; 3]> = (0..10_000)
        .map(|_| [random_unit(&mut rng), random_unit(&mut rng), random_unit(&mut rng)])
        .collect();
    // boundary-heavy supplement: power-of-three denominators
    points.extend((0..10_000).map(|_| [random_triadic(&mut rng), random_triadic(&mut rng), random_triadic(&mut rng)]));
    let spaces = [Space::Cantor, Space::CarpetFace, Space::Sponge, Space::Carpet2];
    let mismatches: Vec<String> = points
        .par_iter()
        .flat_map_iter(|p| {
            spaces.iter().flat_map(move |&s| {
                (0..=5).filter_map(move |k| {
                    let c = &p[..s.dim()];
                    let fast = in_stage(s, c, k).unwrap();
                    (fast != subdivision_oracle(s, c, k)).then(|| format!("{} {:?} k={k}", s.name(), c))
                })
            })
        })
        .collect();
    let elapsed = start.elapsed();
    ensure(mismatches.is_empty(), || format!("{} mismatches, first {}", mismatches.len(), mismatches[0]))?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{} checks agree in {:.2?}", points.len() * 4 * 6, elapsed))
}

/// Element of the Cantor set with ternary digits in {0, 2}: a random prefix
/// followed by a random repeating block.
fn random_cantor(rng: &mut ChaCha8Rng) -> Rational {
    let digits = |rng: &mut ChaCha8Rng, n: usize| -> Vec<i64> { (0..n).map(|_| 2 * rng.gen_range(0..=1)).collect() };
    let (np, nb) = (rng.gen_range(0..8), rng.gen_range(1..5));
    let prefix = digits(rng, np);
    let block = digits(rng, nb);
    let value = |ds: &[i64]| ds.iter().fold(int(0), |acc, &d| acc * int(3) + int(d));
    let p = prefix.len() as u32;
    let l = block.len() as u32;
    let tail = Rational::new(value(&block).to_integer(), pow3(l) - 1u32);
    (value(&prefix) + tail) * third_pow(p)
}

fn cantor_dust_in_sponge() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..1000 {
        let (x, y) = (random_cantor(&mut rng), random_cantor(&mut rng));
        let z = random_unit(&mut rng);
        ensure(in_sponge(&x, &y, &z).unwrap(), || format!("sample {i}: ({x}, {y}, {z})"))?;
    }
    Ok("1000 of 1000 points in M".into())
}

fn tame_embeddings() -> Outcome {
    let mut details = vec![];
    for (name, n, det) in [("trefoil", 5, 3), ("figure-eight", 6, 5)] {
        let g = catalog(name).map_err(|e| e.to_string())?;
        ensure(g.n == n, || format!("{name}: n = {}", g.n))?;
        let k = stage_for(n);
        ensure(k == 2 && (1usize << (k + 1)) >= n, || format!("{name}: stage {k}"))?;
        let (poly, rep) = embed_grid(&g, None).map_err(|e| e.to_string())?;
        let segs: Vec<AxisSegment> = poly
            .segments()
            .map(|(a, b)| AxisSegment::from_points(a, b).expect("axis-parallel"))
            .collect();
        ensure(segs.len() == 4 * n, || format!("{name}: {} segments", segs.len()))?;
        ensure(segs.iter().all(|s| segment_in_stage(s, 2, Space::Sponge)), || format!("{name}: leaves M_2"))?;
        ensure(rep.simple && is_simple(&poly).unwrap(), || format!("{name}: not simple"))?;
        let d = depth_det(&poly);
        ensure(d == BigInt::from(det), || format!("{name}: det {d}"))?;
        details.push(format!("{name} det {d}"));
    }
    Ok(details.join(", "))
}

fn squareflakes() -> Outcome {
    for m in 0..=8u32 {
        let s = squareflake(m);
        ensure(is_simple(&s.polyline).unwrap(), || format!("S_{m} not simple"))?;
        ensure(containment(&s.polyline, m as usize).iter().all(|&b| b), || format!("S_{m} leaves M_{m}"))?;
        ensure(s.polyline.len() == 4 + 4 * ((1 << m) - 1) && s.polyline.len() == vertex_count(m), || {
            format!("S_{m}: {} vertices", s.polyline.len())
        })?;
        if m >= 1 {
            let count = s.detours_at(m).count() as u64;
            ensure(count == 1 << (m - 1) && replaced_count(m) == count, || format!("S_{m}: {count} replaced"))?;
            let (before, after) = unchanged_segments(m);
            ensure(before == after, || format!("S_{m} differs from S_{} off the thirds", m - 1))?;
        }
    }
    Ok("m = 0..8".into())
}

fn checked(a: &Approximant) -> Result<(), String> {
    ensure(a.is_simple().unwrap(), || format!("K_{} not simple", a.m))?;
    ensure(a.containment().iter().all(|&b| b), || format!("K_{} leaves M_{}", a.m, a.stage))
}

fn wild_approximants() -> Outcome {
    let xs = |lo: (i64, i64), hi: (i64, i64), y: (i64, i64)| {
        AxisSegment::new(Axis::X, [rat(y.0, y.1), int(0)], rat(lo.0, lo.1), rat(hi.0, hi.1))
    };
    let ys = |x: (i64, i64), lo: (i64, i64), hi: (i64, i64)| {
        AxisSegment::new(Axis::Y, [rat(x.0, x.1), int(0)], rat(lo.0, lo.1), rat(hi.0, hi.1))
    };
    let first = vec![
        xs((7, 9), (8, 9), (1, 3)),
        ys((2, 3), (4, 9), (5, 9)),
        xs((7, 9), (8, 9), (2, 3)),
    ];
    let second = vec![
        xs((25, 27), (26, 27), (1, 9)),
        ys((8, 9), (4, 27), (5, 27)),
        xs((25, 27), (26, 27), (2, 9)),
        xs((25, 27), (26, 27), (7, 9)),
        ys((8, 9), (22, 27), (23, 27)),
        xs((25, 27), (26, 27), (8, 9)),
    ];
    let got1: Vec<AxisSegment> = sites(1).into_iter().map(|s| s.segment).collect();
    let got2: Vec<AxisSegment> = sites(2).into_iter().map(|s| s.segment).collect();
    ensure(got1 == first, || format!("stage-1 sites {got1:?}"))?;
    ensure(got2 == second, || format!("stage-2 sites {got2:?}"))?;

    let trefoil = Summand::named("trefoil").unwrap();
    let mut dets = vec![];
    for m in 1..=3u32 {
        let a = approximant(&KnotAssignment::uniform(m, &trefoil), m, BuildOptions::default())
            .map_err(|e| e.to_string())?;
        checked(&a)?;
        let counts = a.stage_counts();
        ensure(counts[m as usize] == 3 << (m - 1), || format!("K_{m} ledger {counts:?}"))?;
        if m <= 2 {
            let d = depth_det(&a.polyline);
            let want = BigInt::from(3).pow(if m == 1 { 3 } else { 9 });
            ensure(d == want, || format!("K_{m} det {d}"))?;
            dets.push(d.to_string());
        }
    }
    Ok(format!("9 sites exact, det K_1 = {}, K_2 = {}, ledger 3/6/12", dets[0], dets[1]))
}

fn wild_census() -> Outcome {
    let m = 6;
    let trefoil = Summand::named("trefoil").unwrap();
    let ys = [rat(1, 4), rat(3, 4)];
    let plan = wild_set_plan(&ys, &trefoil, m).map_err(|e| e.to_string())?;
    let a = approximant(&plan, m, BuildOptions::default()).map_err(|e| e.to_string())?;
    checked(&a)?;
    let mut counts = vec![];
    for y in &ys {
        let target = Point3::new(int(1), y.clone(), int(0));
        for j in 0..=5 {
            let c = neighborhood_census(&a, &target, &third_pow(j));
            ensure(c >= 1, || format!("y = {y}, radius 3^-{j}: census 0"))?;
            counts.push(c);
        }
    }
    // (1, 1/2, 0) sits in the removed middle third, away from both targets
    let control = Point3::new(int(1), rat(1, 2), int(0));
    let clearance = clearance_sq(&a, &control).expect("nontrivial summands");
    let j = (0..).find(|&j| third_pow(2 * j) < clearance).unwrap();
    let c = neighborhood_census(&a, &control, &third_pow(j));
    ensure(c == 0, || format!("control census {c} at radius 3^-{j}"))?;
    Ok(format!("target counts {counts:?}, control 0 at radius 3^-{j}"))
}

fn necklaces() -> Outcome {
    let (knot, _) = embed_grid(&catalog("trefoil").unwrap(), None).map_err(|e| e.to_string())?;
    for n in 3..=5usize {
        let t = make_necklace(&knot, n).map_err(|e| e.to_string())?;
        let levels = t.iterate(5).map_err(|e| e.to_string())?;
        let mut by_word: BTreeMap<&[usize], &Pearl> = BTreeMap::new();
        let mut kids: BTreeMap<&[usize], Vec<&Pearl>> = BTreeMap::new();
        for (g, level) in levels.iter().enumerate() {
            ensure(level.len() as u64 == pearl_count(n as u64, g as u32), || {
                format!("n={n} gen {g}: {} pearls", level.len())
            })?;
            for p in level {
                by_word.insert(&p.word, p);
                if let Some(parent) = p.parent_word() {
                    kids.entry(parent).or_default().push(p);
                }
            }
        }
        for (parent, ks) in &kids {
            let outer = by_word[parent];
            for (i, a) in ks.iter().enumerate() {
                ensure(strictly_inside(a, outer), || format!("n={n}: {:?} escapes its parent", a.word))?;
                for b in &ks[i + 1..] {
                    ensure(disjoint(a, b), || format!("n={n}: {:?} meets {:?}", a.word, b.word))?;
                }
            }
        }
    }

    let t = make_necklace(&knot, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tested = 0;
    while tested < 1000 {
        let mut c = || rat(rng.gen_range(-3000..3000), rng.gen_range(1..1000));
        let x = Point3::new(c(), c(), c());
        let ball = &t.pearls[rng.gen_range(0..3)];
        match invert_point(ball, &x) {
            Ok(y) => ensure(invert_point(ball, &y).unwrap() == x, || format!("I_j^2 moves {x:?}"))?,
            Err(Error::InversionPole) => continue,
            Err(e) => return Err(e.to_string()),
        }
        tested += 1;
    }

    let ledger = summand_ledger(3, 6);
    for q in 1..=6u32 {
        let sites_q = sites(q).len() as u64;
        ensure(ledger.increment(q as usize) == sites_q, || {
            format!("stage {q}: ledger {} vs {sites_q} sites", ledger.increment(q as usize))
        })?;
    }
    let totals = summand_ledger(3, 2).totals();
    ensure(totals == (7, 3), || format!("stage-2 totals {totals:?}"))?;
    Ok("n = 3..5 to generation 5, 1000 involutions, ledger = sites for q <= 6, 7K + 3K*".into())
}

fn invariant_consistency() -> Outcome {
    let mut details = vec![];
    for (name, want) in [("trefoil", 3), ("figure-eight", 5)] {
        let (poly, _) = embed_grid(&catalog(name).unwrap(), None).map_err(|e| e.to_string())?;
        let mut dets = vec![];
        for dir in generic_directions().take(40) {
            match project(&poly, &dir) {
                Ok(k) => dets.push(k.determinant().unwrap()),
                Err(Error::NonGeneric(_)) => {}
                Err(e) => return Err(e.to_string()),
            }
            if dets.len() == 3 {
                break;
            }
        }
        ensure(dets.len() == 3, || format!("{name}: {} generic directions", dets.len()))?;
        ensure(dets.iter().all(|d| *d == BigInt::from(want)), || format!("{name}: {dets:?}"))?;
        details.push(format!("{name} {want} x3"));
    }
    let t = standard::trefoil();
    let e = standard::figure_eight();
    let tt = t.connected_sum(&t).determinant().unwrap();
    let te = t.connected_sum(&e).determinant().unwrap();
    ensure(tt == BigInt::from(9) && te == BigInt::from(15), || format!("sums {tt}, {te}"))?;
    for (name, want) in [("unknot", 3), ("trefoil", 9), ("figure-eight", 3)] {
        let c = catalog(name).unwrap().to_planar().knot_diagram().unwrap().tricolorings();
        ensure(c == BigInt::from(want), || format!("{name}: {c} colorings"))?;
    }
    details.push("sums 9, 15; colorings 3/9/3".into());
    Ok(details.join(", "))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("predicate-oracle equivalence", predicates_match_oracle),
        ("Cantor dust lies in the sponge", cantor_dust_in_sponge),
        ("tame knots at stage 2", tame_embeddings),
        ("squareflake stages", squareflakes),
        ("wild-knot approximants", wild_approximants),
        ("neighborhood census", wild_census),
        ("necklace", necklaces),
        ("invariant self-consistency", invariant_consistency),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match outcome {
            Ok(d) => println!("PASS {}. {name}: {d} [{t:.2?}]", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL {}. {name}: {d} [{t:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
