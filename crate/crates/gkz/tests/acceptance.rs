//! End-to-end acceptance run: one pass/fail line per criterion.

mod common;

use common::*;
use gkz::charcycle::{self, CycleEngine, JumpCase, Multiplicities};
use gkz::gevrey;
use gkz::lattice::Lattice;
use gkz::polyhedra::{self, Polytope, Triangulation};
use gkz::semigroup::{self, Parameter, SemigroupView};
use gkz::umbrella::{compute_umbrella, WeightSpec};
use gkz::{BigInt, IntMatrix, Rational};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn b(x: i64) -> BigInt {
    BigInt::from(x)
}

fn point(v: &[i64]) -> Parameter {
    Parameter::integral(v)
}

fn f(n: usize) -> WeightSpec<Rational> {
    WeightSpec::f(n)
}

fn err(e: gkz::GkzError) -> String {
    e.to_string()
}

fn rank_reproduction() -> Outcome {
    let v = SemigroupView::new(fixtures::a2()).map_err(err)?;
    let special = charcycle::rank(&v, &point(&[1, 2])).map_err(err)?;
    let generic = charcycle::rank(&v, &Parameter::generic(2, 4)).map_err(err)?;
    // a stratum-generic point of a line through the exceptional point is also generic
    let line = charcycle::rank(&v, &Parameter::stratum(&[1, 2], &[0])).map_err(err)?;
    ensure!(special == b(5), "rank at (1,2) is {}", special);
    ensure!(generic == b(4), "generic rank is {}", generic);
    ensure!(line == b(4), "rank on the generic point of (1,2) + C a1 is {}", line);
    Ok("rank 5 at (1,2), 4 generically".into())
}

fn three_block_strata() -> [(Parameter, &'static str); 3] {
    [
        (Parameter::stratum(&[1, 0, 0], &[4, 5]), "beta + C G2"),
        (Parameter::stratum(&[1, 0, 0], &[2, 3]), "beta + C G1"),
        (point(&[1, 0, 0]), "beta"),
    ]
}

fn stratified_jumps_f() -> Outcome {
    let v = SemigroupView::new(fixtures::three_block()).map_err(err)?;
    let e = CycleEngine::new(&v, &f(7)).map_err(err)?;
    let mut got = Vec::new();
    for ((p, name), want) in three_block_strata().into_iter().zip([2, 3, 4]) {
        let j = e.jump(&[], &p).map_err(err)?.require().map_err(err)?;
        ensure!(j == b(want), "jump on {} is {}, expected {}", name, j, want);
        got.push(j.to_string());
    }
    let g = e.jump(&[], &Parameter::generic(3, 7)).map_err(err)?.require().map_err(err)?;
    ensure!(g.is_zero(), "generic jump {}", g);
    Ok(format!("jumps {} on G2-line, G1-line, beta", got.join(", ")))
}

fn stratified_jumps_l() -> Outcome {
    let v = SemigroupView::new(fixtures::three_block()).map_err(err)?;
    let e = CycleEngine::new(&v, &fixtures::three_block_weight()).map_err(err)?;
    for (p, name) in three_block_strata() {
        let j = e.jump(&[], &p).map_err(err)?.require().map_err(err)?;
        ensure!(j == b(1), "jump on {} is {}", name, j);
    }
    let found = charcycle::exceptional_strata(&e, &[], &[point(&[1, 0, 0])]).map_err(err)?;
    ensure!(found.len() == 3, "{} exceptional strata from the seed", found.len());
    ensure!(found.iter().all(|(_, j)| *j == b(1)), "{:?}", found);
    Ok("jump 1 on all three exceptional strata".into())
}

fn exceptional_singleton() -> Outcome {
    let v = SemigroupView::new(fixtures::skew()).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut weights = vec![f(7), fixtures::three_block_weight()];
    weights.extend((0..4).map(|_| random_weight(&mut rng, 7)));
    let target = point(&[0, 0, -1]);
    let strata = charcycle::candidate_strata(&v, std::slice::from_ref(&target)).map_err(err)?;
    // integral points nearby: away from the target every supported value must vanish
    let mut sweep = Vec::new();
    for x in -2..=2 {
        for y in -2..=2 {
            for z in -2..=1 {
                sweep.push(point(&[x, y, z]));
            }
        }
    }
    let mut unsupported = 0;
    let mut extra: Vec<Vec<i64>> = Vec::new();
    let g1 = Lattice::from_columns(v.matrix(), &[2, 5]);
    for l in &weights {
        let e = CycleEngine::new(&v, l).map_err(err)?;
        let found = charcycle::exceptional_strata(&e, &[], std::slice::from_ref(&target)).map_err(err)?;
        ensure!(found == vec![(target.clone(), b(1))], "weight {}: exceptional {:?}", l, found);
        for c in e.char_cycle(&target).map_err(err)? {
            let want = if c.tau.is_empty() { 1 } else { 0 };
            ensure!(c.jump == b(want), "weight {}: jump {} on {:?}", l, c.jump, c.tau);
        }
        for p in &sweep {
            let r = e.jump(&[], p).map_err(err)?;
            match r.jump {
                Some(j) if *p == target => ensure!(j == b(1), "jump {} at the target", j),
                Some(j) if j.is_zero() => {}
                Some(j) => {
                    // must be an isolated hole: off the translate of G1 and missed by enumeration
                    let Parameter::Explicit(x) = p else { unreachable!() };
                    let x: Vec<i64> = x.iter().map(|c| i64::try_from(c.to_integer()).unwrap()).collect();
                    let off: Vec<BigInt> = x.iter().zip([0, 0, -1]).map(|(u, w)| b(u - w)).collect();
                    ensure!(!g1.contains(&off), "weight {}: jump {} at {:?} on the G1 translate", l, j, x);
                    ensure!(!naive_member(v.matrix(), &big(&x), 8), "weight {}: jump {} at member {:?}", l, j, x);
                    ensure!(j == b(2), "weight {}: jump {} at the hole {:?}", l, j, x);
                    if !extra.contains(&x) {
                        extra.push(x);
                    }
                }
                None => unsupported += 1,
            }
        }
    }
    let shown: Vec<String> = extra.iter().map(|x| format!("({},{},{})", x[0], x[1], x[2])).collect();
    Ok(format!(
        "{{(0,0,-1)}} among {} seed strata, jump 1, for {} weights; sweep of {} points also finds isolated holes {} with jump 2, {} unsupported evaluations",
        strata.len(),
        weights.len(),
        sweep.len(),
        shown.join(" "),
        unsupported
    ))
}

fn slopes() -> Outcome {
    let a = fixtures::three_block();
    let want: [Vec<Rational>; 7] = [vec![], vec![q(3, 2)], vec![], vec![qi(3)], vec![], vec![qi(2)], vec![q(7, 6)]];
    let mut shown = Vec::new();
    for (j, w) in want.iter().enumerate() {
        let got = gevrey::slopes_along(&a, j).map_err(err)?.values();
        ensure!(&got == w, "column {}: {:?}", j + 1, got);
        for s in got {
            shown.push(format!("{} @ x{}", s, j + 1));
        }
    }
    Ok(shown.join(", "))
}

fn gevrey_dimensions() -> Outcome {
    let sum = SemigroupView::new(fixtures::sum_a1_a2()).map_err(err)?;
    let beta = Parameter::stratum(&[0, 1, 2], &[0, 1]);
    for s in [qi(2), q(5, 2), qi(4), qi(11)] {
        let r = gevrey::irregularity_at(&sum, 1, &s, &beta).map_err(err)?;
        ensure!(r.generic == b(4), "generic d_s at s = {} is {}", s, r.generic);
        ensure!(r.value == Some(b(5)), "d_s at beta, s = {}: {:?}", s, r.value);
    }

    let v = SemigroupView::new(fixtures::three_block()).map_err(err)?;
    let strata = [
        Parameter::generic(3, 7),
        Parameter::stratum(&[1, 0, 0], &[2, 3]),
        Parameter::stratum(&[1, 0, 0], &[4, 5]),
        point(&[1, 0, 0]),
    ];
    // expected excess over the generic value on each stratum, per column
    let cases: [(usize, Rational, [i64; 4]); 4] = [
        (1, q(3, 2), [0, 0, 0, 0]),
        (6, q(7, 6), [0, 0, 0, 0]),
        (3, qi(3), [0, 1, 0, 1]),
        (5, qi(2), [0, 0, 1, 1]),
    ];
    for (j, slope, excess) in &cases {
        for s in [slope.clone(), slope + q(1, 2), slope + qi(3)] {
            for (p, want) in strata.iter().zip(excess) {
                let r = gevrey::irregularity_at(&v, *j, &s, p).map_err(err)?;
                let val = r.value.ok_or_else(|| format!("unsupported at x{} s = {}", j + 1, s))?;
                ensure!(val.clone() - &r.generic == b(*want), "x{} s = {} {:?}: excess {}", j + 1, s, p, val - r.generic);
            }
        }
        let below = (qi(1) + slope) / qi(2);
        for p in &strata {
            let r = gevrey::irregularity_at(&v, *j, &below, p).map_err(err)?;
            ensure!(r.value == Some(b(0)), "x{} below the slope: {:?}", j + 1, r.value);
        }
    }
    Ok("A1+A2: 4 and 5 for s >= 2; three-block indicators along x2, x4, x6, x7".into())
}

fn random_weight_pair(rng: &mut ChaCha8Rng, n: usize) -> WeightSpec<Rational> {
    if rng.gen_bool(0.25) {
        f(n)
    } else {
        random_weight(rng, n)
    }
}

fn formula_cross_validation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut non_f = 0;
    let total = 120;
    for _ in 0..total {
        let (a, _) = random_instance(&mut rng, 3, 7);
        let mut l = random_weight_pair(&mut rng, a.cols());
        if rng.gen_bool(0.4) {
            // at a slope the umbrella has a facet off every hyperplane h.a = 1
            let j = rng.gen_range(0..a.cols());
            if let Some(sl) = gevrey::slopes_along(&a, j).map_err(err)?.slopes.first() {
                l = WeightSpec::l_of_s(a.cols(), j, sl.s.clone()).map_err(err)?;
            }
        }
        let m = Multiplicities::new(&a, &l).map_err(err)?;
        let lhs = m.generic_total(&[]).map_err(err)?;
        let rhs = m.union_volume_formula().map_err(err)?;
        ensure!(lhs == rhs, "{:?} weight {}: {} vs {}", a.to_rows(), l, lhs, rhs);
        if m.umbrella().facets().iter().any(|t| !gkz::umbrella::is_f_homogeneous(&a, t)) {
            non_f += 1;
        }
    }
    Ok(format!("{} instances agree ({} with a non-F-homogeneous facet)", total, non_f))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let total = 100;
    for _ in 0..total {
        let (a, _) = random_instance(&mut rng, 3, 7);
        let l = random_weight_pair(&mut rng, a.cols());
        let u = compute_umbrella(&a, &l).map_err(err)?;
        let mut got: Vec<(Vec<usize>, isize)> = u.faces().iter().map(|x| (x.indices.clone(), x.dim)).collect();
        got.sort();
        let want = umbrella_oracle(&a, l.ld());
        ensure!(got == want, "{:?} weight {}", a.to_rows(), l);
        let p = Polytope::from_columns(&a, &(0..a.cols()).collect::<Vec<_>>(), true);
        let z = Lattice::full(a.rows());
        let placing = polyhedra::normalized_volume_with(&p, &z, Triangulation::Placing).map_err(err)?;
        let pulling = polyhedra::normalized_volume_with(&p, &z, Triangulation::Pulling).map_err(err)?;
        ensure!(placing == pulling, "{:?}: {} vs {}", a.to_rows(), placing, pulling);
    }
    Ok(format!("{} instances: umbrella = oracle, placing = pulling", total))
}

fn corpus() -> Vec<(&'static str, IntMatrix, Vec<Parameter>)> {
    vec![
        ("a1", fixtures::a1(), vec![point(&[0]), point(&[-1]), point(&[3])]),
        ("a2", fixtures::a2(), vec![point(&[1, 2]), point(&[0, 0]), point(&[-1, 1])]),
        ("three_block", fixtures::three_block(), vec![point(&[1, 0, 0]), point(&[0, 0, 0])]),
        ("skew", fixtures::skew(), vec![point(&[0, 0, -1]), point(&[1, 1, 0])]),
        ("sum_a1_a2", fixtures::sum_a1_a2(), vec![point(&[0, 1, 2]), point(&[1, 1, 2])]),
    ]
}

fn order_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut checked = 0usize;
    for (name, a, seeds) in corpus() {
        let v = SemigroupView::new(a.clone()).map_err(err)?;
        let d = a.rows() as isize;
        let bound = charcycle::rank_upper_bound(&a).map_err(err)?;
        let mut strata = charcycle::candidate_strata(&v, &seeds).map_err(err)?;
        strata.push(Parameter::generic(a.rows(), a.cols()));
        let mut weights = vec![f(a.cols()), random_weight(&mut rng, a.cols())];
        if a.cols() == 7 {
            weights.push(fixtures::three_block_weight());
        }
        for l in &weights {
            let e = CycleEngine::new(&v, l).map_err(err)?;
            for p in &strata {
                let rd = semigroup::ranking_data(&v, p).map_err(err)?;
                for face in e.umbrella().faces() {
                    let r = e.jump_with(&face.indices, &rd).map_err(err)?;
                    if r.case == JumpCase::Unsupported {
                        continue;
                    }
                    let j = r.jump.clone().unwrap();
                    ensure!(j >= BigInt::zero(), "{} {:?} {:?}: jump {}", name, p, face.indices, j);
                    if face.dim + 1 >= d - 1 {
                        ensure!(j.is_zero(), "{} {:?} {:?}: jump {} on a large face", name, p, face.indices, j);
                    }
                    checked += 1;
                }
            }
        }
        for p in &strata {
            if let Ok(k) = charcycle::rank(&v, p) {
                ensure!(k <= bound, "{} {:?}: rank {} above {}", name, p, k, bound);
            }
            for j in 0..a.cols() {
                for sl in gevrey::slopes_along(&a, j).map_err(err)?.values() {
                    for s in [sl.clone(), sl + qi(1)] {
                        let r = gevrey::irregularity_at(&v, j, &s, p).map_err(err)?;
                        if let Some(x) = r.value {
                            ensure!(x >= r.generic, "{} x{} s = {} {:?}: {} < {}", name, j + 1, s, p, x, r.generic);
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{} evaluations, no violations", checked))
}

fn umbrella_determines_cycle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut pairs = 0;
    let mut evaluations = 0;
    let mut attempts = 0;
    while pairs < 30 && attempts < 2000 {
        attempts += 1;
        let (a, v) = random_instance(&mut rng, 3, 5);
        let n = a.cols();
        let l = random_weight_pair(&mut rng, n);
        let c = q(rng.gen_range(2..6), rng.gen_range(1..4));
        let scaled = WeightSpec::new(l.lx().iter().map(|x| x * &c).collect(), l.ld().iter().map(|x| x * &c).collect()).map_err(err)?;
        let mut partner = None;
        for _ in 0..20 {
            let other = random_weight_pair(&mut rng, n);
            if compute_umbrella(&a, &other).map_err(err)? == compute_umbrella(&a, &l).map_err(err)? && other != l {
                partner = Some(other);
                break;
            }
        }
        let other = partner.unwrap_or(scaled);
        let e1 = CycleEngine::new(&v, &l).map_err(err)?;
        let e2 = CycleEngine::new(&v, &other).map_err(err)?;
        ensure!(e1.umbrella() == e2.umbrella(), "umbrellas differ for {} and {}", l, other);
        let mut betas: Vec<Parameter> = (0..9)
            .map(|_| point(&(0..a.rows()).map(|_| rng.gen_range(-2..4)).collect::<Vec<_>>()))
            .collect();
        betas.push(Parameter::generic(a.rows(), n));
        for beta in &betas {
            match (e1.char_cycle(beta), e2.char_cycle(beta)) {
                (Ok(x), Ok(y)) => ensure!(x == y, "{:?} at {:?}", a.to_rows(), beta),
                (Err(x), Err(y)) => ensure!(x == y, "{:?} at {:?}: {} vs {}", a.to_rows(), beta, x, y),
                (x, y) => return Err(format!("{:?} at {:?}: {:?} vs {:?}", a.to_rows(), beta, x.err(), y.err())),
            }
            evaluations += 1;
        }
        pairs += 1;
    }
    ensure!(pairs == 30, "only {} pairs", pairs);
    Ok(format!("{} weight pairs, {} parameters, identical cycles", pairs, evaluations))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("rank reproduction", rank_reproduction),
        ("stratified jumps, F", stratified_jumps_f),
        ("stratified jumps, L", stratified_jumps_l),
        ("exceptional singleton", exceptional_singleton),
        ("slopes", slopes),
        ("gevrey dimensions", gevrey_dimensions),
        ("formula cross-validation", formula_cross_validation),
        ("oracle equivalence", oracle_equivalence),
        ("order-theoretic invariants", order_invariants),
        ("umbrella determines cycle", umbrella_determines_cycle),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {:<28} {} ({:.1}s)", k + 1, name, detail, secs),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {:<28} {} ({:.1}s)", k + 1, name, detail, secs);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
