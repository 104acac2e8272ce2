mod common;

use common::random_tuple;
use gitstab::opssearch::{candidate_lambdas, linear_pieces, torus_candidates, torus_verdict, TorusKind};
use gitstab::weights::Mode;
use gitstab::TuplePoint;
use num_integer::Roots;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Primitive rays of the refined cone are kernels of integer matrices whose
/// rows are a row of ones and tie or facet normals with entries at most `kd`,
/// so Hadamard's inequality bounds their entries.
fn hadamard_bound(n: usize, kd: i64) -> i64 {
    let n = n as i64;
    let sq = n * (n * kd * kd).pow(n as u32 - 1);
    sq.sqrt().max(n)
}

/// Visits every nonincreasing zero-sum vector with entries in `[-bound, bound]`
/// and `a_0 > 0`, stopping when `visit` returns false.
fn for_each_lambda(len: usize, bound: i64, visit: &mut dyn FnMut(&[i64]) -> bool) {
    fn go(len: usize, bound: i64, upper: i64, prefix: &mut Vec<i64>, visit: &mut dyn FnMut(&[i64]) -> bool) -> bool {
        let sum: i64 = prefix.iter().sum();
        if prefix.len() == len - 1 {
            let last = -sum;
            if last > upper || last < -bound {
                return true;
            }
            prefix.push(last);
            let go_on = visit(prefix);
            prefix.pop();
            return go_on;
        }
        let remaining = (len - prefix.len()) as i64;
        for a in (-bound..=upper).rev() {
            // the rest is at most a each, so the sum cannot return to zero
            if sum + a * remaining < 0 {
                break;
            }
            prefix.push(a);
            let go_on = go(len, bound, a, prefix, visit);
            prefix.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    for a0 in 1..=bound {
        if !go(len, bound, a0, &mut vec![a0], visit) {
            return;
        }
    }
}

/// Sign test on `min <σ_S, a>`, the Hilbert–Mumford form of the criterion,
/// over every bounded integer weight vector.
fn brute_kind(t: &TuplePoint, mode: Mode) -> TorusKind {
    let pieces = linear_pieces(t, mode).unwrap();
    let bound = hadamard_bound(t.ambient(), t.k() as i64 * t.degree() as i64);
    let mut kind = TorusKind::Stable;
    for_each_lambda(t.ambient() + 1, bound, &mut |a| {
        let min = pieces.iter().map(|s| s.iter().zip(a).map(|(x, y)| x * y).sum::<i64>()).min().unwrap();
        if min > 0 {
            kind = TorusKind::Unstable;
            return false;
        }
        if min == 0 {
            kind = TorusKind::StrictlySemistable;
        }
        true
    });
    kind
}

#[test]
fn candidate_rays_agree_with_bounded_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut disagreements = Vec::new();
    for i in 0..60 {
        let n = if i % 2 == 0 { 2 } else { 3 };
        let d = rng.gen_range(2..=3);
        let k = rng.gen_range(1..=2);
        let t = random_tuple(&mut rng, n, d, k, 5);
        for mode in [Mode::Exact, Mode::Combinatorial] {
            let fast = torus_verdict(&t, None, mode).unwrap().kind;
            let slow = brute_kind(&t, mode);
            if fast != slow {
                let rays = torus_candidates(&t, None, mode).unwrap();
                disagreements.push(format!(
                    "{t:?} {mode}: rays {fast:?} brute {slow:?} {:?}",
                    rays.lambdas().collect::<Vec<_>>()
                ));
            }
        }
    }
    assert!(disagreements.is_empty(), "{disagreements:#?}");
}

#[test]
fn both_refinements_give_the_same_verdict() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let k = rng.gen_range(1..=2);
        let t = random_tuple(&mut rng, 2, 3, k, 5);
        let all = candidate_lambdas(&t, None).unwrap();
        for mode in [Mode::Exact, Mode::Combinatorial] {
            let ev = gitstab::opssearch::TorusEvaluator::new(&t, None, mode).unwrap();
            assert_eq!(ev.torus_verdict(&all).unwrap().kind, torus_verdict(&t, None, mode).unwrap().kind);
        }
    }
}
