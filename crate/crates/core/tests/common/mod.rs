#![allow(dead_code)]

use gitstab::forms::{HypersurfaceForm, TuplePoint};
use gitstab::lattice::{make_normalized_ops, ExponentVector, NormalizedOps};
use gitstab::Rational;
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn frac(a: i64, b: i64) -> Rational {
    Rational::new(a.into(), b.into())
}

/// Every exponent vector of length `n + 1` and total degree `d`, lexicographic.
pub fn all_monomials(n: usize, d: u32) -> Vec<ExponentVector> {
    fn go(len: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<ExponentVector>) {
        if prefix.len() == len - 1 {
            prefix.push(d);
            out.push(ExponentVector::new(prefix.clone()).unwrap());
            prefix.pop();
            return;
        }
        for e in 0..=d {
            prefix.push(e);
            go(len, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n + 1, d, &mut Vec::new(), &mut out);
    out
}

pub fn random_form<R: Rng>(rng: &mut R, n: usize, d: u32, max_terms: usize) -> HypersurfaceForm {
    let monos = all_monomials(n, d);
    loop {
        let count = rng.gen_range(1..=max_terms.min(monos.len()));
        let chosen: Vec<&ExponentVector> = monos.choose_multiple(rng, count).collect();
        let terms = chosen.into_iter().map(|e| {
            let c = loop {
                let c = rng.gen_range(-3i64..=3);
                if c != 0 {
                    break c;
                }
            };
            (e.clone(), q(c))
        });
        if let Ok(f) = HypersurfaceForm::new(n, d, terms) {
            return f;
        }
    }
}

/// A tuple whose generators draw from a shared pool of monomials, so that
/// supports overlap and Plücker minors can vanish.
pub fn random_tuple<R: Rng>(rng: &mut R, n: usize, d: u32, k: usize, max_support: usize) -> TuplePoint {
    let monos = all_monomials(n, d);
    assert!(k <= monos.len(), "no {k} independent forms of degree {d} in {} variables", n + 1);
    loop {
        let pool_size = rng.gen_range(k..=(max_support + 1).min(monos.len()).max(k));
        let pool: Vec<ExponentVector> = monos.choose_multiple(rng, pool_size).cloned().collect();
        let gens: Vec<HypersurfaceForm> = (0..k)
            .filter_map(|_| {
                let count = rng.gen_range(1..=max_support.min(pool.len()));
                let terms = pool.choose_multiple(rng, count).map(|e| (e.clone(), q(rng.gen_range(-2i64..=2))));
                HypersurfaceForm::new(n, d, terms).ok()
            })
            .collect();
        if gens.len() != k {
            continue;
        }
        if let Ok(t) = TuplePoint::new(gens) {
            return t;
        }
    }
}

pub fn random_lambda<R: Rng>(rng: &mut R, n: usize, bound: i64) -> NormalizedOps {
    loop {
        let mut raw: Vec<i64> = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
        raw.push(-raw.iter().sum::<i64>());
        if let Ok((l, _)) = make_normalized_ops(&raw) {
            return l;
        }
    }
}

/// Every primitive normalized weight vector with entries in `[-bound, bound]`.
pub fn all_lambdas(n: usize, bound: i64) -> Vec<NormalizedOps> {
    fn go(len: usize, bound: i64, upper: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == len - 1 {
            let last = -prefix.iter().sum::<i64>();
            if last <= upper && last >= -bound {
                prefix.push(last);
                out.push(prefix.clone());
                prefix.pop();
            }
            return;
        }
        for a in (-bound..=upper).rev() {
            prefix.push(a);
            go(len, bound, a, prefix, out);
            prefix.pop();
        }
    }
    let mut raw = Vec::new();
    go(n + 1, bound, bound, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .filter(|w| w.iter().fold(0i64, |g, &a| g.gcd(&a)) == 1)
        .map(|w| NormalizedOps::new(w).unwrap())
        .collect()
}
