//! Brute-force oracles shared by the integration and acceptance tests. Each
//! one counts straight from the definition, with no transforms or pruning.
#![allow(dead_code)]

use fpwork::families::{AffineEquation, EquationFamily, Plane};
use fpwork::{PrimeField, ResidueSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn field(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

pub fn random_set(f: PrimeField, size: usize, rng: &mut ChaCha8Rng) -> ResidueSet {
    fpwork::bench::random_subset(f, size, rng)
}

/// Strategy: a prime from `primes` and a subset of its field.
pub fn set_in(primes: &'static [u64]) -> impl proptest::strategy::Strategy<Value = ResidueSet> {
    use proptest::prelude::*;
    proptest::sample::select(primes).prop_flat_map(|p| {
        proptest::collection::vec(any::<bool>(), p as usize)
            .prop_map(move |mask| ResidueSet::from_indicator(field(p), &mask))
    })
}

/// Strategy: two subsets of one field.
pub fn set_pair_in(primes: &'static [u64]) -> impl proptest::strategy::Strategy<Value = (ResidueSet, ResidueSet)> {
    use proptest::prelude::*;
    proptest::sample::select(primes).prop_flat_map(|p| {
        let n = p as usize;
        (proptest::collection::vec(any::<bool>(), n), proptest::collection::vec(any::<bool>(), n)).prop_map(
            move |(x, y)| (ResidueSet::from_indicator(field(p), &x), ResidueSet::from_indicator(field(p), &y)),
        )
    })
}

pub fn random_set_upto(f: PrimeField, max: usize, rng: &mut ChaCha8Rng) -> ResidueSet {
    let size = rng.random_range(1..=max.min(f.size()));
    random_set(f, size, rng)
}

pub fn subsets(f: PrimeField) -> impl Iterator<Item = ResidueSet> {
    let p = f.p();
    (0u64..1 << p).map(move |m| ResidueSet::new(f, (0..p).filter(|i| m >> i & 1 == 1)))
}

pub fn additive_energy(a: &ResidueSet, b: &ResidueSet) -> u128 {
    let f = a.field();
    let mut n = 0;
    for a1 in a.iter() {
        for b1 in b.iter() {
            for a2 in a.iter() {
                for b2 in b.iter() {
                    n += u128::from(f.add(a1, b1) == f.add(a2, b2));
                }
            }
        }
    }
    n
}

pub fn multiplicative_energy(a: &ResidueSet, b: &ResidueSet) -> u128 {
    let f = a.field();
    let mut n = 0;
    for a1 in a.iter() {
        for b1 in b.iter() {
            for a2 in a.iter() {
                for b2 in b.iter() {
                    n += u128::from(f.mul(a1, b1) == f.mul(a2, b2));
                }
            }
        }
    }
    n
}

/// Histogram of `a_1 + ... + a_k` over all `k`-tuples.
pub fn k_sums(a: &ResidueSet, k: usize) -> Vec<u64> {
    let f = a.field();
    let mut hist = vec![0u64; f.size()];
    let elems = a.elements();
    let n = elems.len();
    let mut idx = vec![0usize; k];
    if n == 0 {
        return hist;
    }
    loop {
        let s = idx.iter().fold(0, |acc, &i| f.add(acc, elems[i]));
        hist[s as usize] += 1;
        let mut pos = 0;
        loop {
            if pos == k {
                return hist;
            }
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

pub fn t_k(a: &ResidueSet, k: usize) -> u128 {
    k_sums(a, k).iter().map(|&c| (c as u128).pow(2)).sum()
}

pub fn sigma_k(a: &ResidueSet, k: usize) -> u64 {
    k_sums(a, k)[0]
}

/// Pairs `(a1, a2)` with `a2 - a1 ∈ P`.
pub fn sigma_p(a: &ResidueSet, p_set: &ResidueSet) -> u128 {
    let f = a.field();
    let mut n = 0;
    for a1 in a.iter() {
        for a2 in a.iter() {
            n += u128::from(p_set.contains(f.sub(a2, a1)));
        }
    }
    n
}

/// `Σ_{x ∈ P} |{(a, b) : b - a = x}|^2`.
pub fn energy_p(a: &ResidueSet, b: &ResidueSet, p_set: &ResidueSet) -> u128 {
    let f = a.field();
    p_set
        .iter()
        .map(|x| {
            let r = a.iter().filter(|&y| b.contains(f.add(y, x))).count() as u128;
            r * r
        })
        .sum()
}

pub fn solutions(eq: &AffineEquation, f: PrimeField, a1: &ResidueSet, a2: &ResidueSet, a3: &ResidueSet) -> u64 {
    let mut n = 0;
    for x in a1.iter() {
        for y in a2.iter() {
            for z in a3.iter() {
                n += u64::from(eq.lhs(f, x, y, z) == eq.d);
            }
        }
    }
    n
}

pub fn avoids(a: &ResidueSet, family: &EquationFamily) -> bool {
    family.equations().iter().all(|eq| solutions(eq, family.field(), a, a, a) == 0)
}

pub fn has_three_ap(a: &ResidueSet) -> bool {
    let f = a.field();
    let inv2 = f.mod_inverse(2).unwrap();
    a.iter().any(|x| a.iter().any(|y| x != y && a.contains(f.mul(f.add(x, y), inv2))))
}

/// Some `m x + n y = (m + n) z`, `1 <= m, n <= t`, with `x, y, z` not all equal.
pub fn has_nontrivial_average(a: &ResidueSet, t: u64) -> bool {
    let f = a.field();
    for m in 1..=t {
        for n in 1..=t {
            for x in a.iter() {
                for y in a.iter() {
                    for z in a.iter() {
                        let lhs = f.add(f.mul(m, x), f.mul(n, y));
                        if lhs == f.mul(m + n, z) && !(x == y && y == z) {
                            return true;
                        }
                    }
                }
            }
        }
    }
    false
}

/// Ordered triples of points of `A x A` on a common line.
pub fn collinear(a: &ResidueSet) -> u128 {
    let f = a.field();
    let pts: Vec<(u64, u64)> = a.iter().flat_map(|x| a.iter().map(move |y| (x, y))).collect();
    let mut n = 0;
    for &p1 in &pts {
        for &p2 in &pts {
            for &p3 in &pts {
                let d = f.sub(
                    f.mul(f.sub(p2.0, p1.0), f.sub(p3.1, p1.1)),
                    f.mul(f.sub(p3.0, p1.0), f.sub(p2.1, p1.1)),
                );
                n += u128::from(d == 0);
            }
        }
    }
    n
}

fn chart_points(family: &EquationFamily, plane: Plane, mask: u64) -> Vec<(u64, u64)> {
    family
        .coordinates(plane)
        .into_iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, c)| c)
        .collect()
}

fn distinct(values: impl Iterator<Item = u64>) -> bool {
    let mut v: Vec<u64> = values.collect();
    let n = v.len();
    v.sort_unstable();
    v.dedup();
    v.len() == n
}

/// `T` by enumerating every subset in every chart.
pub fn t_naive(family: &EquationFamily) -> usize {
    let n = family.len();
    let mut best = 0;
    for plane in Plane::ALL {
        for mask in 0u64..1 << n {
            let pts = chart_points(family, plane, mask);
            if distinct(pts.iter().map(|p| p.0)) && distinct(pts.iter().map(|p| p.1)) {
                best = best.max(pts.len());
            }
        }
    }
    best
}

/// `T*` by enumerating every subset in every chart.
pub fn t_star_naive(family: &EquationFamily) -> usize {
    let f = family.field();
    let n = family.len();
    let mut best = 0;
    for plane in Plane::ALL {
        for mask in 0u64..1 << n {
            let pts = chart_points(family, plane, mask);
            let ratio = |(x, y): (u64, u64)| f.mul(x, f.mod_inverse(y).unwrap());
            let ok = pts.iter().enumerate().all(|(j, &pj)| {
                let others: Vec<(u64, u64)> =
                    pts.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &q)| q).collect();
                others.iter().all(|q| q.0 != pj.0)
                    || others.iter().all(|q| q.1 != pj.1)
                    || others.iter().all(|&q| ratio(q) != ratio(pj))
            });
            if ok {
                best = best.max(pts.len());
            }
        }
    }
    best
}

/// A family of `size` distinct points `(a, b, 1)` with coordinates drawn from
/// `1..=spread`; small spreads force shared rows and columns.
pub fn random_family(f: PrimeField, size: usize, spread: u64, rng: &mut ChaCha8Rng) -> EquationFamily {
    let spread = spread.clamp(1, f.p() - 1);
    let size = size.min((spread * spread) as usize);
    let mut seen = std::collections::HashSet::new();
    let mut eqs = Vec::new();
    while eqs.len() < size {
        let (a, b) = (rng.random_range(1..=spread), rng.random_range(1..=spread));
        if seen.insert((a, b)) {
            // random scaling exercises canonicalization
            let s = rng.random_range(1..f.p());
            eqs.push(AffineEquation::new(f, f.mul(s, a), f.mul(s, b), s, 0).unwrap());
        }
    }
    EquationFamily::new(f, eqs).unwrap()
}
