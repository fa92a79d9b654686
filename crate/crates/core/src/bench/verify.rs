//! The invariant suites behind `run_verify`. Every check compares a library
//! value against an independent count or a proven inequality.

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::report::CheckRecord;
use super::random_subset;
use crate::apps::{collinear_triples, is_nonaveraging, mixed_energy_sum, q_lambda, CollinearMode};
use crate::avoidance::{avoids, construct_parity_set, count_solutions, max_avoiding, SearchOptions};
use crate::energetics::{additive_energy, moment_t_k, multiplicative_energy, restricted_sigma, sigma_k};
use crate::families::{
    greedy_t_witness, t_invariant, t_star_invariant, verify_witness, AffineEquation, EquationFamily,
    Plane, TStarMode,
};
use crate::fpcore::{PrimeField, ResidueSet};
use crate::harmonic::{convolve_add, dft, IntegerProfile};
use crate::spectral::{les_inequality_check, spectrum, spectrum_size_bound_check, SpectrumParams};

pub(crate) const SUITES: [&str; 7] =
    ["fpcore", "harmonic", "energetics", "spectral", "families", "avoidance", "apps"];

pub(crate) fn run_suite(suite: &str, field: PrimeField, rng: &mut ChaCha8Rng, instances: usize) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let mut ctx = Ctx { suite, p: field.p(), out: &mut out };
    match suite {
        "fpcore" => fpcore_suite(&mut ctx, field, rng, instances),
        "harmonic" => harmonic_suite(&mut ctx, field, rng, instances),
        "energetics" => energetics_suite(&mut ctx, field, rng, instances),
        "spectral" => spectral_suite(&mut ctx, field, rng, instances),
        "families" => families_suite(&mut ctx, field, rng, instances),
        "avoidance" => avoidance_suite(&mut ctx, field, rng, instances),
        "apps" => apps_suite(&mut ctx, field, rng, instances),
        other => unreachable!("unknown suite {other}"),
    }
    out
}

struct Ctx<'a> {
    suite: &'a str,
    p: u64,
    out: &'a mut Vec<CheckRecord>,
}

impl Ctx<'_> {
    fn eq<T: PartialEq + std::fmt::Display>(&mut self, name: &str, lhs: T, rhs: T) {
        let ok = lhs == rhs;
        self.out.push(CheckRecord::new(self.suite, name, self.p, lhs, "==", rhs, ok));
    }

    fn ge<T: PartialOrd + std::fmt::Display>(&mut self, name: &str, lhs: T, rhs: T) {
        let ok = lhs >= rhs;
        self.out.push(CheckRecord::new(self.suite, name, self.p, lhs, ">=", rhs, ok));
    }

    fn le<T: PartialOrd + std::fmt::Display>(&mut self, name: &str, lhs: T, rhs: T) {
        let ok = lhs <= rhs;
        self.out.push(CheckRecord::new(self.suite, name, self.p, lhs, "<=", rhs, ok));
    }

    fn close(&mut self, name: &str, lhs: f64, rhs: f64, rel: f64) {
        let ok = (lhs - rhs).abs() <= rel * rhs.abs().max(1.0);
        self.out.push(CheckRecord::new(self.suite, name, self.p, lhs, "~=", rhs, ok));
    }

    fn holds(&mut self, name: &str, ok: bool) {
        self.out.push(CheckRecord::new(self.suite, name, self.p, ok, "==", true, ok));
    }
}

fn small_set(field: PrimeField, rng: &mut ChaCha8Rng, max: usize) -> ResidueSet {
    let size = rng.random_range(1..=max.min(field.size()));
    random_subset(field, size, rng)
}

fn fpcore_suite(ctx: &mut Ctx, field: PrimeField, rng: &mut ChaCha8Rng, instances: usize) {
    for _ in 0..instances {
        let x = rng.random_range(1..field.p());
        let inv = field.mod_inverse(x).expect("nonzero");
        ctx.eq("inverse", field.mul(x, inv), 1);
    }
    let divisors: Vec<u64> = (1..field.p()).filter(|d| (field.p() - 1).is_multiple_of(*d)).collect();
    let d = divisors[rng.random_range(0..divisors.len())];
    let g = field.multiplicative_subgroup(d).expect("divisor");
    ctx.eq("subgroup size", g.len() as u64, d);
    ctx.holds("subgroup closure", g.iter().all(|a| g.iter().all(|b| g.contains(field.mul(a, b)))));
    ctx.eq("subgroup symmetric iff even order", g.is_symmetric(), d.is_multiple_of(2));
}

fn brute_sum_counts(a: &ResidueSet, b: &ResidueSet) -> Vec<u64> {
    let f = a.field();
    let mut counts = vec![0u64; f.size()];
    for x in a.iter() {
        for y in b.iter() {
            counts[f.add(x, y) as usize] += 1;
        }
    }
    counts
}

fn harmonic_suite(ctx: &mut Ctx, field: PrimeField, rng: &mut ChaCha8Rng, instances: usize) {
    let p = field.p() as f64;
    for _ in 0..instances {
        let a = small_set(field, rng, 40);
        let b = small_set(field, rng, 40);
        let t = dft(&a);
        let parseval: f64 = t.squared_magnitudes().iter().sum();
        ctx.close("parseval", parseval, p * a.len() as f64, 1e-9);
        let fourth: f64 = t.squared_magnitudes().iter().map(|s| s * s).sum::<f64>() / p;
        let energy = additive_energy(&a, &a).expect("same field").value as f64;
        ctx.close("energy as fourth moment", fourth, energy, 1e-8);
        let conv = convolve_add(&IntegerProfile::indicator(&a), &IntegerProfile::indicator(&b)).expect("same field");
        ctx.eq("convolution total", conv.total(), (a.len() * b.len()) as u128);
        ctx.holds("convolution pointwise", conv.values() == brute_sum_counts(&a, &b).as_slice());
    }
}

fn energetics_suite(ctx: &mut Ctx, field: PrimeField, rng: &mut ChaCha8Rng, instances: usize) {
    for _ in 0..instances {
        let a = small_set(field, rng, 10);
        let b = small_set(field, rng, 10);
        let sums = brute_sum_counts(&a, &b);
        let brute_add: u128 = sums.iter().map(|&c| (c as u128).pow(2)).sum();
        ctx.eq("additive energy", additive_energy(&a, &b).expect("same field").value, brute_add);

        let mut prods = vec![0u64; field.size()];
        for x in a.iter() {
            for y in b.iter() {
                prods[field.mul(x, y) as usize] += 1;
            }
        }
        let brute_mult: u128 = prods.iter().map(|&c| (c as u128).pow(2)).sum();
        ctx.eq("multiplicative energy", multiplicative_energy(&a, &b).expect("same field").value, brute_mult);

        let mut triple = vec![0u64; field.size()];
        for x in a.iter() {
            for y in a.iter() {
                for z in a.iter() {
                    triple[field.add(field.add(x, y), z) as usize] += 1;
                }
            }
        }
        let t3: u128 = triple.iter().map(|&c| (c as u128).pow(2)).sum();
        ctx.eq("T_3", moment_t_k(&a, 3).expect("k >= 1"), t3);
        ctx.eq("sigma_3", sigma_k(&a, 3).expect("k >= 1"), triple[0]);

        let pset = small_set(field, rng, 10);
        let mut brute_sigma = 0u128;
        for x in a.iter() {
            for y in a.iter() {
                brute_sigma += u128::from(pset.contains(field.sub(x, y)));
            }
        }
        ctx.eq("sigma_P", restricted_sigma(&a, &pset).expect("same field"), brute_sigma);
    }
}

fn spectral_suite(ctx: &mut Ctx, field: PrimeField, rng: &mut ChaCha8Rng, instances: usize) {
    for _ in 0..instances {
        let a = small_set(field, rng, 30);
        let eps = rng.random_range(0.05..=1.0);
        let params = SpectrumParams::new(a, eps).expect("valid epsilon");
        let size = spectrum_size_bound_check(&params);
        ctx.le("spectrum size bound", size.size as f64, size.bound / (1.0 - 1e-9f64).powi(2));
        let spec = spectrum(&params);
        ctx.holds("spectrum symmetric with zero", spec.contains(0) && spec.is_symmetric());
        let take = rng.random_range(1..=spec.len().min(8));
        let b = ResidueSet::new(field, spec.elements().choose_multiple(rng, take).copied());
        for k in [2, 3] {
            let r = les_inequality_check(&params, &b, k).expect("subset of spectrum");
            ctx.holds(&format!("large-exponent sum inequality k={k}"), r.ok);
        }
    }
}

fn random_family(field: PrimeField, rng: &mut ChaCha8Rng, max: usize) -> EquationFamily {
    let target = rng.random_range(1..=max);
    // a narrow coordinate range forces shared rows and columns
    let spread = rng.random_range(2..=field.p() - 1);
    let mut eqs = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for _ in 0..target * 8 {
        if eqs.len() == target {
            break;
        }
        let a = rng.random_range(1..=spread);
        let b = rng.random_range(1..=spread);
        if seen.insert((a, b)) {
            eqs.push(AffineEquation::new(field, a, b, 1, 0).expect("nonzero"));
        }
    }
    EquationFamily::new(field, eqs).expect("distinct points")
}

fn families_suite(ctx: &mut Ctx, field: PrimeField, rng: &mut ChaCha8Rng, instances: usize) {
    for _ in 0..instances {
        let fam = random_family(field, rng, 16);
        let s = fam.len();
        let root = (s as f64).sqrt().ceil() as usize;
        let t = t_invariant(&fam).expect("nonempty");
        ctx.ge("T >= sqrt|E|", t.value, root);
        ctx.holds("T witness", verify_witness(&fam, &t.witness));
        let g = greedy_t_witness(&fam).expect("nonempty");
        ctx.ge("greedy T witness >= sqrt|E|", g.len(), root);
        ctx.holds("greedy T witness valid", verify_witness(&fam, &g));
        let ts = t_star_invariant(&fam, TStarMode::Exact).expect("small family");
        ctx.holds("T* witness", verify_witness(&fam, &ts.witness));
        ctx.le("T <= T*", t.value, ts.value);
        let ratios = Plane::ALL.iter().map(|&pl| fam.ratio_count(pl)).max().unwrap_or(0);
        ctx.ge("T* >= ratio count", ts.value, ratios);
        ctx.ge("T* >= 2 sqrt|E| - 1", ts.value as f64, 2.0 * (s as f64).sqrt() - 1.0);
    }
}

fn avoidance_suite(ctx: &mut Ctx, field: PrimeField, rng: &mut ChaCha8Rng, instances: usize) {
    let p = field.p();
    for _ in 0..instances {
        let sets: Vec<ResidueSet> = (0..3).map(|_| small_set(field, rng, 10)).collect();
        let coeffs: Vec<u64> = (0..3).map(|_| rng.random_range(1..p)).collect();
        let d = rng.random_range(0..p);
        let eq = AffineEquation::new(field, coeffs[0], coeffs[1], coeffs[2], d).expect("nonzero");
        let mut brute = 0u64;
        for x in sets[0].iter() {
            for y in sets[1].iter() {
                for z in sets[2].iter() {
                    brute += u64::from(eq.lhs(field, x, y, z) == d);
                }
            }
        }
        let got = count_solutions(&eq, &sets[0], &sets[1], &sets[2]).expect("same field");
        ctx.eq("solution count", got.count, brute);
    }
    for q in [4u64, 8, 16, 32] {
        if q * q >= p {
            continue;
        }
        let c = construct_parity_set(field, q).expect("valid q");
        ctx.holds(&format!("parity q={q} avoids"), avoids(&c.set, &c.family).expect("same field"));
        let formula = (p.div_ceil(q) - 1).div_ceil(2);
        ctx.eq(&format!("parity q={q} size formula"), c.set.len() as u64, formula);
        ctx.ge(&format!("parity q={q} size lower bound"), c.set.len() as f64, p as f64 / (2 * q) as f64 - 1.0);
        ctx.eq(&format!("parity q={q} family size"), c.family.len() as u64, (q / 4) * (q / 4));
    }
    if p <= 13 {
        let eq = AffineEquation::from_signed(field, 1, 1, -1, 0).expect("nonzero");
        let fam = EquationFamily::new(field, vec![eq]).expect("one equation");
        let out = max_avoiding(&fam, &SearchOptions::exhaustive()).expect("small p");
        let naive = (0u64..1 << p)
            .filter_map(|m| {
                let s = ResidueSet::new(field, (0..p).filter(|i| m >> i & 1 == 1));
                avoids(&s, &fam).expect("same field").then_some(s.len())
            })
            .max()
            .unwrap_or(0);
        ctx.eq("exhaustive sum-free maximum", out.size, naive);
    }
}

fn has_three_ap(a: &ResidueSet) -> bool {
    let f = a.field();
    a.iter().any(|x| a.iter().any(|z| z != x && a.contains(f.sub(f.add(z, z), x))))
}

fn apps_suite(ctx: &mut Ctx, field: PrimeField, rng: &mut ChaCha8Rng, instances: usize) {
    for _ in 0..instances {
        let a = small_set(field, rng, 12);
        let n = a.len() as u64;
        if n >= 2 {
            let q = q_lambda(&a).expect("|A| >= 2");
            ctx.eq("sum of q", q.iter().sum::<u64>(), n * n * (n - 1));
            ctx.eq("q(0)", q[0], n * (n - 1));
            ctx.eq("q(1)", q[1], n * (n - 1));
        }
        let small = small_set(field, rng, 5);
        let brute = collinear_triples(&small, CollinearMode::Brute).expect("small set").total;
        let fast = collinear_triples(&small, CollinearMode::Fast).expect("any set").total;
        ctx.eq("collinear brute = fast", brute, fast);
        ctx.eq("non-averaging order 1 vs 3-AP scan", is_nonaveraging(&a, 1).expect("p > 2"), !has_three_ap(&a));
        let x = ResidueSet::singleton(field, 1);
        let mixed = mixed_energy_sum(&a, &x).expect("nonzero X");
        ctx.eq("mixed energy X={1}", mixed.sum, additive_energy(&a, &a).expect("same field").value);
    }
}
