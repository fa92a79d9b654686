//! Collinear triples in grids `A x A`, ratio sets, non-averaging sets and
//! sums of mixed energies.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::avoidance::search::{self, Constraint, SearchOptions, SearchOutcome, Symmetry};
use crate::avoidance::count_solutions;
use crate::energetics::additive_energy;
use crate::error::{Error, Result};
use crate::families::AffineEquation;
use crate::fpcore::{Fraction, PrimeField, ResidueSet};
use crate::harmonic::{convolve_add, IntegerProfile};

/// Largest `|A|` accepted by the `|A|^6` enumeration.
pub const BRUTE_COLLINEAR_LIMIT: usize = 8;

/// `q(λ) = |{(a1, a2, a) in A^3 : a2 != a, a1 - a = λ (a2 - a)}|`, indexed by λ.
pub fn q_lambda(a: &ResidueSet) -> Result<Vec<u64>> {
    if a.len() < 2 {
        return Err(Error::TooSmall(a.len()));
    }
    let f = a.field();
    let inv = f.inverse_table();
    let mut q = vec![0u64; f.size()];
    for base in a.iter() {
        for a2 in a.iter().filter(|&v| v != base) {
            let s = inv[f.sub(a2, base) as usize];
            for a1 in a.iter() {
                q[f.mul(f.sub(a1, base), s) as usize] += 1;
            }
        }
    }
    Ok(q)
}

/// `q(λ)` through convolutions: `Σ_a r_λ((1 - λ) a) - |A|`, where `r_λ(w)`
/// counts `a1 - λ a2 = w` over all of `A^2`. The `|A|` removes the excluded
/// `a2 = a` terms, each of which forces `a1 = a`.
pub fn q_lambda_by_convolution(a: &ResidueSet) -> Result<Vec<u64>> {
    if a.len() < 2 {
        return Err(Error::TooSmall(a.len()));
    }
    let f = a.field();
    let ind = IntegerProfile::indicator(a);
    (0..f.p())
        .into_par_iter()
        .map(|lambda| {
            let r = if lambda == 0 {
                let mut v = vec![0u64; f.size()];
                for x in a.iter() {
                    v[x as usize] = a.len() as u64;
                }
                IntegerProfile::from_values(f, v)?
            } else {
                convolve_add(&ind, &IntegerProfile::indicator(&a.dilate(f.neg(lambda))?))?
            };
            let scale = f.sub(1, lambda);
            let total: u64 = a.iter().map(|x| r.get(f.mul(scale, x))).sum();
            Ok(total - a.len() as u64)
        })
        .collect()
}

/// `R[A]`, the support of `q`; empty when `|A| < 2`.
pub fn ratio_set(a: &ResidueSet) -> ResidueSet {
    match q_lambda(a) {
        Ok(q) => ResidueSet::new(a.field(), (0..a.field().p()).filter(|&l| q[l as usize] > 0)),
        Err(_) => ResidueSet::empty(a.field()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollinearMode {
    Brute,
    Fast,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollinearStats {
    /// Ordered point triples of `A x A` on a common line.
    pub total: u128,
    /// `|A|^6 / p`.
    pub expected: Fraction,
    /// Nonzero values of `q(λ)` as `(λ, q(λ))`.
    pub q_profile: Vec<(u64, u64)>,
    pub ratio_set: ResidueSet,
}

fn collinear_brute(a: &ResidueSet) -> u128 {
    let f = a.field();
    let pts: Vec<(u64, u64)> = a.iter().flat_map(|x| a.iter().map(move |y| (x, y))).collect();
    let mut total = 0u128;
    for &(x1, y1) in &pts {
        for &(x2, y2) in &pts {
            let (u1, v1) = (f.sub(x2, x1), f.sub(y2, y1));
            for &(x3, y3) in &pts {
                let (u2, v2) = (f.sub(x3, x1), f.sub(y3, y1));
                if f.mul(u1, v2) == f.mul(u2, v1) {
                    total += 1;
                }
            }
        }
    }
    total
}

/// `Σ_l n_l^3` over all `p^2 + p` lines, less `p |A|^2` because a repeated
/// point lies on `p + 1` lines but is one triple.
fn collinear_fast(a: &ResidueSet) -> u128 {
    let f = a.field();
    let n = a.len() as u128;
    if n == 0 {
        return 0;
    }
    let vertical = n * n * n * n;
    let sloped: u128 = (0..f.p())
        .into_par_iter()
        .map(|m| {
            let mut counts = vec![0u64; f.size()];
            for x in a.iter() {
                let mx = f.mul(m, x);
                for y in a.iter() {
                    counts[f.sub(y, mx) as usize] += 1;
                }
            }
            counts.iter().map(|&c| (c as u128).pow(3)).sum::<u128>()
        })
        .sum();
    vertical + sloped - f.p() as u128 * n * n
}

pub fn collinear_triples(a: &ResidueSet, mode: CollinearMode) -> Result<CollinearStats> {
    let total = match mode {
        CollinearMode::Brute => {
            if a.len() > BRUTE_COLLINEAR_LIMIT {
                return Err(Error::BudgetExceeded(format!(
                    "brute collinear count needs |A| <= {BRUTE_COLLINEAR_LIMIT}, got {}",
                    a.len()
                )));
            }
            collinear_brute(a)
        }
        CollinearMode::Fast => collinear_fast(a),
    };
    let p = a.field().p();
    let q_profile = match q_lambda(a) {
        Ok(q) => (0..p).filter(|&l| q[l as usize] > 0).map(|l| (l, q[l as usize])).collect(),
        Err(_) => Vec::new(),
    };
    let ratio_set = ResidueSet::new(a.field(), q_profile.iter().map(|&(l, _)| l));
    Ok(CollinearStats {
        total,
        expected: Fraction::new((a.len() as i128).pow(6), p as i128),
        q_profile,
        ratio_set,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollinearDeviation {
    pub size: usize,
    pub total: u128,
    pub expected: Fraction,
    /// `T(A) - |A|^6 / p`.
    pub deviation: Fraction,
    /// `|A|^(40/9) p^(2/9)`.
    pub reference: f64,
    /// `|deviation| / reference`.
    pub ratio: f64,
}

pub fn collinear_deviation(a: &ResidueSet) -> Result<CollinearDeviation> {
    let stats = collinear_triples(a, CollinearMode::Fast)?;
    let deviation = stats.expected.subtracted_from(stats.total as i128);
    let n = a.len() as f64;
    let reference = n.powf(40.0 / 9.0) * (a.field().p() as f64).powf(2.0 / 9.0);
    let ratio = if reference > 0.0 { deviation.to_f64().abs() / reference } else { 0.0 };
    Ok(CollinearDeviation { size: a.len(), total: stats.total, expected: stats.expected, deviation, reference, ratio })
}

fn check_order(field: PrimeField, t: u64) -> Result<()> {
    if t == 0 || 2 * t >= field.p() {
        return Err(Error::BadOrder { t, p: field.p() });
    }
    Ok(())
}

/// `m X1 + n X2 = (m + n) X3` for all `1 <= m, n <= t` has only the `|A|`
/// diagonal solutions in `A`.
pub fn is_nonaveraging(a: &ResidueSet, t: u64) -> Result<bool> {
    let f = a.field();
    check_order(f, t)?;
    for m in 1..=t {
        for n in 1..=t {
            let eq = AffineEquation::new(f, m, n, f.neg(m + n), 0)?;
            if count_solutions(&eq, a, a, a)?.count != a.len() as u64 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A nontrivial solution has pairwise distinct entries, so a new element can
/// only close one with two distinct old ones.
struct NonAveraging {
    field: PrimeField,
    /// `(m, n, (m + n)^-1, m^-1)`.
    coeffs: Vec<(u64, u64, u64, u64)>,
}

impl Constraint for NonAveraging {
    fn field(&self) -> PrimeField {
        self.field
    }

    fn symmetry(&self) -> Symmetry {
        Symmetry::Affine
    }

    fn admits(&self, member: &[bool], set: &[u64], x: u64) -> bool {
        let f = self.field;
        for &(m, n, sum_inv, m_inv) in &self.coeffs {
            let mx = f.mul(m, x);
            let sx = f.mul(f.add(m, n), x);
            for &y in set {
                let ny = f.mul(n, y);
                // x = X1, y = X2
                if member[f.mul(f.add(mx, ny), sum_inv) as usize] {
                    return false;
                }
                // x = X3, y = X2
                if member[f.mul(f.sub(sx, ny), m_inv) as usize] {
                    return false;
                }
            }
        }
        true
    }
}

/// Largest non-averaging set of order `t` (exhaustive) or a valid witness.
pub fn max_nonaveraging(field: PrimeField, t: u64, options: &SearchOptions) -> Result<SearchOutcome> {
    check_order(field, t)?;
    let mut coeffs = Vec::new();
    for m in 1..=t {
        for n in 1..=t {
            coeffs.push((m, n, field.mod_inverse(m + n)?, field.mod_inverse(m)?));
        }
    }
    search::search(&NonAveraging { field, coeffs }, options)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedEnergyReport {
    /// `Σ_{x in X} E+(A, xA)`.
    pub sum: u128,
    /// `|X||A|^4 / p`.
    pub expected: Fraction,
    pub deviation: Fraction,
}

pub fn mixed_energy_sum(a: &ResidueSet, x: &ResidueSet) -> Result<MixedEnergyReport> {
    a.same_field(x)?;
    if x.contains(0) {
        return Err(Error::ZeroInX);
    }
    let sum: u128 = x
        .elements()
        .par_iter()
        .map(|&s| Ok(additive_energy(a, &a.dilate(s)?)?.value))
        .collect::<Result<Vec<u128>>>()?
        .into_iter()
        .sum();
    let expected = Fraction::new(x.len() as i128 * (a.len() as i128).pow(4), a.field().p() as i128);
    Ok(MixedEnergyReport { sum, expected, deviation: expected.subtracted_from(sum as i128) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn q_examples() {
        let f = field(5);
        let q = q_lambda(&ResidueSet::new(f, [0, 1])).unwrap();
        assert_eq!(q, vec![2, 2, 0, 0, 0]);
        let q = q_lambda(&ResidueSet::new(field(7), [0, 1, 2])).unwrap();
        assert_eq!(q.iter().sum::<u64>(), 18);
        assert_eq!(q_lambda(&ResidueSet::new(f, [3])).unwrap_err(), Error::TooSmall(1));
    }

    #[test]
    fn q_paths_agree() {
        let f = field(31);
        let a = ResidueSet::new(f, [0, 2, 3, 9, 17, 22, 30]);
        assert_eq!(q_lambda(&a).unwrap(), q_lambda_by_convolution(&a).unwrap());
    }

    #[test]
    fn ratio_set_examples() {
        let f = field(5);
        assert_eq!(ratio_set(&ResidueSet::new(f, [0, 1])), ResidueSet::new(f, [0, 1]));
        assert!(ratio_set(&ResidueSet::new(f, [2])).is_empty());
        assert!(ratio_set(&ResidueSet::empty(f)).is_empty());
    }

    #[test]
    fn collinear_examples() {
        let f = field(5);
        let a = ResidueSet::new(f, [0, 1]);
        assert_eq!(collinear_triples(&a, CollinearMode::Brute).unwrap().total, 40);
        assert_eq!(collinear_triples(&a, CollinearMode::Fast).unwrap().total, 40);
        let single = ResidueSet::new(field(3), [0]);
        for mode in [CollinearMode::Brute, CollinearMode::Fast] {
            let s = collinear_triples(&single, mode).unwrap();
            assert_eq!(s.total, 1);
            assert_eq!(s.expected, Fraction::new(1, 3));
        }
        let big = ResidueSet::new(field(31), 0..9);
        assert!(matches!(collinear_triples(&big, CollinearMode::Brute), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn full_grid() {
        // distinct-point triples: every ordered pair of distinct points spans a
        // line with p points
        let p = 7u128;
        let full = ResidueSet::full(field(7));
        let n = p * p;
        let expected = n + 3 * n * (n - 1) + n * (n - 1) * (p - 2);
        let d = collinear_deviation(&full).unwrap();
        assert_eq!(d.total, expected);
        assert_eq!(d.expected, Fraction::new((p as i128).pow(6), 7));
    }

    #[test]
    fn deviation_single_point() {
        let d = collinear_deviation(&ResidueSet::new(field(101), [5])).unwrap();
        assert_eq!(d.total, 1);
        assert_eq!(d.expected, Fraction::new(1, 101));
        assert_eq!(d.deviation, Fraction::new(100, 101));
    }

    #[test]
    fn nonaveraging_examples() {
        assert!(is_nonaveraging(&ResidueSet::new(field(5), [0, 1]), 1).unwrap());
        assert!(!is_nonaveraging(&ResidueSet::new(field(7), [0, 1, 2]), 1).unwrap());
        assert!(is_nonaveraging(&ResidueSet::new(field(11), [4]), 5).unwrap());
        assert_eq!(
            is_nonaveraging(&ResidueSet::new(field(7), [0]), 4).unwrap_err(),
            Error::BadOrder { t: 4, p: 7 }
        );
    }

    fn naive_nonaveraging(p: u64, t: u64) -> usize {
        let f = field(p);
        (0u64..1 << p)
            .map(|m| ResidueSet::new(f, (0..p).filter(|i| m >> i & 1 == 1)))
            .filter(|s| is_nonaveraging(s, t).unwrap())
            .map(|s| s.len())
            .max()
            .unwrap()
    }

    #[test]
    fn max_nonaveraging_matches_naive() {
        for (p, t) in [(5, 1), (7, 1), (7, 2), (11, 2)] {
            let out = max_nonaveraging(field(p), t, &SearchOptions::exhaustive()).unwrap();
            assert_eq!(out.size, naive_nonaveraging(p, t), "p={p} t={t}");
            assert!(is_nonaveraging(&out.witness, t).unwrap());
        }
        assert!(matches!(
            max_nonaveraging(field(5), 3, &SearchOptions::exhaustive()),
            Err(Error::BadOrder { .. })
        ));
    }

    #[test]
    fn mixed_energy_examples() {
        let f = field(7);
        let g = ResidueSet::new(f, [1, 2, 4]);
        let r = mixed_energy_sum(&g, &ResidueSet::new(f, [2])).unwrap();
        assert_eq!(r.sum, 15);
        let r = mixed_energy_sum(&g, &ResidueSet::new(f, [1])).unwrap();
        assert_eq!(r.sum, additive_energy(&g, &g).unwrap().value);

        let full = ResidueSet::full(f);
        let nonzero = full.without(0);
        let r = mixed_energy_sum(&full, &nonzero).unwrap();
        assert_eq!(r.sum, 6 * 343);
        assert!(r.deviation.is_zero());
        assert_eq!(mixed_energy_sum(&g, &full).unwrap_err(), Error::ZeroInX);
    }
}
