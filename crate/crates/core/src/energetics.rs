//! Energy-type quantities: additive and multiplicative energies, higher
//! moments, restricted sums, level sets and the dyadic decomposition.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpcore::{Fraction, ResidueSet};
use crate::harmonic::{convolve_add, convolve_add_iterated, convolve_mult, correlate_add, IntegerProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyKind {
    Additive,
    Multiplicative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnergyValue {
    pub kind: EnergyKind,
    pub value: u128,
}

/// Whether `0` takes part in a multiplicative count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroPolicy {
    #[default]
    Include,
    Exclude,
}

fn indicator(set: &ResidueSet) -> IntegerProfile {
    IntegerProfile::indicator(set)
}

/// `E+(A, B) = sum_x (A*B)(x)^2`.
pub fn additive_energy(a: &ResidueSet, b: &ResidueSet) -> Result<EnergyValue> {
    a.same_field(b)?;
    let conv = convolve_add(&indicator(a), &indicator(b))?;
    Ok(EnergyValue { kind: EnergyKind::Additive, value: conv.sum_of_squares() })
}

/// Representation counts `x -> |{(a, b) in A x B : ab = x}|`.
pub fn product_representations(a: &ResidueSet, b: &ResidueSet) -> Result<IntegerProfile> {
    a.same_field(b)?;
    let conv = convolve_mult(&indicator(a), &indicator(b))?;
    if !a.contains(0) {
        return Ok(conv);
    }
    // pairs with a = 0 land on 0; the multiplicative convolution skips them
    let mut values = conv.values().to_vec();
    values[0] += b.len() as u64;
    IntegerProfile::from_values(a.field(), values)
}

/// `E*(A, B)`, counting quadruples with `a1 b1 = a2 b2`; zeros included.
pub fn multiplicative_energy(a: &ResidueSet, b: &ResidueSet) -> Result<EnergyValue> {
    multiplicative_energy_with(a, b, ZeroPolicy::Include)
}

pub fn multiplicative_energy_with(
    a: &ResidueSet,
    b: &ResidueSet,
    zeros: ZeroPolicy,
) -> Result<EnergyValue> {
    let reps = match zeros {
        ZeroPolicy::Include => product_representations(a, b)?,
        ZeroPolicy::Exclude => product_representations(&a.without(0), &b.without(0))?,
    };
    Ok(EnergyValue { kind: EnergyKind::Multiplicative, value: reps.sum_of_squares() })
}

/// `E+_*(A) = E+(A) - |A|^4 / p` as the unreduced pair `(p E+(A) - |A|^4, p)`.
pub fn excess_additive_energy(a: &ResidueSet) -> Result<Fraction> {
    let e = additive_energy(a, a)?.value as i128;
    let n = a.len() as i128;
    let p = a.field().p() as i128;
    Ok(Fraction::new(p * e - n * n * n * n, p))
}

/// `T_k(A)`: solutions of `a_1 + ... + a_k = a'_1 + ... + a'_k`.
pub fn moment_t_k(a: &ResidueSet, k: usize) -> Result<u128> {
    Ok(convolve_add_iterated(&indicator(a), k)?.sum_of_squares())
}

/// `sigma_k(A)`: solutions of `a_1 + ... + a_k = 0`.
pub fn sigma_k(a: &ResidueSet, k: usize) -> Result<u64> {
    Ok(convolve_add_iterated(&indicator(a), k)?.get(0))
}

/// `sigma_P(A) = sum_{x in P} (A o A)(x)`.
pub fn restricted_sigma(a: &ResidueSet, p_set: &ResidueSet) -> Result<u128> {
    a.same_field(p_set)?;
    let corr = correlate_add(&indicator(a), &indicator(a))?;
    Ok(p_set.iter().map(|x| corr.get(x) as u128).sum())
}

/// `sum_{x in P} (A o B)(x)^2`.
pub fn restricted_energy(a: &ResidueSet, b: &ResidueSet, p_set: &ResidueSet) -> Result<u128> {
    a.same_field(b)?;
    a.same_field(p_set)?;
    let corr = correlate_add(&indicator(a), &indicator(b))?;
    Ok(p_set
        .iter()
        .map(|x| {
            let v = corr.get(x) as u128;
            v * v
        })
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymKind {
    Additive,
    Multiplicative,
}

/// `Sym_t(Q, R) = { x : |Q ∩ (x - R)| >= t }`; the multiplicative kind uses
/// `x R^{-1}` over the nonzero elements of `R`.
pub fn sym_level_set(q: &ResidueSet, r: &ResidueSet, t: u64, kind: SymKind) -> Result<ResidueSet> {
    q.same_field(r)?;
    if t == 0 {
        return Err(Error::BadParameter("level t must be >= 1".into()));
    }
    let counts = match kind {
        SymKind::Additive => convolve_add(&indicator(q), &indicator(r))?,
        SymKind::Multiplicative => convolve_mult(&indicator(r), &indicator(q))?,
    };
    Ok(counts.level_set(t))
}

/// Nonzero `s` with `|A ∩ sB| >= tau`.
pub fn dilate_level_set(a: &ResidueSet, b: &ResidueSet, tau: u64) -> Result<ResidueSet> {
    a.same_field(b)?;
    if tau == 0 {
        return Err(Error::BadParameter("level tau must be >= 1".into()));
    }
    let field = a.field();
    let inv = field.inverse_table();
    let mut counts = vec![0u64; field.size()];
    for bv in b.iter().filter(|&x| x != 0) {
        for av in a.iter().filter(|&x| x != 0) {
            counts[field.mul(av, inv[bv as usize]) as usize] += 1;
        }
    }
    let base = u64::from(a.contains(0) && b.contains(0));
    Ok(ResidueSet::new(
        field,
        (1..field.p()).filter(|&s| counts[s as usize] + base >= tau),
    ))
}

/// Output of [`pigeonhole_decompose`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// `A_*`, a subset of the input set.
    pub subset: ResidueSet,
    /// `q`, with `(A * P)(x) >= q` on the subset.
    pub level: u64,
    /// Pigeonhole rounds used (1 or 2).
    pub rounds: u8,
}

/// One dyadic pigeonhole round: among the classes `{x : 2^j <= w(x) < 2^(j+1)}`
/// pick the one maximizing `|class| * 2^j` (ties go to the lower class).
/// Returns the class and its minimum weight.
fn dyadic_pick(weights: &[(u64, u64)]) -> (Vec<u64>, u64) {
    let mut classes: Vec<Vec<(u64, u64)>> = Vec::new();
    for &(x, w) in weights.iter().filter(|&&(_, w)| w > 0) {
        let j = (63 - w.leading_zeros()) as usize;
        if classes.len() <= j {
            classes.resize(j + 1, Vec::new());
        }
        classes[j].push((x, w));
    }
    let (_, best) = classes
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_empty())
        .map(|(j, c)| ((c.len() as u128) << j, c))
        .fold((0u128, None), |acc, (score, c)| if score > acc.0 { (score, Some(c)) } else { acc });
    let best = best.expect("at least one positive weight");
    let elems = best.iter().map(|&(x, _)| x).collect();
    let min = best.iter().map(|&(_, w)| w).min().unwrap_or(0);
    (elems, min)
}

/// Two-round dyadic pigeonholing of `sigma_P(A) = sum_{x in A} (A*P)(x)`.
///
/// With `L = 1 + floor(log2 |A|)` the result satisfies
/// `(A*P)(x) >= q` on `A_*`, `q <= 4 L |A_*|`, and
/// `sigma_P(A) / (8 L^2) <= |A_*| q <= sigma_P(A)`.
pub fn pigeonhole_decompose(a: &ResidueSet, p_set: &ResidueSet) -> Result<Decomposition> {
    a.same_field(p_set)?;
    if !p_set.is_symmetric() {
        return Err(Error::AsymmetricP);
    }
    if restricted_sigma(a, p_set)? == 0 {
        return Err(Error::EmptyMass);
    }
    let field = a.field();
    let p_ind = indicator(p_set);
    let weights_over = |support: &ResidueSet| -> Result<Vec<(u64, u64)>> {
        let conv = convolve_add(&indicator(support), &p_ind)?;
        Ok(a.iter().map(|x| (x, conv.get(x))).collect())
    };

    let (first, q1) = dyadic_pick(&weights_over(a)?);
    let first = ResidueSet::new(field, first);
    if q1 <= first.len() as u64 {
        return Ok(Decomposition { subset: first, level: q1, rounds: 1 });
    }
    // sum_{x in A'} (A*P)(x) = sum_{x in A} (A'*P)(x) because P = -P
    let (second, q2) = dyadic_pick(&weights_over(&first)?);
    Ok(Decomposition { subset: ResidueSet::new(field, second), level: q2, rounds: 2 })
}
