//! Prime-field arithmetic and the residue-set model shared by every other module.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Distinct prime factors of `n`, by trial division.
pub(crate) fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The field `F_p` for an odd prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    p: u64,
}

impl TryFrom<u64> for PrimeField {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.p
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// `p` as a `usize`, for indexing profiles.
    #[inline]
    pub fn size(&self) -> usize {
        self.p as usize
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.p
    }

    #[inline]
    pub fn reduce_signed(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p)
    }

    /// The inverse of a nonzero residue.
    pub fn mod_inverse(&self, x: u64) -> Result<u64> {
        let x = self.reduce(x);
        if x == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(x, self.p - 2))
    }

    /// Table `t` with `t[x] = x^{-1}` for `x != 0` and `t[0] = 0`, built in O(p).
    pub fn inverse_table(&self) -> Vec<u64> {
        let n = self.size();
        let mut inv = vec![0u64; n];
        if n > 1 {
            inv[1] = 1;
        }
        for x in 2..n {
            let q = self.p / x as u64;
            let r = (self.p % x as u64) as usize;
            inv[x] = self.mul(self.p - q, inv[r]);
        }
        inv
    }

    /// Smallest generator of `F_p^*`.
    pub fn primitive_root(&self) -> u64 {
        let order = self.p - 1;
        let factors = distinct_prime_factors(order);
        (2..self.p)
            .find(|&g| factors.iter().all(|&q| self.pow(g, order / q) != 1))
            .unwrap_or(1)
    }

    /// The unique subgroup of `F_p^*` of order `d`.
    pub fn multiplicative_subgroup(&self, d: u64) -> Result<ResidueSet> {
        if d == 0 || !(self.p - 1).is_multiple_of(d) {
            return Err(Error::InvalidOrder { p: self.p, order: d });
        }
        let gen = self.pow(self.primitive_root(), (self.p - 1) / d);
        let mut elems = Vec::with_capacity(d as usize);
        let mut x = 1;
        for _ in 0..d {
            elems.push(x);
            x = self.mul(x, gen);
        }
        Ok(ResidueSet::new(*self, elems))
    }
}

/// A subset of `F_p`, stored as a strictly increasing list of canonical residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "ResidueSetRepr", into = "ResidueSetRepr")]
pub struct ResidueSet {
    field: PrimeField,
    elems: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct ResidueSetRepr {
    p: PrimeField,
    elements: Vec<u64>,
}

impl From<ResidueSetRepr> for ResidueSet {
    fn from(r: ResidueSetRepr) -> Self {
        ResidueSet::new(r.p, r.elements)
    }
}

impl From<ResidueSet> for ResidueSetRepr {
    fn from(s: ResidueSet) -> Self {
        ResidueSetRepr { p: s.field, elements: s.elems }
    }
}

impl ResidueSet {
    /// Reduces every input modulo `p` and removes duplicates.
    pub fn new(field: PrimeField, elems: impl IntoIterator<Item = u64>) -> Self {
        let mut elems: Vec<u64> = elems.into_iter().map(|x| field.reduce(x)).collect();
        elems.sort_unstable();
        elems.dedup();
        ResidueSet { field, elems }
    }

    pub fn from_signed(field: PrimeField, elems: impl IntoIterator<Item = i64>) -> Self {
        Self::new(field, elems.into_iter().map(|x| field.reduce_signed(x)))
    }

    pub fn from_indicator(field: PrimeField, mask: &[bool]) -> Self {
        let elems = mask
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i as u64)
            .collect();
        ResidueSet { field, elems }
    }

    pub fn empty(field: PrimeField) -> Self {
        ResidueSet { field, elems: Vec::new() }
    }

    pub fn full(field: PrimeField) -> Self {
        ResidueSet { field, elems: (0..field.p()).collect() }
    }

    pub fn singleton(field: PrimeField, x: u64) -> Self {
        Self::new(field, [x])
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    #[inline]
    pub fn elements(&self) -> &[u64] {
        &self.elems
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.elems.iter().copied()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    pub fn indicator(&self) -> Vec<bool> {
        let mut mask = vec![false; self.field.size()];
        for &x in &self.elems {
            mask[x as usize] = true;
        }
        mask
    }

    pub fn is_subset(&self, other: &ResidueSet) -> bool {
        self.elems.iter().all(|&x| other.contains(x))
    }

    pub fn same_field(&self, other: &ResidueSet) -> Result<()> {
        check_fields(self.field, other.field)
    }

    /// `-A`.
    pub fn negate(&self) -> ResidueSet {
        Self::new(self.field, self.elems.iter().map(|&x| self.field.neg(x)))
    }

    /// The dilate `sA`.
    pub fn dilate(&self, s: u64) -> Result<ResidueSet> {
        let s = self.field.reduce(s);
        if s == 0 {
            return Err(Error::ZeroDilation);
        }
        Ok(Self::new(self.field, self.elems.iter().map(|&x| self.field.mul(x, s))))
    }

    pub fn is_symmetric(&self) -> bool {
        self.elems.iter().all(|&x| self.contains(self.field.neg(x)))
    }

    pub fn union(&self, other: &ResidueSet) -> ResidueSet {
        Self::new(self.field, self.iter().chain(other.iter()))
    }

    /// `A - A`.
    pub fn difference_set(&self) -> ResidueSet {
        let f = self.field;
        Self::new(f, self.iter().flat_map(|a| self.iter().map(move |b| f.sub(a, b))))
    }

    /// `A \ {x}`.
    pub fn without(&self, x: u64) -> ResidueSet {
        ResidueSet {
            field: self.field,
            elems: self.elems.iter().copied().filter(|&y| y != x).collect(),
        }
    }
}

impl fmt::Display for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

pub(crate) fn check_fields(a: PrimeField, b: PrimeField) -> Result<()> {
    if a != b {
        return Err(Error::FieldMismatch { left: a.p(), right: b.p() });
    }
    Ok(())
}

/// An exact rational `numer / denom` with `denom > 0`, kept unreduced.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Fraction {
    pub numer: i128,
    pub denom: i128,
}

impl Fraction {
    pub fn new(numer: i128, denom: i128) -> Self {
        assert!(denom != 0, "zero denominator");
        if denom < 0 {
            Fraction { numer: -numer, denom: -denom }
        } else {
            Fraction { numer, denom }
        }
    }

    pub fn integer(n: i128) -> Self {
        Fraction { numer: n, denom: 1 }
    }

    pub fn to_f64(&self) -> f64 {
        self.numer as f64 / self.denom as f64
    }

    pub fn is_zero(&self) -> bool {
        self.numer == 0
    }

    /// Exact comparison against an integer.
    pub fn cmp_integer(&self, n: i128) -> Ordering {
        self.numer.cmp(&(n * self.denom))
    }

    pub fn scale(&self, k: i128) -> Fraction {
        Fraction::new(self.numer * k, self.denom)
    }

    /// `n - self`, over the same denominator.
    pub fn subtracted_from(&self, n: i128) -> Fraction {
        Fraction::new(n * self.denom - self.numer, self.denom)
    }
}

impl PartialEq for Fraction {
    fn eq(&self, other: &Self) -> bool {
        self.numer * other.denom == other.numer * self.denom
    }
}

impl Eq for Fraction {}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.numer * other.denom).cmp(&(other.numer * self.denom))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom == 1 {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "{}/{}", self.numer, self.denom)
        }
    }
}
