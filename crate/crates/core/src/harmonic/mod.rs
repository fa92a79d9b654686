//! Exact convolutions and floating-point Fourier transforms over `F_p`.
//!
//! Counting quantities go through [`IntegerProfile`] and are exact: small
//! fields (or sparse operands) use the schoolbook sum, larger ones an exact
//! transform modulo an auxiliary prime. Spectrum magnitudes go through
//! double-precision complex transforms; the sign convention is
//! `f^(xi) = sum_x f(x) e(-xi x / p)`.

mod ntt;

use std::f64::consts::TAU;
use std::sync::Arc;

pub use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::fpcore::{check_fields, PrimeField, ResidueSet};

/// Fields up to this size always use the schoolbook convolution.
pub const SCHOOLBOOK_LIMIT: usize = 4096;
/// Sets up to this size are transformed by direct summation.
pub const DIRECT_DFT_LIMIT: usize = 64;

/// An exact non-negative integer function on `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerProfile {
    field: PrimeField,
    values: Vec<u64>,
}

impl IntegerProfile {
    pub fn zero(field: PrimeField) -> Self {
        IntegerProfile { field, values: vec![0; field.size()] }
    }

    pub fn from_values(field: PrimeField, values: Vec<u64>) -> Result<Self> {
        if values.len() != field.size() {
            return Err(Error::LengthMismatch { expected: field.size(), got: values.len() });
        }
        Ok(IntegerProfile { field, values })
    }

    pub fn indicator(set: &ResidueSet) -> Self {
        let mut out = Self::zero(set.field());
        for x in set.iter() {
            out.values[x as usize] = 1;
        }
        out
    }

    pub fn delta(field: PrimeField, x: u64) -> Self {
        let mut out = Self::zero(field);
        out.values[field.reduce(x) as usize] = 1;
        out
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, x: u64) -> u64 {
        self.values[self.field.reduce(x) as usize]
    }

    pub fn total(&self) -> u128 {
        self.values.iter().map(|&v| v as u128).sum()
    }

    pub fn sum_of_squares(&self) -> u128 {
        self.values.iter().map(|&v| v as u128 * v as u128).sum()
    }

    pub fn max_value(&self) -> u64 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    pub fn support(&self) -> ResidueSet {
        ResidueSet::new(
            self.field,
            self.nonzero().map(|(x, _)| x as u64).collect::<Vec<_>>(),
        )
    }

    /// `x -> f(-x)`.
    pub fn reflect(&self) -> Self {
        let mut out = Self::zero(self.field);
        for (x, &v) in self.values.iter().enumerate() {
            out.values[self.field.neg(x as u64) as usize] = v;
        }
        out
    }

    /// Residues where `f >= t`.
    pub fn level_set(&self, t: u64) -> ResidueSet {
        let mask: Vec<bool> = self.values.iter().map(|&v| v >= t).collect();
        ResidueSet::from_indicator(self.field, &mask)
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.values.iter().map(|&v| v as f64).collect()
    }

    fn nonzero(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.values.iter().copied().enumerate().filter(|&(_, v)| v != 0)
    }

    fn nonzero_count(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0).count()
    }
}

/// How [`convolve_add_with`] computes its result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvolutionStrategy {
    Auto,
    Schoolbook,
    Transform,
}

/// `(f * g)(x) = sum_y f(y) g(x - y)`.
pub fn convolve_add(f: &IntegerProfile, g: &IntegerProfile) -> Result<IntegerProfile> {
    convolve_add_with(f, g, ConvolutionStrategy::Auto)
}

pub fn convolve_add_with(
    f: &IntegerProfile,
    g: &IntegerProfile,
    strategy: ConvolutionStrategy,
) -> Result<IntegerProfile> {
    check_fields(f.field, g.field)?;
    let p = f.field.size();
    let use_transform = match strategy {
        ConvolutionStrategy::Schoolbook => false,
        ConvolutionStrategy::Transform => true,
        ConvolutionStrategy::Auto => {
            let work = f.nonzero_count() as u128 * g.nonzero_count() as u128;
            let log_p = (usize::BITS - p.leading_zeros()) as u128;
            p > SCHOOLBOOK_LIMIT && work > 8 * p as u128 * log_p
        }
    };
    if use_transform {
        let bound = (f.total().min(p as u128 * f.max_value() as u128))
            .saturating_mul(g.max_value() as u128)
            .saturating_add(1);
        if let Some(values) = ntt::cyclic_convolution(&f.values, &g.values, bound) {
            return Ok(IntegerProfile { field: f.field, values });
        }
    }
    Ok(schoolbook(f, g))
}

fn schoolbook(f: &IntegerProfile, g: &IntegerProfile) -> IntegerProfile {
    let p = f.field.size();
    let mut acc = vec![0u128; p];
    let g_nz: Vec<(usize, u64)> = g.nonzero().collect();
    for (x, fv) in f.nonzero() {
        for &(y, gv) in &g_nz {
            let mut idx = x + y;
            if idx >= p {
                idx -= p;
            }
            acc[idx] += fv as u128 * gv as u128;
        }
    }
    IntegerProfile { field: f.field, values: narrow(acc) }
}

fn narrow(acc: Vec<u128>) -> Vec<u64> {
    acc.into_iter()
        .map(|v| u64::try_from(v).expect("convolution value exceeds u64"))
        .collect()
}

/// `(f o g)(x) = sum_y f(y) g(y + x)`.
pub fn correlate_add(f: &IntegerProfile, g: &IntegerProfile) -> Result<IntegerProfile> {
    check_fields(f.field, g.field)?;
    convolve_add(&f.reflect(), g)
}

/// `(f (x) g)(x) = sum_{y != 0} f(y) g(x / y)`.
pub fn convolve_mult(f: &IntegerProfile, g: &IntegerProfile) -> Result<IntegerProfile> {
    check_fields(f.field, g.field)?;
    let field = f.field;
    let mut acc = vec![0u128; field.size()];
    let g_nz: Vec<(usize, u64)> = g.nonzero().collect();
    for (y, fv) in f.nonzero().filter(|&(y, _)| y != 0) {
        for &(z, gv) in &g_nz {
            acc[field.mul(y as u64, z as u64) as usize] += fv as u128 * gv as u128;
        }
    }
    Ok(IntegerProfile { field, values: narrow(acc) })
}

/// The `k`-fold additive self-convolution (`k = 1` returns `f`).
pub fn convolve_add_iterated(f: &IntegerProfile, k: usize) -> Result<IntegerProfile> {
    if k == 0 {
        return Err(Error::BadParameter("convolution power k must be >= 1".into()));
    }
    let mut out = f.clone();
    for _ in 1..k {
        out = convolve_add(&out, f)?;
    }
    Ok(out)
}

/// Magnitudes `|A^(xi)|` for every frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    field: PrimeField,
    source_size: usize,
    magnitudes: Vec<f64>,
    squared_magnitudes: Vec<f64>,
}

impl SpectrumTable {
    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn source_size(&self) -> usize {
        self.source_size
    }

    #[inline]
    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    #[inline]
    pub fn squared_magnitudes(&self) -> &[f64] {
        &self.squared_magnitudes
    }

    #[inline]
    pub fn magnitude(&self, xi: u64) -> f64 {
        self.magnitudes[self.field.reduce(xi) as usize]
    }

    /// `(1/p) sum_xi |A^(xi)|^(2k)`.
    pub fn moment(&self, k: u32) -> f64 {
        let s: f64 = self.squared_magnitudes.iter().map(|v| v.powi(k as i32)).sum();
        s / self.field.p() as f64
    }
}

/// Which path [`dft_with`] takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DftPath {
    Auto,
    Direct,
    Fast,
}

pub fn dft(set: &ResidueSet) -> SpectrumTable {
    dft_with(set, DftPath::Auto)
}

pub fn dft_with(set: &ResidueSet, path: DftPath) -> SpectrumTable {
    let field = set.field();
    let p = field.size();
    let direct = match path {
        DftPath::Direct => true,
        DftPath::Fast => false,
        DftPath::Auto => set.len() <= DIRECT_DFT_LIMIT,
    };
    let coeffs = if direct {
        direct_set_transform(set)
    } else {
        let mut values = vec![0.0; p];
        for x in set.iter() {
            values[x as usize] = 1.0;
        }
        fourier_transform(&values)
    };
    let mut squared: Vec<f64> = coeffs.iter().map(|c| c.norm_sqr()).collect();
    // real input: |f^(xi)| = |f^(-xi)|, enforced exactly
    for xi in 1..=(p - 1) / 2 {
        let avg = 0.5 * (squared[xi] + squared[p - xi]);
        squared[xi] = avg;
        squared[p - xi] = avg;
    }
    let n = set.len() as f64;
    squared[0] = n * n;
    let mut magnitudes: Vec<f64> = squared.iter().map(|v| v.sqrt()).collect();
    magnitudes[0] = n;
    SpectrumTable { field, source_size: set.len(), magnitudes, squared_magnitudes: squared }
}

fn twiddles(p: usize) -> Vec<Complex64> {
    (0..p)
        .map(|k| Complex64::from_polar(1.0, -TAU * k as f64 / p as f64))
        .collect()
}

fn direct_set_transform(set: &ResidueSet) -> Vec<Complex64> {
    let field = set.field();
    let tw = twiddles(field.size());
    (0..field.p())
        .map(|xi| set.iter().map(|a| tw[field.mul(xi, a) as usize]).sum())
        .collect()
}

fn plan(p: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut planner = FftPlanner::new();
    if inverse {
        planner.plan_fft_inverse(p)
    } else {
        planner.plan_fft_forward(p)
    }
}

/// Complex transform of a real function given by its values on `0..p`.
pub fn fourier_transform(values: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    plan(buf.len(), false).process(&mut buf);
    buf
}

/// Direct `O(p^2)` transform, used to cross-check the fast path.
pub fn fourier_transform_direct(values: &[f64]) -> Vec<Complex64> {
    let p = values.len();
    let tw = twiddles(p);
    (0..p)
        .map(|xi| {
            values
                .iter()
                .enumerate()
                .map(|(x, &v)| tw[(xi * x) % p] * v)
                .sum()
        })
        .collect()
}

/// `f(x) = (1/p) sum_xi f^(xi) e(xi x / p)`.
pub fn inverse_fourier_transform(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut buf = coeffs.to_vec();
    plan(buf.len(), true).process(&mut buf);
    let n = buf.len() as f64;
    for c in buf.iter_mut() {
        *c /= n;
    }
    buf
}

/// `||f^||'_inf = max_{xi != 0} |f^(xi)|`.
pub fn sup_norm_nonzero(table: &SpectrumTable) -> f64 {
    table.magnitudes[1..].iter().copied().fold(0.0, f64::max)
}
