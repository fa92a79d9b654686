//! Exact cyclic convolution through a number-theoretic transform modulo an
//! auxiliary prime picked at runtime.

use crate::fpcore::{is_prime, pow_mod};

/// Auxiliary primes stay below this so every butterfly fits in `u128`.
const MAX_MODULUS: u64 = 1 << 62;

#[derive(Debug, Clone, Copy)]
struct NttPrime {
    modulus: u64,
    /// Primitive root of unity of order `2^log_len`.
    root: u64,
    log_len: u32,
}

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    if m <= u32::MAX as u64 {
        a * b % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

/// `pow_mod` that goes through the fast path for small moduli.
fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m > u32::MAX as u64 {
        return pow_mod(base, exp, m);
    }
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Finds the smallest prime `c * 2^log_len + 1` exceeding `bound`.
fn find_prime(bound: u128, log_len: u32) -> Option<NttPrime> {
    let step = 1u128 << log_len;
    let mut c = (bound / step).max(1);
    loop {
        let q = c * step + 1;
        if q >= MAX_MODULUS as u128 {
            return None;
        }
        let q = q as u64;
        if q as u128 > bound && is_prime(q) {
            let root = (2..q).find_map(|g| {
                let w = powmod(g, (q - 1) >> log_len, q);
                let half = if log_len == 0 { 1 } else { powmod(w, 1 << (log_len - 1), q) };
                (log_len == 0 || half != 1).then_some(w)
            })?;
            return Some(NttPrime { modulus: q, root, log_len });
        }
        c += 1;
    }
}

fn transform(values: &mut [u64], prime: &NttPrime, inverse: bool) {
    let n = values.len();
    let m = prime.modulus;
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            values.swap(i, j);
        }
    }
    let root = if inverse { powmod(prime.root, m - 2, m) } else { prime.root };
    let mut len = 2;
    while len <= n {
        let w_len = powmod(root, (1u64 << prime.log_len) / len as u64, m);
        let mut twiddles = Vec::with_capacity(len / 2);
        let mut w = 1u64;
        for _ in 0..len / 2 {
            twiddles.push(w);
            w = mulmod(w, w_len, m);
        }
        for chunk in values.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(len / 2);
            for ((u, v), &tw) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                let x = *u;
                let y = mulmod(*v, tw, m);
                *u = if x + y >= m { x + y - m } else { x + y };
                *v = if x >= y { x - y } else { x + m - y };
            }
        }
        len <<= 1;
    }
    if inverse {
        let n_inv = powmod(n as u64 % m, m - 2, m);
        for v in values.iter_mut() {
            *v = mulmod(*v, n_inv, m);
        }
    }
}

/// Cyclic convolution of two length-`p` sequences whose true result is
/// known to be `< bound`. Returns `None` when no suitable auxiliary prime fits
/// in the supported range.
pub(crate) fn cyclic_convolution(f: &[u64], g: &[u64], bound: u128) -> Option<Vec<u64>> {
    let p = f.len();
    debug_assert_eq!(p, g.len());
    let n = (2 * p - 1).next_power_of_two();
    let prime = find_prime(bound, n.trailing_zeros())?;
    let m = prime.modulus;
    let mut fa = vec![0u64; n];
    let mut ga = vec![0u64; n];
    for (dst, &v) in fa.iter_mut().zip(f) {
        *dst = v % m;
    }
    for (dst, &v) in ga.iter_mut().zip(g) {
        *dst = v % m;
    }
    transform(&mut fa, &prime, false);
    transform(&mut ga, &prime, false);
    for (a, &b) in fa.iter_mut().zip(&ga) {
        *a = mulmod(*a, b, m);
    }
    transform(&mut fa, &prime, true);
    let mut out = fa[..p].to_vec();
    for (i, &v) in fa[p..2 * p - 1].iter().enumerate() {
        out[i] += v;
    }
    Some(out)
}
