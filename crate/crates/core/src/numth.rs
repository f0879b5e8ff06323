//! Integer and modular number theory on `u64`.
//!
//! Everything here is exact. Products are formed in `u128` so any modulus
//! below 2^64 is safe. Factorization is plain trial division and is limited
//! to inputs up to 2^48.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Largest input accepted by [`factorize`].
pub const FACTORIZE_LIMIT: u64 = 1 << 48;

/// Miller-Rabin bases that are sufficient for every 64-bit input.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    if (a | b) >> 32 == 0 {
        return (a * b) % n;
    }
    ((a as u128 * b as u128) % n as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, n: u64) -> u64 {
    if a < n && b < n {
        let (s, overflow) = a.overflowing_add(b);
        return if overflow || s >= n { s.wrapping_sub(n) } else { s };
    }
    ((a as u128 + b as u128) % n as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, n: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        n - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Reduces a possibly negative integer into `[0, n)`.
pub fn normalize(value: i128, n: u64) -> u64 {
    value.rem_euclid(n as i128) as u64
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Extended Euclid: returns `(g, x, y)` with `g = gcd(a, b) >= 0` and `a*x + b*y = g`.
pub fn egcd(a: i128, b: i128) -> Result<(u128, i128, i128)> {
    if a == 0 && b == 0 {
        return domain("egcd(0, 0) is undefined");
    }
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    Ok((old_r as u128, old_s, old_t))
}

/// Inverse of `a` modulo `n`, if it exists.
pub fn inv_mod(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let (g, x, _) = egcd(a as i128, n as i128).ok()?;
    (g == 1).then(|| normalize(x, n))
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let d_shift = (n - 1).trailing_zeros();
    let d = (n - 1) >> d_shift;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..d_shift {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// One `prime^exponent` term of a factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    pub prime: u64,
    pub exponent: u32,
}

impl PrimePower {
    pub fn value(&self) -> u64 {
        self.prime.pow(self.exponent)
    }
}

/// Prime factorization with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeFactorization {
    pub factors: Vec<PrimePower>,
}

impl PrimeFactorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|f| f.prime)
    }

    /// Multiplies the factorization back out.
    pub fn product(&self) -> u64 {
        self.factors.iter().map(PrimePower::value).product()
    }

    /// All positive divisors in increasing order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for pp in &self.factors {
            let len = divs.len();
            let mut power = 1u64;
            for _ in 0..pp.exponent {
                power *= pp.prime;
                for i in 0..len {
                    divs.push(divs[i] * power);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

/// Trial-division factorization of `n` in `[2, 2^48]`.
pub fn factorize(n: u64) -> Result<PrimeFactorization> {
    if n < 2 {
        return domain(format!("cannot factorize {n}"));
    }
    if n > FACTORIZE_LIMIT {
        return Err(Error::Range { what: "factorization input".into(), value: n as u128, cap: FACTORIZE_LIMIT as u128 });
    }
    let mut rest = n;
    let mut factors = Vec::new();
    let mut push = |rest: &mut u64, p: u64| {
        let mut e = 0;
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push(PrimePower { prime: p, exponent: e });
        }
    };
    push(&mut rest, 2);
    push(&mut rest, 3);
    let mut p = 5u64;
    while p * p <= rest {
        push(&mut rest, p);
        push(&mut rest, p + 2);
        p += 6;
    }
    if rest > 1 {
        factors.push(PrimePower { prime: rest, exponent: 1 });
    }
    Ok(PrimeFactorization { factors })
}

/// Positive divisors of `n >= 1` in increasing order.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    match n {
        0 => domain("divisors of 0"),
        1 => Ok(vec![1]),
        _ => Ok(factorize(n)?.divisors()),
    }
}

pub fn euler_phi(n: u64) -> Result<u64> {
    match n {
        0 => domain("euler_phi(0) is undefined"),
        1 => Ok(1),
        _ => Ok(factorize(n)?.factors.iter().map(|pp| (pp.prime - 1) * pp.prime.pow(pp.exponent - 1)).product()),
    }
}

/// Product of the distinct primes dividing `n`; `rad(1) = 1`.
pub fn rad(n: u64) -> Result<u64> {
    match n {
        0 => domain("rad(0) is undefined"),
        1 => Ok(1),
        _ => Ok(factorize(n)?.primes().product()),
    }
}

/// Exponent of the prime `p` in `n > 0`.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

pub fn is_squarefree(n: u64) -> Result<bool> {
    match n {
        0 => domain("squarefree test of 0"),
        1 => Ok(true),
        _ => Ok(factorize(n)?.factors.iter().all(|pp| pp.exponent == 1)),
    }
}

/// Multiplicative order of `a` modulo `b`: the least `h >= 1` with `a^h = 1 (mod b)`.
///
/// Starts from `phi(b)` and strips prime factors while the power stays 1.
pub fn mult_order(a: u64, b: u64) -> Result<u64> {
    if b < 2 {
        return domain(format!("modulus {b} must be at least 2"));
    }
    let a = a % b;
    if gcd(a, b) != 1 {
        return domain(format!("{a} is not coprime to {b}"));
    }
    let phi = euler_phi(b)?;
    order_dividing(phi, |e| pow_mod(a, e, b) == 1)
}

/// Least `h | group_order` with `is_identity(h)`, by divisor descent.
///
/// `is_identity(e)` must report whether the element raised to `e` is 1, and
/// must hold for `e = group_order`.
pub(crate) fn order_dividing(group_order: u64, is_identity: impl Fn(u64) -> bool) -> Result<u64> {
    if group_order == 1 {
        return Ok(1);
    }
    let mut order = group_order;
    for p in factorize(group_order)?.primes() {
        while order.is_multiple_of(p) && is_identity(order / p) {
            order /= p;
        }
    }
    Ok(order)
}

/// Prime-power moduli of the CRT splitting of `n`.
pub fn crt_split(n: u64) -> Result<Vec<u64>> {
    Ok(factorize(n)?.factors.iter().map(PrimePower::value).collect())
}

/// Primes up to and including `limit`, increasing.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&p| is_prime(p)).collect()
}

/// `(p, k)` if `q = p^k` for a prime `p` and `k >= 1`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if !(2..=FACTORIZE_LIMIT).contains(&q) {
        return None;
    }
    let f = factorize(q).ok()?;
    match f.factors.as_slice() {
        [pp] => Some((pp.prime, pp.exponent)),
        _ => None,
    }
}
