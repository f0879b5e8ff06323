//! Finite fields `F_q`, `q = p^k`, as `Z_p[y]/(g)` for a stored monic irreducible `g`.
//!
//! Elements are packed into a single integer: the coefficient vector
//! `(c_0, .., c_{k-1})` of `c_0 + c_1 y + .. + c_{k-1} y^{k-1}` is stored as
//! `c_0 + c_1 p + .. + c_{k-1} p^{k-1}`. For `k = 1` this is just the residue,
//! no modulus polynomial is stored, and arithmetic is plain modular arithmetic.
//! Zero is always packed as 0 and one as 1.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_cap, domain, Error, Result};
use crate::factor::{self, Poly};
use crate::numth::{self, add_mod, mul_mod, sub_mod};

/// An element of some `F_q`, packed as described in the module docs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FqElement(pub u64);

impl FqElement {
    pub const ZERO: FqElement = FqElement(0);
    pub const ONE: FqElement = FqElement(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Deserialize)]
struct FieldSpecRepr {
    p: u64,
    k: u32,
    #[serde(default)]
    modulus: Option<Vec<u64>>,
}

/// A finite field `F_{p^k}`. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FieldSpecRepr")]
pub struct FieldSpec {
    p: u64,
    k: u32,
    /// Monic irreducible of degree `k`, ascending coefficients; `None` when `k = 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    modulus: Option<Vec<u64>>,
    #[serde(skip)]
    q: u64,
}

impl TryFrom<FieldSpecRepr> for FieldSpec {
    type Error = Error;

    fn try_from(repr: FieldSpecRepr) -> Result<Self> {
        match (repr.k, repr.modulus) {
            (1, None) => FieldSpec::prime(repr.p),
            (k, Some(modulus)) => {
                let spec = FieldSpec::with_modulus(repr.p, modulus)?;
                if spec.k != k {
                    return domain(format!("modulus degree {} does not match k = {k}", spec.k));
                }
                Ok(spec)
            }
            (k, None) => domain(format!("k = {k} needs a modulus polynomial")),
        }
    }
}

/// Enumeration cap used when a caller does not supply one.
pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

const MAX_ORDER: u128 = 1 << 63;

impl FieldSpec {
    /// The prime field `Z_p`.
    pub fn prime(p: u64) -> Result<Self> {
        if !numth::is_prime(p) {
            return domain(format!("{p} is not prime"));
        }
        Ok(FieldSpec { p, k: 1, modulus: None, q: p })
    }

    /// `Z_p[y]/(modulus)`; the modulus must be monic and irreducible.
    ///
    /// A degree-one modulus yields the prime field itself.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        let base = FieldSpec::prime(p)?;
        let Some(&lead) = modulus.last() else {
            return domain("empty modulus polynomial");
        };
        let k = modulus.len() - 1;
        if k == 0 || lead != 1 {
            return domain("modulus must be monic of degree at least 1");
        }
        if modulus.iter().any(|&c| c >= p) {
            return domain(format!("modulus coefficients must lie in [0, {p})"));
        }
        if k == 1 {
            return Ok(base);
        }
        let q = (p as u128).checked_pow(k as u32).filter(|&q| q <= MAX_ORDER);
        let Some(q) = q else {
            return Err(Error::Range { what: format!("{p}^{k}"), value: u128::MAX, cap: MAX_ORDER });
        };
        let poly = Poly::new(modulus.iter().map(|&c| FqElement(c)).collect());
        if !factor::is_irreducible(&base, &poly)? {
            return domain(format!("modulus {modulus:?} is reducible over Z_{p}"));
        }
        Ok(FieldSpec { p, k: k as u32, modulus: Some(modulus), q: q as u64 })
    }

    /// `F_{p^k}` with the modulus chosen by [`find_irreducible`].
    pub fn extension(p: u64, k: u32, seed: u64) -> Result<Self> {
        if k == 1 {
            return FieldSpec::prime(p);
        }
        let modulus = find_irreducible(p, k, seed)?;
        FieldSpec::with_modulus(p, modulus)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> Option<&[u64]> {
        self.modulus.as_deref()
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    pub fn contains(&self, x: FqElement) -> bool {
        x.0 < self.q
    }

    fn check(&self, x: FqElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::Mismatch(format!("element {} is not in F_{}", x.0, self.q)))
        }
    }

    /// Element with packed value `value`, validated.
    pub fn element(&self, value: u64) -> Result<FqElement> {
        let x = FqElement(value);
        self.check(x)?;
        Ok(x)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, value: i128) -> FqElement {
        FqElement(numth::normalize(value, self.p))
    }

    /// Element with the given `y`-coefficients (ascending, at most `k` of them).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FqElement> {
        if coeffs.len() > self.k as usize || coeffs.iter().any(|&c| c >= self.p) {
            return domain(format!("{coeffs:?} is not a coefficient vector of F_{}", self.q));
        }
        Ok(self.pack(coeffs))
    }

    /// Length-`k` coefficient vector of `x`.
    pub fn coeffs(&self, x: FqElement) -> Vec<u64> {
        let mut v = x.0;
        (0..self.k)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    fn pack(&self, coeffs: &[u64]) -> FqElement {
        FqElement(coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c))
    }

    pub fn add(&self, x: FqElement, y: FqElement) -> FqElement {
        if self.k == 1 {
            return FqElement(add_mod(x.0, y.0, self.p));
        }
        let (a, b) = (self.coeffs(x), self.coeffs(y));
        let sum: Vec<u64> = a.iter().zip(&b).map(|(&u, &v)| add_mod(u, v, self.p)).collect();
        self.pack(&sum)
    }

    pub fn neg(&self, x: FqElement) -> FqElement {
        if self.k == 1 {
            return FqElement(sub_mod(0, x.0, self.p));
        }
        let a: Vec<u64> = self.coeffs(x).into_iter().map(|c| sub_mod(0, c, self.p)).collect();
        self.pack(&a)
    }

    pub fn sub(&self, x: FqElement, y: FqElement) -> FqElement {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: FqElement, y: FqElement) -> FqElement {
        let Some(modulus) = &self.modulus else {
            return FqElement(mul_mod(x.0, y.0, self.p));
        };
        let p = self.p;
        let k = self.k as usize;
        let (a, b) = (self.coeffs(x), self.coeffs(y));
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &u) in a.iter().enumerate().filter(|(_, &u)| u != 0) {
            for (j, &v) in b.iter().enumerate() {
                prod[i + j] = add_mod(prod[i + j], mul_mod(u, v, p), p);
            }
        }
        for top in (k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for (j, &g) in modulus[..k].iter().enumerate() {
                let idx = top - k + j;
                prod[idx] = sub_mod(prod[idx], mul_mod(c, g, p), p);
            }
        }
        self.pack(&prod[..k])
    }

    pub fn pow(&self, x: FqElement, mut e: u64) -> FqElement {
        let mut acc = FqElement::ONE;
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: FqElement) -> Result<FqElement> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.k == 1 {
            return numth::inv_mod(x.0, self.p).map(FqElement).ok_or(Error::DivisionByZero);
        }
        Ok(self.pow(x, self.q - 2))
    }

    pub fn div(&self, x: FqElement, y: FqElement) -> Result<FqElement> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// Multiplicative order of a nonzero element, by divisor descent from `q - 1`.
    pub fn order(&self, x: FqElement) -> Result<u64> {
        if x.is_zero() {
            return domain("zero has no multiplicative order");
        }
        numth::order_dividing(self.q - 1, |e| self.pow(x, e) == FqElement::ONE)
    }

    /// All `q` elements, zero first, if `q <= cap`.
    pub fn elements(&self, cap: u64) -> Result<impl Iterator<Item = FqElement>> {
        check_cap("field order", self.q as u128, cap as u128)?;
        Ok((0..self.q).map(FqElement))
    }

    /// Human-readable form: the residue for prime fields, a polynomial in `a` otherwise.
    pub fn render(&self, x: FqElement) -> String {
        if self.k == 1 {
            return x.0.to_string();
        }
        let coeffs = self.coeffs(x);
        let terms: Vec<String> = coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "a".to_string(),
                (1, c) => format!("{c}a"),
                (i, 1) => format!("a^{i}"),
                (i, c) => format!("{c}a^{i}"),
            })
            .collect();
        match terms.len() {
            0 => "0".to_string(),
            1 => terms[0].clone(),
            _ => format!("({})", terms.join("+")),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.modulus {
            None => write!(f, "F_{}", self.p),
            Some(m) => {
                let poly = Poly::new(m.iter().map(|&c| FqElement(c)).collect());
                let base = FieldSpec::prime(self.p).map_err(|_| fmt::Error)?;
                write!(f, "F_{}^{} = Z_{}[a]/({})", self.p, self.k, self.p, poly.render(&base, "a"))
            }
        }
    }
}

/// A monic irreducible polynomial of degree `k` over `Z_p` (ascending coefficients).
///
/// Candidates are scanned in order of the packed value of their lower `k`
/// coefficients, starting at `seed` and wrapping around, so the result only
/// depends on `(p, k, seed)`. For `k = 1` the answer is always `x`.
pub fn find_irreducible(p: u64, k: u32, seed: u64) -> Result<Vec<u64>> {
    let base = FieldSpec::prime(p)?;
    if k == 0 {
        return domain("degree must be at least 1");
    }
    if k == 1 {
        return Ok(vec![0, 1]);
    }
    let count = (p as u128).checked_pow(k).filter(|&c| c <= MAX_ORDER).ok_or_else(|| Error::Range {
        what: format!("{p}^{k}"),
        value: u128::MAX,
        cap: MAX_ORDER,
    })?;
    for i in 0..count {
        let mut idx = (seed as u128 + i) % count;
        let mut coeffs = Vec::with_capacity(k as usize + 1);
        for _ in 0..k {
            coeffs.push((idx % p as u128) as u64);
            idx /= p as u128;
        }
        coeffs.push(1);
        if coeffs[0] == 0 {
            continue;
        }
        let poly = Poly::new(coeffs.iter().map(|&c| FqElement(c)).collect());
        if factor::is_irreducible(&base, &poly)? {
            return Ok(coeffs);
        }
    }
    Err(Error::Inconsistent(format!("no irreducible polynomial of degree {k} over Z_{p}")))
}

fn check_pair(spec: &FieldSpec, x: FqElement, y: FqElement) -> Result<()> {
    spec.check(x)?;
    spec.check(y)
}

pub fn ff_add(spec: &FieldSpec, x: FqElement, y: FqElement) -> Result<FqElement> {
    check_pair(spec, x, y)?;
    Ok(spec.add(x, y))
}

pub fn ff_sub(spec: &FieldSpec, x: FqElement, y: FqElement) -> Result<FqElement> {
    check_pair(spec, x, y)?;
    Ok(spec.sub(x, y))
}

pub fn ff_mul(spec: &FieldSpec, x: FqElement, y: FqElement) -> Result<FqElement> {
    check_pair(spec, x, y)?;
    Ok(spec.mul(x, y))
}

pub fn ff_inv(spec: &FieldSpec, x: FqElement) -> Result<FqElement> {
    spec.check(x)?;
    spec.inv(x)
}

/// `x^e` with `0^0 = 1`.
pub fn ff_pow(spec: &FieldSpec, x: FqElement, e: u64) -> Result<FqElement> {
    spec.check(x)?;
    Ok(spec.pow(x, e))
}

pub fn ff_order(spec: &FieldSpec, x: FqElement) -> Result<u64> {
    spec.check(x)?;
    spec.order(x)
}
