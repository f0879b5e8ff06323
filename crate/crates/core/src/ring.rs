//! The radical ring `Z_n[r^(1/m)]`, i.e. `Z_n[x]/(x^m - r)`.
//!
//! An element `a_0 + a_1 s + .. + a_{m-1} s^{m-1}` (with `s^m = r`) is stored
//! as its coefficient vector. Multiplication by a fixed element is the linear
//! map given by its unital matrix; the element is a unit exactly when the
//! determinant of that matrix is a unit mod `n`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_cap, domain, Error, Result};
use crate::numth::{self, add_mod, mul_mod, sub_mod};
use crate::Limits;

/// `(n, m, r)` with `0 <= r < n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingParams {
    pub n: u64,
    pub m: usize,
    pub r: u64,
}

impl RingParams {
    /// Validates `n >= 2`, `m >= 1` and reduces `r` into `[0, n)`.
    pub fn new(n: u64, m: usize, r: i128) -> Result<Self> {
        if n < 2 {
            return domain(format!("n = {n} must be at least 2"));
        }
        if m < 1 {
            return domain("m must be at least 1");
        }
        Ok(RingParams { n, m, r: numth::normalize(r, n) })
    }

    /// Number of elements `n^m`, saturating.
    pub fn size(&self) -> u128 {
        (self.n as u128).checked_pow(self.m as u32).unwrap_or(u128::MAX)
    }

    pub fn zero(&self) -> RingElement {
        RingElement { params: *self, coeffs: vec![0; self.m] }
    }

    pub fn one(&self) -> RingElement {
        self.basis(0)
    }

    /// `s^i` for `0 <= i < m`.
    pub fn basis(&self, i: usize) -> RingElement {
        let mut e = self.zero();
        e.coeffs[i] = 1;
        e
    }

    /// Element from coefficients, each reduced mod `n`.
    pub fn element(&self, coeffs: &[i128]) -> Result<RingElement> {
        if coeffs.len() != self.m {
            return domain(format!("expected {} coefficients, got {}", self.m, coeffs.len()));
        }
        Ok(RingElement { params: *self, coeffs: coeffs.iter().map(|&c| numth::normalize(c, self.n)).collect() })
    }

    /// Element with packed index `idx`: coefficient 0 is the most significant base-`n` digit.
    pub fn element_at(&self, mut idx: u128) -> RingElement {
        let mut coeffs = vec![0u64; self.m];
        for c in coeffs.iter_mut().rev() {
            *c = (idx % self.n as u128) as u64;
            idx /= self.n as u128;
        }
        RingElement { params: *self, coeffs }
    }

    /// Every element in lexicographic order of the coefficient vector, if `n^m <= cap`.
    pub fn elements(&self, cap: u64) -> Result<impl Iterator<Item = RingElement> + '_> {
        check_cap("ring size n^m", self.size(), cap as u128)?;
        Ok((0..self.size()).map(move |i| self.element_at(i)))
    }

    /// The same `(m, r)` over `Z_modulus` for a divisor `modulus` of `n`.
    pub fn project(&self, modulus: u64) -> Result<RingParams> {
        if modulus < 2 || !self.n.is_multiple_of(modulus) {
            return domain(format!("{modulus} is not a nontrivial divisor of {}", self.n));
        }
        RingParams::new(modulus, self.m, self.r as i128)
    }
}

impl fmt::Display for RingParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}[{}^(1/{})]", self.n, self.r, self.m)
    }
}

/// A ring element. JSON form: `{"n":5,"m":2,"r":4,"coeffs":[3,4]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingElement {
    #[serde(flatten)]
    pub params: RingParams,
    pub coeffs: Vec<u64>,
}

impl RingElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn same_ring(&self, other: &RingElement) -> Result<()> {
        if self.params != other.params {
            return Err(Error::Mismatch(format!("{} vs {}", self.params, other.params)));
        }
        Ok(())
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.same_ring(other)?;
        let n = self.params.n;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| add_mod(a, b, n)).collect();
        Ok(RingElement { params: self.params, coeffs })
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.same_ring(other)?;
        let n = self.params.n;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| sub_mod(a, b, n)).collect();
        Ok(RingElement { params: self.params, coeffs })
    }

    /// Product by the power rule `s^i s^j = s^(i+j)` if `i + j < m`, else `r s^(i+j-m)`.
    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        self.same_ring(other)?;
        let RingParams { n, m, r } = self.params;
        if n < 1 << 30 && m <= 16 {
            // at most 16 products below 2^60 per slot: no reduction until the end
            let (mut low, mut high) = (vec![0u64; m], vec![0u64; m]);
            for (i, &a) in self.coeffs.iter().enumerate() {
                for (j, &b) in other.coeffs.iter().enumerate() {
                    if i + j < m {
                        low[i + j] += a * b;
                    } else {
                        high[i + j - m] += a * b;
                    }
                }
            }
            let coeffs = low.iter().zip(&high).map(|(&l, &h)| (l % n + r * (h % n)) % n).collect();
            return Ok(RingElement { params: self.params, coeffs });
        }
        let mut out = vec![0u64; m];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let t = mul_mod(a, b, n);
                if i + j < m {
                    out[i + j] = add_mod(out[i + j], t, n);
                } else {
                    let k = i + j - m;
                    out[k] = add_mod(out[k], mul_mod(r, t, n), n);
                }
            }
        }
        Ok(RingElement { params: self.params, coeffs: out })
    }

    /// Product computed as polynomials of degree `< m`, followed by repeated
    /// substitution `x^m -> r` from the top degree down.
    pub fn mul_poly_oracle(&self, other: &RingElement) -> Result<RingElement> {
        self.same_ring(other)?;
        let RingParams { n, m, r } = self.params;
        let mut full = vec![0u64; 2 * m - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                full[i + j] = add_mod(full[i + j], mul_mod(a, b, n), n);
            }
        }
        while full.len() > m {
            let top = full.pop().unwrap();
            let deg = full.len();
            full[deg - m] = add_mod(full[deg - m], mul_mod(top, r, n), n);
        }
        Ok(RingElement { params: self.params, coeffs: full })
    }

    /// The matrix of `b -> a*b` on the basis `1, s, .., s^{m-1}`.
    pub fn unital_matrix(&self) -> UnitalMatrix {
        let RingParams { n, m, r } = self.params;
        let entries = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let a = self.coeffs[(i + m - j) % m];
                        if i < j {
                            mul_mod(a, r, n)
                        } else {
                            a
                        }
                    })
                    .collect()
            })
            .collect();
        UnitalMatrix { params: self.params, entries }
    }

    /// Determinant of the unital matrix, reduced mod `n`.
    pub fn unital_det(&self) -> u64 {
        self.unital_matrix().det()
    }

    /// `gcd(unital_det, n) == 1`.
    pub fn is_unit(&self) -> bool {
        numth::gcd(self.unital_det(), self.params.n) == 1
    }

    /// Inverse as `delta^{-1} adj(A) e_0`: the first column of the adjugate
    /// holds the cofactors of the first row of `A`.
    pub fn inverse(&self) -> Result<RingElement> {
        let matrix = self.unital_matrix();
        let n = self.params.n;
        let delta = matrix.det();
        let Some(delta_inv) = numth::inv_mod(delta, n) else {
            return Err(Error::NotInvertible { delta, gcd: numth::gcd(delta, n) });
        };
        let m = self.params.m;
        let coeffs = (0..m)
            .map(|i| {
                let minor = integer_det(&matrix.minor(0, i));
                let cofactor = if i % 2 == 0 { minor } else { -minor };
                mul_mod(reduce_big(&cofactor, n), delta_inv, n)
            })
            .collect();
        Ok(RingElement { params: self.params, coeffs })
    }

    /// A nonzero `b` with `a*b = 0`, searched in lexicographic order.
    pub fn zero_divisor_witness(&self, limits: &Limits) -> Result<Witness> {
        if self.is_zero() {
            return domain("zero has no meaningful zero-divisor witness");
        }
        if self.is_unit() {
            return Ok(Witness::Unit);
        }
        if self.params.size() > limits.witness_cap as u128 {
            return Ok(Witness::NotSearched);
        }
        for idx in 1..self.params.size() {
            let b = self.params.element_at(idx);
            if self.mul(&b)?.is_zero() {
                return Ok(Witness::Found(b));
            }
        }
        Err(Error::Inconsistent(format!("non-unit {self} has no annihilator")))
    }

    /// The image of this element in `Z_modulus[s]` for a divisor `modulus` of `n`.
    pub fn project(&self, modulus: u64) -> Result<RingElement> {
        let params = self.params.project(modulus)?;
        Ok(RingElement { params, coeffs: self.coeffs.iter().map(|&c| c % modulus).collect() })
    }

    /// Comma-separated coefficients, e.g. `3,4`.
    pub fn to_text(&self) -> String {
        self.coeffs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) in {}", self.to_text(), self.params)
    }
}

/// Parses the element text format: comma-separated integers, ascending powers.
pub fn parse_coeffs(text: &str) -> Result<Vec<i128>> {
    text.split(',').map(|s| s.trim().parse::<i128>().map_err(|_| Error::Domain(format!("bad coefficient list {text:?}")))).collect()
}

/// Outcome of a zero-divisor search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// The element is a unit; no witness exists.
    Unit,
    /// A nonzero annihilator.
    Found(RingElement),
    /// The element is not a unit but the ring is above the search cap.
    NotSearched,
}

/// Unital matrix: `entry(i, j) = a_{(i-j) mod m} * (r if i < j else 1)` mod `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitalMatrix {
    pub params: RingParams,
    pub entries: Vec<Vec<u64>>,
}

impl UnitalMatrix {
    pub fn det(&self) -> u64 {
        reduce_big(&integer_det(&self.entries), self.params.n)
    }

    /// Product mod `n`.
    pub fn mul(&self, other: &UnitalMatrix) -> Result<UnitalMatrix> {
        if self.params != other.params {
            return Err(Error::Mismatch(format!("{} vs {}", self.params, other.params)));
        }
        let RingParams { n, m, .. } = self.params;
        let entries = (0..m)
            .map(|i| {
                (0..m).map(|j| (0..m).fold(0, |acc, k| add_mod(acc, mul_mod(self.entries[i][k], other.entries[k][j], n), n))).collect()
            })
            .collect();
        Ok(UnitalMatrix { params: self.params, entries })
    }

    fn minor(&self, row: usize, col: usize) -> Vec<Vec<u64>> {
        self.entries
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != row)
            .map(|(_, r)| r.iter().enumerate().filter(|&(j, _)| j != col).map(|(_, &v)| v).collect())
            .collect()
    }
}

fn reduce_big(v: &BigInt, n: u64) -> u64 {
    let r = v % BigInt::from(n);
    let r = if r.is_negative() { r + BigInt::from(n) } else { r };
    r.to_u64().expect("residue fits in u64")
}

/// Exact integer determinant by fraction-free (Bareiss) elimination.
///
/// Runs in `i128` and restarts with big integers on the first overflow.
pub fn integer_det(rows: &[Vec<u64>]) -> BigInt {
    let size = rows.len();
    if size == 0 {
        return BigInt::from(1);
    }
    let small: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    if let Some(d) = bareiss_i128(small) {
        return BigInt::from(d);
    }
    let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    bareiss_big(big)
}

fn bareiss_i128(mut a: Vec<Vec<i128>>) -> Option<i128> {
    let size = a.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..size {
        if a[k][k] == 0 {
            let Some(swap) = (k + 1..size).find(|&i| a[i][k] != 0) else {
                return Some(0);
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = a[i][j].checked_mul(a[k][k])?.checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = num / prev;
            }
        }
        prev = a[k][k];
    }
    Some(sign * a[size - 1][size - 1])
}

fn bareiss_big(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let size = a.len();
    let mut negate = false;
    let mut prev = BigInt::from(1);
    for k in 0..size {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..size).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            negate = !negate;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[size - 1][size - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Number of units, by testing every element.
pub fn unit_count(params: &RingParams, limits: &Limits) -> Result<u64> {
    Ok(params.elements(limits.enum_cap)?.filter(RingElement::is_unit).count() as u64)
}
