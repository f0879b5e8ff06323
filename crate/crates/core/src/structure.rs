//! Structural verdicts about `Z_n[r^(1/m)]` and `F_q[r^(1/m)]`.
//!
//! Field/domain classification, power maps, the Gaussian case `m = 2, r = -1`,
//! equal-degree splitting of `x^m - r` when `m | q - 1`, and the count of
//! `r` making `x^m - r` irreducible.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{check_cap, domain, Error, Result};
use crate::factor::{self, Poly};
use crate::gfq::{FieldSpec, FqElement};
use crate::numth;
use crate::Limits;

/// Why a ring is or is not a field. Serialized with a `code` tag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "code", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Reason {
    /// `n` is not prime; `divisor` is its least prime factor.
    CompositeN { divisor: u64 },
    /// `x^m - r` has the proper monic factor `factor` (ascending coefficients) over `Z_p`.
    BinomialReducible { factor: Vec<u64> },
    /// `n` is prime and `x^m - r` is irreducible over `Z_n`.
    IrreducibleOverPrime,
    /// For `m` in {2, 3}: whether `r` is an m-th power (`root`), which must
    /// coincide with reducibility.
    RootCriterion { root: Option<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldVerdict {
    pub n: u64,
    pub m: usize,
    pub r: u64,
    pub is_field: bool,
    pub is_domain: bool,
    pub reasons: Vec<Reason>,
}

/// The k-th power map image `{a^k : a in F_q}`.
pub fn power_map_image(spec: &FieldSpec, k: u64, cap: u64) -> Result<BTreeSet<FqElement>> {
    Ok(spec.elements(cap)?.map(|a| spec.pow(a, k)).collect())
}

/// Whether `a -> a^m` is onto `Z_p`: `gcd(p - 1, m) = 1`.
pub fn power_map_onto(p: u64, m: u64) -> Result<bool> {
    if !numth::is_prime(p) {
        return domain(format!("{p} is not prime"));
    }
    Ok(numth::gcd(p - 1, m) == 1)
}

/// Some `a` with `a^m = r`, i.e. a linear factor `x - a` of `x^m - r`.
pub fn has_linear_factor(spec: &FieldSpec, m: u64, r: FqElement, cap: u64) -> Result<Option<FqElement>> {
    spec.element(r.0)?;
    Ok(spec.elements(cap)?.find(|&a| spec.pow(a, m) == r))
}

/// Field verdict for `Z_n[r^(1/m)]`.
pub fn is_field(n: u64, m: usize, r: i128, limits: &Limits) -> Result<FieldVerdict> {
    if n < 2 || m < 1 {
        return domain(format!("invalid ring parameters n = {n}, m = {m}"));
    }
    let r = numth::normalize(r, n);
    let mut reasons = Vec::new();
    let mut is_field = false;
    if !numth::is_prime(n) {
        let divisor = numth::factorize(n)?.factors[0].prime;
        reasons.push(Reason::CompositeN { divisor });
    } else {
        let field = FieldSpec::prime(n)?;
        let binomial = Poly::binomial(&field, m, FqElement(r));
        let report = factor::factor_monic(&field, &binomial, 0)?;
        is_field = report.is_irreducible();
        if is_field {
            reasons.push(Reason::IrreducibleOverPrime);
        } else {
            reasons.push(Reason::BinomialReducible { factor: report.factors[0].poly.to_u64s() });
        }
        if (m == 2 || m == 3) && n <= limits.enum_cap {
            let root = has_linear_factor(&field, m as u64, FqElement(r), limits.enum_cap)?;
            if root.is_some() == is_field {
                return Err(Error::Inconsistent(format!("root criterion disagrees with factorization for x^{m} - {r} over Z_{n}")));
            }
            reasons.push(Reason::RootCriterion { root: root.map(|a| a.0) });
        }
    }
    Ok(FieldVerdict { n, m, r, is_field, is_domain: is_field, reasons })
}

/// A nonzero `(a0, a1, a2)` with `a0^3 + r a1^3 + r^2 a2^3 - 3 r a0 a1 a2 = 0 (mod p)`,
/// first in lexicographic order.
pub fn cubic_form_has_nontrivial_zero(p: u64, r: i128, cap: u64) -> Result<Option<(u64, u64, u64)>> {
    if !numth::is_prime(p) {
        return domain(format!("{p} is not prime"));
    }
    check_cap("p^3", (p as u128).pow(3), cap as u128)?;
    let r = numth::normalize(r, p);
    for a0 in 0..p {
        for a1 in 0..p {
            for a2 in 0..p {
                if (a0, a1, a2) != (0, 0, 0) && cubic_form(p, r, (a0, a1, a2)) == 0 {
                    return Ok(Some((a0, a1, a2)));
                }
            }
        }
    }
    Ok(None)
}

/// `a0^3 + r a1^3 + r^2 a2^3 - 3 r a0 a1 a2 mod p`.
pub fn cubic_form(p: u64, r: u64, (a0, a1, a2): (u64, u64, u64)) -> u64 {
    use numth::{add_mod, mul_mod, pow_mod, sub_mod};
    let r2 = mul_mod(r, r, p);
    let pos = add_mod(add_mod(pow_mod(a0, 3, p), mul_mod(r, pow_mod(a1, 3, p), p), p), mul_mod(r2, pow_mod(a2, 3, p), p), p);
    let cross = mul_mod(mul_mod(3 % p, r, p), mul_mod(a0, mul_mod(a1, a2, p), p), p);
    sub_mod(pos, cross, p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PythagoreanClass {
    pub p: u64,
    pub is_pythagorean: bool,
    pub zp_i_is_field: bool,
}

/// `p` is Pythagorean iff `p = 2` or `p = 1 mod 4`; then `Z_p[i]` is not a field.
pub fn pythagorean_class(p: u64, limits: &Limits) -> Result<PythagoreanClass> {
    if !numth::is_prime(p) {
        return domain(format!("{p} is not prime"));
    }
    let is_pythagorean = p == 2 || p % 4 == 1;
    let verdict = is_field(p, 2, -1, limits)?;
    if verdict.is_field == is_pythagorean {
        return Err(Error::Inconsistent(format!("Z_{p}[i] field verdict contradicts p mod 4")));
    }
    Ok(PythagoreanClass { p, is_pythagorean, zp_i_is_field: !is_pythagorean })
}

/// Shape of the factorization of `x^m - r` over `F_q` when `m | q - 1`:
/// `factor_count` irreducible factors, each of degree `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingType {
    pub q: u64,
    pub m: u64,
    pub r: FqElement,
    pub ord_r: u64,
    pub t: u64,
    pub factor_count: u64,
}

fn check_root_of_unity_hypothesis(spec: &FieldSpec, m: u64, r: FqElement) -> Result<()> {
    spec.element(r.0)?;
    if m < 1 {
        return domain("m must be at least 1");
    }
    if r.is_zero() {
        return domain("r must be nonzero");
    }
    if !(spec.q() - 1).is_multiple_of(m) {
        return Err(Error::Hypothesis(format!("m = {m} does not divide q - 1 = {}", spec.q() - 1)));
    }
    Ok(())
}

/// `t = ord_{ord(r) m}(q)`, the least `t` with `ord(r) m | q^t - 1`.
pub fn splitting_type(spec: &FieldSpec, m: u64, r: FqElement) -> Result<SplittingType> {
    check_root_of_unity_hypothesis(spec, m, r)?;
    let ord_r = spec.order(r)?;
    let modulus = ord_r.checked_mul(m).ok_or_else(|| Error::Range {
        what: "ord(r) * m".into(),
        value: ord_r as u128 * m as u128,
        cap: u64::MAX as u128,
    })?;
    let t = if modulus == 1 { 1 } else { numth::mult_order(spec.q() % modulus, modulus)? };
    if !m.is_multiple_of(t) {
        return Err(Error::Inconsistent(format!("t = {t} does not divide m = {m}")));
    }
    Ok(SplittingType { q: spec.q(), m, r, ord_r, t, factor_count: m / t })
}

/// `F_q[r^(1/m)] = F_{q^t}^{copies}`, with `(q^t - 1)^copies` units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingDecomposition {
    pub t: u64,
    pub copies: u64,
    pub unit_count_prediction: u64,
}

pub fn ring_decomposition(spec: &FieldSpec, m: u64, r: FqElement) -> Result<RingDecomposition> {
    let split = splitting_type(spec, m, r)?;
    let overflow = || Error::Range { what: "predicted unit count".into(), value: u128::MAX, cap: u64::MAX as u128 };
    let field_units = spec.q().checked_pow(split.t as u32).ok_or_else(overflow)? - 1;
    let unit_count_prediction = field_units.checked_pow(split.factor_count as u32).ok_or_else(overflow)?;
    Ok(RingDecomposition { t: split.t, copies: split.factor_count, unit_count_prediction })
}

/// k-th power images for every divisor `k > 1` of `m`.
fn power_images(spec: &FieldSpec, m: u64, cap: u64) -> Result<Vec<BTreeSet<FqElement>>> {
    numth::divisors(m)?.into_iter().filter(|&k| k > 1).map(|k| power_map_image(spec, k, cap)).collect()
}

/// Whether `x^m - r` is irreducible, decided by power-map membership:
/// irreducible iff `r` is not a k-th power for any `k | m`, `k > 1`.
///
/// Above the enumeration cap membership is decided by `r^((q-1)/k) = 1`.
pub fn irreducible_binomial(spec: &FieldSpec, m: u64, r: FqElement, cap: u64) -> Result<bool> {
    check_root_of_unity_hypothesis(spec, m, r)?;
    if spec.q() <= cap {
        let images = power_images(spec, m, cap)?;
        return Ok(images.iter().all(|img| !img.contains(&r)));
    }
    let q1 = spec.q() - 1;
    Ok(numth::divisors(m)?.into_iter().filter(|&k| k > 1).all(|k| spec.pow(r, q1 / k) != FqElement::ONE))
}

/// Predicted and (when enumerable) observed number of `r` in `F_q^*` with `x^m - r` irreducible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub q: u64,
    pub m: u64,
    #[serde(rename = "M")]
    pub big_m: u64,
    pub predicted: u64,
    pub enumerated: Option<u64>,
}

impl CountReport {
    pub fn matches(&self) -> Option<bool> {
        self.enumerated.map(|e| e == self.predicted)
    }
}

/// `M = prod_{l | m} l^{v_l(q - 1)}`, checked against its defining properties.
pub fn counting_modulus(q: u64, m: u64) -> Result<u64> {
    if m < 1 || !(q - 1).is_multiple_of(m) {
        return Err(Error::Hypothesis(format!("m = {m} does not divide q - 1 = {}", q - 1)));
    }
    let big_m: u64 = if m == 1 { 1 } else { numth::factorize(m)?.primes().map(|l| l.pow(numth::valuation(q - 1, l))).product() };
    let cofactor = (q - 1) / big_m;
    let ok = big_m.is_multiple_of(m) && numth::rad(big_m)? == numth::rad(m)? && numth::gcd(big_m, cofactor) == 1;
    if !ok {
        return Err(Error::Inconsistent(format!("M = {big_m} violates its defining conditions for q = {q}, m = {m}")));
    }
    Ok(big_m)
}

pub fn count_irreducible(spec: &FieldSpec, m: u64, limits: &Limits) -> Result<CountReport> {
    let q = spec.q();
    let big_m = counting_modulus(q, m)?;
    let predicted = numth::euler_phi(big_m)? * ((q - 1) / big_m);
    let enumerated = if q <= limits.enum_cap {
        let images = power_images(spec, m, limits.enum_cap)?;
        let count = spec.elements(limits.enum_cap)?.skip(1).filter(|r| images.iter().all(|img| !img.contains(r))).count();
        Some(count as u64)
    } else {
        None
    };
    Ok(CountReport { q, m, big_m, predicted, enumerated })
}

/// `(d, b)` with `d` a prime divisor of `m`, `d` not dividing `q - 1` and
/// `b^d = r`, so `x^{m/d} - b` divides `x^m - r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquarefreeCertificate {
    pub d: u64,
    pub b: FqElement,
}

impl SquarefreeCertificate {
    /// `x^{m/d} - b`.
    pub fn factor(&self, spec: &FieldSpec, m: u64) -> Poly {
        Poly::binomial(spec, (m / self.d) as usize, self.b)
    }
}

pub fn squarefree_reducible(spec: &FieldSpec, m: u64, r: FqElement) -> Result<SquarefreeCertificate> {
    spec.element(r.0)?;
    if m < 2 || !numth::is_squarefree(m)? {
        return domain(format!("m = {m} must be squarefree and at least 2"));
    }
    if r.is_zero() {
        return domain("r must be nonzero");
    }
    let q1 = spec.q() - 1;
    if q1.is_multiple_of(m) {
        return domain(format!("m = {m} divides q - 1 = {q1}"));
    }
    let d = numth::factorize(m)?
        .primes()
        .find(|&d| !q1.is_multiple_of(d))
        .ok_or_else(|| Error::Inconsistent(format!("no prime of squarefree {m} avoids {q1}")))?;
    let e = numth::inv_mod(d % q1.max(1), q1.max(1)).unwrap_or(0);
    let b = spec.pow(r, e);
    if spec.pow(b, d) != r {
        return Err(Error::Inconsistent(format!("{b}^{d} != {r}")));
    }
    Ok(SquarefreeCertificate { d, b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{unit_count, RingParams};

    fn zp(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn limits() -> Limits {
        Limits::default()
    }

    fn set(v: &[u64]) -> BTreeSet<FqElement> {
        v.iter().map(|&x| FqElement(x)).collect()
    }

    #[test]
    fn power_map_examples() {
        assert_eq!(power_map_image(&zp(5), 2, 100).unwrap(), set(&[0, 1, 4]));
        assert_eq!(power_map_image(&zp(7), 3, 100).unwrap(), set(&[0, 1, 6]));
        assert_eq!(power_map_image(&zp(11), 1, 100).unwrap().len(), 11);
        assert!(power_map_onto(5, 3).unwrap());
        assert!(!power_map_onto(7, 3).unwrap());
        assert!(power_map_onto(7, 1).unwrap());
        assert!(power_map_onto(9, 2).is_err());
        assert_eq!(power_map_image(&zp(5), 3, 100).unwrap().len(), 5);
    }

    #[test]
    fn linear_factor_examples() {
        let a = has_linear_factor(&zp(5), 2, FqElement(4), 100).unwrap().unwrap();
        assert!(a == FqElement(2) || a == FqElement(3));
        assert_eq!(has_linear_factor(&zp(7), 3, FqElement(2), 100).unwrap(), None);
        assert_eq!(has_linear_factor(&zp(13), 3, FqElement(5), 100).unwrap(), Some(FqElement(7)));
        assert!(has_linear_factor(&zp(13), 3, FqElement(5), 5).is_err());
    }

    #[test]
    fn field_examples() {
        let v = is_field(5, 2, -1, &limits()).unwrap();
        assert!(!v.is_field && !v.is_domain);
        assert_eq!(v.reasons[0], Reason::BinomialReducible { factor: vec![2, 1] });
        assert_eq!(v.reasons[1], Reason::RootCriterion { root: Some(2) });
        let v = is_field(3, 2, 2, &limits()).unwrap();
        assert!(v.is_field);
        assert!(v.reasons.contains(&Reason::IrreducibleOverPrime));
        let v = is_field(12, 2, 5, &limits()).unwrap();
        assert!(!v.is_field);
        assert_eq!(v.reasons, vec![Reason::CompositeN { divisor: 2 }]);
        assert!(is_field(1, 2, 0, &limits()).is_err());
    }

    #[test]
    fn verdict_json() {
        let v = is_field(12, 2, 5, &limits()).unwrap();
        let json = serde_json::to_string(&v).unwrap();
        assert!(json.contains(r#""reasons":[{"code":"COMPOSITE_N","divisor":2}]"#), "{json}");
        assert_eq!(serde_json::from_str::<FieldVerdict>(&json).unwrap(), v);
    }

    #[test]
    fn cubic_form_examples() {
        assert_eq!(cubic_form(7, 6, (1, 1, 0)), 0);
        assert!(cubic_form_has_nontrivial_zero(7, 6, 1000).unwrap().is_some());
        assert_eq!(cubic_form_has_nontrivial_zero(7, 2, 1000).unwrap(), None);
        for r in 1..5 {
            let w = cubic_form_has_nontrivial_zero(5, r, 1000).unwrap().unwrap();
            assert_ne!(w, (0, 0, 0));
            assert_eq!(cubic_form(5, r as u64, w), 0);
        }
        // explicit witness (-b, 1, 0) for r = b^3
        for p in [5u64, 7, 11, 13] {
            for b in 1..p {
                let r = numth::pow_mod(b, 3, p);
                assert_eq!(cubic_form(p, r, (p - b, 1, 0)), 0);
            }
        }
        assert!(cubic_form_has_nontrivial_zero(13, 2, 1000).is_err());
    }

    #[test]
    fn pythagorean_examples() {
        let c = |p| pythagorean_class(p, &limits()).unwrap();
        assert_eq!((c(5).is_pythagorean, c(5).zp_i_is_field), (true, false));
        assert_eq!((c(7).is_pythagorean, c(7).zp_i_is_field), (false, true));
        assert_eq!((c(2).is_pythagorean, c(2).zp_i_is_field), (true, false));
        assert!(pythagorean_class(9, &limits()).is_err());
    }

    #[test]
    fn splitting_examples() {
        let s = splitting_type(&zp(7), 3, FqElement(2)).unwrap();
        assert_eq!((s.ord_r, s.t, s.factor_count), (3, 3, 1));
        let s = splitting_type(&zp(13), 3, FqElement(5)).unwrap();
        assert_eq!((s.ord_r, s.t, s.factor_count), (4, 1, 3));
        // 2 is a quadratic non-residue mod 13
        let s = splitting_type(&zp(13), 2, FqElement(2)).unwrap();
        assert_eq!((s.t, s.factor_count), (2, 1));
        assert!(matches!(splitting_type(&zp(5), 3, FqElement(2)), Err(Error::Hypothesis(_))));
        assert!(matches!(splitting_type(&zp(7), 3, FqElement(0)), Err(Error::Domain(_))));
    }

    #[test]
    fn decomposition_examples() {
        let d = ring_decomposition(&zp(13), 3, FqElement(5)).unwrap();
        assert_eq!(d, RingDecomposition { t: 1, copies: 3, unit_count_prediction: 1728 });
        let d = ring_decomposition(&zp(7), 2, FqElement(3)).unwrap();
        assert_eq!(d, RingDecomposition { t: 2, copies: 1, unit_count_prediction: 48 });
        let d = ring_decomposition(&zp(5), 2, FqElement(4)).unwrap();
        assert_eq!(d, RingDecomposition { t: 1, copies: 2, unit_count_prediction: 16 });
        for (p, m, r) in [(13u64, 3usize, 5i128), (7, 2, 3), (5, 2, 4)] {
            let params = RingParams::new(p, m, r).unwrap();
            let d = ring_decomposition(&zp(p), m as u64, FqElement(r as u64)).unwrap();
            assert_eq!(unit_count(&params, &limits()).unwrap(), d.unit_count_prediction);
        }
    }

    #[test]
    fn irreducible_binomial_examples() {
        assert!(irreducible_binomial(&zp(7), 3, FqElement(3), 100).unwrap());
        assert!(!irreducible_binomial(&zp(13), 3, FqElement(5), 100).unwrap());
        let squares = power_map_image(&zp(13), 2, 100).unwrap();
        assert_eq!(squares, set(&[0, 1, 3, 4, 9, 10, 12]));
        assert!(irreducible_binomial(&zp(13), 2, FqElement(5), 100).unwrap());
        // exponent criterion above the cap agrees
        for r in 1..13 {
            for m in [2u64, 3, 4, 6, 12] {
                assert_eq!(
                    irreducible_binomial(&zp(13), m, FqElement(r), 100).unwrap(),
                    irreducible_binomial(&zp(13), m, FqElement(r), 5).unwrap()
                );
            }
        }
    }

    #[test]
    fn count_examples() {
        let c = count_irreducible(&zp(13), 3, &limits()).unwrap();
        assert_eq!((c.big_m, c.predicted, c.enumerated), (3, 8, Some(8)));
        let c = count_irreducible(&zp(13), 2, &limits()).unwrap();
        assert_eq!((c.big_m, c.predicted, c.enumerated), (4, 6, Some(6)));
        let c = count_irreducible(&zp(7), 3, &limits()).unwrap();
        assert_eq!((c.big_m, c.predicted, c.enumerated), (3, 4, Some(4)));
        let cubes = power_map_image(&zp(7), 3, 100).unwrap();
        let non_cubes: Vec<u64> = (1..7).filter(|r| !cubes.contains(&FqElement(*r))).collect();
        assert_eq!(non_cubes, vec![2, 3, 4, 5]);
        assert!(matches!(count_irreducible(&zp(7), 4, &limits()), Err(Error::Hypothesis(_))));
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.contains(r#""M":3"#));
    }

    #[test]
    fn squarefree_examples() {
        let c = squarefree_reducible(&zp(5), 3, FqElement(2)).unwrap();
        assert_eq!(c, SquarefreeCertificate { d: 3, b: FqElement(3) });
        let c = squarefree_reducible(&zp(7), 5, FqElement(4)).unwrap();
        assert_eq!(c.d, 5);
        assert_eq!(numth::pow_mod(c.b.0, 5, 7), 4);
        let c = squarefree_reducible(&zp(5), 6, FqElement(2)).unwrap();
        assert_eq!(c.d, 3);
        assert!(squarefree_reducible(&zp(5), 4, FqElement(2)).is_err());
        assert!(squarefree_reducible(&zp(7), 3, FqElement(2)).is_err());
        assert!(squarefree_reducible(&zp(5), 3, FqElement(0)).is_err());
    }
}
