//! Univariate polynomials over `F_q` and their factorization.
//!
//! Two independent routes are provided: [`factor_monic`] (squarefree
//! decomposition, distinct-degree splitting, seeded equal-degree splitting)
//! and [`brute_force_factor`] (trial division by every monic polynomial of
//! degree at most half the input). They must always agree.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_cap, domain, Error, Result};
use crate::gfq::{FieldSpec, FqElement, DEFAULT_ENUM_CAP};
use crate::numth;

/// Dense polynomial, ascending coefficients, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly {
    coeffs: Vec<FqElement>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<FqElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![FqElement::ONE] }
    }

    pub fn x() -> Self {
        Poly { coeffs: vec![FqElement::ZERO, FqElement::ONE] }
    }

    pub fn constant(c: FqElement) -> Self {
        Poly::new(vec![c])
    }

    /// `x^m - r`.
    pub fn binomial(field: &FieldSpec, m: usize, r: FqElement) -> Self {
        let mut coeffs = vec![FqElement::ZERO; m + 1];
        coeffs[m] = FqElement::ONE;
        coeffs[0] = field.sub(coeffs[0], r);
        Poly::new(coeffs)
    }

    pub fn from_u64s(coeffs: &[u64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| FqElement(c)).collect())
    }

    pub fn coeffs(&self) -> &[FqElement] {
        &self.coeffs
    }

    pub fn to_u64s(&self) -> Vec<u64> {
        self.coeffs.iter().map(|c| c.0).collect()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [FqElement::ONE]
    }

    pub fn lead(&self) -> FqElement {
        self.coeffs.last().copied().unwrap_or(FqElement::ZERO)
    }

    pub fn coeff(&self, i: usize) -> FqElement {
        self.coeffs.get(i).copied().unwrap_or(FqElement::ZERO)
    }

    pub fn eval(&self, field: &FieldSpec, x: FqElement) -> FqElement {
        self.coeffs.iter().rev().fold(FqElement::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
    }

    /// Compact rendering such as `x^2+3x+2`, coefficients as residues in `[0, p)`.
    pub fn render(&self, field: &FieldSpec, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !out.is_empty() {
                out.push('+');
            }
            let coeff = field.render(c);
            match i {
                0 => out.push_str(&coeff),
                _ => {
                    if c != FqElement::ONE {
                        out.push_str(&coeff);
                    }
                    out.push_str(var);
                    if i > 1 {
                        out.push_str(&format!("^{i}"));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_u64s())
    }
}

pub fn poly_add(field: &FieldSpec, f: &Poly, g: &Poly) -> Poly {
    let n = f.coeffs.len().max(g.coeffs.len());
    Poly::new((0..n).map(|i| field.add(f.coeff(i), g.coeff(i))).collect())
}

pub fn poly_sub(field: &FieldSpec, f: &Poly, g: &Poly) -> Poly {
    let n = f.coeffs.len().max(g.coeffs.len());
    Poly::new((0..n).map(|i| field.sub(f.coeff(i), g.coeff(i))).collect())
}

pub fn poly_scale(field: &FieldSpec, f: &Poly, c: FqElement) -> Poly {
    Poly::new(f.coeffs.iter().map(|&a| field.mul(a, c)).collect())
}

pub fn poly_mul(field: &FieldSpec, f: &Poly, g: &Poly) -> Poly {
    if f.is_zero() || g.is_zero() {
        return Poly::zero();
    }
    let mut out = vec![FqElement::ZERO; f.coeffs.len() + g.coeffs.len() - 1];
    for (i, &a) in f.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, &b) in g.coeffs.iter().enumerate() {
            out[i + j] = field.add(out[i + j], field.mul(a, b));
        }
    }
    Poly::new(out)
}

/// `(quotient, remainder)` with `f = quotient * g + remainder`, `deg remainder < deg g`.
pub fn poly_divmod(field: &FieldSpec, f: &Poly, g: &Poly) -> Result<(Poly, Poly)> {
    let Some(dg) = g.degree() else {
        return domain("polynomial division by zero");
    };
    let lead_inv = field.inv(g.lead())?;
    let mut rem = f.coeffs.clone();
    if rem.len() <= dg {
        return Ok((Poly::zero(), f.clone()));
    }
    let mut quot = vec![FqElement::ZERO; rem.len() - dg];
    for top in (dg..rem.len()).rev() {
        let c = field.mul(rem[top], lead_inv);
        if c.is_zero() {
            continue;
        }
        quot[top - dg] = c;
        for (j, &b) in g.coeffs.iter().enumerate() {
            let idx = top - dg + j;
            rem[idx] = field.sub(rem[idx], field.mul(c, b));
        }
    }
    rem.truncate(dg);
    Ok((Poly::new(quot), Poly::new(rem)))
}

pub fn poly_rem(field: &FieldSpec, f: &Poly, g: &Poly) -> Result<Poly> {
    Ok(poly_divmod(field, f, g)?.1)
}

/// Exact quotient; errors if `g` does not divide `f`.
fn poly_div_exact(field: &FieldSpec, f: &Poly, g: &Poly) -> Result<Poly> {
    let (q, r) = poly_divmod(field, f, g)?;
    if !r.is_zero() {
        return Err(Error::Inconsistent(format!("{g} does not divide {f}")));
    }
    Ok(q)
}

pub fn monic(field: &FieldSpec, f: &Poly) -> Result<Poly> {
    if f.is_zero() {
        return Ok(Poly::zero());
    }
    Ok(poly_scale(field, f, field.inv(f.lead())?))
}

/// Monic greatest common divisor.
pub fn poly_gcd(field: &FieldSpec, f: &Poly, g: &Poly) -> Result<Poly> {
    if f.is_zero() && g.is_zero() {
        return domain("gcd(0, 0) is undefined");
    }
    let (mut a, mut b) = (f.clone(), g.clone());
    while !b.is_zero() {
        let r = poly_rem(field, &a, &b)?;
        a = b;
        b = r;
    }
    monic(field, &a)
}

/// `base^e mod modulus` by repeated squaring.
pub fn poly_powmod(field: &FieldSpec, base: &Poly, mut e: u64, modulus: &Poly) -> Result<Poly> {
    if modulus.degree().unwrap_or(0) == 0 {
        return domain("modulus must have degree at least 1");
    }
    let mut acc = poly_rem(field, &Poly::one(), modulus)?;
    let mut b = poly_rem(field, base, modulus)?;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(field, &poly_mul(field, &acc, &b), modulus)?;
        }
        b = poly_rem(field, &poly_mul(field, &b, &b), modulus)?;
        e >>= 1;
    }
    Ok(acc)
}

/// Formal derivative.
pub fn derivative(field: &FieldSpec, f: &Poly) -> Poly {
    Poly::new(f.coeffs.iter().enumerate().skip(1).map(|(i, &c)| field.mul(field.from_int(i as i128), c)).collect())
}

/// All `a` in `F_q` with `f(a) = 0`, increasing, by direct evaluation.
pub fn roots(field: &FieldSpec, f: &Poly, cap: u64) -> Result<Vec<FqElement>> {
    if f.is_zero() {
        return domain("every element is a root of the zero polynomial");
    }
    Ok(field.elements(cap)?.filter(|&a| f.eval(field, a).is_zero()).collect())
}

/// Irreducibility over `F_q`.
///
/// Degree 2 and 3 are settled by looking for roots (when `q` is small enough
/// to enumerate); everything else goes through Rabin's test.
pub fn is_irreducible(field: &FieldSpec, f: &Poly) -> Result<bool> {
    let n = match f.degree() {
        None | Some(0) => return domain("irreducibility of a constant"),
        Some(n) => n,
    };
    if n == 1 {
        return Ok(true);
    }
    if n <= 3 && field.q() <= DEFAULT_ENUM_CAP {
        return Ok(roots(field, f, DEFAULT_ENUM_CAP)?.is_empty());
    }
    rabin_irreducible(field, f)
}

/// `f` of degree `n` is irreducible iff `x^(q^n) = x mod f` and
/// `gcd(x^(q^(n/l)) - x, f) = 1` for every prime `l | n`.
fn rabin_irreducible(field: &FieldSpec, f: &Poly) -> Result<bool> {
    let f = monic(field, f)?;
    let n = f.degree().unwrap_or(0);
    if n <= 1 {
        return Ok(n == 1);
    }
    let x = poly_rem(field, &Poly::x(), &f)?;
    let mut frob = vec![x.clone()];
    for _ in 0..n {
        let next = poly_powmod(field, frob.last().unwrap(), field.q(), &f)?;
        frob.push(next);
    }
    if frob[n] != x {
        return Ok(false);
    }
    for l in numth::factorize(n as u64)?.primes() {
        let h = poly_sub(field, &frob[n / l as usize], &x);
        if !poly_gcd(field, &f, &h)?.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One irreducible factor with its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub poly: Poly,
    pub multiplicity: u32,
}

/// Complete factorization `input = unit * prod(factor^multiplicity)`.
///
/// Factors are monic irreducible and sorted by degree, then by coefficient
/// vector (ascending powers, compared lexicographically).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub input: Poly,
    pub factors: Vec<Factor>,
    pub unit: FqElement,
}

impl FactorizationReport {
    /// Number of irreducible factors counted with multiplicity.
    pub fn factor_count(&self) -> u32 {
        self.factors.iter().map(|f| f.multiplicity).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for f in &self.factors {
            for _ in 0..f.multiplicity {
                out.push(f.poly.degree().unwrap_or(0));
            }
        }
        out
    }

    pub fn is_irreducible(&self) -> bool {
        matches!(self.factors.as_slice(), [f] if f.multiplicity == 1)
    }

    /// `unit * prod(factor^multiplicity)`.
    pub fn remultiply(&self, field: &FieldSpec) -> Poly {
        let mut acc = Poly::constant(self.unit);
        for f in &self.factors {
            for _ in 0..f.multiplicity {
                acc = poly_mul(field, &acc, &f.poly);
            }
        }
        acc
    }

    /// Checks re-multiplication and irreducibility of every factor.
    pub fn verify(&self, field: &FieldSpec) -> Result<()> {
        if self.remultiply(field) != self.input {
            return Err(Error::Inconsistent(format!("factors of {} do not multiply back", self.input)));
        }
        for f in &self.factors {
            if f.poly.lead() != FqElement::ONE || !is_irreducible(field, &f.poly)? {
                return Err(Error::Inconsistent(format!("{} is not monic irreducible", f.poly)));
            }
        }
        Ok(())
    }

    /// Renders e.g. `(x+2)(x+3)` or `2(x+1)^2`.
    pub fn render(&self, field: &FieldSpec) -> String {
        let mut out = String::new();
        if self.unit != FqElement::ONE {
            out.push_str(&field.render(self.unit));
        }
        for f in &self.factors {
            out.push_str(&format!("({})", f.poly.render(field, "x")));
            if f.multiplicity > 1 {
                out.push_str(&format!("^{}", f.multiplicity));
            }
        }
        out
    }
}

fn sort_key(p: &Poly) -> (usize, Vec<u64>) {
    (p.degree().unwrap_or(0), p.to_u64s())
}

fn build_report(field: &FieldSpec, input: &Poly, unit: FqElement, raw: Vec<(Poly, u32)>) -> Result<FactorizationReport> {
    let mut merged: Vec<Factor> = Vec::new();
    let mut raw = raw;
    raw.sort_by_key(|(p, _)| sort_key(p));
    for (poly, mult) in raw {
        match merged.last_mut() {
            Some(last) if last.poly == poly => last.multiplicity += mult,
            _ => merged.push(Factor { poly, multiplicity: mult }),
        }
    }
    let report = FactorizationReport { input: input.clone(), factors: merged, unit };
    report.verify(field)?;
    Ok(report)
}

/// Full factorization into monic irreducibles.
///
/// The result does not depend on `seed`; only the random choices made while
/// splitting equal-degree products do.
pub fn factor_monic(field: &FieldSpec, f: &Poly, seed: u64) -> Result<FactorizationReport> {
    if f.degree().unwrap_or(0) == 0 {
        return domain("factorization needs a polynomial of degree at least 1");
    }
    let unit = f.lead();
    let g = monic(field, f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut raw = Vec::new();
    for (part, mult) in squarefree_decomposition(field, &g)? {
        for (block, d) in distinct_degree(field, &part)? {
            for irreducible in equal_degree(field, &block, d, &mut rng)? {
                raw.push((irreducible, mult));
            }
        }
    }
    build_report(field, f, unit, raw)
}

/// Squarefree decomposition of a monic polynomial: pairs `(g_i, i)` with
/// `f = prod g_i^i` and each `g_i` squarefree.
pub fn squarefree_decomposition(field: &FieldSpec, f: &Poly) -> Result<Vec<(Poly, u32)>> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return Ok(out);
    }
    let mut c = poly_gcd(field, f, &derivative(field, f))?;
    let mut w = poly_div_exact(field, f, &c)?;
    let mut i = 1u32;
    while !w.is_one() {
        let y = poly_gcd(field, &w, &c)?;
        let fac = poly_div_exact(field, &w, &y)?;
        if !fac.is_one() {
            out.push((fac, i));
        }
        c = poly_div_exact(field, &c, &y)?;
        w = y;
        i += 1;
    }
    if !c.is_one() {
        let root = pth_root(field, &c)?;
        let p = field.p() as u32;
        for (g, j) in squarefree_decomposition(field, &root)? {
            out.push((g, j * p));
        }
    }
    Ok(out)
}

/// `g` with `g^p = f`, for `f` whose exponents are all multiples of `p`.
///
/// In `F_{p^k}` the p-th root of `a` is `a^(p^(k-1))`.
fn pth_root(field: &FieldSpec, f: &Poly) -> Result<Poly> {
    let p = field.p() as usize;
    let root_exp = field.q() / field.p();
    let mut coeffs = Vec::new();
    for (i, &c) in f.coeffs.iter().enumerate() {
        if i % p == 0 {
            coeffs.push(field.pow(c, root_exp));
        } else if !c.is_zero() {
            return Err(Error::Inconsistent(format!("{f} is not a p-th power")));
        }
    }
    Ok(Poly::new(coeffs))
}

/// Splits a monic squarefree polynomial into products of irreducibles of equal degree.
pub fn distinct_degree(field: &FieldSpec, f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = Poly::x();
    let mut d = 1usize;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = poly_powmod(field, &h, field.q(), &rest)?;
        let g = poly_gcd(field, &rest, &poly_sub(field, &h, &Poly::x()))?;
        if !g.is_one() {
            rest = poly_div_exact(field, &rest, &g)?;
            h = poly_rem(field, &h, &rest)?;
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(deg) = rest.degree().filter(|&deg| deg > 0) {
        out.push((rest, deg));
    }
    Ok(out)
}

/// Splits a monic squarefree product of irreducibles of degree `d`.
pub fn equal_degree(field: &FieldSpec, f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Poly>> {
    let n = f.degree().unwrap_or(0);
    if n == d {
        return Ok(vec![f.clone()]);
    }
    if d == 0 || !n.is_multiple_of(d) {
        return Err(Error::Inconsistent(format!("degree {n} is not a multiple of {d}")));
    }
    let mut pending = vec![f.clone()];
    let mut done = Vec::new();
    while let Some(g) = pending.pop() {
        if g.degree() == Some(d) {
            done.push(g);
            continue;
        }
        let split = loop {
            if let Some(s) = try_split(field, &g, d, rng)? {
                break s;
            }
        };
        let other = poly_div_exact(field, &g, &split)?;
        pending.push(split);
        pending.push(other);
    }
    Ok(done)
}

/// One Cantor-Zassenhaus attempt; returns a proper monic divisor on success.
fn try_split(field: &FieldSpec, f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Result<Option<Poly>> {
    let n = f.degree().unwrap_or(0);
    let q = field.q();
    let a = Poly::new((0..n).map(|_| FqElement(rng.gen_range(0..q))).collect());
    if a.degree().unwrap_or(0) == 0 {
        return Ok(None);
    }
    let g = poly_gcd(field, f, &a)?;
    if !g.is_one() {
        return Ok((g.degree() < f.degree()).then_some(g));
    }
    let probe = if field.p() == 2 {
        // absolute trace to F_2: a + a^2 + a^4 + ... + a^(2^(k d - 1))
        let mut term = a.clone();
        let mut trace = a;
        for _ in 1..(field.k() as usize * d) {
            term = poly_rem(field, &poly_mul(field, &term, &term), f)?;
            trace = poly_add(field, &trace, &term);
        }
        trace
    } else {
        // a^((q^d - 1) / 2) = (a^(1 + q + .. + q^(d-1)))^((q - 1) / 2)
        let mut conj = a.clone();
        let mut norm = a;
        for _ in 1..d {
            conj = poly_powmod(field, &conj, q, f)?;
            norm = poly_rem(field, &poly_mul(field, &norm, &conj), f)?;
        }
        let half = poly_powmod(field, &norm, (q - 1) / 2, f)?;
        poly_sub(field, &half, &Poly::one())
    };
    if probe.is_zero() {
        return Ok(None);
    }
    let g = poly_gcd(field, f, &probe)?;
    let proper = g.degree().is_some_and(|dg| dg > 0 && dg < n);
    Ok(proper.then_some(g))
}

/// Factorization by trial division over all monic polynomials of degree up
/// to `deg(f) / 2`, in increasing packed order. Requires `q^ceil(deg/2) <= cap`.
pub fn brute_force_factor(field: &FieldSpec, f: &Poly, cap: u64) -> Result<FactorizationReport> {
    let n = match f.degree() {
        None | Some(0) => return domain("factorization needs a polynomial of degree at least 1"),
        Some(n) => n,
    };
    let work = (field.q() as u128).checked_pow(n.div_ceil(2) as u32).unwrap_or(u128::MAX);
    check_cap("brute-force search size", work, cap as u128)?;
    let unit = f.lead();
    let mut rest = monic(field, f)?;
    let mut raw = Vec::new();
    let q = field.q();
    let mut d = 1usize;
    while rest.degree().unwrap_or(0) >= 2 * d {
        let count = q.pow(d as u32);
        for idx in 0..count {
            let mut coeffs = Vec::with_capacity(d + 1);
            let mut v = idx;
            for _ in 0..d {
                coeffs.push(FqElement(v % q));
                v /= q;
            }
            coeffs.push(FqElement::ONE);
            let g = Poly::new(coeffs);
            loop {
                let (quot, rem) = poly_divmod(field, &rest, &g)?;
                if !rem.is_zero() {
                    break;
                }
                raw.push((g.clone(), 1));
                rest = quot;
            }
            if rest.degree().unwrap_or(0) < 2 * d {
                break;
            }
        }
        d += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        raw.push((rest, 1));
    }
    build_report(field, f, unit, raw)
}

/// Parsed form of the polynomial text format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyText {
    /// `x^m - r` (also written `x^m + c`, meaning `r = -c`).
    Binomial { m: usize, r: i128 },
    /// General polynomial: integer coefficients, ascending powers.
    Coefficients(Vec<i128>),
}

/// Parses `x^3-2`, `x^2+1`, `x^4`, `x-1`, or a comma list `1,0,1` (ascending).
pub fn parse_poly(text: &str) -> Result<PolyText> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Domain(format!("cannot parse polynomial {text:?}"));
    if let Some(rest) = t.strip_prefix('x') {
        let (m, tail) = match rest.strip_prefix('^') {
            Some(r) => {
                let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
                let m: usize = r[..end].parse().map_err(|_| bad())?;
                (m, &r[end..])
            }
            None => (1, rest),
        };
        if m == 0 {
            return Err(bad());
        }
        let r = match tail.chars().next() {
            None => 0,
            Some('-') => tail[1..].parse::<i128>().map_err(|_| bad())?,
            Some('+') => -tail[1..].parse::<i128>().map_err(|_| bad())?,
            _ => return Err(bad()),
        };
        return Ok(PolyText::Binomial { m, r });
    }
    let coeffs: Vec<i128> = t.split(',').map(|s| s.parse::<i128>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
    Ok(PolyText::Coefficients(coeffs))
}

impl PolyText {
    /// The polynomial over a field, mapping integers into the prime subfield.
    pub fn to_poly(&self, field: &FieldSpec) -> Poly {
        match self {
            PolyText::Binomial { m, r } => Poly::binomial(field, *m, field.from_int(*r)),
            PolyText::Coefficients(c) => Poly::new(c.iter().map(|&v| field.from_int(v)).collect()),
        }
    }
}
