//! Verification suites: exhaustive and seeded-random sweeps that compare each
//! verdict against an independent computation.
//!
//! Grid points are independent and run on the current rayon pool. Failures
//! are collected, never fail-fast, and are reported in grid order.

use std::collections::BTreeMap;
use std::fmt::Debug;

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::factor::{self, Poly};
use crate::gfq::{FieldSpec, FqElement};
use crate::numth;
use crate::ring::{self, RingElement, RingParams};
use crate::structure::{self, Reason};
use crate::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    RingAxioms,
    Determinant,
    FieldCriterion,
    PowerMap,
    Pythagorean,
    Splitting,
    Counting,
    OracleAgreement,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::RingAxioms,
        Suite::Determinant,
        Suite::FieldCriterion,
        Suite::PowerMap,
        Suite::Pythagorean,
        Suite::Splitting,
        Suite::Counting,
        Suite::OracleAgreement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::RingAxioms => "ring-axioms",
            Suite::Determinant => "determinant",
            Suite::FieldCriterion => "field-criterion",
            Suite::PowerMap => "power-map",
            Suite::Pythagorean => "pythagorean",
            Suite::Splitting => "splitting",
            Suite::Counting => "counting",
            Suite::OracleAgreement => "oracle-agreement",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub point: String,
    pub check: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: Suite,
    /// Sub-grid name to a description of its parameter ranges.
    pub grid: BTreeMap<String, String>,
    /// Number of grid points checked.
    pub checked: u64,
    pub failures: Vec<Failure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub reports: Vec<VerifyReport>,
}

impl VerifyOutput {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.failures.is_empty())
    }
}

/// Grid overrides. `max_p` replaces every prime/modulus bound and `max_m`
/// every exponent bound of the selected suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct VerifyConfig {
    pub max_p: Option<u64>,
    pub max_m: Option<u64>,
    pub limits: Limits,
    pub seed: u64,
}

impl VerifyConfig {
    fn p(&self, default: u64) -> u64 {
        self.max_p.unwrap_or(default)
    }

    fn m(&self, default: u64) -> u64 {
        self.max_m.unwrap_or(default)
    }

    fn rng(&self, salt: &[u64]) -> ChaCha8Rng {
        let mixed = salt.iter().fold(self.seed ^ 0x9e37_79b9_7f4a_7c15, |h, &v| (h ^ v).wrapping_mul(0x1000_0000_01b3).rotate_left(23));
        ChaCha8Rng::seed_from_u64(mixed)
    }
}

pub fn run(suite: Suite, cfg: &VerifyConfig) -> VerifyOutput {
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    VerifyOutput { reports: suites.into_iter().map(|s| run_one(s, cfg)).collect() }
}

fn run_one(suite: Suite, cfg: &VerifyConfig) -> VerifyReport {
    let mut run = SuiteRun::default();
    match suite {
        Suite::RingAxioms => ring_axioms(&mut run, cfg),
        Suite::Determinant => determinant(&mut run, cfg),
        Suite::FieldCriterion => field_criterion(&mut run, cfg),
        Suite::PowerMap => power_map(&mut run, cfg),
        Suite::Pythagorean => pythagorean(&mut run, cfg),
        Suite::Splitting => splitting(&mut run, cfg),
        Suite::Counting => counting(&mut run, cfg),
        Suite::OracleAgreement => oracle_agreement(&mut run, cfg),
        Suite::All => unreachable!("expanded by run"),
    }
    VerifyReport { suite, grid: run.grid, checked: run.checked, failures: run.failures }
}

#[derive(Default)]
struct SuiteRun {
    grid: BTreeMap<String, String>,
    checked: u64,
    failures: Vec<Failure>,
}

impl SuiteRun {
    fn sweep<P: Sync>(&mut self, name: &str, desc: String, points: &[P], check: impl Fn(&P) -> Point + Sync + Send) {
        self.grid.insert(name.to_string(), desc);
        let results: Vec<Point> = points.par_iter().map(check).collect();
        self.checked += points.len() as u64;
        self.failures.extend(results.into_iter().flat_map(|p| p.failures));
    }
}

/// Outcome of one grid point.
struct Point {
    label: String,
    failures: Vec<Failure>,
}

impl Point {
    fn new(label: impl Into<String>) -> Self {
        Point { label: label.into(), failures: Vec::new() }
    }

    fn fail(&mut self, check: &str, expected: String, actual: String) {
        self.failures.push(Failure { point: self.label.clone(), check: check.to_string(), expected, actual });
    }

    fn eq<T: PartialEq + Debug>(&mut self, check: &str, expected: T, actual: T) {
        if expected != actual {
            self.fail(check, format!("{expected:?}"), format!("{actual:?}"));
        }
    }

    fn ok<T>(&mut self, check: &str, result: Result<T>) -> Option<T> {
        match result {
            Ok(v) => Some(v),
            Err(e) => {
                self.fail(check, "ok".into(), format!("error: {e}"));
                None
            }
        }
    }
}

fn prime_fields(max_q: u64, seed: u64) -> Vec<FieldSpec> {
    (2..=max_q).filter_map(numth::prime_power).filter_map(|(p, k)| FieldSpec::extension(p, k, seed).ok()).collect()
}

fn field_name(spec: &FieldSpec) -> String {
    if spec.k() == 1 {
        format!("F_{}", spec.p())
    } else {
        format!("F_{}^{}", spec.p(), spec.k())
    }
}

/// Position of an element in `RingParams::elements` order.
fn index_of(e: &RingElement) -> usize {
    e.coeffs.iter().fold(0usize, |acc, &c| acc * e.params.n as usize + c as usize)
}

/// First pair of nonzero elements with zero product, by enumeration.
fn find_zero_divisor(els: &[RingElement]) -> Option<(usize, usize)> {
    for i in 1..els.len() {
        for j in i..els.len() {
            if els[i].mul(&els[j]).map(|ab| ab.is_zero()).unwrap_or(false) {
                return Some((i, j));
            }
        }
    }
    None
}

fn ring_label(n: u64, m: u64, r: u64) -> String {
    format!("n={n} m={m} r={r}")
}

fn ring_axioms(run: &mut SuiteRun, cfg: &VerifyConfig) {
    let (max_n, max_m) = (cfg.p(10), cfg.m(5));
    let size_cap = cfg.limits.enum_cap.min(3125);
    let mut points = Vec::new();
    for n in 2..=max_n {
        for m in 1..=max_m {
            if (n as u128).checked_pow(m as u32).is_none_or(|s| s > size_cap as u128) {
                break;
            }
            points.extend((0..n).map(|r| (n, m, r)));
        }
    }
    run.sweep("exhaustive", format!("2 <= n <= {max_n}, 1 <= m <= {max_m}, n^m <= {size_cap}, 0 <= r < n"), &points, |&(n, m, r)| {
        ring_axioms_point(n, m, r, cfg)
    });
    run.sweep("random", "100000 products, log-uniform n <= 2^40, 2 <= m <= 12".into(), &[()], |_| random_products(cfg));
}

fn ring_axioms_point(n: u64, m: u64, r: u64, cfg: &VerifyConfig) -> Point {
    let mut pt = Point::new(ring_label(n, m, r));
    let params = RingParams::new(n, m as usize, r as i128).expect("grid parameters are valid");
    let els: Vec<RingElement> = params.elements(u64::MAX).expect("no cap").collect();
    let s = els.len();
    let one = index_of(&params.one());

    // full multiplication table, each entry compared with the polynomial oracle
    let mut table = vec![0u16; s * s];
    for i in 0..s {
        for j in 0..s {
            let ab = els[i].mul(&els[j]).expect("same ring");
            let oracle = els[i].mul_poly_oracle(&els[j]).expect("same ring");
            if ab != oracle {
                pt.fail(&format!("mul {} * {}", els[i], els[j]), oracle.to_string(), ab.to_string());
            }
            table[i * s + j] = index_of(&ab) as u16;
        }
    }
    let mul = |i: usize, j: usize| table[i * s + j] as usize;
    for i in 0..s {
        if mul(one, i) != i {
            pt.fail("identity", els[i].to_string(), els[mul(one, i)].to_string());
        }
        for j in i + 1..s {
            if mul(i, j) != mul(j, i) {
                pt.fail(&format!("commutativity {} {}", els[i], els[j]), els[mul(j, i)].to_string(), els[mul(i, j)].to_string());
            }
        }
    }

    let add = |i: usize, j: usize| index_of(&els[i].add(&els[j]).expect("same ring"));
    let mut triple = |i: usize, j: usize, k: usize| {
        if mul(mul(i, j), k) != mul(i, mul(j, k)) {
            pt.fail(
                &format!("associativity {} {} {}", els[i], els[j], els[k]),
                els[mul(i, mul(j, k))].to_string(),
                els[mul(mul(i, j), k)].to_string(),
            );
        }
        let lhs = mul(i, add(j, k));
        let rhs = add(mul(i, j), mul(i, k));
        if lhs != rhs {
            pt.fail(&format!("distributivity {} {} {}", els[i], els[j], els[k]), els[rhs].to_string(), els[lhs].to_string());
        }
    };
    let mut rng = cfg.rng(&[1, n, m, r]);
    if s <= 125 {
        for i in 0..s {
            for j in 0..s {
                for k in 0..s {
                    triple(i, j, k);
                }
            }
        }
    } else {
        for _ in 0..20_000 {
            triple(rng.gen_range(0..s), rng.gen_range(0..s), rng.gen_range(0..s));
        }
    }

    // units by determinant against an exhaustive inverse search
    let mut all_nonzero_units = true;
    for i in 0..s {
        let found = (0..s).find(|&j| mul(i, j) == one);
        let is_unit = els[i].is_unit();
        if is_unit != found.is_some() {
            pt.fail(&format!("unit {}", els[i]), format!("{}", found.is_some()), format!("{is_unit}"));
        }
        if let Some(j) = found {
            if let Some(inv) = pt.ok("inverse", els[i].inverse()) {
                pt.eq("inverse", els[j].clone(), inv);
            }
        }
        if i != 0 && found.is_none() {
            all_nonzero_units = false;
        }
    }
    let no_zero_divisors = (1..s).all(|i| (1..s).all(|j| mul(i, j) != 0));
    pt.eq("domain iff nonzero elements are units", no_zero_divisors, all_nonzero_units);

    // determinant multiplicativity
    let det_pair = |pt: &mut Point, i: usize, j: usize| {
        let (a, b) = (&els[i], &els[j]);
        let ab = &els[mul(i, j)];
        if let Some(prod) = pt.ok("matrix product", a.unital_matrix().mul(&b.unital_matrix())) {
            if prod != ab.unital_matrix() {
                pt.fail(&format!("unital matrix of {a} * {b}"), format!("{:?}", prod.entries), format!("{:?}", ab.unital_matrix().entries));
            }
        }
        pt.eq("det multiplicative", numth::mul_mod(a.unital_det(), b.unital_det(), n), ab.unital_det());
    };
    if s <= 125 {
        for i in 0..s {
            for j in 0..s {
                det_pair(&mut pt, i, j);
            }
        }
    } else {
        for _ in 0..2_000 {
            let (i, j) = (rng.gen_range(0..s), rng.gen_range(0..s));
            det_pair(&mut pt, i, j);
        }
    }
    pt
}

fn random_products(cfg: &VerifyConfig) -> Point {
    let mut pt = Point::new("random large rings");
    let mut rng = cfg.rng(&[2]);
    for _ in 0..100_000 {
        let bits = rng.gen_range(2..=40u32);
        let n = rng.gen_range(2..=1u64 << bits);
        let m = rng.gen_range(2..=12usize);
        let params = RingParams::new(n, m, rng.gen_range(0..n) as i128).expect("valid");
        let mut pick = || -> Vec<i128> { (0..m).map(|_| rng.gen_range(0..n) as i128).collect() };
        let a = params.element(&pick()).expect("m coefficients");
        let b = params.element(&pick()).expect("m coefficients");
        let (ab, oracle) = (a.mul(&b).expect("same ring"), a.mul_poly_oracle(&b).expect("same ring"));
        if ab != oracle {
            pt.fail(&format!("mul {a} * {b} in {params}"), oracle.to_string(), ab.to_string());
        }
    }
    pt
}

/// Leibniz expansion of the determinant mod `n`.
fn leibniz_det(rows: &[Vec<u64>], n: u64) -> u64 {
    fn walk(rows: &[Vec<u64>], n: u64, row: usize, used: &mut Vec<bool>, perm: &mut Vec<usize>, acc: &mut (u64, u64)) {
        let size = rows.len();
        if row == size {
            let mut inversions = 0;
            for i in 0..size {
                for j in i + 1..size {
                    if perm[i] > perm[j] {
                        inversions += 1;
                    }
                }
            }
            let term = perm.iter().enumerate().fold(1 % n, |t, (i, &c)| numth::mul_mod(t, rows[i][c], n));
            if inversions % 2 == 0 {
                acc.0 = numth::add_mod(acc.0, term, n);
            } else {
                acc.1 = numth::add_mod(acc.1, term, n);
            }
            return;
        }
        for c in 0..size {
            if !used[c] {
                used[c] = true;
                perm.push(c);
                walk(rows, n, row + 1, used, perm, acc);
                perm.pop();
                used[c] = false;
            }
        }
    }
    let mut acc = (0, 0);
    walk(rows, n, 0, &mut vec![false; rows.len()], &mut Vec::new(), &mut acc);
    numth::sub_mod(acc.0, acc.1, n)
}

/// `a0^2 - r a1^2`.
fn closed_form_2(n: u64, r: u64, a: &[u64]) -> u64 {
    use numth::{mul_mod, sub_mod};
    sub_mod(mul_mod(a[0], a[0], n), mul_mod(r, mul_mod(a[1], a[1], n), n), n)
}

/// `a0^3 + r a1^3 + r^2 a2^3 - 3 r a0 a1 a2`.
fn closed_form_3(n: u64, r: u64, a: &[u64]) -> u64 {
    use numth::{add_mod, mul_mod, sub_mod};
    let cube = |x: u64| mul_mod(x, mul_mod(x, x, n), n);
    let pos = add_mod(add_mod(cube(a[0]), mul_mod(r, cube(a[1]), n), n), mul_mod(mul_mod(r, r, n), cube(a[2]), n), n);
    let cross = mul_mod(mul_mod(3 % n, r, n), mul_mod(a[0], mul_mod(a[1], a[2], n), n), n);
    sub_mod(pos, cross, n)
}

fn determinant(run: &mut SuiteRun, cfg: &VerifyConfig) {
    let (max_n, max_m) = (cfg.p(13), cfg.m(4));
    let size_cap = cfg.limits.enum_cap;
    let mut points = Vec::new();
    for n in 2..=max_n {
        for m in 1..=max_m {
            if (n as u128).checked_pow(m as u32).is_none_or(|s| s > size_cap as u128) {
                break;
            }
            if m <= 3 || (n as u128).pow(m as u32) <= 3125 {
                points.extend((0..n).map(|r| (n, m, r)));
            }
        }
    }
    run.sweep(
        "exhaustive",
        format!("2 <= n <= {max_n}, 1 <= m <= {max_m} (m >= 4 only for n^m <= 3125), 0 <= r < n"),
        &points,
        |&(n, m, r)| {
            let mut pt = Point::new(ring_label(n, m, r));
            let params = RingParams::new(n, m as usize, r as i128).expect("valid");
            for a in params.elements(u64::MAX).expect("no cap") {
                let d = a.unital_det();
                let expected = match m {
                    1 => a.coeffs[0],
                    2 => closed_form_2(n, r, &a.coeffs),
                    3 => closed_form_3(n, r, &a.coeffs),
                    _ => leibniz_det(&a.unital_matrix().entries, n),
                };
                if d != expected {
                    pt.fail(&format!("det {a}"), expected.to_string(), d.to_string());
                }
                if (2..=3).contains(&m) && (n as u128).pow(m as u32) <= 3125 {
                    let lz = leibniz_det(&a.unital_matrix().entries, n);
                    if lz != d {
                        pt.fail(&format!("leibniz det {a}"), lz.to_string(), d.to_string());
                    }
                }
                // entry rule: A[i][j] = a_{(i-j) mod m} * (r if i < j else 1)
                let mm = m as usize;
                let entries = &a.unital_matrix().entries;
                for i in 0..mm {
                    for j in 0..mm {
                        let base = a.coeffs[(i + mm - j) % mm];
                        let want = if i < j { numth::mul_mod(base, r, n) } else { base };
                        if entries[i][j] != want {
                            pt.fail(&format!("matrix entry ({i},{j}) of {a}"), want.to_string(), entries[i][j].to_string());
                        }
                    }
                }
            }
            pt
        },
    );
    run.sweep("random closed forms", "1000 cases each for m = 2, 3 with n < 2^62".into(), &[()], |_| {
        let mut pt = Point::new("random closed forms");
        let mut rng = cfg.rng(&[3]);
        for _ in 0..1000 {
            let n = rng.gen_range(2..1u64 << 62);
            let r = rng.gen_range(0..n);
            for m in [2usize, 3] {
                let c: Vec<i128> = (0..m).map(|_| rng.gen_range(0..n) as i128).collect();
                let a = RingParams::new(n, m, r as i128).expect("valid").element(&c).expect("m coefficients");
                let expected = if m == 2 { closed_form_2(n, r, &a.coeffs) } else { closed_form_3(n, r, &a.coeffs) };
                pt.eq(&format!("det {a} in Z_{n} r={r}"), expected, a.unital_det());
            }
        }
        pt
    });
    run.sweep("random multiplicativity", "1000 pairs, n < 2^62, 2 <= m <= 12".into(), &[()], |_| {
        let mut pt = Point::new("random multiplicativity");
        let mut rng = cfg.rng(&[4]);
        for _ in 0..1000 {
            let n = rng.gen_range(2..1u64 << 62);
            let m = rng.gen_range(2..=12usize);
            let params = RingParams::new(n, m, rng.gen_range(0..n) as i128).expect("valid");
            let mut pick = || -> Vec<i128> { (0..m).map(|_| rng.gen_range(0..n) as i128).collect() };
            let a = params.element(&pick()).expect("m coefficients");
            let b = params.element(&pick()).expect("m coefficients");
            let ab = a.mul(&b).expect("same ring");
            pt.eq(&format!("det({a} * {b}) in {params}"), numth::mul_mod(a.unital_det(), b.unital_det(), n), ab.unital_det());
            if a.is_unit() {
                if let Some(inv) = pt.ok("inverse", a.inverse()) {
                    pt.eq(&format!("{a} * inverse in {params}"), params.one(), a.mul(&inv).expect("same ring"));
                }
            }
        }
        pt
    });
    let crt_points: Vec<(u64, u64, u64)> =
        points.iter().copied().filter(|&(n, m, _)| !numth::is_prime(n) && m <= 3 && (n as u128).pow(m as u32) <= 3125).collect();
    run.sweep("crt", "composite n from the exhaustive grid, m <= 3, n^m <= 3125".into(), &crt_points, |&(n, m, r)| {
        let mut pt = Point::new(ring_label(n, m, r));
        let params = RingParams::new(n, m as usize, r as i128).expect("valid");
        let Some(moduli) = pt.ok("crt split", numth::crt_split(n)) else { return pt };
        for a in params.elements(u64::MAX).expect("no cap") {
            let parts = moduli.iter().all(|&q| a.project(q).map(|b| b.is_unit()).unwrap_or(false));
            if parts != a.is_unit() {
                pt.fail(&format!("unit {a} vs projections {moduli:?}"), parts.to_string(), a.is_unit().to_string());
            }
        }
        pt
    });
}

fn field_criterion(run: &mut SuiteRun, cfg: &VerifyConfig) {
    let (max_n, max_m) = (cfg.p(13), cfg.m(3));
    let mut points = Vec::new();
    for n in 2..=max_n {
        for m in 1..=max_m {
            if (n as u128).checked_pow(m as u32).is_none_or(|s| s > cfg.limits.enum_cap as u128) {
                break;
            }
            points.extend((0..n).map(|r| (n, m, r)));
        }
    }
    run.sweep("domain", format!("2 <= n <= {max_n}, 1 <= m <= {max_m}, 0 <= r < n"), &points, |&(n, m, r)| field_point(n, m, r, cfg));
    let max_p = cfg.p(101);
    let odd_primes: Vec<u64> = numth::primes_up_to(max_p).into_iter().filter(|&p| p > 2).collect();
    run.sweep("quadratic count", format!("odd primes p <= {max_p}, m = 2, 0 <= r < p"), &odd_primes, |&p| {
        let mut pt = Point::new(format!("p={p}"));
        let mut count = 0;
        for r in 0..p {
            if let Some(true) = is_field_or_fail(&mut pt, p, 2, r, cfg) { count += 1 }
        }
        pt.eq("number of r with Z_p[r^(1/2)] a field", (p - 1) / 2, count);
        pt
    });
}

fn is_field_or_fail(pt: &mut Point, n: u64, m: u64, r: u64, cfg: &VerifyConfig) -> Option<bool> {
    pt.ok("is_field", structure::is_field(n, m as usize, r as i128, &cfg.limits)).map(|v| v.is_field)
}

fn field_point(n: u64, m: u64, r: u64, cfg: &VerifyConfig) -> Point {
    let mut pt = Point::new(ring_label(n, m, r));
    let Some(verdict) = pt.ok("is_field", structure::is_field(n, m as usize, r as i128, &cfg.limits)) else { return pt };
    let params = RingParams::new(n, m as usize, r as i128).expect("valid");
    let els: Vec<RingElement> = params.elements(u64::MAX).expect("no cap").collect();
    let zero_divisor = find_zero_divisor(&els);
    pt.eq("is_field iff no zero divisors", zero_divisor.is_none(), verdict.is_field);
    pt.eq("is_field iff is_domain", verdict.is_field, verdict.is_domain);
    if verdict.is_field {
        pt.eq("field has IRREDUCIBLE_OVER_PRIME", true, verdict.reasons.contains(&Reason::IrreducibleOverPrime));
    }
    for reason in &verdict.reasons {
        match reason {
            Reason::CompositeN { divisor } => {
                pt.eq("COMPOSITE_N only for composite n", false, numth::is_prime(n));
                pt.eq("COMPOSITE_N divisor is a prime factor", true, numth::is_prime(*divisor) && n.is_multiple_of(*divisor));
                pt.eq("COMPOSITE_N is not a field", false, verdict.is_field);
            }
            Reason::BinomialReducible { factor: f } => {
                // a proper factor f gives zero divisors f(s) and ((x^m - r)/f)(s)
                let field = FieldSpec::prime(n).expect("prime");
                let binomial = Poly::binomial(&field, m as usize, FqElement(r));
                let f = Poly::from_u64s(f);
                let deg = f.degree().unwrap_or(0) as u64;
                pt.eq("factor degree in [1, m)", true, deg >= 1 && deg < m);
                if let Some((g, rem)) = pt.ok("divide binomial", factor::poly_divmod(&field, &binomial, &f)) {
                    pt.eq("factor divides x^m - r", true, rem.is_zero());
                    let as_element = |p: &Poly| {
                        let mut c: Vec<i128> = p.to_u64s().into_iter().map(i128::from).collect();
                        c.resize(m as usize, 0);
                        params.element(&c).expect("degree below m")
                    };
                    let (fa, ga) = (as_element(&f), as_element(&g));
                    pt.eq("f(s) and g(s) nonzero", (false, false), (fa.is_zero(), ga.is_zero()));
                    pt.eq("f(s) g(s) = 0", params.zero(), fa.mul(&ga).expect("same ring"));
                }
            }
            Reason::IrreducibleOverPrime => pt.eq("IRREDUCIBLE_OVER_PRIME implies field", true, verdict.is_field),
            Reason::RootCriterion { root } => {
                let root_ok = root.is_none_or(|a| numth::pow_mod(a, m, n) == r);
                pt.eq("root criterion witness", true, root_ok);
                pt.eq("root exists iff reducible", root.is_some(), !verdict.is_field);
            }
        }
    }
    pt
}

fn image_mod_p(p: u64, k: u64) -> Vec<bool> {
    let mut hit = vec![false; p as usize];
    for a in 0..p {
        hit[numth::pow_mod(a, k, p) as usize] = true;
    }
    hit
}

fn power_map(run: &mut SuiteRun, cfg: &VerifyConfig) {
    let cap = cfg.limits.enum_cap;
    let (lemma_p, lemma_m) = (cfg.p(101), cfg.m(10));
    let points: Vec<(u64, u64)> = numth::primes_up_to(lemma_p).into_iter().flat_map(|p| (1..=lemma_m).map(move |m| (p, m))).collect();
    run.sweep("onto", format!("primes p <= {lemma_p}, 1 <= m <= {lemma_m}"), &points, |&(p, m)| {
        let mut pt = Point::new(format!("p={p} m={m}"));
        let field = FieldSpec::prime(p).expect("prime");
        let onto = pt.ok("power_map_onto", structure::power_map_onto(p, m));
        let image = pt.ok("power_map_image", structure::power_map_image(&field, m, cap));
        if let (Some(onto), Some(image)) = (onto, image) {
            pt.eq("onto iff image is everything", image.len() as u64 == p, onto);
            let independent = image_mod_p(p, m).iter().filter(|&&b| b).count();
            pt.eq("image size", independent, image.len());
        }
        pt
    });

    let (lin_q, lin_m) = (cfg.p(49), cfg.m(6));
    let mut points = Vec::new();
    for field in prime_fields(lin_q, cfg.seed) {
        for m in 1..=lin_m {
            points.push((field.clone(), m));
        }
    }
    run.sweep("linear factor", format!("fields q <= {lin_q}, 1 <= m <= {lin_m}, r != 0"), &points, |(field, m)| {
        let mut pt = Point::new(format!("{} m={m}", field_name(field)));
        for r in field.elements(cap).expect("small field").skip(1) {
            let root = pt.ok("has_linear_factor", structure::has_linear_factor(field, *m, r, cap));
            let report = pt.ok("factor_monic", factor::factor_monic(field, &Poly::binomial(field, *m as usize, r), cfg.seed));
            if let (Some(root), Some(report)) = (root, report) {
                pt.eq(&format!("r={r}: linear factor"), report.degrees().contains(&1), root.is_some());
                if let Some(a) = root {
                    pt.eq(&format!("r={r}: root^m"), r, field.pow(a, *m));
                }
            }
        }
        pt
    });

    let (root_p, root_m) = (cfg.p(31), cfg.m(3).min(3));
    let points: Vec<(u64, u64)> = numth::primes_up_to(root_p).into_iter().flat_map(|p| (2..=root_m).map(move |m| (p, m))).collect();
    run.sweep("root criterion", format!("primes p <= {root_p}, 2 <= m <= {root_m}, 0 <= r < p"), &points, |&(p, m)| {
        let mut pt = Point::new(format!("p={p} m={m}"));
        let field = FieldSpec::prime(p).expect("prime");
        let image = image_mod_p(p, m);
        for r in 0..p {
            let f = Poly::binomial(&field, m as usize, FqElement(r));
            if let Some(irreducible) = pt.ok("is_irreducible", factor::is_irreducible(&field, &f)) {
                pt.eq(&format!("r={r}: reducible iff m-th power"), image[r as usize], !irreducible);
            }
        }
        pt
    });

    let cubic_p = cfg.p(13);
    let primes: Vec<u64> = numth::primes_up_to(cubic_p).into_iter().filter(|&p| p >= 5).collect();
    run.sweep("cubic form", format!("primes 5 <= p <= {cubic_p}, 0 <= r < p"), &primes, |&p| {
        let mut pt = Point::new(format!("p={p}"));
        let cubes = image_mod_p(p, 3);
        for r in 0..p {
            let Some(w) = pt.ok("cubic form search", structure::cubic_form_has_nontrivial_zero(p, r as i128, cap)) else {
                continue;
            };
            pt.eq(&format!("r={r}: zero exists iff cube"), cubes[r as usize], w.is_some());
            if let Some((a0, a1, a2)) = w {
                let (a0, a1, a2, ri) = (a0 as i128, a1 as i128, a2 as i128, r as i128);
                let form = a0.pow(3) + ri * a1.pow(3) + ri * ri * a2.pow(3) - 3 * ri * a0 * a1 * a2;
                pt.eq(&format!("r={r}: form vanishes at {:?}", (a0, a1, a2)), 0, form.rem_euclid(p as i128));
                pt.eq(&format!("r={r}: witness nonzero"), true, (a0, a1, a2) != (0, 0, 0));
            }
        }
        pt
    });
}

fn pythagorean(run: &mut SuiteRun, cfg: &VerifyConfig) {
    let max_p = cfg.p(100);
    let exhaustive_p = 13.min(max_p);
    let primes = numth::primes_up_to(max_p);
    run.sweep("primes", format!("primes p <= {max_p}; exhaustive zero-divisor search for p <= {exhaustive_p}"), &primes, |&p| {
        let mut pt = Point::new(format!("p={p}"));
        let Some(class) = pt.ok("pythagorean_class", structure::pythagorean_class(p, &cfg.limits)) else { return pt };
        pt.eq("field iff p = 3 mod 4", p % 4 == 3, class.zp_i_is_field);
        let two_squares = (0..p).any(|a| (a..p).any(|b| a * a + b * b == p));
        pt.eq("pythagorean iff p = a^2 + b^2", two_squares, class.is_pythagorean);
        if p <= exhaustive_p {
            let params = RingParams::new(p, 2, -1).expect("valid");
            let els: Vec<RingElement> = params.elements(u64::MAX).expect("no cap").collect();
            pt.eq("field iff no zero divisors", find_zero_divisor(&els).is_none(), class.zp_i_is_field);
        }
        pt
    });
}

/// Grid of `(p, m)` with `m | p - 1`, `1 < m <= max_m`.
fn divisor_grid(max_p: u64, max_m: u64) -> Vec<(u64, u64)> {
    numth::primes_up_to(max_p).into_iter().flat_map(|p| (2..=max_m).filter(move |m| (p - 1) % m == 0).map(move |m| (p, m))).collect()
}

/// Least `t >= 1` with `p^t = 1 (mod e)`, by stepping.
fn order_by_stepping(p: u64, e: u64) -> u64 {
    let mut t = 1;
    let mut acc = p % e;
    while acc != 1 % e {
        acc = numth::mul_mod(acc, p, e);
        t += 1;
    }
    t
}

fn splitting(run: &mut SuiteRun, cfg: &VerifyConfig) {
    let (max_p, max_m) = (cfg.p(31), cfg.m(6));
    let cap = cfg.limits.enum_cap;
    let points: Vec<(u64, u64, u64)> = divisor_grid(max_p, max_m).into_iter().flat_map(|(p, m)| (1..p).map(move |r| (p, m, r))).collect();
    run.sweep(
        "binomials",
        format!("primes p <= {max_p}, m | p-1 with 1 < m <= {max_m}, 0 < r < p; unit counts for p^m <= {cap}"),
        &points,
        |&(p, m, r)| {
            let mut pt = Point::new(format!("p={p} m={m} r={r}"));
            let field = FieldSpec::prime(p).expect("prime");
            let r_el = FqElement(r);
            let Some(split) = pt.ok("splitting_type", structure::splitting_type(&field, m, r_el)) else { return pt };
            let ord_r = (1..p).find(|&k| numth::pow_mod(r, k, p) == 1).expect("r is a unit");
            pt.eq("ord(r)", ord_r, split.ord_r);
            pt.eq("t", order_by_stepping(p, ord_r * m), split.t);
            pt.eq("factor_count * t", m, split.factor_count * split.t);
            let binomial = Poly::binomial(&field, m as usize, r_el);
            if let Some(report) = pt.ok("factor_monic", factor::factor_monic(&field, &binomial, cfg.seed)) {
                pt.eq("factor degrees", vec![split.t as usize; split.factor_count as usize], report.degrees());
                pt.eq("distinct factors", split.factor_count as usize, report.factors.len());
                let theorem = pt.ok("irreducible_binomial", structure::irreducible_binomial(&field, m, r_el, cap));
                pt.eq("power-map criterion iff irreducible", Some(report.is_irreducible()), theorem);
                pt.eq("t = m iff irreducible", split.t == m, report.is_irreducible());
                if (p, m, r) == (7, 3, 2) {
                    pt.eq("x^3 - 2 over F_7 is irreducible", true, report.is_irreducible());
                }
                if (p, m, r) == (13, 3, 5) {
                    let roots = factor::roots(&field, &binomial, cap).unwrap_or_default();
                    pt.eq("roots of x^3 - 5 over F_13", vec![FqElement(7), FqElement(8), FqElement(11)], roots);
                }
            }
            if (p as u128).pow(m as u32) <= cap as u128 {
                let params = RingParams::new(p, m as usize, r as i128).expect("valid");
                let dec = pt.ok("ring_decomposition", structure::ring_decomposition(&field, m, r_el));
                let count = pt.ok("unit_count", ring::unit_count(&params, &cfg.limits));
                if let (Some(dec), Some(count)) = (dec, count) {
                    pt.eq("unit count", (p.pow(split.t as u32) - 1).pow(split.factor_count as u32), count);
                    pt.eq("predicted unit count", dec.unit_count_prediction, count);
                }
            }
            pt
        },
    );
    let primes = numth::primes_up_to(max_p);
    run.sweep("hypothesis", format!("primes p <= {max_p}, 1 < m <= {max_m} with m not dividing p-1"), &primes, |&p| {
        let mut pt = Point::new(format!("p={p}"));
        let field = FieldSpec::prime(p).expect("prime");
        for m in (2..=max_m).filter(|m| (p - 1) % m != 0) {
            let got = structure::splitting_type(&field, m, FqElement::ONE);
            pt.eq(&format!("m={m}: hypothesis error"), true, matches!(got, Err(crate::Error::Hypothesis(_))));
        }
        pt
    });
}

fn counting(run: &mut SuiteRun, cfg: &VerifyConfig) {
    let (max_p, max_m) = (cfg.p(31), cfg.m(6));
    let mut points: Vec<(FieldSpec, u64)> =
        divisor_grid(max_p, max_m).into_iter().map(|(p, m)| (FieldSpec::prime(p).expect("prime"), m)).collect();
    let ext_m = cfg.m(u64::MAX);
    for (p, k) in [(3u64, 2u32), (5, 2)] {
        if let Ok(field) = FieldSpec::extension(p, k, cfg.seed) {
            let q1 = field.q() - 1;
            for m in numth::divisors(q1).unwrap_or_default().into_iter().filter(|&m| m > 1 && m <= ext_m) {
                points.push((field.clone(), m));
            }
        }
    }
    run.sweep(
        "count",
        format!(
            "primes p <= {max_p} with m | p-1, 1 < m <= {max_m}; F_9 and F_25 with every m | q-1, 1 < m <= {}",
            cfg.max_m.map_or("q-1".to_string(), |m| m.to_string())
        ),
        &points,
        |(field, m)| {
            let mut pt = Point::new(format!("{} m={m}", field_name(field)));
            let Some(report) = pt.ok("count_irreducible", structure::count_irreducible(field, *m, &cfg.limits)) else { return pt };
            let q = field.q();
            let big_m = report.big_m;
            pt.eq("m | M", 0, big_m % m);
            pt.eq("rad(M) = rad(m)", numth::rad(*m).ok(), numth::rad(big_m).ok());
            pt.eq("gcd(M, (q-1)/M)", 1, numth::gcd(big_m, (q - 1) / big_m));
            pt.eq("predicted", numth::euler_phi(big_m).unwrap_or(0) * (q - 1) / big_m, report.predicted);
            pt.eq("enumerated", Some(report.predicted), report.enumerated);
            let mut by_oracle = 0u64;
            for r in field.elements(u64::MAX).expect("no cap").skip(1) {
                let f = Poly::binomial(field, *m as usize, r);
                if pt.ok("is_irreducible", factor::is_irreducible(field, &f)) == Some(true) {
                    by_oracle += 1;
                }
            }
            pt.eq("irreducible count by factorization", report.predicted, by_oracle);
            if field.k() == 1 && (q, *m) == (13, 3) {
                pt.eq("count for F_13, m = 3", 8, report.predicted);
            }
            if field.k() == 1 && (q, *m) == (13, 2) {
                pt.eq("count for F_13, m = 2", (13 - 1) / 2, report.predicted);
            }
            pt
        },
    );

    let sq_m = cfg.m(10);
    let sq_points: Vec<(u64, u64)> = numth::primes_up_to(max_p)
        .into_iter()
        .flat_map(|p| (2..=sq_m).filter(move |&m| (p - 1) % m != 0 && numth::is_squarefree(m).unwrap_or(false)).map(move |m| (p, m)))
        .collect();
    run.sweep(
        "squarefree",
        format!("primes p <= {max_p}, squarefree 2 <= m <= {sq_m} not dividing p-1, 0 < r < p"),
        &sq_points,
        |&(p, m)| {
            let mut pt = Point::new(format!("p={p} m={m}"));
            let field = FieldSpec::prime(p).expect("prime");
            for r in 1..p {
                let Some(cert) = pt.ok(&format!("r={r}: certificate"), structure::squarefree_reducible(&field, m, FqElement(r))) else {
                    continue;
                };
                let d = cert.d;
                pt.eq(&format!("r={r}: d prime, d | m, d does not divide p-1"), true, numth::is_prime(d) && m % d == 0 && (p - 1) % d != 0);
                pt.eq(&format!("r={r}: b^d"), r, numth::pow_mod(cert.b.0, d, p));
                let binomial = Poly::binomial(&field, m as usize, FqElement(r));
                if let Some(rem) = pt.ok("divide", factor::poly_rem(&field, &binomial, &cert.factor(&field, m))) {
                    pt.eq(&format!("r={r}: x^(m/d) - b divides x^m - r"), true, rem.is_zero());
                }
            }
            pt
        },
    );
}

fn oracle_agreement(run: &mut SuiteRun, cfg: &VerifyConfig) {
    let (max_q, max_m) = (cfg.p(13), cfg.m(6));
    let mut points = Vec::new();
    for field in prime_fields(max_q, cfg.seed) {
        for m in 1..=max_m {
            points.push((field.clone(), m));
        }
    }
    run.sweep("binomials", format!("fields q <= {max_q}, 1 <= m <= {max_m}, every r"), &points, |(field, m)| {
        let mut pt = Point::new(format!("{} m={m}", field_name(field)));
        for r in field.elements(u64::MAX).expect("no cap") {
            let f = Poly::binomial(field, *m as usize, r);
            let fast = pt.ok("factor_monic", factor::factor_monic(field, &f, cfg.seed));
            let other_seed = pt.ok("factor_monic", factor::factor_monic(field, &f, cfg.seed.wrapping_add(1)));
            let brute = pt.ok("brute_force_factor", factor::brute_force_factor(field, &f, cfg.limits.brute_cap));
            if let (Some(fast), Some(other_seed), Some(brute)) = (fast, other_seed, brute) {
                pt.eq(&format!("r={r}: factor_monic vs brute force"), &brute, &fast);
                pt.eq(&format!("r={r}: seed independence"), &fast, &other_seed);
                pt.eq(&format!("r={r}: remultiplies"), &f, &fast.remultiply(field));
                pt.eq(&format!("r={r}: brute force remultiplies"), &f, &brute.remultiply(field));
            }
        }
        pt
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leibniz_matches_known_values() {
        assert_eq!(leibniz_det(&[vec![1, 2], vec![3, 4]], 7), 5);
        assert_eq!(leibniz_det(&[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 4]], 100), 24);
        assert_eq!(leibniz_det(&[vec![0, 1], vec![1, 0]], 5), 4);
    }

    #[test]
    fn stepping_order() {
        assert_eq!(order_by_stepping(7, 9), 3);
        assert_eq!(order_by_stepping(13, 12), 1);
        assert_eq!(order_by_stepping(5, 1), 1);
    }

    #[test]
    fn small_suites_pass() {
        let cfg = VerifyConfig { max_p: Some(7), max_m: Some(3), ..VerifyConfig::default() };
        for suite in Suite::EACH {
            let out = run(suite, &cfg);
            assert!(out.passed(), "{:?}", out.reports[0].failures);
            assert!(out.reports[0].checked > 0);
        }
    }

    #[test]
    fn failures_are_reported() {
        let mut pt = Point::new("x");
        pt.eq("same", 1, 1);
        pt.eq("different", 1, 2);
        let _ = pt.ok::<()>("error", Err(crate::Error::DivisionByZero));
        assert_eq!(pt.failures.len(), 2);
        assert_eq!(pt.failures[0].expected, "1");
        assert_eq!(pt.failures[0].actual, "2");
    }
}
