//! Acceptance checks, one line per criterion.
//!
//! Each criterion compares the library against arithmetic written out here
//! (schoolbook products, direct powering, exhaustive searches) so that a bug
//! shared by the library's fast path and its own oracles cannot hide.

use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use radring::cli::{ElementReport, Report};
use radring::factor::{self, Poly};
use radring::gfq::{FieldSpec, FqElement};
use radring::ring::{self, RingParams};
use radring::structure;
use radring::{numth, Limits};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

fn primes(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)).collect()
}

/// Schoolbook product in `Z_n[x]/(x^m - r)` on coefficient vectors.
fn ring_mul(a: &[u64], b: &[u64], n: u64, r: u64) -> Vec<u64> {
    let m = a.len();
    let mut full = vec![0u128; 2 * m];
    for i in 0..m {
        for j in 0..m {
            full[i + j] += a[i] as u128 * b[j] as u128;
        }
    }
    (0..m).map(|k| ((full[k] + r as u128 * (full[k + m] % n as u128)) % n as u128) as u64).collect()
}

fn all_vectors(n: u64, m: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        out = out.into_iter().flat_map(|v| (0..n).map(move |c| [v.clone(), vec![c]].concat())).collect();
    }
    out
}

fn has_zero_divisor(n: u64, m: usize, r: u64) -> bool {
    let els = all_vectors(n, m);
    let nonzero: Vec<&Vec<u64>> = els.iter().filter(|v| v.iter().any(|&c| c != 0)).collect();
    nonzero.iter().enumerate().any(|(i, a)| nonzero[i..].iter().any(|b| ring_mul(a, b, n, r).iter().all(|&c| c == 0)))
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_radring")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8"))
}

fn c1_gaussian() -> Outcome {
    let (code, json) = cli(&["element", "5", "2", "-1", "3,4", "--json"]);
    ensure!(code == 0, "element exited with {code}");
    let Report::Element(e) = serde_json::from_str::<Report>(&json).map_err(|e| e.to_string())? else {
        return Err("element did not produce an element report".into());
    };
    let ElementReport { delta, zero_divisor, element, .. } = e;
    ensure!(delta == 0, "delta = {delta}");
    let z = zero_divisor.ok_or("no zero-divisor section")?;
    let w = z.witness.ok_or("no witness")?;
    ensure!(w.coeffs.iter().any(|&c| c != 0), "witness is zero");
    let product = ring_mul(&element.coeffs, &w.coeffs, 5, 4);
    ensure!(product == vec![0, 0], "3+4i times {:?} = {product:?}", w.coeffs);
    ensure!(z.verified, "report does not mark the witness verified");
    let (code, text) = cli(&["analyze", "5", "2", "-1"]);
    ensure!(code == 0, "analyze exited with {code}");
    ensure!(text.lines().any(|l| l.trim_end().ends_with("(x+2)(x+3)")), "analyze output lacks (x+2)(x+3):\n{text}");
    Ok(format!("delta 0, witness {:?} annihilates 3+4i, factors (x+2)(x+3)", w.coeffs))
}

fn c2_pythagorean() -> Outcome {
    let limits = Limits::default();
    let ps = primes(100);
    for &p in &ps {
        let class = structure::pythagorean_class(p, &limits).map_err(|e| e.to_string())?;
        let verdict = structure::is_field(p, 2, -1, &limits).map_err(|e| e.to_string())?;
        ensure!(class.zp_i_is_field == (p % 4 == 3), "p = {p}: class says field = {}", class.zp_i_is_field);
        ensure!(verdict.is_field == (p % 4 == 3), "p = {p}: is_field = {}", verdict.is_field);
        if p <= 13 {
            ensure!(has_zero_divisor(p, 2, p - 1) == !verdict.is_field, "p = {p}: exhaustive search disagrees");
        }
    }
    let (code, json) = cli(&["verify", "pythagorean", "--json"]);
    let Report::Verify(v) = serde_json::from_str::<Report>(&json).map_err(|e| e.to_string())? else {
        return Err("verify did not produce a verify report".into());
    };
    ensure!(code == 0 && v.passed(), "verify pythagorean failed: {:?}", v.reports[0].failures);
    ensure!(v.reports[0].checked == 25, "checked {}", v.reports[0].checked);
    Ok(format!("{} primes, exhaustive for p <= 13, verify checked 25", ps.len()))
}

fn c3_unit_criterion() -> Outcome {
    let (mut elements, mut products) = (0u64, 0u64);
    for n in 2..=7u64 {
        for m in 1..=3usize {
            for r in 0..n {
                let params = RingParams::new(n, m, r as i128).map_err(|e| e.to_string())?;
                let els = all_vectors(n, m);
                let mut one = vec![0; m];
                one[0] = 1;
                for a in els.iter().filter(|v| v.iter().any(|&c| c != 0)) {
                    let mut found = false;
                    for b in &els {
                        products += 1;
                        if ring_mul(a, b, n, r) == one {
                            found = true;
                            break;
                        }
                    }
                    let signed: Vec<i128> = a.iter().map(|&c| c as i128).collect();
                    let is_unit = params.element(&signed).map_err(|e| e.to_string())?.is_unit();
                    ensure!(is_unit == found, "n={n} m={m} r={r} a={a:?}: is_unit {is_unit}, search {found}");
                    elements += 1;
                }
            }
        }
    }
    ensure!(products >= 100_000, "only {products} products");
    Ok(format!("{elements} nonzero elements, {products} inverse-search products, 0 failures"))
}

fn c4_closed_forms() -> Outcome {
    let f2 = |n: u64, r: u64, a: &[u64]| -> u64 {
        let n = n as i128;
        let m = |x: i128, y: i128| (x * y).rem_euclid(n);
        let (r, a0, a1) = (r as i128, a[0] as i128, a[1] as i128);
        (m(a0, a0) - m(r, m(a1, a1))).rem_euclid(n) as u64
    };
    let f3 = |n: u64, r: u64, a: &[u64]| -> u64 {
        let n = n as i128;
        let m = |x: i128, y: i128| (x * y).rem_euclid(n);
        let (r, a0, a1, a2) = (r as i128, a[0] as i128, a[1] as i128, a[2] as i128);
        let t = m(m(a0, a0), a0) + m(r, m(m(a1, a1), a1)) + m(m(r, r), m(m(a2, a2), a2)) - m(m(3, r), m(a0, m(a1, a2)));
        t.rem_euclid(n) as u64
    };
    let mut cases = 0u64;
    for n in 2..=12u64 {
        for r in 0..n {
            for m in [2usize, 3] {
                let params = RingParams::new(n, m, r as i128).map_err(|e| e.to_string())?;
                for a in params.elements(u64::MAX).map_err(|e| e.to_string())? {
                    let want = if m == 2 { f2(n, r, &a.coeffs) } else { f3(n, r, &a.coeffs) };
                    ensure!(a.unital_det() == want, "{a}: det {} vs closed form {want}", a.unital_det());
                    cases += 1;
                }
            }
        }
    }
    let mut state = 0x2545_f491_4f6c_dd1du64;
    let mut next = move |bound: u64| {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state % bound
    };
    for _ in 0..1000 {
        let n = 2 + next((1 << 62) - 2);
        let r = next(n);
        let a: Vec<u64> = (0..3).map(|_| next(n)).collect();
        let p2 = RingParams::new(n, 2, r as i128).map_err(|e| e.to_string())?;
        let p3 = RingParams::new(n, 3, r as i128).map_err(|e| e.to_string())?;
        let e2 = p2.element(&[a[0] as i128, a[1] as i128]).map_err(|e| e.to_string())?;
        let e3 = p3.element(&[a[0] as i128, a[1] as i128, a[2] as i128]).map_err(|e| e.to_string())?;
        ensure!(e2.unital_det() == f2(n, r, &a), "{e2}: random m=2 case");
        ensure!(e3.unital_det() == f3(n, r, &a), "{e3}: random m=3 case");
        cases += 2;
    }
    Ok(format!("{cases} determinants (exhaustive n <= 12 plus 1000 random n < 2^62 for each m)"))
}

fn c5_field_differential() -> Outcome {
    let limits = Limits::default();
    let mut points = 0;
    for p in primes(13) {
        for m in 1..=3usize {
            for r in 0..p {
                let v = structure::is_field(p, m, r as i128, &limits).map_err(|e| e.to_string())?;
                let domain = !has_zero_divisor(p, m, r);
                ensure!(v.is_field == domain, "p={p} m={m} r={r}: is_field {}, integral domain {domain}", v.is_field);
                points += 1;
            }
        }
    }
    Ok(format!("{points} (p, m, r) points"))
}

fn multiplicative_order(r: u64, p: u64) -> u64 {
    (1..p).find(|&k| pow_mod(r, k, p) == 1).expect("unit")
}

fn t_by_stepping(p: u64, e: u64) -> u64 {
    (1..).find(|&t| pow_mod(p, t, e) == 1 % e).expect("p is a unit mod e")
}

fn theorem_grid() -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for p in primes(31) {
        for m in (2..=6).filter(|m| (p - 1) % m == 0) {
            for r in 1..p {
                out.push((p, m, r));
            }
        }
    }
    out
}

fn c6_splitting() -> Outcome {
    let grid = theorem_grid();
    for &(p, m, r) in &grid {
        let field = FieldSpec::prime(p).map_err(|e| e.to_string())?;
        let t = t_by_stepping(p, multiplicative_order(r, p) * m);
        let report = factor::factor_monic(&field, &Poly::binomial(&field, m as usize, FqElement(r)), 0).map_err(|e| e.to_string())?;
        ensure!(report.degrees() == vec![t as usize; (m / t) as usize], "p={p} m={m} r={r}: degrees {:?}, t = {t}", report.degrees());
        let split = structure::splitting_type(&field, m, FqElement(r)).map_err(|e| e.to_string())?;
        ensure!((split.t, split.factor_count) == (t, m / t), "p={p} m={m} r={r}: splitting_type {split:?}");
    }
    let f7 = FieldSpec::prime(7).map_err(|e| e.to_string())?;
    let irreducible = factor::factor_monic(&f7, &Poly::binomial(&f7, 3, FqElement(2)), 0).map_err(|e| e.to_string())?;
    ensure!(irreducible.is_irreducible(), "x^3 - 2 over F_7 factors as {:?}", irreducible.degrees());
    let f13 = FieldSpec::prime(13).map_err(|e| e.to_string())?;
    let roots = factor::roots(&f13, &Poly::binomial(&f13, 3, FqElement(5)), 100).map_err(|e| e.to_string())?;
    ensure!(roots == vec![FqElement(7), FqElement(8), FqElement(11)], "roots of x^3 - 5 over F_13: {roots:?}");
    Ok(format!("{} (p, m, r) points; x^3-2 irreducible over F_7; x^3-5 has roots 7, 8, 11 over F_13", grid.len()))
}

fn c7_unit_counts() -> Outcome {
    let limits = Limits::default();
    let mut points = 0;
    for (p, m, r) in theorem_grid() {
        if (p as u128).pow(m as u32) > 1_000_000 {
            continue;
        }
        let t = t_by_stepping(p, multiplicative_order(r, p) * m);
        let params = RingParams::new(p, m as usize, r as i128).map_err(|e| e.to_string())?;
        let count = ring::unit_count(&params, &limits).map_err(|e| e.to_string())?;
        let want = (p.pow(t as u32) - 1).pow((m / t) as u32);
        ensure!(count == want, "p={p} m={m} r={r}: {count} units, expected {want}");
        if (p, m, r) == (13, 3, 5) {
            ensure!(count == 1728, "Z_13[5^(1/3)] has {count} units");
        }
        points += 1;
    }
    Ok(format!("{points} rings with p^m <= 10^6, including 1728 units for (13, 3, 5)"))
}

fn predicted_count(q: u64, m: u64) -> u64 {
    let prime_factors: Vec<u64> = primes(m).into_iter().filter(|l| m.is_multiple_of(*l)).collect();
    let mut big_m = 1;
    for l in prime_factors {
        let mut rest = q - 1;
        while rest.is_multiple_of(l) {
            big_m *= l;
            rest /= l;
        }
    }
    let phi = (1..=big_m).filter(|&k| numth::gcd(k, big_m) == 1).count() as u64;
    phi * (q - 1) / big_m
}

fn c8_counting() -> Outcome {
    let limits = Limits::default();
    let mut cases: Vec<(FieldSpec, u64)> = Vec::new();
    for p in primes(31) {
        for m in (2..=6).filter(|m| (p - 1) % m == 0) {
            cases.push((FieldSpec::prime(p).map_err(|e| e.to_string())?, m));
        }
    }
    let f9 = FieldSpec::extension(3, 2, 0).map_err(|e| e.to_string())?;
    for m in [2, 4, 8] {
        cases.push((f9.clone(), m));
    }
    for (field, m) in &cases {
        let report = structure::count_irreducible(field, *m, &limits).map_err(|e| e.to_string())?;
        let mut enumerated = 0;
        for r in field.elements(u64::MAX).map_err(|e| e.to_string())?.skip(1) {
            let f = Poly::binomial(field, *m as usize, r);
            if factor::factor_monic(field, &f, 0).map_err(|e| e.to_string())?.is_irreducible() {
                enumerated += 1;
            }
        }
        let want = predicted_count(field.q(), *m);
        ensure!(report.predicted == want, "q={} m={m}: predicted {} vs {want}", field.q(), report.predicted);
        ensure!(enumerated == want, "q={} m={m}: {enumerated} irreducible binomials, predicted {want}", field.q());
        ensure!(report.enumerated == Some(want), "q={} m={m}: report enumerated {:?}", field.q(), report.enumerated);
    }
    let f13 = FieldSpec::prime(13).map_err(|e| e.to_string())?;
    let c3 = structure::count_irreducible(&f13, 3, &limits).map_err(|e| e.to_string())?;
    let c2 = structure::count_irreducible(&f13, 2, &limits).map_err(|e| e.to_string())?;
    ensure!(c3.predicted == 8 && c2.predicted == 6 && c2.predicted == (13 - 1) / 2, "fixtures: {} and {}", c3.predicted, c2.predicted);
    Ok(format!("{} (q, m) cases including F_9 with m = 2, 4, 8; (13,3) -> 8, (13,2) -> 6", cases.len()))
}

fn c9_power_map() -> Outcome {
    let cap = 1_000_000;
    let mut checks = 0;
    for p in primes(101) {
        for m in 1..=10u64 {
            let mut image = vec![false; p as usize];
            for a in 0..p {
                image[pow_mod(a, m, p) as usize] = true;
            }
            let full = image.iter().all(|&b| b);
            let onto = structure::power_map_onto(p, m).map_err(|e| e.to_string())?;
            ensure!(onto == full, "p={p} m={m}: onto {onto}, image full {full}");
            checks += 1;
        }
    }
    for p in primes(31) {
        let field = FieldSpec::prime(p).map_err(|e| e.to_string())?;
        for m in 1..=3u64 {
            let image: Vec<bool> = (0..p).map(|r| (0..p).any(|a| pow_mod(a, m, p) == r)).collect();
            for r in 1..p {
                let root = structure::has_linear_factor(&field, m, FqElement(r), cap).map_err(|e| e.to_string())?;
                let f = Poly::binomial(&field, m as usize, FqElement(r));
                let report = factor::factor_monic(&field, &f, 0).map_err(|e| e.to_string())?;
                ensure!(root.is_some() == report.degrees().contains(&1), "p={p} m={m} r={r}: linear factor disagreement");
                if m >= 2 {
                    ensure!(report.is_irreducible() != image[r as usize], "p={p} m={m} r={r}: root criterion fails");
                }
                checks += 1;
            }
        }
    }
    for p in [5u64, 7, 11, 13] {
        for r in 0..p {
            let cube = (0..p).any(|b| pow_mod(b, 3, p) == r);
            let w = structure::cubic_form_has_nontrivial_zero(p, r as i128, cap).map_err(|e| e.to_string())?;
            ensure!(w.is_some() == cube, "p={p} r={r}: witness {w:?}, cube {cube}");
            if let Some((a0, a1, a2)) = w {
                let (a0, a1, a2, ri) = (a0 as i128, a1 as i128, a2 as i128, r as i128);
                let form = a0.pow(3) + ri * a1.pow(3) + ri * ri * a2.pow(3) - 3 * ri * a0 * a1 * a2;
                ensure!(form.rem_euclid(p as i128) == 0 && (a0, a1, a2) != (0, 0, 0), "p={p} r={r}: bad witness");
            }
            checks += 1;
        }
    }
    Ok(format!("{checks} checks (onto p <= 101, m <= 10; linear factor and root criterion p <= 31; cubic form)"))
}

fn c10_oracle_agreement() -> Outcome {
    let mut points = 0;
    for q in 2..=13u64 {
        let fact = numth::factorize(q).map_err(|e| e.to_string())?;
        let [pp] = fact.factors.as_slice() else { continue };
        let field = FieldSpec::extension(pp.prime, pp.exponent, 0).map_err(|e| e.to_string())?;
        for m in 1..=6usize {
            for r in field.elements(u64::MAX).map_err(|e| e.to_string())? {
                let f = Poly::binomial(&field, m, r);
                let fast = factor::factor_monic(&field, &f, 0).map_err(|e| e.to_string())?;
                let brute = factor::brute_force_factor(&field, &f, 1_000_000).map_err(|e| e.to_string())?;
                ensure!(fast == brute, "q={q} m={m} r={r}: {} vs {}", fast.render(&field), brute.render(&field));
                ensure!(fast.remultiply(&field) == f && brute.remultiply(&field) == f, "q={q} m={m} r={r}: product mismatch");
                points += 1;
            }
        }
    }
    Ok(format!("{points} binomials over fields q <= 13"))
}

fn c11_squarefree() -> Outcome {
    let mut points = 0;
    for p in primes(31) {
        let field = FieldSpec::prime(p).map_err(|e| e.to_string())?;
        for m in (2..=10u64).filter(|&m| (p - 1) % m != 0 && primes(m).iter().all(|l| m % (l * l) != 0)) {
            for r in 1..p {
                let cert = structure::squarefree_reducible(&field, m, FqElement(r)).map_err(|e| format!("p={p} m={m} r={r}: {e}"))?;
                let d = cert.d;
                ensure!(primes(d).last() == Some(&d) && m % d == 0 && (p - 1) % d != 0, "p={p} m={m} r={r}: bad d = {d}");
                ensure!(pow_mod(cert.b.0, d, p) == r, "p={p} m={m} r={r}: b^d != r");
                let big = Poly::binomial(&field, m as usize, FqElement(r));
                let (_, rem) = factor::poly_divmod(&field, &big, &cert.factor(&field, m)).map_err(|e| e.to_string())?;
                ensure!(rem.is_zero(), "p={p} m={m} r={r}: x^(m/d) - b does not divide");
                points += 1;
            }
        }
    }
    Ok(format!("{points} (p, m, r) certificates"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("gaussian case", c1_gaussian),
        ("pythagorean sweep", c2_pythagorean),
        ("unit criterion", c3_unit_criterion),
        ("determinant closed forms", c4_closed_forms),
        ("field differential", c5_field_differential),
        ("splitting", c6_splitting),
        ("unit counts", c7_unit_counts),
        ("counting", c8_counting),
        ("power maps", c9_power_map),
        ("oracle agreement", c10_oracle_agreement),
        ("squarefree reducibility", c11_squarefree),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
