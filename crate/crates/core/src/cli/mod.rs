//! The `radring` command line.
//!
//! Every command produces a serializable report; `--json` prints it as JSON,
//! otherwise a short text rendering. Exit status: 0 success, 1 verification
//! failure, 2 usage or hypothesis error.

pub mod verify;

use std::fmt::Write as _;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::factor::{self, FactorizationReport, Poly};
use crate::gfq::{FieldSpec, FqElement};
use crate::numth;
use crate::ring::{self, RingElement, RingParams, Witness};
use crate::structure::{self, CountReport, FieldVerdict, Reason, RingDecomposition, SplittingType, SquarefreeCertificate};
use crate::Limits;

pub use verify::{Suite, VerifyConfig, VerifyOutput, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Parser)]
#[command(name = "radring", version, about = "Finite radical rings Z_n[r^(1/m)] and binomials x^m - r over finite fields")]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for extension-field moduli, randomized splitting and sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Cap on every enumeration (ring elements, field elements, brute-force candidates).
    #[arg(long, global = true)]
    pub cap: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Structure of Z_n[r^(1/m)]: field verdict, factors, splitting, units.
    #[command(allow_negative_numbers = true)]
    Analyze { n: u64, m: usize, r: i128 },
    /// Determinant, unit test, inverse or zero-divisor witness of an element.
    #[command(allow_negative_numbers = true)]
    Element {
        n: u64,
        m: usize,
        r: i128,
        /// Coefficients, ascending powers, e.g. 3,4 for 3+4s.
        #[arg(allow_hyphen_values = true)]
        coeffs: String,
        /// Optional second element; sum and product are reported.
        #[arg(allow_hyphen_values = true)]
        coeffs2: Option<String>,
    },
    /// Factor x^m - r (or a given polynomial) over F_q.
    #[command(allow_negative_numbers = true)]
    Factor {
        /// Field: a prime p, or p^k.
        field: String,
        /// Either `M R`, or one polynomial such as x^3-2 or 1,0,1.
        #[arg(num_args = 1..=2, required = true)]
        args: Vec<String>,
    },
    /// Count r in F_q^* with x^m - r irreducible.
    CountIrreducible { field: String, m: u64 },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Override every prime/modulus bound of the suite grids.
        #[arg(long)]
        max_p: Option<u64>,
        /// Override every exponent bound of the suite grids.
        #[arg(long)]
        max_m: Option<u64>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub ring: RingParams,
    pub n_is_prime: bool,
    pub crt_split: Vec<u64>,
    pub verdict: FieldVerdict,
    /// Factorization of `x^m - r` over `Z_n` for prime `n`.
    pub factorization: Option<FactorizationReport>,
    pub factors: Option<String>,
    pub splitting: Option<SplittingType>,
    pub decomposition: Option<RingDecomposition>,
    /// Units counted by enumeration when `n^m` is under the cap.
    pub unit_count: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroDivisorReport {
    pub searched: bool,
    pub witness: Option<RingElement>,
    pub product: Option<RingElement>,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementReport {
    pub element: RingElement,
    pub delta: u64,
    pub gcd: u64,
    pub is_unit: bool,
    pub inverse: Option<RingElement>,
    pub zero_divisor: Option<ZeroDivisorReport>,
    pub other: Option<RingElement>,
    pub sum: Option<RingElement>,
    pub product: Option<RingElement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub splitting: SplittingType,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorReport {
    pub field: FieldSpec,
    pub polynomial: Poly,
    pub factorization: FactorizationReport,
    pub factors: String,
    pub prediction: Option<Prediction>,
    /// Why no prediction was made.
    pub note: Option<String>,
    pub certificate: Option<SquarefreeCertificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Report {
    Analyze(AnalyzeReport),
    Element(ElementReport),
    Factor(FactorReport),
    CountIrreducible(CountReport),
    Verify(VerifyOutput),
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        let ok = match self {
            Report::Factor(f) => f.prediction.as_ref().is_none_or(|p| p.matches),
            Report::CountIrreducible(c) => c.matches() != Some(false),
            Report::Verify(v) => v.passed(),
            Report::Analyze(_) | Report::Element(_) => true,
        };
        if ok {
            EXIT_OK
        } else {
            EXIT_FAILURE
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        match self {
            Report::Analyze(a) => render_analyze(a),
            Report::Element(e) => render_element(e),
            Report::Factor(f) => render_factor(f),
            Report::CountIrreducible(c) => render_count(c),
            Report::Verify(v) => render_verify(v),
        }
    }
}

/// Exit status for a failed command: internal contradictions count as
/// verification failures, everything else as usage errors.
pub fn error_exit_code(err: &Error) -> i32 {
    match err {
        Error::Inconsistent(_) => EXIT_FAILURE,
        _ => EXIT_USAGE,
    }
}

impl Cli {
    pub fn limits(&self) -> Limits {
        self.cap.map_or_else(Limits::default, Limits::with_cap)
    }
}

/// Runs the command on a pool of `--workers` threads.
pub fn execute(cli: &Cli) -> Result<Report> {
    match cli.workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::Domain(format!("cannot start {w} workers: {e}")))?;
            pool.install(|| dispatch(cli))
        }
        None => dispatch(cli),
    }
}

fn dispatch(cli: &Cli) -> Result<Report> {
    let limits = cli.limits();
    match &cli.command {
        Command::Analyze { n, m, r } => analyze(*n, *m, *r, cli.seed, &limits).map(Report::Analyze),
        Command::Element { n, m, r, coeffs, coeffs2 } => element(*n, *m, *r, coeffs, coeffs2.as_deref(), &limits).map(Report::Element),
        Command::Factor { field, args } => {
            let spec = parse_field(field, cli.seed)?;
            let poly = match args.as_slice() {
                [text] => factor::parse_poly(text)?.to_poly(&spec),
                [m, r] => {
                    let m: usize = m.parse().map_err(|_| Error::Domain(format!("invalid m {m:?}")))?;
                    let r: i128 = r.parse().map_err(|_| Error::Domain(format!("invalid r {r:?}")))?;
                    Poly::binomial(&spec, m, field_element(&spec, r)?)
                }
                _ => return domain("factor takes M R or a single polynomial"),
            };
            factor_cmd(&spec, &poly, cli.seed).map(Report::Factor)
        }
        Command::CountIrreducible { field, m } => {
            let spec = parse_field(field, cli.seed)?;
            structure::count_irreducible(&spec, *m, &limits).map(Report::CountIrreducible)
        }
        Command::Verify { suite, max_p, max_m } => {
            let cfg = VerifyConfig { max_p: *max_p, max_m: *max_m, limits, seed: cli.seed };
            Ok(Report::Verify(verify::run(*suite, &cfg)))
        }
    }
}

/// Parses `13` (a prime field) or `3^2`; extension moduli come from `seed`.
pub fn parse_field(text: &str, seed: u64) -> Result<FieldSpec> {
    let bad = || Error::Domain(format!("invalid field {text:?}: expected a prime p or p^k"));
    match text.split_once('^') {
        Some((p, k)) => {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let k: u32 = k.trim().parse().map_err(|_| bad())?;
            FieldSpec::extension(p, k, seed)
        }
        None => {
            let q: u64 = text.trim().parse().map_err(|_| bad())?;
            if !numth::is_prime(q) {
                if let Some((p, k)) = numth::prime_power(q) {
                    return domain(format!("{q} is not prime; write {p}^{k} for the field with {q} elements"));
                }
            }
            FieldSpec::prime(q)
        }
    }
}

/// A command-line field element: the residue for prime fields, the packed
/// index for extensions; negative values denote additive inverses.
pub fn field_element(spec: &FieldSpec, value: i128) -> Result<FqElement> {
    if spec.is_prime_field() {
        return Ok(spec.from_int(value));
    }
    let x = spec.element(value.unsigned_abs().try_into().map_err(|_| Error::Domain(format!("{value} out of range")))?)?;
    Ok(if value < 0 { spec.neg(x) } else { x })
}

fn ring_params(n: u64, m: usize, r: i128, limits: &Limits) -> Result<RingParams> {
    if m > limits.max_m {
        return Err(Error::Range { what: "m".into(), value: m as u128, cap: limits.max_m as u128 });
    }
    RingParams::new(n, m, r)
}

pub fn analyze(n: u64, m: usize, r: i128, seed: u64, limits: &Limits) -> Result<AnalyzeReport> {
    let ring = ring_params(n, m, r, limits)?;
    let n_is_prime = numth::is_prime(n);
    let crt_split = if n_is_prime { vec![n] } else { numth::crt_split(n)? };
    let verdict = structure::is_field(n, m, r, limits)?;
    let (mut factorization, mut factors, mut splitting, mut decomposition) = (None, None, None, None);
    if n_is_prime {
        let field = FieldSpec::prime(n)?;
        let report = factor::factor_monic(&field, &Poly::binomial(&field, m, FqElement(ring.r)), seed)?;
        factors = Some(report.render(&field));
        factorization = Some(report);
        if (n - 1).is_multiple_of(m as u64) && ring.r != 0 {
            splitting = Some(structure::splitting_type(&field, m as u64, FqElement(ring.r))?);
            decomposition = Some(structure::ring_decomposition(&field, m as u64, FqElement(ring.r))?);
        }
    }
    let unit_count = if ring.size() <= limits.enum_cap as u128 { Some(ring::unit_count(&ring, limits)?) } else { None };
    Ok(AnalyzeReport { ring, n_is_prime, crt_split, verdict, factorization, factors, splitting, decomposition, unit_count })
}

pub fn element(n: u64, m: usize, r: i128, coeffs: &str, coeffs2: Option<&str>, limits: &Limits) -> Result<ElementReport> {
    let params = ring_params(n, m, r, limits)?;
    let a = params.element(&ring::parse_coeffs(coeffs)?)?;
    let other = coeffs2.map(|c| ring::parse_coeffs(c).and_then(|c| params.element(&c))).transpose()?;
    let delta = a.unital_det();
    let is_unit = a.is_unit();
    let inverse = if is_unit { Some(a.inverse()?) } else { None };
    let zero_divisor = if is_unit || a.is_zero() {
        None
    } else {
        Some(match a.zero_divisor_witness(limits)? {
            Witness::Found(b) => {
                let product = a.mul(&b)?;
                let verified = product.is_zero() && !b.is_zero();
                ZeroDivisorReport { searched: true, witness: Some(b), product: Some(product), verified }
            }
            Witness::NotSearched => ZeroDivisorReport { searched: false, witness: None, product: None, verified: false },
            Witness::Unit => return Err(Error::Inconsistent(format!("{a} has delta {delta} but no inverse"))),
        })
    };
    let sum = other.as_ref().map(|b| a.add(b)).transpose()?;
    let product = other.as_ref().map(|b| a.mul(b)).transpose()?;
    Ok(ElementReport { gcd: numth::gcd(delta, n), element: a, delta, is_unit, inverse, zero_divisor, other, sum, product })
}

/// `(m, r)` when `f = x^m - r`.
fn as_binomial(spec: &FieldSpec, f: &Poly) -> Option<(u64, FqElement)> {
    let m = f.degree()?;
    let middle_zero = (1..m).all(|i| f.coeff(i).is_zero());
    (m >= 1 && f.lead() == FqElement::ONE && middle_zero).then(|| (m as u64, spec.neg(f.coeff(0))))
}

pub fn factor_cmd(spec: &FieldSpec, f: &Poly, seed: u64) -> Result<FactorReport> {
    let report = factor::factor_monic(spec, f, seed)?;
    let factors = report.render(spec);
    let (mut prediction, mut note, mut certificate) = (None, None, None);
    match as_binomial(spec, f) {
        None => note = Some("n/a (not of the form x^m - r)".into()),
        Some((_, r)) if r.is_zero() => note = Some("n/a (r = 0)".into()),
        Some((m, r)) if !(spec.q() - 1).is_multiple_of(m) => {
            note = Some("n/a (m ∤ q−1)".into());
            if m >= 2 && numth::is_squarefree(m)? {
                certificate = Some(structure::squarefree_reducible(spec, m, r)?);
            }
        }
        Some((m, r)) => {
            let split = structure::splitting_type(spec, m, r)?;
            let matches = report.degrees() == vec![split.t as usize; split.factor_count as usize];
            prediction = Some(Prediction { splitting: split, matches });
        }
    }
    Ok(FactorReport { field: spec.clone(), polynomial: f.clone(), factorization: report, factors, prediction, note, certificate })
}

/// `F_{q^t}^{copies}`, e.g. `F_9` or `F_13^3`.
fn decomposition_text(q: u64, d: &RingDecomposition) -> String {
    let base = match q.checked_pow(d.t as u32) {
        Some(size) => format!("F_{size}"),
        None => format!("F_({q}^{})", d.t),
    };
    if d.copies == 1 {
        base
    } else {
        format!("{base}^{}", d.copies)
    }
}

fn reason_text(reason: &Reason, n: u64) -> String {
    let field = FieldSpec::prime(n).ok();
    match reason {
        Reason::CompositeN { divisor } => format!("COMPOSITE_N ({divisor} divides {n})"),
        Reason::BinomialReducible { factor } => {
            let f = Poly::from_u64s(factor);
            let shown = field.map_or_else(|| format!("{factor:?}"), |fs| f.render(&fs, "x"));
            format!("BINOMIAL_REDUCIBLE ({shown} divides x^m - r)")
        }
        Reason::IrreducibleOverPrime => "IRREDUCIBLE_OVER_PRIME".into(),
        Reason::RootCriterion { root: Some(a) } => format!("ROOT_CRITERION (r = {a}^m)"),
        Reason::RootCriterion { root: None } => "ROOT_CRITERION (r is not an m-th power)".into(),
    }
}

fn render_analyze(a: &AnalyzeReport) -> String {
    let RingParams { n, m, r } = a.ring;
    let mut out = String::new();
    let _ = writeln!(out, "ring          {} (n = {n}, m = {m}, r = {r})", a.ring);
    let _ = writeln!(out, "n             {}", if a.n_is_prime { "prime" } else { "composite" });
    let _ = writeln!(out, "crt split     {}", a.crt_split.iter().map(u64::to_string).collect::<Vec<_>>().join(" x "));
    let _ = writeln!(out, "field         {}", if a.verdict.is_field { "yes" } else { "no" });
    for reason in &a.verdict.reasons {
        let _ = writeln!(out, "reason        {}", reason_text(reason, n));
    }
    if let Some(f) = &a.factors {
        let _ = writeln!(out, "factors       {f}");
    }
    if let Some(s) = &a.splitting {
        let _ = writeln!(out, "splitting     ord(r) = {}, t = {}, {} factor(s) of degree {}", s.ord_r, s.t, s.factor_count, s.t);
    }
    if let Some(d) = &a.decomposition {
        let _ = writeln!(out, "decomposition {}", decomposition_text(n, d));
    }
    match (a.decomposition, a.unit_count) {
        (Some(d), Some(u)) => {
            let _ = writeln!(out, "units         {u} (predicted {})", d.unit_count_prediction);
        }
        (Some(d), None) => {
            let _ = writeln!(out, "units         predicted {} (not enumerated)", d.unit_count_prediction);
        }
        (None, Some(u)) => {
            let _ = writeln!(out, "units         {u}");
        }
        (None, None) => {}
    }
    out
}

fn render_element(e: &ElementReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "element   {}", e.element);
    let _ = writeln!(out, "delta     {} (gcd with n: {})", e.delta, e.gcd);
    let _ = writeln!(out, "unit      {}", if e.is_unit { "yes" } else { "no" });
    if let Some(inv) = &e.inverse {
        let _ = writeln!(out, "inverse   {}", inv.to_text());
    }
    if e.element.is_zero() {
        let _ = writeln!(out, "zero      the zero element");
    }
    if let Some(z) = &e.zero_divisor {
        match (&z.witness, &z.product) {
            (Some(w), Some(p)) => {
                let status = if z.verified { "verified" } else { "NOT verified" };
                let _ = writeln!(out, "witness   {} (product {}, {status})", w.to_text(), p.to_text());
            }
            _ => {
                let _ = writeln!(out, "witness   not searched (ring above the search cap)");
            }
        }
    }
    if let (Some(b), Some(s), Some(p)) = (&e.other, &e.sum, &e.product) {
        let _ = writeln!(out, "other     {}", b.to_text());
        let _ = writeln!(out, "sum       {}", s.to_text());
        let _ = writeln!(out, "product   {}", p.to_text());
    }
    out
}

fn render_factor(f: &FactorReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "field       {}", f.field);
    let _ = writeln!(out, "polynomial  {}", f.polynomial.render(&f.field, "x"));
    let _ = writeln!(out, "factors     {}", f.factors);
    match (&f.prediction, &f.note) {
        (Some(p), _) => {
            let s = &p.splitting;
            let flag = if p.matches { "MATCH" } else { "MISMATCH" };
            let _ = writeln!(out, "prediction  t = {}, {} factor(s) of degree {}: {flag}", s.t, s.factor_count, s.t);
        }
        (None, Some(note)) => {
            let _ = writeln!(out, "prediction  {note}");
        }
        (None, None) => {}
    }
    if let (Some(c), Some((m, _))) = (&f.certificate, as_binomial(&f.field, &f.polynomial)) {
        let factor = c.factor(&f.field, m).render(&f.field, "x");
        let _ = writeln!(out, "certificate d = {}, b = {}: {factor} divides the input", c.d, f.field.render(c.b));
    }
    out
}

fn render_count(c: &CountReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "q           {}", c.q);
    let _ = writeln!(out, "m           {}", c.m);
    let _ = writeln!(out, "M           {}", c.big_m);
    let _ = writeln!(out, "predicted   {}", c.predicted);
    match c.enumerated {
        Some(e) => {
            let _ = writeln!(out, "enumerated  {e}");
            let _ = writeln!(out, "{}", if e == c.predicted { "MATCH" } else { "MISMATCH" });
        }
        None => {
            let _ = writeln!(out, "enumerated  skipped (q above the cap)");
        }
    }
    out
}

fn render_verify(v: &VerifyOutput) -> String {
    let mut out = String::new();
    for r in &v.reports {
        let status = if r.failures.is_empty() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{:<17} {status}  checked {}, failures {}", r.suite.name(), r.checked, r.failures.len());
        for (name, desc) in &r.grid {
            let _ = writeln!(out, "  grid {name}: {desc}");
        }
        for f in &r.failures {
            let _ = writeln!(out, "  FAIL [{}] {}: expected {}, got {}", f.point, f.check, f.expected, f.actual);
        }
    }
    let _ = writeln!(out, "{}", if v.passed() { "all suites passed" } else { "verification FAILED" });
    out
}

/// Parses arguments, runs, prints, and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            print!("{}", if cli.json { report.to_json() } else { report.to_text() });
            report.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            error_exit_code(&e)
        }
    }
}
