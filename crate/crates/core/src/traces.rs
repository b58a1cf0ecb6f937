//! Traces of diagonal actions on the graded cohomology algebra.
//!
//! Two independent exact routes are used. Degreewise traces are expanded
//! symbolically in the `λ_j` and evaluated through symmetric-function
//! identities ([`evaluate_symmetric`]); closed forms go through the
//! polynomials `Q_e(T) = ∏_j (1 - λ_j^e T)` built from power sums of `P`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::cohomology::{GeneratorKind, GeneratorSpec};
use crate::curves::WeilPolynomial;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::field::PrimePower;
use crate::frobenius::{base_action, ActionContext, DiagonalAction, FrobeniusKind, Space};
use crate::groups::GroupData;
use crate::scalars::{
    format_rational, q_pow, rational_to_f64, HalfIntExp, Rational, RootOfUnity, ScalarMonomial, ScalarSum,
};

/// Traces on `H^0 .. H^M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceSeries {
    coeffs: Vec<ScalarSum>,
}

impl TraceSeries {
    pub fn coeffs(&self) -> &[ScalarSum] {
        &self.coeffs
    }

    pub fn max_degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Coefficients of `∏ 1/(1 - α t^deg) · ∏ (1 + β t^deg)` up to `t^M`.
pub fn weighted_series(action: &DiagonalAction, max_degree: usize) -> Result<TraceSeries> {
    let w = action.context().width();
    let mut s = vec![ScalarSum::zero(w); max_degree + 1];
    s[0] = ScalarSum::one(w);
    for (g, m) in action.entries() {
        let d = g.degree as usize;
        if d == 0 {
            return Err(Error::Degenerate(format!("{g} sits in degree 0")));
        }
        if g.is_even() {
            for k in d..=max_degree {
                let add = s[k - d].mul_monomial(m)?;
                s[k] = s[k].add(&add)?;
            }
        } else {
            for k in (d..=max_degree).rev() {
                let add = s[k - d].mul_monomial(m)?;
                s[k] = s[k].add(&add)?;
            }
        }
    }
    Ok(TraceSeries { coeffs: s })
}

/// `p_k = Σ_j λ_j^k` for every integer `k`.
pub fn lambda_power_sum(p: &WeilPolynomial, k: i64) -> Rational {
    p.power_sum(k)
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Calls `f` on every set partition of `0..n`, as a block index per element.
fn for_each_set_partition(n: usize, f: &mut impl FnMut(&[usize], usize)) {
    fn rec(labels: &mut Vec<usize>, n: usize, blocks: usize, f: &mut impl FnMut(&[usize], usize)) {
        if labels.len() == n {
            f(labels, blocks);
            return;
        }
        for b in 0..=blocks {
            labels.push(b);
            rec(labels, n, blocks.max(b + 1), f);
            labels.pop();
        }
    }
    rec(&mut Vec::with_capacity(n), n, 0, f);
}

/// `Σ_{j_1..j_t distinct} ∏_k λ_{j_k}^{e_k}` by Möbius inversion over set
/// partitions.
fn injective_sum(exps: &[i64], power_sum: &mut impl FnMut(i64) -> Rational) -> Rational {
    let mut total = Rational::zero();
    for_each_set_partition(exps.len(), &mut |labels, blocks| {
        let mut sizes = vec![0usize; blocks];
        let mut sums = vec![0i64; blocks];
        for (k, &b) in labels.iter().enumerate() {
            sizes[b] += 1;
            sums[b] += exps[k];
        }
        let mut term = Rational::one();
        for b in 0..blocks {
            let weight = factorial(sizes[b] - 1) * if sizes[b] % 2 == 0 { -1 } else { 1 };
            term *= Rational::from_integer(weight) * power_sum(sums[b]);
        }
        total += term;
    });
    total
}

/// Exact value of a λ-expression that is symmetric under permuting the
/// `λ_j`, in `Q(ζ)`.
///
/// The terms are split into orbits of the symmetric group; each orbit must
/// be complete with a common coefficient, and then contributes that
/// coefficient times a monomial symmetric function of the `λ_j`.
pub fn evaluate_symmetric(sum: &ScalarSum, p: &WeilPolynomial) -> Result<Cyclotomic> {
    if sum.is_lambda_free() {
        return Cyclotomic::from_sum(sum, p.q());
    }
    let n = 2 * p.genus();
    if sum.width() != n {
        return Err(Error::Context(format!("λ-vector length {} vs 2g = {n}", sum.width())));
    }
    type OrbitKey = (RootOfUnity, HalfIntExp, Vec<i64>);
    let mut orbits: BTreeMap<OrbitKey, Vec<&ScalarMonomial>> = BTreeMap::new();
    for t in sum.terms() {
        let mut exps: Vec<i64> = t.lam().iter().copied().filter(|&e| e != 0).collect();
        exps.sort_unstable();
        orbits.entry((t.zeta(), t.qexp(), exps)).or_default().push(t);
    }
    let mut cache: HashMap<i64, Rational> = HashMap::new();
    let mut power_sum = |k: i64| cache.entry(k).or_insert_with(|| p.power_sum(k)).clone();
    let mut reduced = Vec::with_capacity(orbits.len());
    for ((zeta, qexp, exps), terms) in orbits {
        let coef = terms[0].coef();
        if terms.iter().any(|t| t.coef() != coef) {
            return Err(Error::SymbolicResidue(format!("{sum} is not symmetric in the λ_j")));
        }
        let mut mult_factorials = BigInt::one();
        for chunk in exps.chunk_by(|a, b| a == b) {
            mult_factorials *= factorial(chunk.len());
        }
        let orbit_size = factorial(n) / factorial(n - exps.len()) / &mult_factorials;
        if BigInt::from(terms.len()) != orbit_size {
            return Err(Error::SymbolicResidue(format!("{sum} is not symmetric in the λ_j")));
        }
        let m = injective_sum(&exps, &mut power_sum) / Rational::from_integer(mult_factorials);
        let c = coef * m;
        if !c.is_zero() {
            reduced.push(ScalarMonomial::new(c, zeta, qexp, Vec::new())?);
        }
    }
    Cyclotomic::from_sum(&ScalarSum::from_terms(0, reduced)?, p.q())
}

/// `S_m = Σ_{k ≤ m} (-1)^k tr(H^k)` for `m = 0..M`.
pub fn alternating_partial_sums(
    action: &DiagonalAction,
    max_degree: usize,
    p: &WeilPolynomial,
) -> Result<Vec<Cyclotomic>> {
    let series = weighted_series(action, max_degree)?;
    let traces: Vec<Cyclotomic> = series.coeffs.par_iter().map(|c| evaluate_symmetric(c, p)).collect::<Result<_>>()?;
    let mut acc = Cyclotomic::from_rational(Rational::zero());
    Ok(traces
        .into_iter()
        .enumerate()
        .map(|(k, t)| {
            acc = if k % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
            acc.clone()
        })
        .collect())
}

/// Coefficients of `Q_e(T) = ∏_j (1 - λ_j^e T)`, lowest degree first.
pub fn lambda_product_polynomial(p: &WeilPolynomial, e: i64) -> Vec<Rational> {
    let n = 2 * p.genus();
    if e == 0 {
        let mut binom = BigInt::one();
        return (0..=n)
            .map(|k| {
                let c = Rational::from_integer(if k % 2 == 0 { binom.clone() } else { -binom.clone() });
                binom = &binom * BigInt::from(n - k) / BigInt::from(k + 1);
                c
            })
            .collect();
    }
    let a = e.abs();
    let pi: Vec<Rational> = (1..=n as i64).map(|k| p.power_sum(a * k)).collect();
    let mut sigma = vec![Rational::one()];
    for k in 1..=n {
        let mut s = Rational::zero();
        for i in 1..=k {
            let term = &sigma[k - i] * &pi[i - 1];
            if i % 2 == 1 {
                s += term;
            } else {
                s -= term;
            }
        }
        sigma.push(s / Rational::from_integer(BigInt::from(k)));
    }
    sigma
        .into_iter()
        .enumerate()
        .map(|(k, s)| {
            let c = if k % 2 == 0 { s } else { -s };
            if e < 0 {
                c * q_pow(p.q(), -a * k as i64)
            } else {
                c
            }
        })
        .collect()
}

/// `∏_j (1 - c λ_j^e)`.
pub fn lambda_power_product(p: &WeilPolynomial, e: i64, c: &Rational) -> Rational {
    lambda_product_polynomial(p, e).iter().rev().fold(Rational::zero(), |acc, k| acc * c + k)
}

/// [`lambda_power_product`] at a cyclotomic argument.
pub fn lambda_power_product_cyclotomic(p: &WeilPolynomial, e: i64, c: &Cyclotomic) -> Cyclotomic {
    lambda_product_polynomial(p, e).iter().rev().fold(Cyclotomic::from_rational(Rational::zero()), |acc, k| {
        acc.mul(c).add(&Cyclotomic::from_rational(k.clone()))
    })
}

/// `|coef| · q^(halves/2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Magnitude {
    pub coef: Rational,
    pub exp: HalfIntExp,
}

impl Magnitude {
    pub fn of(m: &ScalarMonomial) -> Self {
        let (coef, exp) = m.magnitude();
        Magnitude { coef, exp }
    }

    pub fn zero() -> Self {
        Magnitude { coef: Rational::zero(), exp: HalfIntExp::ZERO }
    }

    /// Exact comparison via `coef² · q^halves`.
    pub fn compare(&self, other: &Magnitude, q: u64) -> Ordering {
        match (self.coef.is_zero(), other.coef.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let ratio = (&self.coef / &other.coef).pow(2) * q_pow(q, self.exp.halves() - other.exp.halves());
        ratio.cmp(&Rational::one())
    }

    pub fn compare_one(&self, q: u64) -> Ordering {
        self.compare(&Magnitude { coef: Rational::one(), exp: HalfIntExp::ZERO }, q)
    }

    /// A rational number at least as large as the magnitude.
    pub fn upper_bound(&self, q: u64) -> Rational {
        let h = self.exp.halves();
        let base = &self.coef * q_pow(q, h.div_euclid(2));
        if h.rem_euclid(2) == 0 {
            base
        } else {
            base * sqrt_upper(q)
        }
    }

    pub fn to_f64(&self, q: u64) -> f64 {
        rational_to_f64(&self.coef) * self.exp.to_f64(q)
    }
}

/// `(isqrt(q · 2^40) + 1) / 2^20 ≥ √q`.
fn sqrt_upper(q: u64) -> Rational {
    let scaled: BigInt = BigInt::from(q) << 40u32;
    Rational::new(scaled.sqrt() + 1, BigInt::one() << 20)
}

/// `q^-1`, `2 * q^-3/2`, `0`.
impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coef.is_zero() {
            return write!(f, "0");
        }
        if self.coef.is_one() {
            write!(f, "{}", self.exp)
        } else {
            write!(f, "{} * {}", format_rational(&self.coef), self.exp)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMagnitude {
    pub generator: GeneratorSpec,
    pub eigenvalue: ScalarMonomial,
    pub magnitude: Magnitude,
    /// Comparison of the magnitude with 1.
    pub versus_one: Ordering,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Converges {
        rho: Magnitude,
    },
    /// Some even generators have eigenvalues of magnitude exactly 1.
    Pole {
        generators: Vec<GeneratorSpec>,
    },
    Diverges {
        generators: Vec<GeneratorSpec>,
    },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Converges { .. } => "converges",
            Verdict::Pole { .. } => "pole",
            Verdict::Diverges { .. } => "diverges",
        }
    }

    pub fn converges(&self) -> bool {
        matches!(self, Verdict::Converges { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub verdict: Verdict,
    pub magnitudes: Vec<GeneratorMagnitude>,
    /// Largest odd-generator magnitude, if there are odd generators.
    pub beta_max: Option<Magnitude>,
}

/// The alternating trace converges iff every even generator has an
/// eigenvalue of magnitude below 1; decided in exact arithmetic.
pub fn convergence_report(action: &DiagonalAction) -> ConvergenceReport {
    let q = action.context().q.q();
    let magnitudes: Vec<GeneratorMagnitude> = action
        .entries()
        .iter()
        .map(|(g, m)| {
            let magnitude = Magnitude::of(m);
            let versus_one = magnitude.compare_one(q);
            GeneratorMagnitude { generator: *g, eigenvalue: m.clone(), magnitude, versus_one }
        })
        .collect();
    let even = || magnitudes.iter().filter(|g| g.generator.is_even());
    let offending = |o: Ordering| even().filter(|g| g.versus_one == o).map(|g| g.generator).collect::<Vec<_>>();
    let above = offending(Ordering::Greater);
    let at_one = offending(Ordering::Equal);
    let max_of = |it: &mut dyn Iterator<Item = &GeneratorMagnitude>| {
        it.map(|g| g.magnitude.clone()).reduce(|a, b| if b.compare(&a, q) == Ordering::Greater { b } else { a })
    };
    let verdict = if !above.is_empty() {
        Verdict::Diverges { generators: above }
    } else if !at_one.is_empty() {
        Verdict::Pole { generators: at_one }
    } else {
        Verdict::Converges { rho: max_of(&mut even()).unwrap_or_else(Magnitude::zero) }
    };
    let beta_max = max_of(&mut magnitudes.iter().filter(|g| !g.generator.is_even()));
    ConvergenceReport { verdict, magnitudes, beta_max }
}

const RADIUS_DENOMINATOR_BITS: u32 = 20;

fn floor_to_dyadic(x: f64) -> Option<Rational> {
    let scaled = (x * f64::from(1u32 << RADIUS_DENOMINATOR_BITS)).floor();
    let n = BigInt::from(scaled.to_i64()?);
    Some(Rational::new(n, BigInt::one() << RADIUS_DENOMINATOR_BITS))
}

/// Exact bound on `|S_∞ - S_M|` for a convergent action.
///
/// The degreewise traces are dominated by the coefficients of
/// `W(t) = ∏ 1/(1 - |α| t^D) · ∏ (1 + |β| t^D)`, so for any rational
/// `R > 1` inside its disc of convergence the tail is at most
/// `W(R) · R/(R - 1) · R^{-(M+1)}`. A few radii are tried and the
/// smallest verified bound is returned.
pub fn error_bound(action: &DiagonalAction, max_degree: usize) -> Option<Rational> {
    let q = action.context().q.q();
    let report = convergence_report(action);
    if !report.verdict.converges() {
        return None;
    }
    let even: Vec<(Rational, u32)> = report
        .magnitudes
        .iter()
        .filter(|g| g.generator.is_even())
        .map(|g| (g.magnitude.upper_bound(q), g.generator.degree))
        .collect();
    let odd: Vec<(Rational, u32)> = report
        .magnitudes
        .iter()
        .filter(|g| !g.generator.is_even())
        .map(|g| (g.magnitude.upper_bound(q), g.generator.degree))
        .collect();
    let r_max = even
        .iter()
        .filter(|(a, _)| !a.is_zero())
        .map(|(a, d)| rational_to_f64(a).recip().powf(1.0 / *d as f64))
        .fold(f64::INFINITY, f64::min);
    let r_max = if r_max.is_finite() { r_max } else { 4.0 };
    let m = max_degree as f64;
    let near = m / (m + even.len() as f64 + 1.0);
    let candidates = [r_max * near, 1.0 + (r_max - 1.0) * near, 1.0 + (r_max - 1.0) * 0.5, 1.0 + (r_max - 1.0) * 0.9];
    let one = Rational::one();
    candidates
        .iter()
        .filter_map(|&r| floor_to_dyadic(r))
        .filter(|r| *r > one)
        .filter_map(|r| {
            let mut w = Rational::one();
            for (a, d) in &even {
                let den = &one - a * num_traits::pow(r.clone(), *d as usize);
                if !den.is_positive() {
                    return None;
                }
                w /= den;
            }
            for (b, d) in &odd {
                w *= &one + b * num_traits::pow(r.clone(), *d as usize);
            }
            let tail = w * &r / (&r - &one) / num_traits::pow(r.clone(), max_degree + 1);
            Some(tail)
        })
        .min()
}

/// One factor of a closed-form product and its value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormFactor {
    pub label: String,
    /// `None` for a pole.
    pub value: Option<Cyclotomic>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub factors: Vec<ClosedFormFactor>,
    /// Withheld unless the alternating trace converges.
    pub value: Option<Cyclotomic>,
}

impl ClosedForm {
    pub fn expression(&self) -> String {
        self.factors.iter().map(|f| f.label.as_str()).collect::<Vec<_>>().join(" * ")
    }
}

/// The odd generators of index `i` have eigenvalues `c_i λ_j^{e_i}`.
struct ExteriorBlock {
    i: usize,
    c: ScalarMonomial,
    e: i64,
}

fn exterior_blocks(action: &DiagonalAction) -> Result<Vec<ExteriorBlock>> {
    let mut blocks: Vec<ExteriorBlock> = Vec::new();
    for (g, m) in action.entries().iter().filter(|(g, _)| g.kind == GeneratorKind::B) {
        let j = g.j.expect("b generators carry j") - 1;
        let e = m.lam()[j];
        if m.lam().iter().enumerate().any(|(k, &x)| k != j && x != 0) {
            return Err(Error::SymbolicResidue(format!("{g} ↦ {m} mixes several λ_j")));
        }
        let c = ScalarMonomial::new(m.coef().clone(), m.zeta(), m.qexp(), Vec::new())?;
        match blocks.iter().find(|b| b.i == g.i) {
            Some(b) if b.c != c || b.e != e => {
                return Err(Error::SymbolicResidue(format!("{g} ↦ {m} breaks the symmetry in j")))
            }
            Some(_) => {}
            None => blocks.push(ExteriorBlock { i: g.i, c, e }),
        }
    }
    Ok(blocks)
}

fn cyclotomic_of(m: &ScalarMonomial, q: u64) -> Result<Cyclotomic> {
    let free = ScalarMonomial::new(m.coef().clone(), m.zeta(), m.qexp(), Vec::new())?;
    Cyclotomic::from_sum(&ScalarSum::from_monomial(free), q)
}

fn check_binding(action: &DiagonalAction, p: &WeilPolynomial) -> Result<()> {
    let ctx = action.context();
    if ctx.q.q() != p.q() {
        return Err(Error::Context(format!("action over q = {} but P over q = {}", ctx.q.q(), p.q())));
    }
    if let Space::Bundles { genus } = ctx.space {
        if genus != p.genus() {
            return Err(Error::Context(format!("action for genus {genus} but P has genus {}", p.genus())));
        }
    }
    Ok(())
}

fn lambda_label(e: i64) -> String {
    match e {
        1 => "L_j".into(),
        _ => format!("L_j^{e}"),
    }
}

/// Factors `1/(1 - α)` for even generators and `∏_j (1 - c_i λ_j^{e_i})`
/// for each exterior block.
pub fn closed_form(action: &DiagonalAction, p: &WeilPolynomial) -> Result<ClosedForm> {
    check_binding(action, p)?;
    let q = p.q();
    let one = Cyclotomic::from_rational(Rational::one());
    let mut factors = Vec::new();
    for (g, m) in action.entries().iter().filter(|(g, _)| g.is_even()) {
        if !m.is_lambda_free() {
            return Err(Error::SymbolicResidue(format!("{g} ↦ {m} depends on λ")));
        }
        let den = one.sub(&cyclotomic_of(m, q)?);
        let value = (!den.is_zero()).then(|| invert(&den)).transpose()?;
        factors.push(ClosedFormFactor { label: format!("1/(1 - {m})"), value });
    }
    for b in exterior_blocks(action)? {
        let c = cyclotomic_of(&b.c, q)?;
        factors.push(ClosedFormFactor {
            label: format!("prod_j (1 - {} * {})", b.c, lambda_label(b.e)),
            value: Some(lambda_power_product_cyclotomic(p, b.e, &c)),
        });
    }
    let verdict = convergence_report(action).verdict;
    let value = if verdict.converges() {
        factors.iter().try_fold(one.clone(), |acc, f| f.value.as_ref().map(|v| acc.mul(v)))
    } else {
        None
    };
    Ok(ClosedForm { factors, value })
}

/// Inverse in `Q(ζ_N)` via the norm: `x^{-1} = (∏_{σ ≠ 1} σx) / N(x)`.
fn invert(x: &Cyclotomic) -> Result<Cyclotomic> {
    if x.is_zero() {
        return Err(Error::Internal("inverting zero".into()));
    }
    if let Some(r) = x.as_rational() {
        return Ok(Cyclotomic::from_rational(r.recip()));
    }
    let n = x.order();
    let mut conj = Cyclotomic::from_rational(Rational::one());
    for k in 2..n {
        if k.gcd(&n) == 1 {
            conj = conj.mul(&x.galois(k));
        }
    }
    let norm = x.mul(&conj).as_rational().ok_or_else(|| Error::Internal("field norm is not rational".into()))?;
    Ok(conj.scale(&norm.recip()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceReport {
    pub max_degree: usize,
    pub partial_sums: Vec<Cyclotomic>,
    pub closed_form: ClosedForm,
    pub convergence: ConvergenceReport,
    pub error_bound: Option<Rational>,
}

/// Partial sums up to `t^M`, the closed form, the verdict and the tail
/// bound at `M`.
pub fn closed_form_trace(action: &DiagonalAction, p: &WeilPolynomial, max_degree: usize) -> Result<TraceReport> {
    let closed_form = closed_form(action, p)?;
    Ok(TraceReport {
        max_degree,
        partial_sums: alternating_partial_sums(action, max_degree, p)?,
        closed_form,
        convergence: convergence_report(action),
        error_bound: error_bound(action, max_degree),
    })
}

/// `q^{(g-1) dim G}` times the alternating trace of `Frob`.
pub fn behrend_mass(group: &GroupData, p: &WeilPolynomial) -> Result<Option<Cyclotomic>> {
    let q = PrimePower::from_q(p.q())?;
    let ctx = ActionContext::bundles(group.clone(), p.genus(), q);
    let frob = base_action(FrobeniusKind::AbsoluteArithmetic, &ctx)?;
    let scale = q_pow(p.q(), (p.genus() as i64 - 1) * group.dimension() as i64);
    Ok(closed_form(&frob, p)?.value.map(|v| v.scale(&scale)))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SignMode {
    /// `∏ (1 - β)`: odd classes carry the alternating sign.
    Signed,
    /// `∏ (1 + β)`.
    #[default]
    Unsigned,
}

impl FromStr for SignMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "signed" => Ok(SignMode::Signed),
            "unsigned" => Ok(SignMode::Unsigned),
            _ => Err(Error::Parse { pos: 0, msg: format!("sign mode {s:?}; expected signed or unsigned") }),
        }
    }
}

/// Trace over the spans of the even generators plus the whole exterior
/// algebra on the odd ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedTrace {
    pub sign: SignMode,
    pub a_part: Cyclotomic,
    pub f_part: Cyclotomic,
    /// `∏ (1 ∓ β) - 1`.
    pub exterior_part: Cyclotomic,
    pub value: Cyclotomic,
    /// `∏ (1 + |β|) - 1`, a rational upper bound on the exterior part.
    pub exterior_magnitude_bound: Rational,
}

pub fn generator_truncated_trace(
    action: &DiagonalAction,
    p: &WeilPolynomial,
    sign: SignMode,
) -> Result<TruncatedTrace> {
    check_binding(action, p)?;
    let q = p.q();
    let zero = Cyclotomic::from_rational(Rational::zero());
    let one = Cyclotomic::from_rational(Rational::one());
    let mut a_part = zero.clone();
    let mut f_part = zero.clone();
    let mut bound = Rational::one();
    for (g, m) in action.entries() {
        match g.kind {
            GeneratorKind::A | GeneratorKind::C => a_part = a_part.add(&cyclotomic_of(m, q)?),
            GeneratorKind::F => f_part = f_part.add(&cyclotomic_of(m, q)?),
            GeneratorKind::B => bound *= Rational::one() + Magnitude::of(m).upper_bound(q),
        }
    }
    let mut product = one.clone();
    for b in exterior_blocks(action)? {
        let c = cyclotomic_of(&b.c, q)?;
        let c = match sign {
            SignMode::Signed => c,
            SignMode::Unsigned => c.scale(&-Rational::one()),
        };
        product = product.mul(&lambda_power_product_cyclotomic(p, b.e, &c));
    }
    let exterior_part = product.sub(&one);
    let value = a_part.add(&f_part).add(&exterior_part);
    Ok(TruncatedTrace { sign, a_part, f_part, exterior_part, value, exterior_magnitude_bound: bound - Rational::one() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_action_expr;
    use crate::groups::parse_group;
    use crate::scalars::{rational, rational_int};

    fn elliptic() -> WeilPolynomial {
        WeilPolynomial::from_i64(3, &[1, 0, 3]).unwrap()
    }

    fn action(expr: &str, group: &str, p: &WeilPolynomial) -> DiagonalAction {
        let ctx = ActionContext::bundles(parse_group(group).unwrap(), p.genus(), PrimePower::from_q(p.q()).unwrap());
        parse_action_expr(expr).unwrap().to_action(&ctx).unwrap()
    }

    fn rat(c: &Cyclotomic) -> Rational {
        c.as_rational().expect("rational")
    }

    #[test]
    fn identity_series_is_poincare() {
        let p = elliptic();
        let s = weighted_series(&action("psi^0", "A1", &p), 6).unwrap();
        let dims: Vec<Rational> = s.coeffs().iter().map(|c| rat(&evaluate_symmetric(c, &p).unwrap())).collect();
        let expected: Vec<Rational> = [1, 0, 1, 2, 2, 2, 3].iter().map(|&n| rational_int(n)).collect();
        assert_eq!(dims, expected);
    }

    #[test]
    fn psi_series_terms() {
        let p = elliptic();
        let s = weighted_series(&action("psi", "A1", &p), 3).unwrap();
        assert_eq!(s.coeffs()[2].to_string(), "1 * q^(-2/2)");
        assert_eq!(s.coeffs()[3].to_string(), "1 * L1^-1 + 1 * L2^-1");
    }

    #[test]
    fn power_sums_and_products() {
        let p = elliptic();
        assert_eq!(lambda_power_sum(&p, 1), rational_int(0));
        assert_eq!(lambda_power_sum(&p, 2), rational_int(-6));
        assert_eq!(lambda_power_sum(&p, 0), rational_int(2));
        assert_eq!(lambda_power_product(&p, -1, &rational_int(1)), rational(4, 3));
        assert_eq!(lambda_power_product(&p, 2, &rational_int(1)), rational_int(16));
        let c = rational(2, 7);
        assert_eq!(lambda_power_product(&p, 1, &c), p.evaluate(&c));
        assert_eq!(lambda_power_product(&p, 0, &c), rational(25, 49));
    }

    #[test]
    fn symmetric_evaluation() {
        let p = elliptic();
        let l1 = ScalarMonomial::lambda(2, 0, 1).unwrap();
        let l2 = ScalarMonomial::lambda(2, 1, 1).unwrap();
        let s = ScalarSum::from_terms(2, [l1.clone(), l2.clone()]).unwrap();
        assert!(evaluate_symmetric(&s, &p).unwrap().is_zero());
        let prod = ScalarSum::from_monomial(l1.mul(&l2).unwrap());
        assert_eq!(rat(&evaluate_symmetric(&prod, &p).unwrap()), rational_int(3));
        let lone = ScalarSum::from_monomial(l1);
        assert!(matches!(evaluate_symmetric(&lone, &p), Err(Error::SymbolicResidue(_))));
    }

    #[test]
    fn frob_closed_form_is_seven_quarters() {
        let p = elliptic();
        let r = closed_form_trace(&action("frob", "A1", &p), &p, 40).unwrap();
        assert_eq!(rat(r.closed_form.value.as_ref().unwrap()), rational(7, 4));
        assert_eq!(
            r.convergence.verdict,
            Verdict::Converges { rho: Magnitude { coef: rational_int(1), exp: HalfIntExp::from_int(-1) } }
        );
        let s8 = rational_to_f64(&rat(&r.partial_sums[8]));
        assert!((s8 - 1.75).abs() < 0.05);
        let s40 = rat(&r.partial_sums[40]);
        let gap = (s40 - rational(7, 4)).abs();
        assert!(gap <= r.error_bound.clone().unwrap());
        assert!(rational_to_f64(&gap) < 1e-6);
        assert_eq!(behrend_mass(&parse_group("A1").unwrap(), &p).unwrap().map(|c| rat(&c)), Some(rational(7, 4)));
    }

    #[test]
    fn psi_has_a_pole() {
        let p = elliptic();
        let r = closed_form_trace(&action("psi", "A1", &p), &p, 10).unwrap();
        assert_eq!(r.convergence.verdict.name(), "pole");
        assert!(r.closed_form.value.is_none());
        assert!(r.error_bound.is_none());
        let d = closed_form_trace(&action("phi", "A1", &p), &p, 4).unwrap();
        assert_eq!(d.convergence.verdict.name(), "diverges");
    }

    #[test]
    fn gm_exterior_part() {
        let p = elliptic();
        let a = action("psi", "Gm", &p);
        let t = generator_truncated_trace(&a, &p, SignMode::Signed).unwrap();
        assert_eq!(rat(&t.exterior_part), rational(1, 3));
        assert_eq!(closed_form_trace(&a, &p, 4).unwrap().convergence.verdict.name(), "pole");
    }

    #[test]
    fn truncated_trace_example() {
        let p = elliptic();
        let t = generator_truncated_trace(&action("psi", "A1", &p), &p, SignMode::Unsigned).unwrap();
        assert_eq!(rat(&t.a_part), rational_int(1));
        assert_eq!(rat(&t.f_part), rational(1, 3));
        assert_eq!(rat(&t.value), rational(5, 3));
    }

    #[test]
    fn twisted_closed_form_is_cyclotomic() {
        let p = elliptic();
        let w = RootOfUnity::new(3, 1).unwrap();
        let g = parse_group("A1").unwrap().with_eps(vec![w]).unwrap();
        let ctx = ActionContext::bundles(g, 1, PrimePower::from_q(3).unwrap());
        let frob = base_action(FrobeniusKind::AbsoluteArithmetic, &ctx).unwrap();
        let r = closed_form_trace(&frob, &p, 30).unwrap();
        let v = r.closed_form.value.clone().unwrap();
        assert!(v.as_rational().is_none());
        let gap = v.sub(&r.partial_sums[30]).to_complex().norm();
        assert!(gap < 1e-5, "{gap}");
    }

    #[test]
    fn inversion_in_cyclotomic_fields() {
        let w = RootOfUnity::new(5, 2).unwrap();
        let x = Cyclotomic::from_sum(
            &ScalarSum::from_terms(0, [ScalarMonomial::unit(0), ScalarMonomial::root(0, w)]).unwrap(),
            2,
        )
        .unwrap();
        let y = invert(&x).unwrap();
        assert_eq!(x.mul(&y).as_rational(), Some(rational_int(1)));
    }
}
