//! Text and JSON renderings of command results.

use std::cmp::Ordering;
use std::fmt::Write as _;

use bunfrob::cohomology::GeneratorSpec;
use bunfrob::curves::WeilPolynomial;
use bunfrob::cyclotomic::Cyclotomic;
use bunfrob::expr::ActionExpr;
use bunfrob::frobenius::DiagonalAction;
use bunfrob::groups::GroupData;
use bunfrob::scalars::{format_rational, Rational};
use bunfrob::traces::{GeneratorMagnitude, TraceReport, TruncatedTrace, Verdict};
use bunfrob::verify::Check;
use bunfrob::Result;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};

pub struct Output {
    pub json: Value,
    pub text: String,
    pub exit_code: u8,
}

impl Output {
    pub fn new(json: Value, text: String) -> Self {
        Output { json, text, exit_code: 0 }
    }
}

/// Integers that fit in `i64` stay numbers; larger ones become strings.
fn int(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

fn opt_str<T: ToString>(x: Option<T>) -> Value {
    x.map_or(Value::Null, |v| json!(v.to_string()))
}

fn ordering_name(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "less",
        Ordering::Equal => "equal",
        Ordering::Greater => "greater",
    }
}

fn ordering_symbol(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "<",
        Ordering::Equal => "=",
        Ordering::Greater => ">",
    }
}

/// Smallest `n / 10^k` with four significant digits that is `>= r`.
fn round_up(r: &Rational) -> Rational {
    if !r.is_positive() {
        return r.clone();
    }
    let ten = Rational::from_integer(BigInt::from(10));
    let (lo, hi) = (Rational::from_integer(BigInt::from(1000)), Rational::from_integer(BigInt::from(10000)));
    let mut scaled = r.clone();
    let mut k: i32 = 0;
    while scaled < lo {
        scaled *= &ten;
        k += 1;
    }
    while scaled >= hi {
        scaled /= &ten;
        k -= 1;
    }
    scaled.ceil() / ten.pow(k)
}

fn clean(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

pub fn group_info(g: &GroupData) -> String {
    let eps: Vec<String> = g.eps().iter().map(|e| e.to_string()).collect();
    format!(
        "group      {}\nrank       {}\ndimension  {}\ndegrees    {:?}\neps        {}\nf classes  {}\n",
        g.label(),
        g.rank(),
        g.dimension(),
        g.degrees(),
        eps.join(", "),
        if g.include_f() { "yes" } else { "no" },
    )
}

pub fn curve_zeta(p: &WeilPolynomial) -> Result<Output> {
    let n = p.genus().max(3);
    let counts = p.counts(n);
    let roots = p.eigenvalues_numeric()?;
    let fe = p.functional_equation_check();
    let abs = p.lambda_abs_check();
    let json = json!({
        "q": p.q(),
        "g": p.genus(),
        "P": p.coeffs().iter().map(int).collect::<Vec<_>>(),
        "counts": counts.iter().map(int).collect::<Vec<_>>(),
        "functionalEquation": fe,
        "lambdaAbsCheck": abs,
        "lambdaNumeric": roots.iter().map(|z| json!([clean(z.re), clean(z.im)])).collect::<Vec<_>>(),
    });
    let mut text = format!("P(T) = {p}\nq = {}, g = {}\n", p.q(), p.genus());
    let counts: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
    let _ = writeln!(text, "N_1..N_{n} = {}", counts.join(", "));
    let _ = writeln!(text, "functional equation: {fe}\n|lambda_j| = sqrt(q): {abs}");
    for (j, z) in roots.iter().enumerate() {
        let _ = writeln!(text, "lambda_{} = {:.12} {:+.12}i", j + 1, clean(z.re), clean(z.im));
    }
    Ok(Output::new(json, text))
}

pub fn poincare(gens: &[GeneratorSpec], dims: &[u64]) -> String {
    let labels: Vec<String> = gens.iter().map(|g| format!("{g} (deg {})", g.degree)).collect();
    let mut text = format!("generators: {}\n", labels.join(", "));
    for (m, d) in dims.iter().enumerate() {
        let _ = writeln!(text, "{m:>4}  {d}");
    }
    text
}

pub fn frobenius_table(expr: &str, action: &DiagonalAction) -> Output {
    let entries: Vec<Value> = action
        .entries()
        .iter()
        .map(|(g, m)| json!({"generator": g, "label": g.to_string(), "eigenvalue": m.to_string()}))
        .collect();
    let width = action.entries().iter().map(|(g, _)| g.to_string().len()).max().unwrap_or(0);
    let mut text = format!("{expr}\n");
    for (g, m) in action.entries() {
        let _ = writeln!(text, "  {:<width$}  ->  {m}", g.to_string());
    }
    Output::new(json!({"action": expr, "entries": entries}), text)
}

fn magnitudes_json(ms: &[GeneratorMagnitude]) -> Vec<Value> {
    ms.iter()
        .map(|m| {
            json!({
                "generator": m.generator.to_string(),
                "eigenvalue": m.eigenvalue.to_string(),
                "magnitude": m.magnitude.to_string(),
                "versusOne": ordering_name(m.versus_one),
            })
        })
        .collect()
}

fn magnitudes_text(text: &mut String, ms: &[GeneratorMagnitude]) {
    let width = ms.iter().map(|m| m.generator.to_string().len()).max().unwrap_or(0);
    for m in ms {
        let _ = writeln!(
            text,
            "  {:<width$}  {:<28}  |.| = {} {} 1",
            m.generator.to_string(),
            m.eigenvalue.to_string(),
            m.magnitude,
            ordering_symbol(m.versus_one),
        );
    }
}

pub fn trace(expr: &ActionExpr, r: &TraceReport, mass: Option<&Cyclotomic>) -> Output {
    let (rho, offending) = match &r.convergence.verdict {
        Verdict::Converges { rho } => (Some(rho.to_string()), Vec::new()),
        Verdict::Pole { generators } | Verdict::Diverges { generators } => {
            (None, generators.iter().map(|g| g.to_string()).collect())
        }
    };
    let mut json = json!({
        "action": expr.to_string(),
        "maxDegree": r.max_degree,
        "verdict": r.convergence.verdict.name(),
        "rho": rho,
        "offending": offending,
        "closedForm": opt_str(r.closed_form.value.as_ref()),
        "closedFormExpression": r.closed_form.expression(),
        "closedFormFactors": r.closed_form.factors.iter()
            .map(|f| json!({"label": f.label, "value": opt_str(f.value.as_ref())}))
            .collect::<Vec<_>>(),
        "partialSums": r.partial_sums.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "errorBound": r.error_bound.as_ref().map(|b| format_rational(&round_up(b))),
        "magnitudes": magnitudes_json(&r.convergence.magnitudes),
    });
    if let Some(m) = mass {
        json["mass"] = json!(m.to_string());
    }
    let mut text = format!("action    {expr}\nverdict   {}", r.convergence.verdict.name());
    if let Some(rho) = &rho {
        let _ = write!(text, " (rho = {rho})");
    }
    if !offending.is_empty() {
        let _ = write!(text, " at {}", offending.join(", "));
    }
    text.push('\n');
    let _ = writeln!(text, "closed    {}", r.closed_form.expression());
    if let Some(v) = &r.closed_form.value {
        let _ = writeln!(text, "value     {v}");
    }
    if let Some(m) = mass {
        let _ = writeln!(text, "mass      {m}");
    }
    if let Some(last) = r.partial_sums.last() {
        let _ = writeln!(text, "S_{}      {last}  (~ {:.12})", r.max_degree, last.to_complex().re);
    }
    if let Some(b) = &r.error_bound {
        let _ = writeln!(text, "tail      <= {:.3e}", bunfrob::scalars::rational_to_f64(&round_up(b)));
    }
    text.push_str("eigenvalue magnitudes:\n");
    magnitudes_text(&mut text, &r.convergence.magnitudes);
    if let Some((s, n)) = expr.as_frob_psi() {
        let stated = n > s;
        let computed = r.convergence.verdict.converges();
        json["frobPsi"] = json!({"s": s, "n": n, "paperStatesConvergence": stated, "computedConvergence": computed});
        let _ = writeln!(text, "frob^{s} o psi^{n}: condition n > s is {stated}, computed convergence is {computed}");
    }
    Output::new(json, text)
}

pub fn truncated_trace(expr: &ActionExpr, action: &DiagonalAction, t: &TruncatedTrace) -> Output {
    let sign = match t.sign {
        bunfrob::traces::SignMode::Signed => "signed",
        bunfrob::traces::SignMode::Unsigned => "unsigned",
    };
    let report = bunfrob::traces::convergence_report(action);
    let json = json!({
        "action": expr.to_string(),
        "truncated": true,
        "sign": sign,
        "aPart": t.a_part.to_string(),
        "fPart": t.f_part.to_string(),
        "exteriorPart": t.exterior_part.to_string(),
        "value": t.value.to_string(),
        "exteriorMagnitudeBound": format_rational(&round_up(&t.exterior_magnitude_bound)),
        "verdict": report.verdict.name(),
        "magnitudes": magnitudes_json(&report.magnitudes),
    });
    let mut text = format!(
        "action    {expr} (generator-truncated, {sign})\na-part    {}\nf-part    {}\nexterior  {}\nvalue     {}\n",
        t.a_part, t.f_part, t.exterior_part, t.value
    );
    let _ = writeln!(text, "|exterior| <= {}", format_rational(&round_up(&t.exterior_magnitude_bound)));
    let _ = writeln!(text, "full alternating trace: {}", report.verdict.name());
    magnitudes_text(&mut text, &report.magnitudes);
    Output::new(json, text)
}

pub fn verify(checks: &[Check]) -> Output {
    let passed = checks.iter().all(|c| c.passed);
    let json = json!({
        "passed": passed,
        "checks": checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>(),
    });
    let mut text = String::new();
    for c in checks {
        let _ = writeln!(text, "{} {:<22} {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
    }
    let mut out = Output::new(json, text);
    out.exit_code = if passed { 0 } else { 2 };
    out
}
