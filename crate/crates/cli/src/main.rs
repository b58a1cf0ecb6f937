use std::process::ExitCode;

use bunfrob::cohomology::{classifying_generators, classifying_poincare_series, generators, poincare_series};
use bunfrob::curves::{weil_numerator_from_counts, CurveModel, WeilPolynomial};
use bunfrob::expr::parse_action_expr;
use bunfrob::field::PrimePower;
use bunfrob::frobenius::{classifying_action, ActionContext, FrobeniusKind};
use bunfrob::groups::{brute_force_count_sl, parse_group, steinberg_count, steinberg_factors, GroupData, Series};
use bunfrob::scalars::RootOfUnity;
use bunfrob::traces::{behrend_mass, closed_form_trace, generator_truncated_trace, SignMode};
use bunfrob::{verify, Error, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

mod render;

use render::Output;

/// Exact Frobenius traces on the cohomology of moduli stacks of principal
/// bundles over curves over finite fields.
#[derive(Parser, Debug)]
#[command(name = "bunfrob", version)]
struct Cli {
    /// Emit canonical JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Truncation degree M for series and partial sums.
    #[arg(long, global = true, default_value_t = 40)]
    max_degree: usize,
    /// Worker threads for point counting and degreewise traces.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Group descriptors and Steinberg point counts.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Zeta numerators and point counts of curves.
    #[command(subcommand)]
    Curve(CurveCommand),
    /// Betti numbers of the moduli stack.
    #[command(subcommand)]
    Cohomology(CohomologyCommand),
    /// Frobenius eigenvalue tables.
    #[command(subcommand)]
    Frobenius(FrobeniusCommand),
    /// Alternating traces, closed forms and convergence verdicts.
    Trace(TraceArgs),
    /// Run the brute-force oracle suite.
    Verify,
}

#[derive(Args, Debug)]
struct GroupArgs {
    /// `A1`, `B2`, `G2`, `Gm`, or a product such as `A1xG2`.
    #[arg(long)]
    group: String,
    /// Twists as `order:exponent` per index, e.g. `1:0,2:1`.
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<String>>,
}

impl GroupArgs {
    fn resolve(&self) -> Result<GroupData> {
        let g = parse_group(&self.group)?;
        match &self.eps {
            None => Ok(g),
            Some(list) => g.with_eps(list.iter().map(|s| parse_root(s)).collect::<Result<_>>()?),
        }
    }
}

fn parse_root(s: &str) -> Result<RootOfUnity> {
    let bad = || Error::InvalidScalar(format!("root of unity {s:?}; expected order:exponent"));
    let (m, e) = s.split_once(':').ok_or_else(bad)?;
    RootOfUnity::new(m.trim().parse().map_err(|_| bad())?, e.trim().parse().map_err(|_| bad())?)
}

#[derive(Subcommand, Debug)]
enum GroupCommand {
    Info(GroupArgs),
    Count {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        q: u64,
        /// Also count SL_n matrices by exhaustion.
        #[arg(long)]
        brute_force: bool,
    },
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[arg(long)]
    q: u64,
    /// `y2=x3+x` or a homogeneous `F(x,y,z)`.
    #[arg(long, conflicts_with_all = ["counts", "poly"])]
    model: Option<String>,
    /// Genus of the curve (`--genus` also accepted).
    #[arg(long, alias = "genus")]
    g: Option<usize>,
    /// `N_1,..,N_g`.
    #[arg(long, value_delimiter = ',', conflicts_with = "poly", allow_negative_numbers = true)]
    counts: Option<Vec<u64>>,
    /// `a_0,..,a_2g`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    poly: Option<Vec<i64>>,
}

impl CurveArgs {
    fn model(&self) -> Result<Option<CurveModel>> {
        let Some(m) = &self.model else { return Ok(None) };
        let model = CurveModel::parse(PrimePower::from_q(self.q)?, m)?;
        if let Some(g) = self.g {
            if g != model.genus() {
                return Err(Error::InvalidModel(format!("--g {g} but the model has genus {}", model.genus())));
            }
        }
        Ok(Some(model))
    }

    fn weil(&self) -> Result<WeilPolynomial> {
        PrimePower::from_q(self.q)?;
        if let Some(model) = self.model()? {
            return model.weil_polynomial();
        }
        if let Some(poly) = &self.poly {
            let p = WeilPolynomial::from_i64(self.q, poly)?;
            if self.g.is_some_and(|g| g != p.genus()) {
                return Err(Error::NotWeil(format!("{} coefficients do not match --g", poly.len())));
            }
            if !p.functional_equation_check() {
                return Err(Error::NotWeil(format!("{p} violates the functional equation")));
            }
            return Ok(p);
        }
        let g = self.g.ok_or_else(|| Error::InvalidModel("give --model, --poly, or --g with --counts".into()))?;
        weil_numerator_from_counts(self.q, g, self.counts.as_deref().unwrap_or(&[]))
    }
}

#[derive(Subcommand, Debug)]
enum CurveCommand {
    Zeta(CurveArgs),
    Count {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        model: String,
        /// Extension degree.
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
}

#[derive(Subcommand, Debug)]
enum CohomologyCommand {
    Poincare {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, alias = "g", default_value_t = 0)]
        genus: usize,
        /// Use the classifying stack instead of the moduli stack.
        #[arg(long)]
        classifying: bool,
    },
}

#[derive(Subcommand, Debug)]
enum FrobeniusCommand {
    Table {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, alias = "g", default_value_t = 0)]
        genus: usize,
        #[arg(long)]
        q: u64,
        /// psi, phi, frob or fbar.
        #[arg(long, conflicts_with = "compose")]
        kind: Option<String>,
        /// Composition such as `frob^2 o psi^3`, applied right to left.
        #[arg(long)]
        compose: Option<String>,
        #[arg(long)]
        classifying: bool,
    },
}

#[derive(Args, Debug)]
struct TraceArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[command(flatten)]
    curve: CurveArgs,
    /// Composition such as `frob^2 o psi^3`, applied right to left.
    #[arg(long, default_value = "frob")]
    action: String,
    /// Trace over generator spans plus the exterior algebra.
    #[arg(long)]
    truncated: bool,
    /// signed or unsigned (used with --truncated).
    #[arg(long, default_value = "unsigned")]
    sign: String,
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Group(GroupCommand::Info(args)) => {
            let g = args.resolve()?;
            Ok(Output::new(serde_json::to_value(g.descriptor()).expect("serializable"), render::group_info(&g)))
        }
        Command::Group(GroupCommand::Count { group, q, brute_force }) => {
            let g = group.resolve()?;
            let pq = PrimePower::from_q(*q)?;
            let count = steinberg_count(&g, pq)?;
            let mut factors = vec![format!("q^{}", g.dimension())];
            factors.extend(steinberg_factors(&g).iter().map(|f| format!("({f})")));
            let brute = if *brute_force {
                match g.factors() {
                    [f] if f.series == Series::A && f.rank <= 2 => Some(brute_force_count_sl(f.rank + 1, pq)?),
                    _ => return Err(Error::InvalidGroup("brute-force counting covers A1 and A2 only".into())),
                }
            } else {
                None
            };
            let mut v = json!({"group": g.label(), "q": q, "factors": factors, "count": count.to_string()});
            if let Some(b) = brute {
                v["bruteForce"] = json!(b);
            }
            let mut text = format!("#{}(F_{q}) = {} = {count}\n", g.label(), factors.join(" * "));
            if let Some(b) = brute {
                text += &format!("brute force: {b}\n");
            }
            Ok(Output::new(v, text))
        }
        Command::Curve(CurveCommand::Zeta(args)) => {
            let p = args.weil()?;
            Ok(render::curve_zeta(&p)?)
        }
        Command::Curve(CurveCommand::Count { q, model, k }) => {
            let m = CurveModel::parse(PrimePower::from_q(*q)?, model)?;
            let n = m.count_points(*k)?;
            Ok(Output::new(
                json!({"q": q, "k": k, "genus": m.genus(), "count": n}),
                format!("#X(F_{{{q}^{k}}}) = {n}\n"),
            ))
        }
        Command::Cohomology(CohomologyCommand::Poincare { group, genus, classifying }) => {
            let g = group.resolve()?;
            let (gens, dims) = if *classifying {
                (classifying_generators(&g), classifying_poincare_series(&g, cli.max_degree)?)
            } else {
                (generators(&g, *genus)?, poincare_series(&g, *genus, cli.max_degree)?)
            };
            Ok(Output::new(json!({"dims": dims.coeffs(), "generators": gens}), render::poincare(&gens, dims.coeffs())))
        }
        Command::Frobenius(FrobeniusCommand::Table { group, genus, q, kind, compose, classifying }) => {
            let g = group.resolve()?;
            let pq = PrimePower::from_q(*q)?;
            let text = compose.clone().or_else(|| kind.clone()).unwrap_or_else(|| "frob".into());
            let action = if *classifying {
                let k: FrobeniusKind = text.parse()?;
                classifying_action(k, &ActionContext::classifying(g, pq))?
            } else {
                parse_action_expr(&text)?.to_action(&ActionContext::bundles(g, *genus, pq))?
            };
            Ok(render::frobenius_table(&text, &action))
        }
        Command::Trace(args) => trace(cli, args),
        Command::Verify => {
            let checks = verify::run_all();
            Ok(render::verify(&checks))
        }
    }
}

fn trace(cli: &Cli, args: &TraceArgs) -> Result<Output> {
    let g = args.group.resolve()?;
    let p = args.curve.weil()?;
    let expr = parse_action_expr(&args.action)?;
    let ctx = ActionContext::bundles(g.clone(), p.genus(), PrimePower::from_q(p.q())?);
    let action = expr.to_action(&ctx)?;
    if args.truncated {
        let sign: SignMode = args.sign.parse()?;
        let t = generator_truncated_trace(&action, &p, sign)?;
        return Ok(render::truncated_trace(&expr, &action, &t));
    }
    let report = closed_form_trace(&action, &p, cli.max_degree)?;
    let mass = if expr.is_single(FrobeniusKind::AbsoluteArithmetic) { behrend_mass(&g, &p)? } else { None };
    Ok(render::trace(&expr, &report, mass.as_ref()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", out.json);
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.exit_code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_internal() { 2 } else { 1 })
        }
    }
}
