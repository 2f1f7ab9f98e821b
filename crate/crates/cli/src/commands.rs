//! Dispatch from a [`RunConfig`] to the library.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, Context, Result};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use spanhyper_core::constructions::{
    hitting_graph, hr_construction, kr_construction, sigma_exact, verify_universal_sampled,
    UniversalityOptions,
};
use spanhyper_core::embedder::{
    check_goodness, embed_universal, partition_pattern, EmbedOptions, GoodnessMode, GoodnessOptions,
    HostPartition,
};
use spanhyper_core::generators::{self, Family};
use spanhyper_core::montecarlo::{linear_grid, monte_carlo_curve, CurveOptions};
use spanhyper_core::search::{find_embedding, SearchOutcome, DEFAULT_BUDGET};
use spanhyper_core::second_moment::{chebyshev_check, second_moment_ratio, OracleCaps};
use spanhyper_core::thresholds::{self, check_riordan_conditions, UNLIMITED};
use spanhyper_core::{rational, Execution, Graph, Hypergraph};

use crate::config::*;
use crate::output::{curve_csv, emit};

/// Environment variable overriding default search budgets.
pub const BUDGET_ENV: &str = "SPANHYPER_BUDGET";

/// A problem with the invocation rather than with the mathematics.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Whether the run produced its answer or hit a domain failure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Failed,
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    exec: Execution,
}

impl Ctx<'_> {
    fn seed(&self) -> u64 {
        self.cfg.seed
    }

    fn out(&self) -> Option<&Path> {
        self.cfg.out.as_deref()
    }

    fn config_json(&self) -> String {
        serde_json::to_string(self.cfg).expect("config serializes")
    }

    /// A report: JSON (result fields plus `config`) or the given text.
    fn report<T: Serialize>(&self, result: &T, text: String) -> Result<()> {
        if self.cfg.json {
            let mut v = serde_json::to_value(result)?;
            if let Value::Object(map) = &mut v {
                map.insert("config".into(), serde_json::to_value(self.cfg)?);
            } else {
                v = json!({ "result": v, "config": self.cfg });
            }
            let mut s = serde_json::to_string_pretty(&v)?;
            s.push('\n');
            emit(self.out(), s.as_bytes())
        } else {
            emit(self.out(), text.as_bytes())
        }
    }

    /// A hypergraph artifact, with a summary when it went to a file.
    fn hypergraph(&self, h: &Hypergraph) -> Result<()> {
        emit(self.out(), h.to_hg_string().as_bytes())?;
        if let Some(p) = self.out() {
            let summary = json!({ "path": p, "r": h.r(), "n": h.n(), "edges": h.num_edges() });
            if self.cfg.json {
                println!("{summary}");
            } else {
                println!("wrote {}: r = {}, n = {}, edges = {}", p.display(), h.r(), h.n(), h.num_edges());
            }
        }
        Ok(())
    }
}

fn read_hg(path: &Path) -> Result<Hypergraph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("reading {}: {e}", path.display())))?;
    Hypergraph::parse(&text).with_context(|| format!("in {}", path.display()))
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("reading {}: {e}", path.display())))?;
    Graph::parse(&text).with_context(|| format!("in {}", path.display()))
}

fn parse_rational(s: &str, what: &str) -> Result<BigRational> {
    rational::parse(s).map_err(|e| usage(format!("{what}: {e}")))
}

/// Explicit flag, then the environment, then the default.
pub fn resolve_budget(flag: Option<u64>, default: u64) -> Result<u64> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| usage(format!("{BUDGET_ENV}={v} is not an integer"))),
        Err(_) => Ok(default),
    }
}

fn need<T>(v: Option<T>, flag: &str, kind: GenType) -> Result<T> {
    v.ok_or_else(|| usage(format!("gen --type {kind:?} needs --{flag}").to_lowercase()))
}

pub fn run(cfg: &RunConfig, exec: Execution) -> Result<Status> {
    let ctx = Ctx { cfg, exec };
    match &cfg.command {
        Command::Gen(a) => gen(&ctx, a),
        Command::Gamma(a) => gamma(&ctx, a),
        Command::Fratio(a) => fratio(&ctx, a),
        Command::Conditions(a) => conditions(&ctx, a),
        Command::Contain(a) => contain(&ctx, a),
        Command::Threshold(a) => threshold(&ctx, a),
        Command::Embed(a) => embed(&ctx, a),
        Command::Goodness(a) => goodness(&ctx, a),
        Command::Construct(a) => construct(&ctx, a),
        Command::Sigma(a) => sigma(&ctx, a),
        Command::VerifyUniversal(a) => verify(&ctx, a),
    }
}

fn gen(ctx: &Ctx, a: &GenArgs) -> Result<Status> {
    let k = a.kind;
    let seed = ctx.seed();
    let h = match k {
        GenType::Gnp => generators::gnp(need(a.n, "n", k)?, need(a.r, "r", k)?, need(a.p, "p", k)?, seed)?,
        GenType::Gnm => generators::gnm(need(a.n, "n", k)?, need(a.r, "r", k)?, need(a.m, "m", k)?, seed)?,
        GenType::Hamilton => generators::hamilton_cycle(need(a.n, "n", k)?, need(a.r, "r", k)?, need(a.ell, "ell", k)?)?,
        GenType::Cube => generators::cube_hypergraph(need(a.r, "r", k)?, need(a.d, "d", k)?)?,
        GenType::Lattice => generators::lattice(need(a.r, "r", k)?, need(a.k, "k", k)?)?,
        GenType::Sphere => {
            if a.r.is_some_and(|r| r != 3) {
                return Err(usage("only r = 3 spheres can be generated"));
            }
            generators::sphere_apollonian(need(a.n, "n", k)?, seed)?
        }
        GenType::Power => generators::power_hamilton_cycle(need(a.n, "n", k)?, need(a.r, "r", k)?, need(a.i, "i", k)?)?,
        GenType::Kfactor => generators::kfactor(need(a.n, "n", k)?, need(a.r, "r", k)?, need(a.t, "t", k)?)?,
        GenType::Bounded => generators::sample_bounded_degree(
            need(a.n, "n", k)?,
            need(a.r, "r", k)?,
            need(a.delta, "delta", k)?,
            seed,
            a.proposals,
        )?,
    };
    ctx.hypergraph(&h)?;
    Ok(Status::Ok)
}

fn gamma(ctx: &Ctx, a: &GammaArgs) -> Result<Status> {
    let h = read_hg(&a.file)?;
    let budget = resolve_budget(None, UNLIMITED)?;
    let rep = thresholds::gamma_with(&h, ctx.exec, budget)?;
    let mut text = format!(
        "gamma = {} (attained at v = {})\nalpha = {}\n",
        rep.gamma, rep.argmax_v, rep.alpha
    );
    if a.table {
        text.push_str("v\te_H(v)\n");
        for (v, e) in &rep.e_sub_table {
            let _ = writeln!(text, "{v}\t{e}");
        }
    }
    ctx.report(&rep, text)?;
    Ok(Status::Ok)
}

fn fratio(ctx: &Ctx, a: &FratioArgs) -> Result<Status> {
    let f = read_hg(&a.file)?;
    let caps = OracleCaps::default();
    let rep = second_moment_ratio(&f, a.n, a.m, &caps, ctx.exec)?;
    let fmt_opt = |q: &Option<BigRational>| q.as_ref().map_or("undefined".to_string(), |q| q.to_string());
    let mut text = format!(
        "copies = {}\nE(X) = {}\nE(X^2) = {}\nf = {}\nchebyshev bound = {}\n",
        rep.copies,
        rep.ex,
        rep.ex2,
        fmt_opt(&rep.f),
        fmt_opt(&rep.chebyshev_bound)
    );
    let mut status = Status::Ok;
    let value = if a.chebyshev {
        let cheb = chebyshev_check(&f, &rep, &caps, ctx.exec)?;
        let _ = writeln!(
            text,
            "P(X = 0) = {} over {} hosts; moments match: {}; bound holds: {}",
            cheb.p_zero,
            cheb.hosts,
            cheb.moments_match,
            cheb.holds.map_or("n/a".into(), |b| b.to_string())
        );
        if !cheb.moments_match || (cheb.holds == Some(false) && rep.f.as_ref().is_some_and(|f| *f > one())) {
            status = Status::Failed;
        }
        let mut v = serde_json::to_value(&rep)?;
        v["chebyshev"] = serde_json::to_value(&cheb)?;
        v
    } else {
        serde_json::to_value(&rep)?
    };
    ctx.report(&value, text)?;
    Ok(status)
}

fn one() -> BigRational {
    BigRational::from_integer(1.into())
}

fn conditions(ctx: &Ctx, a: &ConditionsArgs) -> Result<Status> {
    let h = read_hg(&a.file)?;
    let g = match a.gamma.as_deref() {
        Some(s) => parse_rational(s, "--gamma")?,
        None => thresholds::gamma_with(&h, ctx.exec, resolve_budget(None, UNLIMITED)?)?.gamma,
    };
    let rep = check_riordan_conditions(&h, a.p, Some(g))?;
    let text = format!(
        "edges = {} (alpha = {})\nedge condition alpha C(n,r) > n/r: {} (slack {})\ngamma = {}\nmax degree = {}\nn p^gamma Delta^-4 = {}\n",
        rep.edges, rep.alpha, rep.edge_condition, rep.edge_slack, rep.gamma, rep.max_degree, rep.growth
    );
    ctx.report(&rep, text)?;
    Ok(Status::Ok)
}

fn contain(ctx: &Ctx, a: &ContainArgs) -> Result<Status> {
    let host = read_hg(&a.host)?;
    let pattern = read_hg(&a.pattern)?;
    let budget = resolve_budget(a.budget, DEFAULT_BUDGET)?;
    let outcome = find_embedding(&host, &pattern, a.spanning, budget)?;
    let text = match &outcome {
        SearchOutcome::Found(e) => {
            let images: Vec<String> = e.mapping.iter().map(|v| v.to_string()).collect();
            format!("found\nmapping: {}\n", images.join(" "))
        }
        SearchOutcome::NotFound => "not found\n".to_string(),
        SearchOutcome::BudgetExhausted => format!("undecided: budget of {budget} nodes exhausted\n"),
    };
    let status = if outcome == SearchOutcome::BudgetExhausted { Status::Failed } else { Status::Ok };
    let mut v = serde_json::to_value(&outcome)?;
    v["budget"] = json!(budget);
    ctx.report(&v, text)?;
    Ok(status)
}

fn threshold(ctx: &Ctx, a: &ThresholdArgs) -> Result<Status> {
    let family: Family = a.family.parse().map_err(|e| usage(format!("--family: {e}")))?;
    if a.steps == 0 || a.pmin > a.pmax {
        return Err(usage("need --steps >= 1 and --pmin <= --pmax"));
    }
    let grid = linear_grid(a.pmin, a.pmax, a.steps);
    let opts = CurveOptions {
        coupled: !a.uncoupled,
        budget: resolve_budget(a.budget, DEFAULT_BUDGET)?,
        exec: ctx.exec,
    };
    let curve = monte_carlo_curve(family, a.n, a.r, &grid, a.trials, ctx.seed(), opts)?;
    if ctx.cfg.json {
        ctx.report(&curve, String::new())?;
    } else {
        emit(ctx.out(), &curve_csv(&curve, &ctx.config_json())?)?;
    }
    Ok(Status::Ok)
}

fn embed(ctx: &Ctx, a: &EmbedArgs) -> Result<Status> {
    let host = read_hg(&a.host)?;
    let f = read_hg(&a.pattern)?;
    let eps = parse_rational(a.epsilon.as_deref().unwrap_or("1/30"), "--epsilon")?;
    let ep = partition_pattern(&f, a.delta, &eps, a.t)?;
    let hp = HostPartition::new(host.n(), ep.t, &eps)?;
    let mut opts = EmbedOptions::default();
    if let Some(k) = a.attempts {
        opts.attempts = k;
    }
    opts.budget = resolve_budget(a.budget, opts.budget)?;
    let trace = embed_universal(&host, &f, &hp, &ep, ctx.seed(), opts)?;
    if let Some(path) = &a.trace {
        let mut s = serde_json::to_string_pretty(&json!({ "partition": ep, "trace": trace }))?;
        s.push('\n');
        crate::output::write_atomic(path, s.as_bytes())?;
    }
    let mut text = format!(
        "t = {}, |X_t| = {}, |X_0| = {}, colours = {}\n",
        ep.t,
        ep.last().len(),
        ep.classes[0].len(),
        ep.colours
    );
    match &trace.embedding {
        Some(e) => {
            let images: Vec<String> = e.mapping.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(text, "embedded after {} attempt(s)\nmapping: {}", trace.attempts.len(), images.join(" "));
        }
        None => {
            let _ = writeln!(text, "no embedding after {} attempts", trace.attempts.len());
            if let Some(last) = trace.attempts.last().and_then(|t| t.stages.last()) {
                let _ = writeln!(text, "last attempt stopped at stage {}", last.stage);
            }
        }
    }
    let v = json!({
        "success": trace.success,
        "attempts": trace.attempts.len(),
        "t": ep.t,
        "embedding": trace.embedding,
    });
    ctx.report(&v, text)?;
    Ok(if trace.success { Status::Ok } else { Status::Failed })
}

fn goodness(ctx: &Ctx, a: &GoodnessArgs) -> Result<Status> {
    let host = read_hg(&a.host)?;
    let eps = parse_rational(a.epsilon.as_deref().unwrap_or("1/30"), "--epsilon")?;
    let hp = HostPartition::new(host.n(), a.t.unwrap_or(8), &eps)?;
    let mut opts = GoodnessOptions { seed: ctx.seed(), exec: ctx.exec, ..Default::default() };
    opts.mode = match a.mode.unwrap_or(ModeArg::Sampled) {
        ModeArg::Exhaustive => GoodnessMode::Exhaustive,
        ModeArg::Sampled => GoodnessMode::Sampled { samples: a.samples.unwrap_or(200) },
    };
    opts.budget = resolve_budget(None, opts.budget)?;
    let rep = check_goodness(&host, &hp, a.p, a.delta, &opts)?;
    let mut text = format!("good: {}\n", rep.passed());
    for p in &rep.properties {
        let _ = writeln!(
            text,
            "property {}: {} ({} checked{})",
            p.property,
            if p.passed { "pass" } else { "fail" },
            p.checked,
            if p.vacuous { ", vacuous" } else { "" }
        );
        if let Some(w) = &p.witness {
            let _ = writeln!(text, "  witness: {}", w.description);
        }
    }
    ctx.report(&rep, text)?;
    Ok(Status::Ok)
}

fn construct(ctx: &Ctx, a: &ConstructArgs) -> Result<Status> {
    let g = read_graph(&a.graph)?;
    let h = match a.method {
        Method::Hr => hr_construction(&g, a.r)?,
        Method::Kr => kr_construction(&g, a.r)?,
    };
    ctx.hypergraph(&h)?;
    Ok(Status::Ok)
}

fn sigma(ctx: &Ctx, a: &SigmaArgs) -> Result<Status> {
    let f = read_hg(&a.file)?;
    let budget = resolve_budget(a.budget, DEFAULT_BUDGET)?;
    let hg = hitting_graph(&f, budget)?;
    let delta = f.max_degree();
    let conjectured = (2 * delta).div_ceil(f.r());
    let mut text = format!(
        "hitting graph: {} edges, maximum degree {} (Delta(F) = {delta})\n",
        hg.graph.num_edges(),
        hg.graph.max_degree()
    );
    let exact = if a.exact {
        let s = sigma_exact(&f, budget)?;
        let _ = writeln!(text, "sigma = {s}");
        Some(s)
    } else {
        let _ = writeln!(text, "sigma <= {}", hg.graph.max_degree());
        None
    };
    let _ = writeln!(text, "ceil(2 Delta / r) = {conjectured}");
    let edges: Vec<(u32, u32)> = hg.graph.edges().collect();
    let v = json!({
        "max_degree": delta,
        "hitting_graph": { "n": hg.graph.n(), "max_degree": hg.graph.max_degree(), "edges": edges },
        "certificate": hg.certificate,
        "sigma": exact,
        "ceil_2delta_over_r": conjectured,
    });
    ctx.report(&v, text)?;
    Ok(Status::Ok)
}

fn verify(ctx: &Ctx, a: &VerifyArgs) -> Result<Status> {
    let h = read_hg(&a.host)?;
    let opts = UniversalityOptions { budget: resolve_budget(a.budget, DEFAULT_BUDGET)?, exec: ctx.exec };
    let rep = verify_universal_sampled(&h, a.n, a.r, a.delta, a.samples, ctx.seed(), opts)?;
    let exhausted = rep.results.iter().filter(|s| s.outcome == SearchOutcome::BudgetExhausted).count();
    let text = format!(
        "{} of {} samples embedded (fraction {}); shadow lift: {}; undecided: {exhausted}\n",
        rep.successes, rep.samples, rep.fraction, rep.shadow_lift
    );
    ctx.report(&rep, text)?;
    Ok(if exhausted > 0 { Status::Failed } else { Status::Ok })
}

/// Reads the `run CONFIG.json` document at `path`.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("reading {}: {e}", path.display())))?;
    RunConfig::from_json(&text).map_err(|e| anyhow!(UsageError(format!("{}: {e}", path.display()))))
}
