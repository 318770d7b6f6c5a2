mod input;
mod render;

use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use gkz::charcycle::{self, CycleEngine, JumpReport};
use gkz::gevrey::{self, SlopeStatus};
use gkz::polyhedra::{self, Polytope, Triangulation};
use gkz::semigroup::{Parameter, SemigroupView};
use gkz::umbrella::{self, WeightSpec};
use gkz::{BigInt, GkzError, IntMatrix, Lattice, Rational};
use num_bigint::Sign;
use serde_json::{json, Value};

use input::{BetaInput, Problem, WeightInput};
use render::{face, int, parameter, rat, rats};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Command {
    Umbrella,
    Cycle,
    Mult,
    Jump,
    Rank,
    Slopes,
    Gevrey,
    Scan,
    Check,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Umbrella => "umbrella",
            Command::Cycle => "cycle",
            Command::Mult => "mult",
            Command::Jump => "jump",
            Command::Rank => "rank",
            Command::Slopes => "slopes",
            Command::Gevrey => "gevrey",
            Command::Scan => "scan",
            Command::Check => "check",
        }
    }
}

/// Exact invariants of A-hypergeometric systems.
///
/// Column indices (tau, faces, --hyperplane) are 1-based.
#[derive(Parser, Debug)]
#[command(name = "gkz", version)]
struct Cli {
    command: Command,
    /// JSON problem file; flags override its fields.
    #[arg(long)]
    input: Option<String>,
    /// Matrix rows separated by ';', e.g. "1 1 1 1; 0 1 3 4".
    #[arg(long, allow_hyphen_values = true)]
    matrix: Option<String>,
    /// "F", "L(s)" (with --hyperplane) or "lx=..;ld=..".
    #[arg(long, allow_hyphen_values = true)]
    weight: Option<String>,
    /// Rationals "1,2", "generic", or "stratum:b=0,1,2;face=1,2". Repeat for scan seeds.
    #[arg(long, allow_hyphen_values = true)]
    beta: Vec<String>,
    /// Umbrella face as 1-based columns, e.g. "1,4"; "empty" for the empty face.
    #[arg(long)]
    tau: Option<String>,
    /// Coordinate hyperplane x_J = 0 (1-based column).
    #[arg(long)]
    hyperplane: Option<usize>,
    /// Gevrey order s > 1.
    #[arg(long)]
    order: Option<String>,
    #[arg(long, conflicts_with = "table")]
    json: bool,
    #[arg(long)]
    table: bool,
    /// Semigroup search bound override.
    #[arg(long)]
    bound: Option<String>,
}

enum Failure {
    Usage(String),
    Hypothesis(String),
    Unsupported(String),
}

impl From<GkzError> for Failure {
    fn from(e: GkzError) -> Self {
        if e.is_hypothesis_failure() {
            return Failure::Hypothesis(e.to_string());
        }
        if e.is_unsupported() {
            return Failure::Unsupported(e.to_string());
        }
        let msg = match &e {
            GkzError::NotAFace(f) => format!("{} is not a face of the cone", face(f)),
            GkzError::FaceNotInUmbrella(f) => format!("face {} is not in the umbrella", face(f)),
            _ => e.to_string(),
        };
        Failure::Usage(msg)
    }
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Usage(s)
    }
}

type Out<T> = std::result::Result<T, Failure>;

struct Ctx {
    view: SemigroupView,
    weight_input: WeightInput,
    weight: WeightSpec<Rational>,
    betas: Vec<Parameter>,
    tau: Option<Vec<usize>>,
    j: Option<usize>,
    order: Option<Rational>,
    warnings: Vec<String>,
}

impl Ctx {
    fn d(&self) -> usize {
        self.view.d()
    }

    fn n(&self) -> usize {
        self.view.n()
    }

    fn beta_or_generic(&self) -> Parameter {
        self.betas.first().cloned().unwrap_or_else(|| Parameter::generic(self.d(), self.n()))
    }

    fn require_beta(&self, cmd: &str) -> Out<Parameter> {
        self.betas.first().cloned().ok_or_else(|| Failure::Usage(format!("{} needs --beta", cmd)))
    }

    fn require_tau(&self, cmd: &str) -> Out<Vec<usize>> {
        self.tau.clone().ok_or_else(|| {
            Failure::Usage(format!("{} needs --tau (1-based columns, \"empty\" for the empty face)", cmd))
        })
    }

    fn require_j(&self, cmd: &str) -> Out<usize> {
        self.j.ok_or_else(|| Failure::Usage(format!("{} needs --hyperplane J", cmd)))
    }

    fn require_order(&self, cmd: &str) -> Out<Rational> {
        self.order.clone().ok_or_else(|| Failure::Usage(format!("{} needs --order S", cmd)))
    }
}

fn merged_problem(cli: &Cli) -> Out<Problem> {
    let mut p = match &cli.input {
        Some(path) => input::read_problem(path)?,
        None => Problem::default(),
    };
    if let Some(m) = &cli.matrix {
        p.matrix = Some(input::parse_matrix(m)?);
    }
    if let Some(w) = &cli.weight {
        p.weight = Some(input::parse_weight(w)?);
    }
    if !cli.beta.is_empty() {
        p.betas = cli.beta.iter().map(|b| input::parse_beta(b)).collect::<Result<_, _>>()?;
    }
    if let Some(t) = &cli.tau {
        p.tau = Some(input::parse_tau(t)?);
    }
    if cli.hyperplane.is_some() {
        p.hyperplane = cli.hyperplane;
    }
    if let Some(s) = &cli.order {
        p.order = Some(gkz::scalar::parse_rational(s).ok_or_else(|| format!("--order is not a rational: {:?}", s))?);
    }
    if let Some(b) = &cli.bound {
        p.bound = Some(b.trim().parse::<BigInt>().map_err(|_| format!("--bound is not an integer: {:?}", b))?);
    }
    Ok(p)
}

fn echo(p: &Problem) -> Value {
    let matrix = p.matrix.as_ref().map(|m| Value::Array(m.to_rows().iter().map(|r| render::ints(r)).collect()));
    let betas: Vec<Value> = p
        .betas
        .iter()
        .map(|b| match b {
            BetaInput::Generic => json!("generic"),
            BetaInput::Explicit(v) => rats(v),
            BetaInput::Stratum { b, face } => json!({"stratum": {"b": render::ints(b), "face": face}}),
        })
        .collect();
    json!({
        "matrix": matrix,
        "weight": p.weight.as_ref().map(|w| w.describe()).unwrap_or_else(|| "F".into()),
        "beta": betas,
        "tau": p.tau,
        "hyperplane": p.hyperplane,
        "order": p.order.as_ref().map(rat),
        "bound": p.bound.as_ref().map(int),
    })
}

fn context(p: &Problem) -> Out<Ctx> {
    let a: IntMatrix = p.matrix.clone().ok_or_else(|| "a matrix is required (--matrix or --input)".to_string())?;
    let mut view = SemigroupView::new(a)?;
    if let Some(b) = &p.bound {
        view = view.with_bound(b.clone());
    }
    let (d, n) = (view.d(), view.n());
    if let Some(j) = p.hyperplane {
        if j == 0 || j > n {
            return Err(Failure::Usage(format!("--hyperplane must be in 1..{}", n)));
        }
    }
    let weight_input = p.weight.clone().unwrap_or(WeightInput::F);
    let weight = weight_input.resolve(n, p.hyperplane)?;
    let betas = p.betas.iter().map(|b| b.resolve(d, n)).collect::<Result<Vec<_>, _>>()?;
    let tau = match &p.tau {
        Some(t) => {
            if t.iter().any(|&k| k == 0 || k > n) {
                return Err(Failure::Usage(format!("tau indices must be in 1..{}", n)));
            }
            let mut v: Vec<usize> = t.iter().map(|k| k - 1).collect();
            v.sort_unstable();
            v.dedup();
            Some(v)
        }
        None => None,
    };
    Ok(Ctx {
        view,
        weight_input,
        weight,
        betas,
        tau,
        j: p.hyperplane.map(|j| j - 1),
        order: p.order.clone(),
        warnings: Vec::new(),
    })
}

fn jump_json(r: &JumpReport) -> Value {
    json!({
        "tau": face(&r.tau),
        "case": r.case.to_string(),
        "generic": int(&r.generic),
        "jump": r.jump.as_ref().map(int),
        "total": r.total().as_ref().map(int),
        "two_face": r.two_face.as_ref().map(|t| json!({
            "f1": face(&t.f1),
            "f2": face(&t.f2),
            "meet": face(&t.meet),
            "constant": int(&t.constant),
        })),
    })
}

fn cmd_umbrella(c: &mut Ctx) -> Out<Value> {
    let a = c.view.matrix();
    let umb = umbrella::compute_umbrella(a, &c.weight)?;
    let mut dims: Vec<isize> = umb.faces().iter().map(|f| f.dim).collect();
    dims.dedup();
    let by_dim: Vec<Value> = dims
        .iter()
        .map(|&k| json!({"dim": k, "faces": umb.faces_of_dim(k).iter().map(|f| face(f)).collect::<Vec<_>>()}))
        .collect();
    let conv = umbrella::convexity_report(a, &umb, &[])?;
    let homogeneous = umb.facets().iter().all(|f| umbrella::is_f_homogeneous(a, f));
    Ok(json!({
        "weight": c.weight_input.describe(),
        "faces": by_dim,
        "facets": umb.facets().iter().map(|f| face(f)).collect::<Vec<_>>(),
        "f_homogeneous_facets": homogeneous,
        "convex": conv.is_convex,
    }))
}

fn cmd_cycle(c: &mut Ctx) -> Out<Value> {
    let beta = c.beta_or_generic();
    let engine = CycleEngine::new(&c.view, &c.weight)?;
    let comps = engine.char_cycle(&beta)?;
    Ok(json!({
        "beta": parameter(&beta),
        "components": comps.iter().map(|k| json!({
            "tau": face(&k.tau),
            "dim": k.dim,
            "multiplicity": int(&k.multiplicity),
            "jump": int(&k.jump),
        })).collect::<Vec<_>>(),
    }))
}

fn cmd_mult(c: &mut Ctx) -> Out<Value> {
    let tau = c.require_tau("mult")?;
    let engine = CycleEngine::new(&c.view, &c.weight)?;
    engine.umbrella().require(&tau)?;
    let generic = engine.multiplicities().generic_total(&tau)?;
    let mut out = json!({"tau": face(&tau), "generic": int(&generic)});
    if let Some(beta) = c.betas.first() {
        let r = engine.jump(&tau, beta)?;
        let total = r.total().ok_or_else(|| Failure::Unsupported(r.reason.clone().unwrap_or_default()))?;
        out["beta"] = parameter(beta);
        out["at_beta"] = int(&total);
        out["jump"] = r.jump.as_ref().map(int).unwrap_or(Value::Null);
    }
    Ok(out)
}

fn cmd_jump(c: &mut Ctx) -> Out<Value> {
    let tau = c.require_tau("jump")?;
    let beta = c.require_beta("jump")?;
    let r = CycleEngine::new(&c.view, &c.weight)?.jump(&tau, &beta)?;
    if r.jump.is_none() {
        let mut reason = r.reason.clone().unwrap_or_else(|| "unsupported".into());
        if let Some(b) = r.facets_meet_in_faces {
            reason += &format!("; all maximal faces are facets and their intersections are {}faces", if b { "" } else { "not all " });
        }
        return Err(Failure::Unsupported(reason));
    }
    let mut v = jump_json(&r);
    v["beta"] = parameter(&beta);
    Ok(v)
}

fn cmd_rank(c: &mut Ctx) -> Out<Value> {
    let beta = c.beta_or_generic();
    Ok(int(&charcycle::rank(&c.view, &beta)?))
}

fn slope_entry(a: &IntMatrix, j: usize) -> Out<Value> {
    let r = gevrey::slopes_along(a, j)?;
    Ok(json!({
        "column": j + 1,
        "slopes": r.slopes.iter().map(|s| json!({"s": rat(&s.s), "certificate": rats(&s.hyperplane)})).collect::<Vec<_>>(),
    }))
}

fn cmd_slopes(c: &mut Ctx) -> Out<Value> {
    let a = c.view.matrix();
    let cols: Vec<usize> = match c.j {
        Some(j) => vec![j],
        None => (0..c.n()).collect(),
    };
    let entries = cols.into_iter().map(|j| slope_entry(a, j)).collect::<Out<Vec<_>>>()?;
    Ok(Value::Array(entries))
}

fn cmd_gevrey(c: &mut Ctx) -> Out<Value> {
    let j = c.require_j("gevrey")?;
    let s = c.require_order("gevrey")?;
    let beta = c.beta_or_generic();
    let r = gevrey::irregularity_at(&c.view, j, &s, &beta)?;
    let value = r.value.clone().ok_or_else(|| Failure::Unsupported(r.reason.clone().unwrap_or_default()))?;
    match (&r.terms, &r.shortcut) {
        (None, _) => c.warnings.push(format!(
            "four-term formula unsupported ({}); value taken from the closed form",
            r.reason.clone().unwrap_or_default()
        )),
        (Some(_), Some(sc)) if sc != &value => {
            c.warnings.push(format!("closed form gives {} but the four-term formula gives {}", sc, value))
        }
        _ => {}
    }
    Ok(json!({
        "hyperplane": j + 1,
        "order": rat(&s),
        "beta": parameter(&beta),
        "generic": int(&r.generic),
        "value": int(&value),
        "terms": r.terms.as_ref().map(|t| json!({
            "upper_empty": int(&t[0]),
            "lower_empty": int(&t[1]),
            "lower_column": int(&t[2]),
            "upper_column": int(&t[3]),
        })),
        "closed_form": r.shortcut.as_ref().map(int),
    }))
}

fn cmd_scan(c: &mut Ctx) -> Out<Value> {
    if c.betas.is_empty() {
        return Err(Failure::Usage("scan needs at least one --beta seed".into()));
    }
    let tau = c.tau.clone().unwrap_or_default();
    let strata = charcycle::candidate_strata(&c.view, &c.betas)?;
    let engine = CycleEngine::new(&c.view, &c.weight)?;
    let mut rows = Vec::new();
    for p in &strata {
        let r = engine.jump(&tau, p)?;
        if r.jump.is_none() {
            c.warnings.push(format!(
                "jump unsupported on {}: {}",
                parameter(p),
                r.reason.clone().unwrap_or_default()
            ));
        }
        let rank = match charcycle::rank(&c.view, p) {
            Ok(v) => int(&v),
            Err(e) if e.is_unsupported() => {
                c.warnings.push(format!("rank unsupported on {}: {}", parameter(p), e));
                Value::Null
            }
            Err(e) => return Err(e.into()),
        };
        rows.push(json!({
            "stratum": parameter(p),
            "case": r.case.to_string(),
            "jump": r.jump.as_ref().map(int),
            "rank": rank,
        }));
    }
    let mut out = json!({"tau": face(&tau), "strata": rows});
    if let (Some(j), Some(s)) = (c.j, c.order.clone()) {
        let rep = gevrey::semicontinuity_scan(&c.view, j, &s, &strata)?;
        for sl in &rep.slopes {
            if sl.status == SlopeStatus::HypothesisFailed {
                c.warnings.push(format!(
                    "HYPOTHESIS_FAILED at slope {}: {} non-F-homogeneous facets",
                    gkz::scalar::fmt_rational(&sl.s),
                    sl.non_homogeneous.len()
                ));
            }
        }
        for f in &rep.findings {
            c.warnings.push(format!(
                "FINDING at slope {}: stratum {} has value {} above its specialization {} with value {}",
                gkz::scalar::fmt_rational(&f.s),
                f.general + 1,
                f.general_value,
                f.special + 1,
                f.special_value
            ));
        }
        out["semicontinuity"] = json!({
            "hyperplane": j + 1,
            "order": rat(&s),
            "slopes": rep.slopes.iter().map(|sl| json!({
                "s": rat(&sl.s),
                "status": match sl.status { SlopeStatus::Ok => "ok", SlopeStatus::HypothesisFailed => "hypothesis_failed" },
                "values": sl.values.iter().map(|v| v.as_ref().map(int)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "findings": rep.findings.len(),
        });
    }
    Ok(out)
}

struct Checks {
    rows: Vec<Value>,
    failed: bool,
}

impl Checks {
    fn record(&mut self, name: &str, outcome: Out<Option<String>>) {
        let (status, detail) = match outcome {
            Ok(None) => ("pass", String::new()),
            Ok(Some(msg)) => {
                self.failed = true;
                ("fail", msg)
            }
            Err(Failure::Unsupported(r)) => ("skipped", r),
            Err(Failure::Usage(m)) | Err(Failure::Hypothesis(m)) => {
                self.failed = true;
                ("fail", m)
            }
        };
        self.rows.push(json!({"name": name, "status": status, "detail": detail}));
    }
}

fn cmd_check(c: &mut Ctx) -> Out<(Value, bool)> {
    let a = c.view.matrix().clone();
    let d = c.d();
    let mut checks = Checks { rows: Vec::new(), failed: false };
    let betas = if c.betas.is_empty() { vec![Parameter::generic(d, c.n())] } else { c.betas.clone() };

    checks.record("volume_triangulations_agree", (|| {
        let all: Vec<usize> = (0..a.cols()).collect();
        let p = Polytope::from_columns(&a, &all, true);
        let zd = Lattice::full(d);
        let x = polyhedra::normalized_volume_with(&p, &zd, Triangulation::Placing)?;
        let y = polyhedra::normalized_volume_with(&p, &zd, Triangulation::Pulling)?;
        Ok(if x == y { None } else { Some(format!("placing {} vs pulling {}", x, y)) })
    })());

    let engine = CycleEngine::new(&c.view, &c.weight)?;
    checks.record("union_volume_formula", (|| {
        let m = engine.multiplicities();
        let x = m.generic_total(&[])?;
        let y = m.union_volume_formula()?;
        Ok(if x == y { None } else { Some(format!("generic multiplicity {} vs union volume {}", x, y)) })
    })());

    for beta in &betas {
        let label = parameter(beta).to_string();
        checks.record(&format!("rank_bound {}", label), (|| {
            charcycle::rank(&c.view, beta)?;
            Ok(None)
        })());
        let mut lower: Option<String> = None;
        let mut high: Option<String> = None;
        for f in engine.umbrella().faces() {
            let r = engine.jump(&f.indices, beta)?;
            let Some(j) = &r.jump else {
                c.warnings.push(format!("jump unsupported for tau {} at {}", face(&f.indices), label));
                continue;
            };
            if j.sign() == Sign::Minus && lower.is_none() {
                lower = Some(format!("negative jump {} at tau {}", j, face(&f.indices)));
            }
            let rank = a.select_columns(&f.indices).rank();
            if rank + 1 >= d && j.sign() != Sign::NoSign && high.is_none() {
                high = Some(format!("jump {} at tau {} of rank {}", j, face(&f.indices), rank));
            }
        }
        checks.record(&format!("multiplicity_lower_bound {}", label), Ok(lower));
        checks.record(&format!("no_jump_in_high_dimension {}", label), Ok(high));
        checks.record(&format!("gevrey_lower_bound {}", label), (|| {
            for j in 0..a.cols() {
                for s in gevrey::slopes_along(&a, j)?.slopes {
                    match gevrey::irregularity_at(&c.view, j, &s.s, beta) {
                        Ok(_) => {}
                        Err(GkzError::Inconsistent(m)) => return Ok(Some(m)),
                        Err(e) => return Err(e.into()),
                    }
                }
            }
            Ok(None)
        })());
    }
    for row in &checks.rows {
        if row["status"] == "fail" {
            c.warnings.push(format!("check {} failed: {}", row["name"].as_str().unwrap_or(""), row["detail"].as_str().unwrap_or("")));
        }
    }
    Ok((json!({"checks": checks.rows, "all_passed": !checks.failed}), checks.failed))
}

fn dispatch(cmd: Command, c: &mut Ctx) -> Out<(Value, bool)> {
    let v = match cmd {
        Command::Umbrella => cmd_umbrella(c)?,
        Command::Cycle => cmd_cycle(c)?,
        Command::Mult => cmd_mult(c)?,
        Command::Jump => cmd_jump(c)?,
        Command::Rank => cmd_rank(c)?,
        Command::Slopes => cmd_slopes(c)?,
        Command::Gevrey => cmd_gevrey(c)?,
        Command::Scan => cmd_scan(c)?,
        Command::Check => return cmd_check(c),
    };
    Ok((v, false))
}

fn emit(cli: &Cli, report: &Value) {
    if cli.table {
        print!("{}", render::table(report));
    } else {
        println!("{}", serde_json::to_string_pretty(report).expect("serialisable report"));
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let problem = match merged_problem(&cli) {
        Ok(p) => p,
        Err(Failure::Usage(m)) | Err(Failure::Hypothesis(m)) | Err(Failure::Unsupported(m)) => {
            eprintln!("error: {}", m);
            return ExitCode::from(1);
        }
    };
    let input_echo = echo(&problem);
    let mut warnings = Vec::new();
    let outcome = context(&problem).and_then(|mut c| {
        let r = dispatch(cli.command, &mut c);
        warnings = std::mem::take(&mut c.warnings);
        r
    });
    let report = |result: Value, warnings: &[String]| {
        json!({"command": cli.command.name(), "input_echo": input_echo, "result": result, "warnings": warnings})
    };
    match outcome {
        Ok((result, failed)) => {
            emit(&cli, &report(result, &warnings));
            ExitCode::from(if failed { 1 } else { 0 })
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {}", m);
            eprintln!("usage: gkz <COMMAND> [--input FILE | --matrix ROWS] [--weight W] [--beta B] [--tau T] [--hyperplane J] [--order S] [--json|--table] [--bound N]");
            ExitCode::from(1)
        }
        Err(Failure::Hypothesis(m)) => {
            eprintln!("error: {}", m);
            emit(&cli, &report(json!({"status": "hypothesis_failed", "reason": m}), &warnings));
            ExitCode::from(2)
        }
        Err(Failure::Unsupported(m)) => {
            emit(&cli, &report(json!({"status": "unsupported", "reason": m}), &warnings));
            ExitCode::from(3)
        }
    }
}
