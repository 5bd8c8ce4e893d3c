//! Command-line interface. [`run`] returns the rendered output and exit code, so the binary
//! only prints.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use bsp_core::ballspace::{ci_symbolic, SymbolicBallSpace, Witness};
use bsp_core::constructions::{
    ex1_verify, ex2_verify, random_ultrametric, rank_gadget_verify, RankGadget, Report, ValueKind,
};
use bsp_core::ultrametric::{
    check_ut, construct_from_tau, induced_from_topology, ultra_diameter_from, validate_ultrametric, TauError,
    Violation,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::format::{
    names_of, read_json, BallSpaceFile, InputError, PosetFile, TauFile, TopologyFile, UltrametricFile,
};
use crate::suite::{run_all, SuiteConfig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "bsp", version, about = "Check ball spaces, ultrametrics and their constructions")]
pub struct Cli {
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, global = true, default_value_t = 12)]
    pub truncation: usize,
    #[arg(long, global = true, default_value_t = 32)]
    pub samples: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Bound on family size for chain enumeration.
    #[arg(long, global = true, default_value_t = 15)]
    pub max_balls: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finite and symbolic ball spaces.
    #[command(subcommand)]
    Bs(BsCmd),
    /// Finite posets.
    #[command(subcommand)]
    Poset(PosetCmd),
    /// Generalized ultrametric spaces.
    #[command(subcommand)]
    Um(UmCmd),
    /// Finite topologies.
    #[command(subcommand)]
    Topo(TopoCmd),
    /// Built-in constructions.
    #[command(subcommand)]
    Example(ExampleCmd),
    /// Random instances.
    #[command(subcommand)]
    Gen(GenCmd),
    /// The acceptance suite.
    #[command(subcommand)]
    Suite(SuiteCmd),
}

#[derive(Debug, Subcommand)]
pub enum BsCmd {
    /// Structure report and ci of a ball space file.
    Check { file: PathBuf },
    /// Re-verify a saved witness.
    Witness { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum PosetCmd {
    Width { file: PathBuf },
    Cover { file: PathBuf },
    Decompose { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum UmCmd {
    Validate { file: PathBuf },
    Balls { file: PathBuf },
    Delta { file: PathBuf },
    FromTau { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum TopoCmd {
    Induce { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum ExampleCmd {
    Ex1,
    Ex2,
    Rank {
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenCmd {
    Um {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, visible_alias = "values", value_enum, default_value_t = Kind::Linear)]
        kind: Kind,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum SuiteCmd {
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Linear,
    Narrow,
}

/// Rendered output plus exit code: 0 pass, 1 violation with witness, 2 invalid input.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

/// What a command produced before rendering.
struct Res {
    passed: bool,
    text: String,
    json: Value,
}

impl Res {
    fn new(passed: bool, text: String, json: Value) -> Self {
        Self { passed, text, json }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let name = command_name(&cli.command);
    match dispatch(cli) {
        Ok(r) => {
            let stdout = match cli.format {
                Format::Text => r.text,
                Format::Json => render_json(&name, r.passed, r.json),
            };
            Outcome { code: if r.passed { 0 } else { 1 }, stdout }
        }
        Err(e) => {
            let stdout = match cli.format {
                Format::Text => format!("error: {e}\n"),
                Format::Json => render_json(&name, false, json!({ "error": e.to_string() })),
            };
            Outcome { code: 2, stdout }
        }
    }
}

fn render_json(command: &str, passed: bool, result: Value) -> String {
    let v = json!({ "schema_version": SCHEMA_VERSION, "command": command, "passed": passed, "result": result });
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

fn command_name(c: &Command) -> String {
    let s = match c {
        Command::Bs(BsCmd::Check { .. }) => "bs check",
        Command::Bs(BsCmd::Witness { .. }) => "bs witness",
        Command::Poset(PosetCmd::Width { .. }) => "poset width",
        Command::Poset(PosetCmd::Cover { .. }) => "poset cover",
        Command::Poset(PosetCmd::Decompose { .. }) => "poset decompose",
        Command::Um(UmCmd::Validate { .. }) => "um validate",
        Command::Um(UmCmd::Balls { .. }) => "um balls",
        Command::Um(UmCmd::Delta { .. }) => "um delta",
        Command::Um(UmCmd::FromTau { .. }) => "um from-tau",
        Command::Topo(TopoCmd::Induce { .. }) => "topo induce",
        Command::Example(ExampleCmd::Ex1) => "example ex1",
        Command::Example(ExampleCmd::Ex2) => "example ex2",
        Command::Example(ExampleCmd::Rank { .. }) => "example rank",
        Command::Gen(GenCmd::Um { .. }) => "gen um",
        Command::Suite(SuiteCmd::All) => "suite all",
    };
    s.to_string()
}

fn dispatch(cli: &Cli) -> Result<Res, InputError> {
    if cli.seed == 0 || cli.trials == 0 || cli.truncation == 0 || cli.samples == 0 {
        return Err(InputError::Invalid("--seed, --trials, --truncation and --samples must be positive".into()));
    }
    match &cli.command {
        Command::Bs(BsCmd::Check { file }) => bs_check(file, cli),
        Command::Bs(BsCmd::Witness { file }) => bs_witness(file),
        Command::Poset(c) => poset(c),
        Command::Um(c) => um(c, cli),
        Command::Topo(TopoCmd::Induce { file }) => topo(file),
        Command::Example(c) => example(c, cli),
        Command::Gen(GenCmd::Um { n, kind, depth }) => {
            let kind = match kind {
                Kind::Linear => ValueKind::Linear,
                Kind::Narrow => ValueKind::Narrow,
            };
            let s = random_ultrametric(*n, kind, *depth, cli.seed)?;
            let f = UltrametricFile::from_space(&s);
            let mut text = serde_json::to_string_pretty(&f).expect("serializable");
            text.push('\n');
            Ok(Res::new(true, text, serde_json::to_value(&f).expect("serializable")))
        }
        Command::Suite(SuiteCmd::All) => Ok(suite(cli)),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn opt(b: Option<bool>) -> &'static str {
    b.map_or("refused", yes)
}

fn bs_check(file: &Path, cli: &Cli) -> Result<Res, InputError> {
    let raw: Value = read_json(file)?;
    if raw.get("universe").is_some() {
        let s: SymbolicBallSpace = serde_json::from_value(raw).map_err(|e| InputError::Invalid(e.to_string()))?;
        let ci = ci_symbolic(&s, cli.samples)?;
        let added: Vec<&str> = ci.new_families.iter().map(|f| f.name.as_str()).collect();
        let mut text = format!("symbolic ball space {}: {} families\n", s.name, s.families.len());
        for l in &ci.log {
            let _ = writeln!(text, "  {l}");
        }
        let _ = writeln!(text, "ci adds: {}", if added.is_empty() { "nothing".into() } else { added.join(", ") });
        let json = json!({ "symbolic": true, "log": ci.log, "new_families": ci.new_families });
        return Ok(Res::new(true, text, json));
    }
    let f: BallSpaceFile = serde_json::from_value(raw).map_err(|e| InputError::Invalid(e.to_string()))?;
    let b = f.to_space()?;
    let rep = b.structure_report(cli.max_balls);
    let mut text = format!("{} points, {} balls\n", b.points().len(), b.balls().len());
    let _ = writeln!(text, "tree-like: {}", yes(rep.tree_like));
    if let Some((i, j)) = rep.tree_like_witness {
        let _ = writeln!(
            text,
            "  witness: {:?} and {:?} meet and are incomparable",
            names_of(b.points(), &b.balls()[i]),
            names_of(b.points(), &b.balls()[j])
        );
    }
    let _ = writeln!(text, "generalized tree: {}", yes(rep.generalized_tree));
    let _ = writeln!(text, "closed under finite intersections: {}", yes(rep.closed_under_finite_intersections));
    let _ = writeln!(text, "chain-intersection closed: {}", opt(rep.chain_intersection_closed));
    let _ = writeln!(text, "spherically complete: {}", opt(rep.spherically_complete));
    let mut json = json!({ "symbolic": false, "report": rep });
    if let Some(r) = &rep.refusal {
        return Err(InputError::Invalid(format!("{r}\n{text}")));
    }
    let ci = b.ci(cli.max_balls)?;
    let extra: Vec<Vec<String>> = ci
        .family
        .balls()
        .iter()
        .filter(|x| b.position(x).is_none())
        .map(|x| names_of(b.points(), x))
        .collect();
    let _ = writeln!(text, "ci adds {} balls", extra.len());
    for e in &extra {
        let _ = writeln!(text, "  {e:?}");
    }
    json["ci_added"] = json!(extra);
    Ok(Res::new(true, text, json))
}

fn bs_witness(file: &Path) -> Result<Res, InputError> {
    let w: Witness = read_json(file)?;
    match w.verify() {
        Ok(()) => Ok(Res::new(true, format!("{:?} witness re-verifies\n", w.kind), json!({ "verified": true }))),
        Err(e) => Ok(Res::new(false, format!("witness fails: {e}\n"), json!({ "verified": false, "error": e.to_string() }))),
    }
}

fn poset(c: &PosetCmd) -> Result<Res, InputError> {
    let (PosetCmd::Width { file } | PosetCmd::Cover { file } | PosetCmd::Decompose { file }) = c;
    let f: PosetFile = read_json(file)?;
    let p = f.to_poset()?;
    let named = |xs: &[usize]| -> Vec<String> { xs.iter().map(|&i| p.name(i).to_string()).collect() };
    let width = p.width();
    match c {
        PosetCmd::Width { .. } => {
            let a = named(&p.max_antichain());
            Ok(Res::new(true, format!("width {width}\nantichain {a:?}\n"), json!({ "width": width, "antichain": a })))
        }
        PosetCmd::Cover { .. } => {
            let cover: Vec<Vec<String>> = p.dilworth_cover().iter().map(|c| named(c)).collect();
            let mut text = format!("width {width}; {} chains\n", cover.len());
            for c in &cover {
                let _ = writeln!(text, "  {c:?}");
            }
            Ok(Res::new(cover.len() == width, text, json!({ "width": width, "chains": cover })))
        }
        PosetCmd::Decompose { .. } => {
            let parts = p.directed_decomposition();
            let ok = parts.len() <= width && parts.iter().all(|d| p.is_directed(d));
            let parts: Vec<Vec<String>> = parts.iter().map(|d| named(d)).collect();
            let mut text = format!("width {width}; {} directed parts\n", parts.len());
            for d in &parts {
                let _ = writeln!(text, "  {d:?}");
            }
            Ok(Res::new(ok, text, json!({ "width": width, "parts": parts })))
        }
    }
}

fn violation_json(v: &Violation, points: &[String], value: &dyn Fn(usize) -> String) -> Value {
    let p = |i: usize| points[i].clone();
    match *v {
        Violation::U1 { x, y } | Violation::U3 { x, y } => json!({ "axiom": v.axiom(), "x": p(x), "y": p(y) }),
        Violation::U2 { x, y, z, gamma } => {
            json!({ "axiom": "U2", "x": p(x), "y": p(y), "z": p(z), "gamma": value(gamma) })
        }
        Violation::Ut { x, y, z } => json!({ "axiom": "UT", "x": p(x), "y": p(y), "z": p(z) }),
        Violation::D1 { small, large } => json!({ "axiom": "D1", "small": small, "large": large }),
        Violation::D2 { b0, b1 } => json!({ "axiom": "D2", "b0": b0, "b1": b1 }),
        Violation::Table(ref m) => json!({ "axiom": "table", "message": m }),
    }
}

fn um(c: &UmCmd, cli: &Cli) -> Result<Res, InputError> {
    if let UmCmd::FromTau { file } = c {
        return from_tau(file);
    }
    let (UmCmd::Validate { file } | UmCmd::Balls { file } | UmCmd::Delta { file } | UmCmd::FromTau { file }) = c;
    let raw = read_json::<UltrametricFile>(file)?.decode()?;
    let g = raw.gamma.base().clone();
    let value = |v: usize| g.name(v).to_string();
    let s = match validate_ultrametric(raw.points.clone(), raw.gamma.clone(), raw.d.clone()) {
        Ok(s) => s,
        Err(Violation::Table(m)) => return Err(InputError::Invalid(m)),
        Err(v) => {
            let mut w = violation_json(&v, &raw.points, &value);
            if raw.gamma.is_linear() {
                w["ut"] = json!(check_ut(&raw.d, &raw.gamma).map(|u| violation_json(&u, &raw.points, &value)));
            }
            return Ok(Res::new(false, format!("invalid: {v}\n"), json!({ "valid": false, "witness": w })));
        }
    };
    match c {
        UmCmd::Validate { .. } => {
            let text = format!("valid ultrametric on {} points; Γ linear: {}\n", s.len(), yes(s.gamma().is_linear()));
            Ok(Res::new(true, text, json!({ "valid": true, "linear": s.gamma().is_linear() })))
        }
        UmCmd::Balls { .. } => {
            let b = s.ball_space();
            let rep = b.structure_report(cli.max_balls);
            let balls: Vec<Vec<String>> = b.balls().iter().map(|x| names_of(b.points(), x)).collect();
            let mut text = format!("{} precise balls\n", balls.len());
            for x in &balls {
                let _ = writeln!(text, "  {x:?}");
            }
            let _ = writeln!(text, "tree-like: {}", yes(rep.tree_like));
            Ok(Res::new(true, text, json!({ "balls": balls, "report": rep })))
        }
        UmCmd::Delta { .. } => match ultra_diameter_from(&s) {
            Ok(u) => {
                let rows: Vec<Value> = u
                    .balls
                    .iter()
                    .zip(&u.delta)
                    .map(|(b, &v)| json!({ "ball": names_of(s.points(), b), "delta": value(v) }))
                    .collect();
                let mut text = String::from("ultra-diameter\n");
                for (b, &v) in u.balls.iter().zip(&u.delta) {
                    let _ = writeln!(text, "  δ({:?}) = {}", names_of(s.points(), b), value(v));
                }
                Ok(Res::new(true, text, json!({ "delta": rows })))
            }
            Err(e) => Ok(Res::new(false, format!("{e}\n"), json!({ "error": e.to_string() }))),
        },
        UmCmd::FromTau { .. } => unreachable!("handled above"),
    }
}

fn from_tau(file: &Path) -> Result<Res, InputError> {
    let f: TauFile = read_json(file)?;
    let tau = f.decode()?;
    match construct_from_tau(f.points.clone(), &tau) {
        Ok(s) => {
            let out = UltrametricFile::from_space(&s);
            let text = format!(
                "u_τ on {} points with {} values\n{}\n",
                s.len(),
                s.gamma().len(),
                serde_json::to_string_pretty(&out).expect("serializable")
            );
            Ok(Res::new(true, text, json!({ "space": out })))
        }
        Err(TauError::Invalid(m)) => Err(InputError::Invalid(m)),
        Err(e) => {
            let w = match &e {
                TauError::NoCover { x, y } => json!({ "x": f.points[*x], "y": f.points[*y], "minimal": [] }),
                TauError::NoSmallest { x, y, minimal } => json!({
                    "x": f.points[*x],
                    "y": f.points[*y],
                    "minimal": minimal.iter().map(|m| names_of(&f.points, m)).collect::<Vec<_>>(),
                }),
                TauError::Invalid(_) => unreachable!(),
            };
            let text = format!("no smallest set: {}\n", w);
            Ok(Res::new(false, text, json!({ "witness": w })))
        }
    }
}

fn topo(file: &Path) -> Result<Res, InputError> {
    let f: TopologyFile = read_json(file)?;
    let closed = f.decode()?;
    let (_, rep) = induced_from_topology(f.points.clone(), &closed)?;
    let mut text = format!("T1: {}\nvalues pairwise incomparable: {}\n", yes(rep.t1), yes(rep.antichain));
    if rep.degenerate {
        text.push_str("degenerate: at most one value off ⊥\n");
    }
    for (a, b) in &rep.order {
        let _ = writeln!(text, "  {a} ⊂ {b}");
    }
    let passed = !rep.t1 || rep.antichain;
    let json = json!({
        "t1": rep.t1,
        "antichain": rep.antichain,
        "degenerate": rep.degenerate,
        "values": rep.values,
        "order": rep.order,
    });
    Ok(Res::new(passed, text, json))
}

fn report_res(r: &Report) -> Res {
    let mut text = format!("{}\n", r.name);
    for c in &r.clauses {
        let _ = writeln!(text, "  ({}) {}: {}", c.id, if c.passed { "ok" } else { "FAIL" }, c.claim);
        let _ = writeln!(text, "      {}", c.detail);
    }
    for w in &r.witnesses {
        let ok = w.verify().is_ok();
        let _ = writeln!(text, "  witness {:?}: {}", w.kind, if ok { "re-verified" } else { "does not verify" });
    }
    for n in &r.notes {
        let _ = writeln!(text, "  note: {n}");
    }
    let passed = r.passed() && r.witnesses.iter().all(|w| w.verify().is_ok());
    Res::new(passed, text, serde_json::to_value(r).expect("serializable"))
}

fn example(c: &ExampleCmd, cli: &Cli) -> Result<Res, InputError> {
    let r = match c {
        ExampleCmd::Ex1 => ex1_verify(cli.truncation, cli.samples)?,
        ExampleCmd::Ex2 => ex2_verify(cli.samples)?,
        ExampleCmd::Rank { depth } => {
            let g = RankGadget::standard(*depth)?;
            rank_gadget_verify(&g, cli.samples.min(64) as u32)?
        }
    };
    Ok(report_res(&r))
}

fn suite(cli: &Cli) -> Res {
    let cfg = SuiteConfig {
        seed: cli.seed,
        trials: cli.trials,
        truncation: cli.truncation,
        samples: cli.samples,
        max_balls: cli.max_balls,
    };
    let results = run_all(&cfg);
    let mut text = String::new();
    for r in &results {
        let _ = writeln!(
            text,
            "criterion {:>2} {} ({:.2} s): {}: {}",
            r.id,
            if r.passed { "PASS" } else { "FAIL" },
            r.elapsed.as_secs_f64(),
            r.title,
            r.detail
        );
    }
    let passed = results.iter().all(|r| r.passed);
    Res::new(passed, text, json!({ "criteria": results }))
}
