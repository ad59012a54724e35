//! The `qmedia` command line: subcommand parsing, file dispatch, stable JSON
//! reports, and the fixture corpus runner.
//!
//! Exit codes: 0 = success / verdict true, 1 = verdict false (with
//! witnesses in the report), 2 = input or usage error.

use crate::action::{action_from_subgroup, check_special, full_cayley_action};
use crate::budget::Budget;
use crate::embed::{build_embedding, verify_embedding, EmbedConfig};
use crate::io::{
    load_json, save_json, to_dot, to_stable_json, ActionSpecFile, CoverFile, GraphFile, GroupFile,
    PresentationFile, RaggFile,
};
use crate::qmgraph::{cayley_ball, check_quasi_median, hyperplanes, is_gated, QMGraph};
use crate::ragg::{
    build_psi, canonical_double_cover, check_conditions, frak_x_ball, pullback_cover,
    validate_ragg, x_action, PsiOptions,
};
use crate::words::{is_graphically_reduced, parse_word, reduce, GPPresentation};
use crate::{Error, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "qmedia", version, about = "Quasi-median graphs from graph products and right-angled graphs of groups")]
pub struct Cli {
    /// Override the ball-vertex budget (also QMEDIA_BUDGET).
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0x5eed_e4bd)]
    pub seed: u64,
    /// Treat window-inexact verdicts as errors.
    #[arg(long, global = true, default_value_t = false)]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finite-group file operations.
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
    /// Graph-product word calculus.
    Word {
        #[command(subcommand)]
        cmd: WordCmd,
    },
    /// Quasi-median graph engine.
    Qm {
        #[command(subcommand)]
        cmd: QmCmd,
    },
    /// Group actions on balls.
    Act {
        #[command(subcommand)]
        cmd: ActCmd,
    },
    /// The embedding pipeline.
    Embed {
        #[command(subcommand)]
        cmd: EmbedCmd,
    },
    /// Right-angled graphs of groups.
    Ragg {
        #[command(subcommand)]
        cmd: RaggCmd,
    },
    /// Run the whole pipeline over a directory of fixtures.
    Corpus { dir: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum GroupCmd {
    /// Validate a multiplication-table group file.
    Check { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum WordCmd {
    /// Reduce a word literal over a presentation.
    Reduce { presentation: PathBuf, word: String },
}

#[derive(Debug, Args)]
pub struct RadiusArg {
    /// Ball radius for presentation inputs.
    #[arg(short, long, default_value_t = 3)]
    pub radius: u32,
}

#[derive(Debug, Subcommand)]
pub enum QmCmd {
    /// Build a Cayley ball and dump it as JSON.
    Ball {
        presentation: PathBuf,
        #[command(flatten)]
        radius: RadiusArg,
        /// Output file (stdout when omitted).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check the quasi-median axioms of a ball or graph dump.
    Check {
        file: PathBuf,
        #[command(flatten)]
        radius: RadiusArg,
    },
    /// List hyperplanes with carriers and sectors.
    Hyperplanes {
        file: PathBuf,
        #[command(flatten)]
        radius: RadiusArg,
    },
    /// Gatedness of a vertex set (indices, or word literals over a
    /// presentation's ball).
    Gated {
        file: PathBuf,
        #[command(flatten)]
        radius: RadiusArg,
        /// Comma-separated vertex ids or word literals.
        #[arg(long)]
        set: String,
    },
    /// DOT export.
    Dot {
        file: PathBuf,
        #[command(flatten)]
        radius: RadiusArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum ActCmd {
    /// Specialness verdict for a subgroup action on a Cayley ball.
    SpecialCheck {
        presentation: PathBuf,
        /// Generator words, semicolon-separated; omitted = full action.
        #[arg(long)]
        gens: Option<String>,
        #[command(flatten)]
        radius: RadiusArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum EmbedCmd {
    /// Build the embedding data for an action spec.
    Build {
        action_spec: PathBuf,
        #[command(flatten)]
        radius: RadiusArg,
        /// Extra elements added to every K_i.
        #[arg(long, default_value_t = 0)]
        bigger_k: usize,
        /// Write the target presentation here.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Build and run the verification suite.
    Verify {
        action_spec: PathBuf,
        #[command(flatten)]
        radius: RadiusArg,
        #[arg(long, default_value_t = 0)]
        bigger_k: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum RaggCmd {
    /// Validate a RAGG specification.
    Validate { spec: PathBuf },
    /// Decide the four specialness conditions.
    Check { spec: PathBuf },
    /// Build the Psi graph (requires the conditions to hold).
    Psi {
        spec: PathBuf,
        /// One arrow vertex per arrow instead of per pair.
        #[arg(long, default_value_t = false)]
        per_arrow: bool,
        /// Order of the arrow-vertex groups.
        #[arg(long, default_value_t = 2)]
        arrow_order: usize,
    },
    /// Pull the spec back along a covering.
    Cover {
        spec: PathBuf,
        /// Use the canonical bipartite double cover.
        #[arg(long, default_value_t = false)]
        double: bool,
        /// Covering description file.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Build a groupoid ball.
    Ball {
        spec: PathBuf,
        /// Base vertex (defaults to the first).
        #[arg(long)]
        omega: Option<String>,
        #[command(flatten)]
        radius: RadiusArg,
    },
}

/// Parse and run; returns (exit code, report text).
pub fn run(argv: &[String]) -> (i32, String) {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => return (2, e.to_string()),
    };
    let mut budget = Budget::from_env();
    if let Some(b) = cli.budget {
        budget.ball_vertices = b;
    }
    match dispatch(&cli, &budget) {
        Ok((code, report)) => (code, report),
        Err(e) => {
            let report = to_stable_json(&json!({ "error": e.to_string() }))
                .unwrap_or_else(|_| format!("error: {e}\n"));
            (2, report)
        }
    }
}

fn ok_report(verdict: bool, body: Value) -> Result<(i32, String)> {
    let mut obj = body;
    if let Some(map) = obj.as_object_mut() {
        map.insert("verdict".into(), Value::Bool(verdict));
    }
    Ok((if verdict { 0 } else { 1 }, to_stable_json(&obj)?))
}

fn info_report(body: Value) -> Result<(i32, String)> {
    Ok((0, to_stable_json(&body)?))
}

enum QmInput {
    Ball(crate::qmgraph::CayleyBall),
    Graph(QMGraph),
}

impl QmInput {
    fn graph(&self) -> &QMGraph {
        match self {
            QmInput::Ball(b) => &b.graph,
            QmInput::Graph(g) => g,
        }
    }
}

/// A qm file is either a presentation (build a ball) or a graph dump.
fn load_qm_input(path: &Path, radius: u32, budget: &Budget) -> Result<QmInput> {
    let value: Value = load_json(path)?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::invalid("expected a JSON object"))?;
    if obj.contains_key("vertices") && obj.contains_key("groups") {
        let pf: PresentationFile = serde_json::from_value(value)?;
        let p = pf.to_presentation()?;
        Ok(QmInput::Ball(cayley_ball(&p, radius, budget)?))
    } else if obj.contains_key("labels") && obj.contains_key("edges") {
        let gf: GraphFile = serde_json::from_value(value)?;
        Ok(QmInput::Graph(gf.to_graph()?))
    } else {
        Err(Error::invalid(
            "file is neither a presentation nor a graph dump",
        ))
    }
}

fn load_presentation(path: &Path) -> Result<GPPresentation> {
    let pf: PresentationFile = load_json(path)?;
    pf.to_presentation()
}

struct LoadedAction {
    action: crate::action::GroupAction,
    kind: String,
}

fn load_action(path: &Path, radius: u32, budget: &Budget) -> Result<LoadedAction> {
    let spec: ActionSpecFile = load_json(path)?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let radius = spec.radius.unwrap_or(radius);
    match (&spec.presentation, &spec.ragg) {
        (Some(pres), None) => {
            let p = load_presentation(&dir.join(pres))?;
            let ball = cayley_ball(&p, radius, budget)?;
            let action = match &spec.gens {
                None => full_cayley_action(ball),
                Some(gens) => {
                    let words = gens
                        .iter()
                        .map(|g| Ok(reduce(&p, &parse_word(&p, g)?)))
                        .collect::<Result<Vec<_>>>()?;
                    action_from_subgroup(ball, words)
                }
            };
            Ok(LoadedAction {
                action,
                kind: "graph_product".into(),
            })
        }
        (None, Some(ragg)) => {
            let rf: RaggFile = load_json(&dir.join(ragg))?;
            let rspec = rf.to_spec()?;
            let omega = match &spec.omega {
                Some(name) => rspec
                    .graph
                    .vertex_id(name)
                    .ok_or_else(|| Error::invalid(format!("unknown omega {name}")))?,
                None => 0,
            };
            let ball = frak_x_ball(&rspec, omega, radius, budget)?;
            let action = x_action(&ball)?;
            Ok(LoadedAction {
                action,
                kind: "ragg".into(),
            })
        }
        _ => Err(Error::invalid(
            "action spec must name exactly one of `presentation` or `ragg`",
        )),
    }
}

fn dispatch(cli: &Cli, budget: &Budget) -> Result<(i32, String)> {
    match &cli.command {
        Command::Group { cmd: GroupCmd::Check { file } } => {
            let gf: GroupFile = load_json(file)?;
            match gf.to_group() {
                Ok(g) => ok_report(
                    true,
                    json!({
                        "command": "group check",
                        "name": g.name(),
                        "order": g.order(),
                        "associativity_exhaustive": g.assoc_exhaustive(),
                    }),
                ),
                Err(e) => ok_report(
                    false,
                    json!({ "command": "group check", "reason": e.to_string() }),
                ),
            }
        }
        Command::Word { cmd: WordCmd::Reduce { presentation, word } } => {
            let p = load_presentation(presentation)?;
            let w = parse_word(&p, word)?;
            let reduced = reduce(&p, &w);
            let (was_reduced, moves) = is_graphically_reduced(&p, &w);
            info_report(json!({
                "command": "word reduce",
                "input": word,
                "reduced": reduced.display(&p),
                "length": reduced.len(),
                "input_was_reduced": was_reduced,
                "shortening_moves": moves.map(|ms| format!("{ms:?}")),
            }))
        }
        Command::Qm { cmd } => qm_dispatch(cmd, budget),
        Command::Act { cmd: ActCmd::SpecialCheck { presentation, gens, radius } } => {
            let p = load_presentation(presentation)?;
            let ball = cayley_ball(&p, radius.radius, budget)?;
            let action = match gens {
                None => full_cayley_action(ball),
                Some(gens) => {
                    let words = gens
                        .split(';')
                        .filter(|s| !s.trim().is_empty())
                        .map(|g| Ok(reduce(&p, &parse_word(&p, g)?)))
                        .collect::<Result<Vec<_>>>()?;
                    action_from_subgroup(ball, words)
                }
            };
            let hyps = hyperplanes(action.graph());
            let report = check_special(&action, &hyps, 3, budget)?;
            if cli.strict && !report.window_exact {
                return Err(Error::WindowInexact(vec![]));
            }
            ok_report(
                report.special,
                json!({
                    "command": "act special-check",
                    "hyperplane_special": report.hyperplane_special,
                    "special": report.special,
                    "window_exact": report.window_exact,
                    "scanned_hyperplanes": report.scanned_hyperplanes,
                    "witnesses": report.witnesses,
                }),
            )
        }
        Command::Embed { cmd } => embed_dispatch(cmd, cli, budget),
        Command::Ragg { cmd } => ragg_dispatch(cmd, budget),
        Command::Corpus { dir } => corpus(dir, budget),
    }
}

fn qm_dispatch(cmd: &QmCmd, budget: &Budget) -> Result<(i32, String)> {
    match cmd {
        QmCmd::Ball { presentation, radius, out } => {
            let p = load_presentation(presentation)?;
            let ball = cayley_ball(&p, radius.radius, budget)?;
            let dump = GraphFile::from_graph(&ball.graph, true);
            match out {
                Some(path) => {
                    save_json(path, &dump)?;
                    info_report(json!({
                        "command": "qm ball",
                        "vertices": ball.graph.vertex_count(),
                        "edges": ball.graph.edge_count(),
                        "complete": ball.complete,
                        "out": path.display().to_string(),
                    }))
                }
                None => Ok((0, to_stable_json(&dump)?)),
            }
        }
        QmCmd::Check { file, radius } => {
            let input = load_qm_input(file, radius.radius, budget)?;
            let report = check_quasi_median(input.graph());
            ok_report(
                report.pass,
                json!({
                    "command": "qm check",
                    "vertices": input.graph().vertex_count(),
                    "certified_vertices": report.certified_vertices,
                    "exact": report.exact,
                    "k4_minus": report.k4_minus,
                    "k32": report.k32,
                    "triangle": report.triangle,
                    "quadrangle": report.quadrangle,
                }),
            )
        }
        QmCmd::Hyperplanes { file, radius } => {
            let input = load_qm_input(file, radius.radius, budget)?;
            let hyps = hyperplanes(input.graph());
            let rows: Vec<Value> = hyps
                .hyperplanes
                .iter()
                .map(|h| {
                    json!({
                        "id": h.id,
                        "edges": h.edges.len(),
                        "carrier": h.carrier.iter().collect::<Vec<_>>(),
                        "sectors": h.sectors.len(),
                        "window_exact": h.window_exact,
                    })
                })
                .collect();
            info_report(json!({
                "command": "qm hyperplanes",
                "count": hyps.len(),
                "hyperplanes": rows,
            }))
        }
        QmCmd::Gated { file, radius, set } => {
            let input = load_qm_input(file, radius.radius, budget)?;
            let mut vertices = std::collections::BTreeSet::new();
            for token in set.split(',') {
                let token = token.trim();
                if token.is_empty() {
                    continue;
                }
                if let Ok(v) = token.parse::<usize>() {
                    vertices.insert(v);
                    continue;
                }
                match &input {
                    QmInput::Ball(ball) => {
                        let w = reduce(&ball.presentation, &parse_word(&ball.presentation, token)?);
                        let v = ball
                            .vertex_of(&w)
                            .ok_or_else(|| Error::invalid(format!("word `{token}` outside ball")))?;
                        vertices.insert(v);
                    }
                    QmInput::Graph(_) => {
                        return Err(Error::invalid(format!(
                            "cannot resolve word `{token}` on a raw graph"
                        )))
                    }
                }
            }
            let report = is_gated(input.graph(), &vertices);
            ok_report(
                report.gated,
                json!({
                    "command": "qm gated",
                    "set": vertices.iter().collect::<Vec<_>>(),
                    "failure": report.failure,
                }),
            )
        }
        QmCmd::Dot { file, radius } => {
            let input = load_qm_input(file, radius.radius, budget)?;
            Ok((0, to_dot(input.graph(), true)))
        }
    }
}

fn embed_config(cli: &Cli, graph: &QMGraph, bigger_k: usize) -> EmbedConfig {
    let mut cfg = EmbedConfig::at_basepoint(graph.basepoint());
    cfg.bigger_k = bigger_k;
    cfg.seed = cli.seed;
    cfg
}

fn embed_dispatch(cmd: &EmbedCmd, cli: &Cli, budget: &Budget) -> Result<(i32, String)> {
    match cmd {
        EmbedCmd::Build { action_spec, radius, bigger_k, out } => {
            let loaded = load_action(action_spec, radius.radius, budget)?;
            let act = &loaded.action;
            let hyps = hyperplanes(act.graph());
            let cfg = embed_config(cli, act.graph(), *bigger_k);
            let data = build_embedding(act, &hyps, &cfg, budget)?;
            let target = PresentationFile::from_presentation(&data.target);
            if let Some(path) = out {
                save_json(path, &target)?;
            }
            let labelled = data.sector_labels.iter().filter(|t| t.is_some()).count();
            ok_report(
                true,
                json!({
                    "command": "embed build",
                    "kind": loaded.kind,
                    "orbit_count": data.orbit.classes.len(),
                    "orbit_graph_edges": data
                        .orbit_graph
                        .iter()
                        .map(|n| n.iter().collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                    "vertex_group_orders": data
                        .vertex_groups
                        .iter()
                        .map(|g| g.order())
                        .collect::<Vec<_>>(),
                    "k_orders": data.k_orders,
                    "labelled_hyperplanes": labelled,
                    "hyperplanes": hyps.len(),
                    "target": target,
                }),
            )
        }
        EmbedCmd::Verify { action_spec, radius, bigger_k } => {
            let loaded = load_action(action_spec, radius.radius, budget)?;
            let act = &loaded.action;
            let hyps = hyperplanes(act.graph());
            let cfg = embed_config(cli, act.graph(), *bigger_k);
            let data = build_embedding(act, &hyps, &cfg, budget)?;
            let report = verify_embedding(&data, act, &hyps, &cfg)?;
            ok_report(
                report.pass,
                json!({
                    "command": "embed verify",
                    "kind": loaded.kind,
                    "report": report,
                }),
            )
        }
    }
}

fn ragg_dispatch(cmd: &RaggCmd, budget: &Budget) -> Result<(i32, String)> {
    match cmd {
        RaggCmd::Validate { spec } => {
            let rf: RaggFile = load_json(spec)?;
            let s = rf.to_spec()?;
            let rep = validate_ragg(&s);
            ok_report(
                rep.valid,
                json!({
                    "command": "ragg validate",
                    "name": s.name,
                    "issues": rep.issues,
                }),
            )
        }
        RaggCmd::Check { spec } => {
            let rf: RaggFile = load_json(spec)?;
            let s = rf.to_spec()?;
            let rep = check_conditions(&s, budget)?;
            ok_report(
                rep.pass,
                json!({
                    "command": "ragg check",
                    "name": s.name,
                    "conditions": {
                        "i": rep.c1.is_none(),
                        "ii": rep.c2.is_none(),
                        "iii": rep.c3.is_none(),
                        "iv": rep.c4.is_none(),
                    },
                    "witness_i": rep.c1,
                    "witness_ii": rep.c2,
                    "witness_iii": rep.c3,
                    "witness_iv": rep.c4,
                }),
            )
        }
        RaggCmd::Psi { spec, per_arrow, arrow_order } => {
            let rf: RaggFile = load_json(spec)?;
            let s = rf.to_spec()?;
            let opts = PsiOptions {
                vertex_per_arrow: *per_arrow,
                arrow_group_order: *arrow_order,
            };
            match build_psi(&s, &opts, budget) {
                Ok((psi, meta)) => ok_report(
                    true,
                    json!({
                        "command": "ragg psi",
                        "name": s.name,
                        "psi": PresentationFile::from_presentation(&psi),
                        "arrow_vertices": meta.arrow_vertices,
                    }),
                ),
                Err(Error::ConditionsFailed(msg)) => ok_report(
                    false,
                    json!({ "command": "ragg psi", "name": s.name, "reason": msg }),
                ),
                Err(e) => Err(e),
            }
        }
        RaggCmd::Cover { spec, double, file, out } => {
            let rf: RaggFile = load_json(spec)?;
            let s = rf.to_spec()?;
            let pulled = if *double {
                canonical_double_cover(&s).0
            } else {
                let cf_path = file
                    .as_ref()
                    .ok_or_else(|| Error::invalid("--double or --file required"))?;
                let cf: CoverFile = load_json(cf_path)?;
                let cover = cf.to_cover(&s)?;
                pullback_cover(&s, &cover)?
            };
            let out_file = RaggFile::from_spec(&pulled);
            match out {
                Some(path) => {
                    save_json(path, &out_file)?;
                    info_report(json!({
                        "command": "ragg cover",
                        "name": pulled.name,
                        "vertices": pulled.graph.vertex_count(),
                        "arrows": pulled.graph.arrows.len(),
                        "out": path.display().to_string(),
                    }))
                }
                None => Ok((0, to_stable_json(&out_file)?)),
            }
        }
        RaggCmd::Ball { spec, omega, radius } => {
            let rf: RaggFile = load_json(spec)?;
            let s = rf.to_spec()?;
            let omega = match omega {
                Some(name) => s
                    .graph
                    .vertex_id(name)
                    .ok_or_else(|| Error::invalid(format!("unknown omega {name}")))?,
                None => 0,
            };
            let ball = frak_x_ball(&s, omega, radius.radius, budget)?;
            Ok((0, to_stable_json(&GraphFile::from_graph(&ball.graph, true))?))
        }
    }
}

/// Classify and run every JSON file in a directory.
fn corpus(dir: &Path, budget: &Budget) -> Result<(i32, String)> {
    let mut entries: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    entries.sort();
    let mut rows = vec![];
    let mut had_errors = false;
    for path in entries {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().to_string())
            .unwrap_or_default();
        let row = corpus_row(&path, budget);
        match row {
            Ok(v) => rows.push(json!({ "file": name, "result": v })),
            Err(e) => {
                had_errors = true;
                rows.push(json!({ "file": name, "error": e.to_string() }));
            }
        }
    }
    let report = to_stable_json(&json!({ "command": "corpus", "rows": rows }))?;
    Ok((if had_errors { 2 } else { 0 }, report))
}

fn corpus_row(path: &Path, budget: &Budget) -> Result<Value> {
    let value: Value = load_json(path)?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::invalid("expected a JSON object"))?;
    if obj.contains_key("graph") && obj.contains_key("embeddings") {
        let rf: RaggFile = serde_json::from_value(value)?;
        let spec = rf.to_spec()?;
        let validation = validate_ragg(&spec);
        if !validation.valid {
            return Ok(json!({ "kind": "ragg", "valid": false, "issues": validation.issues }));
        }
        let conditions = check_conditions(&spec, budget)?;
        let psi = if conditions.pass {
            let (psi, _) = build_psi(&spec, &PsiOptions::default(), budget)?;
            Some(json!({
                "vertices": psi.vertex_count(),
                "edges": psi.edges().len(),
            }))
        } else {
            None
        };
        Ok(json!({
            "kind": "ragg",
            "valid": true,
            "conditions_pass": conditions.pass,
            "conditions": {
                "i": conditions.c1.is_none(),
                "ii": conditions.c2.is_none(),
                "iii": conditions.c3.is_none(),
                "iv": conditions.c4.is_none(),
            },
            "psi": psi,
        }))
    } else if obj.contains_key("vertices") && obj.contains_key("groups") {
        let pf: PresentationFile = serde_json::from_value(value)?;
        let p = pf.to_presentation()?;
        let ball = cayley_ball(&p, 3, budget)?;
        let qm = check_quasi_median(&ball.graph);
        Ok(json!({
            "kind": "presentation",
            "ball_vertices": ball.graph.vertex_count(),
            "quasi_median_pass": qm.pass,
        }))
    } else if obj.contains_key("order") && obj.contains_key("table") {
        let gf: GroupFile = serde_json::from_value(value)?;
        match gf.to_group() {
            Ok(g) => Ok(json!({ "kind": "group", "valid": true, "order": g.order() })),
            Err(e) => Ok(json!({ "kind": "group", "valid": false, "reason": e.to_string() })),
        }
    } else if obj.contains_key("labels") && obj.contains_key("edges") {
        let gf: GraphFile = serde_json::from_value(value)?;
        let g = gf.to_graph()?;
        let qm = check_quasi_median(&g);
        Ok(json!({ "kind": "graph", "quasi_median_pass": qm.pass }))
    } else {
        Err(Error::invalid("unrecognised fixture shape"))
    }
}
