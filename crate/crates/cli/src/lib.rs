//! The `raag` command line: argument parsing, dispatch and output.
//!
//! Every invocation produces one JSON object with `command`, `input`, `result`
//! and `certificates`. Text mode prints the same object flattened to
//! `path: value` lines, and [`unflatten`] reads them back.

use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use raag_core::automata::{is_annihilated, Pump};
use raag_core::lattice::{
    boundary_quotient_report, component_label, enumerate_ideals, format_ideal, hasse_diagram, ideal_to_json,
    minimal_ideal_report, parse_ideal, quotient_presentation, separating_witness, set_labels, DEFAULT_MAX_COMPONENTS,
};
use raag_core::spectrum::{classify_relation, saturate};
use raag_core::verify::{verify_all, DEFAULT_DEPTH};
use raag_core::{ArtinMonoid, Error, PresentationGraph, Trace};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INVARIANT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "raag", version, about = "Right-angled Artin monoids, relations and Toeplitz algebra ideals")]
pub struct Cli {
    /// Graph file, in text or JSON format.
    #[arg(long, global = true, value_name = "PATH")]
    pub graph: Option<PathBuf>,
    /// Print one JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Normal form of a word.
    Nf { word: String },
    /// Least common upper bound of two traces.
    Join { x: String, y: String },
    /// Whether x is a left divisor of y.
    Divides { x: String, y: String },
    /// Classify a comma-separated relation h1,h2,...
    Classify { relation: String },
    /// The ideal generated by the same spectrum as a relation.
    Saturate { relation: String },
    /// Enumerate all ideals with their Hasse diagram.
    Ideals {
        #[arg(long, default_value_t = DEFAULT_MAX_COMPONENTS)]
        max_components: usize,
    },
    /// Presentation of the quotient by the ideal of an antichain such as {a},{b,c}.
    Present { antichain: String },
    /// A spectrum point telling two ideals apart.
    Separate { first: String, second: String },
    /// Boundary quotient report.
    Boundary,
    /// Minimal ideal report.
    Minimal,
    /// Euler characteristic of the clique complex.
    Euler,
    /// Run the invariant suites.
    Verify {
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Components of the opposite graph.
    Components,
    /// Core, atoms and centre.
    Core,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Nf { .. } => "nf",
            Command::Join { .. } => "join",
            Command::Divides { .. } => "divides",
            Command::Classify { .. } => "classify",
            Command::Saturate { .. } => "saturate",
            Command::Ideals { .. } => "ideals",
            Command::Present { .. } => "present",
            Command::Separate { .. } => "separate",
            Command::Boundary => "boundary",
            Command::Minimal => "minimal",
            Command::Euler => "euler",
            Command::Verify { .. } => "verify",
            Command::Components => "components",
            Command::Core => "core",
        }
    }

    fn arguments(&self) -> Value {
        match self {
            Command::Nf { word } => json!({ "word": word }),
            Command::Join { x, y } | Command::Divides { x, y } => json!({ "x": x, "y": y }),
            Command::Classify { relation } | Command::Saturate { relation } => json!({ "relation": relation }),
            Command::Ideals { max_components } => json!({ "max_components": max_components }),
            Command::Present { antichain } => json!({ "antichain": antichain }),
            Command::Separate { first, second } => json!({ "first": first, "second": second }),
            Command::Verify { depth } => json!({ "depth": depth }),
            _ => json!({}),
        }
    }
}

/// What an invocation prints and how it exits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A computed report: result, certificates, and whether an invariant failed.
struct Report {
    result: Value,
    certificates: Value,
    violation: Option<String>,
}

impl Report {
    fn ok(result: Value) -> Self {
        Report { result, certificates: json!({}), violation: None }
    }

    fn with(result: Value, certificates: Value) -> Self {
        Report { result, certificates, violation: None }
    }
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: text },
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Outcome {
    let command = cli.command.name();
    let mut input = Map::new();
    input.insert("arguments".into(), cli.command.arguments());
    let outcome = match load_graph(cli) {
        Err(f) => Err(f),
        Ok(graph) => {
            input.insert("graph".into(), graph_json(&graph));
            match panic::catch_unwind(AssertUnwindSafe(|| dispatch(&cli.command, graph))) {
                Ok(r) => r,
                Err(p) => {
                    let msg = p
                        .downcast_ref::<String>()
                        .cloned()
                        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                        .unwrap_or_else(|| "panic".into());
                    Err(Failure::Internal(msg))
                }
            }
        }
    };
    let input = Value::Object(input);
    match outcome {
        Ok(report) => {
            let doc = json!({
                "command": command,
                "input": input,
                "result": report.result,
                "certificates": report.certificates,
            });
            let stdout = render(&doc, cli.json);
            let (code, stderr) = match report.violation {
                Some(v) => (EXIT_INVARIANT, format!("invariant violation: {v}\n")),
                None => (EXIT_OK, String::new()),
            };
            Outcome { code, stdout, stderr }
        }
        Err(f) => {
            let (code, kind, message) = match f {
                Failure::Input(m) => (EXIT_INPUT, "input", m),
                Failure::Internal(m) => (EXIT_INVARIANT, "internal", m),
            };
            let stdout = if cli.json {
                render(&json!({ "command": command, "input": input, "error": { "kind": kind, "message": message } }), true)
            } else {
                String::new()
            };
            Outcome { code, stdout, stderr: format!("error: {message}\n") }
        }
    }
}

fn render(doc: &Value, as_json: bool) -> String {
    if as_json {
        let mut s = serde_json::to_string_pretty(doc).expect("serializable");
        s.push('\n');
        s
    } else {
        flatten(doc)
    }
}

fn load_graph(cli: &Cli) -> Result<PresentationGraph, Failure> {
    let path = cli.graph.as_ref().ok_or_else(|| Failure::Input("--graph <PATH> is required".into()))?;
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(PresentationGraph::parse(&text)?)
}

fn graph_json(g: &PresentationGraph) -> Value {
    let edges: Vec<Value> = g.edges().map(|(u, v)| json!([g.name(u), g.name(v)])).collect();
    json!({ "vertices": g.names(), "edges": edges })
}

fn words(m: &ArtinMonoid, ts: &[Trace]) -> Value {
    Value::Array(ts.iter().map(|t| json!(m.format(t))).collect())
}

fn pump_json(m: &ArtinMonoid, p: &Pump) -> Value {
    json!({
        "stem": m.format(&m.normal_form(&p.stem).expect("generators")),
        "cycle": m.format(&m.normal_form(&p.cycle).expect("generators")),
    })
}

fn dispatch(command: &Command, graph: PresentationGraph) -> Result<Report, Failure> {
    let m = ArtinMonoid::new(graph);
    let g = m.graph();
    match command {
        Command::Nf { word } => {
            let x = m.parse_trace(word)?;
            Ok(Report::ok(json!({
                "normal_form": m.format(&x),
                "length": x.len(),
                "abelianization": m.format_vector(&m.abelianize(&x)),
            })))
        }
        Command::Join { x, y } => {
            let (x, y) = (m.parse_trace(x)?, m.parse_trace(y)?);
            let j = m.join(&x, &y);
            let annihilated = is_annihilated(&m, &x, &y);
            let mut report = Report::with(
                json!({
                    "join": m.format_bound(j.as_ref()),
                    "residual_x": m.format_bound(m.residual(&x, &y).as_ref()),
                    "residual_y": m.format_bound(m.residual(&y, &x).as_ref()),
                }),
                json!({
                    "annihilated_by_automaton": annihilated,
                    "upper_bound_checked": j.as_ref().map(|j| m.left_divides(&x, j) && m.left_divides(&y, j)),
                }),
            );
            if annihilated != j.is_none() || j.as_ref().is_some_and(|j| !(m.left_divides(&x, j) && m.left_divides(&y, j))) {
                report.violation = Some("join disagrees with its certificates".into());
            }
            Ok(report)
        }
        Command::Divides { x, y } => {
            let (x, y) = (m.parse_trace(x)?, m.parse_trace(y)?);
            let q = m.left_quotient(&x, &y);
            let product_check = q.as_ref().map(|q| m.multiply(&x, q) == y);
            let mut report = Report::with(
                json!({ "divides": q.is_some(), "quotient": q.as_ref().map(|q| m.format(q)) }),
                json!({ "product_check": product_check }),
            );
            if product_check == Some(false) {
                report.violation = Some("x times the quotient is not y".into());
            }
            Ok(report)
        }
        Command::Classify { relation } => {
            let h = m.parse_trace_list(relation)?;
            if h.is_empty() {
                return Err(Error::EmptyRelation.into());
            }
            let c = classify_relation(&m, &h);
            let b = c.boundary.expect("nonempty relation");
            let e = c.essential.expect("nonempty relation");
            let mut report = Report::with(
                json!({
                    "class": c.class.to_string(),
                    "relation": words(&m, &h),
                    "boundary": b.answer,
                    "essential": e.essential,
                    "survivors": e.survivors.as_ref().map(|s| words(&m, s)),
                    "pump": e.pump.as_ref().map(|p| pump_json(&m, p)),
                }),
                json!({
                    "annihilator": b.witness.as_ref().map(|z| m.format(z)),
                    "annihilator_verified": b.witness_verified,
                    "boundary_states_explored": b.states_explored,
                    "essential_states_explored": e.states_explored,
                }),
            );
            if !b.answer && !b.witness_verified {
                report.violation = Some("annihilator certificate failed to verify".into());
            }
            Ok(report)
        }
        Command::Saturate { relation } => {
            let h = m.parse_trace_list(relation)?;
            let s = saturate(&m, &h)?;
            let dec = g.opp_components();
            let failing: Vec<Value> = s.failing.iter().map(|&c| json!(set_labels(g, &dec, c))).collect();
            let mut report = Report::with(
                json!({ "ideal": ideal_to_json(g, &s.ideal), "ideal_text": format_ideal(g, &s.ideal), "failing_sets": failing }),
                json!({ "samples_checked": s.samples_checked, "mismatches": words(&m, &s.mismatches) }),
            );
            if !s.mismatches.is_empty() {
                report.violation = Some("sampled points disagree with the saturated ideal".into());
            }
            Ok(report)
        }
        Command::Ideals { max_components } => {
            let dec = g.opp_components();
            let ideals = enumerate_ideals(dec.len(), *max_components)?;
            let labels: Vec<String> = (0..dec.len()).map(|i| component_label(g, &dec, i)).collect();
            let hasse: Vec<Value> = hasse_diagram(&ideals).into_iter().map(|(i, j)| json!([i, j])).collect();
            Ok(Report::ok(json!({
                "components": labels,
                "count": ideals.len(),
                "proper_nontrivial": ideals.len().saturating_sub(2),
                "ideals": ideals.iter().map(|i| ideal_to_json(g, i)).collect::<Vec<_>>(),
                "hasse": hasse,
            })))
        }
        Command::Present { antichain } => {
            let ideal = parse_ideal(g, antichain)?;
            let p = quotient_presentation(g, &ideal)?;
            Ok(Report::ok(json!({ "ideal": ideal_to_json(g, &ideal), "presentation": p.to_json(&m) })))
        }
        Command::Separate { first, second } => {
            let (i, j) = (parse_ideal(g, first)?, parse_ideal(g, second)?);
            let s = separating_witness(&m, &i, &j)?;
            let dec = g.opp_components();
            let mut report = Report::with(
                json!({
                    "set": set_labels(g, &dec, s.set),
                    "point": s.point.to_json(&m),
                    "explanation": s.explanation,
                }),
                json!({ "satisfies_first": s.satisfies_first, "satisfies_second": s.satisfies_second }),
            );
            if s.satisfies_first == s.satisfies_second {
                report.violation = Some("the witness does not separate the ideals".into());
            }
            Ok(report)
        }
        Command::Boundary => {
            let r = boundary_quotient_report(g);
            let flags = match (r.simple, r.purely_infinite) {
                (Some(s), Some(p)) => json!({ "simple": s, "purely_infinite": p }),
                _ => Value::Null,
            };
            let cuntz = r.presentation.extra.len() == 1 && g.edge_count() == 0;
            Ok(Report::with(
                json!({
                    "ideal": ideal_to_json(g, &r.ideal),
                    "presentation": r.presentation.to_json(&m),
                    "flags": flags,
                    "isolated_vertices": r.isolated,
                    "cuntz_relation": cuntz,
                }),
                json!({ "trivial_centre": r.hypothesis_holds(), "opposite_components": r.ideal.components() }),
            ))
        }
        Command::Minimal => {
            let r = minimal_ideal_report(g);
            Ok(Report::ok(json!({
                "ideal": ideal_to_json(g, &r.ideal),
                "relation": g.mask_names(r.relation),
                "note": r.note,
                "coincides_with_boundary_ideal": r.coincides_with_boundary_ideal,
            })))
        }
        Command::Euler => {
            let chi = g.clique_euler();
            let n = g.vertex_count();
            let note = if g.edge_count() == 0 && n >= 2 {
                Value::String(format!(
                    "boundary quotient is the Cuntz algebra O_{n}; the unit class has order {} in K_0",
                    n - 1
                ))
            } else {
                Value::Null
            };
            Ok(Report::ok(json!({
                "clique_counts": g.clique_counts(),
                "euler_characteristic": chi,
                "unit_order": (chi - 1).abs(),
                "note": note,
            })))
        }
        Command::Verify { depth } => {
            let r = verify_all(g, *depth);
            let suites: Vec<Value> = r
                .results
                .iter()
                .map(|s| json!({ "name": s.name, "checks": s.checks, "passed": s.passed(), "counterexample": s.counterexample, "note": s.note }))
                .collect();
            let mut report = Report::ok(json!({ "depth": r.depth, "passed": r.passed(), "suites": suites }));
            report.violation = r.first_counterexample().map(|(name, c)| format!("{name}: {c}"));
            Ok(report)
        }
        Command::Components => {
            let dec = g.opp_components();
            let comps: Vec<Value> = dec
                .components
                .iter()
                .enumerate()
                .map(|(i, &mask)| {
                    json!({ "label": component_label(g, &dec, i), "vertices": g.mask_names(mask), "central": mask & dec.isolated != 0 })
                })
                .collect();
            Ok(Report::ok(json!({
                "count": dec.len(),
                "components": comps,
                "graph_irreducible": m.is_graph_irreducible(),
                "centre": g.mask_names(dec.isolated),
            })))
        }
        Command::Core => {
            let core = m.core();
            Ok(Report::ok(json!({
                "core": g.mask_names(core),
                "core_rank": g.centre_rank(),
                "atoms": words(&m, &m.atoms()),
                "graph_irreducible": m.is_graph_irreducible(),
                "trivial_centre": g.is_centre_trivial(),
                "boundary_action_topologically_free": g.is_centre_trivial(),
            })))
        }
    }
}

/// Strings that would read back as another JSON value are quoted.
fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => {
            let plain = !s.is_empty()
                && s.trim() == s
                && !s.contains('\n')
                && serde_json::from_str::<Value>(s).is_err();
            if plain {
                s.clone()
            } else {
                serde_json::to_string(s).expect("string")
            }
        }
        other => serde_json::to_string(other).expect("scalar"),
    }
}

fn flatten_into(path: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) if !map.is_empty() => {
            for (k, child) in map {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                flatten_into(&p, child, out);
            }
        }
        Value::Array(items) if !items.is_empty() => {
            for (i, child) in items.iter().enumerate() {
                flatten_into(&format!("{path}[{i}]"), child, out);
            }
        }
        Value::Object(_) => out.push_str(&format!("{path}: {{}}\n")),
        Value::Array(_) => out.push_str(&format!("{path}: []\n")),
        scalar => out.push_str(&format!("{path}: {}\n", scalar_text(scalar))),
    }
}

/// One `path: value` line per leaf, in key order.
pub fn flatten(doc: &Value) -> String {
    let mut out = String::new();
    flatten_into("", doc, &mut out);
    out
}

enum Step {
    Key(String),
    Index(usize),
}

fn parse_path(path: &str) -> Option<Vec<Step>> {
    let mut steps = Vec::new();
    for part in path.split('.') {
        let (key, mut rest) = match part.find('[') {
            Some(i) => (&part[..i], &part[i..]),
            None => (part, ""),
        };
        if !key.is_empty() {
            steps.push(Step::Key(key.to_string()));
        }
        while let Some(r) = rest.strip_prefix('[') {
            let (n, tail) = r.split_once(']')?;
            steps.push(Step::Index(n.parse().ok()?));
            rest = tail;
        }
    }
    Some(steps)
}

fn insert(slot: &mut Value, steps: &[Step], leaf: Value) -> Option<()> {
    let Some((first, rest)) = steps.split_first() else {
        *slot = leaf;
        return Some(());
    };
    match first {
        Step::Key(k) => {
            if slot.is_null() {
                *slot = Value::Object(Map::new());
            }
            let child = slot.as_object_mut()?.entry(k.clone()).or_insert(Value::Null);
            insert(child, rest, leaf)
        }
        Step::Index(i) => {
            if slot.is_null() {
                *slot = Value::Array(Vec::new());
            }
            let arr = slot.as_array_mut()?;
            if *i == arr.len() {
                arr.push(Value::Null);
            }
            insert(arr.get_mut(*i)?, rest, leaf)
        }
    }
}

/// Inverse of [`flatten`].
pub fn unflatten(text: &str) -> Option<Value> {
    let mut doc = Value::Null;
    for line in text.lines() {
        let (path, raw) = line.split_once(": ")?;
        let leaf = match raw {
            "{}" => Value::Object(Map::new()),
            "[]" => Value::Array(Vec::new()),
            _ => serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string())),
        };
        insert(&mut doc, &parse_path(path)?, leaf)?;
    }
    Some(doc)
}
