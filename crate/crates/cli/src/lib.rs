//! The `ctx` command-line front end.
//!
//! [`run`] parses arguments, dispatches to the library and returns the text
//! for stdout and stderr together with the exit code, so the binary is a
//! thin wrapper and tests can drive commands in-process.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use contextuality::io::{self, FileError, ScenarioFile};
use contextuality::{
    bell_assignment, bell_state, bell_violation, classify, divisor_criterion, fixtures, is_acyclic,
    is_ks_contextual, ks::degrees, natural_join, quantum_empirical_model, universal_relation,
    up_up_state, verify_orthonormal_realization, vorobev_extend, AnyModel, Compatibility,
    ContextualityReport, DivisorVerdict, EmpiricalModel, Error, MeasurementScenario,
    RealizationFailure, Semiring, DEFAULT_BOUND,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_ASSERTION: i32 = 3;

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "ctx",
    version,
    about = "Contextuality analysis for empirical models"
)]
struct Cli {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Exit with status 3 when the analysis finds contextuality.
    #[arg(long, global = true)]
    assert_noncontextual: bool,
    /// Largest number of global assignments any search may visit.
    #[arg(long, global = true, env = "CTX_BOUND", default_value_t = DEFAULT_BOUND)]
    bound: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a file is well formed and print its canonical form.
    Validate { file: PathBuf },
    /// Full contextuality report for a model.
    Check {
        model: PathBuf,
        /// Event formulas for a logical Bell certificate.
        #[arg(long)]
        events: Option<PathBuf>,
    },
    /// Logical Bell inequality for a family of event formulas.
    Bell {
        model: PathBuf,
        #[arg(long)]
        events: PathBuf,
    },
    /// Two-qubit predictions.
    #[command(subcommand)]
    Quantum(QuantumCommand),
    /// Kochen-Specker covers.
    #[command(subcommand)]
    Ks(KsCommand),
    /// Relational reading of models and covers.
    #[command(subcommand)]
    Db(DbCommand),
}

#[derive(Subcommand, Debug)]
enum QuantumCommand {
    /// Bell-scenario table for equatorial measurements.
    BellTable(BellTableArgs),
}

#[derive(Args, Debug)]
struct BellTableArgs {
    /// Measurement angles, e.g. `a1=0,a2=60,b1=0,b2=60`.
    #[arg(long)]
    angles: String,
    /// Read the angles as degrees instead of radians.
    #[arg(long)]
    degrees: bool,
    #[arg(long, value_enum, default_value_t = StateChoice::Bell)]
    state: StateChoice,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum StateChoice {
    Bell,
    UpUp,
}

#[derive(Subcommand, Debug)]
enum KsCommand {
    /// Search for a KS assignment on a cover.
    Check { cover: PathBuf },
    /// Apply the divisor criterion.
    Criterion { cover: PathBuf },
    /// Verify a vector labeling realises the cover.
    Realize {
        cover: PathBuf,
        #[arg(long)]
        vectors: PathBuf,
        /// Also look for orthonormal bases missing from the cover.
        #[arg(long)]
        exhaustive: bool,
    },
}

#[derive(Subcommand, Debug)]
enum DbCommand {
    /// Natural join of all relations.
    Join { instance: PathBuf },
    /// The universal relation, if one exists.
    Universal { instance: PathBuf },
    /// GYO reduction of the schema.
    Acyclic {
        file: PathBuf,
        /// Exit with status 3 when the schema is cyclic.
        #[arg(long)]
        assert_acyclic: bool,
    },
    /// Glue a probability model on an acyclic cover into a global distribution.
    Extend { model: PathBuf },
}

enum Failure {
    Parse(String),
    Invalid(String),
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        match e {
            FileError::Parse(m) => Failure::Parse(m),
            FileError::Invalid(e) => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Outcome = Result<(String, bool), Failure>;

struct Ctx {
    json: bool,
    assert_noncontextual: bool,
    bound: u64,
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandOutcome {
                    code: EXIT_PARSE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CommandOutcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let ctx = Ctx {
        json: cli.json,
        assert_noncontextual: cli.assert_noncontextual,
        bound: cli.bound,
    };
    match dispatch(&ctx, cli.command) {
        Ok((stdout, failed)) => CommandOutcome {
            code: if failed { EXIT_ASSERTION } else { EXIT_OK },
            stdout,
            stderr: if failed {
                "assertion failed\n".to_string()
            } else {
                String::new()
            },
        },
        Err(Failure::Parse(m)) => CommandOutcome {
            code: EXIT_PARSE,
            stdout: String::new(),
            stderr: format!("error: {m}\n"),
        },
        Err(Failure::Invalid(m)) => CommandOutcome {
            code: EXIT_INVALID,
            stdout: String::new(),
            stderr: format!("error: {m}\n"),
        },
    }
}

fn dispatch(ctx: &Ctx, command: Command) -> Outcome {
    match command {
        Command::Validate { file } => validate(ctx, &file),
        Command::Check { model, events } => check(ctx, &model, events.as_deref()),
        Command::Bell { model, events } => bell(ctx, &model, &events),
        Command::Quantum(QuantumCommand::BellTable(args)) => quantum_table(ctx, &args),
        Command::Ks(KsCommand::Check { cover }) => ks_check(ctx, &cover),
        Command::Ks(KsCommand::Criterion { cover }) => ks_criterion(ctx, &cover),
        Command::Ks(KsCommand::Realize {
            cover,
            vectors,
            exhaustive,
        }) => ks_realize(ctx, &cover, &vectors, exhaustive),
        Command::Db(DbCommand::Join { instance }) => db_join(ctx, &instance),
        Command::Db(DbCommand::Universal { instance }) => db_universal(ctx, &instance),
        Command::Db(DbCommand::Acyclic {
            file,
            assert_acyclic,
        }) => db_acyclic(ctx, &file, assert_acyclic),
        Command::Db(DbCommand::Extend { model }) => db_extend(ctx, &model),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut text)
            .map_err(|e| Failure::Parse(format!("stdin: {e}")))?;
        return Ok(text);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<(String, Value), Failure> {
    let text = read(path)?;
    let value = serde_json::from_str(&text).map_err(|e| Failure::Parse(e.to_string()))?;
    Ok((text, value))
}

fn emit(value: &Value) -> String {
    io::to_pretty(value) + "\n"
}

fn validate(ctx: &Ctx, path: &Path) -> Outcome {
    let (text, value) = read_json(path)?;
    let (kind, canonical, summary) = if value.get("attributes").is_some() {
        let inst = io::parse_instance(&text)?;
        let summary = format!(
            "{} attributes, {} relations",
            inst.universe().measurement_count(),
            inst.relations().len()
        );
        ("instance", io::instance_to_json(&inst), summary)
    } else if value.get("vectors").is_some() {
        let labeling = io::parse_labeling(&text)?;
        let vectors = labeling_json(&value);
        (
            "labeling",
            vectors,
            format!("vectors in dimension {}", labeling.dim()),
        )
    } else if value.get("model").is_some() {
        let model = io::parse_model(&text)?;
        let s = model.scenario();
        let summary = format!(
            "{} model, {} measurements, {} contexts",
            kind_name(&model),
            s.measurement_count(),
            s.cover().len()
        );
        ("model", io::model_to_json(&model), summary)
    } else if value.get("outcomes").is_some() {
        let ScenarioFile::Scenario(s) = io::parse_scenario_file(&text)? else {
            unreachable!("no model section");
        };
        let summary = format!(
            "{} measurements, {} contexts",
            s.measurement_count(),
            s.cover().len()
        );
        ("scenario", io::scenario_to_json(&s), summary)
    } else if value.get("measurements").is_some() {
        let cover = io::parse_cover(&text)?;
        let summary = format!(
            "{} measurements, {} contexts",
            cover.measurement_count(),
            cover.cover().len()
        );
        ("cover", io::cover_to_json(&cover), summary)
    } else {
        return Err(Failure::Parse("unrecognised file format".into()));
    };
    if ctx.json {
        Ok((emit(&canonical), false))
    } else {
        Ok((format!("valid {kind}: {summary}\n"), false))
    }
}

fn labeling_json(value: &Value) -> Value {
    json!({ "vectors": value["vectors"] })
}

fn kind_name(model: &AnyModel) -> &'static str {
    match model {
        AnyModel::Probability(_) => "probability",
        AnyModel::Possibility(_) => "possibility",
    }
}

fn load_model(path: &Path) -> Result<AnyModel, Failure> {
    Ok(io::parse_model(&read(path)?)?)
}

fn load_cover(path: &Path) -> Result<MeasurementScenario, Failure> {
    let text = read(path)?;
    match io::parse_scenario_file(&text) {
        Ok(file) => Ok(file.scenario().clone()),
        Err(FileError::Parse(_)) => Ok(io::parse_cover(&text)?),
        Err(e) => Err(e.into()),
    }
}

/// Rows are contexts, columns joint outcomes, when every context has the
/// same size and every measurement the same outcome labels.
fn render_table<S: Semiring>(model: &EmpiricalModel<S>) -> String {
    let s = model.scenario();
    let k = s.cover()[0].len();
    let domain = s.outcomes(0);
    let uniform = s.cover().iter().all(|c| c.len() == k)
        && s.outcome_domains().iter().all(|d| d.as_slice() == domain);
    let mut out = String::new();
    if !uniform {
        for (c, table) in s.cover().iter().zip(model.tables()) {
            let _ = writeln!(out, "{}", s.context_label(c));
            for (section, w) in table.weights() {
                let _ = writeln!(out, "  {}  {}", s.section_label(section), w.render());
            }
        }
        return out;
    }
    let sections = s.enumerate_sections(&s.cover()[0]).expect("cover context");
    let columns: Vec<String> = sections
        .iter()
        .map(|sec| {
            let labels: Vec<&str> = sec.values().iter().map(|v| domain[*v].as_str()).collect();
            format!("({})", labels.join(", "))
        })
        .collect();
    let mut rows = Vec::new();
    for (c, table) in s.cover().iter().zip(model.tables()) {
        let names: Vec<String> = c
            .measurements()
            .iter()
            .map(|m| s.measurement_name(*m).to_string())
            .collect();
        let cells: Vec<String> = s
            .enumerate_sections(c)
            .expect("cover context")
            .iter()
            .map(|sec| table.weight(sec).render())
            .collect();
        rows.push((names, cells));
    }
    let name_width = rows
        .iter()
        .flat_map(|(n, _)| n.iter().map(String::len))
        .max()
        .unwrap_or(0);
    let cell_width = rows
        .iter()
        .flat_map(|(_, c)| c.iter().map(String::len))
        .chain(columns.iter().map(String::len))
        .max()
        .unwrap_or(0);
    let lead = (name_width + 2) * k;
    let _ = write!(out, "{:lead$}", "");
    for col in &columns {
        let _ = write!(out, "  {col:>cell_width$}");
    }
    out.push('\n');
    for (names, cells) in rows {
        for n in &names {
            let _ = write!(out, "{n:<name_width$}  ");
        }
        for cell in &cells {
            let _ = write!(out, "  {cell:>cell_width$}");
        }
        out.push('\n');
    }
    out
}

fn render_any(model: &AnyModel) -> String {
    match model {
        AnyModel::Probability(m) => render_table(m),
        AnyModel::Possibility(m) => render_table(m),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn render_report(report: &ContextualityReport, s: &MeasurementScenario) -> String {
    let mut out = String::new();
    match &report.incompatibility {
        Some(Compatibility::Incompatible {
            first,
            second,
            section,
        }) => {
            let _ = writeln!(
                out,
                "compatible: no ({} and {} disagree on {})",
                s.context_label(&s.cover()[*first]),
                s.context_label(&s.cover()[*second]),
                s.section_label(section)
            );
        }
        _ => {
            let _ = writeln!(out, "compatible: yes");
        }
    }
    if let Some(p) = report.probabilistically_contextual {
        let _ = writeln!(out, "probabilistically contextual: {}", yes_no(p));
        if let Some(d) = &report.global_distribution {
            let _ = writeln!(out, "  global distribution:");
            for (g, w) in d.weights() {
                let _ = writeln!(out, "    {}  {}", g.label(s), w.render());
            }
        }
    }
    let _ = writeln!(
        out,
        "logically contextual: {}",
        yes_no(report.logically_contextual)
    );
    if let Some(w) = &report.logical_witness {
        let _ = writeln!(
            out,
            "  witness: {} in context {} extends to no consistent global assignment",
            s.section_label(&w.section),
            s.context_label(&s.cover()[w.context])
        );
    }
    let _ = writeln!(
        out,
        "strongly contextual: {}",
        yes_no(report.strongly_contextual)
    );
    if let Some(exists) = report.signed_measure_exists {
        let _ = writeln!(
            out,
            "signed global measure: {}",
            if exists { "exists" } else { "none" }
        );
    }
    out
}

fn check(ctx: &Ctx, path: &Path, events: Option<&Path>) -> Outcome {
    let model = load_model(path)?;
    let report = classify(&model, ctx.bound)?;
    let s = model.scenario();
    let certificate = match (events, &model) {
        (None, _) => None,
        (Some(e), AnyModel::Probability(m)) => {
            let formulas = io::parse_events(&read(e)?, s)?;
            Some(bell_violation(m, &formulas, ctx.bound)?)
        }
        (Some(_), AnyModel::Possibility(_)) => {
            return Err(Failure::Invalid(
                "Bell certificates need a probability model".into(),
            ))
        }
    };
    let failed = ctx.assert_noncontextual && report.is_contextual();
    if ctx.json {
        let mut value = json!({ "report": io::report_to_json(&report, s) });
        if let Some(c) = &certificate {
            value["bell"] = io::certificate_to_json(c, s);
        }
        return Ok((emit(&value), failed));
    }
    let mut out = render_any(&model);
    out.push('\n');
    out += &render_report(&report, s);
    if let Some(c) = &certificate {
        out.push('\n');
        out += &render_certificate(c, s);
    } else if report.probabilistically_contextual == Some(true) && report.compatible {
        out += "no global distribution reproduces the table; pass --events to evaluate a logical Bell inequality\n";
    }
    let verdict = if report.is_contextual() {
        "contextual"
    } else {
        "noncontextual"
    };
    let _ = writeln!(out, "\nverdict: {verdict}");
    Ok((out, failed))
}

fn render_certificate(c: &contextuality::BellCertificate, s: &MeasurementScenario) -> String {
    let mut out = String::new();
    for (f, p) in c.formulas.iter().zip(&c.probabilities) {
        let _ = writeln!(
            out,
            "p = {:<6} {}  on {}",
            p.render(),
            f.expr().render(s),
            s.context_label(&s.cover()[f.context()])
        );
    }
    let _ = writeln!(
        out,
        "sum = {}, bound = {}, violation = {}",
        c.total.render(),
        c.bound,
        c.violation.render()
    );
    out
}

fn bell(ctx: &Ctx, path: &Path, events: &Path) -> Outcome {
    let model = match load_model(path)? {
        AnyModel::Probability(m) => m,
        AnyModel::Possibility(_) => {
            return Err(Failure::Invalid(
                "Bell certificates need a probability model".into(),
            ))
        }
    };
    let s = model.scenario();
    let formulas = io::parse_events(&read(events)?, s)?;
    let cert = bell_violation(&model, &formulas, ctx.bound)?;
    let failed = ctx.assert_noncontextual && cert.violation > contextuality::rat(0, 1);
    if ctx.json {
        return Ok((emit(&io::certificate_to_json(&cert, s)), failed));
    }
    Ok((render_certificate(&cert, s), failed))
}

fn parse_angles(text: &str, degrees: bool) -> Result<[f64; 4], Failure> {
    let names = ["a1", "a2", "b1", "b2"];
    let mut angles = [None; 4];
    for part in text.split(',') {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| Failure::Parse(format!("expected name=angle, got `{part}`")))?;
        let slot = names
            .iter()
            .position(|n| *n == name.trim())
            .ok_or_else(|| Failure::Parse(format!("unknown measurement `{name}`")))?;
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| Failure::Parse(format!("bad angle `{value}`")))?;
        if angles[slot].replace(v).is_some() {
            return Err(Failure::Parse(format!("angle for `{name}` given twice")));
        }
    }
    let mut out = [0.0; 4];
    for (i, a) in angles.iter().enumerate() {
        let a = a.ok_or_else(|| Failure::Parse(format!("missing angle for `{}`", names[i])))?;
        out[i] = if degrees { a.to_radians() } else { a };
    }
    Ok(out)
}

fn quantum_table(ctx: &Ctx, args: &BellTableArgs) -> Outcome {
    let [a1, a2, b1, b2] = parse_angles(&args.angles, args.degrees)?;
    let assignment = bell_assignment(a1, a2, b1, b2)?;
    let state = match args.state {
        StateChoice::Bell => bell_state(),
        StateChoice::UpUp => up_up_state(),
    };
    let table = quantum_empirical_model(&state, &assignment, &fixtures::bell_scenario())?;
    let model = AnyModel::Probability(table.model);
    let failed = ctx.assert_noncontextual && classify(&model, ctx.bound)?.is_contextual();
    if ctx.json {
        return Ok((emit(&io::model_to_json(&model)), failed));
    }
    Ok((render_any(&model), failed))
}

fn ks_check(ctx: &Ctx, path: &Path) -> Outcome {
    let cover = load_cover(path)?;
    let contextual = is_ks_contextual(&cover, ctx.bound)?;
    let failed = ctx.assert_noncontextual && contextual;
    if ctx.json {
        return Ok((emit(&json!({ "strongly_contextual": contextual })), failed));
    }
    let text = if contextual {
        "strongly contextual: no assignment gives exactly one 1 per context\n".to_string()
    } else {
        "noncontextual: some assignment gives exactly one 1 per context\n".to_string()
    };
    Ok((text, failed))
}

fn ks_criterion(ctx: &Ctx, path: &Path) -> Outcome {
    let cover = load_cover(path)?;
    let verdict = divisor_criterion(&cover);
    let degs = degrees(&cover);
    let contexts = cover.cover().len();
    if ctx.json {
        let divisor = match verdict {
            DivisorVerdict::ContextualByCriterion { divisor } => Some(divisor),
            DivisorVerdict::Inconclusive => None,
        };
        let value = json!({
            "contexts": contexts,
            "degrees": degs,
            "contextual_by_criterion": divisor.is_some(),
            "divisor": divisor,
        });
        return Ok((emit(&value), false));
    }
    let mut out = format!("contexts: {contexts}\ndegrees: {degs:?}\n");
    match verdict {
        DivisorVerdict::ContextualByCriterion { divisor } => {
            let _ = writeln!(
                out,
                "contextual by criterion: {divisor} divides every degree but not {contexts}"
            );
        }
        DivisorVerdict::Inconclusive => out += "inconclusive\n",
    }
    Ok((out, false))
}

fn ks_realize(ctx: &Ctx, cover_path: &Path, vectors: &Path, exhaustive: bool) -> Outcome {
    let cover = load_cover(cover_path)?;
    let labeling = io::parse_labeling(&read(vectors)?)?;
    let failure = verify_orthonormal_realization(&labeling, &cover, exhaustive, ctx.bound)?;
    let label = |c: usize| cover.context_label(&cover.cover()[c]);
    let (realizes, reason, detail) = match &failure {
        None => (
            true,
            Value::Null,
            "the labeling realises the cover".to_string(),
        ),
        Some(RealizationFailure::WrongSize { context }) => (
            false,
            json!({ "wrong_size": context }),
            format!("context {} does not match the dimension", label(*context)),
        ),
        Some(RealizationFailure::NotOrthogonal {
            context,
            first,
            second,
        }) => (
            false,
            json!({ "not_orthogonal": { "context": context, "first": first, "second": second } }),
            format!(
                "{first} and {second} in {} are not orthogonal",
                label(*context)
            ),
        ),
        Some(RealizationFailure::MissingBasis { measurements }) => (
            false,
            json!({ "missing_basis": measurements }),
            format!(
                "orthonormal basis {{{}}} is not a context",
                measurements.join(",")
            ),
        ),
    };
    if ctx.json {
        return Ok((
            emit(&json!({ "realizes": realizes, "failure": reason })),
            false,
        ));
    }
    Ok((detail + "\n", false))
}

enum SchemaSource {
    Instance(contextuality::DatabaseInstance),
    Scenario(MeasurementScenario),
}

fn load_instance(path: &Path) -> Result<contextuality::DatabaseInstance, Failure> {
    Ok(io::parse_instance(&read(path)?)?)
}

fn db_join(ctx: &Ctx, path: &Path) -> Outcome {
    let inst = load_instance(path)?;
    let join = natural_join(&inst);
    if ctx.json {
        return Ok((emit(&io::relation_to_json(&join, inst.universe())), false));
    }
    Ok((render_relation(&join, inst.universe()), false))
}

fn render_relation(r: &contextuality::RelationInstance, u: &MeasurementScenario) -> String {
    let mut out = format!("{} ({} tuples)\n", u.context_label(r.attributes()), r.len());
    for t in r.tuples() {
        let _ = writeln!(out, "  {}", u.section_label(t));
    }
    out
}

fn db_universal(ctx: &Ctx, path: &Path) -> Outcome {
    let inst = load_instance(path)?;
    let universal = universal_relation(&inst);
    let failed = ctx.assert_noncontextual && universal.is_none();
    if ctx.json {
        let value = match &universal {
            Some(r) => json!({ "universal": io::relation_to_json(r, inst.universe()) }),
            None => json!({ "universal": null }),
        };
        return Ok((emit(&value), failed));
    }
    let text = match &universal {
        Some(r) => render_relation(r, inst.universe()),
        None => "no universal relation: the join does not project onto every relation\n".into(),
    };
    Ok((text, failed))
}

fn db_acyclic(ctx: &Ctx, path: &Path, assert_acyclic: bool) -> Outcome {
    let (text, value) = read_json(path)?;
    let source = if value.get("attributes").is_some() {
        SchemaSource::Instance(io::parse_instance(&text)?)
    } else {
        SchemaSource::Scenario(load_cover(path)?)
    };
    let schema = match &source {
        SchemaSource::Instance(i) => i.universe(),
        SchemaSource::Scenario(s) => s,
    };
    let reduction = is_acyclic(schema.cover());
    let failed = assert_acyclic && !reduction.acyclic;
    if ctx.json {
        return Ok((emit(&io::gyo_to_json(&reduction, schema)), failed));
    }
    let mut out = String::new();
    for step in &reduction.trace {
        match step {
            contextuality::GyoStep::RemoveAttribute { attribute, element } => {
                let _ = writeln!(
                    out,
                    "remove attribute {} from element {element}",
                    schema.measurement_name(*attribute)
                );
            }
            contextuality::GyoStep::RemoveElement {
                element,
                contained_in: Some(c),
            } => {
                let _ = writeln!(out, "remove element {element} (contained in {c})");
            }
            contextuality::GyoStep::RemoveElement {
                element,
                contained_in: None,
            } => {
                let _ = writeln!(out, "remove element {element}");
            }
        }
    }
    out += if reduction.acyclic {
        "acyclic\n"
    } else {
        "cyclic\n"
    };
    Ok((out, failed))
}

fn db_extend(ctx: &Ctx, path: &Path) -> Outcome {
    let model = io::parse_probability_model(&read(path)?)?;
    let global = vorobev_extend(&model)?;
    let s = model.scenario();
    if ctx.json {
        return Ok((
            emit(&json!({ "global_distribution": io::global_distribution_to_json(&global, s) })),
            false,
        ));
    }
    let mut out = String::new();
    for (g, w) in global.weights() {
        let _ = writeln!(out, "{}  {}", g.label(s), w.render());
    }
    Ok((out, false))
}
