//! JSON file formats: scenario/model files, cover files, vector labelings,
//! event files, database instances, and report payloads.
//!
//! Emitted JSON is canonical: object keys sorted, contexts and tuples in
//! measurement order, rationals in lowest terms, zero rows omitted.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::contextuality::{ContextualityReport, Witness};
use crate::error::Error;
use crate::global::GlobalDistribution;
use crate::ks::RealVectorLabeling;
use crate::logic::{BellCertificate, EventFormula};
use crate::model::{AnyModel, Compatibility, Distribution, EmpiricalModel};
use crate::relational::{DatabaseInstance, GyoReduction, GyoStep, RelationInstance};
use crate::scenario::{Context, LocalSection, MeasurementScenario};
use crate::semiring::{format_rational, parse_rational, Rational, Semiring, SemiringKind};

/// Malformed input (exit code 1) versus well-formed input that breaks an
/// invariant (exit code 2).
#[derive(Debug, Error)]
pub enum FileError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(#[from] Error),
}

impl From<serde_json::Error> for FileError {
    fn from(e: serde_json::Error) -> Self {
        FileError::Parse(e.to_string())
    }
}

type FileResult<T> = Result<T, FileError>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioRaw {
    measurements: Vec<String>,
    #[serde(default)]
    outcomes: Option<BTreeMap<String, Vec<String>>>,
    contexts: Vec<Vec<String>>,
    #[serde(default)]
    model: Option<ModelRaw>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelRaw {
    kind: SemiringKind,
    tables: Vec<TableRaw>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableRaw {
    context: usize,
    #[serde(default)]
    rows: BTreeMap<String, Value>,
}

/// Contents of a scenario/model file.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioFile {
    Scenario(MeasurementScenario),
    Model(AnyModel),
}

impl ScenarioFile {
    pub fn scenario(&self) -> &MeasurementScenario {
        match self {
            ScenarioFile::Scenario(s) => s,
            ScenarioFile::Model(m) => m.scenario(),
        }
    }
}

fn build_scenario(raw: &ScenarioRaw) -> FileResult<MeasurementScenario> {
    let outcomes = match &raw.outcomes {
        None => vec![vec!["0".to_string(), "1".to_string()]; raw.measurements.len()],
        Some(map) => {
            if let Some(extra) = map.keys().find(|k| !raw.measurements.contains(k)) {
                return Err(Error::UnknownMeasurement(extra.clone()).into());
            }
            raw.measurements
                .iter()
                .map(|m| {
                    map.get(m)
                        .cloned()
                        .ok_or_else(|| FileError::Parse(format!("no outcomes listed for `{m}`")))
                })
                .collect::<FileResult<Vec<_>>>()?
        }
    };
    Ok(MeasurementScenario::new(
        raw.measurements.clone(),
        outcomes,
        raw.contexts.clone(),
    )?)
}

/// Parses a scenario file, with or without a `model` section.
pub fn parse_scenario_file(text: &str) -> FileResult<ScenarioFile> {
    let raw: ScenarioRaw = serde_json::from_str(text)?;
    let scenario = build_scenario(&raw)?;
    let Some(model) = &raw.model else {
        return Ok(ScenarioFile::Scenario(scenario));
    };
    Ok(ScenarioFile::Model(match model.kind {
        SemiringKind::Probability => AnyModel::Probability(build_model(
            &scenario,
            &raw.contexts,
            model,
            parse_probability,
        )?),
        SemiringKind::Possibility => AnyModel::Possibility(build_model(
            &scenario,
            &raw.contexts,
            model,
            parse_possibility,
        )?),
    }))
}

/// Parses a file that must contain a model.
pub fn parse_model(text: &str) -> FileResult<AnyModel> {
    match parse_scenario_file(text)? {
        ScenarioFile::Model(m) => Ok(m),
        ScenarioFile::Scenario(_) => Err(FileError::Parse("file has no `model` section".into())),
    }
}

/// Parses a file that must contain a probability model.
pub fn parse_probability_model(text: &str) -> FileResult<EmpiricalModel<Rational>> {
    match parse_model(text)? {
        AnyModel::Probability(m) => Ok(m),
        AnyModel::Possibility(_) => Err(FileError::Parse("expected a probability model".into())),
    }
}

fn parse_probability(v: &Value) -> FileResult<Rational> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| FileError::Parse(e.to_string())),
        other => Err(FileError::Parse(format!(
            "probabilities must be strings like \"3/8\", got {other}"
        ))),
    }
}

fn parse_possibility(v: &Value) -> FileResult<bool> {
    match v {
        Value::Bool(b) => Ok(*b),
        Value::Number(n) if n.as_u64() == Some(0) => Ok(false),
        Value::Number(n) if n.as_u64() == Some(1) => Ok(true),
        Value::String(s) if s == "0" => Ok(false),
        Value::String(s) if s == "1" => Ok(true),
        other => Err(FileError::Parse(format!(
            "possibility entries are 0 or 1, got {other}"
        ))),
    }
}

fn build_model<S: Semiring>(
    scenario: &MeasurementScenario,
    listed: &[Vec<String>],
    raw: &ModelRaw,
    parse: fn(&Value) -> FileResult<S>,
) -> FileResult<EmpiricalModel<S>> {
    let mut by_context: BTreeMap<usize, &TableRaw> = BTreeMap::new();
    for t in &raw.tables {
        if t.context >= scenario.cover().len() {
            return Err(Error::UnknownContext(t.context).into());
        }
        if by_context.insert(t.context, t).is_some() {
            return Err(FileError::Parse(format!(
                "context {} has two tables",
                t.context
            )));
        }
    }
    if by_context.len() != scenario.cover().len() {
        return Err(Error::TableCount {
            expected: scenario.cover().len(),
            found: by_context.len(),
        }
        .into());
    }
    let mut tables = Vec::new();
    for (i, table) in by_context {
        let order = &listed[i];
        let mut weights = Vec::new();
        for (key, value) in &table.rows {
            let labels: Vec<&str> = key.split(',').map(str::trim).collect();
            if labels.len() != order.len() {
                return Err(FileError::Parse(format!(
                    "row key `{key}` does not match context {i}"
                )));
            }
            let pairs: Vec<(&str, &str)> = order.iter().map(String::as_str).zip(labels).collect();
            weights.push((scenario.section(&pairs)?, parse(value)?));
        }
        tables.push(Distribution::new(
            scenario,
            scenario.cover()[i].clone(),
            weights,
        )?);
    }
    Ok(EmpiricalModel::new(scenario.clone(), tables)?)
}

fn context_names(scenario: &MeasurementScenario, c: &Context) -> Value {
    Value::Array(
        c.measurements()
            .iter()
            .map(|m| Value::String(scenario.measurement_name(*m).to_string()))
            .collect(),
    )
}

fn section_map(scenario: &MeasurementScenario, s: &LocalSection) -> Value {
    let mut map = Map::new();
    for (m, v) in s.context().measurements().iter().zip(s.values()) {
        map.insert(
            scenario.measurement_name(*m).to_string(),
            Value::String(scenario.outcomes(*m)[*v].clone()),
        );
    }
    Value::Object(map)
}

/// Canonical JSON for a scenario, without a model section.
pub fn scenario_to_json(scenario: &MeasurementScenario) -> Value {
    let outcomes: Map<String, Value> = scenario
        .measurements()
        .iter()
        .zip(scenario.outcome_domains())
        .map(|(m, d)| (m.clone(), json!(d)))
        .collect();
    json!({
        "measurements": scenario.measurements(),
        "outcomes": outcomes,
        "contexts": scenario.cover().iter().map(|c| context_names(scenario, c)).collect::<Vec<_>>(),
    })
}

fn tables_to_json<S: Semiring>(model: &EmpiricalModel<S>) -> Vec<Value> {
    let scenario = model.scenario();
    model
        .tables()
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let rows: Map<String, Value> = t
                .weights()
                .iter()
                .map(|(s, w)| (scenario.outcome_key(s), Value::String(w.render())))
                .collect();
            json!({ "context": i, "rows": rows })
        })
        .collect()
}

/// Canonical JSON for a model file.
pub fn model_to_json(model: &AnyModel) -> Value {
    let mut value = scenario_to_json(model.scenario());
    let (kind, tables) = match model {
        AnyModel::Probability(m) => ("probability", tables_to_json(m)),
        AnyModel::Possibility(m) => ("possibility", tables_to_json(m)),
    };
    value["model"] = json!({ "kind": kind, "tables": tables });
    value
}

pub fn to_pretty(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("json values serialise")
}

/// Cover file: measurements and contexts; outcomes are `{0, 1}`.
pub fn parse_cover(text: &str) -> FileResult<MeasurementScenario> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct CoverRaw {
        measurements: Vec<String>,
        contexts: Vec<Vec<String>>,
    }
    let raw: CoverRaw = serde_json::from_str(text)?;
    Ok(MeasurementScenario::new(
        raw.measurements.clone(),
        vec![vec!["0".into(), "1".into()]; raw.measurements.len()],
        raw.contexts,
    )?)
}

pub fn cover_to_json(cover: &MeasurementScenario) -> Value {
    json!({
        "measurements": cover.measurements(),
        "contexts": cover.cover().iter().map(|c| context_names(cover, c)).collect::<Vec<_>>(),
    })
}

/// `{"vectors": {m: [reals...]}}`.
pub fn parse_labeling(text: &str) -> FileResult<RealVectorLabeling> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct LabelingRaw {
        vectors: BTreeMap<String, Vec<f64>>,
    }
    let raw: LabelingRaw = serde_json::from_str(text)?;
    Ok(RealVectorLabeling::new(raw.vectors)?)
}

/// `[{"context": i, "formula": "(...)"}, ...]`.
pub fn parse_events(text: &str, scenario: &MeasurementScenario) -> FileResult<Vec<EventFormula>> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct EventRaw {
        context: usize,
        formula: String,
    }
    let raw: Vec<EventRaw> = serde_json::from_str(text)?;
    raw.into_iter()
        .map(|e| {
            EventFormula::parse(scenario, e.context, &e.formula).map_err(|err| match err {
                Error::FormulaParse(msg) => FileError::Parse(msg),
                other => FileError::Invalid(other),
            })
        })
        .collect()
}

pub fn events_to_json(formulas: &[EventFormula], scenario: &MeasurementScenario) -> Value {
    Value::Array(
        formulas
            .iter()
            .map(|f| json!({ "context": f.context(), "formula": f.expr().render(scenario) }))
            .collect(),
    )
}

/// Database instance; attributes are ordered by name.
pub fn parse_instance(text: &str) -> FileResult<DatabaseInstance> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct RelationRaw {
        schema: usize,
        #[serde(default)]
        tuples: Vec<Vec<String>>,
    }
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct InstanceRaw {
        attributes: BTreeMap<String, Vec<String>>,
        schema: Vec<Vec<String>>,
        relations: Vec<RelationRaw>,
    }
    let raw: InstanceRaw = serde_json::from_str(text)?;
    let (names, domains): (Vec<String>, Vec<Vec<String>>) = raw.attributes.into_iter().unzip();
    let universe = MeasurementScenario::new(names, domains, raw.schema.clone())?;
    let mut by_element: BTreeMap<usize, RelationRaw> = BTreeMap::new();
    for r in raw.relations {
        if r.schema >= raw.schema.len() {
            return Err(Error::UnknownContext(r.schema).into());
        }
        let index = r.schema;
        if by_element.insert(index, r).is_some() {
            return Err(FileError::Parse(format!(
                "schema element {index} has two relations"
            )));
        }
    }
    if by_element.len() != raw.schema.len() {
        return Err(Error::TableCount {
            expected: raw.schema.len(),
            found: by_element.len(),
        }
        .into());
    }
    let mut relations = Vec::new();
    for (i, r) in by_element {
        let order = &raw.schema[i];
        let mut tuples = Vec::new();
        for t in &r.tuples {
            if t.len() != order.len() {
                return Err(FileError::Parse(format!(
                    "tuple of length {} in relation {i} of arity {}",
                    t.len(),
                    order.len()
                )));
            }
            let pairs: Vec<(&str, &str)> = order
                .iter()
                .map(String::as_str)
                .zip(t.iter().map(String::as_str))
                .collect();
            tuples.push(universe.section(&pairs)?);
        }
        relations.push(RelationInstance::new(universe.cover()[i].clone(), tuples)?);
    }
    Ok(DatabaseInstance::new(universe, relations)?)
}

fn relation_tuples(relation: &RelationInstance, universe: &MeasurementScenario) -> Value {
    Value::Array(
        relation
            .tuples()
            .iter()
            .map(|t| {
                Value::Array(
                    t.context()
                        .measurements()
                        .iter()
                        .zip(t.values())
                        .map(|(m, v)| Value::String(universe.outcomes(*m)[*v].clone()))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn instance_to_json(instance: &DatabaseInstance) -> Value {
    let u = instance.universe();
    let attributes: Map<String, Value> = u
        .measurements()
        .iter()
        .zip(u.outcome_domains())
        .map(|(m, d)| (m.clone(), json!(d)))
        .collect();
    json!({
        "attributes": attributes,
        "schema": u.cover().iter().map(|c| context_names(u, c)).collect::<Vec<_>>(),
        "relations": instance.relations().iter().enumerate().map(|(i, r)| {
            json!({ "schema": i, "tuples": relation_tuples(r, u) })
        }).collect::<Vec<_>>(),
    })
}

/// A relation as `{"attributes": [...], "tuples": [[...]]}`.
pub fn relation_to_json(relation: &RelationInstance, universe: &MeasurementScenario) -> Value {
    json!({
        "attributes": context_names(universe, relation.attributes()),
        "tuples": relation_tuples(relation, universe),
    })
}

pub fn gyo_to_json(reduction: &GyoReduction, schema: &MeasurementScenario) -> Value {
    let steps: Vec<Value> = reduction
        .trace
        .iter()
        .map(|step| match step {
            GyoStep::RemoveAttribute { attribute, element } => json!({
                "remove_attribute": schema.measurement_name(*attribute),
                "element": element,
            }),
            GyoStep::RemoveElement {
                element,
                contained_in,
            } => json!({ "remove_element": element, "contained_in": contained_in }),
        })
        .collect();
    json!({ "acyclic": reduction.acyclic, "trace": steps })
}

/// `[{"assignment": {m: o}, "weight": "p/q"}, ...]` in canonical order.
pub fn global_distribution_to_json(
    dist: &GlobalDistribution,
    scenario: &MeasurementScenario,
) -> Value {
    let full = Context::new(0..scenario.measurement_count());
    Value::Array(
        dist.weights()
            .iter()
            .map(|(g, w)| {
                json!({
                    "assignment": section_map(scenario, &g.restrict(&full)),
                    "weight": format_rational(w),
                })
            })
            .collect(),
    )
}

fn witness_to_json(w: &Witness, scenario: &MeasurementScenario) -> Value {
    json!({
        "context": w.context,
        "section": section_map(scenario, &w.section),
    })
}

pub fn report_to_json(report: &ContextualityReport, scenario: &MeasurementScenario) -> Value {
    let incompatibility = match &report.incompatibility {
        Some(Compatibility::Incompatible {
            first,
            second,
            section,
        }) => json!({
            "contexts": [first, second],
            "section": section_map(scenario, section),
        }),
        _ => Value::Null,
    };
    json!({
        "kind": report.kind,
        "compatible": report.compatible,
        "incompatibility": incompatibility,
        "probabilistically_contextual": report.probabilistically_contextual,
        "global_distribution": report.global_distribution.as_ref().map(|d| global_distribution_to_json(d, scenario)),
        "logically_contextual": report.logically_contextual,
        "logical_witness": report.logical_witness.as_ref().map(|w| witness_to_json(w, scenario)),
        "strongly_contextual": report.strongly_contextual,
        "signed_measure_exists": report.signed_measure_exists,
        "signed_measure": report.signed_measure.as_ref().map(|d| global_distribution_to_json(d, scenario)),
    })
}

pub fn certificate_to_json(cert: &BellCertificate, scenario: &MeasurementScenario) -> Value {
    json!({
        "formulas": events_to_json(&cert.formulas, scenario),
        "probabilities": cert.probabilities.iter().map(format_rational).collect::<Vec<_>>(),
        "total": format_rational(&cert.total),
        "bound": cert.bound,
        "violation": format_rational(&cert.violation),
    })
}
