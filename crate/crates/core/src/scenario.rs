//! Measurement scenarios, contexts and local sections.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// A set of measurements, stored as sorted, distinct measurement indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Context(Vec<usize>);

impl Context {
    /// Builds a context from indices in any order; duplicates collapse.
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        let set: BTreeSet<usize> = indices.into_iter().collect();
        Context(set.into_iter().collect())
    }

    pub fn empty() -> Self {
        Context(Vec::new())
    }

    pub fn measurements(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, measurement: usize) -> bool {
        self.0.binary_search(&measurement).is_ok()
    }

    /// Position of `measurement` inside this context.
    pub fn position(&self, measurement: usize) -> Option<usize> {
        self.0.binary_search(&measurement).ok()
    }

    pub fn is_subset(&self, other: &Context) -> bool {
        self.0.iter().all(|m| other.contains(*m))
    }

    pub fn intersection(&self, other: &Context) -> Context {
        Context(
            self.0
                .iter()
                .copied()
                .filter(|m| other.contains(*m))
                .collect(),
        )
    }

    pub fn union(&self, other: &Context) -> Context {
        Context::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn difference(&self, other: &Context) -> Context {
        Context(
            self.0
                .iter()
                .copied()
                .filter(|m| !other.contains(*m))
                .collect(),
        )
    }
}

/// An assignment of one outcome to each measurement of a context.
///
/// `values[i]` is the outcome index of `context.measurements()[i]`.
/// Sections order by context first, then in canonical enumeration order,
/// where the first measurement of the context varies fastest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalSection {
    context: Context,
    values: Vec<usize>,
}

impl LocalSection {
    /// Pairs a context with aligned outcome indices. Domain membership is
    /// checked by [`MeasurementScenario::check_section`].
    pub fn new(context: Context, values: Vec<usize>) -> Result<Self> {
        if context.len() != values.len() {
            return Err(Error::SectionMismatch(format!(
                "{} values for {} measurements",
                values.len(),
                context.len()
            )));
        }
        Ok(LocalSection { context, values })
    }

    pub fn empty() -> Self {
        LocalSection {
            context: Context::empty(),
            values: Vec::new(),
        }
    }

    pub fn context(&self) -> &Context {
        &self.context
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Outcome assigned to `measurement`, if it is in the domain.
    pub fn value_of(&self, measurement: usize) -> Option<usize> {
        self.context.position(measurement).map(|i| self.values[i])
    }

    /// Pointwise restriction to a sub-context.
    pub fn restrict(&self, sub: &Context) -> Result<LocalSection> {
        if !sub.is_subset(&self.context) {
            return Err(Error::NotSubset(
                format!("{sub:?}"),
                format!("{:?}", self.context),
            ));
        }
        Ok(self.restrict_unchecked(sub))
    }

    pub(crate) fn restrict_unchecked(&self, sub: &Context) -> LocalSection {
        let values = sub
            .measurements()
            .iter()
            .map(|m| self.values[self.context.position(*m).expect("subset")])
            .collect();
        LocalSection {
            context: sub.clone(),
            values,
        }
    }

    /// Whether two sections agree on their common measurements.
    pub fn agrees_with(&self, other: &LocalSection) -> bool {
        self.context
            .measurements()
            .iter()
            .zip(&self.values)
            .all(|(m, v)| other.value_of(*m).is_none_or(|w| w == *v))
    }
}

impl Ord for LocalSection {
    fn cmp(&self, other: &Self) -> Ordering {
        self.context
            .cmp(&other.context)
            .then_with(|| self.values.iter().rev().cmp(other.values.iter().rev()))
    }
}

impl PartialOrd for LocalSection {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Measurements, their outcome domains, and a cover of measurement contexts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementScenario {
    measurements: Vec<String>,
    outcomes: Vec<Vec<String>>,
    cover: Vec<Context>,
    index: HashMap<String, usize>,
}

impl MeasurementScenario {
    /// Validates and builds a scenario. `outcomes[i]` is the domain of
    /// `measurements[i]`; each cover entry lists measurement labels.
    pub fn new(
        measurements: Vec<String>,
        outcomes: Vec<Vec<String>>,
        cover: Vec<Vec<String>>,
    ) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, m) in measurements.iter().enumerate() {
            if index.insert(m.clone(), i).is_some() {
                return Err(Error::DuplicateMeasurement(m.clone()));
            }
        }
        if outcomes.len() != measurements.len() {
            return Err(Error::DimensionMismatch(measurements.len(), outcomes.len()));
        }
        let mut contexts = Vec::with_capacity(cover.len());
        for labels in &cover {
            let mut ids = Vec::with_capacity(labels.len());
            for label in labels {
                let id = *index
                    .get(label)
                    .ok_or_else(|| Error::UnknownMeasurement(label.clone()))?;
                if ids.contains(&id) {
                    return Err(Error::RepeatedInContext(label.clone()));
                }
                ids.push(id);
            }
            contexts.push(Context::new(ids));
        }
        Self::assemble(measurements, outcomes, contexts, index)
    }

    /// Builds a scenario from already-resolved context indices.
    pub fn from_indices(
        measurements: Vec<String>,
        outcomes: Vec<Vec<String>>,
        cover: Vec<Context>,
    ) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, m) in measurements.iter().enumerate() {
            if index.insert(m.clone(), i).is_some() {
                return Err(Error::DuplicateMeasurement(m.clone()));
            }
        }
        if outcomes.len() != measurements.len() {
            return Err(Error::DimensionMismatch(measurements.len(), outcomes.len()));
        }
        for c in &cover {
            if let Some(&bad) = c.measurements().iter().find(|&&m| m >= measurements.len()) {
                return Err(Error::MeasurementIndex(bad));
            }
        }
        Self::assemble(measurements, outcomes, cover, index)
    }

    /// Every measurement gets the same outcome labels.
    pub fn uniform(measurements: &[&str], outcomes: &[&str], cover: &[&[&str]]) -> Result<Self> {
        Self::new(
            measurements.iter().map(|m| m.to_string()).collect(),
            measurements
                .iter()
                .map(|_| outcomes.iter().map(|o| o.to_string()).collect())
                .collect(),
            cover
                .iter()
                .map(|c| c.iter().map(|m| m.to_string()).collect())
                .collect(),
        )
    }

    /// Every measurement has outcomes `{0, 1}`.
    pub fn binary(measurements: &[&str], cover: &[&[&str]]) -> Result<Self> {
        Self::uniform(measurements, &["0", "1"], cover)
    }

    fn assemble(
        measurements: Vec<String>,
        outcomes: Vec<Vec<String>>,
        cover: Vec<Context>,
        index: HashMap<String, usize>,
    ) -> Result<Self> {
        for (m, domain) in measurements.iter().zip(&outcomes) {
            if domain.is_empty() {
                return Err(Error::EmptyOutcomeDomain(m.clone()));
            }
            let mut seen = BTreeSet::new();
            for o in domain {
                if !seen.insert(o) {
                    return Err(Error::DuplicateOutcome {
                        measurement: m.clone(),
                        outcome: o.clone(),
                    });
                }
            }
        }
        if cover.is_empty() {
            return Err(Error::EmptyCover);
        }
        let mut seen = BTreeSet::new();
        for (i, c) in cover.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::EmptyContext(i));
            }
            if !seen.insert(c.clone()) {
                return Err(Error::DuplicateContext(i));
            }
        }
        for (i, m) in measurements.iter().enumerate() {
            if !cover.iter().any(|c| c.contains(i)) {
                return Err(Error::UncoveredMeasurement(m.clone()));
            }
        }
        Ok(MeasurementScenario {
            measurements,
            outcomes,
            cover,
            index,
        })
    }

    pub fn measurements(&self) -> &[String] {
        &self.measurements
    }

    pub fn measurement_count(&self) -> usize {
        self.measurements.len()
    }

    pub fn measurement_name(&self, m: usize) -> &str {
        &self.measurements[m]
    }

    pub fn measurement_index(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownMeasurement(name.to_string()))
    }

    pub fn outcomes(&self, m: usize) -> &[String] {
        &self.outcomes[m]
    }

    pub fn outcome_domains(&self) -> &[Vec<String>] {
        &self.outcomes
    }

    pub fn outcome_index(&self, m: usize, label: &str) -> Result<usize> {
        self.outcomes[m]
            .iter()
            .position(|o| o == label)
            .ok_or_else(|| Error::UnknownOutcome {
                measurement: self.measurements[m].clone(),
                outcome: label.to_string(),
            })
    }

    pub fn cover(&self) -> &[Context] {
        &self.cover
    }

    pub fn context_at(&self, i: usize) -> Result<&Context> {
        self.cover.get(i).ok_or(Error::UnknownContext(i))
    }

    /// Position of a context in the cover.
    pub fn context_position(&self, context: &Context) -> Option<usize> {
        self.cover.iter().position(|c| c == context)
    }

    /// Resolves a list of labels into a context (need not be in the cover).
    pub fn context(&self, labels: &[&str]) -> Result<Context> {
        let ids = labels
            .iter()
            .map(|l| self.measurement_index(l))
            .collect::<Result<Vec<_>>>()?;
        Ok(Context::new(ids))
    }

    /// Number of contexts containing `m`.
    pub fn degree(&self, m: usize) -> usize {
        self.cover.iter().filter(|c| c.contains(m)).count()
    }

    pub fn check_context(&self, context: &Context) -> Result<()> {
        match context
            .measurements()
            .iter()
            .find(|&&m| m >= self.measurements.len())
        {
            Some(&bad) => Err(Error::MeasurementIndex(bad)),
            None => Ok(()),
        }
    }

    pub fn check_section(&self, section: &LocalSection) -> Result<()> {
        self.check_context(section.context())?;
        for (m, v) in section
            .context()
            .measurements()
            .iter()
            .zip(section.values())
        {
            if *v >= self.outcomes[*m].len() {
                return Err(Error::SectionMismatch(format!(
                    "outcome index {v} outside the domain of `{}`",
                    self.measurements[*m]
                )));
            }
        }
        Ok(())
    }

    /// Number of sections over `context`, saturating.
    pub fn section_count(&self, context: &Context) -> u128 {
        context.measurements().iter().fold(1u128, |acc, m| {
            acc.saturating_mul(self.outcomes[*m].len() as u128)
        })
    }

    /// All sections over `context`, first measurement varying fastest.
    pub fn enumerate_sections(&self, context: &Context) -> Result<Vec<LocalSection>> {
        self.check_context(context)?;
        let radices: Vec<usize> = context
            .measurements()
            .iter()
            .map(|m| self.outcomes[*m].len())
            .collect();
        let mut out = Vec::new();
        let mut values = vec![0usize; radices.len()];
        loop {
            out.push(LocalSection {
                context: context.clone(),
                values: values.clone(),
            });
            let mut i = 0;
            loop {
                if i == radices.len() {
                    return Ok(out);
                }
                values[i] += 1;
                if values[i] < radices[i] {
                    break;
                }
                values[i] = 0;
                i += 1;
            }
        }
    }

    /// Builds a section from outcome labels listed in the order of `labels`.
    pub fn section(&self, pairs: &[(&str, &str)]) -> Result<LocalSection> {
        let mut resolved = Vec::with_capacity(pairs.len());
        for (m, o) in pairs {
            let mi = self.measurement_index(m)?;
            resolved.push((mi, self.outcome_index(mi, o)?));
        }
        let context = Context::new(resolved.iter().map(|(m, _)| *m));
        if context.len() != resolved.len() {
            return Err(Error::RepeatedInContext(pairs[0].0.to_string()));
        }
        let mut values = vec![0; context.len()];
        for (m, v) in resolved {
            values[context.position(m).expect("present")] = v;
        }
        LocalSection::new(context, values)
    }

    pub fn context_label(&self, context: &Context) -> String {
        let names: Vec<&str> = context
            .measurements()
            .iter()
            .map(|m| self.measurements[*m].as_str())
            .collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn section_label(&self, section: &LocalSection) -> String {
        let parts: Vec<String> = section
            .context()
            .measurements()
            .iter()
            .zip(section.values())
            .map(|(m, v)| format!("{}={}", self.measurements[*m], self.outcomes[*m][*v]))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// Comma-joined outcome labels of a section, in context order.
    pub fn outcome_key(&self, section: &LocalSection) -> String {
        section
            .context()
            .measurements()
            .iter()
            .zip(section.values())
            .map(|(m, v)| self.outcomes[*m][*v].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for MeasurementScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let contexts: Vec<String> = self.cover.iter().map(|c| self.context_label(c)).collect();
        write!(
            f,
            "{} measurements, cover [{}]",
            self.measurements.len(),
            contexts.join(" ")
        )
    }
}
