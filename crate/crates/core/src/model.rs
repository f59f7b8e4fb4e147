//! Semiring-valued distributions over local sections and empirical models.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scenario::{Context, LocalSection, MeasurementScenario};
use crate::semiring::{Rational, Semiring, SemiringKind};

/// A normalised, finite-support distribution over the sections of one context.
///
/// Only nonzero weights are stored, so the key set is the support.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<S: Semiring> {
    context: Context,
    weights: BTreeMap<LocalSection, S>,
}

impl<S: Semiring> Distribution<S> {
    /// Validates sections, weights and normalisation. Repeated sections
    /// accumulate with the semiring sum.
    pub fn new(
        scenario: &MeasurementScenario,
        context: Context,
        weights: impl IntoIterator<Item = (LocalSection, S)>,
    ) -> Result<Self> {
        scenario.check_context(&context)?;
        let mut map: BTreeMap<LocalSection, S> = BTreeMap::new();
        for (section, weight) in weights {
            if section.context() != &context {
                return Err(Error::SectionMismatch(scenario.context_label(&context)));
            }
            scenario.check_section(&section)?;
            if !weight.admissible() {
                return Err(Error::NegativeWeight {
                    context: scenario.context_label(&context),
                    weight: weight.render(),
                });
            }
            let slot = map.entry(section).or_insert_with(S::zero);
            *slot = slot.add(&weight);
        }
        map.retain(|_, w| !w.is_zero());
        let dist = Distribution {
            context,
            weights: map,
        };
        let total = dist.total();
        if total != S::one() {
            return Err(Error::NotNormalised {
                context: scenario.context_label(&dist.context),
                total: total.render(),
            });
        }
        Ok(dist)
    }

    /// Weights listed in canonical section order (see
    /// [`MeasurementScenario::enumerate_sections`]).
    pub fn from_row(scenario: &MeasurementScenario, context: Context, row: Vec<S>) -> Result<Self> {
        let sections = scenario.enumerate_sections(&context)?;
        if sections.len() != row.len() {
            return Err(Error::DimensionMismatch(sections.len(), row.len()));
        }
        Self::new(scenario, context, sections.into_iter().zip(row))
    }

    pub(crate) fn from_parts_unchecked(
        context: Context,
        weights: BTreeMap<LocalSection, S>,
    ) -> Self {
        Distribution { context, weights }
    }

    pub fn context(&self) -> &Context {
        &self.context
    }

    pub fn weight(&self, section: &LocalSection) -> S {
        self.weights.get(section).cloned().unwrap_or_else(S::zero)
    }

    /// Sections with nonzero weight, in canonical order.
    pub fn support(&self) -> impl Iterator<Item = &LocalSection> {
        self.weights.keys()
    }

    pub fn weights(&self) -> &BTreeMap<LocalSection, S> {
        &self.weights
    }

    pub fn contains(&self, section: &LocalSection) -> bool {
        self.weights.contains_key(section)
    }

    pub fn total(&self) -> S {
        self.weights.values().fold(S::zero(), |acc, w| acc.add(w))
    }

    /// Sums weights over all extensions of each sub-section. For booleans
    /// this is set projection.
    pub fn marginalise(&self, sub: &Context) -> Result<Distribution<S>> {
        if !sub.is_subset(&self.context) {
            return Err(Error::NotSubset(
                format!("{sub:?}"),
                format!("{:?}", self.context),
            ));
        }
        let mut out: BTreeMap<LocalSection, S> = BTreeMap::new();
        for (section, w) in &self.weights {
            let slot = out
                .entry(section.restrict_unchecked(sub))
                .or_insert_with(S::zero);
            *slot = slot.add(w);
        }
        out.retain(|_, w| !w.is_zero());
        Ok(Distribution {
            context: sub.clone(),
            weights: out,
        })
    }
}

/// One distribution per context of a shared scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalModel<S: Semiring> {
    scenario: MeasurementScenario,
    tables: Vec<Distribution<S>>,
}

/// Outcome of the no-signalling check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Compatibility {
    Compatible,
    /// First pair of cover indices (in order) whose marginals on the shared
    /// measurements differ, with the first section where they differ.
    Incompatible {
        first: usize,
        second: usize,
        section: LocalSection,
    },
}

impl Compatibility {
    pub fn is_compatible(&self) -> bool {
        matches!(self, Compatibility::Compatible)
    }
}

impl<S: Semiring> EmpiricalModel<S> {
    pub fn new(scenario: MeasurementScenario, tables: Vec<Distribution<S>>) -> Result<Self> {
        if tables.len() != scenario.cover().len() {
            return Err(Error::TableCount {
                expected: scenario.cover().len(),
                found: tables.len(),
            });
        }
        for (i, (t, c)) in tables.iter().zip(scenario.cover()).enumerate() {
            if t.context() != c {
                return Err(Error::TableContext(i));
            }
        }
        Ok(EmpiricalModel { scenario, tables })
    }

    /// One row per context, weights in canonical section order.
    pub fn from_rows(scenario: MeasurementScenario, rows: Vec<Vec<S>>) -> Result<Self> {
        if rows.len() != scenario.cover().len() {
            return Err(Error::TableCount {
                expected: scenario.cover().len(),
                found: rows.len(),
            });
        }
        let tables = scenario
            .cover()
            .iter()
            .zip(rows)
            .map(|(c, row)| Distribution::from_row(&scenario, c.clone(), row))
            .collect::<Result<Vec<_>>>()?;
        Ok(EmpiricalModel { scenario, tables })
    }

    pub fn scenario(&self) -> &MeasurementScenario {
        &self.scenario
    }

    pub fn tables(&self) -> &[Distribution<S>] {
        &self.tables
    }

    pub fn table(&self, i: usize) -> Result<&Distribution<S>> {
        self.tables.get(i).ok_or(Error::UnknownContext(i))
    }

    pub fn kind(&self) -> SemiringKind {
        S::KIND
    }

    /// No-signalling check over every pair of contexts in cover order.
    pub fn is_compatible(&self) -> Compatibility {
        for i in 0..self.tables.len() {
            for j in i + 1..self.tables.len() {
                let shared = self.tables[i]
                    .context()
                    .intersection(self.tables[j].context());
                let left = self.tables[i].marginalise(&shared).expect("subset");
                let right = self.tables[j].marginalise(&shared).expect("subset");
                if left != right {
                    let section = left
                        .weights
                        .keys()
                        .chain(right.weights.keys())
                        .filter(|s| left.weight(s) != right.weight(s))
                        .min()
                        .cloned()
                        .expect("differing marginals differ somewhere");
                    return Compatibility::Incompatible {
                        first: i,
                        second: j,
                        section,
                    };
                }
            }
        }
        Compatibility::Compatible
    }

    pub(crate) fn incompatibility_error(&self) -> Option<Error> {
        match self.is_compatible() {
            Compatibility::Compatible => None,
            Compatibility::Incompatible {
                first,
                second,
                section,
            } => Some(Error::IncompatibleModel {
                first,
                second,
                section: self.scenario.section_label(&section),
            }),
        }
    }

    /// Boolean model whose tables are the supports of this one.
    pub fn support(&self) -> EmpiricalModel<bool> {
        let tables = self
            .tables
            .iter()
            .map(|t| {
                Distribution::from_parts_unchecked(
                    t.context().clone(),
                    t.support().map(|s| (s.clone(), true)).collect(),
                )
            })
            .collect();
        EmpiricalModel {
            scenario: self.scenario.clone(),
            tables,
        }
    }
}

/// A model of either kind, as loaded from a file.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyModel {
    Probability(EmpiricalModel<Rational>),
    Possibility(EmpiricalModel<bool>),
}

impl AnyModel {
    pub fn scenario(&self) -> &MeasurementScenario {
        match self {
            AnyModel::Probability(m) => m.scenario(),
            AnyModel::Possibility(m) => m.scenario(),
        }
    }

    pub fn kind(&self) -> SemiringKind {
        match self {
            AnyModel::Probability(_) => SemiringKind::Probability,
            AnyModel::Possibility(_) => SemiringKind::Possibility,
        }
    }

    pub fn is_compatible(&self) -> Compatibility {
        match self {
            AnyModel::Probability(m) => m.is_compatible(),
            AnyModel::Possibility(m) => m.is_compatible(),
        }
    }

    /// The model itself if boolean, otherwise its support.
    pub fn possibilistic(&self) -> EmpiricalModel<bool> {
        match self {
            AnyModel::Probability(m) => m.support(),
            AnyModel::Possibility(m) => m.clone(),
        }
    }
}

impl From<EmpiricalModel<Rational>> for AnyModel {
    fn from(m: EmpiricalModel<Rational>) -> Self {
        AnyModel::Probability(m)
    }
}

impl From<EmpiricalModel<bool>> for AnyModel {
    fn from(m: EmpiricalModel<bool>) -> Self {
        AnyModel::Possibility(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::semiring::rat;

    #[test]
    fn bell_row_marginal() {
        let model = fixtures::bell_table();
        let s = model.scenario();
        let a1 = s.context(&["a1"]).unwrap();
        let m = model.tables()[0].marginalise(&a1).unwrap();
        assert_eq!(m.weight(&s.section(&[("a1", "0")]).unwrap()), rat(1, 2));
        assert_eq!(m.weight(&s.section(&[("a1", "1")]).unwrap()), rat(1, 2));
    }

    #[test]
    fn boolean_marginal_is_projection() {
        let s = fixtures::bell_scenario();
        let d = Distribution::from_row(&s, s.cover()[0].clone(), vec![true, false, false, true])
            .unwrap();
        let b1 = s.context(&["b1"]).unwrap();
        let m = d.marginalise(&b1).unwrap();
        assert_eq!(m.support().count(), 2);
    }

    #[test]
    fn marginal_to_full_context_is_identity() {
        let model = fixtures::bell_table();
        let t = &model.tables()[1];
        assert_eq!(&t.marginalise(t.context()).unwrap(), t);
    }

    #[test]
    fn marginal_rejects_non_subset() {
        let model = fixtures::bell_table();
        let a2 = model.scenario().context(&["a2"]).unwrap();
        assert!(model.tables()[0].marginalise(&a2).is_err());
    }

    #[test]
    fn rejects_unnormalised_and_negative() {
        let s = fixtures::bell_scenario();
        let c = s.cover()[0].clone();
        let half = || rat(1, 2);
        assert!(matches!(
            Distribution::from_row(&s, c.clone(), vec![half(), half(), half(), rat(0, 1)]),
            Err(Error::NotNormalised { .. })
        ));
        assert!(matches!(
            Distribution::from_row(
                &s,
                c.clone(),
                vec![rat(3, 2), rat(-1, 2), rat(0, 1), rat(0, 1)]
            ),
            Err(Error::NegativeWeight { .. })
        ));
        assert!(matches!(
            Distribution::<bool>::from_row(&s, c, vec![false; 4]),
            Err(Error::NotNormalised { .. })
        ));
    }

    #[test]
    fn bell_table_is_compatible() {
        assert!(fixtures::bell_table().is_compatible().is_compatible());
    }

    #[test]
    fn correlated_replacement_row_is_still_compatible() {
        let s = fixtures::bell_scenario();
        let mut rows = fixtures::bell_rows();
        rows[1] = vec![rat(1, 2), rat(0, 1), rat(0, 1), rat(1, 2)];
        let m = EmpiricalModel::from_rows(s, rows).unwrap();
        assert!(m.is_compatible().is_compatible());
    }

    #[test]
    fn signalling_row_is_detected() {
        let m = fixtures::signalling_bell_table();
        match m.is_compatible() {
            Compatibility::Incompatible {
                first,
                second,
                section,
            } => {
                assert_eq!((first, second), (0, 1));
                assert_eq!(m.scenario().section_label(&section), "{a1=0}");
            }
            Compatibility::Compatible => panic!("expected signalling"),
        }
    }

    #[test]
    fn single_context_model_is_compatible() {
        let s = MeasurementScenario::binary(&["x"], &[&["x"]]).unwrap();
        let m = EmpiricalModel::from_rows(s, vec![vec![rat(1, 3), rat(2, 3)]]).unwrap();
        assert!(m.is_compatible().is_compatible());
    }

    #[test]
    fn support_of_bell_table() {
        let support = fixtures::bell_table().support();
        let s = support.scenario();
        let row0: Vec<bool> = s
            .enumerate_sections(&s.cover()[0])
            .unwrap()
            .iter()
            .map(|t| support.tables()[0].weight(t))
            .collect();
        assert_eq!(row0, [true, false, false, true]);
        for t in &support.tables()[1..] {
            assert_eq!(t.support().count(), 4);
        }
    }

    #[test]
    fn support_of_deterministic_row() {
        let s = MeasurementScenario::binary(&["x"], &[&["x"]]).unwrap();
        let m = EmpiricalModel::from_rows(s, vec![vec![rat(0, 1), rat(1, 1)]]).unwrap();
        assert_eq!(m.support().tables()[0].support().count(), 1);
    }
}
