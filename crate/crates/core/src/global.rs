//! Global assignments (instruction sets), distributions over them, and the
//! backtracking search for assignments consistent with a possibility model.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::ops::ControlFlow;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{Distribution, EmpiricalModel};
use crate::scenario::{Context, LocalSection, MeasurementScenario};
use crate::semiring::{format_rational, Rational};

/// Default cap on the number of global assignments an operation may touch.
pub const DEFAULT_BOUND: u64 = 1 << 20;

/// An outcome for every measurement; `values[m]` is the outcome index of
/// measurement `m`. Ordered like sections: the first measurement varies
/// fastest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GlobalAssignment {
    values: Vec<usize>,
}

impl GlobalAssignment {
    pub fn new(scenario: &MeasurementScenario, values: Vec<usize>) -> Result<Self> {
        if values.len() != scenario.measurement_count() {
            return Err(Error::DimensionMismatch(
                scenario.measurement_count(),
                values.len(),
            ));
        }
        for (m, v) in values.iter().enumerate() {
            if *v >= scenario.outcomes(m).len() {
                return Err(Error::SectionMismatch(format!(
                    "outcome index {v} outside the domain of `{}`",
                    scenario.measurement_name(m)
                )));
            }
        }
        Ok(GlobalAssignment { values })
    }

    /// Builds an assignment from `(measurement, outcome)` labels covering
    /// every measurement.
    pub fn from_labels(scenario: &MeasurementScenario, pairs: &[(&str, &str)]) -> Result<Self> {
        let section = scenario.section(pairs)?;
        if section.context().len() != scenario.measurement_count() {
            return Err(Error::DimensionMismatch(
                scenario.measurement_count(),
                section.context().len(),
            ));
        }
        Ok(GlobalAssignment {
            values: section.values().to_vec(),
        })
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn value(&self, measurement: usize) -> usize {
        self.values[measurement]
    }

    /// The local section this assignment induces on `context`.
    pub fn restrict(&self, context: &Context) -> LocalSection {
        let values = context
            .measurements()
            .iter()
            .map(|m| self.values[*m])
            .collect();
        LocalSection::new(context.clone(), values).expect("aligned")
    }

    pub fn extends(&self, section: &LocalSection) -> bool {
        section
            .context()
            .measurements()
            .iter()
            .zip(section.values())
            .all(|(m, v)| self.values[*m] == *v)
    }

    pub fn label(&self, scenario: &MeasurementScenario) -> String {
        let full = Context::new(0..self.values.len());
        scenario.section_label(&self.restrict(&full))
    }
}

impl Ord for GlobalAssignment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.values.iter().rev().cmp(other.values.iter().rev())
    }
}

impl PartialOrd for GlobalAssignment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Size of the global assignment space, saturating.
pub fn global_space_size(scenario: &MeasurementScenario) -> u128 {
    scenario
        .outcome_domains()
        .iter()
        .fold(1u128, |acc, d| acc.saturating_mul(d.len() as u128))
}

pub(crate) fn check_bound(scenario: &MeasurementScenario, bound: u64) -> Result<()> {
    let size = global_space_size(scenario);
    if size > bound as u128 {
        return Err(Error::BoundExceeded {
            size: size.to_string(),
            bound,
        });
    }
    Ok(())
}

/// Every global assignment in canonical order.
pub fn enumerate_global_assignments(
    scenario: &MeasurementScenario,
    bound: u64,
) -> Result<Vec<GlobalAssignment>> {
    check_bound(scenario, bound)?;
    let all = Context::new(0..scenario.measurement_count());
    Ok(scenario
        .enumerate_sections(&all)?
        .into_iter()
        .map(|s| GlobalAssignment {
            values: s.values().to_vec(),
        })
        .collect())
}

/// Backtracking search over the support of a possibility model.
///
/// Variables are taken in descending context degree (ties by measurement
/// index), values in outcome-domain order; after each assignment every
/// context touching the variable must still admit a supported section that
/// agrees with the partial assignment.
pub(crate) struct SupportSearch<'a> {
    scenario: &'a MeasurementScenario,
    supports: Vec<Vec<&'a [usize]>>,
    contexts_of: Vec<Vec<usize>>,
}

impl<'a> SupportSearch<'a> {
    pub(crate) fn new(model: &'a EmpiricalModel<bool>) -> Self {
        let scenario = model.scenario();
        let supports = model
            .tables()
            .iter()
            .map(|t| t.support().map(|s| s.values()).collect())
            .collect();
        let contexts_of = (0..scenario.measurement_count())
            .map(|m| {
                scenario
                    .cover()
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.contains(m))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        SupportSearch {
            scenario,
            supports,
            contexts_of,
        }
    }

    fn context_ok(&self, ctx: usize, partial: &[Option<usize>]) -> bool {
        let context = &self.scenario.cover()[ctx];
        self.supports[ctx].iter().any(|values| {
            context
                .measurements()
                .iter()
                .zip(values.iter())
                .all(|(m, v)| partial[*m].is_none_or(|p| p == *v))
        })
    }

    /// Visits every consistent global assignment extending `fixed`.
    pub(crate) fn run(
        &self,
        fixed: &LocalSection,
        visit: &mut dyn FnMut(GlobalAssignment) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let n = self.scenario.measurement_count();
        let mut partial = vec![None; n];
        for (m, v) in fixed.context().measurements().iter().zip(fixed.values()) {
            partial[*m] = Some(*v);
        }
        let touched: HashSet<usize> = fixed
            .context()
            .measurements()
            .iter()
            .flat_map(|m| self.contexts_of[*m].iter().copied())
            .collect();
        if !touched.iter().all(|c| self.context_ok(*c, &partial)) {
            return ControlFlow::Continue(());
        }
        let mut order: Vec<usize> = (0..n).filter(|m| partial[*m].is_none()).collect();
        order.sort_by(|a, b| {
            self.contexts_of[*b]
                .len()
                .cmp(&self.contexts_of[*a].len())
                .then(a.cmp(b))
        });
        self.descend(&order, 0, &mut partial, visit)
    }

    fn descend(
        &self,
        order: &[usize],
        depth: usize,
        partial: &mut Vec<Option<usize>>,
        visit: &mut dyn FnMut(GlobalAssignment) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if depth == order.len() {
            let values = partial.iter().map(|v| v.expect("complete")).collect();
            return visit(GlobalAssignment { values });
        }
        let var = order[depth];
        for value in 0..self.scenario.outcomes(var).len() {
            partial[var] = Some(value);
            if self.contexts_of[var]
                .iter()
                .all(|c| self.context_ok(*c, partial))
            {
                self.descend(order, depth + 1, partial, visit)?;
            }
        }
        partial[var] = None;
        ControlFlow::Continue(())
    }

    /// First consistent assignment extending `fixed` in search order.
    pub(crate) fn find(&self, fixed: &LocalSection) -> Option<GlobalAssignment> {
        let mut found = None;
        let _ = self.run(fixed, &mut |g| {
            found = Some(g);
            ControlFlow::Break(())
        });
        found
    }
}

/// All global assignments whose restriction to every context is possible,
/// in canonical order. Fails if more than `bound` are found.
pub fn consistent_global_assignments(
    model: &EmpiricalModel<bool>,
    bound: u64,
) -> Result<Vec<GlobalAssignment>> {
    let search = SupportSearch::new(model);
    let mut out = Vec::new();
    let mut overflow = false;
    let _ = search.run(&LocalSection::empty(), &mut |g| {
        if out.len() as u64 >= bound {
            overflow = true;
            return ControlFlow::Break(());
        }
        out.push(g);
        ControlFlow::Continue(())
    });
    if overflow {
        return Err(Error::BoundExceeded {
            size: format!("more than {bound}"),
            bound,
        });
    }
    out.sort();
    Ok(out)
}

/// A (possibly signed) rational distribution over global assignments.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalDistribution {
    weights: BTreeMap<GlobalAssignment, Rational>,
    signed: bool,
}

impl GlobalDistribution {
    /// Zero weights are dropped. Weights must sum to one, and be nonnegative
    /// unless `signed`.
    pub fn new(
        weights: impl IntoIterator<Item = (GlobalAssignment, Rational)>,
        signed: bool,
    ) -> Result<Self> {
        let mut map: BTreeMap<GlobalAssignment, Rational> = BTreeMap::new();
        for (g, w) in weights {
            if !signed && w.is_negative() {
                return Err(Error::NegativeWeight {
                    context: "global assignments".into(),
                    weight: format_rational(&w),
                });
            }
            *map.entry(g).or_insert_with(Rational::zero) += w;
        }
        map.retain(|_, w| !w.is_zero());
        let total: Rational = map.values().sum();
        if total != Rational::one() {
            return Err(Error::NotNormalised {
                context: "global assignments".into(),
                total: format_rational(&total),
            });
        }
        Ok(GlobalDistribution {
            weights: map,
            signed,
        })
    }

    pub fn weights(&self) -> &BTreeMap<GlobalAssignment, Rational> {
        &self.weights
    }

    pub fn weight(&self, g: &GlobalAssignment) -> Rational {
        self.weights.get(g).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_signed(&self) -> bool {
        self.signed
    }

    /// Whether some weight is negative.
    pub fn has_negative(&self) -> bool {
        self.weights.values().any(|w| w.is_negative())
    }

    /// Marginal weights on `context`; may contain negative entries.
    pub fn marginal(&self, context: &Context) -> BTreeMap<LocalSection, Rational> {
        let mut out: BTreeMap<LocalSection, Rational> = BTreeMap::new();
        for (g, w) in &self.weights {
            *out.entry(g.restrict(context))
                .or_insert_with(Rational::zero) += w;
        }
        out.retain(|_, w| !w.is_zero());
        out
    }

    /// Whether every context marginal equals the model's table exactly.
    pub fn reproduces(&self, model: &EmpiricalModel<Rational>) -> bool {
        model
            .tables()
            .iter()
            .all(|t| &self.marginal(t.context()) == t.weights())
    }

    /// The empirical model obtained by marginalising onto each context.
    pub fn to_model(&self, scenario: &MeasurementScenario) -> Result<EmpiricalModel<Rational>> {
        let tables = scenario
            .cover()
            .iter()
            .map(|c| Distribution::new(scenario, c.clone(), self.marginal(c)))
            .collect::<Result<Vec<_>>>()?;
        EmpiricalModel::new(scenario.clone(), tables)
    }
}
