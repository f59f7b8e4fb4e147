//! Deciding the contextuality hierarchy: logical and strong contextuality
//! from supports, probabilistic contextuality by exact linear feasibility,
//! and signed global measures.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::global::{
    check_bound, consistent_global_assignments, enumerate_global_assignments, GlobalAssignment,
    GlobalDistribution, SupportSearch,
};
use crate::linear::{phase_one, solve_exact, Matrix};
use crate::model::{AnyModel, Compatibility, EmpiricalModel};
use crate::scenario::LocalSection;
use crate::semiring::{Rational, SemiringKind};

/// A possible section (at cover index `context`) that extends to no
/// consistent global assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub context: usize,
    pub section: LocalSection,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicalVerdict {
    pub contextual: bool,
    pub witness: Option<Witness>,
}

/// Looks for the first possible section, in cover order and then canonical
/// section order, that no consistent global assignment extends.
pub fn is_logically_contextual(model: &EmpiricalModel<bool>) -> LogicalVerdict {
    let search = SupportSearch::new(model);
    let mut known: Vec<GlobalAssignment> = Vec::new();
    for (i, table) in model.tables().iter().enumerate() {
        for section in table.support() {
            if known.iter().any(|g| g.extends(section)) {
                continue;
            }
            match search.find(section) {
                Some(g) => known.push(g),
                None => {
                    return LogicalVerdict {
                        contextual: true,
                        witness: Some(Witness {
                            context: i,
                            section: section.clone(),
                        }),
                    }
                }
            }
        }
    }
    LogicalVerdict {
        contextual: false,
        witness: None,
    }
}

/// True iff no global assignment is consistent with the support.
pub fn is_strongly_contextual(model: &EmpiricalModel<bool>) -> bool {
    SupportSearch::new(model)
        .find(&LocalSection::empty())
        .is_none()
}

/// Searches for a nonnegative global distribution whose marginals reproduce
/// every table. Only assignments consistent with the support can carry
/// weight, so the columns are exactly those; the rows are one marginal
/// equation per possible section.
pub fn find_global_distribution(
    model: &EmpiricalModel<Rational>,
    bound: u64,
) -> Result<Option<GlobalDistribution>> {
    check_bound(model.scenario(), bound)?;
    if let Some(err) = model.incompatibility_error() {
        return Err(err);
    }
    let columns = consistent_global_assignments(&model.support(), bound)?;
    if columns.is_empty() {
        return Ok(None);
    }
    let mut a: Matrix = Vec::new();
    let mut b = Vec::new();
    for table in model.tables() {
        for (section, weight) in table.weights() {
            a.push(
                columns
                    .iter()
                    .map(|g| indicator(g.extends(section)))
                    .collect(),
            );
            b.push(weight.clone());
        }
    }
    let Some(x) = phase_one(&a, &b) else {
        return Ok(None);
    };
    let dist = GlobalDistribution::new(columns.into_iter().zip(x), false)?;
    if !dist.reproduces(model) {
        return Err(Error::Postcondition(
            "global distribution does not reproduce the tables".into(),
        ));
    }
    Ok(Some(dist))
}

/// Solves the same marginal equations over all global assignments, allowing
/// negative weights. Free variables are set to zero.
pub fn find_signed_global_measure(
    model: &EmpiricalModel<Rational>,
    bound: u64,
) -> Result<Option<GlobalDistribution>> {
    let columns = enumerate_global_assignments(model.scenario(), bound)?;
    let scenario = model.scenario();
    let mut a: Matrix = vec![vec![Rational::from_integer(1.into()); columns.len()]];
    let mut b = vec![Rational::one()];
    for table in model.tables() {
        for section in scenario.enumerate_sections(table.context())? {
            a.push(
                columns
                    .iter()
                    .map(|g| indicator(g.extends(&section)))
                    .collect(),
            );
            b.push(table.weight(&section));
        }
    }
    let Some(x) = solve_exact(&a, &b) else {
        return Ok(None);
    };
    let dist = GlobalDistribution::new(columns.into_iter().zip(x), true)?;
    if !dist.reproduces(model) {
        return Err(Error::Postcondition(
            "signed measure does not reproduce the tables".into(),
        ));
    }
    Ok(Some(dist))
}

fn indicator(flag: bool) -> Rational {
    if flag {
        Rational::from_integer(1.into())
    } else {
        Rational::zero()
    }
}

/// Where a model sits in the contextuality hierarchy.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextualityReport {
    pub kind: SemiringKind,
    pub compatible: bool,
    pub incompatibility: Option<Compatibility>,
    /// `None` for possibility models. An incompatible probability model has
    /// no global distribution at all and is reported as contextual.
    pub probabilistically_contextual: Option<bool>,
    pub global_distribution: Option<GlobalDistribution>,
    pub logically_contextual: bool,
    pub logical_witness: Option<Witness>,
    pub strongly_contextual: bool,
    /// `None` for possibility models.
    pub signed_measure_exists: Option<bool>,
    pub signed_measure: Option<GlobalDistribution>,
}

impl ContextualityReport {
    /// Anything beyond noncontextual behaviour.
    pub fn is_contextual(&self) -> bool {
        self.logically_contextual || self.probabilistically_contextual == Some(true)
    }
}

/// Runs every check on a model. Boolean checks use the support of a
/// probability model.
pub fn classify(model: &AnyModel, bound: u64) -> Result<ContextualityReport> {
    check_bound(model.scenario(), bound)?;
    let compatibility = model.is_compatible();
    let compatible = compatibility.is_compatible();
    let possibilistic = model.possibilistic();
    let logical = is_logically_contextual(&possibilistic);
    let strongly = is_strongly_contextual(&possibilistic);
    let (probabilistic, global, signed_exists, signed) = match model {
        AnyModel::Possibility(_) => (None, None, None, None),
        AnyModel::Probability(m) => {
            let global = if compatible {
                find_global_distribution(m, bound)?
            } else {
                None
            };
            let signed = find_signed_global_measure(m, bound)?;
            (
                Some(global.is_none()),
                global,
                Some(signed.is_some()),
                signed,
            )
        }
    };
    Ok(ContextualityReport {
        kind: model.kind(),
        compatible,
        incompatibility: (!compatible).then_some(compatibility),
        probabilistically_contextual: probabilistic,
        global_distribution: global,
        logically_contextual: logical.contextual,
        logical_witness: logical.witness,
        strongly_contextual: strongly,
        signed_measure_exists: signed_exists,
        signed_measure: signed,
    })
}
