//! The relational-database reading of possibility models.
//!
//! Attributes are measurements, a schema is a cover, tuples are local
//! sections and a relation is the support of a boolean distribution. The
//! universal relation of an instance plays the role of a global section.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::global::{GlobalAssignment, GlobalDistribution};
use crate::model::{Distribution, EmpiricalModel};
use crate::scenario::{Context, LocalSection, MeasurementScenario};
use crate::semiring::Rational;

/// A set of tuples over one attribute set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationInstance {
    attributes: Context,
    tuples: BTreeSet<LocalSection>,
}

impl RelationInstance {
    pub fn new(
        attributes: Context,
        tuples: impl IntoIterator<Item = LocalSection>,
    ) -> Result<Self> {
        let tuples: BTreeSet<LocalSection> = tuples.into_iter().collect();
        if let Some(bad) = tuples.iter().find(|t| t.context() != &attributes) {
            return Err(Error::SectionMismatch(format!("{:?}", bad.context())));
        }
        Ok(RelationInstance { attributes, tuples })
    }

    /// The relation over no attributes holding the single empty tuple; the
    /// unit of the natural join.
    pub fn unit() -> Self {
        RelationInstance {
            attributes: Context::empty(),
            tuples: [LocalSection::empty()].into_iter().collect(),
        }
    }

    pub fn attributes(&self) -> &Context {
        &self.attributes
    }

    pub fn tuples(&self) -> &BTreeSet<LocalSection> {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, tuple: &LocalSection) -> bool {
        self.tuples.contains(tuple)
    }
}

/// `{ t|A' : t in R }`.
pub fn project(relation: &RelationInstance, sub: &Context) -> Result<RelationInstance> {
    if !sub.is_subset(&relation.attributes) {
        return Err(Error::NotSubset(
            format!("{sub:?}"),
            format!("{:?}", relation.attributes),
        ));
    }
    Ok(RelationInstance {
        attributes: sub.clone(),
        tuples: relation
            .tuples
            .iter()
            .map(|t| t.restrict_unchecked(sub))
            .collect(),
    })
}

fn join_pair(left: &RelationInstance, right: &RelationInstance) -> RelationInstance {
    let attributes = left.attributes.union(&right.attributes);
    let shared = left.attributes.intersection(&right.attributes);
    let mut index: BTreeMap<LocalSection, Vec<&LocalSection>> = BTreeMap::new();
    for u in &right.tuples {
        index
            .entry(u.restrict_unchecked(&shared))
            .or_default()
            .push(u);
    }
    let mut tuples = BTreeSet::new();
    for t in &left.tuples {
        let Some(matches) = index.get(&t.restrict_unchecked(&shared)) else {
            continue;
        };
        for u in matches {
            let values = attributes
                .measurements()
                .iter()
                .map(|m| t.value_of(*m).or_else(|| u.value_of(*m)).expect("in union"))
                .collect();
            tuples.insert(LocalSection::new(attributes.clone(), values).expect("aligned"));
        }
    }
    RelationInstance { attributes, tuples }
}

/// A schema (cover of the attribute set) with one relation per element.
#[derive(Debug, Clone, PartialEq)]
pub struct DatabaseInstance {
    universe: MeasurementScenario,
    relations: Vec<RelationInstance>,
}

impl DatabaseInstance {
    /// `universe` supplies attribute domains (as outcome domains) and the
    /// schema (as its cover). Relations may be empty.
    pub fn new(universe: MeasurementScenario, relations: Vec<RelationInstance>) -> Result<Self> {
        if relations.len() != universe.cover().len() {
            return Err(Error::TableCount {
                expected: universe.cover().len(),
                found: relations.len(),
            });
        }
        for (i, (r, a)) in relations.iter().zip(universe.cover()).enumerate() {
            if r.attributes() != a {
                return Err(Error::RelationSchema(i));
            }
            for t in r.tuples() {
                universe.check_section(t)?;
            }
        }
        Ok(DatabaseInstance {
            universe,
            relations,
        })
    }

    pub fn universe(&self) -> &MeasurementScenario {
        &self.universe
    }

    pub fn schema(&self) -> &[Context] {
        self.universe.cover()
    }

    pub fn relations(&self) -> &[RelationInstance] {
        &self.relations
    }
}

/// Left fold of pairwise joins in schema order.
pub fn natural_join(instance: &DatabaseInstance) -> RelationInstance {
    instance
        .relations
        .iter()
        .fold(RelationInstance::unit(), |acc, r| join_pair(&acc, r))
}

/// The join, when projecting it recovers every relation; otherwise `None`.
pub fn universal_relation(instance: &DatabaseInstance) -> Option<RelationInstance> {
    let join = natural_join(instance);
    instance
        .relations
        .iter()
        .all(|r| project(&join, r.attributes()).expect("subset") == *r)
        .then_some(join)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GyoStep {
    /// `attribute` occurred only in schema element `element`.
    RemoveAttribute { attribute: usize, element: usize },
    /// `element` (as reduced so far) was contained in `contained_in`, or was
    /// the last, empty element.
    RemoveElement {
        element: usize,
        contained_in: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GyoReduction {
    pub acyclic: bool,
    pub trace: Vec<GyoStep>,
    /// Schema elements in the order they were removed, with the element
    /// that absorbed each one.
    pub removals: Vec<(usize, Option<usize>)>,
}

/// GYO ear removal. Each round first deletes attributes found in exactly one
/// remaining element (attribute order), then elements contained in another
/// remaining element (schema order, smallest container); the schema is
/// acyclic iff it reduces to nothing.
pub fn is_acyclic(schema: &[Context]) -> GyoReduction {
    let mut elems: Vec<Option<BTreeSet<usize>>> = schema
        .iter()
        .map(|c| Some(c.measurements().iter().copied().collect()))
        .collect();
    let mut trace = Vec::new();
    let mut removals = Vec::new();
    loop {
        let mut changed = false;
        let attrs: BTreeSet<usize> = elems.iter().flatten().flatten().copied().collect();
        for a in attrs {
            let holders: Vec<usize> = elems
                .iter()
                .enumerate()
                .filter(|(_, e)| e.as_ref().is_some_and(|e| e.contains(&a)))
                .map(|(i, _)| i)
                .collect();
            if let [only] = holders[..] {
                elems[only].as_mut().expect("live").remove(&a);
                trace.push(GyoStep::RemoveAttribute {
                    attribute: a,
                    element: only,
                });
                changed = true;
            }
        }
        for i in 0..elems.len() {
            let Some(e) = elems[i].as_ref() else { continue };
            let container = (0..elems.len())
                .find(|&j| j != i && elems[j].as_ref().is_some_and(|f| e.is_subset(f)));
            let last_empty = e.is_empty() && elems.iter().flatten().count() == 1;
            if container.is_some() || last_empty {
                elems[i] = None;
                trace.push(GyoStep::RemoveElement {
                    element: i,
                    contained_in: container,
                });
                removals.push((i, container));
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    GyoReduction {
        acyclic: elems.iter().all(Option::is_none),
        trace,
        removals,
    }
}

/// Glues a compatible probability model on an acyclic cover into a global
/// distribution.
///
/// Contexts are visited in reverse GYO removal order, which has the running
/// intersection property: each context meets the union of the earlier ones
/// inside a single earlier context. Each step multiplies in the conditional
/// `d_C(s) / d_C|_S(s|_S)` over that separator `S`, with `0/0` read as `0`.
pub fn vorobev_extend(model: &EmpiricalModel<Rational>) -> Result<GlobalDistribution> {
    let scenario = model.scenario();
    let reduction = is_acyclic(scenario.cover());
    if !reduction.acyclic {
        return Err(Error::CyclicCover);
    }
    if let Some(err) = model.incompatibility_error() {
        return Err(err);
    }
    let n = scenario.measurement_count();
    let mut partials: Vec<(Vec<Option<usize>>, Rational)> =
        vec![(vec![None; n], Rational::from_integer(1.into()))];
    let mut covered = Context::empty();
    for (idx, _) in reduction.removals.iter().rev() {
        let table = model.table(*idx)?;
        let context = table.context();
        let separator = context.intersection(&covered);
        let marginal = table.marginalise(&separator)?;
        let mut by_separator: BTreeMap<LocalSection, Vec<(&LocalSection, &Rational)>> =
            BTreeMap::new();
        for (s, w) in table.weights() {
            by_separator
                .entry(s.restrict_unchecked(&separator))
                .or_default()
                .push((s, w));
        }
        let mut next = Vec::new();
        for (values, weight) in &partials {
            let key = LocalSection::new(
                separator.clone(),
                separator
                    .measurements()
                    .iter()
                    .map(|m| values[*m].expect("separator already assigned"))
                    .collect(),
            )?;
            let denom = marginal.weight(&key);
            let Some(extensions) = by_separator.get(&key) else {
                continue;
            };
            for (s, w) in extensions {
                let mut extended = values.clone();
                for (m, v) in context.measurements().iter().zip(s.values()) {
                    extended[*m] = Some(*v);
                }
                next.push((extended, weight * *w / &denom));
            }
        }
        partials = next;
        covered = covered.union(context);
    }
    let weights = partials
        .into_iter()
        .map(|(values, w)| {
            let values = values
                .into_iter()
                .map(|v| v.expect("cover spans X"))
                .collect();
            Ok((GlobalAssignment::new(scenario, values)?, w))
        })
        .collect::<Result<Vec<_>>>()?;
    let dist = GlobalDistribution::new(weights, false)?;
    if !dist.reproduces(model) {
        return Err(Error::Postcondition(
            "glued distribution does not reproduce the tables".into(),
        ));
    }
    Ok(dist)
}

/// Relations are the supports of the tables.
pub fn model_to_instance(model: &EmpiricalModel<bool>) -> DatabaseInstance {
    let relations = model
        .tables()
        .iter()
        .map(|t| RelationInstance {
            attributes: t.context().clone(),
            tuples: t.support().cloned().collect(),
        })
        .collect();
    DatabaseInstance {
        universe: model.scenario().clone(),
        relations,
    }
}

/// Fails on an empty relation, which is not a boolean distribution.
pub fn instance_to_model(instance: &DatabaseInstance) -> Result<EmpiricalModel<bool>> {
    let tables = instance
        .relations
        .iter()
        .enumerate()
        .map(|(i, r)| {
            if r.is_empty() {
                return Err(Error::EmptyRelation(i));
            }
            Distribution::new(
                &instance.universe,
                r.attributes.clone(),
                r.tuples.iter().map(|t| (t.clone(), true)),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    EmpiricalModel::new(instance.universe.clone(), tables)
}
