//! Kochen-Specker models: exactly one measurement per context takes the
//! value 1.

use std::collections::BTreeMap;

use num_integer::Integer;

use crate::contextuality::is_strongly_contextual;
use crate::error::{Error, Result};
use crate::global::check_bound;
use crate::model::{Distribution, EmpiricalModel};
use crate::scenario::{Context, MeasurementScenario};

/// Tolerance for unit norms and orthogonality of real labelings.
pub const ORTHO_TOLERANCE: f64 = 1e-9;

fn check_binary(cover: &MeasurementScenario) -> Result<()> {
    for m in 0..cover.measurement_count() {
        if cover.outcomes(m) != ["0", "1"] {
            return Err(Error::NonBinaryDomain(
                cover.measurement_name(m).to_string(),
            ));
        }
    }
    Ok(())
}

/// The possibility model whose table at each context holds the sections
/// with exactly one `1`.
pub fn ks_model(cover: &MeasurementScenario) -> Result<EmpiricalModel<bool>> {
    check_binary(cover)?;
    let tables = cover
        .cover()
        .iter()
        .map(|c| {
            let support = cover
                .enumerate_sections(c)?
                .into_iter()
                .filter(|s| s.values().iter().filter(|v| **v == 1).count() == 1)
                .map(|s| (s, true));
            Distribution::new(cover, c.clone(), support)
        })
        .collect::<Result<Vec<_>>>()?;
    EmpiricalModel::new(cover.clone(), tables)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivisorVerdict {
    /// `divisor` divides every degree but not the number of contexts, so the
    /// model cannot be noncontextual.
    ContextualByCriterion {
        divisor: usize,
    },
    Inconclusive,
}

/// Number of contexts containing each measurement.
pub fn degrees(cover: &MeasurementScenario) -> Vec<usize> {
    (0..cover.measurement_count())
        .map(|m| cover.degree(m))
        .collect()
}

/// Looks for a common divisor `d > 1` of all degrees that does not divide
/// the number of contexts; reports the smallest one.
pub fn divisor_criterion(cover: &MeasurementScenario) -> DivisorVerdict {
    let g = degrees(cover)
        .into_iter()
        .fold(0usize, |acc, d| acc.gcd(&d));
    let contexts = cover.cover().len();
    (2..=g)
        .find(|d| g % d == 0 && !contexts.is_multiple_of(*d))
        .map_or(DivisorVerdict::Inconclusive, |divisor| {
            DivisorVerdict::ContextualByCriterion { divisor }
        })
}

/// True iff the conjunction of the exactly-one constraints over all
/// contexts is unsatisfiable.
pub fn is_ks_contextual(cover: &MeasurementScenario, bound: u64) -> Result<bool> {
    check_bound(cover, bound)?;
    Ok(is_strongly_contextual(&ks_model(cover)?))
}

/// A unit real vector for each measurement, all of one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct RealVectorLabeling {
    vectors: BTreeMap<String, Vec<f64>>,
    dim: usize,
}

impl RealVectorLabeling {
    pub fn new(vectors: BTreeMap<String, Vec<f64>>) -> Result<Self> {
        let dim = vectors.values().next().map_or(0, Vec::len);
        for v in vectors.values() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch(dim, v.len()));
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > ORTHO_TOLERANCE {
                return Err(Error::NotUnitVector(norm));
            }
        }
        Ok(RealVectorLabeling { vectors, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vector(&self, label: &str) -> Option<&[f64]> {
        self.vectors.get(label).map(Vec::as_slice)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealizationFailure {
    /// A cover context whose size differs from the dimension.
    WrongSize { context: usize },
    /// Two vectors of a cover context are not orthogonal.
    NotOrthogonal {
        context: usize,
        first: String,
        second: String,
    },
    /// An orthonormal basis among the labels that is missing from the cover.
    MissingBasis { measurements: Vec<String> },
}

/// `Ok(None)` when the labeling realises the cover; otherwise the first
/// failure found.
pub fn verify_orthonormal_realization(
    labeling: &RealVectorLabeling,
    cover: &MeasurementScenario,
    exhaustive: bool,
    bound: u64,
) -> Result<Option<RealizationFailure>> {
    let n = labeling.dim();
    let vecs: Vec<&[f64]> = cover
        .measurements()
        .iter()
        .map(|m| {
            labeling
                .vector(m)
                .ok_or_else(|| Error::MissingVector(m.clone()))
        })
        .collect::<Result<_>>()?;
    let orthogonal = |x: usize, y: usize| {
        let dot: f64 = vecs[x].iter().zip(vecs[y]).map(|(a, b)| a * b).sum();
        dot.abs() <= ORTHO_TOLERANCE
    };
    for (i, c) in cover.cover().iter().enumerate() {
        if c.len() != n {
            return Ok(Some(RealizationFailure::WrongSize { context: i }));
        }
        let ms = c.measurements();
        for (k, x) in ms.iter().enumerate() {
            for y in &ms[k + 1..] {
                if !orthogonal(*x, *y) {
                    return Ok(Some(RealizationFailure::NotOrthogonal {
                        context: i,
                        first: cover.measurement_name(*x).to_string(),
                        second: cover.measurement_name(*y).to_string(),
                    }));
                }
            }
        }
    }
    if exhaustive {
        let total = cover.measurement_count();
        if binomial(total, n) > bound as u128 {
            return Err(Error::BoundExceeded {
                size: binomial(total, n).to_string(),
                bound,
            });
        }
        let mut chosen = Vec::with_capacity(n);
        if let Some(missing) = find_missing_basis(cover, &orthogonal, n, 0, &mut chosen) {
            return Ok(Some(RealizationFailure::MissingBasis {
                measurements: missing
                    .iter()
                    .map(|m| cover.measurement_name(*m).to_string())
                    .collect(),
            }));
        }
    }
    Ok(None)
}

fn find_missing_basis(
    cover: &MeasurementScenario,
    orthogonal: &dyn Fn(usize, usize) -> bool,
    n: usize,
    start: usize,
    chosen: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if chosen.len() == n {
        let c = Context::new(chosen.iter().copied());
        return cover.context_position(&c).is_none().then(|| chosen.clone());
    }
    for m in start..cover.measurement_count() {
        if chosen.iter().all(|x| orthogonal(*x, m)) {
            chosen.push(m);
            if let Some(found) = find_missing_basis(cover, orthogonal, n, m + 1, chosen) {
                return Some(found);
            }
            chosen.pop();
        }
    }
    None
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}
