//! Two-qubit Born-rule predictions for equatorial spin measurements.
//!
//! Basis order is `|uu>, |ud>, |du>, |dd>`. The first outcome of a
//! measurement's domain is read as spin up, the second as spin down.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{Distribution, EmpiricalModel};
use crate::scenario::MeasurementScenario;
use crate::semiring::Rational;

/// States and outcome vectors must have norm within this of 1.
pub const NORM_TOLERANCE: f64 = 1e-12;
/// Probabilities snap to a small-denominator rational only within this.
pub const SNAP_TOLERANCE: f64 = 1e-9;
/// Largest denominator considered when snapping.
pub const MAX_SNAP_DENOMINATOR: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    amplitudes: Vec<Complex64>,
}

impl ComplexVector {
    /// A unit vector; fails if the norm is off by more than [`NORM_TOLERANCE`].
    pub fn unit(amplitudes: Vec<Complex64>) -> Result<Self> {
        let v = ComplexVector { amplitudes };
        let norm = v.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotUnitVector(norm));
        }
        Ok(v)
    }

    /// Normalises arbitrary nonzero amplitudes.
    pub fn normalised(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotUnitVector(norm));
        }
        Ok(ComplexVector {
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `<self|other>`, conjugating `self`.
    pub fn inner(&self, other: &ComplexVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Kronecker product, first factor major.
pub fn tensor_product(v: &ComplexVector, w: &ComplexVector) -> ComplexVector {
    let amplitudes = v
        .amplitudes
        .iter()
        .flat_map(|a| w.amplitudes.iter().map(move |b| a * b))
        .collect();
    ComplexVector { amplitudes }
}

/// `|<state|outcome>|^2`, clamped to `[0, 1]`.
pub fn born_probability(state: &ComplexVector, outcome: &ComplexVector) -> Result<f64> {
    Ok(state.inner(outcome)?.norm_sqr().clamp(0.0, 1.0))
}

/// `(|uu> + |dd>) / sqrt 2`.
pub fn bell_state() -> ComplexVector {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let z = Complex64::zero();
    ComplexVector {
        amplitudes: vec![h, z, z, h],
    }
}

/// `|uu>`.
pub fn up_up_state() -> ComplexVector {
    let z = Complex64::zero();
    ComplexVector {
        amplitudes: vec![Complex64::one(), z, z, z],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spin {
    Up,
    Down,
}

/// A spin measurement in the XY plane at `angle` radians from the X axis,
/// canonicalised to `[0, 2pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquatorialMeasurement {
    angle: f64,
}

impl EquatorialMeasurement {
    pub fn new(angle: f64) -> Result<Self> {
        if !angle.is_finite() {
            return Err(Error::NonFiniteAngle);
        }
        Ok(EquatorialMeasurement {
            angle: angle.rem_euclid(TAU),
        })
    }

    pub fn from_degrees(degrees: f64) -> Result<Self> {
        Self::new(degrees.to_radians())
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn outcome_vector(&self, spin: Spin) -> ComplexVector {
        equatorial_outcome_vector(self.angle, spin)
    }
}

/// Up is `(1, e^{i phi}) / sqrt 2`, down is `(1, e^{i (phi + pi)}) / sqrt 2`.
pub fn equatorial_outcome_vector(angle: f64, spin: Spin) -> ComplexVector {
    let phase = match spin {
        Spin::Up => angle,
        Spin::Down => angle + PI,
    };
    ComplexVector {
        amplitudes: vec![
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::from_polar(FRAC_1_SQRT_2, phase),
        ],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Qubit {
    First,
    Second,
}

/// Which qubit each measurement acts on, and its direction.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MeasurementAssignment {
    entries: BTreeMap<String, (Qubit, EquatorialMeasurement)>,
}

impl MeasurementAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, label: &str, qubit: Qubit, measurement: EquatorialMeasurement) -> Self {
        self.insert(label, qubit, measurement);
        self
    }

    pub fn insert(&mut self, label: &str, qubit: Qubit, measurement: EquatorialMeasurement) {
        self.entries.insert(label.to_string(), (qubit, measurement));
    }

    pub fn get(&self, label: &str) -> Option<&(Qubit, EquatorialMeasurement)> {
        self.entries.get(label)
    }
}

/// A generated model together with the unsnapped Born probabilities, one
/// row per context in canonical section order.
#[derive(Debug, Clone)]
pub struct QuantumTable {
    pub model: EmpiricalModel<Rational>,
    pub raw: Vec<Vec<f64>>,
}

/// Predicts every context table of a two-qubit scenario.
///
/// A row snaps to the nearest rationals with denominator at most
/// [`MAX_SNAP_DENOMINATOR`] when every entry lies within [`SNAP_TOLERANCE`]
/// of one and the snapped entries sum to exactly one. Otherwise the exact
/// binary values of the floats are kept and the row is made to sum to one
/// by adjusting its largest entry, which must move by less than
/// [`SNAP_TOLERANCE`].
pub fn quantum_empirical_model(
    state: &ComplexVector,
    assignment: &MeasurementAssignment,
    scenario: &MeasurementScenario,
) -> Result<QuantumTable> {
    if state.dim() != 4 {
        return Err(Error::DimensionMismatch(4, state.dim()));
    }
    for m in 0..scenario.measurement_count() {
        if scenario.outcomes(m).len() != 2 {
            return Err(Error::QuantumLayout(format!(
                "measurement `{}` must have exactly two outcomes",
                scenario.measurement_name(m)
            )));
        }
    }
    let mut tables = Vec::new();
    let mut raw_rows = Vec::new();
    for context in scenario.cover() {
        let label = scenario.context_label(context);
        if context.len() != 2 {
            return Err(Error::QuantumLayout(format!("{label} is not a pair")));
        }
        let mut sides = Vec::new();
        for m in context.measurements() {
            let name = scenario.measurement_name(*m);
            let (qubit, meas) = assignment
                .get(name)
                .ok_or_else(|| Error::QuantumLayout(format!("no direction for `{name}`")))?;
            sides.push((*qubit, *meas));
        }
        if sides[0].0 == sides[1].0 {
            return Err(Error::QuantumLayout(format!(
                "{label} does not pair the two qubits"
            )));
        }
        // Position in the context of the first-qubit measurement.
        let first = if sides[0].0 == Qubit::First { 0 } else { 1 };
        let sections = scenario.enumerate_sections(context)?;
        let mut raw = Vec::with_capacity(sections.len());
        for section in &sections {
            let spin = |pos: usize| {
                if section.values()[pos] == 0 {
                    Spin::Up
                } else {
                    Spin::Down
                }
            };
            let v = sides[first].1.outcome_vector(spin(first));
            let w = sides[1 - first].1.outcome_vector(spin(1 - first));
            raw.push(born_probability(state, &tensor_product(&v, &w))?);
        }
        let snapped: Option<Vec<Rational>> = raw.iter().map(|p| snap_probability(*p)).collect();
        let mut row = match snapped {
            Some(row) if row.iter().sum::<Rational>().is_one() => row,
            _ => raw.iter().map(|p| float_rational(*p)).collect(),
        };
        repair_row(&mut row)?;
        tables.push(Distribution::new(
            scenario,
            context.clone(),
            sections.into_iter().zip(row),
        )?);
        raw_rows.push(raw);
    }
    Ok(QuantumTable {
        model: EmpiricalModel::new(scenario.clone(), tables)?,
        raw: raw_rows,
    })
}

fn float_rational(p: f64) -> Rational {
    Rational::from_float(p).unwrap_or_else(Rational::zero)
}

fn snap_probability(p: f64) -> Option<Rational> {
    let exact = float_rational(p);
    let snapped = limit_denominator(&exact, MAX_SNAP_DENOMINATOR);
    let gap = (&snapped - &exact).abs().to_f64().unwrap_or(f64::INFINITY);
    (gap <= SNAP_TOLERANCE).then_some(snapped)
}

fn repair_row(row: &mut [Rational]) -> Result<()> {
    let total: Rational = row.iter().sum();
    let diff = Rational::one() - total;
    if diff.is_zero() {
        return Ok(());
    }
    let magnitude = diff.abs().to_f64().unwrap_or(f64::INFINITY);
    if magnitude >= SNAP_TOLERANCE {
        return Err(Error::NormalisationRepair(magnitude));
    }
    let mut largest = 0;
    for (i, v) in row.iter().enumerate() {
        if *v > row[largest] {
            largest = i;
        }
    }
    row[largest] += diff;
    Ok(())
}

/// Closest rational to `x` with denominator at most `max_denominator`.
pub fn limit_denominator(x: &Rational, max_denominator: u64) -> Rational {
    let max = BigInt::from(max_denominator);
    if x.denom() <= &max {
        return x.clone();
    }
    let (mut p0, mut q0, mut p1, mut q1) =
        (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    loop {
        let a = n.div_floor(&d);
        let q2 = &q0 + &a * &q1;
        if q2 > max {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let r = &n - &a * &d;
        n = std::mem::replace(&mut d, r);
    }
    let k = (&max - &q0).div_floor(&q1);
    let lower = Rational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let upper = Rational::new(p1, q1);
    if (&upper - x).abs() <= (&lower - x).abs() {
        upper
    } else {
        lower
    }
}

/// The four measurements `a1 a2 b1 b2` of the Bell scenario with `a*` on the
/// first qubit and `b*` on the second, angles in radians.
pub fn bell_assignment(a1: f64, a2: f64, b1: f64, b2: f64) -> Result<MeasurementAssignment> {
    Ok(MeasurementAssignment::new()
        .with("a1", Qubit::First, EquatorialMeasurement::new(a1)?)
        .with("a2", Qubit::First, EquatorialMeasurement::new(a2)?)
        .with("b1", Qubit::Second, EquatorialMeasurement::new(b1)?)
        .with("b2", Qubit::Second, EquatorialMeasurement::new(b2)?))
}
