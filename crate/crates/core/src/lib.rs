//! Sheaf-theoretic contextuality analysis for empirical models.
//!
//! Measurement scenarios, empirical models over the boolean and rational
//! semirings, the logical/strong/probabilistic contextuality hierarchy,
//! logical Bell inequalities, two-qubit quantum models, Kochen-Specker
//! covers, and the relational-database reading of all of these.

pub mod contextuality;
pub mod error;
pub mod fixtures;
pub mod global;
pub mod io;
pub mod ks;
pub mod linear;
pub mod logic;
pub mod model;
pub mod quantum;
pub mod relational;
pub mod scenario;
pub mod semiring;

pub use contextuality::{
    classify, find_global_distribution, find_signed_global_measure, is_logically_contextual,
    is_strongly_contextual, ContextualityReport, LogicalVerdict, Witness,
};
pub use error::{Error, Result};
pub use global::{
    consistent_global_assignments, enumerate_global_assignments, global_space_size,
    GlobalAssignment, GlobalDistribution, DEFAULT_BOUND,
};
pub use ks::{
    degrees, divisor_criterion, is_ks_contextual, ks_model, verify_orthonormal_realization,
    DivisorVerdict, RealVectorLabeling, RealizationFailure,
};
pub use logic::{
    bell_violation, event_probability, jointly_satisfiable, BellCertificate, EventFormula, Expr,
};
pub use model::{AnyModel, Compatibility, Distribution, EmpiricalModel};
pub use quantum::{
    bell_assignment, bell_state, quantum_empirical_model, up_up_state, ComplexVector,
    EquatorialMeasurement, MeasurementAssignment, QuantumTable, Qubit, Spin,
};
pub use relational::{
    instance_to_model, is_acyclic, model_to_instance, natural_join, project, universal_relation,
    vorobev_extend, DatabaseInstance, GyoReduction, GyoStep, RelationInstance,
};
pub use scenario::{Context, LocalSection, MeasurementScenario};
pub use semiring::{format_rational, parse_rational, rat, Rational, Semiring, SemiringKind};
