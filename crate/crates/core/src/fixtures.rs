//! The worked examples: the Bell table, the Hardy possibility table, the
//! Kochen-Specker covers and the events of the logical Bell argument.

use crate::logic::{EventFormula, Expr};
use crate::model::EmpiricalModel;
use crate::scenario::MeasurementScenario;
use crate::semiring::{rat, Rational};

/// Two parties, two binary measurements each, contexts in table-row order
/// `{a1,b1} {a1,b2} {a2,b1} {a2,b2}`.
pub fn bell_scenario() -> MeasurementScenario {
    MeasurementScenario::binary(
        &["a1", "a2", "b1", "b2"],
        &[&["a1", "b1"], &["a1", "b2"], &["a2", "b1"], &["a2", "b2"]],
    )
    .expect("valid scenario")
}

/// Rows of the Bell table, columns `(0,0) (1,0) (0,1) (1,1)`.
pub fn bell_rows() -> Vec<Vec<Rational>> {
    let row = |w: [i64; 4]| w.iter().map(|n| rat(*n, 8)).collect::<Vec<_>>();
    vec![
        row([4, 0, 0, 4]),
        row([3, 1, 1, 3]),
        row([3, 1, 1, 3]),
        row([1, 3, 3, 1]),
    ]
}

pub fn bell_table() -> EmpiricalModel<Rational> {
    EmpiricalModel::from_rows(bell_scenario(), bell_rows()).expect("valid model")
}

/// Every row `(1/2, 0, 0, 1/2)`.
pub fn correlated_table() -> EmpiricalModel<Rational> {
    let row = vec![rat(1, 2), rat(0, 1), rat(0, 1), rat(1, 2)];
    EmpiricalModel::from_rows(bell_scenario(), vec![row; 4]).expect("valid model")
}

/// Every row uniform.
pub fn uniform_table() -> EmpiricalModel<Rational> {
    EmpiricalModel::from_rows(bell_scenario(), vec![vec![rat(1, 4); 4]; 4]).expect("valid model")
}

/// The Bell table with row `{a1,b2}` replaced by a point mass on `(0,0)`;
/// its `a1` marginal disagrees with row `{a1,b1}`.
pub fn signalling_bell_table() -> EmpiricalModel<Rational> {
    let mut rows = bell_rows();
    rows[1] = vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)];
    EmpiricalModel::from_rows(bell_scenario(), rows).expect("valid model")
}

/// Bell measurements with contexts in the possibility-table order
/// `{a1,b1} {a2,b1} {a1,b2} {a2,b2}`.
pub fn hardy_scenario() -> MeasurementScenario {
    MeasurementScenario::binary(
        &["a1", "a2", "b1", "b2"],
        &[&["a1", "b1"], &["a2", "b1"], &["a1", "b2"], &["a2", "b2"]],
    )
    .expect("valid scenario")
}

/// The Hardy possibility table, columns `(0,0) (1,0) (0,1) (1,1)`.
pub fn hardy_table() -> EmpiricalModel<bool> {
    EmpiricalModel::from_rows(
        hardy_scenario(),
        vec![
            vec![true, true, true, true],
            vec![false, true, true, true],
            vec![false, true, true, true],
            vec![true, true, true, false],
        ],
    )
    .expect("valid model")
}

/// `{a,b} {b,c} {a,c}`.
pub fn triangle_cover() -> MeasurementScenario {
    MeasurementScenario::binary(&["a", "b", "c"], &[&["a", "b"], &["b", "c"], &["a", "c"]])
        .expect("valid cover")
}

/// `{a,b} {b,c} {c,d} {d,a}`.
pub fn square_cover() -> MeasurementScenario {
    MeasurementScenario::binary(
        &["a", "b", "c", "d"],
        &[&["a", "b"], &["b", "c"], &["c", "d"], &["d", "a"]],
    )
    .expect("valid cover")
}

/// Contexts of the 18-measurement, 9-context Kochen-Specker cover, by
/// measurement number.
pub const KS18_CONTEXTS: [[usize; 4]; 9] = [
    [1, 2, 3, 4],
    [1, 5, 6, 7],
    [8, 9, 3, 10],
    [8, 11, 7, 12],
    [2, 5, 13, 14],
    [9, 11, 14, 15],
    [16, 17, 4, 10],
    [16, 18, 6, 12],
    [17, 18, 13, 15],
];

pub fn ks18_cover() -> MeasurementScenario {
    let names: Vec<String> = (1..=18).map(|i| format!("m{i}")).collect();
    let cover = KS18_CONTEXTS
        .iter()
        .map(|c| c.iter().map(|i| format!("m{i}")).collect())
        .collect();
    let outcomes = vec![vec!["0".to_string(), "1".to_string()]; names.len()];
    MeasurementScenario::new(names, outcomes, cover).expect("valid cover")
}

/// The four events of the logical Bell argument, with outcome `0` read as
/// true: `a1 <-> b1`, `a1 <-> b2`, `a2 <-> b1`, `a2 xor b2`, tagged with the
/// matching rows of [`bell_scenario`].
pub fn bell_formulas() -> Vec<EventFormula> {
    let s = bell_scenario();
    let atom = |m: &str| Expr::atom(&s, m, "0").expect("valid atom");
    let specs = [
        (0, Expr::Iff(Box::new(atom("a1")), Box::new(atom("b1")))),
        (1, Expr::Iff(Box::new(atom("a1")), Box::new(atom("b2")))),
        (2, Expr::Iff(Box::new(atom("a2")), Box::new(atom("b1")))),
        (3, Expr::Xor(Box::new(atom("a2")), Box::new(atom("b2")))),
    ];
    specs
        .into_iter()
        .map(|(c, e)| EventFormula::new(&s, c, e).expect("well-typed"))
        .collect()
}

/// The same events in the file syntax.
pub const BELL_FORMULA_TEXT: [&str; 4] = [
    "(iff (= a1 0) (= b1 0))",
    "(iff (= a1 0) (= b2 0))",
    "(iff (= a2 0) (= b1 0))",
    "(xor (= a2 0) (= b2 0))",
];
