//! Propositional events over measurement outcomes and logical Bell
//! inequalities.
//!
//! Atoms are equalities `m = o`. Formulas use a prefix syntax:
//! `(= m o)`, `true`, `false`, `(not f)`, `(and f ...)`, `(or f ...)`,
//! `(imp f g)`, `(iff f g)`, `(xor f g)`.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::global::{check_bound, enumerate_global_assignments, GlobalAssignment};
use crate::model::EmpiricalModel;
use crate::scenario::{LocalSection, MeasurementScenario};
use crate::semiring::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    True,
    False,
    Atom { measurement: usize, outcome: usize },
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
    Imp(Box<Expr>, Box<Expr>),
    Iff(Box<Expr>, Box<Expr>),
    Xor(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn atom(scenario: &MeasurementScenario, measurement: &str, outcome: &str) -> Result<Expr> {
        let m = scenario.measurement_index(measurement)?;
        let o = scenario.outcome_index(m, outcome)?;
        Ok(Expr::Atom {
            measurement: m,
            outcome: o,
        })
    }

    pub fn parse(text: &str, scenario: &MeasurementScenario) -> Result<Expr> {
        let tokens = tokenize(text);
        let mut pos = 0;
        let expr = parse_expr(&tokens, &mut pos, scenario)?;
        if pos != tokens.len() {
            return Err(Error::FormulaParse(format!(
                "trailing input after position {pos} in `{text}`"
            )));
        }
        Ok(expr)
    }

    /// Evaluates with `lookup(m)` giving the outcome index of measurement `m`.
    pub fn eval(&self, lookup: &dyn Fn(usize) -> usize) -> bool {
        match self {
            Expr::True => true,
            Expr::False => false,
            Expr::Atom {
                measurement,
                outcome,
            } => lookup(*measurement) == *outcome,
            Expr::Not(e) => !e.eval(lookup),
            Expr::And(es) => es.iter().all(|e| e.eval(lookup)),
            Expr::Or(es) => es.iter().any(|e| e.eval(lookup)),
            Expr::Imp(a, b) => !a.eval(lookup) || b.eval(lookup),
            Expr::Iff(a, b) => a.eval(lookup) == b.eval(lookup),
            Expr::Xor(a, b) => a.eval(lookup) != b.eval(lookup),
        }
    }

    pub fn measurements(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut BTreeSet<usize>) {
        match self {
            Expr::True | Expr::False => {}
            Expr::Atom { measurement, .. } => {
                out.insert(*measurement);
            }
            Expr::Not(e) => e.collect(out),
            Expr::And(es) | Expr::Or(es) => es.iter().for_each(|e| e.collect(out)),
            Expr::Imp(a, b) | Expr::Iff(a, b) | Expr::Xor(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }

    /// Renders back to the prefix syntax.
    pub fn render(&self, scenario: &MeasurementScenario) -> String {
        let many = |op: &str, es: &[Expr]| {
            let parts: Vec<String> = es.iter().map(|e| e.render(scenario)).collect();
            if parts.is_empty() {
                format!("({op})")
            } else {
                format!("({op} {})", parts.join(" "))
            }
        };
        let two = |op: &str, a: &Expr, b: &Expr| {
            format!("({op} {} {})", a.render(scenario), b.render(scenario))
        };
        match self {
            Expr::True => "true".into(),
            Expr::False => "false".into(),
            Expr::Atom {
                measurement,
                outcome,
            } => format!(
                "(= {} {})",
                scenario.measurement_name(*measurement),
                scenario.outcomes(*measurement)[*outcome]
            ),
            Expr::Not(e) => format!("(not {})", e.render(scenario)),
            Expr::And(es) => many("and", es),
            Expr::Or(es) => many("or", es),
            Expr::Imp(a, b) => two("imp", a, b),
            Expr::Iff(a, b) => two("iff", a, b),
            Expr::Xor(a, b) => two("xor", a, b),
        }
    }
}

fn tokenize(text: &str) -> Vec<String> {
    text.replace('(', " ( ")
        .replace(')', " ) ")
        .split_whitespace()
        .map(str::to_string)
        .collect()
}

fn parse_expr(tokens: &[String], pos: &mut usize, scenario: &MeasurementScenario) -> Result<Expr> {
    let tok = tokens
        .get(*pos)
        .ok_or_else(|| Error::FormulaParse("unexpected end of formula".into()))?;
    *pos += 1;
    match tok.as_str() {
        "true" => return Ok(Expr::True),
        "false" => return Ok(Expr::False),
        "(" => {}
        other => return Err(Error::FormulaParse(format!("unexpected token `{other}`"))),
    }
    let op = tokens
        .get(*pos)
        .ok_or_else(|| Error::FormulaParse("missing operator".into()))?
        .clone();
    *pos += 1;
    let expr = if op == "=" {
        let m = tokens.get(*pos).cloned();
        let o = tokens.get(*pos + 1).cloned();
        *pos += 2;
        match (m, o) {
            (Some(m), Some(o)) if m != ")" && o != ")" => Expr::atom(scenario, &m, &o)?,
            _ => {
                return Err(Error::FormulaParse(
                    "atom needs a measurement and an outcome".into(),
                ))
            }
        }
    } else {
        let mut args = Vec::new();
        while tokens.get(*pos).map(String::as_str) != Some(")") {
            if *pos >= tokens.len() {
                return Err(Error::FormulaParse("unbalanced parentheses".into()));
            }
            args.push(parse_expr(tokens, pos, scenario)?);
        }
        let arity = |n: usize, args: &[Expr]| {
            if args.len() == n {
                Ok(())
            } else {
                Err(Error::FormulaParse(format!("`{op}` takes {n} arguments")))
            }
        };
        match op.as_str() {
            "not" => {
                arity(1, &args)?;
                Expr::Not(Box::new(args.remove(0)))
            }
            "and" => Expr::And(args),
            "or" => Expr::Or(args),
            "imp" | "iff" | "xor" => {
                arity(2, &args)?;
                let b = Box::new(args.pop().expect("two"));
                let a = Box::new(args.pop().expect("two"));
                match op.as_str() {
                    "imp" => Expr::Imp(a, b),
                    "iff" => Expr::Iff(a, b),
                    _ => Expr::Xor(a, b),
                }
            }
            other => return Err(Error::FormulaParse(format!("unknown connective `{other}`"))),
        }
    };
    match tokens.get(*pos).map(String::as_str) {
        Some(")") => {
            *pos += 1;
            Ok(expr)
        }
        _ => Err(Error::FormulaParse("expected `)`".into())),
    }
}

/// A formula evaluated against the table of one cover context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventFormula {
    context: usize,
    expr: Expr,
}

impl EventFormula {
    /// Every atom must mention a measurement of cover context `context`.
    pub fn new(scenario: &MeasurementScenario, context: usize, expr: Expr) -> Result<Self> {
        check_scope(scenario, context, &expr)?;
        Ok(EventFormula { context, expr })
    }

    pub fn parse(scenario: &MeasurementScenario, context: usize, text: &str) -> Result<Self> {
        Self::new(scenario, context, Expr::parse(text, scenario)?)
    }

    pub fn context(&self) -> usize {
        self.context
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn holds_on(&self, section: &LocalSection) -> bool {
        self.expr
            .eval(&|m| section.value_of(m).expect("formula scoped to its context"))
    }

    pub fn holds_globally(&self, g: &GlobalAssignment) -> bool {
        self.expr.eval(&|m| g.value(m))
    }
}

fn check_scope(scenario: &MeasurementScenario, context: usize, expr: &Expr) -> Result<()> {
    let c = scenario.context_at(context)?;
    for m in expr.measurements() {
        if m >= scenario.measurement_count() {
            return Err(Error::MeasurementIndex(m));
        }
        if !c.contains(m) {
            return Err(Error::FormulaOutsideContext {
                measurement: scenario.measurement_name(m).to_string(),
                context,
            });
        }
    }
    Ok(())
}

/// Total weight of the sections of the formula's context that satisfy it.
pub fn event_probability(
    model: &EmpiricalModel<Rational>,
    formula: &EventFormula,
) -> Result<Rational> {
    check_scope(model.scenario(), formula.context, &formula.expr)?;
    let table = model.table(formula.context)?;
    Ok(table
        .weights()
        .iter()
        .filter(|(s, _)| formula.holds_on(s))
        .map(|(_, w)| w)
        .sum())
}

/// First global assignment, in canonical order, satisfying every formula.
pub fn jointly_satisfiable(
    formulas: &[EventFormula],
    scenario: &MeasurementScenario,
    bound: u64,
) -> Result<Option<GlobalAssignment>> {
    for f in formulas {
        check_scope(scenario, f.context, &f.expr)?;
    }
    Ok(enumerate_global_assignments(scenario, bound)?
        .into_iter()
        .find(|g| formulas.iter().all(|f| f.holds_globally(g))))
}

/// The inequality `sum p_i <= N - 1` for a jointly unsatisfiable family,
/// evaluated on a model.
#[derive(Debug, Clone, PartialEq)]
pub struct BellCertificate {
    pub formulas: Vec<EventFormula>,
    pub probabilities: Vec<Rational>,
    pub total: Rational,
    /// `N - 1`.
    pub bound: usize,
    /// `max(0, total - bound)`.
    pub violation: Rational,
}

pub fn bell_violation(
    model: &EmpiricalModel<Rational>,
    formulas: &[EventFormula],
    bound: u64,
) -> Result<BellCertificate> {
    check_bound(model.scenario(), bound)?;
    if let Some(err) = model.incompatibility_error() {
        return Err(err);
    }
    if let Some(g) = jointly_satisfiable(formulas, model.scenario(), bound)? {
        return Err(Error::SatisfiableFamily(g.label(model.scenario())));
    }
    let probabilities = formulas
        .iter()
        .map(|f| event_probability(model, f))
        .collect::<Result<Vec<_>>>()?;
    let total: Rational = probabilities.iter().sum();
    let n_minus_one = formulas.len().saturating_sub(1);
    let excess = &total - Rational::from_integer(n_minus_one.into());
    let violation = if excess > Rational::zero() {
        excess
    } else {
        Rational::zero()
    };
    debug_assert!(probabilities
        .iter()
        .all(|p| *p >= Rational::zero() && *p <= Rational::one()));
    Ok(BellCertificate {
        formulas: formulas.to_vec(),
        probabilities,
        total,
        bound: n_minus_one,
        violation,
    })
}
