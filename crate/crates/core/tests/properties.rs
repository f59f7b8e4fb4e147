mod common;

use common::*;
use contextuality::{
    bell_assignment, bell_state, bell_violation, classify, consistent_global_assignments,
    divisor_criterion, event_probability, find_global_distribution, find_signed_global_measure,
    is_acyclic, is_ks_contextual, is_logically_contextual, is_strongly_contextual,
    jointly_satisfiable, ks_model, model_to_instance, natural_join, project,
    quantum_empirical_model, rat, universal_relation, vorobev_extend, AnyModel, ComplexVector,
    Context, DivisorVerdict, EquatorialMeasurement, EventFormula, Expr, MeasurementAssignment,
    Qubit, Rational, DEFAULT_BOUND,
};
use num_complex::Complex64;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

fn random_subcontext(rng: &mut TestRng, c: &Context) -> Context {
    Context::new(
        c.measurements()
            .iter()
            .copied()
            .filter(|_| rng.gen_bool(0.5)),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn marginalisation_is_functorial(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_scenario(&mut r, 4, 3, 36);
        let model = random_noncontextual(&mut r, &s);
        for t in model.tables() {
            let mid = random_subcontext(&mut r, t.context());
            let low = random_subcontext(&mut r, &mid);
            let two_step = t.marginalise(&mid).unwrap().marginalise(&low).unwrap();
            prop_assert_eq!(two_step, t.marginalise(&low).unwrap());
            prop_assert_eq!(t.marginalise(t.context()).unwrap(), t.clone());
        }
    }

    #[test]
    fn marginals_stay_normalised(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_scenario(&mut r, 4, 3, 36);
        let model = random_noncontextual(&mut r, &s);
        for t in model.tables() {
            let sub = random_subcontext(&mut r, t.context());
            prop_assert_eq!(t.marginalise(&sub).unwrap().total(), Rational::one());
        }
    }

    #[test]
    fn boolean_marginal_is_projection(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_scenario(&mut r, 4, 3, 36);
        let model = random_boolean(&mut r, &s);
        for t in model.tables() {
            let sub = random_subcontext(&mut r, t.context());
            let marginal: Vec<_> = t.marginalise(&sub).unwrap().support().cloned().collect();
            let mut proj: Vec<_> = t.support().map(|sec| sec.restrict(&sub).unwrap()).collect();
            proj.sort();
            proj.dedup();
            prop_assert_eq!(marginal, proj);
        }
    }

    #[test]
    fn support_of_compatible_model_is_compatible(seed in any::<u64>()) {
        let mut r = rng(seed);
        let model = random_compatible(&mut r);
        prop_assert!(model.is_compatible().is_compatible());
        prop_assert!(model.support().is_compatible().is_compatible());
    }

    #[test]
    fn hierarchy_implications(seed in any::<u64>()) {
        let mut r = rng(seed);
        let model = random_compatible(&mut r);
        let report = classify(&AnyModel::Probability(model), DEFAULT_BOUND).unwrap();
        if report.strongly_contextual {
            prop_assert!(report.logically_contextual);
        }
        if report.logically_contextual {
            prop_assert_eq!(report.probabilistically_contextual, Some(true));
        }
    }

    #[test]
    fn search_matches_brute_force(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_scenario(&mut r, 4, 3, 36);
        let model = random_boolean(&mut r, &s);
        let found: Vec<Vec<usize>> = consistent_global_assignments(&model, DEFAULT_BOUND)
            .unwrap()
            .iter()
            .map(|g| g.values().to_vec())
            .collect();
        let mut expected = oracle_consistent(&model);
        expected.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
        prop_assert_eq!(found, expected);
        prop_assert_eq!(is_strongly_contextual(&model), oracle_strong(&model));
        prop_assert_eq!(is_logically_contextual(&model).contextual, oracle_logical(&model));
    }

    #[test]
    fn consistent_assignments_are_the_join(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_scenario(&mut r, 4, 3, 36);
        let model = random_boolean(&mut r, &s);
        let join = natural_join(&model_to_instance(&model));
        let full = Context::new(0..s.measurement_count());
        let from_search: Vec<_> = consistent_global_assignments(&model, DEFAULT_BOUND)
            .unwrap()
            .iter()
            .map(|g| g.restrict(&full))
            .collect();
        let joined: Vec<_> = join.tuples().iter().cloned().collect();
        prop_assert_eq!(join.attributes(), &full);
        prop_assert_eq!(joined, from_search);
        for (c, t) in s.cover().iter().zip(model.tables()) {
            let p = project(&join, c).unwrap();
            prop_assert!(p.tuples().iter().all(|sec| t.weight(sec)));
        }
    }

    #[test]
    fn global_distribution_is_sound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let model = random_compatible(&mut r);
        if let Some(d) = find_global_distribution(&model, DEFAULT_BOUND).unwrap() {
            let global: Vec<(Vec<usize>, Rational)> =
                d.weights().iter().map(|(g, w)| (g.values().to_vec(), w.clone())).collect();
            prop_assert!(global.iter().all(|(_, w)| *w > Rational::zero()));
            prop_assert!(same_tables(&marginal_model(model.scenario(), &global), &model));
        }
    }

    #[test]
    fn signed_measure_reproduces_compatible_models(seed in any::<u64>()) {
        let mut r = rng(seed);
        let model = random_compatible(&mut r);
        let d = find_signed_global_measure(&model, DEFAULT_BOUND).unwrap().expect("signed measure");
        let global: Vec<(Vec<usize>, Rational)> =
            d.weights().iter().map(|(g, w)| (g.values().to_vec(), w.clone())).collect();
        prop_assert!(same_tables(&marginal_model(model.scenario(), &global), &model));
    }

    #[test]
    fn noncontextual_models_never_violate(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_scenario(&mut r, 3, 2, 8);
        let model = random_noncontextual(&mut r, &s);
        let formulas = random_formulas(&mut r, &s);
        if jointly_satisfiable(&formulas, &s, DEFAULT_BOUND).unwrap().is_none() {
            let cert = bell_violation(&model, &formulas, DEFAULT_BOUND).unwrap();
            prop_assert_eq!(cert.violation, Rational::zero());
        }
    }

    #[test]
    fn event_probability_is_monotone_and_additive(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_scenario(&mut r, 4, 3, 36);
        let model = random_noncontextual(&mut r, &s);
        let ci = r.gen_range(0..s.cover().len());
        let phi = random_expr(&mut r, &s, &s.cover()[ci], 3);
        let psi = random_expr(&mut r, &s, &s.cover()[ci], 3);
        let ev = |e: Expr| event_probability(&model, &EventFormula::new(&s, ci, e).unwrap()).unwrap();
        let both = ev(Expr::And(vec![phi.clone(), psi.clone()]));
        let either = ev(Expr::Or(vec![phi.clone(), psi.clone()]));
        prop_assert!(both <= ev(phi.clone()));
        prop_assert!(ev(phi.clone()) <= either);
        let p = ev(phi.clone());
        let not_p = ev(Expr::Not(Box::new(phi.clone())));
        prop_assert_eq!(p.clone() + not_p, Rational::one());
        let split = ev(Expr::And(vec![phi.clone(), psi.clone()]))
            + ev(Expr::And(vec![phi.clone(), Expr::Not(Box::new(psi.clone()))]));
        prop_assert_eq!(split, p.clone());
        let direct: Rational = model.tables()[ci]
            .weights()
            .iter()
            .filter(|(sec, _)| phi.eval(&|m| sec.value_of(m).unwrap()))
            .map(|(_, w)| w.clone())
            .sum();
        prop_assert_eq!(direct, p);
    }

    #[test]
    fn lp_agrees_with_vertex_enumeration(seed in any::<u64>()) {
        let mut r = rng(seed);
        let model = if r.gen_bool(0.5) {
            let s = random_scenario(&mut r, 3, 2, 8);
            random_noncontextual(&mut r, &s)
        } else {
            let tri = anticorrelated_triangle();
            let local = random_noncontextual(&mut r, tri.scenario());
            let lambda = rat(r.gen_range(0..=4), 4);
            mix_models(&lambda, &tri, &local)
        };
        let found = find_global_distribution(&model, DEFAULT_BOUND).unwrap().is_some();
        prop_assert_eq!(found, oracle_global_exists(&model));
    }

    #[test]
    fn vorobev_extension_reproduces_tables(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_acyclic_scenario(&mut r, 6);
        prop_assert!(is_acyclic(s.cover()).acyclic);
        let model = random_noncontextual(&mut r, &s);
        let d = vorobev_extend(&model).unwrap();
        let global: Vec<(Vec<usize>, Rational)> =
            d.weights().iter().map(|(g, w)| (g.values().to_vec(), w.clone())).collect();
        prop_assert!(same_tables(&marginal_model(&s, &global), &model));
    }

    #[test]
    fn ks_divisor_criterion_is_sound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let cover = random_binary_cover(&mut r, 7);
        let assignments = oracle_ks_assignments(&cover);
        prop_assert_eq!(is_ks_contextual(&cover, DEFAULT_BOUND).unwrap(), assignments.is_empty());
        if let DivisorVerdict::ContextualByCriterion { .. } = divisor_criterion(&cover) {
            prop_assert!(assignments.is_empty());
        }
        for g in &assignments {
            let weighted: usize = (0..cover.measurement_count()).map(|m| cover.degree(m) * g[m]).sum();
            prop_assert_eq!(weighted, cover.cover().len());
        }
        let model = ks_model(&cover).unwrap();
        prop_assert_eq!(is_strongly_contextual(&model), assignments.is_empty());
        prop_assert_eq!(universal_relation(&model_to_instance(&model)).is_none(), is_logically_contextual(&model).contextual);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn quantum_models_do_not_signal(seed in any::<u64>()) {
        let mut r = rng(seed);
        let amps: Vec<Complex64> = (0..4)
            .map(|_| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
            .collect();
        let state = ComplexVector::normalised(amps).unwrap();
        let angles: Vec<f64> = (0..4).map(|_| r.gen_range(0.0..std::f64::consts::TAU)).collect();
        let assignment = bell_assignment(angles[0], angles[1], angles[2], angles[3]).unwrap();
        let s = contextuality::fixtures::bell_scenario();
        let table = quantum_empirical_model(&state, &assignment, &s).unwrap();
        for row in &table.raw {
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        // rows {a1,b1} {a1,b2} share a1; {a2,b1} {a2,b2} share a2; columns (0,0) (1,0) (0,1) (1,1)
        let first = |row: &Vec<f64>| [row[0] + row[2], row[1] + row[3]];
        let second = |row: &Vec<f64>| [row[0] + row[1], row[2] + row[3]];
        let close = |x: [f64; 2], y: [f64; 2]| (x[0] - y[0]).abs() < 1e-9 && (x[1] - y[1]).abs() < 1e-9;
        prop_assert!(close(first(&table.raw[0]), first(&table.raw[1])));
        prop_assert!(close(first(&table.raw[2]), first(&table.raw[3])));
        prop_assert!(close(second(&table.raw[0]), second(&table.raw[2])));
        prop_assert!(close(second(&table.raw[1]), second(&table.raw[3])));
    }

    #[test]
    fn quantum_models_at_snapping_angles_are_exactly_compatible(seed in any::<u64>()) {
        let mut r = rng(seed);
        let step = if r.gen_bool(0.5) { std::f64::consts::FRAC_PI_3 } else { std::f64::consts::FRAC_PI_2 };
        let angles: Vec<f64> = (0..4).map(|_| step * r.gen_range(0..12) as f64).collect();
        let state = match r.gen_range(0..3) {
            0 => bell_state(),
            1 => contextuality::up_up_state(),
            _ => ComplexVector::normalised(vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(-1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ]).unwrap(),
        };
        let assignment = bell_assignment(angles[0], angles[1], angles[2], angles[3]).unwrap();
        let table = quantum_empirical_model(&state, &assignment, &contextuality::fixtures::bell_scenario()).unwrap();
        prop_assert!(table.model.is_compatible().is_compatible());
    }

    #[test]
    fn bell_state_closed_form(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (pa, pb) = (r.gen_range(-10.0..10.0), r.gen_range(-10.0..10.0));
        let assignment = MeasurementAssignment::new()
            .with("x", Qubit::First, EquatorialMeasurement::new(pa).unwrap())
            .with("y", Qubit::Second, EquatorialMeasurement::new(pb).unwrap());
        let s = contextuality::MeasurementScenario::binary(&["x", "y"], &[&["x", "y"]]).unwrap();
        let table = quantum_empirical_model(&bell_state(), &assignment, &s).unwrap();
        let same = (2.0 + 2.0 * (pa + pb).cos()) / 8.0;
        let diff = (2.0 - 2.0 * (pa + pb).cos()) / 8.0;
        let row = &table.raw[0];
        for (got, want) in row.iter().zip([same, diff, diff, same]) {
            prop_assert!((got - want).abs() < 1e-9);
        }
    }
}

fn mix_models(
    lambda: &Rational,
    a: &contextuality::EmpiricalModel<Rational>,
    b: &contextuality::EmpiricalModel<Rational>,
) -> contextuality::EmpiricalModel<Rational> {
    let s = a.scenario();
    let tables = s
        .cover()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let w = sections(s, c).into_iter().map(|sec| {
                let v = lambda * a.tables()[i].weight(&sec)
                    + (Rational::one() - lambda) * b.tables()[i].weight(&sec);
                (sec, v)
            });
            contextuality::Distribution::new(s, c.clone(), w).unwrap()
        })
        .collect();
    contextuality::EmpiricalModel::new(s.clone(), tables).unwrap()
}

fn random_expr(
    r: &mut TestRng,
    s: &contextuality::MeasurementScenario,
    c: &Context,
    depth: u32,
) -> Expr {
    let leaf = depth == 0 || r.gen_bool(0.3);
    if leaf {
        let m = c.measurements()[r.gen_range(0..c.len())];
        let o = r.gen_range(0..s.outcomes(m).len());
        return Expr::Atom {
            measurement: m,
            outcome: o,
        };
    }
    let op = r.gen_range(0..5);
    let mut sub = || Box::new(random_expr(r, s, c, depth - 1));
    match op {
        0 => Expr::Not(sub()),
        1 => Expr::And(vec![*sub(), *sub()]),
        2 => Expr::Or(vec![*sub(), *sub()]),
        3 => Expr::Iff(sub(), sub()),
        _ => Expr::Xor(sub(), sub()),
    }
}

fn random_formulas(r: &mut TestRng, s: &contextuality::MeasurementScenario) -> Vec<EventFormula> {
    let n = r.gen_range(1..=4);
    (0..n)
        .map(|_| {
            let ci = r.gen_range(0..s.cover().len());
            let e = random_expr(r, s, &s.cover()[ci], 2);
            EventFormula::new(s, ci, e).unwrap()
        })
        .collect()
}
