//! Seeded model generators and brute-force oracles shared by the
//! integration tests. Nothing here calls the library's search or solver
//! code; oracles enumerate global assignments directly.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use contextuality::{
    rat, Context, Distribution, EmpiricalModel, LocalSection, MeasurementScenario, Rational,
};
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Scenario with measurements `m0..`, outcomes `0..`, and the given
/// contexts as index lists.
pub fn scenario(domains: &[usize], contexts: &[Vec<usize>]) -> MeasurementScenario {
    let names: Vec<String> = (0..domains.len()).map(|i| format!("m{i}")).collect();
    let outcomes = domains
        .iter()
        .map(|k| (0..*k).map(|o| o.to_string()).collect())
        .collect();
    let cover = contexts
        .iter()
        .map(|c| c.iter().map(|i| names[*i].clone()).collect())
        .collect();
    MeasurementScenario::new(names, outcomes, cover).expect("generated scenario is valid")
}

/// Random scenario whose global assignment space has at most `max_space`
/// elements.
pub fn random_scenario(
    rng: &mut TestRng,
    max_measurements: usize,
    max_outcomes: usize,
    max_space: usize,
) -> MeasurementScenario {
    loop {
        let n = rng.gen_range(2..=max_measurements);
        let domains: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=max_outcomes)).collect();
        if domains.iter().product::<usize>() > max_space {
            continue;
        }
        let k = rng.gen_range(1..=n + 1);
        let mut contexts: BTreeSet<Vec<usize>> = BTreeSet::new();
        for _ in 0..k {
            let size = rng.gen_range(1..=n.min(3));
            let mut c: Vec<usize> = (0..n).collect();
            c.shuffle(rng);
            c.truncate(size);
            c.sort();
            contexts.insert(c);
        }
        let mut contexts: Vec<Vec<usize>> = contexts.into_iter().collect();
        for m in 0..n {
            if !contexts.iter().any(|c| c.contains(&m)) {
                let i = rng.gen_range(0..contexts.len());
                contexts[i].push(m);
                contexts[i].sort();
            }
        }
        let unique: BTreeSet<Vec<usize>> = contexts.iter().cloned().collect();
        if unique.len() != contexts.len() {
            continue;
        }
        return scenario(&domains, &contexts);
    }
}

/// Random acyclic cover built as a join tree over at most `max_attributes`
/// attributes.
pub fn random_acyclic_scenario(rng: &mut TestRng, max_attributes: usize) -> MeasurementScenario {
    loop {
        let n = rng.gen_range(1..=max_attributes);
        let domains: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=3)).collect();
        let mut next = rng.gen_range(1..=n.min(3));
        let mut contexts: Vec<Vec<usize>> = vec![(0..next).collect()];
        while next < n {
            let parent = contexts[rng.gen_range(0..contexts.len())].clone();
            let mut shared: Vec<usize> = parent
                .iter()
                .copied()
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            let fresh = rng.gen_range(1..=(n - next).min(2));
            shared.extend(next..next + fresh);
            next += fresh;
            contexts.push(shared);
        }
        if rng.gen_bool(0.3) {
            let parent = contexts[rng.gen_range(0..contexts.len())].clone();
            let sub: Vec<usize> = parent
                .iter()
                .copied()
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            if !sub.is_empty() {
                contexts.push(sub);
            }
        }
        let unique: BTreeSet<Vec<usize>> = contexts.iter().cloned().collect();
        if unique.len() != contexts.len() {
            continue;
        }
        return scenario(&domains, &contexts);
    }
}

/// Every global assignment as a value vector, by odometer.
pub fn all_assignments(s: &MeasurementScenario) -> Vec<Vec<usize>> {
    let domains: Vec<usize> = s.outcome_domains().iter().map(Vec::len).collect();
    let mut out = vec![vec![]];
    for d in domains {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                (0..d).map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

pub fn restrict(values: &[usize], c: &Context) -> LocalSection {
    LocalSection::new(
        c.clone(),
        c.measurements().iter().map(|m| values[*m]).collect(),
    )
    .expect("restriction has matching length")
}

/// Every section of a context, by odometer over the context's domains.
pub fn sections(s: &MeasurementScenario, c: &Context) -> Vec<LocalSection> {
    let mut rows: Vec<Vec<usize>> = vec![vec![]];
    for m in c.measurements() {
        let d = s.outcomes(*m).len();
        rows = rows
            .into_iter()
            .flat_map(|prefix| {
                (0..d).map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    rows.into_iter()
        .map(|v| LocalSection::new(c.clone(), v).unwrap())
        .collect()
}

pub fn oracle_consistent(model: &EmpiricalModel<bool>) -> Vec<Vec<usize>> {
    let s = model.scenario();
    all_assignments(s)
        .into_iter()
        .filter(|g| {
            s.cover()
                .iter()
                .zip(model.tables())
                .all(|(c, t)| t.weight(&restrict(g, c)))
        })
        .collect()
}

pub fn oracle_strong(model: &EmpiricalModel<bool>) -> bool {
    oracle_consistent(model).is_empty()
}

pub fn oracle_logical(model: &EmpiricalModel<bool>) -> bool {
    let s = model.scenario();
    let consistent = oracle_consistent(model);
    s.cover().iter().zip(model.tables()).any(|(c, t)| {
        sections(s, c)
            .iter()
            .filter(|sec| t.weight(sec))
            .any(|sec| !consistent.iter().any(|g| &restrict(g, c) == sec))
    })
}

/// Marginals of a global (possibly signed) weighting, summed directly.
pub fn marginal_model(
    s: &MeasurementScenario,
    global: &[(Vec<usize>, Rational)],
) -> EmpiricalModel<Rational> {
    let tables = s
        .cover()
        .iter()
        .map(|c| {
            let mut sums: BTreeMap<LocalSection, Rational> = BTreeMap::new();
            for (g, w) in global {
                *sums.entry(restrict(g, c)).or_insert_with(Rational::zero) += w;
            }
            let weights = sums.into_iter().filter(|(_, w)| !w.is_zero());
            Distribution::new(s, c.clone(), weights).expect("marginal is a distribution")
        })
        .collect();
    EmpiricalModel::new(s.clone(), tables).expect("marginals form a model")
}

pub fn same_tables(a: &EmpiricalModel<Rational>, b: &EmpiricalModel<Rational>) -> bool {
    let s = a.scenario();
    s.cover().iter().enumerate().all(|(i, c)| {
        sections(s, c)
            .iter()
            .all(|sec| a.tables()[i].weight(sec) == b.tables()[i].weight(sec))
    })
}

/// Random probability distribution over a few global assignments.
pub fn random_global(
    rng: &mut TestRng,
    s: &MeasurementScenario,
    max_support: usize,
) -> Vec<(Vec<usize>, Rational)> {
    let mut all = all_assignments(s);
    all.shuffle(rng);
    let k = rng.gen_range(1..=max_support.min(all.len()));
    let weights: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=6)).collect();
    let total: i64 = weights.iter().sum();
    all.into_iter()
        .take(k)
        .zip(weights)
        .map(|(g, w)| (g, rat(w, total)))
        .collect()
}

pub fn random_noncontextual(
    rng: &mut TestRng,
    s: &MeasurementScenario,
) -> EmpiricalModel<Rational> {
    let global = random_global(rng, s, 4);
    marginal_model(s, &global)
}

pub fn random_boolean(rng: &mut TestRng, s: &MeasurementScenario) -> EmpiricalModel<bool> {
    let tables = s
        .cover()
        .iter()
        .map(|c| {
            let all = sections(s, c);
            loop {
                let chosen: Vec<(LocalSection, bool)> = all
                    .iter()
                    .filter(|_| rng.gen_bool(0.6))
                    .map(|sec| (sec.clone(), true))
                    .collect();
                if !chosen.is_empty() {
                    return Distribution::new(s, c.clone(), chosen).unwrap();
                }
            }
        })
        .collect();
    EmpiricalModel::new(s.clone(), tables).unwrap()
}

fn mix(
    lambda: &Rational,
    a: &EmpiricalModel<Rational>,
    b: &EmpiricalModel<Rational>,
) -> EmpiricalModel<Rational> {
    let s = a.scenario();
    let tables = s
        .cover()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let weights = sections(s, c).into_iter().map(|sec| {
                let w = lambda * a.tables()[i].weight(&sec)
                    + (Rational::one() - lambda) * b.tables()[i].weight(&sec);
                (sec, w)
            });
            Distribution::new(s, c.clone(), weights).unwrap()
        })
        .collect();
    EmpiricalModel::new(s.clone(), tables).unwrap()
}

fn table_rows(s: &MeasurementScenario, rows: &[[i64; 4]], denom: i64) -> EmpiricalModel<Rational> {
    let tables = s
        .cover()
        .iter()
        .zip(rows)
        .map(|(c, r)| {
            let w = sections(s, c)
                .into_iter()
                .zip(r.iter().map(|n| rat(*n, denom)));
            Distribution::new(s, c.clone(), w).unwrap()
        })
        .collect();
    EmpiricalModel::new(s.clone(), tables).unwrap()
}

/// Bell scenario: correlated on three rows, anticorrelated on the last.
pub fn pr_box() -> EmpiricalModel<Rational> {
    let s = contextuality::fixtures::bell_scenario();
    table_rows(
        &s,
        &[[1, 0, 0, 1], [1, 0, 0, 1], [1, 0, 0, 1], [0, 1, 1, 0]],
        2,
    )
}

/// Three binary measurements, each pair perfectly anticorrelated.
pub fn anticorrelated_triangle() -> EmpiricalModel<Rational> {
    let s = scenario(&[2, 2, 2], &[vec![0, 1], vec![1, 2], vec![0, 2]]);
    table_rows(&s, &[[0, 1, 1, 0], [0, 1, 1, 0], [0, 1, 1, 0]], 2)
}

/// Compatible rational models, contextual or not.
pub fn random_compatible(rng: &mut TestRng) -> EmpiricalModel<Rational> {
    match rng.gen_range(0..3) {
        0 => {
            let s = random_scenario(rng, 4, 3, 16);
            random_noncontextual(rng, &s)
        }
        1 => {
            let pr = pr_box();
            let local = random_noncontextual(rng, pr.scenario());
            mix(&rat(rng.gen_range(0..=8), 8), &pr, &local)
        }
        _ => {
            let tri = anticorrelated_triangle();
            let local = random_noncontextual(rng, tri.scenario());
            mix(&rat(rng.gen_range(0..=8), 8), &tri, &local)
        }
    }
}

/// Random binary cover with `m` measurements and up to `max_contexts`
/// contexts.
pub fn random_binary_cover(rng: &mut TestRng, max_measurements: usize) -> MeasurementScenario {
    loop {
        let s = random_scenario(rng, max_measurements, 2, 1 << max_measurements);
        if s.outcome_domains().iter().all(|d| d.len() == 2) {
            return s;
        }
    }
}

/// Brute-force KS assignments: exactly one measurement per context set to 1.
pub fn oracle_ks_assignments(cover: &MeasurementScenario) -> Vec<Vec<usize>> {
    all_assignments(cover)
        .into_iter()
        .filter(|g| {
            cover
                .cover()
                .iter()
                .all(|c| c.measurements().iter().filter(|m| g[**m] == 1).count() == 1)
        })
        .collect()
}

/// Exact Gaussian elimination: the unique solution of `a x = b` when the
/// columns of `a` are independent and the system is consistent.
fn solve_independent(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut r = r.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let mut row = 0;
    for col in 0..cols {
        let pivot = (row..rows).find(|r| !m[*r][col].is_zero())?;
        m.swap(row, pivot);
        let p = m[row][col].clone();
        for x in m[row].iter_mut() {
            *x /= &p;
        }
        let pivot_row = m[row].clone();
        for (r, target) in m.iter_mut().enumerate() {
            if r != row && !target[col].is_zero() {
                let f = target[col].clone();
                for (x, p) in target.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        row += 1;
    }
    if m[row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    Some((0..cols).map(|j| m[j][cols].clone()).collect())
}

/// Decides whether a nonnegative global distribution reproduces `model`
/// by trying every set of columns as a basis: a feasible system has a
/// basic feasible solution supported on independent columns.
pub fn oracle_global_exists(model: &EmpiricalModel<Rational>) -> bool {
    let s = model.scenario();
    let columns = all_assignments(s);
    let mut a: Vec<Vec<Rational>> = Vec::new();
    let mut b: Vec<Rational> = Vec::new();
    for (c, t) in s.cover().iter().zip(model.tables()) {
        for sec in sections(s, c) {
            a.push(
                columns
                    .iter()
                    .map(|g| {
                        if restrict(g, c) == sec {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect(),
            );
            b.push(t.weight(&sec));
        }
    }
    assert!(columns.len() <= 12, "oracle limited to small scenarios");
    for mask in 1u32..(1 << columns.len()) {
        let chosen: Vec<usize> = (0..columns.len()).filter(|j| mask >> j & 1 == 1).collect();
        if chosen.len() > a.len() {
            continue;
        }
        let sub: Vec<Vec<Rational>> = a
            .iter()
            .map(|r| chosen.iter().map(|j| r[*j].clone()).collect())
            .collect();
        if let Some(x) = solve_independent(&sub, &b) {
            if x.iter().all(|v| !v.is_negative()) {
                return true;
            }
        }
    }
    false
}
