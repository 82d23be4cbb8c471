//! Transition matrices against hand and brute-force sigma counts.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use txai::bounds::Bounds;
use txai::inference::{Antecedent, Mode, Model, Rule, RuleBase, TNorm};
use txai::synthetic::separable_problem;
use txai::trajectories::{
    cycle_rtms, eta, gamma, most_likely_trajectory, rtm, rtm_from_parts, FScalar, Observation, RuleTransitionMatrix,
};
use txai::TxaiError;

/// Morning, Daytime and Evening bases over the separable problem, `sizes[q]` rules each.
fn model(sizes: [usize; 3]) -> Model {
    let problem = separable_problem(600, 3);
    let all: Vec<usize> = (0..problem.samples.len()).collect();
    let system = problem.build_system(Mode::Txai, &all).unwrap();
    let levels = system.settings().zlevels.len();
    let bases = sizes
        .iter()
        .enumerate()
        .map(|(q, &u)| {
            let rules = (0..u)
                .map(|k| {
                    let ants = vec![Antecedent::new(k % 2, k % 3), Antecedent::new(1 - k % 2, (k + q) % 3)];
                    Rule::new(Some(q), ants, k % 2, vec![Bounds::point(0.5); levels]).unwrap()
                })
                .collect();
            RuleBase::new(Some(q), rules)
        })
        .collect();
    Model::new(system, problem.engine(), bases).unwrap()
}

fn obs(day: i64, interval: usize, rule: Option<usize>) -> Observation {
    Observation { day, interval, rule }
}

/// Mean of g over the interval's points, folded by product.
fn gamma_oracle(m: &Model, ants: &[Antecedent], q: usize) -> f64 {
    ants.iter()
        .map(|a| {
            let set = m.system.set(a.variable, a.label);
            let pts = &m.system.axis().interval(q).points;
            pts.iter().map(|&n| set.distribution().g()[n]).sum::<f64>() / pts.len() as f64
        })
        .product()
}

#[test]
fn hand_tallied_two_by_two() {
    let m = model([2, 2, 2]);
    let o = vec![
        obs(1, 0, Some(0)),
        obs(1, 0, Some(0)),
        obs(1, 1, Some(0)),
        obs(1, 1, Some(1)),
        obs(2, 0, Some(0)),
        obs(2, 0, Some(1)),
        obs(2, 1, Some(1)),
        obs(3, 0, Some(1)),
        obs(3, 1, None),
        obs(1, 2, Some(1)),
    ];
    let r = rtm(&m, 0, 1, &o, TNorm::Product, FScalar::Mean).unwrap();
    // Day 1 pairs {0} with {0,1}; day 2 pairs {0,1} with {1}; day 3 has no Daytime winner.
    assert_eq!(r.counts, vec![vec![1, 2], vec![0, 1]]);
    assert_eq!(r.total, 3);
    for c in 0..2 {
        for d in 0..2 {
            let gc = gamma_oracle(&m, &m.bases[0].rules[c].antecedents, 0);
            let gd = gamma_oracle(&m, &m.bases[1].rules[d].antecedents, 1);
            let want = gc * gd * r.counts[c][d] as f64 / 3.0;
            assert!((r.pi[c][d] - want).abs() < 1e-12);
        }
    }

    // Evening of day 1 pairs with Morning of day 2.
    let w = rtm(&m, 2, 0, &o, TNorm::Product, FScalar::Mean).unwrap();
    assert_eq!(w.counts, vec![vec![0, 0], vec![1, 1]]);
    assert_eq!(w.total, 3, "mornings of days 2, 3 and 4 hold 2, 1 and 0 winners");
}

#[test]
fn counts_match_brute_force_windows() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..200 {
        let sizes = [rng.gen_range(1..5), rng.gen_range(1..5), rng.gen_range(1..5)];
        let m = model(sizes);
        let o: Vec<Observation> = (0..rng.gen_range(1..80))
            .map(|_| {
                let q = rng.gen_range(0..3);
                let rule = rng.gen_bool(0.9).then(|| rng.gen_range(0..sizes[q]));
                obs(rng.gen_range(0..8), q, rule)
            })
            .collect();
        let mut seen: BTreeMap<(i64, usize), BTreeSet<usize>> = BTreeMap::new();
        for x in &o {
            if let Some(r) = x.rule {
                seen.entry((x.day, x.interval)).or_default().insert(r);
            }
        }
        let days: BTreeSet<i64> = o.iter().map(|x| x.day).collect();
        for (from, to) in [(0, 1), (1, 2), (2, 0)] {
            let next = i64::from(from == 2);
            let mut counts = vec![vec![0u64; sizes[to]]; sizes[from]];
            let mut total = 0;
            let empty = BTreeSet::new();
            for &day in &days {
                let a = seen.get(&(day, from)).unwrap_or(&empty);
                let b = seen.get(&(day + next, to)).unwrap_or(&empty);
                total += b.len() as u64;
                for &c in a {
                    for &d in b {
                        counts[c][d] += 1;
                    }
                }
            }
            match rtm(&m, from, to, &o, TNorm::Product, FScalar::Mean) {
                Err(TxaiError::UndefinedTransition { .. }) => assert_eq!(total, 0),
                Err(e) => panic!("{e}"),
                Ok(r) => {
                    assert_eq!(r.counts, counts);
                    assert_eq!(r.total, total);
                    for row in &r.counts {
                        assert!(row.iter().sum::<u64>() <= r.total);
                    }
                    for (c, row) in r.pi.iter().enumerate() {
                        for (d, &p) in row.iter().enumerate() {
                            assert!((0.0..=1.0).contains(&p));
                            let e = gamma_oracle(&m, &m.bases[from].rules[c].antecedents, from)
                                * gamma_oracle(&m, &m.bases[to].rules[d].antecedents, to);
                            assert!((p - e * counts[c][d] as f64 / total as f64).abs() < 1e-12);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn eta_is_the_product_of_independent_gammas() {
    let m = model([4, 4, 4]);
    for q in 0..3 {
        for c in &m.bases[q].rules {
            for d in &m.bases[(q + 1) % 3].rules {
                let gc = gamma(&c.antecedents, &m, q, TNorm::Product, FScalar::Mean).unwrap();
                let gd = gamma(&d.antecedents, &m, (q + 1) % 3, TNorm::Product, FScalar::Mean).unwrap();
                assert!((gc - gamma_oracle(&m, &c.antecedents, q)).abs() < 1e-12);
                assert!((eta(gc, gd) - gamma_oracle(&m, &c.antecedents, q) * gamma_oracle(&m, &d.antecedents, (q + 1) % 3)).abs() < 1e-12);
            }
        }
    }
}

fn chained(rng: &mut ChaCha8Rng, q: usize) -> Vec<RuleTransitionMatrix> {
    let sizes: Vec<usize> = (0..q).map(|_| rng.gen_range(1..6)).collect();
    (0..q)
        .map(|i| {
            let (u, v) = (sizes[i], sizes[(i + 1) % q]);
            RuleTransitionMatrix {
                from: i,
                to: (i + 1) % q,
                from_name: format!("I{i}"),
                to_name: format!("I{}", (i + 1) % q),
                pi: (0..u).map(|_| (0..v).map(|_| f64::from(rng.gen_range(0..6u8)) / 5.0).collect()).collect(),
                counts: vec![vec![0; v]; u],
                total: 1,
                gamma_from: vec![1.0; u],
                gamma_to: vec![1.0; v],
            }
        })
        .collect()
}

#[test]
fn trajectory_is_the_per_step_maximum() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..500 {
        let q = rng.gen_range(1..6);
        let mats = chained(&mut rng, q);
        let links = most_likely_trajectory(&mats).unwrap();
        assert_eq!(links.len(), q);
        for (m, l) in mats.iter().zip(&links) {
            // Scan every cell; the first maximum in row-major order wins.
            let mut best = (0, 0);
            for c in 0..m.pi.len() {
                for d in 0..m.pi[c].len() {
                    if m.pi[c][d] > m.pi[best.0][best.1] {
                        best = (c, d);
                    }
                }
            }
            assert_eq!((l.from_rule, l.to_rule), best);
            assert_eq!(l.possibility, m.pi[best.0][best.1]);
        }
    }
}

#[test]
fn single_rules_always_winning_give_certainty() {
    let pi = rtm_from_parts(&[1.0], &[1.0], &[vec![7]], 7).unwrap();
    assert_eq!(pi, vec![vec![1.0]]);
    let mats: Vec<RuleTransitionMatrix> = (0..3)
        .map(|i| RuleTransitionMatrix {
            from: i,
            to: (i + 1) % 3,
            from_name: String::new(),
            to_name: String::new(),
            pi: pi.clone(),
            counts: vec![vec![7]],
            total: 7,
            gamma_from: vec![1.0],
            gamma_to: vec![1.0],
        })
        .collect();
    let links = most_likely_trajectory(&mats).unwrap();
    assert!(links.iter().all(|l| l.from_rule == 0 && l.to_rule == 0 && l.possibility == 1.0));
}

#[test]
fn unchained_or_empty_matrices_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut mats = chained(&mut rng, 3);
    mats.swap(0, 1);
    assert!(most_likely_trajectory(&mats).is_err());
    let mut empty = chained(&mut rng, 1);
    empty[0].pi.clear();
    assert!(most_likely_trajectory(&empty).is_err());
}

#[test]
fn cycle_covers_every_consecutive_pair() {
    let m = model([2, 3, 1]);
    let o: Vec<Observation> = (0..4).flat_map(|d| (0..3).map(move |q| obs(d, q, Some(0)))).collect();
    let mats = cycle_rtms(&m, &o, TNorm::Product, FScalar::Mean).unwrap();
    let pairs: Vec<(usize, usize)> = mats.iter().map(|r| (r.from, r.to)).collect();
    assert_eq!(pairs, vec![(0, 1), (1, 2), (2, 0)]);
    assert_eq!((mats[2].rows(), mats[2].cols()), (1, 2));
}
