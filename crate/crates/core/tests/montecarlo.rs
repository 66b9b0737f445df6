use twochild_core::inference::probability;
use twochild_core::montecarlo::{
    estimate_conditional, expected_counts, simulate_counts, Estimate, SamplingMode, SimConfig,
};
use twochild_core::querylang::parse_event;
use twochild_core::{
    build_distribution, Child, EventExpr, FamilyOutcome, NameClass, Rational, Regime, Slot,
};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn ev(s: &str) -> EventExpr {
    parse_event(s).unwrap()
}

fn child(s: &str) -> Child {
    s.parse().unwrap()
}

/// Frequency check of one outcome against its exact probability.
fn within_4_sigma(count: u64, n: u64, p: f64) -> bool {
    let sigma = (p * (1.0 - p) / n as f64).sqrt();
    let freq = count as f64 / n as f64;
    if sigma == 0.0 {
        freq == p
    } else {
        ((freq - p) / sigma).abs() <= 4.0
    }
}

struct Tracked {
    regime: Regime,
    r: Rational,
    a: &'static str,
    b: &'static str,
}

fn tracked() -> Vec<Tracked> {
    vec![
        Tracked { regime: Regime::gender_only(), r: q(0, 1), a: "E.m & Y.m", b: "E.m + Y.m" },
        Tracked { regime: Regime::shared_names(), r: q(3, 10), a: "E.f & Y.f", b: "E.fN + Y.fN" },
        Tracked { regime: Regime::unique_names(), r: q(1, 50), a: "E.f & Y.f", b: "E.fN + Y.fN" },
    ]
}

fn estimate(t: &Tracked, n: u64, seed: u64) -> Estimate {
    let cfg = SimConfig::new(t.regime, t.r.clone(), n, seed).unwrap();
    estimate_conditional(&cfg, &ev(t.a), &ev(t.b), 4).unwrap()
}

#[test]
fn outcome_frequencies() {
    let n = 1_000_000;
    let cfg = SimConfig::new(Regime::shared_names(), q(1, 50), n, 11).unwrap();
    let counts = simulate_counts(&cfg, 4).unwrap();
    let named = child("fN");
    assert!(within_4_sigma(counts[&FamilyOutcome::new(named, named)], n, 0.0001));

    let cfg = SimConfig::new(Regime::gender_only(), q(0, 1), n, 12).unwrap();
    let counts = simulate_counts(&cfg, 4).unwrap();
    assert_eq!(counts.len(), 4);
    for c in counts.values() {
        assert!(within_4_sigma(*c, n, 0.25));
    }

    for seed in 0..5 {
        let cfg = SimConfig::new(Regime::unique_names(), q(2, 5), 100_000, seed).unwrap();
        let counts = simulate_counts(&cfg, 2).unwrap();
        assert_eq!(counts[&FamilyOutcome::new(named, named)], 0);
    }
}

#[test]
fn worker_count_does_not_change_results() {
    for t in tracked() {
        let cfg = SimConfig::new(t.regime, t.r.clone(), 200_003, 42).unwrap();
        let one = estimate_conditional(&cfg, &ev(t.a), &ev(t.b), 1).unwrap();
        for workers in [2, 3, 8, 13] {
            assert_eq!(estimate_conditional(&cfg, &ev(t.a), &ev(t.b), workers).unwrap(), one);
            assert_eq!(simulate_counts(&cfg, workers).unwrap(), simulate_counts(&cfg, 1).unwrap());
        }
        assert_eq!(expected_counts(&cfg, 1).unwrap(), expected_counts(&cfg, 8).unwrap());
    }
}

#[test]
fn calibration_over_independent_seeds() {
    for t in tracked() {
        let outside = (0..100)
            .filter(|&seed| estimate(&t, 100_000, seed).z_score.abs() > 1.96)
            .count();
        let fraction = outside as f64 / 100.0;
        assert!((0.01..=0.10).contains(&fraction), "{} | {}: {fraction}", t.a, t.b);
    }
}

#[test]
fn estimates_converge() {
    for t in tracked() {
        for n in [1_000, 10_000, 100_000, 1_000_000] {
            let e = estimate(&t, n, 7);
            let gap = (e.p_hat - e.analytic_decimal.parse::<f64>().unwrap()).abs();
            assert!(e.z_score.abs() <= 5.0, "{} | {} at n={n}: {e:?}", t.a, t.b);
            assert!(gap <= 5.0 * e.stderr + 1e-5, "n={n}: {e:?}");
        }
    }
}

#[test]
fn unique_name_sampler_keeps_slot_marginals() {
    let n = 1_000_000;
    for r in [q(1, 50), q(3, 10), q(49, 100)] {
        let cfg = SimConfig::new(Regime::unique_names(), r.clone(), n, 3).unwrap();
        let counts = simulate_counts(&cfg, 4).unwrap();
        let half_r = num_traits::ToPrimitive::to_f64(&(&r / q(2, 1))).unwrap();
        for slot in Slot::ALL {
            let named: u64 = counts
                .iter()
                .filter(|(o, _)| o.child(slot).name_class == NameClass::TheName)
                .map(|(_, c)| c)
                .sum();
            assert!(within_4_sigma(named, n, half_r), "{slot:?} at r={r}");
        }
    }
}

/// Discarding shared-name families renormalizes the shared-name table
/// without its duplicate-name cell; this recomputes that conditional from
/// the shared-name cells directly.
fn renormalized_oracle(r: &Rational) -> Rational {
    let d = build_distribution(Regime::shared_names());
    let (a, b) = (ev("E.f & Y.f"), ev("E.fN + Y.fN"));
    let duplicate = ev("E.fN & Y.fN");
    let at = |e: &EventExpr| probability(&d, e).unwrap().eval_at(r).unwrap();
    let num = at(&a.clone().and(b.clone())) - at(&a.and(b.clone()).and(duplicate.clone()));
    let den = at(&b.clone()) - at(&b.and(duplicate));
    num / den
}

#[test]
fn rejection_sampler_is_a_different_model() {
    let r = q(3, 10);
    let cfg = SimConfig::new(Regime::unique_names(), r.clone(), 1_000_000, 5)
        .unwrap()
        .with_mode(SamplingMode::Reject);
    let est = estimate_conditional(&cfg, &ev("E.f & Y.f"), &ev("E.fN + Y.fN"), 4).unwrap();
    // compared against the unique-name answer 1/2, it must fail
    assert_eq!(est.analytic, q(1, 2));
    assert!(!est.within_sigmas(4.0), "{est:?}");

    let oracle = renormalized_oracle(&r);
    assert_eq!(oracle, q(7, 17));
    let target = num_traits::ToPrimitive::to_f64(&oracle).unwrap();
    assert!(((est.p_hat - target) / est.stderr).abs() <= 4.0, "{est:?}");
}

#[test]
fn footnote_counts() {
    let cfg = SimConfig::new(Regime::shared_names(), q(1, 50), 10_000, 1).unwrap();
    let rep = expected_counts(&cfg, 2).unwrap();
    let expected = [
        [2500, 50, 2450, 5000],
        [50, 1, 49, 100],
        [2450, 49, 2401, 4900],
        [5000, 100, 4900, 10000],
    ];
    for (row, want) in rep.analytic.grid.iter().zip(expected) {
        assert_eq!(row.iter().map(|c| c.unwrap()).collect::<Vec<_>>(), want.to_vec());
    }
    assert_eq!(rep.empirical.grid[3][3], Some(10_000));
}
