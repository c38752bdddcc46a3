//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the test
//! fails if any criterion does. Run with `--nocapture` to see the table.

use std::time::{Duration, Instant};

use trapfermi::verify::{
    check_catalan, check_correction_moments, check_density_oracles, check_edge,
    check_exact_moments, check_low_moments, check_mu_interpolation, check_ode_residuals,
    check_real_k, check_reflection_meixner, check_stieltjes, CheckOutcome, Tolerances,
    REAL_K_SAMPLES,
};

const TOL: Tolerances = Tolerances {
    density_oracle_rel: 1e-10,
    normalization_rel: 1e-8,
    density_ode: 1e-8,
    fourier_ode: 1e-9,
    integro: 1e-6,
    tail_transform: 1e-10,
    scaled_ode: 1e-8,
    operator: 1e-12,
    meixner: 1e-10,
    edge_ode: 1e-6,
    real_k_rel: 1e-6,
};

struct Criterion {
    id: u32,
    budget: Option<Duration>,
    run: fn() -> CheckOutcome,
}

fn criteria() -> Vec<Criterion> {
    let secs = |s| Some(Duration::from_secs(s));
    vec![
        Criterion {
            id: 1,
            budget: secs(60),
            run: || check_exact_moments(&[1, 2, 3, 4, 5, 6], 20, 30),
        },
        Criterion {
            id: 2,
            budget: secs(30),
            run: || check_mu_interpolation(&[1, 2, 3, 4, 5], 16, &[6, 10, 16]),
        },
        Criterion {
            id: 3,
            budget: None,
            run: || check_catalan(20),
        },
        Criterion {
            id: 4,
            budget: None,
            run: || check_low_moments(&[1, 2, 3, 4, 5, 6], 12),
        },
        Criterion {
            id: 5,
            budget: None,
            run: || check_density_oracles(&[1, 2, 3], 10, 25, &TOL),
        },
        Criterion {
            id: 6,
            budget: None,
            run: || check_ode_residuals(&[1, 2, 3], 10, 25, &TOL),
        },
        Criterion {
            id: 7,
            budget: None,
            run: || check_reflection_meixner(&[1, 2, 3, 4], 15, 8, 50, &TOL),
        },
        Criterion {
            id: 8,
            budget: None,
            run: || check_correction_moments(14),
        },
        Criterion {
            id: 9,
            budget: None,
            run: || check_stieltjes(14),
        },
        Criterion {
            id: 10,
            budget: secs(120),
            run: || {
                let s: Vec<f64> = (0..21).map(|i| -5.0 + 0.4 * i as f64).collect();
                check_edge(&[1, 2, 3], &s, &[1, 2], &[-1.0, 0.0, 1.0], &[8, 16], &TOL)
            },
        },
        Criterion {
            id: 11,
            budget: None,
            run: || check_real_k(&[1, 2, 3], 8, &REAL_K_SAMPLES, &TOL),
        },
    ]
}

#[test]
fn acceptance_criteria() {
    let mut failures = Vec::new();
    for c in criteria() {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let in_budget = c.budget.is_none_or(|b| elapsed <= b);
        let passed = outcome.passed && in_budget;
        let budget = c
            .budget
            .map_or(String::new(), |b| format!(", budget {}s", b.as_secs()));
        println!(
            "{} {:>2} {}: {} [{:.2}s{budget}]",
            if passed { "PASS" } else { "FAIL" },
            c.id,
            outcome.name,
            outcome.detail,
            elapsed.as_secs_f64()
        );
        if !passed {
            failures.push(c.id);
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
