mod common;

use common::{deferred_channel, random_density, rng};
use proptest::prelude::*;
use seqmbqc::channels::{EntanglerModel, NoiseSpec, Scenario};
use seqmbqc::circuits::*;
use seqmbqc::metrics::{eval_table_formula, logical_infidelity, Gate};
use std::f64::consts::PI;

fn all_circuits(noise: &NoiseSpec<f64>, alpha: f64) -> Vec<(&'static str, Circuit<f64>)> {
    vec![
        ("standard_uz", standard_uz_circuit(alpha, noise).unwrap()),
        ("sequential_uz", sequential_uz_circuit(alpha, noise).unwrap()),
        ("standard_cx", standard_cx_circuit(noise).unwrap()),
        ("sequential_cx", sequential_cx_circuit(noise).unwrap()),
        ("standard_euler", euler_chain_circuit(EulerModel::Standard, alpha, 0.7, -0.2, noise).unwrap()),
        ("sequential_euler", euler_chain_circuit(EulerModel::Sequential, alpha, 0.7, -0.2, noise).unwrap()),
    ]
}

#[test]
fn branch_sum_matches_deferred_measurement() {
    for noise in [
        NoiseSpec::depolarizing(0.3, 0.2, Scenario::Perfect).unwrap(),
        NoiseSpec::misfiring(0.25, 0.4, Scenario::Imperfect).unwrap(),
        NoiseSpec::misfiring(0.6, 0.1, Scenario::Perfect).unwrap(),
    ] {
        for (name, c) in all_circuits(&noise, 0.9) {
            let direct = c.superoperator().unwrap();
            let oracle = deferred_channel(&c);
            assert!(direct.max_abs_diff(&oracle) < 1e-10, "{name}: {:e}", direct.max_abs_diff(&oracle));
        }
    }
}

#[test]
fn euler_chain_composes_single_steps() {
    let alpha = 0.4;
    let single = |model: EulerModel, a: f64, n: &NoiseSpec<f64>| match model {
        EulerModel::Standard => standard_uz(a, n).unwrap().noisy,
        EulerModel::Sequential => sequential_uz(a, n).unwrap().noisy,
    };
    let points = [
        NoiseSpec::noiseless(),
        NoiseSpec::depolarizing(0.2, 0.1, Scenario::Imperfect).unwrap(),
        NoiseSpec::misfiring(0.1, 0.1, Scenario::Perfect).unwrap(),
        NoiseSpec::misfiring(0.0, 0.3, Scenario::Perfect).unwrap(),
    ];
    for n in &points {
        for model in [EulerModel::Standard, EulerModel::Sequential] {
            let chain = euler_chain(model, alpha, 0.0, 0.0, n).unwrap().noisy;
            let first = single(model, alpha, n);
            let later = single(model, 0.0, n);
            let composed = later.compose(&later.compose(&first).unwrap()).unwrap();
            let diff = chain.max_abs_diff(&composed);
            if model == EulerModel::Standard && n.model == EntanglerModel::Misfiring && n.strength > 0.0 {
                // The standard cluster is built before any measurement, so a
                // misfired CZ meets an uncorrected by-product and the chain
                // is not a product of independent teleports.
                assert!(diff > 1e-3, "{diff:e}");
            } else {
                assert!(diff < 1e-12, "{model:?} {n:?}: {diff:e}");
            }
        }
    }
}

#[test]
fn euler_chain_is_at_least_as_bad_as_each_step() {
    let n = NoiseSpec::misfiring(0.1, 0.1, Scenario::Perfect).unwrap();
    let (a, b, g) = (0.3, 0.7, -0.2);
    for model in [EulerModel::Standard, EulerModel::Sequential] {
        let chain = logical_infidelity(&euler_chain(model, a, b, g, &n).unwrap()).unwrap();
        for angle in [a, b, g] {
            let step = match model {
                EulerModel::Standard => standard_uz(angle, &n),
                EulerModel::Sequential => sequential_uz(angle, &n),
            };
            assert!(chain >= logical_infidelity(&step.unwrap()).unwrap());
        }
    }
}

#[test]
fn specific_table_points() {
    let g = |c: &LogicalChannel<f64>| logical_infidelity(c).unwrap();
    let n = NoiseSpec::depolarizing(0.2, 0.5, Scenario::Perfect).unwrap();
    let d = g(&sequential_uz(PI / 4.0, &n).unwrap()) - g(&standard_uz(PI / 4.0, &n).unwrap());
    assert!((d + 1.0 / 15.0).abs() < 1e-12);
    let n = NoiseSpec::misfiring(0.3, 0.0, Scenario::Perfect).unwrap();
    let d = g(&sequential_uz(PI / 4.0, &n).unwrap()) - g(&standard_uz(PI / 4.0, &n).unwrap());
    assert!((d + 0.05).abs() < 1e-12);
    let n = NoiseSpec::depolarizing(0.5, 0.0, Scenario::Perfect).unwrap();
    let d = g(&sequential_cx(&n).unwrap()) - g(&standard_cx(&n).unwrap());
    assert!((d - 0.00625).abs() < 1e-12);
    let n = NoiseSpec::misfiring(0.5, 0.0, Scenario::Imperfect).unwrap();
    let d = g(&sequential_cx(&n).unwrap()) - g(&standard_cx(&n).unwrap());
    assert!((d - 0.1125).abs() < 1e-12);
}

#[test]
fn uz_difference_is_even_and_pi_periodic() {
    let diff = |alpha: f64, n: &NoiseSpec<f64>| {
        logical_infidelity(&sequential_uz(alpha, n).unwrap()).unwrap()
            - logical_infidelity(&standard_uz(alpha, n).unwrap()).unwrap()
    };
    for n in [
        NoiseSpec::depolarizing(0.3, 0.6, Scenario::Perfect).unwrap(),
        NoiseSpec::misfiring(0.4, 0.2, Scenario::Perfect).unwrap(),
        NoiseSpec::misfiring(0.7, 0.5, Scenario::Imperfect).unwrap(),
    ] {
        for k in 0..9 {
            let a = k as f64 * PI / 8.0;
            let base = diff(a, &n);
            assert!((base - diff(-a, &n)).abs() < 1e-12);
            assert!((base - diff(a + PI, &n)).abs() < 1e-12);
            let f = eval_table_formula(Gate::Uz, n.model, n.scenario, n.eta, n.strength, a);
            assert!((base - f).abs() < 1e-12);
        }
    }
}

fn scenario() -> impl Strategy<Value = Scenario> {
    prop_oneof![Just(Scenario::Perfect), Just(Scenario::Imperfect)]
}

fn model() -> impl Strategy<Value = EntanglerModel> {
    prop_oneof![Just(EntanglerModel::Depolarizing), Just(EntanglerModel::Misfiring)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn circuits_are_cptp_with_unit_branch_mass(
        m in model(), sc in scenario(), s in 0.0..=1.0f64, eta in 0.0..=1.0f64, alpha in -PI..PI, seed in 0u64..1000,
    ) {
        let noise = NoiseSpec::new(m, s, eta, sc).unwrap();
        let mut r = rng(seed);
        for (name, c) in all_circuits(&noise, alpha) {
            let map = c.superoperator().unwrap();
            prop_assert!(map.is_cptp(), "{}", name);
            let rho = random_density(&mut r, 1 << c.registers());
            let total: f64 = c.branch_probabilities(&rho).unwrap().iter().map(|(_, p)| p).sum();
            prop_assert!((total - 1.0).abs() < 1e-12, "{}: {}", name, total);
        }
    }

    #[test]
    fn standard_circuits_ignore_scenario(m in model(), s in 0.0..=1.0f64, eta in 0.0..=1.0f64) {
        let a = NoiseSpec::new(m, s, eta, Scenario::Perfect).unwrap();
        let b = a.with_scenario(Scenario::Imperfect);
        prop_assert!(standard_cx(&a).unwrap().noisy.approx_eq(&standard_cx(&b).unwrap().noisy, 1e-15));
        prop_assert!(standard_uz(0.3, &a).unwrap().noisy.approx_eq(&standard_uz(0.3, &b).unwrap().noisy, 1e-15));
    }
}
