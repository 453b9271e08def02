use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use seqmbqc::channels::*;
use seqmbqc::qlin::{ComplexMatrix, Superoperator};
use std::f64::consts::{FRAC_PI_2, PI};

type S = Superoperator<f64>;

/// Trapezoid average of `f(δ)` against `N(0, γ²)` over ±12γ.
fn quadrature(gamma: f64, points: usize, mut f: impl FnMut(f64) -> S) -> S {
    let span = 12.0 * gamma;
    let h = 2.0 * span / points as f64;
    let mut acc = S::zero(f(0.0).dim_in(), f(0.0).dim_out());
    for k in 0..=points {
        let x = -span + k as f64 * h;
        let w = h * (-x * x / (2.0 * gamma * gamma)).exp() / (gamma * (2.0 * PI).sqrt());
        let w = if k == 0 || k == points { w / 2.0 } else { w };
        acc = acc.combine(1.0, &f(x), w).unwrap();
    }
    acc
}

fn rot(axis: Axis, theta: f64) -> S {
    S::from_unitary(&rotation(axis, theta))
}

#[test]
fn gaussian_rotation_matches_quadrature() {
    for (axis, theta, gamma) in [(Axis::Z, 0.0, 0.2), (Axis::Y, FRAC_PI_2, 0.5), (Axis::X, 1.1, 1.3), (Axis::Z, PI, 2.0)] {
        let exact = gaussian_rotation(axis, theta, RamanSpec::new(gamma).unwrap()).unwrap().to_superoperator();
        let oracle = quadrature(gamma, 2000, |d| rot(axis, theta + d));
        assert!(exact.max_abs_diff(&oracle) < 1e-8, "{axis:?} {gamma}: {:e}", exact.max_abs_diff(&oracle));
    }
}

#[test]
fn large_offsets_dephase() {
    let ch = gaussian_rotation(Axis::Z, 0.0, RamanSpec::new(8.0).unwrap()).unwrap();
    let rho = ComplexMatrix::<f64>::from_fn(2, 2, |_, _| seqmbqc::Complex::new(0.5, 0.0));
    let out = ch.apply(&rho);
    assert!(out[(0, 1)].norm() < 1e-12 && (out[(0, 0)].re - 0.5).abs() < 1e-15);
}

#[test]
fn kraus_weights() {
    let k = gaussian_rotation(Axis::Z, 0.3, RamanSpec::new(0.2).unwrap()).unwrap();
    let w: Vec<f64> = k.ops().iter().map(|op| op.hs_inner(op).re / 2.0).collect();
    let e = (-0.02f64).exp();
    assert!((w[0] - (1.0 + e) / 2.0).abs() < 1e-15 && (w[1] - (1.0 - e) / 2.0).abs() < 1e-15);
}

#[test]
fn gaussian_rotation_matches_monte_carlo() {
    let gamma = 0.4;
    let exact = gaussian_rotation(Axis::Y, 0.7, RamanSpec::new(gamma).unwrap()).unwrap().to_superoperator();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let normal = Normal::new(0.0, gamma).unwrap();
    let samples = 1_000_000;
    let mut acc = ComplexMatrix::zeros(4, 4);
    for _ in 0..samples {
        let u = rotation(Axis::Y, 0.7 + normal.sample(&mut rng));
        acc += S::from_unitary(&u).matrix();
    }
    let mc = S::new(2, 2, acc.scale_real(1.0 / samples as f64)).unwrap();
    assert!(exact.max_abs_diff(&mc) < 5e-3);
}

#[test]
fn raman_hadamard_against_quadrature() {
    let spec = RamanSpec::new(0.2).unwrap();
    let exact = raman_hadamard(spec).unwrap().to_superoperator();
    let oracle = quadrature(0.2, 200, |dz| quadrature(0.2, 200, |dy| S::from_unitary(&raman_hadamard_with_offsets(dz, dy))));
    assert!(exact.max_abs_diff(&oracle) < 1e-8);
    let ket0 = ComplexMatrix::<f64>::diag(&[seqmbqc::Complex::new(1.0, 0.0), seqmbqc::Complex::new(0.0, 0.0)]);
    let out = exact.apply(&ket0).unwrap();
    let f = out.hs_inner(&plus_state()).re;
    assert!(f > 0.0 && f < 1.0);
    let shared = raman_hadamard_shared(spec).unwrap();
    let oracle = quadrature(0.2, 400, |d| S::from_unitary(&raman_hadamard_with_offsets(d, d)));
    assert!(shared.max_abs_diff(&oracle) < 1e-8);
    let h = S::from_unitary(&hadamard());
    let exact0 = raman_hadamard(RamanSpec::new(0.0).unwrap()).unwrap().to_superoperator();
    assert!(exact0.max_abs_diff(&h) < 1e-12);
    assert!(raman_hadamard_shared(RamanSpec::new(0.0).unwrap()).unwrap().max_abs_diff(&h) < 1e-12);
    for g in [0.1, 0.5, 2.0] {
        assert!(raman_hadamard(RamanSpec::new(g).unwrap()).unwrap().to_superoperator().is_cptp());
        assert!(raman_hadamard_shared(RamanSpec::new(g).unwrap()).unwrap().is_cptp());
    }
}

fn model() -> impl Strategy<Value = EntanglerModel> {
    prop_oneof![Just(EntanglerModel::Depolarizing), Just(EntanglerModel::Misfiring), Just(EntanglerModel::None)]
}

proptest! {
    #[test]
    fn entanglers_are_cptp(m in model(), s in 0.0..=1.0f64, complemented in any::<bool>()) {
        let g = if complemented { complemented_cz() } else { cz() };
        let gate = unitary_channel(&g).unwrap();
        prop_assert!(noisy_entangler(&gate, m, s).unwrap().is_cptp());
        prop_assert!(noisy_entangler(&gate, m, 0.0).unwrap().approx_eq(&gate.to_superoperator(), 1e-12));
    }

    #[test]
    fn ancilla_is_a_state(eta in 0.0..=1.0f64) {
        let rho = prepare_plus(eta).unwrap();
        prop_assert!((rho.purity() - (1.0 - eta + eta * eta / 2.0)).abs() < 1e-14);
    }

    #[test]
    fn gaussian_rotation_is_cptp(gamma in 0.0..5.0f64, theta in -PI..PI) {
        let k = gaussian_rotation(Axis::X, theta, RamanSpec::new(gamma).unwrap()).unwrap();
        prop_assert!(k.to_superoperator().is_cptp());
    }
}
