//! The teleportation circuits of the two models.
//!
//! Qubit layout: registers first, then ancillae in creation order. In the
//! standard model the logical output moves onto the last ancilla; in the
//! sequential model it stays on the registers.

use super::{Circuit, LogicalChannel};
use crate::channels::{
    complemented_cz, cx, cz, hadamard, noisy_entangler, pauli, prepare_plus, rotation, unitary_channel, Axis,
    EntanglerModel, NoiseSpec, Scenario,
};
use crate::error::Result;
use crate::qlin::{ComplexMatrix, DensityMatrix, Superoperator};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EulerModel {
    Standard,
    Sequential,
}

/// `H · U_z(α)`, the measurement basis change and the single-step target.
fn h_rz<T: Real>(alpha: T) -> ComplexMatrix<T> {
    &hadamard() * &rotation(Axis::Z, alpha)
}

fn ancillae<T: Real>(eta: T, count: usize) -> Result<Vec<DensityMatrix<T>>> {
    (0..count).map(|_| prepare_plus(eta)).collect()
}

fn entangler<T: Real>(gate: &ComplexMatrix<T>, noise: &NoiseSpec<T>) -> Result<Superoperator<T>> {
    let strength = if noise.model == EntanglerModel::None { T::zero() } else { noise.strength };
    noisy_entangler(&unitary_channel(gate)?, noise.model, strength)
}

/// Standard-model entangler: a noisy CZ on `(a, b)`.
fn entangle_standard<T: Real>(c: &mut Circuit<T>, a: usize, b: usize, noise: &NoiseSpec<T>) -> Result<()> {
    c.channel(&[a, b], entangler(&cz(), noise)?, "cz");
    Ok(())
}

/// Sequential-model entangler between `register` and `ancilla`.
///
/// Perfect complementation is a noisy CZ followed by ideal `H ⊗ H`, with
/// `register_h` standing in for the register-side Hadamard; imperfect
/// complementation is one noisy `(H ⊗ H)·CZ` block.
pub(crate) fn entangle_sequential<T: Real>(
    c: &mut Circuit<T>,
    register: usize,
    ancilla: usize,
    noise: &NoiseSpec<T>,
    register_h: Option<&Superoperator<T>>,
) -> Result<()> {
    match noise.scenario {
        Scenario::Perfect => {
            c.channel(&[register, ancilla], entangler(&cz(), noise)?, "cz");
            match register_h {
                Some(h) => c.channel(&[register], h.clone(), "register_h"),
                None => c.unitary(&[register], &hadamard(), "register_h"),
            };
            c.unitary(&[ancilla], &hadamard(), "ancilla_h");
        }
        Scenario::Imperfect => {
            c.channel(&[register, ancilla], entangler(&complemented_cz(), noise)?, "gamma_seq");
        }
    }
    Ok(())
}

fn logical<T: Real>(circuit: &Circuit<T>, target: &ComplexMatrix<T>, label: String) -> Result<LogicalChannel<T>> {
    Ok(LogicalChannel { ideal: Superoperator::from_unitary(target), noisy: circuit.superoperator()?, label })
}

/// Standard `U_z(α)` teleport: input on qubit 0, output on the ancilla.
pub fn standard_uz_circuit<T: Real>(alpha: T, noise: &NoiseSpec<T>) -> Result<Circuit<T>> {
    let mut c = Circuit::new(1, ancillae(noise.eta, 1)?);
    entangle_standard(&mut c, 0, 1, noise)?;
    c.unitary(&[0], &h_rz(alpha), "basis");
    let k = c.measure(0);
    c.correct(1, k, pauli(Axis::X));
    c.set_outputs(&[1]);
    Ok(c)
}

pub fn standard_uz<T: Real>(alpha: T, noise: &NoiseSpec<T>) -> Result<LogicalChannel<T>> {
    logical(&standard_uz_circuit(alpha, noise)?, &h_rz(alpha), format!("standard_uz({alpha})"))
}

pub(crate) fn sequential_uz_with<T: Real>(
    alpha: T,
    noise: &NoiseSpec<T>,
    register_h: Option<&Superoperator<T>>,
) -> Result<Circuit<T>> {
    let mut c = Circuit::new(1, ancillae(noise.eta, 1)?);
    entangle_sequential(&mut c, 0, 1, noise, register_h)?;
    c.unitary(&[1], &h_rz(alpha), "basis");
    let k = c.measure(1);
    c.correct(0, k, pauli(Axis::X));
    c.set_outputs(&[0]);
    Ok(c)
}

/// Sequential `U_z(α)` teleport: the gate lands back on the register.
pub fn sequential_uz_circuit<T: Real>(alpha: T, noise: &NoiseSpec<T>) -> Result<Circuit<T>> {
    sequential_uz_with(alpha, noise, None)
}

pub fn sequential_uz<T: Real>(alpha: T, noise: &NoiseSpec<T>) -> Result<LogicalChannel<T>> {
    logical(&sequential_uz_circuit(alpha, noise)?, &h_rz(alpha), format!("sequential_uz({alpha})"))
}

/// Standard CX on qubits (c=0, t=1) with ancillae a₁=2, a₂=3; output on (c, a₂).
pub fn standard_cx_circuit<T: Real>(noise: &NoiseSpec<T>) -> Result<Circuit<T>> {
    let mut c = Circuit::new(2, ancillae(noise.eta, 2)?);
    for (a, b) in [(1, 2), (0, 2), (2, 3)] {
        entangle_standard(&mut c, a, b, noise)?;
    }
    c.unitary(&[1], &hadamard(), "basis");
    c.unitary(&[2], &hadamard(), "basis");
    let p = c.measure(1);
    let q = c.measure(2);
    c.correct(0, p, pauli(Axis::Z));
    c.correct(3, p, pauli(Axis::Z));
    c.correct(3, q, pauli(Axis::X));
    c.set_outputs(&[0, 3]);
    Ok(c)
}

pub fn standard_cx<T: Real>(noise: &NoiseSpec<T>) -> Result<LogicalChannel<T>> {
    logical(&standard_cx_circuit(noise)?, &cx(), "standard_cx".into())
}

/// `register_h[i]` replaces the register-side Hadamard of the i-th
/// entangler; `correction_h` replaces the trailing H correction on c.
pub(crate) fn sequential_cx_with<T: Real>(
    noise: &NoiseSpec<T>,
    register_h: Option<&[Superoperator<T>; 3]>,
    correction_h: Option<&Superoperator<T>>,
) -> Result<Circuit<T>> {
    let mut c = Circuit::new(2, ancillae(noise.eta, 2)?);
    for (i, (r, a)) in [(1, 2), (1, 3), (0, 3)].into_iter().enumerate() {
        entangle_sequential(&mut c, r, a, noise, register_h.map(|h| &h[i]))?;
    }
    c.unitary(&[2], &hadamard(), "basis");
    let p = c.measure(2);
    let q = c.measure(3);
    c.correct(0, p, pauli(Axis::X));
    match correction_h {
        Some(h) => c.channel(&[0], h.clone(), "correction_h"),
        None => c.unitary(&[0], &hadamard(), "correction_h"),
    };
    c.correct(1, p, pauli(Axis::Z));
    c.correct(1, q, pauli(Axis::X));
    c.set_outputs(&[0, 1]);
    Ok(c)
}

/// Sequential CX: registers c=0, t=1 never interact directly; ancilla
/// a₁=2 couples to t, ancilla a₂=3 to t and then c.
pub fn sequential_cx_circuit<T: Real>(noise: &NoiseSpec<T>) -> Result<Circuit<T>> {
    sequential_cx_with(noise, None, None)
}

pub fn sequential_cx<T: Real>(noise: &NoiseSpec<T>) -> Result<LogicalChannel<T>> {
    logical(&sequential_cx_circuit(noise)?, &cx(), "sequential_cx".into())
}

/// Conditional `H·U_z(±θ)`, sign flipped when `slot` reads 1.
fn adaptive_basis<T: Real>(c: &mut Circuit<T>, qubit: usize, slot: usize, theta: T) {
    c.conditional(qubit, slot, h_rz(theta), h_rz(-theta));
}

/// Three chained teleports realising `H·U_z(γ)·U_x(β)·U_z(α)`.
///
/// Each later angle takes the sign of the preceding outcome, and the
/// accumulated by-products `X^k Z^l X^m` are corrected once at the end.
pub fn euler_chain_circuit<T: Real>(model: EulerModel, alpha: T, beta: T, gamma: T, noise: &NoiseSpec<T>) -> Result<Circuit<T>> {
    let mut c = Circuit::new(1, ancillae(noise.eta, 3)?);
    let out = match model {
        EulerModel::Standard => {
            for (a, b) in [(0, 1), (1, 2), (2, 3)] {
                entangle_standard(&mut c, a, b, noise)?;
            }
            c.unitary(&[0], &h_rz(alpha), "basis");
            let k = c.measure(0);
            adaptive_basis(&mut c, 1, k, beta);
            let l = c.measure(1);
            adaptive_basis(&mut c, 2, l, gamma);
            let m = c.measure(2);
            (3, k, l, m)
        }
        EulerModel::Sequential => {
            entangle_sequential(&mut c, 0, 1, noise, None)?;
            c.unitary(&[1], &h_rz(alpha), "basis");
            let k = c.measure(1);
            entangle_sequential(&mut c, 0, 2, noise, None)?;
            adaptive_basis(&mut c, 2, k, beta);
            let l = c.measure(2);
            entangle_sequential(&mut c, 0, 3, noise, None)?;
            adaptive_basis(&mut c, 3, l, gamma);
            let m = c.measure(3);
            (0, k, l, m)
        }
    };
    let (q, k, l, m) = out;
    c.correct(q, m, pauli(Axis::X));
    c.correct(q, l, pauli(Axis::Z));
    c.correct(q, k, pauli(Axis::X));
    c.set_outputs(&[q]);
    Ok(c)
}

pub fn euler_chain<T: Real>(model: EulerModel, alpha: T, beta: T, gamma: T, noise: &NoiseSpec<T>) -> Result<LogicalChannel<T>> {
    let target = &(&h_rz(gamma) * &rotation(Axis::X, beta)) * &rotation(Axis::Z, alpha);
    let label = format!("{model:?}_euler({alpha}, {beta}, {gamma})").to_lowercase();
    logical(&euler_chain_circuit(model, alpha, beta, gamma, noise)?, &target, label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const ZERO_NOISE_TOL: f64 = 1e-12;

    fn noise_points() -> Vec<NoiseSpec<f64>> {
        let mut v = vec![NoiseSpec::noiseless()];
        for scenario in [Scenario::Perfect, Scenario::Imperfect] {
            v.push(NoiseSpec::depolarizing(0.0, 0.0, scenario).unwrap());
            v.push(NoiseSpec::misfiring(0.0, 0.0, scenario).unwrap());
        }
        v
    }

    #[test]
    fn zero_noise_reproduces_targets() {
        for n in noise_points() {
            for alpha in [0.0, PI / 8.0, PI / 4.0, 1.3] {
                for ch in [standard_uz(alpha, &n).unwrap(), sequential_uz(alpha, &n).unwrap()] {
                    assert!(ch.noisy.approx_eq(&ch.ideal, ZERO_NOISE_TOL), "{}", ch.label);
                }
            }
            for ch in [standard_cx(&n).unwrap(), sequential_cx(&n).unwrap()] {
                assert!(ch.noisy.approx_eq(&ch.ideal, ZERO_NOISE_TOL), "{}", ch.label);
            }
            for model in [EulerModel::Standard, EulerModel::Sequential] {
                let ch = euler_chain(model, 0.3, 0.7, -0.2, &n).unwrap();
                assert!(ch.noisy.approx_eq(&ch.ideal, ZERO_NOISE_TOL), "{}", ch.label);
            }
        }
    }

    #[test]
    fn standard_circuits_ignore_scenario() {
        let a = NoiseSpec::misfiring(0.3, 0.2, Scenario::Perfect).unwrap();
        let b = a.with_scenario(Scenario::Imperfect);
        assert!(standard_uz(0.4, &a).unwrap().noisy.approx_eq(&standard_uz(0.4, &b).unwrap().noisy, 0.0));
        assert!(standard_cx(&a).unwrap().noisy.approx_eq(&standard_cx(&b).unwrap().noisy, 0.0));
    }

    #[test]
    fn noisy_channels_are_cptp() {
        let n = NoiseSpec::depolarizing(0.35, 0.6, Scenario::Imperfect).unwrap();
        assert!(sequential_cx(&n).unwrap().noisy.is_cptp());
        assert!(standard_uz(0.2, &n).unwrap().noisy.is_cptp());
        assert!(euler_chain(EulerModel::Sequential, 0.1, 0.2, 0.3, &n).unwrap().noisy.is_cptp());
    }
}
