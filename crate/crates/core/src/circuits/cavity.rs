//! Cavity-QED variants of the sequential circuits.
//!
//! Registers are atoms whose Hadamards are composite Raman pulses with a
//! Gaussian angle offset; photonic ancillae keep ideal single-qubit gates.
//! Entanglers misfire with probability `s`, complementation is perfect.

use super::builders::{sequential_cx_with, sequential_uz_with};
use super::LogicalChannel;
use crate::channels::{
    cx, hadamard, raman_hadamard, raman_hadamard_shared, raman_hadamard_with_offsets, rotation, Axis, NoiseSpec,
    RamanSpec, Scenario,
};
use crate::error::{Error, Result};
use crate::qlin::{ComplexMatrix, Superoperator};
use crate::scalar::Real;

/// Register Hadamards in the cavity `U_z` circuit.
pub const UZ_REGISTER_HADAMARDS: usize = 1;
/// Register Hadamards in the cavity CX circuit, excluding the H correction.
pub const CX_REGISTER_HADAMARDS: usize = 3;

/// Whether the two pulses of one Raman Hadamard draw their offsets
/// independently or share one draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum OffsetCorrelation {
    #[default]
    Independent,
    Shared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CavityOptions {
    pub correlation: OffsetCorrelation,
    /// Also realise the trailing H correction of the CX circuit with a
    /// noisy Raman pulse. Off by default: corrections are ideal.
    pub noisy_correction: bool,
}

impl CavityOptions {
    /// Offset-averaged Raman Hadamard for this correlation mode.
    pub fn raman_hadamard<T: Real>(&self, gamma: T) -> Result<Superoperator<T>> {
        let spec = RamanSpec::new(gamma)?;
        match self.correlation {
            OffsetCorrelation::Independent => Ok(raman_hadamard(spec)?.to_superoperator()),
            OffsetCorrelation::Shared => raman_hadamard_shared(spec),
        }
    }

    /// Number of Raman pulse offsets one realisation of the CX circuit draws.
    pub fn cx_offsets(&self) -> usize {
        let pulses = CX_REGISTER_HADAMARDS + usize::from(self.noisy_correction);
        match self.correlation {
            OffsetCorrelation::Independent => 2 * pulses,
            OffsetCorrelation::Shared => pulses,
        }
    }

    pub fn uz_offsets(&self) -> usize {
        match self.correlation {
            OffsetCorrelation::Independent => 2 * UZ_REGISTER_HADAMARDS,
            OffsetCorrelation::Shared => UZ_REGISTER_HADAMARDS,
        }
    }

    /// Unitary Raman Hadamards for one draw of offsets, consumed in order.
    pub fn fixed_hadamards<T: Real>(&self, offsets: &[T]) -> Vec<Superoperator<T>> {
        let chunk = match self.correlation {
            OffsetCorrelation::Independent => 2,
            OffsetCorrelation::Shared => 1,
        };
        offsets
            .chunks(chunk)
            .map(|d| Superoperator::from_unitary(&raman_hadamard_with_offsets(d[0], d[chunk - 1])))
            .collect()
    }

    pub fn uz<T: Real>(&self, alpha: T, s: T, eta: T, gamma: T) -> Result<LogicalChannel<T>> {
        let h = self.raman_hadamard(gamma)?;
        cavity_sequential_uz_with(alpha, s, eta, std::slice::from_ref(&h))
    }

    pub fn cx<T: Real>(&self, s: T, eta: T, gamma: T) -> Result<LogicalChannel<T>> {
        let h = self.raman_hadamard(gamma)?;
        let register = vec![h.clone(); CX_REGISTER_HADAMARDS];
        cavity_sequential_cx_with(s, eta, &register, self.noisy_correction.then_some(&h))
    }
}

fn matched<T: Real>(ideal: ComplexMatrix<T>, noisy: Superoperator<T>, label: String) -> LogicalChannel<T> {
    LogicalChannel { ideal: Superoperator::from_unitary(&ideal), noisy, label }
}

/// Cavity `U_z(α)` with the default options.
pub fn cavity_sequential_uz<T: Real>(alpha: T, s: T, eta: T, gamma: T) -> Result<LogicalChannel<T>> {
    CavityOptions::default().uz(alpha, s, eta, gamma)
}

/// Cavity CX with the default options.
pub fn cavity_sequential_cx<T: Real>(s: T, eta: T, gamma: T) -> Result<LogicalChannel<T>> {
    CavityOptions::default().cx(s, eta, gamma)
}

/// Cavity `U_z(α)` with an explicit register-Hadamard map.
pub fn cavity_sequential_uz_with<T: Real>(
    alpha: T,
    s: T,
    eta: T,
    register_h: &[Superoperator<T>],
) -> Result<LogicalChannel<T>> {
    let [h] = register_h else {
        return Err(Error::Invalid(format!("U_z cavity circuit takes {UZ_REGISTER_HADAMARDS} register Hadamard")));
    };
    let noise = NoiseSpec::misfiring(s, eta, Scenario::Perfect)?;
    let circuit = sequential_uz_with(alpha, &noise, Some(h))?;
    let target = &hadamard() * &rotation(Axis::Z, alpha);
    Ok(matched(target, circuit.superoperator()?, format!("cavity_uz({alpha}, s={s}, eta={eta})")))
}

/// Cavity CX with explicit register-Hadamard maps, one per entangler, and
/// an optional replacement for the trailing H correction.
pub fn cavity_sequential_cx_with<T: Real>(
    s: T,
    eta: T,
    register_h: &[Superoperator<T>],
    correction_h: Option<&Superoperator<T>>,
) -> Result<LogicalChannel<T>> {
    let hs: &[Superoperator<T>; CX_REGISTER_HADAMARDS] = register_h
        .try_into()
        .map_err(|_| Error::Invalid(format!("CX cavity circuit takes {CX_REGISTER_HADAMARDS} register Hadamards")))?;
    let noise = NoiseSpec::misfiring(s, eta, Scenario::Perfect)?;
    let circuit = sequential_cx_with(&noise, Some(hs), correction_h)?;
    Ok(matched(cx(), circuit.superoperator()?, format!("cavity_cx(s={s}, eta={eta})")))
}
