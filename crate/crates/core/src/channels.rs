//! Gate, state-preparation and noise channel constructors.

use num_complex::Complex;

use crate::error::{check_range, Error, Result};
use crate::qlin::{kron, tol, ComplexMatrix, DensityMatrix, Superoperator, PSD_TOL};
use crate::scalar::{c, cr, Real};

/// Finite Kraus representation `ρ ↦ Σ K ρ K†` with `Σ K†K = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel<T> {
    dim: usize,
    ops: Vec<ComplexMatrix<T>>,
}

impl<T: Real> KrausChannel<T> {
    pub fn new(ops: Vec<ComplexMatrix<T>>) -> Result<Self> {
        let k = Self::unchecked(ops);
        if k.ops.is_empty() {
            return Err(Error::Invalid("a Kraus channel needs at least one operator".into()));
        }
        if k.ops.iter().any(|op| op.rows() != k.dim || op.cols() != k.dim) {
            return Err(Error::Dimension("Kraus operators must share one square shape".into()));
        }
        let err = k.completeness_error();
        if err > tol(PSD_TOL) {
            return Err(Error::IncompleteKraus(err.as_f64()));
        }
        Ok(k)
    }

    /// Skips validation; used to exercise the error paths downstream.
    pub fn unchecked(ops: Vec<ComplexMatrix<T>>) -> Self {
        let dim = ops.first().map_or(0, |o| o.rows());
        Self { dim, ops }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ops(&self) -> &[ComplexMatrix<T>] {
        &self.ops
    }

    /// `‖Σ K†K − I‖_max`.
    pub fn completeness_error(&self) -> T {
        let mut sum = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.ops {
            if k.rows() != self.dim || k.cols() != self.dim {
                return T::infinity();
            }
            sum += &(&k.dagger() * k);
        }
        sum.max_abs_diff(&ComplexMatrix::identity(self.dim))
    }

    pub fn apply(&self, rho: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.ops {
            out += &(&(k * rho) * &k.dagger());
        }
        out
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Self) -> Result<Self> {
        if self.dim != first.dim {
            return Err(Error::Dimension("cannot compose Kraus channels of different dimension".into()));
        }
        let ops = self
            .ops
            .iter()
            .flat_map(|b| first.ops.iter().map(move |a| b * a))
            .filter(|k| k.max_abs() > T::zero())
            .collect();
        Ok(Self { dim: self.dim, ops })
    }

    pub fn to_superoperator(&self) -> Superoperator<T> {
        Superoperator::from_operators(&self.ops).expect("validated Kraus channel")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

pub fn pauli<T: Real>(axis: Axis) -> ComplexMatrix<T> {
    let z = c(0.0, 0.0);
    match axis {
        Axis::X => ComplexMatrix::new(2, 2, vec![z, c(1.0, 0.0), c(1.0, 0.0), z]),
        Axis::Y => ComplexMatrix::new(2, 2, vec![z, c(0.0, -1.0), c(0.0, 1.0), z]),
        Axis::Z => ComplexMatrix::new(2, 2, vec![c(1.0, 0.0), z, z, c(-1.0, 0.0)]),
    }
    .expect("2x2")
}

pub fn hadamard<T: Real>() -> ComplexMatrix<T> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::new(2, 2, vec![c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]).expect("2x2")
}

pub fn cz<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::diag(&[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)])
}

/// Controlled-NOT with the first qubit as control.
pub fn cx<T: Real>() -> ComplexMatrix<T> {
    let mut m = ComplexMatrix::zeros(4, 4);
    for (i, j) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        m[(i, j)] = cr(T::one());
    }
    m
}

/// Complemented CZ, `(H ⊗ H) · CZ`.
pub fn complemented_cz<T: Real>() -> ComplexMatrix<T> {
    &kron(&hadamard(), &hadamard()) * &cz()
}

/// `exp(−i·angle·P/2)` for the Pauli `P` of `axis`.
pub fn rotation<T: Real>(axis: Axis, angle: T) -> ComplexMatrix<T> {
    let half = angle / T::lit(2.0);
    let id = ComplexMatrix::identity(2).scale_real(half.cos());
    let p = pauli::<T>(axis).scale(Complex::new(T::zero(), -half.sin()));
    &id + &p
}

pub fn unitary_channel<T: Real>(u: &ComplexMatrix<T>) -> Result<KrausChannel<T>> {
    let err = u.unitarity_error();
    if err > tol(PSD_TOL) {
        return Err(Error::NotUnitary(err.as_f64()));
    }
    Ok(KrausChannel { dim: u.rows(), ops: vec![u.clone()] })
}

pub fn plus_state<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(2, 2, |_, _| cr(T::lit(0.5)))
}

/// Ancilla preparation `(1−η)|+⟩⟨+| + η·I/2`.
pub fn prepare_plus<T: Real>(eta: T) -> Result<DensityMatrix<T>> {
    check_range("eta", eta.as_f64(), 0.0, 1.0)?;
    let mix = ComplexMatrix::identity(2).scale_real(T::lit(0.5));
    DensityMatrix::new(&plus_state::<T>().scale_real(T::one() - eta) + &mix.scale_real(eta))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntanglerModel {
    /// With probability `p` the gate's two-qubit output becomes `I/4`.
    Depolarizing,
    /// With probability `s` the gate does not act.
    Misfiring,
    None,
}

/// Whether the sequential model's complementing Hadamards share the
/// entangler's noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    Perfect,
    Imperfect,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec<T> {
    pub model: EntanglerModel,
    pub strength: T,
    pub eta: T,
    pub scenario: Scenario,
}

impl<T: Real> NoiseSpec<T> {
    pub fn new(model: EntanglerModel, strength: T, eta: T, scenario: Scenario) -> Result<Self> {
        check_range("strength", strength.as_f64(), 0.0, 1.0)?;
        check_range("eta", eta.as_f64(), 0.0, 1.0)?;
        Ok(Self { model, strength, eta, scenario })
    }

    pub fn noiseless() -> Self {
        Self { model: EntanglerModel::None, strength: T::zero(), eta: T::zero(), scenario: Scenario::Perfect }
    }

    pub fn depolarizing(p: T, eta: T, scenario: Scenario) -> Result<Self> {
        Self::new(EntanglerModel::Depolarizing, p, eta, scenario)
    }

    pub fn misfiring(s: T, eta: T, scenario: Scenario) -> Result<Self> {
        Self::new(EntanglerModel::Misfiring, s, eta, scenario)
    }

    pub fn with_scenario(self, scenario: Scenario) -> Self {
        Self { scenario, ..self }
    }
}

/// Two-qubit entangling `gate` under the given stochastic noise model.
pub fn noisy_entangler<T: Real>(gate: &KrausChannel<T>, model: EntanglerModel, strength: T) -> Result<Superoperator<T>> {
    check_range("strength", strength.as_f64(), 0.0, 1.0)?;
    if gate.dim() != 4 || gate.ops().len() != 1 {
        return Err(Error::Invalid("entangler must be a two-qubit unitary channel".into()));
    }
    let ideal = gate.to_superoperator();
    match model {
        EntanglerModel::None => Ok(ideal),
        EntanglerModel::Depolarizing => {
            let replace =
                Superoperator::from_linear_map(4, 4, |x| Ok(ComplexMatrix::identity(4).scale(x.trace() * T::lit(0.25))))?;
            ideal.combine(T::one() - strength, &replace, strength)
        }
        EntanglerModel::Misfiring => ideal.combine(T::one() - strength, &Superoperator::identity(4), strength),
    }
}

/// Standard deviation of a Raman pulse's rotation-angle offset (radians).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamanSpec<T> {
    gamma: T,
}

impl<T: Real> RamanSpec<T> {
    pub fn new(gamma: T) -> Result<Self> {
        check_range("gamma", gamma.as_f64(), 0.0, f64::INFINITY)?;
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    /// `E[cos δ] = exp(−γ²/2)` for `δ ~ N(0, γ²)`.
    pub fn mean_cos(&self) -> T {
        (-(self.gamma * self.gamma) / T::lit(2.0)).exp()
    }
}

/// Rotation `R(θ + δ)` averaged over `δ ~ N(0, γ²)`.
///
/// On the ±1 eigenspaces of the axis Pauli `A` the offset contributes a
/// phase `e^{∓iδ/2}`, so the average keeps `R(θ)` with weight
/// `(1 + e^{−γ²/2})/2` and `A·R(θ)` with weight `(1 − e^{−γ²/2})/2`.
pub fn gaussian_rotation<T: Real>(axis: Axis, theta: T, spec: RamanSpec<T>) -> Result<KrausChannel<T>> {
    let r = rotation(axis, theta);
    let e = spec.mean_cos();
    let half = T::lit(0.5);
    let keep = ((T::one() + e) * half).sqrt();
    let flip = ((T::one() - e) * half).sqrt();
    let mut ops = vec![r.scale_real(keep)];
    if flip > T::zero() {
        ops.push((&pauli::<T>(axis) * &r).scale_real(flip));
    }
    KrausChannel::new(ops)
}

/// Hadamard realised as `R_y(π/2) · R_z(π)`, each pulse with its own
/// independent Gaussian offset.
pub fn raman_hadamard<T: Real>(spec: RamanSpec<T>) -> Result<KrausChannel<T>> {
    let z = gaussian_rotation(Axis::Z, T::PI(), spec)?;
    let y = gaussian_rotation(Axis::Y, T::FRAC_PI_2(), spec)?;
    y.after(&z)
}

/// Same composite pulse, but with one offset `δ` shared by both pulses.
///
/// With `c = cos(δ/2)`, `s = sin(δ/2)`, `R_y(δ)R_z(δ) = c²I − ics(Y+Z) − is²X`;
/// only the even moments of `δ` survive the average.
pub fn raman_hadamard_shared<T: Real>(spec: RamanSpec<T>) -> Result<Superoperator<T>> {
    let g2 = spec.gamma() * spec.gamma();
    let e1 = (-g2 / T::lit(2.0)).exp();
    let e2 = (-T::lit(2.0) * g2).exp();
    let quarter = T::lit(0.25);
    let cos2_sq = (T::one() + e2) * T::lit(0.5);
    let c4 = (T::one() + T::lit(2.0) * e1 + cos2_sq) * quarter;
    let s4 = (T::one() - T::lit(2.0) * e1 + cos2_sq) * quarter;
    let c2s2 = (T::one() - e2) / T::lit(8.0);

    let id = ComplexMatrix::identity(2);
    let x = pauli::<T>(Axis::X);
    let yz = &pauli::<T>(Axis::Y) + &pauli::<T>(Axis::Z);
    let conj_by = |m: &ComplexMatrix<T>| kron(&m.conj(), m);
    // ρX ↦ (Xᵀ ⊗ I), Xρ ↦ (I ⊗ X) under column-major vectorization.
    let right_x = kron(&x.transpose(), &id);
    let left_x = kron(&id, &x);
    let i = Complex::new(T::zero(), T::one());
    let mut avg = kron(&id, &id).scale_real(c4);
    avg += &conj_by(&yz).scale_real(c2s2);
    avg += &conj_by(&x).scale_real(s4);
    avg += &(&right_x - &left_x).scale(i * c2s2);
    let avg = Superoperator::new(2, 2, avg)?;

    let rz = Superoperator::from_unitary(&rotation(Axis::Z, T::PI()));
    let ry = Superoperator::from_unitary(&rotation(Axis::Y, T::FRAC_PI_2()));
    ry.compose(&avg)?.compose(&rz)
}

/// Composite Hadamard pulse with fixed offsets on the Z and Y pulses.
pub fn raman_hadamard_with_offsets<T: Real>(dz: T, dy: T) -> ComplexMatrix<T> {
    &rotation(Axis::Y, T::FRAC_PI_2() + dy) * &rotation(Axis::Z, T::PI() + dz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    type M = ComplexMatrix<f64>;

    fn ket0() -> M {
        M::diag(&[cr(1.0), cr(0.0)])
    }

    /// Removes the global phase of `u` relative to `v`.
    fn phase_aligned(u: &M, v: &M) -> M {
        let ip = v.hs_inner(u);
        u.scale(ip.conj() / ip.norm())
    }

    #[test]
    fn rotations() {
        assert!(rotation(Axis::Z, 0.0).approx_eq_default(&M::identity(2)));
        let rz = rotation(Axis::Z, PI);
        assert!(rz.approx_eq(&pauli::<f64>(Axis::Z).scale(Complex::new(0.0, -1.0)), 1e-15));
        let composite = &rotation(Axis::Y, FRAC_PI_2) * &rz;
        assert!(phase_aligned(&composite, &hadamard()).approx_eq(&hadamard(), 1e-12));
    }

    #[test]
    fn unitary_channels() {
        let rho = M::from_rows(&[&[(0.6, 0.0), (0.1, 0.2)], &[(0.1, -0.2), (0.4, 0.0)]]).unwrap();
        assert!(unitary_channel(&M::identity(2)).unwrap().apply(&rho).approx_eq(&rho, 1e-15));
        let out = unitary_channel(&hadamard()).unwrap().apply(&ket0());
        assert!(out.approx_eq(&plus_state(), 1e-15));
        assert!(matches!(unitary_channel(&M::identity(2).scale_real(2.0)), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn ancilla_preparation() {
        assert!(prepare_plus(0.0).unwrap().matrix().approx_eq_default(&plus_state()));
        assert!(prepare_plus(1.0).unwrap().matrix().approx_eq_default(&M::identity(2).scale_real(0.5)));
        let half = prepare_plus(0.5).unwrap();
        let want = M::from_real_rows(&[&[0.5, 0.25], &[0.25, 0.5]]).unwrap();
        assert!(half.matrix().approx_eq_default(&want));
        assert!(prepare_plus(1.5).is_err());
        assert!(prepare_plus(-0.1).is_err());
        for eta in [0.0f64, 0.25, 0.5, 1.0] {
            let rho = prepare_plus(eta).unwrap();
            assert!((rho.purity() - (1.0 - eta + eta * eta / 2.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn entangler_endpoints() {
        let gate = unitary_channel(&cz()).unwrap();
        let rho = kron(&plus_state(), &plus_state());
        let dep = noisy_entangler(&gate, EntanglerModel::Depolarizing, 1.0).unwrap();
        assert!(dep.apply(&rho).unwrap().approx_eq_default(&M::identity(4).scale_real(0.25)));
        let mis = noisy_entangler(&gate, EntanglerModel::Misfiring, 1.0).unwrap();
        assert!(mis.approx_eq(&Superoperator::identity(4), 1e-15));
        let mis = noisy_entangler(&gate, EntanglerModel::Misfiring, 0.3).unwrap();
        let expected = &gate.apply(&rho).scale_real(0.7) + &rho.scale_real(0.3);
        assert!(mis.apply(&rho).unwrap().approx_eq_default(&expected));
        assert!(noisy_entangler(&gate, EntanglerModel::Misfiring, 1.2).is_err());
        for model in [EntanglerModel::Depolarizing, EntanglerModel::Misfiring] {
            let zero = noisy_entangler(&gate, model, 0.0).unwrap();
            assert!(zero.approx_eq(&gate.to_superoperator(), 1e-12));
            assert!(noisy_entangler(&gate, model, 0.37).unwrap().is_cptp());
        }
    }

    #[test]
    fn complemented_cz_is_h_h_after_cz() {
        let g = complemented_cz::<f64>();
        assert!(g.unitarity_error() < 1e-15);
        let a = M::from_rows(&[&[(0.5, 0.0), (0.0, 0.5)], &[(0.0, -0.5), (0.5, 0.0)]]).unwrap();
        let lhs = &(&g * &kron(&a, &a)) * &g.dagger();
        let hh = kron(&hadamard(), &hadamard());
        let mid = &(&cz() * &kron(&a, &a)) * &cz::<f64>().dagger();
        assert!(lhs.approx_eq(&(&(&hh * &mid) * &hh.dagger()), 1e-15));
    }

    #[test]
    fn gaussian_rotation_weights() {
        let spec = RamanSpec::new(0.2).unwrap();
        let k = gaussian_rotation(Axis::X, 0.4, spec).unwrap();
        let e = (-0.02f64).exp();
        let w: Vec<f64> = k.ops().iter().map(|op| op.hs_inner(op).re / 2.0).collect();
        assert!((w[0] - (1.0 + e) / 2.0).abs() < 1e-15);
        assert!((w[1] - (1.0 - e) / 2.0).abs() < 1e-15);
        let exact = gaussian_rotation(Axis::Y, 0.7, RamanSpec::new(0.0).unwrap()).unwrap();
        assert_eq!(exact.ops().len(), 1);
        assert!(exact.ops()[0].approx_eq(&rotation(Axis::Y, 0.7), 1e-15));
        assert!(RamanSpec::new(-1.0).is_err());
    }

    #[test]
    fn raman_hadamard_is_hadamard_without_offsets() {
        let k = raman_hadamard(RamanSpec::new(0.0).unwrap()).unwrap();
        let h = Superoperator::from_unitary(&hadamard());
        assert!(k.to_superoperator().approx_eq(&h, 1e-12));
        assert!(raman_hadamard_shared(RamanSpec::new(0.0).unwrap()).unwrap().approx_eq(&h, 1e-12));
        for g in [0.1, 0.5, 2.0] {
            let spec = RamanSpec::new(g).unwrap();
            assert!(raman_hadamard(spec).unwrap().to_superoperator().is_cptp());
            assert!(raman_hadamard_shared(spec).unwrap().is_cptp());
        }
        let u = raman_hadamard_with_offsets(0.0, 0.0);
        let phase_free = phase_aligned(&u, &hadamard());
        assert!(phase_free.approx_eq(&hadamard(), 1e-12));
    }
}
