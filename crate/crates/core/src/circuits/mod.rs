//! Teleportation circuits and the logical channels they realise.
//!
//! A [`Circuit`] is a flat list of local channel applications, ideal
//! Z-basis measurements and outcome-conditioned unitaries. Simulation keeps
//! one unnormalized density matrix per outcome record and sums the branches
//! after tracing out everything except the output qubits.

mod builders;
mod cavity;

pub use builders::{
    euler_chain, euler_chain_circuit, sequential_cx, sequential_cx_circuit, sequential_uz, sequential_uz_circuit,
    standard_cx, standard_cx_circuit, standard_uz, standard_uz_circuit, EulerModel,
};
pub use cavity::{
    cavity_sequential_cx, cavity_sequential_cx_with, cavity_sequential_uz, cavity_sequential_uz_with, CavityOptions,
    OffsetCorrelation, CX_REGISTER_HADAMARDS, UZ_REGISTER_HADAMARDS,
};

use crate::error::{Error, Result};
use crate::qlin::{kron, partial_trace, ComplexMatrix, DensityMatrix, Superoperator};
use crate::scalar::{cr, Real};

/// Ideal target and noisy realisation of one logical gate.
#[derive(Debug, Clone)]
pub struct LogicalChannel<T> {
    pub ideal: Superoperator<T>,
    pub noisy: Superoperator<T>,
    pub label: String,
}

impl<T: Real> LogicalChannel<T> {
    pub fn dim(&self) -> usize {
        self.ideal.dim_in()
    }
}

#[derive(Debug, Clone)]
pub enum Op<T> {
    /// Local map on the listed qubits (first listed is most significant).
    Channel { qubits: Vec<usize>, map: Superoperator<T>, label: &'static str },
    /// Ideal projective Z measurement, outcome recorded in `slot`.
    Measure { qubit: usize, slot: usize },
    /// Applies `gates[bit]` to `qubit`, where `bit` is the outcome in `slot`.
    Conditional { qubit: usize, slot: usize, gates: [ComplexMatrix<T>; 2] },
}

#[derive(Debug, Clone)]
pub struct Circuit<T> {
    registers: usize,
    ancillae: Vec<DensityMatrix<T>>,
    ops: Vec<Op<T>>,
    outputs: Vec<usize>,
    slots: usize,
}

impl<T: Real> Circuit<T> {
    pub fn new(registers: usize, ancillae: Vec<DensityMatrix<T>>) -> Self {
        Self { registers, ancillae, ops: Vec::new(), outputs: Vec::new(), slots: 0 }
    }

    pub fn qubits(&self) -> usize {
        self.registers + self.ancillae.len()
    }

    pub fn registers(&self) -> usize {
        self.registers
    }

    pub fn ancillae(&self) -> &[DensityMatrix<T>] {
        &self.ancillae
    }

    pub fn ops(&self) -> &[Op<T>] {
        &self.ops
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn channel(&mut self, qubits: &[usize], map: Superoperator<T>, label: &'static str) -> &mut Self {
        self.ops.push(Op::Channel { qubits: qubits.to_vec(), map, label });
        self
    }

    pub fn unitary(&mut self, qubits: &[usize], u: &ComplexMatrix<T>, label: &'static str) -> &mut Self {
        self.channel(qubits, Superoperator::from_unitary(u), label)
    }

    /// Measures `qubit` in the Z basis and returns the outcome slot.
    pub fn measure(&mut self, qubit: usize) -> usize {
        let slot = self.slots;
        self.slots += 1;
        self.ops.push(Op::Measure { qubit, slot });
        slot
    }

    pub fn conditional(&mut self, qubit: usize, slot: usize, when_zero: ComplexMatrix<T>, when_one: ComplexMatrix<T>) -> &mut Self {
        self.ops.push(Op::Conditional { qubit, slot, gates: [when_zero, when_one] });
        self
    }

    /// Applies `gate` to `qubit` when `slot` reads 1.
    pub fn correct(&mut self, qubit: usize, slot: usize, gate: ComplexMatrix<T>) -> &mut Self {
        self.conditional(qubit, slot, ComplexMatrix::identity(2), gate)
    }

    pub fn set_outputs(&mut self, outputs: &[usize]) -> &mut Self {
        self.outputs = outputs.to_vec();
        self
    }

    fn validate(&self) -> Result<()> {
        let n = self.qubits();
        if self.outputs.is_empty() || self.outputs.windows(2).any(|w| w[0] >= w[1]) || self.outputs.iter().any(|&q| q >= n) {
            return Err(Error::Invalid(format!("outputs {:?} must be ascending qubits below {n}", self.outputs)));
        }
        if self.outputs.len() != self.registers {
            return Err(Error::Invalid("logical input and output widths differ".into()));
        }
        Ok(())
    }

    /// Joint initial state `input ⊗ ancilla₁ ⊗ ancilla₂ ⊗ …`.
    pub fn initial_state(&self, input: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        self.ancillae.iter().fold(input.clone(), |acc, a| kron(&acc, a.matrix()))
    }

    /// Runs the circuit on `input`, returning every outcome branch (outcome
    /// bits, unnormalized full-register state).
    pub fn run_branches(&self, input: &ComplexMatrix<T>) -> Result<Vec<(u32, ComplexMatrix<T>)>> {
        let n = self.qubits();
        if input.rows() != 1 << self.registers || input.cols() != 1 << self.registers {
            return Err(Error::Dimension(format!("circuit expects a {}-qubit input", self.registers)));
        }
        let mut branches = vec![(0u32, self.initial_state(input))];
        for op in &self.ops {
            match op {
                Op::Channel { qubits, map, .. } => {
                    for (_, state) in branches.iter_mut() {
                        *state = apply_local(state, map, qubits, n)?;
                    }
                }
                Op::Measure { qubit, slot } => {
                    let mut next = Vec::with_capacity(branches.len() * 2);
                    for (bits, state) in branches {
                        for outcome in 0..2u32 {
                            let projected = project(&state, *qubit, outcome as usize, n);
                            next.push((bits | (outcome << slot), projected));
                        }
                    }
                    branches = next;
                }
                Op::Conditional { qubit, slot, gates } => {
                    for (bits, state) in branches.iter_mut() {
                        let g = &gates[((*bits >> slot) & 1) as usize];
                        *state = apply_local(state, &Superoperator::from_unitary(g), &[*qubit], n)?;
                    }
                }
            }
        }
        Ok(branches)
    }

    pub fn run(&self, input: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        self.validate()?;
        let n = self.qubits();
        let dims = vec![2; n];
        let d = 1 << self.outputs.len();
        let mut out = ComplexMatrix::zeros(d, d);
        for (_, state) in self.run_branches(input)? {
            out += &partial_trace(&state, &dims, &self.outputs)?;
        }
        Ok(out)
    }

    /// Outcome probabilities for a physical input state, indexed by outcome bits.
    pub fn branch_probabilities(&self, input: &DensityMatrix<T>) -> Result<Vec<(u32, T)>> {
        Ok(self.run_branches(input.matrix())?.into_iter().map(|(bits, s)| (bits, s.trace().re)).collect())
    }

    /// Logical superoperator on the register inputs.
    pub fn superoperator(&self) -> Result<Superoperator<T>> {
        self.validate()?;
        let d = 1 << self.registers;
        Superoperator::from_linear_map(d, d, |unit| self.run(unit))
    }
}

/// Applies a local superoperator to `qubits` of an `n`-qubit operator.
pub fn apply_local<T: Real>(
    state: &ComplexMatrix<T>,
    map: &Superoperator<T>,
    qubits: &[usize],
    n: usize,
) -> Result<ComplexMatrix<T>> {
    let k = qubits.len();
    let local = 1usize << k;
    if map.dim_in() != local || map.dim_out() != local {
        return Err(Error::Dimension(format!("{k}-qubit site needs a {local}-dimensional map")));
    }
    if qubits.iter().any(|&q| q >= n) {
        return Err(Error::Dimension(format!("qubits {qubits:?} out of range for {n}")));
    }
    let rest: Vec<usize> = (0..n).filter(|q| !qubits.contains(q)).collect();
    let place = |bits: usize, positions: &[usize]| -> usize {
        positions
            .iter()
            .enumerate()
            .map(|(i, &q)| ((bits >> (positions.len() - 1 - i)) & 1) << (n - 1 - q))
            .sum()
    };
    let site_offsets: Vec<usize> = (0..local).map(|a| place(a, qubits)).collect();
    let rest_offsets: Vec<usize> = (0..1usize << rest.len()).map(|r| place(r, &rest)).collect();

    let mut out = ComplexMatrix::zeros(state.rows(), state.cols());
    let mat = map.matrix();
    let mut block = vec![cr(T::zero()); local * local];
    for &ri in &rest_offsets {
        for &rj in &rest_offsets {
            for (b, &sb) in site_offsets.iter().enumerate() {
                for (a, &sa) in site_offsets.iter().enumerate() {
                    block[a + b * local] = state[(ri + sa, rj + sb)];
                }
            }
            let image = mat.mul_vec(&block);
            for (b, &sb) in site_offsets.iter().enumerate() {
                for (a, &sa) in site_offsets.iter().enumerate() {
                    out[(ri + sa, rj + sb)] = image[a + b * local];
                }
            }
        }
    }
    Ok(out)
}

fn project<T: Real>(state: &ComplexMatrix<T>, qubit: usize, outcome: usize, n: usize) -> ComplexMatrix<T> {
    let shift = n - 1 - qubit;
    ComplexMatrix::from_fn(state.rows(), state.cols(), |i, j| {
        if (i >> shift) & 1 == outcome && (j >> shift) & 1 == outcome {
            state[(i, j)]
        } else {
            cr(T::zero())
        }
    })
}
