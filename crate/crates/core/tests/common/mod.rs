#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use seqmbqc::circuits::{Circuit, Op};
use seqmbqc::qlin::{embed_qubits, hermitian_eig, partial_trace, ComplexMatrix, DensityMatrix, Superoperator};
use seqmbqc::Complex;

pub type M = ComplexMatrix<f64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(rng: &mut impl Rng, n: usize) -> M {
    M::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex::new(re, im)
    })
}

/// Haar unitary by Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> M {
    let g = gaussian_matrix(rng, n);
    let mut cols: Vec<Vec<Complex<f64>>> = Vec::new();
    for j in 0..n {
        let mut v: Vec<Complex<f64>> = (0..n).map(|i| g[(i, j)]).collect();
        for u in &cols {
            let ip: Complex<f64> = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= ip * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    M::from_fn(n, n, |i, j| cols[j][i])
}

pub fn random_density(rng: &mut impl Rng, n: usize) -> DensityMatrix<f64> {
    let g = gaussian_matrix(rng, n);
    let p = &g * &g.dagger();
    let t = p.trace();
    DensityMatrix::new(p.scale(Complex::new(1.0, 0.0) / t)).unwrap()
}

/// Kraus operators read off the Choi eigendecomposition.
pub fn kraus_of(map: &Superoperator<f64>) -> Vec<M> {
    let d = map.dim_in();
    let eig = hermitian_eig(map.choi().matrix()).unwrap();
    let mut ops = Vec::new();
    for (k, &lam) in eig.values.iter().enumerate() {
        if lam > 1e-14 {
            let s = lam.sqrt();
            ops.push(M::from_fn(d, d, |r, j| eig.vectors[(r * d + j, k)] * s));
        }
    }
    ops
}

fn apply_embedded(rho: &M, ops: &[M], qubits: &[usize], n: usize) -> M {
    let mut out = M::zeros(rho.rows(), rho.cols());
    for k in ops {
        let full = embed_qubits(k, qubits, n).unwrap();
        out += &(&(&full * rho) * &full.dagger());
    }
    out
}

fn controlled(g0: &M, g1: &M) -> M {
    M::from_fn(4, 4, |i, j| match (i < 2, j < 2) {
        (true, true) => g0[(i, j)],
        (false, false) => g1[(i - 2, j - 2)],
        _ => Complex::new(0.0, 0.0),
    })
}

/// Deferred-measurement simulation: measurements are dropped, every
/// outcome-conditioned gate becomes a gate controlled by the measured
/// qubit, and the non-output qubits are traced out at the end.
pub fn deferred_channel(c: &Circuit<f64>) -> Superoperator<f64> {
    let n = c.qubits();
    let d = 1 << c.registers();
    let mut slot_qubit = vec![usize::MAX; c.slots()];
    for op in c.ops() {
        if let Op::Measure { qubit, slot } = op {
            slot_qubit[*slot] = *qubit;
        }
    }
    Superoperator::from_linear_map(d, d, |x| {
        let mut rho = c.initial_state(x);
        for op in c.ops() {
            match op {
                Op::Channel { qubits, map, .. } => rho = apply_embedded(&rho, &kraus_of(map), qubits, n),
                Op::Measure { .. } => {}
                Op::Conditional { qubit, slot, gates } => {
                    let u = controlled(&gates[0], &gates[1]);
                    rho = apply_embedded(&rho, &[u], &[slot_qubit[*slot], *qubit], n);
                }
            }
        }
        partial_trace(&rho, &vec![2; n], c.outputs())
    })
    .unwrap()
}
