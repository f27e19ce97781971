//! Dense state-vector simulator.
//!
//! Qubit 0 is the most significant bit of the amplitude index, so basis
//! labels read left to right like kets: amplitude `0b10000` of a five-qubit
//! state is `|10000⟩`.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// Widest register the simulator accepts.
pub const MAX_SIM_QUBITS: usize = 16;

/// Default tolerance for norms, eigenchecks and measurement branch selection.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

type Mat2 = [[Complex64; 2]; 2];

const MAT_X: Mat2 = [[ZERO, ONE], [ONE, ZERO]];
const MAT_Y: Mat2 = [[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]];
const MAT_Z: Mat2 = [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]];
const MAT_S: Mat2 = [[ONE, ZERO], [ZERO, I]];

fn mat_h() -> Mat2 {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`
    pub fn zero(n: usize) -> Result<Self> {
        check_width(n)?;
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = ONE;
        Ok(StateVector { n, amps })
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::Validation(format!("{len} amplitudes is not a power of two")));
        }
        let n = len.trailing_zeros() as usize;
        check_width(n)?;
        Ok(StateVector { n, amps })
    }

    /// Tensor product of single-qubit states `a|0⟩ + b|1⟩`, qubit 0 first.
    /// Each factor is normalized.
    pub fn product(factors: &[[Complex64; 2]]) -> Result<Self> {
        let n = factors.len();
        check_width(n)?;
        let mut amps = vec![ONE; 1 << n];
        for (q, f) in factors.iter().enumerate() {
            let norm = (f[0].norm_sqr() + f[1].norm_sqr()).sqrt();
            if norm == 0.0 {
                return Err(Error::Validation(format!("qubit {q} factor has zero norm")));
            }
            let bit = n - 1 - q;
            for (idx, a) in amps.iter_mut().enumerate() {
                *a *= f[idx >> bit & 1] / norm;
            }
        }
        Ok(StateVector { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, bits: &str) -> Result<Complex64> {
        Ok(self.amps[basis_index(self.n, bits)?])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::Dimension { expected: self.n, found: other.n });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `self ⊗ other`
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        check_width(self.n + other.n)?;
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(StateVector { n: self.n + other.n, amps })
    }

    pub fn scaled(&self, factor: Complex64) -> StateVector {
        StateVector { n: self.n, amps: self.amps.iter().map(|a| a * factor).collect() }
    }

    /// State with qubits reordered: qubit `q` of the result is qubit
    /// `source[q]` of `self`.
    pub fn permute_qubits(&self, source: &[usize]) -> Result<StateVector> {
        if source.len() != self.n {
            return Err(Error::Dimension { expected: self.n, found: source.len() });
        }
        let n = self.n;
        let mut amps = vec![ZERO; self.amps.len()];
        for (old_idx, a) in self.amps.iter().enumerate() {
            let mut new_idx = 0;
            for (q, &src) in source.iter().enumerate() {
                if old_idx >> (n - 1 - src) & 1 == 1 {
                    new_idx |= 1 << (n - 1 - q);
                }
            }
            amps[new_idx] = *a;
        }
        Ok(StateVector { n, amps })
    }

    /// Splits off the trailing `m` qubits, assuming they sit in the computational
    /// basis state `bits` (qubit `n-m` first). Returns the leading register's
    /// state, renormalized, or `None` if that branch has no weight.
    pub fn project_trailing(&self, bits: &[bool]) -> Option<StateVector> {
        let m = bits.len();
        if m > self.n {
            return None;
        }
        let tail = bits.iter().fold(0usize, |acc, &b| acc << 1 | usize::from(b));
        let amps: Vec<Complex64> = (0..1usize << (self.n - m)).map(|hi| self.amps[hi << m | tail]).collect();
        let norm: f64 = amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return None;
        }
        Some(StateVector { n: self.n - m, amps: amps.into_iter().map(|a| a / norm).collect() })
    }

    /// Probability that `qubit` reads 1.
    pub fn prob_one(&self, qubit: usize) -> f64 {
        let bit = self.n - 1 - qubit;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i >> bit & 1 == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// 2x2 reduced density matrix of one qubit.
    pub fn reduced_qubit(&self, qubit: usize) -> [[Complex64; 2]; 2] {
        let bit = self.n - 1 - qubit;
        let mut rho = [[ZERO; 2]; 2];
        for (i, a) in self.amps.iter().enumerate() {
            if i >> bit & 1 == 0 {
                let b = self.amps[i | 1 << bit];
                rho[0][0] += a * a.conj();
                rho[0][1] += a * b.conj();
                rho[1][0] += b * a.conj();
                rho[1][1] += b * b.conj();
            }
        }
        rho
    }

    /// Dump format: one `|bits> re im` line per amplitude above `1e-12`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm() < 1e-12 {
                continue;
            }
            let _ = writeln!(out, "|{}> {} {}", index_bits(self.n, i), fmt_real(a.re), fmt_real(a.im));
        }
        out
    }

    fn apply_1q(&mut self, controls: &[usize], target: usize, m: &Mat2) {
        let n = self.n;
        let tbit = n - 1 - target;
        let cmask = controls.iter().fold(0usize, |acc, &c| acc | 1 << (n - 1 - c));
        for i in 0..self.amps.len() {
            if i >> tbit & 1 == 1 || i & cmask != cmask {
                continue;
            }
            let j = i | 1 << tbit;
            let (a0, a1) = (self.amps[i], self.amps[j]);
            self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
            self.amps[j] = m[1][0] * a0 + m[1][1] * a1;
        }
    }

    fn apply_swap(&mut self, a: usize, b: usize) {
        let (ba, bb) = (self.n - 1 - a, self.n - 1 - b);
        for i in 0..self.amps.len() {
            if i >> ba & 1 == 1 && i >> bb & 1 == 0 {
                let j = (i & !(1 << ba)) | 1 << bb;
                self.amps.swap(i, j);
            }
        }
    }

    fn collapse(&mut self, qubit: usize, outcome: bool, prob: f64) {
        let bit = self.n - 1 - qubit;
        let scale = 1.0 / prob.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i >> bit & 1 == 1) == outcome {
                *a *= scale;
            } else {
                *a = ZERO;
            }
        }
    }
}

fn check_width(n: usize) -> Result<()> {
    if n > MAX_SIM_QUBITS {
        return Err(Error::Validation(format!("{n} qubits exceeds the simulator limit of {MAX_SIM_QUBITS}")));
    }
    Ok(())
}

fn fmt_real(v: f64) -> String {
    let v = if v.abs() < 1e-12 { 0.0 } else { v };
    format!("{v:.10}")
}

fn index_bits(n: usize, i: usize) -> String {
    (0..n).map(|q| if i >> (n - 1 - q) & 1 == 1 { '1' } else { '0' }).collect()
}

fn basis_index(n: usize, bits: &str) -> Result<usize> {
    if bits.chars().count() != n {
        return Err(Error::Dimension { expected: n, found: bits.chars().count() });
    }
    bits.chars().enumerate().try_fold(0usize, |acc, (pos, c)| match c {
        '0' => Ok(acc << 1),
        '1' => Ok(acc << 1 | 1),
        _ => Err(Error::parse(format!("position {pos}"), format!("invalid bit {c:?}"))),
    })
}

/// Seeded random product state: each qubit is `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`
/// with `θ`, `φ` drawn uniformly.
pub fn random_product_state(n: usize, seed: u64) -> Result<StateVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let factors: Vec<[Complex64; 2]> = (0..n)
        .map(|_| {
            let theta = rng.gen_range(0.0..std::f64::consts::PI);
            let phi = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
            [Complex64::new((theta / 2.0).cos(), 0.0), Complex64::from_polar((theta / 2.0).sin(), phi)]
        })
        .collect();
    StateVector::product(&factors)
}

/// Computational basis state from a bit string, qubit 0 first.
pub fn init_basis(n: usize, bits: &str) -> Result<StateVector> {
    let idx = basis_index(n, bits)?;
    let mut s = StateVector::zero(n)?;
    s.amps[0] = ZERO;
    s.amps[idx] = ONE;
    Ok(s)
}

/// Applies one unitary gate. Measurements go through [`run`].
pub fn apply_gate(s: &StateVector, g: &Gate) -> Result<StateVector> {
    let mut out = s.clone();
    apply_gate_in_place(&mut out, g)?;
    Ok(out)
}

fn apply_gate_in_place(s: &mut StateVector, g: &Gate) -> Result<()> {
    g.validate(s.n, usize::MAX)?;
    match *g {
        Gate::H(q) => s.apply_1q(&[], q, &mat_h()),
        Gate::S(q) => s.apply_1q(&[], q, &MAT_S),
        Gate::X(q) => s.apply_1q(&[], q, &MAT_X),
        Gate::Y(q) => s.apply_1q(&[], q, &MAT_Y),
        Gate::Z(q) => s.apply_1q(&[], q, &MAT_Z),
        Gate::CX(c, t) => s.apply_1q(&[c], t, &MAT_X),
        Gate::CY(c, t) => s.apply_1q(&[c], t, &MAT_Y),
        Gate::CZ(c, t) => s.apply_1q(&[c], t, &MAT_Z),
        Gate::CCX(c1, c2, t) => s.apply_1q(&[c1, c2], t, &MAT_X),
        Gate::Swap(a, b) => s.apply_swap(a, b),
        Gate::Measure { .. } => {
            return Err(Error::Validation("measurement is not a unitary gate; use run".into()));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementRecord {
    pub qubit: usize,
    pub cbit: usize,
    /// Probability of reading 1 before the measurement.
    pub p1: f64,
    pub outcome: bool,
    pub deterministic: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub final_state: StateVector,
    pub cbits: Vec<bool>,
    pub transcript: Vec<MeasurementRecord>,
}

impl RunResult {
    pub fn all_deterministic(&self) -> bool {
        self.transcript.iter().all(|m| m.deterministic)
    }
}

/// Runs a circuit from `s0` with the default determinism tolerance.
pub fn run(c: &Circuit, s0: &StateVector, seed: u64) -> Result<RunResult> {
    run_with_tolerance(c, s0, seed, DEFAULT_TOLERANCE)
}

/// Runs a circuit; a measurement whose `p1` lies within `tol` of 0 or 1 is
/// resolved without consuming randomness, otherwise the outcome is drawn
/// from a generator seeded with `seed`.
pub fn run_with_tolerance(c: &Circuit, s0: &StateVector, seed: u64, tol: f64) -> Result<RunResult> {
    if c.nqubits() != s0.n {
        return Err(Error::Dimension { expected: c.nqubits(), found: s0.n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = s0.clone();
    let mut cbits = vec![false; c.ncbits()];
    let mut transcript = Vec::new();
    for g in c.gates() {
        if let Gate::Measure { qubit, cbit } = *g {
            let p1 = state.prob_one(qubit);
            let (outcome, deterministic) = if p1 <= tol {
                (false, true)
            } else if p1 >= 1.0 - tol {
                (true, true)
            } else {
                (rng.gen::<f64>() < p1, false)
            };
            let prob = if outcome { p1 } else { 1.0 - p1 };
            state.collapse(qubit, outcome, prob);
            cbits[cbit] = outcome;
            transcript.push(MeasurementRecord { qubit, cbit, p1, outcome, deterministic });
        } else {
            apply_gate_in_place(&mut state, g)?;
        }
    }
    Ok(RunResult { final_state: state, cbits, transcript })
}

/// Applies a Pauli operator, including its phase.
pub fn apply_pauli_error(s: &StateVector, e: &PauliString) -> Result<StateVector> {
    if e.len() != s.n {
        return Err(Error::Dimension { expected: s.n, found: e.len() });
    }
    let n = s.n;
    let to_index_mask = |m: u64| (0..n).filter(|&q| m >> q & 1 == 1).fold(0usize, |acc, q| acc | 1 << (n - 1 - q));
    let xm = to_index_mask(e.x_mask());
    let zm = to_index_mask(e.z_mask());
    // P = i^phase ⊗ (i^{x z} X^x Z^z), since Y = iXZ.
    let base = I.powu(u32::from(e.phase()) + (e.x_mask() & e.z_mask()).count_ones());
    let mut amps = vec![ZERO; s.amps.len()];
    for (i, a) in s.amps.iter().enumerate() {
        let sign = if (i & zm).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        amps[i ^ xm] = a * base * sign;
    }
    Ok(StateVector { n, amps })
}

/// True iff `|⟨a|b⟩| ≥ 1 − 1e-9`.
pub fn equiv_up_to_phase(a: &StateVector, b: &StateVector) -> Result<bool> {
    Ok(a.inner(b)?.norm() >= 1.0 - DEFAULT_TOLERANCE)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Eigenvalue {
    Plus,
    Minus,
    Indeterminate,
}

/// Compares `p|s⟩` with `±|s⟩` componentwise.
pub fn eigencheck(s: &StateVector, p: &PauliString) -> Result<Eigenvalue> {
    let ps = apply_pauli_error(s, p)?;
    let close = |sign: f64| ps.amps.iter().zip(&s.amps).all(|(a, b)| (a - b * sign).norm() <= DEFAULT_TOLERANCE);
    Ok(if close(1.0) {
        Eigenvalue::Plus
    } else if close(-1.0) {
        Eigenvalue::Minus
    } else {
        Eigenvalue::Indeterminate
    })
}
