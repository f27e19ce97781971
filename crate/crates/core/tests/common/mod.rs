//! Dense-matrix reference model: Pauli and gate matrices written out
//! explicitly and lifted to `n` qubits with Kronecker products.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use stabforge::circuit::Gate;
use stabforge::pauli::{PauliLetter, PauliString};

pub type Mat = Vec<Vec<Complex64>>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(d: usize) -> Mat {
    (0..d).map(|i| (0..d).map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect()).collect()
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0, 0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let d = a.len();
    let mut out = vec![vec![c(0.0, 0.0); d]; d];
    for i in 0..d {
        for k in 0..d {
            if a[i][k] == c(0.0, 0.0) {
                continue;
            }
            for j in 0..d {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn add(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect()).collect()
}

pub fn scale(a: &Mat, s: Complex64) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x * s).collect()).collect()
}

pub fn matvec(a: &Mat, v: &[Complex64]) -> Vec<Complex64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn close_vec(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
}

pub fn close_mat(a: &Mat, b: &Mat, tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| close_vec(x, y, tol))
}

pub fn mat_i() -> Mat {
    identity(2)
}

pub fn mat_x() -> Mat {
    vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]
}

pub fn mat_y() -> Mat {
    vec![vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]]
}

pub fn mat_z() -> Mat {
    vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0)]]
}

pub fn mat_h() -> Mat {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![vec![c(h, 0.0), c(h, 0.0)], vec![c(h, 0.0), c(-h, 0.0)]]
}

pub fn mat_s() -> Mat {
    vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 1.0)]]
}

fn proj0() -> Mat {
    vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]]
}

fn proj1() -> Mat {
    vec![vec![c(0.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]
}

pub fn letter_matrix(l: PauliLetter) -> Mat {
    match l {
        PauliLetter::I => mat_i(),
        PauliLetter::X => mat_x(),
        PauliLetter::Y => mat_y(),
        PauliLetter::Z => mat_z(),
    }
}

/// Tensor product of per-qubit factors, qubit 0 leftmost.
pub fn lift(n: usize, factors: &[(usize, Mat)]) -> Mat {
    let mut out = vec![vec![c(1.0, 0.0)]];
    for q in 0..n {
        let f = factors.iter().find(|(p, _)| *p == q).map(|(_, m)| m.clone()).unwrap_or_else(mat_i);
        out = kron(&out, &f);
    }
    out
}

/// `i^phase` times the tensor product of the letters.
pub fn pauli_matrix(p: &PauliString) -> Mat {
    let factors: Vec<(usize, Mat)> = (0..p.len()).map(|q| (q, letter_matrix(p.letter(q)))).collect();
    scale(&lift(p.len(), &factors), c(0.0, 1.0).powu(u32::from(p.phase())))
}

fn controlled(n: usize, ctrl: usize, target: usize, u: Mat) -> Mat {
    add(&lift(n, &[(ctrl, proj0())]), &lift(n, &[(ctrl, proj1()), (target, u)]))
}

pub fn gate_matrix(n: usize, g: &Gate) -> Mat {
    match *g {
        Gate::H(q) => lift(n, &[(q, mat_h())]),
        Gate::S(q) => lift(n, &[(q, mat_s())]),
        Gate::X(q) => lift(n, &[(q, mat_x())]),
        Gate::Y(q) => lift(n, &[(q, mat_y())]),
        Gate::Z(q) => lift(n, &[(q, mat_z())]),
        Gate::CX(a, b) => controlled(n, a, b, mat_x()),
        Gate::CY(a, b) => controlled(n, a, b, mat_y()),
        Gate::CZ(a, b) => controlled(n, a, b, mat_z()),
        Gate::CCX(a, b, t) => {
            let both = lift(n, &[(a, proj1()), (b, proj1())]);
            let flip = lift(n, &[(a, proj1()), (b, proj1()), (t, mat_x())]);
            add(&add(&identity(1 << n), &scale(&both, c(-1.0, 0.0))), &flip)
        }
        Gate::Swap(a, b) => {
            let terms = [mat_i(), mat_x(), mat_y(), mat_z()].map(|m| lift(n, &[(a, m.clone()), (b, m)]));
            let sum = terms.iter().skip(1).fold(terms[0].clone(), |acc, t| add(&acc, t));
            scale(&sum, c(0.5, 0.0))
        }
        Gate::Measure { .. } => panic!("measurement has no unitary"),
    }
}

pub fn random_letter(rng: &mut impl Rng) -> PauliLetter {
    PauliLetter::ALL[rng.gen_range(0..4)]
}

pub fn random_pauli(rng: &mut impl Rng, n: usize) -> PauliString {
    let mut p = PauliString::identity(n);
    for q in 0..n {
        p.set(q, random_letter(rng));
    }
    p.with_phase(rng.gen_range(0..4))
}

pub fn random_vector(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..1usize << n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / norm).collect()
}

/// Random unitary gate on `n` qubits (no three-qubit gates when `n < 3`).
pub fn random_gate(rng: &mut impl Rng, n: usize) -> Gate {
    let distinct = |rng: &mut dyn rand::RngCore, k: usize| -> Vec<usize> {
        let mut qs: Vec<usize> = Vec::new();
        while qs.len() < k {
            let q = rng.gen_range(0..n);
            if !qs.contains(&q) {
                qs.push(q);
            }
        }
        qs
    };
    let choices = if n >= 3 { 10 } else if n == 2 { 9 } else { 5 };
    match rng.gen_range(0..choices) {
        0 => Gate::H(rng.gen_range(0..n)),
        1 => Gate::S(rng.gen_range(0..n)),
        2 => Gate::X(rng.gen_range(0..n)),
        3 => Gate::Y(rng.gen_range(0..n)),
        4 => Gate::Z(rng.gen_range(0..n)),
        5..=8 => {
            let q = distinct(rng, 2);
            [Gate::CX(q[0], q[1]), Gate::CY(q[0], q[1]), Gate::CZ(q[0], q[1]), Gate::Swap(q[0], q[1])][rng.gen_range(0..4)]
        }
        _ => {
            let q = distinct(rng, 3);
            Gate::CCX(q[0], q[1], q[2])
        }
    }
}
