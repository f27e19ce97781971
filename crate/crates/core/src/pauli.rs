//! Pauli strings in the binary symplectic representation.
//!
//! A string over `n` qubits is stored as two bit masks (bit `j` is qubit `j`,
//! the leftmost letter) plus a phase `i^p`. The letter at qubit `j` is
//! `I`, `X`, `Z` or `Y` for `(x_j, z_j)` = `(0,0)`, `(1,0)`, `(0,1)`, `(1,1)`,
//! where `Y` is the Hermitian matrix `[[0,-i],[i,0]]`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported qubit count for a single Pauli string.
pub const MAX_QUBITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub const ALL: [PauliLetter; 4] = [PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z];

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliLetter::I,
            (true, false) => PauliLetter::X,
            (false, true) => PauliLetter::Z,
            (true, true) => PauliLetter::Y,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            PauliLetter::I => (false, false),
            PauliLetter::X => (true, false),
            PauliLetter::Z => (false, true),
            PauliLetter::Y => (true, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(PauliLetter::I),
            'X' => Some(PauliLetter::X),
            'Y' => Some(PauliLetter::Y),
            'Z' => Some(PauliLetter::Z),
            _ => None,
        }
    }
}

impl fmt::Display for PauliLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// An `n`-qubit Pauli operator `i^phase · P_0 ⊗ … ⊗ P_{n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits supported");
        PauliString { n, x: 0, z: 0, phase: 0 }
    }

    /// Builds a string from bit masks; bit `j` of each mask is qubit `j`.
    pub fn from_masks(n: usize, x: u64, z: u64, phase: u8) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits supported");
        let mask = low_mask(n);
        PauliString { n, x: x & mask, z: z & mask, phase: phase & 3 }
    }

    pub fn from_bits(xbits: &[bool], zbits: &[bool]) -> Result<Self> {
        if xbits.len() != zbits.len() {
            return Err(Error::Dimension { expected: xbits.len(), found: zbits.len() });
        }
        let mut p = PauliString::identity(xbits.len());
        for (j, (&x, &z)) in xbits.iter().zip(zbits).enumerate() {
            p.set(j, PauliLetter::from_bits(x, z));
        }
        Ok(p)
    }

    /// A single non-identity letter on qubit `q` of an `n`-qubit register.
    pub fn single(n: usize, q: usize, letter: PauliLetter) -> Self {
        let mut p = PauliString::identity(n);
        p.set(q, letter);
        p
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Exponent `p` of the overall factor `i^p`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase & 3;
        self
    }

    pub fn xbits(&self) -> Vec<bool> {
        (0..self.n).map(|j| self.x >> j & 1 == 1).collect()
    }

    pub fn zbits(&self) -> Vec<bool> {
        (0..self.n).map(|j| self.z >> j & 1 == 1).collect()
    }

    pub fn letter(&self, q: usize) -> PauliLetter {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        PauliLetter::from_bits(self.x >> q & 1 == 1, self.z >> q & 1 == 1)
    }

    pub fn set(&mut self, q: usize, letter: PauliLetter) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (x, z) = letter.bits();
        self.x = (self.x & !(1 << q)) | (u64::from(x) << q);
        self.z = (self.z & !(1 << q)) | (u64::from(z) << q);
    }

    pub fn letters(&self) -> impl Iterator<Item = PauliLetter> + '_ {
        (0..self.n).map(move |q| self.letter(q))
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Letter rendering without the phase, e.g. `XZZXI`.
    pub fn to_letters(&self) -> String {
        self.letters().map(PauliLetter::as_char).collect()
    }

    /// `[xbits|zbits]` rendering used in check-matrix listings.
    pub fn to_binary(&self) -> String {
        let bits = |m: u64| -> String {
            (0..self.n).map(|j| if m >> j & 1 == 1 { '1' } else { '0' }).collect()
        };
        format!("[{}|{}]", bits(self.x), bits(self.z))
    }

    /// Moves the letter on qubit `perm[p]` to position `p`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n, "permutation length must match string length");
        let mut out = PauliString::identity(self.n).with_phase(self.phase);
        for (p, &src) in perm.iter().enumerate() {
            out.set(p, self.letter(src));
        }
        out
    }

    /// Inverse of [`PauliString::permuted`].
    pub fn unpermuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n, "permutation length must match string length");
        let mut out = PauliString::identity(self.n).with_phase(self.phase);
        for (p, &dst) in perm.iter().enumerate() {
            out.set(dst, self.letter(p));
        }
        out
    }

    /// Widens the string with identities on `extra` trailing qubits.
    pub fn padded(&self, extra: usize) -> Self {
        PauliString::from_masks(self.n + extra, self.x, self.z, self.phase)
    }
}

fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Parses a letter string such as `XZZXI`. The result always has phase `+1`.
pub fn parse_pauli(text: &str) -> Result<PauliString> {
    parse_letters(text, 0)
}

fn parse_letters(text: &str, offset: usize) -> Result<PauliString> {
    if text.is_empty() {
        return Err(Error::parse(format!("position {offset}"), "empty Pauli string"));
    }
    let n = text.chars().count();
    if n > MAX_QUBITS {
        return Err(Error::parse(format!("position {offset}"), format!("more than {MAX_QUBITS} qubits")));
    }
    let mut p = PauliString::identity(n);
    for (pos, c) in text.chars().enumerate() {
        let letter = PauliLetter::from_char(c).ok_or_else(|| {
            Error::parse(format!("position {}", pos + offset), format!("invalid Pauli letter {c:?}"))
        })?;
        p.set(pos, letter);
    }
    Ok(p)
}

/// Parses the display form: an optional `+`, `-`, `i`, `+i` or `-i`
/// prefix followed by letters.
pub fn parse_signed_pauli(text: &str) -> Result<PauliString> {
    let (phase, rest) = [("-i", 3u8), ("+i", 1), ("i", 1), ("-", 2), ("+", 0)]
        .iter()
        .find_map(|&(prefix, ph)| text.strip_prefix(prefix).map(|r| (ph, r)))
        .unwrap_or((0, text));
    Ok(parse_letters(rest, text.len() - rest.len())?.with_phase(phase))
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_signed_pauli(s)
    }
}

/// GF(2) symplectic form; `1` means the operators anticommute.
pub fn symplectic_product(a: &PauliString, b: &PauliString) -> Result<u8> {
    if a.n != b.n {
        return Err(Error::Dimension { expected: a.n, found: b.n });
    }
    Ok((((a.x & b.z) ^ (a.z & b.x)).count_ones() & 1) as u8)
}

pub fn commutes(a: &PauliString, b: &PauliString) -> Result<bool> {
    symplectic_product(a, b).map(|s| s == 0)
}

/// Operator product `a · b` with exact phase.
pub fn multiply(a: &PauliString, b: &PauliString) -> Result<PauliString> {
    if a.n != b.n {
        return Err(Error::Dimension { expected: a.n, found: b.n });
    }
    // Per-qubit: P_a P_b = i^g P_c with g from the single-qubit multiplication table.
    let mut exp = i32::from(a.phase) + i32::from(b.phase);
    for q in 0..a.n {
        let (x1, z1) = (a.x >> q & 1, a.z >> q & 1);
        let (x2, z2) = (b.x >> q & 1, b.z >> q & 1);
        let (x2, z2) = (x2 as i32, z2 as i32);
        exp += match (x1, z1) {
            (0, 0) => 0,
            (1, 1) => z2 - x2,
            (1, 0) => z2 * (2 * x2 - 1),
            _ => x2 * (1 - 2 * z2),
        };
    }
    Ok(PauliString {
        n: a.n,
        x: a.x ^ b.x,
        z: a.z ^ b.z,
        phase: exp.rem_euclid(4) as u8,
    })
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}{}", self.to_letters())
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
