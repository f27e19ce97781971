//! Encoder and syndrome-circuit synthesis, syndrome tables and lookup decoding.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::f2linalg::{CheckMatrix, StandardForm};
use crate::pauli::{symplectic_product, PauliLetter, PauliString};

/// Builds the encoder for a code in standard form.
///
/// Message qubits sit at positions `n-k..n`; all others start in `|0⟩`.
/// The first stage copies each message qubit onto the X-part support of its
/// logical X. The second stage, for each of the first `r` rows, puts the
/// pivot qubit into `|+⟩` (or `|+i⟩` when the row has a Y on its pivot) and
/// applies the row's Pauli controlled on that pivot.
pub fn synth_encoder(sf: &StandardForm) -> Result<Circuit> {
    let n = sf.n();
    let k = sf.k();
    let r = sf.r;
    let hs = &sf.hs;
    if sf.xlogical.rows() != k || sf.xlogical.cols() != 2 * n {
        return Err(Error::Validation(format!(
            "logical X block is {}x{}, expected {k}x{}",
            sf.xlogical.rows(),
            sf.xlogical.cols(),
            2 * n
        )));
    }
    if r > hs.num_rows() {
        return Err(Error::Validation(format!("rank {r} exceeds {} generators", hs.num_rows())));
    }
    for i in 0..r {
        if !hs.xblock().get(i, i) {
            return Err(Error::Validation(format!("row {i} has no X pivot on qubit {i}; not in standard form")));
        }
    }

    let mut c = Circuit::new(n, 0);
    for i in 0..k {
        let control = n - k + i;
        for j in 0..n {
            if j != control && sf.xlogical.get(i, j) {
                c.push(Gate::CX(control, j))?;
            }
        }
    }
    for i in 0..r {
        c.push(Gate::H(i))?;
        if hs.zblock().get(i, i) {
            c.push(Gate::S(i))?;
        }
        for j in (0..n).filter(|&j| j != i) {
            match (hs.xblock().get(i, j), hs.zblock().get(i, j)) {
                (true, false) => c.push(Gate::CX(i, j))?,
                (false, true) => c.push(Gate::CZ(i, j))?,
                (true, true) => c.push(Gate::CY(i, j))?,
                (false, false) => {}
            }
        }
    }
    Ok(c)
}

/// Qubits an encoder expects in `|0⟩`: every position before the message block.
pub fn encoder_zero_qubits(sf: &StandardForm) -> Vec<usize> {
    (0..sf.n() - sf.k()).collect()
}

/// Ancilla-based syndrome extraction, one ancilla `n+i` and classical bit `i`
/// per generator: `H`, controlled Pauli onto each support qubit, `H`, measure.
pub fn synth_syndrome(generators: &[PauliString], n: usize) -> Result<Circuit> {
    check_generators(generators, n)?;
    let m = generators.len();
    let mut c = Circuit::new(n + m, m);
    for (i, g) in generators.iter().enumerate() {
        let a = n + i;
        c.push(Gate::H(a))?;
        for j in 0..n {
            match g.letter(j) {
                PauliLetter::I => {}
                PauliLetter::X => c.push(Gate::CX(a, j))?,
                PauliLetter::Y => c.push(Gate::CY(a, j))?,
                PauliLetter::Z => c.push(Gate::CZ(a, j))?,
            }
        }
        c.push(Gate::H(a))?;
        c.push(Gate::Measure { qubit: a, cbit: i })?;
    }
    Ok(c)
}

fn check_generators(generators: &[PauliString], n: usize) -> Result<()> {
    for g in generators {
        if g.len() != n {
            return Err(Error::Dimension { expected: n, found: g.len() });
        }
    }
    for i in 0..generators.len() {
        for j in i + 1..generators.len() {
            if symplectic_product(&generators[i], &generators[j])? == 1 {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }
    Ok(())
}

/// Which single-qubit errors a table is built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorClass {
    #[default]
    All,
    BitFlip,
    PhaseFlip,
}

impl ErrorClass {
    /// Letters in table row order.
    pub fn letters(self) -> &'static [PauliLetter] {
        match self {
            ErrorClass::All => &[PauliLetter::X, PauliLetter::Z, PauliLetter::Y],
            ErrorClass::BitFlip => &[PauliLetter::X],
            ErrorClass::PhaseFlip => &[PauliLetter::Z],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ErrorClass::All => "all",
            ErrorClass::BitFlip => "bitflip",
            ErrorClass::PhaseFlip => "phaseflip",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "all" => Some(ErrorClass::All),
            "bitflip" => Some(ErrorClass::BitFlip),
            "phaseflip" => Some(ErrorClass::PhaseFlip),
            _ => None,
        }
    }

    pub fn contains(self, e: &PauliString) -> bool {
        e.letters().all(|l| l == PauliLetter::I || self.letters().contains(&l))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SyndromeRow {
    pub error: PauliString,
    pub syndrome: Vec<bool>,
}

impl SyndromeRow {
    pub fn bits(&self) -> String {
        bits_string(&self.syndrome)
    }

    pub fn decimal(&self) -> u64 {
        syndrome_decimal(&self.syndrome)
    }
}

/// Result of decoding a syndrome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Correction {
    /// Apply this operator (the identity for a trivial syndrome).
    Apply(PauliString),
    Uncorrectable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyndromeTable {
    generators: Vec<PauliString>,
    class: ErrorClass,
    rows: Vec<SyndromeRow>,
    index: BTreeMap<Vec<bool>, usize>,
}

/// Table over all `3n` single-qubit errors plus the identity.
pub fn syndrome_table(generators: &[PauliString], n: usize) -> Result<SyndromeTable> {
    syndrome_table_for(generators, n, ErrorClass::All)
}

/// Table over the single-qubit errors of `class` plus the identity. Rows run
/// qubit by qubit (X, Z, Y within a qubit) with the identity last. Two errors
/// sharing a syndrome is a code-property error.
pub fn syndrome_table_for(generators: &[PauliString], n: usize, class: ErrorClass) -> Result<SyndromeTable> {
    check_generators(generators, n)?;
    let mut rows = Vec::with_capacity(3 * n + 1);
    for q in 0..n {
        for &letter in class.letters() {
            rows.push(PauliString::single(n, q, letter));
        }
    }
    rows.push(PauliString::identity(n));

    let mut table = SyndromeTable { generators: generators.to_vec(), class, rows: Vec::new(), index: BTreeMap::new() };
    for error in rows {
        let syndrome = syndrome_of(generators, &error)?;
        if let Some(&prev) = table.index.get(&syndrome) {
            return Err(Error::CodeProperty(format!(
                "errors {} and {} share syndrome {}; single-error lookup is ambiguous",
                table.rows[prev].error,
                error,
                bits_string(&syndrome)
            )));
        }
        table.index.insert(syndrome.clone(), table.rows.len());
        table.rows.push(SyndromeRow { error, syndrome });
    }
    Ok(table)
}

/// Bit `i` is the symplectic product of `error` with generator `i`.
pub fn syndrome_of(generators: &[PauliString], error: &PauliString) -> Result<Vec<bool>> {
    generators.iter().map(|g| Ok(symplectic_product(error, g)? == 1)).collect()
}

/// Generator 0 is the most significant bit.
pub fn syndrome_decimal(bits: &[bool]) -> u64 {
    bits.iter().fold(0, |acc, &b| acc << 1 | u64::from(b))
}

pub fn bits_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Returns the unique table error with this syndrome, the identity for an
/// all-zero syndrome, or [`Correction::Uncorrectable`].
pub fn correction_lookup(t: &SyndromeTable, s: &[bool]) -> Result<Correction> {
    if s.len() != t.generators.len() {
        return Err(Error::Dimension { expected: t.generators.len(), found: s.len() });
    }
    Ok(match t.index.get(s) {
        Some(&i) => Correction::Apply(t.rows[i].error),
        None => Correction::Uncorrectable,
    })
}

impl SyndromeTable {
    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn class(&self) -> ErrorClass {
        self.class
    }

    pub fn rows(&self) -> &[SyndromeRow] {
        &self.rows
    }

    pub fn n(&self) -> usize {
        self.rows[0].error.len()
    }

    pub fn lookup(&self, s: &[bool]) -> Result<Correction> {
        correction_lookup(self, s)
    }

    /// Aligned table: one column per qubit, one per generator, then the decimal value.
    pub fn to_text(&self) -> String {
        let n = self.n();
        let m = self.generators.len();
        let qw = (n.to_string().len() + 1).max(2);
        let mw = (m.to_string().len() + 1).max(2);
        let mut out = String::new();
        for q in 0..n {
            let _ = write!(out, "{:>qw$} ", format!("q{}", q + 1));
        }
        out.push('|');
        for i in 0..m {
            let _ = write!(out, " {:>mw$}", format!("M{}", i + 1));
        }
        out.push_str(" | decimal\n");
        for row in &self.rows {
            for l in row.error.letters() {
                let _ = write!(out, "{:>qw$} ", l.as_char());
            }
            out.push('|');
            for &b in &row.syndrome {
                let _ = write!(out, " {:>mw$}", u8::from(b));
            }
            let _ = writeln!(out, " | {}", row.decimal());
        }
        out
    }

    /// `error=IYIII syndrome=1101 decimal=13` lines.
    pub fn to_rows(&self) -> String {
        self.rows
            .iter()
            .map(|r| format!("error={} syndrome={} decimal={}\n", r.error.to_letters(), r.bits(), r.decimal()))
            .collect()
    }
}

/// Standard-form rows as `+1`-phase Pauli strings, in the encoder's qubit order.
pub fn standard_form_generators(sf: &StandardForm) -> Vec<PauliString> {
    sf.hs.rows_as_paulis()
}

/// Original generators relabeled into standard-form qubit order.
pub fn permuted_generators(h: &CheckMatrix, perm: &[usize]) -> Vec<PauliString> {
    h.rows_as_paulis().iter().map(|g| g.permuted(perm)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{gate_counts, GateKind};
    use crate::pauli::parse_pauli;

    fn paulis(v: &[&str]) -> Vec<PauliString> {
        v.iter().map(|s| parse_pauli(s).unwrap()).collect()
    }

    #[test]
    fn minimal_syndrome_circuit() {
        let c = synth_syndrome(&paulis(&["Z"]), 1).unwrap();
        assert_eq!(c.gates(), &[Gate::H(1), Gate::CZ(1, 0), Gate::H(1), Gate::Measure { qubit: 1, cbit: 0 }]);
        assert!(matches!(synth_syndrome(&paulis(&["X", "Z"]), 1), Err(Error::NonCommuting(0, 1))));
    }

    #[test]
    fn syndrome_circuit_counts() {
        let g = paulis(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]);
        let counts = gate_counts(&synth_syndrome(&g, 5).unwrap());
        assert_eq!(counts[&GateKind::H], 8);
        assert_eq!(counts[&GateKind::CX], 8);
        assert_eq!(counts[&GateKind::CZ], 8);
        assert_eq!(counts[&GateKind::MEASURE], 4);
    }

    #[test]
    fn table_and_lookup() {
        let g = paulis(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]);
        let t = syndrome_table(&g, 5).unwrap();
        assert_eq!(t.rows().len(), 16);
        assert_eq!(t.rows()[0].decimal(), 1);
        assert_eq!(t.rows()[15].decimal(), 0);
        assert_eq!(t.lookup(&[false, true, true, true]).unwrap(), Correction::Apply(parse_pauli("IIIIY").unwrap()));
        assert_eq!(t.lookup(&[false; 4]).unwrap(), Correction::Apply(PauliString::identity(5)));
        assert!(t.lookup(&[false; 3]).is_err());
        assert!(t.to_rows().contains("error=IYIII syndrome=1101 decimal=13\n"));
    }

    #[test]
    fn ambiguous_and_class_tables() {
        let g = paulis(&["ZZI", "ZIZ"]);
        assert!(matches!(syndrome_table(&g, 3), Err(Error::CodeProperty(_))));
        let t = syndrome_table_for(&g, 3, ErrorClass::BitFlip).unwrap();
        assert_eq!(t.rows().len(), 4);
        assert_eq!(t.lookup(&[false, true]).unwrap(), Correction::Apply(parse_pauli("IIX").unwrap()));
        assert!(ErrorClass::BitFlip.contains(&parse_pauli("IXI").unwrap()));
        assert!(!ErrorClass::BitFlip.contains(&parse_pauli("IZI").unwrap()));
    }
}
