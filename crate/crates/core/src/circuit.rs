//! Circuit IR: gates, validation, the line-oriented text format, gate
//! counting and the redundant-Z peephole pass.
//!
//! Text format, one item per line, all indices 0-based:
//!
//! ```text
//! qubits 2
//! cbits 1
//! H 0
//! CX 0 1
//! M 1 -> 0
//! ```
//!
//! Blank lines and `#` comments are ignored. List order is application order.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GateKind {
    H,
    S,
    X,
    Y,
    Z,
    CX,
    CY,
    CZ,
    CCX,
    SWAP,
    MEASURE,
}

impl GateKind {
    pub const ALL: [GateKind; 11] = [
        GateKind::H,
        GateKind::S,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::CX,
        GateKind::CY,
        GateKind::CZ,
        GateKind::CCX,
        GateKind::SWAP,
        GateKind::MEASURE,
    ];

    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::CX => "CX",
            GateKind::CY => "CY",
            GateKind::CZ => "CZ",
            GateKind::CCX => "CCX",
            GateKind::SWAP => "SWAP",
            GateKind::MEASURE => "M",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::H | GateKind::S | GateKind::X | GateKind::Y | GateKind::Z | GateKind::MEASURE => 1,
            GateKind::CX | GateKind::CY | GateKind::CZ | GateKind::SWAP => 2,
            GateKind::CCX => 3,
        }
    }

    fn from_mnemonic(s: &str) -> Option<Self> {
        GateKind::ALL.into_iter().find(|k| k.mnemonic() == s)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

/// One gate. Two-qubit controlled gates list control then target; `CCX`
/// lists both controls then the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    X(usize),
    Y(usize),
    Z(usize),
    CX(usize, usize),
    CY(usize, usize),
    CZ(usize, usize),
    CCX(usize, usize, usize),
    Swap(usize, usize),
    Measure { qubit: usize, cbit: usize },
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::H(_) => GateKind::H,
            Gate::S(_) => GateKind::S,
            Gate::X(_) => GateKind::X,
            Gate::Y(_) => GateKind::Y,
            Gate::Z(_) => GateKind::Z,
            Gate::CX(..) => GateKind::CX,
            Gate::CY(..) => GateKind::CY,
            Gate::CZ(..) => GateKind::CZ,
            Gate::CCX(..) => GateKind::CCX,
            Gate::Swap(..) => GateKind::SWAP,
            Gate::Measure { .. } => GateKind::MEASURE,
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) => vec![q],
            Gate::Measure { qubit, .. } => vec![qubit],
            Gate::CX(a, b) | Gate::CY(a, b) | Gate::CZ(a, b) | Gate::Swap(a, b) => vec![a, b],
            Gate::CCX(a, b, c) => vec![a, b, c],
        }
    }

    /// Same gate with every qubit operand passed through `f`.
    pub fn map_qubits(&self, mut f: impl FnMut(usize) -> usize) -> Gate {
        match *self {
            Gate::H(q) => Gate::H(f(q)),
            Gate::S(q) => Gate::S(f(q)),
            Gate::X(q) => Gate::X(f(q)),
            Gate::Y(q) => Gate::Y(f(q)),
            Gate::Z(q) => Gate::Z(f(q)),
            Gate::CX(a, b) => Gate::CX(f(a), f(b)),
            Gate::CY(a, b) => Gate::CY(f(a), f(b)),
            Gate::CZ(a, b) => Gate::CZ(f(a), f(b)),
            Gate::CCX(a, b, c) => Gate::CCX(f(a), f(b), f(c)),
            Gate::Swap(a, b) => Gate::Swap(f(a), f(b)),
            Gate::Measure { qubit, cbit } => Gate::Measure { qubit: f(qubit), cbit },
        }
    }

    fn from_parts(kind: GateKind, q: &[usize], cbit: Option<usize>) -> Gate {
        match kind {
            GateKind::H => Gate::H(q[0]),
            GateKind::S => Gate::S(q[0]),
            GateKind::X => Gate::X(q[0]),
            GateKind::Y => Gate::Y(q[0]),
            GateKind::Z => Gate::Z(q[0]),
            GateKind::CX => Gate::CX(q[0], q[1]),
            GateKind::CY => Gate::CY(q[0], q[1]),
            GateKind::CZ => Gate::CZ(q[0], q[1]),
            GateKind::CCX => Gate::CCX(q[0], q[1], q[2]),
            GateKind::SWAP => Gate::Swap(q[0], q[1]),
            GateKind::MEASURE => Gate::Measure { qubit: q[0], cbit: cbit.unwrap_or(0) },
        }
    }

    /// Checks operand distinctness and index ranges.
    pub fn validate(&self, nqubits: usize, ncbits: usize) -> Result<()> {
        let qs = self.qubits();
        for (i, &a) in qs.iter().enumerate() {
            if a >= nqubits {
                return Err(Error::Validation(format!("{self}: qubit {a} out of range for {nqubits} qubits")));
            }
            if qs[..i].contains(&a) {
                return Err(Error::Validation(format!("{self}: repeated operand {a}")));
            }
        }
        if let Gate::Measure { cbit, .. } = *self {
            if cbit >= ncbits {
                return Err(Error::Validation(format!("{self}: classical bit {cbit} out of range for {ncbits} bits")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Gate::Measure { qubit, cbit } = self {
            return write!(f, "M {qubit} -> {cbit}");
        }
        write!(f, "{}", self.kind())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Circuit {
    nqubits: usize,
    ncbits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(nqubits: usize, ncbits: usize) -> Self {
        Circuit { nqubits, ncbits, gates: Vec::new() }
    }

    pub fn from_gates(nqubits: usize, ncbits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::new(nqubits, ncbits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn nqubits(&self) -> usize {
        self.nqubits
    }

    pub fn ncbits(&self) -> usize {
        self.ncbits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, g: Gate) -> Result<()> {
        g.validate(self.nqubits, self.ncbits)?;
        self.gates.push(g);
        Ok(())
    }

    /// Appends all gates of `other`, which must fit in this circuit's width.
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        for &g in &other.gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// Same gates, with measurements dropped.
    pub fn without_measurements(&self) -> Circuit {
        Circuit {
            nqubits: self.nqubits,
            ncbits: self.ncbits,
            gates: self.gates.iter().copied().filter(|g| g.kind() != GateKind::MEASURE).collect(),
        }
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind() == kind).count()
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("qubits {}\ncbits {}\n", self.nqubits, self.ncbits);
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// Count per gate kind; every kind is present, absent kinds map to 0.
pub fn gate_counts(c: &Circuit) -> BTreeMap<GateKind, usize> {
    let mut counts: BTreeMap<GateKind, usize> = GateKind::ALL.iter().map(|&k| (k, 0)).collect();
    for g in c.gates() {
        *counts.entry(g.kind()).or_default() += 1;
    }
    counts
}

pub fn serialize(c: &Circuit) -> String {
    c.serialize()
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut nqubits = None;
    let mut ncbits = None;
    let mut circuit: Option<Circuit> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let loc = || format!("line {lineno}");
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let number = |t: &str| -> Result<usize> {
            t.parse::<usize>()
                .map_err(|_| Error::parse(loc(), format!("expected a non-negative integer, found {t:?}")))
        };
        match tokens[0] {
            "qubits" | "cbits" => {
                if circuit.is_some() {
                    return Err(Error::parse(loc(), "header after first gate"));
                }
                if tokens.len() != 2 {
                    return Err(Error::parse(loc(), format!("`{}` takes one value", tokens[0])));
                }
                let v = number(tokens[1])?;
                let slot = if tokens[0] == "qubits" { &mut nqubits } else { &mut ncbits };
                if slot.replace(v).is_some() {
                    return Err(Error::parse(loc(), format!("duplicate `{}` header", tokens[0])));
                }
            }
            name => {
                let kind = GateKind::from_mnemonic(name)
                    .ok_or_else(|| Error::parse(loc(), format!("unknown gate {name:?}")))?;
                let c = match circuit.as_mut() {
                    Some(c) => c,
                    None => {
                        let nq = nqubits.ok_or_else(|| Error::parse(loc(), "missing `qubits` header"))?;
                        circuit.insert(Circuit::new(nq, ncbits.unwrap_or(0)))
                    }
                };
                let (qubits, cbit) = if kind == GateKind::MEASURE {
                    if tokens.len() != 4 || tokens[2] != "->" {
                        return Err(Error::parse(loc(), "expected `M <qubit> -> <cbit>`"));
                    }
                    (vec![number(tokens[1])?], Some(number(tokens[3])?))
                } else {
                    if tokens.len() != kind.arity() + 1 {
                        return Err(Error::parse(
                            loc(),
                            format!("{name} takes {} operand(s), found {}", kind.arity(), tokens.len() - 1),
                        ));
                    }
                    (tokens[1..].iter().map(|t| number(t)).collect::<Result<Vec<_>>>()?, None)
                };
                let gate = Gate::from_parts(kind, &qubits, cbit);
                c.push(gate).map_err(|e| match e {
                    Error::Validation(msg) => Error::Validation(format!("line {lineno}: {msg}")),
                    other => other,
                })?;
            }
        }
    }
    match circuit {
        Some(c) => Ok(c),
        None => {
            let nq = nqubits.ok_or_else(|| Error::parse("end of input", "missing `qubits` header"))?;
            Ok(Circuit::new(nq, ncbits.unwrap_or(0)))
        }
    }
}

impl std::str::FromStr for Circuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_circuit(s)
    }
}

/// Drops `Z` and `CZ` gates that act as the identity because their target
/// qubit is still in `|0⟩`.
///
/// A qubit listed in `zero_init` stays `|0⟩` while every gate touching it is
/// diagonal (`Z`, `S`, `CZ`) or uses it only as a control; the first gate
/// that can move it out of `|0⟩` (any non-diagonal target, a `SWAP`) ends
/// that. Measurement of a `|0⟩` qubit leaves it in `|0⟩`.
pub fn optimize_trivial_z(c: &Circuit, zero_init: &[usize]) -> Circuit {
    let mut clean = vec![false; c.nqubits()];
    for &q in zero_init {
        if q < clean.len() {
            clean[q] = true;
        }
    }
    let mut out = Circuit::new(c.nqubits(), c.ncbits());
    for &g in c.gates() {
        match g {
            Gate::Z(q) if clean[q] => continue,
            Gate::CZ(_, t) if clean[t] => continue,
            Gate::H(q) | Gate::X(q) | Gate::Y(q) => clean[q] = false,
            Gate::CX(_, t) | Gate::CY(_, t) | Gate::CCX(_, _, t) => clean[t] = false,
            Gate::Swap(a, b) => {
                let both = clean[a] && clean[b];
                clean[a] = both;
                clean[b] = both;
            }
            Gate::Z(_) | Gate::S(_) | Gate::CZ(..) | Gate::Measure { .. } => {}
        }
        out.gates.push(g);
    }
    out
}
