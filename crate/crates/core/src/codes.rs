//! Code catalog, code-spec files and end-to-end verification.

use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::circuit::{parse_circuit, Circuit};
use crate::error::{Error, Result};
use crate::f2linalg::{to_standard_form, CheckMatrix, StandardForm};
use crate::pauli::{commutes, parse_pauli, PauliString};
use crate::sim::{self, Eigenvalue, StateVector};
use crate::synth::{self, Correction, ErrorClass, SyndromeTable};

/// Fidelity threshold used for every pass/fail decision.
pub const FIDELITY_THRESHOLD: f64 = 1.0 - 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSpec {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub generators: Vec<PauliString>,
    pub logical_x: Option<Vec<PauliString>>,
    pub logical_z: Option<Vec<PauliString>>,
    /// Path of a layout file, as written in the code-spec file.
    pub layout: Option<String>,
    /// Single-qubit errors the code is meant to correct.
    pub correctable: ErrorClass,
}

impl CodeSpec {
    /// Builds and validates a spec: widths, generator count, commutation,
    /// independence, and commutation of the logicals with the generators.
    pub fn new(name: &str, n: usize, k: usize, generators: Vec<PauliString>) -> Result<Self> {
        let spec = CodeSpec {
            name: name.to_string(),
            n,
            k,
            generators,
            logical_x: None,
            logical_z: None,
            layout: None,
            correctable: ErrorClass::All,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn with_logicals(mut self, x: &[&str], z: &[&str]) -> Result<Self> {
        self.logical_x = Some(x.iter().map(|s| parse_pauli(s)).collect::<Result<_>>()?);
        self.logical_z = Some(z.iter().map(|s| parse_pauli(s)).collect::<Result<_>>()?);
        self.validate()?;
        Ok(self)
    }

    fn with_class(mut self, class: ErrorClass) -> Self {
        self.correctable = class;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k > self.n {
            return Err(Error::Validation(format!("k = {} exceeds n = {}", self.k, self.n)));
        }
        let all_logicals = self.logical_x.iter().chain(&self.logical_z).flatten();
        for p in self.generators.iter().chain(all_logicals.clone()) {
            if p.len() != self.n {
                return Err(Error::Dimension { expected: self.n, found: p.len() });
            }
        }
        if self.generators.len() != self.n - self.k {
            return Err(Error::Validation(format!(
                "an [[{}, {}]] code needs {} generators, found {}",
                self.n,
                self.k,
                self.n - self.k,
                self.generators.len()
            )));
        }
        CheckMatrix::from_paulis(&self.generators)?.validate()?;
        for (name, ops) in [("logical_x", &self.logical_x), ("logical_z", &self.logical_z)] {
            let Some(ops) = ops else { continue };
            if ops.len() != self.k {
                return Err(Error::Validation(format!("{name} lists {} operators, expected {}", ops.len(), self.k)));
            }
            for (i, op) in ops.iter().enumerate() {
                for (j, g) in self.generators.iter().enumerate() {
                    if !commutes(op, g)? {
                        return Err(Error::Validation(format!("{name} {i} anticommutes with generator {j}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn check_matrix(&self) -> Result<CheckMatrix> {
        CheckMatrix::from_paulis(&self.generators)
    }

    pub fn standard_form(&self) -> Result<StandardForm> {
        to_standard_form(&self.check_matrix()?)
    }

    /// Lookup table over the code's correctable class, in original qubit order.
    pub fn syndrome_table(&self) -> Result<SyndromeTable> {
        synth::syndrome_table_for(&self.generators, self.n, self.correctable)
    }

    /// Single-qubit errors in table order, identity last.
    pub fn correctable_errors(&self) -> Vec<PauliString> {
        let mut out = Vec::new();
        for q in 0..self.n {
            for &l in self.correctable.letters() {
                out.push(PauliString::single(self.n, q, l));
            }
        }
        out.push(PauliString::identity(self.n));
        out
    }

    /// Renders the code in code-spec file syntax.
    pub fn to_file_text(&self) -> String {
        let mut out = format!("name {}\nn {}\nk {}\n", self.name, self.n, self.k);
        for g in &self.generators {
            out.push_str(&format!("stabilizer {}\n", g.to_letters()));
        }
        for (key, ops) in [("logical_x", &self.logical_x), ("logical_z", &self.logical_z)] {
            for op in ops.iter().flatten() {
                out.push_str(&format!("{key} {}\n", op.to_letters()));
            }
        }
        if self.correctable != ErrorClass::All {
            out.push_str(&format!("correctable {}\n", self.correctable.name()));
        }
        if let Some(layout) = &self.layout {
            out.push_str(&format!("layout {layout}\n"));
        }
        out
    }
}

pub const BUILTIN_NAMES: [&str; 8] = [
    "bitflip3",
    "phaseflip3",
    "shor9",
    "five_qubit",
    "steane",
    "steane_hamming",
    "steane_systematic",
    "four_two_two",
];

fn paulis(letters: &[&str]) -> Result<Vec<PauliString>> {
    letters.iter().map(|s| parse_pauli(s)).collect()
}

/// Catalog lookup. Three presentations of the Steane code are provided:
/// `steane` uses the cyclic-looking generators starting `XXXXIII`;
/// `steane_hamming` is the CSS code of the Hamming parity-check matrix
/// `[1101100, 1011010, 0111001]`, whose standard form needs a qubit
/// permutation; `steane_systematic` uses the rows of that standard form
/// (`XIIXXXI`, ...) for both the X and the Z checks.
pub fn builtin(name: &str) -> Result<CodeSpec> {
    match name {
        "bitflip3" => Ok(CodeSpec::new(name, 3, 1, paulis(&["ZZI", "ZIZ"])?)?
            .with_logicals(&["XXX"], &["ZII"])?
            .with_class(ErrorClass::BitFlip)),
        "phaseflip3" => Ok(CodeSpec::new(name, 3, 1, paulis(&["XXI", "XIX"])?)?
            .with_logicals(&["ZZZ"], &["XII"])?
            .with_class(ErrorClass::PhaseFlip)),
        "shor9" => CodeSpec::new(
            name,
            9,
            1,
            paulis(&[
                "ZZIIIIIII",
                "ZIZIIIIII",
                "IIIZZIIII",
                "IIIZIZIII",
                "IIIIIIZZI",
                "IIIIIIZIZ",
                "XXXXXXIII",
                "XXXIIIXXX",
            ])?,
        ),
        "five_qubit" => CodeSpec::new(name, 5, 1, paulis(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"])?)?
            .with_logicals(&["XXXXX"], &["ZZZZZ"]),
        "steane" => CodeSpec::new(
            name,
            7,
            1,
            paulis(&["XXXXIII", "XXIIXXI", "XIXIXIX", "ZZZZIII", "ZZIIZZI", "ZIZIZIZ"])?,
        )?
        .with_logicals(&["XXXXXXX"], &["ZZZZZZZ"]),
        "steane_hamming" => CodeSpec::new(
            name,
            7,
            1,
            paulis(&["XXIXXII", "XIXXIXI", "IXXXIIX", "ZZIZZII", "ZIZZIZI", "IZZZIIZ"])?,
        )?
        .with_logicals(&["XXXXXXX"], &["ZZZZZZZ"]),
        "steane_systematic" => CodeSpec::new(
            name,
            7,
            1,
            paulis(&["XIIXXXI", "IXIXIXX", "IIXIXXX", "ZIIZZZI", "IZIZIZZ", "IIZIZZZ"])?,
        )?
        .with_logicals(&["XXXXXXX"], &["ZZZZZZZ"]),
        "four_two_two" => CodeSpec::new(name, 4, 2, paulis(&["XXXX", "ZZZZ"])?),
        _ => Err(Error::UnknownCode(name.to_string())),
    }
}

/// Parses the line-oriented code-spec format:
/// `name`, `n`, `k`, one `stabilizer` per generator, optional `logical_x`,
/// `logical_z`, `layout` and `correctable` (`all`, `bitflip`, `phaseflip`).
pub fn parse_code(text: &str) -> Result<CodeSpec> {
    let mut name = None;
    let mut n = None;
    let mut k = None;
    let mut generators = Vec::new();
    let mut lx = Vec::new();
    let mut lz = Vec::new();
    let mut layout = None;
    let mut correctable = ErrorClass::All;
    for (lineno, raw) in text.lines().enumerate() {
        let loc = format!("line {}", lineno + 1);
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once(char::is_whitespace).map(|(a, b)| (a, b.trim())).unwrap_or((line, ""));
        if value.is_empty() {
            return Err(Error::parse(&loc, format!("`{key}` needs a value")));
        }
        let int = |v: &str| v.parse::<usize>().map_err(|_| Error::parse(&loc, format!("expected an integer, found {v:?}")));
        let pauli = |v: &str| {
            parse_pauli(v).map_err(|e| match e {
                Error::Parse { message, .. } => Error::parse(&loc, message),
                other => other,
            })
        };
        match key {
            "name" => name = Some(value.to_string()),
            "n" => n = Some(int(value)?),
            "k" => k = Some(int(value)?),
            "stabilizer" => generators.push(pauli(value)?),
            "logical_x" => lx.push(pauli(value)?),
            "logical_z" => lz.push(pauli(value)?),
            "layout" => layout = Some(value.to_string()),
            "correctable" => {
                correctable = ErrorClass::from_name(value)
                    .ok_or_else(|| Error::parse(&loc, format!("unknown error class {value:?}")))?;
            }
            _ => return Err(Error::parse(&loc, format!("unknown key `{key}`"))),
        }
    }
    let missing = |what: &str| Error::parse("end of input", format!("missing `{what}`"));
    let spec = CodeSpec {
        name: name.ok_or_else(|| missing("name"))?,
        n: n.ok_or_else(|| missing("n"))?,
        k: k.ok_or_else(|| missing("k"))?,
        generators,
        logical_x: (!lx.is_empty()).then_some(lx),
        logical_z: (!lz.is_empty()).then_some(lz),
        layout,
        correctable,
    };
    spec.validate()?;
    Ok(spec)
}

/// Loads a code-spec file, or a catalog entry written as `builtin:<name>`.
pub fn load_code(path: &str) -> Result<CodeSpec> {
    if let Some(name) = path.strip_prefix("builtin:") {
        return builtin(name);
    }
    let text = std::fs::read_to_string(Path::new(path)).map_err(|e| Error::Io(format!("{path}: {e}")))?;
    parse_code(&text)
}

/// Encoder input: `n-k` zeros followed by the message bits.
pub fn encoder_input(sf: &StandardForm, logical_input: &str) -> Result<StateVector> {
    let k = sf.k();
    if logical_input.chars().count() != k {
        return Err(Error::Dimension { expected: k, found: logical_input.chars().count() });
    }
    let bits = "0".repeat(sf.n() - k) + logical_input;
    sim::init_basis(sf.n(), &bits)
}

/// Runs the encoder on a logical basis state. The result is in
/// standard-form qubit order.
pub fn encode(sf: &StandardForm, logical_input: &str) -> Result<StateVector> {
    let enc = synth::synth_encoder(sf)?;
    Ok(sim::run(&enc, &encoder_input(sf, logical_input)?, 0)?.final_state)
}

/// Encoded state relabeled into the code's original qubit order.
pub fn encode_original_order(sf: &StandardForm, logical_input: &str) -> Result<StateVector> {
    encode(sf, logical_input)?.permute_qubits(&sf.inverse_perm())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundTripReport {
    pub code: String,
    pub logical_input: String,
    pub error: PauliString,
    /// Measured syndrome bits, generator 0 first.
    pub syndrome: String,
    pub expected_syndrome: String,
    pub deterministic: bool,
    pub correction: Option<PauliString>,
    pub fidelity: f64,
    pub pass: bool,
    pub note: Option<String>,
}

fn bits_of(s: &str) -> Vec<bool> {
    s.chars().map(|c| c == '1').collect()
}

/// Encode, inject `error` (original qubit order), extract the syndrome,
/// decode with the lookup table, correct, and compare with the encoded
/// state. Uncorrectable syndromes and sign problems show up in the report.
/// Errors of weight above one are accepted; they usually end in a failed
/// report, which is how miscorrection is demonstrated.
pub fn verify_roundtrip(spec: &CodeSpec, logical_input: &str, error: &PauliString, seed: u64) -> Result<RoundTripReport> {
    if error.len() != spec.n {
        return Err(Error::Dimension { expected: spec.n, found: error.len() });
    }
    let sf = spec.standard_form()?;
    let table = spec.syndrome_table()?;
    let n = spec.n;
    let m = spec.generators.len();
    let encoded = encode(&sf, logical_input)?;

    let mut report = RoundTripReport {
        code: spec.name.clone(),
        logical_input: logical_input.to_string(),
        error: *error,
        syndrome: String::new(),
        expected_syndrome: synth::bits_string(&synth::syndrome_of(&spec.generators, error)?),
        deterministic: false,
        correction: None,
        fidelity: 0.0,
        pass: false,
        note: None,
    };
    let physical_gens: Vec<PauliString> = spec.generators.iter().map(|g| g.permuted(&sf.perm)).collect();
    for (i, g) in physical_gens.iter().enumerate() {
        if sim::eigencheck(&encoded, g)? != Eigenvalue::Plus {
            report.note = Some(format!("encoded state is not a +1 eigenstate of generator {i} ({})", spec.generators[i]));
            return Ok(report);
        }
    }

    let corrupted = sim::apply_pauli_error(&encoded, &error.permuted(&sf.perm))?;
    let syn_circuit = synth::synth_syndrome(&physical_gens, n)?;
    let start = corrupted.tensor(&StateVector::zero(m)?)?;
    let run = sim::run(&syn_circuit, &start, seed)?;
    report.deterministic = run.all_deterministic();
    report.syndrome = synth::bits_string(&run.cbits);
    let Some(data) = run.final_state.project_trailing(&run.cbits) else {
        report.note = Some("ancillas did not end in their measured basis state".into());
        return Ok(report);
    };

    let correction = match table.lookup(&bits_of(&report.syndrome))? {
        Correction::Apply(p) => p,
        Correction::Uncorrectable => {
            report.note = Some(format!("syndrome {} is not in the table", report.syndrome));
            return Ok(report);
        }
    };
    let corrected = sim::apply_pauli_error(&data, &correction.permuted(&sf.perm))?;
    report.correction = Some(correction);
    report.fidelity = encoded.inner(&corrected)?.norm();
    report.pass = report.deterministic
        && report.syndrome == report.expected_syndrome
        && report.fidelity >= FIDELITY_THRESHOLD;
    if !report.deterministic {
        report.note = Some("syndrome measurement was not deterministic".into());
    }
    Ok(report)
}

/// All logical basis inputs of a `k`-qubit message, in binary order.
pub fn logical_inputs(k: usize) -> Vec<String> {
    (0..1usize << k).map(|v| (0..k).map(|b| if v >> (k - 1 - b) & 1 == 1 { '1' } else { '0' }).collect()).collect()
}

/// Every correctable single-qubit error (and the identity) against every
/// logical basis input.
pub fn exhaustive_roundtrip(spec: &CodeSpec, seed: u64) -> Result<Vec<RoundTripReport>> {
    let mut out = Vec::new();
    for input in logical_inputs(spec.k) {
        for e in spec.correctable_errors() {
            out.push(verify_roundtrip(spec, &input, &e, seed)?);
        }
    }
    Ok(out)
}

pub fn shor_encoder() -> Circuit {
    parse_circuit(include_str!("../data/shor9_encoder.circ")).expect("bundled circuit parses")
}

pub fn shor_decoder() -> Circuit {
    parse_circuit(include_str!("../data/shor9_decoder.circ")).expect("bundled circuit parses")
}

/// Encodes `a|0⟩ + b|1⟩` with the nine-qubit reference encoder, applies
/// `error`, decodes, and scores qubit 0 against the message.
pub fn shor_reference_roundtrip(error: &PauliString, message: [Complex64; 2]) -> Result<RoundTripReport> {
    if error.len() != 9 {
        return Err(Error::Dimension { expected: 9, found: error.len() });
    }
    let zero = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    let mut factors = vec![zero; 9];
    factors[0] = message;
    let input = StateVector::product(&factors)?;
    let encoded = sim::run(&shor_encoder(), &input, 0)?.final_state;
    let corrupted = sim::apply_pauli_error(&encoded, error)?;
    let decoded = sim::run(&shor_decoder(), &corrupted, 0)?.final_state;

    let norm = (message[0].norm_sqr() + message[1].norm_sqr()).sqrt();
    let psi = [message[0] / norm, message[1] / norm];
    let rho = decoded.reduced_qubit(0);
    let mut fid = Complex64::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            fid += psi[i].conj() * rho[i][j] * psi[j];
        }
    }
    let fidelity = fid.re;
    Ok(RoundTripReport {
        code: "shor9_reference".into(),
        logical_input: format!("({}, {})", fmt_complex(psi[0]), fmt_complex(psi[1])),
        error: *error,
        syndrome: String::new(),
        expected_syndrome: String::new(),
        deterministic: true,
        correction: None,
        fidelity,
        pass: fidelity >= FIDELITY_THRESHOLD,
        note: None,
    })
}

fn fmt_complex(c: Complex64) -> String {
    if c.im.abs() < 1e-12 {
        format!("{:.4}", c.re)
    } else {
        format!("{:.4}{:+.4}i", c.re, c.im)
    }
}

/// Published expansion of a logical basis state: basis label (original
/// qubit order, qubit 0 first) and amplitude.
pub fn reference_codeword(code: &str, logical_input: &str) -> Option<Vec<(&'static str, f64)>> {
    const FIVE_ZERO: [(&str, f64); 16] = [
        ("00000", 1.0),
        ("10010", 1.0),
        ("01001", 1.0),
        ("10100", 1.0),
        ("01010", 1.0),
        ("11011", -1.0),
        ("00110", -1.0),
        ("11000", -1.0),
        ("11101", -1.0),
        ("00011", -1.0),
        ("11110", -1.0),
        ("01111", -1.0),
        ("10001", -1.0),
        ("01100", -1.0),
        ("10111", -1.0),
        ("00101", 1.0),
    ];
    const FIVE_ONE: [(&str, f64); 16] = [
        ("11111", -1.0),
        ("01101", -1.0),
        ("10110", -1.0),
        ("01011", -1.0),
        ("10101", -1.0),
        ("00100", 1.0),
        ("11001", 1.0),
        ("00111", 1.0),
        ("00010", 1.0),
        ("11100", 1.0),
        ("00001", 1.0),
        ("10000", 1.0),
        ("01110", 1.0),
        ("10011", 1.0),
        ("01000", 1.0),
        ("11010", -1.0),
    ];
    const STEANE_ZERO: [&str; 8] =
        ["0000000", "1111000", "1100110", "1010101", "0011110", "0101101", "0110011", "1001011"];
    const STEANE_ONE: [&str; 8] =
        ["0000111", "1111111", "1100001", "1010010", "0011001", "0101010", "0110100", "1001100"];
    let steane_amp = 1.0 / (2.0 * std::f64::consts::SQRT_2);
    match (code, logical_input) {
        ("five_qubit", "0") => Some(FIVE_ZERO.iter().map(|&(b, s)| (b, s / 4.0)).collect()),
        ("five_qubit", "1") => Some(FIVE_ONE.iter().map(|&(b, s)| (b, s / 4.0)).collect()),
        ("steane", "0") => Some(STEANE_ZERO.iter().map(|&b| (b, steane_amp)).collect()),
        ("steane", "1") => Some(STEANE_ONE.iter().map(|&b| (b, steane_amp)).collect()),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmplitudeTerm {
    pub basis: String,
    pub expected: f64,
    pub actual_re: f64,
    pub actual_im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmplitudeCheck {
    pub code: String,
    pub logical_input: String,
    pub terms: Vec<AmplitudeTerm>,
    /// Basis states whose simulated amplitude disagrees with the reference,
    /// including states absent from the reference with nonzero weight.
    pub mismatches: Vec<String>,
}

impl AmplitudeCheck {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares the simulated codeword, in original qubit order, against the
/// published expansion term by term with tolerance `1e-9`.
pub fn verify_codeword_amplitudes(spec: &CodeSpec, logical_input: &str) -> Result<AmplitudeCheck> {
    let reference = reference_codeword(&spec.name, logical_input).ok_or_else(|| {
        Error::Validation(format!("no reference expansion for {} |{logical_input}⟩", spec.name))
    })?;
    let sf = spec.standard_form()?;
    let state = encode_original_order(&sf, logical_input)?;
    let tol = sim::DEFAULT_TOLERANCE;
    let mut terms = Vec::new();
    let mut mismatches = Vec::new();
    for &(basis, expected) in &reference {
        let a = state.amplitude(basis)?;
        if (a - Complex64::new(expected, 0.0)).norm() > tol {
            mismatches.push(basis.to_string());
        }
        terms.push(AmplitudeTerm { basis: basis.to_string(), expected, actual_re: a.re, actual_im: a.im });
    }
    for (idx, a) in state.amplitudes().iter().enumerate() {
        let label: String = (0..spec.n).map(|q| if idx >> (spec.n - 1 - q) & 1 == 1 { '1' } else { '0' }).collect();
        if a.norm() > tol && !reference.iter().any(|(b, _)| *b == label) {
            mismatches.push(label);
        }
    }
    Ok(AmplitudeCheck { code: spec.name.clone(), logical_input: logical_input.to_string(), terms, mismatches })
}
