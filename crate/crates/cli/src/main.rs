//! `stabforge` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 invalid input, 3 verification failure.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use serde_json::{json, Value};
use stabforge::circuit::{gate_counts, optimize_trivial_z, parse_circuit, Circuit, GateKind};
use stabforge::codes::{self, CodeSpec, RoundTripReport};
use stabforge::f2linalg::{format_symplectic_row, CheckMatrix};
use stabforge::pauli::PauliString;
use stabforge::route::{decompose_swaps, is_compliant, parse_layout, route, routed_overlap};
use stabforge::sim::{self, StateVector};
use stabforge::synth;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "stabforge", version, about = "Stabilizer-code compiler and verifier")]
struct Cli {
    /// Tolerance for determinism and fidelity checks.
    #[arg(long, global = true, default_value_t = sim::DEFAULT_TOLERANCE)]
    tolerance: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the check matrix, its standard form, permutation and logical operators.
    StandardForm {
        /// Code-spec file or `builtin:<name>`.
        code: String,
        #[arg(long)]
        json: bool,
    },
    /// Emit an encoder or syndrome-measurement circuit.
    #[command(group(ArgGroup::new("kind").required(true).args(["encoder", "syndrome"])))]
    Synth {
        code: String,
        #[arg(long)]
        encoder: bool,
        #[arg(long)]
        syndrome: bool,
        /// Drop Z/CZ gates that act on qubits still in |0>.
        #[arg(long)]
        optimize: bool,
    },
    /// Print the single-error syndrome table.
    Table {
        code: String,
        /// `error=... syndrome=... decimal=...` lines instead of the aligned table.
        #[arg(long, conflicts_with = "json")]
        rows: bool,
        #[arg(long)]
        json: bool,
    },
    /// Simulate a circuit file and dump the final state.
    Simulate {
        circuit: String,
        /// Initial computational basis state, qubit 0 first (default all zeros).
        #[arg(long)]
        init: Option<String>,
        #[arg(long, env = "STABFORGE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Encode, inject an error, extract the syndrome, correct and compare.
    Verify {
        code: String,
        /// Every correctable single-qubit error against every logical basis state.
        #[arg(long, conflicts_with_all = ["input", "error"])]
        exhaustive: bool,
        /// Logical basis state (default all zeros).
        #[arg(long)]
        input: Option<String>,
        /// Injected error in original qubit order (default identity).
        #[arg(long)]
        error: Option<String>,
        #[arg(long, env = "STABFORGE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Insert SWAPs so every two-qubit gate acts on neighboring grid sites.
    Route {
        circuit: String,
        #[arg(long)]
        layout: String,
        /// Replace each SWAP by three CX gates.
        #[arg(long)]
        decompose: bool,
        /// Also check equivalence with the input on 21 states.
        #[arg(long)]
        check: bool,
        #[arg(long, env = "STABFORGE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Gate-count summary of a circuit file.
    Report {
        circuit: String,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Invalid(String),
    Verification(String),
}

impl From<stabforge::Error> for Failure {
    fn from(e: stabforge::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type CmdResult = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(out)) => {
            print!("{out}");
            ExitCode::from(3)
        }
    }
}

fn dispatch(cli: &Cli) -> CmdResult {
    let tol = cli.tolerance;
    if !(0.0..1.0).contains(&tol) {
        return Err(Failure::Invalid(format!("tolerance {tol} must lie in [0, 1)")));
    }
    match &cli.command {
        Command::StandardForm { code, json } => cmd_standard_form(code, *json),
        Command::Synth { code, encoder, optimize, .. } => cmd_synth(code, *encoder, *optimize),
        Command::Table { code, rows, json } => cmd_table(code, *rows, *json),
        Command::Simulate { circuit, init, seed, json } => cmd_simulate(circuit, init.as_deref(), *seed, tol, *json),
        Command::Verify { code, exhaustive, input, error, seed, json } => {
            cmd_verify(code, *exhaustive, input.as_deref(), error.as_deref(), *seed, tol, *json)
        }
        Command::Route { circuit, layout, decompose, check, seed, json } => {
            cmd_route(circuit, layout, *decompose, *check, *seed, tol, *json)
        }
        Command::Report { circuit, json } => cmd_report(circuit, *json),
    }
}

fn read_file(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{path}: {e}")))
}

fn load_circuit(path: &str) -> Result<Circuit, Failure> {
    parse_circuit(&read_file(path)?).map_err(|e| Failure::Invalid(format!("{path}: {e}")))
}

fn to_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"
}

fn matrix_rows(h: &CheckMatrix) -> Vec<String> {
    (0..h.num_rows())
        .map(|i| format!("{}|{}", h.xblock().row_string(i), h.zblock().row_string(i)))
        .collect()
}

fn describe(spec: &CodeSpec) -> String {
    format!("{} [[{}, {}]]", spec.name, spec.n, spec.k)
}

fn cmd_standard_form(code: &str, json: bool) -> CmdResult {
    let spec = codes::load_code(code)?;
    let hq = spec.check_matrix()?;
    let sf = spec.standard_form()?;
    let xl: Vec<String> = (0..sf.k()).map(|i| format_symplectic_row(&sf.xlogical, i)).collect();
    let zl: Vec<String> = (0..sf.k()).map(|i| format_symplectic_row(&sf.zlogical, i)).collect();
    if json {
        return Ok(to_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "code": spec.name,
            "n": spec.n,
            "k": spec.k,
            "r": sf.r,
            "check_matrix": matrix_rows(&hq),
            "standard_form": matrix_rows(&sf.hs),
            "permutation": sf.perm,
            "logical_x": xl,
            "logical_z": zl,
        })));
    }
    let mut out = String::new();
    let _ = writeln!(out, "code: {}", describe(&spec));
    let _ = writeln!(out, "check matrix H_q:");
    for row in matrix_rows(&hq) {
        let _ = writeln!(out, "  {row}");
    }
    let _ = writeln!(out, "standard form H_s:");
    for row in matrix_rows(&sf.hs) {
        let _ = writeln!(out, "  {row}");
    }
    let _ = writeln!(out, "r: {}", sf.r);
    if sf.is_identity_perm() {
        let _ = writeln!(out, "permutation: identity");
    } else {
        let arrows: Vec<String> = sf.perm.iter().enumerate().map(|(p, q)| format!("{}<-{}", p + 1, q + 1)).collect();
        let _ = writeln!(out, "permutation: {} (position <- original qubit, 1-based)", arrows.join(" "));
    }
    for (i, (x, z)) in xl.iter().zip(&zl).enumerate() {
        let _ = writeln!(out, "logical X{}: {x}", i + 1);
        let _ = writeln!(out, "logical Z{}: {z}", i + 1);
    }
    Ok(out)
}

fn cmd_synth(code: &str, encoder: bool, optimize: bool) -> CmdResult {
    let spec = codes::load_code(code)?;
    if encoder {
        let sf = spec.standard_form()?;
        let mut circ = synth::synth_encoder(&sf)?;
        if optimize {
            circ = optimize_trivial_z(&circ, &synth::encoder_zero_qubits(&sf));
        }
        let perm: Vec<String> = sf.perm.iter().map(usize::to_string).collect();
        let mut out = format!("# encoder for {}\n", describe(&spec));
        let _ = writeln!(out, "# message qubits: {}..{}", spec.n - spec.k, spec.n - 1);
        let _ = writeln!(out, "# position p holds original qubit: {}", perm.join(" "));
        out.push_str(&circ.serialize());
        Ok(out)
    } else {
        let circ = synth::synth_syndrome(&spec.generators, spec.n)?;
        let mut out = format!("# syndrome measurement for {}\n", describe(&spec));
        let _ = writeln!(out, "# ancilla {} + i measures generator i into bit i", spec.n);
        out.push_str(&circ.serialize());
        Ok(out)
    }
}

fn cmd_table(code: &str, rows: bool, json: bool) -> CmdResult {
    let spec = codes::load_code(code)?;
    let table = spec.syndrome_table()?;
    if json {
        let entries: Vec<Value> = table
            .rows()
            .iter()
            .map(|r| json!({"error": r.error.to_letters(), "syndrome": r.bits(), "decimal": r.decimal()}))
            .collect();
        let gens: Vec<String> = table.generators().iter().map(PauliString::to_letters).collect();
        return Ok(to_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "code": spec.name,
            "generators": gens,
            "error_class": table.class(),
            "rows": entries,
        })));
    }
    if rows {
        return Ok(table.to_rows());
    }
    Ok(format!("syndrome table for {}\n{}", describe(&spec), table.to_text()))
}

fn cmd_simulate(path: &str, init: Option<&str>, seed: u64, tol: f64, json: bool) -> CmdResult {
    let circ = load_circuit(path)?;
    let n = circ.nqubits();
    let s0 = match init {
        Some(bits) => sim::init_basis(n, bits)?,
        None => StateVector::zero(n)?,
    };
    let run = sim::run_with_tolerance(&circ, &s0, seed, tol)?;
    let cbits = synth::bits_string(&run.cbits);
    if json {
        let amps: Vec<Value> = run
            .final_state
            .dump()
            .lines()
            .map(|l| {
                let parts: Vec<&str> = l.split_whitespace().collect();
                json!({
                    "basis": parts[0].trim_start_matches('|').trim_end_matches('>'),
                    "re": parts[1].parse::<f64>().unwrap_or(f64::NAN),
                    "im": parts[2].parse::<f64>().unwrap_or(f64::NAN),
                })
            })
            .collect();
        return Ok(to_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "qubits": n,
            "seed": seed,
            "amplitudes": amps,
            "cbits": cbits,
            "measurements": run.transcript,
        })));
    }
    let mut out = run.final_state.dump();
    if circ.ncbits() > 0 {
        let _ = writeln!(out, "cbits: {cbits}");
    }
    for m in &run.transcript {
        let _ = writeln!(
            out,
            "measure q{} -> c{}: p1={:.6} outcome={} {}",
            m.qubit,
            m.cbit,
            m.p1,
            u8::from(m.outcome),
            if m.deterministic { "deterministic" } else { "random" }
        );
    }
    Ok(out)
}

fn case_passes(r: &RoundTripReport, tol: f64) -> bool {
    r.pass && r.fidelity >= 1.0 - tol
}

fn cmd_verify(
    code: &str,
    exhaustive: bool,
    input: Option<&str>,
    error: Option<&str>,
    seed: u64,
    tol: f64,
    json: bool,
) -> CmdResult {
    let spec = codes::load_code(code)?;
    let reports = if exhaustive {
        codes::exhaustive_roundtrip(&spec, seed)?
    } else {
        let input = input.map(str::to_string).unwrap_or_else(|| "0".repeat(spec.k));
        let error = match error {
            Some(text) => text.parse::<PauliString>()?,
            None => PauliString::identity(spec.n),
        };
        vec![codes::verify_roundtrip(&spec, &input, &error, seed)?]
    };
    let passed = reports.iter().filter(|r| case_passes(r, tol)).count();
    let failed = reports.len() - passed;
    let out = if json {
        let cases: Vec<Value> = reports
            .iter()
            .map(|r| {
                let mut v = serde_json::to_value(r).expect("reports serialize");
                v["pass"] = json!(case_passes(r, tol));
                v
            })
            .collect();
        to_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "code": spec.name,
            "seed": seed,
            "tolerance": tol,
            "cases": cases,
            "passed": passed,
            "failed": failed,
        }))
    } else {
        let mut out = format!("round trip for {}\n", describe(&spec));
        for r in &reports {
            let correction = r.correction.as_ref().map_or_else(|| "-".to_string(), PauliString::to_letters);
            let _ = write!(
                out,
                "{} |{}> error={} syndrome={} expected={} correction={} fidelity={:.12}",
                if case_passes(r, tol) { "PASS" } else { "FAIL" },
                r.logical_input,
                r.error.to_letters(),
                r.syndrome,
                r.expected_syndrome,
                correction,
                r.fidelity
            );
            if let Some(note) = &r.note {
                let _ = write!(out, " ({note})");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "{passed}/{} cases passed", reports.len());
        out
    };
    if failed == 0 {
        Ok(out)
    } else {
        Err(Failure::Verification(out))
    }
}

fn cmd_route(path: &str, layout: &str, decompose: bool, check: bool, seed: u64, tol: f64, json: bool) -> CmdResult {
    let circ = load_circuit(path)?;
    let gl = parse_layout(&read_file(layout)?).map_err(|e| Failure::Invalid(format!("{layout}: {e}")))?;
    let g = gl.graph()?;
    let routed = route(&circ, &g, &gl.layout)?;
    let compliant = is_compliant(&routed.circuit, &g, &gl.layout);
    let mut min_overlap = None;
    if check {
        let n = circ.nqubits();
        let mut inputs = vec![StateVector::zero(n)?];
        for i in 0..20 {
            inputs.push(sim::random_product_state(n, seed.wrapping_add(i))?);
        }
        let mut min = f64::INFINITY;
        for s in &inputs {
            min = min.min(routed_overlap(&circ, &routed, s)?);
        }
        min_overlap = Some(min);
    }
    let output = if decompose { decompose_swaps(&routed.circuit) } else { routed.circuit.clone() };
    let final_sites: Vec<String> = routed
        .final_layout
        .sites()
        .iter()
        .enumerate()
        .map(|(q, s)| format!("q{q}@({},{})", s / gl.cols, s % gl.cols))
        .collect();
    let ok = compliant && min_overlap.is_none_or(|m| m >= 1.0 - tol);
    let out = if json {
        to_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "grid": [gl.rows, gl.cols],
            "swap_count": routed.swap_count,
            "decomposed": decompose,
            "compliant": compliant,
            "min_overlap": min_overlap,
            "final_layout": routed.final_layout.sites(),
            "wire_sites": routed.wire_sites,
            "circuit": output.serialize(),
        }))
    } else {
        let mut out = String::new();
        let _ = writeln!(out, "# routed on a {}x{} grid; wire w sits at site {:?}", gl.rows, gl.cols, routed.wire_sites);
        let _ = writeln!(out, "# swaps: {}", routed.swap_count);
        if decompose {
            let _ = writeln!(out, "# swaps decomposed into {} CX", 3 * routed.swap_count);
        }
        let _ = writeln!(out, "# compliant: {}", if compliant { "yes" } else { "no" });
        if let Some(m) = min_overlap {
            let _ = writeln!(out, "# min overlap with input circuit: {m:.12}");
        }
        let _ = writeln!(out, "# final layout: {}", final_sites.join(" "));
        out.push_str(&output.serialize());
        out
    };
    if ok {
        Ok(out)
    } else {
        Err(Failure::Verification(out))
    }
}

fn cmd_report(path: &str, json: bool) -> CmdResult {
    let circ = load_circuit(path)?;
    let counts = gate_counts(&circ);
    let total: usize = counts.values().sum();
    if json {
        let map: serde_json::Map<String, Value> =
            counts.iter().map(|(k, v)| (k.mnemonic().to_string(), json!(v))).collect();
        return Ok(to_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "qubits": circ.nqubits(),
            "cbits": circ.ncbits(),
            "counts": map,
            "total": total,
        })));
    }
    let mut out = format!("qubits {}  cbits {}\n", circ.nqubits(), circ.ncbits());
    for kind in GateKind::ALL {
        let _ = writeln!(out, "{:<6}{}", kind.mnemonic(), counts[&kind]);
    }
    let _ = writeln!(out, "{:<6}{total}", "total");
    Ok(out)
}
