//! Test-only helpers: a minimal OpenQASM 2.0 reader scoped to this crate's
//! own emission format, plus trace utilities shared by integration tests.
#![allow(dead_code)] // each test binary uses a different subset

use spinsim::compiler::{Circuit, Gate};
use spinsim::model::SpinChainParams;

/// Parse a program produced by `spinsim::io::emit_qasm` back into a circuit.
///
/// This is not a general QASM parser; it accepts exactly the emitted
/// subset: the two header lines, one qreg/creg pair, and rx/rz/cx/measure
/// statements.
pub fn read_qasm(text: &str) -> Result<Circuit, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some("OPENQASM 2.0;") => {}
        other => return Err(format!("bad version line: {other:?}")),
    }
    match lines.next() {
        Some("include \"qelib1.inc\";") => {}
        other => return Err(format!("bad include line: {other:?}")),
    }
    let n_qubits = match lines.next() {
        Some(l) => parse_reg(l, "qreg q[")?,
        None => return Err("missing qreg".into()),
    };
    match lines.next() {
        Some(l) if parse_reg(l, "creg c[")? == n_qubits => {}
        other => return Err(format!("bad creg line: {other:?}")),
    }

    let mut gates = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        gates.push(parse_statement(line)?);
    }
    Circuit::new(n_qubits, gates).map_err(|e| e.to_string())
}

fn parse_reg(line: &str, prefix: &str) -> Result<usize, String> {
    let rest = line
        .strip_prefix(prefix)
        .ok_or_else(|| format!("expected '{prefix}...': {line}"))?;
    let digits = rest
        .strip_suffix("];")
        .ok_or_else(|| format!("expected '];' suffix: {line}"))?;
    digits.parse().map_err(|e| format!("bad register size: {e}"))
}

fn parse_qubit(token: &str) -> Result<usize, String> {
    token
        .strip_prefix("q[")
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| format!("bad qubit token '{token}'"))?
        .parse()
        .map_err(|e| format!("bad qubit index: {e}"))
}

fn parse_statement(line: &str) -> Result<Gate, String> {
    let line = line
        .strip_suffix(';')
        .ok_or_else(|| format!("missing ';': {line}"))?;
    if let Some(rest) = line.strip_prefix("rx(") {
        let (angle, qubit) = parse_rotation(rest)?;
        return Ok(Gate::Rx { qubit, angle });
    }
    if let Some(rest) = line.strip_prefix("rz(") {
        let (angle, qubit) = parse_rotation(rest)?;
        return Ok(Gate::Rz { qubit, angle });
    }
    if let Some(rest) = line.strip_prefix("cx ") {
        let mut parts = rest.split(',');
        let control = parse_qubit(parts.next().ok_or("missing control")?)?;
        let target = parse_qubit(parts.next().ok_or("missing target")?)?;
        return Ok(Gate::Cnot { control, target });
    }
    if let Some(rest) = line.strip_prefix("measure ") {
        let mut parts = rest.split(" -> ");
        let qubit = parse_qubit(parts.next().ok_or("missing measure qubit")?)?;
        return Ok(Gate::Measure { qubit });
    }
    Err(format!("unrecognized statement '{line}'"))
}

fn parse_rotation(rest: &str) -> Result<(f64, usize), String> {
    let close = rest.find(')').ok_or("missing ')'")?;
    let angle: f64 = rest[..close]
        .parse()
        .map_err(|e| format!("bad angle: {e}"))?;
    let qubit = parse_qubit(rest[close + 1..].trim())?;
    Ok((angle, qubit))
}

/// Chain parameters at the default coupling: J_z = 0.01 eV, 4.8 THz drive.
pub fn chain_params(n_qubits: usize, eps_ratio: f64, dt: f64, n_steps: usize) -> SpinChainParams {
    SpinChainParams::new(n_qubits, 0.01, eps_ratio * 0.01, 4.8, dt, n_steps).unwrap()
}

/// Trotter-circuit magnetization at every step boundary (statevector).
///
/// Evolves incrementally; gate-identity with the circuit-per-step protocol
/// is covered by the compiler's prefix tests.
pub fn trotter_trace(params: &SpinChainParams, n_steps: usize) -> Vec<f64> {
    let mut state = spinsim::init_all_up(params.n_qubits);
    let mut out = vec![spinsim::average_magnetization(&state)];
    for j in 0..n_steps {
        for gate in spinsim::compile_step(params, j) {
            state.apply(&gate).unwrap();
        }
        out.push(spinsim::average_magnetization(&state));
    }
    out
}
