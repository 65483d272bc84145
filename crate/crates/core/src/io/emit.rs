//! Text emission of lowered circuits.
//!
//! OpenQASM 2.0 for IBM-style toolchains, Quil for Rigetti-style ones. Both
//! emitters require native gates only (RX, RZ, CNOT, MEASURE); run
//! [`crate::compiler::lower_to_native`] first. Angles are normalized to
//! (-pi, pi] and printed in Rust's shortest round-trip notation, which
//! preserves all 17 significant digits a double can need.

use std::fmt::Write as _;

use crate::compiler::{Circuit, Gate};
use crate::error::{Error, Result};

/// Map an angle into (-pi, pi]. Values already in range pass through
/// bit-exactly.
pub fn normalize_angle(theta: f64) -> f64 {
    use std::f64::consts::PI;
    if theta > -PI && theta <= PI {
        return theta;
    }
    let wrapped = theta.rem_euclid(2.0 * PI); // [0, 2*pi)
    if wrapped > PI {
        wrapped - 2.0 * PI
    } else {
        wrapped
    }
}

fn reject_unlowered(circuit: &Circuit) -> Result<()> {
    for g in circuit.gates() {
        if matches!(g, Gate::Rzz { .. }) {
            return Err(Error::UnloweredCircuit("RZZ".into()));
        }
    }
    Ok(())
}

/// Render a lowered circuit as an OpenQASM 2.0 program.
pub fn emit_qasm(circuit: &Circuit) -> Result<String> {
    reject_unlowered(circuit)?;
    let n = circuit.n_qubits();
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{n}];");
    let _ = writeln!(out, "creg c[{n}];");
    for gate in circuit.gates() {
        match *gate {
            Gate::Rx { qubit, angle } => {
                let _ = writeln!(out, "rx({}) q[{qubit}];", normalize_angle(angle));
            }
            Gate::Rz { qubit, angle } => {
                let _ = writeln!(out, "rz({}) q[{qubit}];", normalize_angle(angle));
            }
            Gate::Cnot { control, target } => {
                let _ = writeln!(out, "cx q[{control}],q[{target}];");
            }
            Gate::Measure { qubit } => {
                let _ = writeln!(out, "measure q[{qubit}] -> c[{qubit}];");
            }
            Gate::Rzz { .. } => unreachable!("rejected above"),
        }
    }
    Ok(out)
}

/// Render a lowered circuit as a Quil program.
pub fn emit_quil(circuit: &Circuit) -> Result<String> {
    reject_unlowered(circuit)?;
    let n = circuit.n_qubits();
    let mut out = String::new();
    let _ = writeln!(out, "DECLARE ro BIT[{n}]");
    for gate in circuit.gates() {
        match *gate {
            Gate::Rx { qubit, angle } => {
                let _ = writeln!(out, "RX({}) {qubit}", normalize_angle(angle));
            }
            Gate::Rz { qubit, angle } => {
                let _ = writeln!(out, "RZ({}) {qubit}", normalize_angle(angle));
            }
            Gate::Cnot { control, target } => {
                let _ = writeln!(out, "CNOT {control} {target}");
            }
            Gate::Measure { qubit } => {
                let _ = writeln!(out, "MEASURE {qubit} ro[{qubit}]");
            }
            Gate::Rzz { .. } => unreachable!("rejected above"),
        }
    }
    Ok(out)
}
