//! Gate-level compilation of the Trotterized time-evolution operator.
//!
//! One evolution step over [j dt, (j+1) dt] splits the Hamiltonian into its
//! exchange and field parts and exponentiates each separately:
//!
//! ```text
//! U_j ~ exp(-i H_x((j+1/2) dt) dt / hbar) * exp(-i H_z dt / hbar)
//! ```
//!
//! with the field sampled at the step midpoint. The exchange factor becomes
//! one RZZ per bond with angle -2 J_z dt / hbar, the field factor one RX per
//! qubit with angle -2 J_X(t_mid) dt / hbar. The rightmost factor acts first,
//! so emitted gate order is Z-part then X-part. A full circuit for time n dt
//! is the concatenation of steps j = 0..n-1 followed by a measurement layer.
//!
//! Gate-matrix conventions:
//! RX(theta) = exp(-i theta/2 X), RZ(theta) = exp(-i theta/2 Z),
//! RZZ(theta) = exp(-i theta/2 Z (x) Z), CNOT standard.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{transverse_field, DenseOperator, SpinChainParams, HBAR_EV_FS};

/// One gate of the circuit IR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Rx { qubit: usize, angle: f64 },
    Rz { qubit: usize, angle: f64 },
    Rzz { a: usize, b: usize, angle: f64 },
    Cnot { control: usize, target: usize },
    Measure { qubit: usize },
}

impl Gate {
    /// Qubits the gate touches, in declaration order.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Rx { qubit, .. } | Gate::Rz { qubit, .. } | Gate::Measure { qubit } => {
                vec![qubit]
            }
            Gate::Rzz { a, b, .. } => vec![a, b],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rx { angle, .. } | Gate::Rz { angle, .. } | Gate::Rzz { angle, .. } => {
                Some(angle)
            }
            _ => None,
        }
    }

    pub fn is_unitary(&self) -> bool {
        !matches!(self, Gate::Measure { .. })
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let qs = self.qubits();
        for &q in &qs {
            if q >= n_qubits {
                return Err(Error::InvalidGate(format!(
                    "qubit {q} out of range for {n_qubits}-qubit register"
                )));
            }
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::InvalidGate(format!(
                "two-qubit gate uses qubit {} twice",
                qs[0]
            )));
        }
        if let Some(a) = self.angle() {
            if !a.is_finite() {
                return Err(Error::InvalidGate(format!("non-finite angle {a}")));
            }
        }
        Ok(())
    }
}

/// Provenance attached to a compiled circuit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitMeta {
    /// Total steps n this circuit evolves through.
    pub n_steps: usize,
    /// Parameter snapshot the circuit was compiled from.
    pub params: SpinChainParams,
}

/// Ordered gate list on a fixed-width register.
///
/// Measurements, when present, form a suffix: no unitary gate may follow a
/// MEASURE.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    meta: Option<CircuitMeta>,
}

impl Circuit {
    pub fn new(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidCircuit("register must have >= 1 qubit".into()));
        }
        let mut seen_measure = false;
        for g in &gates {
            g.validate(n_qubits)?;
            match g {
                Gate::Measure { .. } => seen_measure = true,
                _ if seen_measure => {
                    return Err(Error::InvalidCircuit(
                        "unitary gate after a measurement".into(),
                    ))
                }
                _ => {}
            }
        }
        Ok(Self {
            n_qubits,
            gates,
            meta: None,
        })
    }

    pub fn with_meta(mut self, meta: CircuitMeta) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn meta(&self) -> Option<&CircuitMeta> {
        self.meta.as_ref()
    }

    /// Unitary prefix of the gate list (everything before the measure layer).
    pub fn unitary_gates(&self) -> impl Iterator<Item = &Gate> {
        self.gates.iter().filter(|g| g.is_unitary())
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Copy with all zero-angle rotations removed. Gate counts then depend on
    /// the drive amplitude, so compilation keeps them by default.
    pub fn without_zero_angle_gates(&self) -> Circuit {
        let gates = self
            .gates
            .iter()
            .filter(|g| g.angle().is_none_or(|a| a != 0.0))
            .copied()
            .collect();
        Circuit {
            n_qubits: self.n_qubits,
            gates,
            meta: self.meta,
        }
    }
}

/// Exchange-factor rotation angle, -2 J_z dt / hbar.
pub fn zz_angle(params: &SpinChainParams) -> f64 {
    -2.0 * params.j_z * params.dt / HBAR_EV_FS
}

/// Field-factor rotation angle for step `j`, -2 J_X((j+1/2) dt) dt / hbar.
pub fn x_angle(params: &SpinChainParams, step: usize) -> f64 {
    let t_mid = (step as f64 + 0.5) * params.dt;
    -2.0 * transverse_field(params, t_mid) * params.dt / HBAR_EV_FS
}

/// Gates realizing one Trotter step: RZZ on every bond, then RX on every
/// qubit. Zero-angle gates are emitted so gate counts stay deterministic.
pub fn compile_step(params: &SpinChainParams, step: usize) -> Vec<Gate> {
    let mut gates = Vec::with_capacity(2 * params.n_qubits);
    let theta_zz = zz_angle(params);
    for i in 0..params.n_qubits.saturating_sub(1) {
        gates.push(Gate::Rzz {
            a: i,
            b: i + 1,
            angle: theta_zz,
        });
    }
    let theta_x = x_angle(params, step);
    for q in 0..params.n_qubits {
        gates.push(Gate::Rx {
            qubit: q,
            angle: theta_x,
        });
    }
    gates
}

/// Full circuit advancing the register through `n_steps` steps, measuring
/// every qubit at the end. `n_steps = 0` compiles to the measurement layer
/// alone.
pub fn compile_circuit(params: &SpinChainParams, n_steps: usize) -> Result<Circuit> {
    params.validate()?;
    let mut gates = Vec::new();
    for j in 0..n_steps {
        gates.extend(compile_step(params, j));
    }
    for q in 0..params.n_qubits {
        gates.push(Gate::Measure { qubit: q });
    }
    Ok(Circuit::new(params.n_qubits, gates)?.with_meta(CircuitMeta {
        n_steps,
        params: *params,
    }))
}

/// Rewrite RZZ gates into the native set: RZZ(theta) on (a, b) becomes
/// CNOT(a, b), RZ(theta) on b, CNOT(a, b). The action is identical, including
/// global phase.
pub fn lower_to_native(circuit: &Circuit) -> Circuit {
    let mut gates = Vec::with_capacity(circuit.len());
    for g in circuit.gates() {
        match *g {
            Gate::Rzz { a, b, angle } => {
                gates.push(Gate::Cnot {
                    control: a,
                    target: b,
                });
                gates.push(Gate::Rz { qubit: b, angle });
                gates.push(Gate::Cnot {
                    control: a,
                    target: b,
                });
            }
            other => gates.push(other),
        }
    }
    Circuit {
        n_qubits: circuit.n_qubits(),
        gates,
        meta: circuit.meta().copied(),
    }
}

/// Dense matrix of a unitary gate on its own qubits (2x2 or 4x4, basis
/// ordered by the gate's qubit list, first qubit = bit 0).
pub fn gate_matrix(gate: &Gate) -> Result<DenseOperator> {
    let zero = Complex64::new(0.0, 0.0);
    let mat = match *gate {
        Gate::Rx { angle, .. } => {
            let c = Complex64::new((angle / 2.0).cos(), 0.0);
            let s = Complex64::new(0.0, -(angle / 2.0).sin());
            DMatrix::from_row_slice(2, 2, &[c, s, s, c])
        }
        Gate::Rz { angle, .. } => {
            let em = Complex64::from_polar(1.0, -angle / 2.0);
            let ep = Complex64::from_polar(1.0, angle / 2.0);
            DMatrix::from_row_slice(2, 2, &[em, zero, zero, ep])
        }
        Gate::Rzz { angle, .. } => {
            let em = Complex64::from_polar(1.0, -angle / 2.0);
            let ep = Complex64::from_polar(1.0, angle / 2.0);
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![em, ep, ep, em]))
        }
        Gate::Cnot { .. } => {
            // control = bit 0, target = bit 1 of the local index
            let one = Complex64::new(1.0, 0.0);
            let mut m = DMatrix::zeros(4, 4);
            m[(0, 0)] = one;
            m[(2, 2)] = one;
            m[(3, 1)] = one;
            m[(1, 3)] = one;
            m
        }
        Gate::Measure { .. } => return Err(Error::MeasureNotUnitary),
    };
    DenseOperator::from_matrix(mat)
}
