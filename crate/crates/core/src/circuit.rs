//! Flat gate-list circuits, depth metrics and OpenQASM 2.0 export.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::pauli::CliffordGate;
use crate::topology::Topology;

#[derive(Debug, Copy, Clone, PartialEq)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    V(usize),
    Vdg(usize),
    /// `exp(-i angle/2 Z)`.
    Rz(usize, f64),
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::V(q) | Gate::Vdg(q) | Gate::Rz(q, _) => vec![q],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }

    pub fn adjoint(self) -> Self {
        match self {
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            Gate::V(q) => Gate::Vdg(q),
            Gate::Vdg(q) => Gate::V(q),
            Gate::Rz(q, a) => Gate::Rz(q, -a),
            g => g,
        }
    }

    /// Same gate with every qubit index passed through `map`.
    pub fn relabel(self, map: impl Fn(usize) -> usize) -> Self {
        match self {
            Gate::H(q) => Gate::H(map(q)),
            Gate::S(q) => Gate::S(map(q)),
            Gate::Sdg(q) => Gate::Sdg(map(q)),
            Gate::V(q) => Gate::V(map(q)),
            Gate::Vdg(q) => Gate::Vdg(map(q)),
            Gate::Rz(q, a) => Gate::Rz(map(q), a),
            Gate::Cnot { control, target } => Gate::Cnot { control: map(control), target: map(target) },
        }
    }
}

impl From<CliffordGate> for Gate {
    fn from(g: CliffordGate) -> Self {
        match g {
            CliffordGate::H(q) => Gate::H(q),
            CliffordGate::S(q) => Gate::S(q),
            CliffordGate::Sdg(q) => Gate::Sdg(q),
            CliffordGate::V(q) => Gate::V(q),
            CliffordGate::Vdg(q) => Gate::Vdg(q),
            CliffordGate::Cnot { control, target } => Gate::Cnot { control, target },
        }
    }
}

/// Gates are stored in application order: index 0 acts first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

#[derive(Debug, Copy, Clone, PartialEq, Eq, Default)]
pub struct Metrics {
    pub cnot_count: usize,
    pub depth: usize,
    pub two_qubit_depth: usize,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit { num_qubits, gates: Vec::new() }
    }

    pub fn from_gates(num_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::new(num_qubits);
        for g in gates {
            c.append(g)?;
        }
        Ok(c)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
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

    pub fn append(&mut self, gate: impl Into<Gate>) -> Result<()> {
        let gate = gate.into();
        for q in gate.qubits() {
            if q >= self.num_qubits {
                return Err(Error::QubitOutOfRange { index: q, num_qubits: self.num_qubits });
            }
        }
        if let Gate::Cnot { control, target } = gate {
            if control == target {
                return Err(Error::DegenerateCnot(control));
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::DimensionMismatch(self.num_qubits, other.num_qubits));
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Circuit) -> Result<Circuit> {
        let mut out = self.clone();
        out.extend(other)?;
        Ok(out)
    }

    /// Adjoint circuit: gates reversed and individually inverted.
    pub fn inverse(&self) -> Circuit {
        Circuit { num_qubits: self.num_qubits, gates: self.gates.iter().rev().map(|g| g.adjoint()).collect() }
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// CNOT count, depth and CNOT depth. Consecutive single-qubit gates on a
    /// wire fuse into one slot, as they would after compiling to
    /// `{CNOT, U3}`.
    pub fn metrics(&self) -> Metrics {
        let n = self.num_qubits;
        let mut level = vec![0usize; n];
        // whether the wire currently ends in an open single-qubit slot
        let mut open = vec![false; n];
        let mut cx_level = vec![0usize; n];
        let mut cnots = 0;
        for g in &self.gates {
            match *g {
                Gate::Cnot { control, target } => {
                    cnots += 1;
                    let l = level[control].max(level[target]) + 1;
                    level[control] = l;
                    level[target] = l;
                    open[control] = false;
                    open[target] = false;
                    let cl = cx_level[control].max(cx_level[target]) + 1;
                    cx_level[control] = cl;
                    cx_level[target] = cl;
                }
                _ => {
                    let q = g.qubits()[0];
                    if !open[q] {
                        level[q] += 1;
                        open[q] = true;
                    }
                }
            }
        }
        Metrics {
            cnot_count: cnots,
            depth: level.into_iter().max().unwrap_or(0),
            two_qubit_depth: cx_level.into_iter().max().unwrap_or(0),
        }
    }

    /// True iff every CNOT acts on an edge of `topology`.
    pub fn conforms(&self, topology: &Topology) -> bool {
        self.num_qubits <= topology.num_qubits()
            && self.gates.iter().all(|g| match *g {
                Gate::Cnot { control, target } => topology.has_edge(control, target),
                _ => true,
            })
    }

    pub fn to_qasm2(&self) -> String {
        let mut out = String::new();
        out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
        let _ = writeln!(out, "qreg q[{}];", self.num_qubits);
        for g in &self.gates {
            let _ = match *g {
                Gate::H(q) => writeln!(out, "h q[{}];", q),
                Gate::S(q) => writeln!(out, "s q[{}];", q),
                Gate::Sdg(q) => writeln!(out, "sdg q[{}];", q),
                Gate::V(q) => writeln!(out, "sx q[{}];", q),
                Gate::Vdg(q) => writeln!(out, "sxdg q[{}];", q),
                Gate::Rz(q, a) => writeln!(out, "rz({:?}) q[{}];", a, q),
                Gate::Cnot { control, target } => writeln!(out, "cx q[{}],q[{}];", control, target),
            };
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(c: usize, t: usize) -> Gate {
        Gate::Cnot { control: c, target: t }
    }

    #[test]
    fn append_checks_bounds() {
        let mut c = Circuit::new(2);
        assert!(c.append(Gate::H(2)).is_err());
        assert!(c.append(cx(1, 1)).is_err());
        c.append(Gate::H(0)).unwrap();
        c.append(cx(0, 1)).unwrap();
        assert_eq!(c.gates(), &[Gate::H(0), cx(0, 1)]);
    }

    #[test]
    fn concat_identity_and_order() {
        let a = Circuit::from_gates(2, vec![Gate::H(0)]).unwrap();
        let b = Circuit::from_gates(2, vec![cx(0, 1)]).unwrap();
        let empty = Circuit::new(2);
        assert_eq!(empty.concat(&a).unwrap(), a);
        assert_eq!(a.concat(&b).unwrap().gates(), &[Gate::H(0), cx(0, 1)]);
    }

    #[test]
    fn metrics_examples() {
        assert_eq!(Circuit::new(3).metrics(), Metrics::default());
        let par = Circuit::from_gates(4, vec![cx(0, 1), cx(2, 3)]).unwrap();
        assert_eq!(par.metrics(), Metrics { cnot_count: 2, depth: 1, two_qubit_depth: 1 });
        let fused = Circuit::from_gates(2, vec![Gate::H(0), Gate::S(0), cx(0, 1)]).unwrap();
        assert_eq!(fused.metrics(), Metrics { cnot_count: 1, depth: 2, two_qubit_depth: 1 });
    }

    #[test]
    fn single_qubit_runs_split_by_cnots() {
        let c = Circuit::from_gates(2, vec![Gate::H(0), cx(0, 1), Gate::S(0), Gate::Rz(0, 0.1), cx(0, 1), Gate::H(1)])
            .unwrap();
        assert_eq!(c.metrics(), Metrics { cnot_count: 2, depth: 5, two_qubit_depth: 2 });
    }

    #[test]
    fn inverse_reverses_and_adjoints() {
        let c = Circuit::from_gates(2, vec![Gate::S(0), cx(0, 1), Gate::Rz(1, 0.3)]).unwrap();
        assert_eq!(c.inverse().gates(), &[Gate::Rz(1, -0.3), cx(0, 1), Gate::Sdg(0)]);
    }

    #[test]
    fn conformance() {
        let c = Circuit::from_gates(3, vec![cx(0, 2)]).unwrap();
        assert!(!c.conforms(&Topology::line(3)));
        assert!(c.conforms(&Topology::complete(3)));
    }

    #[test]
    fn qasm_output() {
        let empty = Circuit::new(2).to_qasm2();
        assert_eq!(empty, "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\n");
        let c = Circuit::from_gates(2, vec![cx(0, 1), Gate::V(1), Gate::Rz(0, 0.5)]).unwrap();
        let text = c.to_qasm2();
        assert!(text.contains("cx q[0],q[1];"));
        assert!(text.contains("sx q[1];"));
        assert!(text.contains("rz(0.5) q[0];"));
    }
}
