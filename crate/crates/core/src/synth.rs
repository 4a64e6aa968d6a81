//! Architecture-aware synthesis of Pauli polynomials.
//!
//! Gadgets are removed one qubit at a time. Each emitted Clifford `C` is
//! appended to the circuit, every remaining gadget is conjugated to
//! `C P C†`, and `C†` is prepended to an accumulated tableau. With `T` the
//! tableau, `R` the remaining gadgets and `K` the circuit so far, `T · R · K`
//! stays equal to the source gadgets in emitted order. When nothing remains
//! the tableau is synthesized (up to a wire permutation) and appended.

use crate::circuit::{Circuit, Gate, Metrics};
use crate::error::{Error, Result};
use crate::pauli::{CliffordGate, PauliGadget, PauliLetter, PauliPolynomial};
use crate::tableau::{self, CliffordTableau, QubitPermutation};
use crate::topology::Topology;

/// Set to a non-empty value other than `0` to verify the global invariant
/// densely after every step (registers of at most five qubits).
pub const CHECK_ENV: &str = "PAULI_SYNTH_CHECK";

#[derive(Debug, Copy, Clone, PartialEq, Eq, Default)]
pub enum Mode {
    /// Gadgets may be emitted in any order.
    #[default]
    ArbitraryOrder,
    /// Consecutive runs of mutually commuting gadgets are synthesized one run
    /// at a time, so the source order is preserved up to commuting swaps.
    CommutingSets,
}

#[derive(Debug, Copy, Clone, PartialEq, Eq)]
pub struct SynthConfig {
    pub k: usize,
    pub mode: Mode,
    pub allow_permutation: bool,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig { k: 10, mode: Mode::ArbitraryOrder, allow_permutation: true }
    }
}

#[derive(Debug, Clone)]
pub struct SynthesisResult {
    pub circuit: Circuit,
    /// Source gadget indices in the order they are implemented.
    pub emitted_order: Vec<usize>,
    pub permutation: QubitPermutation,
    pub metrics: Metrics,
}

/// `k · P_I + P_max − P_min` over a column of leg letters, where `P_max` and
/// `P_min` are the longest and shortest maximal runs of non-I letters.
pub fn cost_c(column: &[PauliLetter], k: usize) -> usize {
    let identities = column.iter().filter(|l| l.is_identity()).count();
    let mut runs = Vec::new();
    let mut current = 0;
    for l in column {
        if l.is_identity() {
            if current > 0 {
                runs.push(current);
            }
            current = 0;
        } else {
            current += 1;
        }
    }
    if current > 0 {
        runs.push(current);
    }
    let max = runs.iter().copied().max().unwrap_or(0);
    let min = runs.iter().copied().min().unwrap_or(0);
    k * identities + max - min
}

fn column(gadgets: &[&PauliGadget], q: usize) -> Vec<PauliLetter> {
    gadgets.iter().map(|g| g.string.get(q)).collect()
}

/// Non-cutting active qubit with the highest [`cost_c`]; ties go to the
/// lowest index.
pub fn pick_pivot(gadgets: &[&PauliGadget], active: &[bool], topo: &Topology, k: usize) -> usize {
    argmax(topo.non_cutting(active), gadgets, k).expect("a connected active set has a non-cutting vertex")
}

/// Active neighbor of `pivot` with the highest [`cost_c`]; ties go to the
/// lowest index.
pub fn pick_neighbor(pivot: usize, gadgets: &[&PauliGadget], active: &[bool], topo: &Topology, k: usize) -> usize {
    argmax(topo.neighbors(pivot, active), gadgets, k).expect("pivot has an active neighbor")
}

fn argmax(candidates: Vec<usize>, gadgets: &[&PauliGadget], k: usize) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None;
    for q in candidates {
        let c = cost_c(&column(gadgets, q), k);
        if best.is_none_or(|(_, bc)| c > bc) {
            best = Some((q, c));
        }
    }
    best.map(|(q, _)| q)
}

/// Positions into the input slice, grouped by the letter at one qubit.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Partition {
    pub i: Vec<usize>,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub z: Vec<usize>,
}

pub fn partition_on_qubit(gadgets: &[&PauliGadget], qubit: usize) -> Partition {
    let mut p = Partition::default();
    for (pos, g) in gadgets.iter().enumerate() {
        match g.string.get(qubit) {
            PauliLetter::I => p.i.push(pos),
            PauliLetter::X => p.x.push(pos),
            PauliLetter::Y => p.y.push(pos),
            PauliLetter::Z => p.z.push(pos),
        }
    }
    p
}

/// Greedy in-order split into runs of mutually commuting gadgets.
pub fn partition_commuting_sets(poly: &PauliPolynomial) -> Vec<Vec<usize>> {
    let mut sets: Vec<Vec<usize>> = Vec::new();
    let gadgets = poly.gadgets();
    for (i, g) in gadgets.iter().enumerate() {
        let joins = sets
            .last()
            .is_some_and(|set| set.iter().all(|&j| g.commutes_with(&gadgets[j]).expect("same width")));
        match sets.last_mut() {
            Some(set) if joins => set.push(i),
            _ => sets.push(vec![i]),
        }
    }
    sets
}

/// Clifford that maps `letter` to `±Z` under `C P C†`.
fn diagonalizer(letter: PauliLetter, q: usize) -> Option<CliffordGate> {
    match letter {
        PauliLetter::X => Some(CliffordGate::H(q)),
        PauliLetter::Y => Some(CliffordGate::V(q)),
        _ => None,
    }
}

/// Mutable synthesis state. Gadget indices refer to the source polynomial.
#[derive(Debug, Clone)]
pub struct SynthesisState<'a> {
    topo: &'a Topology,
    source: PauliPolynomial,
    remaining: Vec<PauliGadget>,
    done: Vec<bool>,
    circuit: Circuit,
    tableau: CliffordTableau,
    emitted_order: Vec<usize>,
    check: bool,
}

impl<'a> SynthesisState<'a> {
    pub fn new(poly: &PauliPolynomial, topo: &'a Topology) -> Result<Self> {
        let q = poly.num_qubits();
        if topo.num_qubits() != q {
            return Err(Error::QubitCountMismatch { poly: q, topology: topo.num_qubits() });
        }
        if !topo.is_connected(&topo.all_active()) {
            return Err(Error::Disconnected);
        }
        let check = q <= 5 && std::env::var(CHECK_ENV).is_ok_and(|v| !v.is_empty() && v != "0");
        Ok(SynthesisState {
            topo,
            source: poly.clone(),
            remaining: poly.gadgets().to_vec(),
            done: vec![false; poly.len()],
            circuit: Circuit::new(q),
            tableau: CliffordTableau::identity(q),
            emitted_order: Vec::new(),
            check,
        })
    }

    /// Current (conjugated) form of gadget `idx`.
    pub fn gadget(&self, idx: usize) -> &PauliGadget {
        &self.remaining[idx]
    }

    pub fn is_done(&self, idx: usize) -> bool {
        self.done[idx]
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn tableau(&self) -> &CliffordTableau {
        &self.tableau
    }

    pub fn emitted_order(&self) -> &[usize] {
        &self.emitted_order
    }

    fn place(&mut self, gate: CliffordGate) {
        self.circuit.append(gate).expect("gate within register");
        let inv = gate.adjoint();
        for (g, done) in self.remaining.iter_mut().zip(&self.done) {
            if !done {
                g.conjugate(inv);
            }
        }
        self.tableau.prepend(inv);
    }

    fn refs(&self, idx: &[usize]) -> Vec<&PauliGadget> {
        idx.iter().map(|&i| &self.remaining[i]).collect()
    }

    /// Turns the legs of `subset` at `qubit` into Z. The subset must share a
    /// single non-I letter there.
    pub fn diagonalize_qubit(&mut self, subset: &[usize], qubit: usize) -> Vec<CliffordGate> {
        let letter = subset.iter().map(|&i| self.remaining[i].string.get(qubit)).find(|l| !l.is_identity());
        let Some(gate) = letter.and_then(|l| diagonalizer(l, qubit)) else {
            return Vec::new();
        };
        self.place(gate);
        debug_assert!(subset.iter().all(|&i| matches!(self.remaining[i].string.get(qubit), PauliLetter::Z | PauliLetter::I)));
        vec![gate]
    }

    /// Emits gates on the edge `(pivot, neighbor)` that clear the pivot leg of
    /// at least one gadget in `subset`, whose pivot legs must all be Z.
    pub fn disconnect(&mut self, pivot: usize, neighbor: usize, subset: &[usize]) -> Vec<CliffordGate> {
        debug_assert!(self.topo.has_edge(pivot, neighbor));
        debug_assert!(subset.iter().all(|&i| self.remaining[i].string.get(pivot) == PauliLetter::Z));
        let letters: Vec<PauliLetter> = subset.iter().map(|&i| self.remaining[i].string.get(neighbor)).collect();
        let count = |a: PauliLetter, b: PauliLetter| letters.iter().filter(|&&l| l == a || l == b).count();
        let mut gates = Vec::new();
        if letters.contains(&PauliLetter::I) {
            // moves Z_p onto Z_n
            gates.push(CliffordGate::cnot(neighbor, pivot));
            gates.push(CliffordGate::cnot(pivot, neighbor));
        } else {
            use PauliLetter::{X, Y, Z};
            let (zy, zx, xy) = (count(Z, Y), count(Z, X), count(X, Y));
            if zx > zy && zx >= xy {
                gates.push(CliffordGate::S(neighbor));
            } else if xy > zy && xy > zx {
                gates.push(CliffordGate::H(neighbor));
            }
            gates.push(CliffordGate::cnot(pivot, neighbor));
        }
        for &g in &gates {
            self.place(g);
        }
        debug_assert!(subset.iter().any(|&i| self.remaining[i].string.get(pivot) == PauliLetter::I));
        gates
    }

    /// Implements a gadget with at most one leg. Zero-leg gadgets are a global
    /// phase and produce no gates.
    pub fn emit_rotation(&mut self, idx: usize) -> Result<()> {
        let legs: Vec<usize> = self.remaining[idx].string.legs().collect();
        match legs[..] {
            [] => {}
            [q] => {
                self.diagonalize_qubit(&[idx], q);
                let g = &self.remaining[idx];
                debug_assert_eq!(g.string.get(q), PauliLetter::Z);
                self.circuit.append(Gate::Rz(q, g.angle))?;
            }
            _ => return Err(Error::InvalidArgument(format!("gadget {idx} has {} legs", legs.len()))),
        }
        self.done[idx] = true;
        self.emitted_order.push(idx);
        Ok(())
    }

    fn emit_single_legs(&mut self, gadgets: Vec<usize>) -> Result<Vec<usize>> {
        let mut rest = Vec::with_capacity(gadgets.len());
        for i in gadgets {
            if self.remaining[i].string.leg_count() <= 1 {
                self.emit_rotation(i)?;
            } else {
                rest.push(i);
            }
        }
        Ok(rest)
    }

    /// Synthesizes `gadgets` using only wires in `active`.
    fn run(&mut self, gadgets: Vec<usize>, active: Vec<bool>, k: usize) -> Result<()> {
        let mut stack = vec![Task::Identity { gadgets, active }];
        while let Some(task) = stack.pop() {
            match task {
                Task::Identity { gadgets, active } => {
                    let gadgets = self.emit_single_legs(gadgets)?;
                    if !gadgets.is_empty() {
                        let pivot = pick_pivot(&self.refs(&gadgets), &active, self.topo, k);
                        self.split(&mut stack, gadgets, pivot, active);
                    }
                }
                Task::Pivot { gadgets, pivot, active } => {
                    let gadgets = self.emit_single_legs(gadgets)?;
                    if gadgets.is_empty() {
                        continue;
                    }
                    let part = partition_on_qubit(&self.refs(&gadgets), pivot);
                    if !part.i.is_empty() {
                        self.split(&mut stack, gadgets, pivot, active);
                        continue;
                    }
                    let group = [part.x, part.y, part.z]
                        .into_iter()
                        .filter(|g| !g.is_empty())
                        .min_by_key(|g| (std::cmp::Reverse(g.len()), gadgets[g[0]]))
                        .expect("non-empty pivot column");
                    let group: Vec<usize> = group.into_iter().map(|pos| gadgets[pos]).collect();
                    let neighbor = pick_neighbor(pivot, &self.refs(&gadgets), &active, self.topo, k);
                    self.diagonalize_qubit(&group, pivot);
                    self.disconnect(pivot, neighbor, &group);
                    self.split(&mut stack, gadgets, pivot, active);
                }
            }
            if self.check {
                self.check_invariant();
            }
        }
        Ok(())
    }

    /// Queues the gadgets with an I at `pivot` (without the pivot wire) to
    /// run before the rest.
    fn split(&self, stack: &mut Vec<Task>, gadgets: Vec<usize>, pivot: usize, active: Vec<bool>) {
        let part = partition_on_qubit(&self.refs(&gadgets), pivot);
        let idle: Vec<usize> = part.i.iter().map(|&p| gadgets[p]).collect();
        let rest: Vec<usize> = part.x.iter().chain(&part.y).chain(&part.z).map(|&p| gadgets[p]).collect();
        if !rest.is_empty() {
            stack.push(Task::Pivot { gadgets: rest, pivot, active: active.clone() });
        }
        if !idle.is_empty() {
            let mut reduced = active;
            reduced[pivot] = false;
            stack.push(Task::Identity { gadgets: idle, active: reduced });
        }
    }

    fn check_invariant(&self) {
        use crate::verify;
        let q = self.source.num_qubits();
        let pending: Vec<usize> = (0..self.done.len()).filter(|&i| !self.done[i]).collect();
        let order: Vec<usize> = self.emitted_order.iter().chain(&pending).copied().collect();
        let expected = verify::polynomial_unitary(&self.source.reordered(&order)).expect("small register");
        let rest = PauliPolynomial::from_gadgets(q, pending.iter().map(|&i| self.remaining[i].clone()).collect())
            .expect("same width");
        let tab = tableau::synthesize(&self.tableau, &Topology::complete(q), false).expect("valid tableau");
        let actual = verify::circuit_unitary(&self.circuit)
            .and_then(|u| Ok(u.then(&verify::polynomial_unitary(&rest)?)))
            .and_then(|u| Ok(u.then(&verify::circuit_unitary(&tab.circuit)?)))
            .expect("small register");
        let d = verify::distance_up_to_phase(&actual, &expected, &QubitPermutation::identity(q)).expect("same size");
        assert!(d < 1e-9, "synthesis invariant violated: distance {d}");
    }

    fn finish(self, allow_permutation: bool) -> Result<SynthesisResult> {
        let tab = tableau::synthesize(&self.tableau, self.topo, allow_permutation)?;
        let mut circuit = self.circuit;
        circuit.extend(&tab.circuit)?;
        let metrics = circuit.metrics();
        Ok(SynthesisResult { circuit, emitted_order: self.emitted_order, permutation: tab.permutation, metrics })
    }
}

enum Task {
    Identity { gadgets: Vec<usize>, active: Vec<bool> },
    Pivot { gadgets: Vec<usize>, pivot: usize, active: Vec<bool> },
}

pub fn synthesize(poly: &PauliPolynomial, topo: &Topology, cfg: &SynthConfig) -> Result<SynthesisResult> {
    if cfg.k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let mut state = SynthesisState::new(poly, topo)?;
    let sets = match cfg.mode {
        Mode::ArbitraryOrder => vec![(0..poly.len()).collect::<Vec<_>>()],
        Mode::CommutingSets => partition_commuting_sets(poly),
    };
    for set in sets {
        state.run(set, topo.all_active(), cfg.k)?;
    }
    state.finish(cfg.allow_permutation)
}

/// Baseline: each gadget in source order is diagonalized, its parity is
/// gathered to the first leg along a Steiner tree, rotated, and everything is
/// undone.
pub fn naive_synthesize(poly: &PauliPolynomial, topo: &Topology) -> Result<SynthesisResult> {
    let q = poly.num_qubits();
    if topo.num_qubits() != q {
        return Err(Error::QubitCountMismatch { poly: q, topology: topo.num_qubits() });
    }
    let active = topo.all_active();
    if !topo.is_connected(&active) {
        return Err(Error::Disconnected);
    }
    let mut circuit = Circuit::new(q);
    for g in poly.gadgets() {
        let mut g = g.clone();
        let legs: Vec<usize> = g.string.legs().collect();
        let Some(&root) = legs.first() else {
            continue;
        };
        let mut ladder = Vec::new();
        for &l in &legs {
            ladder.extend(diagonalizer(g.string.get(l), l));
        }
        let tree = topo.steiner_tree(&legs, &active)?;
        let edges = tree.post_order(root);
        let mut z: Vec<bool> = (0..q).map(|i| !g.string.get(i).is_identity()).collect();
        for &(parent, child) in &edges {
            if z[child] && !z[parent] {
                ladder.push(CliffordGate::cnot(parent, child));
                z[parent] = true;
            }
        }
        for &(parent, child) in &edges {
            ladder.push(CliffordGate::cnot(child, parent));
        }
        for &c in &ladder {
            circuit.append(c)?;
            g.conjugate(c.adjoint());
        }
        debug_assert_eq!(g.string.legs().collect::<Vec<_>>(), vec![root]);
        debug_assert_eq!(g.string.get(root), PauliLetter::Z);
        circuit.append(Gate::Rz(root, g.angle))?;
        for &c in ladder.iter().rev() {
            circuit.append(c.adjoint())?;
        }
    }
    let metrics = circuit.metrics();
    Ok(SynthesisResult {
        circuit,
        emitted_order: (0..poly.len()).collect(),
        permutation: QubitPermutation::identity(q),
        metrics,
    })
}
