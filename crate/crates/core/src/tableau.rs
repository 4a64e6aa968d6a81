//! Clifford tableaus and architecture-aware tableau synthesis that may stop
//! at a qubit permutation.
//!
//! Layout: row `k < q` holds `U X_k U†`, row `q + k` holds `U Z_k U†`; within a
//! row, columns `0..q` are X bits and `q..2q` are Z bits, with `Y = (1, 1)`.
//! Prepending a gate (`U -> U g`) mixes rows, appending (`U -> g U`) mixes
//! columns.

use std::fmt;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::{conjugate_letter, CliffordGate, PauliLetter};
use crate::topology::Topology;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordTableau {
    num_qubits: usize,
    bits: Vec<Vec<bool>>,
    signs: Vec<bool>,
}

/// A signed Pauli row `i^phase ⊗ P(x_k, z_k)`.
#[derive(Debug, Clone)]
struct Row {
    bits: Vec<bool>,
    phase: u8,
}

/// Exponent of `i` picked up by `P(x1, z1) * P(x2, z2)` on one qubit.
fn product_phase(x1: bool, z1: bool, x2: bool, z2: bool) -> i8 {
    let (x2, z2) = (x2 as i8, z2 as i8);
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 - x2,
        (true, false) => z2 * (2 * x2 - 1),
        (false, true) => x2 * (1 - 2 * z2),
    }
}

impl Row {
    fn identity(n: usize) -> Self {
        Row { bits: vec![false; 2 * n], phase: 0 }
    }

    fn mul(&self, rhs: &Row) -> Row {
        let n = self.bits.len() / 2;
        let mut phase = self.phase as i32 + rhs.phase as i32;
        let mut bits = vec![false; 2 * n];
        for k in 0..n {
            let (x1, z1, x2, z2) = (self.bits[k], self.bits[k + n], rhs.bits[k], rhs.bits[k + n]);
            phase += product_phase(x1, z1, x2, z2) as i32;
            bits[k] = x1 ^ x2;
            bits[k + n] = z1 ^ z2;
        }
        Row { bits, phase: phase.rem_euclid(4) as u8 }
    }
}

/// A qubit relabelling. `perm[logical] = physical`: after synthesis the
/// logical output qubit `j` lives on wire `perm[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitPermutation {
    perm: Vec<usize>,
}

impl QubitPermutation {
    pub fn identity(n: usize) -> Self {
        QubitPermutation { perm: (0..n).collect() }
    }

    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || seen[p] {
                return Err(Error::InvalidArgument(format!("{:?} is not a permutation", perm)));
            }
            seen[p] = true;
        }
        Ok(QubitPermutation { perm })
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn physical(&self, logical: usize) -> usize {
        self.perm[logical]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.perm.len()];
        for (l, &p) in self.perm.iter().enumerate() {
            inv[p] = l;
        }
        QubitPermutation { perm: inv }
    }
}

impl CliffordTableau {
    pub fn identity(num_qubits: usize) -> Self {
        let n2 = 2 * num_qubits;
        let bits = (0..n2).map(|r| (0..n2).map(|c| r == c).collect()).collect();
        CliffordTableau { num_qubits, bits, signs: vec![false; n2] }
    }

    /// Tableau of a Clifford circuit. Fails on non-Clifford gates.
    pub fn from_circuit(circuit: &Circuit) -> Result<Self> {
        let mut t = CliffordTableau::identity(circuit.num_qubits());
        for &g in circuit.gates() {
            t.append(clifford_of(g)?);
        }
        Ok(t)
    }

    /// Raw constructor; checks shape and symplecticity.
    pub fn from_parts(bits: Vec<Vec<bool>>, signs: Vec<bool>) -> Result<Self> {
        let n2 = bits.len();
        if !n2.is_multiple_of(2) || signs.len() != n2 || bits.iter().any(|r| r.len() != n2) {
            return Err(Error::InvalidArgument("tableau must be 2q x 2q with 2q signs".into()));
        }
        let t = CliffordTableau { num_qubits: n2 / 2, bits, signs };
        if !t.is_symplectic() {
            return Err(Error::NotSymplectic);
        }
        Ok(t)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn bit(&self, row: usize, col: usize) -> bool {
        self.bits[row][col]
    }

    pub fn sign(&self, row: usize) -> bool {
        self.signs[row]
    }

    /// Image of the basis Pauli with the given row index, as letters plus a
    /// sign.
    pub fn row_pauli(&self, row: usize) -> (Vec<PauliLetter>, bool) {
        let n = self.num_qubits;
        let letters = (0..n).map(|k| PauliLetter::from_bits(self.bits[row][k], self.bits[row][k + n])).collect();
        (letters, self.signs[row])
    }

    pub fn is_symplectic(&self) -> bool {
        let n = self.num_qubits;
        let form = |a: &[bool], b: &[bool]| (0..n).filter(|&k| (a[k] & b[k + n]) ^ (a[k + n] & b[k])).count() % 2 == 1;
        for a in 0..2 * n {
            for b in a..2 * n {
                let expected = b == a + n && a < n;
                if form(&self.bits[a], &self.bits[b]) != expected {
                    return false;
                }
            }
        }
        true
    }

    fn row(&self, r: usize) -> Row {
        Row { bits: self.bits[r].clone(), phase: if self.signs[r] { 2 } else { 0 } }
    }

    fn set_row(&mut self, r: usize, row: Row) {
        debug_assert!(row.phase.is_multiple_of(2), "non-hermitian tableau row");
        self.bits[r] = row.bits;
        self.signs[r] = row.phase == 2;
    }

    /// `U -> U g`: rows for the basis Paulis on the gate's qubits are replaced
    /// by the images of `g B g†`.
    pub fn prepend(&mut self, gate: CliffordGate) {
        let n = self.num_qubits;
        let qubits = gate.qubits();
        let mut updates = Vec::with_capacity(2 * qubits.len());
        for (slot, &q) in qubits.iter().enumerate() {
            for basis in [PauliLetter::X, PauliLetter::Z] {
                let mut letters = vec![PauliLetter::I; qubits.len()];
                letters[slot] = basis;
                let (image, flip) = conjugate_letter(gate.adjoint(), &letters);
                let mut acc = Row::identity(n);
                acc.phase = if flip { 2 } else { 0 };
                for (k, &l) in image.iter().enumerate() {
                    let qk = qubits[k];
                    match l {
                        PauliLetter::I => {}
                        PauliLetter::X => acc = acc.mul(&self.row(qk)),
                        PauliLetter::Z => acc = acc.mul(&self.row(qk + n)),
                        PauliLetter::Y => {
                            // Y = i X Z
                            acc = acc.mul(&self.row(qk)).mul(&self.row(qk + n));
                            acc.phase = (acc.phase + 1) % 4;
                        }
                    }
                }
                let target = if basis == PauliLetter::X { q } else { q + n };
                updates.push((target, acc));
            }
        }
        for (r, row) in updates {
            self.set_row(r, row);
        }
    }

    /// `U -> g U`: every row is conjugated by `g`.
    pub fn append(&mut self, gate: CliffordGate) {
        let n = self.num_qubits;
        let qubits = gate.qubits();
        let inverse = gate.adjoint();
        for r in 0..2 * n {
            let letters: Vec<_> =
                qubits.iter().map(|&q| PauliLetter::from_bits(self.bits[r][q], self.bits[r][q + n])).collect();
            if letters.iter().all(|l| l.is_identity()) {
                continue;
            }
            let (image, flip) = conjugate_letter(inverse, &letters);
            for (k, &q) in qubits.iter().enumerate() {
                self.bits[r][q] = image[k].x();
                self.bits[r][q + n] = image[k].z();
            }
            self.signs[r] ^= flip;
        }
    }

    /// Returns the permutation if the tableau is a qubit permutation with all
    /// signs clear.
    pub fn as_permutation(&self) -> Option<QubitPermutation> {
        if self.signs.iter().any(|&s| s) {
            return None;
        }
        let n = self.num_qubits;
        let mut perm = vec![usize::MAX; n];
        for p in 0..n {
            let ones: Vec<_> = (0..2 * n).filter(|&c| self.bits[p][c]).collect();
            let [j] = ones[..] else { return None };
            if j >= n {
                return None;
            }
            let zs: Vec<_> = (0..2 * n).filter(|&c| self.bits[p + n][c]).collect();
            if zs != [j + n] {
                return None;
            }
            perm[j] = p;
        }
        QubitPermutation::new(perm).ok()
    }

    pub fn is_identity(&self) -> bool {
        *self == CliffordTableau::identity(self.num_qubits)
    }

    /// Letters of `W X_j W†` and `W Z_j W†` on wire `i`, where `W = U†`.
    fn inverse_letters(&self, j: usize, i: usize) -> (PauliLetter, PauliLetter) {
        let n = self.num_qubits;
        let b = &self.bits;
        (PauliLetter::from_bits(b[i + n][j + n], b[i][j + n]), PauliLetter::from_bits(b[i + n][j], b[i][j]))
    }

    /// Whether the output qubit `j` touches wire `i` through its X image and
    /// through its Z image.
    fn footprint(&self, j: usize, i: usize) -> (bool, bool) {
        let n = self.num_qubits;
        let b = &self.bits;
        (b[i][j] || b[i + n][j], b[i][j + n] || b[i + n][j + n])
    }
}

fn clifford_of(g: Gate) -> Result<CliffordGate> {
    Ok(match g {
        Gate::H(q) => CliffordGate::H(q),
        Gate::S(q) => CliffordGate::S(q),
        Gate::Sdg(q) => CliffordGate::Sdg(q),
        Gate::V(q) => CliffordGate::V(q),
        Gate::Vdg(q) => CliffordGate::Vdg(q),
        Gate::Cnot { control, target } => CliffordGate::Cnot { control, target },
        Gate::Rz(..) => return Err(Error::InvalidArgument("rz is not a Clifford gate".into())),
    })
}

impl fmt::Display for CliffordTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (row, sign) in self.bits.iter().zip(&self.signs) {
            for &b in row {
                write!(f, "{}", b as u8)?;
            }
            writeln!(f, " {}", *sign as u8)?;
        }
        Ok(())
    }
}

/// Number of wires the logical qubit `r` interacts with, counted separately
/// for its X and Z parts (minimum 2).
pub fn h_row(t: &CliffordTableau, r: usize) -> usize {
    (0..t.num_qubits())
        .map(|i| {
            let (x, z) = t.footprint(r, i);
            x as usize + z as usize
        })
        .sum()
}

/// Distance-weighted footprint of logical qubit `c` measured from wire `c`.
pub fn h_col(t: &CliffordTableau, c: usize, topo: &Topology) -> usize {
    placement_cost(t, c, c, topo)
}

/// Distance-weighted footprint of logical qubit `r` measured from wire `c`:
/// an estimate of the CNOT cost of gathering `r` onto `c`.
pub fn placement_cost(t: &CliffordTableau, r: usize, c: usize, topo: &Topology) -> usize {
    (0..t.num_qubits())
        .map(|i| {
            let (x, z) = t.footprint(r, i);
            (x as usize + z as usize) * topo.distance(c, i)
        })
        .sum()
}

#[derive(Debug, Clone)]
pub struct TableauSynthesis {
    /// Circuit implementing the tableau up to the output relabelling.
    pub circuit: Circuit,
    pub permutation: QubitPermutation,
}

struct Reducer<'a> {
    tableau: CliffordTableau,
    topo: &'a Topology,
    prepended: Vec<CliffordGate>,
}

impl Reducer<'_> {
    fn apply(&mut self, g: CliffordGate) {
        self.tableau.prepend(g);
        self.prepended.push(g);
    }

    /// Makes `W X_j W† = ±X_p` and `W Z_j W† = ±Z_p` using gates on the active
    /// wires only.
    fn reduce_pair(&mut self, p: usize, j: usize, active: &[bool]) -> Result<()> {
        let n = self.tableau.num_qubits;
        let wires: Vec<usize> = (0..n).filter(|&i| active[i]).collect();

        // X image: turn every leg into X, then collect parity onto p
        for &i in &wires {
            match self.tableau.inverse_letters(j, i).0 {
                PauliLetter::Z => self.apply(CliffordGate::H(i)),
                PauliLetter::Y => self.apply(CliffordGate::S(i)),
                _ => {}
            }
        }
        let mut terminals = vec![p];
        terminals.extend(wires.iter().copied().filter(|&i| i != p && self.tableau.inverse_letters(j, i).0.x()));
        let tree = self.topo.steiner_tree(&terminals, active)?;
        let edges = tree.post_order(p);
        for &(parent, child) in &edges {
            let a = |s: &Self, q| s.tableau.inverse_letters(j, q).0.x();
            if a(self, child) && !a(self, parent) {
                self.apply(CliffordGate::cnot(child, parent));
            }
        }
        for &(parent, child) in &edges {
            self.apply(CliffordGate::cnot(parent, child));
        }

        // Z image: fix the local letter on p, then the remaining legs
        if self.tableau.inverse_letters(j, p).1 == PauliLetter::Y {
            self.apply(CliffordGate::V(p));
        }
        for &i in &wires {
            if i == p {
                continue;
            }
            match self.tableau.inverse_letters(j, i).1 {
                PauliLetter::X => self.apply(CliffordGate::H(i)),
                PauliLetter::Y => self.apply(CliffordGate::V(i)),
                _ => {}
            }
        }
        let mut terminals = vec![p];
        terminals.extend(wires.iter().copied().filter(|&i| i != p && self.tableau.inverse_letters(j, i).1.z()));
        let tree = self.topo.steiner_tree(&terminals, active)?;
        let edges = tree.post_order(p);
        for &(parent, child) in &edges {
            let b = |s: &Self, q| s.tableau.inverse_letters(j, q).1.z();
            if b(self, child) && !b(self, parent) {
                self.apply(CliffordGate::cnot(parent, child));
            }
        }
        for &(parent, child) in &edges {
            self.apply(CliffordGate::cnot(child, parent));
        }
        debug_assert_eq!(self.tableau.inverse_letters(j, p), (PauliLetter::X, PauliLetter::Z));
        Ok(())
    }
}

/// Synthesizes `t` into an architecture-conforming circuit. With
/// `allow_permutation` the circuit implements `t` only up to a relabelling of
/// the output wires: if `D` is the returned circuit and `P` the permutation
/// tableau, `t = P · D` (and `P` is the identity otherwise).
///
/// Each round picks the logical qubit with the smallest footprint, assigns it
/// to a non-cutting wire, gathers its X and Z images onto that wire along
/// Steiner trees and retires the wire. Signs are cleared at the end with
/// Pauli corrections on the physical wires.
pub fn synthesize(t: &CliffordTableau, topo: &Topology, allow_permutation: bool) -> Result<TableauSynthesis> {
    let n = t.num_qubits();
    if topo.num_qubits() != n {
        return Err(Error::DimensionMismatch(n, topo.num_qubits()));
    }
    if !t.is_symplectic() {
        return Err(Error::NotSymplectic);
    }
    if !topo.is_connected(&topo.all_active()) {
        return Err(Error::Disconnected);
    }
    let mut red = Reducer { tableau: t.clone(), topo, prepended: Vec::new() };
    let mut active = vec![true; n];
    let mut remaining = vec![true; n];

    for _ in 0..n {
        let candidates = topo.non_cutting(&active);
        let (logical, wire) = if allow_permutation {
            let t = &red.tableau;
            let wires: Vec<usize> = (0..n).filter(|&c| active[c]).collect();
            let best_wire =
                |r: usize, among: &[usize]| among.iter().copied().min_by_key(|&c| (placement_cost(t, r, c, topo), c));
            // prefer logical qubits whose cheapest wire can be retired now
            let rows: Vec<usize> = (0..n).filter(|&r| remaining[r]).collect();
            let settled: Vec<usize> =
                rows.iter().copied().filter(|&r| best_wire(r, &wires).is_some_and(|c| candidates.contains(&c))).collect();
            let pool = if settled.is_empty() { &rows } else { &settled };
            let r = pool.iter().copied().min_by_key(|&r| (h_row(t, r), r)).expect("logical");
            let c = best_wire(r, &candidates).expect("a connected graph has a non-cutting vertex");
            (r, c)
        } else {
            let r = candidates.iter().copied().min_by_key(|&r| (h_row(&red.tableau, r), r)).expect("non-cutting");
            (r, r)
        };
        red.reduce_pair(wire, logical, &active)?;
        active[wire] = false;
        remaining[logical] = false;
    }

    for p in 0..n {
        if red.tableau.sign(p) {
            red.apply(CliffordGate::S(p));
            red.apply(CliffordGate::S(p));
        }
        if red.tableau.sign(p + n) {
            red.apply(CliffordGate::V(p));
            red.apply(CliffordGate::V(p));
        }
    }

    let permutation = red.tableau.as_permutation().expect("reduction ends in a permutation");
    let mut circuit = Circuit::new(n);
    for g in &red.prepended {
        circuit.append(g.adjoint())?;
    }
    Ok(TableauSynthesis { circuit, permutation })
}
