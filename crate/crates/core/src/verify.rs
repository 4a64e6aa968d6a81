//! Dense-unitary oracle for small registers.
//!
//! Basis ordering: qubit `k` is bit `k` of the basis-state index.
//!
//! Permutation direction: a result with permutation `perm` satisfies
//! `U_circuit = Q(perm) · U_logical` up to phase, where `Q(perm)` moves
//! logical qubit `j` onto wire `perm[j]`. A bare three-CNOT swap compared
//! against the identity with permutation `[1, 0]` is the canonical case.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::{PauliGadget, PauliLetter, PauliPolynomial, PauliString};
use crate::synth::SynthesisResult;
use crate::tableau::{CliffordTableau, QubitPermutation};

pub const MAX_DENSE_QUBITS: usize = 12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct DenseUnitary {
    num_qubits: usize,
    matrix: DMatrix<Complex64>,
}

/// Timestep and repetition count for a product-formula circuit.
#[derive(Debug, Copy, Clone, PartialEq)]
pub struct TrotterConfig {
    pub timestep: f64,
    pub repetitions: usize,
}

impl TrotterConfig {
    pub fn new(timestep: f64, repetitions: usize) -> Result<Self> {
        if repetitions == 0 {
            return Err(Error::InvalidArgument("repetitions must be at least 1".into()));
        }
        Ok(TrotterConfig { timestep, repetitions })
    }

    /// The polynomial with angles scaled for a single repetition.
    pub fn step_polynomial(&self, poly: &PauliPolynomial) -> PauliPolynomial {
        poly.scaled(self.timestep / self.repetitions as f64)
    }
}

fn check_size(num_qubits: usize) -> Result<usize> {
    if num_qubits > MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits { requested: num_qubits, max: MAX_DENSE_QUBITS });
    }
    Ok(1 << num_qubits)
}

impl DenseUnitary {
    pub fn identity(num_qubits: usize) -> Result<Self> {
        let dim = check_size(num_qubits)?;
        Ok(DenseUnitary { num_qubits, matrix: DMatrix::identity(dim, dim) })
    }

    pub fn from_matrix(num_qubits: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = check_size(num_qubits)?;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch(dim, matrix.nrows()));
        }
        Ok(DenseUnitary { num_qubits, matrix })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `other · self`, i.e. `self` applied first.
    pub fn then(&self, other: &DenseUnitary) -> DenseUnitary {
        DenseUnitary { num_qubits: self.num_qubits, matrix: &other.matrix * &self.matrix }
    }

    pub fn adjoint(&self) -> DenseUnitary {
        DenseUnitary { num_qubits: self.num_qubits, matrix: self.matrix.adjoint() }
    }

    /// Max-norm distance of `U†U` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let prod = self.matrix.adjoint() * &self.matrix;
        let id = DMatrix::<Complex64>::identity(self.dim(), self.dim());
        max_norm(&(prod - id))
    }

    fn apply_gate(&mut self, gate: Gate) {
        let dim = self.dim();
        for mut col in self.matrix.column_iter_mut() {
            apply_gate_slice(col.as_mut_slice(), dim, gate);
        }
    }

    fn apply_gadget(&mut self, g: &PauliGadget) {
        let dim = self.dim();
        let (c, s) = ((g.angle / 2.0).cos(), (g.angle / 2.0).sin());
        let mut scratch = vec![ZERO; dim];
        let (_, action) = pauli_action(&g.string);
        for mut col in self.matrix.column_iter_mut() {
            apply_gadget_slice(col.as_mut_slice(), &action, c, s, &mut scratch);
        }
    }
}

fn max_norm(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn single_qubit_matrix(gate: Gate) -> [[Complex64; 2]; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let half = |re: f64, im: f64| Complex64::new(re * 0.5, im * 0.5);
    match gate {
        Gate::H(_) => [[ONE * h, ONE * h], [ONE * h, -ONE * h]],
        Gate::S(_) => [[ONE, ZERO], [ZERO, I]],
        Gate::Sdg(_) => [[ONE, ZERO], [ZERO, -I]],
        Gate::V(_) => [[half(1.0, 1.0), half(1.0, -1.0)], [half(1.0, -1.0), half(1.0, 1.0)]],
        Gate::Vdg(_) => [[half(1.0, -1.0), half(1.0, 1.0)], [half(1.0, 1.0), half(1.0, -1.0)]],
        Gate::Rz(_, a) => [[Complex64::from_polar(1.0, -a / 2.0), ZERO], [ZERO, Complex64::from_polar(1.0, a / 2.0)]],
        Gate::Cnot { .. } => unreachable!("two-qubit gate"),
    }
}

/// Applies `gate` to a state vector in place.
pub fn apply_gate_slice(v: &mut [Complex64], dim: usize, gate: Gate) {
    match gate {
        Gate::Cnot { control, target } => {
            let (cb, tb) = (1usize << control, 1usize << target);
            for i in 0..dim {
                if i & cb != 0 && i & tb == 0 {
                    v.swap(i, i | tb);
                }
            }
        }
        _ => {
            let q = gate.qubits()[0];
            let bit = 1usize << q;
            let m = single_qubit_matrix(gate);
            for i in 0..dim {
                if i & bit == 0 {
                    let (a, b) = (v[i], v[i | bit]);
                    v[i] = m[0][0] * a + m[0][1] * b;
                    v[i | bit] = m[1][0] * a + m[1][1] * b;
                }
            }
        }
    }
}

/// `P|x> = phase(x) |x ^ xmask>` for a Pauli string.
fn pauli_action(p: &PauliString) -> (usize, Vec<(usize, Complex64)>) {
    let mut xmask = 0usize;
    let mut per_qubit = Vec::new();
    for (k, &l) in p.letters().iter().enumerate() {
        if l.x() {
            xmask |= 1 << k;
        }
        if l != PauliLetter::I {
            per_qubit.push((k, l));
        }
    }
    let dim = 1usize << p.len();
    let phases = (0..dim)
        .map(|x| {
            let mut ph = ONE;
            for &(k, l) in &per_qubit {
                let bit = x >> k & 1 == 1;
                ph *= match (l, bit) {
                    (PauliLetter::X, _) => ONE,
                    (PauliLetter::Z, false) => ONE,
                    (PauliLetter::Z, true) => -ONE,
                    // Y|0> = i|1>, Y|1> = -i|0>
                    (PauliLetter::Y, false) => I,
                    (PauliLetter::Y, true) => -I,
                    (PauliLetter::I, _) => ONE,
                };
            }
            (x ^ xmask, ph)
        })
        .collect();
    (xmask, phases)
}

fn apply_gadget_slice(v: &mut [Complex64], action: &[(usize, Complex64)], c: f64, s: f64, scratch: &mut [Complex64]) {
    scratch.copy_from_slice(v);
    for (x, &(y, ph)) in action.iter().enumerate() {
        // (cos I - i sin P)|x>
        v[y] += scratch[x] * ph * Complex64::new(0.0, -s);
    }
    for (x, amp) in v.iter_mut().enumerate() {
        *amp -= scratch[x] * (1.0 - c);
    }
}

pub fn pauli_matrix(p: &PauliString) -> Result<DMatrix<Complex64>> {
    let dim = check_size(p.len())?;
    let (_, action) = pauli_action(p);
    let mut m = DMatrix::from_element(dim, dim, ZERO);
    for (x, (y, ph)) in action.into_iter().enumerate() {
        m[(y, x)] = ph;
    }
    Ok(m)
}

/// `exp(-i angle/2 P) = cos(angle/2) I - i sin(angle/2) P`.
pub fn gadget_unitary(g: &PauliGadget) -> Result<DenseUnitary> {
    let n = g.num_qubits();
    let p = pauli_matrix(&g.string)?;
    let dim = p.nrows();
    let (c, s) = ((g.angle / 2.0).cos(), (g.angle / 2.0).sin());
    let m = DMatrix::<Complex64>::identity(dim, dim) * Complex64::new(c, 0.0) - p * (I * s);
    DenseUnitary::from_matrix(n, m)
}

pub fn circuit_unitary(c: &Circuit) -> Result<DenseUnitary> {
    let mut u = DenseUnitary::identity(c.num_qubits())?;
    for &g in c.gates() {
        u.apply_gate(g);
    }
    Ok(u)
}

/// Ordered product of the gadgets, first gadget applied first.
pub fn polynomial_unitary(poly: &PauliPolynomial) -> Result<DenseUnitary> {
    let mut u = DenseUnitary::identity(poly.num_qubits())?;
    for g in poly.gadgets() {
        u.apply_gadget(g);
    }
    Ok(u)
}

/// Hermitian sum `Σ angle_n P_n`.
pub fn hamiltonian_matrix(poly: &PauliPolynomial) -> Result<DMatrix<Complex64>> {
    let dim = check_size(poly.num_qubits())?;
    let mut h = DMatrix::from_element(dim, dim, ZERO);
    for g in poly.gadgets() {
        let (_, action) = pauli_action(&g.string);
        for (x, (y, ph)) in action.into_iter().enumerate() {
            h[(y, x)] += ph * g.angle;
        }
    }
    Ok(h)
}

/// `exp(-i t/2 Σ angle_n P_n)` via Hermitian eigendecomposition.
pub fn exact_unitary(poly: &PauliPolynomial, t: f64) -> Result<DenseUnitary> {
    let h = hamiltonian_matrix(poly)?;
    let eig = SymmetricEigen::new(h);
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|lambda| Complex64::from_polar(1.0, -t / 2.0 * lambda)));
    let m = &eig.eigenvectors * phases * eig.eigenvectors.adjoint();
    DenseUnitary::from_matrix(poly.num_qubits(), m)
}

fn permute_index(x: usize, perm: &QubitPermutation) -> usize {
    let mut y = 0;
    for j in 0..perm.len() {
        if x >> j & 1 == 1 {
            y |= 1 << perm.physical(j);
        }
    }
    y
}

/// Operator that moves logical qubit `j` onto wire `perm[j]`.
pub fn permutation_unitary(perm: &QubitPermutation) -> Result<DenseUnitary> {
    let n = perm.len();
    let dim = check_size(n)?;
    let mut m = DMatrix::from_element(dim, dim, ZERO);
    for x in 0..dim {
        m[(permute_index(x, perm), x)] = ONE;
    }
    DenseUnitary::from_matrix(n, m)
}

/// `min_γ max|u1 - e^{iγ} Q(perm) u2|`, with the phase fixed at the largest
/// entry of the right-hand side.
pub fn distance_up_to_phase(u1: &DenseUnitary, u2: &DenseUnitary, perm: &QubitPermutation) -> Result<f64> {
    if u1.dim() != u2.dim() {
        return Err(Error::DimensionMismatch(u1.dim(), u2.dim()));
    }
    if perm.len() != u1.num_qubits() {
        return Err(Error::DimensionMismatch(u1.num_qubits(), perm.len()));
    }
    let rhs = &permutation_unitary(perm)?.matrix * &u2.matrix;
    let (idx, pivot) = rhs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .map(|(i, z)| (i, *z))
        .expect("non-empty matrix");
    let lhs_entry = u1.matrix.as_slice()[idx];
    if lhs_entry.norm() < 1e-12 {
        return Ok(f64::INFINITY);
    }
    let phase = lhs_entry / pivot;
    let phase = phase / phase.norm();
    Ok(max_norm(&(&u1.matrix - rhs * phase)))
}

/// True iff `u1 = e^{iγ} Q(perm) u2` to within `tol` in max norm.
pub fn equivalent(u1: &DenseUnitary, u2: &DenseUnitary, perm: &QubitPermutation, tol: f64) -> Result<bool> {
    Ok(distance_up_to_phase(u1, u2, perm)? <= tol)
}

/// Logical unitary of a synthesized circuit: the wire relabelling undone.
pub fn logical_unitary(circuit: &Circuit, perm: &QubitPermutation) -> Result<DenseUnitary> {
    let u = circuit_unitary(circuit)?;
    let q = permutation_unitary(perm)?;
    Ok(DenseUnitary { num_qubits: u.num_qubits, matrix: q.matrix.transpose() * u.matrix })
}

/// Max-norm deviation between a synthesis result and the product of the
/// source gadgets in the emitted order.
pub fn check_synthesis(poly: &PauliPolynomial, result: &SynthesisResult) -> Result<f64> {
    let expected = polynomial_unitary(&poly.reordered(&result.emitted_order))?;
    let actual = circuit_unitary(&result.circuit)?;
    distance_up_to_phase(&actual, &expected, &result.permutation)
}

/// `<0| U_exact(t) U_circuit† |0>`, where one repetition of the circuit (with
/// its wire relabelling) implements the step polynomial and is repeated
/// `repetitions` times.
pub fn overlap(
    poly: &PauliPolynomial,
    circuit: &Circuit,
    perm: &QubitPermutation,
    config: TrotterConfig,
) -> Result<Complex64> {
    let exact = exact_unitary(poly, config.timestep)?;
    overlap_with_exact(&exact, circuit, perm, config.repetitions)
}

/// [`overlap`] with a precomputed exact evolution operator.
pub fn overlap_with_exact(
    exact: &DenseUnitary,
    circuit: &Circuit,
    perm: &QubitPermutation,
    repetitions: usize,
) -> Result<Complex64> {
    if circuit.num_qubits() != exact.num_qubits() {
        return Err(Error::DimensionMismatch(exact.num_qubits(), circuit.num_qubits()));
    }
    if perm.len() != circuit.num_qubits() {
        return Err(Error::DimensionMismatch(circuit.num_qubits(), perm.len()));
    }
    let dim = exact.dim();
    // U_circuit† |0> = (U_wires† Q)^r |0>
    let mut state = vec![ZERO; dim];
    state[0] = ONE;
    let mut moved = vec![ZERO; dim];
    for _ in 0..repetitions {
        for (x, amp) in state.iter().enumerate() {
            moved[permute_index(x, perm)] = *amp;
        }
        std::mem::swap(&mut state, &mut moved);
        for &g in circuit.gates().iter().rev() {
            apply_gate_slice(&mut state, dim, g.adjoint());
        }
    }
    Ok((0..dim).map(|k| exact.matrix[(0, k)] * state[k]).sum())
}

/// Reads the tableau off a dense Clifford unitary by conjugating every basis
/// Pauli. Fails if an image is not a signed Pauli string.
pub fn tableau_from_unitary(u: &DenseUnitary) -> Result<CliffordTableau> {
    let n = u.num_qubits();
    let mut bits = Vec::with_capacity(2 * n);
    let mut signs = Vec::with_capacity(2 * n);
    for row in 0..2 * n {
        let mut basis = PauliString::identity(n);
        basis.set(row % n, if row < n { PauliLetter::X } else { PauliLetter::Z });
        let image = &u.matrix * pauli_matrix(&basis)? * u.matrix.adjoint();
        let (string, sign) = identify_pauli(&image, n)?;
        let mut r = vec![false; 2 * n];
        for (k, l) in string.letters().iter().enumerate() {
            r[k] = l.x();
            r[k + n] = l.z();
        }
        bits.push(r);
        signs.push(sign);
    }
    CliffordTableau::from_parts(bits, signs)
}

/// Finds `±P` equal to `m`.
pub fn identify_pauli(m: &DMatrix<Complex64>, n: usize) -> Result<(PauliString, bool)> {
    let dim = 1usize << n;
    // column 0 has its only nonzero entry at the X mask
    let xmask = (0..dim).find(|&r| m[(r, 0)].norm() > 0.5).ok_or(Error::InvalidArgument("zero column".into()))?;
    for zmask in 0..dim {
        let letters = (0..n)
            .map(|k| PauliLetter::from_bits(xmask >> k & 1 == 1, zmask >> k & 1 == 1))
            .collect::<Vec<_>>();
        let p = PauliString::new(letters);
        let pm = pauli_matrix(&p)?;
        if max_norm(&(m - &pm)) < 1e-9 {
            return Ok((p, false));
        }
        if max_norm(&(m + &pm)) < 1e-9 {
            return Ok((p, true));
        }
    }
    Err(Error::InvalidArgument("matrix is not a signed Pauli string".into()))
}
