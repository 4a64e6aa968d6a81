//! Pauli letters, strings, gadgets and polynomials, together with the
//! Clifford conjugation rules used to push gates through gadgets.
//!
//! Conjugation convention: [`conjugate_letter`] returns `g† P g`. When a gate
//! `C` is emitted into a circuit, every pending gadget is conjugated by `C†`
//! (which yields `C P C†`).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub const ALL: [PauliLetter; 4] = [PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z];

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliLetter::I,
            (true, false) => PauliLetter::X,
            (true, true) => PauliLetter::Y,
            (false, true) => PauliLetter::Z,
        }
    }

    pub fn x(self) -> bool {
        matches!(self, PauliLetter::X | PauliLetter::Y)
    }

    pub fn z(self) -> bool {
        matches!(self, PauliLetter::Z | PauliLetter::Y)
    }

    pub fn is_identity(self) -> bool {
        self == PauliLetter::I
    }

    /// Two single-qubit Paulis anticommute iff both are non-identity and differ.
    pub fn anticommutes(self, other: PauliLetter) -> bool {
        !self.is_identity() && !other.is_identity() && self != other
    }

    pub fn to_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(PauliLetter::I),
            'X' => Some(PauliLetter::X),
            'Y' => Some(PauliLetter::Y),
            'Z' => Some(PauliLetter::Z),
            _ => None,
        }
    }
}

impl fmt::Display for PauliLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<PauliLetter>,
}

impl PauliString {
    pub fn identity(num_qubits: usize) -> Self {
        PauliString { letters: vec![PauliLetter::I; num_qubits] }
    }

    pub fn new(letters: Vec<PauliLetter>) -> Self {
        PauliString { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[PauliLetter] {
        &self.letters
    }

    pub fn get(&self, qubit: usize) -> PauliLetter {
        self.letters[qubit]
    }

    pub fn set(&mut self, qubit: usize, letter: PauliLetter) {
        self.letters[qubit] = letter;
    }

    /// Qubits carrying a non-identity letter.
    pub fn legs(&self) -> impl Iterator<Item = usize> + '_ {
        self.letters.iter().enumerate().filter(|(_, l)| !l.is_identity()).map(|(i, _)| i)
    }

    pub fn leg_count(&self) -> usize {
        self.letters.iter().filter(|l| !l.is_identity()).count()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|l| l.is_identity())
    }

    pub fn commutes_with(&self, other: &PauliString) -> Result<bool> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        let anti = self.letters.iter().zip(&other.letters).filter(|(a, b)| a.anticommutes(**b)).count();
        Ok(anti % 2 == 0)
    }

    /// Replaces the string by `g† P g` and returns true if a minus sign was
    /// produced.
    pub fn conjugate(&mut self, gate: CliffordGate) -> bool {
        match gate {
            CliffordGate::Cnot { control, target } => {
                let (c, t) = (self.letters[control], self.letters[target]);
                if c.is_identity() && t.is_identity() {
                    return false;
                }
                let ((c2, t2), flip) = conjugate_cnot(c, t);
                self.letters[control] = c2;
                self.letters[target] = t2;
                flip
            }
            _ => {
                let q = gate.qubits()[0];
                let (l, flip) = conjugate_single(gate, self.letters[q]);
                self.letters[q] = l;
                flip
            }
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l)?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        s.chars()
            .map(|c| PauliLetter::from_char(c).ok_or_else(|| format!("invalid pauli letter '{}'", c)))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(PauliString::new)
    }
}

/// `exp(-i angle/2 P)` for the Pauli string `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliGadget {
    pub angle: f64,
    pub string: PauliString,
}

impl PauliGadget {
    pub fn new(angle: f64, string: PauliString) -> Self {
        PauliGadget { angle, string }
    }

    /// Convenience constructor; panics on an invalid letter.
    pub fn from_str_angle(angle: f64, s: &str) -> Self {
        PauliGadget { angle, string: s.parse().expect("valid pauli string") }
    }

    pub fn num_qubits(&self) -> usize {
        self.string.len()
    }

    pub fn commutes_with(&self, other: &PauliGadget) -> Result<bool> {
        self.string.commutes_with(&other.string)
    }

    /// Conjugates the gadget by `gate` (`g† P g`), folding a sign flip into
    /// the angle.
    pub fn conjugate(&mut self, gate: CliffordGate) {
        if self.string.conjugate(gate) {
            self.angle = -self.angle;
        }
    }
}

/// Free-function form of [`PauliGadget::commutes_with`].
pub fn commutes(a: &PauliGadget, b: &PauliGadget) -> Result<bool> {
    a.commutes_with(b)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PauliPolynomial {
    num_qubits: usize,
    gadgets: Vec<PauliGadget>,
}

impl PauliPolynomial {
    pub fn new(num_qubits: usize) -> Self {
        PauliPolynomial { num_qubits, gadgets: Vec::new() }
    }

    pub fn from_gadgets(num_qubits: usize, gadgets: Vec<PauliGadget>) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::InvalidArgument("polynomial needs at least one qubit".into()));
        }
        if let Some(g) = gadgets.iter().find(|g| g.num_qubits() != num_qubits) {
            return Err(Error::LengthMismatch(num_qubits, g.num_qubits()));
        }
        Ok(PauliPolynomial { num_qubits, gadgets })
    }

    /// Builds a polynomial from `(angle, string)` pairs. Panics on malformed
    /// strings, intended for tests and examples.
    pub fn from_terms(terms: &[(f64, &str)]) -> Self {
        let gadgets: Vec<_> = terms.iter().map(|(a, s)| PauliGadget::from_str_angle(*a, s)).collect();
        let q = gadgets.first().map(|g| g.num_qubits()).expect("at least one term");
        Self::from_gadgets(q, gadgets).expect("consistent lengths")
    }

    pub fn push(&mut self, gadget: PauliGadget) -> Result<()> {
        if gadget.num_qubits() != self.num_qubits {
            return Err(Error::LengthMismatch(self.num_qubits, gadget.num_qubits()));
        }
        self.gadgets.push(gadget);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gadgets(&self) -> &[PauliGadget] {
        &self.gadgets
    }

    pub fn len(&self) -> usize {
        self.gadgets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gadgets.is_empty()
    }

    /// Same strings, every angle multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        PauliPolynomial {
            num_qubits: self.num_qubits,
            gadgets: self.gadgets.iter().map(|g| PauliGadget::new(g.angle * factor, g.string.clone())).collect(),
        }
    }

    /// Gadgets rearranged in the given index order.
    pub fn reordered(&self, order: &[usize]) -> Self {
        PauliPolynomial {
            num_qubits: self.num_qubits,
            gadgets: order.iter().map(|&i| self.gadgets[i].clone()).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut poly: Option<PauliPolynomial> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse { line: line_no, message };
            let mut fields = line.split_whitespace();
            let (a, b) = match (fields.next(), fields.next(), fields.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => return Err(err(format!("expected two fields, got '{}'", line))),
            };
            match poly.as_mut() {
                None => {
                    if a != "qubits" {
                        return Err(err("expected header 'qubits <q>'".into()));
                    }
                    let q: usize = b.parse().map_err(|_| err(format!("invalid qubit count '{}'", b)))?;
                    if q == 0 {
                        return Err(err("qubit count must be positive".into()));
                    }
                    poly = Some(PauliPolynomial::new(q));
                }
                Some(p) => {
                    let angle: f64 = a.parse().map_err(|_| err(format!("invalid angle '{}'", a)))?;
                    if !angle.is_finite() {
                        return Err(err(format!("non-finite angle '{}'", a)));
                    }
                    let string: PauliString = b.parse().map_err(err)?;
                    if string.len() != p.num_qubits {
                        return Err(err(format!(
                            "pauli string has length {}, expected {}",
                            string.len(),
                            p.num_qubits
                        )));
                    }
                    p.gadgets.push(PauliGadget::new(angle, string));
                }
            }
        }
        poly.ok_or(Error::Parse { line: 0, message: "missing 'qubits <q>' header".into() })
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("qubits {}\n", self.num_qubits);
        for g in &self.gadgets {
            out.push_str(&format!("{} {}\n", g.angle, g.string));
        }
        out
    }
}

#[derive(Debug, Copy, Clone, PartialEq, Eq, Hash)]
pub enum CliffordGate {
    H(usize),
    S(usize),
    Sdg(usize),
    /// Square root of X.
    V(usize),
    Vdg(usize),
    Cnot { control: usize, target: usize },
}

impl CliffordGate {
    pub fn cnot(control: usize, target: usize) -> Self {
        CliffordGate::Cnot { control, target }
    }

    pub fn adjoint(self) -> Self {
        match self {
            CliffordGate::H(q) => CliffordGate::H(q),
            CliffordGate::S(q) => CliffordGate::Sdg(q),
            CliffordGate::Sdg(q) => CliffordGate::S(q),
            CliffordGate::V(q) => CliffordGate::Vdg(q),
            CliffordGate::Vdg(q) => CliffordGate::V(q),
            cx @ CliffordGate::Cnot { .. } => cx,
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            CliffordGate::H(q)
            | CliffordGate::S(q)
            | CliffordGate::Sdg(q)
            | CliffordGate::V(q)
            | CliffordGate::Vdg(q) => vec![q],
            CliffordGate::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            CliffordGate::Cnot { .. } => 2,
            _ => 1,
        }
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        for q in self.qubits() {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange { index: q, num_qubits });
            }
        }
        if let CliffordGate::Cnot { control, target } = *self {
            if control == target {
                return Err(Error::DegenerateCnot(control));
            }
        }
        Ok(())
    }
}

/// A Pauli operator on at most two qubits in the form `i^phase X^x Z^z`,
/// used to derive conjugation signs.
#[derive(Debug, Copy, Clone)]
struct SmallPauli {
    x: u8,
    z: u8,
    phase: u8,
}

impl SmallPauli {
    const ONE: SmallPauli = SmallPauli { x: 0, z: 0, phase: 0 };

    fn from_letters(letters: &[PauliLetter]) -> Self {
        let mut p = SmallPauli::ONE;
        for (k, l) in letters.iter().enumerate() {
            if l.x() {
                p.x |= 1 << k;
            }
            if l.z() {
                p.z |= 1 << k;
            }
            // Y = i X Z
            if *l == PauliLetter::Y {
                p.phase = (p.phase + 1) % 4;
            }
        }
        p
    }

    fn mul(self, rhs: SmallPauli) -> SmallPauli {
        let swaps = (self.z & rhs.x).count_ones() as u8;
        SmallPauli { x: self.x ^ rhs.x, z: self.z ^ rhs.z, phase: (self.phase + rhs.phase + 2 * swaps) % 4 }
    }

    /// Letters plus a sign bit. Panics if the operator is not Hermitian.
    fn to_letters(self, n: usize) -> (Vec<PauliLetter>, bool) {
        let mut phase = self.phase;
        let letters: Vec<_> = (0..n)
            .map(|k| {
                let (x, z) = (self.x >> k & 1 == 1, self.z >> k & 1 == 1);
                if x && z {
                    // X Z = -i Y
                    phase = (phase + 3) % 4;
                }
                PauliLetter::from_bits(x, z)
            })
            .collect();
        assert!(phase.is_multiple_of(2), "conjugation produced a non-hermitian operator");
        (letters, phase == 2)
    }
}

/// Images `g† X g` and `g† Z g` of the single-qubit generators.
fn single_generator_images(gate: CliffordGate) -> (SmallPauli, SmallPauli) {
    let x = SmallPauli { x: 1, z: 0, phase: 0 };
    let z = SmallPauli { x: 0, z: 1, phase: 0 };
    let xz = |phase| SmallPauli { x: 1, z: 1, phase };
    match gate {
        CliffordGate::H(_) => (z, x),
        // S† X S = -Y, S† Z S = Z
        CliffordGate::S(_) => (xz(3), z),
        CliffordGate::Sdg(_) => (xz(1), z),
        // V† X V = X, V† Z V = Y
        CliffordGate::V(_) => (x, xz(1)),
        CliffordGate::Vdg(_) => (x, xz(3)),
        CliffordGate::Cnot { .. } => unreachable!("two-qubit gate"),
    }
}

fn conjugate_small(p: SmallPauli, x_images: &[SmallPauli], z_images: &[SmallPauli]) -> SmallPauli {
    let mut out = SmallPauli { phase: p.phase, ..SmallPauli::ONE };
    for (k, img) in x_images.iter().enumerate() {
        if p.x >> k & 1 == 1 {
            out = out.mul(*img);
        }
    }
    for (k, img) in z_images.iter().enumerate() {
        if p.z >> k & 1 == 1 {
            out = out.mul(*img);
        }
    }
    out
}

/// `g† P g` for a single-qubit Clifford `g`; the flag is true for a minus sign.
pub fn conjugate_single(gate: CliffordGate, letter: PauliLetter) -> (PauliLetter, bool) {
    if letter.is_identity() {
        return (letter, false);
    }
    let (xi, zi) = single_generator_images(gate);
    let (letters, flip) = conjugate_small(SmallPauli::from_letters(&[letter]), &[xi], &[zi]).to_letters(1);
    (letters[0], flip)
}

/// `CNOT P CNOT` for letters on (control, target).
pub fn conjugate_cnot(control: PauliLetter, target: PauliLetter) -> ((PauliLetter, PauliLetter), bool) {
    // bit 0 = control, bit 1 = target
    let x_images = [SmallPauli { x: 0b11, z: 0, phase: 0 }, SmallPauli { x: 0b10, z: 0, phase: 0 }];
    let z_images = [SmallPauli { x: 0, z: 0b01, phase: 0 }, SmallPauli { x: 0, z: 0b11, phase: 0 }];
    let p = SmallPauli::from_letters(&[control, target]);
    let (letters, flip) = conjugate_small(p, &x_images, &z_images).to_letters(2);
    ((letters[0], letters[1]), flip)
}

/// `g† P g` where `letters` are the letters on the gate's qubits, in the order
/// of [`CliffordGate::qubits`]. Returns the new letters and whether the sign
/// flipped.
///
/// Panics if the letter count does not match the gate arity.
pub fn conjugate_letter(gate: CliffordGate, letters: &[PauliLetter]) -> (Vec<PauliLetter>, bool) {
    assert_eq!(letters.len(), gate.arity(), "letter count must match gate arity");
    match gate {
        CliffordGate::Cnot { .. } => {
            let ((c, t), flip) = conjugate_cnot(letters[0], letters[1]);
            (vec![c, t], flip)
        }
        _ => {
            let (l, flip) = conjugate_single(gate, letters[0]);
            (vec![l], flip)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use PauliLetter::*;

    #[test]
    fn cnot_moves_zz_onto_target() {
        assert_eq!(conjugate_cnot(Z, Z), ((I, Z), false));
        assert_eq!(conjugate_cnot(Z, Y), ((I, Y), false));
    }

    #[test]
    fn identity_is_fixed() {
        for gate in [CliffordGate::H(0), CliffordGate::S(0), CliffordGate::V(0)] {
            assert_eq!(conjugate_single(gate, I), (I, false));
        }
        assert_eq!(conjugate_cnot(I, I), ((I, I), false));
    }

    #[test]
    fn single_qubit_table() {
        assert_eq!(conjugate_single(CliffordGate::S(0), X), (Y, true));
        assert_eq!(conjugate_single(CliffordGate::S(0), Y), (X, false));
        assert_eq!(conjugate_single(CliffordGate::Sdg(0), X), (Y, false));
        assert_eq!(conjugate_single(CliffordGate::V(0), Y), (Z, true));
        assert_eq!(conjugate_single(CliffordGate::V(0), Z), (Y, false));
        assert_eq!(conjugate_single(CliffordGate::H(0), Y), (Y, true));
    }

    #[test]
    fn conjugate_then_adjoint_restores() {
        let gates = [
            CliffordGate::H(0),
            CliffordGate::S(0),
            CliffordGate::Sdg(0),
            CliffordGate::V(0),
            CliffordGate::Vdg(0),
        ];
        for g in gates {
            for l in PauliLetter::ALL {
                let (a, f1) = conjugate_single(g, l);
                let (b, f2) = conjugate_single(g.adjoint(), a);
                assert_eq!((b, f1 ^ f2), (l, false), "{:?} {:?}", g, l);
            }
        }
        for c in PauliLetter::ALL {
            for t in PauliLetter::ALL {
                let ((c1, t1), f1) = conjugate_cnot(c, t);
                let ((c2, t2), f2) = conjugate_cnot(c1, t1);
                assert_eq!((c2, t2, f1 ^ f2), (c, t, false));
            }
        }
    }

    #[test]
    fn commutation() {
        let g = |s: &str| PauliGadget::from_str_angle(1.0, s);
        assert!(commutes(&g("ZZ"), &g("ZZ")).unwrap());
        assert!(!commutes(&g("XI"), &g("ZI")).unwrap());
        assert!(commutes(&g("XX"), &g("ZZ")).unwrap());
        assert!(commutes(&g("XI"), &g("ZZZ")).is_err());
    }

    #[test]
    fn gadget_conjugation_folds_sign_into_angle() {
        let mut g = PauliGadget::from_str_angle(0.3, "XI");
        g.conjugate(CliffordGate::S(0));
        assert_eq!(g.string.to_string(), "YI");
        assert_eq!(g.angle, -0.3);
    }

    #[test]
    fn parse_basic() {
        let p = PauliPolynomial::parse("qubits 5\n0.5 XIXYZ\n").unwrap();
        assert_eq!(p.num_qubits(), 5);
        assert_eq!(p.gadgets()[0], PauliGadget::from_str_angle(0.5, "XIXYZ"));
    }

    #[test]
    fn parse_header_only_is_empty_polynomial() {
        let p = PauliPolynomial::parse("# nothing\nqubits 3\n\n").unwrap();
        assert!(p.is_empty());
        assert!(PauliPolynomial::parse("").is_err());
    }

    #[test]
    fn parse_errors_name_the_line() {
        let cases = [
            ("qubits 2\n0.1 XX\n0.2 XYZ\n", 3),
            ("qubits 2\nabc XX\n", 2),
            ("qubits 2\ninf XX\n", 2),
            ("qubits 2\nNaN XX\n", 2),
            ("qubits 2\n0.1 XQ\n", 2),
            ("qubits 2\n0.1\n", 2),
            ("0.1 XX\n", 1),
        ];
        for (text, line) in cases {
            match PauliPolynomial::parse(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{}", text),
                other => panic!("expected parse error for {:?}, got {:?}", text, other),
            }
        }
    }

    #[test]
    fn serialize_round_trip_three_gadgets() {
        let text = "qubits 3\n0.785398 IXY\n-1.5 ZZZ\n3.141592653589793 YII\n";
        let p = PauliPolynomial::parse(text).unwrap();
        assert_eq!(p.serialize(), text);
        assert_eq!(PauliPolynomial::parse(&p.serialize()).unwrap(), p);
    }

    #[test]
    fn cnot_validation() {
        assert_eq!(CliffordGate::cnot(1, 1).validate(3), Err(Error::DegenerateCnot(1)));
        assert!(CliffordGate::cnot(0, 3).validate(3).is_err());
        assert!(CliffordGate::H(2).validate(3).is_ok());
    }
}
