//! Phase-free Pauli algebra over the binary symplectic representation.
//!
//! A Pauli operator on `n ≤ 64` qubits is stored as two packed words: bit `i`
//! of `x` (resp. `z`) is set when the operator has an X (resp. Z) component on
//! qubit `i`. Qubits are indexed block-major: block `b`, position `q` is qubit
//! `4b + q`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest register a packed Pauli can describe.
pub const MAX_QUBITS: usize = 64;

/// Number of physical qubits in one [[4,2,2]] block.
pub const BLOCK: usize = 4;

fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Single-qubit Pauli letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

/// An `n`-qubit Pauli operator with phases discarded.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pauli {
    n: usize,
    x: u64,
    z: u64,
}

impl Pauli {
    pub fn identity(n: usize) -> Result<Self> {
        Self::from_bits(n, 0, 0)
    }

    /// Builds an operator from packed X and Z support words.
    pub fn from_bits(n: usize, x: u64, z: u64) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits(n));
        }
        let m = mask(n);
        if x & !m != 0 || z & !m != 0 {
            let stray = ((x | z) & !m).trailing_zeros() as usize;
            return Err(Error::QubitOutOfRange { index: stray, n });
        }
        Ok(Pauli { n, x, z })
    }

    /// A single-qubit Pauli `letter` acting on qubit `q`.
    pub fn single(n: usize, q: usize, letter: Letter) -> Result<Self> {
        if q >= n {
            return Err(Error::QubitOutOfRange { index: q, n });
        }
        let (x, z) = letter.bits();
        Self::from_bits(n, (x as u64) << q, (z as u64) << q)
    }

    /// Parses strings such as `"XXII"` or `"XIXI|ZZII"`; `'|'` and whitespace
    /// are ignored, `'_'` is accepted as identity.
    pub fn parse(s: &str) -> Result<Self> {
        let mut x = 0u64;
        let mut z = 0u64;
        let mut n = 0usize;
        for ch in s.chars() {
            let letter = match ch {
                '|' | ' ' => continue,
                'I' | '_' => Letter::I,
                'X' => Letter::X,
                'Y' => Letter::Y,
                'Z' => Letter::Z,
                _ => return Err(Error::ParsePauli(s.to_string())),
            };
            if n >= MAX_QUBITS {
                return Err(Error::TooManyQubits(n + 1));
            }
            let (bx, bz) = letter.bits();
            x |= (bx as u64) << n;
            z |= (bz as u64) << n;
            n += 1;
        }
        Self::from_bits(n, x, z)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_bits(&self) -> u64 {
        self.x
    }

    pub fn z_bits(&self) -> u64 {
        self.z
    }

    pub fn letter(&self, q: usize) -> Letter {
        Letter::from_bits((self.x >> q) & 1 == 1, (self.z >> q) & 1 == 1)
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Number of qubits on which the operator acts nontrivially.
    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    /// Support as a bit mask.
    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    fn check_dim(&self, other: &Pauli) -> Result<()> {
        if self.n != other.n {
            Err(Error::Dimension(self.n, other.n))
        } else {
            Ok(())
        }
    }

    /// Group product with phases discarded (componentwise XOR).
    pub fn multiply(&self, other: &Pauli) -> Result<Pauli> {
        self.check_dim(other)?;
        Ok(Pauli {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        })
    }

    /// True iff the symplectic form vanishes.
    pub fn commutes(&self, other: &Pauli) -> Result<bool> {
        self.check_dim(other)?;
        Ok(self.anticommutes_unchecked(other) == 0)
    }

    /// Symplectic form as a bit; callers guarantee equal dimensions.
    pub(crate) fn anticommutes_unchecked(&self, other: &Pauli) -> u32 {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) & 1
    }

    /// Restriction to the qubits in `keep` (a bit mask); the dimension is kept.
    pub fn restrict(&self, keep: u64) -> Pauli {
        Pauli {
            n: self.n,
            x: self.x & keep,
            z: self.z & keep,
        }
    }

    /// Extracts block `b` as a 4-qubit operator.
    pub fn block(&self, b: usize) -> Result<Pauli> {
        if BLOCK * (b + 1) > self.n {
            return Err(Error::QubitOutOfRange {
                index: BLOCK * (b + 1) - 1,
                n: self.n,
            });
        }
        let s = BLOCK * b;
        Pauli::from_bits(BLOCK, (self.x >> s) & 0xf, (self.z >> s) & 0xf)
    }

    /// Embeds `self` into an `n`-qubit register starting at qubit `offset`.
    pub fn embed(&self, n: usize, offset: usize) -> Result<Pauli> {
        if offset + self.n > n {
            return Err(Error::QubitOutOfRange {
                index: offset + self.n - 1,
                n,
            });
        }
        Pauli::from_bits(n, self.x << offset, self.z << offset)
    }

    /// Heisenberg propagation of a deviation through a unitary gate acting on
    /// `qubits`: the result is `U p U†`.
    pub fn conjugate_through(&self, gate: &GateKind, qubits: &[usize]) -> Result<Pauli> {
        gate.check_arity(qubits)?;
        for &q in qubits {
            if q >= self.n {
                return Err(Error::QubitOutOfRange { index: q, n: self.n });
            }
        }
        let (mut x, mut z) = (self.x, self.z);
        match gate {
            GateKind::Hadamard => {
                let q = qubits[0];
                let (bx, bz) = ((x >> q) & 1, (z >> q) & 1);
                x = (x & !(1 << q)) | (bz << q);
                z = (z & !(1 << q)) | (bx << q);
            }
            GateKind::Cnot => {
                let (c, t) = (qubits[0], qubits[1]);
                x ^= ((x >> c) & 1) << t;
                z ^= ((z >> t) & 1) << c;
            }
            GateKind::Wait => {}
            GateKind::SwapWiring(perm) => {
                // Qubit qubits[i] is relabelled as qubits[perm[i]].
                let (mut nx, mut nz) = (x, z);
                for &q in qubits {
                    nx &= !(1 << q);
                    nz &= !(1 << q);
                }
                for (i, &q) in qubits.iter().enumerate() {
                    let dst = qubits[perm[i]];
                    nx |= ((x >> q) & 1) << dst;
                    nz |= ((z >> q) & 1) << dst;
                }
                x = nx;
                z = nz;
            }
            GateKind::PrepZ | GateKind::PrepX | GateKind::MeasX | GateKind::MeasZ => {
                return Err(Error::NotUnitary(gate.name()));
            }
        }
        Ok(Pauli { n: self.n, x, z })
    }

    /// Renders the operator as `IXYZ…`, with `'|'` separating 4-qubit blocks.
    pub fn render(&self) -> String {
        let mut s = String::with_capacity(self.n + self.n / BLOCK);
        for q in 0..self.n {
            if q > 0 && q % BLOCK == 0 {
                s.push('|');
            }
            s.push(self.letter(q).as_char());
        }
        s
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({})", self.render())
    }
}

/// Operation kinds appearing in the gadgets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    PrepZ,
    PrepX,
    Hadamard,
    /// Qubits are `[control, target]`.
    Cnot,
    MeasX,
    MeasZ,
    Wait,
    /// Pure relabelling: `qubits[i]` becomes `qubits[perm[i]]`. Never faultable.
    SwapWiring(Vec<usize>),
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::PrepZ => "prep_z",
            GateKind::PrepX => "prep_x",
            GateKind::Hadamard => "h",
            GateKind::Cnot => "cnot",
            GateKind::MeasX => "meas_x",
            GateKind::MeasZ => "meas_z",
            GateKind::Wait => "wait",
            GateKind::SwapWiring(_) => "swap_wiring",
        }
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self, GateKind::MeasX | GateKind::MeasZ)
    }

    pub fn is_preparation(&self) -> bool {
        matches!(self, GateKind::PrepX | GateKind::PrepZ)
    }

    pub fn is_unitary(&self) -> bool {
        !(self.is_measurement() || self.is_preparation())
    }

    /// Validates the qubit list against the gate's arity.
    pub fn check_arity(&self, qubits: &[usize]) -> Result<()> {
        let expected = match self {
            GateKind::Cnot => 2,
            GateKind::SwapWiring(p) => {
                let mut seen = vec![false; p.len()];
                for &d in p {
                    if d >= p.len() || std::mem::replace(&mut seen[d], true) {
                        return Err(Error::Spec(format!("invalid wiring permutation {p:?}")));
                    }
                }
                p.len()
            }
            _ => 1,
        };
        if qubits.len() != expected {
            return Err(Error::Arity {
                gate: self.name(),
                expected,
                got: qubits.len(),
            });
        }
        if matches!(self, GateKind::Cnot) && qubits[0] == qubits[1] {
            return Err(Error::CnotSelfLoop(qubits[0]));
        }
        Ok(())
    }
}

/// Symplectic bit of two packed 4-qubit operators `(x, z)`.
pub(crate) fn anticommute4(a: (u8, u8), b: (u8, u8)) -> u8 {
    (((a.0 & b.1).count_ones() + (a.1 & b.0).count_ones()) & 1) as u8
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Pauli {
        Pauli::parse(s).unwrap()
    }

    #[test]
    fn multiply_examples() {
        assert!(p("X").multiply(&p("X")).unwrap().is_identity());
        assert_eq!(p("X").multiply(&p("Z")).unwrap(), p("Y"));
        assert_eq!(p("XXII").multiply(&p("XXXX")).unwrap(), p("IIXX"));
        assert_eq!(
            p("XX").multiply(&p("XXX")),
            Err(Error::Dimension(2, 3))
        );
    }

    #[test]
    fn commutation_examples() {
        assert!(p("XXXX").commutes(&p("ZZZZ")).unwrap());
        assert!(!p("XXII").commutes(&p("ZIZI")).unwrap());
        assert!(p("IIII").commutes(&p("XYZI")).unwrap());
    }

    #[test]
    fn conjugation_examples() {
        let xc = p("XI");
        assert_eq!(xc.conjugate_through(&GateKind::Cnot, &[0, 1]).unwrap(), p("XX"));
        let zt = p("IZ");
        assert_eq!(zt.conjugate_through(&GateKind::Cnot, &[0, 1]).unwrap(), p("ZZ"));
        assert_eq!(p("XI").conjugate_through(&GateKind::Cnot, &[1, 0]).unwrap(), p("XI"));
        assert_eq!(p("X").conjugate_through(&GateKind::Hadamard, &[0]).unwrap(), p("Z"));
        assert_eq!(p("Y").conjugate_through(&GateKind::Hadamard, &[0]).unwrap(), p("Y"));
        assert_eq!(
            p("XYZ")
                .conjugate_through(&GateKind::SwapWiring(vec![2, 0, 1]), &[0, 1, 2])
                .unwrap(),
            p("YZX")
        );
        assert!(matches!(
            p("X").conjugate_through(&GateKind::MeasZ, &[0]),
            Err(Error::NotUnitary(_))
        ));
        assert!(matches!(
            p("XX").conjugate_through(&GateKind::Cnot, &[0, 2]),
            Err(Error::QubitOutOfRange { .. })
        ));
        assert_eq!(
            p("XX").conjugate_through(&GateKind::Cnot, &[1, 1]),
            Err(Error::CnotSelfLoop(1))
        );
    }

    #[test]
    fn rendering_and_weight() {
        let q = p("XIYZ|ZIII");
        assert_eq!(q.n(), 8);
        assert_eq!(q.render(), "XIYZ|ZIII");
        assert_eq!(q.weight(), 4);
        assert_eq!(q.block(1).unwrap(), p("ZIII"));
        assert_eq!(p("ZIII").embed(8, 4).unwrap(), p("IIII|ZIII"));
        assert!(Pauli::parse("XQ").is_err());
    }
}
