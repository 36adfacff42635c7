use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Maximum number of qubits a [`PauliString`] can address.
pub const MAX_QUBITS: usize = 64;

/// Global phase i^k of a Pauli string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(k: u32) -> Phase {
        Phase((k % 4) as u8)
    }

    /// Exponent k in i^k, in 0..4.
    pub fn power(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn conj(self) -> Phase {
        Phase((4 - self.0) % 4)
    }

    /// Value as (re, im).
    pub fn value(self) -> (f64, f64) {
        match self.0 {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "+1",
            1 => "+i",
            2 => "-1",
            _ => "-i",
        })
    }
}

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Letter {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

/// Signed tensor product of Pauli letters, `phase * P_0 ⊗ P_1 ⊗ ...`.
///
/// Letters are stored as symplectic bit masks; qubit `q` is bit `q` of both
/// masks and also bit `q` of a computational basis index. Separator marks
/// only affect display and are ignored by equality and hashing.
#[derive(Clone, Debug)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    phase: Phase,
    seps: u64,
}

fn width_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliString {
    pub fn identity(n: usize) -> PauliString {
        assert!(n >= 1 && n <= MAX_QUBITS, "qubit count {n} out of range");
        PauliString { n, x: 0, z: 0, phase: Phase::ONE, seps: 0 }
    }

    /// Build from raw masks. Bits at or above `n` must be clear.
    pub fn from_masks(n: usize, x: u64, z: u64, phase: Phase) -> PauliString {
        assert!(n >= 1 && n <= MAX_QUBITS, "qubit count {n} out of range");
        let m = width_mask(n);
        assert!(x & !m == 0 && z & !m == 0, "mask bits beyond qubit count");
        PauliString { n, x, z, phase, seps: 0 }
    }

    /// String with the given letters on the listed qubits and identity elsewhere.
    pub fn from_sparse(n: usize, letters: &[(usize, Letter)]) -> PauliString {
        let mut p = PauliString::identity(n);
        for &(q, l) in letters {
            assert!(q < n, "qubit {q} out of range for {n} qubits");
            p.set(q, l);
        }
        p
    }

    /// Product of one letter over all listed qubits, e.g. `Z_{c1} Z_{c2} Z_{c3}`.
    pub fn product_of(n: usize, qubits: &[usize], letter: Letter) -> PauliString {
        let v: Vec<_> = qubits.iter().map(|&q| (q, letter)).collect();
        PauliString::from_sparse(n, &v)
    }

    pub fn parse(text: &str, n_qubits: usize) -> Result<PauliString> {
        let p: PauliString = text.parse()?;
        if p.n != n_qubits {
            return Err(Error::PauliLength { expected: n_qubits, found: p.n });
        }
        Ok(p)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> PauliString {
        self.phase = phase;
        self
    }

    /// Display a ';' before each listed qubit position.
    pub fn with_separators(mut self, before: &[usize]) -> PauliString {
        self.seps = 0;
        for &q in before {
            if q > 0 && q < self.n {
                self.seps |= 1 << q;
            }
        }
        self
    }

    pub fn separators(&self) -> Vec<usize> {
        (0..self.n).filter(|q| self.seps >> q & 1 == 1).collect()
    }

    pub fn letter(&self, q: usize) -> Letter {
        Letter::from_bits(self.x >> q & 1 == 1, self.z >> q & 1 == 1)
    }

    pub fn set(&mut self, q: usize, l: Letter) {
        let (x, z) = l.bits();
        self.x = (self.x & !(1 << q)) | ((x as u64) << q);
        self.z = (self.z & !(1 << q)) | ((z as u64) << q);
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> u32 {
        self.support().count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.support() == 0
    }

    /// Number of Y letters.
    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// Equality of letters, ignoring phase.
    pub fn same_letters(&self, other: &PauliString) -> bool {
        self.n == other.n && self.x == other.x && self.z == other.z
    }

    fn check_size(&self, other: &PauliString) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn try_multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_size(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn try_commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_size(other)?;
        Ok(self.commutes_unchecked(other))
    }

    /// Group product `self * other`. Panics on size mismatch.
    pub fn multiply(&self, other: &PauliString) -> PauliString {
        self.try_multiply(other).expect("pauli size mismatch")
    }

    /// Whether `self * other == other * self`. Panics on size mismatch.
    pub fn commutes(&self, other: &PauliString) -> bool {
        self.try_commutes(other).expect("pauli size mismatch")
    }

    fn mul_unchecked(&self, other: &PauliString) -> PauliString {
        // Letter form: A = i^{y_a} X^{x_a} Z^{z_a}. Moving Z^{z_a} past X^{x_b}
        // costs (-1)^{|z_a & x_b|}; re-expressing the result in letter form
        // removes i^{y_c}.
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let ya = self.y_count();
        let yb = other.y_count();
        let yc = (x & z).count_ones();
        let swap = (self.z & other.x).count_ones();
        let k = self.phase.power() as u32 + other.phase.power() as u32 + ya + yb + 2 * swap + 4 * 64 - yc;
        PauliString { n: self.n, x, z, phase: Phase::from_power(k), seps: self.seps | other.seps }
    }

    fn commutes_unchecked(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// Symplectic vector packed as `x | z << 64`, used for GF(2) elimination.
    pub fn symplectic(&self) -> u128 {
        self.x as u128 | (self.z as u128) << 64
    }
}

impl PartialEq for PauliString {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.x == other.x && self.z == other.z && self.phase == other.phase
    }
}

impl Eq for PauliString {}

impl Hash for PauliString {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.x.hash(state);
        self.z.hash(state);
        self.phase.hash(state);
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase.power() {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        for q in 0..self.n {
            if self.seps >> q & 1 == 1 {
                f.write_str(";")?;
            }
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(text: &str) -> Result<PauliString> {
        let t = text.trim();
        let (phase, body) = if let Some(rest) = t.strip_prefix("-i") {
            (Phase::MINUS_I, rest)
        } else if let Some(rest) = t.strip_prefix("+i") {
            (Phase::I, rest)
        } else if let Some(rest) = t.strip_prefix('i') {
            (Phase::I, rest)
        } else if let Some(rest) = t.strip_prefix('-') {
            (Phase::MINUS_ONE, rest)
        } else if let Some(rest) = t.strip_prefix('+') {
            (Phase::ONE, rest)
        } else {
            (Phase::ONE, t)
        };
        let mut x = 0u64;
        let mut z = 0u64;
        let mut seps = 0u64;
        let mut n = 0usize;
        for (pos, c) in body.chars().enumerate() {
            let l = match c {
                'I' => Letter::I,
                'X' => Letter::X,
                'Y' => Letter::Y,
                'Z' => Letter::Z,
                ';' => {
                    if n > 0 && n < MAX_QUBITS {
                        seps |= 1 << n;
                    }
                    continue;
                }
                other => return Err(Error::PauliChar { ch: other, pos }),
            };
            if n == MAX_QUBITS {
                return Err(Error::PauliLength { expected: MAX_QUBITS, found: n + 1 });
            }
            let (bx, bz) = l.bits();
            x |= (bx as u64) << n;
            z |= (bz as u64) << n;
            n += 1;
        }
        if n == 0 {
            return Err(Error::PauliLength { expected: 1, found: 0 });
        }
        seps &= width_mask(n) & !1;
        Ok(PauliString { n, x, z, phase, seps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn parses_semicolon_notation() {
        let a = PauliString::parse("IIX;IIXXII", 9).unwrap();
        assert_eq!(a.x_mask(), 1 << 2 | 1 << 5 | 1 << 6);
        assert_eq!(a.z_mask(), 0);
        assert_eq!(a.to_string(), "IIX;IIXXII");
        assert!(p("III;IIIIII").is_identity());
        assert_eq!(p("III;IIIIII").phase(), Phase::ONE);
        assert_eq!(p("ZZZ;IIIIII").to_string(), "ZZZ;IIIIII");
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!("IXA".parse::<PauliString>(), Err(Error::PauliChar { ch: 'A', pos: 2 })));
        assert!(matches!(PauliString::parse("IXZ", 4), Err(Error::PauliLength { .. })));
        assert!("".parse::<PauliString>().is_err());
    }

    #[test]
    fn separators_do_not_affect_equality() {
        assert_eq!(p("IIX;IIXXII"), p("IIXIIXXII"));
        assert_ne!(p("-XX"), p("XX"));
    }

    #[test]
    fn signed_round_trip() {
        for s in ["-XYZ", "iZ;Z", "-iYY", "XIX"] {
            assert_eq!(p(s).to_string(), s);
        }
    }

    #[test]
    fn quoted_products() {
        assert_eq!(p("IIX;IIIIII").multiply(&p("III;IIXXII")).to_string(), "IIX;IIXXII");
        assert_eq!(p("IIX;IIXXII").multiply(&p("III;IIXIII")).to_string(), "IIX;IIIXII");
        assert_eq!(p("X").multiply(&p("Y")), p("iZ"));
        assert_eq!(p("Y").multiply(&p("X")), p("-iZ"));
        assert_eq!(p("Z").multiply(&p("X")), p("iY"));
    }

    #[test]
    fn commutation() {
        assert!(p("ZZ").commutes(&p("XX")));
        assert!(!p("ZI").commutes(&p("XI")));
        assert!(p("XYZ").try_commutes(&p("XX")).is_err());
    }
}
