use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I = 0,
    X = 1,
    Y = 2,
    Z = 3,
}

impl TryFrom<char> for Pauli {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            _ => Err(Error::invalid("pauli", alloc::format!("unknown letter {c:?}"))),
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// Tensor product of single-qubit Paulis, stored as bit masks.
///
/// With `x` the qubits carrying `X` or `Y` and `z` those carrying `Z` or `Y`,
/// the operator is `i^{#Y} X^x Z^z`, so `⟨r|P|r⊕x⟩ = i^{#Y} (−1)^{|(r⊕x)∧z|}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    letters: Vec<Pauli>,
    x: usize,
    z: usize,
    phase: C64,
}

impl PauliString {
    pub(crate) fn from_letters(letters: Vec<Pauli>) -> Self {
        let n = letters.len();
        let (mut x, mut z, mut ny) = (0usize, 0usize, 0usize);
        for (k, &p) in letters.iter().enumerate() {
            let bit = 1 << (n - 1 - k);
            match p {
                Pauli::I => {}
                Pauli::X => x |= bit,
                Pauli::Y => {
                    x |= bit;
                    z |= bit;
                    ny += 1;
                }
                Pauli::Z => z |= bit,
            }
        }
        let phase = [
            C64::new(1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(-1.0, 0.0),
            C64::new(0.0, -1.0),
        ][ny % 4];
        PauliString {
            letters,
            x,
            z,
            phase,
        }
    }

    /// The `index`-th string in base-4 order (`I < X < Y < Z`, qubit 1 most significant).
    pub fn from_index(index: usize, n_qubits: usize) -> Self {
        let mut letters = alloc::vec![Pauli::I; n_qubits];
        let mut rest = index;
        for l in letters.iter_mut().rev() {
            *l = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][rest % 4];
            rest /= 4;
        }
        Self::from_letters(letters)
    }

    pub fn index(&self) -> usize {
        self.letters.iter().fold(0, |acc, &p| acc * 4 + p as usize)
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    /// Basis-index bits of the non-identity positions.
    pub fn support(&self) -> usize {
        self.x | self.z
    }

    /// `(r⊕x, ⟨r|P|r⊕x⟩)`: the one nonzero entry of row `r`.
    #[inline]
    pub(crate) fn row_entry(&self, r: usize) -> (usize, C64) {
        let c = r ^ self.x;
        let sign = if (c & self.z).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        (c, self.phase * sign)
    }

    /// `tr(ρP)`
    pub fn expectation(&self, rho: &CMatrix) -> f64 {
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..rho.dim() {
            let (c, v) = self.row_entry(r);
            acc += v * rho[(c, r)];
        }
        acc.re
    }

    pub fn matrix(&self) -> CMatrix {
        let mut m = CMatrix::zeros(1 << self.n_qubits());
        for r in 0..m.dim() {
            let (c, v) = self.row_entry(r);
            m[(r, c)] = v;
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl core::str::FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s.chars().map(Pauli::try_from).collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(Error::EmptySelection);
        }
        Ok(Self::from_letters(letters))
    }
}
