//! Positive definite integral lattices given by a Gram matrix.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{bareiss_determinant, inverse, IntMatrix};

/// A rank-`k` lattice with an integral symmetric positive definite Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerLattice {
    name: String,
    gram: IntMatrix,
    /// Machine-word copy of `gram` for enumeration.
    small: Vec<Vec<i64>>,
}

/// Number of lattice vectors of a given norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShellCount {
    pub norm: u64,
    pub count: u64,
}

/// Lattice vectors of one norm, as coefficient vectors in the lattice basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shell {
    pub norm: u64,
    pub vectors: Vec<Vec<i64>>,
}

impl Shell {
    /// One vector from each `{v, -v}` pair: the one whose first nonzero
    /// coordinate is positive. The zero shell returns the zero vector.
    pub fn representatives(&self) -> Vec<Vec<i64>> {
        self.vectors.iter().filter(|v| v.iter().find(|&&c| c != 0).is_none_or(|&c| c > 0)).cloned().collect()
    }
}

/// JSON shape of a user-supplied lattice.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub name: String,
    pub gram: Vec<Vec<i64>>,
}

impl IntegerLattice {
    /// Validates symmetry and positive definiteness (all leading principal
    /// minors positive).
    pub fn new(name: impl Into<String>, gram: IntMatrix) -> Result<Self> {
        let name = name.into();
        if gram.rows() == 0 || !gram.is_square() {
            return Err(Error::InvalidLattice(format!(
                "{name}: Gram matrix must be square and nonempty, got {}x{}",
                gram.rows(),
                gram.cols()
            )));
        }
        if !gram.is_symmetric() {
            return Err(Error::InvalidLattice(format!("{name}: Gram matrix is not symmetric")));
        }
        let k = gram.rows();
        for size in 1..=k {
            let minor = leading_minor(&gram, size);
            let det = bareiss_determinant(&minor)?;
            if !det.is_positive() {
                return Err(Error::InvalidLattice(format!(
                    "{name}: not positive definite (leading principal minor of order {size} is {det})"
                )));
            }
        }
        let small = (0..k)
            .map(|i| {
                gram.row(i)
                    .iter()
                    .map(|x| {
                        x.to_i64().ok_or_else(|| {
                            Error::InvalidLattice(format!("{name}: Gram entry {x} out of range"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { name, gram, small })
    }

    pub fn from_rows(name: impl Into<String>, rows: &[Vec<i64>]) -> Result<Self> {
        let name = name.into();
        let gram =
            IntMatrix::from_i64_rows(rows).map_err(|e| Error::InvalidLattice(format!("{name}: {e}")))?;
        Self::new(name, gram)
    }

    pub fn from_spec(spec: &LatticeSpec) -> Result<Self> {
        Self::from_rows(spec.name.clone(), &spec.gram)
    }

    pub fn to_spec(&self) -> LatticeSpec {
        LatticeSpec { name: self.name.clone(), gram: self.small.clone() }
    }

    /// Identity Gram matrix of rank `k`.
    pub fn standard(k: usize) -> Self {
        Self::new(format!("Z{k}"), IntMatrix::identity(k)).expect("identity is positive definite")
    }

    pub fn diagonal(name: impl Into<String>, entries: &[i64]) -> Result<Self> {
        let entries: Vec<BigInt> = entries.iter().map(|&x| BigInt::from(x)).collect();
        Self::new(name, IntMatrix::diagonal(&entries))
    }

    /// Built-in lattices by name.
    ///
    /// `Z1`..`Z4` (aliases `I1`..`I4`), `A1`, `A2`, `A1A1`, and the scaled
    /// variants `2Z1` (Gram `[[4]]`), `2Z1+Z1` (Gram `diag(4,1)`) and `2A1`
    /// (Gram `[[8]]`).
    pub fn builtin(name: &str) -> Option<Self> {
        let rows: Vec<Vec<i64>> = match name {
            "Z1" | "I1" => vec![vec![1]],
            "Z2" | "I2" => vec![vec![1, 0], vec![0, 1]],
            "Z3" | "I3" => identity_rows(3),
            "Z4" | "I4" => identity_rows(4),
            "A1" => vec![vec![2]],
            "A2" => vec![vec![2, 1], vec![1, 2]],
            "A1A1" => vec![vec![2, 0], vec![0, 2]],
            "2Z1" => vec![vec![4]],
            "2Z1+Z1" => vec![vec![4, 0], vec![0, 1]],
            "2A1" => vec![vec![8]],
            _ => return None,
        };
        Some(Self::from_rows(name, &rows).expect("built-in lattices are valid"))
    }

    pub fn builtin_names() -> &'static [&'static str] {
        &["Z1", "Z2", "Z3", "Z4", "I1", "I2", "I3", "I4", "A1", "A2", "A1A1", "2Z1", "2Z1+Z1", "2A1"]
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn rank(&self) -> usize {
        self.small.len()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn gram_i64(&self) -> &[Vec<i64>] {
        &self.small
    }

    /// `<v, w>` for coefficient vectors in the lattice basis.
    pub fn inner(&self, v: &[i64], w: &[i64]) -> i64 {
        let mut acc = 0;
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            for (j, &wj) in w.iter().enumerate() {
                acc += vi * self.small[i][j] * wj;
            }
        }
        acc
    }

    pub fn norm(&self, v: &[i64]) -> i64 {
        self.inner(v, v)
    }

    /// Determinant of the Gram matrix.
    pub fn det(&self) -> BigInt {
        bareiss_determinant(&self.gram).expect("Gram matrix is square")
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.small[i][i] % 2 == 0)
    }

    /// Upper bounds `|c_i| <= b_i` valid for every vector of norm at most
    /// `max_norm`.
    ///
    /// `c_i = <v, d_i>` for the dual basis vector `d_i`, whose norm is
    /// `(G^-1)_ii`, so Cauchy-Schwarz gives `c_i^2 <= max_norm * (G^-1)_ii`.
    pub fn coefficient_bounds(&self, max_norm: u64) -> Vec<i64> {
        let inv = inverse(&self.gram.to_rational()).expect("positive definite Gram is invertible");
        (0..self.rank())
            .map(|i| {
                let x = &inv[(i, i)] * BigInt::from(max_norm);
                let floor = x.floor().to_integer();
                floor.sqrt().to_i64().expect("coefficient bound fits in i64")
            })
            .collect()
    }

    /// Every lattice vector of norm at most `max_norm`, by exhaustive search
    /// over the box given by [`Self::coefficient_bounds`].
    fn enumerate(&self, max_norm: u64) -> Vec<(u64, Vec<i64>)> {
        let bounds = self.coefficient_bounds(max_norm);
        let k = self.rank();
        let mut out = Vec::new();
        let mut c: Vec<i64> = bounds.iter().map(|&b| -b).collect();
        loop {
            let norm = self.norm(&c);
            debug_assert!(norm >= 0);
            if norm as u64 <= max_norm {
                out.push((norm as u64, c.clone()));
            }
            // odometer, last coordinate fastest
            let mut i = k;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if c[i] < bounds[i] {
                    c[i] += 1;
                    break;
                }
                c[i] = -bounds[i];
            }
        }
    }

    /// Lattice vectors grouped by norm `0, 2, ..., max_norm`, each shell
    /// sorted lexicographically.
    pub fn even_shells(&self, max_norm: u64) -> Vec<Shell> {
        let mut shells: Vec<Shell> =
            (0..=max_norm / 2).map(|m| Shell { norm: 2 * m, vectors: Vec::new() }).collect();
        for (norm, v) in self.enumerate(max_norm) {
            if norm % 2 == 0 {
                shells[(norm / 2) as usize].vectors.push(v);
            }
        }
        shells
    }

    /// `|L_0|, |L_2|, ..., |L_{max_norm}|`.
    pub fn shell_counts(&self, max_norm: u64) -> Vec<ShellCount> {
        self.even_shells(max_norm)
            .into_iter()
            .map(|s| ShellCount { norm: s.norm, count: s.vectors.len() as u64 })
            .collect()
    }

    /// The sublattice spanned by `scales[i] * x_i`.
    pub fn sublattice_scale(&self, scales: &[i64]) -> Result<Self> {
        if scales.len() != self.rank() {
            return Err(Error::Dimension(format!(
                "{} scales for a rank {} lattice",
                scales.len(),
                self.rank()
            )));
        }
        if let Some(s) = scales.iter().find(|&&s| s < 1) {
            return Err(Error::Domain(format!("scale {s} must be positive")));
        }
        let k = self.rank();
        let rows: Vec<Vec<i64>> =
            (0..k).map(|i| (0..k).map(|j| self.small[i][j] * scales[i] * scales[j]).collect()).collect();
        let label = scales.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        Self::from_rows(format!("{}[scale {label}]", self.name), &rows)
    }

    /// The same lattice in the basis `y_i = sum_j change[i][j] x_j`; the Gram
    /// matrix becomes `U G U^T`. `change` must be unimodular for the result to
    /// be the same lattice.
    pub fn change_basis(&self, change: &IntMatrix) -> Result<Self> {
        let g = change.mul(&self.gram)?.mul(&change.transpose())?;
        Self::new(format!("{}[rebased]", self.name), g)
    }

    /// Orthogonal direct sum.
    pub fn orthogonal_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.rank(), other.rank());
        let mut rows = vec![vec![0i64; a + b]; a + b];
        for (row, src) in rows.iter_mut().zip(&self.small) {
            row[..a].copy_from_slice(src);
        }
        for (row, src) in rows[a..].iter_mut().zip(&other.small) {
            row[a..].copy_from_slice(src);
        }
        Self::from_rows(format!("{}+{}", self.name, other.name), &rows)
            .expect("orthogonal sum of positive definite lattices is positive definite")
    }
}

/// Determinant of a finite-index sublattice from the determinant of the
/// superlattice and the index: `index^2 * det_super`.
pub fn index_det_transfer(det_super: &BigInt, index: &BigInt) -> BigInt {
    index * index * det_super
}

fn leading_minor(m: &IntMatrix, size: usize) -> IntMatrix {
    let rows = (0..size).map(|i| m.row(i)[..size].to_vec()).collect();
    IntMatrix::from_rows(rows).expect("minor rows have equal length")
}

fn identity_rows(k: usize) -> Vec<Vec<i64>> {
    (0..k).map(|i| (0..k).map(|j| i64::from(i == j)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn counts(l: &IntegerLattice, max: u64) -> Vec<u64> {
        l.shell_counts(max).iter().map(|s| s.count).collect()
    }

    #[test]
    fn determinants() {
        for k in 1..=4 {
            assert_eq!(IntegerLattice::standard(k).det(), BigInt::one());
        }
        assert_eq!(IntegerLattice::builtin("A2").unwrap().det(), BigInt::from(3));
        let p = 3i64;
        let pz = IntegerLattice::diagonal("3Z3", &[p * p, p * p, p * p]).unwrap();
        assert_eq!(pz.det(), BigInt::from(p.pow(6)));
    }

    #[test]
    fn evenness() {
        assert!(IntegerLattice::builtin("A1").unwrap().is_even());
        assert!(!IntegerLattice::standard(2).is_even());
        assert!(IntegerLattice::builtin("A2").unwrap().is_even());
    }

    #[test]
    fn shell_examples() {
        assert_eq!(counts(&IntegerLattice::builtin("A1").unwrap(), 4), [1, 2, 0]);
        assert_eq!(counts(&IntegerLattice::builtin("A2").unwrap(), 2), [1, 6]);
        assert_eq!(counts(&IntegerLattice::builtin("2Z1").unwrap(), 4), [1, 0, 2]);
        assert_eq!(counts(&IntegerLattice::standard(2), 2), [1, 4]);
    }

    #[test]
    fn shells_come_in_pairs() {
        for name in ["A1", "A2", "A1A1", "Z3"] {
            let l = IntegerLattice::builtin(name).unwrap();
            for s in l.even_shells(8) {
                if s.norm == 0 {
                    assert_eq!(s.vectors, vec![vec![0; l.rank()]]);
                } else {
                    assert_eq!(s.vectors.len() % 2, 0);
                    assert_eq!(2 * s.representatives().len(), s.vectors.len());
                }
            }
        }
    }

    #[test]
    fn scaling_examples() {
        let z = IntegerLattice::standard(3);
        let s = z.sublattice_scale(&[5, 1, 1]).unwrap();
        assert_eq!(s.gram_i64(), &[vec![25, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let a1 = IntegerLattice::builtin("A1").unwrap();
        assert_eq!(a1.sublattice_scale(&[2]).unwrap().gram_i64(), &[vec![8]]);
        let a2 = IntegerLattice::builtin("A2").unwrap();
        assert_eq!(a2.sublattice_scale(&[1, 1]).unwrap().gram(), a2.gram());
        assert!(a2.sublattice_scale(&[0, 1]).is_err());
    }

    #[test]
    fn transfer_examples() {
        let b = BigInt::from;
        assert_eq!(index_det_transfer(&b(1), &b(7)), b(49));
        assert_eq!(index_det_transfer(&b(3), &b(2)), b(12));
        assert_eq!(index_det_transfer(&b(11), &b(1)), b(11));
    }

    #[test]
    fn rejects_invalid_gram() {
        let err = IntegerLattice::from_rows("bad", &[vec![0]]).unwrap_err();
        assert!(err.to_string().contains("order 1"), "{err}");
        let err = IntegerLattice::from_rows("bad", &[vec![1, 2], vec![2, 1]]).unwrap_err();
        assert!(err.to_string().contains("order 2"), "{err}");
        assert!(IntegerLattice::from_rows("asym", &[vec![2, 1], vec![0, 2]]).is_err());
        assert!(IntegerLattice::from_rows("ragged", &[vec![2, 1], vec![0]]).is_err());
    }

    #[test]
    fn orthogonal_sum_gram() {
        let a1 = IntegerLattice::builtin("A1").unwrap();
        let s = a1.orthogonal_sum(&a1);
        assert_eq!(s.gram(), IntegerLattice::builtin("A1A1").unwrap().gram());
        assert_eq!(s.det(), BigInt::from(4));
    }
}
