//! The Schur-coefficient integral form `A_L`.
//!
//! `s_{x,n}` is the coefficient of `z^n` in `exp(sum_{r>0} x(-r) z^r / r)`.
//! Products of these over the basis variables span a lattice `A_L(n)` in each
//! weight that contains the monomial lattice `B_L(n)` with finite index.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::{compositions, factorial, partitions, Partition};
use crate::error::{Error, Result};
use crate::fock::{monomial_basis, substitute, FockElement, FockMonomial};
use crate::linalg::{determinant, inverse, sublattice_index, BasisSolver, IntMatrix, RatMatrix};

/// `s_{x,n}` in the single abstract variable `x = x_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchurCoefficient {
    pub n: u32,
    pub expansion: FockElement,
}

impl SchurCoefficient {
    /// The same coefficient in variable `x_{var+1}`.
    pub fn in_variable(&self, var: u32) -> FockElement {
        self.expansion.rename_single_variable(var)
    }
}

/// `s_{x,n} = sum_{lambda |- n} prod_j x(-j)^{m_j} / (j^{m_j} m_j!)`, where
/// `m_j` counts the parts of `lambda` equal to `j`.
pub fn schur_coefficient(n: u32) -> SchurCoefficient {
    let expansion = FockElement::from_terms(partitions(n).into_iter().map(|lambda| {
        let a = lambda.to_weight_vector();
        let mut denom = BigUint::one();
        for (j, mj) in a.slots() {
            denom *= BigUint::from(j).pow(mj) * factorial(mj);
        }
        let mono = FockMonomial::from_triples(a.slots().map(|(j, mj)| (0, j, mj)));
        (mono, BigRational::new(BigInt::one(), BigInt::from(denom)))
    }));
    SchurCoefficient { n, expansion }
}

/// Ordered basis of `A_L(n)`.
///
/// Element `i` is `prod_v prod_t s_{x_v, labels[i][v]_t}`; partitions carry
/// no zero parts, so every product appears once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ABasis {
    pub k: u32,
    pub weight: u32,
    pub labels: Vec<Vec<Partition>>,
    pub elements: Vec<FockElement>,
}

impl ABasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Basis of `A_L(n)` indexed by `k`-tuples of partitions of total size `n`:
/// compositions `(n_1, ..., n_k)` in [`compositions`] order, then partitions
/// of each `n_v` in [`partitions`] order.
pub fn a_basis(k: u32, n: u32) -> ABasis {
    assert!(k >= 1, "need at least one variable");
    let s: Vec<Vec<FockElement>> =
        (0..k).map(|v| (0..=n).map(|m| schur_coefficient(m).in_variable(v)).collect()).collect();
    let mut labels = Vec::new();
    let mut elements = Vec::new();
    for comp in compositions(n, k as usize) {
        let mut partial: Vec<(Vec<Partition>, FockElement)> = vec![(Vec::new(), FockElement::one())];
        for (v, &nv) in comp.iter().enumerate() {
            let mut next = Vec::new();
            for (label, e) in &partial {
                for lambda in partitions(nv) {
                    let factor = lambda
                        .parts()
                        .iter()
                        .fold(FockElement::one(), |acc, &part| acc.mul(&s[v][part as usize]));
                    let mut l = label.clone();
                    l.push(lambda);
                    next.push((l, e.mul(&factor)));
                }
            }
            partial = next;
        }
        for (l, e) in partial {
            labels.push(l);
            elements.push(e);
        }
    }
    ABasis { k, weight: n, labels, elements }
}

/// Both routes to `[A_L(n) : B_L(n)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexComputation {
    /// `1 / |det M|` with `M` the A-basis in monomial coordinates.
    pub from_determinant: BigInt,
    /// Product of the invariant factors of the B-basis in A-coordinates.
    pub from_smith: BigInt,
}

fn check_budget(dim: usize, budget: usize) -> Result<()> {
    if dim > budget {
        return Err(Error::Budget { dim, budget });
    }
    Ok(())
}

/// Rows: elements in the coordinates of the weight-`n` monomial basis.
fn coordinate_matrix(k: u32, n: u32, elements: &[FockElement]) -> Result<RatMatrix> {
    let index = monomial_basis(k, n).index();
    let rows = elements.iter().map(|e| e.coordinates(&index)).collect::<Result<Vec<_>>>()?;
    RatMatrix::from_rows(rows)
}

/// `[A_L(n) : B_L(n)]` with both forms built over the basis
/// `y_i = sum_j change[i][j] x_j`, computed in `x`-monomial coordinates.
///
/// Passing the identity gives the plain index. The determinant route and
/// the Smith route must agree; a disagreement is reported as an error.
pub fn index_a_over_b_in_basis(
    k: u32,
    n: u32,
    change: &IntMatrix,
    budget: usize,
) -> Result<IndexComputation> {
    if change.rows() != k as usize || !change.is_square() {
        return Err(Error::Dimension(format!("basis change must be {k}x{k}")));
    }
    let dim = monomial_basis(k, n).len();
    check_budget(dim, budget)?;
    let t = change.to_rational();
    let a = a_basis(k, n).elements.iter().map(|e| substitute(e, &t)).collect::<Result<Vec<_>>>()?;
    let b = monomial_basis(k, n).elements().iter().map(|e| substitute(e, &t)).collect::<Result<Vec<_>>>()?;
    let ma = coordinate_matrix(k, n, &a)?;
    let mb = coordinate_matrix(k, n, &b)?;

    let det_a = determinant(&ma)?;
    let det_b = determinant(&mb)?;
    if det_a.is_zero() || det_b.is_zero() {
        return Err(Error::RankDeficient { rank: 0, expected: dim });
    }
    let ratio = (det_b / det_a).abs();
    if !ratio.is_integer() {
        return Err(Error::Consistency(format!("[A:B] from determinants is {ratio}, not an integer")));
    }
    let from_determinant = ratio.to_integer();

    // B = (M_B M_A^{-1}) A
    let b_in_a = mb.mul(&inverse(&ma)?)?;
    let b_in_a = b_in_a
        .to_integer()
        .map_err(|e| Error::Consistency(format!("monomial basis not integral over the Schur basis: {e}")))?;
    let from_smith = sublattice_index(&b_in_a)?;
    if from_smith != from_determinant {
        return Err(Error::Consistency(format!(
            "[A:B] = {from_determinant} by determinant but {from_smith} by Smith form"
        )));
    }
    Ok(IndexComputation { from_determinant, from_smith })
}

/// `[A_L(n) : B_L(n)]`, verified by two independent routes.
pub fn index_a_over_b(k: u32, n: u32, budget: usize) -> Result<BigInt> {
    let ic = index_a_over_b_in_basis(k, n, &IntMatrix::identity(k as usize), budget)?;
    Ok(ic.from_determinant)
}

/// Whether every monomial of weight `n` has integer coordinates in the
/// Schur basis, each solved for separately.
pub fn verify_b_subring_of_a(k: u32, n: u32, budget: usize) -> Result<bool> {
    let basis = monomial_basis(k, n);
    check_budget(basis.len(), budget)?;
    let index = basis.index();
    let a_coords =
        a_basis(k, n).elements.iter().map(|e| e.coordinates(&index)).collect::<Result<Vec<_>>>()?;
    let solver = BasisSolver::new(&a_coords)?;
    for m in basis.elements() {
        let c = solver.solve(&m.coordinates(&index)?)?;
        if !c.iter().all(BigRational::is_integer) {
            return Ok(false);
        }
    }
    Ok(true)
}
