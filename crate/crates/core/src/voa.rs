//! Graded pieces of the standard integral form of a lattice VOA and their
//! Gram determinants.
//!
//! The weight-`n` piece is `sum_{m <= n} sum_{alpha in L_2m} A_L(n-m) e^alpha`.
//! Only the graded module and its form are modelled: `<u e^a, v e^b>` is
//! `<u, v>` when `a + b = 0` and zero otherwise.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::combinatorics::{fock_dimension, s_value};
use crate::detengine::{check_budget, det_al, pow_big, ExponentMode, GramDeterminant};
use crate::error::{Error, Result};
use crate::fock::gram_matrix;
use crate::lattice::{IntegerLattice, Shell, ShellCount};
use crate::linalg::{bareiss_determinant, IntMatrix};
use crate::schur::a_basis;
use crate::serde_util;

/// `A_L(fock_weight) e^alpha` for one lattice vector `alpha` of norm `2m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoaBlock {
    pub alpha: Vec<i64>,
    pub m: u32,
    pub fock_weight: u32,
    pub dim: usize,
}

/// The weight-`n` piece as a list of blocks, one per lattice vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoaGradedPiece {
    pub n: u32,
    pub blocks: Vec<VoaBlock>,
}

impl VoaGradedPiece {
    pub fn rank(&self) -> usize {
        self.blocks.iter().map(|b| b.dim).sum()
    }
}

fn require_even(lattice: &IntegerLattice) -> Result<()> {
    if lattice.is_even() {
        Ok(())
    } else {
        Err(Error::OddLattice)
    }
}

/// Shells `L_0, L_2, ..., L_2n`.
pub fn shells_for_weight(lattice: &IntegerLattice, n: u32) -> Result<Vec<Shell>> {
    require_even(lattice)?;
    Ok(lattice.even_shells(2 * u64::from(n)))
}

pub fn voa_graded_piece(lattice: &IntegerLattice, n: u32) -> Result<VoaGradedPiece> {
    let k = lattice.rank() as u32;
    let blocks = shells_for_weight(lattice, n)?
        .into_iter()
        .enumerate()
        .flat_map(|(m, shell)| {
            let m = m as u32;
            let dim = fock_dimension(k, n - m) as usize;
            shell.vectors.into_iter().map(move |alpha| VoaBlock { alpha, m, fock_weight: n - m, dim })
        })
        .collect();
    Ok(VoaGradedPiece { n, blocks })
}

/// `sum_m |L_2m| dim M(1)_{n-m}`.
pub fn voa_graded_rank(lattice: &IntegerLattice, n: u32) -> Result<u64> {
    let k = lattice.rank() as u32;
    Ok(shells_for_weight(lattice, n)?
        .iter()
        .enumerate()
        .map(|(m, s)| s.vectors.len() as u64 * fock_dimension(k, n - m as u32))
        .sum())
}

/// Both brute-force routes to `|det (V_L)_{Z,n}|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoaOracle {
    /// `det A_L(n)` for `alpha = 0`, times `det A_L(n-m)^2` per `{alpha, -alpha}`.
    pub block_product: BigInt,
    /// The whole Gram matrix of the graded piece.
    pub full_gram: GramDeterminant,
}

/// Product over the orthogonal blocks. The zero vector pairs with itself, so
/// its block contributes `det A_L(n)` once; every other `alpha` pairs only
/// with `-alpha`, and the pair block `[[0, G], [G, 0]]` has `|det| = det(G)^2`.
pub fn voa_det_block_product(lattice: &IntegerLattice, n: u32, budget: usize) -> Result<BigInt> {
    let shells = shells_for_weight(lattice, n)?;
    let mut dets: Vec<Option<BigInt>> = vec![None; n as usize + 1];
    let mut acc = BigInt::one();
    for (m, shell) in shells.iter().enumerate() {
        let reps = shell.representatives();
        if reps.is_empty() {
            continue;
        }
        let fw = n - m as u32;
        let d = match &dets[fw as usize] {
            Some(d) => d.clone(),
            None => {
                let d = det_al(lattice, fw, budget)?;
                dets[fw as usize] = Some(d.clone());
                d
            }
        };
        let power = if m == 0 { 1 } else { 2 * reps.len() };
        acc *= num_traits::pow(d, power);
    }
    Ok(acc)
}

/// Gram matrix of the whole weight-`n` piece, basis ordered by lattice vector
/// (norm, then lexicographic) and then by the Schur basis of `A_L(n-m)`.
pub fn voa_full_gram(lattice: &IntegerLattice, n: u32, budget: usize) -> Result<IntMatrix> {
    let piece = voa_graded_piece(lattice, n)?;
    let dim = piece.rank();
    check_budget(dim, budget)?;
    let form = lattice.gram().to_rational();
    let k = lattice.rank() as u32;
    let mut fock_grams = Vec::with_capacity(n as usize + 1);
    for w in 0..=n {
        fock_grams.push(gram_matrix(&a_basis(k, w).elements, &form)?.to_integer()?);
    }
    let offsets: Vec<usize> = piece
        .blocks
        .iter()
        .scan(0, |acc, b| {
            let o = *acc;
            *acc += b.dim;
            Some(o)
        })
        .collect();
    let mut g = IntMatrix::zeros(dim, dim);
    for (bi, a) in piece.blocks.iter().enumerate() {
        for (bj, b) in piece.blocks.iter().enumerate() {
            // <e^a, e^b> = delta_{a+b,0}
            if a.alpha.iter().zip(&b.alpha).any(|(x, y)| x + y != 0) {
                continue;
            }
            let fg = &fock_grams[a.fock_weight as usize];
            for i in 0..a.dim {
                for j in 0..b.dim {
                    g[(offsets[bi] + i, offsets[bj] + j)] = fg[(i, j)].clone();
                }
            }
        }
    }
    Ok(g)
}

/// `|det (V_L)_{Z,n}|` by block product and by the full Gram matrix; the two
/// must agree.
pub fn voa_det_oracle(lattice: &IntegerLattice, n: u32, budget: usize) -> Result<VoaOracle> {
    let block_product = voa_det_block_product(lattice, n, budget)?;
    let full_gram = GramDeterminant::from_signed(bareiss_determinant(&voa_full_gram(lattice, n, budget)?)?);
    if full_gram.abs != block_product {
        return Err(Error::Consistency(format!(
            "weight {n} of {}: block product {block_product} but full Gram |det| {}",
            lattice.name(),
            full_gram.abs
        )));
    }
    Ok(VoaOracle { block_product, full_gram })
}

/// `prod_m det(L)^{|L_2m| S(k, n-m)}`, or with `2 S` in the exponent.
pub fn voa_det_closed(lattice: &IntegerLattice, n: u32, mode: ExponentMode) -> Result<BigInt> {
    let counts = lattice.shell_counts(2 * u64::from(n));
    voa_det_closed_with_shells(lattice, n, mode, &counts)
}

pub fn voa_det_closed_with_shells(
    lattice: &IntegerLattice,
    n: u32,
    mode: ExponentMode,
    shells: &[ShellCount],
) -> Result<BigInt> {
    let k = lattice.rank() as u32;
    let mut exponent = 0u64;
    for m in 0..=n {
        let count = shells
            .iter()
            .find(|s| s.norm == 2 * u64::from(m))
            .ok_or_else(|| Error::Domain(format!("missing shell count for norm {}", 2 * m)))?
            .count;
        exponent += count * s_value(k, n - m)? * mode.multiplier();
    }
    Ok(pow_big(&lattice.det(), exponent))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VoaDetReport {
    pub lattice: String,
    pub n: u32,
    #[serde(serialize_with = "serde_util::decimal")]
    pub oracle_det: BigInt,
    #[serde(serialize_with = "serde_util::decimal")]
    pub full_gram_det: BigInt,
    #[serde(serialize_with = "serde_util::decimal")]
    pub closed_s: BigInt,
    #[serde(serialize_with = "serde_util::decimal")]
    pub closed_2s: BigInt,
    #[serde(serialize_with = "serde_util::joined")]
    pub matches: Vec<ExponentMode>,
    #[serde(serialize_with = "serde_util::shells")]
    pub shells: Vec<ShellCount>,
    pub rank: u64,
    pub gram_sign: i8,
}

impl VoaDetReport {
    pub fn matches_any(&self) -> bool {
        !self.matches.is_empty()
    }
}

pub fn voa_report(lattice: &IntegerLattice, n: u32, budget: usize) -> Result<VoaDetReport> {
    require_even(lattice)?;
    let shells = lattice.shell_counts(2 * u64::from(n));
    let oracle = voa_det_oracle(lattice, n, budget)?;
    let closed_s = voa_det_closed_with_shells(lattice, n, ExponentMode::S, &shells)?;
    let closed_2s = voa_det_closed_with_shells(lattice, n, ExponentMode::TwoS, &shells)?;
    let matches = [(ExponentMode::S, &closed_s), (ExponentMode::TwoS, &closed_2s)]
        .into_iter()
        .filter(|(_, v)| **v == oracle.block_product)
        .map(|(m, _)| m)
        .collect();
    Ok(VoaDetReport {
        lattice: lattice.name().to_string(),
        n,
        oracle_det: oracle.block_product,
        full_gram_det: oracle.full_gram.abs,
        closed_s,
        closed_2s,
        matches,
        shells,
        rank: voa_graded_rank(lattice, n)?,
        gram_sign: oracle.full_gram.sign,
    })
}

/// Oracle versus both closed forms for every weight `0..=n_max`.
pub fn verify_voa_determinants(
    lattice: &IntegerLattice,
    n_max: u32,
    budget: usize,
) -> Result<Vec<VoaDetReport>> {
    (0..=n_max).map(|n| voa_report(lattice, n, budget)).collect()
}
