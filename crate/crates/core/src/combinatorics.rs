//! Partitions, weight vectors and the closed-form counting quantities
//! `N(k, a)`, `S(k, n)` and `b_n`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weakly decreasing sequence of positive parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn to_weight_vector(&self) -> WeightVector {
        let max = self.parts.first().copied().unwrap_or(0) as usize;
        let mut mult = vec![0; max];
        for &p in &self.parts {
            mult[p as usize - 1] += 1;
        }
        WeightVector::new(mult)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Multiplicity vector `(a_1, a_2, ...)`: `a_j` counts the degree-`j` slots.
///
/// Trailing zeros are trimmed, so equality and hashing are canonical.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WeightVector {
    multiplicities: Vec<u32>,
}

impl WeightVector {
    pub fn new(mut multiplicities: Vec<u32>) -> Self {
        while multiplicities.last() == Some(&0) {
            multiplicities.pop();
        }
        Self { multiplicities }
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    /// `a_j` for `j >= 1`; zero past the end.
    pub fn get(&self, j: usize) -> u32 {
        assert!(j >= 1, "weight vector slots start at 1");
        self.multiplicities.get(j - 1).copied().unwrap_or(0)
    }

    /// `(j, a_j)` for every nonzero slot.
    pub fn slots(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.multiplicities.iter().enumerate().filter(|(_, &a)| a > 0).map(|(j, &a)| (j as u32 + 1, a))
    }

    pub fn weight(&self) -> u32 {
        self.slots().map(|(j, a)| j * a).sum()
    }

    /// `sum_j a_j`, the number of parts of the encoded partition.
    pub fn total_degree(&self) -> u32 {
        self.multiplicities.iter().sum()
    }

    pub fn to_partition(&self) -> Partition {
        let mut parts = Vec::new();
        for (j, a) in self.slots() {
            parts.extend(std::iter::repeat_n(j, a as usize));
        }
        Partition::new(parts)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.multiplicities.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `n`, parts written in decreasing order, listed in
/// ascending lexicographic order: `(1,1,1,1) < (2,1,1) < (2,2) < (3,1) < (4)`.
///
/// `partitions(0)` is the single empty partition.
pub fn partitions(n: u32) -> Vec<Partition> {
    fn rec(remaining: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: prefix.clone() });
            return;
        }
        for p in 1..=max.min(remaining) {
            prefix.push(p);
            rec(remaining - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// The weight vectors of weight exactly `n`, ordered as their partitions.
/// Empty for `n = 0`.
pub fn weight_vectors(n: u32) -> Vec<WeightVector> {
    if n == 0 {
        return Vec::new();
    }
    partitions(n).iter().map(Partition::to_weight_vector).collect()
}

/// `p(n)` via Euler's pentagonal number recurrence.
pub fn partition_count(n: u32) -> u64 {
    let n = n as usize;
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut acc = 0i64;
        for j in 1.. {
            let g1 = j * (3 * j - 1) / 2;
            if g1 > m {
                break;
            }
            let sign = if j % 2 == 1 { 1 } else { -1 };
            acc += sign * p[m - g1];
            let g2 = j * (3 * j + 1) / 2;
            if g2 <= m {
                acc += sign * p[m - g2];
            }
        }
        p[m] = acc;
    }
    p[n] as u64
}

/// Weak compositions of `n` into `k` ordered nonnegative parts, in
/// lexicographic order with the first part largest first: `(n,0,..)` leads.
pub fn compositions(n: u32, k: usize) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=remaining).rev() {
            prefix.push(first);
            rec(remaining - first, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    if k == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    rec(n, k, &mut Vec::new(), &mut out);
    out
}

pub fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial coefficient overflows u64")
}

pub fn factorial(n: u32) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

/// Number of monomials of total degree `m` in `k` commuting variables,
/// `C(m + k - 1, k - 1)`.
pub fn count_monomials(k: u32, m: u32) -> u64 {
    assert!(k >= 1, "need at least one variable");
    binomial(u64::from(m + k - 1), u64::from(k - 1))
}

/// Number of monomials in the block `B(a)`: `prod_j C(a_j + k - 1, k - 1)`.
pub fn block_rank(k: u32, a: &WeightVector) -> u64 {
    a.slots().map(|(_, aj)| count_monomials(k, aj)).product()
}

/// Exponent of `p` in the index of the block spanned over `p x_1, ..., p x_k`
/// inside the block spanned over `x_1, ..., x_k`.
///
/// Every monomial of `B(a)` has total degree `sum_j a_j`, so scaling all
/// variables by `p` multiplies each of the `block_rank(k, a)` basis monomials
/// by `p^(sum_j a_j)`.
pub fn n_exponent(k: u32, a: &WeightVector) -> u64 {
    u64::from(a.total_degree()) * block_rank(k, a)
}

/// The product `prod_j a_j * C(a_j + k - 1, k - 1)` taken literally over
/// the slots of the trimmed vector. Vanishes as soon as some interior `a_j`
/// is zero. Kept only so verification output can show where it disagrees
/// with [`n_exponent`].
pub fn n_exponent_literal(k: u32, a: &WeightVector) -> u64 {
    a.multiplicities().iter().map(|&aj| u64::from(aj) * count_monomials(k, aj)).product()
}

/// `S(k, n) = (1/k) sum_{a of weight n} N(k, a)`.
pub fn s_value(k: u32, n: u32) -> Result<u64> {
    assert!(k >= 1, "need at least one variable");
    let total: u64 = weight_vectors(n).iter().map(|a| n_exponent(k, a)).sum();
    if !total.is_multiple_of(u64::from(k)) {
        return Err(Error::Consistency(format!(
            "sum of N({k}, a) over weight {n} is {total}, not divisible by {k}"
        )));
    }
    Ok(total / u64::from(k))
}

/// `b_n = prod_{a of weight n} prod_i i^{a_i} a_i!`, with `b_0 = 1`.
///
/// This is the product of the absolute norms of the one-variable monomials
/// of weight `n` under an orthonormal form.
pub fn b_value(n: u32) -> BigUint {
    let mut acc = BigUint::one();
    for a in weight_vectors(n) {
        for (i, ai) in a.slots() {
            acc *= BigUint::from(i).pow(ai) * factorial(ai);
        }
    }
    acc
}

/// `prod_{n_1 + ... + n_k = n} b_{n_1} ... b_{n_k}` over ordered compositions,
/// one factor per composition.
pub fn b_composition_product(k: u32, n: u32) -> BigUint {
    let b: Vec<BigUint> = (0..=n).map(b_value).collect();
    compositions(n, k as usize)
        .iter()
        .map(|c| c.iter().map(|&ni| &b[ni as usize]).product::<BigUint>())
        .product()
}

/// Integer square root of [`b_composition_product`].
pub fn index_formula_value(k: u32, n: u32) -> Result<BigUint> {
    exact_sqrt(&b_composition_product(k, n), || format!("b-product for k={k}, n={n}"))
}

/// `|det|` of the monomial Gram matrix of weight `n` in `k` orthonormal
/// variables.
///
/// A monomial of per-variable weights `(n_1, ..., n_k)` is a product of
/// one-variable monomials, and its norm is the product of their norms. Over
/// the block of a composition, the one-variable factor of weight `n_i` is
/// therefore repeated once per choice of the other `k - 1` factors, giving
/// `prod_i b_{n_i}^{prod_{j != i} p(n_j)}`.
pub fn monomial_norm_product(k: u32, n: u32) -> BigUint {
    let b: Vec<BigUint> = (0..=n).map(b_value).collect();
    let p: Vec<u64> = (0..=n).map(partition_count).collect();
    let mut acc = BigUint::one();
    for c in compositions(n, k as usize) {
        for (i, &ni) in c.iter().enumerate() {
            let reps: u64 =
                c.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &nj)| p[nj as usize]).product();
            acc *= b[ni as usize].pow(u32::try_from(reps).expect("exponent overflow"));
        }
    }
    acc
}

/// Integer square root of [`monomial_norm_product`]: the index of the
/// monomial form inside the Schur form at weight `n`.
pub fn index_formula_corrected(k: u32, n: u32) -> Result<BigUint> {
    exact_sqrt(&monomial_norm_product(k, n), || format!("monomial norm product for k={k}, n={n}"))
}

/// `dim M(1)_n` for `k` free bosons: `sum_{n_1+...+n_k=n} prod_i p(n_i)`.
pub fn fock_dimension(k: u32, n: u32) -> u64 {
    let p: Vec<u64> = (0..=n).map(partition_count).collect();
    compositions(n, k as usize).iter().map(|c| c.iter().map(|&ni| p[ni as usize]).product::<u64>()).sum()
}

fn exact_sqrt(x: &BigUint, what: impl FnOnce() -> String) -> Result<BigUint> {
    let r = x.sqrt();
    if &r * &r != *x {
        return Err(Error::Consistency(format!("{} = {x} is not a perfect square", what())));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wv(m: &[u32]) -> WeightVector {
        WeightVector::new(m.to_vec())
    }

    #[test]
    fn weight_vectors_examples() {
        assert!(weight_vectors(0).is_empty());
        assert_eq!(weight_vectors(1), vec![wv(&[1])]);
        assert_eq!(
            weight_vectors(4),
            vec![wv(&[4]), wv(&[2, 1]), wv(&[0, 2]), wv(&[1, 0, 1]), wv(&[0, 0, 0, 1])]
        );
    }

    #[test]
    fn partition_round_trip() {
        for n in 0..8 {
            for p in partitions(n) {
                assert_eq!(p.to_weight_vector().to_partition(), p);
                assert_eq!(p.to_weight_vector().weight(), n);
            }
        }
    }

    #[test]
    fn trailing_zeros_are_canonical() {
        assert_eq!(wv(&[1, 0, 0]), wv(&[1]));
        assert_eq!(wv(&[0, 1, 0]).weight(), 2);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn partition_count_dp_table() {
        // p(n, largest part <= m) by the standard two-index recurrence
        let n = 12usize;
        let mut t = vec![vec![0u64; n + 1]; n + 1];
        t[0].fill(1);
        for i in 1..=n {
            for m in 1..=n {
                t[i][m] = t[i][m - 1] + if m <= i { t[i - m][m] } else { 0 };
            }
        }
        for i in 1..=n {
            assert_eq!(weight_vectors(i as u32).len() as u64, t[i][i], "n = {i}");
            assert_eq!(partition_count(i as u32), t[i][i]);
        }
    }

    #[test]
    fn count_monomials_examples() {
        for k in 1..5 {
            assert_eq!(count_monomials(k, 0), 1);
        }
        assert_eq!(count_monomials(2, 3), 4);
        assert_eq!(count_monomials(3, 2), 6);
    }

    #[test]
    fn n_exponent_examples() {
        assert_eq!(n_exponent(1, &wv(&[2])), 2);
        assert_eq!(n_exponent(1, &wv(&[1, 1])), 2);
        assert_eq!(n_exponent(2, &wv(&[1, 1])), 8);
        assert_eq!(n_exponent_literal(2, &wv(&[1, 1])), 4);
        assert_eq!(n_exponent_literal(1, &wv(&[0, 1])), 0);
    }

    #[test]
    fn s_value_examples() {
        for k in 1..5 {
            assert_eq!(s_value(k, 0).unwrap(), 0);
        }
        assert_eq!(s_value(1, 2).unwrap(), 3);
        assert_eq!(s_value(2, 2).unwrap(), 4);
        assert_eq!(s_value(1, 1).unwrap(), 1);
    }

    #[test]
    fn s_value_integrality() {
        for k in 1..=4 {
            for n in 0..=10 {
                let total: u64 = weight_vectors(n).iter().map(|a| n_exponent(k, a)).sum();
                assert_eq!(s_value(k, n).unwrap() * u64::from(k), total);
            }
        }
    }

    #[test]
    fn b_value_examples() {
        assert_eq!(b_value(0), BigUint::from(1u32));
        assert_eq!(b_value(1), BigUint::from(1u32));
        assert_eq!(b_value(2), BigUint::from(4u32));
        assert_eq!(b_value(3), BigUint::from(36u32));
    }

    #[test]
    fn index_formula_examples() {
        assert_eq!(index_formula_value(1, 2).unwrap(), BigUint::from(2u32));
        assert_eq!(index_formula_value(2, 1).unwrap(), BigUint::from(1u32));
        assert_eq!(index_formula_value(2, 2).unwrap(), BigUint::from(4u32));
    }

    #[test]
    fn corrected_product_agrees_when_one_part_is_large() {
        // the two products only differ once two parts are >= 2
        for k in 1..=3 {
            for n in 0..=3 {
                assert_eq!(monomial_norm_product(k, n), b_composition_product(k, n));
            }
        }
        for n in 0..=8 {
            assert_eq!(monomial_norm_product(1, n), b_composition_product(1, n));
        }
        // k=2, n=4: composition (2,2) contributes b_2^4 = 256, not b_2^2 = 16
        assert_eq!(monomial_norm_product(2, 4), b_composition_product(2, 4) * BigUint::from(16u32));
    }

    #[test]
    fn compositions_order_and_count() {
        assert_eq!(compositions(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        for k in 1..=4usize {
            for n in 0..=6u32 {
                assert_eq!(compositions(n, k).len() as u64, count_monomials(k as u32, n));
            }
        }
    }

    #[test]
    fn fock_dimension_values() {
        // coefficients of prod (1 - q^i)^{-k}
        assert_eq!((0..7).map(|n| fock_dimension(1, n)).collect::<Vec<_>>(), [1, 1, 2, 3, 5, 7, 11]);
        assert_eq!((0..7).map(|n| fock_dimension(2, n)).collect::<Vec<_>>(), [1, 2, 5, 10, 20, 36, 65]);
        assert_eq!((0..7).map(|n| fock_dimension(3, n)).collect::<Vec<_>>(), [1, 3, 9, 22, 51, 108, 221]);
    }
}
