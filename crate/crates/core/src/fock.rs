//! The graded polynomial algebra `M(1) = Q[x_i(-r)]` over a fixed abstract
//! basis `x_1, ..., x_k`, its contraction form, and the monomial integral form.
//!
//! Variables are stored 0-based (`var = i - 1`) and rendered 1-based. The
//! bilinear form on the span of the `x_i` enters only through a Gram matrix
//! argument, so the same monomials serve every lattice of rank `k`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::{compositions, factorial, weight_vectors, WeightVector};
use crate::error::{Error, Result};
use crate::linalg::{sublattice_index, RatMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Factor {
    mode: u32,
    var: u32,
    exp: u32,
}

/// A product `prod x_i(-r)^e`, keys ordered by mode then variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockMonomial {
    factors: Vec<Factor>,
}

impl FockMonomial {
    /// The vacuum.
    pub fn one() -> Self {
        Self::default()
    }

    /// `x_{var+1}(-mode)^exp`.
    pub fn power(var: u32, mode: u32, exp: u32) -> Self {
        assert!(mode >= 1, "modes are positive");
        if exp == 0 {
            return Self::one();
        }
        Self { factors: vec![Factor { mode, var, exp }] }
    }

    /// Builds a monomial from `(var, mode, exp)` triples; repeated keys add up.
    pub fn from_triples(triples: impl IntoIterator<Item = (u32, u32, u32)>) -> Self {
        triples.into_iter().fold(Self::one(), |acc, (var, mode, exp)| acc.mul(&Self::power(var, mode, exp)))
    }

    /// `(var, mode, exp)` in canonical order.
    pub fn triples(&self) -> impl Iterator<Item = (u32, u32, u32)> + '_ {
        self.factors.iter().map(|f| (f.var, f.mode, f.exp))
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.factors.iter().map(|f| f.mode * f.exp).sum()
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|f| f.exp).sum()
    }

    pub fn degree_in(&self, var: u32) -> u32 {
        self.factors.iter().filter(|f| f.var == var).map(|f| f.exp).sum()
    }

    /// Largest variable index used, if any.
    pub fn max_var(&self) -> Option<u32> {
        self.factors.iter().map(|f| f.var).max()
    }

    /// Mode multiplicities `(a_1, a_2, ...)`: `a_j` is the degree at mode `j`.
    pub fn weight_vector(&self) -> WeightVector {
        let max = self.factors.last().map_or(0, |f| f.mode) as usize;
        let mut a = vec![0; max];
        for f in &self.factors {
            a[f.mode as usize - 1] += f.exp;
        }
        WeightVector::new(a)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.factors, &other.factors);
        while i < a.len() && j < b.len() {
            let (ka, kb) = ((a[i].mode, a[i].var), (b[j].mode, b[j].var));
            match ka.cmp(&kb) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(Factor { exp: a[i].exp + b[j].exp, ..a[i] });
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Self { factors: out }
    }

    /// Exponent vector over variables `0..k` at one mode.
    fn mode_counts(&self, mode: u32, k: usize) -> Vec<u32> {
        let mut c = vec![0; k];
        for f in self.factors.iter().filter(|f| f.mode == mode) {
            c[f.var as usize] += f.exp;
        }
        c
    }

    fn modes(&self) -> Vec<u32> {
        let mut m: Vec<u32> = self.factors.iter().map(|f| f.mode).collect();
        m.dedup();
        m
    }
}

impl fmt::Display for FockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, fac) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "x{}(-{})", fac.var + 1, fac.mode)?;
            if fac.exp > 1 {
                write!(f, "^{}", fac.exp)?;
            }
        }
        Ok(())
    }
}

/// A finite rational linear combination of monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FockElement {
    terms: BTreeMap<FockMonomial, BigRational>,
}

impl FockElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from(FockMonomial::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (FockMonomial, BigRational)>) -> Self {
        let mut e = Self::zero();
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    pub fn add_term(&mut self, m: FockMonomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FockMonomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coefficient(&self, m: &FockMonomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Common weight of all terms; `None` for zero or mixed-weight elements.
    pub fn weight(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(FockMonomial::weight);
        let w = it.next()?;
        it.all(|x| x == w).then_some(w)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.weight().is_some()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scaled(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Replaces the variable of a one-variable element by `x_{var+1}`.
    pub fn rename_single_variable(&self, var: u32) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            let m = FockMonomial::from_triples(m.triples().map(|(_, mode, exp)| (var, mode, exp)));
            (m, c.clone())
        }))
    }

    /// Dense coordinates in a monomial basis.
    pub fn coordinates(&self, index: &HashMap<FockMonomial, usize>) -> Result<Vec<BigRational>> {
        let mut v = vec![BigRational::zero(); index.len()];
        for (m, c) in &self.terms {
            let &i =
                index.get(m).ok_or_else(|| Error::Domain(format!("monomial {m} is not in the basis")))?;
            v[i] = c.clone();
        }
        Ok(v)
    }
}

impl From<FockMonomial> for FockElement {
    fn from(m: FockMonomial) -> Self {
        Self::from_terms([(m, BigRational::one())])
    }
}

impl fmt::Display for FockElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let c = c.abs();
            if m.is_one() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{c} {m}")?;
            }
        }
        Ok(())
    }
}

/// The monomials spanning `B(a)` for one weight vector `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub weight_vector: WeightVector,
    pub monomials: Vec<FockMonomial>,
}

/// Monomial basis of `B_L(n)` split into the blocks `B(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockIndexedBasis {
    pub k: u32,
    pub weight: u32,
    pub blocks: Vec<Block>,
}

impl BlockIndexedBasis {
    pub fn block(&self, a: &WeightVector) -> Option<&[FockMonomial]> {
        self.blocks.iter().find(|b| &b.weight_vector == a).map(|b| b.monomials.as_slice())
    }

    pub fn monomials(&self) -> impl Iterator<Item = &FockMonomial> {
        self.blocks.iter().flat_map(|b| b.monomials.iter())
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.monomials.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Position of each monomial in the flattened basis.
    pub fn index(&self) -> HashMap<FockMonomial, usize> {
        self.monomials().cloned().enumerate().map(|(i, m)| (m, i)).collect()
    }

    pub fn elements(&self) -> Vec<FockElement> {
        self.monomials().cloned().map(FockElement::from).collect()
    }
}

/// All monomials of weight `n` in `k` variables, grouped by weight vector in
/// the order of [`weight_vectors`]. Weight zero gives the vacuum alone,
/// filed under the empty weight vector.
pub fn monomial_basis(k: u32, n: u32) -> BlockIndexedBasis {
    assert!(k >= 1, "need at least one variable");
    if n == 0 {
        return BlockIndexedBasis {
            k,
            weight: 0,
            blocks: vec![Block {
                weight_vector: WeightVector::default(),
                monomials: vec![FockMonomial::one()],
            }],
        };
    }
    let blocks = weight_vectors(n)
        .into_iter()
        .map(|a| {
            let mut monomials = vec![FockMonomial::one()];
            for (mode, aj) in a.slots() {
                let words: Vec<FockMonomial> = compositions(aj, k as usize)
                    .into_iter()
                    .map(|exps| {
                        FockMonomial::from_triples(
                            exps.into_iter().enumerate().map(|(var, e)| (var as u32, mode, e)),
                        )
                    })
                    .collect();
                monomials = monomials.iter().flat_map(|m| words.iter().map(move |w| m.mul(w))).collect();
            }
            Block { weight_vector: a, monomials }
        })
        .collect();
    BlockIndexedBasis { k, weight: n, blocks }
}

fn check_vars(m: &FockMonomial, k: usize) -> Result<()> {
    match m.max_var() {
        Some(v) if v as usize >= k => {
            Err(Error::Domain(format!("monomial {m} uses x{} but the form has rank {k}", v + 1)))
        }
        _ => Ok(()),
    }
}

/// Contraction pairing of two monomials.
///
/// Repeated adjointness `<h(m)u|v> = -<u|h(-m)v>` with `<1|1> = 1` leaves
/// `(-1)^p sum_sigma prod_t r_t <a_t|b_sigma(t)>`, the sum running over
/// mode-preserving bijections between the `p` factors of each side. At a
/// single mode the bijections with a given variable-to-variable pattern
/// `N_ij` number `prod_i e_i! prod_j f_j! / prod_ij N_ij!`.
pub fn pair_monomials(u: &FockMonomial, v: &FockMonomial, gram: &RatMatrix) -> Result<BigRational> {
    let k = gram.rows();
    check_vars(u, k)?;
    check_vars(v, k)?;
    if u.weight_vector() != v.weight_vector() {
        return Ok(BigRational::zero());
    }
    let mut acc = BigRational::one();
    for mode in u.modes() {
        let e = u.mode_counts(mode, k);
        let f = v.mode_counts(mode, k);
        let d: u32 = e.iter().sum();
        let s = matching_sum(&e, &f, gram);
        if s.is_zero() {
            return Ok(s);
        }
        acc *= s * BigRational::from_integer(BigInt::from(mode).pow(d));
    }
    if u.degree() % 2 == 1 {
        acc = -acc;
    }
    Ok(acc)
}

/// `sum_N prod_i e_i! prod_j f_j! / prod N_ij! * prod G_ij^N_ij` over
/// nonnegative integer matrices `N` with row sums `e` and column sums `f`.
fn matching_sum(e: &[u32], f: &[u32], gram: &RatMatrix) -> BigRational {
    fn rec(
        i: usize,
        j: usize,
        row_left: &mut Vec<u32>,
        col_left: &mut Vec<u32>,
        gram: &RatMatrix,
        weight: BigRational,
        out: &mut BigRational,
    ) {
        let k = row_left.len();
        if i == k {
            if col_left.iter().all(|&c| c == 0) {
                *out += weight;
            }
            return;
        }
        if j == k {
            if row_left[i] == 0 {
                rec(i + 1, 0, row_left, col_left, gram, weight, out);
            }
            return;
        }
        let g = &gram[(i, j)];
        let max = row_left[i].min(col_left[j]);
        let max = if g.is_zero() { 0 } else { max };
        let mut w = weight;
        for n in 0..=max {
            if n > 0 {
                // multiply by g / n to accumulate g^n / n!
                w = w * g / BigRational::from_integer(BigInt::from(n));
            }
            row_left[i] -= n;
            col_left[j] -= n;
            rec(i, j + 1, row_left, col_left, gram, w.clone(), out);
            row_left[i] += n;
            col_left[j] += n;
        }
    }
    if e.iter().sum::<u32>() != f.iter().sum::<u32>() {
        return BigRational::zero();
    }
    let prefactor: BigInt = e.iter().chain(f).map(|&x| BigInt::from(factorial(x))).product();
    let mut out = BigRational::zero();
    rec(0, 0, &mut e.to_vec(), &mut f.to_vec(), gram, BigRational::one(), &mut out);
    out * BigRational::from_integer(prefactor)
}

/// Bilinear extension of [`pair_monomials`].
pub fn pair(u: &FockElement, v: &FockElement, gram: &RatMatrix) -> Result<BigRational> {
    let mut acc = BigRational::zero();
    for (mu, cu) in u.terms() {
        for (mv, cv) in v.terms() {
            let p = pair_monomials(mu, mv, gram)?;
            if !p.is_zero() {
                acc += p * cu * cv;
            }
        }
    }
    Ok(acc)
}

/// Matrix of pairings `<b_i, b_j>` for homogeneous elements of one weight.
///
/// Monomial pairings are computed once per pair of monomials sharing a mode
/// multiset and reused across all entries.
pub fn gram_matrix(basis: &[FockElement], gram: &RatMatrix) -> Result<RatMatrix> {
    if !gram.is_square() {
        return Err(Error::Dimension("form Gram matrix must be square".into()));
    }
    let mut weight = None;
    for b in basis.iter().filter(|b| !b.is_zero()) {
        let w = b.weight().ok_or_else(|| Error::Domain(format!("{b} is not homogeneous")))?;
        match weight {
            None => weight = Some(w),
            Some(w0) if w0 != w => return Err(Error::Domain(format!("basis mixes weights {w0} and {w}"))),
            _ => {}
        }
    }

    // intern monomials and group each element's terms by mode multiset
    let mut ids: HashMap<&FockMonomial, usize> = HashMap::new();
    let mut monos: Vec<&FockMonomial> = Vec::new();
    let mut sig_ids: HashMap<WeightVector, usize> = HashMap::new();
    let mut grouped: Vec<BTreeMap<usize, Vec<(usize, &BigRational)>>> = Vec::with_capacity(basis.len());
    for b in basis {
        let mut g: BTreeMap<usize, Vec<(usize, &BigRational)>> = BTreeMap::new();
        for (m, c) in b.terms() {
            check_vars(m, gram.rows())?;
            let id = *ids.entry(m).or_insert_with(|| {
                monos.push(m);
                monos.len() - 1
            });
            let next = sig_ids.len();
            let sig = *sig_ids.entry(m.weight_vector()).or_insert(next);
            g.entry(sig).or_default().push((id, c));
        }
        grouped.push(g);
    }

    let mut cache: HashMap<(usize, usize), BigRational> = HashMap::new();
    let mut pairing = |a: usize, b: usize| -> Result<BigRational> {
        let key = (a.min(b), a.max(b));
        if let Some(v) = cache.get(&key) {
            return Ok(v.clone());
        }
        let v = pair_monomials(monos[key.0], monos[key.1], gram)?;
        cache.insert(key, v.clone());
        Ok(v)
    };

    let n = basis.len();
    let mut out = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut acc = BigRational::zero();
            for (sig, ti) in &grouped[i] {
                let Some(tj) = grouped[j].get(sig) else { continue };
                for (a, ca) in ti {
                    for (b, cb) in tj {
                        let p = pairing(*a, *b)?;
                        if !p.is_zero() {
                            acc += p * *ca * *cb;
                        }
                    }
                }
            }
            out[(j, i)] = acc.clone();
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Linear substitution `x_i(-r) -> sum_j change[i][j] x_j(-r)` at every mode.
pub fn substitute(e: &FockElement, change: &RatMatrix) -> Result<FockElement> {
    let k = change.rows();
    let mut out = FockElement::zero();
    for (m, c) in e.terms() {
        check_vars(m, k)?;
        let mut img = FockElement::from_terms([(FockMonomial::one(), c.clone())]);
        for (var, mode, exp) in m.triples() {
            let lin = FockElement::from_terms(
                (0..change.cols())
                    .map(|j| (FockMonomial::power(j as u32, mode, 1), change[(var as usize, j)].clone())),
            );
            img = img.mul(&lin.pow(exp));
        }
        out = out.add(&img);
    }
    Ok(out)
}

/// Substitution `x_i -> scales[i] * x_i`.
pub fn scale_variables(e: &FockElement, scales: &[BigRational]) -> Result<FockElement> {
    if scales.iter().any(Zero::is_zero) {
        return Err(Error::Domain("scale factors must be nonzero".into()));
    }
    let mut out = FockElement::zero();
    for (m, c) in e.terms() {
        check_vars(m, scales.len())?;
        let mut f = c.clone();
        for (var, _, exp) in m.triples() {
            f *= num_traits::pow(scales[var as usize].clone(), exp as usize);
        }
        out.add_term(m.clone(), f);
    }
    Ok(out)
}

/// `|B(x;a) : B(scales * x;a)|`, the index of the scaled block lattice
/// inside the block, from the Smith form of the coordinate matrix.
pub fn scaled_block_index(k: u32, a: &WeightVector, scales: &[i64]) -> Result<BigInt> {
    let basis = monomial_basis(k, a.weight());
    let block =
        basis.block(a).ok_or_else(|| Error::Domain(format!("weight vector {a} has no block for k = {k}")))?;
    scaled_index_over(block, scales)
}

/// `|B_L(n) : B_{L'}(n)|` for `L'` spanned by `scales[i] * x_i`.
pub fn scaled_weight_index(k: u32, n: u32, scales: &[i64], budget: usize) -> Result<BigInt> {
    let basis = monomial_basis(k, n);
    if basis.len() > budget {
        return Err(Error::Budget { dim: basis.len(), budget });
    }
    let monomials: Vec<FockMonomial> = basis.monomials().cloned().collect();
    scaled_index_over(&monomials, scales)
}

fn scaled_index_over(monomials: &[FockMonomial], scales: &[i64]) -> Result<BigInt> {
    let index: HashMap<FockMonomial, usize> =
        monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    let scales: Vec<BigRational> = scales.iter().map(|&s| BigRational::from_integer(s.into())).collect();
    let rows = monomials
        .iter()
        .map(|m| scale_variables(&FockElement::from(m.clone()), &scales)?.coordinates(&index))
        .collect::<Result<Vec<_>>>()?;
    let coords = RatMatrix::from_rows(rows)?.to_integer()?;
    sublattice_index(&coords)
}
