//! Exact rational vectors and matrices.
//!
//! Everything here is exact: scalars are arbitrary precision rationals and
//! elimination is fraction-free (Bareiss updates), so every intermediate entry
//! of a reduced row is a minor of the input matrix.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Index, Neg};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational scalar, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Default cap on the number of square submatrices `subdeterminants` will visit.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 20;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Dense vector of exact rationals.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatVector(Vec<Rational>);

impl RatVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        Self(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![Rational::zero(); dim])
    }

    /// The `i`-th standard unit vector of `R^dim` (zero based).
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Rational::one();
        v
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        Self(entries.iter().map(|&e| rat(e)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &RatVector) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        dot(&self.0, &other.0)
    }

    pub fn scaled(&self, factor: &Rational) -> RatVector {
        Self(self.0.iter().map(|e| e * factor).collect())
    }

    pub fn add(&self, other: &RatVector) -> RatVector {
        debug_assert_eq!(self.dim(), other.dim());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RatVector) -> RatVector {
        debug_assert_eq!(self.dim(), other.dim());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: &Rational, other: &RatVector) -> RatVector {
        debug_assert_eq!(self.dim(), other.dim());
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + factor * b)
                .collect(),
        )
    }

    pub fn push(&mut self, value: Rational) {
        self.0.push(value);
    }

    /// Copy of the first `len` entries.
    pub fn head(&self, len: usize) -> RatVector {
        Self(self.0[..len].to_vec())
    }

    /// Smallest positive multiple with coprime integer entries. Direction is preserved.
    pub fn primitive_direction(&self) -> RatVector {
        if self.is_zero() {
            return self.clone();
        }
        let mut lcm = BigInt::one();
        for e in &self.0 {
            lcm = num_integer::lcm(lcm, e.denom().clone());
        }
        let ints: Vec<BigInt> = self.0.iter().map(|e| (e * &lcm).to_integer()).collect();
        let gcd = ints
            .iter()
            .fold(BigInt::zero(), |g, x| num_integer::gcd(g, x.clone()));
        Self(
            ints.into_iter()
                .map(|x| Rational::from_integer(x / &gcd))
                .collect(),
        )
    }
}

/// Serialized as a list of `p/q` strings so no precision is lost.
impl Serialize for RatVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter().map(|e| e.to_string()))
    }
}

impl Index<usize> for RatVector {
    type Output = Rational;

    fn index(&self, index: usize) -> &Rational {
        &self.0[index]
    }
}

impl Neg for &RatVector {
    type Output = RatVector;

    fn neg(self) -> RatVector {
        RatVector(self.0.iter().map(|e| -e).collect())
    }
}

impl Neg for RatVector {
    type Output = RatVector;

    fn neg(self) -> RatVector {
        -&self
    }
}

impl From<Vec<Rational>> for RatVector {
    fn from(entries: Vec<Rational>) -> Self {
        Self(entries)
    }
}

impl FromIterator<Rational> for RatVector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Dense row-major matrix of exact rationals. Zero rows with any number of
/// columns is a legal (empty) system.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    /// A matrix with no rows, i.e. the empty system over `R^cols`.
    pub fn empty(cols: usize) -> Self {
        Self::zeros(0, cols)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[RatVector]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.dim() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.dim(),
                });
            }
            data.extend(row.iter().cloned());
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Integer matrix from row slices. Panics on ragged input; meant for tests and literals.
    pub fn from_i64(cols: usize, rows: &[&[i64]]) -> Self {
        let vecs: Vec<RatVector> = rows.iter().map(|r| RatVector::from_i64(r)).collect();
        Self::from_rows(cols, &vecs).expect("ragged integer matrix literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn row_slice(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row(&self, i: usize) -> RatVector {
        RatVector(self.row_slice(i).to_vec())
    }

    pub fn row_vectors(
        &self,
    ) -> impl DoubleEndedIterator<Item = RatVector> + ExactSizeIterator + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn mul_vec(&self, x: &RatVector) -> RatVector {
        debug_assert_eq!(x.dim(), self.cols);
        (0..self.rows)
            .map(|i| dot(self.row_slice(i), x.entries()))
            .collect()
    }

    /// Row-stack of `self` over `below`.
    pub fn stack(&self, below: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != below.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: below.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend(below.data.iter().cloned());
        Ok(Self {
            rows: self.rows + below.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn with_row(&self, row: &RatVector) -> Result<RatMatrix> {
        if row.dim() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: row.dim(),
            });
        }
        let mut out = self.clone();
        out.data.extend(row.iter().cloned());
        out.rows += 1;
        Ok(out)
    }

    pub fn without_row(&self, i: usize) -> Result<RatMatrix> {
        if i >= self.rows {
            return Err(Error::RowOutOfRange {
                index: i,
                rows: self.rows,
            });
        }
        let mut data = Vec::with_capacity((self.rows - 1) * self.cols);
        for r in (0..self.rows).filter(|&r| r != i) {
            data.extend(self.row_slice(r).iter().cloned());
        }
        Ok(Self {
            rows: self.rows - 1,
            cols: self.cols,
            data,
        })
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Sum of all rows, i.e. `Mᵀ1`.
    pub fn row_sum(&self) -> RatVector {
        let mut acc = RatVector::zeros(self.cols);
        for i in 0..self.rows {
            for (a, e) in acc.0.iter_mut().zip(self.row_slice(i)) {
                *a += e;
            }
        }
        acc
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> RatMatrix {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.get(i, j).clone());
            }
        }
        Self {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|e| e.is_integer())
    }
}

/// Row echelon data produced by fraction-free elimination.
///
/// Rows are visited top to bottom; a row that is not a combination of the
/// earlier pivot rows gets its leftmost nonzero column as pivot. `reduced[k]`
/// is the Bareiss-updated pivot row `k`; it vanishes on all earlier pivot
/// columns and its pivot entry is the leading minor `M[rows[..=k], cols[..=k]]`.
struct Echelon {
    pivot_rows: Vec<usize>,
    pivot_cols: Vec<usize>,
    reduced: Vec<Vec<Rational>>,
}

fn echelon(m: &RatMatrix) -> Echelon {
    let mut work: Vec<Vec<Rational>> = (0..m.rows).map(|i| m.row_slice(i).to_vec()).collect();
    let mut pivot_rows = Vec::new();
    let mut pivot_cols = Vec::new();
    let mut reduced = Vec::new();
    let mut prev = Rational::one();

    for r in 0..m.rows {
        let Some(c) = work[r].iter().position(|e| !e.is_zero()) else {
            continue;
        };
        let pivot = work[r][c].clone();
        let (done, rest) = work.split_at_mut(r + 1);
        let prow = &done[r];
        for row in rest.iter_mut() {
            let factor = row[c].clone();
            for (j, e) in row.iter_mut().enumerate() {
                *e = (&pivot * &*e - &factor * &prow[j]) / &prev;
            }
        }
        pivot_rows.push(r);
        pivot_cols.push(c);
        reduced.push(prow.clone());
        prev = pivot;
    }

    Echelon {
        pivot_rows,
        pivot_cols,
        reduced,
    }
}

fn permutation_sign(perm: &[usize]) -> bool {
    // true for even permutations
    let mut seen = vec![false; perm.len()];
    let mut even = true;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            even = !even;
        }
    }
    even
}

/// Exact determinant. The 0x0 matrix has determinant one.
pub fn determinant(m: &RatMatrix) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Rational::one());
    }
    let ech = echelon(m);
    if ech.pivot_rows.len() < n {
        return Ok(Rational::zero());
    }
    // Every row is a pivot row, in order; the last pivot is det of M with
    // columns taken in pivot order.
    let last = ech.reduced[n - 1][ech.pivot_cols[n - 1]].clone();
    Ok(if permutation_sign(&ech.pivot_cols) {
        last
    } else {
        -last
    })
}

/// Rank over the rationals.
pub fn rank(m: &RatMatrix) -> usize {
    echelon(m).pivot_rows.len()
}

/// Rank of a list of vectors of common dimension `dim`.
pub fn rank_of(dim: usize, vectors: &[RatVector]) -> usize {
    RatMatrix::from_rows(dim, vectors)
        .map(|m| rank(&m))
        .unwrap_or(0)
}

/// Cramer-style basis of `ker(M)`.
///
/// Pivots follow the fixed row-major rule of the elimination. For each free
/// column `f` the basis vector has `x_f = 1`, zero on the other free columns,
/// and pivot components solving `M[R,P] x_P = -M[R,f]`; each such component is
/// `±det(minor) / det(M[R,P])`. A matrix without rows yields the unit vectors.
pub fn kernel_basis(m: &RatMatrix) -> Vec<RatVector> {
    let n = m.cols;
    let ech = echelon(m);
    let r = ech.pivot_cols.len();
    let mut is_pivot = vec![false; n];
    for &c in &ech.pivot_cols {
        is_pivot[c] = true;
    }

    let mut basis = Vec::with_capacity(n - r);
    for f in (0..n).filter(|&c| !is_pivot[c]) {
        let mut x = RatVector::zeros(n);
        x.0[f] = Rational::one();
        for k in (0..r).rev() {
            let row = &ech.reduced[k];
            let mut acc = row[f].clone();
            for l in (k + 1)..r {
                let cl = ech.pivot_cols[l];
                acc += &row[cl] * &x.0[cl];
            }
            let ck = ech.pivot_cols[k];
            x.0[ck] = -acc / &row[ck];
        }
        basis.push(x);
    }
    basis
}

/// Extends a basis of a hyperplane `U` of `ker(outer)` by one kernel vector
/// outside `span(inner)`.
///
/// The new vector is the first element of `kernel_basis(outer)` that is
/// independent of `inner`, so its components are subdeterminant quotients of
/// `outer`.
pub fn extend_basis(inner: &[RatVector], outer: &RatMatrix) -> Result<RatVector> {
    let n = outer.cols;
    let kernel = kernel_basis(outer);
    if inner.len() + 1 != kernel.len() {
        return Err(Error::Contract(format!(
            "inner basis has {} vectors, kernel dimension is {}",
            inner.len(),
            kernel.len()
        )));
    }
    for v in inner {
        if v.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.dim(),
            });
        }
        if !outer.mul_vec(v).is_zero() {
            return Err(Error::Contract("inner vector not in the kernel".into()));
        }
    }
    if rank_of(n, inner) != inner.len() {
        return Err(Error::Contract(
            "inner vectors are linearly dependent".into(),
        ));
    }

    let mut stacked = inner.to_vec();
    for v in kernel {
        stacked.push(v);
        if rank_of(n, &stacked) == inner.len() + 1 {
            return Ok(stacked.pop().expect("just pushed"));
        }
        stacked.pop();
    }
    unreachable!("a kernel basis spans a space strictly larger than span(inner)")
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Number of square submatrices of orders `0..=size_limit` (saturating).
pub fn submatrix_count(rows: usize, cols: usize, size_limit: usize) -> u128 {
    let top = size_limit.min(rows).min(cols);
    (0..=top).fold(0u128, |acc, k| {
        acc.saturating_add(binomial(rows, k).saturating_mul(binomial(cols, k)))
    })
}

/// Calls `visit` with every increasing `k`-subset of `0..n`.
pub(crate) fn for_each_combination(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Exact set of subdeterminants of `m` of order at most `size_limit`.
///
/// The empty submatrix contributes 1, so the result always contains 1.
pub fn subdeterminants(m: &RatMatrix, size_limit: usize, cap: u128) -> Result<BTreeSet<Rational>> {
    let needed = submatrix_count(m.rows, m.cols, size_limit);
    if needed > cap {
        return Err(Error::EnumerationTooLarge { needed, cap });
    }
    let mut out = BTreeSet::new();
    out.insert(Rational::one());
    let top = size_limit.min(m.rows).min(m.cols);
    for k in 1..=top {
        for_each_combination(m.rows, k, |rows| {
            for_each_combination(m.cols, k, |cols| {
                let det = determinant(&m.submatrix(rows, cols)).expect("square by construction");
                out.insert(det);
            });
        });
    }
    Ok(out)
}

/// Outcome of a `qsd` membership query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    Member,
    NonMember,
    Inconclusive,
}

/// `sd(M) ∪ -sd(M)`, precomputed for repeated quotient-membership queries.
#[derive(Clone, Debug)]
pub struct SubdeterminantSet {
    signed: BTreeSet<Rational>,
}

impl SubdeterminantSet {
    pub fn new(m: &RatMatrix, cap: u128) -> Result<Self> {
        let sd = subdeterminants(m, m.rows.min(m.cols), cap)?;
        let mut signed = sd.clone();
        signed.extend(sd.into_iter().map(|d| -d));
        Ok(Self { signed })
    }

    pub fn values(&self) -> &BTreeSet<Rational> {
        &self.signed
    }

    /// True iff `r = p/q` with `p, q ∈ ±sd(M)` and `q ≠ 0`.
    pub fn contains_quotient(&self, r: &Rational) -> bool {
        self.signed
            .iter()
            .filter(|q| !q.is_zero())
            .any(|q| self.signed.contains(&(r * q)))
    }
}

/// Exact `r ∈ qsd(M)` test; `Inconclusive` when enumeration exceeds `cap`.
pub fn qsd_contains(m: &RatMatrix, r: &Rational, cap: u128) -> Membership {
    match SubdeterminantSet::new(m, cap) {
        Ok(set) if set.contains_quotient(r) => Membership::Member,
        Ok(_) => Membership::NonMember,
        Err(_) => Membership::Inconclusive,
    }
}

fn ceil_sqrt(x: &Rational) -> BigInt {
    let ceil = x.ceil().to_integer();
    let s = ceil.sqrt();
    if &s * &s == ceil {
        s
    } else {
        s + 1
    }
}

/// Upper bound on `|d|` for every `d ∈ sd(M)`.
///
/// Any square submatrix uses a subset of rows, each shortened, so Hadamard's
/// inequality gives `|d| ≤ Π max(1, ‖row_i‖)` uniformly over all orders.
pub fn hadamard_bound(m: &RatMatrix) -> Rational {
    let mut product = Rational::one();
    for i in 0..m.rows {
        let norm_sq = dot(m.row_slice(i), m.row_slice(i));
        if norm_sq > Rational::one() {
            product *= norm_sq;
        }
    }
    Rational::from_integer(ceil_sqrt(&product))
}

/// Necessary condition for `r ∈ qsd(M)` on integral `M`: in lowest terms both
/// numerator and denominator must divide some subdeterminant, hence be bounded.
/// Returns `NonMember` when the bound rules `r` out, otherwise `Inconclusive`.
pub fn hadamard_screen(m: &RatMatrix, r: &Rational, bound: &Rational) -> Membership {
    if !m.is_integral() {
        return Membership::Inconclusive;
    }
    // zero is a member only if 0 ∈ sd(M), which the bound cannot decide
    if r.is_zero() {
        return Membership::Inconclusive;
    }
    let numer = Rational::from_integer(r.numer().abs());
    let denom = Rational::from_integer(r.denom().clone());
    if numer > *bound || denom > *bound {
        Membership::NonMember
    } else {
        Membership::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(cols: usize, rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_i64(cols, rows)
    }

    /// Cofactor expansion along the first row; the independent oracle.
    fn cofactor_det(a: &[Vec<i64>]) -> i64 {
        let n = a.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = a[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * a[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&RatMatrix::empty(0)).unwrap(), rat(1));
        assert_eq!(determinant(&RatMatrix::identity(3)).unwrap(), rat(1));
        assert_eq!(determinant(&m(2, &[&[1, 2], &[3, 4]])).unwrap(), rat(-2));
        assert!(matches!(
            determinant(&m(2, &[&[1, 2]])),
            Err(Error::NotSquare { rows: 1, cols: 2 })
        ));
    }

    #[test]
    fn determinant_needs_column_permutation_sign() {
        // first row pivots on column 1, forcing a non-identity column order
        let a = m(3, &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        assert_eq!(determinant(&a).unwrap(), rat(-1));
        let b = m(3, &[&[0, 0, 2], &[0, 3, 0], &[5, 0, 0]]);
        assert_eq!(determinant(&b).unwrap(), rat(-30));
    }

    #[test]
    fn determinant_matches_cofactor_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xD37);
        for _ in 0..600 {
            let n = rng.gen_range(0..=4);
            let a: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect())
                .collect();
            let rows: Vec<&[i64]> = a.iter().map(|r| r.as_slice()).collect();
            let mat = RatMatrix::from_i64(n, &rows);
            assert_eq!(determinant(&mat).unwrap(), rat(cofactor_det(&a)), "{a:?}");
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&RatMatrix::zeros(2, 3)), 0);
        assert_eq!(rank(&RatMatrix::identity(3)), 3);
        assert_eq!(rank(&m(2, &[&[1, 1], &[2, 2]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&RatMatrix::identity(2)).is_empty());
        let units = kernel_basis(&RatMatrix::empty(3));
        assert_eq!(
            units,
            vec![
                RatVector::unit(3, 0),
                RatVector::unit(3, 1),
                RatVector::unit(3, 2)
            ]
        );
        let k = kernel_basis(&m(2, &[&[1, 1]]));
        assert_eq!(k, vec![RatVector::from_i64(&[-1, 1])]);
    }

    #[test]
    fn kernel_components_are_minor_quotients() {
        // pivot block [[2,1],[1,3]] has det 5; free column 2
        let a = m(3, &[&[2, 1, 1], &[1, 3, 0]]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).is_zero());
        assert_eq!(
            k[0],
            RatVector::new(vec![ratio(-3, 5), ratio(1, 5), rat(1)])
        );
    }

    #[test]
    fn extend_basis_examples() {
        let v = extend_basis(&[], &m(2, &[&[1, 1]])).unwrap();
        assert_eq!(v, RatVector::from_i64(&[-1, 1]));

        let inner = [RatVector::from_i64(&[1, -1, 0])];
        let outer = m(3, &[&[1, 1, 1]]);
        let v = extend_basis(&inner, &outer).unwrap();
        assert!(outer.mul_vec(&v).is_zero());
        assert_eq!(rank_of(3, &[inner[0].clone(), v.clone()]), 2);

        let units: Vec<RatVector> = (0..3).map(|i| RatVector::unit(4, i)).collect();
        assert_eq!(
            extend_basis(&units, &RatMatrix::empty(4)).unwrap(),
            RatVector::unit(4, 3)
        );
    }

    #[test]
    fn extend_basis_rejects_bad_dimension() {
        let err = extend_basis(&[], &RatMatrix::empty(2)).unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
        let outside = [RatVector::from_i64(&[1, 0])];
        let err = extend_basis(&outside, &m(2, &[&[1, 1]])).unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
    }

    #[test]
    fn subdeterminant_examples() {
        let set = |v: &[i64]| v.iter().map(|&x| rat(x)).collect::<BTreeSet<_>>();
        assert_eq!(
            subdeterminants(&m(1, &[&[2]]), 1, DEFAULT_ENUMERATION_CAP).unwrap(),
            set(&[1, 2])
        );
        assert_eq!(
            subdeterminants(&RatMatrix::identity(2), 2, DEFAULT_ENUMERATION_CAP).unwrap(),
            set(&[0, 1])
        );
        assert_eq!(
            subdeterminants(&m(2, &[&[1, 2], &[3, 4]]), 2, DEFAULT_ENUMERATION_CAP).unwrap(),
            set(&[1, 2, 3, 4, -2])
        );
        assert!(matches!(
            subdeterminants(&RatMatrix::identity(6), 6, 10),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn qsd_examples() {
        let cap = DEFAULT_ENUMERATION_CAP;
        let a = m(2, &[&[1, 2], &[3, 4]]);
        assert_eq!(qsd_contains(&a, &ratio(-3, 2), cap), Membership::Member);
        assert_eq!(qsd_contains(&a, &ratio(5, 7), cap), Membership::NonMember);
        let one = m(1, &[&[1]]);
        assert_eq!(qsd_contains(&one, &rat(0), cap), Membership::NonMember);
        assert_eq!(qsd_contains(&one, &rat(1), cap), Membership::Member);
        assert_eq!(
            qsd_contains(&RatMatrix::identity(5), &rat(1), 3),
            Membership::Inconclusive
        );
    }

    #[test]
    fn zero_component_outside_qsd_without_zero_minor() {
        // sd([[1,1,1]]) = {1}: qsd = {±1}, yet no ±1 vector sums to zero in R^3
        let a = m(3, &[&[1, 1, 1]]);
        let basis = kernel_basis(&a);
        assert_eq!(basis[0], RatVector::from_i64(&[-1, 1, 0]));
        assert_eq!(
            qsd_contains(&a, &rat(0), DEFAULT_ENUMERATION_CAP),
            Membership::NonMember
        );
    }

    #[test]
    fn hadamard_examples() {
        assert_eq!(hadamard_bound(&RatMatrix::zeros(3, 3)), rat(1));
        assert!(hadamard_bound(&RatMatrix::identity(3)) >= rat(1));
        assert!(hadamard_bound(&m(1, &[&[3]])) >= rat(3));
        let a = m(2, &[&[1, 2], &[3, 4]]);
        let bound = hadamard_bound(&a);
        for d in subdeterminants(&a, 2, DEFAULT_ENUMERATION_CAP).unwrap() {
            assert!(d.abs() <= bound);
        }
        assert_eq!(
            hadamard_screen(&a, &rat(1000), &bound),
            Membership::NonMember
        );
        assert_eq!(
            hadamard_screen(&a, &ratio(3, 2), &bound),
            Membership::Inconclusive
        );
    }

    #[test]
    fn combinations_enumerate_all_subsets() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |c| seen.push(c.to_vec()));
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![0, 1]);
        assert_eq!(seen[5], vec![2, 3]);
        let mut empty = 0;
        for_each_combination(3, 0, |c| {
            assert!(c.is_empty());
            empty += 1;
        });
        assert_eq!(empty, 1);
        assert_eq!(submatrix_count(2, 2, 2), 1 + 4 + 1);
    }

    #[test]
    fn primitive_direction_keeps_sign() {
        let v = RatVector::new(vec![ratio(-2, 3), rat(0), ratio(4, 3)]);
        assert_eq!(v.primitive_direction(), RatVector::from_i64(&[-1, 0, 2]));
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn small_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = RatMatrix> {
        (0..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
            prop::collection::vec(-3i64..=3, r * c).prop_map(move |data| {
                RatMatrix::new(r, c, data.into_iter().map(rat).collect()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn kernel_vectors_are_independent_solutions(a in small_matrix(4, 4)) {
            let basis = kernel_basis(&a);
            prop_assert_eq!(basis.len(), a.cols() - rank(&a));
            for b in &basis {
                prop_assert!(a.mul_vec(b).is_zero());
            }
            prop_assert_eq!(rank_of(a.cols(), &basis), basis.len());
        }

        #[test]
        fn kernel_components_lie_in_qsd(a in small_matrix(3, 3)) {
            // zero components are members only when 0 ∈ sd(M)
            let set = SubdeterminantSet::new(&a, DEFAULT_ENUMERATION_CAP).unwrap();
            for b in kernel_basis(&a) {
                for c in b.iter().filter(|c| !c.is_zero()) {
                    prop_assert!(set.contains_quotient(c), "{} not in qsd", c);
                }
            }
        }

        #[test]
        fn subdeterminants_contain_one(a in small_matrix(4, 4)) {
            let sd = subdeterminants(&a, a.rows().min(a.cols()), DEFAULT_ENUMERATION_CAP).unwrap();
            prop_assert!(sd.contains(&rat(1)));
            let bound = hadamard_bound(&a);
            for d in sd {
                prop_assert!(d.abs() <= bound);
            }
        }
    }
}
