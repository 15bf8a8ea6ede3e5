//! Exact linear algebra over the rationals.
//!
//! Every graded map in this crate (multiplication by a polynomial, the
//! Jacobian map `S_m^3 -> S_{m+d-1}`, evaluation at points) ends up as a
//! matrix with small integer entries. Elimination is fraction-free: rows are
//! kept as primitive integer vectors and every row operation is followed by
//! an exact division by the row content. Rows are stored sparsely because
//! the matrices built from polynomial multiples are mostly zero.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinError {
    #[error("matrix shape {rows}x{cols} does not match {len} entries")]
    Shape { rows: usize, cols: usize, len: usize },
    #[error("matrix is singular")]
    Singular,
}

/// Dense matrix of rationals, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, LinError> {
        if entries.len() != rows * cols {
            return Err(LinError::Shape {
                rows,
                cols,
                len: entries.len(),
            });
        }
        Ok(QMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from integer rows; all rows must have equal length.
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let entries = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), c, "ragged rows");
                row.iter().map(|&v| Rational::from_integer(BigInt::from(v)))
            })
            .collect();
        QMatrix {
            rows: r,
            cols: c,
            entries,
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        let r = rows.len();
        let mut entries = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            entries.extend(row);
        }
        QMatrix {
            rows: r,
            cols,
            entries,
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<Rational>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    /// Stacks `self` on top of `other` (same column count).
    pub fn vstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        QMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Places `self` left of `other` (same row count).
    pub fn hstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            entries.extend(self.row(i).iter().cloned());
            entries.extend(other.row(i).iter().cloned());
        }
        QMatrix {
            rows: self.rows,
            cols,
            entries,
        }
    }

    /// Sparse primitive integer rows of this matrix.
    pub fn sparse_rows(&self) -> Vec<SparseVec> {
        (0..self.rows)
            .map(|i| SparseVec::from_rationals(self.row(i).iter().enumerate()))
            .collect()
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<QMatrix, LinError> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.hstack(&QMatrix::identity(n));
        for c in 0..n {
            let p = (c..n)
                .find(|&r| !a.get(r, c).is_zero())
                .ok_or(LinError::Singular)?;
            if p != c {
                for j in 0..2 * n {
                    let tmp = a.get(p, j).clone();
                    let other = a.get(c, j).clone();
                    a.set(p, j, other);
                    a.set(c, j, tmp);
                }
            }
            let inv = a.get(c, c).recip();
            for j in 0..2 * n {
                let v = a.get(c, j) * &inv;
                a.set(c, j, v);
            }
            for r in 0..n {
                if r == c || a.get(r, c).is_zero() {
                    continue;
                }
                let factor = a.get(r, c).clone();
                for j in 0..2 * n {
                    let v = a.get(r, j) - &factor * a.get(c, j);
                    a.set(r, j, v);
                }
            }
        }
        let mut out = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, a.get(i, n + j).clone());
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Sparse integer vector; columns strictly increasing, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec {
    entries: Vec<(usize, BigInt)>,
}

impl SparseVec {
    /// Builds from `(column, value)` pairs in any order; duplicates are summed.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, BigInt)>) -> Self {
        let mut map: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (c, v) in pairs {
            *map.entry(c).or_insert_with(BigInt::zero) += v;
        }
        SparseVec {
            entries: map.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    /// Clears denominators of a rational vector; the result is a positive
    /// integer multiple of the input.
    pub fn from_rationals<'a>(items: impl IntoIterator<Item = (usize, &'a Rational)>) -> Self {
        let items: Vec<(usize, &Rational)> = items.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let den = items
            .iter()
            .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
        SparseVec::from_pairs(
            items
                .into_iter()
                .map(|(c, v)| (c, v.numer() * (&den / v.denom()))),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, BigInt)] {
        &self.entries
    }

    pub fn lead(&self) -> Option<(usize, &BigInt)> {
        self.entries.first().map(|(c, v)| (*c, v))
    }

    pub fn get(&self, col: usize) -> Option<&BigInt> {
        self.entries
            .binary_search_by_key(&col, |(c, _)| *c)
            .ok()
            .map(|i| &self.entries[i].1)
    }

    pub fn to_dense(&self, ncols: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); ncols];
        for (c, v) in &self.entries {
            out[*c] = Rational::from_integer(v.clone());
        }
        out
    }

    fn content(&self) -> BigInt {
        self.entries
            .iter()
            .fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v))
    }

    /// Divides by the content and makes the leading entry positive.
    pub fn make_primitive(&mut self) {
        let g = self.content();
        if g.is_zero() {
            return;
        }
        let negate = self.entries[0].1.is_negative();
        if !g.is_one() || negate {
            let g = if negate { -g } else { g };
            for (_, v) in self.entries.iter_mut() {
                *v = &*v / &g;
            }
        }
    }

    /// `a * self - b * other`.
    fn combine(&self, a: &BigInt, other: &SparseVec, b: &BigInt) -> SparseVec {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let (x, y) = (&self.entries, &other.entries);
        while i < x.len() || j < y.len() {
            if j >= y.len() || (i < x.len() && x[i].0 < y[j].0) {
                out.push((x[i].0, a * &x[i].1));
                i += 1;
            } else if i >= x.len() || y[j].0 < x[i].0 {
                out.push((y[j].0, -(b * &y[j].1)));
                j += 1;
            } else {
                let v = a * &x[i].1 - b * &y[j].1;
                if !v.is_zero() {
                    out.push((x[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec { entries: out }
    }

    /// Cancels the entry of `self` at the leading column of `pivot`.
    /// Returns the factor `a` such that the result equals `a * self - b * pivot`.
    fn eliminate_with(&self, pivot: &SparseVec) -> (SparseVec, BigInt) {
        let (col, p) = pivot.lead().expect("zero pivot");
        let v = self.get(col).expect("column not present");
        let g = p.gcd(v);
        let a = p / &g;
        let b = v / &g;
        (self.combine(&a, pivot, &b), a)
    }
}

/// Row echelon form of a set of sparse integer rows.
///
/// Pivot rows are primitive with a positive leading entry; each pivot row
/// has a distinct leading column.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    /// leading column -> pivot row
    pivots: BTreeMap<usize, SparseVec>,
    fully_reduced: bool,
}

impl Echelon {
    /// Column-by-column elimination. Among the rows whose leading entry lies
    /// in the current column, the one with the smallest leading bit-size is
    /// taken as pivot (ties broken by row index).
    pub fn new(ncols: usize, rows: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut buckets: BTreeMap<usize, Vec<(usize, SparseVec)>> = BTreeMap::new();
        for (id, mut row) in rows.into_iter().enumerate() {
            if let Some((c, _)) = row.lead() {
                debug_assert!(row.entries.last().unwrap().0 < ncols);
                row.make_primitive();
                buckets.entry(c).or_default().push((id, row));
            }
        }
        let mut pivots = BTreeMap::new();
        while let Some((col, mut cands)) = buckets.pop_first() {
            let best = cands
                .iter()
                .enumerate()
                .min_by(|(_, (ia, ra)), (_, (ib, rb))| {
                    let ba = ra.lead().unwrap().1.bits();
                    let bb = rb.lead().unwrap().1.bits();
                    ba.cmp(&bb).then(ia.cmp(ib))
                })
                .map(|(k, _)| k)
                .unwrap();
            let (_, pivot) = cands.swap_remove(best);
            for (id, row) in cands {
                let (mut reduced, _) = row.eliminate_with(&pivot);
                if let Some((c, _)) = reduced.lead() {
                    reduced.make_primitive();
                    buckets.entry(c).or_default().push((id, reduced));
                }
            }
            pivots.insert(col, pivot);
        }
        Echelon {
            ncols,
            pivots,
            fully_reduced: false,
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    /// Columns without a pivot, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|c| !self.pivots.contains_key(c)).collect()
    }

    pub fn pivot_rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.pivots.values()
    }

    /// Back-substitution: clears every pivot column in all other pivot rows.
    pub fn reduce_fully(&mut self) {
        if self.fully_reduced {
            return;
        }
        let cols: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for &c in &cols {
            let pivot = self.pivots[&c].clone();
            let targets: Vec<usize> = self
                .pivots
                .range(..c)
                .filter(|(_, r)| r.get(c).is_some())
                .map(|(k, _)| *k)
                .collect();
            for t in targets {
                let (mut r, _) = self.pivots[&t].eliminate_with(&pivot);
                r.make_primitive();
                self.pivots.insert(t, r);
            }
        }
        self.fully_reduced = true;
    }

    /// Reduces an integer vector against the pivots. Returns the remainder
    /// `r` and the scale `s` with `r = s * v - (combination of pivot rows)`.
    /// The remainder has no entries in pivot columns.
    pub fn reduce(&self, v: &SparseVec) -> (SparseVec, BigInt) {
        let mut cur = v.clone();
        let mut scale = BigInt::one();
        let mut pos = 0;
        loop {
            let next = cur.entries[pos..]
                .iter()
                .position(|(c, _)| self.pivots.contains_key(c))
                .map(|k| k + pos);
            let Some(k) = next else { break };
            let col = cur.entries[k].0;
            let (r, a) = cur.eliminate_with(&self.pivots[&col]);
            scale *= a;
            cur = r;
            // entries before `col` are untouched by the pivot row
            pos = cur.entries.partition_point(|(c, _)| *c < col);
        }
        (cur, scale)
    }

    /// True when `v` lies in the row span.
    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Normal form of a rational vector modulo the row span, as a rational
    /// sparse vector supported on free columns. Linear in `v`.
    pub fn normal_form(&self, v: &[(usize, Rational)]) -> Vec<(usize, Rational)> {
        let den = v.iter().fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.denom()));
        let ints = SparseVec::from_pairs(
            v.iter()
                .filter(|(_, q)| !q.is_zero())
                .map(|(c, q)| (*c, q.numer() * (&den / q.denom()))),
        );
        let (r, scale) = self.reduce(&ints);
        let total = Rational::from_integer(scale * den);
        r.entries
            .into_iter()
            .map(|(c, x)| (c, Rational::from_integer(x) / &total))
            .collect()
    }

    /// Basis of the right kernel `{v : row . v = 0 for every row}`.
    pub fn kernel(&mut self) -> Vec<Vec<Rational>> {
        self.reduce_fully();
        let free = self.free_columns();
        free.iter()
            .map(|&j| {
                let mut v = vec![Rational::zero(); self.ncols];
                v[j] = Rational::one();
                for (&c, row) in &self.pivots {
                    if let Some(x) = row.get(j) {
                        let lead = row.get(c).unwrap();
                        v[c] = -Rational::new(x.clone(), lead.clone());
                    }
                }
                v
            })
            .collect()
    }
}

/// Exact rank.
pub fn rank(m: &QMatrix) -> usize {
    Echelon::new(m.cols(), m.sparse_rows()).rank()
}

/// Basis of the right kernel; its size is `cols - rank`.
pub fn kernel_basis(m: &QMatrix) -> Vec<Vec<Rational>> {
    Echelon::new(m.cols(), m.sparse_rows()).kernel()
}

/// Whether `v` lies in the column span of `m`, decided by comparing
/// `rank(m)` with the rank of `m` augmented by `v`.
pub fn in_span(v: &[Rational], m: &QMatrix) -> bool {
    assert_eq!(v.len(), m.rows(), "vector length must equal the row count");
    let cols: Vec<SparseVec> = (0..m.cols())
        .map(|j| SparseVec::from_rationals((0..m.rows()).map(|i| (i, m.get(i, j)))))
        .collect();
    let base = Echelon::new(m.rows(), cols.clone()).rank();
    let extended = Echelon::new(
        m.rows(),
        cols.into_iter()
            .chain(std::iter::once(SparseVec::from_rationals(v.iter().enumerate()))),
    )
    .rank();
    base == extended
}
