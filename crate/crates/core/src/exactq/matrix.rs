use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::rational::Rational;
use crate::error::{Error, Result};

/// Dense column vector over the rationals.
pub type Vector = Vec<Rational>;

/// Sparse row: `(column, value)` pairs sorted by column, no zeros.
pub(crate) type SparseRow = Vec<(usize, Rational)>;

/// Exact sparse matrix. Stored row-major; absent entries are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseRationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseRow>,
}

impl SparseRationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i, Rational::one()));
        }
        m
    }

    pub fn from_dense(rows: usize, cols: usize, entries: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (r, row) in entries.iter().enumerate().take(rows) {
            for (c, x) in row.iter().enumerate().take(cols) {
                if !x.is_zero() {
                    m.data[r].push((c, x.clone()));
                }
            }
        }
        m
    }

    pub fn from_i64(entries: &[&[i64]]) -> Self {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        let dense: Vec<Vec<Rational>> =
            entries.iter().map(|r| r.iter().map(|&x| Rational::from_int(x)).collect()).collect();
        Self::from_dense(rows, cols, &dense)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, v) in columns.iter().enumerate() {
            for (r, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    m.data[r].push((c, x.clone()));
                }
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

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        match self.data[r].binary_search_by_key(&c, |e| e.0) {
            Ok(k) => self.data[r][k].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    /// Adds `x` to entry `(r, c)`.
    pub fn add_to(&mut self, r: usize, c: usize, x: &Rational) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        if x.is_zero() {
            return;
        }
        let row = &mut self.data[r];
        match row.binary_search_by_key(&c, |e| e.0) {
            Ok(k) => {
                row[k].1 += x;
                if row[k].1.is_zero() {
                    row.remove(k);
                }
            }
            Err(k) => row.insert(k, (c, x.clone())),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, x: Rational) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        let row = &mut self.data[r];
        match row.binary_search_by_key(&c, |e| e.0) {
            Ok(k) if x.is_zero() => {
                row.remove(k);
            }
            Ok(k) => row[k].1 = x,
            Err(_) if x.is_zero() => {}
            Err(k) => row.insert(k, (c, x)),
        }
    }

    /// Iterates over the nonzero entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.data.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, x)| (r, *c, x)))
    }

    pub fn row(&self, r: usize) -> &[(usize, Rational)] {
        &self.data[r]
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.cols]; self.rows];
        for (r, c, x) in self.triplets() {
            out[r][c] = x.clone();
        }
        out
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (r, c, x) in self.triplets() {
            t.data[c].push((r, x.clone()));
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vector {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        self.data.iter().map(|row| row.iter().map(|(c, x)| x * &v[*c]).sum()).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
            for (k, a) in row {
                for (c, b) in &other.data[*k] {
                    *acc.entry(*c).or_default() += a * b;
                }
            }
            out.data[r] = acc.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        let mut out = self.clone();
        for row in &mut out.data {
            for e in row.iter_mut() {
                e.1 = &e.1 * s;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| axpy(a, &Rational::one(), b)).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Rational::from_int(-1)))
    }
}

/// Returns `a + s*b` for sorted sparse rows.
pub(crate) fn axpy(a: &[(usize, Rational)], s: &Rational, b: &[(usize, Rational)]) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, s * &b[j].1));
            j += 1;
        } else {
            let x = &a[i].1 + &(s * &b[j].1);
            if !x.is_zero() {
                out.push((a[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Reduced row echelon form of a list of sparse rows.
///
/// Returns the nonzero rows of the RREF (each with leading entry 1) together
/// with their pivot columns, in increasing pivot order. The result does not
/// depend on the input row order.
pub(crate) fn rref_rows(rows: Vec<SparseRow>) -> (Vec<SparseRow>, Vec<usize>) {
    let mut buckets: BTreeMap<usize, Vec<SparseRow>> = BTreeMap::new();
    for r in rows.into_iter().filter(|r| !r.is_empty()) {
        buckets.entry(r[0].0).or_default().push(r);
    }
    let mut echelon: Vec<SparseRow> = Vec::new();
    let mut pivots = Vec::new();
    while let Some((col, mut group)) = buckets.pop_first() {
        let best =
            (0..group.len()).min_by_key(|&k| (group[k][0].1.pivot_cost(), group[k].len())).expect("nonempty bucket");
        let pivot = group.swap_remove(best);
        let inv = pivot[0].1.recip();
        let pivot: SparseRow = pivot.into_iter().map(|(c, x)| (c, &x * &inv)).collect();
        for r in group {
            let f = -r[0].1.clone();
            let reduced = axpy(&r, &f, &pivot);
            if let Some(&(lead, _)) = reduced.first() {
                buckets.entry(lead).or_default().push(reduced);
            }
        }
        echelon.push(pivot);
        pivots.push(col);
    }
    for k in (0..echelon.len()).rev() {
        let p = pivots[k];
        let (head, tail) = echelon.split_at_mut(k);
        let prow = &tail[0];
        for row in head.iter_mut() {
            if let Ok(pos) = row.binary_search_by_key(&p, |e| e.0) {
                let f = -row[pos].1.clone();
                *row = axpy(row, &f, prow);
            }
        }
    }
    (echelon, pivots)
}

fn dense_to_sparse(v: &[Rational]) -> SparseRow {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(c, x)| (c, x.clone())).collect()
}

fn sparse_to_dense(row: &[(usize, Rational)], dim: usize) -> Vector {
    let mut v = vec![Rational::zero(); dim];
    for (c, x) in row {
        v[*c] = x.clone();
    }
    v
}

/// Exact rank.
pub fn rank(m: &SparseRationalMatrix) -> usize {
    rref_rows(m.data.clone()).1.len()
}

/// RREF of the matrix as a new matrix of the same shape (zero rows last),
/// together with the pivot columns.
pub fn rref(m: &SparseRationalMatrix) -> (SparseRationalMatrix, Vec<usize>) {
    let (rows, pivots) = rref_rows(m.data.clone());
    let mut out = SparseRationalMatrix::zeros(m.rows, m.cols);
    for (k, r) in rows.into_iter().enumerate() {
        out.data[k] = r;
    }
    (out, pivots)
}

/// Canonical kernel basis: one vector per free column `f`, with entry 1 at
/// `f` and zeros at the other free columns.
pub fn kernel_basis(m: &SparseRationalMatrix) -> Vec<Vector> {
    let (rows, pivots) = rref_rows(m.data.clone());
    kernel_from_rref(&rows, &pivots, m.cols)
}

fn kernel_from_rref(rows: &[SparseRow], pivots: &[usize], cols: usize) -> Vec<Vector> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let mut basis: Vec<Vector> = Vec::new();
    let mut slot = vec![usize::MAX; cols];
    for f in (0..cols).filter(|&f| !is_pivot[f]) {
        slot[f] = basis.len();
        let mut v = vec![Rational::zero(); cols];
        v[f] = Rational::one();
        basis.push(v);
    }
    for (row, &p) in rows.iter().zip(pivots) {
        for (c, x) in row.iter().skip(1) {
            basis[slot[*c]][p] = -x.clone();
        }
    }
    basis
}

/// Kernel basis together with the free columns indexing it. The coordinates
/// of a kernel vector in this basis are its entries at the free columns.
pub fn kernel_with_free(m: &SparseRationalMatrix) -> (Vec<Vector>, Vec<usize>) {
    let (rows, pivots) = rref_rows(m.data.clone());
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free = (0..m.cols).filter(|&f| !is_pivot[f]).collect();
    (kernel_from_rref(&rows, &pivots, m.cols), free)
}

/// Canonical column-space basis: the nonzero rows of the RREF of the transpose.
pub fn image_basis(m: &SparseRationalMatrix) -> Vec<Vector> {
    let (rows, _) = rref_rows(m.transpose().data);
    rows.iter().map(|r| sparse_to_dense(r, m.rows)).collect()
}

/// Canonical basis of the span of arbitrary vectors in `dim`-space.
pub fn span_basis(dim: usize, vectors: &[Vector]) -> Vec<Vector> {
    let (rows, _) = rref_rows(vectors.iter().map(|v| dense_to_sparse(v)).collect());
    rows.iter().map(|r| sparse_to_dense(r, dim)).collect()
}

pub fn span_rank(vectors: &[Vector]) -> usize {
    rref_rows(vectors.iter().map(|v| dense_to_sparse(v)).collect()).1.len()
}

/// Coset representatives and projection for `ambient / span(subspace)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    /// Standard basis vectors completing the subspace to a basis.
    pub representatives: Vec<Vector>,
    /// Ambient indices of the representatives.
    pub rep_indices: Vec<usize>,
    /// Maps an ambient vector to its coset coordinates.
    pub projection: SparseRationalMatrix,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn project(&self, v: &[Rational]) -> Vector {
        self.projection.mul_vec(v)
    }
}

/// Quotient of the ambient space by the span of `subspace`, which must be
/// linearly independent.
pub fn quotient_basis(ambient_dim: usize, subspace: &[Vector]) -> Result<Quotient> {
    for v in subspace {
        if v.len() != ambient_dim {
            return Err(Error::Dimension { expected: ambient_dim, found: v.len() });
        }
    }
    let (rows, pivots) = rref_rows(subspace.iter().map(|v| dense_to_sparse(v)).collect());
    if pivots.len() != subspace.len() {
        return Err(Error::DependentSubspace { stated: subspace.len(), rank: pivots.len() });
    }
    let mut is_pivot = vec![false; ambient_dim];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let rep_indices: Vec<usize> = (0..ambient_dim).filter(|&j| !is_pivot[j]).collect();
    let mut slot = vec![usize::MAX; ambient_dim];
    for (k, &j) in rep_indices.iter().enumerate() {
        slot[j] = k;
    }
    let mut projection = SparseRationalMatrix::zeros(rep_indices.len(), ambient_dim);
    for (k, &j) in rep_indices.iter().enumerate() {
        projection.set(k, j, Rational::one());
    }
    for (row, &p) in rows.iter().zip(&pivots) {
        for (c, x) in row.iter().skip(1) {
            projection.set(slot[*c], p, -x.clone());
        }
    }
    let representatives = rep_indices
        .iter()
        .map(|&j| {
            let mut v = vec![Rational::zero(); ambient_dim];
            v[j] = Rational::one();
            v
        })
        .collect();
    Ok(Quotient { representatives, rep_indices, projection })
}

/// Solves `m x = b` if a solution exists, returning the one supported on
/// pivot columns.
pub fn solve(m: &SparseRationalMatrix, b: &[Rational]) -> Option<Vector> {
    assert_eq!(b.len(), m.rows, "dimension mismatch");
    let aug: Vec<SparseRow> = m
        .data
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            if !x.is_zero() {
                r.push((m.cols, x.clone()));
            }
            r
        })
        .collect();
    let (rows, pivots) = rref_rows(aug);
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); m.cols];
    for (row, &p) in rows.iter().zip(&pivots) {
        if let Some((c, v)) = row.last() {
            if *c == m.cols {
                x[p] = v.clone();
            }
        }
    }
    Some(x)
}

/// Whether every vector of `a` lies in the span of `b`.
pub fn span_contains(b: &[Vector], a: &[Vector]) -> bool {
    let base = span_rank(b);
    let mut all: Vec<Vector> = b.to_vec();
    all.extend_from_slice(a);
    span_rank(&all) == base
}
