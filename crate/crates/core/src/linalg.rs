//! Exact linear algebra: an incremental sparse row echelon form with
//! optional transformation tracking, plus dense slice maps.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type SparseVec = BTreeMap<usize, Scalar>;

/// `v += c * w`, dropping cancelled entries.
pub fn axpy(v: &mut SparseVec, c: &Scalar, w: &SparseVec) {
    if c.is_zero() {
        return;
    }
    for (&k, x) in w {
        let t = c * x;
        match v.entry(k) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(t);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &t;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

/// Row space of a growing family of sparse vectors, kept in reduced row
/// echelon form.  Pivots are the smallest column index of each row.
///
/// With tracking on, every stored row also carries its expression as a
/// combination of the inserted vectors (by insertion index).
#[derive(Clone, Debug)]
pub struct Echelon {
    pivots: BTreeMap<usize, usize>,
    rows: Vec<SparseVec>,
    combos: Option<Vec<SparseVec>>,
    inserted: usize,
    reduced: bool,
}

impl Echelon {
    pub fn new(track: bool) -> Self {
        Echelon {
            pivots: BTreeMap::new(),
            rows: Vec::new(),
            combos: track.then(Vec::new),
            inserted: 0,
            reduced: true,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Pivot columns, ascending.
    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Reduced row with pivot `col` (entry 1 at `col`).
    pub fn row(&self, col: usize) -> Option<&SparseVec> {
        self.pivots.get(&col).map(|&r| &self.rows[r])
    }

    /// Combination of inserted vectors producing `row(col)`.
    pub fn combo(&self, col: usize) -> Option<&SparseVec> {
        let r = *self.pivots.get(&col)?;
        self.combos.as_ref().map(|c| &c[r])
    }

    /// Inserts a vector; returns `false` when it was already in the span.
    pub fn insert(&mut self, mut v: SparseVec) -> bool {
        let tag = self.inserted;
        self.inserted += 1;
        let mut combo = SparseVec::new();
        combo.insert(tag, Scalar::one());
        // Eliminate every pivot entry of v, smallest column first.  Stored rows
        // only contain columns greater than their pivot, so a forward sweep
        // suffices.
        let mut cursor = 0usize;
        loop {
            let next = v.range(cursor..).find(|(k, _)| self.pivots.contains_key(k)).map(|(k, c)| (*k, c.clone()));
            let Some((col, c)) = next else { break };
            let r = self.pivots[&col];
            let neg = -&c;
            axpy(&mut v, &neg, &self.rows[r]);
            if let Some(combos) = &self.combos {
                axpy(&mut combo, &neg, &combos[r]);
            }
            cursor = col + 1;
        }
        let Some((&lead, lc)) = v.iter().next() else { return false };
        let inv = lc.inv().expect("nonzero leading coefficient");
        for x in v.values_mut() {
            *x = &*x * &inv;
        }
        if let Some(combos) = &mut self.combos {
            for x in combo.values_mut() {
                *x = &*x * &inv;
            }
            combos.push(combo);
        }
        self.rows.push(v);
        self.pivots.insert(lead, self.rows.len() - 1);
        self.reduced = false;
        true
    }

    /// Back-substitutes so that each row vanishes on all other pivot columns.
    pub fn reduce_fully(&mut self) {
        if self.reduced {
            return;
        }
        let order: Vec<(usize, usize)> = self.pivots.iter().rev().map(|(&c, &r)| (c, r)).collect();
        for &(col, r) in &order {
            loop {
                let hit = self.rows[r]
                    .iter()
                    .find(|(&k, _)| k != col && self.pivots.contains_key(&k))
                    .map(|(&k, x)| (k, x.clone()));
                let Some((k, x)) = hit else { break };
                let src = self.pivots[&k];
                let neg = -&x;
                let w = self.rows[src].clone();
                axpy(&mut self.rows[r], &neg, &w);
                if let Some(combos) = &mut self.combos {
                    let cw = combos[src].clone();
                    axpy(&mut combos[r], &neg, &cw);
                }
            }
        }
        self.reduced = true;
    }

    /// Splits `v` as `remainder + Σ c_k row_k` with the remainder supported on
    /// non-pivot columns.  Returns the remainder and the coefficients `c_k`
    /// keyed by pivot column.  Requires [`Echelon::reduce_fully`].
    pub fn reduce(&self, v: &SparseVec) -> (SparseVec, BTreeMap<usize, Scalar>) {
        assert!(self.reduced, "echelon form is not fully reduced");
        let coeffs: BTreeMap<usize, Scalar> =
            v.iter().filter(|(k, _)| self.pivots.contains_key(k)).map(|(&k, c)| (k, c.clone())).collect();
        let mut rem = v.clone();
        for (col, c) in &coeffs {
            axpy(&mut rem, &-c, &self.rows[self.pivots[col]]);
        }
        (rem, coeffs)
    }

    /// Expresses `v` as a combination of inserted vectors, if it lies in the span.
    pub fn solve(&self, v: &SparseVec) -> Option<SparseVec> {
        let (rem, coeffs) = self.reduce(v);
        if !rem.is_empty() {
            return None;
        }
        let combos = self.combos.as_ref().expect("echelon built without tracking");
        let mut out = SparseVec::new();
        for (col, c) in &coeffs {
            axpy(&mut out, c, &combos[self.pivots[col]]);
        }
        Some(out)
    }
}

/// Dense matrix over [`Scalar`], row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_i64(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.cols {
            return Err(Error::Shape(alloc::format!("vector of length {} for {} columns", x.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (j, xj) in x.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !xj.is_zero() {
                        acc += &(a * xj);
                    }
                }
                acc
            })
            .collect())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(alloc::format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let t = &out.data[i * out.cols + j] + &(a * b);
                        out.set(i, j, t);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Column `j` as a sparse vector.
    pub fn column(&self, j: usize) -> SparseVec {
        (0..self.rows).filter_map(|i| Some((i, self.get(i, j).clone())).filter(|(_, x)| !x.is_zero())).collect()
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(false);
        for i in 0..self.rows {
            let row: SparseVec =
                (0..self.cols).filter_map(|j| Some((j, self.get(i, j).clone())).filter(|(_, x)| !x.is_zero())).collect();
            e.insert(row);
        }
        e.rank()
    }
}

/// Linear map between two graded pieces with explicit bases.
#[derive(Clone, Debug)]
pub struct GradedSlice<K> {
    pub degree: u32,
    pub domain: Vec<K>,
    pub codomain: Vec<K>,
    pub matrix: Matrix,
}

impl<K: Clone> GradedSlice<K> {
    pub fn new(degree: u32, domain: Vec<K>, codomain: Vec<K>, matrix: Matrix) -> Result<Self> {
        if matrix.rows() != codomain.len() || matrix.cols() != domain.len() {
            return Err(Error::Shape(alloc::format!(
                "{}x{} matrix for bases of size {} -> {}",
                matrix.rows(),
                matrix.cols(),
                domain.len(),
                codomain.len()
            )));
        }
        Ok(GradedSlice { degree, domain, codomain, matrix })
    }

    /// Slice map of `self ∘ first`.
    pub fn compose(&self, first: &GradedSlice<K>) -> Result<GradedSlice<K>> {
        let matrix = self.matrix.mul(&first.matrix)?;
        GradedSlice::new(first.degree, first.domain.clone(), self.codomain.clone(), matrix)
    }
}

/// Canonical solution of `A x = b`: pivot columns of the reduced row echelon
/// form carry the solution, free variables are zero.  `None` when `b` is
/// outside the column span.
pub fn slice_solve<K>(a: &GradedSlice<K>, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    let m = &a.matrix;
    if b.len() != m.rows() {
        return Err(Error::Shape(alloc::format!("right-hand side of length {} for {} rows", b.len(), m.rows())));
    }
    let mut e = Echelon::new(true);
    for j in 0..m.cols() {
        e.insert(m.column(j));
    }
    e.reduce_fully();
    let rhs: SparseVec = b.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect();
    Ok(e.solve(&rhs).map(|combo| {
        let mut x = vec![Scalar::zero(); m.cols()];
        for (j, c) in combo {
            x[j] = c;
        }
        x
    }))
}

pub fn slice_rank<K>(a: &GradedSlice<K>) -> usize {
    a.matrix.rank()
}
