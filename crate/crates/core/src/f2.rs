//! Dense linear algebra over the field with two elements.
//!
//! Vectors are bit-packed into `u64` words and matrices are stored row-major
//! as a list of such vectors. All bases returned by this module are in
//! reduced row-echelon form, so two subspaces are equal exactly when their
//! returned bases are equal.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

const WORD_BITS: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// Errors raised by shape-sensitive operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum F2Error {
    /// Two operands disagree on a dimension.
    DimensionMismatch { expected: usize, found: usize },
    /// A vector that was required to lie in a span does not.
    NotContained { index: usize },
}

impl fmt::Display for F2Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            F2Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            F2Error::NotContained { index } => {
                write!(f, "subspace vector {index} is not contained in the ambient span")
            }
        }
    }
}

impl core::error::Error for F2Error {}

/// A vector in `F_2^len`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Vector {
    len: usize,
    // bits past `len` in the last word are always zero
    words: Vec<u64>,
}

impl F2Vector {
    pub fn zeros(len: usize) -> Self {
        F2Vector { len, words: vec![0; words_for(len)] }
    }

    /// The standard basis vector `e_index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    /// Builds a vector from its support. Indices may repeat, in which case
    /// they cancel.
    pub fn from_support<I: IntoIterator<Item = usize>>(len: usize, support: I) -> Self {
        let mut v = Self::zeros(len);
        for i in support {
            v.flip(i);
        }
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        Self::from_support(bits.len(), bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.len, "index {index} out of range for length {}", self.len);
        (self.words[index / WORD_BITS] >> (index % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, index: usize, value: bool) {
        assert!(index < self.len, "index {index} out of range for length {}", self.len);
        let mask = 1u64 << (index % WORD_BITS);
        if value {
            self.words[index / WORD_BITS] |= mask;
        } else {
            self.words[index / WORD_BITS] &= !mask;
        }
    }

    pub fn flip(&mut self, index: usize) {
        assert!(index < self.len, "index {index} out of range for length {}", self.len);
        self.words[index / WORD_BITS] ^= 1u64 << (index % WORD_BITS);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the first nonzero coordinate.
    pub fn leading_index(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * WORD_BITS + w.trailing_zeros() as usize)
    }

    /// Coordinates equal to one, in increasing order.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            core::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD_BITS + bit)
            })
        })
    }

    pub fn add_assign(&mut self, other: &F2Vector) {
        assert_eq!(self.len, other.len, "vector length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn add(&self, other: &F2Vector) -> F2Vector {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn dot(&self, other: &F2Vector) -> bool {
        assert_eq!(self.len, other.len, "vector length mismatch");
        let ones: u32 = self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum();
        ones % 2 == 1
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        f.write_str("]")
    }
}

/// A `rows × cols` matrix over `F_2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    cols: usize,
    rows: Vec<F2Vector>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix { cols, rows: vec![F2Vector::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        F2Matrix { cols: n, rows: (0..n).map(|i| F2Vector::unit(n, i)).collect() }
    }

    /// Builds a matrix whose rows are `rows`; each must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<F2Vector>) -> Result<Self, F2Error> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(F2Error::DimensionMismatch { expected: cols, found: bad.len() });
        }
        Ok(F2Matrix { cols, rows })
    }

    /// Builds a matrix whose columns are `columns`; each must have length `rows`.
    pub fn from_columns(rows: usize, columns: &[F2Vector]) -> Result<Self, F2Error> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(F2Error::DimensionMismatch { expected: rows, found: c.len() });
            }
            for i in c.support() {
                m.rows[i].set(j, true);
            }
        }
        Ok(m)
    }

    pub fn from_bools(rows: &[&[bool]]) -> Result<Self, F2Error> {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| F2Vector::from_bits(r)).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row].get(col)
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.rows[row].set(col, value)
    }

    pub fn row(&self, i: usize) -> &F2Vector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[F2Vector] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> F2Vector {
        F2Vector::from_support(self.nrows(), (0..self.nrows()).filter(|&i| self.rows[i].get(j)))
    }

    pub fn columns(&self) -> Vec<F2Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(F2Vector::is_zero)
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = Self::zeros(self.cols, self.nrows());
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.support() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    /// `self · v`.
    pub fn mul_vec(&self, v: &F2Vector) -> Result<F2Vector, F2Error> {
        if v.len() != self.cols {
            return Err(F2Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok(F2Vector::from_support(
            self.nrows(),
            self.rows.iter().enumerate().filter(|(_, r)| r.dot(v)).map(|(i, _)| i),
        ))
    }

    /// `self · other`.
    pub fn mul(&self, other: &F2Matrix) -> Result<F2Matrix, F2Error> {
        if other.nrows() != self.cols {
            return Err(F2Error::DimensionMismatch { expected: self.cols, found: other.nrows() });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = F2Vector::zeros(other.cols);
                for k in r.support() {
                    acc.add_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        Ok(F2Matrix { cols: other.cols, rows })
    }

    /// Reduced row-echelon form: the nonzero rows together with their pivot
    /// columns, pivots strictly increasing.
    pub fn rref(&self) -> (Vec<F2Vector>, Vec<usize>) {
        let basis = EchelonBasis::from_vectors(self.cols, self.rows.iter().cloned());
        let basis = basis.into_rref();
        let pivots = basis.iter().map(|r| r.leading_index().expect("nonzero row")).collect();
        (basis, pivots)
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.nrows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

/// Incrementally maintained echelon basis of a subspace of `F_2^len`.
///
/// Each stored row has a distinct pivot that is zero in every row inserted
/// after it, so reduction is a single pass in insertion order.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    len: usize,
    rows: Vec<F2Vector>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(len: usize) -> Self {
        EchelonBasis { len, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_vectors<I: IntoIterator<Item = F2Vector>>(len: usize, vectors: I) -> Self {
        let mut basis = Self::new(len);
        for v in vectors {
            basis.insert(v);
        }
        basis
    }

    pub fn ambient_len(&self) -> usize {
        self.len
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis, returning the remainder.
    pub fn reduce(&self, v: &F2Vector) -> F2Vector {
        assert_eq!(v.len(), self.len, "vector length mismatch");
        let mut out = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out.get(p) {
                out.add_assign(row);
            }
        }
        out
    }

    pub fn contains(&self, v: &F2Vector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span. Returns `true` when the rank grew.
    pub fn insert(&mut self, v: F2Vector) -> bool {
        let r = self.reduce(&v);
        match r.leading_index() {
            Some(p) => {
                self.rows.push(r);
                self.pivots.push(p);
                true
            }
            None => false,
        }
    }

    /// The unique reduced row-echelon basis of the span, sorted by pivot.
    pub fn into_rref(self) -> Vec<F2Vector> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        let mut rows: Vec<F2Vector> = order.iter().map(|&i| self.rows[i].clone()).collect();
        let pivots: Vec<usize> = order.iter().map(|&i| self.pivots[i]).collect();
        // each stored row leads at its pivot, so back-substitution suffices
        for i in (0..rows.len()).rev() {
            let p = pivots[i];
            let pivot_row = rows[i].clone();
            for (j, row) in rows.iter_mut().enumerate() {
                if j != i && row.get(p) {
                    row.add_assign(&pivot_row);
                }
            }
        }
        rows
    }
}

/// Dimension of the row space of `m`.
pub fn rank(m: &F2Matrix) -> usize {
    EchelonBasis::from_vectors(m.ncols(), m.rows().iter().cloned()).rank()
}

/// Basis of `{ v : m·v = 0 }` in reduced row-echelon form.
pub fn kernel_basis(m: &F2Matrix) -> Vec<F2Vector> {
    let cols = m.ncols();
    let (rref, pivots) = m.rref();
    let mut kernel = EchelonBasis::new(cols);
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = F2Vector::unit(cols, free);
        for (row, &p) in rref.iter().zip(&pivots) {
            if row.get(free) {
                v.set(p, true);
            }
        }
        kernel.insert(v);
    }
    kernel.into_rref()
}

/// Basis of the column space of `m` in reduced row-echelon form.
pub fn image_basis(m: &F2Matrix) -> Vec<F2Vector> {
    EchelonBasis::from_vectors(m.nrows(), m.columns()).into_rref()
}

/// Some `x` with `m·x = b`, or `None` when `b` is outside the column space.
pub fn solve(m: &F2Matrix, b: &F2Vector) -> Result<Option<F2Vector>, F2Error> {
    if b.len() != m.nrows() {
        return Err(F2Error::DimensionMismatch { expected: m.nrows(), found: b.len() });
    }
    let cols = m.ncols();
    // rows of [m | b]; a pivot in the last column means inconsistency
    let augmented = m.rows().iter().enumerate().map(|(i, r)| {
        let mut row = F2Vector::from_support(cols + 1, r.support());
        if b.get(i) {
            row.set(cols, true);
        }
        row
    });
    let rref = EchelonBasis::from_vectors(cols + 1, augmented).into_rref();
    let mut x = F2Vector::zeros(cols);
    for row in &rref {
        let p = row.leading_index().expect("nonzero row");
        if p == cols {
            return Ok(None);
        }
        if row.get(cols) {
            x.set(p, true);
        }
    }
    Ok(Some(x))
}

/// `dim span(space) − dim span(subspace)`, after checking containment.
pub fn quotient_dim(space: &[F2Vector], subspace: &[F2Vector]) -> Result<usize, F2Error> {
    let len = match space.first().or(subspace.first()) {
        Some(v) => v.len(),
        None => return Ok(0),
    };
    if let Some(bad) = space.iter().chain(subspace).find(|v| v.len() != len) {
        return Err(F2Error::DimensionMismatch { expected: len, found: bad.len() });
    }
    let ambient = EchelonBasis::from_vectors(len, space.iter().cloned());
    if let Some(index) = subspace.iter().position(|v| !ambient.contains(v)) {
        return Err(F2Error::NotContained { index });
    }
    let sub = EchelonBasis::from_vectors(len, subspace.iter().cloned());
    Ok(ambient.rank() - sub.rank())
}

/// Vectors of `candidates`, chosen greedily in order, that extend
/// `span(base)` to `span(base ∪ candidates)`.
pub fn extend_basis(len: usize, base: &[F2Vector], candidates: &[F2Vector]) -> Vec<F2Vector> {
    let mut span = EchelonBasis::from_vectors(len, base.iter().cloned());
    candidates.iter().filter(|c| span.insert((*c).clone())).cloned().collect()
}
