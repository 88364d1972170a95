//! Dense linear algebra over a prime field GF(p).
//!
//! Entries are stored as residues `0..p` in row-major order. Elimination
//! pivots on the first nonzero entry of each column, so every result is
//! deterministic.

use std::fmt;

use rand::Rng;

use crate::error::{invalid, Result};

/// Trial-division primality test; field sizes here are tiny.
pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2u32;
    while k.saturating_mul(k) <= p {
        if p % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// The prime field GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) || p > 65_521 {
            return invalid(format!("field characteristic {p} is not a supported prime"));
        }
        Ok(PrimeField { p })
    }

    pub fn gf2() -> Self {
        PrimeField { p: 2 }
    }

    pub fn characteristic(self) -> u32 {
        self.p
    }

    /// Reduces an arbitrary integer into `0..p`.
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut a: u32, mut e: u32) -> u32 {
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a % self.p != 0, "zero has no inverse");
        self.pow(a, self.p - 2)
    }

    pub fn element(self, v: i64) -> FieldElement {
        FieldElement { value: self.reduce(v), field: self }
    }
}

/// A residue together with its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub value: u32,
    pub field: PrimeField,
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A dense matrix over GF(p). Zero-row and zero-column matrices are valid.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: PrimeField,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}x{} over GF({})]", self.rows, self.cols, self.field.p)?;
        for r in 0..self.rows {
            write!(f, "\n  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

/// Result of solving `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolutionSet {
    /// No vector satisfies the system.
    Inconsistent,
    /// Every solution is `particular + span(kernel)`.
    Affine { particular: Vec<u32>, kernel: Vec<Vec<u32>> },
}

impl SolutionSet {
    pub fn is_consistent(&self) -> bool {
        matches!(self, SolutionSet::Affine { .. })
    }

    /// Number of free parameters, or `None` when inconsistent.
    pub fn dimension(&self) -> Option<usize> {
        match self {
            SolutionSet::Inconsistent => None,
            SolutionSet::Affine { kernel, .. } => Some(kernel.len()),
        }
    }
}

/// Row-reduced echelon data.
struct Echelon {
    reduced: Matrix,
    pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, field, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from integer rows, reducing each entry mod p.
    /// `cols` is needed so that `rows = []` still fixes the column count.
    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return invalid(format!("row {i} has {} entries, expected {cols}", row.len()));
            }
            data.extend(row.iter().map(|&v| field.reduce(v)));
        }
        Ok(Matrix { rows: rows.len(), cols, field, data })
    }

    pub fn from_fn(
        field: PrimeField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u32,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c) % field.p);
            }
        }
        Matrix { rows, cols, field, data }
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u32>]) -> Self {
        Matrix::from_fn(field, rows, columns.len(), |r, c| columns[c][r])
    }

    pub fn random(rng: &mut impl Rng, field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix::from_fn(field, rows, cols, |_, _| rng.gen_range(0..field.p))
    }

    /// Uniformly random invertible matrix (rejection sampling).
    pub fn random_invertible(rng: &mut impl Rng, field: PrimeField, n: usize) -> Self {
        loop {
            let m = Matrix::random(rng, field, n, n);
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.p;
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r).iter().map(|&v| v as i64).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == (r == c) as u32))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Matrix product; panics on mismatched shapes or fields.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field, "field mismatch in product");
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let p = self.field.p as u64;
        let mut out = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d = (*d + a * b as u64) % p;
                }
            }
        }
        Matrix {
            rows: self.rows,
            cols: other.cols,
            field: self.field,
            data: out.into_iter().map(|v| v as u32).collect(),
        }
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = 0u64;
                for (c, &x) in v.iter().enumerate() {
                    acc += self.data[r * self.cols + c] as u64 * x as u64;
                }
                (acc % self.field.p as u64) as u32
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sum");
        let f = self.field;
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: f,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in difference");
        let f = self.field;
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: f,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, s: u32) -> Matrix {
        let f = self.field;
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: f,
            data: self.data.iter().map(|&a| f.mul(a, s)).collect(),
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let f = self.field;
        Matrix::from_fn(f, self.rows * other.rows, self.cols * other.cols, |r, c| {
            f.mul(self.get(r / other.rows, c / other.cols), other.get(r % other.rows, c % other.cols))
        })
    }

    /// Block-diagonal `diag(self, other)`.
    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        m.paste(0, 0, self);
        m.paste(self.rows, self.cols, other);
        m
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        let mut m = Matrix::zeros(self.field, self.rows, self.cols + other.cols);
        m.paste(0, 0, self);
        m.paste(0, self.cols, other);
        m
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, field: self.field, data }
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.data[(r0 + r) * self.cols + c0 + c] = block.get(r, c);
            }
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(self.field, rows, cols, |r, c| self.get(r0 + r, c0 + c))
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, self.rows, cols.len(), |r, c| self.get(r, cols[c]))
    }

    fn echelon(&self) -> Echelon {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if piv != row {
                for c in 0..m.cols {
                    m.data.swap(piv * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col));
            for c in col..m.cols {
                let v = m.get(row, c);
                m.data[row * m.cols + c] = f.mul(v, inv);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(row, c)));
                    m.data[r * m.cols + c] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { reduced: m, pivots }
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let e = self.echelon();
        (e.reduced, e.pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// A basis of `ker(self)`; its length is `cols - rank`.
    pub fn nullspace_basis(&self) -> Vec<Vec<u32>> {
        let f = self.field;
        let Echelon { reduced, pivots } = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(reduced.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Kernel basis as the columns of a matrix.
    pub fn nullspace_matrix(&self) -> Matrix {
        Matrix::from_columns(self.field, self.cols, &self.nullspace_basis())
    }

    /// The pivot columns of `self`, which form a basis of its column space.
    pub fn column_space_basis(&self) -> Matrix {
        let pivots = self.echelon().pivots;
        self.select_columns(&pivots)
    }

    /// Rows spanning the annihilator of the column space: `Q` with `ker Q = im self`.
    pub fn cokernel_projection(&self) -> Matrix {
        let left = self.transpose().nullspace_basis();
        Matrix::from_fn(self.field, left.len(), self.rows, |r, c| left[r][c])
    }

    /// Solves `self · x = rhs`.
    pub fn solve(&self, rhs: &[u32]) -> SolutionSet {
        assert_eq!(rhs.len(), self.rows, "right-hand side length mismatch");
        let f = self.field;
        let aug = self.hstack(&Matrix::from_fn(f, self.rows, 1, |r, _| rhs[r]));
        let (reduced, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return SolutionSet::Inconsistent;
        }
        let mut particular = vec![0u32; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            particular[pc] = reduced.get(r, self.cols);
        }
        SolutionSet::Affine { particular, kernel: self.nullspace_basis() }
    }

    /// Some solution of `self · X = rhs` for a matrix right-hand side.
    pub fn solve_matrix(&self, rhs: &Matrix) -> Option<Matrix> {
        let mut cols = Vec::with_capacity(rhs.cols);
        for c in 0..rhs.cols {
            match self.solve(&rhs.column(c)) {
                SolutionSet::Inconsistent => return None,
                SolutionSet::Affine { particular, .. } => cols.push(particular),
            }
        }
        Some(Matrix::from_columns(self.field, self.cols, &cols))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Matrix::identity(self.field, 0));
        }
        let aug = self.hstack(&Matrix::identity(self.field, n));
        let (reduced, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(reduced.submatrix(0, n, n, n))
    }
}

/// A linear system whose unknowns are grouped into blocks.
///
/// Equations are added block-row by block-row: each call contributes
/// `k` scalar equations of the form `Σ C_j x_{b_j} = rhs`.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    field: PrimeField,
    offsets: Vec<usize>,
    num_vars: usize,
    rows: Vec<Vec<u32>>,
    rhs: Vec<u32>,
}

impl LinearSystem {
    pub fn new(field: PrimeField, block_sizes: &[usize]) -> Self {
        let mut offsets = Vec::with_capacity(block_sizes.len());
        let mut acc = 0;
        for &s in block_sizes {
            offsets.push(acc);
            acc += s;
        }
        LinearSystem { field, offsets, num_vars: acc, rows: Vec::new(), rhs: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn block_offset(&self, block: usize) -> usize {
        self.offsets[block]
    }

    /// Appends the equations `Σ_j terms[j].1 · x_{terms[j].0} = rhs` (rhs zero when `None`).
    pub fn add_equations(&mut self, terms: &[(usize, &Matrix)], rhs: Option<&[u32]>) -> Result<()> {
        let Some(k) = terms.first().map(|t| t.1.rows()) else {
            return Ok(());
        };
        let block_size = |b: usize| {
            let end = self.offsets.get(b + 1).copied().unwrap_or(self.num_vars);
            end - self.offsets[b]
        };
        for (b, c) in terms {
            if *b >= self.offsets.len() || c.rows() != k || c.cols() != block_size(*b) {
                return invalid(format!("coefficient block for unknown {b} has inconsistent shape"));
            }
        }
        if let Some(r) = rhs {
            if r.len() != k {
                return invalid("right-hand side length does not match equation count");
            }
        }
        let f = self.field;
        for i in 0..k {
            let mut row = vec![0u32; self.num_vars];
            for (b, c) in terms {
                let off = self.offsets[*b];
                for j in 0..c.cols() {
                    row[off + j] = f.add(row[off + j], c.get(i, j));
                }
            }
            self.rows.push(row);
            self.rhs.push(rhs.map_or(0, |r| r[i]));
        }
        Ok(())
    }

    pub fn coefficient_matrix(&self) -> Matrix {
        let rows = self.rows.len();
        Matrix::from_fn(self.field, rows, self.num_vars, |r, c| self.rows[r][c])
    }

    pub fn solve(&self) -> SolutionSet {
        self.coefficient_matrix().solve(&self.rhs)
    }
}

/// Solves a block-structured system; see [`LinearSystem`].
pub fn solve_linear_system(system: &LinearSystem) -> SolutionSet {
    system.solve()
}

pub fn rank(m: &Matrix) -> usize {
    m.rank()
}

pub fn nullspace_basis(m: &Matrix) -> Vec<Vec<u32>> {
    m.nullspace_basis()
}
