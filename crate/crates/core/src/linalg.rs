//! Dense matrices over prime fields.
//!
//! Every hom-space, kernel and cokernel computation in the crate bottoms out
//! here. Entries are stored row-major as reduced residues in `[0, p)`, and all
//! canonical forms are deterministic: leftmost pivots, top-down elimination,
//! free variables set to zero when solving.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_PRIME: u32 = 97;

/// The prime field `F_p` for a small prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeField {
    p: u32,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..=MAX_PRIME).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidField(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.p - b) % self.p
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        (a * b) % self.p
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        (self.p - a) % self.p
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a % self.p != 0, "inverse of zero in F_{}", self.p);
        // a^(p-2) by square and multiply
        let mut base = a % self.p;
        let mut exp = self.p - 2;
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Reduce a signed integer into `[0, p)`.
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
}

/// A dense matrix over a prime field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat[F_{}; {}x{}]", self.field.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "\n  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Result of row reduction.
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: Mat,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl Mat {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Build from row-major entries, reducing each modulo `p`.
    pub fn from_vec(field: PrimeField, rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let data = entries.into_iter().map(|v| v % field.p).collect();
        Ok(Self { field, rows, cols, data })
    }

    /// Build from signed rows; every row must have the same length.
    pub fn from_rows<R: AsRef<[i64]>>(field: PrimeField, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            data.extend(r.iter().map(|&v| field.reduce(v)));
        }
        Ok(Self { field, rows: rows.len(), cols, data })
    }

    /// Build a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &v) in c.iter().enumerate() {
                m.data[i * m.cols + j] = v % field.p;
            }
        }
        m
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.p;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    /// Matrix product; panics on mismatched shapes or fields.
    pub fn dot(&self, other: &Mat) -> Mat {
        assert_eq!(self.field, other.field, "field mismatch in product");
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let p = self.field.p;
        let mut out = Mat::zeros(self.field, self.rows, other.cols);
        if other.cols == 0 {
            return out;
        }
        // accumulate in u64 and reduce once per output row segment
        let mut acc = vec![0u64; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            let arow = self.row(i);
            for (k, &a) in arow.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let brow = other.row(k);
                for (slot, &b) in acc.iter_mut().zip(brow) {
                    *slot += (a * b) as u64;
                }
            }
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (o, a) in orow.iter_mut().zip(&acc) {
                *o = (a % p as u64) as u32;
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let p = self.field.p as u64;
        (0..self.rows)
            .map(|r| {
                let s: u64 = self.row(r).iter().zip(v).map(|(&a, &b)| (a * b) as u64).sum();
                (s % p) as u32
            })
            .collect()
    }

    fn zip_with(&self, other: &Mat, f: impl Fn(u32, u32) -> u32) -> Mat {
        assert_eq!(self.field, other.field);
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        Mat {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Mat) -> Mat {
        let k = self.field;
        self.zip_with(other, |a, b| k.add(a, b))
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        let k = self.field;
        self.zip_with(other, |a, b| k.sub(a, b))
    }

    pub fn scale(&self, c: u32) -> Mat {
        let k = self.field;
        Mat { data: self.data.iter().map(|&a| k.mul(a, c % k.p)).collect(), ..self.clone() }
    }

    pub fn neg(&self) -> Mat {
        let k = self.field;
        Mat { data: self.data.iter().map(|&a| k.neg(a)).collect(), ..self.clone() }
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Mat {
        let mut m = Mat::zeros(self.field, r1 - r0, c1 - c0);
        for r in r0..r1 {
            m.data[(r - r0) * m.cols..(r - r0 + 1) * m.cols]
                .copy_from_slice(&self.data[r * self.cols + c0..r * self.cols + c1]);
        }
        m
    }

    /// Write `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Mat) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(r));
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut m = Mat::zeros(self.field, idx.len(), self.cols);
        for (i, &r) in idx.iter().enumerate() {
            m.data[i * self.cols..(i + 1) * self.cols].copy_from_slice(self.row(r));
        }
        m
    }

    pub fn select_columns(&self, idx: &[usize]) -> Mat {
        let mut m = Mat::zeros(self.field, self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                m.data[r * idx.len() + j] = self.get(r, c);
            }
        }
        m
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut m = Mat::zeros(self.field, self.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(0, self.cols, other);
        m
    }

    /// `[self ; other]`
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { field: self.field, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(self.field, n));
        let r = rref(&aug);
        if r.pivots.iter().take(n).copied().eq(0..n) && r.rank == n {
            Some(r.reduced.submatrix(0, n, n, 2 * n))
        } else {
            None
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }
}

fn same_field(a: &Mat, b: &Mat) -> Result<()> {
    if a.field != b.field {
        return Err(Error::FieldMismatch(a.field.p, b.field.p));
    }
    Ok(())
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Result<Mat> {
    same_field(a, b)?;
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(a.dot(b))
}

/// Reduced row echelon form with leftmost pivots, eliminating top-down.
pub fn rref(a: &Mat) -> Rref {
    let k = a.field;
    let p = k.p;
    let (rows, cols) = a.shape();
    let mut m = a.data.clone();
    let mut pivots = Vec::new();
    let mut nz: Vec<usize> = Vec::with_capacity(cols);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in c..cols {
                m.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = k.inv(m[r * cols + c]);
        nz.clear();
        for j in c..cols {
            let v = &mut m[r * cols + j];
            if *v != 0 {
                *v = (*v * inv) % p;
                nz.push(j);
            }
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = m[i * cols + c];
            if f == 0 {
                continue;
            }
            let nf = p - f;
            for &j in &nz {
                let piv = m[r * cols + j];
                let slot = &mut m[i * cols + j];
                *slot = (*slot + nf * piv) % p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    let rank = pivots.len();
    Rref { reduced: Mat { field: k, rows, cols, data: m }, pivots, rank }
}

/// Columns form a basis of the null space; one column per free variable in
/// ascending order, with the pivot entries back-solved.
pub fn kernel_basis(a: &Mat) -> Mat {
    let r = rref(a);
    let k = a.field;
    let cols = a.cols;
    let mut is_pivot = vec![false; cols];
    for &c in &r.pivots {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut out = Mat::zeros(k, cols, free.len());
    for (j, &fc) in free.iter().enumerate() {
        out.data[fc * free.len() + j] = 1;
        for (i, &pc) in r.pivots.iter().enumerate() {
            let v = r.reduced.get(i, fc);
            if v != 0 {
                out.data[pc * free.len() + j] = k.neg(v);
            }
        }
    }
    out
}

/// Some `X` with `a·X = b`, free variables set to zero; `None` if inconsistent.
pub fn solve_linear(a: &Mat, b: &Mat) -> Result<Option<Mat>> {
    same_field(a, b)?;
    if a.rows != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "solve: lhs has {} rows, rhs has {}",
            a.rows, b.rows
        )));
    }
    let aug = a.hstack(b);
    let r = rref(&aug);
    if r.pivots.iter().any(|&c| c >= a.cols) {
        return Ok(None);
    }
    let mut x = Mat::zeros(a.field, a.cols, b.cols);
    for (i, &pc) in r.pivots.iter().enumerate() {
        for j in 0..b.cols {
            x.data[pc * b.cols + j] = r.reduced.get(i, a.cols + j);
        }
    }
    Ok(Some(x))
}

pub fn kronecker(a: &Mat, b: &Mat) -> Result<Mat> {
    same_field(a, b)?;
    let k = a.field;
    let mut out = Mat::zeros(k, a.rows * b.rows, a.cols * b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let s = a.get(i, j);
            if s == 0 {
                continue;
            }
            out.set_block(i * b.rows, j * b.cols, &b.scale(s));
        }
    }
    Ok(out)
}

pub fn direct_sum_mat(a: &Mat, b: &Mat) -> Result<Mat> {
    same_field(a, b)?;
    let mut out = Mat::zeros(a.field, a.rows + b.rows, a.cols + b.cols);
    out.set_block(0, 0, a);
    out.set_block(a.rows, a.cols, b);
    Ok(out)
}

/// A subspace of `F_p^n` held as reduced row-echelon basis rows.
///
/// Row `i` has a `1` at `pivots[i]` and zeros at every other pivot, so the
/// coordinates of a member vector are just its entries at the pivots.
#[derive(Clone, Debug)]
pub struct RowSpace {
    basis: Mat,
    pivots: Vec<usize>,
}

impl RowSpace {
    /// Span of the rows of `gens`.
    pub fn span(gens: &Mat) -> Self {
        let r = rref(gens);
        let basis = r.reduced.submatrix(0, r.rank, 0, gens.cols);
        Self { basis, pivots: r.pivots }
    }

    pub fn from_vectors(field: PrimeField, ambient: usize, vectors: &[Vec<u32>]) -> Self {
        let mut m = Mat::zeros(field, vectors.len(), ambient);
        for (i, v) in vectors.iter().enumerate() {
            assert_eq!(v.len(), ambient);
            m.data[i * ambient..(i + 1) * ambient].copy_from_slice(v);
        }
        Self::span(&m)
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `v` against the basis; the result is zero iff `v` is a member.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let k = self.basis.field;
        let mut out = v.to_vec();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = out[pc];
            if c == 0 {
                continue;
            }
            let nc = k.neg(c);
            for (o, &b) in out.iter_mut().zip(self.basis.row(i)) {
                if b != 0 {
                    *o = k.add(*o, k.mul(nc, b));
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of a member vector in the echelon basis.
    pub fn coords(&self, v: &[u32]) -> Option<Vec<u32>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&c| v[c]).collect())
    }

    /// Coordinates without the membership check.
    pub fn coords_unchecked(&self, v: &[u32]) -> Vec<u32> {
        self.pivots.iter().map(|&c| v[c]).collect()
    }

    pub fn is_subspace_of(&self, other: &RowSpace) -> bool {
        (0..self.dim()).all(|i| other.contains(self.basis.row(i)))
    }

    pub fn same_as(&self, other: &RowSpace) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn field_rejects_composites_and_range() {
        assert!(PrimeField::new(6).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(101).is_err());
        assert!(PrimeField::new(97).is_ok());
        let k = f(7);
        for a in 1..7 {
            assert_eq!(k.mul(a, k.inv(a)), 1);
        }
    }

    #[test]
    fn mat_mul_examples() {
        let k = f(2);
        let a = Mat::from_rows(k, &[[1, 1], [0, 1]]).unwrap();
        assert_eq!(mat_mul(&Mat::identity(k, 2), &a).unwrap(), a);
        let ones = Mat::from_rows(k, &[[1, 1], [1, 1]]).unwrap();
        let col = Mat::from_rows(k, &[[1], [1]]).unwrap();
        assert_eq!(mat_mul(&ones, &col).unwrap(), Mat::zeros(k, 2, 1));
    }

    #[test]
    fn mat_mul_errors() {
        let a = Mat::zeros(f(2), 2, 3);
        assert!(matches!(mat_mul(&a, &a), Err(Error::DimensionMismatch(_))));
        let b = Mat::zeros(f(3), 3, 2);
        assert!(matches!(mat_mul(&a, &b), Err(Error::FieldMismatch(2, 3))));
    }

    #[test]
    fn rref_examples() {
        let r = rref(&Mat::from_rows(f(2), &[[1, 1], [1, 1]]).unwrap());
        assert_eq!((r.rank, r.pivots.clone()), (1, vec![0]));
        let r = rref(&Mat::zeros(f(2), 3, 3));
        assert_eq!((r.rank, r.pivots.len()), (0, 0));
        let r = rref(&Mat::from_rows(f(3), &[[2, 1], [1, 2]]).unwrap());
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn kernel_examples() {
        let k = f(2);
        assert_eq!(kernel_basis(&Mat::identity(k, 2)).cols(), 0);
        let one = Mat::from_rows(k, &[[1], [1]]).unwrap();
        assert_eq!(kernel_basis(&Mat::from_rows(k, &[[1, 1]]).unwrap()), one);
        assert_eq!(kernel_basis(&Mat::from_rows(k, &[[1, 1], [1, 1]]).unwrap()), one);
    }

    #[test]
    fn solve_examples() {
        let k = f(2);
        let b = Mat::from_rows(k, &[[1, 0], [1, 1]]).unwrap();
        assert_eq!(solve_linear(&Mat::identity(k, 2), &b).unwrap(), Some(b));
        let x = solve_linear(
            &Mat::from_rows(k, &[[1, 1]]).unwrap(),
            &Mat::from_rows(k, &[[1]]).unwrap(),
        )
        .unwrap();
        assert_eq!(x, Some(Mat::from_rows(k, &[[1], [0]]).unwrap()));
        let none = solve_linear(&Mat::zeros(k, 1, 1), &Mat::identity(k, 1)).unwrap();
        assert!(none.is_none());
        assert!(solve_linear(&Mat::zeros(k, 2, 1), &Mat::zeros(k, 1, 1)).is_err());
    }

    #[test]
    fn kronecker_and_sum_examples() {
        let k = f(3);
        let a = Mat::from_rows(k, &[[1, 2], [0, 1]]).unwrap();
        let kr = kronecker(&Mat::identity(k, 2), &a).unwrap();
        assert_eq!(kr, direct_sum_mat(&a, &a).unwrap());
        let s = direct_sum_mat(&Mat::from_rows(k, &[[1]]).unwrap(), &Mat::from_rows(k, &[[2]]).unwrap());
        assert_eq!(s.unwrap(), Mat::from_rows(k, &[[1, 0], [0, 2]]).unwrap());
        let big = kronecker(&Mat::zeros(k, 2, 3), &Mat::zeros(k, 4, 5)).unwrap();
        assert_eq!(big.shape(), (8, 15));
    }

    #[test]
    fn zero_sized_matrices_are_legal() {
        let k = f(5);
        let a = Mat::zeros(k, 0, 3);
        let b = Mat::zeros(k, 3, 0);
        assert_eq!(a.dot(&b).shape(), (0, 0));
        assert_eq!(b.dot(&a).shape(), (3, 3));
        assert_eq!(kernel_basis(&a).shape(), (3, 3));
        assert_eq!(rref(&b).rank, 0);
    }

    #[test]
    fn inverse_round_trip() {
        let k = f(5);
        let a = Mat::from_rows(k, &[[1, 2], [3, 4]]).unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(a.dot(&inv), Mat::identity(k, 2));
        assert!(Mat::from_rows(k, &[[1, 2], [2, 4]]).unwrap().inverse().is_none());
    }

    #[test]
    fn rowspace_coordinates() {
        let k = f(3);
        let s = RowSpace::span(&Mat::from_rows(k, &[[1, 1, 0], [0, 1, 1]]).unwrap());
        assert_eq!(s.dim(), 2);
        let v = vec![1, 2, 1];
        let c = s.coords(&v).unwrap();
        let mut back = vec![0; 3];
        for (i, &ci) in c.iter().enumerate() {
            for j in 0..3 {
                back[j] = k.add(back[j], k.mul(ci, s.basis().get(i, j)));
            }
        }
        assert_eq!(back, v);
        assert!(s.coords(&[1, 0, 0]).is_none());
    }
}
