//! Dense matrices over an exact scalar field, with row reduction.
//!
//! Everything here is desk-scale: matrices are stored dense and all
//! elimination is exact (no pivot thresholds).

use crate::scalar::{Scalar, ScalarField};

/// Dense `rows x cols` matrix over a fixed field. Zero-sized shapes are
/// legal and remember their field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat {
    field: ScalarField,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Mat {
    pub fn zero(field: ScalarField, rows: usize, cols: usize) -> Self {
        Mat { field, rows, cols, entries: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: ScalarField, n: usize) -> Self {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: ScalarField, rows: Vec<Vec<Scalar>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        for r in &rows {
            assert_eq!(r.len(), ncols, "ragged rows");
        }
        let mut entries = Vec::with_capacity(nrows * ncols);
        for r in rows {
            for e in r {
                assert_eq!(e.field(), field, "entry field mismatch");
                entries.push(e);
            }
        }
        Mat { field, rows: nrows, cols: ncols, entries }
    }

    /// Test helper: integer entries coerced into the field.
    pub fn from_i64(field: ScalarField, rows: &[&[i64]]) -> Self {
        Mat::from_rows(
            field,
            rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect(),
        )
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        debug_assert_eq!(v.field(), self.field);
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        assert_eq!(self.field, rhs.field, "field mismatch in matrix product");
        let mut out = Mat::zero(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = &*out.get(i, j) + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for i in 0..self.rows * self.cols {
            out.entries[i] = &out.entries[i] + &rhs.entries[i];
        }
        out
    }

    pub fn sub(&self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for i in 0..self.rows * self.cols {
            out.entries[i] = &out.entries[i] - &rhs.entries[i];
        }
        out
    }

    pub fn neg(&self) -> Mat {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = -&*e;
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = &*e * c;
        }
        out
    }

    // In-place elementary operations. These are the primitives tracked by the
    // chain reduction; they must stay exact inverses of each other.

    /// row[dst] += c * row[src]
    pub fn row_add(&mut self, dst: usize, src: usize, c: &Scalar) {
        assert_ne!(dst, src);
        for j in 0..self.cols {
            let v = &*self.get(dst, j) + &(self.get(src, j) * c);
            self.set(dst, j, v);
        }
    }

    /// col[dst] += c * col[src]
    pub fn col_add(&mut self, dst: usize, src: usize, c: &Scalar) {
        assert_ne!(dst, src);
        for i in 0..self.rows {
            let v = &*self.get(i, dst) + &(self.get(i, src) * c);
            self.set(i, dst, v);
        }
    }

    pub fn row_scale(&mut self, r: usize, c: &Scalar) {
        for j in 0..self.cols {
            let v = self.get(r, j) * c;
            self.set(r, j, v);
        }
    }

    pub fn col_scale(&mut self, col: usize, c: &Scalar) {
        for i in 0..self.rows {
            let v = self.get(i, col) * c;
            self.set(i, col, v);
        }
    }

    /// Reduced row echelon form together with the invertible transform
    /// realizing it: `transform * self == reduced`.
    pub fn rref(&self) -> Rref {
        let mut reduced = self.clone();
        let mut transform = Mat::identity(self.field, self.rows);
        let mut pivots = Vec::new();
        let mut cur = 0usize;
        for col in 0..self.cols {
            let Some(pr) = (cur..self.rows).find(|&r| !reduced.get(r, col).is_zero()) else {
                continue;
            };
            if pr != cur {
                for j in 0..self.cols {
                    reduced.entries.swap(pr * self.cols + j, cur * self.cols + j);
                }
                for j in 0..self.rows {
                    transform.entries.swap(pr * self.rows + j, cur * self.rows + j);
                }
            }
            let inv = reduced.get(cur, col).inv().expect("pivot is nonzero");
            reduced.row_scale(cur, &inv);
            transform.row_scale(cur, &inv);
            for r in 0..self.rows {
                if r != cur && !reduced.get(r, col).is_zero() {
                    let c = -&*reduced.get(r, col);
                    reduced.row_add(r, cur, &c);
                    transform.row_add(r, cur, &c);
                }
            }
            pivots.push((cur, col));
            cur += 1;
            if cur == self.rows {
                break;
            }
        }
        Rref { reduced, transform, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the kernel, returned as the columns of a `cols x nullity`
    /// matrix.
    pub fn kernel_basis(&self) -> Mat {
        let rref = self.rref();
        let pivot_cols: Vec<usize> = rref.pivots.iter().map(|&(_, c)| c).collect();
        let free_cols: Vec<usize> =
            (0..self.cols).filter(|c| !pivot_cols.contains(c)).collect();
        let mut basis = Mat::zero(self.field, self.cols, free_cols.len());
        for (j, &fc) in free_cols.iter().enumerate() {
            basis.set(fc, j, self.field.one());
            for &(pr, pc) in &rref.pivots {
                basis.set(pc, j, -&*rref.reduced.get(pr, fc));
            }
        }
        basis
    }

    /// Exact inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let rref = self.rref();
        if rref.pivots.len() == self.rows {
            Some(rref.transform)
        } else {
            None
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Block-diagonal stacking: `diag(self, other)`.
    pub fn block_diag(&self, other: &Mat) -> Mat {
        assert_eq!(self.field, other.field);
        let mut out = Mat::zero(self.field, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// True when every column is zero or a distinct standard basis vector.
    pub fn is_partial_permutation(&self) -> bool {
        let mut used_rows = vec![false; self.rows];
        for c in 0..self.cols {
            let nonzero: Vec<usize> =
                (0..self.rows).filter(|&r| !self.get(r, c).is_zero()).collect();
            match nonzero.as_slice() {
                [] => {}
                [r] => {
                    if !self.get(*r, c).is_one() || used_rows[*r] {
                        return false;
                    }
                    used_rows[*r] = true;
                }
                _ => return false,
            }
        }
        true
    }
}

pub struct Rref {
    pub reduced: Mat,
    pub transform: Mat,
    pub pivots: Vec<(usize, usize)>,
}
