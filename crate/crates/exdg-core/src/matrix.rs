//! Dense exact linear algebra over a ground field.
//!
//! Matrices are row-major and act on column vectors: an r×c matrix
//! represents a linear map k^c → k^r. All canonical bases (kernel,
//! image, cokernel, quotients) are derived from the reduced row echelon
//! form with deterministic first-nonzero pivoting, so identical inputs
//! always produce identical bases.

use crate::field::{FieldSpec, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    pub field: FieldSpec,
    pub rows: usize,
    pub cols: usize,
    a: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Mat {
        Mat { field, rows, cols, a: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Build from explicit rows; all rows must have equal length.
    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { field, rows: r, cols: c, a: rows.into_iter().flatten().collect() }
    }

    /// Convenience: integer entries mapped into the field.
    pub fn from_i64(field: FieldSpec, rows: &[&[i64]]) -> Mat {
        Mat::from_rows(
            field,
            rows.iter().map(|r| r.iter().map(|&n| field.from_i64(n)).collect()).collect(),
        )
    }

    /// A column vector.
    pub fn col(field: FieldSpec, v: Vec<Scalar>) -> Mat {
        let r = v.len();
        Mat { field, rows: r, cols: 1, a: v }
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[Scalar] {
        &self.a
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        assert!(r < self.rows && c < self.cols, "index out of range");
        &self.a[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        assert_eq!(v.field(), self.field, "field mismatch");
        self.a[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(Scalar::is_zero)
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let a = self.a.iter().zip(&other.a).map(|(x, y)| x.add(y)).collect();
        Mat { field: self.field, rows: self.rows, cols: self.cols, a }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Mat {
        let a = self.a.iter().map(Scalar::neg).collect();
        Mat { field: self.field, rows: self.rows, cols: self.cols, a }
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        let a = self.a.iter().map(|x| x.mul(s)).collect();
        Mat { field: self.field, rows: self.rows, cols: self.cols, a }
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Mat::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let x = self.get(r, k);
                if x.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let y = other.get(k, c);
                    if y.is_zero() {
                        continue;
                    }
                    let v = out.get(r, c).add(&x.mul(y));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "shape mismatch in apply");
        (0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for c in 0..self.cols {
                    acc = acc.add(&self.get(r, c).mul(&v[c]));
                }
                acc
            })
            .collect()
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        let mut out = Mat::zeros(self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        out
    }

    /// Vertical concatenation [self; other].
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "col mismatch in vstack");
        let mut out = Mat::zeros(self.field, self.rows + other.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out.set(self.rows + r, c, other.get(r, c).clone());
            }
        }
        out
    }

    /// Block diagonal sum; rank is additive over the blocks.
    pub fn block_diag(field: FieldSpec, blocks: &[&Mat]) -> Mat {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            assert_eq!(b.field, field, "field mismatch in block_diag");
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(r0 + r, c0 + c, b.get(r, c).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Reduced row echelon form with the pivot column indices.
    /// Deterministic: scans columns left to right, first nonzero row wins.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    let tmp = m.get(row, c).clone();
                    m.set(row, c, m.get(pr, c).clone());
                    m.set(pr, c, tmp);
                }
            }
            let inv = m.get(row, col).inv();
            for c in 0..m.cols {
                let v = m.get(row, c).mul(&inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r != row && !m.get(r, col).is_zero() {
                    let f = m.get(r, col).clone();
                    for c in 0..m.cols {
                        let v = m.get(r, c).sub(&f.mul(m.get(row, c)));
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rank together with the canonical kernel basis (columns of the
    /// returned matrix). Each free column contributes one basis vector
    /// with a 1 in its own slot and RREF coefficients negated at pivots.
    pub fn rank_and_kernel(&self) -> (usize, Mat) {
        let (r, pivots) = self.rref();
        let rank = pivots.len();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut ker = Mat::zeros(self.field, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            ker.set(fc, k, self.field.one());
            for (prow, &pc) in pivots.iter().enumerate() {
                ker.set(pc, k, r.get(prow, fc).neg());
            }
        }
        // post: self * ker == 0 and the columns are linearly independent.
        (rank, ker)
    }

    pub fn kernel_basis(&self) -> Mat {
        self.rank_and_kernel().1
    }

    /// Particular solution of self·x = b with free variables set to zero.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let rhs = Mat::col(self.field, b.to_vec());
        let aug = self.hstack(&rhs);
        let (r, pivots) = aug.rref();
        // Inconsistent iff a pivot lands in the rhs column.
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (prow, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(prow, self.cols).clone();
        }
        Some(x)
    }

    /// Solve self·X = B column by column; None if any column is inconsistent.
    pub fn solve_matrix(&self, b: &Mat) -> Option<Mat> {
        assert_eq!(b.rows, self.rows, "rhs shape mismatch");
        let mut cols = Vec::with_capacity(b.cols);
        for c in 0..b.cols {
            cols.push(self.solve(&b.column(c))?);
        }
        let mut out = Mat::zeros(self.field, self.cols, b.cols);
        for (c, col) in cols.iter().enumerate() {
            for (r, v) in col.iter().enumerate() {
                out.set(r, c, v.clone());
            }
        }
        Some(out)
    }

    /// Canonical basis of the column space (columns of the returned matrix):
    /// the pivot columns of self, in order.
    pub fn image_basis(&self) -> Mat {
        let (_, pivots) = self.rref();
        let mut out = Mat::zeros(self.field, self.rows, pivots.len());
        for (k, &c) in pivots.iter().enumerate() {
            for r in 0..self.rows {
                out.set(r, k, self.get(r, c).clone());
            }
        }
        out
    }

    /// Cokernel of self: k^rows / im(self). Returns (dim, projection),
    /// where projection is a dim×rows matrix with projection·self = 0,
    /// full row rank, canonical via RREF of the left null space.
    pub fn cokernel_basis(&self) -> (usize, Mat) {
        let left_null = self.transpose().kernel_basis(); // rows × dim
        let proj = left_null.transpose(); // dim × rows, rows of proj span left null space
        let (canon, _) = proj.rref();
        let dim = proj.rows;
        // post: canon * self == 0, rank(canon) == dim == rows - rank(self).
        (dim, canon)
    }
}

/// A quotient space V/W presented by column-spans: `reps` are canonical
/// coset representatives (columns), chosen greedily in order from the
/// columns of the V-basis that extend a basis of W.
pub struct Quotient {
    pub dim: usize,
    /// ambient-dim × dim matrix of representatives.
    pub reps: Mat,
    w_basis: Mat,
}

impl Quotient {
    /// V and W are given by matrices whose columns span them; W ⊆ V is the
    /// caller's responsibility (asserted when reducing).
    pub fn new(v_basis: &Mat, w_basis: &Mat) -> Quotient {
        assert_eq!(v_basis.rows, w_basis.rows, "ambient mismatch");
        let field = v_basis.field;
        let mut chosen: Vec<usize> = Vec::new();
        let mut current = w_basis.clone();
        let mut rank = current.rank();
        for c in 0..v_basis.cols {
            let cand = Mat::col(field, v_basis.column(c));
            let bigger = current.hstack(&cand);
            let r = bigger.rank();
            if r > rank {
                rank = r;
                current = bigger;
                chosen.push(c);
            }
        }
        let mut reps = Mat::zeros(field, v_basis.rows, chosen.len());
        for (k, &c) in chosen.iter().enumerate() {
            for r in 0..v_basis.rows {
                reps.set(r, k, v_basis.get(r, c).clone());
            }
        }
        Quotient { dim: chosen.len(), reps, w_basis: w_basis.clone() }
    }

    /// Coordinates of the coset of v in the representative basis.
    pub fn coords(&self, v: &[Scalar]) -> Vec<Scalar> {
        let sys = self.w_basis.hstack(&self.reps);
        let sol = sys.solve(v).expect("vector not in the subspace V");
        sol[self.w_basis.cols..].to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn rank_and_kernel_of_dependent_rows() {
        // Hand oracle: [[1,2],[2,4]] has rank 1, kernel spanned by (-2,1).
        let m = Mat::from_i64(q(), &[&[1, 2], &[2, 4]]);
        let (rank, ker) = m.rank_and_kernel();
        assert_eq!(rank, 1);
        assert_eq!(ker.cols, 1);
        assert_eq!(*ker.get(0, 0), q().from_i64(-2));
        assert_eq!(*ker.get(1, 0), q().from_i64(1));
        assert!(m.mul(&ker).is_zero());
    }

    #[test]
    fn solve_upper_triangular() {
        // Hand oracle: [[1,1],[0,1]] x = (2,1) has x = (1,1).
        let m = Mat::from_i64(q(), &[&[1, 1], &[0, 1]]);
        let x = m.solve(&[q().from_i64(2), q().from_i64(1)]).unwrap();
        assert_eq!(x, vec![q().from_i64(1), q().from_i64(1)]);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = Mat::from_i64(q(), &[&[1, 2], &[2, 4]]);
        assert!(m.solve(&[q().from_i64(0), q().from_i64(1)]).is_none());
        // Consistent system with free variable: particular solution has free var 0.
        let x = m.solve(&[q().from_i64(1), q().from_i64(2)]).unwrap();
        assert_eq!(x, vec![q().from_i64(1), q().from_i64(0)]);
    }

    #[test]
    fn cokernel_annihilates_image() {
        // Hand oracle: [[1,0],[0,0]] over F_5 has cokernel dim 1, projection (0,1).
        let f = FieldSpec::prime(5);
        let m = Mat::from_i64(f, &[&[1, 0], &[0, 0]]);
        let (dim, proj) = m.cokernel_basis();
        assert_eq!(dim, 1);
        assert!(proj.mul(&m).is_zero());
        assert_eq!(*proj.get(0, 0), f.zero());
        assert_eq!(*proj.get(0, 1), f.one());
    }

    #[test]
    fn block_diag_rank_additive() {
        let a = Mat::from_i64(q(), &[&[1, 2], &[2, 4]]);
        let b = Mat::identity(q(), 3);
        let d = Mat::block_diag(q(), &[&a, &b]);
        assert_eq!(d.rank(), a.rank() + 3);
        assert_eq!((d.rows, d.cols), (5, 5));
    }

    #[test]
    fn quotient_of_plane_by_line() {
        // V = k^2 (standard basis), W = span{(1,1)}: dim V/W = 1 and the
        // canonical representative is e1; (0,1) ≡ -e1 mod W.
        let v = Mat::identity(q(), 2);
        let w = Mat::from_i64(q(), &[&[1], &[1]]);
        let quo = Quotient::new(&v, &w);
        assert_eq!(quo.dim, 1);
        assert_eq!(quo.coords(&[q().from_i64(0), q().from_i64(1)]), vec![q().from_i64(-1)]);
    }

    #[test]
    fn rref_is_idempotent_and_normalized() {
        let m = Mat::from_i64(q(), &[&[0, 2, 4], &[3, 6, 9]]);
        let (r, pivots) = m.rref();
        let (r2, pivots2) = r.rref();
        assert_eq!(r, r2);
        assert_eq!(pivots, pivots2);
        for (row, &c) in pivots.iter().enumerate() {
            assert!(r.get(row, c).is_one());
        }
    }
}
