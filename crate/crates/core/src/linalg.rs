//! Dense matrices over a [`Field`], with row reduction, rank and kernels.

use crate::gf::{Fe, Field};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![Fe::ZERO; rows * cols] }
    }

    /// Builds a matrix from rows of equal length `cols`.
    pub fn from_rows(field: &Field, cols: usize, rows: Vec<Vec<Fe>>) -> Matrix {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix row");
            data.extend(r);
        }
        Matrix { field: field.clone(), rows: n, cols, data }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fe] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Fe]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn to_rows(&self) -> Vec<Vec<Fe>> {
        self.row_iter().map(<[Fe]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Keeps only the listed rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let rows = idx.iter().map(|&i| self.row(i).to_vec()).collect();
        Matrix::from_rows(&self.field, self.cols, rows)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * self.cols);
        head[lo * self.cols..(lo + 1) * self.cols].swap_with_slice(&mut tail[..self.cols]);
    }

    fn scale_row(&mut self, r: usize, c: Fe) {
        let table = self.field.mul_table(c);
        for x in &mut self.data[r * self.cols..(r + 1) * self.cols] {
            *x = table[x.0 as usize];
        }
    }

    /// `row[dst] += c * row[src]`, touching columns from `start` on.
    fn add_scaled_row(&mut self, dst: usize, src: usize, table: &[Fe], start: usize) {
        let cols = self.cols;
        let (d, s) = if dst < src {
            let (a, b) = self.data.split_at_mut(src * cols);
            (&mut a[dst * cols..(dst + 1) * cols], &b[..cols])
        } else {
            let (a, b) = self.data.split_at_mut(dst * cols);
            (&mut b[..cols], &a[src * cols..(src + 1) * cols])
        };
        let field = &self.field;
        if field.p() == 2 {
            for (x, y) in d[start..].iter_mut().zip(&s[start..]) {
                x.0 ^= table[y.0 as usize].0;
            }
        } else {
            for (x, y) in d[start..].iter_mut().zip(&s[start..]) {
                *x = field.add(*x, table[y.0 as usize]);
            }
        }
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let field = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = field.inv(self.get(r, c)).expect("pivot is nonzero");
            self.scale_row(r, inv);
            for i in 0..self.rows {
                let v = self.get(i, c);
                if i != r && !v.is_zero() {
                    let table = field.mul_table(field.neg(v));
                    self.add_scaled_row(i, r, &table, c);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduced row echelon form with zero rows dropped, plus pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        m.data.truncate(pivots.len() * m.cols);
        m.rows = pivots.len();
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        // Row-by-row insertion into an echelon basis; avoids cloning the whole matrix twice.
        let mut basis = Echelon::new(&self.field, self.cols);
        for row in self.row_iter() {
            basis.insert(row.to_vec());
        }
        basis.rank()
    }

    /// Basis of the right kernel `{x : A x = 0}` as rows, in reduced echelon form.
    pub fn kernel(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let field = &self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Fe::ZERO; self.cols];
            v[f] = Fe::ONE;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(r.get(i, f));
            }
            rows.push(v);
        }
        let k = Matrix::from_rows(field, self.cols, rows);
        k.rref().0
    }

    /// `v * self` for a row vector `v` of length `rows`.
    pub fn left_mul(&self, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(v.len(), self.rows);
        let field = &self.field;
        let mut out = vec![Fe::ZERO; self.cols];
        for (r, &c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(self.row(r)) {
                *o = field.add(*o, field.mul(c, x));
            }
        }
        out
    }

    /// `self * v` for a column vector `v` of length `cols`.
    pub fn apply(&self, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(v.len(), self.cols);
        let field = &self.field;
        self.row_iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(Fe::ZERO, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
            })
            .collect()
    }
}

/// Incrementally maintained echelon basis of a row space.
pub struct Echelon {
    field: Field,
    cols: usize,
    /// (pivot column, normalized row with 1 at pivot)
    rows: Vec<(usize, Vec<Fe>)>,
}

impl Echelon {
    pub fn new(field: &Field, cols: usize) -> Echelon {
        Echelon { field: field.clone(), cols, rows: Vec::new() }
    }

    /// Reduces `row` against the basis; keeps it if independent. Returns whether it was added.
    pub fn insert(&mut self, mut row: Vec<Fe>) -> bool {
        assert_eq!(row.len(), self.cols);
        let field = &self.field;
        for (pc, basis_row) in &self.rows {
            let v = row[*pc];
            if v.is_zero() {
                continue;
            }
            let table = field.mul_table(field.neg(v));
            if field.p() == 2 {
                for (x, y) in row[*pc..].iter_mut().zip(&basis_row[*pc..]) {
                    x.0 ^= table[y.0 as usize].0;
                }
            } else {
                for (x, y) in row[*pc..].iter_mut().zip(&basis_row[*pc..]) {
                    *x = field.add(*x, table[y.0 as usize]);
                }
            }
        }
        let Some(pc) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let table = field.mul_table(field.inv(row[pc]).expect("nonzero"));
        for x in row[pc..].iter_mut() {
            *x = table[x.0 as usize];
        }
        self.rows.push((pc, row));
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn into_matrix(self) -> Matrix {
        let rows = self.rows.into_iter().map(|(_, r)| r).collect();
        Matrix::from_rows(&self.field, self.cols, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2() -> Field {
        Field::canonical(2, 1).unwrap()
    }

    fn m(field: &Field, rows: &[&[u32]]) -> Matrix {
        let cols = rows[0].len();
        Matrix::from_rows(field, cols, rows.iter().map(|r| r.iter().map(|&x| Fe(x)).collect()).collect())
    }

    #[test]
    fn rank_and_kernel_gf2() {
        let f = gf2();
        let a = m(&f, &[&[1, 1, 0, 0], &[0, 1, 1, 0], &[1, 0, 1, 0]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.rows(), 2);
        for row in k.row_iter() {
            assert!(a.apply(row).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn rref_gf3() {
        let f = Field::canonical(3, 1).unwrap();
        let a = m(&f, &[&[2, 1, 0], &[1, 2, 1]]);
        let (r, piv) = a.rref();
        assert_eq!(piv, vec![0, 2]);
        assert_eq!(r.row(0), &[Fe(1), Fe(2), Fe(0)]);
        assert_eq!(r.row(1), &[Fe(0), Fe(0), Fe(1)]);
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn empty_matrix_kernel_is_identity() {
        let f = gf2();
        let a = Matrix::zeros(&f, 0, 3);
        assert_eq!(a.kernel(), Matrix::identity(&f, 3));
        assert_eq!(a.rank(), 0);
    }

    #[test]
    fn echelon_rejects_dependent_rows() {
        let f = Field::canonical(2, 2).unwrap();
        let mut e = Echelon::new(&f, 2);
        assert!(e.insert(vec![Fe(2), Fe(3)]));
        let scaled = vec![f.mul(Fe(3), Fe(2)), f.mul(Fe(3), Fe(3))];
        assert!(!e.insert(scaled));
        assert!(e.insert(vec![Fe(0), Fe(1)]));
        assert_eq!(e.rank(), 2);
    }
}
