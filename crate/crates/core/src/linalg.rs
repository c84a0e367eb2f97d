//! Dense matrices over the tower field. Entries are field elements; when a
//! matrix represents data over a subfield (the code alphabet F), closure
//! under the row operations keeps it there. Row-major storage.

use crate::error::Error;
use crate::tower::{Fe, FieldTower};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Fe>>) -> Result<Matrix, Error> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in &rows {
            if r.len() != ncols {
                return Err(Error::LengthMismatch { expected: ncols, got: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix { rows: nrows, cols: ncols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        self.row(i).iter().all(|c| c.is_zero())
    }

    /// Rows of other appended below self.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, Error> {
        if self.cols != other.cols {
            return Err(Error::LengthMismatch { expected: self.cols, got: other.cols });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn mul(&self, t: &FieldTower, other: &Matrix) -> Result<Matrix, Error> {
        if self.cols != other.rows {
            return Err(Error::LengthMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        out.set(i, j, t.add(out.at(i, j), t.mul(a, b)));
                    }
                }
            }
        }
        Ok(out)
    }

    /// self·v for a column vector v.
    pub fn mul_vec(&self, t: &FieldTower, v: &[Fe]) -> Result<Vec<Fe>, Error> {
        if v.len() != self.cols {
            return Err(Error::LengthMismatch { expected: self.cols, got: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Fe::ZERO;
                for (j, &x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc = t.add(acc, t.mul(self.at(i, j), x));
                    }
                }
                acc
            })
            .collect())
    }

    /// Reduced row echelon form in place; returns the pivot columns in
    /// ascending order. Zero rows sink to the bottom.
    pub fn rref_in_place(&mut self, t: &FieldTower) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.at(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    let (a, b) = (self.at(r, j), self.at(pr, j));
                    self.set(r, j, b);
                    self.set(pr, j, a);
                }
            }
            let inv = t.inv(self.at(r, c));
            for j in c..self.cols {
                self.set(r, j, t.mul(inv, self.at(r, j)));
            }
            for i in 0..self.rows {
                if i == r || self.at(i, c).is_zero() {
                    continue;
                }
                let f = self.at(i, c);
                for j in c..self.cols {
                    let v = t.sub(self.at(i, j), t.mul(f, self.at(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self, t: &FieldTower) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place(t);
        (m, pivots)
    }

    pub fn rank(&self, t: &FieldTower) -> usize {
        self.rref(t).1.len()
    }

    /// Matrix of the nonzero rows of the RREF, plus the pivot columns: the
    /// canonical full-rank form of the row space.
    pub fn row_space_basis(&self, t: &FieldTower) -> (Matrix, Vec<usize>) {
        let (m, pivots) = self.rref(t);
        let mut out = Matrix::zero(pivots.len(), self.cols);
        for i in 0..pivots.len() {
            for j in 0..self.cols {
                out.set(i, j, m.at(i, j));
            }
        }
        (out, pivots)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j));
            }
        }
        out
    }

    /// Whether the matrix is already in reduced row echelon form with no
    /// zero rows: strictly increasing pivot columns, unit pivots, and each
    /// pivot column zero everywhere else.
    pub fn is_canonical_rref(&self) -> bool {
        let mut last: Option<usize> = None;
        for i in 0..self.rows {
            let Some(c) = (0..self.cols).find(|&j| !self.at(i, j).is_zero()) else {
                return false;
            };
            if last.is_some_and(|l| c <= l) || self.at(i, c) != Fe::ONE {
                return false;
            }
            if (0..self.rows).any(|r| r != i && !self.at(r, c).is_zero()) {
                return false;
            }
            last = Some(c);
        }
        true
    }

    /// Solve self·x = b. None when inconsistent; the flag is true when the
    /// solution is unique (every column is a pivot).
    pub fn solve(&self, t: &FieldTower, b: &[Fe]) -> Result<Option<(Vec<Fe>, bool)>, Error> {
        if b.len() != self.rows {
            return Err(Error::LengthMismatch { expected: self.rows, got: b.len() });
        }
        let mut aug = Matrix::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.at(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let pivots = aug.rref_in_place(t);
        if pivots.contains(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Fe::ZERO; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.at(r, self.cols);
        }
        Ok(Some((x, pivots.len() == self.cols)))
    }

    /// Basis of the right kernel {v : self·v = 0}, one vector per free
    /// column in ascending column order. Restricted to the free coordinates
    /// the basis is the identity, so a combination is recovered by reading
    /// those coordinates.
    pub fn kernel_basis(&self, t: &FieldTower) -> Vec<Vec<Fe>> {
        let (m, pivots) = self.rref(t);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Fe::ZERO; self.cols];
                v[fc] = Fe::ONE;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = t.neg(m.at(r, fc));
                }
                v
            })
            .collect()
    }
}
