//! Dense row-major matrices with exact entries.

use std::fmt;
use std::ops::{Index, Range};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl DenseMatrix {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        for e in &entries {
            field.check_same(&e.field())?;
        }
        Ok(DenseMatrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        DenseMatrix {
            field,
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = DenseMatrix::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = field.one();
        }
        m
    }

    /// Rows must all have length `cols`.
    pub fn from_rows(field: FieldSpec, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        DenseMatrix::new(field, n, cols, entries)
    }

    pub fn from_columns(field: FieldSpec, rows: usize, columns: Vec<Vec<Scalar>>) -> Result<Self> {
        Ok(DenseMatrix::from_rows(field, rows, columns)?.transpose())
    }

    pub fn from_i64s(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        DenseMatrix::from_rows(field, cols, rows).expect("rectangular literal")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self[(i, j)].clone());
            }
        }
        DenseMatrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn mul(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        self.field.check_same(&rhs.field)?;
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = DenseMatrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.entries[idx] = &out.entries[idx] + &(a * &rhs[(k, j)]);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        for x in v {
            self.field.check_same(&x.field())?;
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    /// `self^k` for square matrices.
    pub fn pow(&self, mut k: u64) -> Result<DenseMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let mut base = self.clone();
        let mut acc = DenseMatrix::identity(self.field, self.rows);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            k >>= 1;
        }
        Ok(acc)
    }

    pub fn select_rows(&self, range: Range<usize>) -> Result<DenseMatrix> {
        if range.start > range.end || range.end > self.rows {
            return Err(Error::IndexOutOfRange {
                start: range.start,
                end: range.end,
                len: self.rows,
            });
        }
        let entries = self.entries[range.start * self.cols..range.end * self.cols].to_vec();
        Ok(DenseMatrix {
            field: self.field,
            rows: range.len(),
            cols: self.cols,
            entries,
        })
    }

    pub fn select_columns(&self, range: Range<usize>) -> Result<DenseMatrix> {
        if range.start > range.end || range.end > self.cols {
            return Err(Error::IndexOutOfRange {
                start: range.start,
                end: range.end,
                len: self.cols,
            });
        }
        let mut entries = Vec::with_capacity(self.rows * range.len());
        for i in 0..self.rows {
            entries.extend_from_slice(&self.row(i)[range.clone()]);
        }
        Ok(DenseMatrix {
            field: self.field,
            rows: self.rows,
            cols: range.len(),
            entries,
        })
    }

    /// Stacks `self` on top of `below`.
    pub fn vstack(&self, below: &DenseMatrix) -> Result<DenseMatrix> {
        self.field.check_same(&below.field)?;
        if self.cols != below.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: below.cols,
            });
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&below.entries);
        Ok(DenseMatrix {
            field: self.field,
            rows: self.rows + below.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Places `right` next to `self`.
    pub fn hstack(&self, right: &DenseMatrix) -> Result<DenseMatrix> {
        self.field.check_same(&right.field)?;
        if self.rows != right.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: right.rows,
            });
        }
        let mut entries = Vec::with_capacity(self.entries.len() + right.entries.len());
        for i in 0..self.rows {
            entries.extend_from_slice(self.row(i));
            entries.extend_from_slice(right.row(i));
        }
        Ok(DenseMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols + right.cols,
            entries,
        })
    }

    /// Rank by Gaussian elimination. Columns are processed left to right and
    /// the pivot is the first nonzero entry scanning top to bottom.
    pub fn rank(&self) -> usize {
        let mut a = self.entries.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pivot) = (rank..rows).find(|&r| !a[r * cols + col].is_zero()) else {
                continue;
            };
            if pivot != rank {
                for j in 0..cols {
                    a.swap(pivot * cols + j, rank * cols + j);
                }
            }
            let inv = a[rank * cols + col].inv().expect("pivot is nonzero");
            for r in rank + 1..rows {
                let factor = &a[r * cols + col] * &inv;
                if factor.is_zero() {
                    continue;
                }
                for j in col..cols {
                    let sub = &factor * &a[rank * cols + j];
                    a[r * cols + j] = &a[r * cols + j] - &sub;
                }
            }
            rank += 1;
        }
        rank
    }

    /// `true` iff `v` lies in the row space.
    pub fn row_space_contains(&self, v: &[Scalar]) -> Result<bool> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let row = DenseMatrix::new(self.field, 1, self.cols, v.to_vec())?;
        Ok(self.vstack(&row)?.rank() == self.rank())
    }

    /// `true` iff columns `start..start + count` are linearly independent.
    pub fn columns_independent(&self, start: usize, count: usize) -> Result<bool> {
        let block = self.select_columns(start..start + count)?;
        Ok(block.rank() == count)
    }

    /// `true` iff both matrices have the same row space.
    pub fn same_row_space(&self, other: &DenseMatrix) -> Result<bool> {
        let r = self.rank();
        Ok(r == other.rank() && self.vstack(other)?.rank() == r)
    }
}

/// A row-echelon basis grown one vector at a time.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: FieldSpec,
    width: usize,
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl EchelonBasis {
    pub fn new(field: FieldSpec, width: usize) -> Self {
        EchelonBasis {
            field,
            width,
            rows: Vec::new(),
        }
    }

    /// Adds `v` if it is outside the current span; returns whether it was added.
    pub fn insert(&mut self, v: &[Scalar]) -> Result<bool> {
        let reduced = self.reduce(v)?;
        let Some(pivot) = reduced.iter().position(|x| !x.is_zero()) else {
            return Ok(false);
        };
        let inv = reduced[pivot].inv().expect("pivot is nonzero");
        let row = reduced.iter().map(|x| x * &inv).collect();
        self.rows.push((pivot, row));
        Ok(true)
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        Ok(self.reduce(v)?.iter().all(Scalar::is_zero))
    }

    fn reduce(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.width {
            return Err(Error::DimensionMismatch {
                expected: self.width,
                found: v.len(),
            });
        }
        let mut out = v.to_vec();
        for x in &out {
            self.field.check_same(&x.field())?;
        }
        // Each stored row is zero at the pivots of the rows stored before it.
        for (pivot, row) in &self.rows {
            let c = out[*pivot].clone();
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(row) {
                *o = &*o - &(&c * r);
            }
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_matrix(&self) -> DenseMatrix {
        let rows = self.rows.iter().map(|(_, r)| r.clone()).collect();
        DenseMatrix::from_rows(self.field, self.width, rows).expect("basis rows share a width")
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.entries[i * self.cols + j]
    }
}

impl fmt::Display for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            let line: Vec<String> = (0..self.cols)
                .map(|j| format!("{:>width$}", cells[i * self.cols + j]))
                .collect();
            writeln!(f, "[{}]", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    #[test]
    fn rank_examples() {
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(DenseMatrix::identity(f7, 4).rank(), 4);
        assert_eq!(DenseMatrix::zeros(q(), 3, 5).rank(), 0);
        assert_eq!(DenseMatrix::from_i64s(q(), &[&[1, 1], &[1, 1]]).rank(), 1);
        assert_eq!(DenseMatrix::zeros(q(), 0, 3).rank(), 0);
    }

    #[test]
    fn rank_depends_on_characteristic() {
        let m = [&[1i64, 1][..], &[1, -1]];
        assert_eq!(DenseMatrix::from_i64s(q(), &m).rank(), 2);
        assert_eq!(
            DenseMatrix::from_i64s(FieldSpec::prime(2).unwrap(), &m).rank(),
            1
        );
    }

    #[test]
    fn row_space_examples() {
        let f5 = FieldSpec::prime(5).unwrap();
        let id = DenseMatrix::identity(f5, 2);
        assert!(id
            .row_space_contains(&[f5.from_i64(3), f5.from_i64(4)])
            .unwrap());

        let m = DenseMatrix::from_i64s(q(), &[&[1, 1, 0]]);
        let v: Vec<Scalar> = [2, 2, 0].iter().map(|&x| q().from_i64(x)).collect();
        assert!(m.row_space_contains(&v).unwrap());

        let f2 = FieldSpec::prime(2).unwrap();
        let m = DenseMatrix::from_i64s(f2, &[&[1, 0]]);
        assert!(!m.row_space_contains(&[f2.zero(), f2.one()]).unwrap());
        assert!(matches!(
            m.row_space_contains(&[f2.one()]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            m.row_space_contains(&[q().one(), q().one()]),
            Err(Error::FieldMismatch(..))
        ));
    }

    #[test]
    fn column_independence_examples() {
        let id = DenseMatrix::identity(q(), 3);
        assert!(id.columns_independent(0, 3).unwrap());
        let ones = DenseMatrix::from_i64s(q(), &[&[1, 1], &[1, 1]]);
        assert!(!ones.columns_independent(0, 2).unwrap());
        assert!(ones.columns_independent(2, 0).unwrap());
        assert!(matches!(
            ones.columns_independent(1, 2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn echelon_basis_tracks_span() {
        let f3 = FieldSpec::prime(3).unwrap();
        let v = |c: &[i64]| c.iter().map(|&x| f3.from_i64(x)).collect::<Vec<_>>();
        let mut b = EchelonBasis::new(f3, 3);
        assert!(b.insert(&v(&[0, 1, 2])).unwrap());
        assert!(b.insert(&v(&[1, 1, 0])).unwrap());
        assert!(!b.insert(&v(&[1, 2, 2])).unwrap());
        assert!(!b.insert(&v(&[0, 0, 0])).unwrap());
        assert_eq!(b.len(), 2);
        assert!(b.contains(&v(&[2, 0, 2])).unwrap());
        assert!(!b.contains(&v(&[0, 0, 1])).unwrap());
        assert_eq!(b.to_matrix().rank(), 2);
    }

    #[test]
    fn products_and_stacking() {
        let a = DenseMatrix::from_i64s(q(), &[&[1, 2], &[3, 4]]);
        let b = DenseMatrix::from_i64s(q(), &[&[0, 1], &[1, 0]]);
        assert_eq!(
            a.mul(&b).unwrap(),
            DenseMatrix::from_i64s(q(), &[&[2, 1], &[4, 3]])
        );
        assert_eq!(a.pow(0).unwrap(), DenseMatrix::identity(q(), 2));
        assert_eq!(b.pow(3).unwrap(), b);
        assert_eq!(a.vstack(&b).unwrap().rows(), 4);
        assert_eq!(
            a.hstack(&b).unwrap(),
            DenseMatrix::from_i64s(q(), &[&[1, 2, 0, 1], &[3, 4, 1, 0]])
        );
        assert_eq!(a.transpose().transpose(), a);
        assert!(matches!(
            a.mul(&DenseMatrix::zeros(q(), 3, 1)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
