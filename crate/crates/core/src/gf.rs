//! Dense matrices over a prime field GF(q).

use crate::error::{Error, Result};

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Multiplicative inverse of a nonzero `a` modulo prime `q` (extended Euclid).
pub fn inv(a: u32, q: u32) -> u32 {
    let (mut r0, mut r1) = (q as i64, (a % q) as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    debug_assert_eq!(r0, 1, "{a} has no inverse mod {q}");
    t0.rem_euclid(q as i64) as u32
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    q: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Mat {
    pub fn zeros(q: u32, rows: usize, cols: usize) -> Mat {
        Mat { q, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(q: u32, n: usize) -> Mat {
        let mut m = Mat::zeros(q, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows; entries are reduced mod q. An empty row list
    /// gives a 0×0 matrix, so callers that need `r×0` use [`Mat::zeros`].
    pub fn from_rows(q: u32, rows: &[Vec<u32>]) -> Result<Mat> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Mat::zeros(q, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!("row {} has {} entries, expected {cols}", i, row.len())));
            }
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v % q);
            }
        }
        Ok(m)
    }

    pub fn from_columns(q: u32, rows: usize, columns: &[Vec<u32>]) -> Mat {
        let mut m = Mat::zeros(q, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v % q);
            }
        }
        m
    }

    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.q;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.q, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Horizontal concatenation `[a | b | ...]`; all parts need `rows` rows.
    pub fn hcat(q: u32, rows: usize, parts: &[&Mat]) -> Result<Mat> {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Mat::zeros(q, rows, cols);
        let mut off = 0;
        for p in parts {
            if p.rows != rows {
                return Err(Error::Dimension(format!("block has {} rows, expected {rows}", p.rows)));
            }
            if p.q != q {
                return Err(Error::Dimension(format!("field mismatch: GF({}) vs GF({q})", p.q)));
            }
            for i in 0..rows {
                for j in 0..p.cols {
                    m.data[i * cols + off + j] = p.get(i, j);
                }
            }
            off += p.cols;
        }
        Ok(m)
    }

    /// Left product `self · other`.
    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let q = self.q as u64;
        let mut m = Mat::zeros(self.q, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0u64;
                for k in 0..self.cols {
                    acc = (acc + self.get(i, k) as u64 * other.get(k, j) as u64) % q;
                }
                m.set(i, j, acc as u32);
            }
        }
        Ok(m)
    }

    /// Reduced row echelon form, rank and pivot columns.
    pub fn rref(&self) -> (Mat, usize, Vec<usize>) {
        let mut m = self.clone();
        let q = self.q as u64;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c) != 0) else { continue };
            m.swap_rows(r, p);
            let s = inv(m.get(r, c), self.q) as u64;
            for j in c..m.cols {
                let v = m.get(r, j) as u64 * s % q;
                m.set(r, j, v as u32);
            }
            for i in 0..m.rows {
                let f = m.get(i, c) as u64;
                if i == r || f == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = (m.get(i, j) as u64 + (q - f) * m.get(r, j) as u64) % q;
                    m.set(i, j, v as u32);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, r, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        // eliminate on the shorter side
        if self.cols < self.rows {
            self.transpose().rref().1
        } else {
            self.rref().1
        }
    }

    /// True iff `v` lies in the column space of `self`.
    pub fn in_span(&self, v: &[u32]) -> Result<bool> {
        if v.len() != self.rows {
            return Err(Error::Dimension(format!("vector of length {} against {} rows", v.len(), self.rows)));
        }
        let col = Mat::from_columns(self.q, self.rows, &[v.to_vec()]);
        let both = Mat::hcat(self.q, self.rows, &[self, &col])?;
        Ok(both.rank() == self.rank())
    }

    /// True iff colspace(self) ⊆ colspace(other).
    pub fn contained_in(&self, other: &Mat) -> Result<bool> {
        let both = Mat::hcat(self.q, self.rows, &[other, self])?;
        Ok(both.rank() == other.rank())
    }
}

/// Standalone form of [`Mat::rref`].
pub fn rref(m: &Mat) -> (Mat, usize, Vec<usize>) {
    m.rref()
}

pub fn in_span(v: &[u32], basis: &Mat) -> Result<bool> {
    basis.in_span(v)
}

pub fn subspace_contained(a: &Mat, b: &Mat) -> Result<bool> {
    if a.rows != b.rows {
        return Err(Error::Dimension(format!("{} rows vs {} rows", a.rows, b.rows)));
    }
    a.contained_in(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(rows: &[&str]) -> Mat {
        let rows: Vec<Vec<u32>> = rows.iter().map(|r| r.bytes().map(|b| (b - b'0') as u32).collect()).collect();
        Mat::from_rows(2, &rows).unwrap()
    }

    #[test]
    fn inverses() {
        for q in [2u32, 3, 5, 7, 13] {
            for a in 1..q {
                assert_eq!(a as u64 * inv(a, q) as u64 % q as u64, 1);
            }
        }
    }

    #[test]
    fn identity_and_zero() {
        let i = Mat::identity(2, 3);
        let (r, k, p) = i.rref();
        assert_eq!((r, k, p), (i.clone(), 3, vec![0, 1, 2]));
        let z = Mat::zeros(2, 2, 4);
        assert_eq!(z.rref(), (z.clone(), 0, vec![]));
    }

    #[test]
    fn rref_over_gf3() {
        let m = Mat::from_rows(3, &[vec![2, 1, 0], vec![1, 2, 1]]).unwrap();
        let (r, k, p) = m.rref();
        assert_eq!(k, 2);
        assert_eq!(p, vec![0, 2]);
        assert_eq!(r.to_rows(), vec![vec![1, 2, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn span_basics() {
        let e = Mat::identity(2, 2);
        assert!(e.in_span(&[1, 1]).unwrap());
        let c = m2(&["0", "1"]);
        assert!(!c.in_span(&[1, 0]).unwrap());
        let empty = Mat::zeros(2, 2, 0);
        assert!(empty.in_span(&[0, 0]).unwrap());
        assert!(!empty.in_span(&[0, 1]).unwrap());
        assert!(e.in_span(&[1]).is_err());
    }

    #[test]
    fn containment() {
        let z = Mat::zeros(2, 3, 1);
        let c = m2(&["1", "0", "1"]);
        assert!(subspace_contained(&z, &c).unwrap());
        assert!(!subspace_contained(&Mat::identity(2, 3), &c).unwrap());
        assert!(subspace_contained(&Mat::identity(2, 2), &Mat::zeros(2, 3, 0)).is_err());
    }
}
