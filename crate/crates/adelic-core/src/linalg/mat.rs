use crate::ring::{CoreRing, Elem};
use serde::ser::SerializeSeq;
use serde::Serialize;
use std::fmt;

/// Dense exact matrix over a core ring, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub core: CoreRing,
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Elem>,
}

impl Mat {
    pub fn zero(core: &CoreRing, rows: usize, cols: usize) -> Self {
        Mat {
            core: core.clone(),
            rows,
            cols,
            entries: vec![core.zero(); rows * cols],
        }
    }

    pub fn identity(core: &CoreRing, n: usize) -> Self {
        let mut m = Mat::zero(core, n, n);
        for i in 0..n {
            m.set(i, i, core.one());
        }
        m
    }

    pub fn scalar_diag(core: &CoreRing, n: usize, e: &Elem) -> Self {
        let mut m = Mat::zero(core, n, n);
        for i in 0..n {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn from_rows(core: &CoreRing, rows: Vec<Vec<Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let entries = rows.into_iter().flatten().collect();
        Mat {
            core: core.clone(),
            rows: r,
            cols: c,
            entries,
        }
    }

    pub fn from_fn(
        core: &CoreRing,
        rows: usize,
        cols: usize,
        f: impl Fn(usize, usize) -> Elem,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Mat {
            core: core.clone(),
            rows,
            cols,
            entries,
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &Elem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: Elem) {
        self.entries[i * self.cols + j] = e;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.core.is_unit(self.at(i, j))
                            && self.at(i, j) == &self.core.one()
                    } else {
                        self.at(i, j).is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(&self.core, self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn neg(&self) -> Mat {
        Mat {
            core: self.core.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.neg()).collect(),
        }
    }

    pub fn scale(&self, c: &Elem) -> Mat {
        Mat {
            core: self.core.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.mul(c)).collect(),
        }
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            core: self.core.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        Mat::from_fn(&self.core, self.rows, other.cols, |i, j| {
            let mut acc = self.core.zero();
            for k in 0..self.cols {
                acc = acc.add(&self.at(i, k).mul(other.at(k, j)));
            }
            acc
        })
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &Mat) -> Mat {
        let mut m = Mat::zero(&self.core, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.at(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.at(i, j).clone());
            }
        }
        m
    }

    /// Horizontal stack [self | other].
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        Mat::from_fn(&self.core, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                other.at(i, j - self.cols).clone()
            }
        })
    }

    /// Vertical stack [self; other].
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        Mat::from_fn(&self.core, self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.at(i, j).clone()
            } else {
                other.at(i - self.rows, j).clone()
            }
        })
    }

    /// Kronecker product.
    pub fn kronecker(&self, other: &Mat) -> Mat {
        Mat::from_fn(
            &self.core,
            self.rows * other.rows,
            self.cols * other.cols,
            |i, j| {
                let (a, b) = (i / other.rows, i % other.rows);
                let (c, d) = (j / other.cols, j % other.cols);
                self.at(a, c).mul(other.at(b, d))
            },
        )
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Mat {
        Mat::from_fn(&self.core, rows.len(), cols.len(), |i, j| {
            self.at(rows[i], cols[j]).clone()
        })
    }

    /// Reinterpret the matrix over a further-localized core.
    pub fn base_change(&self, to: &CoreRing) -> Option<Mat> {
        if &self.core == to {
            return Some(self.clone());
        }
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(self.core.base_change(e, to)?);
        }
        Some(Mat {
            core: to.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] += c * row[b]
    pub fn add_row_multiple(&mut self, a: usize, b: usize, c: &Elem) {
        for j in 0..self.cols {
            let v = self.at(a, j).add(&self.at(b, j).mul(c));
            self.set(a, j, v);
        }
    }

    /// col[a] += c * col[b]
    pub fn add_col_multiple(&mut self, a: usize, b: usize, c: &Elem) {
        for i in 0..self.rows {
            let v = self.at(i, a).add(&self.at(i, b).mul(c));
            self.set(i, a, v);
        }
    }

    pub fn scale_row(&mut self, a: usize, c: &Elem) {
        for j in 0..self.cols {
            let v = self.at(a, j).mul(c);
            self.set(a, j, v);
        }
    }

    pub fn scale_col(&mut self, a: usize, c: &Elem) {
        for i in 0..self.rows {
            let v = self.at(i, a).mul(c);
            self.set(i, a, v);
        }
    }

    /// Left-multiply rows a,b by the 2x2 block [[p,q],[r,s]].
    pub fn row_block_op(&mut self, a: usize, b: usize, p: &Elem, q: &Elem, r: &Elem, s: &Elem) {
        for j in 0..self.cols {
            let va = self.at(a, j).clone();
            let vb = self.at(b, j).clone();
            self.set(a, j, p.mul(&va).add(&q.mul(&vb)));
            self.set(b, j, r.mul(&va).add(&s.mul(&vb)));
        }
    }

    /// Right-multiply cols a,b by the 2x2 block [[p,r],[q,s]].
    pub fn col_block_op(&mut self, a: usize, b: usize, p: &Elem, q: &Elem, r: &Elem, s: &Elem) {
        for i in 0..self.rows {
            let va = self.at(i, a).clone();
            let vb = self.at(i, b).clone();
            self.set(i, a, p.mul(&va).add(&q.mul(&vb)));
            self.set(i, b, r.mul(&va).add(&s.mul(&vb)));
        }
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl Serialize for Mat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}
