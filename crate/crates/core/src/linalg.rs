//! Dense linear algebra over `K` with valuation-maximal pivoting.

use crate::element::Element;
use crate::error::{Error, Result};
use crate::tower::Tower;
use crate::valuation::Valuation;

#[derive(Debug, Clone)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Element>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<Element>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from a row-major list.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Element>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(tower: Tower, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![Element::zero(tower); rows * cols],
        }
    }

    pub fn identity(tower: Tower, n: usize) -> Matrix {
        let mut m = Self::zeros(tower, n, n);
        for i in 0..n {
            m.set(i, i, Element::one(tower));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Element {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Element) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row_major(&self) -> &[Element] {
        &self.data
    }

    pub fn mul_vec(&self, v: &[Element]) -> Result<Vec<Element>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        (0..self.rows)
            .map(|i| {
                let mut acc = self.get(i, 0).checked_mul(&v[0])?;
                for j in 1..self.cols {
                    acc = acc.checked_add(&self.get(i, j).checked_mul(&v[j])?)?;
                }
                Ok(acc)
            })
            .collect()
    }

    /// `[self | other]`.
    pub fn hconcat(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch("row counts differ".into()));
        }
        let rows = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).clone())
                    .chain((0..other.cols).map(|j| other.get(i, j).clone()))
                    .collect()
            })
            .collect();
        Matrix::from_rows(rows)
    }

    /// `[self; other]`.
    pub fn vconcat(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch("column counts differ".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Gaussian elimination choosing, in each column, the pivot of smallest
    /// valuation. Returns the solution of `self · x = rhs` (if a right-hand side
    /// is given) and the valuation of the determinant.
    fn eliminate(&self, rhs: Option<&[Element]>) -> Result<(Vec<Element>, Valuation)> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch("square matrix required".into()));
        }
        let n = self.rows;
        let mut a: Vec<Vec<Element>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut b: Vec<Element> = match rhs {
            Some(r) if r.len() == n => r.to_vec(),
            Some(r) => {
                return Err(Error::ShapeMismatch(format!(
                    "right-hand side of length {} for {n} equations",
                    r.len()
                )))
            }
            None => Vec::new(),
        };
        let mut det = Valuation::ZERO;
        for col in 0..n {
            let (piv, v) = (col..n)
                .map(|r| (r, a[r][col].valuation()))
                .min_by(|x, y| x.1.cmp(&y.1))
                .expect("nonempty range");
            if v.is_infinite() {
                return Err(Error::SingularConfig);
            }
            det = det + v;
            a.swap(col, piv);
            if !b.is_empty() {
                b.swap(col, piv);
            }
            let inv = a[col][col].inv()?;
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let factor = &a[r][col] * &inv;
                for c in col..n {
                    let t = &factor * &a[col][c];
                    a[r][c] = &a[r][c] - &t;
                }
                if !b.is_empty() {
                    let t = &factor * &b[col];
                    b[r] = &b[r] - &t;
                }
            }
        }
        if b.is_empty() {
            return Ok((b, det));
        }
        let mut x: Vec<Element> = b.clone();
        for i in (0..n).rev() {
            let mut acc = b[i].clone();
            for j in i + 1..n {
                acc = &acc - &(&a[i][j] * &x[j]);
            }
            x[i] = acc.checked_div(&a[i][i])?;
        }
        Ok((x, det))
    }

    pub fn determinant_valuation(&self) -> Result<Valuation> {
        self.eliminate(None).map(|(_, d)| d)
    }

    /// Solves `self · x = rhs`.
    pub fn solve(&self, rhs: &[Element]) -> Result<Vec<Element>> {
        self.eliminate(Some(rhs)).map(|(x, _)| x)
    }
}
