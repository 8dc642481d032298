use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, RmtError};

/// Scalar field of a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    pub fn as_str(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }
}

impl std::str::FromStr for Field {
    type Err = RmtError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(Field::Real),
            "complex" => Ok(Field::Complex),
            other => Err(RmtError::Parse(format!("unknown field `{other}`"))),
        }
    }
}

/// Row-major entry storage. Complex entries are `(re, im)` pairs in memory.
#[derive(Debug, Clone, PartialEq)]
pub enum Entries {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

/// Dense `rows × cols` matrix over ℝ or ℂ, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Entries,
}

impl DenseMatrix {
    pub fn from_real(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        check_shape(rows, cols, data.len())?;
        Ok(Self {
            rows,
            cols,
            entries: Entries::Real(data),
        })
    }

    pub fn from_complex(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        check_shape(rows, cols, data.len())?;
        Ok(Self {
            rows,
            cols,
            entries: Entries::Complex(data),
        })
    }

    pub fn zeros(rows: usize, cols: usize, field: Field) -> Self {
        let entries = match field {
            Field::Real => Entries::Real(vec![0.0; rows * cols]),
            Field::Complex => Entries::Complex(vec![Complex64::new(0.0, 0.0); rows * cols]),
        };
        Self { rows, cols, entries }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        let mut m = Self::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut data = vec![0.0; n * n];
        for (i, v) in values.iter().enumerate() {
            data[i * n + i] = *v;
        }
        Self {
            rows: n,
            cols: n,
            entries: Entries::Real(data),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn field(&self) -> Field {
        match self.entries {
            Entries::Real(_) => Field::Real,
            Entries::Complex(_) => Field::Complex,
        }
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    pub fn into_entries(self) -> Entries {
        self.entries
    }

    pub fn as_real(&self) -> Option<&[f64]> {
        match &self.entries {
            Entries::Real(v) => Some(v),
            Entries::Complex(_) => None,
        }
    }

    pub fn as_complex(&self) -> Option<&[Complex64]> {
        match &self.entries {
            Entries::Complex(v) => Some(v),
            Entries::Real(_) => None,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let k = i * self.cols + j;
        match &self.entries {
            Entries::Real(v) => Complex64::new(v[k], 0.0),
            Entries::Complex(v) => v[k],
        }
    }

    /// Writes `value`; for real storage the imaginary part is dropped.
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        let k = i * self.cols + j;
        match &mut self.entries {
            Entries::Real(v) => v[k] = value.re,
            Entries::Complex(v) => v[k] = value,
        }
    }

    /// Entries promoted to complex, row-major.
    pub fn to_complex_vec(&self) -> Vec<Complex64> {
        match &self.entries {
            Entries::Real(v) => v.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            Entries::Complex(v) => v.clone(),
        }
    }

    pub fn to_complex(&self) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: Entries::Complex(self.to_complex_vec()),
        }
    }

    pub fn max_abs(&self) -> f64 {
        match &self.entries {
            Entries::Real(v) => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            Entries::Complex(v) => v.iter().fold(0.0, |m, z| m.max(z.norm())),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        match &self.entries {
            Entries::Real(v) => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            Entries::Complex(v) => v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn scaled(&self, s: f64) -> DenseMatrix {
        let entries = match &self.entries {
            Entries::Real(v) => Entries::Real(v.iter().map(|x| x * s).collect()),
            Entries::Complex(v) => Entries::Complex(v.iter().map(|z| z * s).collect()),
        };
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn transpose(&self) -> DenseMatrix {
        let (r, c) = (self.rows, self.cols);
        let entries = match &self.entries {
            Entries::Real(v) => {
                Entries::Real((0..r * c).map(|k| v[(k % r) * c + k / r]).collect())
            }
            Entries::Complex(v) => {
                Entries::Complex((0..r * c).map(|k| v[(k % r) * c + k / r]).collect())
            }
        };
        DenseMatrix {
            rows: c,
            cols: r,
            entries,
        }
    }

    /// Conjugate transpose `M*`.
    pub fn adjoint(&self) -> DenseMatrix {
        let mut t = self.transpose();
        if let Entries::Complex(v) = &mut t.entries {
            for z in v.iter_mut() {
                *z = z.conj();
            }
        }
        t
    }

    /// `max |M − M*|` entrywise; `None` for non-square input.
    pub fn hermitian_defect(&self) -> Option<f64> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        Some(worst)
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        match self.hermitian_defect() {
            Some(d) => d <= rel_tol * self.max_abs(),
            None => false,
        }
    }

    /// Matrix product `self · rhs`.
    pub fn matmul(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != rhs.rows {
            return Err(RmtError::InvalidDimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let (m, k, n) = (self.rows, self.cols, rhs.cols);
        match (&self.entries, &rhs.entries) {
            (Entries::Real(a), Entries::Real(b)) => {
                let mut c = vec![0.0; m * n];
                crate::linalg::dgemm(m, k, n, 1.0, a, (k, 1), b, (n, 1), &mut c);
                DenseMatrix::from_real(m, n, c)
            }
            _ => {
                let a = self.to_complex_vec();
                let b = rhs.to_complex_vec();
                let mut c = vec![Complex64::new(0.0, 0.0); m * n];
                crate::linalg::zgemm(m, k, n, &a, (k, 1), &b, (n, 1), &mut c);
                DenseMatrix::from_complex(m, n, c)
            }
        }
    }

    /// `max |self − other|` entrywise.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(RmtError::InvalidDimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                worst = worst.max((self.get(i, j) - other.get(i, j)).norm());
            }
        }
        Ok(worst)
    }
}

fn check_shape(rows: usize, cols: usize, len: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(RmtError::InvalidDimension(format!(
            "matrix dimensions must be positive, got {rows}x{cols}"
        )));
    }
    if rows * cols != len {
        return Err(RmtError::InvalidDimension(format!(
            "{rows}x{cols} matrix needs {} entries, got {len}",
            rows * cols
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_is_checked() {
        assert!(DenseMatrix::from_real(2, 2, vec![1.0; 3]).is_err());
        assert!(DenseMatrix::from_real(0, 2, vec![]).is_err());
    }

    #[test]
    fn transpose_and_adjoint() {
        let m = DenseMatrix::from_complex(
            2,
            3,
            (0..6).map(|k| Complex64::new(k as f64, 1.0)).collect(),
        )
        .unwrap();
        let t = m.adjoint();
        assert_eq!(t.rows(), 3);
        assert_eq!(t.get(2, 1), Complex64::new(5.0, -1.0));
        assert_eq!(m.transpose().transpose(), m);
    }

    #[test]
    fn matmul_mixed_fields() {
        let a = DenseMatrix::from_real(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let b = DenseMatrix::from_complex(
            2,
            1,
            vec![Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)],
        )
        .unwrap();
        let c = a.matmul(&b).unwrap();
        assert_eq!(c.get(0, 0), Complex64::new(2.0, 1.0));
        assert_eq!(c.get(1, 0), Complex64::new(4.0, 3.0));
        let rr = a.matmul(&a).unwrap();
        assert_eq!(rr.as_real().unwrap(), &[7.0, 10.0, 15.0, 22.0]);
    }
}
