use super::{check_n, DenseMatrix, RngStream};
use crate::error::{Result, RmtError};
use crate::linalg;

/// `rows × cols` matrix of i.i.d. standard real Gaussians, drawn row-major.
pub fn sample_real_gaussian(rows: usize, cols: usize, rng: &mut RngStream) -> Result<DenseMatrix> {
    check_n(rows)?;
    check_n(cols)?;
    let data: Vec<f64> = (0..rows * cols).map(|_| rng.normal()).collect();
    DenseMatrix::from_real(rows, cols, data)
}

/// Normalized Wishart matrix `W = (1/n) X Xᵀ` with `X` of shape `p × n`.
///
/// Without a scale the columns of `X` are i.i.d. `N(0, I_p)`; with a scale
/// `Σ` they are `L·z` for the Cholesky factor `Σ = L Lᵀ`, i.e. `N(0, Σ)`.
pub fn sample_wishart(
    p: usize,
    n: usize,
    scale: Option<&DenseMatrix>,
    rng: &mut RngStream,
) -> Result<DenseMatrix> {
    check_n(p)?;
    check_n(n)?;
    let factor = match scale {
        Some(s) => Some(cholesky(s, p)?),
        None => None,
    };
    let z = sample_real_gaussian(p, n, rng)?;
    let x = match factor {
        Some(l) => {
            let mut x = vec![0.0; p * n];
            linalg::dgemm(p, p, n, 1.0, &l, (p, 1), z.as_real().expect("real"), (n, 1), &mut x);
            x
        }
        None => z.as_real().expect("real").to_vec(),
    };
    Ok(gram(&x, p, n))
}

/// `(1/n) X Xᵀ`, symmetrized exactly.
fn gram(x: &[f64], p: usize, n: usize) -> DenseMatrix {
    let mut w = vec![0.0; p * p];
    linalg::dgemm(p, n, p, 1.0 / n as f64, x, (n, 1), x, (1, n), &mut w);
    for i in 0..p {
        for j in i + 1..p {
            let v = 0.5 * (w[i * p + j] + w[j * p + i]);
            w[i * p + j] = v;
            w[j * p + i] = v;
        }
    }
    DenseMatrix::from_real(p, p, w).expect("shape")
}

/// Lower Cholesky factor (row-major) of a symmetric positive definite matrix.
fn cholesky(s: &DenseMatrix, p: usize) -> Result<Vec<f64>> {
    if s.rows() != p || s.cols() != p {
        return Err(RmtError::InvalidDimension(format!(
            "scale matrix must be {p}x{p}, got {}x{}",
            s.rows(),
            s.cols()
        )));
    }
    let a = s
        .as_real()
        .ok_or_else(|| RmtError::InvalidInput("scale matrix must be real".into()))?;
    if !s.is_hermitian(1e-12) {
        return Err(RmtError::InvalidInput("scale matrix must be symmetric".into()));
    }
    let mut l = vec![0.0; p * p];
    for j in 0..p {
        let mut d = a[j * p + j];
        for k in 0..j {
            d -= l[j * p + k] * l[j * p + k];
        }
        if !(d > 0.0) {
            return Err(RmtError::Decomposition {
                routine: "cholesky",
                pivot: j + 1,
                value: d,
            });
        }
        let d = d.sqrt();
        l[j * p + j] = d;
        for i in j + 1..p {
            let mut v = a[i * p + j];
            for k in 0..j {
                v -= l[i * p + k] * l[j * p + k];
            }
            l[i * p + j] = v / d;
        }
    }
    Ok(l)
}

/// `A = (X Xᵀ − n I) / (2√(np))` for a `p × n` matrix `X`.
pub fn bai_yin_normalize(x: &DenseMatrix, p: usize, n: usize) -> Result<DenseMatrix> {
    if x.rows() != p || x.cols() != n {
        return Err(RmtError::InvalidDimension(format!(
            "expected a {p}x{n} matrix, got {}x{}",
            x.rows(),
            x.cols()
        )));
    }
    let data = x
        .as_real()
        .ok_or_else(|| RmtError::InvalidInput("Bai–Yin normalization expects a real matrix".into()))?;
    let mut a = gram(data, p, n).scaled(n as f64).as_real().expect("real").to_vec();
    let c = 1.0 / (2.0 * ((n as f64) * (p as f64)).sqrt());
    for i in 0..p {
        a[i * p + i] -= n as f64;
    }
    for v in a.iter_mut() {
        *v *= c;
    }
    DenseMatrix::from_real(p, p, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::eigvals_hermitian;

    #[test]
    fn rank_deficient_when_p_exceeds_n() {
        let mut rng = RngStream::new(1, 0);
        let w = sample_wishart(5, 3, None, &mut rng).unwrap();
        let norm = w.max_abs();
        let s = eigvals_hermitian(&w.scaled(1.0 / norm)).unwrap();
        let tiny = s.real_values().unwrap().iter().filter(|l| l.abs() < 1e-10).count();
        assert_eq!(tiny, 2);
    }

    #[test]
    fn one_by_one_concentrates() {
        let mut rng = RngStream::new(2, 0);
        let w = sample_wishart(1, 10_000, None, &mut rng).unwrap();
        let v = w.get(0, 0).re;
        assert!((0.95..=1.05).contains(&v), "{v}");
    }

    #[test]
    fn identity_scale_gives_psd_output() {
        let mut rng = RngStream::new(3, 0);
        let w = sample_wishart(2, 2, Some(&DenseMatrix::identity(2, crate::ensembles::Field::Real)), &mut rng).unwrap();
        assert_eq!(w.hermitian_defect(), Some(0.0));
        let s = eigvals_hermitian(&w).unwrap();
        assert!(s.real_values().unwrap().iter().all(|&l| l >= -1e-14));
    }

    #[test]
    fn non_spd_scale_names_pivot() {
        let mut rng = RngStream::new(3, 0);
        let bad = DenseMatrix::from_real(2, 2, vec![1.0, 2.0, 2.0, 1.0]).unwrap();
        match sample_wishart(2, 4, Some(&bad), &mut rng) {
            Err(RmtError::Decomposition { pivot, .. }) => assert_eq!(pivot, 2),
            other => panic!("expected decomposition error, got {other:?}"),
        }
    }

    #[test]
    fn scale_sets_covariance() {
        // average of many W estimates Σ
        let sigma = DenseMatrix::from_real(2, 2, vec![2.0, 0.6, 0.6, 1.0]).unwrap();
        let trials = 400;
        let mut acc = [0.0; 4];
        for t in 0..trials {
            let mut rng = RngStream::new(8, t);
            let w = sample_wishart(2, 50, Some(&sigma), &mut rng).unwrap();
            for (a, v) in acc.iter_mut().zip(w.as_real().unwrap()) {
                *a += v / trials as f64;
            }
        }
        for (a, s) in acc.iter().zip(sigma.as_real().unwrap()) {
            assert!((a - s).abs() < 0.05, "{acc:?}");
        }
    }

    #[test]
    fn bai_yin_of_zero_matrix() {
        let x = DenseMatrix::from_real(3, 4, vec![0.0; 12]).unwrap();
        let a = bai_yin_normalize(&x, 3, 4).unwrap();
        let expect = -1.0 / 3f64.sqrt();
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { expect } else { 0.0 };
                assert!((a.get(i, j).re - e).abs() < 1e-15);
            }
        }
        assert!(bai_yin_normalize(&x, 4, 3).is_err());
    }

    #[test]
    fn bai_yin_is_centered() {
        let (p, n, trials) = (5usize, 50usize, 10_000u64);
        let mut sum = vec![0.0; p * p];
        let mut sq = vec![0.0; p * p];
        for t in 0..trials {
            let mut rng = RngStream::new(13, t);
            let x = sample_real_gaussian(p, n, &mut rng).unwrap();
            let a = bai_yin_normalize(&x, p, n).unwrap();
            for (k, v) in a.as_real().unwrap().iter().enumerate() {
                sum[k] += v;
                sq[k] += v * v;
            }
        }
        for k in 0..p * p {
            let mean = sum[k] / trials as f64;
            let var = sq[k] / trials as f64 - mean * mean;
            let se = (var / trials as f64).sqrt();
            assert!(mean.abs() <= 3.0 * se + 1e-12, "entry {k}: mean {mean} se {se}");
        }
    }
}
