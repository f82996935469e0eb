//! Small dense kernels: Hermitian eigenvalues by cyclic Jacobi, and LU
//! determinants. Matrices here are at most a few dozen rows (one per
//! secondary user), so simplicity and bit-reproducibility win over blocking.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative off-diagonal Frobenius norm at which Jacobi stops.
pub const JACOBI_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 64;

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn frobenius(&self) -> (f64, f64) {
        let mut total = 0.0;
        let mut off = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self[(i, j)].norm_sqr();
                total += v;
                if i != j {
                    off += v;
                }
            }
        }
        (total.sqrt(), off.sqrt())
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Eigenvalues of a Hermitian matrix, sorted descending.
///
/// Cyclic Jacobi with a fixed row-major pivot order, so identical input gives
/// bit-identical output. Only the lower triangle's conjugate symmetry is
/// assumed; the matrix is not checked for it.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Result<Vec<f64>> {
    let n = a.dim();
    let mut m = a.clone();
    for i in 0..n {
        m[(i, i)].im = 0.0;
    }
    let (norm, _) = m.frobenius();
    if !norm.is_finite() {
        return Err(Error::Numerical("non-finite entry in Hermitian eigenproblem".into()));
    }
    if norm == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let mut sweeps = 0;
    loop {
        let (_, off) = m.frobenius();
        if off <= JACOBI_TOL * norm {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::Numerical(format!(
                "Jacobi did not converge in {MAX_SWEEPS} sweeps: off-diagonal {off:e} vs norm {norm:e} (n = {n})"
            )));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, p, q);
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    Ok(eig)
}

fn rotate(m: &mut CMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // Phase-strip a_pq, then a real symmetric rotation zeroes it.
    let phase = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = m.dim();
    // A ← A·J with J = [[c, s], [-s·e^{-iφ}, c·e^{-iφ}]] on (p, q)
    let pc = phase.conj();
    for k in 0..n {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * c - akq * pc * s;
        m[(k, q)] = akp * s + akq * pc * c;
    }
    // A ← Jᴴ·A
    for k in 0..n {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = apk * c - aqk * phase * s;
        m[(q, k)] = apk * s + aqk * phase * c;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)].im = 0.0;
    m[(q, q)].im = 0.0;
}

/// Eigenvalues of a real symmetric matrix given row-major, sorted descending.
pub fn symmetric_eigenvalues(n: usize, a: &[f64]) -> Result<Vec<f64>> {
    if a.len() != n * n {
        return Err(Error::Dimension(format!("expected {} entries, got {}", n * n, a.len())));
    }
    let mut m = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = Complex64::new(a[i * n + j], 0.0);
        }
    }
    hermitian_eigenvalues(&m)
}

/// Determinant of a real square matrix (row-major) by LU with partial pivoting.
pub fn determinant(n: usize, a: &[f64]) -> Result<f64> {
    if a.len() != n * n {
        return Err(Error::Dimension(format!("expected {} entries, got {}", n * n, a.len())));
    }
    let mut lu = a.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| lu[x * n + col].abs().total_cmp(&lu[y * n + col].abs()))
            .unwrap_or(col);
        let pv = lu[pivot * n + col];
        if pv == 0.0 {
            return Ok(0.0);
        }
        if pivot != col {
            for k in 0..n {
                lu.swap(pivot * n + k, col * n + k);
            }
            det = -det;
        }
        det *= pv;
        for r in col + 1..n {
            let f = lu[r * n + col] / pv;
            if f != 0.0 {
                for k in col + 1..n {
                    lu[r * n + k] -= f * lu[col * n + k];
                }
            }
        }
    }
    Ok(det)
}
