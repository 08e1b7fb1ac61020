//! Small dense/sparse helpers shared by the assembly and diagnostics code.
//!
//! The coupled systems end up dense because of the boundary blocks, so the
//! interior forms only need accumulation, matvec and scatter-into-dense.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::C64;

/// Real sparse matrix in compressed row form, built by COO accumulation.
#[derive(Debug, Clone)]
pub struct SparseReal {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

/// COO builder for [`SparseReal`].
pub struct SparseBuilder {
    nrows: usize,
    ncols: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl SparseBuilder {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            entries: Vec::new(),
        }
    }

    pub fn add(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(row < self.nrows && col < self.ncols);
        if value != 0.0 {
            self.entries.push((row, col, value));
        }
    }

    pub fn build(mut self) -> SparseReal {
        self.entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(self.entries.len());
        for &(r, c, v) in &self.entries {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        let mut row_ptr = vec![0usize; self.nrows + 1];
        let mut col_idx = Vec::with_capacity(merged.len());
        let mut values = Vec::with_capacity(merged.len());
        for (r, c, v) in merged {
            col_idx.push(c);
            values.push(v);
            row_ptr[r + 1] += 1;
        }
        for r in 0..self.nrows {
            row_ptr[r + 1] += row_ptr[r];
        }
        SparseReal {
            nrows: self.nrows,
            ncols: self.ncols,
            row_ptr,
            col_idx,
            values,
        }
    }
}

impl SparseReal {
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.ncols);
        let mut y = vec![Complex::new(0.0, 0.0); self.nrows];
        for r in 0..self.nrows {
            let mut acc = Complex::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += x[self.col_idx[k]] * self.values[k];
            }
            y[r] = acc;
        }
        y
    }

    /// `x^H A y` for complex coefficient vectors over the real form.
    pub fn bilinear_form(&self, x: &[C64], y: &[C64]) -> C64 {
        assert_eq!(x.len(), self.nrows);
        let ay = self.matvec(y);
        x.iter().zip(ay.iter()).map(|(xi, ayi)| xi.conj() * ayi).sum()
    }

    /// `x^H A x`, returned as a real number (valid for symmetric real forms).
    pub fn quadratic_form(&self, x: &[C64]) -> f64 {
        self.bilinear_form(x, x).re
    }

    /// Adds `scale * A` into a dense complex block at the given offsets.
    pub fn add_into(&self, dense: &mut DMatrix<C64>, row_off: usize, col_off: usize, scale: C64) {
        for r in 0..self.nrows {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                dense[(row_off + r, col_off + self.col_idx[k])] += scale * self.values[k];
            }
        }
    }

    /// Transposed scatter: adds `scale * A^T` into a dense complex block.
    pub fn add_transpose_into(
        &self,
        dense: &mut DMatrix<C64>,
        row_off: usize,
        col_off: usize,
        scale: C64,
    ) {
        for r in 0..self.nrows {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                dense[(row_off + self.col_idx[k], col_off + r)] += scale * self.values[k];
            }
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.nrows, self.ncols);
        for r in 0..self.nrows {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                d[(r, self.col_idx[k])] += self.values[k];
            }
        }
        d
    }
}

/// Symmetric positive definite Gram matrix with dense Cholesky, used as a
/// norm and for Riesz-representative solves in the diagnostics.
pub struct Gram {
    chol: nalgebra::Cholesky<f64, nalgebra::Dyn>,
    matrix: DMatrix<f64>,
}

impl Gram {
    pub fn new(matrix: DMatrix<f64>) -> Option<Self> {
        let chol = nalgebra::Cholesky::new(matrix.clone())?;
        Some(Self { chol, matrix })
    }

    pub fn norm(&self, x: &[C64]) -> f64 {
        let n = self.matrix.nrows();
        assert_eq!(x.len(), n);
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (x[i].conj() * x[j]).re * self.matrix[(i, j)];
            }
        }
        acc.max(0.0).sqrt()
    }

    /// Dual norm `sqrt(d^H G^{-1} d)` via two triangular solves on the real
    /// and imaginary parts.
    pub fn dual_norm(&self, d: &[C64]) -> f64 {
        let n = self.matrix.nrows();
        assert_eq!(d.len(), n);
        let re = DVector::from_iterator(n, d.iter().map(|v| v.re));
        let im = DVector::from_iterator(n, d.iter().map(|v| v.im));
        let sre = self.chol.solve(&re);
        let sim = self.chol.solve(&im);
        (re.dot(&sre) + im.dot(&sim)).max(0.0).sqrt()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// Builds the fractional-power Gram `M^{1/2} U diag(lambda^t) U^T M^{1/2}` of
/// the pencil `(K + M, M)`, the interpolation-norm surrogate for fractional
/// Sobolev indices on a surface.
pub fn fractional_gram(stiffness: &DMatrix<f64>, mass: &DMatrix<f64>, power: f64) -> DMatrix<f64> {
    let n = mass.nrows();
    assert_eq!(stiffness.nrows(), n);
    // symmetric square root of the mass matrix
    let m_eig = nalgebra::SymmetricEigen::new(mass.clone());
    let mut m_half = DMatrix::zeros(n, n);
    let mut m_half_inv = DMatrix::zeros(n, n);
    for k in 0..n {
        let lam = m_eig.eigenvalues[k].max(1e-300);
        let v = m_eig.eigenvectors.column(k);
        let sq = lam.sqrt();
        for i in 0..n {
            for j in 0..n {
                m_half[(i, j)] += sq * v[i] * v[j];
                m_half_inv[(i, j)] += v[i] * v[j] / sq;
            }
        }
    }
    let a = &m_half_inv * (stiffness + mass) * &m_half_inv;
    let a_sym = (&a + a.transpose()) * 0.5;
    let eig = nalgebra::SymmetricEigen::new(a_sym);
    let mut frac = DMatrix::zeros(n, n);
    for k in 0..n {
        let lam = eig.eigenvalues[k].max(1e-300).powf(power);
        let v = eig.eigenvectors.column(k);
        for i in 0..n {
            for j in 0..n {
                frac[(i, j)] += lam * v[i] * v[j];
            }
        }
    }
    let g = &m_half * frac * &m_half;
    (&g + g.transpose()) * 0.5
}

/// Largest generalized singular value of `A : (X, Gx) -> (Y, Gy)` by power
/// iteration on `Gx^{-1} A^H Gy A`.
pub fn operator_norm(
    apply: &dyn Fn(&DVector<C64>) -> DVector<C64>,
    apply_adjoint: &dyn Fn(&DVector<C64>) -> DVector<C64>,
    gx: &Gram,
    gy: &Gram,
    dim: usize,
    iters: usize,
    seed: u64,
) -> f64 {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut x = DVector::from_iterator(
        dim,
        (0..dim).map(|_| Complex::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)),
    );
    let mut value = 0.0;
    for _ in 0..iters {
        let nx = gx.norm(x.as_slice());
        if nx == 0.0 {
            return 0.0;
        }
        x /= Complex::new(nx, 0.0);
        let y = apply(&x);
        value = gy.norm(y.as_slice());
        // Gy-weighted adjoint, then Riesz-lift back into X
        let gy_y = {
            let m = gy.matrix();
            let mut out = DVector::from_element(y.len(), Complex::new(0.0, 0.0));
            for i in 0..y.len() {
                let mut acc = Complex::new(0.0, 0.0);
                for j in 0..y.len() {
                    acc += y[j] * m[(i, j)];
                }
                out[i] = acc;
            }
            out
        };
        let w = apply_adjoint(&gy_y);
        // solve Gx x_next = w
        let re = DVector::from_iterator(dim, w.iter().map(|v| v.re));
        let im = DVector::from_iterator(dim, w.iter().map(|v| v.im));
        let gx_chol = nalgebra::Cholesky::new(gx.matrix().clone()).expect("Gram must be SPD");
        let sre = gx_chol.solve(&re);
        let sim = gx_chol.solve(&im);
        x = DVector::from_iterator(dim, (0..dim).map(|i| Complex::new(sre[i], sim[i])));
    }
    value
}

/// Least-squares fit of `y = a + b x`; returns `(a, b, r_squared)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let b = sxy / sxx;
    let a = my - b * mx;
    let r2 = if syy > 0.0 { (sxy * sxy) / (sxx * syy) } else { 1.0 };
    (a, b, r2)
}
