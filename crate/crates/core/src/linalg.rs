//! Dense linear algebra over any [`Real`]: LU with partial pivoting and a
//! power-iteration estimate of the 2-norm condition number.

use std::cmp::Ordering;

use crate::numerics::Real;

#[derive(Clone, Debug)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize, ctx: T::Ctx) -> Self {
        DenseMatrix { rows, cols, data: vec![T::zero(ctx); rows * cols] }
    }

    pub fn identity(n: usize, ctx: T::Ctx) -> Self {
        let mut m = Self::zeros(n, n, ctx);
        for i in 0..n {
            m.set(i, i, T::one(ctx));
        }
        m
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        DenseMatrix { rows: r, cols: c, data: rows.iter().flatten().cloned().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_f64(&self) -> DenseMatrix<f64> {
        DenseMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(Real::to_f64).collect() }
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                dot(row, x)
            })
            .collect()
    }

    pub fn matvec_transpose(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.rows);
        let ctx = self.data.first().map(Real::ctx);
        let Some(ctx) = ctx else { return Vec::new() };
        let mut out = vec![T::zero(ctx); self.cols];
        for (i, xi) in x.iter().enumerate() {
            for (j, o) in out.iter_mut().enumerate() {
                *o = o.add(&self.get(i, j).mul(xi));
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j).sub(self.get(j, i)).is_zero()))
    }

    /// LU factorization with partial pivoting. `None` when an exactly zero
    /// pivot shows the matrix is singular in working precision.
    pub fn lu(&self) -> Option<Lu<T>> {
        assert_eq!(self.rows, self.cols, "LU needs a square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[i * n + k].cmp_abs(&a[j * n + k]).then(Ordering::Greater))
                .expect("non-empty pivot range");
            if a[p * n + k].is_zero() {
                return None;
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = a[k * n + k].clone();
            for i in (k + 1)..n {
                let l = a[i * n + k].div(&pivot);
                if l.is_zero() {
                    a[i * n + k] = l;
                    continue;
                }
                for j in (k + 1)..n {
                    let v = a[i * n + j].sub(&l.mul(&a[k * n + j]));
                    a[i * n + j] = v;
                }
                a[i * n + k] = l;
            }
        }
        Some(Lu { n, lu: a, perm })
    }
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    let mut it = a.iter().zip(b);
    let Some((x, y)) = it.next() else {
        panic!("dot of empty vectors");
    };
    it.fold(x.mul(y), |acc, (x, y)| acc.add(&x.mul(y)))
}

pub fn norm2<T: Real>(x: &[T]) -> T {
    dot(x, x).sqrt()
}

/// Packed LU factors, `P A = L U` with unit lower `L`.
#[derive(Clone, Debug)]
pub struct Lu<T> {
    n: usize,
    lu: Vec<T>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p].clone()).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] = x[i].sub(&self.lu[i * n + j].mul(&x[j]));
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                x[i] = x[i].sub(&self.lu[i * n + j].mul(&x[j]));
            }
            x[i] = x[i].div(&self.lu[i * n + i]);
        }
        x
    }

    /// Solves `Aᵀ x = b`.
    pub fn solve_transpose(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        assert_eq!(b.len(), n);
        // Aᵀ = Uᵀ Lᵀ P, so solve Uᵀ y = b, Lᵀ z = y, x = Pᵀ z.
        let mut y: Vec<T> = b.to_vec();
        for i in 0..n {
            for j in 0..i {
                y[i] = y[i].sub(&self.lu[j * n + i].mul(&y[j]));
            }
            y[i] = y[i].div(&self.lu[i * n + i]);
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                y[i] = y[i].sub(&self.lu[j * n + i].mul(&y[j]));
            }
        }
        let mut x = y.clone();
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = y[k].clone();
        }
        x
    }
}

/// Deterministic, well-spread start vector for the power iterations.
fn start_vector<T: Real>(n: usize, ctx: T::Ctx) -> Vec<T> {
    (0..n).map(|i| T::from_f64(1.0 + 0.5 * ((i as f64) * 1.618_033_988_75).sin(), ctx)).collect()
}

fn normalize<T: Real>(v: &mut [T]) -> f64 {
    let nrm = norm2(v);
    let out = nrm.to_f64();
    if !nrm.is_zero() {
        for x in v.iter_mut() {
            *x = x.div(&nrm);
        }
    }
    out
}

/// Power iteration for the largest singular value of the operator `apply`
/// (given also its adjoint). Returns a lower bound that converges from below.
fn largest_singular<T: Real>(
    n: usize,
    ctx: T::Ctx,
    apply: impl Fn(&[T]) -> Vec<T>,
    adjoint: impl Fn(&[T]) -> Vec<T>,
) -> f64 {
    let mut v = start_vector::<T>(n, ctx);
    normalize(&mut v);
    let mut sigma = 0.0;
    for _ in 0..200 {
        let w = apply(&v);
        let s = norm2(&w).to_f64();
        let mut u = adjoint(&w);
        normalize(&mut u);
        v = u;
        if !s.is_finite() {
            return f64::INFINITY;
        }
        let done = (s - sigma).abs() <= 1e-6 * s;
        sigma = s;
        if done {
            break;
        }
    }
    sigma
}

/// 2-norm condition estimate `σ_max / σ_min`. Both extreme singular values
/// come from power iterations (the smallest through repeated LU solves), so
/// the estimate is a lower bound that is typically within a few percent.
/// Singular matrices give `+∞`.
pub fn condition_estimate<T: Real>(m: &DenseMatrix<T>) -> f64 {
    assert_eq!(m.rows(), m.cols(), "condition estimate needs a square matrix");
    let n = m.rows();
    if n == 0 {
        return 1.0;
    }
    let ctx = m.get(0, 0).ctx();
    let Some(lu) = m.lu() else {
        return f64::INFINITY;
    };
    let smax = largest_singular::<T>(n, ctx, |x| m.matvec(x), |x| m.matvec_transpose(x));
    let inv_norm = largest_singular::<T>(n, ctx, |x| lu.solve(x), |x| lu.solve_transpose(x));
    if smax == 0.0 {
        return f64::INFINITY;
    }
    smax * inv_norm
}

/// Numerical rank by Gaussian elimination with complete pivoting.
pub fn numerical_rank(m: &DenseMatrix<f64>, rel_tol: f64) -> usize {
    let (r, c) = (m.rows(), m.cols());
    let mut a: Vec<f64> = (0..r * c).map(|k| *m.get(k / c, k % c)).collect();
    let scale = a.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    if scale == 0.0 {
        return 0;
    }
    let mut rank = 0;
    let mut row_used = vec![false; r];
    let mut col_used = vec![false; c];
    for _ in 0..r.min(c) {
        let mut best = (0, 0, 0.0f64);
        for i in (0..r).filter(|&i| !row_used[i]) {
            for j in (0..c).filter(|&j| !col_used[j]) {
                if a[i * c + j].abs() > best.2 {
                    best = (i, j, a[i * c + j].abs());
                }
            }
        }
        if best.2 <= rel_tol * scale {
            break;
        }
        let (pi, pj, _) = best;
        row_used[pi] = true;
        col_used[pj] = true;
        rank += 1;
        let pivot = a[pi * c + pj];
        for i in (0..r).filter(|&i| !row_used[i]) {
            let l = a[i * c + pj] / pivot;
            for j in 0..c {
                a[i * c + j] -= l * a[pi * c + j];
            }
        }
    }
    rank
}
