//! Small dense complex matrices and the matrix exponential.

use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use crate::scalar::{lit, Real, C};

/// Square, row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T: Real> {
    n: usize,
    data: Vec<C<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![C::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = C::one();
        }
        m
    }

    pub fn from_diag(d: &[C<T>]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn fill_zero(&mut self) {
        self.data.iter_mut().for_each(|x| *x = C::zero());
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.n);
        self.matmul_into(other, &mut out);
        out
    }

    pub fn matmul_into(&self, other: &Self, out: &mut Self) {
        let n = self.n;
        assert!(other.n == n && out.n == n);
        out.fill_zero();
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
    }

    /// `out = self · x`.
    pub fn mul_vec_into(&self, x: &[C<T>], out: &mut [C<T>]) {
        let n = self.n;
        for (i, o) in out.iter_mut().enumerate().take(n) {
            let row = &self.data[i * n..(i + 1) * n];
            let mut acc = C::zero();
            for (&a, &b) in row.iter().zip(x) {
                acc += a * b;
            }
            *o = acc;
        }
    }

    pub fn mul_vec(&self, x: &[C<T>]) -> Vec<C<T>> {
        let mut out = vec![C::zero(); self.n];
        self.mul_vec_into(x, &mut out);
        out
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> T {
        let n = self.n;
        (0..n)
            .map(|j| (0..n).map(|i| self.data[i * n + j].norm()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// `max |H − H†|` over all entries.
    pub fn hermiticity_defect(&self) -> T {
        let n = self.n;
        let mut worst = T::zero();
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn trace(&self) -> C<T> {
        (0..self.n).map(|i| self[(i, i)]).fold(C::zero(), |a, b| a + b)
    }

    /// Matrix exponential by scaling and squaring of a truncated Taylor series.
    pub fn expm(&self) -> Self {
        let n = self.n;
        let norm = self.norm1();
        let half: T = lit(0.5);
        let mut squarings = 0i32;
        if norm > half {
            squarings = (norm / half).log2().ceil().to_i32().unwrap_or(0).max(0);
        }
        let a = self.scale(C::new(T::one() / lit::<T>(2.0).powi(squarings), T::zero()));

        let mut result = Self::identity(n);
        let mut term = Self::identity(n);
        let mut tmp = Self::zeros(n);
        for k in 1..=40 {
            term.matmul_into(&a, &mut tmp);
            let inv_k = C::new(T::one() / lit(k as f64), T::zero());
            for (t, &x) in term.data.iter_mut().zip(&tmp.data) {
                *t = x * inv_k;
            }
            for (r, &t) in result.data.iter_mut().zip(&term.data) {
                *r += t;
            }
            if term.norm1() <= T::epsilon() * lit(1e-2) {
                break;
            }
        }
        for _ in 0..squarings {
            result.matmul_into(&result.clone(), &mut tmp);
            std::mem::swap(&mut result, &mut tmp);
        }
        result
    }
}

impl<T: Real> Index<(usize, usize)> for CMatrix<T> {
    type Output = C<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.n + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.n + j]
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm<T: Real>(x: &[C<T>]) -> T {
    x.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// `max_i |x_i − y_i|`.
pub fn vec_max_diff<T: Real>(x: &[C<T>], y: &[C<T>]) -> T {
    x.iter().zip(y).map(|(&a, &b)| (a - b).norm()).fold(T::zero(), T::max)
}
