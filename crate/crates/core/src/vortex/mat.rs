//! Small dense complex matrices (at most 4×4), stored inline.

use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

pub type C = Complex64;

pub const MAX_DIM: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    d: [C; MAX_DIM * MAX_DIM],
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows <= MAX_DIM && cols <= MAX_DIM, "matrix {rows}x{cols} exceeds {MAX_DIM}x{MAX_DIM}");
        Mat { rows, cols, d: [C::new(0.0, 0.0); MAX_DIM * MAX_DIM] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, C::new(1.0, 0.0))
    }

    pub fn scalar(n: usize, c: C) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Conjugate transpose.
    pub fn adj(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Applies `f` to every in-shape entry of `self` paired with `other`.
    #[inline]
    fn zip_with(&mut self, other: &Mat, mut f: impl FnMut(&mut C, C)) {
        for i in 0..self.rows {
            let r = i * MAX_DIM;
            for j in r..r + self.cols {
                f(&mut self.d[j], other.d[j]);
            }
        }
    }

    /// `self += w · other` without forming the scaled copy.
    #[inline]
    pub fn axpy_re(&mut self, w: f64, other: &Mat) {
        debug_assert_eq!(self.shape(), other.shape());
        self.zip_with(other, |a, b| *a += b * w);
    }

    pub fn scale(&self, c: C) -> Self {
        let mut m = *self;
        m.entries_mut().for_each(|x| *x *= c);
        m
    }

    pub fn scale_re(&self, c: f64) -> Self {
        let mut m = *self;
        m.entries_mut().for_each(|x| *x *= c);
        m
    }

    pub fn trace(&self) -> C {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Frobenius norm squared.
    pub fn norm_sqr(&self) -> f64 {
        self.entries().map(|x| x.norm_sqr()).sum()
    }

    /// `Re tr(self† other)`.
    pub fn re_inner(&self, other: &Mat) -> f64 {
        debug_assert_eq!(self.shape(), other.shape());
        self.entries().zip(other.entries()).map(|(a, b)| a.re * b.re + a.im * b.im).sum()
    }

    /// `[self, other]`.
    pub fn comm(&self, other: &Mat) -> Self {
        *self * *other - *other * *self
    }

    /// `½(X − X†)`.
    pub fn anti_hermitian_part(&self) -> Self {
        (*self - self.adj()).scale_re(0.5)
    }

    /// Largest entrywise deviation from anti-Hermiticity.
    pub fn anti_hermitian_defect(&self) -> f64 {
        let s = *self + self.adj();
        s.d.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn entries(&self) -> impl Iterator<Item = &C> {
        let cols = self.cols;
        (0..self.rows).flat_map(move |i| self.d[i * MAX_DIM..i * MAX_DIM + cols].iter())
    }

    pub fn entries_mut(&mut self) -> impl Iterator<Item = &mut C> {
        let (rows, cols) = (self.rows, self.cols);
        self.d
            .chunks_mut(MAX_DIM)
            .take(rows)
            .flat_map(move |row| row[..cols].iter_mut())
    }
}

impl core::ops::Index<(usize, usize)> for Mat {
    type Output = C;
    fn index(&self, (i, j): (usize, usize)) -> &C {
        debug_assert!(i < self.rows && j < self.cols);
        &self.d[i * MAX_DIM + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.d[i * MAX_DIM + j]
    }
}

impl Add for Mat {
    type Output = Mat;
    fn add(mut self, rhs: Mat) -> Mat {
        self += rhs;
        self
    }
}

impl AddAssign for Mat {
    fn add_assign(&mut self, rhs: Mat) {
        debug_assert_eq!(self.shape(), rhs.shape());
        self.zip_with(&rhs, |a, b| *a += b);
    }
}

impl Sub for Mat {
    type Output = Mat;
    fn sub(mut self, rhs: Mat) -> Mat {
        self -= rhs;
        self
    }
}

impl SubAssign for Mat {
    fn sub_assign(&mut self, rhs: Mat) {
        debug_assert_eq!(self.shape(), rhs.shape());
        self.zip_with(&rhs, |a, b| *a -= b);
    }
}

impl Neg for Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        self.scale_re(-1.0)
    }
}

impl Mul for Mat {
    type Output = Mat;
    fn mul(self, rhs: Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.d[i * MAX_DIM + k];
                if a == C::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.d[i * MAX_DIM + j] += a * rhs.d[k * MAX_DIM + j];
                }
            }
        }
        out
    }
}
