//! Band-limited Fourier discretization of a periodic square.
//!
//! Fields live on an `N×N` grid and are kept inside the band `|k| ≤ K` with
//! `K = N/4 − 1` in each direction. Products of two band-limited fields then
//! stay below the Nyquist frequency, so the Fourier derivative obeys an exact
//! Leibniz rule on every product the energy forms, and discrete integration
//! by parts is exact. That is what makes the energy identity hold
//! configuration-wise rather than up to truncation error.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::mat::Mat;

/// One matrix per site, sites in row-major order (`y` slow, `x` fast).
pub type Field = Vec<Mat>;

#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    n: usize,
    spacing: f64,
    band: usize,
    /// Fourier differentiation matrix, row-major `N×N`.
    deriv: Vec<f64>,
    /// Orthogonal projection onto the band, row-major `N×N`.
    proj: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum GridError {
    #[error("grid size must be even and at least 8, got {0}")]
    BadSize(usize),
    #[error("area must be positive and finite, got {0}")]
    BadArea(f64),
}

impl Grid {
    /// `N×N` periodic grid covering a square of area `vol`.
    pub fn new(n: usize, vol: f64) -> Result<Self, GridError> {
        if n < 8 || n % 2 != 0 {
            return Err(GridError::BadSize(n));
        }
        if !(vol > 0.0 && vol.is_finite()) {
            return Err(GridError::BadArea(vol));
        }
        let length = libm::sqrt(vol);
        let spacing = length / n as f64;
        let band = n / 4 - 1;
        let nf = n as f64;
        let mut deriv = vec![0.0; n * n];
        let mut proj = vec![0.0; n * n];
        for m in 0..n {
            for j in 0..n {
                let delta = (m as f64) - (j as f64);
                // Σ_{0<|k|<N/2} (2πik/L) e^{2πik·δ/N} / N, Nyquist dropped.
                let mut d = 0.0;
                for k in 1..n / 2 {
                    let kf = k as f64;
                    d -= 2.0 * (2.0 * PI * kf / length) * libm::sin(2.0 * PI * kf * delta / nf);
                }
                deriv[m * n + j] = d / nf;
                let mut p = 1.0;
                for k in 1..=band {
                    p += 2.0 * libm::cos(2.0 * PI * (k as f64) * delta / nf);
                }
                proj[m * n + j] = p / nf;
            }
        }
        Ok(Grid { n, spacing, band, deriv, proj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sites(&self) -> usize {
        self.n * self.n
    }

    /// Lattice spacing `a`, with `N²a² = vol`.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Quadrature weight `a²`.
    pub fn weight(&self) -> f64 {
        self.spacing * self.spacing
    }

    pub fn vol(&self) -> f64 {
        self.weight() * self.sites() as f64
    }

    pub fn band(&self) -> usize {
        self.band
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.n + ix
    }

    /// Physical coordinates of a site.
    pub fn coords(&self, site: usize) -> (f64, f64) {
        ((site % self.n) as f64 * self.spacing, (site / self.n) as f64 * self.spacing)
    }

    fn apply(&self, kernel: &[f64], f: &[Mat], axis: usize) -> Field {
        let n = self.n;
        assert_eq!(f.len(), n * n, "field has the wrong number of sites");
        let (rows, cols) = f[0].shape();
        let mut out = vec![Mat::zeros(rows, cols); n * n];
        for iy in 0..n {
            for ix in 0..n {
                let (line, pos) = if axis == 0 { (iy, ix) } else { (ix, iy) };
                let krow = &kernel[pos * n..(pos + 1) * n];
                let mut acc = Mat::zeros(rows, cols);
                for (j, &w) in krow.iter().enumerate() {
                    if w == 0.0 {
                        continue;
                    }
                    let src = if axis == 0 { line * n + j } else { j * n + line };
                    acc.axpy_re(w, &f[src]);
                }
                out[iy * n + ix] = acc;
            }
        }
        out
    }

    pub fn dx(&self, f: &[Mat]) -> Field {
        self.apply(&self.deriv, f, 0)
    }

    pub fn dy(&self, f: &[Mat]) -> Field {
        self.apply(&self.deriv, f, 1)
    }

    /// Orthogonal projection onto band-limited fields.
    pub fn project(&self, f: &[Mat]) -> Field {
        let tmp = self.apply(&self.proj, f, 0);
        self.apply(&self.proj, &tmp, 1)
    }

    /// `a² Σ |f|²`.
    pub fn l2_sqr(&self, f: &[Mat]) -> f64 {
        self.weight() * f.iter().map(Mat::norm_sqr).sum::<f64>()
    }

    /// `a² Σ Re tr(f† g)`.
    pub fn l2_inner(&self, f: &[Mat], g: &[Mat]) -> f64 {
        self.weight() * f.iter().zip(g).map(|(a, b)| a.re_inner(b)).sum::<f64>()
    }

    /// Largest distance from the band, `max |f − Pf|`.
    pub fn band_defect(&self, f: &[Mat]) -> f64 {
        let p = self.project(f);
        f.iter()
            .zip(&p)
            .map(|(a, b)| libm::sqrt((*a - *b).norm_sqr()))
            .fold(0.0, f64::max)
    }
}

/// Sitewise map of one field.
pub fn map1(f: &[Mat], op: impl Fn(&Mat) -> Mat) -> Field {
    f.iter().map(op).collect()
}

/// Sitewise map of two fields.
pub fn map2(f: &[Mat], g: &[Mat], op: impl Fn(&Mat, &Mat) -> Mat) -> Field {
    f.iter().zip(g).map(|(a, b)| op(a, b)).collect()
}

/// Sitewise map of three fields.
pub fn map3(f: &[Mat], g: &[Mat], h: &[Mat], op: impl Fn(&Mat, &Mat, &Mat) -> Mat) -> Field {
    f.iter().zip(g).zip(h).map(|((a, b), c)| op(a, b, c)).collect()
}

/// `f += g` sitewise.
pub fn add_into(f: &mut [Mat], g: &[Mat]) {
    f.iter_mut().zip(g).for_each(|(a, b)| *a += *b);
}
