//! Independent reference computations.
//!
//! Nothing here touches [`crate::series`]: the generating functions are
//! expanded by explicit finite sums over dense integer Laurent polynomials.
//! The gradient check uses only energy evaluations.
//! The self-test and the acceptance suite compare the main pipeline against
//! these.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::betti::ModuliParams;
use crate::vortex::energy::residual_energy;
use crate::vortex::gradient::residual_gradient;
use crate::vortex::mat::{Mat, C};
use crate::vortex::params::VortexParams;
use crate::vortex::state::{Block, LatticeState};

/// Dense Laurent polynomial `Σ c_i t^{offset+i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent {
    pub offset: i64,
    pub coeffs: Vec<BigInt>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent { offset: 0, coeffs: Vec::new() }
    }

    fn add_at(&mut self, e: i64, c: &BigInt) {
        if self.coeffs.is_empty() {
            self.offset = e;
        }
        if e < self.offset {
            let pad = (self.offset - e) as usize;
            let mut v = vec![BigInt::zero(); pad];
            v.append(&mut self.coeffs);
            self.coeffs = v;
            self.offset = e;
        }
        let i = (e - self.offset) as usize;
        if i >= self.coeffs.len() {
            self.coeffs.resize(i + 1, BigInt::zero());
        }
        self.coeffs[i] += c;
    }

    fn normalize(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        self.coeffs.drain(..lead);
        self.offset += lead as i64;
        if self.coeffs.is_empty() {
            self.offset = 0;
        }
        self
    }

    /// Quotient by `1 − t²`, or `None` if it does not divide.
    pub fn div_one_minus_t2(&self) -> Option<Laurent> {
        // c = q − q·t² ⇒ q_i = c_i + q_{i−2}, ascending.
        let n = self.coeffs.len();
        if n < 2 {
            return if n == 0 { Some(Laurent::zero()) } else { None };
        }
        let mut q = vec![BigInt::zero(); n - 2];
        for i in 0..n - 2 {
            let prev = if i >= 2 { q[i - 2].clone() } else { BigInt::zero() };
            q[i] = &self.coeffs[i] + prev;
        }
        // Remaining top two coefficients must be −q_{n−4}, −q_{n−3}.
        for i in n - 2..n {
            let expect = if i >= 2 { -q[i - 2].clone() } else { BigInt::zero() };
            if self.coeffs[i] != expect {
                return None;
            }
        }
        Some(Laurent { offset: self.offset, coeffs: q }.normalize())
    }

    /// Coefficients as `(exponent, value)`, nonzero only.
    pub fn terms(&self) -> Vec<(i64, BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.offset + i as i64, c.clone()))
            .collect()
    }

    /// Dense nonnegative coefficient list starting at `t⁰`, if applicable.
    pub fn to_dense(&self) -> Option<Vec<BigInt>> {
        if self.coeffs.is_empty() {
            return Some(Vec::new());
        }
        if self.offset < 0 || self.coeffs.iter().any(|c| c.is_negative()) {
            return None;
        }
        let mut v = vec![BigInt::zero(); self.offset as usize];
        v.extend(self.coeffs.iter().cloned());
        Some(v)
    }
}

fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let mut b = BigInt::from(1);
    for j in 0..k {
        b = b * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    b
}

/// Betti numbers of `Symⁿ` of a genus-`g` surface by direct convolution:
/// `coeff_{xⁿ} (1+tx)^{2g} · Σ x^j · Σ t^{2l}x^l`.
pub fn sym_betti(n: i64, g: i64) -> Vec<BigInt> {
    let mut p = Laurent::zero();
    for a in 0..=n.min(2 * g) {
        let c = binom(2 * g, a);
        for l in 0..=(n - a) {
            p.add_at(a + 2 * l, &c);
        }
    }
    p.normalize().to_dense().expect("nonnegative by construction")
}

/// The pairs-locus polynomial by explicit summation, before and after the
/// division by `1 − t²`.
pub fn pairs_betti(p: &ModuliParams) -> (Laurent, Option<Laurent>) {
    let fl = p.tau_bar.floor().to_integer();
    let fl: i64 = fl.try_into().expect("τ̄ fits in i64");
    let (g, k) = (p.genus, p.degree);
    let n = k - 1 - fl;
    let e1 = 2 * (k - 1 - fl);
    let e2 = 2 * (g + 1 - k + 2 * fl);
    let mut num = Laurent::zero();
    // (1+t)^{2g} · (1+tx)^{2g} · 1/(1−x) · 1/(1−t²x) · [t^{e1}/(1−t⁻²x) − t^{e2}/(1−t⁴x)]
    for j in 0..=2 * g {
        let cj = binom(2 * g, j);
        for a in 0..=n.min(2 * g) {
            let ca = &cj * binom(2 * g, a);
            for c in 0..=(n - a) {
                // b = x-power from 1/(1−x); e = x-power from the bracket.
                for e in 0..=(n - a - c) {
                    let base = j + a + 2 * c;
                    num.add_at(base + e1 - 2 * e, &ca);
                    num.add_at(base + e2 + 4 * e, &-ca.clone());
                }
            }
        }
    }
    let num = num.normalize();
    let q = num.div_one_minus_t2();
    (num, q)
}

/// Brute-force scan of `d` with `⌊τ̄⌋ < d`, `d ≤ k` and `2d ≤ 2g − 2 + k`.
pub fn d_range_scan(p: &ModuliParams) -> Vec<i64> {
    let (g, k) = (p.genus, p.degree);
    let lo = p.tau_bar.floor();
    (-4 * (k.abs() + g.abs() + 4)..=4 * (k.abs() + g.abs() + 4))
        .filter(|&d| {
            let dr = BigRational::from_integer(BigInt::from(d));
            dr > lo && d <= k && 2 * d <= 2 * g - 2 + k
        })
        .collect()
}

/// `P(−1)` style alternating sum; for a Kähler manifold with only even
/// cohomology this is the Euler characteristic.
pub fn alternating_sum(c: &[BigInt]) -> BigInt {
    c.iter()
        .enumerate()
        .fold(BigInt::zero(), |acc, (i, x)| if i.is_even() { acc + x } else { acc - x })
}

/// Basis of real tangent directions for one matrix slot.
fn tangent_basis(rows: usize, cols: usize, anti_hermitian: bool) -> Vec<Mat> {
    let one = C::new(1.0, 0.0);
    let i = C::new(0.0, 1.0);
    let mut out = Vec::new();
    if anti_hermitian {
        for a in 0..rows {
            out.push(Mat::from_fn(rows, cols, |r, c| if r == a && c == a { i } else { C::new(0.0, 0.0) }));
            for b in a + 1..rows {
                out.push(Mat::from_fn(rows, cols, |r, c| match (r, c) {
                    (r, c) if r == a && c == b => one,
                    (r, c) if r == b && c == a => -one,
                    _ => C::new(0.0, 0.0),
                }));
                out.push(Mat::from_fn(rows, cols, |r, c| {
                    if (r == a && c == b) || (r == b && c == a) {
                        i
                    } else {
                        C::new(0.0, 0.0)
                    }
                }));
            }
        }
    } else {
        for a in 0..rows {
            for b in 0..cols {
                for z in [one, i] {
                    out.push(Mat::from_fn(rows, cols, |r, c| if r == a && c == b { z } else { C::new(0.0, 0.0) }));
                }
            }
        }
    }
    out
}

/// Central-difference check of [`residual_gradient`] over every real
/// coordinate of every block. Returns `‖g_fd − g‖ / ‖g‖` per block; blocks
/// whose analytic gradient vanishes report the absolute error instead.
pub fn fd_gradient_check(s: &LatticeState, p: &VortexParams, h: f64) -> Vec<(Block, f64)> {
    let (_, grad) = residual_gradient(s, p);
    let w = s.grid.weight();
    let mut out = Vec::new();
    for block in Block::ALL {
        let n_slots = s.fields.block(block).len();
        let mut diff2 = 0.0;
        let mut norm2 = 0.0;
        for slot in 0..n_slots {
            let (rows, cols) = s.fields.block(block)[slot][0].shape();
            for site in 0..s.grid.sites() {
                for e in tangent_basis(rows, cols, block.is_connection()) {
                    let mut plus = s.clone();
                    plus.fields.block_mut(block).into_iter().nth(slot).unwrap()[site] += e.scale_re(h);
                    let mut minus = s.clone();
                    minus.fields.block_mut(block).into_iter().nth(slot).unwrap()[site] -= e.scale_re(h);
                    let fd = (residual_energy(&plus, p) - residual_energy(&minus, p)) / (2.0 * h);
                    let an = w * grad.block(block)[slot][site].re_inner(&e);
                    diff2 += (fd - an) * (fd - an);
                    norm2 += an * an;
                }
            }
        }
        let err = if norm2 > 0.0 { libm::sqrt(diff2 / norm2) } else { libm::sqrt(diff2) };
        out.push((block, err));
    }
    out
}
