//! Lattice configurations: connections, Higgs fields and the two morphisms.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::mat::{Mat, C};
use super::params::VortexParams;
use super::spectral::{Field, Grid};

/// Which morphism is allowed to be nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Branch {
    /// `ψ ≡ 0`, `φ: E₂ → E₁` free.
    #[default]
    Phi,
    /// `φ ≡ 0`, `ψ: E₁ → E₂` free.
    Psi,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Phi => "phi",
            Branch::Psi => "psi",
        }
    }
}

/// Field blocks, in storage order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    A1,
    A2,
    Theta1,
    Theta2,
    Phi,
    Psi,
}

impl Block {
    pub const ALL: [Block; 6] = [Block::A1, Block::A2, Block::Theta1, Block::Theta2, Block::Phi, Block::Psi];

    pub fn name(self) -> &'static str {
        match self {
            Block::A1 => "A1",
            Block::A2 => "A2",
            Block::Theta1 => "theta1",
            Block::Theta2 => "theta2",
            Block::Phi => "phi",
            Block::Psi => "psi",
        }
    }

    /// Connection blocks are constrained to anti-Hermitian values.
    pub fn is_connection(self) -> bool {
        matches!(self, Block::A1 | Block::A2)
    }

    fn slots(self) -> core::ops::Range<usize> {
        match self {
            Block::A1 => 0..2,
            Block::A2 => 2..4,
            Block::Theta1 => 4..5,
            Block::Theta2 => 5..6,
            Block::Phi => 6..7,
            Block::Psi => 7..8,
        }
    }
}

/// All matrix fields of a configuration, or a tangent vector to one.
#[derive(Clone, Debug, PartialEq)]
pub struct Fields {
    pub r1: usize,
    pub r2: usize,
    /// `[A₁ₓ, A₁ᵧ]`, anti-Hermitian `r₁×r₁`.
    pub a1: [Field; 2],
    /// `[A₂ₓ, A₂ᵧ]`, anti-Hermitian `r₂×r₂`.
    pub a2: [Field; 2],
    /// `Θ₁` with `θ₁ = Θ₁ dz`, `r₁×r₁`.
    pub theta1: Field,
    pub theta2: Field,
    /// `φ ∈ Hom(E₂, E₁)`, `r₁×r₂`.
    pub phi: Field,
    /// `ψ ∈ Hom(E₁, E₂)`, `r₂×r₁`.
    pub psi: Field,
}

impl Fields {
    pub fn zeros(sites: usize, r1: usize, r2: usize) -> Self {
        let f = |r: usize, c: usize| vec![Mat::zeros(r, c); sites];
        Fields {
            r1,
            r2,
            a1: [f(r1, r1), f(r1, r1)],
            a2: [f(r2, r2), f(r2, r2)],
            theta1: f(r1, r1),
            theta2: f(r2, r2),
            phi: f(r1, r2),
            psi: f(r2, r1),
        }
    }

    pub fn slots(&self) -> [&Field; 8] {
        [&self.a1[0], &self.a1[1], &self.a2[0], &self.a2[1], &self.theta1, &self.theta2, &self.phi, &self.psi]
    }

    pub fn slots_mut(&mut self) -> [&mut Field; 8] {
        let [a1x, a1y] = &mut self.a1;
        let [a2x, a2y] = &mut self.a2;
        [a1x, a1y, a2x, a2y, &mut self.theta1, &mut self.theta2, &mut self.phi, &mut self.psi]
    }

    pub fn block(&self, b: Block) -> Vec<&Field> {
        let s = self.slots();
        b.slots().map(|i| s[i]).collect()
    }

    pub fn block_mut(&mut self, b: Block) -> Vec<&mut Field> {
        let range = b.slots();
        self.slots_mut()
            .into_iter()
            .enumerate()
            .filter(|(i, _)| range.contains(i))
            .map(|(_, f)| f)
            .collect()
    }

    /// `self += alpha · other`.
    pub fn axpy(&mut self, alpha: f64, other: &Fields) {
        for (dst, src) in self.slots_mut().into_iter().zip(other.slots()) {
            dst.iter_mut().zip(src).for_each(|(a, b)| *a += b.scale_re(alpha));
        }
    }

    /// Unweighted `Σ Re tr(f† g)` over every slot.
    pub fn dot(&self, other: &Fields) -> f64 {
        self.slots()
            .into_iter()
            .zip(other.slots())
            .map(|(f, g)| f.iter().zip(g).map(|(a, b)| a.re_inner(b)).sum::<f64>())
            .sum()
    }

    /// Unweighted `Σ Re tr(f† g)` restricted to one block.
    pub fn block_dot(&self, other: &Fields, b: Block) -> f64 {
        self.block(b)
            .into_iter()
            .zip(other.block(b))
            .map(|(f, g)| f.iter().zip(g).map(|(x, y)| x.re_inner(y)).sum::<f64>())
            .sum()
    }

    pub fn zero_block(&mut self, b: Block) {
        for f in self.block_mut(b) {
            f.iter_mut().for_each(|m| *m = Mat::zeros(m.rows(), m.cols()));
        }
    }

    /// Applies `op` to every field of a block.
    pub fn map_block(&mut self, b: Block, op: impl Fn(&[Mat]) -> Field) {
        for f in self.block_mut(b) {
            *f = op(f);
        }
    }
}

/// A configuration on an `N×N` torus.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeState {
    pub grid: Grid,
    pub branch: Branch,
    pub fields: Fields,
}

/// Amplitudes for random band-limited states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomSpec {
    pub connection: f64,
    pub higgs: f64,
    pub morphism: f64,
    /// Constant added to the diagonal of the live morphism.
    pub morphism_offset: f64,
    /// Use constant scalar Higgs fields `Θᵢ = cᵢ·I`, which are holomorphic
    /// for every connection.
    pub holomorphic_higgs: bool,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec { connection: 0.5, higgs: 0.5, morphism: 0.5, morphism_offset: 0.0, holomorphic_higgs: true }
    }
}

fn random_c(rng: &mut ChaCha8Rng, amp: f64) -> C {
    C::new(amp * rng.random_range(-1.0..1.0), amp * rng.random_range(-1.0..1.0))
}

impl LatticeState {
    pub fn zero(grid: Grid, r1: usize, r2: usize, branch: Branch) -> Self {
        let fields = Fields::zeros(grid.sites(), r1, r2);
        LatticeState { grid, branch, fields }
    }

    pub fn for_params(grid: Grid, p: &VortexParams, branch: Branch) -> Self {
        Self::zero(grid, p.r1, p.r2, branch)
    }

    /// Random state, band-limited in every field; the dead morphism stays zero.
    pub fn random(grid: Grid, r1: usize, r2: usize, branch: Branch, seed: u64, spec: RandomSpec) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = Self::zero(grid, r1, r2, branch);
        let sites = s.grid.sites();
        let raw = |rows: usize, cols: usize, amp: f64, rng: &mut ChaCha8Rng| -> Field {
            (0..sites).map(|_| Mat::from_fn(rows, cols, |_, _| random_c(rng, amp))).collect()
        };
        for i in 0..2 {
            let f = raw(r1, r1, spec.connection, &mut rng);
            s.fields.a1[i] = s.grid.project(&f).iter().map(Mat::anti_hermitian_part).collect();
            let f = raw(r2, r2, spec.connection, &mut rng);
            s.fields.a2[i] = s.grid.project(&f).iter().map(Mat::anti_hermitian_part).collect();
        }
        if spec.holomorphic_higgs {
            let c1 = random_c(&mut rng, spec.higgs);
            let c2 = random_c(&mut rng, spec.higgs);
            s.fields.theta1 = vec![Mat::scalar(r1, c1); sites];
            s.fields.theta2 = vec![Mat::scalar(r2, c2); sites];
        } else {
            let f = raw(r1, r1, spec.higgs, &mut rng);
            s.fields.theta1 = s.grid.project(&f);
            let f = raw(r2, r2, spec.higgs, &mut rng);
            s.fields.theta2 = s.grid.project(&f);
        }
        let (rows, cols) = match branch {
            Branch::Phi => (r1, r2),
            Branch::Psi => (r2, r1),
        };
        let mut offset = Mat::zeros(rows, cols);
        for i in 0..rows.min(cols) {
            offset[(i, i)] = C::new(spec.morphism_offset, 0.0);
        }
        let f = raw(rows, cols, spec.morphism, &mut rng);
        let live: Field = s.grid.project(&f).into_iter().map(|m| m + offset).collect();
        match branch {
            Branch::Phi => s.fields.phi = live,
            Branch::Psi => s.fields.psi = live,
        }
        s
    }

    /// Imposes the Higgs-pair specialization `θ₂ = 0`.
    pub fn into_higgs_pair(mut self) -> Self {
        self.fields.zero_block(Block::Theta2);
        self
    }

    /// The flat abelian solution for `r₁ = r₂ = 1`: `A = 0`, `θ = 0` and
    /// `φ = √τ`, or `ψ = √τ′` in the mirror branch.
    pub fn constant_solution(grid: Grid, p: &VortexParams, branch: Branch) -> Option<Self> {
        if p.r1 != 1 || p.r2 != 1 {
            return None;
        }
        let mut s = Self::zero(grid, 1, 1, branch);
        match branch {
            Branch::Phi if p.tau > 0.0 => {
                s.fields.phi = vec![Mat::scalar(1, C::new(libm::sqrt(p.tau), 0.0)); s.grid.sites()];
            }
            Branch::Psi if p.tau_prime > 0.0 => {
                s.fields.psi = vec![Mat::scalar(1, C::new(libm::sqrt(p.tau_prime), 0.0)); s.grid.sites()];
            }
            _ => return None,
        }
        Some(s)
    }

    pub fn r1(&self) -> usize {
        self.fields.r1
    }

    pub fn r2(&self) -> usize {
        self.fields.r2
    }

    /// The morphism the branch keeps alive.
    pub fn section(&self) -> &Field {
        match self.branch {
            Branch::Phi => &self.fields.phi,
            Branch::Psi => &self.fields.psi,
        }
    }

    /// Checks the standing invariants: anti-Hermitian connections, dead
    /// morphism identically zero, `φψ = 0` and `ψφ = 0`.
    pub fn invariant_defect(&self) -> f64 {
        let f = &self.fields;
        let mut worst: f64 = 0.0;
        for a in f.a1.iter().chain(f.a2.iter()) {
            for m in a {
                worst = worst.max(m.anti_hermitian_defect());
            }
        }
        let dead = match self.branch {
            Branch::Phi => &f.psi,
            Branch::Psi => &f.phi,
        };
        for m in dead {
            worst = worst.max(libm::sqrt(m.norm_sqr()));
        }
        for (p, q) in f.phi.iter().zip(&f.psi) {
            worst = worst.max(libm::sqrt((*p * *q).norm_sqr()));
            worst = worst.max(libm::sqrt((*q * *p).norm_sqr()));
        }
        worst
    }

    /// Largest distance of any field from the band.
    pub fn band_defect(&self) -> f64 {
        self.fields.slots().iter().map(|f| self.grid.band_defect(f)).fold(0.0, f64::max)
    }

    /// Applies constant unitaries `u ∈ U(r₁)`, `v ∈ U(r₂)`.
    pub fn gauge_transform(&self, u: &Mat, v: &Mat) -> Self {
        let mut s = self.clone();
        let conj = |g: &Mat, f: &Field| f.iter().map(|m| *g * *m * g.adj()).collect::<Field>();
        let f = &mut s.fields;
        for i in 0..2 {
            f.a1[i] = conj(u, &f.a1[i]);
            f.a2[i] = conj(v, &f.a2[i]);
        }
        f.theta1 = conj(u, &f.theta1);
        f.theta2 = conj(v, &f.theta2);
        f.phi = f.phi.iter().map(|m| *u * *m * v.adj()).collect();
        f.psi = f.psi.iter().map(|m| *v * *m * u.adj()).collect();
        s
    }

    /// `‖θ₁‖²_{L²} = 2a²Σ|Θ₁|²`, using `|dz|² = 2`.
    pub fn moment_map(&self) -> f64 {
        2.0 * self.grid.l2_sqr(&self.fields.theta1)
    }

    /// Pointwise `|s|²` of the live morphism.
    pub fn section_norm_sqr(&self) -> Vec<f64> {
        self.section().iter().map(Mat::norm_sqr).collect()
    }
}

/// Random unitary: Cayley transform of a random anti-Hermitian matrix.
pub fn random_unitary(n: usize, seed: u64) -> Mat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = Mat::from_fn(n, n, |_, _| random_c(&mut rng, 1.0)).anti_hermitian_part();
    let id = Mat::identity(n);
    // (I − X)⁻¹(I + X) is unitary for anti-Hermitian X.
    mat_inverse(&(id - x)).expect("I − X is invertible for anti-Hermitian X") * (id + x)
}

/// Gauss–Jordan inverse with partial pivoting.
pub fn mat_inverse(m: &Mat) -> Option<Mat> {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut a = *m;
    let mut inv = Mat::identity(n);
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[(i, col)].norm().total_cmp(&a[(j, col)].norm()))?;
        if a[(pivot, col)].norm() < 1e-300 {
            return None;
        }
        for j in 0..n {
            let (t1, t2) = (a[(col, j)], inv[(col, j)]);
            a[(col, j)] = a[(pivot, j)];
            inv[(col, j)] = inv[(pivot, j)];
            a[(pivot, j)] = t1;
            inv[(pivot, j)] = t2;
        }
        let p = a[(col, col)];
        for j in 0..n {
            a[(col, j)] /= p;
            inv[(col, j)] /= p;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = a[(i, col)];
            for j in 0..n {
                let (x, y) = (a[(col, j)], inv[(col, j)]);
                a[(i, j)] -= f * x;
                inv[(i, j)] -= f * y;
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_state_respects_invariants() {
        let g = Grid::new(8, 4.0).unwrap();
        let s = LatticeState::random(g, 2, 1, Branch::Phi, 7, RandomSpec::default());
        assert!(s.invariant_defect() < 1e-14);
        assert!(s.band_defect() < 1e-12);
        let t = LatticeState::random(s.grid.clone(), 2, 1, Branch::Phi, 7, RandomSpec::default());
        assert_eq!(s, t);
        let u = LatticeState::random(s.grid.clone(), 2, 1, Branch::Psi, 7, RandomSpec::default());
        assert!(u.fields.phi.iter().all(|m| m.norm_sqr() == 0.0));
        assert!(u.invariant_defect() < 1e-14);
    }

    #[test]
    fn unitary_and_inverse() {
        let u = random_unitary(3, 11);
        let e = u * u.adj() - Mat::identity(3);
        assert!(e.norm_sqr() < 1e-24);
        let m = Mat::from_fn(3, 3, |i, j| C::new((i * 3 + j) as f64, if i == j { 5.0 } else { 0.0 }));
        let inv = mat_inverse(&m).unwrap();
        assert!((m * inv - Mat::identity(3)).norm_sqr() < 1e-24);
        assert!(mat_inverse(&Mat::zeros(2, 2)).is_none());
    }

    #[test]
    fn block_views() {
        let mut f = Fields::zeros(4, 2, 1);
        assert_eq!(f.block(Block::A1).len(), 2);
        assert_eq!(f.block(Block::Phi)[0][0].shape(), (2, 1));
        f.map_block(Block::Theta1, |x| x.iter().map(|_| Mat::identity(2)).collect());
        assert_eq!(f.block_dot(&f.clone(), Block::Theta1), 8.0);
        f.zero_block(Block::Theta1);
        assert_eq!(f.dot(&f.clone()), 0.0);
    }

    #[test]
    fn constant_solution_shapes() {
        let g = Grid::new(8, 4.0).unwrap();
        let p = VortexParams::new(1, 1, 4.0, 2.0).unwrap();
        let s = LatticeState::constant_solution(g.clone(), &p, Branch::Phi).unwrap();
        assert!(s.section_norm_sqr().iter().all(|&x| (x - 2.0).abs() < 1e-14));
        let neg = VortexParams::new(1, 1, 4.0, -2.0).unwrap();
        assert!(LatticeState::constant_solution(g.clone(), &neg, Branch::Phi).is_none());
        assert!(LatticeState::constant_solution(g, &neg, Branch::Psi).is_some());
    }
}
