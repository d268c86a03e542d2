//! A Hermitian structure family with known integrability, shared by the
//! unit and acceptance tests.

use hetspin::form::{mask_to_tuple, subsets, RealForm};
use hetspin::gstructure::RiemannianSlice;
use hetspin::numgeom::Mat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The standard complex structure on `R^n`.
pub fn j0(n: usize) -> Mat {
    let mut j = Mat::zeros(n, n);
    for k in 0..n / 2 {
        j[(2 * k + 1, 2 * k)] = 1.0;
        j[(2 * k, 2 * k + 1)] = -1.0;
    }
    j
}

/// A Hermitian structure pulled back from `J0` along a polynomial diffeomorphism,
/// with a `J0`-invariant metric varying in space.
#[derive(Clone)]
pub struct PulledBack {
    n: usize,
    quad: Vec<f64>,
    b: Mat,
    freq: Mat,
}

impl PulledBack {
    pub fn new(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let quad = (0..n * n * n).map(|_| rng.gen_range(-0.15..0.15)).collect();
        let b = Mat::from_fn(n, n, |_, _| rng.gen_range(-0.5..0.5));
        let freq = Mat::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        Self { n, quad, b, freq }
    }

    pub fn jacobian(&self, x: &[f64]) -> Mat {
        let n = self.n;
        Mat::from_fn(n, n, |i, j| {
            let mut v = if i == j { 1.0 } else { 0.0 };
            for k in 0..n {
                v += (self.quad[(i * n + j) * n + k] + self.quad[(i * n + k) * n + j]) * x[k];
            }
            v
        })
    }

    pub fn k(&self, x: &[f64]) -> Mat {
        let n = self.n;
        let b = Mat::from_fn(n, n, |i, j| self.b[(i, j)] * (1.0 + 0.4 * (self.freq[(i, j)] * x[(i + j) % n]).sin()));
        let j = j0(n);
        let btb = b.transpose() * b;
        Mat::identity(n, n) + (&btb + j.transpose() * &btb * &j) * 0.3
    }

    pub fn metric(&self, x: &[f64]) -> Mat {
        let df = self.jacobian(x);
        df.transpose() * self.k(x) * df
    }

    pub fn complex(&self, x: &[f64]) -> Mat {
        let df = self.jacobian(x);
        df.clone().try_inverse().unwrap() * j0(self.n) * df
    }

    pub fn omega(&self, x: &[f64]) -> RealForm {
        let w = self.metric(x) * self.complex(x);
        let mut f = RealForm::zero(self.n, 2);
        for (slot, &m) in subsets(self.n, 2).masks.iter().enumerate() {
            let t = mask_to_tuple(m);
            f.components_mut()[slot] = w[(t[0], t[1])];
        }
        f
    }

    pub fn slice(&self) -> RiemannianSlice<'static> {
        let me = self.clone();
        let n = self.n;
        let top = me.omega(&vec![0.0; n]);
        let mut p = top.clone();
        for _ in 1..n / 2 {
            p = p.wedge(&top);
        }
        let o = if p.components()[0] > 0.0 { 1 } else { -1 };
        RiemannianSlice::new(n, move |x| me.metric(x), o).unwrap()
    }
}
