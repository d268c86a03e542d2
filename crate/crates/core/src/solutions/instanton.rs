//! Anti-self-dual SU(2) connections on R⁴ and the harmonic-function
//! equation they source.
//!
//! Generators `T_a = −iσ_a/2`, so `[T_a, T_b] = ε_abc T_c` and
//! `F^a = dA^a + (1/2) ε_abc A^b∧A^c`. Flat R⁴ is oriented by `dx¹²³⁴`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::form::RealForm;

/// `η̄^a_{ij}`, the anti-self-dual 't Hooft symbols.
pub fn thooft_bar(a: usize, i: usize, j: usize) -> f64 {
    match (i, j) {
        (3, 3) => 0.0,
        (3, b) => {
            if a == b {
                1.0
            } else {
                0.0
            }
        }
        (b, 3) => {
            if a == b {
                -1.0
            } else {
                0.0
            }
        }
        (b, c) => levi3(a, b, c),
    }
}

pub fn levi3(a: usize, b: usize, c: usize) -> f64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Flat-space Hodge star on R⁴ with orientation `dx¹²³⁴`.
pub fn star4(form: &RealForm) -> RealForm {
    let k = form.degree();
    let mut out = RealForm::zero(4, 4 - k);
    for (idx, c) in form.iter() {
        if *c == 0.0 {
            continue;
        }
        let rest: Vec<usize> = (0..4).filter(|i| !idx.contains(i)).collect();
        let perm: Vec<usize> = idx.iter().chain(&rest).copied().collect();
        let inversions = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        let s = if inversions % 2 == 0 { 1.0 } else { -1.0 };
        out.set(&rest, out.get(&rest) + s * c);
    }
    out
}

/// A gauge connection on R⁴ with its analytic curvature.
pub trait AsdConnection: Sync {
    /// `A^a_i`, indexed `[a][i]`.
    fn potential(&self, x: &[f64; 4]) -> [[f64; 4]; 3];

    /// `F^a` as 2-forms on R⁴.
    fn curvature(&self, x: &[f64; 4]) -> [RealForm; 3];

    /// `Σ_a |F^a_{ij} F^{a ij}|` with the flat metric, summed over all `i, j`.
    fn density(&self, x: &[f64; 4]) -> f64 {
        self.curvature(x).iter().map(|f| 2.0 * f.components().iter().map(|c| c * c).sum::<f64>()).sum()
    }
}

/// The BPST instanton in regular gauge,
/// `A^a_i = 2 η̄^a_{ij} (x − c)^j / (|x − c|² + ρ²)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bpst {
    pub rho: f64,
    pub center: [f64; 4],
}

pub fn build_bpst_connection(rho: f64, center: [f64; 4]) -> Bpst {
    assert!(rho > 0.0, "instanton size must be positive");
    Bpst { rho, center }
}

impl Bpst {
    fn shifted(&self, x: &[f64; 4]) -> ([f64; 4], f64) {
        let y = [x[0] - self.center[0], x[1] - self.center[1], x[2] - self.center[2], x[3] - self.center[3]];
        let r2 = y.iter().map(|v| v * v).sum();
        (y, r2)
    }

    /// `max |⋆F^a + F^a|`, from the closed form only.
    pub fn asd_residual(&self, x: &[f64; 4]) -> f64 {
        self.curvature(x).iter().map(|f| (star4(f) + f.clone()).max_abs()).fold(0.0, f64::max)
    }
}

impl AsdConnection for Bpst {
    fn potential(&self, x: &[f64; 4]) -> [[f64; 4]; 3] {
        let (y, r2) = self.shifted(x);
        let d = r2 + self.rho * self.rho;
        let mut a = [[0.0; 4]; 3];
        for (c, row) in a.iter_mut().enumerate() {
            for (i, v) in row.iter_mut().enumerate() {
                *v = 2.0 * (0..4).map(|j| thooft_bar(c, i, j) * y[j]).sum::<f64>() / d;
            }
        }
        a
    }

    /// `F^a_{ij} = −4ρ² η̄^a_{ij} / (|x − c|² + ρ²)²`.
    fn curvature(&self, x: &[f64; 4]) -> [RealForm; 3] {
        let (_, r2) = self.shifted(x);
        let d = r2 + self.rho * self.rho;
        let k = -4.0 * self.rho * self.rho / (d * d);
        std::array::from_fn(|a| {
            let mut f = RealForm::zero(4, 2);
            for i in 0..4 {
                for j in i + 1..4 {
                    f.set(&[i, j], k * thooft_bar(a, i, j));
                }
            }
            f
        })
    }
}

/// `η^a_{ij}`, the self-dual 't Hooft symbols.
pub fn thooft(a: usize, i: usize, j: usize) -> f64 {
    if i == 3 || j == 3 {
        -thooft_bar(a, i, j)
    } else {
        thooft_bar(a, i, j)
    }
}

/// Multi-centre 't Hooft connection `A^a_i = −η^a_{ij} ∂_j log φ` with
/// `φ = 1 + Σ_k ρ_k² / |x − c_k|²`. Curvature is taken from the potential
/// by finite differences.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Thooft {
    pub centers: Vec<[f64; 4]>,
    pub sizes: Vec<f64>,
    pub step: f64,
}

impl Thooft {
    pub fn new(centers: Vec<[f64; 4]>, sizes: Vec<f64>) -> Self {
        assert_eq!(centers.len(), sizes.len(), "one size per centre");
        Thooft { centers, sizes, step: 1e-3 }
    }

    /// `c − |∇ log φ|²`, which equals `c + ∇² log φ` away from the centres.
    pub fn h(&self, constant: f64, x: &[f64; 4]) -> f64 {
        constant - self.grad_log_phi(x).iter().map(|v| v * v).sum::<f64>()
    }

    pub fn phi(&self, x: &[f64; 4]) -> f64 {
        1.0 + self.centers.iter().zip(&self.sizes).map(|(c, r)| r * r / dist2(x, c)).sum::<f64>()
    }

    fn grad_log_phi(&self, x: &[f64; 4]) -> [f64; 4] {
        let mut g = [0.0; 4];
        for (c, r) in self.centers.iter().zip(&self.sizes) {
            let d2 = dist2(x, c);
            for i in 0..4 {
                g[i] -= 2.0 * r * r * (x[i] - c[i]) / (d2 * d2);
            }
        }
        let phi = self.phi(x);
        g.map(|v| v / phi)
    }

    pub fn min_distance(&self, x: &[f64; 4]) -> f64 {
        self.centers.iter().map(|c| dist2(x, c).sqrt()).fold(f64::INFINITY, f64::min)
    }
}

fn dist2(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

impl AsdConnection for Thooft {
    fn potential(&self, x: &[f64; 4]) -> [[f64; 4]; 3] {
        let g = self.grad_log_phi(x);
        std::array::from_fn(|a| std::array::from_fn(|i| -(0..4).map(|j| thooft(a, i, j) * g[j]).sum::<f64>()))
    }

    fn curvature(&self, x: &[f64; 4]) -> [RealForm; 3] {
        curvature_from_potential(self, x, self.step)
    }
}

/// Curvature of a potential by central differences,
/// `F^a_{ij} = ∂_i A^a_j − ∂_j A^a_i + ε_abc A^b_i A^c_j`.
pub fn curvature_from_potential(conn: &dyn AsdConnection, x: &[f64; 4], step: f64) -> [RealForm; 3] {
    let a0 = conn.potential(x);
    let mut da = [[[0.0; 4]; 4]; 3]; // [a][i][j] = ∂_i A^a_j
    for i in 0..4 {
        let at = |t: f64| {
            let mut y = *x;
            y[i] += t;
            conn.potential(&y)
        };
        let (p2, p1, m1, m2) = (at(2.0 * step), at(step), at(-step), at(-2.0 * step));
        for a in 0..3 {
            for j in 0..4 {
                da[a][i][j] = (-p2[a][j] + 8.0 * p1[a][j] - 8.0 * m1[a][j] + m2[a][j]) / (12.0 * step);
            }
        }
    }
    std::array::from_fn(|a| {
        let mut f = RealForm::zero(4, 2);
        for i in 0..4 {
            for j in i + 1..4 {
                let mut v = da[a][i][j] - da[a][j][i];
                for b in 0..3 {
                    for c in 0..3 {
                        v += levi3(a, b, c) * a0[b][i] * a0[c][j];
                    }
                }
                f.set(&[i, j], v);
            }
        }
        f
    })
}

/// Second Chern number `(1/16π²) ∫ Σ_a F^a∧F^a` over the ball of radius
/// `radius` around `center`, curvature taken from the potential by finite
/// differences. Positive for self-dual connections with this orientation,
/// so the BPST instanton gives −1.
///
/// Radial Gauss–Legendre quadrature on `[0, radius]` is combined with an
/// average over a fixed set of directions on S³.
pub fn chern_number(conn: &dyn AsdConnection, center: [f64; 4], radius: f64, radial_nodes: usize, step: f64) -> f64 {
    let (nodes, weights) = gauss_legendre(radial_nodes);
    let dirs = s3_directions();
    let vol_s3 = 2.0 * PI * PI;
    let mut total = 0.0;
    // Substitute r = radius · t² to cluster nodes near the core.
    for (t, w) in nodes.iter().zip(&weights) {
        let s = 0.5 * (t + 1.0);
        let r = radius * s * s;
        let jac = 0.5 * radius * 2.0 * s;
        let mut avg = 0.0;
        for d in &dirs {
            let x = [center[0] + r * d[0], center[1] + r * d[1], center[2] + r * d[2], center[3] + r * d[3]];
            let f = curvature_from_potential(conn, &x, step * (1.0 + r));
            avg += f.iter().map(|fa| fa.wedge(fa).get(&[0, 1, 2, 3])).sum::<f64>();
        }
        avg /= dirs.len() as f64;
        total += w * jac * vol_s3 * r.powi(3) * avg;
    }
    total / (16.0 * PI * PI)
}

fn s3_directions() -> Vec<[f64; 4]> {
    // Vertices of the 24-cell and its dual: 48 well-spread unit vectors.
    let mut out = Vec::new();
    for i in 0..4 {
        for s in [1.0, -1.0] {
            let mut v = [0.0; 4];
            v[i] = s;
            out.push(v);
        }
    }
    for m in 0..16u32 {
        out.push(std::array::from_fn(|k| if m >> k & 1 == 1 { -0.5 } else { 0.5 }));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..4 {
        for j in i + 1..4 {
            for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut v = [0.0; 4];
                v[i] = si * h;
                v[j] = sj * h;
                out.push(v);
            }
        }
    }
    out
}

/// Gauss–Legendre nodes and weights on `[−1, 1]` by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        loop {
            let (mut p0, mut p1) = (1.0, 0.0);
            for k in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * k + 1) as f64 * z * p1 - k as f64 * p2) / (k + 1) as f64;
            }
            let dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                x[i] = z;
                w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
                break;
            }
        }
    }
    (x, w)
}

/// The conformal factor `h = 1 + 4(|x|² + 2ρ²)/(|x|² + ρ²)²`.
pub fn half_bps_h(rho: f64, center: [f64; 4], x: &[f64; 4]) -> f64 {
    let r2: f64 = x.iter().zip(&center).map(|(a, c)| (a - c) * (a - c)).sum();
    let d = r2 + rho * rho;
    1.0 + 4.0 * (r2 + 2.0 * rho * rho) / (d * d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thooft_two_centres_anti_self_dual() {
        let t = Thooft::new(vec![[0.0; 4], [1.0, 0.5, 0.0, 0.0]], vec![0.7, 0.5]);
        for x in [[0.3, -0.4, 0.5, 0.2], [1.5, 0.1, -0.7, 0.9]] {
            let asd = t.curvature(&x).iter().map(|f| (star4(f) + f.clone()).max_abs()).fold(0.0, f64::max);
            assert!(asd < 1e-8, "{asd}");
        }
    }

    #[test]
    fn star_on_r4() {
        let f = RealForm::basis(4, &[0, 1], 1.0);
        assert_eq!(star4(&f).get(&[2, 3]), 1.0);
        assert_eq!(star4(&RealForm::basis(4, &[1], 1.0)).get(&[0, 2, 3]), -1.0);
        for a in 0..3 {
            let mut e = RealForm::zero(4, 2);
            for i in 0..4 {
                for j in i + 1..4 {
                    e.set(&[i, j], thooft_bar(a, i, j));
                }
            }
            assert!((star4(&e) + e).max_abs() < 1e-15);
        }
    }

    #[test]
    fn bpst_is_anti_self_dual() {
        let b = build_bpst_connection(0.7, [0.1, 0.0, -0.2, 0.3]);
        let x = [0.5, -0.4, 0.9, 1.3];
        assert!(b.asd_residual(&x) < 1e-10);
        let fd = curvature_from_potential(&b, &x, 1e-3);
        for (a, f) in fd.iter().zip(b.curvature(&x)) {
            assert!((a.clone() - f).max_abs() < 1e-9);
        }
    }

    #[test]
    fn bpst_density_closed_form() {
        let b = build_bpst_connection(1.3, [0.0; 4]);
        let x = [0.4, 0.2, -0.7, 0.1];
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let want = 192.0 * 1.3f64.powi(4) / (r2 + 1.69).powi(4);
        assert!((b.density(&x) - want).abs() < 1e-12 * want.max(1.0));
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((s - 2.0 / 15.0).abs() < 1e-14);
    }

    #[test]
    fn large_size_flattens() {
        let x = [1.0, 0.0, 0.0, 0.0];
        let small = build_bpst_connection(1.0, [0.0; 4]).density(&x);
        let big = build_bpst_connection(1e3, [0.0; 4]).density(&x);
        assert!(big < 1e-9 * small);
    }
}
