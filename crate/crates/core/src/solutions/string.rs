//! Superpositions of fundamental strings, pp-waves and null rotations.
//!
//! Coordinates are `(u, x1, …, x4, v, x5, …, x8)`, so `u` sits under frame
//! direction 0, `v` under 5 and `x^i` under the transverse directions.
//!
//! ```text
//! ds² = 2 e⁻ e⁺ + ds²(R⁸),  e⁻ = h⁻¹ dv,  e⁺ = du + V dv + n_i dx^i
//! H = d(e⁻ ∧ e⁺),           e^{2Φ} = h⁻¹
//! ```

use serde::{Deserialize, Serialize};

use crate::conventions::LIGHTCONE_SIGN;
use crate::error::{Error, Result};
use crate::form::RealForm;
use crate::numgeom::{Background, FdConfig, Mat};
use crate::stabilizer::TRANSVERSE;

/// Transverse harmonic function `c + Σ_a q_a / |x − x_a|⁶`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HarmonicSpec {
    #[serde(default)]
    pub centers: Vec<[f64; 8]>,
    #[serde(default)]
    pub charges: Vec<f64>,
    #[serde(default)]
    pub constant: f64,
}

impl HarmonicSpec {
    pub fn value(&self, y: &[f64; 8]) -> f64 {
        self.constant
            + self.centers.iter().zip(&self.charges).map(|(c, q)| q * dist2(y, c).powi(-3)).sum::<f64>()
    }

    pub fn gradient(&self, y: &[f64; 8]) -> [f64; 8] {
        let mut g = [0.0; 8];
        for (c, q) in self.centers.iter().zip(&self.charges) {
            let r2 = dist2(y, c);
            let k = -6.0 * q * r2.powi(-4);
            for i in 0..8 {
                g[i] += k * (y[i] - c[i]);
            }
        }
        g
    }

    fn min_distance(&self, y: &[f64; 8]) -> f64 {
        self.centers.iter().map(|c| dist2(y, c).sqrt()).fold(f64::INFINITY, f64::min)
    }
}

fn dist2(a: &[f64; 8], b: &[f64; 8]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn default_true() -> bool {
    true
}

fn default_guard() -> f64 {
    0.1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StringBackgroundSpec {
    pub centers: Vec<[f64; 8]>,
    pub charges: Vec<f64>,
    #[serde(default, rename = "V")]
    pub v: HarmonicSpec,
    /// Constant antisymmetric matrix `C` with `n_i = (1/2) C_ij x^j`.
    #[serde(default)]
    pub dn: Option<[[f64; 8]; 8]>,
    #[serde(default = "default_true")]
    pub v_independent: bool,
    #[serde(default = "default_guard")]
    pub guard_radius: f64,
    #[serde(default)]
    pub fd: Option<FdConfig>,
    /// Replaces `h` by `1 + |x|²`, a deliberately non-harmonic control.
    #[serde(default)]
    pub non_harmonic_control: bool,
}

impl StringBackgroundSpec {
    pub fn new(centers: Vec<[f64; 8]>, charges: Vec<f64>) -> Self {
        Self {
            centers,
            charges,
            v: HarmonicSpec::default(),
            dn: None,
            v_independent: true,
            guard_radius: default_guard(),
            fd: None,
            non_harmonic_control: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.centers.len() != self.charges.len() {
            return Err(Error::Spec("string centers and charges differ in length".into()));
        }
        if self.charges.iter().any(|q| !(*q >= 0.0)) {
            return Err(Error::Spec("string charges must be non-negative".into()));
        }
        for (i, a) in self.centers.iter().enumerate() {
            if self.centers[..i].iter().any(|b| dist2(a, b) == 0.0) {
                return Err(Error::Spec("string centers must be distinct".into()));
            }
        }
        if self.v.centers.len() != self.v.charges.len() {
            return Err(Error::Spec("V centers and charges differ in length".into()));
        }
        if !self.v_independent {
            return Err(Error::Spec("only v-independent backgrounds are supported".into()));
        }
        if let Some(c) = &self.dn {
            for i in 0..8 {
                for j in 0..8 {
                    if c[i][j] != -c[j][i] {
                        return Err(Error::Spec("dn must be antisymmetric".into()));
                    }
                }
            }
        }
        if let Some(fd) = &self.fd {
            fd.validate()?;
        }
        Ok(())
    }
}

/// The assembled background.
#[derive(Clone, Debug)]
pub struct StringBackground {
    pub spec: StringBackgroundSpec,
    h: HarmonicSpec,
    fd: FdConfig,
}

pub fn build_string_background(spec: StringBackgroundSpec) -> Result<StringBackground> {
    spec.validate()?;
    let h = HarmonicSpec { centers: spec.centers.clone(), charges: spec.charges.clone(), constant: 1.0 };
    let fd = spec.fd.clone().unwrap_or_default();
    Ok(StringBackground { spec, h, fd })
}

pub fn transverse(x: &[f64]) -> [f64; 8] {
    let mut y = [0.0; 8];
    for (k, &t) in TRANSVERSE.iter().enumerate() {
        y[k] = x[t];
    }
    y
}

impl StringBackground {
    pub fn h(&self, x: &[f64]) -> f64 {
        let y = transverse(x);
        if self.spec.non_harmonic_control {
            1.0 + y.iter().map(|v| v * v).sum::<f64>()
        } else {
            self.h.value(&y)
        }
    }

    fn dh(&self, x: &[f64]) -> [f64; 8] {
        let y = transverse(x);
        if self.spec.non_harmonic_control {
            y.map(|v| 2.0 * v)
        } else {
            self.h.gradient(&y)
        }
    }

    fn n(&self, x: &[f64]) -> [f64; 8] {
        let y = transverse(x);
        let mut n = [0.0; 8];
        if let Some(c) = &self.spec.dn {
            for i in 0..8 {
                n[i] = 0.5 * (0..8).map(|j| c[i][j] * y[j]).sum::<f64>();
            }
        }
        n
    }

    /// `(e⁻, e⁺)` as coordinate 1-forms.
    pub fn null_frame(&self, x: &[f64]) -> (RealForm, RealForm) {
        let mut em = RealForm::zero(10, 1);
        em.set(&[5], 1.0 / self.h(x));
        let mut ep = RealForm::zero(10, 1);
        ep.set(&[0], 1.0);
        ep.set(&[5], self.spec.v.value(&transverse(x)));
        for (k, &t) in TRANSVERSE.iter().enumerate() {
            ep.set(&[t], self.n(x)[k]);
        }
        (em, ep)
    }
}

impl Background for StringBackground {
    fn dim(&self) -> usize {
        10
    }

    fn metric(&self, x: &[f64]) -> Mat {
        let e = self.vielbein(x).expect("string background has a frame");
        let mut eta = Mat::identity(10, 10);
        eta[(0, 0)] = -1.0;
        e.transpose() * eta * e
    }

    fn vielbein(&self, x: &[f64]) -> Option<Mat> {
        let (em, ep) = self.null_frame(x);
        let s = LIGHTCONE_SIGN as f64 / std::f64::consts::SQRT_2;
        let mut e = Mat::zeros(10, 10);
        for m in 0..10 {
            let (a, b) = (em.get(&[m]), ep.get(&[m]));
            e[(0, m)] = s * (a - b);
            e[(5, m)] = -s * (a + b);
        }
        for &t in &TRANSVERSE {
            e[(t, t)] = 1.0;
        }
        Some(e)
    }

    fn three_form(&self, x: &[f64]) -> RealForm {
        // d(e⁻∧e⁺) = d(h⁻¹) ∧ dv ∧ e⁺ − h⁻¹ dv ∧ dn
        let h = self.h(x);
        let dh = self.dh(x);
        let mut dhinv = RealForm::zero(10, 1);
        for (k, &t) in TRANSVERSE.iter().enumerate() {
            dhinv.set(&[t], -dh[k] / (h * h));
        }
        let dv = RealForm::basis(10, &[5], 1.0);
        let (_, ep) = self.null_frame(x);
        let mut out = dhinv.wedge(&dv).wedge(&ep);
        if let Some(c) = &self.spec.dn {
            let mut dn = RealForm::zero(10, 2);
            for i in 0..8 {
                for j in i + 1..8 {
                    dn.set(&[TRANSVERSE[i], TRANSVERSE[j]], -c[i][j]);
                }
            }
            out = out - dv.wedge(&dn).scale(&(1.0 / h));
        }
        out
    }

    fn dilaton(&self, x: &[f64]) -> f64 {
        -0.5 * self.h(x).ln()
    }

    fn in_domain(&self, x: &[f64]) -> bool {
        let y = transverse(x);
        let r = self.spec.guard_radius;
        self.h.min_distance(&y) > r && self.spec.v.min_distance(&y) > r
    }

    fn fd(&self) -> &FdConfig {
        &self.fd
    }
}
