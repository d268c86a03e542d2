//! Numerical differential geometry on a coordinate chart.
//!
//! Everything is built from point evaluators of the metric, 3-form and
//! dilaton, differentiated by central finite differences.

mod curvature;
mod fields;
mod grid;
mod spin;

pub use curvature::{
    bianchi_residual, christoffel, lie_derivative_metric, metric_compatibility, ricci, riemann, torsionful_connection,
};
pub use fields::{
    covariant_hessian, dh_residual, exterior_derivative, field_eq_residual, laplacian, FieldResidual,
};
pub use grid::{Grid, GridPoint};
pub use spin::{frame_data, gravitino_residual, spin_connection, spinor_max, vielbein_residual};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::form::RealForm;

pub type Mat = DMatrix<f64>;

/// Finite-difference settings.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FdConfig {
    pub step: f64,
    /// Per-coordinate multipliers of `step`; empty means all ones.
    #[serde(default)]
    pub coordinate_scale: Vec<f64>,
    /// 2 or 4.
    pub order: u8,
    #[serde(default)]
    pub richardson: bool,
}

impl Default for FdConfig {
    fn default() -> Self {
        Self { step: 1e-3, coordinate_scale: Vec::new(), order: 4, richardson: false }
    }
}

impl FdConfig {
    pub fn with_step(step: f64) -> Self {
        Self { step, ..Self::default() }
    }

    pub fn step_for(&self, dir: usize) -> f64 {
        self.step * self.coordinate_scale.get(dir).copied().unwrap_or(1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || self.coordinate_scale.iter().any(|s| !(*s > 0.0)) {
            return Err(Error::Spec("finite-difference step must be positive".into()));
        }
        if self.order != 2 && self.order != 4 {
            return Err(Error::Spec(format!("unsupported stencil order {}", self.order)));
        }
        Ok(())
    }
}

/// A chart carrying the bosonic fields.
pub trait Background: Sync {
    fn dim(&self) -> usize;

    /// Diagonal of the frame metric, e.g. `[-1, 1, …, 1]`.
    fn frame_metric(&self) -> Vec<f64> {
        let mut eta = vec![1.0; self.dim()];
        if self.dim() == 10 {
            eta[0] = -1.0;
        }
        eta
    }

    fn metric(&self, x: &[f64]) -> Mat;

    /// Coordinate components of `H`.
    fn three_form(&self, _x: &[f64]) -> RealForm {
        RealForm::zero(self.dim(), 3)
    }

    fn dilaton(&self, _x: &[f64]) -> f64 {
        0.0
    }

    /// `e^A_M` with rows labelled by frame index.
    fn vielbein(&self, _x: &[f64]) -> Option<Mat> {
        None
    }

    /// False inside excluded regions such as string centres.
    fn in_domain(&self, _x: &[f64]) -> bool {
        true
    }

    fn fd(&self) -> &FdConfig;
}

pub(crate) fn check_domain<B: Background + ?Sized>(bg: &B, x: &[f64]) -> Result<()> {
    if bg.in_domain(x) {
        Ok(())
    } else {
        Err(Error::Guard(x.to_vec()))
    }
}

/// Inverse metric, failing on degenerate input.
pub fn inverse(g: &Mat) -> Result<Mat> {
    let inv = g.clone().try_inverse().ok_or(Error::SingularMetric)?;
    if inv.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularMetric);
    }
    Ok(inv)
}

fn stencil(order: u8) -> &'static [(f64, f64)] {
    match order {
        2 => &[(-1.0, -0.5), (1.0, 0.5)],
        _ => &[(-2.0, 1.0 / 12.0), (-1.0, -8.0 / 12.0), (1.0, 8.0 / 12.0), (2.0, -1.0 / 12.0)],
    }
}

fn raw_partial(
    f: &dyn Fn(&[f64]) -> Result<Vec<f64>>,
    x: &[f64],
    dir: usize,
    h: f64,
    order: u8,
) -> Result<Vec<f64>> {
    let mut acc: Option<Vec<f64>> = None;
    let mut y = x.to_vec();
    for &(offset, weight) in stencil(order) {
        y[dir] = x[dir] + offset * h;
        let v = f(&y)?;
        match acc.as_mut() {
            None => acc = Some(v.iter().map(|a| a * weight / h).collect()),
            Some(a) => a.iter_mut().zip(&v).for_each(|(s, b)| *s += b * weight / h),
        }
    }
    Ok(acc.unwrap_or_default())
}

/// `∂_dir f(x)` for a vector-valued evaluator.
pub fn partial(
    f: &dyn Fn(&[f64]) -> Result<Vec<f64>>,
    x: &[f64],
    dir: usize,
    cfg: &FdConfig,
) -> Result<Vec<f64>> {
    let h = cfg.step_for(dir);
    let coarse = raw_partial(f, x, dir, h, cfg.order)?;
    if !cfg.richardson {
        return Ok(coarse);
    }
    let fine = raw_partial(f, x, dir, h / 2.0, cfg.order)?;
    let p = 2f64.powi(cfg.order as i32);
    Ok(fine.iter().zip(&coarse).map(|(a, b)| (p * a - b) / (p - 1.0)).collect())
}

/// All first partials, indexed `[dir][component]`.
pub fn gradient(
    f: &dyn Fn(&[f64]) -> Result<Vec<f64>>,
    x: &[f64],
    cfg: &FdConfig,
) -> Result<Vec<Vec<f64>>> {
    (0..x.len()).map(|d| partial(f, x, d, cfg)).collect()
}

/// Metric evaluator that respects the domain guard.
pub(crate) fn metric_at<B: Background + ?Sized>(bg: &B, x: &[f64]) -> Result<Mat> {
    check_domain(bg, x)?;
    let g = bg.metric(x);
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularMetric);
    }
    Ok(g)
}

/// Largest absolute entry.
pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Flat space with constant fields, mostly for tests and controls.
#[derive(Clone, Debug)]
pub struct Flat {
    pub eta: Vec<f64>,
    pub fd: FdConfig,
}

impl Flat {
    pub fn minkowski() -> Self {
        let mut eta = vec![1.0; 10];
        eta[0] = -1.0;
        Self { eta, fd: FdConfig::default() }
    }

    pub fn euclidean(n: usize) -> Self {
        Self { eta: vec![1.0; n], fd: FdConfig::default() }
    }
}

impl Background for Flat {
    fn dim(&self) -> usize {
        self.eta.len()
    }
    fn frame_metric(&self) -> Vec<f64> {
        self.eta.clone()
    }
    fn metric(&self, _x: &[f64]) -> Mat {
        Mat::from_diagonal(&nalgebra::DVector::from_vec(self.eta.clone()))
    }
    fn vielbein(&self, _x: &[f64]) -> Option<Mat> {
        Some(Mat::identity(self.dim(), self.dim()))
    }
    fn fd(&self) -> &FdConfig {
        &self.fd
    }
}

type MetricFn = Box<dyn Fn(&[f64]) -> Mat + Send + Sync>;
type FormFn = Box<dyn Fn(&[f64]) -> RealForm + Send + Sync>;
type ScalarFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GuardFn = Box<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// A background assembled from closures.
pub struct FnBackground {
    pub dim: usize,
    pub eta: Vec<f64>,
    pub metric: MetricFn,
    pub three_form: Option<FormFn>,
    pub dilaton: Option<ScalarFn>,
    pub vielbein: Option<MetricFn>,
    pub guard: Option<GuardFn>,
    pub fd: FdConfig,
}

impl FnBackground {
    pub fn new(dim: usize, metric: impl Fn(&[f64]) -> Mat + Send + Sync + 'static) -> Self {
        let mut eta = vec![1.0; dim];
        if dim == 10 {
            eta[0] = -1.0;
        }
        Self {
            dim,
            eta,
            metric: Box::new(metric),
            three_form: None,
            dilaton: None,
            vielbein: None,
            guard: None,
            fd: FdConfig::default(),
        }
    }

    pub fn with_eta(mut self, eta: Vec<f64>) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_three_form(mut self, h: impl Fn(&[f64]) -> RealForm + Send + Sync + 'static) -> Self {
        self.three_form = Some(Box::new(h));
        self
    }

    pub fn with_dilaton(mut self, phi: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        self.dilaton = Some(Box::new(phi));
        self
    }

    pub fn with_vielbein(mut self, e: impl Fn(&[f64]) -> Mat + Send + Sync + 'static) -> Self {
        self.vielbein = Some(Box::new(e));
        self
    }

    pub fn with_guard(mut self, g: impl Fn(&[f64]) -> bool + Send + Sync + 'static) -> Self {
        self.guard = Some(Box::new(g));
        self
    }

    pub fn with_fd(mut self, fd: FdConfig) -> Self {
        self.fd = fd;
        self
    }
}

impl Background for FnBackground {
    fn dim(&self) -> usize {
        self.dim
    }
    fn frame_metric(&self) -> Vec<f64> {
        self.eta.clone()
    }
    fn metric(&self, x: &[f64]) -> Mat {
        (self.metric)(x)
    }
    fn three_form(&self, x: &[f64]) -> RealForm {
        self.three_form.as_ref().map_or_else(|| RealForm::zero(self.dim, 3), |h| h(x))
    }
    fn dilaton(&self, x: &[f64]) -> f64 {
        self.dilaton.as_ref().map_or(0.0, |p| p(x))
    }
    fn vielbein(&self, x: &[f64]) -> Option<Mat> {
        self.vielbein.as_ref().map(|e| e(x))
    }
    fn in_domain(&self, x: &[f64]) -> bool {
        self.guard.as_ref().is_none_or(|g| g(x))
    }
    fn fd(&self) -> &FdConfig {
        &self.fd
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourth_order_is_exact_on_quartics() {
        let f = |x: &[f64]| -> Result<Vec<f64>> { Ok(vec![x[0].powi(4) - 2.0 * x[0]]) };
        let d = partial(&f, &[0.7], 0, &FdConfig::with_step(0.1)).unwrap();
        assert!((d[0] - (4.0 * 0.7f64.powi(3) - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn richardson_improves_second_order() {
        let f = |x: &[f64]| -> Result<Vec<f64>> { Ok(vec![x[0].sin()]) };
        let mut cfg = FdConfig { order: 2, ..FdConfig::with_step(0.05) };
        let plain = (partial(&f, &[0.3], 0, &cfg).unwrap()[0] - 0.3f64.cos()).abs();
        cfg.richardson = true;
        let rich = (partial(&f, &[0.3], 0, &cfg).unwrap()[0] - 0.3f64.cos()).abs();
        assert!(rich < plain / 100.0);
    }

    #[test]
    fn guard_blocks_stencil() {
        let bg = FnBackground::new(1, |_| Mat::identity(1, 1)).with_guard(|x| x[0] > 0.0);
        assert!(christoffel(&bg, &[0.0005]).is_err());
        assert!(christoffel(&bg, &[0.5]).is_ok());
    }

    #[test]
    fn rejects_bad_config() {
        assert!(FdConfig::with_step(0.0).validate().is_err());
        assert!(FdConfig { order: 3, ..FdConfig::default() }.validate().is_err());
    }
}
