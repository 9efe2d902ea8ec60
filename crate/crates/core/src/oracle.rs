//! Finite-difference recomputation of connection and curvature.
//!
//! Only component values of the metric (and of a potential field) are read,
//! through `Expr::eval`; nothing here touches symbolic derivatives.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chart::Chart;
use crate::check::{round_sig, CheckEntry, Status};
use crate::error::{GeometryError, Result};
use crate::metric::{Metric, DEGENERACY_THRESHOLD};
use crate::tensor::{multi_indices, TensorField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Central,
    /// One level of Richardson extrapolation on top of central differences.
    Richardson,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub h: f64,
    pub scheme: Scheme,
    pub sample_count: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            h: 1e-4,
            scheme: Scheme::Central,
            sample_count: 10,
            seed: 42,
            tolerance: 1e-6,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(GeometryError::Precondition(format!("step h = {} must be positive", self.h)));
        }
        if self.sample_count == 0 {
            return Err(GeometryError::Precondition("sample_count must be at least 1".into()));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(GeometryError::Precondition(format!(
                "tolerance {} must be positive",
                self.tolerance
            )));
        }
        Ok(())
    }

    pub fn with_h(self, h: f64) -> Self {
        OracleConfig { h, ..self }
    }
}

fn metric_at(metric: &Metric, p: &[f64]) -> Result<DMatrix<f64>> {
    let n = metric.dim();
    let values = metric.tensor().eval(p)?;
    Ok(DMatrix::from_row_slice(n, n, &values))
}

fn shifted(p: &[f64], axis: usize, step: f64) -> Vec<f64> {
    let mut q = p.to_vec();
    q[axis] += step;
    q
}

/// Metric at a stencil point, rejecting determinant sign changes and
/// near-degenerate values.
fn stencil_metric(metric: &Metric, p: &[f64], sign: f64) -> Result<DMatrix<f64>> {
    let m = metric_at(metric, p)?;
    let det = m.determinant();
    if !det.is_finite() || det.abs() < DEGENERACY_THRESHOLD || det.signum() != sign {
        return Err(GeometryError::Stencil {
            point: p.to_vec(),
            reason: format!("metric determinant {det:e}"),
        });
    }
    Ok(m)
}

/// `f'(0)` from values at `±h` (and `±h/2` for Richardson).
fn differentiate<F>(f: &mut F, scheme: Scheme, h: f64) -> Result<Vec<f64>>
where
    F: FnMut(f64) -> Result<Vec<f64>>,
{
    let central = |f: &mut F, h: f64| -> Result<Vec<f64>> {
        let (plus, minus) = (f(h)?, f(-h)?);
        Ok(plus.iter().zip(&minus).map(|(a, b)| (a - b) / (2.0 * h)).collect())
    };
    let coarse = central(f, h)?;
    match scheme {
        Scheme::Central => Ok(coarse),
        Scheme::Richardson => {
            let fine = central(f, h / 2.0)?;
            Ok(fine.iter().zip(&coarse).map(|(a, b)| (4.0 * a - b) / 3.0).collect())
        }
    }
}

/// `Γ^k_ij` at `[k][i][j]`, row-major.
pub fn fd_christoffel(metric: &Metric, point: &[f64], cfg: &OracleConfig) -> Result<Vec<f64>> {
    let n = metric.dim();
    let g = metric_at(metric, point)?;
    let sign = g.determinant().signum();
    let g = stencil_metric(metric, point, sign)?;
    let ginv = g.clone().try_inverse().ok_or_else(|| GeometryError::Stencil {
        point: point.to_vec(),
        reason: "metric matrix is not invertible".into(),
    })?;
    // dg[l][i*n + j] = ∂_l g_ij
    let mut dg = Vec::with_capacity(n);
    for l in 0..n {
        let mut at = |t: f64| -> Result<Vec<f64>> {
            Ok(stencil_metric(metric, &shifted(point, l, t), sign)?.transpose().as_slice().to_vec())
        };
        dg.push(differentiate(&mut at, cfg.scheme, cfg.h)?);
    }
    let d = |l: usize, i: usize, j: usize| dg[l][i * n + j];
    let mut gamma = vec![0.0; n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                gamma[(k * n + i) * n + j] = 0.5
                    * (0..n)
                        .map(|l| ginv[(k, l)] * (d(i, j, l) + d(j, i, l) - d(l, i, j)))
                        .sum::<f64>();
            }
        }
    }
    Ok(gamma)
}

/// `R^a_bcd` at `[a][b][c][d]` from differences of [`fd_christoffel`].
pub fn fd_riemann(metric: &Metric, point: &[f64], cfg: &OracleConfig) -> Result<Vec<f64>> {
    let n = metric.dim();
    let gamma = fd_christoffel(metric, point, cfg)?;
    let mut dgamma = Vec::with_capacity(n);
    for c in 0..n {
        let mut at = |t: f64| fd_christoffel(metric, &shifted(point, c, t), cfg);
        dgamma.push(differentiate(&mut at, cfg.scheme, cfg.h)?);
    }
    let gm = |k: usize, i: usize, j: usize| gamma[(k * n + i) * n + j];
    let dgm = |c: usize, k: usize, i: usize, j: usize| dgamma[c][(k * n + i) * n + j];
    let mut out = vec![0.0; n.pow(4)];
    for (flat, idx) in multi_indices(4, n).enumerate() {
        let (a, b, c, d) = (idx[0], idx[1], idx[2], idx[3]);
        let mut v = dgm(c, a, d, b) - dgm(d, a, c, b);
        for e in 0..n {
            v += gm(a, c, e) * gm(e, d, b) - gm(a, d, e) * gm(e, c, b);
        }
        out[flat] = v;
    }
    Ok(out)
}

/// Weighted-trace Ricci tensor `S_xy = R^a_{y a x}`.
pub fn fd_ricci(metric: &Metric, point: &[f64], cfg: &OracleConfig) -> Result<Vec<f64>> {
    let n = metric.dim();
    let r = fd_riemann(metric, point, cfg)?;
    let at = |a: usize, b: usize, c: usize, d: usize| r[((a * n + b) * n + c) * n + d];
    Ok((0..n * n).map(|k| (0..n).map(|a| at(a, k % n, a, k / n)).sum()).collect())
}

/// `(£_V g)_ij = V^k ∂_k g_ij + g_kj ∂_i V^k + g_ik ∂_j V^k`.
pub fn fd_lie_derivative(metric: &Metric, v: &TensorField, point: &[f64], cfg: &OracleConfig) -> Result<Vec<f64>> {
    let n = metric.dim();
    let g = metric_at(metric, point)?;
    let sign = g.determinant().signum();
    let vp = v.eval(point)?;
    let mut dg = Vec::with_capacity(n);
    let mut dv = Vec::with_capacity(n);
    for l in 0..n {
        let mut at_g = |t: f64| -> Result<Vec<f64>> {
            Ok(stencil_metric(metric, &shifted(point, l, t), sign)?.transpose().as_slice().to_vec())
        };
        dg.push(differentiate(&mut at_g, cfg.scheme, cfg.h)?);
        let mut at_v = |t: f64| -> Result<Vec<f64>> { Ok(v.eval(&shifted(point, l, t))?) };
        dv.push(differentiate(&mut at_v, cfg.scheme, cfg.h)?);
    }
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = (0..n)
                .map(|k| vp[k] * dg[k][i * n + j] + g[(k, j)] * dv[i][k] + g[(i, k)] * dv[j][k])
                .sum();
        }
    }
    Ok(out)
}

/// Seeded samples of the domain box away from metric degeneracy.
pub fn sample_points(metric: &Metric, chart: &Chart, cfg: &OracleConfig) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::with_capacity(cfg.sample_count);
    let reach = 3.0 * cfg.h;
    for _ in 0..cfg.sample_count * 50 {
        if out.len() == cfg.sample_count {
            break;
        }
        let p: Vec<f64> = chart.domain_box().iter().map(|&(lo, hi)| rng.gen_range(lo..=hi)).collect();
        if stencil_is_clear(metric, &p, reach) {
            out.push(p);
        }
    }
    out
}

fn stencil_is_clear(metric: &Metric, p: &[f64], reach: f64) -> bool {
    let Ok(center) = metric_at(metric, p) else {
        return false;
    };
    let sign = center.determinant().signum();
    let n = p.len();
    let corners = (0..n).flat_map(|i| (0..n).map(move |j| (i, j)));
    for (i, j) in corners {
        for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            let q = shifted(&shifted(p, i, si * reach), j, sj * reach);
            if stencil_metric(metric, &q, sign).is_err() {
                return false;
            }
        }
    }
    stencil_metric(metric, p, sign).is_ok()
}

/// Worst relative deviation `|s - o| / max(1, |s|)` over points and components.
pub fn compare<F>(id: &str, symbolic: &TensorField, oracle: F, points: &[Vec<f64>], cfg: &OracleConfig) -> Result<CheckEntry>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let len = symbolic.components().len();
    let mut worst = (0.0f64, 0usize, vec![0; symbolic.rank()]);
    for (k, p) in points.iter().enumerate() {
        let sym = symbolic.eval(p)?;
        let num = oracle(p)?;
        if num.len() != len {
            return Err(GeometryError::Dimension {
                what: format!("oracle output for {id}"),
                expected: len,
                got: num.len(),
            });
        }
        for ((s, o), idx) in sym.iter().zip(&num).zip(multi_indices(symbolic.rank(), symbolic.dim())) {
            let dev = (s - o).abs() / s.abs().max(1.0);
            if dev > worst.0 || dev.is_nan() {
                worst = (dev, k, idx);
            }
        }
    }
    let passed = worst.0 <= cfg.tolerance;
    let status = if passed { Status::Pass } else { Status::Fail };
    let details = format!(
        "{} points, h={:e}, {:?}; worst relative deviation at point {} component {:?}",
        points.len(),
        cfg.h,
        cfg.scheme,
        worst.1,
        worst.2
    );
    Ok(CheckEntry {
        id: id.to_string(),
        status,
        symbolic_zero: passed,
        numeric_max: Some(round_sig(worst.0)),
        details,
    })
}

/// Worst absolute deviation between symbolic Γ and the oracle at step `h`.
pub fn christoffel_deviation(metric: &Metric, symbolic: &TensorField, points: &[Vec<f64>], cfg: &OracleConfig) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in points {
        let sym = symbolic.eval(p)?;
        let num = fd_christoffel(metric, p, cfg)?;
        for (s, o) in sym.iter().zip(&num) {
            worst = worst.max((s - o).abs());
        }
    }
    Ok(worst)
}
