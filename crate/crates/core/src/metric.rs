//! Two-chart flat conformal metric on the Riemann sphere built from the
//! determinant polynomial f: conformal factors, discrete-Laplacian curvature,
//! conical singularities, cone angles and metric distances.

use crate::poly::{self, cx, Cx, Poly, PolyError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Exclusion radius around singularities for grid sweeps.
pub const EXCLUSION_RADIUS: f64 = 0.05;

/// Standard chart covers |w| < 1.2, infinity chart |w| > 1.2; the band in
/// between is the overlap used by consistency checks.
pub const CHART_SPLIT: f64 = 1.2;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("point is a conical singularity of the metric")]
    SingularPointHit,
    #[error("finite-difference stencil touches a singularity")]
    StencilTouchesSingularity,
    #[error("circle of radius {radius} does not isolate the singularity")]
    NonIsolating { radius: f64 },
    #[error("coordinate segment passes too close to another singularity")]
    SegmentObstruction,
    #[error("point not representable in the requested chart")]
    ChartOverflow,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chart {
    Standard,
    Infinity,
}

/// A sphere point in one of the two stereographic charts; the same point is
/// (standard, w) and (infinity, 1/w) for w != 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartPoint {
    pub chart: Chart,
    pub w: Cx,
}

impl ChartPoint {
    pub fn standard(w: Cx) -> Self {
        ChartPoint { chart: Chart::Standard, w }
    }

    pub fn infinity(w: Cx) -> Self {
        ChartPoint { chart: Chart::Infinity, w }
    }

    /// The same sphere point in the other chart; fails at the chart origin.
    pub fn flip(&self) -> Result<ChartPoint, MetricError> {
        if self.w.norm() == 0.0 {
            return Err(MetricError::ChartOverflow);
        }
        Ok(ChartPoint {
            chart: match self.chart {
                Chart::Standard => Chart::Infinity,
                Chart::Infinity => Chart::Standard,
            },
            w: cx(1.0, 0.0) / self.w,
        })
    }

    pub fn into_chart(&self, chart: Chart) -> Result<ChartPoint, MetricError> {
        if self.chart == chart {
            Ok(*self)
        } else {
            self.flip()
        }
    }
}

/// Conical singularity: a zero of f of order k, carrying cone angle
/// 2*pi*(1 - k/n) and angular defect 2*pi*k/n.
#[derive(Debug, Clone)]
pub struct SingularPoint {
    pub location: ChartPoint,
    pub order: usize,
    pub cone_angle: f64,
    pub defect: f64,
}

impl SingularPoint {
    fn new(location: ChartPoint, order: usize, n: usize) -> Self {
        let ratio = order as f64 / n as f64;
        SingularPoint {
            location,
            order,
            cone_angle: TAU * (1.0 - ratio),
            defect: TAU * ratio,
        }
    }
}

/// The metric g = |f(w)|^{-2/n} |dw|^2 in the standard chart, glued over the
/// infinity chart by the representative f~(w) = w^{2n} f(1/w).
#[derive(Debug, Clone)]
pub struct ConformalMetric {
    f: Poly,
    n: usize,
    f_inf: Poly,
    zeros_std: Vec<(Cx, usize)>,
    zeros_inf: Vec<(Cx, usize)>,
}

impl ConformalMetric {
    /// Builds the metric for the determinant polynomial `f` of a degree-`n`
    /// input; locates all singularities up front (root-finder failures
    /// propagate).
    pub fn new(f: Poly, n: usize, tol_root: f64) -> Result<Self, MetricError> {
        assert!(n >= 1, "degree must be positive");
        let f_inf = f.reverse_to_degree(2 * n);
        let zeros_std = if f.is_zero() || f.degree() < 1 {
            Vec::new()
        } else {
            poly::roots(&f, tol_root)?.entries
        };
        // Zeros in the infinity chart: reciprocals of the finite nonzero
        // zeros, plus the chart origin when deg f < 2n.
        let mut zeros_inf: Vec<(Cx, usize)> = Vec::new();
        let k_inf = 2 * n - if f.is_zero() { 0 } else { f.degree() };
        if k_inf > 0 {
            zeros_inf.push((cx(0.0, 0.0), k_inf));
        }
        for &(w, k) in &zeros_std {
            if w.norm() > 0.0 {
                zeros_inf.push((cx(1.0, 0.0) / w, k));
            }
        }
        zeros_inf.sort_by(|a, b| (a.0.re, a.0.im).partial_cmp(&(b.0.re, b.0.im)).unwrap());
        Ok(ConformalMetric { f, n, f_inf, zeros_std, zeros_inf })
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn f_inf(&self) -> &Poly {
        &self.f_inf
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn chart_poly(&self, chart: Chart) -> &Poly {
        match chart {
            Chart::Standard => &self.f,
            Chart::Infinity => &self.f_inf,
        }
    }

    pub fn chart_zeros(&self, chart: Chart) -> &[(Cx, usize)] {
        match chart {
            Chart::Standard => &self.zeros_std,
            Chart::Infinity => &self.zeros_inf,
        }
    }

    /// Distance from `w` to the nearest singularity in the same chart.
    pub fn nearest_singularity(&self, chart: Chart, w: Cx) -> f64 {
        self.chart_zeros(chart)
            .iter()
            .map(|&(z, _)| (z - w).norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn log_abs_f(&self, chart: Chart, w: Cx) -> f64 {
        self.chart_poly(chart).eval(w).norm().ln()
    }

    /// Conformal factor lambda = |f_chart(w)|^{-2/n}; errors at singularities.
    pub fn conformal_factor(&self, pt: ChartPoint) -> Result<f64, MetricError> {
        let fw = self.chart_poly(pt.chart).eval(pt.w).norm();
        let scale = self.chart_poly(pt.chart).eval_scale(pt.w).max(1e-300);
        if fw <= 1e-14 * scale && self.nearest_singularity(pt.chart, pt.w) <= fusion_guard(pt.w) {
            return Err(MetricError::SingularPointHit);
        }
        if fw == 0.0 {
            return Err(MetricError::SingularPointHit);
        }
        Ok(fw.powf(-2.0 / self.n as f64))
    }

    fn sqrt_factor(&self, chart: Chart, w: Cx) -> f64 {
        self.chart_poly(chart).eval(w).norm().powf(-1.0 / self.n as f64)
    }

    /// Relative mismatch of the line element between the two charts at the
    /// overlap point w: lambda_std(w) should equal lambda_inf(1/w)/|w|^4.
    pub fn chart_consistency(&self, w: Cx) -> Result<f64, MetricError> {
        if w.norm() == 0.0 {
            return Err(MetricError::ChartOverflow);
        }
        let l_std = self.conformal_factor(ChartPoint::standard(w))?;
        let l_inf = self.conformal_factor(ChartPoint::infinity(cx(1.0, 0.0) / w))?;
        let glued = l_inf / w.norm().powi(4);
        Ok((l_std - glued).abs() / l_std.max(glued))
    }

    /// Harmonicity residual: finite-difference estimate of the Laplacian of
    /// log|f| at the point. Away from zeros of f the exact value is zero.
    ///
    /// The step is capped at a fraction of the distance to the nearest zero
    /// and the two-step estimates are Richardson-extrapolated, so `h` acts as
    /// an upper bound on the stencil width.
    pub fn log_factor_laplacian(&self, pt: ChartPoint, h: f64) -> Result<f64, MetricError> {
        let p = self.chart_poly(pt.chart);
        if p.is_zero() || p.degree() == 0 {
            return Ok(0.0); // constant representative: exactly harmonic
        }
        let d = self.nearest_singularity(pt.chart, pt.w);
        let h_eff = effective_step(h, d);
        if d <= 2.0 * h_eff {
            return Err(MetricError::StencilTouchesSingularity);
        }
        let chart = pt.chart;
        Ok(richardson_laplacian(
            |w| self.log_abs_f(chart, w),
            pt.w,
            h_eff,
        ))
    }

    /// Gaussian curvature K = (1/n) |f|^{2/n} * Laplacian(log|f|); expected
    /// to vanish away from the singularities.
    pub fn gaussian_curvature(&self, pt: ChartPoint, h: f64) -> Result<f64, MetricError> {
        let lap = self.log_factor_laplacian(pt, h)?;
        let fw = self.chart_poly(pt.chart).eval(pt.w).norm();
        Ok(fw.powf(2.0 / self.n as f64) / self.n as f64 * lap)
    }

    /// Deviation u from the round metric: g = e^{2u} g0, u = log(lambda/lambda0)/2.
    pub fn conformal_deviation_u(&self, pt: ChartPoint) -> Result<f64, MetricError> {
        let lam = self.conformal_factor(pt)?;
        Ok(0.5 * (lam / round_metric_factor(pt.w)).ln())
    }

    /// Laplace-Beltrami of u with respect to the round metric; equals 1 at
    /// every smooth point.
    pub fn laplace_beltrami_u(&self, pt: ChartPoint, h: f64) -> Result<f64, MetricError> {
        let d = self.nearest_singularity(pt.chart, pt.w);
        let h_eff = effective_step(h, d);
        if d <= 2.0 * h_eff {
            return Err(MetricError::StencilTouchesSingularity);
        }
        let n = self.n as f64;
        let chart = pt.chart;
        let u = |w: Cx| -> f64 {
            -self.log_abs_f(chart, w) / n - 0.5 * round_metric_factor(w).ln()
        };
        Ok(richardson_laplacian(u, pt.w, h_eff) / round_metric_factor(pt.w))
    }

    /// All conical singularities on the sphere: finite zeros of f in the
    /// standard chart plus the point at infinity when deg f < 2n. The orders
    /// always sum to 2n.
    pub fn singular_points(&self) -> Vec<SingularPoint> {
        let mut pts: Vec<SingularPoint> = self
            .zeros_std
            .iter()
            .map(|&(w, k)| SingularPoint::new(ChartPoint::standard(w), k, self.n))
            .collect();
        let k_inf = 2 * self.n - if self.f.is_zero() { 0 } else { self.f.degree() };
        if k_inf > 0 {
            pts.push(SingularPoint::new(
                ChartPoint::infinity(cx(0.0, 0.0)),
                k_inf,
                self.n,
            ));
        }
        debug_assert_eq!(pts.iter().map(|s| s.order).sum::<usize>(), 2 * self.n);
        pts
    }

    /// Numeric cone angle at `center`: circumference of the metric circle of
    /// coordinate radius r divided by its mean metric radius. `order` is the
    /// zero order at the center (0 probes a smooth point).
    pub fn cone_angle_numeric(
        &self,
        center: ChartPoint,
        order: usize,
        r: f64,
    ) -> Result<f64, MetricError> {
        self.check_isolation(center, order, r)?;
        let n_samples = 512;
        let chart = center.chart;
        let mut circumference = 0.0;
        for j in 0..n_samples {
            let th = TAU * (j as f64) / (n_samples as f64);
            let w = center.w + Cx::from_polar(r, th);
            circumference += self.sqrt_factor(chart, w) * r * TAU / (n_samples as f64);
        }
        let n_rays = 32;
        let mut radius = 0.0;
        for j in 0..n_rays {
            let th = TAU * (j as f64) / (n_rays as f64) + 0.11;
            radius += self.radial_length(center, th, r, order) / (n_rays as f64);
        }
        Ok(circumference / radius)
    }

    /// Metric length of the coordinate-radial segment of length `r` ending at
    /// `center`, where the metric has a zero of the given order (0 = smooth).
    /// For order < n the integrable endpoint singularity is removed by the
    /// substitution t = tau^{n/(n-k)}; for order >= n the divergent end is
    /// cut off at a relative radius of 1e-12.
    pub fn radial_length(&self, center: ChartPoint, theta: f64, r: f64, order: usize) -> f64 {
        let chart = center.chart;
        let dir = Cx::from_polar(1.0, theta);
        let lam_sqrt = |t: f64| self.sqrt_factor(chart, center.w + dir * t);
        if order == 0 {
            adaptive_simpson(&|t| lam_sqrt(t), 0.0, r, 1e-10, 20)
        } else if order < self.n {
            let q = self.n as f64 / (self.n - order) as f64;
            let upper = r.powf(1.0 / q);
            let g = |tau: f64| lam_sqrt(tau.powf(q)) * q * tau.powf(q - 1.0);
            // Cut off well above the floating-point floor of center.w + dir*t;
            // below it f evaluates to rounding noise. The substituted
            // integrand is constant to first order near 0, so the head
            // contributes g(tau0) * tau0.
            let t_floor = 1e-8 * (1.0 + center.w.norm());
            let tau0 = t_floor.powf(1.0 / q).min(0.5 * upper);
            adaptive_simpson(&g, tau0, upper, 1e-10, 20) + g(tau0) * tau0
        } else {
            // divergent end: integrate in log radius down to a cutoff
            let a = r * 1e-12;
            let g = |s: f64| {
                let t = s.exp();
                lam_sqrt(t) * t
            };
            adaptive_simpson(&g, a.ln(), r.ln(), 1e-10, 22)
        }
    }

    fn check_isolation(&self, center: ChartPoint, order: usize, r: f64) -> Result<(), MetricError> {
        for &(z, _) in self.chart_zeros(center.chart) {
            let d = (z - center.w).norm();
            let is_center = d <= fusion_guard(center.w);
            if is_center && order == 0 {
                return Err(MetricError::SingularPointHit);
            }
            if !is_center && d <= r * (1.0 + 1e-9) {
                return Err(MetricError::NonIsolating { radius: r });
            }
        }
        Ok(())
    }

    /// Metric length of the straight coordinate segment from `from` to the
    /// singularity, or a divergence verdict for cusp ends (order >= n).
    pub fn distance_to_singularity(
        &self,
        from: ChartPoint,
        s: &SingularPoint,
    ) -> Result<DistanceVerdict, MetricError> {
        let chart = s.location.chart;
        let from = from.into_chart(chart)?;
        let delta = from.w - s.location.w;
        let len = delta.norm();
        if len == 0.0 {
            return Ok(DistanceVerdict::Finite { length: 0.0 });
        }
        // the segment must stay clear of every other singularity
        for &(z, _) in self.chart_zeros(chart) {
            if (z - s.location.w).norm() <= fusion_guard(s.location.w) {
                continue;
            }
            if segment_distance(s.location.w, from.w, z) < 10.0 * fusion_guard(z) {
                return Err(MetricError::SegmentObstruction);
            }
        }
        let theta = delta.arg();
        if s.order < self.n {
            let length = self.radial_length(s.location, theta, len, s.order);
            Ok(DistanceVerdict::Finite { length })
        } else {
            // growth between cutoffs 1e-3 and 1e-6 against the local scale
            let dir = Cx::from_polar(1.0, theta);
            let outer = len.min(1e-2);
            let scale = self.sqrt_factor(chart, s.location.w + dir * 1e-3) * 1e-3;
            let partial = |a: f64| {
                let g = |t: f64| {
                    let x = t.exp();
                    self.sqrt_factor(chart, s.location.w + dir * x) * x
                };
                adaptive_simpson(&g, a.ln(), outer.ln(), 1e-10, 22)
            };
            let i1 = partial(1e-3);
            let i2 = partial(1e-6);
            let head = adaptive_simpson(
                &|t| self.sqrt_factor(chart, s.location.w + dir * t),
                outer,
                len,
                1e-10,
                20,
            );
            if i2 - i1 >= 0.9 * (1e3f64).ln() * scale {
                Ok(DistanceVerdict::Infinite { partial_length: head + i1 })
            } else {
                Ok(DistanceVerdict::Finite { length: head + i2 })
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum DistanceVerdict {
    Finite { length: f64 },
    Infinite { partial_length: f64 },
}

/// Round-sphere conformal factor 4/(1+|w|^2)^2 (the same formula in either
/// chart).
pub fn round_metric_factor(w: Cx) -> f64 {
    let s = 1.0 + w.norm_sqr();
    4.0 / (s * s)
}

/// Curvature of the round metric computed with the same stencil machinery;
/// an independent check that the numerics recover K = 1.
pub fn round_metric_curvature_stencil(w: Cx, h: f64) -> f64 {
    let lap = richardson_laplacian(|v| round_metric_factor(v).ln(), w, h);
    -lap / (2.0 * round_metric_factor(w))
}

/// Curvature of an arbitrary conformal factor via the stencil; used by the
/// homothety controls in the tests.
pub fn conformal_curvature_stencil(factor: &dyn Fn(Cx) -> f64, w: Cx, h: f64) -> f64 {
    let lap = richardson_laplacian(|v| factor(v).ln(), w, h);
    -lap / (2.0 * factor(w))
}

fn fusion_guard(w: Cx) -> f64 {
    poly::fusion_radius(w)
}

/// Step cap: keeps the 5-point truncation error (~ k h^2 / d^4) bounded even
/// close to a zero of f; `h` is the caller's upper bound.
fn effective_step(h: f64, d: f64) -> f64 {
    if d.is_finite() {
        h.min(0.005 * d)
    } else {
        h
    }
}

/// 5-point stencil Laplacian.
fn laplacian5(g: &dyn Fn(Cx) -> f64, w: Cx, h: f64) -> f64 {
    let c = g(w);
    let sum = g(w + cx(h, 0.0)) + g(w - cx(h, 0.0)) + g(w + cx(0.0, h)) + g(w - cx(0.0, h));
    (sum - 4.0 * c) / (h * h)
}

/// Richardson extrapolation of two 5-point stencils (steps h and h/2),
/// cancelling the leading h^2 truncation term.
fn richardson_laplacian(g: impl Fn(Cx) -> f64, w: Cx, h: f64) -> f64 {
    let coarse = laplacian5(&g, w, h);
    let fine = laplacian5(&g, w, h / 2.0);
    (4.0 * fine - coarse) / 3.0
}

/// Distance from point `p` to the segment [a, b].
fn segment_distance(a: Cx, b: Cx, p: Cx) -> f64 {
    let ab = b - a;
    let denom = ab.norm_sqr();
    if denom == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / denom;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Adaptive Simpson quadrature.
pub fn adaptive_simpson(g: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64, max_depth: u32) -> f64 {
    fn simpson(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn rec(
        g: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = g(lm);
        let frm = g(rm);
        let left = simpson(a, fa, m, fm, flm);
        let right = simpson(m, fm, b, fb, frm);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(g, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1)
            + rec(g, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    let fa = g(a);
    let fb = g(b);
    let m = 0.5 * (a + b);
    let fm = g(m);
    let whole = simpson(a, fa, b, fb, fm);
    let tol = rel_tol * whole.abs().max(1e-30);
    rec(g, a, fa, b, fb, fm, whole, tol, max_depth)
}
