//! Dense complex univariate polynomials: arithmetic, coefficient reversal,
//! simultaneous-iteration root finding and an argument-principle zero counter.

use num_complex::Complex64;
use thiserror::Error;

pub type Cx = Complex64;

pub fn cx(re: f64, im: f64) -> Cx {
    Cx::new(re, im)
}

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("division by the zero polynomial")]
    ZeroModulus,
    #[error("non-finite coefficient")]
    NonFinite,
    #[error("root finder did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize, partial: Vec<Cx> },
    #[error("a zero lies too close to the integration contour")]
    ZeroOnContour,
    #[error("argument-principle quadrature failed to settle on an integer")]
    ContourNonConvergence,
}

/// Dense polynomial, `coeffs[i]` multiplying `w^i`. The zero polynomial is
/// the empty list; otherwise the last coefficient is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<Cx>,
}

impl Poly {
    /// Build from a coefficient list, trimming exactly-zero leading terms.
    pub fn new(mut coeffs: Vec<Cx>) -> Poly {
        while let Some(c) = coeffs.last() {
            if c.re == 0.0 && c.im == 0.0 {
                coeffs.pop();
            } else {
                break;
            }
        }
        Poly { coeffs }
    }

    /// Checked constructor: rejects NaN/Inf coefficients.
    pub fn checked(coeffs: Vec<Cx>) -> Result<Poly, PolyError> {
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(PolyError::NonFinite);
        }
        Ok(Poly::new(coeffs))
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Cx) -> Poly {
        Poly::new(vec![c])
    }

    pub fn from_real(coeffs: &[f64]) -> Poly {
        Poly::new(coeffs.iter().map(|&r| cx(r, 0.0)).collect())
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Cx]) -> Poly {
        let mut p = Poly::constant(cx(1.0, 0.0));
        for &r in roots {
            p = p.multiply(&Poly::new(vec![-r, cx(1.0, 0.0)]));
        }
        p
    }

    pub fn coeffs(&self) -> &[Cx] {
        &self.coeffs
    }

    /// Coefficient of `w^i`, zero beyond the stored length.
    pub fn coeff(&self, i: usize) -> Cx {
        self.coeffs.get(i).copied().unwrap_or_else(|| cx(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports 0 by convention of the callers here,
    /// which all guard on `is_zero` first.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Cx {
        *self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, w: Cx) -> Cx {
        let mut acc = cx(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * w + c;
        }
        acc
    }

    /// Magnitude bound `sum |a_i| |w|^i`; the natural backward-error scale
    /// for evaluation at `w`.
    pub fn eval_scale(&self, w: Cx) -> f64 {
        let r = w.norm();
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * r + c.norm();
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| c * ((i + 1) as f64))
                .collect(),
        )
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn scale(&self, s: Cx) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn multiply(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![cx(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Splits into `(monic, leading)` with `self = monic * leading`.
    pub fn monic(&self) -> Result<(Poly, Cx), PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let lead = self.leading();
        Ok((self.scale(cx(1.0, 0.0) / lead), lead))
    }

    /// Remainder of `self` modulo `p` (p normalized monic internally).
    pub fn mod_reduce(&self, p: &Poly) -> Result<Poly, PolyError> {
        if p.is_zero() {
            return Err(PolyError::ZeroModulus);
        }
        let (pm, _) = p.monic()?;
        let n = pm.degree();
        if n == 0 {
            return Ok(Poly::zero());
        }
        let mut rem: Vec<Cx> = self.coeffs.clone();
        while rem.len() > n {
            let lead = *rem.last().unwrap();
            let top = rem.len() - 1;
            for i in 0..n {
                let v = rem[top - n + i] - lead * pm.coeff(i);
                rem[top - n + i] = v;
            }
            rem.pop();
        }
        Ok(Poly::new(rem))
    }

    /// `p*(w) = w^{deg p} p(1/w)`: the coefficient list reversed, then trimmed.
    pub fn reverse(&self) -> Result<Poly, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut rev = self.coeffs.clone();
        rev.reverse();
        Ok(Poly::new(rev))
    }

    /// `w^d p(1/w)` for a fixed degree bound `d >= deg p`; does not trim the
    /// low end, so zeros of `p` at the origin show up as a degree drop.
    pub fn reverse_to_degree(&self, d: usize) -> Poly {
        let mut rev = vec![cx(0.0, 0.0); d + 1];
        for i in 0..=d.min(self.coeffs.len().saturating_sub(1)) {
            rev[d - i] = self.coeff(i);
        }
        Poly::new(rev)
    }

    /// Drop coefficients below `rel_tol * max|coeff|` at the leading end.
    pub fn trim_leading(&self, rel_tol: f64) -> Poly {
        let scale = self.max_coeff_norm();
        let mut coeffs = self.coeffs.clone();
        while let Some(c) = coeffs.last() {
            if c.norm() <= rel_tol * scale {
                coeffs.pop();
            } else {
                break;
            }
        }
        Poly::new(coeffs)
    }
}

/// Roots with multiplicities obtained by cluster fusion.
#[derive(Debug, Clone)]
pub struct RootSet {
    pub entries: Vec<(Cx, usize)>,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }
}

/// Fusion radius below which nearby approximations count as one multiple root.
pub fn fusion_radius(w: Cx) -> f64 {
    1e-6 * (1.0 + w.norm())
}

const ABERTH_MAX_ITER: usize = 800;

/// All roots of `p` by Aberth-Ehrlich simultaneous iteration with Newton
/// polishing, followed by cluster fusion into multiplicities.
///
/// Each returned location `w0` satisfies `|p(w0)| <= tol_root * scale(w0)`,
/// otherwise the non-converged approximations are reported as partial results.
pub fn roots(p: &Poly, tol_root: f64) -> Result<RootSet, PolyError> {
    if p.is_zero() || p.degree() < 1 {
        return Err(PolyError::ZeroPolynomial);
    }
    let (pm, _) = p.monic()?;

    // Deflate roots at the origin first: trailing coefficients at the noise
    // floor would otherwise make the residual validation impossible near 0.
    let scale = pm.max_coeff_norm();
    let mut origin_order = 0;
    while origin_order < pm.degree() && pm.coeff(origin_order).norm() <= 1e-12 * scale {
        origin_order += 1;
    }
    let pm = if origin_order > 0 {
        Poly::new(pm.coeffs()[origin_order..].to_vec())
    } else {
        pm
    };
    if pm.degree() == 0 {
        return Ok(RootSet {
            entries: vec![(cx(0.0, 0.0), origin_order)],
        });
    }

    let deg = pm.degree();
    let dp = pm.derivative();

    // Initial points on a scaled circle (Cauchy bound), angles offset so no
    // starting point sits on a coordinate axis.
    let bound = 1.0 + pm.coeffs().iter().take(deg).map(|c| c.norm()).fold(0.0, f64::max);
    let mut ws: Vec<Cx> = (0..deg)
        .map(|j| {
            let th = 2.0 * std::f64::consts::PI * (j as f64) / (deg as f64) + 0.3931;
            Cx::from_polar(bound, th)
        })
        .collect();

    let mut iterations = 0;
    for it in 0..ABERTH_MAX_ITER {
        iterations = it + 1;
        let mut max_step = 0.0f64;
        for i in 0..deg {
            let w = ws[i];
            let pv = pm.eval(w);
            if pv.norm() <= 1e-3 * tol_root * pm.eval_scale(w) {
                continue;
            }
            let mut dv = dp.eval(w);
            if dv.norm() == 0.0 {
                dv = cx(1e-290, 0.0);
            }
            let newton = pv / dv;
            let mut s = cx(0.0, 0.0);
            for j in 0..deg {
                if j != i {
                    let d = w - ws[j];
                    if d.norm() > 1e-290 {
                        s += cx(1.0, 0.0) / d;
                    }
                }
            }
            let mut denom = cx(1.0, 0.0) - newton * s;
            if denom.norm() < 1e-290 {
                denom = cx(1e-290, 0.0);
            }
            let step = newton / denom;
            ws[i] = w - step;
            let rel = step.norm() / (1.0 + ws[i].norm());
            if rel > max_step {
                max_step = rel;
            }
        }
        if max_step <= 5e-15 {
            break;
        }
    }

    // Newton polish; for multiple roots this converges linearly, which still
    // tightens the cluster before fusion.
    for w in ws.iter_mut() {
        let mut cur = *w;
        let mut best = cur;
        let mut best_res = pm.eval(cur).norm();
        for _ in 0..40 {
            let dv = dp.eval(cur);
            if dv.norm() == 0.0 {
                break;
            }
            cur -= pm.eval(cur) / dv;
            let res = pm.eval(cur).norm();
            if res < best_res {
                best_res = res;
                best = cur;
            } else if res > 4.0 * best_res {
                break;
            }
        }
        *w = best;
    }

    // Cluster fusion: greedy assignment within the fusion radius, locations
    // replaced by cluster means.
    let mut sorted = ws.clone();
    sorted.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    let mut clusters: Vec<Vec<Cx>> = Vec::new();
    for w in sorted {
        let mut placed = false;
        for cl in clusters.iter_mut() {
            let mean = cl.iter().sum::<Cx>() / (cl.len() as f64);
            if (mean - w).norm() <= fusion_radius(mean) {
                cl.push(w);
                placed = true;
                break;
            }
        }
        if !placed {
            clusters.push(vec![w]);
        }
    }
    let mut entries: Vec<(Cx, usize)> = clusters
        .iter()
        .map(|cl| (cl.iter().sum::<Cx>() / (cl.len() as f64), cl.len()))
        .collect();
    entries.sort_by(|a, b| (a.0.re, a.0.im).partial_cmp(&(b.0.re, b.0.im)).unwrap());

    for &(loc, _) in &entries {
        if pm.eval(loc).norm() > tol_root * pm.eval_scale(loc).max(1e-300) {
            return Err(PolyError::NonConvergence { iterations, partial: ws });
        }
    }
    if origin_order > 0 {
        entries.push((cx(0.0, 0.0), origin_order));
        entries.sort_by(|a, b| (a.0.re, a.0.im).partial_cmp(&(b.0.re, b.0.im)).unwrap());
    }
    Ok(RootSet { entries })
}

/// Number of zeros of `p` (with multiplicity) strictly inside the disk, by
/// trapezoid quadrature of `p'/p` with sample doubling until the real part of
/// the winding integral is within 0.25 of an integer.
pub fn count_zeros_in_disk(p: &Poly, center: Cx, radius: f64) -> Result<i64, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let dp = p.derivative();
    // Boundary guard: minimum |p| sampled on the contour.
    let probe = 512;
    let mut min_ratio = f64::INFINITY;
    for j in 0..probe {
        let th = 2.0 * std::f64::consts::PI * (j as f64) / (probe as f64);
        let w = center + Cx::from_polar(radius, th);
        let ratio = p.eval(w).norm() / p.eval_scale(w).max(1e-300);
        if ratio < min_ratio {
            min_ratio = ratio;
        }
    }
    if min_ratio < 1e-9 {
        return Err(PolyError::ZeroOnContour);
    }

    let mut n = 64usize;
    while n <= 1 << 20 {
        let mut acc = cx(0.0, 0.0);
        for j in 0..n {
            let th = 2.0 * std::f64::consts::PI * (j as f64) / (n as f64);
            let e = Cx::from_polar(radius, th);
            let w = center + e;
            acc += dp.eval(w) / p.eval(w) * e;
        }
        let integral = acc / (n as f64);
        let count = integral.re.round();
        if (integral.re - count).abs() <= 0.25 && integral.im.abs() <= 0.25 {
            return Ok(count as i64);
        }
        n *= 2;
    }
    Err(PolyError::ContourNonConvergence)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p_z2_plus_1() -> Poly {
        Poly::from_real(&[1.0, 0.0, 1.0])
    }

    fn p_z2_minus_2() -> Poly {
        Poly::from_real(&[-2.0, 0.0, 1.0])
    }

    #[test]
    fn eval_examples() {
        assert!(p_z2_plus_1().eval(cx(0.0, 1.0)).norm() < 1e-15);
        assert_eq!(p_z2_plus_1().eval(cx(0.0, 0.0)), cx(1.0, 0.0));
        assert_eq!(p_z2_minus_2().eval(cx(1.0, 0.0)), cx(-1.0, 0.0));
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(p_z2_plus_1().reverse().unwrap(), p_z2_plus_1());
        assert_eq!(
            p_z2_minus_2().reverse().unwrap(),
            Poly::from_real(&[1.0, 0.0, -2.0])
        );
        // z - c -> -cz + 1
        let c = cx(2.0, -1.0);
        let p = Poly::new(vec![-c, cx(1.0, 0.0)]);
        assert_eq!(p.reverse().unwrap(), Poly::new(vec![cx(1.0, 0.0), -c]));
        assert!(Poly::zero().reverse().is_err());
    }

    #[test]
    fn mul_and_mod_examples() {
        let z2 = Poly::from_real(&[0.0, 0.0, 1.0]);
        assert_eq!(
            z2.mod_reduce(&p_z2_plus_1()).unwrap(),
            Poly::from_real(&[-1.0])
        );
        let zm1 = Poly::from_real(&[-1.0, 1.0]);
        let zp1 = Poly::from_real(&[1.0, 1.0]);
        assert_eq!(zm1.multiply(&zp1), Poly::from_real(&[-1.0, 0.0, 1.0]));
        // z^3 mod z^2+1 = -z (long division by hand)
        let z3 = Poly::from_real(&[0.0, 0.0, 0.0, 1.0]);
        assert_eq!(
            z3.mod_reduce(&p_z2_plus_1()).unwrap(),
            Poly::from_real(&[0.0, -1.0])
        );
        assert!(z3.mod_reduce(&Poly::zero()).is_err());
    }

    #[test]
    fn roots_examples() {
        let rs = roots(&p_z2_plus_1(), 1e-10).unwrap();
        assert_eq!(rs.entries.len(), 2);
        assert!((rs.entries[0].0 - cx(0.0, -1.0)).norm() < 1e-9);
        assert!((rs.entries[1].0 - cx(0.0, 1.0)).norm() < 1e-9);

        // (1+w^2)^2: expand and cluster; double roots at +-i.
        let f = p_z2_plus_1().multiply(&p_z2_plus_1());
        let rs = roots(&f, 1e-10).unwrap();
        assert_eq!(rs.entries.len(), 2);
        assert_eq!(rs.entries[0].1, 2);
        assert_eq!(rs.entries[1].1, 2);
        assert!((rs.entries[0].0 - cx(0.0, -1.0)).norm() < 1e-7);

        let c = cx(0.7, -0.3);
        let p = Poly::new(vec![-c, cx(1.0, 0.0)]);
        let rs = roots(&p, 1e-10).unwrap();
        assert_eq!(rs.entries.len(), 1);
        assert!((rs.entries[0].0 - c).norm() < 1e-12);
    }

    #[test]
    fn count_zeros_examples() {
        let p = p_z2_plus_1();
        assert_eq!(count_zeros_in_disk(&p, cx(0.0, 1.0), 0.5).unwrap(), 1);
        assert_eq!(count_zeros_in_disk(&p, cx(0.0, 0.0), 2.0).unwrap(), 2);
        assert_eq!(count_zeros_in_disk(&p, cx(0.0, 0.0), 0.5).unwrap(), 0);
        assert!(matches!(
            count_zeros_in_disk(&p, cx(0.0, 0.0), 1.0),
            Err(PolyError::ZeroOnContour)
        ));
    }

    #[test]
    fn disk_counts_are_additive() {
        // Partition a region into disks: counts add up to the count on a
        // disk containing the union.
        let p = Poly::from_roots(&[cx(0.5, 0.0), cx(-0.5, 0.1), cx(0.1, -0.6)]);
        let whole = count_zeros_in_disk(&p, cx(0.0, 0.0), 2.0).unwrap();
        let left = count_zeros_in_disk(&p, cx(-0.5, 0.1), 0.3).unwrap();
        let right = count_zeros_in_disk(&p, cx(0.5, 0.0), 0.3).unwrap();
        let low = count_zeros_in_disk(&p, cx(0.1, -0.6), 0.3).unwrap();
        assert_eq!(whole, left + right + low);
        assert_eq!(whole, 3);
    }
}
