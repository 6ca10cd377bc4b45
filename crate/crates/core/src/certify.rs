//! Certified homeomorphism tests for Blaschke quotients, the explicit
//! sufficient conditions, and discrete screens for sampled maps.
//!
//! A quotient `f = B₁/B₂` with `deg B₁ − deg B₂ = 1` is a circle
//! diffeomorphism exactly when its argument derivative `D` is positive on the
//! circle. On a grid of `M` points with `|D'| ≤ L`, the value
//! `min_j D(θ_j) − πL/M` is a lower bound for `min D`.

use num_complex::Complex;
use robust::{orient2d, Coord};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use crate::blaschke::{BlaschkeProduct, BlaschkeQuotient, MAX_GRID};
use crate::disk::{pseudo_hyperbolic, CirclePoint, DiskPoint};
use crate::error::{Error, Result};
use crate::fourier::{unimodular_tol, SampledCircleMap};
use crate::numeric::{argmin, grid_angle, principal};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Diffeomorphism,
    HomeomorphismBoundary,
    NotHomeomorphism,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationResult {
    pub verdict: Verdict,
    /// Certified lower bound on `min D`; for a negative verdict with a
    /// witness, the (negative) derivative at the witness.
    pub margin: f64,
    pub grid_size: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness_theta: Option<f64>,
    /// Smallest sampled derivative on the final grid.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub grid_min: Option<f64>,
    /// Lipschitz bound on the derivative used for the margin.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lipschitz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
}

impl CertificationResult {
    fn bare(verdict: Verdict, margin: f64, grid_size: usize) -> Self {
        Self {
            verdict,
            margin,
            grid_size,
            witness_theta: None,
            grid_min: None,
            lipschitz: None,
            reason: None,
        }
    }

    /// True for the two verdicts that guarantee a homeomorphism.
    pub fn is_homeomorphism(&self) -> bool {
        matches!(
            self.verdict,
            Verdict::Diffeomorphism | Verdict::HomeomorphismBoundary
        )
    }
}

/// Largest grid tried by [`certify_quotient`] by default.
pub const DEFAULT_MAX_GRID: usize = MAX_GRID;

/// Certifies `q` starting from a grid of `target_grid` points.
pub fn certify_quotient<T: Scalar>(q: &BlaschkeQuotient<T>, target_grid: usize) -> CertificationResult {
    certify_quotient_capped(q, target_grid, DEFAULT_MAX_GRID)
}

/// [`certify_quotient`] with an explicit refinement cap.
pub fn certify_quotient_capped<T: Scalar>(
    q: &BlaschkeQuotient<T>,
    target_grid: usize,
    max_grid: usize,
) -> CertificationResult {
    let dd = q.degree_difference();
    if dd != 1 {
        let mut r = CertificationResult::bare(Verdict::NotHomeomorphism, 0.0, 0);
        r.reason = Some(format!("degree difference is {dd}, not 1"));
        return r;
    }
    let lipschitz = q.derivative_bounds().lipschitz.as_f64();
    let max_grid = max_grid.max(16);
    let mut m = target_grid.clamp(16, max_grid);
    loop {
        let d = q.arg_derivative_on_grid(m);
        let (j, min) = argmin(&d).expect("grid is nonempty");
        let min = min.as_f64();
        let theta = grid_angle::<T>(j, m);
        if min < 0.0 {
            // Re-check the sign through the factor-wise log-derivative.
            let direct = q.log_derivative(Complex::from_polar(T::one(), theta)).re;
            if direct < T::zero() {
                let mut r = CertificationResult::bare(Verdict::NotHomeomorphism, min, m);
                r.witness_theta = Some(theta.as_f64());
                r.grid_min = Some(min);
                r.lipschitz = Some(lipschitz);
                return r;
            }
        }
        let certified = min - std::f64::consts::PI * lipschitz / m as f64;
        if certified > 0.0 {
            let mut r = CertificationResult::bare(Verdict::Diffeomorphism, certified, m);
            r.grid_min = Some(min);
            r.lipschitz = Some(lipschitz);
            return r;
        }
        // Jump straight to the grid the current minimum would need.
        let needed = if min > 0.0 {
            (1.25 * std::f64::consts::PI * lipschitz / min).ceil()
        } else {
            f64::INFINITY
        };
        let mut next = m * 2;
        while (next as f64) < needed && next < max_grid {
            next *= 2;
        }
        if m >= max_grid || (next >= max_grid && needed > max_grid as f64 && min > 0.0) {
            let mut r = CertificationResult::bare(Verdict::Inconclusive, certified, m);
            r.grid_min = Some(min);
            r.lipschitz = Some(lipschitz);
            r.reason = Some(format!("refinement cap of {max_grid} points reached"));
            return r;
        }
        m = next.min(max_grid);
    }
}

/// Closed-form verdict for `f(ζ) = ζ²/B(ζ)` with `B` the degree-one factor
/// vanishing at `z₁`. The minimum of the argument derivative is
/// `(1 − 3r)/(1 − r)`, `r = |z₁|`, attained at `z₁/|z₁|`.
pub fn certify_z2b<T: Scalar>(z1: DiskPoint<T>) -> CertificationResult {
    let r = z1.modulus().as_f64();
    let margin = (1.0 - 3.0 * r) / (1.0 - r);
    if (r - 1.0 / 3.0).abs() <= 4.0 * f64::EPSILON {
        return CertificationResult::bare(Verdict::HomeomorphismBoundary, 0.0, 0);
    }
    if margin > 0.0 {
        CertificationResult::bare(Verdict::Diffeomorphism, margin, 0)
    } else {
        let mut res = CertificationResult::bare(Verdict::NotHomeomorphism, margin, 0);
        let v = z1.value();
        res.witness_theta = Some(CirclePoint::new(v.im.atan2(v.re)).theta().as_f64());
        res
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionStatus {
    HoldsStrict,
    Holds,
    Fails,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudoReport {
    /// Status of the inequality for `k = 1..=n`.
    pub per_index: Vec<ConditionStatus>,
    pub holds: bool,
    /// All inequalities hold and at least one is strict.
    pub strict: bool,
}

fn check_lengths<T>(z: &[T], w: &[T]) -> Result<()> {
    if z.len() != w.len() + 1 {
        return Err(Error::InvalidParameter(format!(
            "expected n + 1 numerator points for n = {} denominator points, got {}",
            w.len(),
            z.len()
        )));
    }
    Ok(())
}

/// Checks `d(z_k, w_k) ≤ (1 − d(z_k, z₀))(1 − d(w_k, z₀))/(4n)` for
/// `k = 1..=n`, where `z[0]` is `z₀`.
pub fn pseudo_condition<T: Scalar>(z: &[DiskPoint<T>], w: &[DiskPoint<T>]) -> Result<PseudoReport> {
    check_lengths(z, w)?;
    let n = w.len();
    let four_n = T::lit(4.0 * n as f64);
    let z0 = z[0];
    let per_index: Vec<ConditionStatus> = (1..=n)
        .map(|k| {
            let lhs = pseudo_hyperbolic(z[k], w[k - 1]);
            let rhs = (T::one() - pseudo_hyperbolic(z[k], z0))
                * (T::one() - pseudo_hyperbolic(w[k - 1], z0))
                / four_n;
            if lhs < rhs {
                ConditionStatus::HoldsStrict
            } else if lhs <= rhs {
                ConditionStatus::Holds
            } else {
                ConditionStatus::Fails
            }
        })
        .collect();
    let holds = per_index.iter().all(|s| *s != ConditionStatus::Fails);
    let strict = holds && per_index.contains(&ConditionStatus::HoldsStrict);
    Ok(PseudoReport {
        per_index,
        holds,
        strict,
    })
}

/// `∏ b(z_k) / ∏ b(w_k)` with coinciding zeros cancelled.
pub fn pseudo_quotient<T: Scalar>(z: &[DiskPoint<T>], w: &[DiskPoint<T>]) -> Result<BlaschkeQuotient<T>> {
    check_lengths(z, w)?;
    Ok(BlaschkeQuotient::reduced(
        BlaschkeProduct::new(z.to_vec(), CirclePoint::one()),
        BlaschkeProduct::new(w.to_vec(), CirclePoint::one()),
    ))
}

/// `Σ (1 − |z_k|)/(1 + |z_k|) ≥ Σ (1 + |w_k|)/(1 − |w_k|)`.
pub fn sufficient1_check<T: Scalar>(z: &[DiskPoint<T>], w: &[DiskPoint<T>]) -> bool {
    let lo: T = z
        .iter()
        .map(|p| (T::one() - p.modulus()) / (T::one() + p.modulus()))
        .fold(T::zero(), |a, b| a + b);
    let hi: T = w
        .iter()
        .map(|p| (T::one() + p.modulus()) / (T::one() - p.modulus()))
        .fold(T::zero(), |a, b| a + b);
    lo >= hi
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyVariant {
    /// `ζ^{1−n} ∏ (ζ − z_k)/(1 − z̄_k ζ)`.
    A,
    /// `ζ^{n+1} ∏ (1 − z̄_k ζ)/(ζ − z_k)`.
    B,
}

/// The explicit conditions for the two one-sided families:
/// (a) `|z_k| ≤ (1 − |z_n|)(1 − d(z_k, z_n))/(4(n − 1))` for `k < n`;
/// (b) `|z_k| ≤ 1/(4n + 1)` for all `k`.
pub fn corollary_family_check<T: Scalar>(variant: FamilyVariant, z: &[DiskPoint<T>]) -> Result<bool> {
    let n = z.len();
    if n == 0 {
        return Err(Error::InvalidParameter("at least one point is required".into()));
    }
    Ok(match variant {
        FamilyVariant::A => {
            let zn = z[n - 1];
            (0..n - 1).all(|k| {
                let rhs = (T::one() - zn.modulus()) * (T::one() - pseudo_hyperbolic(z[k], zn))
                    / T::lit(4.0 * (n - 1) as f64);
                z[k].modulus() <= rhs
            })
        }
        FamilyVariant::B => {
            let bound = T::one() / T::lit(4.0 * n as f64 + 1.0);
            z.iter().all(|p| p.modulus() <= bound)
        }
    })
}

/// The quotient of the chosen family built from `z`.
pub fn corollary_family_quotient<T: Scalar>(
    variant: FamilyVariant,
    z: &[DiskPoint<T>],
) -> Result<BlaschkeQuotient<T>> {
    let n = z.len();
    if n == 0 {
        return Err(Error::InvalidParameter("at least one point is required".into()));
    }
    let b = BlaschkeProduct::new(z.to_vec(), CirclePoint::one());
    Ok(match variant {
        FamilyVariant::A => BlaschkeQuotient::over_monomial(b, n - 1),
        FamilyVariant::B => BlaschkeQuotient::monomial_over(n + 1, b),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum HomeoVerdict {
    PlausibleHomeomorphism,
    /// The argument moves backwards (or wraps more than once) between
    /// samples `first` and `second`.
    NotInjective { first: usize, second: usize },
    NotUnimodular { index: usize, modulus: f64 },
}

/// Discrete screen: unimodular samples whose unwrapped argument is
/// non-decreasing with total increase `2π`.
///
/// Fails with [`Error::GridTooCoarse`] if two adjacent samples are more than
/// `π/2` apart in argument, since unwrapping would then be ambiguous.
pub fn homeo_check_sampled<T: Scalar>(map: &SampledCircleMap<T>) -> Result<HomeoVerdict> {
    let v = map.values();
    let m = v.len();
    let tol = unimodular_tol::<T>();
    if let Some((index, z)) = v
        .iter()
        .enumerate()
        .find(|(_, z)| (z.norm() - T::one()).abs() >= tol)
    {
        return Ok(HomeoVerdict::NotUnimodular {
            index,
            modulus: z.norm().as_f64(),
        });
    }
    let back = T::lit(-1e-9);
    let mut total = T::zero();
    let mut wrap_at = None;
    for j in 0..m {
        let step = principal(v[(j + 1) % m].arg() - v[j].arg());
        if step.abs() > T::FRAC_PI_2() {
            return Err(Error::GridTooCoarse {
                grid: m,
                reason: format!("argument jumps by {} between samples {} and {}", step, j, (j + 1) % m),
            });
        }
        if step < back {
            return Ok(HomeoVerdict::NotInjective {
                first: j,
                second: (j + 1) % m,
            });
        }
        total = total + step;
        if wrap_at.is_none() && total >= T::two_pi() && j + 1 < m {
            wrap_at = Some(j + 1);
        }
    }
    if (total - T::two_pi()).abs() < T::lit(1e-6) {
        Ok(HomeoVerdict::PlausibleHomeomorphism)
    } else {
        Ok(HomeoVerdict::NotInjective {
            first: 0,
            second: wrap_at.unwrap_or(1),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum EmbeddingVerdict {
    Simple,
    /// Segment `i` runs from sample `i` to sample `i + 1 (mod m)`.
    SelfIntersecting { first: usize, second: usize },
}

fn coord(z: Complex<f64>) -> Coord<f64> {
    Coord { x: z.re, y: z.im }
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

fn on_segment(p: Complex<f64>, q: Complex<f64>, r: Complex<f64>) -> bool {
    // r collinear with pq; is it within the bounding box?
    r.re >= p.re.min(q.re) && r.re <= p.re.max(q.re) && r.im >= p.im.min(q.im) && r.im <= p.im.max(q.im)
}

/// Closed segments `ab` and `cd` share at least one point.
fn segments_meet(a: Complex<f64>, b: Complex<f64>, c: Complex<f64>, d: Complex<f64>) -> bool {
    let o1 = sign(orient2d(coord(a), coord(b), coord(c)));
    let o2 = sign(orient2d(coord(a), coord(b), coord(d)));
    let o3 = sign(orient2d(coord(c), coord(d), coord(a)));
    let o4 = sign(orient2d(coord(c), coord(d), coord(b)));
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && on_segment(a, b, c))
        || (o2 == 0 && on_segment(a, b, d))
        || (o3 == 0 && on_segment(c, d, a))
        || (o4 == 0 && on_segment(c, d, b))
}

/// Consecutive segments `ab`, `bc` overlap beyond `b`.
fn adjacent_fold(a: Complex<f64>, b: Complex<f64>, c: Complex<f64>) -> bool {
    if orient2d(coord(a), coord(b), coord(c)) != 0.0 {
        return false;
    }
    let u = b - a;
    let v = c - b;
    u.re * v.re + u.im * v.im < 0.0
}

/// Exact intersection test on the closed polygon through the samples.
/// Adjacent segments may share only their common endpoint.
pub fn embedding_check_sampled<T: Scalar>(map: &SampledCircleMap<T>) -> Result<EmbeddingVerdict> {
    let pts: Vec<Complex<f64>> = map
        .values()
        .iter()
        .map(|z| Complex::new(z.re.as_f64(), z.im.as_f64()))
        .collect();
    let m = pts.len();
    let seg = |i: usize| (pts[i], pts[(i + 1) % m]);
    let mut total = 0.0;
    for i in 0..m {
        let (a, b) = seg(i);
        let len = (b - a).norm();
        if len == 0.0 {
            return Err(Error::DegenerateSegment(i));
        }
        total += len;
    }
    let cell = 2.0 * total / m as f64;
    let key = |x: f64, y: f64| ((x / cell).floor() as i64, (y / cell).floor() as i64);
    let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for i in 0..m {
        let (a, b) = seg(i);
        let (x0, y0) = key(a.re.min(b.re), a.im.min(b.im));
        let (x1, y1) = key(a.re.max(b.re), a.im.max(b.im));
        for cx in x0..=x1 {
            for cy in y0..=y1 {
                cells.entry((cx, cy)).or_default().push(i);
            }
        }
    }
    let mut keys: Vec<_> = cells.keys().copied().collect();
    keys.sort_unstable();
    for k in keys {
        let members = &cells[&k];
        for (s, &i) in members.iter().enumerate() {
            for &j in &members[s + 1..] {
                let (i, j) = (i.min(j), i.max(j));
                let (a, b) = seg(i);
                let (c, d) = seg(j);
                let hit = if j == i + 1 {
                    adjacent_fold(a, b, d)
                } else if i == 0 && j == m - 1 {
                    adjacent_fold(c, a, b)
                } else {
                    segments_meet(a, b, c, d)
                };
                if hit {
                    return Ok(EmbeddingVerdict::SelfIntersecting { first: i, second: j });
                }
            }
        }
    }
    Ok(EmbeddingVerdict::Simple)
}
