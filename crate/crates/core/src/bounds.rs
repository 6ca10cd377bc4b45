//! Coefficient bounds for circle homeomorphisms, horizontal convexity and
//! curvature bounds for minimal graphs.

use serde::{Deserialize, Serialize};

use num_complex::Complex;

use crate::blaschke::{BlaschkeQuotient, MAX_GRID};
use crate::disk::{DiskPoint, MoebiusDisk};
use crate::error::{Error, Result};
use crate::fourier::{fourier_coefficients, MapKind, SampledCircleMap};
use crate::gallery::rational_family;
use crate::numeric::grid_angle;
use crate::scalar::Scalar;

/// Hall's sharp constant `27/(4π²)`.
pub fn hall_constant() -> f64 {
    27.0 / (4.0 * std::f64::consts::PI * std::f64::consts::PI)
}

/// Weitsman's constant `2/π`.
pub fn weitsman_constant() -> f64 {
    2.0 / std::f64::consts::PI
}

/// Monotonicity slack when splitting the circle into two arcs.
pub const MONOTONE_TOL: f64 = 1e-9;

/// Low-order coefficients of a homeomorphism with the Hall and Weitsman
/// inequalities evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeinzReport {
    /// `[re, im]` of `f̂(−1)`, `f̂(0)`, `f̂(1)`.
    pub c_minus1: [f64; 2],
    pub c_0: [f64; 2],
    pub c_plus1: [f64; 2],
    /// `|f̂(−1)|² + |f̂(1)|²`.
    pub hall_lhs: f64,
    pub hall_rhs: f64,
    pub hall_holds: bool,
    /// `|f̂(0)| + |f̂(1)|`.
    pub weitsman_lhs: f64,
    pub weitsman_rhs: f64,
    pub weitsman_holds: bool,
    pub grid_size: usize,
}

impl HeinzReport {
    fn abs(c: [f64; 2]) -> f64 {
        c[0].hypot(c[1])
    }

    pub fn abs_minus1(&self) -> f64 {
        Self::abs(self.c_minus1)
    }

    pub fn abs_plus1(&self) -> f64 {
        Self::abs(self.c_plus1)
    }
}

fn pair<T: Scalar>(c: num_complex::Complex<T>) -> [f64; 2] {
    [c.re.as_f64(), c.im.as_f64()]
}

/// Hall and Weitsman quantities of a unimodular map.
pub fn heinz_report<T: Scalar>(map: &SampledCircleMap<T>) -> Result<HeinzReport> {
    if map.kind() != MapKind::Unimodular {
        return Err(Error::InvalidParameter(
            "coefficient bounds apply to unimodular maps only".into(),
        ));
    }
    let spec = fourier_coefficients(map);
    let (cm, c0, cp) = (spec.coefficient(-1), spec.coefficient(0), spec.coefficient(1));
    let hall_lhs = (cm.norm_sqr() + cp.norm_sqr()).as_f64();
    let weitsman_lhs = (c0.norm() + cp.norm()).as_f64();
    Ok(HeinzReport {
        c_minus1: pair(cm),
        c_0: pair(c0),
        c_plus1: pair(cp),
        hall_lhs,
        hall_rhs: hall_constant(),
        hall_holds: hall_lhs >= hall_constant(),
        weitsman_lhs,
        weitsman_rhs: weitsman_constant(),
        weitsman_holds: weitsman_lhs > weitsman_constant(),
        grid_size: map.grid_size(),
    })
}

/// How the Lipschitz constant of `Im f` was estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LipschitzSource {
    /// Largest `|Δ Im f|/Δθ` between adjacent samples.
    GridSlope,
    /// Largest `|Im f'|` on the grid from an exact derivative.
    ExactDerivative,
}

/// Horizontal convexity of `f(T)` and the coefficient bound
/// `|f̂(−1)| + |f̂(1)| ≥ (δ/2π)(1 − cos(δ/4L))`.
///
/// `L` is estimated from the grid, which can only underestimate the true
/// constant; the computed bound therefore overestimates the proven one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorconvexReport {
    pub is_horconvex: bool,
    /// `max Im f − min Im f`.
    pub delta: f64,
    #[serde(rename = "L")]
    pub lipschitz: f64,
    pub lipschitz_source: LipschitzSource,
    pub bound: f64,
    /// `|f̂(−1)| + |f̂(1)|`.
    pub lhs: f64,
    /// `lhs ≥ bound`, evaluated only for horizontally convex images.
    pub bound_holds: Option<bool>,
    pub argmin: usize,
    pub argmax: usize,
    pub grid_size: usize,
}

/// `(δ/2π)(1 − cos(δ/4L))`, 0 when `L = 0`.
pub fn horconvex_bound(delta: f64, lipschitz: f64) -> f64 {
    if lipschitz <= 0.0 {
        return 0.0;
    }
    delta / (2.0 * std::f64::consts::PI) * (1.0 - (delta / (4.0 * lipschitz)).cos())
}

/// `true` if `xs[from..to]` (cyclic) is non-decreasing up to `tol`.
fn monotone_arc(xs: &[f64], from: usize, to: usize, tol: f64, increasing: bool) -> bool {
    let m = xs.len();
    let mut i = from;
    while i != to {
        let j = (i + 1) % m;
        let step = xs[j] - xs[i];
        if (increasing && step < -tol) || (!increasing && step > tol) {
            return false;
        }
        i = j;
    }
    true
}

/// Splits the circle at the extrema of `Im f` and checks monotonicity of
/// both arcs with tolerance [`MONOTONE_TOL`]; plateaus are accepted.
pub fn horconvex_report<T: Scalar>(map: &SampledCircleMap<T>) -> HorconvexReport {
    let m = map.grid_size();
    let ys: Vec<f64> = map.values().iter().map(|v| v.im.as_f64()).collect();
    let (mut argmin, mut argmax) = (0, 0);
    for (j, &y) in ys.iter().enumerate() {
        if y < ys[argmin] {
            argmin = j;
        }
        if y > ys[argmax] {
            argmax = j;
        }
    }
    let delta = ys[argmax] - ys[argmin];
    let is_horconvex = monotone_arc(&ys, argmin, argmax, MONOTONE_TOL, true)
        && monotone_arc(&ys, argmax, argmin, MONOTONE_TOL, false);
    let (lipschitz, lipschitz_source) = match map.derivative() {
        Some(d) => (
            (0..m)
                .map(|j| d(grid_angle(j, m)).im.as_f64().abs())
                .fold(0.0, f64::max),
            LipschitzSource::ExactDerivative,
        ),
        None => {
            let h = std::f64::consts::TAU / m as f64;
            (
                (0..m)
                    .map(|j| (ys[(j + 1) % m] - ys[j]).abs() / h)
                    .fold(0.0, f64::max),
                LipschitzSource::GridSlope,
            )
        }
    };
    let spec = fourier_coefficients(map);
    let lhs = (spec.coefficient(-1).norm() + spec.coefficient(1).norm()).as_f64();
    let bound = horconvex_bound(delta, lipschitz);
    HorconvexReport {
        is_horconvex,
        delta,
        lipschitz,
        lipschitz_source,
        bound,
        lhs,
        bound_holds: is_horconvex.then_some(lhs >= bound),
        argmin,
        argmax,
        grid_size: m,
    }
}

const CENTER_TOL: f64 = 1e-13;
const CENTER_ITERATIONS: usize = 60;

/// The zero of the harmonic extension of a circle homeomorphism `q`, found
/// by damped Newton iteration from the origin.
pub fn harmonic_center<T: Scalar>(q: &BlaschkeQuotient<T>) -> Result<DiskPoint<T>> {
    let rmax = q.points().map(|p| p.modulus().as_f64()).fold(0.0, f64::max);
    let m = ((64.0 / (1.0 - rmax)).ceil() as usize).next_power_of_two().clamp(1024, MAX_GRID);
    let spec = fourier_coefficients(&rational_family(q, m)?);
    let mut a = DiskPoint::origin();
    for _ in 0..CENTER_ITERATIONS {
        let f = spec.harmonic_extension(a);
        if f.norm().as_f64() < CENTER_TOL {
            return Ok(a);
        }
        let (fz, fzc) = spec.harmonic_gradient(a);
        // Solve fz·δ + fzc·δ̄ = −f for δ = x + iy.
        let c1 = fz + fzc;
        let c2 = Complex::new(T::zero(), T::one()) * (fz - fzc);
        let det = c1.re * c2.im - c1.im * c2.re;
        if det.as_f64().abs() < 1e-300 {
            break;
        }
        let x = (-f.re * c2.im + f.im * c2.re) / det;
        let y = (-c1.re * f.im + c1.im * f.re) / det;
        let mut step = Complex::new(x, y);
        let next = loop {
            match DiskPoint::new(a.value() + step) {
                Ok(p) if p.modulus() < T::lit(0.999) => break p,
                _ => step = step / T::lit(2.0),
            }
            if step.norm() < T::lit(1e-300) {
                return Err(Error::Construction("harmonic centre iteration left the disk".into()));
            }
        };
        a = next;
    }
    Err(Error::Construction(
        "no zero of the harmonic extension found; the map may not be a homeomorphism".into(),
    ))
}

/// `q ∘ φ` with `φ(w) = (w + a)/(1 + āw)` and `a` the harmonic centre, so
/// that the normalized map has `f̂(0) = 0`.
pub fn centered_quotient<T: Scalar>(q: &BlaschkeQuotient<T>) -> Result<(BlaschkeQuotient<T>, DiskPoint<T>)> {
    let a = harmonic_center(q)?;
    Ok((q.precompose(&MoebiusDisk::to_origin(a).inverse())?, a))
}

/// Upper bounds on the Gaussian curvature at the point over the origin of a
/// minimal graph whose boundary data has the given reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureBound {
    /// `4/(|f̂(−1)|² + |f̂(1)|²)`.
    pub coefficient_bound: Option<f64>,
    /// `32π²/(δ²(1 − cos(δ/4L))²)` for horizontally convex images.
    pub horconvex_bound: Option<f64>,
    pub bound: f64,
}

/// `32π²/(δ²(1 − cos(δ/4L))²)`.
pub fn horconvex_curvature(delta: f64, lipschitz: f64) -> f64 {
    let c = 1.0 - (delta / (4.0 * lipschitz)).cos();
    32.0 * std::f64::consts::PI.powi(2) / (delta * delta * c * c)
}

/// The smaller of the applicable curvature bounds.
pub fn curvature_bound(heinz: Option<&HeinzReport>, horconvex: Option<&HorconvexReport>) -> Result<CurvatureBound> {
    let coefficient_bound = heinz.filter(|h| h.hall_lhs > 0.0).map(|h| 4.0 / h.hall_lhs);
    let horconvex_bound = horconvex
        .filter(|h| h.is_horconvex && h.delta > 0.0 && h.lipschitz > 0.0)
        .map(|h| horconvex_curvature(h.delta, h.lipschitz));
    let bound = match (coefficient_bound, horconvex_bound) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => {
            return Err(Error::NoBound(
                "coefficient sum vanishes and the image is not horizontally convex".into(),
            ))
        }
    };
    Ok(CurvatureBound {
        coefficient_bound,
        horconvex_bound,
        bound,
    })
}
