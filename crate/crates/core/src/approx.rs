//! Constructive approximation by Poisson sums and Blaschke quotients.
//!
//! The chain is: a zero-mean continuous `h` is approximated by a balanced
//! combination `Σ P(z_k,·) − Σ P(w_k,·)` ([`integer_poisson`]); the negative
//! kernels are traded for a constant ([`better_poisson`]); a combination
//! approximating `u'` yields a quotient whose argument approximates `u` in
//! `C¹` ([`quotient_from_combination`], [`approximate_c1`]); and a mollified
//! homeomorphism lift is approximated by `B/ζ^{n−1}` or `ζ^{n+1}/B`
//! ([`approximate_homeomorphism`]).
//!
//! Every sup norm reported here is a maximum over a verification grid, not a
//! certified supremum.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::blaschke::{BlaschkeProduct, BlaschkeQuotient};
use crate::certify::{certify_quotient, CertificationResult, Verdict};
use crate::disk::{CirclePoint, DiskPoint, KernelCloud};
use crate::error::{Error, Result};
use crate::fourier::{dft, FourierSpectrum, MapKind};
use crate::numeric::{circle_grid, grid_angle, max_abs, principal};
use crate::scalar::Scalar;

/// A real function of the angle.
pub type RealFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Step of the centred difference used when no derivative is supplied.
pub const FD_STEP: f64 = 1e-6;

/// Smallest verification grid.
pub const MIN_VERIFY_GRID: usize = 1 << 14;

const FIT_START: usize = 4096;
const FIT_MAX: usize = 1 << 17;
const MAX_KERNELS: usize = 1 << 16;
const MEAN_TOL: f64 = 1e-8;
const C1_ATTEMPTS: usize = 10;

fn check_eps<T: Scalar>(eps: T) -> Result<()> {
    if !(eps > T::zero()) || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {eps}")));
    }
    Ok(())
}

fn next_pow2_at_least<T: Scalar>(x: T) -> usize {
    let x = x.as_f64();
    if x <= 1.0 {
        1
    } else if x >= (1u64 << 40) as f64 {
        1 << 40
    } else {
        (x.ceil() as usize).next_power_of_two()
    }
}

fn sample_real<T: Scalar>(f: &RealFn<T>, m: usize) -> Vec<T> {
    (0..m).map(|j| f(grid_angle(j, m))).collect()
}

fn sup_diff<T: Scalar>(a: &[T], b: &[T]) -> T {
    max_abs(a.iter().zip(b).map(|(&x, &y)| x - y))
}

/// `ζ ↦ Σ P(z,ζ) − Σ P(w,ζ) − c`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PoissonCombination<T> {
    pub positives: Vec<DiskPoint<T>>,
    pub negatives: Vec<DiskPoint<T>>,
    pub constant: i64,
}

impl<T: Scalar> PoissonCombination<T> {
    pub fn new(positives: Vec<DiskPoint<T>>, negatives: Vec<DiskPoint<T>>, constant: i64) -> Self {
        Self {
            positives,
            negatives,
            constant,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.positives.is_empty() && self.negatives.is_empty() && self.constant == 0
    }

    /// `|positives| − |negatives| − c`, the mean over the circle.
    pub fn mean(&self) -> i64 {
        self.positives.len() as i64 - self.negatives.len() as i64 - self.constant
    }

    pub fn evaluate(&self, zeta: CirclePoint<T>) -> T {
        let pos = KernelCloud::new(&self.positives).sum_at(zeta.value());
        let neg = KernelCloud::new(&self.negatives).sum_at(zeta.value());
        pos - neg - T::lit(self.constant as f64)
    }

    /// Values on the uniform grid of size `m`.
    pub fn evaluate_on_grid(&self, m: usize) -> Vec<T> {
        let grid = circle_grid::<T>(m);
        let pos = KernelCloud::new(&self.positives).sum_on(&grid);
        let neg = KernelCloud::new(&self.negatives).sum_on(&grid);
        let c = T::lit(self.constant as f64);
        pos.into_iter().zip(neg).map(|(p, n)| p - n - c).collect()
    }
}

/// A `2π`-periodic `C¹` function given by its value and derivative.
#[derive(Clone)]
pub struct PeriodicC1Function<T> {
    value: RealFn<T>,
    derivative: RealFn<T>,
    exact_derivative: bool,
}

impl<T: Scalar> fmt::Debug for PeriodicC1Function<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PeriodicC1Function")
            .field("exact_derivative", &self.exact_derivative)
            .finish_non_exhaustive()
    }
}

impl<T: Scalar> PeriodicC1Function<T> {
    pub fn new(
        value: impl Fn(T) -> T + Send + Sync + 'static,
        derivative: impl Fn(T) -> T + Send + Sync + 'static,
    ) -> Self {
        Self {
            value: Arc::new(value),
            derivative: Arc::new(derivative),
            exact_derivative: true,
        }
    }

    /// Derivative by centred differences with step [`FD_STEP`].
    pub fn from_value(value: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        let value: RealFn<T> = Arc::new(value);
        let v = value.clone();
        let h = T::lit(FD_STEP);
        Self {
            value,
            derivative: Arc::new(move |t| (v(t + h) - v(t - h)) / (h + h)),
            exact_derivative: false,
        }
    }

    pub fn constant(c: T) -> Self {
        Self::new(move |_| c, |_| T::zero())
    }

    pub fn value(&self, theta: T) -> T {
        (self.value)(theta)
    }

    pub fn derivative(&self, theta: T) -> T {
        (self.derivative)(theta)
    }

    pub fn has_exact_derivative(&self) -> bool {
        self.exact_derivative
    }

    pub fn value_fn(&self) -> RealFn<T> {
        self.value.clone()
    }

    pub fn derivative_fn(&self) -> RealFn<T> {
        self.derivative.clone()
    }

    pub fn sample(&self, m: usize) -> Vec<T> {
        sample_real(&self.value, m)
    }

    pub fn sample_derivative(&self, m: usize) -> Vec<T> {
        sample_real(&self.derivative, m)
    }
}

/// A real trigonometric polynomial `Σ_{|n|≤w} c_n e^{inθ}` with Hermitian
/// coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigSeries<T> {
    spectrum: FourierSpectrum<T>,
}

impl<T: Scalar> TrigSeries<T> {
    /// Interpolates `f` on uniform grids, doubling from `start` to `max`
    /// until the interpolant matches `f` within `tol` on the twice finer grid.
    pub fn fit(f: &RealFn<T>, tol: T, start: usize, max: usize) -> Result<Self> {
        let mut m = start.max(64);
        loop {
            let fine = sample_real(f, 2 * m);
            let coarse: Vec<Complex<T>> = fine
                .iter()
                .step_by(2)
                .map(|&v| Complex::new(v, T::zero()))
                .collect();
            let full = dft(&coarse);
            let w = m / 2 - 1;
            let coeffs = (-(w as i64)..=w as i64)
                .map(|n| full[n.rem_euclid(m as i64) as usize])
                .collect();
            let series = Self {
                spectrum: FourierSpectrum::from_coefficients(coeffs, m, MapKind::General),
            };
            let err = sup_diff(&series.sample(2 * m), &fine);
            if err <= tol {
                return Ok(series);
            }
            if m >= max {
                return Err(Error::Construction(format!(
                    "trigonometric interpolation error {err:e} exceeds {tol:e} on a grid of {m}"
                )));
            }
            m *= 2;
        }
    }

    /// Grid on which the series was fitted.
    pub fn fit_grid(&self) -> usize {
        self.spectrum.grid_size()
    }

    pub fn window(&self) -> usize {
        self.spectrum.window()
    }

    pub fn mean(&self) -> T {
        self.spectrum.coefficient(0).re
    }

    pub fn coefficient(&self, n: i64) -> Complex<T> {
        self.spectrum.coefficient(n)
    }

    pub fn value(&self, theta: T) -> T {
        let mut acc = self.coefficient(0).re;
        for n in 1..=self.window() as i64 {
            let e = Complex::from_polar(T::one(), T::lit(n as f64) * theta);
            acc = acc + T::lit(2.0) * (self.coefficient(n) * e).re;
        }
        acc
    }

    /// `Σ c_n r^{|n|} e^{inθ_j}` on a grid of size `m`.
    pub fn sample_dilated(&self, r: T, m: usize) -> Vec<T> {
        let w = self.window();
        // Synthesize on a multiple of m that holds the whole window.
        let k = if m > 2 * w { 1 } else { (2 * w + 1) / m + 1 };
        self.spectrum
            .synthesize(r, m * k)
            .into_iter()
            .step_by(k)
            .map(|c| c.re)
            .collect()
    }

    pub fn sample(&self, m: usize) -> Vec<T> {
        self.sample_dilated(T::one(), m)
    }

    fn map_coefficients(&self, f: impl Fn(i64, Complex<T>) -> Complex<T>) -> Self {
        let w = self.window() as i64;
        let coeffs = (-w..=w).map(|n| f(n, self.coefficient(n))).collect();
        Self {
            spectrum: FourierSpectrum::from_coefficients(coeffs, self.fit_grid(), MapKind::General),
        }
    }

    /// The series of `θ ↦ d/dθ`.
    pub fn derivative(&self) -> Self {
        self.map_coefficients(|n, c| c * Complex::new(T::zero(), T::lit(n as f64)))
    }

    /// The zero-at-zero antiderivative of a zero-mean series.
    pub fn antiderivative(&self) -> Result<Self> {
        if self.mean().abs() > T::lit(MEAN_TOL) {
            return Err(Error::NonZeroMean(self.mean().as_f64()));
        }
        let g = self.map_coefficients(|n, c| {
            if n == 0 {
                Complex::new(T::zero(), T::zero())
            } else {
                c / Complex::new(T::zero(), T::lit(n as f64))
            }
        });
        let at_zero = g.value(T::zero());
        Ok(g.map_coefficients(|n, c| {
            if n == 0 {
                Complex::new(-at_zero, T::zero())
            } else {
                c
            }
        }))
    }

    pub fn into_function(self) -> PeriodicC1Function<T> {
        let d = Arc::new(self.derivative());
        let s = Arc::new(self);
        PeriodicC1Function::new(move |t| s.value(t), move |t| d.value(t))
    }
}

/// The antiderivative `g` of a zero-mean `h`, with `g(0) = 0`, by spectral
/// integration of a trigonometric interpolant accurate to `1e-10`.
pub fn antiderivative<T: Scalar>(h: &RealFn<T>) -> Result<PeriodicC1Function<T>> {
    antiderivative_with_tolerance(h, T::lit(1e-10))
}

/// [`antiderivative`] with an explicit interpolation tolerance.
pub fn antiderivative_with_tolerance<T: Scalar>(h: &RealFn<T>, tol: T) -> Result<PeriodicC1Function<T>> {
    let series = TrigSeries::fit(h, tol, 256, FIT_MAX)?;
    Ok(series.antiderivative()?.into_function())
}

/// Output of [`integer_poisson`].
#[derive(Debug, Clone, PartialEq)]
pub struct IntegerPoisson<T> {
    pub combination: PoissonCombination<T>,
    /// Common radius of all kernel points (0 for an empty combination).
    pub r: T,
    /// Number of positive (and of negative) kernels.
    pub n: usize,
    pub fit_grid: usize,
    pub verify_grid: usize,
    /// Measured sup error on the verification grid.
    pub error: T,
    /// `sup |H(r·) − h|` on the verification grid.
    pub dilation_error: T,
}

struct IntegerPoissonRun<T> {
    result: IntegerPoisson<T>,
    h_samples: Vec<T>,
}

/// `Σ_{k<n} P(r e^{2πik/n}, ζ) = n P(r^n, ζ^n)` on the grid of size `m`.
fn orbit_sum_on_grid<T: Scalar>(r: T, n: usize, m: usize) -> Vec<T> {
    let rn = r.powi(n as i32);
    let w = T::one() - rn * rn;
    let nn = T::from_count(n);
    (0..m)
        .map(|j| {
            let zn = Complex::from_polar(T::one(), grid_angle((j * n) % m, m));
            nn * w / (zn - Complex::new(rn, T::zero())).norm_sqr()
        })
        .collect()
}

/// `sup_ζ |n P(r^n, ζ^n) − n| = 2n r^n / (1 − r^n)`.
pub fn orbit_collapse_error<T: Scalar>(r: T, n: usize) -> T {
    let rn = r.powi(n as i32);
    T::lit(2.0) * T::from_count(n) * rn / (T::one() - rn)
}

/// Approximates a zero-mean continuous `h` within `eps` by
/// `Σ_k P(z_k,·) − Σ_k P(w_k,·)` with `w_k = re^{iφ_k}`,
/// `z_k = re^{i(φ_k + a_k)}`, `φ_k = 2πk/n`, `a_k = −g(φ_k)/n`, `g' = h`.
pub fn integer_poisson<T: Scalar>(h: &RealFn<T>, eps: T) -> Result<IntegerPoisson<T>> {
    Ok(integer_poisson_run(h, eps, None)?.result)
}

fn integer_poisson_run<T: Scalar>(
    h: &RealFn<T>,
    eps: T,
    collapse_budget: Option<T>,
) -> Result<IntegerPoissonRun<T>> {
    check_eps(eps)?;
    let series = TrigSeries::fit(h, eps / T::lit(30.0), FIT_START, FIT_MAX)?;
    if series.mean().abs() > T::lit(MEAN_TOL) {
        return Err(Error::NonZeroMean(series.mean().as_f64()));
    }
    let fit_grid = series.fit_grid();
    let mut verify = (4 * fit_grid).max(MIN_VERIFY_GRID);
    let mut hv = sample_real(h, verify);
    let sup_h = max_abs(hv.iter().copied());
    if sup_h < eps {
        return Ok(IntegerPoissonRun {
            result: IntegerPoisson {
                combination: PoissonCombination::default(),
                r: T::zero(),
                n: 0,
                fit_grid,
                verify_grid: verify,
                error: sup_h,
                dilation_error: sup_h,
            },
            h_samples: hv,
        });
    }

    let third = eps / T::lit(3.0);
    let mut step = 0;
    let (r, dilation_error) = loop {
        let gap = T::lit(0.1) * T::lit(0.5).powi(step);
        if gap < T::lit(1e-6) {
            return Err(Error::Construction(format!(
                "no radius r ≤ 1 − 1e-6 brings the harmonic extension within {third:e}"
            )));
        }
        let r = T::one() - gap;
        let need = next_pow2_at_least(T::lit(16.0) / gap);
        if need > verify {
            verify = need;
            hv = sample_real(h, verify);
        }
        let err = sup_diff(&series.sample_dilated(r, verify), &hv);
        log::debug!("integer_poisson: r = {r}, dilation error {err:e}");
        if err < third {
            break (r, err);
        }
        step += 1;
    };

    let g = series.antiderivative()?;
    let grid = circle_grid::<T>(verify);
    let mut n = 16usize;
    loop {
        if n > MAX_KERNELS {
            return Err(Error::Construction(format!(
                "more than {MAX_KERNELS} kernels needed for error {eps:e}"
            )));
        }
        if let Some(budget) = collapse_budget {
            if orbit_collapse_error(r, n) >= budget {
                n *= 2;
                continue;
            }
        }
        let gs = g.sample(n);
        let nn = T::from_count(n);
        let mut positives = Vec::with_capacity(n);
        let mut negatives = Vec::with_capacity(n);
        for (k, gk) in gs.iter().enumerate() {
            let phi = grid_angle::<T>(k, n);
            positives.push(DiskPoint::from_polar(r, phi - *gk / nn)?);
            negatives.push(DiskPoint::from_polar(r, phi)?);
        }
        let pos = KernelCloud::new(&positives).sum_on(&grid);
        let neg = orbit_sum_on_grid(r, n, verify);
        let err = max_abs(
            hv.iter()
                .zip(pos.iter().zip(&neg))
                .map(|(&hj, (&p, &q))| hj - (p - q)),
        );
        log::debug!("integer_poisson: n = {n}, error {err:e}");
        if err < eps {
            return Ok(IntegerPoissonRun {
                result: IntegerPoisson {
                    combination: PoissonCombination::new(positives, negatives, 0),
                    r,
                    n,
                    fit_grid,
                    verify_grid: verify,
                    error: err,
                    dilation_error,
                },
                h_samples: hv,
            });
        }
        n *= 2;
    }
}

/// Output of [`split_single_kernel`].
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSplit<T> {
    pub n: usize,
    /// `w₀ e^{2πik/n}` for `k = 1..n`.
    pub rotations: Vec<DiskPoint<T>>,
    /// The a-priori bound `2πMn/((R/r)^n − 1)`.
    pub bound: T,
    /// Measured sup error on a grid.
    pub verified_error: T,
}

/// `2πMn/((R/r)^n − 1)` with `R = (1+r)/2`, `M = (1+R)/(1−R)`.
pub fn single_kernel_bound<T: Scalar>(r: T, n: usize) -> T {
    let big_r = (T::one() + r) / T::lit(2.0);
    let m = (T::one() + big_r) / (T::one() - big_r);
    T::two_pi() * m * T::from_count(n) / ((big_r / r).powi(n as i32) - T::one())
}

/// `sup_ζ |P(w₀,ζ) − n + Σ_{k=1}^{n−1} P(w₀e^{2πik/n}, ζ)|` on a grid of `m`.
pub fn single_kernel_error<T: Scalar>(w0: DiskPoint<T>, n: usize, m: usize) -> T {
    let rotations = rotations_of(w0, n);
    let grid = circle_grid::<T>(m);
    let p0 = KernelCloud::new(std::iter::once(&w0)).sum_on(&grid);
    let rest = KernelCloud::new(&rotations).sum_on(&grid);
    let nn = T::from_count(n);
    max_abs(p0.into_iter().zip(rest).map(|(a, b)| a - nn + b))
}

fn rotations_of<T: Scalar>(w0: DiskPoint<T>, n: usize) -> Vec<DiskPoint<T>> {
    (1..n)
        .map(|k| {
            let rot = Complex::from_polar(T::one(), grid_angle(k, n));
            DiskPoint::new(w0.value() * rot).unwrap_or(w0)
        })
        .collect()
}

/// Replaces `P(w₀,·)` by `n − Σ_{k=1}^{n−1} P(w₀e^{2πik/n},·)`, doubling `n`
/// from 4 until the trapezoid bound falls below `eps`.
pub fn split_single_kernel<T: Scalar>(w0: DiskPoint<T>, eps: T) -> Result<KernelSplit<T>> {
    check_eps(eps)?;
    let r = w0.modulus();
    if r == T::zero() {
        return Ok(KernelSplit {
            n: 1,
            rotations: Vec::new(),
            bound: T::zero(),
            verified_error: T::zero(),
        });
    }
    let mut n = 4usize;
    let bound = loop {
        let b = single_kernel_bound(r, n);
        if b < eps {
            break b;
        }
        if n >= 1 << 30 {
            return Err(Error::Construction(format!("kernel at radius {r} cannot be split")));
        }
        n *= 2;
    };
    let m = (8 * n).max(1 << 12);
    Ok(KernelSplit {
        n,
        rotations: rotations_of(w0, n),
        bound,
        verified_error: single_kernel_error(w0, n, m),
    })
}

/// Turns every negative kernel of `comb` into positives plus a constant with
/// [`split_single_kernel`], giving each a budget of `eps / (2·count)`.
pub fn eliminate_negatives<T: Scalar>(comb: &PoissonCombination<T>, eps: T) -> Result<PoissonCombination<T>> {
    check_eps(eps)?;
    let count = comb.negatives.len().max(1);
    let budget = eps / T::lit(2.0 * count as f64);
    let mut out = PoissonCombination::new(comb.positives.clone(), Vec::new(), comb.constant);
    for w in &comb.negatives {
        let split = split_single_kernel(*w, budget)?;
        out.positives.extend(split.rotations);
        out.constant += split.n as i64;
    }
    Ok(out)
}

/// Output of [`better_poisson`].
#[derive(Debug, Clone, PartialEq)]
pub struct BetterPoisson<T> {
    /// Positives only, with constant equal to their number.
    pub combination: PoissonCombination<T>,
    pub integer: IntegerPoisson<T>,
    /// `2n r^n/(1 − r^n)`, the exact cost of dropping the negative orbit.
    pub collapse_error: T,
    pub error: T,
}

/// Approximates `h` within `eps` by `Σ P(z_k,·) − n`.
///
/// The negatives produced by [`integer_poisson`] form the orbit
/// `re^{2πik/n}`, whose kernel sum is exactly `n P(r^n, ζ^n)`; they are
/// replaced by the constant `n` once `2n r^n/(1 − r^n) < eps/2`.
pub fn better_poisson<T: Scalar>(h: &RealFn<T>, eps: T) -> Result<BetterPoisson<T>> {
    check_eps(eps)?;
    let half = eps / T::lit(2.0);
    let run = integer_poisson_run(h, half, Some(half))?;
    let ip = run.result;
    if ip.n == 0 {
        return Ok(BetterPoisson {
            combination: PoissonCombination::default(),
            collapse_error: T::zero(),
            error: ip.error,
            integer: ip,
        });
    }
    let combination = PoissonCombination::new(ip.combination.positives.clone(), Vec::new(), ip.n as i64);
    let values = combination.evaluate_on_grid(ip.verify_grid);
    let error = sup_diff(&run.h_samples, &values);
    if !(error < eps) {
        return Err(Error::Construction(format!(
            "kernel sum error {error:e} exceeds {eps:e} after dropping the orbit"
        )));
    }
    Ok(BetterPoisson {
        combination,
        collapse_error: orbit_collapse_error(ip.r, ip.n),
        error,
        integer: ip,
    })
}

/// Output of [`quotient_from_combination`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientApproximation<T> {
    pub quotient: BlaschkeQuotient<T>,
    /// `sup |u − arg Q|` on the verification grid.
    pub value_error: T,
    /// `sup |u' − (arg Q)'|` on the verification grid.
    pub derivative_error: T,
    pub verify_grid: usize,
}

impl<T: Scalar> QuotientApproximation<T> {
    /// `‖u − arg Q‖_{C¹}` on the verification grid.
    pub fn c1_error(&self) -> T {
        self.value_error + self.derivative_error
    }
}

/// Builds `Q = σ ∏ b(z_k)/∏ b(w_k)` from a combination with `c = 0`, with
/// `σ` chosen so that `arg Q(1) = u(0)`, and measures `u − arg Q` in `C¹`.
pub fn quotient_from_combination<T: Scalar>(
    u: &PeriodicC1Function<T>,
    comb: &PoissonCombination<T>,
    verify_grid: usize,
) -> Result<QuotientApproximation<T>> {
    if comb.constant != 0 {
        return Err(Error::InvalidParameter(format!(
            "combination must have zero constant, found {}",
            comb.constant
        )));
    }
    let num = BlaschkeProduct::new(comb.positives.clone(), CirclePoint::one());
    let den = BlaschkeProduct::new(comb.negatives.clone(), CirclePoint::one());
    let q0 = BlaschkeQuotient::reduced(num, den);
    let sigma = CirclePoint::new(u.value(T::zero()) - q0.lift(T::zero()));
    let num = q0.numerator().clone().with_sigma(sigma);
    let quotient = BlaschkeQuotient::reduced(num, q0.denominator().clone());
    measure_c1(u, quotient, verify_grid)
}

fn measure_c1<T: Scalar>(
    u: &PeriodicC1Function<T>,
    quotient: BlaschkeQuotient<T>,
    verify_grid: usize,
) -> Result<QuotientApproximation<T>> {
    let m = verify_grid.max(16);
    let shift = u.value(T::zero()) - quotient.lift(T::zero());
    let a: Vec<T> = (0..m).map(|j| quotient.lift(grid_angle(j, m)) + shift).collect();
    let value_error = sup_diff(&u.sample(m), &a);
    let d = quotient.arg_derivative_on_grid(m);
    let derivative_error = sup_diff(&u.sample_derivative(m), &d);
    Ok(QuotientApproximation {
        quotient,
        value_error,
        derivative_error,
        verify_grid: m,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `B(ζ)/ζ^{n−1}`, Fourier support bounded below.
    Below,
    /// `ζ^{n+1}/B(ζ)`, Fourier support bounded above.
    Above,
}

/// One stage of a pipeline run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "stage", rename_all = "snake_case")]
pub enum LogEntry {
    IntegerPoisson {
        eps: f64,
        r: f64,
        n: usize,
        fit_grid: usize,
        verify_grid: usize,
        dilation_error: f64,
        error: f64,
    },
    BetterPoisson {
        eps: f64,
        positives: usize,
        collapse_error: f64,
        error: f64,
    },
    Quotient {
        eps_h: f64,
        degree: usize,
        value_error: f64,
        derivative_error: f64,
        verify_grid: usize,
        accepted: bool,
    },
    Mollify {
        eta: f64,
        deviation: f64,
        min_derivative: f64,
        chord_slope: f64,
        accepted: bool,
    },
    Certify {
        result: CertificationResult,
    },
    Homeomorphism {
        direction: Direction,
        degree: usize,
        uniform_error: f64,
        support_violation: f64,
        verify_grid: usize,
        accepted: bool,
    },
}

/// Record of budgets, radii, kernel counts and measured errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunLog {
    pub note: String,
    pub entries: Vec<LogEntry>,
}

impl Default for RunLog {
    fn default() -> Self {
        Self {
            note: "errors are maxima over the stated verification grids".into(),
            entries: Vec::new(),
        }
    }
}

impl RunLog {
    pub fn push(&mut self, entry: LogEntry) {
        self.entries.push(entry);
    }
}

/// Output of [`approximate_c1`].
#[derive(Debug, Clone, PartialEq)]
pub struct C1Approximation<T> {
    /// `B`, of degree `n`.
    pub product: BlaschkeProduct<T>,
    pub n: usize,
    /// `B/ζⁿ` in reduced form.
    pub quotient: BlaschkeQuotient<T>,
    pub value_error: T,
    pub derivative_error: T,
    pub verify_grid: usize,
    pub log: RunLog,
}

/// Approximates `u` by `arg(B/ζⁿ)` with `n = deg B` so that the measured
/// `‖u − arg(B/ζⁿ)‖_{C¹}` is below `eps`.
pub fn approximate_c1<T: Scalar>(u: &PeriodicC1Function<T>, eps: T) -> Result<C1Approximation<T>> {
    check_eps(eps)?;
    let start = eps / (T::PI() + T::one());
    approximate_c1_until(u, start, |value, derivative| value + derivative < eps)
}

/// Runs the `C¹` construction with budgets `eps_h, eps_h/2, …` for the
/// kernel-sum error until `accept(value_error, derivative_error)` holds.
pub fn approximate_c1_until<T: Scalar>(
    u: &PeriodicC1Function<T>,
    eps_h: T,
    accept: impl Fn(T, T) -> bool,
) -> Result<C1Approximation<T>> {
    check_eps(eps_h)?;
    let h = u.derivative_fn();
    let mut log = RunLog::default();
    let mut eps_h = eps_h;
    let mut last = None;
    for _ in 0..C1_ATTEMPTS {
        let bp = better_poisson(&h, eps_h)?;
        let ip = &bp.integer;
        log.push(LogEntry::IntegerPoisson {
            eps: (eps_h / T::lit(2.0)).as_f64(),
            r: ip.r.as_f64(),
            n: ip.n,
            fit_grid: ip.fit_grid,
            verify_grid: ip.verify_grid,
            dilation_error: ip.dilation_error.as_f64(),
            error: ip.error.as_f64(),
        });
        log.push(LogEntry::BetterPoisson {
            eps: eps_h.as_f64(),
            positives: bp.combination.positives.len(),
            collapse_error: bp.collapse_error.as_f64(),
            error: bp.error.as_f64(),
        });
        let n = bp.combination.positives.len();
        // Σ P(z_k) − n with n kernels at the origin and no constant.
        let comb = PoissonCombination::new(bp.combination.positives.clone(), vec![DiskPoint::origin(); n], 0);
        let verify = ip.verify_grid.max(MIN_VERIFY_GRID);
        log::debug!("c1: {n} kernels at eps_h = {eps_h:e}, measuring on {verify}");
        let qa = quotient_from_combination(u, &comb, verify)?;
        let ok = accept(qa.value_error, qa.derivative_error);
        log.push(LogEntry::Quotient {
            eps_h: eps_h.as_f64(),
            degree: n,
            value_error: qa.value_error.as_f64(),
            derivative_error: qa.derivative_error.as_f64(),
            verify_grid: qa.verify_grid,
            accepted: ok,
        });
        if ok {
            let sigma = qa.quotient.numerator().sigma();
            let product = BlaschkeProduct::new(comb.positives, sigma);
            return Ok(C1Approximation {
                product,
                n,
                quotient: qa.quotient,
                value_error: qa.value_error,
                derivative_error: qa.derivative_error,
                verify_grid: qa.verify_grid,
                log,
            });
        }
        last = Some((qa.value_error, qa.derivative_error));
        eps_h = eps_h / T::lit(2.0);
    }
    let (v, d) = last.expect("at least one attempt");
    Err(Error::Construction(format!(
        "C¹ errors {v:e} (value) and {d:e} (derivative) still rejected after {C1_ATTEMPTS} budget halvings"
    )))
}

/// A continuous increasing lift `F` with `F(θ + 2π) = F(θ) + 2π`, given on
/// `[0, 2π)` and extended by that rule.
#[derive(Clone)]
pub struct Lift<T> {
    f: RealFn<T>,
}

impl<T: Scalar> fmt::Debug for Lift<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lift").finish_non_exhaustive()
    }
}

impl<T: Scalar> Lift<T> {
    /// `f` only needs to be correct on `[0, 2π)`.
    pub fn new(f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f) }
    }

    /// `θ ↦ θ + c`.
    pub fn rotation(c: T) -> Self {
        Self::new(move |t| t + c)
    }

    /// Linear interpolation through `(θ_i, F_i)` with `θ_0 = 0 < θ_1 < … < 2π`,
    /// closed up by `(2π, F_0 + 2π)`.
    pub fn piecewise_linear(points: &[(T, T)]) -> Result<Self> {
        if points.is_empty() || points[0].0 != T::zero() {
            return Err(Error::InvalidParameter("breakpoints must start at θ = 0".into()));
        }
        let mut pts: Vec<(T, T)> = points.to_vec();
        pts.push((T::two_pi(), points[0].1 + T::two_pi()));
        for w in pts.windows(2) {
            if !(w[1].0 > w[0].0) || !(w[1].1 > w[0].1) {
                return Err(Error::InvalidParameter(
                    "breakpoints must be strictly increasing in both coordinates".into(),
                ));
            }
        }
        let pts = Arc::new(pts);
        Ok(Self::new(move |t| {
            let i = pts.partition_point(|p| p.0 <= t).clamp(1, pts.len() - 1);
            let (a, b) = (pts[i - 1], pts[i]);
            a.1 + (b.1 - a.1) * (t - a.0) / (b.0 - a.0)
        }))
    }

    /// The piecewise-linear lift through the unwrapped arguments of
    /// unimodular samples at `2πj/m`.
    pub fn from_samples(values: &[Complex<T>]) -> Result<Self> {
        let m = values.len();
        if m < 3 {
            return Err(Error::InvalidGrid {
                grid: m,
                reason: "at least 3 samples are required".into(),
            });
        }
        let mut pts = Vec::with_capacity(m);
        let mut acc = values[0].arg();
        pts.push((T::zero(), acc));
        for j in 1..m {
            acc = acc + principal(values[j].arg() - values[j - 1].arg());
            pts.push((grid_angle(j, m), acc));
        }
        let total = acc + principal(values[0].arg() - values[m - 1].arg()) - pts[0].1;
        if (total - T::two_pi()).abs() > T::lit(1e-6) {
            return Err(Error::InvalidParameter(format!(
                "samples wind by {total} instead of 2π"
            )));
        }
        Self::piecewise_linear(&pts)
    }

    /// The closed-form lift of a quotient with degree difference 1.
    pub fn from_quotient(q: BlaschkeQuotient<T>) -> Result<Self> {
        if q.degree_difference() != 1 {
            return Err(Error::InvalidParameter(format!(
                "degree difference {} cannot be a homeomorphism",
                q.degree_difference()
            )));
        }
        Ok(Self::new(move |t| q.lift(t)))
    }

    pub fn eval(&self, theta: T) -> T {
        let k = (theta / T::two_pi()).floor();
        let base = theta - k * T::two_pi();
        (self.f)(base) + k * T::two_pi()
    }

    /// `e^{iF(θ)}`.
    pub fn circle_value(&self, theta: T) -> Complex<T> {
        Complex::from_polar(T::one(), self.eval(theta))
    }

    /// Smallest increment between consecutive samples on a grid of `m`.
    pub fn min_increment(&self, m: usize) -> T {
        (0..m)
            .map(|j| self.eval(grid_angle(j + 1, m)) - self.eval(grid_angle(j, m)))
            .fold(T::infinity(), T::min)
    }
}

const MOLLIFIER_NODES: usize = 1024;

/// `F_s = F * φ_η` for the bump `φ(s) ∝ exp(−1/(1 − s²))` scaled to
/// `[−η, η]`, by midpoint quadrature with normalized weights.
#[derive(Clone)]
pub struct SmoothLift<T> {
    lift: Lift<T>,
    eta: T,
    nodes: Vec<T>,
    weights: Vec<T>,
    dweights: Vec<T>,
}

impl<T: Scalar> fmt::Debug for SmoothLift<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothLift").field("eta", &self.eta).finish_non_exhaustive()
    }
}

/// Smooths an increasing lift by convolution with a bump of half-width `eta`.
pub fn mollify_lift<T: Scalar>(f: &Lift<T>, eta: T) -> Result<SmoothLift<T>> {
    if !(eta > T::zero()) || !(eta < T::PI()) {
        return Err(Error::InvalidParameter(format!("mollifier width must lie in (0, π), got {eta}")));
    }
    let n = MOLLIFIER_NODES;
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut dweights = Vec::with_capacity(n);
    for i in 0..n {
        let s = T::lit((2 * i + 1) as f64 / n as f64 - 1.0);
        let q = T::one() - s * s;
        let b = (-T::one() / q).exp();
        nodes.push(eta * s);
        weights.push(b);
        dweights.push(-T::lit(2.0) * s / (q * q) * b);
    }
    let total: T = weights.iter().fold(T::zero(), |a, &b| a + b);
    weights.iter_mut().for_each(|w| *w = *w / total);
    // Normalize so that the derivative of θ is exactly 1: −Σ w'_i t_i = 1.
    let moment = nodes
        .iter()
        .zip(&dweights)
        .fold(T::zero(), |a, (&t, &w)| a - w * t);
    dweights.iter_mut().for_each(|w| *w = *w / moment);
    Ok(SmoothLift {
        lift: f.clone(),
        eta,
        nodes,
        weights,
        dweights,
    })
}

impl<T: Scalar> SmoothLift<T> {
    pub fn eta(&self) -> T {
        self.eta
    }

    pub fn lift(&self) -> &Lift<T> {
        &self.lift
    }

    pub fn value(&self, theta: T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |a, (&t, &w)| a + w * self.lift.eval(theta - t))
    }

    /// `Σ w'_i F(θ − t_i)`, which is positive for increasing `F`.
    pub fn derivative(&self, theta: T) -> T {
        self.nodes
            .iter()
            .zip(&self.dweights)
            .fold(T::zero(), |a, (&t, &w)| a + w * self.lift.eval(theta - t))
    }

    /// `sup |F_s − F|` on a grid of `m`.
    pub fn deviation(&self, m: usize) -> T {
        max_abs((0..m).map(|j| {
            let t = grid_angle(j, m);
            self.value(t) - self.lift.eval(t)
        }))
    }

    /// `min F_s'` on a grid of `m`.
    pub fn min_derivative(&self, m: usize) -> T {
        (0..m)
            .map(|j| self.derivative(grid_angle(j, m)))
            .fold(T::infinity(), T::min)
    }

    /// `u = F_s − θ` (below) or `θ − F_s` (above) with its derivative.
    pub fn residual(&self, direction: Direction) -> PeriodicC1Function<T> {
        let a = Arc::new(self.clone());
        let b = a.clone();
        match direction {
            Direction::Below => PeriodicC1Function::new(move |t| a.value(t) - t, move |t| b.derivative(t) - T::one()),
            Direction::Above => PeriodicC1Function::new(move |t| t - a.value(t), move |t| T::one() - b.derivative(t)),
        }
    }
}

/// Output of [`approximate_homeomorphism`].
#[derive(Debug, Clone, PartialEq)]
pub struct HomeoApproximation<T> {
    pub quotient: BlaschkeQuotient<T>,
    /// Degree of `B`.
    pub degree: usize,
    pub direction: Direction,
    pub eta: T,
    /// `sup |e^{iF} − Q|` on the verification grid.
    pub uniform_error: T,
    /// Largest coefficient on the forbidden side of the support bound.
    pub support_violation: T,
    pub verify_grid: usize,
    pub certification: CertificationResult,
    pub log: RunLog,
}

/// Grid for the final uniform-error and support checks.
pub const HOMEO_VERIFY_GRID: usize = 1 << 16;
const ETA_START: f64 = 0.3;
const ETA_MIN: f64 = 1e-6;
const LIFT_GRID: usize = 4096;

/// Approximates the homeomorphism with lift `f` uniformly within `eps` by a
/// certified rational diffeomorphism `B/ζ^{n−1}` (below) or `ζ^{n+1}/B`
/// (above).
pub fn approximate_homeomorphism<T: Scalar>(
    f: &Lift<T>,
    eps: T,
    direction: Direction,
) -> Result<HomeoApproximation<T>> {
    check_eps(eps)?;
    if !(f.min_increment(LIFT_GRID) > T::zero()) {
        return Err(Error::InvalidParameter("lift is not strictly increasing".into()));
    }
    let mut log = RunLog::default();
    let half = eps / T::lit(2.0);

    let mut eta = T::lit(ETA_START);
    let (smooth, deviation, margin) = loop {
        if eta < T::lit(ETA_MIN) {
            return Err(Error::Construction(format!(
                "mollifier width fell below {ETA_MIN:e}; the map is too rough for eps = {eps:e}"
            )));
        }
        let s = mollify_lift(f, eta)?;
        let deviation = s.deviation(LIFT_GRID);
        let min_d = s.min_derivative(LIFT_GRID);
        let chord = (0..LIFT_GRID)
            .map(|j| {
                let t = grid_angle::<T>(j, LIFT_GRID);
                (f.eval(t + eta) - f.eval(t - eta)) / (eta + eta)
            })
            .fold(T::infinity(), T::min);
        let ok = deviation <= half && min_d >= chord / T::lit(2.0) && min_d > T::zero();
        log.push(LogEntry::Mollify {
            eta: eta.as_f64(),
            deviation: deviation.as_f64(),
            min_derivative: min_d.as_f64(),
            chord_slope: chord.as_f64(),
            accepted: ok,
        });
        if ok {
            break (s, deviation, min_d);
        }
        eta = eta / T::lit(2.0);
    };

    let u = smooth.residual(direction);
    let value_target = (eps - deviation) * T::lit(0.9);
    let derivative_target = margin * T::lit(0.9);
    let mut eps_h = derivative_target / (T::PI() + T::one());
    for _ in 0..C1_ATTEMPTS {
        let c1 = approximate_c1_until(&u, eps_h, |v, d| v < value_target && d < derivative_target)?;
        log.entries.extend(c1.log.entries.iter().cloned());
        let n = c1.n;
        let b = c1.product.clone();
        let quotient = match direction {
            // B ζ / ζ^n
            Direction::Below => {
                let mut zeros = b.zeros().to_vec();
                zeros.push(DiskPoint::origin());
                BlaschkeQuotient::over_monomial(BlaschkeProduct::new(zeros, b.sigma()), n)
            }
            // ζ^{n+1} / B
            Direction::Above => BlaschkeQuotient::monomial_over(n + 1, b),
        };
        log::debug!("homeomorphism: degree {n}, certifying");
        let certification = certify_quotient(&quotient, 1024);
        log::debug!("homeomorphism: {:?}", certification.verdict);
        log.push(LogEntry::Certify {
            result: certification.clone(),
        });
        let verify = HOMEO_VERIFY_GRID;
        let samples = quotient.sample(verify);
        let uniform_error = max_abs(
            samples
                .iter()
                .enumerate()
                .map(|(j, q)| (f.circle_value(grid_angle(j, verify)) - q).norm()),
        );
        let spectrum = crate::fourier::fourier_coefficients(
            &crate::fourier::SampledCircleMap::new(samples, MapKind::Unimodular)?,
        );
        let support_violation = max_abs(spectrum.iter().filter_map(|(k, c)| {
            let outside = match direction {
                Direction::Below => k < -(n as i64 - 1),
                Direction::Above => k > n as i64 + 1,
            };
            outside.then(|| c.norm())
        }));
        let ok = certification.verdict == Verdict::Diffeomorphism && uniform_error < eps;
        log.push(LogEntry::Homeomorphism {
            direction,
            degree: n,
            uniform_error: uniform_error.as_f64(),
            support_violation: support_violation.as_f64(),
            verify_grid: verify,
            accepted: ok,
        });
        if ok {
            return Ok(HomeoApproximation {
                quotient,
                degree: n,
                direction,
                eta,
                uniform_error,
                support_violation,
                verify_grid: verify,
                certification,
                log,
            });
        }
        eps_h = eps_h / T::lit(2.0);
    }
    Err(Error::Construction(format!(
        "no certified approximation within {eps:e} after {C1_ATTEMPTS} budget halvings"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn real_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> RealFn<f64> {
        Arc::new(f)
    }

    #[test]
    fn antiderivative_examples() {
        let zero = antiderivative(&real_fn(|_| 0.0)).unwrap();
        assert_eq!(zero.value(1.3), 0.0);
        let sin = antiderivative(&real_fn(f64::cos)).unwrap();
        for j in 0..20 {
            let t = 0.31 * j as f64;
            assert!((sin.value(t) - t.sin()).abs() < 1e-12);
        }
        assert!(matches!(
            antiderivative(&real_fn(|t| 1.0 + t.cos())),
            Err(Error::NonZeroMean(_))
        ));
    }

    #[test]
    fn antiderivative_of_random_trig_polynomial() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let terms: Vec<(f64, f64, f64)> = (1..=12)
            .map(|k| (k as f64, rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let t2 = terms.clone();
        let h = real_fn(move |t| t2.iter().map(|&(k, a, b)| a * (k * t).cos() + b * (k * t).sin()).sum());
        let g = antiderivative(&h).unwrap();
        assert!(g.value(0.0).abs() < 1e-12);
        for j in 0..50 {
            let t = 0.123 * j as f64;
            // Spectral differentiation oracle: g' must reproduce h.
            assert!((g.derivative(t) - h(t)).abs() < 1e-10);
            let exact: f64 = terms
                .iter()
                .map(|&(k, a, b)| (a * (k * t).sin() - b * (k * t).cos() + b) / k)
                .sum();
            assert!((g.value(t) - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn periodic_function_derivatives() {
        let f = PeriodicC1Function::from_value(|t: f64| (2.0 * t).sin());
        assert!(!f.has_exact_derivative());
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..20 {
            let t = rng.gen::<f64>() * 2.0 * PI;
            assert!((f.derivative(t) - 2.0 * (2.0 * t).cos()).abs() < 1e-4);
            assert!((f.value(t + 2.0 * PI) - f.value(t)).abs() < 1e-10);
        }
    }

    #[test]
    fn integer_poisson_examples() {
        let zero = integer_poisson(&real_fn(|_| 0.0), 0.1).unwrap();
        assert!(zero.combination.is_empty());

        let ip = integer_poisson(&real_fn(f64::cos), 0.1).unwrap();
        assert_eq!(ip.combination.positives.len(), ip.n);
        assert_eq!(ip.combination.negatives.len(), ip.n);
        assert_eq!(ip.combination.constant, 0);
        // Independent check on a grid four times finer, with direct sums.
        let m = 4 * ip.verify_grid;
        let vals = ip.combination.evaluate_on_grid(m);
        let err = (0..m)
            .map(|j| (grid_angle::<f64>(j, m).cos() - vals[j]).abs())
            .fold(0.0, f64::max);
        assert!(err < 0.1, "error {err}");
        let mean = vals.iter().sum::<f64>() / m as f64;
        assert!((mean - ip.combination.mean() as f64).abs() < 1e-8);
    }

    #[test]
    fn integer_poisson_rejects_nonzero_mean() {
        assert!(matches!(
            integer_poisson(&real_fn(|t| 0.5 + t.sin()), 0.1),
            Err(Error::NonZeroMean(_))
        ));
        assert!(integer_poisson(&real_fn(f64::sin), 0.0).is_err());
    }

    #[test]
    fn orbit_identity() {
        let (r, n, m) = (0.8, 8, 256);
        let orbit: Vec<DiskPoint<f64>> = (0..n)
            .map(|k| DiskPoint::from_polar(r, grid_angle(k, n)).unwrap())
            .collect();
        let direct = KernelCloud::new(&orbit).sum_on(&circle_grid(m));
        let closed = orbit_sum_on_grid(r, n, m);
        for (a, b) in direct.iter().zip(&closed) {
            assert!((a - b).abs() < 1e-10 * a.abs().max(1.0));
        }
        let sup = closed.iter().map(|v| (v - n as f64).abs()).fold(0.0, f64::max);
        assert_relative_eq!(sup, orbit_collapse_error(r, n), max_relative = 1e-10);
    }

    #[test]
    fn split_single_kernel_examples() {
        let s = split_single_kernel(DiskPoint::<f64>::origin(), 1e-6).unwrap();
        assert_eq!((s.n, s.rotations.len()), (1, 0));

        let w0 = DiskPoint::from_parts(0.5, 0.0).unwrap();
        let s = split_single_kernel(w0, 1e-6).unwrap();
        assert!(s.verified_error < 1e-6);
        assert_eq!(s.rotations.len(), s.n - 1);
        // Rotation invariance of the replacement sum.
        let rot = 2.0 * PI / s.n as f64;
        let cloud = KernelCloud::new(std::iter::once(&w0).chain(&s.rotations));
        for t in [0.1, 1.7, 4.0] {
            let a = cloud.sum_at(Complex::from_polar(1.0, t));
            let b = cloud.sum_at(Complex::from_polar(1.0, t + rot));
            assert!((a - b).abs() < 1e-12);
        }
        // Exponential decay of the measured error.
        let errors: Vec<f64> = [4, 8, 16, 32].iter().map(|&n| single_kernel_error(w0, n, 4096)).collect();
        for w in errors.windows(2) {
            assert!(w[1] < w[0] * w[0]);
        }
        // The error is exactly 2n r^n/(1 − r^n).
        for (i, &n) in [4usize, 8, 16].iter().enumerate() {
            assert_relative_eq!(errors[i], orbit_collapse_error(0.5, n), max_relative = 1e-9);
        }
    }

    #[test]
    fn eliminate_negatives_keeps_the_function() {
        let p = |r: f64, t: f64| DiskPoint::from_polar(r, t).unwrap();
        let comb = PoissonCombination::new(vec![p(0.5, 0.2), p(0.3, 2.0)], vec![p(0.4, 1.0), p(0.6, 4.0)], 0);
        let out = eliminate_negatives(&comb, 1e-6).unwrap();
        assert!(out.negatives.is_empty());
        assert_eq!(out.constant as usize, out.positives.len());
        let a = comb.evaluate_on_grid(2048);
        let b = out.evaluate_on_grid(2048);
        assert!(sup_diff(&a, &b) < 1e-6);
    }

    #[test]
    fn better_poisson_examples() {
        let zero = better_poisson(&real_fn(|_| 0.0), 0.1).unwrap();
        assert!(zero.combination.is_empty());

        let bp = better_poisson(&real_fn(f64::cos), 0.2).unwrap();
        let c = &bp.combination;
        assert!(c.negatives.is_empty());
        assert_eq!(c.constant as usize, c.positives.len());
        let m = 4 * bp.integer.verify_grid;
        let vals = c.evaluate_on_grid(m);
        let err = (0..m)
            .map(|j| (grid_angle::<f64>(j, m).cos() - vals[j]).abs())
            .fold(0.0, f64::max);
        assert!(err < 0.2, "error {err}");
        let mean = vals.iter().sum::<f64>() / m as f64;
        assert!(mean.abs() < 1e-8);
    }

    #[test]
    fn quotient_from_combination_examples() {
        let c = PeriodicC1Function::constant(0.7);
        let qa = quotient_from_combination(&c, &PoissonCombination::default(), 1024).unwrap();
        assert_eq!(qa.quotient.numerator().degree(), 0);
        assert_relative_eq!(qa.quotient.evaluate_angle(1.0).arg(), 0.7, epsilon = 1e-15);

        let id = PeriodicC1Function::new(|t: f64| t, |_| 1.0);
        let comb = PoissonCombination::new(vec![DiskPoint::origin()], Vec::new(), 0);
        let qa = quotient_from_combination(&id, &comb, 1024).unwrap();
        for t in [0.0, 1.0, 3.0] {
            let z = Complex::from_polar(1.0, t);
            assert!((qa.quotient.evaluate(z) - z).norm() < 1e-14);
        }
        assert!(qa.c1_error() < 1e-12);

        let bad = PoissonCombination::new(Vec::new(), Vec::new(), 1);
        assert!(quotient_from_combination(&c, &bad, 64).is_err());
    }

    #[test]
    fn quotient_error_bound() {
        let u = PeriodicC1Function::new(|t: f64| 0.2 * t.sin(), |t| 0.2 * t.cos());
        let bp = better_poisson(&u.derivative_fn(), 0.05).unwrap();
        let n = bp.combination.positives.len();
        let comb = PoissonCombination::new(bp.combination.positives, vec![DiskPoint::origin(); n], 0);
        let qa = quotient_from_combination(&u, &comb, 1 << 14).unwrap();
        assert!(qa.c1_error() <= (PI + 1.0) * qa.derivative_error + 1e-12);
    }

    #[test]
    fn approximate_c1_examples() {
        let c = approximate_c1(&PeriodicC1Function::constant(1.2), 0.1).unwrap();
        assert_eq!(c.n, 0);
        assert_eq!(c.product.degree(), 0);
        assert_relative_eq!(c.product.sigma().theta(), 1.2, epsilon = 1e-15);

        let u = PeriodicC1Function::new(|t: f64| 0.3 * t.sin(), |t| 0.3 * t.cos());
        let c = approximate_c1(&u, 0.1).unwrap();
        assert_eq!(c.product.degree(), c.n);
        assert!(c.value_error + c.derivative_error < 0.1);
        // Independent check with the closed-form lift.
        let q = &c.quotient;
        let shift = -q.lift(0.0);
        let m = 1 << 12;
        let mut worst: f64 = 0.0;
        for j in 0..m {
            let t = grid_angle::<f64>(j, m);
            let a = q.lift(t) + shift;
            let d = q.arg_derivative(CirclePoint::new(t));
            worst = worst.max((a - u.value(t)).abs());
            worst = worst.max((d - u.derivative(t)).abs());
        }
        assert!(worst < 0.1);
    }

    #[test]
    fn mollify_examples() {
        let id = Lift::<f64>::rotation(0.0);
        let s = mollify_lift(&id, 0.2).unwrap();
        for t in [0.0, 1.0, 5.0] {
            assert!((s.value(t) - t).abs() < 1e-12);
            assert!((s.derivative(t) - 1.0).abs() < 1e-12);
        }
        let pl = Lift::piecewise_linear(&[(0.0, 0.0), (PI / 2.0, PI)]).unwrap();
        let s = mollify_lift(&pl, 0.1).unwrap();
        assert!(s.min_derivative(4096) > 0.0);
        // Derivative agrees with difference quotients of the value.
        for t in [0.05, 1.5, 1.6, 3.0] {
            let h = 1e-4;
            let fd = (s.value(t + h) - s.value(t - h)) / (2.0 * h);
            assert!((fd - s.derivative(t)).abs() < 5e-3);
        }
        assert!(mollify_lift(&pl, 0.0).is_err());
    }

    #[test]
    fn mollify_converges_on_holder_lift() {
        // G(x) = (√x + x)/2 on [0, 1], F(θ) = 2π G(θ/2π).
        let f = Lift::new(|t: f64| {
            let x = t / (2.0 * PI);
            PI * (x.sqrt() + x)
        });
        let d1 = mollify_lift(&f, 0.1).unwrap().deviation(4096);
        let d2 = mollify_lift(&f, 0.01).unwrap().deviation(4096);
        assert!(d2 < d1);
        assert!(d2 < 0.1);
    }

    #[test]
    fn lift_constructors() {
        let pl = Lift::piecewise_linear(&[(0.0, 0.0), (PI / 2.0, PI)]).unwrap();
        assert_relative_eq!(pl.eval(PI / 4.0), PI / 2.0);
        assert_relative_eq!(pl.eval(2.0 * PI + PI / 4.0), 2.5 * PI);
        assert_relative_eq!(pl.eval(-PI / 4.0), pl.eval(7.0 * PI / 4.0) - 2.0 * PI, epsilon = 1e-12);
        assert!(Lift::<f64>::piecewise_linear(&[(0.0, 0.0), (1.0, -1.0)]).is_err());

        let samples: Vec<Complex<f64>> = (0..64).map(|j| Complex::from_polar(1.0, pl.eval(grid_angle(j, 64)))).collect();
        let back = Lift::from_samples(&samples).unwrap();
        assert!((back.eval(1.0) - pl.eval(1.0)).abs() < 1e-12);
        let reversed: Vec<Complex<f64>> = samples.iter().map(|z| z.conj()).collect();
        assert!(Lift::from_samples(&reversed).is_err());
    }

    #[test]
    fn rotation_is_reproduced() {
        let f = Lift::rotation(0.4);
        for direction in [Direction::Below, Direction::Above] {
            let a = approximate_homeomorphism(&f, 0.05, direction).unwrap();
            assert_eq!(a.degree, 0);
            assert_eq!(a.quotient.numerator().degree(), 1);
            assert_eq!(a.quotient.denominator().degree(), 0);
            assert!(a.quotient.numerator().zeros()[0].modulus() == 0.0);
            assert!(a.uniform_error < 1e-12);
            assert_eq!(a.certification.verdict, Verdict::Diffeomorphism);
        }
    }

    #[test]
    fn log_serializes() {
        let mut log = RunLog::default();
        log.push(LogEntry::BetterPoisson {
            eps: 0.1,
            positives: 3,
            collapse_error: 1e-9,
            error: 0.05,
        });
        let json = serde_json::to_string(&log).unwrap();
        assert!(json.contains("\"stage\":\"better_poisson\""));
        let back: RunLog = serde_json::from_str(&json).unwrap();
        assert_eq!(back, log);
    }
}
