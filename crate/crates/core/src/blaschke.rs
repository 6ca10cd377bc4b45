//! Finite Blaschke products and quotients of two of them.
//!
//! Everything is evaluated factor by factor. The argument derivative on the
//! circle is the Poisson sum `ζB'(ζ)/B(ζ) = Σ P(z_k, ζ)`, and the continuous
//! argument has the closed form `arg σ + nθ − 2 Σ Arg(1 − z̄_k ζ)`, continuous
//! because `Re(1 − z̄_k ζ) > 0`.

use num_complex::Complex;

use crate::disk::{pseudo_hyperbolic, CirclePoint, DiskPoint, KernelCloud, MoebiusDisk};
use crate::error::{Error, Result};
use crate::numeric::{circle_grid, grid_angle, pairwise_sum, principal};
use crate::scalar::Scalar;

/// Pseudo-hyperbolic distance under which a numerator and a denominator zero
/// are considered equal.
pub const COMMON_ZERO_TOL: f64 = 1e-12;

/// Largest grid used by argument unwrapping and winding integration.
pub const MAX_GRID: usize = 1 << 20;

fn one<T: Scalar>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

/// Number of zeros exactly at the origin, and the others.
fn split_origin<T: Scalar>(zeros: &[DiskPoint<T>]) -> (usize, Vec<DiskPoint<T>>) {
    let rest: Vec<DiskPoint<T>> = zeros
        .iter()
        .filter(|p| !(p.value().re == T::zero() && p.value().im == T::zero()))
        .copied()
        .collect();
    (zeros.len() - rest.len(), rest)
}

/// `σ ∏ (z − z_k)/(1 − z̄_k z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeProduct<T> {
    zeros: Vec<DiskPoint<T>>,
    sigma: CirclePoint<T>,
}

impl<T: Scalar> BlaschkeProduct<T> {
    pub fn new(zeros: Vec<DiskPoint<T>>, sigma: CirclePoint<T>) -> Self {
        Self { zeros, sigma }
    }

    /// `B(z) = z`.
    pub fn identity() -> Self {
        Self::monomial(1)
    }

    pub fn constant(sigma: CirclePoint<T>) -> Self {
        Self::new(Vec::new(), sigma)
    }

    /// `zⁿ`.
    pub fn monomial(n: usize) -> Self {
        Self::new(vec![DiskPoint::origin(); n], CirclePoint::one())
    }

    pub fn zeros(&self) -> &[DiskPoint<T>] {
        &self.zeros
    }

    pub fn sigma(&self) -> CirclePoint<T> {
        self.sigma
    }

    pub fn with_sigma(mut self, sigma: CirclePoint<T>) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn evaluate(&self, z: Complex<T>) -> Complex<T> {
        let mut acc = self.sigma.value();
        for a in &self.zeros {
            let a = a.value();
            acc = acc * (z - a) / (one::<T>() - a.conj() * z);
        }
        acc
    }

    /// `d/dθ arg B(e^{iθ}) = Σ P(z_k, ζ)`.
    pub fn arg_derivative(&self, zeta: CirclePoint<T>) -> T {
        let terms: Vec<T> = self
            .zeros
            .iter()
            .map(|&a| crate::disk::poisson_kernel(a, zeta))
            .collect();
        pairwise_sum(&terms)
    }

    /// `z B'(z)/B(z)` by differentiating each factor:
    /// `z/(z − a) + āz/(1 − āz)`.
    pub fn log_derivative(&self, z: Complex<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for a in &self.zeros {
            let a = a.value();
            acc = acc + z / (z - a) + a.conj() * z / (one::<T>() - a.conj() * z);
        }
        acc
    }

    /// Continuous argument of `B(e^{iθ})` as a function of `θ ∈ ℝ`.
    pub fn lift(&self, theta: T) -> T {
        let zeta = Complex::from_polar(T::one(), theta);
        let n = T::from_count(self.degree());
        let mut corr = T::zero();
        for a in &self.zeros {
            corr = corr + (one::<T>() - a.value().conj() * zeta).arg();
        }
        self.sigma.theta() + n * theta - T::lit(2.0) * corr
    }

    pub fn kernel_cloud(&self) -> KernelCloud<T> {
        KernelCloud::new(&self.zeros)
    }
}

/// `f = B₁/B₂` with no common zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeQuotient<T> {
    numerator: BlaschkeProduct<T>,
    denominator: BlaschkeProduct<T>,
}

/// Result of [`BlaschkeQuotient::winding`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Winding<T> {
    /// Winding number `deg B₁ − deg B₂`.
    pub turns: i64,
    /// The unrounded trapezoid integral of the argument derivative.
    pub integral: T,
    pub grid: usize,
}

impl<T: Scalar> Winding<T> {
    /// `2π · turns`.
    pub fn radians(&self) -> T {
        T::two_pi() * T::lit(self.turns as f64)
    }
}

/// An unwrapped argument sampled at `θ_j = 2πj/m`, `j = 0..=m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousArg<T> {
    pub thetas: Vec<T>,
    pub values: Vec<T>,
}

impl<T: Scalar> ContinuousArg<T> {
    pub fn grid_size(&self) -> usize {
        self.thetas.len() - 1
    }

    /// `arg f(e^{2πi}) − arg f(1)` along the unwrapped samples.
    pub fn increment(&self) -> T {
        self.values[self.values.len() - 1] - self.values[0]
    }
}

/// Upper bounds on `sup |D|` and `sup |D'|` where `D` is the argument
/// derivative on the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeBounds<T> {
    pub sup_abs: T,
    pub lipschitz: T,
    /// Number of power sums used by the spectral bound, if it applied.
    pub spectral_terms: Option<usize>,
}

/// Bounds from the expansion `D(θ) = d₀ + 2 Re Σ_{j≥1} s_j e^{−ijθ}`,
/// `s_j = Σ z_k^j − Σ w_k^j`, truncated after `terms` sums with explicit tails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralBounds<T> {
    pub terms: usize,
    pub sup_abs: T,
    pub lipschitz: T,
}

impl<T: Scalar> BlaschkeQuotient<T> {
    pub fn new(numerator: BlaschkeProduct<T>, denominator: BlaschkeProduct<T>) -> Result<Self> {
        let tol = T::lit(COMMON_ZERO_TOL);
        let (num_origin, num_rest) = split_origin(&numerator.zeros);
        let (den_origin, den_rest) = split_origin(&denominator.zeros);
        let clash = |z: &DiskPoint<T>| Error::CommonZero {
            re: z.value().re.as_f64(),
            im: z.value().im.as_f64(),
        };
        if num_origin > 0 && den_origin > 0 {
            return Err(clash(&DiskPoint::origin()));
        }
        // d(z, 0) = |z|.
        if den_origin > 0 {
            if let Some(z) = num_rest.iter().find(|z| z.modulus() < tol) {
                return Err(clash(z));
            }
        }
        if num_origin > 0 {
            if let Some(w) = den_rest.iter().find(|w| w.modulus() < tol) {
                return Err(clash(w));
            }
        }
        for z in &num_rest {
            if let Some(w) = den_rest.iter().find(|w| pseudo_hyperbolic(*z, **w) < tol) {
                return Err(clash(w));
            }
        }
        Ok(Self {
            numerator,
            denominator,
        })
    }

    /// Builds `B₁/B₂` after cancelling coinciding numerator/denominator zeros.
    pub fn reduced(numerator: BlaschkeProduct<T>, denominator: BlaschkeProduct<T>) -> Self {
        let tol = T::lit(COMMON_ZERO_TOL);
        let is_origin = |p: &DiskPoint<T>| p.value().re == T::zero() && p.value().im == T::zero();
        let origins = numerator
            .zeros
            .iter()
            .filter(|p| is_origin(p))
            .count()
            .min(denominator.zeros.iter().filter(|p| is_origin(p)).count());
        let mut num_keep = vec![true; numerator.zeros.len()];
        let mut den_keep = vec![true; denominator.zeros.len()];
        for (keep, zeros) in [(&mut num_keep, &numerator.zeros), (&mut den_keep, &denominator.zeros)] {
            let mut left = origins;
            for (k, p) in keep.iter_mut().zip(zeros) {
                if left > 0 && is_origin(p) {
                    *k = false;
                    left -= 1;
                }
            }
        }
        for (j, w) in denominator.zeros.iter().enumerate() {
            if !den_keep[j] {
                continue;
            }
            let hit = numerator
                .zeros
                .iter()
                .enumerate()
                .position(|(i, z)| num_keep[i] && pseudo_hyperbolic(*z, *w) < tol);
            if let Some(i) = hit {
                num_keep[i] = false;
                den_keep[j] = false;
            }
        }
        let pick = |zeros: &[DiskPoint<T>], keep: &[bool]| -> Vec<DiskPoint<T>> {
            zeros.iter().zip(keep).filter(|(_, k)| **k).map(|(z, _)| *z).collect()
        };
        Self {
            numerator: BlaschkeProduct::new(pick(&numerator.zeros, &num_keep), numerator.sigma),
            denominator: BlaschkeProduct::new(pick(&denominator.zeros, &den_keep), denominator.sigma),
        }
    }

    pub fn from_product(b: BlaschkeProduct<T>) -> Self {
        Self {
            numerator: b,
            denominator: BlaschkeProduct::constant(CirclePoint::one()),
        }
    }

    /// `f(z) = z`.
    pub fn identity() -> Self {
        Self::from_product(BlaschkeProduct::identity())
    }

    /// `B(ζ)/ζⁿ`, reduced.
    pub fn over_monomial(b: BlaschkeProduct<T>, n: usize) -> Self {
        Self::reduced(b, BlaschkeProduct::monomial(n))
    }

    /// `ζⁿ/B(ζ)`, reduced.
    pub fn monomial_over(n: usize, b: BlaschkeProduct<T>) -> Self {
        Self::reduced(BlaschkeProduct::monomial(n), b)
    }

    pub fn numerator(&self) -> &BlaschkeProduct<T> {
        &self.numerator
    }

    pub fn denominator(&self) -> &BlaschkeProduct<T> {
        &self.denominator
    }

    /// `deg B₁ − deg B₂`.
    pub fn degree_difference(&self) -> i64 {
        self.numerator.degree() as i64 - self.denominator.degree() as i64
    }

    /// All zeros of numerator and denominator.
    pub fn points(&self) -> impl Iterator<Item = &DiskPoint<T>> {
        self.numerator.zeros.iter().chain(&self.denominator.zeros)
    }

    pub fn evaluate(&self, z: Complex<T>) -> Complex<T> {
        self.numerator.evaluate(z) / self.denominator.evaluate(z)
    }

    pub fn evaluate_angle(&self, theta: T) -> Complex<T> {
        self.evaluate(Complex::from_polar(T::one(), theta))
    }

    /// `arg f(e^{iθ})` in `(−π, π]`.
    ///
    /// Each numerator factor equals `ζ · conj(v)/v` with `v = 1 − z̄_k ζ`, so
    /// the phase is `arg σ₁ − arg σ₂ + dθ + 2 arg(∏ conj(v_k) ∏ v'_k)`. Only
    /// multiplications are needed, which makes this much cheaper than
    /// [`Self::evaluate`] for large degrees.
    pub fn phase(&self, theta: T) -> T {
        let zeta = Complex::from_polar(T::one(), theta);
        let mut acc = one::<T>();
        let mut count = 0usize;
        let mut push = |v: Complex<T>| {
            acc = acc * v;
            count += 1;
            if count.is_multiple_of(8) {
                acc = acc / acc.norm();
            }
        };
        for z in &self.numerator.zeros {
            push((one::<T>() - z.value().conj() * zeta).conj());
        }
        for w in &self.denominator.zeros {
            push(one::<T>() - w.value().conj() * zeta);
        }
        let d = T::lit(self.degree_difference() as f64);
        let base = self.numerator.sigma.theta() - self.denominator.sigma.theta() + principal(d * theta);
        principal(base + T::lit(2.0) * acc.arg())
    }

    /// Samples `f(e^{2πij/m})`, `j = 0..m`, as `e^{i·phase}`.
    pub fn sample(&self, m: usize) -> Vec<Complex<T>> {
        (0..m)
            .map(|j| Complex::from_polar(T::one(), self.phase(grid_angle(j, m))))
            .collect()
    }

    /// `Σ P(z_k, ζ) − Σ P(w_k, ζ)`.
    pub fn arg_derivative(&self, zeta: CirclePoint<T>) -> T {
        self.numerator.arg_derivative(zeta) - self.denominator.arg_derivative(zeta)
    }

    /// The argument derivative at every point of a uniform grid of size `m`.
    pub fn arg_derivative_on_grid(&self, m: usize) -> Vec<T> {
        let grid = circle_grid::<T>(m);
        let num = self.numerator.kernel_cloud().sum_on(&grid);
        let den = self.denominator.kernel_cloud().sum_on(&grid);
        num.into_iter().zip(den).map(|(a, b)| a - b).collect()
    }

    /// `z f'(z)/f(z)` by direct differentiation of the factors.
    pub fn log_derivative(&self, z: Complex<T>) -> Complex<T> {
        self.numerator.log_derivative(z) - self.denominator.log_derivative(z)
    }

    /// Continuous argument of `f(e^{iθ})` in closed form.
    pub fn lift(&self, theta: T) -> T {
        self.numerator.lift(theta) - self.denominator.lift(theta)
    }

    fn moduli(&self) -> impl Iterator<Item = T> + '_ {
        self.points().map(|p| p.modulus())
    }

    /// `Σ 2r(1+r)/(1−r)³` over all zeros: a global Lipschitz bound for the
    /// argument derivative.
    pub fn global_lipschitz(&self) -> T {
        let two = T::lit(2.0);
        let terms: Vec<T> = self
            .moduli()
            .map(|r| two * r * (T::one() + r) / (T::one() - r).powi(3))
            .collect();
        pairwise_sum(&terms)
    }

    /// Elementary bound on `sup |D|` from `(1−r)/(1+r) ≤ P ≤ (1+r)/(1−r)`.
    pub fn global_sup_abs(&self) -> T {
        let (mut num_hi, mut num_lo, mut den_hi, mut den_lo) =
            (T::zero(), T::zero(), T::zero(), T::zero());
        for z in &self.numerator.zeros {
            let r = z.modulus();
            num_hi = num_hi + (T::one() + r) / (T::one() - r);
            num_lo = num_lo + (T::one() - r) / (T::one() + r);
        }
        for w in &self.denominator.zeros {
            let r = w.modulus();
            den_hi = den_hi + (T::one() + r) / (T::one() - r);
            den_lo = den_lo + (T::one() - r) / (T::one() + r);
        }
        (num_hi - den_lo).max(den_hi - num_lo).max(T::zero())
    }

    /// Spectral bounds on `sup |D|` and `sup |D'|` with tails below
    /// `tail_target`. Returns `None` when the number of power sums needed
    /// would make the work `points × terms` exceed `max_work`.
    pub fn spectral_bounds(&self, tail_target: T, max_work: usize) -> Option<SpectralBounds<T>> {
        let d0 = T::lit(self.degree_difference() as f64);
        let rs: Vec<T> = self.moduli().filter(|&r| r > T::zero()).collect();
        if rs.is_empty() {
            return Some(SpectralBounds {
                terms: 0,
                sup_abs: d0.abs(),
                lipschitz: T::zero(),
            });
        }
        let two = T::lit(2.0);
        let tails = |j: usize| {
            let jj = T::from_count(j);
            let mut t0 = T::zero();
            let mut t1 = T::zero();
            for &r in &rs {
                let p = r.powi(j as i32 + 1);
                t0 = t0 + p / (T::one() - r);
                t1 = t1 + p * (jj + T::one() - jj * r) / (T::one() - r).powi(2);
            }
            (two * t0, two * t1)
        };
        let points = self.numerator.degree() + self.denominator.degree();
        let mut terms = 8usize;
        let (tail0, tail1) = loop {
            let (t0, t1) = tails(terms);
            if t1 <= tail_target {
                break (t0, t1);
            }
            terms += terms / 4 + 1;
            if terms.saturating_mul(points) > max_work || terms > (1 << 24) {
                return None;
            }
        };
        let mut sums = vec![Complex::new(T::zero(), T::zero()); terms];
        let mut accumulate = |z: Complex<T>, sign: T| {
            let mut p = z;
            for s in sums.iter_mut() {
                if p.re == T::zero() && p.im == T::zero() {
                    break;
                }
                *s = *s + p * sign;
                p = p * z;
            }
        };
        for z in &self.numerator.zeros {
            accumulate(z.value(), T::one());
        }
        for w in &self.denominator.zeros {
            accumulate(w.value(), -T::one());
        }
        let abs: Vec<T> = sums.iter().map(|s| s.norm()).collect();
        let weighted: Vec<T> = abs
            .iter()
            .enumerate()
            .map(|(j, &a)| T::from_count(j + 1) * a)
            .collect();
        Some(SpectralBounds {
            terms,
            sup_abs: d0.abs() + two * pairwise_sum(&abs) + tail0,
            lipschitz: two * pairwise_sum(&weighted) + tail1,
        })
    }

    /// The better of the global and spectral bounds.
    pub fn derivative_bounds(&self) -> DerivativeBounds<T> {
        let mut bounds = DerivativeBounds {
            sup_abs: self.global_sup_abs(),
            lipschitz: self.global_lipschitz(),
            spectral_terms: None,
        };
        if let Some(s) = self.spectral_bounds(T::lit(1e-3), 2_000_000_000) {
            bounds.sup_abs = bounds.sup_abs.min(s.sup_abs);
            bounds.lipschitz = bounds.lipschitz.min(s.lipschitz);
            bounds.spectral_terms = Some(s.terms);
        }
        bounds
    }

    /// Winding number, from a trapezoid integral of the argument derivative
    /// rounded to the nearest multiple of `2π`.
    pub fn winding(&self) -> Result<Winding<T>> {
        let expected = self.degree_difference();
        let rs: Vec<T> = self.moduli().collect();
        let four_pi = T::lit(2.0) * T::two_pi();
        // The trapezoid rule integrates P(z, ·) with error 4π r^m/(1 − r^m).
        let mut m = 1024usize;
        loop {
            let err: T = rs
                .iter()
                .map(|&r| {
                    let rm = r.powi(m as i32);
                    four_pi * rm / (T::one() - rm)
                })
                .fold(T::zero(), |a, b| a + b);
            if err < T::lit(1e-8) || m >= MAX_GRID {
                break;
            }
            m *= 2;
        }
        let d = self.arg_derivative_on_grid(m);
        let integral = pairwise_sum(&d) * T::two_pi() / T::from_count(m);
        let turns_f = (integral / T::two_pi()).round();
        let off = (integral - turns_f * T::two_pi()).abs();
        let turns = turns_f.as_f64() as i64;
        if off.as_f64() > 0.1 || turns != expected {
            return Err(Error::WindingInconsistent {
                integral: integral.as_f64(),
                expected,
            });
        }
        if off.as_f64() > 1e-6 {
            log::warn!(
                "winding integral {} deviates from 2π·{} by {:e} on a grid of {}",
                integral,
                expected,
                off,
                m
            );
        }
        Ok(Winding {
            turns,
            integral,
            grid: m,
        })
    }

    /// Unwrapped argument on a uniform grid of `grid_size` intervals.
    ///
    /// Fails with [`Error::GridTooCoarse`] when the grid step times the bound
    /// on `|D|` reaches `π`, since nearest-branch continuation could then skip
    /// a turn.
    pub fn continuous_arg(&self, grid_size: usize) -> Result<ContinuousArg<T>> {
        if grid_size < 16 {
            return Err(Error::InvalidGrid {
                grid: grid_size,
                reason: "at least 16 points are required".into(),
            });
        }
        let step = T::two_pi() / T::from_count(grid_size);
        let sup = self.derivative_bounds().sup_abs;
        if !(sup * step < T::PI()) {
            return Err(Error::GridTooCoarse {
                grid: grid_size,
                reason: format!("argument derivative may reach {}", sup),
            });
        }
        let mut thetas = Vec::with_capacity(grid_size + 1);
        let mut values = Vec::with_capacity(grid_size + 1);
        let mut prev_raw = T::zero();
        for j in 0..=grid_size {
            let theta = if j == grid_size {
                T::two_pi()
            } else {
                grid_angle(j, grid_size)
            };
            let raw = self.phase(theta);
            let value = if j == 0 {
                raw
            } else {
                values[j - 1] + principal(raw - prev_raw)
            };
            prev_raw = raw;
            thetas.push(theta);
            values.push(value);
        }
        Ok(ContinuousArg { thetas, values })
    }

    /// [`Self::continuous_arg`], doubling the grid until it is fine enough.
    pub fn continuous_arg_auto(&self, grid_size: usize) -> Result<ContinuousArg<T>> {
        let mut m = grid_size.max(16);
        loop {
            match self.continuous_arg(m) {
                Err(Error::GridTooCoarse { .. }) if m < MAX_GRID => m *= 2,
                other => return other,
            }
        }
    }

    /// `f ∘ m` as a quotient: zeros move to `m⁻¹(z_k)`, and the unimodular
    /// factor is matched at `ζ = 1`.
    pub fn precompose(&self, m: &MoebiusDisk<T>) -> Result<Self> {
        let inv = m.inverse();
        let pull = |b: &BlaschkeProduct<T>| -> Result<BlaschkeProduct<T>> {
            let zeros = b
                .zeros
                .iter()
                .map(|z| inv.apply_disk(*z))
                .collect::<Result<Vec<_>>>()?;
            Ok(BlaschkeProduct::new(zeros, CirclePoint::one()))
        };
        let num = pull(&self.numerator)?;
        let den = pull(&self.denominator)?;
        let target = self.evaluate(m.apply(one()));
        let base = num.evaluate(one()) / den.evaluate(one());
        let sigma = CirclePoint::from_complex(target / base)?;
        Self::new(num.with_sigma(sigma), den)
    }
}

/// Free-function form of [`BlaschkeProduct::evaluate`].
pub fn evaluate<T: Scalar>(b: &BlaschkeProduct<T>, z: Complex<T>) -> Complex<T> {
    b.evaluate(z)
}

/// Free-function form of [`BlaschkeProduct::arg_derivative`].
pub fn arg_derivative<T: Scalar>(b: &BlaschkeProduct<T>, zeta: CirclePoint<T>) -> T {
    b.arg_derivative(zeta)
}

/// Free-function form of [`BlaschkeQuotient::arg_derivative`].
pub fn quotient_arg_derivative<T: Scalar>(q: &BlaschkeQuotient<T>, zeta: CirclePoint<T>) -> T {
    q.arg_derivative(zeta)
}

/// Free-function form of [`BlaschkeQuotient::winding`], in radians.
pub fn winding<T: Scalar>(q: &BlaschkeQuotient<T>) -> Result<T> {
    q.winding().map(|w| w.radians())
}

/// Free-function form of [`BlaschkeQuotient::continuous_arg`].
pub fn continuous_arg<T: Scalar>(
    q: &BlaschkeQuotient<T>,
    grid_size: usize,
) -> Result<ContinuousArg<T>> {
    q.continuous_arg(grid_size)
}
