//! Sampled circle maps and their Fourier spectra.
//!
//! Coefficients are trapezoid sums on the uniform grid, computed with an FFT:
//! `f̂(n) = (1/m) Σ_j f(e^{2πij/m}) e^{−2πijn/m}` for `|n| ≤ m/2 − 1`.

use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::disk::DiskPoint;
use crate::error::{Error, Result};
use crate::numeric::{grid_angle, pairwise_sum};
use crate::scalar::Scalar;

/// Smallest accepted grid.
pub const MIN_GRID: usize = 64;

/// Default support threshold.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// Allowed deviation from `|f| = 1` for maps tagged unimodular.
pub const UNIMODULAR_TOL: f64 = 1e-9;

/// [`UNIMODULAR_TOL`], widened to 64 ulps for `f32`.
pub fn unimodular_tol<T: Scalar>() -> T {
    T::lit(UNIMODULAR_TOL).max(T::lit(64.0) * T::epsilon())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    General,
    Unimodular,
    EmbeddingClaimed,
}

/// `θ ↦ f(e^{iθ})` or its `θ`-derivative.
pub type Evaluator<T> = Arc<dyn Fn(T) -> Complex<T> + Send + Sync>;

/// A circle map sampled at `ζ_j = e^{2πij/m}`.
#[derive(Clone)]
pub struct SampledCircleMap<T> {
    values: Vec<Complex<T>>,
    kind: MapKind,
    evaluator: Option<Evaluator<T>>,
    derivative: Option<Evaluator<T>>,
}

impl<T: Scalar> fmt::Debug for SampledCircleMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SampledCircleMap")
            .field("grid_size", &self.values.len())
            .field("kind", &self.kind)
            .field("evaluator", &self.evaluator.is_some())
            .field("derivative", &self.derivative.is_some())
            .finish()
    }
}

impl<T: Scalar> SampledCircleMap<T> {
    pub fn new(values: Vec<Complex<T>>, kind: MapKind) -> Result<Self> {
        let m = values.len();
        if m < MIN_GRID {
            return Err(Error::InvalidGrid {
                grid: m,
                reason: format!("at least {MIN_GRID} samples are required"),
            });
        }
        if let Some(i) = values
            .iter()
            .position(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::InvalidParameter(format!("sample {i} is not finite")));
        }
        if kind == MapKind::Unimodular {
            let tol = unimodular_tol::<T>();
            if let Some((index, v)) = values
                .iter()
                .enumerate()
                .find(|(_, v)| (v.norm() - T::one()).abs() >= tol)
            {
                return Err(Error::NotUnimodular {
                    index,
                    modulus: v.norm().as_f64(),
                });
            }
        }
        Ok(Self {
            values,
            kind,
            evaluator: None,
            derivative: None,
        })
    }

    /// Samples `f` on a grid of size `m` and keeps it as the exact evaluator.
    pub fn from_fn(
        m: usize,
        kind: MapKind,
        f: impl Fn(T) -> Complex<T> + Send + Sync + 'static,
    ) -> Result<Self> {
        let values = (0..m).map(|j| f(grid_angle(j, m))).collect();
        let mut map = Self::new(values, kind)?;
        map.evaluator = Some(Arc::new(f));
        Ok(map)
    }

    /// Attaches an exact evaluator `θ ↦ f(e^{iθ})` consistent with the samples.
    pub fn with_evaluator(mut self, f: impl Fn(T) -> Complex<T> + Send + Sync + 'static) -> Self {
        self.evaluator = Some(Arc::new(f));
        self
    }

    /// Attaches an exact `θ`-derivative `d/dθ f(e^{iθ})`.
    pub fn with_derivative(mut self, d: impl Fn(T) -> Complex<T> + Send + Sync + 'static) -> Self {
        self.derivative = Some(Arc::new(d));
        self
    }

    pub fn with_kind(mut self, kind: MapKind) -> Result<Self> {
        let checked = Self::new(std::mem::take(&mut self.values), kind)?;
        self.values = checked.values;
        self.kind = kind;
        Ok(self)
    }

    pub fn grid_size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn evaluator(&self) -> Option<&Evaluator<T>> {
        self.evaluator.as_ref()
    }

    pub fn derivative(&self) -> Option<&Evaluator<T>> {
        self.derivative.as_ref()
    }

    /// Evaluates at an arbitrary angle if an exact evaluator is attached.
    pub fn evaluate(&self, theta: T) -> Option<Complex<T>> {
        self.evaluator.as_ref().map(|f| f(theta))
    }

    /// The same map on a grid of size `m`; requires an exact evaluator.
    pub fn resample(&self, m: usize) -> Result<Self> {
        let f = self.evaluator.clone().ok_or_else(|| {
            Error::InvalidParameter("resampling needs an exact evaluator".into())
        })?;
        let values = (0..m).map(|j| f(grid_angle(j, m))).collect();
        let mut map = Self::new(values, self.kind)?;
        map.evaluator = Some(f);
        map.derivative = self.derivative.clone();
        Ok(map)
    }

    /// `f − c`.
    pub fn shifted(&self, c: Complex<T>) -> Self {
        let values = self.values.iter().map(|&v| v - c).collect();
        Self {
            values,
            kind: MapKind::General,
            evaluator: self
                .evaluator
                .clone()
                .map(|f| Arc::new(move |t| f(t) - c) as Evaluator<T>),
            derivative: self.derivative.clone(),
        }
    }
}

/// The discrete transform `(1/m) Σ_j x_j e^{−2πijk/m}` for all `k = 0..m`.
pub fn dft<T: Scalar>(values: &[Complex<T>]) -> Vec<Complex<T>> {
    let m = values.len();
    let mut buf = values.to_vec();
    if m == 0 {
        return buf;
    }
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let inv = T::one() / T::from_count(m);
    buf.iter_mut().for_each(|c| *c = *c * inv);
    buf
}

/// Fourier coefficients `f̂(n)` for `|n| ≤ window`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSpectrum<T> {
    coefficients: Vec<Complex<T>>,
    window: usize,
    tolerance: T,
    grid_size: usize,
    kind: MapKind,
}

impl<T: Scalar> FourierSpectrum<T> {
    /// A spectrum from explicit coefficients `c[n + window]`.
    pub fn from_coefficients(coefficients: Vec<Complex<T>>, grid_size: usize, kind: MapKind) -> Self {
        assert!(coefficients.len() % 2 == 1, "coefficient window must be symmetric");
        let window = coefficients.len() / 2;
        Self {
            coefficients,
            window,
            tolerance: T::lit(DEFAULT_TOLERANCE),
            grid_size,
            kind,
        }
    }

    pub fn with_tolerance(mut self, tolerance: T) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn tolerance(&self) -> T {
        self.tolerance
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    /// `f̂(n)`, or zero outside the computed window.
    pub fn coefficient(&self, n: i64) -> Complex<T> {
        if n.unsigned_abs() as usize > self.window {
            return Complex::new(T::zero(), T::zero());
        }
        self.coefficients[(n + self.window as i64) as usize]
    }

    /// `(n, f̂(n))` in increasing `n`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex<T>)> + '_ {
        let w = self.window as i64;
        self.coefficients
            .iter()
            .enumerate()
            .map(move |(i, &c)| (i as i64 - w, c))
    }

    /// The restriction to `|n| ≤ w`.
    pub fn truncated(&self, w: usize) -> Self {
        let w = w.min(self.window);
        let lo = self.window - w;
        Self {
            coefficients: self.coefficients[lo..=self.window + w].to_vec(),
            window: w,
            ..self.clone()
        }
    }

    /// `{n : |f̂(n)| > tolerance}`.
    pub fn support(&self) -> Vec<i64> {
        self.iter()
            .filter(|(_, c)| c.norm() > self.tolerance)
            .map(|(n, _)| n)
            .collect()
    }

    /// `Σ |f̂(n)|²` over the window.
    pub fn sum_squares(&self) -> T {
        let sq: Vec<T> = self.coefficients.iter().map(|c| c.norm_sqr()).collect();
        pairwise_sum(&sq)
    }

    /// `π Σ |n| |f̂(n)|²` over the outer eighth of the window: the part of
    /// the area sum the window may have cut short.
    pub fn area_tail(&self) -> T {
        let start = self.window - self.window / 8;
        let tail: Vec<T> = self
            .iter()
            .filter(|(n, _)| n.unsigned_abs() as usize >= start)
            .map(|(n, c)| T::lit(n.unsigned_abs() as f64) * c.norm_sqr())
            .collect();
        T::PI() * pairwise_sum(&tail)
    }

    /// `π Σ n |f̂(n)|²`, the signed area enclosed by the image curve.
    pub fn enclosed_area(&self) -> T {
        let tail = self.area_tail();
        if tail.as_f64() > 1e-6 {
            log::warn!(
                "area sum tail {:e} exceeds 1e-6; the window of {} is too small",
                tail,
                self.window
            );
        }
        let terms: Vec<T> = self
            .iter()
            .map(|(n, c)| T::lit(n as f64) * c.norm_sqr())
            .collect();
        T::PI() * pairwise_sum(&terms)
    }

    /// Largest `|⟨f̂(· − j), f̂(· − k)⟩ − δ_jk|` over shift pairs.
    pub fn onb_check(&self, shifts: RangeInclusive<i64>) -> Result<T> {
        if self.kind != MapKind::Unimodular {
            return Err(Error::InvalidParameter(
                "orthonormality only holds for unimodular maps".into(),
            ));
        }
        let mut worst = T::zero();
        for j in shifts.clone() {
            for k in shifts.clone() {
                let d = j - k;
                let terms: Vec<Complex<T>> = self
                    .iter()
                    .map(|(p, c)| c * self.coefficient(p + d).conj())
                    .collect();
                let mut ip = pairwise_sum(&terms);
                if j == k {
                    ip = ip - Complex::new(T::one(), T::zero());
                }
                worst = worst.max(ip.norm());
            }
        }
        Ok(worst)
    }

    /// `Σ_{n≥0} f̂(n) zⁿ + Σ_{n≥1} f̂(−n) z̄ⁿ`.
    pub fn harmonic_extension(&self, z: DiskPoint<T>) -> Complex<T> {
        if z.modulus() > T::lit(0.999) {
            log::warn!("harmonic extension at |z| = {} loses accuracy", z.modulus());
        }
        let z = z.value();
        let zc = z.conj();
        let mut acc = self.coefficient(0);
        let (mut p, mut q) = (z, zc);
        for n in 1..=self.window as i64 {
            acc = acc + self.coefficient(n) * p + self.coefficient(-n) * q;
            p = p * z;
            q = q * zc;
        }
        acc
    }

    /// Wirtinger derivatives `(∂F/∂z, ∂F/∂z̄)` of the harmonic extension.
    pub fn harmonic_gradient(&self, z: DiskPoint<T>) -> (Complex<T>, Complex<T>) {
        let z = z.value();
        let zc = z.conj();
        let mut fz = Complex::new(T::zero(), T::zero());
        let mut fzc = fz;
        let (mut p, mut q) = (Complex::new(T::one(), T::zero()), Complex::new(T::one(), T::zero()));
        for n in 1..=self.window as i64 {
            let nn = T::lit(n as f64);
            fz = fz + self.coefficient(n) * p * nn;
            fzc = fzc + self.coefficient(-n) * q * nn;
            p = p * z;
            q = q * zc;
        }
        (fz, fzc)
    }

    /// Samples of `Σ f̂(n) r^{|n|} e^{inθ}` at `θ_j = 2πj/m`; with `r = 1`
    /// this resynthesizes the truncated series. Needs `m > 2·window`.
    pub fn synthesize(&self, r: T, m: usize) -> Vec<Complex<T>> {
        assert!(m > 2 * self.window, "synthesis grid too small for the window");
        let mut buf = vec![Complex::new(T::zero(), T::zero()); m];
        let mut rn = T::one();
        for n in 0..=self.window as i64 {
            let pos = self.coefficient(n) * rn;
            buf[n as usize] = buf[n as usize] + pos;
            if n > 0 {
                let idx = m - n as usize;
                buf[idx] = buf[idx] + self.coefficient(-n) * rn;
            }
            rn = rn * r;
        }
        FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
        buf
    }

    /// Spectrum CSV: header `n,re,im,abs`, one row per index, 17 significant
    /// digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,re,im,abs\n");
        for (n, c) in self.iter() {
            out.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e}\n",
                n,
                c.re.as_f64(),
                c.im.as_f64(),
                c.norm().as_f64()
            ));
        }
        out
    }
}

/// Coefficients for `|n| ≤ m/2 − 1`; the Nyquist index is dropped.
pub fn fourier_coefficients<T: Scalar>(map: &SampledCircleMap<T>) -> FourierSpectrum<T> {
    let m = map.grid_size();
    let full = dft(map.values());
    let w = m / 2 - 1;
    let coefficients = (-(w as i64)..=w as i64)
        .map(|n| full[n.rem_euclid(m as i64) as usize])
        .collect();
    FourierSpectrum {
        coefficients,
        window: w,
        tolerance: T::lit(DEFAULT_TOLERANCE),
        grid_size: m,
        kind: map.kind(),
    }
}

/// [`fourier_coefficients`] with the window restricted to `|n| ≤ window`.
pub fn fourier_window<T: Scalar>(map: &SampledCircleMap<T>, window: usize) -> FourierSpectrum<T> {
    fourier_coefficients(map).truncated(window)
}

/// The harmonic extension of a sampled map at `z`.
pub fn harmonic_extension<T: Scalar>(map: &SampledCircleMap<T>, z: DiskPoint<T>) -> Complex<T> {
    fourier_coefficients(map).harmonic_extension(z)
}

/// `|Σ |f̂(n)|² − (1/m) Σ_j |f(ζ_j)|²|` with all `m` discrete coefficients.
pub fn parseval_defect<T: Scalar>(map: &SampledCircleMap<T>) -> T {
    let full = dft(map.values());
    let lhs: Vec<T> = full.iter().map(|c| c.norm_sqr()).collect();
    let rhs: Vec<T> = map.values().iter().map(|c| c.norm_sqr()).collect();
    (pairwise_sum(&lhs) - pairwise_sum(&rhs) / T::from_count(map.grid_size())).abs()
}

/// One Richardson step for a quantity with `O(m⁻²)` error, given values at
/// grids `m` and `2m`.
pub fn richardson<T: Scalar>(coarse: Complex<T>, fine: Complex<T>) -> Complex<T> {
    (fine * T::lit(4.0) - coarse) / T::lit(3.0)
}
