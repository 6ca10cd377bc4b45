//! Elementary geometry of the unit disk: Poisson kernel, pseudo-hyperbolic
//! distance, disk automorphisms and the additive Harnack gap.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numeric::wrap_two_pi;
use crate::scalar::Scalar;

/// Distance from the unit circle below which disk points are rejected.
pub const DISK_MARGIN: f64 = 1e-12;

/// A point of the unit circle, stored with its canonical angle in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirclePoint<T> {
    theta: T,
    value: Complex<T>,
}

impl<T: Scalar> CirclePoint<T> {
    pub fn new(theta: T) -> Self {
        let theta = wrap_two_pi(theta);
        Self {
            theta,
            value: Complex::new(theta.cos(), theta.sin()),
        }
    }

    pub fn one() -> Self {
        Self::new(T::zero())
    }

    /// The point `z/|z|`.
    pub fn from_complex(z: Complex<T>) -> Result<Self> {
        if z.norm_sqr() == T::zero() || !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::ZeroModulus);
        }
        Ok(Self::new(z.im.atan2(z.re)))
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn value(&self) -> Complex<T> {
        self.value
    }
}

/// A point of the open unit disk, at least [`DISK_MARGIN`] away from the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint<T> {
    value: Complex<T>,
}

impl<T: Scalar> DiskPoint<T> {
    pub fn new(value: Complex<T>) -> Result<Self> {
        let r = value.norm();
        if !(r < T::one() - T::lit(DISK_MARGIN)) {
            return Err(Error::OutsideDisk {
                re: value.re.as_f64(),
                im: value.im.as_f64(),
            });
        }
        Ok(Self { value })
    }

    pub fn from_parts(re: T, im: T) -> Result<Self> {
        Self::new(Complex::new(re, im))
    }

    pub fn from_polar(r: T, theta: T) -> Result<Self> {
        Self::new(Complex::from_polar(r, theta))
    }

    pub fn origin() -> Self {
        Self {
            value: Complex::new(T::zero(), T::zero()),
        }
    }

    pub fn value(&self) -> Complex<T> {
        self.value
    }

    pub fn modulus(&self) -> T {
        self.value.norm()
    }
}

/// The disk automorphism `z ↦ σ (z − a) / (1 − ā z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusDisk<T> {
    pub a: DiskPoint<T>,
    pub sigma: CirclePoint<T>,
}

impl<T: Scalar> MoebiusDisk<T> {
    pub fn new(a: DiskPoint<T>, sigma: CirclePoint<T>) -> Self {
        Self { a, sigma }
    }

    pub fn identity() -> Self {
        Self::new(DiskPoint::origin(), CirclePoint::one())
    }

    /// The automorphism sending `a` to `0` with unit rotation.
    pub fn to_origin(a: DiskPoint<T>) -> Self {
        Self::new(a, CirclePoint::one())
    }

    pub fn apply(&self, z: Complex<T>) -> Complex<T> {
        let a = self.a.value;
        self.sigma.value * (z - a) / (Complex::new(T::one(), T::zero()) - a.conj() * z)
    }

    /// Applies the map to a disk point. Fails only when rounding pushes an
    /// image within the boundary margin.
    pub fn apply_disk(&self, z: DiskPoint<T>) -> Result<DiskPoint<T>> {
        DiskPoint::new(self.apply(z.value))
    }

    pub fn inverse(&self) -> Self {
        // z = σ̄ (w + σa) / (1 + conj(σa) w)
        let sa = self.sigma.value * self.a.value;
        Self {
            a: DiskPoint { value: -sa },
            sigma: CirclePoint::new(-self.sigma.theta),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let zero = other.inverse().apply(self.a.value);
        let a = DiskPoint::new(zero)?;
        let one = Complex::new(T::one(), T::zero());
        // m(z) = σ (z − a)/(1 − āz) evaluated at z = 1 recovers σ.
        let at_one = self.apply(other.apply(one));
        let sigma = at_one * (one - a.value.conj()) / (one - a.value);
        Ok(Self {
            a,
            sigma: CirclePoint::from_complex(sigma)?,
        })
    }
}

/// `P(z, ζ) = (1 − |z|²) / |ζ − z|²`.
pub fn poisson_kernel<T: Scalar>(z: DiskPoint<T>, zeta: CirclePoint<T>) -> T {
    (T::one() - z.value.norm_sqr()) / (zeta.value - z.value).norm_sqr()
}

/// The same kernel written as `Re((ζ + z)/(ζ − z))`.
pub fn poisson_kernel_re<T: Scalar>(z: DiskPoint<T>, zeta: CirclePoint<T>) -> T {
    ((zeta.value + z.value) / (zeta.value - z.value)).re
}

/// `d(z, w) = |z − w| / |1 − z w̄|`.
pub fn pseudo_hyperbolic<T: Scalar>(z: DiskPoint<T>, w: DiskPoint<T>) -> T {
    let one = Complex::new(T::one(), T::zero());
    (z.value - w.value).norm() / (one - z.value * w.value.conj()).norm()
}

/// `2|z − w| / ((1 − |z|)(1 − |w|))`, a bound on `|h(z) − h(w)| / h(0)` for
/// positive harmonic `h`.
pub fn harnack_gap_bound<T: Scalar>(z: DiskPoint<T>, w: DiskPoint<T>) -> T {
    let two = T::lit(2.0);
    two * (z.value - w.value).norm() / ((T::one() - z.modulus()) * (T::one() - w.modulus()))
}

/// A set of disk points stored column-wise for fast Poisson sums over grids.
#[derive(Debug, Clone, Default)]
pub struct KernelCloud<T> {
    xs: Vec<T>,
    ys: Vec<T>,
    weights: Vec<T>,
    // Points at the origin contribute exactly 1 each.
    at_origin: usize,
}

impl<T: Scalar> KernelCloud<T> {
    pub fn new<'a>(points: impl IntoIterator<Item = &'a DiskPoint<T>>) -> Self
    where
        T: 'a,
    {
        let mut cloud = Self {
            xs: Vec::new(),
            ys: Vec::new(),
            weights: Vec::new(),
            at_origin: 0,
        };
        for p in points {
            if p.value.re == T::zero() && p.value.im == T::zero() {
                cloud.at_origin += 1;
                continue;
            }
            cloud.xs.push(p.value.re);
            cloud.ys.push(p.value.im);
            cloud.weights.push(T::one() - p.value.norm_sqr());
        }
        cloud
    }

    pub fn len(&self) -> usize {
        self.xs.len() + self.at_origin
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `Σ_k P(z_k, ζ)` for `ζ` on the circle.
    pub fn sum_at(&self, zeta: Complex<T>) -> T {
        let (c, s) = (zeta.re, zeta.im);
        let mut acc = T::zero();
        for ((&x, &y), &w) in self.xs.iter().zip(&self.ys).zip(&self.weights) {
            let dx = c - x;
            let dy = s - y;
            acc = acc + w / (dx * dx + dy * dy);
        }
        acc + T::from_count(self.at_origin)
    }

    /// Poisson sums at every point of a grid of circle points.
    pub fn sum_on(&self, grid: &[Complex<T>]) -> Vec<T> {
        grid.iter().map(|&z| self.sum_at(z)).collect()
    }
}
