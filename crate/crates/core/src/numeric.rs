//! Small numerical helpers: deterministic summation, angle reduction and
//! uniform circle grids.

use std::ops::Add;

use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::Scalar;

const PAIRWISE_BLOCK: usize = 32;

/// Pairwise (tree) summation in a fixed order.
pub fn pairwise_sum<V>(xs: &[V]) -> V
where
    V: Copy + Zero + Add<Output = V>,
{
    if xs.len() <= PAIRWISE_BLOCK {
        return xs.iter().fold(V::zero(), |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Reduces an angle to `[0, 2π)`.
pub fn wrap_two_pi<T: Scalar>(theta: T) -> T {
    let tau = T::two_pi();
    let mut t = theta % tau;
    if t < T::zero() {
        t = t + tau;
    }
    if t >= tau {
        t = T::zero();
    }
    t
}

/// Reduces an angle to `(-π, π]`.
pub fn principal<T: Scalar>(theta: T) -> T {
    let pi = T::PI();
    let t = wrap_two_pi(theta + pi) - pi;
    if t <= -pi {
        t + T::two_pi()
    } else {
        t
    }
}

/// Node `j` of the uniform grid with `m` points on `[0, 2π)`.
pub fn grid_angle<T: Scalar>(j: usize, m: usize) -> T {
    T::two_pi() * T::from_count(j) / T::from_count(m)
}

/// `e^{iθ_j}` for the uniform grid with `m` points.
pub fn circle_grid<T: Scalar>(m: usize) -> Vec<Complex<T>> {
    (0..m)
        .map(|j| {
            let t = grid_angle::<T>(j, m);
            Complex::new(t.cos(), t.sin())
        })
        .collect()
}

/// Index and value of the smallest element; NaNs are treated as `-∞` so they
/// surface as failures instead of being skipped.
pub fn argmin<T: Scalar>(xs: &[T]) -> Option<(usize, T)> {
    let mut best: Option<(usize, T)> = None;
    for (j, &x) in xs.iter().enumerate() {
        let x = if x.is_nan() { T::neg_infinity() } else { x };
        match best {
            Some((_, b)) if b <= x => {}
            _ => best = Some((j, x)),
        }
    }
    best
}

pub fn max_abs<T: Scalar>(xs: impl IntoIterator<Item = T>) -> T {
    xs.into_iter()
        .fold(T::zero(), |acc, x| if x.abs() > acc || x.is_nan() { x.abs() } else { acc })
}
