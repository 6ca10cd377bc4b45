//! Explicit example maps: a star-shaped quadrilateral with `f̂(1) = 0`, the
//! `k`-fold symmetric embeddings with a block of vanishing coefficients,
//! Möbius maps and sampled quotients.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::blaschke::{BlaschkeProduct, BlaschkeQuotient};
use crate::certify::{embedding_check_sampled, EmbeddingVerdict};
use crate::disk::{CirclePoint, DiskPoint};
use crate::error::{Error, Result};
use crate::fourier::{fourier_window, MapKind, SampledCircleMap};
use crate::numeric::{grid_angle, wrap_two_pi};
use crate::scalar::Scalar;

/// Smallest `period · 2^p` that is at least `min`.
pub fn aligned_grid(period: usize, min: usize) -> usize {
    let period = period.max(1);
    let mut m = period;
    while m < min {
        m *= 2;
    }
    m
}

/// Vertex `F(2π/3) = x + iy` of the star quadrilateral `1, x+iy, −1, x−iy`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarParams<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> StarParams<T> {
    pub fn new(x: T, y: T) -> Result<Self> {
        if !(x > T::zero() && y > T::zero()) || !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "star vertex must have positive finite coordinates, got ({x}, {y})"
            )));
        }
        Ok(Self { x, y })
    }

    /// The parameters `(8, 1/√3)` for which `f̂(1) = 0`.
    pub fn vanishing() -> Self {
        Self {
            x: T::lit(8.0),
            y: T::one() / T::lit(3.0).sqrt(),
        }
    }

    /// `−x + 3√3 y + 5`, proportional to `f̂(1)`.
    pub fn first_coefficient_factor(&self) -> T {
        -self.x + T::lit(3.0) * T::lit(3.0).sqrt() * self.y + T::lit(5.0)
    }

    /// Closed form `f̂(1) = 3(−x + 3√3 y + 5)/(4π²)`.
    pub fn first_coefficient(&self) -> T {
        T::lit(3.0) * self.first_coefficient_factor() / (T::lit(4.0) * T::PI() * T::PI())
    }

    fn vertex(&self) -> Complex<T> {
        Complex::new(self.x, self.y)
    }

    /// Position at `s/6` of a full turn, `s ∈ [0, 3]`.
    fn upper(&self, s: T) -> Complex<T> {
        let one = Complex::new(T::one(), T::zero());
        let p = self.vertex();
        let two = T::lit(2.0);
        if s <= two {
            one + (p - one) * (s / two)
        } else {
            p + (-one - p) * (s - two)
        }
    }

    /// `F(θ)` for any real `θ`.
    pub fn evaluate(&self, theta: T) -> Complex<T> {
        let t = wrap_two_pi(theta);
        let s = T::lit(3.0) * t / T::PI();
        if s <= T::lit(3.0) {
            self.upper(s)
        } else {
            self.upper(T::lit(6.0) - s).conj()
        }
    }
}

/// Grid used for the star map: `12 · 2^p ≥ min`, so all vertices are nodes.
pub fn star_grid(min: usize) -> usize {
    aligned_grid(12, min)
}

/// The piecewise-linear quadrilateral with `F(0) = 1`, `F(2π/3) = x + iy`,
/// `F(π) = −1`, `F(4π/3) = x − iy`, conjugate symmetric on the grid.
pub fn star_embedding<T: Scalar>(p: StarParams<T>, m: usize) -> Result<SampledCircleMap<T>> {
    let p = StarParams::new(p.x, p.y)?;
    let mut values = vec![Complex::new(T::zero(), T::zero()); m];
    #[allow(clippy::needless_range_loop)]
    for j in 0..=m / 2 {
        // s = 6j/m from integer parts keeps vertex nodes exact.
        let whole = (6 * j) / m;
        let frac = T::from_count((6 * j) % m) / T::from_count(m);
        values[j] = p.upper(T::from_count(whole) + frac);
    }
    for j in m / 2 + 1..m {
        values[j] = values[m - j].conj();
    }
    let map = SampledCircleMap::new(values, MapKind::EmbeddingClaimed)?.with_evaluator(move |t| p.evaluate(t));
    match embedding_check_sampled(&map)? {
        EmbeddingVerdict::Simple => Ok(map),
        EmbeddingVerdict::SelfIntersecting { first, second } => Err(Error::InvalidParameter(format!(
            "star polygon self-intersects (segments {first} and {second})"
        ))),
    }
}

/// `N` for the embedding with `f̂(n) = 0` for `|n| ≤ N`; the symmetry order is
/// `k = N + 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvoidableParams {
    #[serde(rename = "N")]
    pub n: usize,
}

impl AvoidableParams {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("N must be positive".into()));
        }
        Ok(Self { n })
    }

    pub fn k(&self) -> usize {
        self.n + 2
    }

    /// Grid `2k · 2^p ≥ min`: every kink `θ = πl/k` is a node.
    pub fn grid(&self, min: usize) -> usize {
        aligned_grid(2 * self.k(), min)
    }
}

/// Triangle wave `arccos(cos t)` by folding.
pub fn triangle_wave<T: Scalar>(t: T) -> T {
    let w = wrap_two_pi(t);
    if w <= T::PI() {
        w
    } else {
        T::two_pi() - w
    }
}

/// `ρ(t)e^{ih(t)}` with `g = arccos(cos t)`, `ρ = 1 + 2g/π`, `h = g + g²/π`.
fn avoidable_profile<T: Scalar>(g: T) -> (T, T) {
    let rho = T::one() + T::lit(2.0) * g / T::PI();
    let h = g + g * g / T::PI();
    (rho, h)
}

/// `f(e^{iθ}) = ρ(kθ)e^{i(θ + h(kθ))}` for any real `θ`.
pub fn avoidable_value<T: Scalar>(p: AvoidableParams, theta: T) -> Complex<T> {
    let (rho, h) = avoidable_profile(triangle_wave(T::from_count(p.k()) * theta));
    Complex::from_polar(rho, theta + h)
}

/// Rotations `e^{2πil/k}`, `l = 0..k`, with the `l = 0` entry exactly 1.
fn symmetry_rotations<T: Scalar>(k: usize) -> Vec<Complex<T>> {
    (0..k)
        .map(|l| {
            if l == 0 {
                Complex::new(T::one(), T::zero())
            } else {
                Complex::from_polar(T::one(), grid_angle(l, k))
            }
        })
        .collect()
}

/// The `k`-fold symmetric embedding sampled on `m` points, `k | m`.
///
/// The first block `0 ≤ j < m/k` is evaluated from the formula; block `l` is
/// the first rotated by `e^{2πil/k}`, so [`symmetry_residual`] is exactly 0.
pub fn avoidable_embedding<T: Scalar>(p: AvoidableParams, m: usize) -> Result<SampledCircleMap<T>> {
    let p = AvoidableParams::new(p.n)?;
    let k = p.k();
    if !m.is_multiple_of(k) {
        return Err(Error::InvalidGrid {
            grid: m,
            reason: format!("grid must be a multiple of k = {k}"),
        });
    }
    let block = m / k;
    let mut values = Vec::with_capacity(m);
    for j in 0..block {
        // kθ_j = 2π(kj mod m)/m, folded exactly in integers.
        let q = (k * j) % m;
        let g = T::two_pi() * T::from_count(q.min(m - q)) / T::from_count(m);
        let (rho, h) = avoidable_profile(g);
        values.push(Complex::from_polar(rho, grid_angle::<T>(j, m) + h));
    }
    for w in symmetry_rotations::<T>(k).into_iter().skip(1) {
        for j in 0..block {
            values.push(w * values[j]);
        }
    }
    Ok(SampledCircleMap::new(values, MapKind::EmbeddingClaimed)?.with_evaluator(move |t| avoidable_value(p, t)))
}

/// `max_{j,l} |f(e^{2πil/k}ζ_j) − e^{2πil/k} f(ζ_j)|` for `j < m/k`, `k | m`.
///
/// Every grid point is `e^{2πil/k}ζ_j` for exactly one such pair, so this
/// covers each sample once.
pub fn symmetry_residual<T: Scalar>(map: &SampledCircleMap<T>, k: usize) -> Result<T> {
    let m = map.grid_size();
    if k == 0 || !m.is_multiple_of(k) {
        return Err(Error::InvalidGrid {
            grid: m,
            reason: format!("grid must be a multiple of k = {k}"),
        });
    }
    let v = map.values();
    let block = m / k;
    let mut worst = T::zero();
    for (l, w) in symmetry_rotations::<T>(k).into_iter().enumerate() {
        for j in 0..block {
            let d = (v[j + l * block] - w * v[j]).norm();
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

/// `f(ζ) = (ζ + a)/(1 + āζ)`.
pub fn mobius_map<T: Scalar>(a: DiskPoint<T>, m: usize) -> Result<SampledCircleMap<T>> {
    let av = a.value();
    let f = move |t: T| {
        let z = Complex::from_polar(T::one(), t);
        (z + av) / (Complex::new(T::one(), T::zero()) + av.conj() * z)
    };
    let s = T::one() - av.norm_sqr();
    Ok(SampledCircleMap::from_fn(m, MapKind::Unimodular, f)?.with_derivative(move |t| {
        let z = Complex::from_polar(T::one(), t);
        let d = Complex::new(T::one(), T::zero()) + av.conj() * z;
        Complex::new(T::zero(), T::one()) * z * s / (d * d)
    }))
}

/// Samples a quotient on the grid; `d/dθ f = i A'(θ) f` with `A' = ζQ'/Q`.
pub fn rational_family<T: Scalar>(q: &BlaschkeQuotient<T>, m: usize) -> Result<SampledCircleMap<T>> {
    let values = q.sample(m);
    let qe = q.clone();
    let qd = q.clone();
    Ok(SampledCircleMap::new(values, MapKind::Unimodular)?
        .with_evaluator(move |t| qe.evaluate_angle(t))
        .with_derivative(move |t| {
            let a = qd.arg_derivative(CirclePoint::new(t));
            Complex::new(T::zero(), a) * qd.evaluate_angle(t)
        }))
}

/// `ζ²/b_{z₁}(ζ)` with `b_{z₁}` the single factor vanishing at `z₁`.
pub fn z_squared_over_b<T: Scalar>(z1: DiskPoint<T>) -> BlaschkeQuotient<T> {
    BlaschkeQuotient::reduced(
        BlaschkeProduct::monomial(2),
        BlaschkeProduct::new(vec![z1], CirclePoint::one()),
    )
}

/// A closed SVG polyline through the samples, scaled to a `size`-pixel
/// square with the imaginary axis pointing up.
pub fn svg_curve<T: Scalar>(map: &SampledCircleMap<T>, size: u32) -> String {
    let pts: Vec<(f64, f64)> = map.values().iter().map(|v| (v.re.as_f64(), v.im.as_f64())).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    let size_f = f64::from(size);
    let pad = 0.05 * size_f;
    let scale = (size_f - 2.0 * pad) / span;
    let cx = 0.5 * (x0 + x1);
    let cy = 0.5 * (y0 + y1);
    let mut body = String::with_capacity(pts.len() * 24);
    for (i, &(x, y)) in pts.iter().enumerate() {
        if i > 0 {
            body.push(' ');
        }
        let px = 0.5 * size_f + (x - cx) * scale;
        let py = 0.5 * size_f - (y - cy) * scale;
        body.push_str(&format!("{px:.3},{py:.3}"));
    }
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n\
         <polygon points=\"{body}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n\
         </svg>\n"
    )
}

/// Result of a random search over star-shaped polygons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarSearchReport {
    pub seed: u64,
    pub trials: usize,
    pub window: usize,
    pub grid: usize,
    /// Smallest `Σ_{|n|≤N} |f̂(n)|` found.
    pub best_value: f64,
    /// Vertices `[re, im]` of the best polygon, at parameters `2πi/V`.
    pub best_vertices: Vec<[f64; 2]>,
}

/// Samples the closed polygon through `vertices` at parameters `2πi/V`.
pub fn polygon_map<T: Scalar>(vertices: &[Complex<T>], m: usize) -> Result<SampledCircleMap<T>> {
    let v = vertices.len();
    if v < 3 || !m.is_multiple_of(v) {
        return Err(Error::InvalidGrid {
            grid: m,
            reason: format!("need at least 3 vertices and a grid divisible by {v}"),
        });
    }
    let per = m / v;
    let values = (0..m)
        .map(|j| {
            let (i, r) = (j / per, j % per);
            let a = vertices[i];
            let b = vertices[(i + 1) % v];
            a + (b - a) * (T::from_count(r) / T::from_count(per))
        })
        .collect();
    SampledCircleMap::new(values, MapKind::EmbeddingClaimed)
}

/// Random polygons star-shaped about 0, minimizing `Σ_{|n|≤N}|f̂(n)|`.
///
/// An exploration aid only: a small value found here says nothing about
/// whether the infimum over star-shaped embeddings is positive.
pub fn star_search(seed: u64, trials: usize, window: usize, vertices: usize) -> Result<StarSearchReport> {
    if vertices < 3 || trials == 0 {
        return Err(Error::InvalidParameter("need at least 3 vertices and one trial".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = aligned_grid(vertices, 4096);
    let mut best = (f64::INFINITY, Vec::new());
    for _ in 0..trials {
        let mut angles: Vec<f64> = (0..vertices).map(|_| rng.gen::<f64>() * std::f64::consts::TAU).collect();
        angles.sort_by(f64::total_cmp);
        let verts: Vec<Complex<f64>> = angles
            .iter()
            .map(|&a| Complex::from_polar(rng.gen_range(0.2..2.0), a))
            .collect();
        let map = match polygon_map(&verts, grid) {
            Ok(m) => m,
            Err(_) => continue,
        };
        if !matches!(embedding_check_sampled(&map), Ok(EmbeddingVerdict::Simple)) {
            continue;
        }
        let spec = fourier_window(&map, window);
        let value: f64 = spec.iter().map(|(_, c)| c.norm()).sum();
        if value < best.0 {
            best = (value, verts);
        }
    }
    Ok(StarSearchReport {
        seed,
        trials,
        window,
        grid,
        best_value: best.0,
        best_vertices: best.1.iter().map(|v| [v.re, v.im]).collect(),
    })
}
