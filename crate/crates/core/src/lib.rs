//! Numerical toolkit for circle homeomorphisms and embeddings.
//!
//! * [`blaschke`]: finite Blaschke products and quotients on the circle,
//!   argument derivatives, winding numbers and derivative bounds.
//! * [`fourier`]: sampled circle maps, Fourier spectra, Parseval and area
//!   checks, harmonic extension.
//! * [`certify`]: grid-plus-Lipschitz certification of quotient
//!   diffeomorphisms and the sufficient conditions on zeros and poles.
//! * [`approx`]: the Poisson-sum pipeline producing rational circle
//!   diffeomorphisms close to a given map.
//! * [`gallery`]: explicit example maps.
//! * [`bounds`]: Hall, Weitsman and horizontal-convexity coefficient bounds
//!   and curvature bounds.
//!
//! The core is generic over [`Scalar`] (`f32` or `f64`); the `*64` aliases
//! fix the scalar to `f64`.

// `!(x > 0)` tests also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod blaschke;
pub mod bounds;
pub mod certify;
pub mod disk;
pub mod error;
pub mod fourier;
pub mod gallery;
pub mod mapspec;
pub mod numeric;
pub mod scalar;

pub use approx::{
    antiderivative, approximate_c1, approximate_homeomorphism, better_poisson, integer_poisson, mollify_lift,
    quotient_from_combination, split_single_kernel, Direction, Lift, PeriodicC1Function, PoissonCombination, RunLog,
};
pub use blaschke::{BlaschkeProduct, BlaschkeQuotient};
pub use bounds::{curvature_bound, heinz_report, horconvex_report, HeinzReport, HorconvexReport};
pub use certify::{
    certify_quotient, embedding_check_sampled, homeo_check_sampled, pseudo_condition, CertificationResult, Verdict,
};
pub use disk::{poisson_kernel, pseudo_hyperbolic, CirclePoint, DiskPoint, MoebiusDisk};
pub use error::{Error, Result};
pub use fourier::{fourier_coefficients, FourierSpectrum, MapKind, SampledCircleMap};
pub use gallery::{avoidable_embedding, mobius_map, rational_family, star_embedding, AvoidableParams, StarParams};
pub use mapspec::MapSpec;
pub use scalar::Scalar;

pub type CirclePoint64 = CirclePoint<f64>;
pub type DiskPoint64 = DiskPoint<f64>;
pub type MoebiusDisk64 = MoebiusDisk<f64>;
pub type BlaschkeProduct64 = BlaschkeProduct<f64>;
pub type BlaschkeQuotient64 = BlaschkeQuotient<f64>;
pub type SampledCircleMap64 = SampledCircleMap<f64>;
pub type FourierSpectrum64 = FourierSpectrum<f64>;
pub type PoissonCombination64 = PoissonCombination<f64>;
pub type PeriodicC1Function64 = PeriodicC1Function<f64>;
pub type Lift64 = Lift<f64>;
pub type StarParams64 = StarParams<f64>;
