//! JSON description of circle maps.
//!
//! ```json
//! {"type": "blaschke_quotient", "zeros": [[0.3, 0.0]], "poles": [], "sigma": 0.0}
//! {"type": "mobius", "a": [0.5, 0.0]}
//! {"type": "star", "x": 8.0, "y": 0.5773502691896258}
//! {"type": "avoidable", "N": 1}
//! {"type": "samples", "values": [[1.0, 0.0], ...], "kind": "embedding_claimed"}
//! {"type": "piecewise_lift", "breakpoints": [[0.0, 0.0], [1.5707963267948966, 3.141592653589793]]}
//! ```

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::approx::Lift;
use crate::blaschke::{BlaschkeProduct, BlaschkeQuotient};
use crate::disk::{CirclePoint, DiskPoint};
use crate::error::{Error, Result};
use crate::fourier::{MapKind, SampledCircleMap};
use crate::gallery::{avoidable_embedding, mobius_map, rational_family, star_embedding, star_grid, AvoidableParams, StarParams};

fn default_kind() -> MapKind {
    MapKind::General
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapSpec {
    BlaschkeQuotient {
        zeros: Vec<[f64; 2]>,
        #[serde(default)]
        poles: Vec<[f64; 2]>,
        #[serde(default)]
        sigma: f64,
    },
    Mobius {
        a: [f64; 2],
    },
    Star {
        x: f64,
        y: f64,
    },
    Avoidable {
        #[serde(rename = "N")]
        n: usize,
    },
    Samples {
        values: Vec<[f64; 2]>,
        #[serde(default = "default_kind")]
        kind: MapKind,
    },
    PiecewiseLift {
        breakpoints: Vec<[f64; 2]>,
    },
}

fn disk_points(pairs: &[[f64; 2]]) -> Result<Vec<DiskPoint<f64>>> {
    pairs.iter().map(|&[re, im]| DiskPoint::from_parts(re, im)).collect()
}

fn pairs(points: &[DiskPoint<f64>]) -> Vec<[f64; 2]> {
    points.iter().map(|p| [p.value().re, p.value().im]).collect()
}

impl MapSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("map spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("map specs always serialize")
    }

    /// Checks disk membership and parameter ranges.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::BlaschkeQuotient { zeros, poles, sigma } => {
                disk_points(zeros)?;
                disk_points(poles)?;
                if !sigma.is_finite() {
                    return Err(Error::InvalidParameter("sigma must be finite".into()));
                }
            }
            Self::Mobius { a } => {
                DiskPoint::from_parts(a[0], a[1])?;
            }
            Self::Star { x, y } => {
                StarParams::new(*x, *y)?;
            }
            Self::Avoidable { n } => {
                AvoidableParams::new(*n)?;
            }
            Self::Samples { values, .. } => {
                if values.iter().flatten().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidParameter("samples must be finite".into()));
                }
            }
            Self::PiecewiseLift { breakpoints } => {
                self.lift_from_breakpoints(breakpoints)?;
            }
        }
        Ok(())
    }

    fn lift_from_breakpoints(&self, breakpoints: &[[f64; 2]]) -> Result<Lift<f64>> {
        let pts: Vec<(f64, f64)> = breakpoints.iter().map(|&[t, f]| (t, f)).collect();
        // A trailing (2π, F(0) + 2π) is implied; accept it when given.
        let tau = std::f64::consts::TAU;
        let pts = match (pts.first(), pts.last()) {
            (Some(a), Some(b)) if pts.len() > 1 && b.0 == tau && (b.1 - a.1 - tau).abs() < 1e-12 => {
                pts[..pts.len() - 1].to_vec()
            }
            _ => pts,
        };
        Lift::piecewise_linear(&pts)
    }

    pub fn from_quotient(q: &BlaschkeQuotient<f64>) -> Self {
        let sigma = q.numerator().sigma().theta() - q.denominator().sigma().theta();
        Self::BlaschkeQuotient {
            zeros: pairs(q.numerator().zeros()),
            poles: pairs(q.denominator().zeros()),
            sigma,
        }
    }

    /// The quotient for `blaschke_quotient` and `mobius` specs.
    pub fn quotient(&self) -> Result<BlaschkeQuotient<f64>> {
        match self {
            Self::BlaschkeQuotient { zeros, poles, sigma } => BlaschkeQuotient::new(
                BlaschkeProduct::new(disk_points(zeros)?, CirclePoint::new(*sigma)),
                BlaschkeProduct::new(disk_points(poles)?, CirclePoint::one()),
            ),
            // (ζ + a)/(1 + āζ) has its zero at −a.
            Self::Mobius { a } => Ok(BlaschkeQuotient::from_product(BlaschkeProduct::new(
                vec![DiskPoint::from_parts(-a[0], -a[1])?],
                CirclePoint::one(),
            ))),
            _ => Err(Error::InvalidParameter(format!("a {} spec is not a Blaschke quotient", self.type_name()))),
        }
    }

    pub fn type_name(&self) -> &'static str {
        match self {
            Self::BlaschkeQuotient { .. } => "blaschke_quotient",
            Self::Mobius { .. } => "mobius",
            Self::Star { .. } => "star",
            Self::Avoidable { .. } => "avoidable",
            Self::Samples { .. } => "samples",
            Self::PiecewiseLift { .. } => "piecewise_lift",
        }
    }

    /// The grid actually used for a requested size: star and avoidable maps
    /// need their vertices on the grid, and sample specs carry their own.
    pub fn grid_for(&self, requested: usize) -> usize {
        match self {
            Self::Star { .. } => star_grid(requested),
            Self::Avoidable { n } => AvoidableParams { n: *n }.grid(requested),
            Self::Samples { values, .. } => values.len(),
            _ => requested,
        }
    }

    /// Samples the map on `grid_for(requested)` points.
    pub fn sample(&self, requested: usize) -> Result<SampledCircleMap<f64>> {
        let m = self.grid_for(requested);
        match self {
            Self::BlaschkeQuotient { .. } => rational_family(&self.quotient()?, m),
            Self::Mobius { a } => mobius_map(DiskPoint::from_parts(a[0], a[1])?, m),
            Self::Star { x, y } => star_embedding(StarParams::new(*x, *y)?, m),
            Self::Avoidable { n } => avoidable_embedding(AvoidableParams::new(*n)?, m),
            Self::Samples { values, kind } => SampledCircleMap::new(
                values.iter().map(|&[re, im]| Complex::new(re, im)).collect(),
                *kind,
            ),
            Self::PiecewiseLift { breakpoints } => {
                let lift = self.lift_from_breakpoints(breakpoints)?;
                SampledCircleMap::from_fn(m, MapKind::Unimodular, move |t| lift.circle_value(t))
            }
        }
    }

    /// The lift of the sense-preserving homeomorphism this describes.
    pub fn lift(&self) -> Result<Lift<f64>> {
        match self {
            Self::BlaschkeQuotient { .. } | Self::Mobius { .. } => Lift::from_quotient(self.quotient()?),
            Self::PiecewiseLift { breakpoints } => self.lift_from_breakpoints(breakpoints),
            Self::Samples { values, .. } => {
                let v: Vec<Complex<f64>> = values.iter().map(|&[re, im]| Complex::new(re, im)).collect();
                Lift::from_samples(&v)
            }
            _ => Err(Error::InvalidParameter(format!(
                "a {} spec is not a circle homeomorphism",
                self.type_name()
            ))),
        }
    }
}
