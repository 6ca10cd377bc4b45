use std::fmt;
use std::fs;
use std::path::Path;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use circlemap::approx::{approximate_c1, approximate_homeomorphism, single_kernel_error, Direction, PeriodicC1Function};
use circlemap::bounds::{curvature_bound, heinz_report, horconvex_report};
use circlemap::certify::{certify_quotient, embedding_check_sampled, homeo_check_sampled, Verdict};
use circlemap::fourier::{fourier_coefficients, parseval_defect, richardson, FourierSpectrum, MapKind};
use circlemap::gallery::{
    avoidable_embedding, star_embedding, star_grid, star_search, svg_curve, symmetry_residual, z_squared_over_b,
    AvoidableParams, StarParams,
};
use circlemap::{DiskPoint, Lift, MapSpec};

/// Largest grid reached by automatic refinement of spectra.
const MAX_AUTO_GRID: usize = 1 << 18;
/// Area tail above which the spectrum grid is doubled.
const TAIL_LIMIT: f64 = 1e-6;
const SUPPORT_LIST_LIMIT: usize = 256;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numerical(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            Self::Input(_) => 2,
            Self::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Input(m) | Self::Numerical(m) => f.write_str(m),
        }
    }
}

impl From<circlemap::Error> for CliError {
    fn from(e: circlemap::Error) -> Self {
        if e.is_input_error() {
            Self::Input(e.to_string())
        } else {
            Self::Numerical(e.to_string())
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

fn load_spec(path: &Path) -> Result<MapSpec, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    Ok(MapSpec::from_json(&text)?)
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| io_error(path, e))
}

fn to_json<S: Serialize>(value: &S) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output types serialize");
    s.push('\n');
    s
}

fn print_json<S: Serialize>(value: &S) {
    print!("{}", to_json(value));
}

fn pair(c: Complex<f64>) -> [f64; 2] {
    [c.re, c.im]
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Serialize)]
struct FourierSummary {
    spec_type: &'static str,
    grid_size: usize,
    window: usize,
    tolerance: f64,
    support_size: usize,
    support_min: Option<i64>,
    support_max: Option<i64>,
    /// gcd of `n − 1` over the support; `k` when the support lies in `1 + kℤ`.
    support_step: u64,
    support: Vec<i64>,
    support_truncated: bool,
    c_minus1: [f64; 2],
    c_0: [f64; 2],
    c_1: [f64; 2],
    c_1_below_tolerance: bool,
    enclosed_area: f64,
    area_tail: f64,
    parseval_defect: f64,
}

fn summarize(spec: &MapSpec, spectrum: &FourierSpectrum<f64>, defect: f64) -> FourierSummary {
    let support = spectrum.support();
    let step = support.iter().fold(0, |g, &n| gcd(g, (n - 1).unsigned_abs()));
    FourierSummary {
        spec_type: spec.type_name(),
        grid_size: spectrum.grid_size(),
        window: spectrum.window(),
        tolerance: spectrum.tolerance(),
        support_size: support.len(),
        support_min: support.first().copied(),
        support_max: support.last().copied(),
        support_step: step,
        support_truncated: support.len() > SUPPORT_LIST_LIMIT,
        support: {
            let mut s = support.clone();
            s.sort_by_key(|n| n.unsigned_abs());
            s.truncate(SUPPORT_LIST_LIMIT);
            s.sort_unstable();
            s
        },
        c_minus1: pair(spectrum.coefficient(-1)),
        c_0: pair(spectrum.coefficient(0)),
        c_1: pair(spectrum.coefficient(1)),
        c_1_below_tolerance: spectrum.coefficient(1).norm() <= spectrum.tolerance(),
        enclosed_area: spectrum.enclosed_area(),
        area_tail: spectrum.area_tail(),
        parseval_defect: defect,
    }
}

pub fn fourier(spec_path: &Path, grid: usize, window: Option<usize>, tolerance: f64, out: &Path) -> Result<(), CliError> {
    let spec = load_spec(spec_path)?;
    if tolerance.is_nan() || tolerance < 0.0 {
        return Err(CliError::Input("tolerance must be non-negative".into()));
    }
    let mut requested = grid;
    let (map, full) = loop {
        let map = spec.sample(requested)?;
        let full = fourier_coefficients(&map);
        let refinable = !matches!(spec, MapSpec::Samples { .. }) && 2 * map.grid_size() <= MAX_AUTO_GRID;
        if full.area_tail() <= TAIL_LIMIT || !refinable {
            break (map, full);
        }
        log::info!("area tail {:e} at grid {}; doubling", full.area_tail(), map.grid_size());
        requested = 2 * map.grid_size();
    };
    let spectrum = match window {
        Some(w) => full.truncated(w),
        None => full,
    }
    .with_tolerance(tolerance);
    let summary = summarize(&spec, &spectrum, parseval_defect(&map));
    write(&out.join("spectrum.csv"), &spectrum.to_csv())?;
    write(&out.join("summary.json"), &to_json(&summary))?;
    print_json(&summary);
    Ok(())
}

pub fn certify(spec_path: &Path, grid: usize) -> Result<(), CliError> {
    let spec = load_spec(spec_path)?;
    match spec {
        MapSpec::BlaschkeQuotient { .. } | MapSpec::Mobius { .. } => {
            let q = spec.quotient()?;
            print_json(&certify_quotient(&q, grid));
        }
        _ => {
            let map = spec.sample(grid.max(64))?;
            let homeomorphism = if map.kind() == MapKind::Unimodular {
                Some(homeo_check_sampled(&map)?)
            } else {
                None
            };
            let embedding = embedding_check_sampled(&map)?;
            print_json(&json!({
                "grid_size": map.grid_size(),
                "homeomorphism": homeomorphism,
                "embedding": embedding,
                "note": "sampled screen on the grid, not a certificate",
            }));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ApproximationOutput {
    target: &'static str,
    eps: f64,
    direction: Direction,
    quotient: MapSpec,
    degree: usize,
    eta: f64,
    uniform_error: f64,
    support_violation: f64,
    verify_grid: usize,
    certification: circlemap::CertificationResult,
    log: circlemap::RunLog,
}

pub fn approximate(spec_path: &Path, eps: f64, direction: Direction, out: Option<&Path>) -> Result<(), CliError> {
    let spec = load_spec(spec_path)?;
    let lift = spec.lift()?;
    let a = approximate_homeomorphism(&lift, eps, direction)?;
    let output = ApproximationOutput {
        target: spec.type_name(),
        eps,
        direction,
        quotient: MapSpec::from_quotient(&a.quotient),
        degree: a.degree,
        eta: a.eta,
        uniform_error: a.uniform_error,
        support_violation: a.support_violation,
        verify_grid: a.verify_grid,
        certification: a.certification,
        log: a.log,
    };
    if let Some(path) = out {
        write(path, &to_json(&output))?;
    }
    print_json(&output);
    Ok(())
}

pub fn figure(spec_path: &Path, grid: usize, out: &Path) -> Result<(), CliError> {
    let spec = load_spec(spec_path)?;
    let map = spec.sample(grid)?;
    write(out, &svg_curve(&map, 800))?;
    print_json(&json!({ "out": out.display().to_string(), "grid_size": map.grid_size() }));
    Ok(())
}

pub fn bounds(spec_path: &Path, grid: usize) -> Result<(), CliError> {
    let spec = load_spec(spec_path)?;
    let map = spec.sample(grid)?;
    let heinz = if map.kind() == MapKind::Unimodular {
        Some(heinz_report(&map)?)
    } else {
        None
    };
    let horconvex = horconvex_report(&map);
    let curvature = curvature_bound(heinz.as_ref(), Some(&horconvex))?;
    print_json(&json!({
        "heinz": heinz,
        "horconvex": horconvex,
        "curvature": curvature,
    }));
    Ok(())
}

pub fn search(seed: u64, trials: usize, window: usize, vertices: usize) -> Result<(), CliError> {
    let report = star_search(seed, trials, window, vertices)?;
    print_json(&json!({
        "report": report,
        "note": "exploratory search; a small value is not evidence either way",
    }));
    Ok(())
}

#[derive(Serialize)]
struct Claim {
    name: &'static str,
    passed: bool,
    details: serde_json::Value,
}

fn richardson_coefficient(
    build: impl Fn(usize) -> Result<circlemap::SampledCircleMap<f64>, circlemap::Error>,
    m: usize,
    n: i64,
) -> Result<(Complex<f64>, Complex<f64>), CliError> {
    let coarse = fourier_coefficients(&build(m)?).coefficient(n);
    let fine = fourier_coefficients(&build(2 * m)?).coefficient(n);
    Ok((fine, richardson(coarse, fine)))
}

pub fn reproduce(out: &Path, seed: u64, full: bool) -> Result<(), CliError> {
    let mut claims = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // z²/B is a diffeomorphism exactly when |z₁| < 1/3.
    let mut rows = Vec::new();
    let mut ok = true;
    for r in [0.1, 0.2, 0.3, 0.33, 0.34, 0.4, 0.45] {
        let z1 = DiskPoint::from_polar(r, rng.gen::<f64>() * std::f64::consts::TAU)?;
        let res = certify_quotient(&z_squared_over_b(z1), 1024);
        let expected = if r < 1.0 / 3.0 { Verdict::Diffeomorphism } else { Verdict::NotHomeomorphism };
        ok &= res.verdict == expected;
        rows.push(json!({ "r": r, "verdict": res.verdict, "margin": res.margin, "analytic": (1.0 - 3.0 * r) / (1.0 - r) }));
    }
    claims.push(Claim { name: "z2_over_b_threshold", passed: ok, details: json!(rows) });

    // Star quadrilateral with a vanishing first coefficient.
    let p = StarParams::<f64>::vanishing();
    let m = star_grid(1 << 16);
    let (raw, extrapolated) = richardson_coefficient(|m| star_embedding(p, m), m, 1)?;
    claims.push(Claim {
        name: "star_first_coefficient",
        passed: extrapolated.norm() < 1e-6,
        details: json!({ "grid": m, "raw": pair(raw), "extrapolated": pair(extrapolated) }),
    });
    write(&out.join("star.svg"), &svg_curve(&star_embedding(p, star_grid(4096))?, 800))?;

    // k-fold symmetric embeddings with f̂(n) = 0 for |n| ≤ N.
    for n in 1..=3usize {
        let params = AvoidableParams::new(n)?;
        let m = params.grid(1 << 16);
        let build = |m| avoidable_embedding(params, m);
        let mut worst_raw: f64 = 0.0;
        let mut worst: f64 = 0.0;
        for j in -(n as i64)..=n as i64 {
            let (raw, ext) = richardson_coefficient(build, m, j)?;
            worst_raw = worst_raw.max(raw.norm());
            worst = worst.max(ext.norm());
        }
        let map = build(m)?;
        let residual = symmetry_residual(&map, params.k())?;
        let simple = embedding_check_sampled(&map)?;
        claims.push(Claim {
            name: ["avoidable_n1", "avoidable_n2", "avoidable_n3"][n - 1],
            passed: worst_raw < 1e-3 && worst < 1e-6 && residual == 0.0 && simple == circlemap::certify::EmbeddingVerdict::Simple,
            details: json!({ "grid": m, "max_raw": worst_raw, "max_extrapolated": worst, "symmetry_residual": residual }),
        });
    }
    let p1 = AvoidableParams::new(1)?;
    write(&out.join("figure1.svg"), &svg_curve(&avoidable_embedding::<f64>(p1, p1.grid(4096))?, 800))?;

    // Kernel splitting error decays geometrically.
    let w0 = DiskPoint::from_parts(0.5, 0.0)?;
    let errors: Vec<(usize, f64)> = [4usize, 8, 16, 32, 64].iter().map(|&n| (n, single_kernel_error(w0, n, 8192))).collect();
    claims.push(Claim {
        name: "kernel_splitting",
        passed: errors.iter().any(|&(n, e)| n <= 256 && e < 1e-8),
        details: json!(errors),
    });

    // C¹ approximation of u = 0.3 sin θ + 0.1 cos 2θ.
    let u = PeriodicC1Function::new(
        |t: f64| 0.3 * t.sin() + 0.1 * (2.0 * t).cos(),
        |t: f64| 0.3 * t.cos() - 0.2 * (2.0 * t).sin(),
    );
    let c1 = approximate_c1(&u, 0.1)?;
    claims.push(Claim {
        name: "c1_pipeline",
        passed: c1.value_error + c1.derivative_error < 0.1,
        details: json!({ "n": c1.n, "value_error": c1.value_error, "derivative_error": c1.derivative_error, "log": c1.log }),
    });

    if full {
        let lift = Lift::piecewise_linear(&[(0.0, 0.0), (std::f64::consts::FRAC_PI_2, std::f64::consts::PI)])?;
        for direction in [Direction::Below, Direction::Above] {
            let a = approximate_homeomorphism(&lift, 0.05, direction)?;
            claims.push(Claim {
                name: match direction {
                    Direction::Below => "dense_below",
                    Direction::Above => "dense_above",
                },
                passed: a.uniform_error < 0.05 && a.certification.verdict == Verdict::Diffeomorphism && a.support_violation < 1e-6,
                details: json!({ "degree": a.degree, "uniform_error": a.uniform_error, "support_violation": a.support_violation }),
            });
        }
    }

    let all = claims.iter().all(|c| c.passed);
    let summary = json!({ "seed": seed, "claims": claims });
    write(&out.join("summary.json"), &to_json(&summary))?;
    print_json(&summary);
    if all {
        Ok(())
    } else {
        let failed: Vec<&str> = claims.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        Err(CliError::Numerical(format!("claims not reproduced: {}", failed.join(", "))))
    }
}
