//! Configuration schema and the four commands behind the `softqed` binary.
//!
//! A run is described by one JSON document; `--lambda`, `--Lambda`, `--seed` and
//! `--out` override single fields. Exit codes: `0` success, `1` a verification
//! check failed, `2` configuration error, `3` numerical failure.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::Error;
use crate::fock::{
    bch_check, displacement_closed_form, displacement_vacuum_expectation_unchecked, weyl_operator, ChannelSet,
    GridFunction, ModeGrid, TruncatedFockSpace,
};
use crate::gauge::{t_map, t_map_state, MomentumGrid, PhotonSmearing, PhotonState};
use crate::kinematics::{
    k_bar, transverse_project_c, CVec3, CutoffWindow, FormFactor, FourVector, FourVelocity, Gauge, Model,
    ScatteringKinematics, Vec3,
};
use crate::quadrature::Tolerance;
use crate::smatrix::{coherent_function, full_amplitude, gauge_compare, renormalization_ledger};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    VerificationFailure = 1,
    ConfigError = 2,
    NumericalFailure = 3,
}

/// Failure carrying its exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: ExitCode,
    pub message: String,
}

impl CliError {
    fn config(msg: impl Into<String>) -> Self {
        Self { code: ExitCode::ConfigError, message: msg.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidInput(_) | Error::Mismatch(_) | Error::Budget { .. } => ExitCode::ConfigError,
            Error::Quadrature { .. } | Error::Truncation { .. } => ExitCode::NumericalFailure,
        };
        Self { code, message: e.to_string() }
    }
}

/// A value or a list of values.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    fn to_vec(&self) -> Vec<T> {
        match self {
            Self::One(x) => vec![x.clone()],
            Self::Many(v) => v.clone(),
        }
    }
}

/// Form factor as `{kind, params}`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum FormFactorConfig {
    Gaussian {
        sigma: f64,
    },
    SharpWindow {
        lambda: f64,
        #[serde(rename = "Lambda")]
        big_lambda: f64,
    },
    Tabulated {
        k: Vec<f64>,
        rho: Vec<f64>,
    },
}

/// Charged-leg data; BN uses `u_in`, `u_out`, the dipole `p_in`, `p_out`, `mass`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KinematicsConfig {
    pub u_in: Option<[f64; 3]>,
    pub u_out: Option<[f64; 3]>,
    pub p_in: Option<[f64; 3]>,
    pub p_out: Option<[f64; 3]>,
    pub mass: Option<f64>,
    pub charge: f64,
}

/// Cutoff window; `lambda` may be a sweep list.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    pub lambda: OneOrMany<f64>,
    #[serde(rename = "Lambda")]
    pub big_lambda: f64,
}

/// Oracle grid size.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FockConfig {
    #[serde(default = "default_nodes")]
    pub nodes: usize,
    #[serde(default = "default_cap")]
    pub cap: usize,
}

fn default_nodes() -> usize {
    3
}

fn default_cap() -> usize {
    14
}

impl Default for FockConfig {
    fn default() -> Self {
        Self { nodes: default_nodes(), cap: default_cap() }
    }
}

/// Quadrature and oracle tolerances.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    #[serde(default = "default_abs")]
    pub abs: f64,
    #[serde(default = "default_rel")]
    pub rel: f64,
    #[serde(default = "default_panels")]
    pub max_panels: usize,
    /// Acceptance threshold of the Fock-oracle checks.
    #[serde(default = "default_oracle")]
    pub oracle: f64,
}

fn default_abs() -> f64 {
    1e-10
}
fn default_rel() -> f64 {
    1e-8
}
fn default_panels() -> usize {
    20_000
}
fn default_oracle() -> f64 {
    1e-8
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { abs: default_abs(), rel: default_rel(), max_panels: default_panels(), oracle: default_oracle() }
    }
}

/// Output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    #[default]
    Csv,
}

/// Output destination.
#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub format: Format,
    pub path: Option<String>,
}

/// Complete run description.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: Model,
    #[serde(default = "default_gauges")]
    pub gauge: OneOrMany<Gauge>,
    pub form_factor: Option<FormFactorConfig>,
    pub kinematics: KinematicsConfig,
    pub window: WindowConfig,
    #[serde(default)]
    pub epsilon_ladder: Vec<f64>,
    #[serde(default)]
    pub fock: FockConfig,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub seed: u64,
}

fn default_gauges() -> OneOrMany<Gauge> {
    OneOrMany::Many(vec![Gauge::Fgb, Gauge::Coulomb])
}

/// Command-line overrides.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub lambda: Option<f64>,
    pub big_lambda: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<String>,
}

/// Validated run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub kin: ScatteringKinematics,
    pub gauges: Vec<Gauge>,
    pub form_factor: Option<FormFactor>,
    pub windows: Vec<CutoffWindow>,
    pub ladder: Vec<f64>,
    pub fock: FockConfig,
    pub tol: Tolerance,
    pub oracle_tol: f64,
    pub format: Format,
    pub out: Option<String>,
    pub seed: u64,
}

impl Resolved {
    /// Form factor for a window: the configured one, or the sharp window itself.
    pub fn rho(&self, w: &CutoffWindow) -> Result<FormFactor, CliError> {
        match &self.form_factor {
            Some(f) => Ok(f.clone()),
            None => Ok(FormFactor::sharp_window(w.lambda, w.big_lambda)?),
        }
    }
}

fn vec3(a: [f64; 3]) -> Vec3 {
    Vec3::new(a[0], a[1], a[2])
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str, ov: &Overrides) -> Result<Resolved, CliError> {
    let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::config(format!("config: {e}")))?;
    resolve(cfg, ov)
}

/// Applies overrides and enforces every physical constraint.
pub fn resolve(cfg: RunConfig, ov: &Overrides) -> Result<Resolved, CliError> {
    let k = &cfg.kinematics;
    let kin = match cfg.model {
        Model::BlochNordsieck => {
            let (Some(ui), Some(uo)) = (k.u_in, k.u_out) else {
                return Err(CliError::config("bloch_nordsieck kinematics need u_in and u_out"));
            };
            if k.p_in.is_some() || k.p_out.is_some() || k.mass.is_some() {
                return Err(CliError::config("bloch_nordsieck kinematics take no p_in, p_out or mass"));
            }
            ScatteringKinematics::bloch_nordsieck(FourVelocity::new(vec3(ui))?, FourVelocity::new(vec3(uo))?, k.charge)?
        }
        Model::Dipole => {
            let (Some(pi), Some(po), Some(m)) = (k.p_in, k.p_out, k.mass) else {
                return Err(CliError::config("dipole kinematics need p_in, p_out and mass"));
            };
            if k.u_in.is_some() || k.u_out.is_some() {
                return Err(CliError::config("dipole kinematics take no u_in or u_out"));
            }
            ScatteringKinematics::dipole(vec3(pi), vec3(po), m, k.charge)?
        }
    };
    let mut lambdas = cfg.window.lambda.to_vec();
    if let Some(l) = ov.lambda {
        lambdas = vec![l];
    }
    if lambdas.is_empty() {
        return Err(CliError::config("window.lambda sweep is empty"));
    }
    let big = ov.big_lambda.unwrap_or(cfg.window.big_lambda);
    let windows = lambdas.iter().map(|l| CutoffWindow::new(*l, big)).collect::<Result<Vec<_>, _>>()?;
    let form_factor = match cfg.form_factor {
        None => None,
        Some(FormFactorConfig::Gaussian { sigma }) => Some(FormFactor::gaussian(sigma)?),
        Some(FormFactorConfig::SharpWindow { lambda, big_lambda }) => {
            Some(FormFactor::sharp_window(lambda, big_lambda)?)
        }
        Some(FormFactorConfig::Tabulated { k, rho }) => Some(FormFactor::tabulated(k, rho)?),
    };
    let gauges = cfg.gauge.to_vec();
    if gauges.is_empty() {
        return Err(CliError::config("no gauge requested"));
    }
    let ladder = cfg.epsilon_ladder;
    if ladder.iter().any(|x| !(x.is_finite() && *x > 0.0)) || ladder.windows(2).any(|p| p[1] >= p[0]) {
        return Err(CliError::config("epsilon_ladder must be positive and strictly decreasing"));
    }
    let t = &cfg.tolerances;
    if !(t.abs >= 0.0 && t.rel >= 0.0 && (t.abs > 0.0 || t.rel > 0.0) && t.max_panels > 0 && t.oracle > 0.0) {
        return Err(CliError::config("tolerances must be non-negative with a positive target"));
    }
    if cfg.fock.cap == 0 || cfg.fock.nodes == 0 {
        return Err(CliError::config("fock.nodes and fock.cap must be positive"));
    }
    Ok(Resolved {
        kin,
        gauges,
        form_factor,
        windows,
        ladder,
        fock: cfg.fock,
        tol: Tolerance { abs: t.abs, rel: t.rel, max_panels: t.max_panels },
        oracle_tol: t.oracle,
        format: cfg.output.format,
        out: ov.out.clone().or(cfg.output.path),
        seed: ov.seed.unwrap_or(cfg.seed),
    })
}

/// Command output: a CSV table and its JSON mirror.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub json: Value,
    /// True when a verification check failed.
    pub failed: bool,
}

impl Report {
    /// Renders in the requested format; CSV uses LF line endings.
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).map_err(|e| CliError::config(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
                let io = |e: csv::Error| CliError { code: ExitCode::NumericalFailure, message: e.to_string() };
                w.write_record(&self.header).map_err(io)?;
                for r in &self.rows {
                    w.write_record(r).map_err(io)?;
                }
                let bytes = w
                    .into_inner()
                    .map_err(|e| CliError { code: ExitCode::NumericalFailure, message: e.to_string() })?;
                String::from_utf8(bytes).map_err(|e| CliError::config(e.to_string()))
            }
        }
    }
}

/// Full-precision decimal with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn gauge_name(g: Gauge) -> &'static str {
    match g {
        Gauge::Fgb => "fgb",
        Gauge::Coulomb => "coulomb",
    }
}

fn model_name(m: Model) -> &'static str {
    match m {
        Model::BlochNordsieck => "bloch_nordsieck",
        Model::Dipole => "dipole",
    }
}

/// Vacuum amplitudes and exponent breakdown for every window and gauge.
///
/// CSV columns: `model,gauge,lambda,Lambda,exponent,vacuum_amplitude,gamma_cross,b_ir_in,b_ir_out`.
/// The JSON form adds the renormalization ledger when an `epsilon_ladder` is given.
pub fn cmd_corrections(r: &Resolved) -> Result<Report, CliError> {
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for w in &r.windows {
        let rho = r.rho(w)?;
        for &g in &r.gauges {
            let rep = full_amplitude(&r.kin, g, &rho, w, &[], &r.tol, None)?;
            let b = rep.exponent.breakdown;
            rows.push(vec![
                model_name(r.kin.model()).to_string(),
                gauge_name(g).to_string(),
                num(w.lambda),
                num(w.big_lambda),
                num(rep.exponent.total.re),
                num(rep.vacuum_amplitude.re),
                num(b.gamma_cross),
                num(b.b_ir_in),
                num(b.b_ir_out),
            ]);
            reports.push(rep);
        }
    }
    let mut json = json!({ "reports": reports });
    if !r.ladder.is_empty() {
        let mut ledgers = Vec::new();
        for w in &r.windows {
            let rho = r.rho(w)?;
            let u = r.kin.velocity(crate::kinematics::Leg::Out);
            ledgers.push(renormalization_ledger(&u, r.kin.charge(), &r.ladder, &rho, w, &r.tol)?);
        }
        json["renormalization_ledgers"] = json!(ledgers);
    }
    Ok(Report {
        header: vec![
            "model",
            "gauge",
            "lambda",
            "Lambda",
            "exponent",
            "vacuum_amplitude",
            "gamma_cross",
            "b_ir_in",
            "b_ir_out",
        ],
        rows,
        json,
        failed: false,
    })
}

/// Photon specification file for `emission`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhotonFile {
    pub grid: GridSpec,
    #[serde(default)]
    pub photons: Vec<PhotonSpec>,
    /// Occupation cap of the optional Fock cross-check.
    pub oracle_cap: Option<usize>,
}

/// Shared photon grid.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub k: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

/// One photon: explicit four-vector samples `[[re, im]; 4]` per node, a pure-gauge
/// function `h` (`f = kbar h`), or a Gaussian bump with a fixed polarization.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhotonSpec {
    Explicit { values: Vec<[[f64; 2]; 4]> },
    PureGauge { h: Vec<[f64; 2]> },
    Bump { center: [f64; 3], width: f64, polarization: [[f64; 2]; 4] },
}

fn cplx(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

/// FGB four-vector samples of a photon on the grid.
pub fn photon_values(spec: &PhotonSpec, grid: &MomentumGrid) -> Result<GridFunction, CliError> {
    let n = grid.len();
    match spec {
        PhotonSpec::Explicit { values } => {
            if values.len() != n {
                return Err(CliError::config("explicit photon has the wrong number of nodes"));
            }
            Ok(values.iter().map(|v| v.map(cplx)).collect())
        }
        PhotonSpec::PureGauge { h } => {
            if h.len() != n {
                return Err(CliError::config("pure-gauge photon has the wrong number of nodes"));
            }
            Ok(grid.ks.iter().zip(h).map(|(k, hv)| k_bar(k).map(|x| x * cplx(*hv))).collect())
        }
        PhotonSpec::Bump { center, width, polarization } => {
            if !(width.is_finite() && *width > 0.0) {
                return Err(CliError::config("bump width must be positive"));
            }
            let c = vec3(*center);
            let pol = polarization.map(cplx);
            Ok(grid
                .ks
                .iter()
                .map(|k| {
                    let a = (-(k - c).norm_squared() / (2.0 * width * width)).exp();
                    pol.map(|x| x * a)
                })
                .collect())
        }
    }
}

/// Smearing in a gauge; the Coulomb form keeps the transverse part of the spatial
/// components, which equals `T f` on physical photons.
pub fn photon_in_gauge(values: &GridFunction, grid: &MomentumGrid, gauge: Gauge) -> Result<PhotonSmearing, CliError> {
    match gauge {
        Gauge::Fgb => Ok(PhotonSmearing::fgb(grid.clone(), values.clone())?),
        Gauge::Coulomb => {
            let sp = grid
                .ks
                .iter()
                .zip(values)
                .map(|(k, v)| {
                    let p = transverse_project_c(k, &CVec3::new(v[1], v[2], v[3]))?;
                    Ok([p[0], p[1], p[2]])
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(PhotonSmearing::coulomb(grid.clone(), sp)?)
        }
    }
}

/// Per-photon emission factors, vacuum amplitude and total, with an optional
/// oracle column.
///
/// CSV columns: `gauge,lambda,photon,factor_re,factor_im,vacuum,total_re,total_im,
/// oracle_re,oracle_im,oracle_deviation`; `photon` is empty when no photon is given
/// and the oracle cells are empty without `oracle_cap`.
pub fn cmd_emission(r: &Resolved, photon_text: &str) -> Result<Report, CliError> {
    let pf: PhotonFile =
        serde_json::from_str(photon_text).map_err(|e| CliError::config(format!("photon file: {e}")))?;
    let grid = MomentumGrid::new(pf.grid.k.iter().map(|k| vec3(*k)).collect(), pf.grid.weights.clone())?;
    let values = pf.photons.iter().map(|p| photon_values(p, &grid)).collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for w in &r.windows {
        let rho = r.rho(w)?;
        for &g in &r.gauges {
            let photons = values.iter().map(|v| photon_in_gauge(v, &grid, g)).collect::<Result<Vec<_>, _>>()?;
            let cap = if photons.is_empty() { None } else { pf.oracle_cap };
            let rep = full_amplitude(&r.kin, g, &rho, w, &photons, &r.tol, cap)?;
            let (ore, oim, odev) = match &rep.oracle {
                Some(o) => (num(o.value.re), num(o.value.im), num(o.deviation)),
                None => (String::new(), String::new(), String::new()),
            };
            let base = |photon: String, f: Option<Complex64>| {
                vec![
                    gauge_name(g).to_string(),
                    num(w.lambda),
                    photon,
                    f.map_or(String::new(), |f| num(f.re)),
                    f.map_or(String::new(), |f| num(f.im)),
                    num(rep.vacuum_amplitude.re),
                    num(rep.total.re),
                    num(rep.total.im),
                    ore.clone(),
                    oim.clone(),
                    odev.clone(),
                ]
            };
            if rep.emission_factors.is_empty() {
                rows.push(base(String::new(), None));
            }
            for (i, f) in rep.emission_factors.iter().enumerate() {
                rows.push(base(i.to_string(), Some(*f)));
            }
            reports.push(rep);
        }
    }
    Ok(Report {
        header: vec![
            "gauge",
            "lambda",
            "photon",
            "factor_re",
            "factor_im",
            "vacuum",
            "total_re",
            "total_im",
            "oracle_re",
            "oracle_im",
            "oracle_deviation",
        ],
        rows,
        json: json!({ "reports": reports }),
        failed: false,
    })
}

/// FGB/Coulomb comparison along the `lambda` sweep.
///
/// CSV columns: `lambda,m_fgb,m_coul,log_ratio,conservation_residual`; `log_ratio`
/// is empty when both exponents vanish.
pub fn cmd_gauge_check(r: &Resolved) -> Result<Report, CliError> {
    let mut rows = Vec::new();
    let mut out = Vec::new();
    for w in &r.windows {
        let rho = r.rho(w)?;
        let c = gauge_compare(&r.kin, &rho, w, &r.tol)?;
        rows.push(vec![
            num(w.lambda),
            num(c.fgb.re),
            num(c.coulomb.re),
            c.log_ratio.map_or(String::new(), num),
            num(c.conservation_residual),
        ]);
        out.push(json!({ "lambda": w.lambda, "Lambda": w.big_lambda, "comparison": c }));
    }
    Ok(Report {
        header: vec!["lambda", "m_fgb", "m_coul", "log_ratio", "conservation_residual"],
        rows,
        json: json!({ "sweep": out }),
        failed: false,
    })
}

/// One verification check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn check(name: impl Into<String>, value: f64, tolerance: f64) -> Check {
    Check { name: name.into(), value, tolerance, pass: value.is_finite() && value <= tolerance }
}

fn random_node(rng: &mut ChaCha8Rng, w: &CutoffWindow) -> Vec3 {
    let r = w.lambda + (w.big_lambda - w.lambda) * rng.random::<f64>();
    let c = 2.0 * rng.random::<f64>() - 1.0;
    let phi = 2.0 * std::f64::consts::PI * rng.random::<f64>();
    let s = (1.0 - c * c).sqrt();
    Vec3::new(s * phi.cos(), s * phi.sin(), c) * r
}

fn random_c(rng: &mut ChaCha8Rng, scale: f64) -> Complex64 {
    Complex64::new(scale * (2.0 * rng.random::<f64>() - 1.0), scale * (2.0 * rng.random::<f64>() - 1.0))
}

/// Physical random photon: transverse spatial part plus a null component.
fn random_physical(rng: &mut ChaCha8Rng, ks: &[Vec3]) -> GridFunction {
    ks.iter()
        .map(|k| {
            let v = CVec3::new(random_c(rng, 1.0), random_c(rng, 1.0), random_c(rng, 1.0));
            let t = transverse_project_c(k, &v).expect("non-zero node");
            let h = random_c(rng, 1.0);
            let kb = k_bar(k);
            [kb[0] * h, t[0] + kb[1] * h, t[1] + kb[2] * h, t[2] + kb[3] * h]
        })
        .collect()
}

fn low_block_deviation(
    space: &TruncatedFockSpace,
    a: &DMatrix<Complex64>,
    b: &DMatrix<Complex64>,
    limit: usize,
) -> f64 {
    let low: Vec<usize> = (0..space.dim()).filter(|&i| space.occupations(i).iter().all(|&n| n <= limit)).collect();
    let mut worst = 0.0f64;
    for &i in &low {
        for &j in &low {
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    worst
}

fn minkowski_real(a: &FourVector, b: &FourVector) -> f64 {
    (a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]).re
}

/// Fock-oracle suite at occupation cap `fock.cap`: signed CCR, displacement closed
/// forms, exponentiation of the process's coherent function on `fock.nodes`
/// effective modes (with a convergence-in-N table), BCH, the Weyl relations, and
/// the `T` map isometry and null-vector annihilation.
///
/// CSV columns: `check,value,tolerance,pass`.
pub fn cmd_fock_verify(r: &Resolved) -> Result<Report, CliError> {
    let cap = r.fock.cap;
    let tol = r.oracle_tol;
    let w = r.windows[0];
    let rho = r.rho(&w)?;
    let mut rng = ChaCha8Rng::seed_from_u64(r.seed);
    let mut checks = Vec::new();
    let k0 = Vec3::new(0.0, 0.0, 0.5 * (w.lambda + w.big_lambda));

    let two = ModeGrid::new(&[k0], &[1.0], &w, &ChannelSet::Lorentz(vec![0, 1]))?;
    let space2 = TruncatedFockSpace::new(two, cap)?;
    checks.push(check("ccr", space2.ccr_deviation(), 1e-12));

    let half = Complex64::new(0.5, 0.0);
    for (name, f) in
        [("displacement_spatial", [ZERO, half, ZERO, ZERO]), ("displacement_temporal", [half, ZERO, ZERO, ZERO])]
    {
        let f = vec![f];
        let v = displacement_vacuum_expectation_unchecked(&space2, &f, 1.0)?.value;
        checks.push(check(name, (v - displacement_closed_form(&space2, &f, 1.0)?).norm(), tol));
    }

    let ks: Vec<Vec3> = (0..r.fock.nodes).map(|_| random_node(&mut rng, &w)).collect();
    let ws = vec![1.0; ks.len()];
    let unit = r.kin.with_charge(1.0);
    let f = coherent_function(&unit, Gauge::Fgb, &rho, &w, &ks)?;
    let norm: f64 = f.iter().map(|v| crate::fock::node_form(v, v).re).sum::<f64>().abs();
    if norm > 0.0 {
        let e = (0.5 / norm).sqrt();
        let mut table = Vec::new();
        for n in (2..=cap).step_by(2) {
            let grid = ModeGrid::new(&ks, &ws, &w, &ChannelSet::Effective(f.clone()))?;
            let sp = TruncatedFockSpace::new(grid, n)?;
            let v = displacement_vacuum_expectation_unchecked(&sp, &f, e)?.value;
            table.push((n, (v - displacement_closed_form(&sp, &f, e)?).norm()));
        }
        for (n, d) in &table {
            let mut c = check(format!("exponentiation_cap_{n}"), *d, f64::INFINITY);
            c.pass = true;
            checks.push(c);
        }
        checks.push(check("exponentiation", table.last().map_or(0.0, |t| t.1), tol));
    }

    let one = ModeGrid::new(&[k0], &[1.0], &w, &ChannelSet::Lorentz(vec![1]))?;
    let space1 = TruncatedFockSpace::new(one, cap.max(2))?;
    let a = Complex64::new(0.02, 0.0);
    checks.push(check(
        "bch",
        bch_check(&space1, &vec![[ZERO, a, ZERO, ZERO]], &vec![[ZERO, I * a, ZERO, ZERO]], 1.0)?,
        1e-9,
    ));

    let real = |rng: &mut ChaCha8Rng| -> GridFunction {
        let mut v = [ZERO; 4];
        for x in v.iter_mut().take(2) {
            *x = Complex64::new(0.3 * (2.0 * rng.random::<f64>() - 1.0), 0.0);
        }
        vec![v]
    };
    let (g, h, l, m) = (real(&mut rng), real(&mut rng), real(&mut rng), real(&mut rng));
    let wgh = weyl_operator(&space2, &g, &h)?;
    let expect = (0.25 * (minkowski_real(&g[0], &g[0]) + minkowski_real(&h[0], &h[0]))).exp();
    checks.push(check("weyl_vacuum", (wgh[(0, 0)] - expect).norm(), tol));
    let limit = cap / 2;
    let iso = space2.krein_adjoint_dense(&wgh) * &wgh;
    checks.push(check(
        "weyl_isometry",
        low_block_deviation(&space2, &iso, &DMatrix::identity(space2.dim(), space2.dim()), limit),
        tol,
    ));
    let n: GridFunction = vec![std::array::from_fn(|mu| g[0][mu] + I * h[0][mu])];
    let fprobe: GridFunction = vec![[Complex64::new(0.1, 0.05), Complex64::new(-0.2, 0.1), ZERO, ZERO]];
    let af = space2.annihilator(&fprobe)?.to_dense();
    let lhs = &af * &wgh - &wgh * &af;
    let fn_pair = fprobe[0][0].conj() * n[0][0] - fprobe[0][1].conj() * n[0][1];
    let rhs = &wgh * (I * FRAC_1_SQRT_2 * fn_pair);
    checks.push(check("weyl_commutator", low_block_deviation(&space2, &lhs, &rhs, limit), tol));
    let wlm = weyl_operator(&space2, &l, &m)?;
    let phase = (I * (minkowski_real(&g[0], &m[0]) - minkowski_real(&h[0], &l[0]))).exp();
    let lhs = &wgh * &wlm;
    let rhs = (&wlm * &wgh) * phase;
    checks.push(check("weyl_exchange", low_block_deviation(&space2, &lhs, &rhs, limit), tol));

    let grid = MomentumGrid::new(ks.clone(), ws.clone())?;
    let mut worst_iso = 0.0f64;
    for count in 1..=2usize {
        let a: Vec<PhotonSmearing> = (0..count)
            .map(|_| PhotonSmearing::fgb(grid.clone(), random_physical(&mut rng, &ks)))
            .collect::<Result<_, _>>()?;
        let b: Vec<PhotonSmearing> = (0..count)
            .map(|_| PhotonSmearing::fgb(grid.clone(), random_physical(&mut rng, &ks)))
            .collect::<Result<_, _>>()?;
        let (sa, sb) = (PhotonState::product(a), PhotonState::product(b));
        let fgb = sa.inner(&sb)?;
        let coul = t_map_state(&sa)?.inner(&t_map_state(&sb)?)?;
        worst_iso = worst_iso.max((fgb - coul).norm() / fgb.norm().max(f64::MIN_POSITIVE));
    }
    checks.push(check("t_map_isometry", worst_iso, 1e-12));
    let hs: Vec<Complex64> = ks.iter().map(|_| random_c(&mut rng, 1.0)).collect();
    let null = PhotonSmearing::pure_gauge(grid.clone(), &hs)?;
    let mapped = t_map(&null)?;
    let worst_null = mapped.values.iter().flatten().fold(0.0f64, |acc, x| acc.max(x.norm()));
    checks.push(check("null_maps_to_zero", worst_null, 0.0));

    let failed = checks.iter().any(|c| !c.pass);
    let rows =
        checks.iter().map(|c| vec![c.name.clone(), num(c.value), num(c.tolerance), c.pass.to_string()]).collect();
    Ok(Report {
        header: vec!["check", "value", "tolerance", "pass"],
        rows,
        json: json!({ "checks": checks, "cap": cap }),
        failed,
    })
}
