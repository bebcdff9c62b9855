//! Observable assembly: vacuum amplitudes `exp(e^2 M)`, emission factors, their
//! product, gauge comparison, and the renormalization ledger.
//!
//! The soft-photon S-operator is `exp(i e Phi(F))` with coherent function
//! `F = f_in - f_out` built from the asymptotic leg coherence functions. In the
//! Coulomb gauge `F` is replaced by its transverse spatial part. Consequently
//! `<a+(f_1)...a+(f_n) Psi_0, S Psi_0> = exp(-(e^2/2)<F, F>) prod_j (i e <f_j, F>)`,
//! which is what [`emission_factor`] and the Fock oracle both evaluate.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::currents::{coherence_asymptotic, conservation_residual, CurrentSpec};
use crate::error::{invalid, Error, Result};
use crate::fock::{emission_matrix_element, node_form, ChannelSet, GridFunction, ModeGrid, TruncatedFockSpace};
use crate::gauge::{PhotonSmearing, CONDITION_TOL};
use crate::kinematics::{
    complexify, on_shell_dot, spatial, transverse_project_c, CVec3, CutoffWindow, FormFactor, FourVelocity, Gauge, Leg,
    Model, ScatteringKinematics, Vec3, LEGS,
};
use crate::quadrature::{b_ir, counterterm_phase, m_exponent, unren_halfline_exponent, CorrectionExponent, Tolerance};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `exp(e^2 M)` in the adiabatic limit.
pub fn vacuum_amplitude(
    kin: &ScatteringKinematics,
    gauge: Gauge,
    rho: &FormFactor,
    w: &CutoffWindow,
    tol: &Tolerance,
) -> Result<Complex64> {
    Ok(m_exponent(kin, gauge, rho, w, tol)?.total.exp())
}

fn check_support(photon: &PhotonSmearing, w: &CutoffWindow) -> Result<()> {
    if photon.grid.ks.iter().any(|k| !w.contains(k.norm())) {
        return invalid("photon smearing has nodes outside the cutoff window");
    }
    Ok(())
}

/// Single-photon emission factor, discretized on the smearing's grid.
///
/// FGB: `-sum_i w_i sum_r eta_r e rho u_{r,mu} conj(f^mu)/((2 pi)^{3/2} sqrt(2k) (u_r.k))`.
/// Coulomb: `+sum_i w_i sum_r eta_r e rho u_r.P conj(f)/((2 pi)^{3/2} sqrt(2k) (u_r.k))`.
/// For the dipole `u_r = (1, p_r/m)` and `u_r.k = |k|`.
pub fn emission_factor(
    kin: &ScatteringKinematics,
    gauge: Gauge,
    rho: &FormFactor,
    w: &CutoffWindow,
    photon: &PhotonSmearing,
) -> Result<Complex64> {
    if photon.gauge != gauge {
        return Err(Error::Mismatch(format!("{:?} photon used with {:?} gauge", photon.gauge, gauge)));
    }
    check_support(photon, w)?;
    let scale = photon.values.iter().flatten().fold(0.0f64, |m, x| m.max(x.norm())).max(f64::MIN_POSITIVE);
    let mut total = ZERO;
    for ((k, wt), f) in photon.grid.ks.iter().zip(&photon.grid.weights).zip(&photon.values) {
        let kn = k.norm();
        let amp = kin.charge() * rho.eval(kn) / ((2.0 * PI).powf(1.5) * (2.0 * kn).sqrt());
        let fc = spatial(f).map(|x| x.conj());
        // conj(f) = kbar h + (0, r) with r transverse to khat only up to f's subsidiary residual
        let h = f[0].conj() / kn;
        let mut r = fc - complexify(&k.normalize()) * f[0].conj();
        if r.norm() <= CONDITION_TOL * scale {
            r = CVec3::zeros();
        }
        let mut null_part = ZERO;
        let mut rest = ZERO;
        for leg in LEGS {
            let den = kin.denominator(leg, k)?;
            let v = complexify(&kin.velocity(leg).spatial());
            match gauge {
                Gauge::Fgb => {
                    // u.kbar / den is exactly 1 for BN, so the null parts of the legs cancel exactly
                    let ratio = on_shell_dot(&kin.velocity(leg), k)? / den;
                    null_part += -h * (leg.eta() * amp * ratio);
                    rest += v.dot(&r) * (leg.eta() * amp / den);
                }
                Gauge::Coulomb => {
                    let pf = transverse_project_c(k, &fc)?;
                    rest += v.dot(&pf) * (leg.eta() * amp / den);
                }
            }
        }
        total += (null_part + rest) * *wt;
    }
    Ok(total)
}

/// Coherent function `F = f_in - f_out` on the given nodes; Coulomb keeps `(0, P F)`.
pub fn coherent_function(
    kin: &ScatteringKinematics,
    gauge: Gauge,
    rho: &FormFactor,
    w: &CutoffWindow,
    ks: &[Vec3],
) -> Result<GridFunction> {
    let spec = CurrentSpec::adiabatic(kin.clone(), gauge, rho.clone());
    ks.iter()
        .map(|k| {
            let fi = coherence_asymptotic(&spec, Leg::In, k, w)?;
            let fo = coherence_asymptotic(&spec, Leg::Out, k, w)?;
            Ok(std::array::from_fn(|mu| fi[mu] - fo[mu]))
        })
        .collect()
}

/// Grid exponent `-(e^2/2) sum_i w_i <F_i, F_i>`, the discretized `e^2 M`.
pub fn grid_exponent(
    kin: &ScatteringKinematics,
    gauge: Gauge,
    rho: &FormFactor,
    w: &CutoffWindow,
    ks: &[Vec3],
    weights: &[f64],
) -> Result<f64> {
    if ks.len() != weights.len() {
        return invalid("node and weight lists differ in length");
    }
    let f = coherent_function(kin, gauge, rho, w, ks)?;
    let e = kin.charge();
    let q: f64 = f.iter().zip(weights).map(|(v, wt)| node_form(v, v).re * wt).sum();
    Ok(-0.5 * e * e * q)
}

/// Truncated-Fock cross-check of an amplitude on the photons' grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleValue {
    /// Brute-force matrix element.
    pub value: Complex64,
    /// Closed form on the same grid: `exp(grid exponent) prod factors`.
    pub grid_closed_form: Complex64,
    pub deviation: f64,
    pub nodes: usize,
    pub modes: usize,
    pub cap: usize,
    pub states: usize,
}

/// Vacuum amplitude, emission factors and their product.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmplitudeReport {
    pub model: Model,
    pub gauge: Gauge,
    pub window: CutoffWindow,
    pub kinematics: ScatteringKinematics,
    pub vacuum_amplitude: Complex64,
    pub exponent: CorrectionExponent,
    pub emission_factors: Vec<Complex64>,
    pub total: Complex64,
    pub oracle: Option<OracleValue>,
}

/// Vacuum amplitude times the product of emission factors, optionally checked
/// against the Fock oracle at occupation cap `oracle_cap`.
pub fn full_amplitude(
    kin: &ScatteringKinematics,
    gauge: Gauge,
    rho: &FormFactor,
    w: &CutoffWindow,
    photons: &[PhotonSmearing],
    tol: &Tolerance,
    oracle_cap: Option<usize>,
) -> Result<AmplitudeReport> {
    let exponent = m_exponent(kin, gauge, rho, w, tol)?;
    let vacuum = exponent.total.exp();
    let factors = photons.iter().map(|p| emission_factor(kin, gauge, rho, w, p)).collect::<Result<Vec<_>>>()?;
    let total = factors.iter().fold(vacuum, |acc, f| acc * f);
    let oracle = match oracle_cap {
        Some(cap) => Some(oracle_amplitude(kin, gauge, rho, w, photons, &factors, cap)?),
        None => None,
    };
    Ok(AmplitudeReport {
        model: kin.model(),
        gauge,
        window: *w,
        kinematics: kin.clone(),
        vacuum_amplitude: vacuum,
        exponent,
        emission_factors: factors,
        total,
        oracle,
    })
}

fn oracle_amplitude(
    kin: &ScatteringKinematics,
    gauge: Gauge,
    rho: &FormFactor,
    w: &CutoffWindow,
    photons: &[PhotonSmearing],
    factors: &[Complex64],
    cap: usize,
) -> Result<OracleValue> {
    let Some(first) = photons.first() else {
        return invalid("the oracle needs at least one photon to fix its grid");
    };
    if photons.iter().any(|p| p.grid != first.grid) {
        return invalid("oracle photons must share one grid");
    }
    let grid = &first.grid;
    let f = coherent_function(kin, gauge, rho, w, &grid.ks)?;
    let set = match gauge {
        Gauge::Fgb => {
            let used = |mu: usize| f.iter().chain(photons.iter().flat_map(|p| p.values.iter())).any(|v| v[mu] != ZERO);
            ChannelSet::Lorentz((0..4).filter(|&mu| used(mu)).collect())
        }
        Gauge::Coulomb => ChannelSet::Coulomb,
    };
    let modes = ModeGrid::new(&grid.ks, &grid.weights, w, &set)?;
    let space = TruncatedFockSpace::new(modes, cap)?;
    let bras: Vec<GridFunction> = photons.iter().map(|p| p.values.clone()).collect();
    let value = emission_matrix_element(&space, &bras, &f, kin.charge())?;
    let vac = grid_exponent(kin, gauge, rho, w, &grid.ks, &grid.weights)?;
    let closed = factors.iter().fold(Complex64::new(vac.exp(), 0.0), |acc, x| acc * x);
    Ok(OracleValue {
        value,
        grid_closed_form: closed,
        deviation: (value - closed).norm(),
        nodes: grid.len(),
        modes: space.modes(),
        cap,
        states: space.dim(),
    })
}

/// FGB versus Coulomb exponents of one process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaugeComparison {
    pub fgb: Complex64,
    pub coulomb: Complex64,
    /// `log A_FGB / log A_Coul`; absent when both exponents vanish.
    pub log_ratio: Option<f64>,
    /// `max |kbar.j~|` over a fixed on-shell sample set.
    pub conservation_residual: f64,
    /// Sum of the two propagated quadrature error bounds.
    pub error_bound: f64,
}

/// Fixed on-shell sample: 26 lattice directions at three radii of the window.
pub fn sample_momenta(w: &CutoffWindow) -> Vec<Vec3> {
    let mut dirs = Vec::new();
    for x in -1i32..=1 {
        for y in -1i32..=1 {
            for z in -1i32..=1 {
                if (x, y, z) != (0, 0, 0) {
                    dirs.push(Vec3::new(x as f64, y as f64, z as f64).normalize());
                }
            }
        }
    }
    let radii = [w.lambda, 0.5 * (w.lambda + w.big_lambda), w.big_lambda];
    radii.iter().flat_map(|r| dirs.iter().map(move |d| d * *r)).collect()
}

/// Exponents in both gauges, their ratio and the current's conservation residual.
pub fn gauge_compare(
    kin: &ScatteringKinematics,
    rho: &FormFactor,
    w: &CutoffWindow,
    tol: &Tolerance,
) -> Result<GaugeComparison> {
    let fgb = m_exponent(kin, Gauge::Fgb, rho, w, tol)?;
    let coul = m_exponent(kin, Gauge::Coulomb, rho, w, tol)?;
    let degenerate = kin.is_degenerate() || kin.charge() == 0.0 || coul.total.re == 0.0;
    let log_ratio = if degenerate { None } else { Some(fgb.total.re / coul.total.re) };
    let spec = CurrentSpec::adiabatic(kin.clone(), Gauge::Fgb, rho.clone());
    let mut residual = 0.0f64;
    for k in sample_momenta(w) {
        residual = residual.max(conservation_residual(&spec, &k)?.norm());
    }
    Ok(GaugeComparison {
        fgb: fgb.total,
        coulomb: coul.total,
        log_ratio,
        conservation_residual: residual,
        error_bound: fgb.error + coul.error,
    })
}

/// One row of the renormalization ledger.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LedgerRow {
    pub epsilon: f64,
    pub unrenormalized: Complex64,
    pub counterterm: Complex64,
    pub sum: Complex64,
    /// True when `eps < lambda (1 - |v|)`, inside the convergence radius of the
    /// small-`eps` expansion; only these rungs enter the extrapolation.
    pub in_fit: bool,
}

/// Outgoing-leg self-energy ledger over a decreasing `eps` ladder.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RenormalizationLedger {
    pub rows: Vec<LedgerRow>,
    /// `eps -> 0` limit of the sum over the rungs marked `in_fit`: the real part is
    /// even in `eps` and is fitted by a polynomial in `eps^2`; the imaginary part is
    /// odd and is fitted by `c0 + c1 eps + c3 eps^3 + ...`, so `c0` measures any
    /// non-odd remainder.
    pub extrapolated: Complex64,
    /// `-e^2 B_IR(u) / 2`.
    pub target: f64,
    pub relative_error: f64,
}

/// Neville evaluation at `0` of the interpolant through `(x_i, y_i)`.
pub fn neville_at_zero(x: &[f64], y: &[f64]) -> f64 {
    let mut p = y.to_vec();
    let n = x.len();
    for level in 1..n {
        for i in 0..n - level {
            let (xi, xj) = (x[i], x[i + level]);
            p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
        }
    }
    p.first().copied().unwrap_or(0.0)
}

/// Constant term of the interpolant `c0 + c1 x + c3 x^3 + ...` through the points.
pub fn odd_fit_at_zero(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let powers: Vec<i32> = (0..n).map(|j| if j == 0 { 0 } else { 2 * j as i32 - 1 }).collect();
    let a = DMatrix::from_fn(n, n, |i, j| x[i].powi(powers[j]));
    let b = DVector::from_column_slice(y);
    a.lu().solve(&b).map_or(f64::NAN, |c| c[0])
}

/// Unrenormalized exponent, counterterm phase and their sum on each ladder rung,
/// extrapolated to `eps = 0` and compared with `-e^2 B_IR(u)/2`.
pub fn renormalization_ledger(
    u: &FourVelocity,
    e: f64,
    ladder: &[f64],
    rho: &FormFactor,
    w: &CutoffWindow,
    tol: &Tolerance,
) -> Result<RenormalizationLedger> {
    if ladder.is_empty() {
        return invalid("epsilon ladder is empty");
    }
    if ladder.iter().any(|x| !(x.is_finite() && *x > 0.0)) || ladder.windows(2).any(|p| p[1] >= p[0]) {
        return invalid("epsilon ladder must be positive and strictly decreasing");
    }
    // the integrand is analytic in eps^2 only for eps below the smallest u.k / |k|
    let radius = w.lambda * (1.0 - u.spatial().norm());
    let rows = ladder
        .iter()
        .map(|&eps| {
            let unrenormalized = unren_halfline_exponent(u, eps, e, rho, w, tol)?;
            let counterterm = counterterm_phase(u, eps, e, rho, w, tol)?;
            let sum = unrenormalized + counterterm;
            Ok(LedgerRow { epsilon: eps, unrenormalized, counterterm, sum, in_fit: eps < radius })
        })
        .collect::<Result<Vec<_>>>()?;
    let fit: Vec<&LedgerRow> = rows.iter().filter(|r| r.in_fit).collect();
    if fit.is_empty() {
        return invalid(format!("no ladder rung lies below the convergence radius {radius:e}"));
    }
    let eps: Vec<f64> = fit.iter().map(|r| r.epsilon).collect();
    let x2: Vec<f64> = eps.iter().map(|x| x * x).collect();
    let re = neville_at_zero(&x2, &fit.iter().map(|r| r.sum.re).collect::<Vec<_>>());
    let im = odd_fit_at_zero(&eps, &fit.iter().map(|r| r.sum.im).collect::<Vec<_>>());
    let target = if e == 0.0 { 0.0 } else { -0.5 * e * e * b_ir(u, rho, w, tol)? };
    let extrapolated = Complex64::new(re, im);
    let relative_error =
        if target == 0.0 { (extrapolated - target).norm() } else { (extrapolated - target).norm() / target.abs() };
    Ok(RenormalizationLedger { rows, extrapolated, target, relative_error })
}

/// Emission factor `i e <f, F>` evaluated through the coherent function; agrees
/// with [`emission_factor`] by construction of `F`.
pub fn emission_factor_from_coherent(
    kin: &ScatteringKinematics,
    gauge: Gauge,
    rho: &FormFactor,
    w: &CutoffWindow,
    photon: &PhotonSmearing,
) -> Result<Complex64> {
    let f = coherent_function(kin, gauge, rho, w, &photon.grid.ks)?;
    let q: Complex64 =
        photon.values.iter().zip(&f).zip(&photon.grid.weights).map(|((p, c), wt)| node_form(p, c) * *wt).sum();
    Ok(I * kin.charge() * q)
}
