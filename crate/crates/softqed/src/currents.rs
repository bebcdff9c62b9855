//! Classical source currents, their Fourier transforms, and the coherence functions
//! that label the asymptotic photon clouds.
//!
//! Fourier convention: `j~(k) = int d^4x e^{i k.x} j(x)` with `k.x = k0 t - k.x`.
//! Switching: the outgoing leg carries `theta(t) e^{-eps t}`, the incoming one
//! `theta(-t) e^{eps t}`. Coulomb-tagged values have a zero time component and a
//! transverse spatial part.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicBool, Ordering};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::kinematics::{
    complexify, four, k_bar, minkowski, transverse_project, CutoffWindow, FormFactor, FourVector, FourVelocity, Gauge,
    Leg, Model, ScatteringKinematics, Vec3, ZERO4,
};
use crate::quadrature::{integrate, Tolerance};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A current in a definite gauge representation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurrentSpec {
    pub kin: ScatteringKinematics,
    pub gauge: Gauge,
    pub rho: FormFactor,
    /// Adiabatic parameter; `0` is the switched-off limit.
    pub epsilon: f64,
}

impl CurrentSpec {
    /// Current with `epsilon >= 0`.
    pub fn new(kin: ScatteringKinematics, gauge: Gauge, rho: FormFactor, epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return invalid(format!("epsilon must be non-negative, got {epsilon}"));
        }
        Ok(Self { kin, gauge, rho, epsilon })
    }

    /// Adiabatic-limit current.
    pub fn adiabatic(kin: ScatteringKinematics, gauge: Gauge, rho: FormFactor) -> Self {
        Self { kin, gauge, rho, epsilon: 0.0 }
    }

    /// Model tag of the underlying kinematics.
    pub fn model(&self) -> Model {
        self.kin.model()
    }
}

/// Frequency `u.k` seen by a leg at off-shell `(k0, k)`: `k0 - u.k` for BN, `k0` for
/// the dipole, whose charge does not move.
fn leg_frequency(kin: &ScatteringKinematics, leg: Leg, k: &Vec3, k0: f64) -> f64 {
    match kin.model() {
        Model::BlochNordsieck => k0 - kin.velocity(leg).spatial().dot(k),
        Model::Dipole => k0,
    }
}

/// `j~^mu(k0, k)`.
///
/// BN: `i rho (u_in/(-u_in.k + i eps) + u_out/(u_out.k + i eps))`; the dipole uses
/// `v = (1, p/m)` with `u.k` replaced by `k0`. In the Coulomb gauge the time
/// component is dropped and the spatial part projected with `P(k)`.
pub fn current_fourier(spec: &CurrentSpec, k: &Vec3, k0: f64) -> Result<FourVector> {
    if k.norm().is_nan() || k.norm() <= 0.0 {
        return invalid("current_fourier needs |k| > 0");
    }
    let r = spec.rho.eval(k.norm());
    let mut j = ZERO4;
    for leg in [Leg::In, Leg::Out] {
        let omega = leg_frequency(&spec.kin, leg, k, k0);
        let den = Complex64::new(leg.eta() * omega, spec.epsilon);
        if den.norm() == 0.0 {
            return invalid("current_fourier hit the on-shell pole at eps = 0");
        }
        let coeff = I * r / den;
        let u = spec.kin.velocity(leg).four();
        for mu in 0..4 {
            j[mu] += coeff * u[mu];
        }
    }
    Ok(match spec.gauge {
        Gauge::Fgb => j,
        Gauge::Coulomb => coulomb_part(k, &j)?,
    })
}

fn coulomb_part(k: &Vec3, j: &FourVector) -> Result<FourVector> {
    let re = transverse_project(k, &Vec3::new(j[1].re, j[2].re, j[3].re))?;
    let im = transverse_project(k, &Vec3::new(j[1].im, j[2].im, j[3].im))?;
    let s = complexify(&re) + complexify(&im) * I;
    Ok(four(Complex64::new(0.0, 0.0), &s))
}

/// `k~_mu j~^mu` at the on-shell point `k0 = |k|` in the adiabatic limit.
///
/// Zero for BN; `-i rho khat.(p_out - p_in)/m` for the dipole in the FGB gauge.
pub fn conservation_residual(spec: &CurrentSpec, k: &Vec3) -> Result<Complex64> {
    let s = CurrentSpec { epsilon: 0.0, ..spec.clone() };
    let j = current_fourier(&s, k, k.norm())?;
    Ok(minkowski(&k_bar(k), &j))
}

/// Spatial Fourier transform of `d_mu j^mu` at time `t != 0`.
///
/// BN currents are conserved, so this is `0`; the dipole gives
/// `i (k.p(t)/m) rho(k)` with `p(t)` the momentum of the leg active at `t`.
pub fn current_divergence(spec: &CurrentSpec, k: &Vec3, t: f64) -> Result<Complex64> {
    if t == 0.0 || !t.is_finite() {
        return invalid("current_divergence excludes the switch instant t = 0");
    }
    match &spec.kin {
        ScatteringKinematics::BlochNordsieck { .. } => Ok(Complex64::new(0.0, 0.0)),
        ScatteringKinematics::Dipole { p_in, p_out, mass, .. } => {
            let p = if t > 0.0 { p_out } else { p_in };
            Ok(I * (k.dot(p) / mass * spec.rho.eval(k.norm())))
        }
    }
}

/// On-shell four-dimensional Fourier transform `xi~(k)` of `d_mu j^mu` in the
/// adiabatic limit, so that `k~_mu j~^mu = i xi~`: `-rho khat.(p_out - p_in)/m`.
pub fn divergence_fourier(spec: &CurrentSpec, k: &Vec3) -> Result<Complex64> {
    let s = CurrentSpec { gauge: Gauge::Fgb, ..spec.clone() };
    Ok(-I * conservation_residual(&s, k)?)
}

fn check_window(k: &Vec3, w: &CutoffWindow) -> Result<f64> {
    let n = k.norm();
    if !w.contains(n) {
        return invalid(format!("|k| = {n} lies outside [{}, {}]", w.lambda, w.big_lambda));
    }
    Ok(n)
}

/// Leg vector entering a coherence function: `u^mu` (FGB) or `(0, P u)` (Coulomb).
fn leg_vector(spec: &CurrentSpec, leg: Leg, k: &Vec3) -> Result<FourVector> {
    let u = spec.kin.velocity(leg);
    match spec.gauge {
        Gauge::Fgb => Ok(u.four()),
        Gauge::Coulomb => {
            let p = transverse_project(k, &u.spatial())?;
            Ok(four(Complex64::new(0.0, 0.0), &complexify(&p)))
        }
    }
}

fn normalization(kn: f64) -> f64 {
    (2.0 * PI).powf(1.5) * (2.0 * kn).sqrt()
}

/// On-shell frequency `omega = u.k` of a leg (`|k|` for the dipole).
pub fn on_shell_frequency(kin: &ScatteringKinematics, leg: Leg, k: &Vec3) -> Result<f64> {
    kin.denominator(leg, k)
}

/// Asymptotic coherence function of a leg:
/// `f^mu(k) = rho u^mu i / ((2 pi)^{3/2} sqrt(2k) omega)`.
pub fn coherence_asymptotic(spec: &CurrentSpec, leg: Leg, k: &Vec3, w: &CutoffWindow) -> Result<FourVector> {
    let kn = check_window(k, w)?;
    let omega = on_shell_frequency(&spec.kin, leg, k)?;
    let c = I * (spec.rho.eval(kn) / (normalization(kn) * omega));
    Ok(leg_vector(spec, leg, k)?.map(|x| x * c))
}

/// Finite-time regularized coherence function.
///
/// Outgoing leg: `rho u (e^{(i omega - eps) t} - 1)/((2 pi)^{3/2} sqrt(2k) (i omega - eps))`;
/// the incoming leg uses `eps -> -eps`. Vanishes at `t = 0`.
pub fn coherence_regularized(
    spec: &CurrentSpec,
    leg: Leg,
    k: &Vec3,
    t: f64,
    eps: f64,
    w: &CutoffWindow,
) -> Result<FourVector> {
    let kn = check_window(k, w)?;
    if !(t.is_finite() && eps.is_finite()) {
        return invalid("time and epsilon must be finite");
    }
    let omega = on_shell_frequency(&spec.kin, leg, k)?;
    let a = Complex64::new(-leg.eta() * eps, omega);
    let factor = ((a * t).exp() - 1.0) / a;
    let c = factor * (spec.rho.eval(kn) / normalization(kn));
    Ok(leg_vector(spec, leg, k)?.map(|x| x * c))
}

/// Kinematic phase `d(t) = -int d^3k rho^2/((2 pi)^3 k (omega^2 + eps^2))
/// [e^{-eps t} sin(omega t) + (omega/(2 eps))(e^{-2 eps t} - 1)]` with `omega = u.k`.
pub fn phase_exponent_d(
    u: &FourVelocity,
    t: f64,
    eps: f64,
    rho: &FormFactor,
    w: &CutoffWindow,
    tol: &Tolerance,
) -> Result<f64> {
    crate::kinematics::check_epsilon(eps)?;
    if !(t.is_finite() && t >= 0.0) {
        return invalid(format!("phase_exponent_d needs t >= 0, got {t}"));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let beta = u.spatial().norm();
    let decay = (-eps * t).exp();
    let relax = (-2.0 * eps * t).exp_m1() / (2.0 * eps);
    let failed = AtomicBool::new(false);
    let radial = |k: f64| {
        let r = rho.eval(k);
        if r == 0.0 {
            return 0.0;
        }
        let inner = integrate(
            |c: f64| {
                let omega = k * (1.0 - beta * c);
                (decay * (omega * t).sin() + omega * relax) / (omega * omega + eps * eps)
            },
            -1.0,
            1.0,
            &[],
            tol,
        );
        match inner {
            Ok(est) => est.value * k * r * r,
            Err(_) => {
                failed.store(true, Ordering::Relaxed);
                0.0
            }
        }
    };
    let est = integrate(radial, w.lambda, w.big_lambda, &rho.breakpoints(), tol)?;
    if failed.load(Ordering::Relaxed) {
        return Err(Error::Quadrature { estimate: f64::NAN, tolerance: tol.rel });
    }
    Ok(-est.value / (4.0 * PI * PI))
}
