//! Kinematics, form factors, cutoff windows and the on-shell geometric primitives.
//!
//! Natural units, metric signature (+,-,-,-). Photon momenta are on shell, `k0 = |k|`.

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Real spatial 3-vector.
pub type Vec3 = Vector3<f64>;
/// Complex spatial 3-vector.
pub type CVec3 = Vector3<Complex64>;
/// Complex contravariant four-vector `f^mu`.
pub type FourVector = [Complex64; 4];

/// Zero complex four-vector.
pub const ZERO4: FourVector = [Complex64::new(0.0, 0.0); 4];

/// Minkowski product `a^mu b_mu` without conjugation.
pub fn minkowski(a: &FourVector, b: &FourVector) -> Complex64 {
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
}

/// Sesquilinear Minkowski product `conj(a^mu) b_mu`.
pub fn minkowski_sesq(a: &FourVector, b: &FourVector) -> Complex64 {
    a[0].conj() * b[0] - a[1].conj() * b[1] - a[2].conj() * b[2] - a[3].conj() * b[3]
}

/// Spatial part of a four-vector.
pub fn spatial(f: &FourVector) -> CVec3 {
    CVec3::new(f[1], f[2], f[3])
}

/// Four-vector from time component and spatial part.
pub fn four(f0: Complex64, f: &CVec3) -> FourVector {
    [f0, f[0], f[1], f[2]]
}

/// Lifts a real vector to a complex one.
pub fn complexify(v: &Vec3) -> CVec3 {
    v.map(|x| Complex64::new(x, 0.0))
}

/// On-shell photon four-momentum `kbar = (|k|, k)`.
pub fn k_bar(k: &Vec3) -> FourVector {
    let n = k.norm();
    [n, k[0], k[1], k[2]].map(|x| Complex64::new(x, 0.0))
}

/// Spherically symmetric ultraviolet regulator `rho(|k|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FormFactor {
    /// `exp(-k^2 / (2 sigma^2))`.
    Gaussian { sigma: f64 },
    /// Indicator of the closed shell `[lambda, big_lambda]`.
    SharpWindow { lambda: f64, big_lambda: f64 },
    /// Piecewise-linear interpolation of radial samples, zero outside the table.
    Tabulated { k: Vec<f64>, rho: Vec<f64> },
}

impl FormFactor {
    /// Gaussian form factor of width `sigma > 0`.
    pub fn gaussian(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return invalid(format!("gaussian width must be positive, got {sigma}"));
        }
        Ok(Self::Gaussian { sigma })
    }

    /// Sharp shell `[lambda, big_lambda]` with `0 <= lambda < big_lambda`.
    pub fn sharp_window(lambda: f64, big_lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && big_lambda.is_finite() && lambda >= 0.0 && big_lambda > lambda) {
            return invalid(format!("sharp window needs 0 <= lambda < Lambda, got [{lambda}, {big_lambda}]"));
        }
        Ok(Self::SharpWindow { lambda, big_lambda })
    }

    /// Tabulated samples with strictly increasing non-negative abscissae.
    pub fn tabulated(k: Vec<f64>, rho: Vec<f64>) -> Result<Self> {
        if k.len() < 2 || k.len() != rho.len() {
            return invalid("tabulated form factor needs at least two (k, rho) pairs of equal length");
        }
        if k.iter().chain(rho.iter()).any(|x| !x.is_finite()) {
            return invalid("tabulated form factor contains non-finite samples");
        }
        if k[0] < 0.0 || k.windows(2).any(|w| w[1] <= w[0]) {
            return invalid("tabulated abscissae must be non-negative and strictly increasing");
        }
        if rho.iter().any(|&r| r < 0.0) {
            return invalid("tabulated form factor must be non-negative");
        }
        Ok(Self::Tabulated { k, rho })
    }

    /// Evaluates `rho(k)` for `k >= 0`.
    pub fn eval(&self, k: f64) -> f64 {
        match self {
            Self::Gaussian { sigma } => (-k * k / (2.0 * sigma * sigma)).exp(),
            Self::SharpWindow { lambda, big_lambda } => {
                if k >= *lambda && k <= *big_lambda {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Tabulated { k: ks, rho } => {
                let n = ks.len();
                if k < ks[0] || k > ks[n - 1] {
                    return 0.0;
                }
                let i = ks.partition_point(|&x| x <= k).clamp(1, n - 1);
                let t = (k - ks[i - 1]) / (ks[i] - ks[i - 1]);
                rho[i - 1] + t * (rho[i] - rho[i - 1])
            }
        }
    }

    /// Radii where `rho` is not smooth; quadrature panels start there.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Self::Gaussian { .. } => Vec::new(),
            Self::SharpWindow { lambda, big_lambda } => vec![*lambda, *big_lambda],
            Self::Tabulated { k, .. } => k.clone(),
        }
    }
}

/// Four-velocity `u = (1, v)` with `|v| < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourVelocity {
    v: Vec3,
}

impl FourVelocity {
    /// Builds `u = (1, v)`; rejects `|v| >= 1` and non-finite input.
    pub fn new(v: Vec3) -> Result<Self> {
        if v.iter().any(|x| !x.is_finite()) {
            return invalid("velocity has non-finite components");
        }
        if v.norm() >= 1.0 {
            return invalid(format!("|u| = {} must be < 1", v.norm()));
        }
        Ok(Self { v })
    }

    /// Particle at rest.
    pub fn rest() -> Self {
        Self { v: Vec3::zeros() }
    }

    /// Spatial velocity `v`.
    pub fn spatial(&self) -> Vec3 {
        self.v
    }

    /// `u^2 = 1 - |v|^2`, in `(0, 1]`.
    pub fn u_sq(&self) -> f64 {
        1.0 - self.v.norm_squared()
    }

    /// Contravariant components `(1, v)`.
    pub fn components(&self) -> [f64; 4] {
        [1.0, self.v[0], self.v[1], self.v[2]]
    }

    /// Complex contravariant components.
    pub fn four(&self) -> FourVector {
        self.components().map(|x| Complex64::new(x, 0.0))
    }

    /// Minkowski product with another four-velocity.
    pub fn dot(&self, other: &FourVelocity) -> f64 {
        1.0 - self.v.dot(&other.v)
    }
}

/// `u.k = |k| - v.k` for on-shell `k`; strictly positive.
pub fn on_shell_dot(u: &FourVelocity, k: &Vec3) -> Result<f64> {
    let n = k.norm();
    if n.is_nan() || n <= 0.0 {
        return invalid("on_shell_dot needs |k| > 0");
    }
    Ok(n - u.v.dot(k))
}

/// `P(k) v = v - khat (khat.v)`.
pub fn transverse_project(k: &Vec3, v: &Vec3) -> Result<Vec3> {
    let n = k.norm();
    if n.is_nan() || n <= 0.0 {
        return invalid("transverse_project needs |k| > 0");
    }
    let kh = k / n;
    Ok(v - kh * kh.dot(v))
}

/// Complex version of [`transverse_project`].
pub fn transverse_project_c(k: &Vec3, v: &CVec3) -> Result<CVec3> {
    let n = k.norm();
    if n.is_nan() || n <= 0.0 {
        return invalid("transverse_project needs |k| > 0");
    }
    let kh = complexify(&(k / n));
    Ok(v - kh * kh.dot(v))
}

/// `u = (1, p/m)`; requires `m > 0` and `|p| < m`.
pub fn velocity_from_momentum(p: &Vec3, m: f64) -> Result<FourVelocity> {
    if !(m.is_finite() && m > 0.0) {
        return invalid(format!("mass must be positive, got {m}"));
    }
    if p.norm() >= m {
        return invalid(format!("|p|/m = {} leaves the non-relativistic domain", p.norm() / m));
    }
    FourVelocity::new(p / m)
}

/// Two unit vectors spanning the plane orthogonal to `k`, built by Gram-Schmidt
/// from the coordinate axis least aligned with `k`.
pub fn polarization_basis(k: &Vec3) -> Result<[Vec3; 2]> {
    let n = k.norm();
    if n.is_nan() || n <= 0.0 {
        return invalid("polarization_basis needs |k| > 0");
    }
    let kh = k / n;
    let mut axis = 0;
    for i in 1..3 {
        if kh[i].abs() < kh[axis].abs() {
            axis = i;
        }
    }
    let mut e = Vec3::zeros();
    e[axis] = 1.0;
    let e1 = (e - kh * kh.dot(&e)).normalize();
    let e2 = kh.cross(&e1);
    Ok([e1, e2])
}

/// Model tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// Classical conserved current with fixed in/out four-velocities.
    BlochNordsieck,
    /// Non-relativistic charge in the electric dipole approximation.
    Dipole,
}

/// Gauge tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gauge {
    /// Four photon channels with indefinite metric.
    Fgb,
    /// Two transverse photon channels, positive metric.
    Coulomb,
}

/// External charged leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Leg {
    In,
    Out,
}

impl Leg {
    /// `eta = -1` for the incoming leg, `+1` for the outgoing one.
    pub fn eta(self) -> f64 {
        match self {
            Leg::In => -1.0,
            Leg::Out => 1.0,
        }
    }
}

/// Both legs, incoming first.
pub const LEGS: [Leg; 2] = [Leg::In, Leg::Out];

/// Charged-particle data of one scattering process.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ScatteringKinematics {
    /// Bloch-Nordsieck legs.
    BlochNordsieck { u_in: FourVelocity, u_out: FourVelocity, charge: f64 },
    /// Dipole legs; `v_in`, `v_out` are `(1, p/m)`.
    Dipole { p_in: Vec3, p_out: Vec3, mass: f64, charge: f64, v_in: FourVelocity, v_out: FourVelocity },
}

impl ScatteringKinematics {
    /// Bloch-Nordsieck process.
    pub fn bloch_nordsieck(u_in: FourVelocity, u_out: FourVelocity, charge: f64) -> Result<Self> {
        if !charge.is_finite() {
            return invalid("charge must be finite");
        }
        Ok(Self::BlochNordsieck { u_in, u_out, charge })
    }

    /// Dipole process; both legs must satisfy `|p| < m`.
    pub fn dipole(p_in: Vec3, p_out: Vec3, mass: f64, charge: f64) -> Result<Self> {
        if !charge.is_finite() {
            return invalid("charge must be finite");
        }
        let v_in = velocity_from_momentum(&p_in, mass)?;
        let v_out = velocity_from_momentum(&p_out, mass)?;
        Ok(Self::Dipole { p_in, p_out, mass, charge, v_in, v_out })
    }

    /// Model tag.
    pub fn model(&self) -> Model {
        match self {
            Self::BlochNordsieck { .. } => Model::BlochNordsieck,
            Self::Dipole { .. } => Model::Dipole,
        }
    }

    /// Coupling `e`.
    pub fn charge(&self) -> f64 {
        match self {
            Self::BlochNordsieck { charge, .. } | Self::Dipole { charge, .. } => *charge,
        }
    }

    /// Copy with a different coupling.
    pub fn with_charge(&self, e: f64) -> Self {
        let mut out = self.clone();
        match &mut out {
            Self::BlochNordsieck { charge, .. } | Self::Dipole { charge, .. } => *charge = e,
        }
        out
    }

    /// Four-velocity of a leg (`u` for BN, `(1, p/m)` for the dipole).
    pub fn velocity(&self, leg: Leg) -> FourVelocity {
        match (self, leg) {
            (Self::BlochNordsieck { u_in, .. }, Leg::In) => *u_in,
            (Self::BlochNordsieck { u_out, .. }, Leg::Out) => *u_out,
            (Self::Dipole { v_in, .. }, Leg::In) => *v_in,
            (Self::Dipole { v_out, .. }, Leg::Out) => *v_out,
        }
    }

    /// On-shell energy denominator of a leg: `u.k` for BN, `|k|` for the dipole.
    pub fn denominator(&self, leg: Leg, k: &Vec3) -> Result<f64> {
        match self {
            Self::BlochNordsieck { .. } => on_shell_dot(&self.velocity(leg), k),
            Self::Dipole { .. } => {
                let n = k.norm();
                if n.is_nan() || n <= 0.0 {
                    return invalid("photon momentum must be non-zero");
                }
                Ok(n)
            }
        }
    }

    /// True when the two legs coincide.
    pub fn is_degenerate(&self) -> bool {
        self.velocity(Leg::In).spatial() == self.velocity(Leg::Out).spatial()
    }
}

/// Momentum shell `lambda <= |k| <= big_lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffWindow {
    pub lambda: f64,
    pub big_lambda: f64,
}

impl CutoffWindow {
    /// Requires `0 < lambda < big_lambda`.
    pub fn new(lambda: f64, big_lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && big_lambda.is_finite() && lambda > 0.0 && big_lambda > lambda) {
            return invalid(format!("cutoff window needs 0 < lambda < Lambda, got [{lambda}, {big_lambda}]"));
        }
        Ok(Self { lambda, big_lambda })
    }

    /// True when `lambda <= r <= big_lambda`.
    pub fn contains(&self, r: f64) -> bool {
        r >= self.lambda && r <= self.big_lambda
    }
}

/// Validates an adiabatic parameter `eps > 0`.
pub fn check_epsilon(eps: f64) -> Result<()> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidInput(format!("adiabatic parameter must be positive, got {eps}")));
    }
    Ok(())
}
