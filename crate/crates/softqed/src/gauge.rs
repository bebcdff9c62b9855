//! Gupta-Bleuler structure on grid smearings: the subsidiary condition, null
//! vectors, the map `T` from physical FGB photons to Coulomb photons, and the
//! gauge-fixed pairing that separates the longitudinal part of a current.
//!
//! Equivalence classes modulo null vectors are represented by the canonical
//! representative with zero time component; the Poisson kernel enters only as
//! `1/|k|^2` in momentum space.

use num_complex::Complex64;
use serde::Serialize;

use crate::currents::{current_fourier, divergence_fourier, CurrentSpec};
use crate::error::{invalid, Error, Result};
use crate::fock::{node_form, GridFunction};
use crate::kinematics::{complexify, four, k_bar, minkowski, spatial, FourVector, Gauge, Vec3};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative tolerance of the subsidiary and transversality conditions.
pub const CONDITION_TOL: f64 = 1e-12;

/// Momentum nodes with positive quadrature weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentumGrid {
    pub ks: Vec<Vec3>,
    pub weights: Vec<f64>,
}

impl MomentumGrid {
    /// Requires equal lengths, non-zero momenta and positive weights.
    pub fn new(ks: Vec<Vec3>, weights: Vec<f64>) -> Result<Self> {
        if ks.len() != weights.len() {
            return invalid("momentum and weight lists differ in length");
        }
        if ks.iter().any(|k| !(k.norm() > 0.0 && k.iter().all(|x| x.is_finite()))) {
            return invalid("grid momenta must be finite and non-zero");
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return invalid("grid weights must be positive");
        }
        Ok(Self { ks, weights })
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.ks.len()
    }

    /// True for an empty grid.
    pub fn is_empty(&self) -> bool {
        self.ks.is_empty()
    }
}

/// Photon smearing function sampled on a momentum grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhotonSmearing {
    pub grid: MomentumGrid,
    pub values: GridFunction,
    pub gauge: Gauge,
}

fn scale_of(values: &GridFunction) -> f64 {
    values.iter().flatten().fold(0.0f64, |m, x| m.max(x.norm()))
}

impl PhotonSmearing {
    /// FGB four-vector smearing.
    pub fn fgb(grid: MomentumGrid, values: GridFunction) -> Result<Self> {
        if values.len() != grid.len() {
            return invalid("smearing and grid differ in length");
        }
        Ok(Self { grid, values, gauge: Gauge::Fgb })
    }

    /// Coulomb smearing from spatial vectors; each must be transverse to its node.
    pub fn coulomb(grid: MomentumGrid, spatial_values: Vec<[Complex64; 3]>) -> Result<Self> {
        if spatial_values.len() != grid.len() {
            return invalid("smearing and grid differ in length");
        }
        let values: GridFunction = spatial_values.iter().map(|v| [ZERO, v[0], v[1], v[2]]).collect();
        let tol = CONDITION_TOL * scale_of(&values).max(f64::MIN_POSITIVE);
        for (k, v) in grid.ks.iter().zip(&values) {
            let kh = complexify(&k.normalize());
            if kh.dot(&spatial(v)).norm() > tol {
                return invalid("Coulomb smearing is not transverse");
            }
        }
        Ok(Self { grid, values, gauge: Gauge::Coulomb })
    }

    /// Pure-gauge smearing `f = kbar h`.
    pub fn pure_gauge(grid: MomentumGrid, h: &[Complex64]) -> Result<Self> {
        if h.len() != grid.len() {
            return invalid("gauge function and grid differ in length");
        }
        let values = grid.ks.iter().zip(h).map(|(k, hv)| k_bar(k).map(|x| x * hv)).collect();
        Self::fgb(grid, values)
    }

    /// True when the subsidiary condition holds at every node.
    pub fn is_physical(&self) -> bool {
        gupta_residual(self) <= CONDITION_TOL * self.residual_scale()
    }

    /// True when `f = kbar h` at every node.
    pub fn is_null(&self) -> bool {
        let tol = CONDITION_TOL * scale_of(&self.values).max(f64::MIN_POSITIVE);
        self.grid.ks.iter().zip(&self.values).all(|(k, v)| {
            let h = v[0] / k.norm();
            k_bar(k).iter().zip(v).all(|(kb, x)| (x - kb * h).norm() <= tol)
        })
    }

    fn residual_scale(&self) -> f64 {
        let kmax = self.grid.ks.iter().fold(0.0f64, |m, k| m.max(k.norm()));
        (kmax * scale_of(&self.values)).max(f64::MIN_POSITIVE)
    }
}

/// `max_i |kbar_mu f^mu(k_i)| = max_i |k f0 - k.f|`; zero iff physical.
pub fn gupta_residual(f: &PhotonSmearing) -> f64 {
    f.grid.ks.iter().zip(&f.values).map(|(k, v)| minkowski(&k_bar(k), v).norm()).fold(0.0, f64::max)
}

/// `T f`: the spatial part of `f - (kbar/|k|) f0`, a transverse Coulomb smearing.
/// Null vectors map to zero.
pub fn t_map(f: &PhotonSmearing) -> Result<PhotonSmearing> {
    match f.gauge {
        Gauge::Coulomb => return Ok(f.clone()),
        Gauge::Fgb => {}
    }
    if !f.is_physical() {
        return invalid(format!("t_map needs a physical smearing, residual {:e}", gupta_residual(f)));
    }
    let tol = CONDITION_TOL * scale_of(&f.values).max(f64::MIN_POSITIVE);
    let values = f
        .grid
        .ks
        .iter()
        .zip(&f.values)
        .map(|(k, v)| {
            let h = v[0] / k.norm();
            if k_bar(k).iter().zip(v).all(|(kb, x)| (x - kb * h).norm() <= tol) {
                // null node: exact zero rather than a rounding residue
                return [ZERO; 4];
            }
            let kh = complexify(&k.normalize());
            four(ZERO, &(spatial(v) - kh * v[0]))
        })
        .collect();
    Ok(PhotonSmearing { grid: f.grid.clone(), values, gauge: Gauge::Coulomb })
}

/// `sum_i w_i <f_i, g_i>` with `<f, g> = -conj(f).g` (Minkowski); positive on
/// Coulomb smearings and positive semi-definite on physical FGB smearings.
pub fn smearing_inner(f: &PhotonSmearing, g: &PhotonSmearing) -> Result<Complex64> {
    if f.grid != g.grid {
        return invalid("smearings live on different grids");
    }
    Ok(f.grid.weights.iter().zip(f.values.iter().zip(&g.values)).map(|(w, (a, b))| node_form(a, b) * *w).sum())
}

/// Finite linear combination of product states `a+(f_1)...a+(f_n) Psi_0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhotonState {
    pub terms: Vec<(Complex64, Vec<PhotonSmearing>)>,
}

impl PhotonState {
    /// Fock vacuum.
    pub fn vacuum() -> Self {
        Self { terms: vec![(Complex64::new(1.0, 0.0), Vec::new())] }
    }

    /// Single product state with unit coefficient.
    pub fn product(photons: Vec<PhotonSmearing>) -> Self {
        Self { terms: vec![(Complex64::new(1.0, 0.0), photons)] }
    }

    /// Indefinite (FGB) or positive (Coulomb) inner product: a permanent of
    /// one-photon products for equal photon numbers, zero otherwise.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        let mut total = ZERO;
        for (ca, fa) in &self.terms {
            for (cb, fb) in &other.terms {
                if fa.len() != fb.len() {
                    continue;
                }
                let n = fa.len();
                let mut m = vec![ZERO; n * n];
                for i in 0..n {
                    for j in 0..n {
                        m[i * n + j] = smearing_inner(&fa[i], &fb[j])?;
                    }
                }
                total += ca.conj() * cb * permanent(&m, n);
            }
        }
        Ok(total)
    }
}

fn permanent(m: &[Complex64], n: usize) -> Complex64 {
    fn rec(m: &[Complex64], n: usize, row: usize, used: &mut Vec<bool>) -> Complex64 {
        if row == n {
            return Complex64::new(1.0, 0.0);
        }
        let mut s = ZERO;
        for j in 0..n {
            if !used[j] {
                used[j] = true;
                s += m[row * n + j] * rec(m, n, row + 1, used);
                used[j] = false;
            }
        }
        s
    }
    rec(m, n, 0, &mut vec![false; n])
}

/// Factor-wise `T` on a state of physical photons.
pub fn t_map_state(state: &PhotonState) -> Result<PhotonState> {
    let mut terms = Vec::with_capacity(state.terms.len());
    for (c, photons) in &state.terms {
        let mapped = photons.iter().map(t_map).collect::<Result<Vec<_>>>().map_err(|e| match e {
            Error::InvalidInput(m) => Error::InvalidInput(format!("non-physical component: {m}")),
            other => other,
        })?;
        terms.push((*c, mapped));
    }
    Ok(PhotonState { terms })
}

/// Pairing of an on-shell current with a smearing, split by gauge fixing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaugeFixedPairing {
    /// `sum w j~_mu conj(f^mu)`.
    pub full: Complex64,
    /// Same with `f -> f - kbar (k.f)/|k|^2`, whose spatial part is `P f`.
    pub gauge_fixed: Complex64,
    /// `full - gauge_fixed = sum w (kbar.j~)(k.conj f)/|k|^2`.
    pub longitudinal: Complex64,
    /// `i sum w xi~ (k.conj f)/|k|^2` from the current divergence alone.
    pub divergence_pairing: Complex64,
}

/// Gauge-fixed pairing of the adiabatic current of `spec` with `f`.
pub fn gauge_fixed_pairing(spec: &CurrentSpec, f: &PhotonSmearing) -> Result<GaugeFixedPairing> {
    let s = CurrentSpec { gauge: Gauge::Fgb, epsilon: 0.0, ..spec.clone() };
    let mut full = ZERO;
    let mut gauge_fixed = ZERO;
    let mut longitudinal = ZERO;
    let mut divergence_pairing = ZERO;
    for ((k, w), v) in f.grid.ks.iter().zip(&f.grid.weights).zip(&f.values) {
        let j = current_fourier(&s, k, k.norm())?;
        let fc: FourVector = v.map(|x| x.conj());
        let kf = complexify(k).dot(&spatial(&fc)) / k.norm_squared();
        let kb = k_bar(k);
        let fg: FourVector = std::array::from_fn(|mu| fc[mu] - kb[mu] * kf);
        full += minkowski(&j, &fc) * *w;
        gauge_fixed += minkowski(&j, &fg) * *w;
        longitudinal += minkowski(&kb, &j) * kf * *w;
        divergence_pairing += I * divergence_fourier(&s, k)? * kf * *w;
    }
    Ok(GaugeFixedPairing { full, gauge_fixed, longitudinal, divergence_pairing })
}
