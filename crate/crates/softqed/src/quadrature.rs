//! Infrared-regularized momentum integrals.
//!
//! Every integral runs over the shell `lambda <= |k| <= Lambda` after the on-shell
//! reduction `int d^4k theta(k0) delta(k^2) F = int d^3k/(2|k|) F`. Because the form
//! factor is spherical and on-shell denominators are homogeneous of degree one in
//! `k`, each integral factorizes into a radial moment of `rho^2` times an angular
//! average over the photon direction `n`.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kinematics::{
    check_epsilon, polarization_basis, CutoffWindow, FormFactor, FourVelocity, Gauge, Leg, Model, ScatteringKinematics,
    Vec3,
};

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// `n`-point Gauss-Legendre nodes and weights by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> GaussRule {
    assert!(n >= 1, "Gauss-Legendre order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    GaussRule { nodes, weights }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

fn panel_rule() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(15))
}

/// Values the adaptive engine can integrate.
pub trait QuadValue: Copy + Send + Sync + 'static {
    fn zero() -> Self;
    fn add(self, o: Self) -> Self;
    fn sub(self, o: Self) -> Self;
    fn scale(self, s: f64) -> Self;
    /// Largest component magnitude.
    fn mag(self) -> f64;
    /// Compensated sum in slice order.
    fn sum_compensated(xs: &[Self]) -> Self;
}

/// Neumaier-compensated sum in the given order.
pub fn neumaier_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for x in xs {
        let t = s + x;
        if s.abs() >= x.abs() {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    s + c
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn mag(self) -> f64 {
        self.abs()
    }
    fn sum_compensated(xs: &[Self]) -> Self {
        neumaier_sum(xs.iter().copied())
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn mag(self) -> f64 {
        self.re.abs().max(self.im.abs())
    }
    fn sum_compensated(xs: &[Self]) -> Self {
        Complex64::new(neumaier_sum(xs.iter().map(|z| z.re)), neumaier_sum(xs.iter().map(|z| z.im)))
    }
}

impl<const N: usize> QuadValue for [f64; N] {
    fn zero() -> Self {
        [0.0; N]
    }
    fn add(self, o: Self) -> Self {
        std::array::from_fn(|i| self[i] + o[i])
    }
    fn sub(self, o: Self) -> Self {
        std::array::from_fn(|i| self[i] - o[i])
    }
    fn scale(self, s: f64) -> Self {
        self.map(|x| x * s)
    }
    fn mag(self) -> f64 {
        self.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
    fn sum_compensated(xs: &[Self]) -> Self {
        std::array::from_fn(|i| neumaier_sum(xs.iter().map(|v| v[i])))
    }
}

/// Requested accuracy of an adaptive integral: `error <= max(abs, rel |I|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs: 1e-10, rel: 1e-8, max_panels: 20_000 }
    }
}

impl Tolerance {
    /// Tolerance near double-precision resolution, used by the acceptance checks.
    pub fn tight() -> Self {
        Self { abs: 1e-15, rel: 1e-13, max_panels: 20_000 }
    }

    /// Custom absolute and relative targets.
    pub fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel, ..Self::default() }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value)
    }
}

/// Integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
    pub panels: usize,
}

#[derive(Clone, Copy)]
struct Panel<T> {
    a: f64,
    b: f64,
    left: T,
    right: T,
    err: f64,
}

fn gauss_on<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> T {
    let rule = panel_rule();
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let mut acc = T::zero();
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        acc = acc.add(f(mid + half * x).scale(*w));
    }
    acc.scale(half)
}

fn make_panel<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64, whole: Option<T>) -> Panel<T> {
    let whole = whole.unwrap_or_else(|| gauss_on(f, a, b));
    let m = 0.5 * (a + b);
    let left = gauss_on(f, a, m);
    let right = gauss_on(f, m, b);
    let err = whole.sub(left.add(right)).mag();
    Panel { a, b, left, right, err }
}

/// Globally adaptive Gauss-Legendre integration of `f` over `[a, b]`.
///
/// Each panel compares the 15-point rule on the whole panel with the same rule on
/// its two halves; panels whose estimate exceeds their share of the target are
/// bisected, all in one round, with children evaluated in parallel. Panel order is
/// positional and the final sum is compensated, so results are bit-stable for any
/// worker count.
pub fn integrate<T, F>(f: F, a: f64, b: f64, breakpoints: &[f64], tol: &Tolerance) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T + Sync,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidInput("integration limits must be finite".into()));
    }
    if b <= a {
        return Ok(Estimate { value: T::zero(), error: 0.0, panels: 0 });
    }
    let mut cuts = vec![a];
    let mut inner: Vec<f64> = breakpoints.iter().copied().filter(|&x| x > a && x < b).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    cuts.extend(inner);
    cuts.push(b);
    let mut panels: Vec<Panel<T>> =
        cuts.windows(2).collect::<Vec<_>>().par_iter().map(|w| make_panel(&f, w[0], w[1], None)).collect();
    loop {
        let values: Vec<T> = panels.iter().map(|p| p.left.add(p.right)).collect();
        let value = T::sum_compensated(&values);
        let error = neumaier_sum(panels.iter().map(|p| p.err));
        let target = tol.target(value.mag());
        if error <= target {
            return Ok(Estimate { value, error, panels: panels.len() });
        }
        if panels.len() >= tol.max_panels {
            return Err(Error::Quadrature { estimate: error, tolerance: target });
        }
        let share = target / panels.len() as f64;
        let worst = panels.iter().fold(0.0f64, |m, p| m.max(p.err));
        let threshold = share.min(worst);
        let mut jobs: Vec<(f64, f64, T)> = Vec::new();
        let mut plan: Vec<Option<usize>> = Vec::with_capacity(panels.len());
        for p in &panels {
            if p.err >= threshold && p.err > 0.0 {
                let m = 0.5 * (p.a + p.b);
                plan.push(Some(jobs.len()));
                jobs.push((p.a, m, p.left));
                jobs.push((m, p.b, p.right));
            } else {
                plan.push(None);
            }
        }
        if jobs.is_empty() {
            return Err(Error::Quadrature { estimate: error, tolerance: target });
        }
        let children: Vec<Panel<T>> = jobs.par_iter().map(|&(a, b, w)| make_panel(&f, a, b, Some(w))).collect();
        let mut next = Vec::with_capacity(panels.len() + jobs.len() / 2);
        for (p, slot) in panels.iter().zip(plan) {
            match slot {
                Some(j) => {
                    next.push(children[j]);
                    next.push(children[j + 1]);
                }
                None => next.push(*p),
            }
        }
        panels = next;
    }
}

/// Mean of a `2 pi`-periodic function by the trapezoid rule with point doubling.
/// Returns the value and whether the doubling converged to `rel`.
pub fn periodic_mean<T: QuadValue, G: Fn(f64) -> T>(g: G, rel: f64) -> (T, bool) {
    let mut m = 8usize;
    let mut sum: Vec<T> = (0..m).map(|j| g(2.0 * PI * j as f64 / m as f64)).collect();
    let mut mean = T::sum_compensated(&sum).scale(1.0 / m as f64);
    while m < 32_768 {
        let odd: Vec<T> = (0..m).map(|j| g(2.0 * PI * (j as f64 + 0.5) / m as f64)).collect();
        sum.extend(odd);
        m *= 2;
        let next = T::sum_compensated(&sum).scale(1.0 / m as f64);
        let diff = next.sub(mean).mag();
        mean = next;
        if diff <= rel * mean.mag() || diff <= 1e-300 {
            return (mean, true);
        }
    }
    (mean, false)
}

/// Average over the unit sphere of `f(n)` for an integrand symmetric about the polar
/// axis: `(1/2) int_{-1}^{1} g(c) dc`.
pub fn sphere_average_axial<T, G>(g: G, tol: &Tolerance) -> Result<Estimate<T>>
where
    T: QuadValue,
    G: Fn(f64) -> T + Sync,
{
    let est = integrate(g, -1.0, 1.0, &[], tol)?;
    Ok(Estimate { value: est.value.scale(0.5), error: 0.5 * est.error, panels: est.panels })
}

/// Average over the unit sphere of `f(n)`, with the polar axis along `axis`
/// (`z` when `axis` vanishes): adaptive Gauss-Legendre in `cos(theta)`,
/// trapezoid doubling in the azimuth.
pub fn sphere_average<T, F>(axis: &Vec3, f: F, tol: &Tolerance) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: Fn(&Vec3) -> T + Sync,
{
    let e3 = if axis.norm() > 0.0 { axis.normalize() } else { Vec3::z() };
    let [e1, e2] = polarization_basis(&e3)?;
    let failed = AtomicBool::new(false);
    let inner_rel = (tol.rel * 1e-2).max(1e-15);
    let g = |c: f64| {
        let s = (1.0 - c * c).max(0.0).sqrt();
        let (mean, ok) = periodic_mean(
            |phi: f64| {
                let n = e1 * (s * phi.cos()) + e2 * (s * phi.sin()) + e3 * c;
                f(&n)
            },
            inner_rel,
        );
        if !ok {
            failed.store(true, Ordering::Relaxed);
        }
        mean
    };
    let est = sphere_average_axial(g, tol)?;
    if failed.load(Ordering::Relaxed) {
        return Err(Error::Quadrature { estimate: f64::NAN, tolerance: inner_rel });
    }
    Ok(est)
}

/// `int_lambda^Lambda rho(k)^2 k^power dk`.
pub fn radial_moment(rho: &FormFactor, w: &CutoffWindow, power: i32, tol: &Tolerance) -> Result<Estimate<f64>> {
    let f = |k: f64| {
        let r = rho.eval(k);
        r * r * k.powi(power)
    };
    integrate(f, w.lambda, w.big_lambda, &rho.breakpoints(), tol)
}

fn product_error(a: &Estimate<f64>, b: &Estimate<f64>) -> f64 {
    a.error * b.value.abs() + b.error * a.value.abs()
}

/// `int d^3k rho^2 / ((2 pi)^3 k^2) = (1/(2 pi^2)) int rho^2 dk`, shared by `z` and `z~`.
fn counterterm_base(rho: &FormFactor, w: &CutoffWindow, tol: &Tolerance) -> Result<f64> {
    Ok(radial_moment(rho, w, 0, tol)?.value / (2.0 * PI * PI))
}

/// `z = (1/3) int d^3k rho^2 / ((2 pi)^3 k^2)`.
pub fn counterterm_z(rho: &FormFactor, w: &CutoffWindow, tol: &Tolerance) -> Result<f64> {
    Ok(counterterm_base(rho, w, tol)? / 3.0)
}

/// `z~ = (1/2) int d^3k rho^2 / ((2 pi)^3 k^2) = (3/2) z`.
pub fn counterterm_z_tilde(rho: &FormFactor, w: &CutoffWindow, tol: &Tolerance) -> Result<f64> {
    Ok(counterterm_base(rho, w, tol)? / 2.0)
}

/// `<1/(1 - u.n)>` over directions, polar axis along `u`.
fn mean_inverse_dot(u: &FourVelocity, tol: &Tolerance) -> Result<f64> {
    let beta = u.spatial().norm();
    Ok(sphere_average_axial(|c: f64| 1.0 / (1.0 - beta * c), tol)?.value)
}

fn z_velocity_base(u: &FourVelocity, rho: &FormFactor, w: &CutoffWindow, tol: &Tolerance) -> Result<f64> {
    Ok(counterterm_base(rho, w, tol)? * mean_inverse_dot(u, tol)?)
}

/// `z1(u) = (1/3) int d^3k rho^2 / ((2 pi)^3 k (u.k))`.
pub fn counterterm_z1(u: &FourVelocity, rho: &FormFactor, w: &CutoffWindow, tol: &Tolerance) -> Result<f64> {
    Ok(z_velocity_base(u, rho, w, tol)? / 3.0)
}

/// `z2(u) = (1/2) int d^3k rho^2 / ((2 pi)^3 k (u.k)) = (3/2) z1(u)`.
pub fn counterterm_z2(u: &FourVelocity, rho: &FormFactor, w: &CutoffWindow, tol: &Tolerance) -> Result<f64> {
    Ok(z_velocity_base(u, rho, w, tol)? / 2.0)
}

/// `B_IR(u) = -u^2 int d^3k rho^2 / ((2 pi)^3 2k (u.k)^2)`; strictly negative.
pub fn b_ir(u: &FourVelocity, rho: &FormFactor, w: &CutoffWindow, tol: &Tolerance) -> Result<f64> {
    let r = radial_moment(rho, w, -1, tol)?;
    let beta = u.spatial().norm();
    let ang = sphere_average_axial(|c: f64| 1.0 / ((1.0 - beta * c) * (1.0 - beta * c)), tol)?;
    Ok(-u.u_sq() * r.value * ang.value / (4.0 * PI * PI))
}

/// Polar axis for a pair of velocities, chosen symmetrically in the arguments.
fn pair_axis(a: &Vec3, b: &Vec3) -> Vec3 {
    let (na, nb) = (a.norm(), b.norm());
    if na > nb || (na == nb && a.as_slice() >= b.as_slice()) {
        *a
    } else {
        *b
    }
}

/// `Gamma(a, b) = -(a.b) int d^3k rho^2 / ((2 pi)^3 2k (a.k)(b.k))`; symmetric.
pub fn gamma_cross(
    ua: &FourVelocity,
    ub: &FourVelocity,
    rho: &FormFactor,
    w: &CutoffWindow,
    tol: &Tolerance,
) -> Result<f64> {
    let r = radial_moment(rho, w, -1, tol)?;
    let (va, vb) = (ua.spatial(), ub.spatial());
    let axis = pair_axis(&va, &vb);
    let ang = sphere_average(&axis, |n: &Vec3| 1.0 / ((1.0 - va.dot(n)) * (1.0 - vb.dot(n))), tol)?;
    Ok(-ua.dot(ub) * r.value * ang.value / (4.0 * PI * PI))
}

/// Per-gauge decomposition `M = gamma_cross - (b_ir_in + b_ir_out)/2`, without `e^2`.
///
/// In the Coulomb gauge the entries are the transverse analogues
/// `Gamma_C = <PJ_out . PJ_in>`, `B_C(u) = <|PJ_u|^2>` in the same radial units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Breakdown {
    pub gamma_cross: f64,
    pub b_ir_in: f64,
    pub b_ir_out: f64,
    pub counterterm_phase: Option<Complex64>,
}

/// The complex exponent `e^2 M` with its decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrectionExponent {
    pub total: Complex64,
    pub breakdown: Breakdown,
    pub model: Model,
    pub gauge: Gauge,
    pub window: CutoffWindow,
    /// Propagated quadrature error bound on `total`.
    pub error: f64,
}

/// Angular current `J^mu(n)` with `j~^mu(k) = (i rho(k)/|k|) J^mu(k/|k|)` on shell.
pub fn angular_current(kin: &ScatteringKinematics, n: &Vec3) -> [f64; 4] {
    let mut j = [0.0; 4];
    for leg in [Leg::In, Leg::Out] {
        let u = kin.velocity(leg).components();
        let d = match kin.model() {
            Model::BlochNordsieck => 1.0 - kin.velocity(leg).spatial().dot(n),
            Model::Dipole => 1.0,
        };
        for mu in 0..4 {
            j[mu] += leg.eta() * u[mu] / d;
        }
    }
    j
}

fn transverse(n: &Vec3, v: &Vec3) -> Vec3 {
    v - n * n.dot(v)
}

/// Second-order exponent `e^2 M` in the adiabatic limit for either model and gauge.
///
/// FGB: `M = (1/2) int d^3k/((2 pi)^3 2k) (|j~0|^2 - |j~|^2)`, assembled per direction
/// from the cross and self terms. Coulomb: `M = -(1/2) int d^3k/((2 pi)^3 2k) |P j~|^2`
/// on an independent angular rule whose polar axis is the incoming leg.
pub fn m_exponent(
    kin: &ScatteringKinematics,
    gauge: Gauge,
    rho: &FormFactor,
    w: &CutoffWindow,
    tol: &Tolerance,
) -> Result<CorrectionExponent> {
    let e2 = kin.charge() * kin.charge();
    let r = radial_moment(rho, w, -1, tol)?;
    let u_in = kin.velocity(Leg::In);
    let u_out = kin.velocity(Leg::Out);
    let (vi, vo) = (u_in.spatial(), u_out.spatial());
    let ang = match (kin.model(), gauge) {
        (Model::BlochNordsieck, Gauge::Fgb) => {
            let axis = if vo.norm() > 0.0 { vo } else { vi };
            let (ui2, uo2, uio) = (u_in.u_sq(), u_out.u_sq(), u_in.dot(&u_out));
            sphere_average(
                &axis,
                |n: &Vec3| {
                    let (ai, ao) = (1.0 - vi.dot(n), 1.0 - vo.dot(n));
                    let g = -uio / (ai * ao);
                    let bi = -ui2 / (ai * ai);
                    let bo = -uo2 / (ao * ao);
                    [g - 0.5 * (bi + bo), g, bi, bo]
                },
                tol,
            )?
        }
        (Model::BlochNordsieck, Gauge::Coulomb) => {
            let axis = if vi.norm() > 0.0 { vi } else { vo };
            sphere_average(
                &axis,
                |n: &Vec3| {
                    let pi = transverse(n, &vi) / (1.0 - vi.dot(n));
                    let po = transverse(n, &vo) / (1.0 - vo.dot(n));
                    let d = po - pi;
                    [-0.5 * d.norm_squared(), po.dot(&pi), pi.norm_squared(), po.norm_squared()]
                },
                tol,
            )?
        }
        (Model::Dipole, Gauge::Fgb) => {
            let axis = vo - vi;
            let (ui2, uo2, uio) = (u_in.u_sq(), u_out.u_sq(), u_in.dot(&u_out));
            sphere_average(
                &axis,
                |n: &Vec3| {
                    let j = angular_current(kin, n);
                    let m = 0.5 * (j[0] * j[0] - j[1] * j[1] - j[2] * j[2] - j[3] * j[3]);
                    [m, -uio, -ui2, -uo2]
                },
                tol,
            )?
        }
        (Model::Dipole, Gauge::Coulomb) => {
            let axis = vo - vi;
            sphere_average(
                &axis,
                |n: &Vec3| {
                    let pi = transverse(n, &vi);
                    let po = transverse(n, &vo);
                    let d = po - pi;
                    [-0.5 * d.norm_squared(), po.dot(&pi), pi.norm_squared(), po.norm_squared()]
                },
                tol,
            )?
        }
    };
    let scale = r.value / (4.0 * PI * PI);
    let [m, g, bi, bo] = ang.value;
    let error = e2 * (r.error * ang.value[0].abs() + r.value * ang.error) / (4.0 * PI * PI);
    Ok(CorrectionExponent {
        total: Complex64::new(e2 * scale * m, 0.0),
        breakdown: Breakdown {
            gamma_cross: scale * g,
            b_ir_in: scale * bi,
            b_ir_out: scale * bo,
            counterterm_phase: None,
        },
        model: kin.model(),
        gauge,
        window: *w,
        error,
    })
}

/// Unrenormalized outgoing half-line exponent `(i e^2/2) int j Delta_F j` at `eps > 0`.
///
/// With `j_out(x) = theta(t) e^{-eps t} rho(x - v t) u`, the time integrals give
/// `1/(eps (eps + i u.k))`, so the exponent is
/// `(e^2 u^2 / 2) int d^3k rho^2 / ((2 pi)^3 2k) 1/(eps (eps + i u.k))`.
pub fn unren_halfline_exponent(
    u: &FourVelocity,
    eps: f64,
    e: f64,
    rho: &FormFactor,
    w: &CutoffWindow,
    tol: &Tolerance,
) -> Result<Complex64> {
    check_epsilon(eps)?;
    if e == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let beta = u.spatial().norm();
    let failed = AtomicBool::new(false);
    let radial = |k: f64| {
        let r = rho.eval(k);
        if r == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let inner = integrate(
            |c: f64| {
                let omega = k * (1.0 - beta * c);
                1.0 / (eps * Complex64::new(eps, omega))
            },
            -1.0,
            1.0,
            &[],
            tol,
        );
        match inner {
            Ok(est) => est.value * (k * r * r),
            Err(_) => {
                failed.store(true, Ordering::Relaxed);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let est = integrate(radial, w.lambda, w.big_lambda, &rho.breakpoints(), tol)?;
    if failed.load(Ordering::Relaxed) {
        return Err(Error::Quadrature { estimate: f64::NAN, tolerance: tol.rel });
    }
    Ok(est.value * (e * e * u.u_sq() / (16.0 * PI * PI)))
}

/// Phase contributed by the outgoing-leg counterterm, `+i e^2 u^2 z2(u) / (2 eps)`.
///
/// It is the `t -> infinity` limit of `exp(-i e^2 z2 u^2 (e^{-2 eps t} - 1)/(2 eps))`
/// and cancels the `1/eps` imaginary part of [`unren_halfline_exponent`].
pub fn counterterm_phase(
    u: &FourVelocity,
    eps: f64,
    e: f64,
    rho: &FormFactor,
    w: &CutoffWindow,
    tol: &Tolerance,
) -> Result<Complex64> {
    check_epsilon(eps)?;
    if e == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let z2 = counterterm_z2(u, rho, w, tol)?;
    Ok(Complex64::new(0.0, e * e * u.u_sq() * z2 / (2.0 * eps)))
}

/// Error bound of a product of two estimates, exposed for report assembly.
pub fn combined_error(a: &Estimate<f64>, b: &Estimate<f64>) -> f64 {
    product_error(a, b)
}
