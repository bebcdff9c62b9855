use num_complex::Complex64 as C;
use softqed::currents::*;
use softqed::kinematics::*;

fn bn() -> ScatteringKinematics {
    let ui = FourVelocity::new(Vec3::new(0.2, 0.0, -0.1)).unwrap();
    let uo = FourVelocity::new(Vec3::new(-0.3, 0.4, 0.2)).unwrap();
    ScatteringKinematics::bloch_nordsieck(ui, uo, 1.0).unwrap()
}

fn dipole() -> ScatteringKinematics {
    ScatteringKinematics::dipole(Vec3::new(0.1, 0.0, 0.0), Vec3::new(-0.2, 0.3, 0.1), 1.0, 1.0).unwrap()
}

fn window() -> CutoffWindow {
    CutoffWindow::new(0.1, 1.0).unwrap()
}

fn gauss() -> FormFactor {
    FormFactor::gaussian(0.7).unwrap()
}

fn simpson_c<F: Fn(f64) -> C>(f: F, a: f64, b: f64, n: usize) -> C {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + h * i as f64) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * (h / 3.0)
}

#[test]
fn fourier_transform_matches_direct_time_integration() {
    // j_out(t) = theta(t) e^{-eps t} rho e^{-i k.v t} u, j_in with theta(-t) e^{eps t}
    let eps = 0.4;
    let spec = CurrentSpec::new(bn(), Gauge::Fgb, gauss(), eps).unwrap();
    let (k, k0) = (Vec3::new(0.3, -0.2, 0.5), 0.45);
    let r = gauss().eval(k.norm());
    let mut oracle = [C::new(0.0, 0.0); 4];
    for (leg, sign) in [(Leg::Out, 1.0), (Leg::In, -1.0)] {
        let u = bn().velocity(leg);
        let w = k0 - u.spatial().dot(&k);
        let t_int = simpson_c(|s| (C::new(-eps, sign * w) * s).exp(), 0.0, 100.0, 200_000);
        for (mu, c) in u.components().iter().enumerate() {
            oracle[mu] += t_int * (r * c);
        }
    }
    let got = current_fourier(&spec, &k, k0).unwrap();
    for mu in 0..4 {
        assert!((got[mu] - oracle[mu]).norm() < 1e-9, "mu {mu}: {} vs {}", got[mu], oracle[mu]);
    }
}

#[test]
fn bloch_nordsieck_current_is_conserved_on_shell() {
    let spec = CurrentSpec::adiabatic(bn(), Gauge::Fgb, gauss());
    for k in [Vec3::new(0.3, -0.2, 0.5), Vec3::new(0.0, 0.9, 0.0), Vec3::new(-0.1, 0.1, 0.1)] {
        let j = current_fourier(&spec, &k, k.norm()).unwrap();
        let scale = j.iter().map(|x| x.norm()).fold(0.0, f64::max) * k.norm();
        assert!(conservation_residual(&spec, &k).unwrap().norm() < 1e-15 * scale);
        assert_eq!(current_divergence(&spec, &k, 1.0).unwrap(), C::new(0.0, 0.0));
    }
}

#[test]
fn dipole_current_violates_conservation_by_the_momentum_jump() {
    let spec = CurrentSpec::adiabatic(dipole(), Gauge::Fgb, gauss());
    let k = Vec3::new(0.3, -0.2, 0.5);
    let dp = Vec3::new(-0.3, 0.3, 0.1);
    let oracle = C::new(0.0, -gauss().eval(k.norm()) * k.normalize().dot(&dp));
    assert!((conservation_residual(&spec, &k).unwrap() - oracle).norm() < 1e-15);
    // k~.j~ = i xi~
    let xi = divergence_fourier(&spec, &k).unwrap();
    assert!((C::new(0.0, 1.0) * xi - oracle).norm() < 1e-15);
    let late = current_divergence(&spec, &k, 2.0).unwrap();
    assert!((late - C::new(0.0, k.dot(&Vec3::new(-0.2, 0.3, 0.1)) * gauss().eval(k.norm()))).norm() < 1e-15);
    let early = current_divergence(&spec, &k, -2.0).unwrap();
    assert!((early - C::new(0.0, k.dot(&Vec3::new(0.1, 0.0, 0.0)) * gauss().eval(k.norm()))).norm() < 1e-15);
    assert!(current_divergence(&spec, &k, 0.0).is_err());
}

#[test]
fn coulomb_current_is_the_transverse_spatial_part() {
    let k = Vec3::new(0.3, -0.2, 0.5);
    let f = current_fourier(&CurrentSpec::adiabatic(bn(), Gauge::Fgb, gauss()), &k, k.norm()).unwrap();
    let c = current_fourier(&CurrentSpec::adiabatic(bn(), Gauge::Coulomb, gauss()), &k, k.norm()).unwrap();
    assert_eq!(c[0], C::new(0.0, 0.0));
    let pc = transverse_project_c(&k, &spatial(&f)).unwrap();
    assert!((spatial(&c) - pc).norm() < 1e-15);
    // |j0|^2 - |j|^2 = -|P j|^2 for a conserved current
    let lhs = f[0].norm_sqr() - spatial(&f).norm_squared();
    assert!((lhs + pc.norm_squared()).abs() < 1e-14 * spatial(&f).norm_squared());
}

#[test]
fn adiabatic_limit_needs_an_off_shell_point_at_zero_eps() {
    let spec = CurrentSpec::adiabatic(bn(), Gauge::Fgb, gauss());
    let k = Vec3::new(0.0, 0.0, 0.5);
    let uo = bn().velocity(Leg::Out);
    assert!(current_fourier(&spec, &k, uo.spatial().dot(&k)).is_err());
    assert!(current_fourier(&spec, &Vec3::zeros(), 0.3).is_err());
    assert!(CurrentSpec::new(bn(), Gauge::Fgb, gauss(), -1.0).is_err());
}

#[test]
fn regularized_coherence_tends_to_the_asymptotic_one() {
    let w = window();
    let k = Vec3::new(0.3, -0.2, 0.5);
    for gauge in [Gauge::Fgb, Gauge::Coulomb] {
        let spec = CurrentSpec::adiabatic(bn(), gauge, gauss());
        for (leg, t) in [(Leg::Out, 4000.0), (Leg::In, -4000.0)] {
            let eps = 1e-6;
            let reg = coherence_regularized(&spec, leg, &k, t, eps, &w).unwrap();
            let asym = coherence_asymptotic(&spec, leg, &k, &w).unwrap();
            // the oscillating remainder e^{(i w -+ eps) t}/a survives at finite t
            let omega = on_shell_frequency(&bn(), leg, &k).unwrap();
            let a = C::new(-leg.eta() * eps, omega);
            let tail = (a * t).exp() / a
                * (gauss().eval(k.norm()) / ((2.0 * std::f64::consts::PI).powf(1.5) * (2.0 * k.norm()).sqrt()));
            let u = match gauge {
                Gauge::Fgb => bn().velocity(leg).four(),
                Gauge::Coulomb => {
                    four(C::new(0.0, 0.0), &complexify(&transverse_project(&k, &bn().velocity(leg).spatial()).unwrap()))
                }
            };
            for mu in 0..4 {
                let predicted = asym[mu] + tail * u[mu];
                assert!((reg[mu] - predicted).norm() < 1e-5 * asym[mu].norm().max(1e-3), "{leg:?} {mu}");
            }
            assert!(coherence_regularized(&spec, leg, &k, 0.0, eps, &w).unwrap().iter().all(|x| x.norm() == 0.0));
        }
    }
}

#[test]
fn coherence_functions_respect_the_window() {
    let spec = CurrentSpec::adiabatic(bn(), Gauge::Fgb, gauss());
    assert!(coherence_asymptotic(&spec, Leg::Out, &Vec3::new(0.0, 0.0, 2.0), &window()).is_err());
    assert!(coherence_regularized(&spec, Leg::Out, &Vec3::new(0.0, 0.0, 0.05), 1.0, 0.1, &window()).is_err());
}

#[test]
fn asymptotic_coherence_has_the_soft_pole() {
    let spec = CurrentSpec::adiabatic(bn(), Gauge::Fgb, gauss());
    let k = Vec3::new(0.3, -0.2, 0.5);
    let f = coherence_asymptotic(&spec, Leg::Out, &k, &window()).unwrap();
    let u = bn().velocity(Leg::Out);
    let norm = (2.0 * std::f64::consts::PI).powf(1.5) * (2.0 * k.norm()).sqrt();
    let c = gauss().eval(k.norm()) / (norm * on_shell_dot(&u, &k).unwrap());
    for (mu, x) in u.components().iter().enumerate() {
        assert!((f[mu] - C::new(0.0, c * x)).norm() < 1e-16);
    }
    // FGB coherence functions of a conserved process are physical: kbar.F = 0
    let fi = coherence_asymptotic(&spec, Leg::In, &k, &window()).unwrap();
    let diff: FourVector = std::array::from_fn(|mu| fi[mu] - f[mu]);
    assert!(minkowski(&k_bar(&k), &diff).norm() < 1e-15);
}
