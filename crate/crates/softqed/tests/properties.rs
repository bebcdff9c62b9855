use num_complex::Complex64 as C;
use proptest::prelude::*;
use softqed::gauge::*;
use softqed::kinematics::*;
use softqed::quadrature::*;
use softqed::smatrix::*;

fn tol() -> Tolerance {
    Tolerance::new(1e-13, 1e-11)
}

/// Spatial velocity with `|v| <= 0.85`.
fn velocity() -> impl Strategy<Value = FourVelocity> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, 0.0f64..0.85).prop_filter_map("direction", |(x, y, z, s)| {
        let d = Vec3::new(x, y, z);
        (d.norm() > 1e-3).then(|| FourVelocity::new(d.normalize() * s).unwrap())
    })
}

fn momentum(lo: f64, hi: f64) -> impl Strategy<Value = Vec3> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, lo..hi).prop_filter_map("direction", |(x, y, z, r)| {
        let d = Vec3::new(x, y, z);
        (d.norm() > 1e-3).then(|| d.normalize() * r)
    })
}

fn cplx() -> impl Strategy<Value = C> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| C::new(a, b))
}

fn cvec() -> impl Strategy<Value = CVec3> {
    (cplx(), cplx(), cplx()).prop_map(|(a, b, c)| CVec3::new(a, b, c))
}

fn window() -> impl Strategy<Value = (CutoffWindow, FormFactor)> {
    (0.01f64..0.5, 1.5f64..20.0, prop::bool::ANY).prop_map(|(l, big, sharp)| {
        let w = CutoffWindow::new(l, big).unwrap();
        let rho =
            if sharp { FormFactor::sharp_window(l, big).unwrap() } else { FormFactor::gaussian(0.5 * big).unwrap() };
        (w, rho)
    })
}

fn physical_on(grid: &MomentumGrid, v: [CVec3; 2], h: [C; 2]) -> PhotonSmearing {
    let values = grid
        .ks
        .iter()
        .zip(v.iter().zip(h))
        .map(|(k, (v, h))| {
            let t = transverse_project_c(k, v).unwrap();
            let kb = k_bar(k);
            [kb[0] * h, t[0] + kb[1] * h, t[1] + kb[2] * h, t[2] + kb[3] * h]
        })
        .collect();
    PhotonSmearing::fgb(grid.clone(), values).unwrap()
}

/// Two physical smearings on one two-node grid: transverse parts plus `kbar h`.
fn physical_pair() -> impl Strategy<Value = (PhotonSmearing, PhotonSmearing)> {
    (momentum(0.2, 0.9), momentum(0.2, 0.9), [cvec(), cvec(), cvec(), cvec()], [cplx(), cplx(), cplx(), cplx()])
        .prop_filter_map("distinct nodes", |(k1, k2, v, h)| {
            let grid = MomentumGrid::new(vec![k1, k2], vec![0.04, 0.07]).ok()?;
            Some((physical_on(&grid, [v[0], v[1]], [h[0], h[1]]), physical_on(&grid, [v[2], v[3]], [h[2], h[3]])))
        })
}

fn physical() -> impl Strategy<Value = PhotonSmearing> {
    physical_pair().prop_map(|(f, _)| f)
}

fn bn_window() -> CutoffWindow {
    CutoffWindow::new(0.1, 1.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn counterterm_ratios_are_three_halves((w, rho) in window(), u in velocity()) {
        let z = counterterm_z(&rho, &w, &tol()).unwrap();
        let zt = counterterm_z_tilde(&rho, &w, &tol()).unwrap();
        let z1 = counterterm_z1(&u, &rho, &w, &tol()).unwrap();
        let z2 = counterterm_z2(&u, &rho, &w, &tol()).unwrap();
        prop_assert!(z > 0.0 && z1 >= z * (1.0 - 1e-12));
        prop_assert!((zt / z - 1.5).abs() < 1e-14);
        prop_assert!((z2 / z1 - 1.5).abs() < 1e-14);
        // the velocity factor is <1/(1 - beta c)> = artanh(beta)/beta
        let beta = u.spatial().norm();
        let mean = if beta == 0.0 { 1.0 } else { beta.atanh() / beta };
        prop_assert!((z1 / z - mean).abs() < 1e-10 * mean);
    }

    #[test]
    fn infrared_self_term_ignores_the_velocity((w, rho) in window(), a in velocity(), b in velocity()) {
        let ba = b_ir(&a, &rho, &w, &tol()).unwrap();
        let bb = b_ir(&b, &rho, &w, &tol()).unwrap();
        prop_assert!(ba < 0.0);
        prop_assert!((ba - bb).abs() < 1e-10 * ba.abs());
    }

    #[test]
    fn cross_term_is_symmetric(a in velocity(), b in velocity()) {
        let (w, rho) = (bn_window(), FormFactor::gaussian(0.7).unwrap());
        let ab = gamma_cross(&a, &b, &rho, &w, &tol()).unwrap();
        let ba = gamma_cross(&b, &a, &rho, &w, &tol()).unwrap();
        prop_assert_eq!(ab, ba);
        // Gamma(u, u) = B_IR(u)
        let self_term = gamma_cross(&a, &a, &rho, &w, &tol()).unwrap();
        let bir = b_ir(&a, &rho, &w, &tol()).unwrap();
        prop_assert!((self_term - bir).abs() < 1e-9 * bir.abs());
    }

    #[test]
    fn bloch_nordsieck_exponent_is_gauge_independent(a in velocity(), b in velocity(), e in 0.1f64..2.0) {
        let kin = ScatteringKinematics::bloch_nordsieck(a, b, e).unwrap();
        let rho = FormFactor::gaussian(0.7).unwrap();
        let f = m_exponent(&kin, Gauge::Fgb, &rho, &bn_window(), &tol()).unwrap().total;
        let c = m_exponent(&kin, Gauge::Coulomb, &rho, &bn_window(), &tol()).unwrap().total;
        prop_assert!(f.re <= 1e-15 && c.re <= 1e-15);
        prop_assert!((f - c).norm() < 1e-9 * f.norm().max(1e-12));
    }

    #[test]
    fn degenerate_kinematics_have_no_correction(a in velocity(), gauge in prop_oneof![Just(Gauge::Fgb), Just(Gauge::Coulomb)]) {
        let kin = ScatteringKinematics::bloch_nordsieck(a, a, 1.0).unwrap();
        let m = m_exponent(&kin, gauge, &FormFactor::gaussian(0.7).unwrap(), &bn_window(), &tol()).unwrap().total;
        prop_assert!(m.norm() < 1e-13);
    }

    #[test]
    fn dipole_log_ratio_is_three_halves(p in momentum(0.01, 0.5), q in momentum(0.01, 0.5), e in 0.1f64..2.0) {
        let kin = ScatteringKinematics::dipole(p, q, 1.0, e).unwrap();
        let c = gauge_compare(&kin, &FormFactor::gaussian(0.7).unwrap(), &bn_window(), &tol()).unwrap();
        prop_assert!((c.log_ratio.unwrap() - 1.5).abs() < 1e-9);
    }

    #[test]
    fn transverse_projector_is_an_orthogonal_projection(k in momentum(0.1, 5.0), v in cvec(), u in cvec()) {
        let p = transverse_project_c(&k, &v).unwrap();
        prop_assert!((transverse_project_c(&k, &p).unwrap() - p).norm() < 1e-15);
        prop_assert!(complexify(&k.normalize()).dot(&p).norm() < 1e-15);
        // self-adjoint: <u, P v> = <P u, v>
        let pu = transverse_project_c(&k, &u).unwrap();
        prop_assert!((u.dotc(&p) - pu.dotc(&v)).norm() < 1e-14);
    }

    #[test]
    fn t_map_is_an_isometry_blind_to_null_parts((f, g) in physical_pair(), h in cplx()) {
        let (tf, tg) = (t_map(&f).unwrap(), t_map(&g).unwrap());
        let a = smearing_inner(&f, &g).unwrap();
        prop_assert!((a - smearing_inner(&tf, &tg).unwrap()).norm() < 1e-14);
        let null = PhotonSmearing::pure_gauge(f.grid.clone(), &[h, -h]).unwrap();
        let shifted = PhotonSmearing::fgb(
            f.grid.clone(),
            f.values.iter().zip(&null.values).map(|(x, y)| std::array::from_fn(|mu| x[mu] + y[mu])).collect(),
        ).unwrap();
        let ts = t_map(&shifted).unwrap();
        for (x, y) in ts.values.iter().zip(&tf.values) {
            prop_assert!((0..4).all(|mu| (x[mu] - y[mu]).norm() < 1e-14));
        }
    }

    #[test]
    fn emission_factor_is_antilinear(f in physical(), s in cplx(), a in velocity(), b in velocity()) {
        let kin = ScatteringKinematics::bloch_nordsieck(a, b, 0.7).unwrap();
        let rho = FormFactor::gaussian(0.7).unwrap();
        let base = emission_factor(&kin, Gauge::Fgb, &rho, &bn_window(), &f).unwrap();
        let scaled = PhotonSmearing::fgb(f.grid.clone(), f.values.iter().map(|v| v.map(|x| x * s)).collect()).unwrap();
        let got = emission_factor(&kin, Gauge::Fgb, &rho, &bn_window(), &scaled).unwrap();
        prop_assert!((got - base * s.conj()).norm() < 1e-14 * base.norm().max(1e-3));
    }

    #[test]
    fn fgb_emission_equals_coulomb_after_t(f in physical(), a in velocity(), b in velocity()) {
        let kin = ScatteringKinematics::bloch_nordsieck(a, b, 1.0).unwrap();
        let rho = FormFactor::gaussian(0.7).unwrap();
        let fgb = emission_factor(&kin, Gauge::Fgb, &rho, &bn_window(), &f).unwrap();
        let coul = emission_factor(&kin, Gauge::Coulomb, &rho, &bn_window(), &t_map(&f).unwrap()).unwrap();
        prop_assert!((fgb - coul).norm() < 1e-13 * fgb.norm().max(1e-3));
    }
}
