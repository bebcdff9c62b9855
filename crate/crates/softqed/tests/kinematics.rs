use num_complex::Complex64 as C;
use softqed::kinematics::*;
use softqed::Error;

#[test]
fn gaussian_form_factor_matches_its_definition() {
    let f = FormFactor::gaussian(0.7).unwrap();
    for k in [0.0f64, 0.3, 1.0, 2.5] {
        let oracle = (-k * k / (2.0 * 0.49f64)).exp();
        assert!((f.eval(k) - oracle).abs() < 1e-15);
    }
    assert!(f.breakpoints().is_empty());
}

#[test]
fn sharp_window_is_the_closed_shell_indicator() {
    let f = FormFactor::sharp_window(0.1, 1.0).unwrap();
    assert_eq!(f.eval(0.0999), 0.0);
    assert_eq!(f.eval(0.1), 1.0);
    assert_eq!(f.eval(1.0), 1.0);
    assert_eq!(f.eval(1.0001), 0.0);
    assert_eq!(f.breakpoints(), vec![0.1, 1.0]);
}

#[test]
fn tabulated_form_factor_interpolates_linearly_and_vanishes_outside() {
    let f = FormFactor::tabulated(vec![0.0, 1.0, 3.0], vec![1.0, 0.5, 0.0]).unwrap();
    assert_eq!(f.eval(0.5), 0.75);
    assert_eq!(f.eval(2.0), 0.25);
    assert_eq!(f.eval(1.0), 0.5);
    assert_eq!(f.eval(3.5), 0.0);
    assert_eq!(f.breakpoints(), vec![0.0, 1.0, 3.0]);
}

#[test]
fn form_factor_constructors_reject_bad_parameters() {
    assert!(matches!(FormFactor::gaussian(0.0), Err(Error::InvalidInput(_))));
    assert!(FormFactor::gaussian(f64::NAN).is_err());
    assert!(FormFactor::sharp_window(1.0, 1.0).is_err());
    assert!(FormFactor::sharp_window(-0.1, 1.0).is_err());
    assert!(FormFactor::tabulated(vec![0.0], vec![1.0]).is_err());
    assert!(FormFactor::tabulated(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
    assert!(FormFactor::tabulated(vec![0.0, 1.0], vec![1.0, -1.0]).is_err());
    assert!(FormFactor::tabulated(vec![0.0, 1.0], vec![1.0]).is_err());
}

#[test]
fn four_velocity_requires_subluminal_speed() {
    assert!(FourVelocity::new(Vec3::new(0.6, 0.8, 0.0)).is_err());
    assert!(FourVelocity::new(Vec3::new(f64::INFINITY, 0.0, 0.0)).is_err());
    let u = FourVelocity::new(Vec3::new(0.6, 0.0, 0.0)).unwrap();
    assert!((u.u_sq() - 0.64).abs() < 1e-15);
    assert_eq!(u.components(), [1.0, 0.6, 0.0, 0.0]);
    assert_eq!(FourVelocity::rest().spatial(), Vec3::zeros());
}

#[test]
fn on_shell_dot_equals_minkowski_product_with_kbar() {
    let u = FourVelocity::new(Vec3::new(0.2, -0.3, 0.4)).unwrap();
    let k = Vec3::new(0.5, 0.1, -0.7);
    let direct = minkowski(&u.four(), &k_bar(&k)).re;
    assert!((on_shell_dot(&u, &k).unwrap() - direct).abs() < 1e-15);
    assert!(on_shell_dot(&u, &Vec3::zeros()).is_err());
    assert!((u.dot(&FourVelocity::rest()) - 1.0).abs() < 1e-15);
}

#[test]
fn transverse_projector_is_idempotent_and_orthogonal_to_k() {
    let k = Vec3::new(0.3, -1.2, 0.4);
    let v = Vec3::new(1.0, 2.0, -0.5);
    let p = transverse_project(&k, &v).unwrap();
    assert!(p.dot(&k).abs() < 1e-14);
    assert!((transverse_project(&k, &p).unwrap() - p).norm() < 1e-15);
    let vc = CVec3::new(C::new(1.0, 0.5), C::new(-0.2, 0.0), C::new(0.0, 1.0));
    let pc = transverse_project_c(&k, &vc).unwrap();
    assert!(complexify(&k).dot(&pc).norm() < 1e-14);
    assert!(transverse_project(&Vec3::zeros(), &v).is_err());
}

#[test]
fn polarization_basis_is_orthonormal_and_right_handed() {
    for k in [Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.3, -0.2, 0.9), Vec3::new(-5.0, 0.1, 0.0)] {
        let [e1, e2] = polarization_basis(&k).unwrap();
        let kh = k.normalize();
        assert!((e1.norm() - 1.0).abs() < 1e-15 && (e2.norm() - 1.0).abs() < 1e-15);
        assert!(e1.dot(&e2).abs() < 1e-15 && e1.dot(&kh).abs() < 1e-15 && e2.dot(&kh).abs() < 1e-15);
        assert!((e1.cross(&e2) - kh).norm() < 1e-14);
    }
}

#[test]
fn dipole_velocity_is_momentum_over_mass() {
    let u = velocity_from_momentum(&Vec3::new(0.2, 0.0, 0.1), 2.0).unwrap();
    assert_eq!(u.spatial(), Vec3::new(0.1, 0.0, 0.05));
    assert!(velocity_from_momentum(&Vec3::new(2.0, 0.0, 0.0), 2.0).is_err());
    assert!(velocity_from_momentum(&Vec3::zeros(), 0.0).is_err());
}

#[test]
fn legs_carry_opposite_signs() {
    assert_eq!(Leg::In.eta(), -1.0);
    assert_eq!(Leg::Out.eta(), 1.0);
    assert_eq!(LEGS, [Leg::In, Leg::Out]);
}

#[test]
fn kinematics_report_velocities_and_denominators() {
    let ui = FourVelocity::new(Vec3::new(0.1, 0.0, 0.0)).unwrap();
    let uo = FourVelocity::new(Vec3::new(0.0, 0.2, 0.0)).unwrap();
    let bn = ScatteringKinematics::bloch_nordsieck(ui, uo, 0.3).unwrap();
    let k = Vec3::new(0.0, 0.5, 0.0);
    assert_eq!(bn.model(), Model::BlochNordsieck);
    assert_eq!(bn.velocity(Leg::Out), uo);
    assert!((bn.denominator(Leg::Out, &k).unwrap() - 0.4).abs() < 1e-15);
    assert!(!bn.is_degenerate());
    assert_eq!(bn.with_charge(2.0).charge(), 2.0);

    let dip = ScatteringKinematics::dipole(Vec3::zeros(), Vec3::new(0.1, 0.0, 0.0), 1.0, 0.3).unwrap();
    assert_eq!(dip.model(), Model::Dipole);
    assert_eq!(dip.denominator(Leg::Out, &k).unwrap(), 0.5);
    assert!(ScatteringKinematics::dipole(Vec3::zeros(), Vec3::new(1.5, 0.0, 0.0), 1.0, 0.3).is_err());
    assert!(ScatteringKinematics::bloch_nordsieck(ui, ui, 0.3).unwrap().is_degenerate());
    assert!(ScatteringKinematics::bloch_nordsieck(ui, uo, f64::NAN).is_err());
}

#[test]
fn cutoff_window_and_epsilon_validation() {
    let w = CutoffWindow::new(0.1, 1.0).unwrap();
    assert!(w.contains(0.1) && w.contains(1.0) && !w.contains(1.01) && !w.contains(0.05));
    assert!(CutoffWindow::new(0.0, 1.0).is_err());
    assert!(CutoffWindow::new(1.0, 0.5).is_err());
    assert!(check_epsilon(1e-3).is_ok());
    assert!(check_epsilon(0.0).is_err());
    assert!(check_epsilon(-1.0).is_err());
}

#[test]
fn minkowski_products_use_mostly_minus_signature() {
    let a = [C::new(2.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 1.0), C::new(0.0, 0.0)];
    assert_eq!(minkowski(&a, &a), C::new(4.0, 0.0) - C::new(1.0, 0.0) - C::new(-1.0, 0.0));
    assert_eq!(minkowski_sesq(&a, &a), C::new(2.0, 0.0));
    assert_eq!(spatial(&a), CVec3::new(a[1], a[2], a[3]));
    assert_eq!(four(a[0], &spatial(&a)), a);
}
