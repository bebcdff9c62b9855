use num_complex::Complex64 as C;
use softqed::currents::CurrentSpec;
use softqed::gauge::*;
use softqed::kinematics::*;

const Z: C = C::new(0.0, 0.0);

fn grid() -> MomentumGrid {
    MomentumGrid::new(
        vec![Vec3::new(0.3, 0.0, 0.2), Vec3::new(0.0, -0.4, 0.1), Vec3::new(0.1, 0.5, -0.3)],
        vec![0.3, 0.2, 0.1],
    )
    .unwrap()
}

/// Transverse part `t` plus null part `kbar h` at each node.
fn physical(g: &MomentumGrid, seed: f64) -> PhotonSmearing {
    let values =
        g.ks.iter()
            .enumerate()
            .map(|(i, k)| {
                let x = seed + i as f64;
                let v = CVec3::new(C::new(x.sin(), 0.3), C::new(0.2, x.cos()), C::new(-0.5, 0.1 * x));
                let t = transverse_project_c(k, &v).unwrap();
                let h = C::new(0.2 * x.cos(), -0.1);
                let kb = k_bar(k);
                [kb[0] * h, t[0] + kb[1] * h, t[1] + kb[2] * h, t[2] + kb[3] * h]
            })
            .collect();
    PhotonSmearing::fgb(g.clone(), values).unwrap()
}

#[test]
fn grid_validation() {
    assert!(MomentumGrid::new(vec![Vec3::zeros()], vec![1.0]).is_err());
    assert!(MomentumGrid::new(vec![Vec3::x()], vec![0.0]).is_err());
    assert!(MomentumGrid::new(vec![Vec3::x()], vec![1.0, 2.0]).is_err());
    assert!(PhotonSmearing::fgb(grid(), vec![[Z; 4]]).is_err());
    assert_eq!(grid().len(), 3);
    assert!(!grid().is_empty());
}

#[test]
fn subsidiary_condition_separates_physical_smearings() {
    let f = physical(&grid(), 0.4);
    assert!(f.is_physical());
    assert!(gupta_residual(&f) < 1e-15);
    let mut bad = f.clone();
    bad.values[1][0] += C::new(0.1, 0.0);
    assert!(!bad.is_physical());
    assert!((gupta_residual(&bad) - 0.1 * grid().ks[1].norm()).abs() < 1e-15);
    assert!(t_map(&bad).is_err());
}

#[test]
fn null_smearings_are_orthogonal_to_physical_ones_and_map_to_zero() {
    let h = [C::new(0.3, 0.1), C::new(-1.0, 0.0), C::new(0.0, 2.0)];
    let null = PhotonSmearing::pure_gauge(grid(), &h).unwrap();
    assert!(null.is_null() && null.is_physical());
    assert!(smearing_inner(&null, &null).unwrap().norm() < 1e-15);
    assert!(smearing_inner(&null, &physical(&grid(), 1.0)).unwrap().norm() < 1e-15);
    let image = t_map(&null).unwrap();
    assert_eq!(image.gauge, Gauge::Coulomb);
    assert!(image.values.iter().flatten().all(|x| *x == Z));
    assert!(!physical(&grid(), 0.2).is_null());
}

#[test]
fn t_map_keeps_the_transverse_part_and_preserves_the_form() {
    let f = physical(&grid(), 0.7);
    let g = physical(&grid(), -1.3);
    let (tf, tg) = (t_map(&f).unwrap(), t_map(&g).unwrap());
    for ((k, v), t) in grid().ks.iter().zip(&f.values).zip(&tf.values) {
        assert_eq!(t[0], Z);
        let p = transverse_project_c(k, &spatial(v)).unwrap();
        assert!((spatial(t) - p).norm() < 1e-15);
    }
    let a = smearing_inner(&f, &g).unwrap();
    let b = smearing_inner(&tf, &tg).unwrap();
    assert!((a - b).norm() < 1e-15 * a.norm().max(1.0));
    assert!(smearing_inner(&tf, &tf).unwrap().re > 0.0);
    assert_eq!(t_map(&tf).unwrap(), tf);
}

#[test]
fn coulomb_constructor_requires_transversality() {
    let g = MomentumGrid::new(vec![Vec3::z()], vec![1.0]).unwrap();
    assert!(PhotonSmearing::coulomb(g.clone(), vec![[C::new(1.0, 0.0), Z, Z]]).is_ok());
    assert!(PhotonSmearing::coulomb(g, vec![[Z, Z, C::new(1.0, 0.0)]]).is_err());
}

#[test]
fn product_state_form_is_a_permanent() {
    let g = grid();
    let f: Vec<PhotonSmearing> = (0..4).map(|i| physical(&g, i as f64 * 0.9)).collect();
    let a = PhotonState::product(vec![f[0].clone(), f[1].clone()]);
    let b = PhotonState::product(vec![f[2].clone(), f[3].clone()]);
    let ip = |x: &PhotonSmearing, y: &PhotonSmearing| smearing_inner(x, y).unwrap();
    let oracle = ip(&f[0], &f[2]) * ip(&f[1], &f[3]) + ip(&f[0], &f[3]) * ip(&f[1], &f[2]);
    assert!((a.inner(&b).unwrap() - oracle).norm() < 1e-15);
    assert_eq!(a.inner(&PhotonState::vacuum()).unwrap(), Z);
    assert_eq!(PhotonState::vacuum().inner(&PhotonState::vacuum()).unwrap(), C::new(1.0, 0.0));
    // factor-wise T keeps the two-photon form
    let ta = t_map_state(&a).unwrap();
    let tb = t_map_state(&b).unwrap();
    assert!((ta.inner(&tb).unwrap() - oracle).norm() < 1e-14 * oracle.norm());
}

#[test]
fn gauge_fixed_pairing_isolates_the_divergence() {
    let w = FormFactor::gaussian(0.7).unwrap();
    let ui = FourVelocity::new(Vec3::new(0.2, 0.0, -0.1)).unwrap();
    let uo = FourVelocity::new(Vec3::new(-0.3, 0.4, 0.2)).unwrap();
    let bn = CurrentSpec::adiabatic(ScatteringKinematics::bloch_nordsieck(ui, uo, 1.0).unwrap(), Gauge::Fgb, w.clone());
    let dip = CurrentSpec::adiabatic(
        ScatteringKinematics::dipole(Vec3::new(0.1, 0.0, 0.0), Vec3::new(-0.2, 0.3, 0.1), 1.0, 1.0).unwrap(),
        Gauge::Fgb,
        w,
    );
    let mut f = physical(&grid(), 0.5);
    f.values[0][0] += C::new(0.2, -0.1);
    for spec in [&bn, &dip] {
        let p = gauge_fixed_pairing(spec, &f).unwrap();
        assert!((p.full - p.gauge_fixed - p.longitudinal).norm() < 1e-15);
        assert!((p.longitudinal - p.divergence_pairing).norm() < 1e-15);
    }
    assert!(gauge_fixed_pairing(&bn, &f).unwrap().longitudinal.norm() < 1e-15);
    assert!(gauge_fixed_pairing(&dip, &f).unwrap().longitudinal.norm() > 1e-3);
}
