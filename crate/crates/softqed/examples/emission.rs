//! Single-photon emission amplitude in both gauges, checked against the Fock oracle.

use num_complex::Complex64 as C;
use softqed::gauge::{t_map, MomentumGrid, PhotonSmearing};
use softqed::kinematics::{CutoffWindow, FormFactor, FourVelocity, Gauge, ScatteringKinematics, Vec3};
use softqed::quadrature::Tolerance;
use softqed::smatrix::full_amplitude;

fn main() -> softqed::Result<()> {
    let w = CutoffWindow::new(0.1, 1.0)?;
    let rho = FormFactor::sharp_window(0.1, 1.0)?;
    let kin = ScatteringKinematics::bloch_nordsieck(
        FourVelocity::rest(),
        FourVelocity::new(Vec3::new(0.3, -0.5, 0.6))?,
        1.2,
    )?;
    let grid = MomentumGrid::new(vec![Vec3::new(0.0, 0.0, 0.4)], vec![0.05])?;
    // transverse polarization plus a pure-gauge admixture
    let h = C::new(0.3, 0.0);
    let photon = PhotonSmearing::fgb(grid, vec![[h * 0.4, C::new(0.5, 0.0), C::new(0.0, 0.2), h * 0.4]])?;
    for (gauge, p) in [(Gauge::Fgb, photon.clone()), (Gauge::Coulomb, t_map(&photon)?)] {
        let rep = full_amplitude(&kin, gauge, &rho, &w, &[p], &Tolerance::default(), Some(6))?;
        let o = rep.oracle.expect("oracle requested");
        println!(
            "{gauge:?}: factor {:.12e}{:+.12e}i total {:.12e}{:+.12e}i oracle deviation {:.2e} ({} states)",
            rep.emission_factors[0].re, rep.emission_factors[0].im, rep.total.re, rep.total.im, o.deviation, o.states
        );
    }
    Ok(())
}
