//! The dipole current is not conserved; the FGB exponent is 3/2 of the Coulomb one.

use softqed::kinematics::{CutoffWindow, FormFactor, ScatteringKinematics, Vec3};
use softqed::quadrature::Tolerance;
use softqed::smatrix::gauge_compare;

fn main() -> softqed::Result<()> {
    let kin = ScatteringKinematics::dipole(Vec3::zeros(), Vec3::new(0.1, 0.0, 0.0), 1.0, 0.30282212)?;
    for lambda in [0.1, 0.01, 0.001] {
        let w = CutoffWindow::new(lambda, 1.0)?;
        let rho = FormFactor::sharp_window(lambda, 1.0)?;
        let c = gauge_compare(&kin, &rho, &w, &Tolerance::default())?;
        println!(
            "lambda {lambda:>6}: M_fgb {:.12e} M_coul {:.12e} ratio {:.12} max |kbar.j| {:.3e}",
            c.fgb.re,
            c.coulomb.re,
            c.log_ratio.unwrap_or(f64::NAN),
            c.conservation_residual
        );
    }
    Ok(())
}
