//! The Bloch-Nordsieck current is conserved, so FGB and Coulomb exponents agree.

use softqed::kinematics::{CutoffWindow, FormFactor, FourVelocity, ScatteringKinematics, Vec3};
use softqed::quadrature::Tolerance;
use softqed::smatrix::gauge_compare;

fn main() -> softqed::Result<()> {
    let w = CutoffWindow::new(0.05, 2.0)?;
    let rho = FormFactor::gaussian(1.0)?;
    for (vi, vo) in
        [([0.0, 0.0, 0.0], [0.3, -0.5, 0.6]), ([0.5, 0.0, 0.0], [-0.5, 0.0, 0.0]), ([0.1, 0.2, 0.3], [0.0, 0.8, 0.0])]
    {
        let ui = FourVelocity::new(Vec3::from(vi))?;
        let uo = FourVelocity::new(Vec3::from(vo))?;
        let c = gauge_compare(&ScatteringKinematics::bloch_nordsieck(ui, uo, 1.0)?, &rho, &w, &Tolerance::tight())?;
        println!(
            "v_in {vi:?} v_out {vo:?}: M_fgb {:.15e} M_coul {:.15e} |diff| {:.2e} residual {:.1e}",
            c.fgb.re,
            c.coulomb.re,
            (c.fgb - c.coulomb).norm(),
            c.conservation_residual
        );
    }
    Ok(())
}
