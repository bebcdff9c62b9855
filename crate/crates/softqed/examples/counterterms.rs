//! Mass and wave-function counterterms of the half-line currents.

use softqed::kinematics::{CutoffWindow, FormFactor, FourVelocity, Vec3};
use softqed::quadrature::{b_ir, counterterm_z, counterterm_z1, counterterm_z2, counterterm_z_tilde, Tolerance};

fn main() -> softqed::Result<()> {
    let w = CutoffWindow::new(0.01, 1.0)?;
    let rho = FormFactor::sharp_window(w.lambda, w.big_lambda)?;
    let tol = Tolerance::tight();
    let z = counterterm_z(&rho, &w, &tol)?;
    println!("z = {z:.15e}, z~ = {:.15e}", counterterm_z_tilde(&rho, &w, &tol)?);
    println!("{:>6} {:>22} {:>22} {:>22}", "|v|", "z1", "z2", "B_IR");
    for beta in [0.0, 0.3, 0.6, 0.9] {
        let u = FourVelocity::new(Vec3::new(0.0, 0.0, beta))?;
        println!(
            "{beta:>6.2} {:>22.15e} {:>22.15e} {:>22.15e}",
            counterterm_z1(&u, &rho, &w, &tol)?,
            counterterm_z2(&u, &rho, &w, &tol)?,
            b_ir(&u, &rho, &w, &tol)?
        );
    }
    Ok(())
}
