//! Outgoing-leg ledger: the counterterm phase cancels the `1/eps` divergence and the
//! remainder tends to `-e^2 B_IR / 2` as `eps -> 0`.

use softqed::kinematics::{CutoffWindow, FormFactor, FourVelocity, Vec3};
use softqed::quadrature::Tolerance;
use softqed::smatrix::renormalization_ledger;

fn main() -> softqed::Result<()> {
    let w = CutoffWindow::new(1.0, 10.0)?;
    let rho = FormFactor::sharp_window(1.0, 10.0)?;
    let u = FourVelocity::new(Vec3::new(0.3, -0.5, 0.6))?;
    let ladder = [0.1, 0.05, 0.025, 0.0125];
    let l = renormalization_ledger(&u, 0.30282212, &ladder, &rho, &w, &Tolerance::tight())?;
    println!("{:>8} {:>26} {:>22} {:>26} {:>6}", "eps", "unrenormalized", "counterterm", "sum", "fit");
    for r in &l.rows {
        println!(
            "{:>8} {:>12.5e}{:+.5e}i {:>20.5e}i {:>12.5e}{:+.5e}i {:>6}",
            r.epsilon, r.unrenormalized.re, r.unrenormalized.im, r.counterterm.im, r.sum.re, r.sum.im, r.in_fit
        );
    }
    println!("extrapolated {:.12e}{:+.3e}i", l.extrapolated.re, l.extrapolated.im);
    println!("target       {:.12e}  relative error {:.2e}", l.target, l.relative_error);
    Ok(())
}
