//! Second-order exponent `e^2 M` of a Bloch-Nordsieck process and its growth as the
//! infrared cutoff is lowered.

use softqed::kinematics::{CutoffWindow, FormFactor, FourVelocity, Gauge, ScatteringKinematics, Vec3};
use softqed::quadrature::{m_exponent, Tolerance};

fn main() -> softqed::Result<()> {
    let e = (4.0 * std::f64::consts::PI / 137.036f64).sqrt();
    let kin =
        ScatteringKinematics::bloch_nordsieck(FourVelocity::rest(), FourVelocity::new(Vec3::new(0.3, -0.5, 0.6))?, e)?;
    println!("{:>8} {:>24} {:>24} {:>24}", "lambda", "e^2 M", "gamma_cross", "|exp(e^2 M)|");
    for lambda in [1e-1, 1e-2, 1e-3, 1e-4] {
        let w = CutoffWindow::new(lambda, 1.0)?;
        let rho = FormFactor::sharp_window(lambda, 1.0)?;
        let m = m_exponent(&kin, Gauge::Fgb, &rho, &w, &Tolerance::default())?;
        println!(
            "{lambda:>8.0e} {:>24.15e} {:>24.15e} {:>24.15e}",
            m.total.re,
            m.breakdown.gamma_cross,
            m.total.exp().norm()
        );
    }
    Ok(())
}
