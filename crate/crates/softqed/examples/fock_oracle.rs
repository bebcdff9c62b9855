//! Coherent-state vacuum expectation on a truncated indefinite-metric Fock space,
//! compared with its Gaussian closed form for a spatial and a temporal mode.

use num_complex::Complex64 as C;
use softqed::fock::{
    displacement_closed_form, displacement_vacuum_expectation, ChannelSet, ModeGrid, TruncatedFockSpace,
};
use softqed::kinematics::{CutoffWindow, Vec3};

fn main() -> softqed::Result<()> {
    let w = CutoffWindow::new(0.1, 1.0)?;
    let ks = [Vec3::new(0.0, 0.0, 0.4)];
    let f = vec![[C::new(0.8, 0.1), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(0.6, -0.2)]];
    for (name, mu) in [("spatial", 3), ("temporal", 0)] {
        let grid = ModeGrid::new(&ks, &[0.05], &w, &ChannelSet::Lorentz(vec![mu]))?;
        for cap in [4, 8, 16] {
            let space = TruncatedFockSpace::new(grid.clone(), cap)?;
            let v = displacement_vacuum_expectation(&space, &f, 3.0, 1e-3)?;
            let exact = displacement_closed_form(&space, &f, 3.0)?;
            println!(
                "{name:>8} cap {cap:>2}: {:.15e} closed form {:.15e} deviation {:.2e} tail bound {:.2e}",
                v.value.re,
                exact.re,
                (v.value - exact).norm(),
                v.truncation_estimate
            );
        }
    }
    Ok(())
}
