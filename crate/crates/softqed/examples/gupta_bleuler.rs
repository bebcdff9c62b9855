//! Physical FGB photons, their null directions and the map `T` onto Coulomb photons.

use num_complex::Complex64 as C;
use softqed::gauge::{gupta_residual, smearing_inner, t_map, MomentumGrid, PhotonSmearing};
use softqed::kinematics::Vec3;

fn main() -> softqed::Result<()> {
    let grid = MomentumGrid::new(vec![Vec3::new(0.3, 0.0, 0.4), Vec3::new(0.0, -0.2, 0.1)], vec![0.1, 0.2])?;
    let z = C::new(0.0, 0.0);
    // transverse photon at node 0, plus kbar h with h = 0.7 at both nodes
    let h = C::new(0.7, 0.0);
    let kb = |k: &Vec3| [h * k.norm(), h * k[0], h * k[1], h * k[2]];
    let (k0, k1) = (grid.ks[0], grid.ks[1]);
    let f = PhotonSmearing::fgb(
        grid.clone(),
        vec![
            {
                let n = kb(&k0);
                [n[0], n[1] + 0.4, n[2] + C::new(0.0, 1.0), n[3] - 0.3]
            },
            kb(&k1),
        ],
    )?;
    let null = PhotonSmearing::pure_gauge(grid.clone(), &[h, h])?;
    let bad = PhotonSmearing::fgb(grid, vec![[C::new(1.0, 0.0), z, z, z], [z; 4]])?;
    println!("physical: residual {:.1e}, <f,f> = {:.12}", gupta_residual(&f), smearing_inner(&f, &f)?.re);
    println!(
        "null:     residual {:.1e}, <n,n> = {:.1e}, <n,f> = {:.1e}",
        gupta_residual(&null),
        smearing_inner(&null, &null)?.norm(),
        smearing_inner(&null, &f)?.norm()
    );
    println!("T(null) is zero: {}", t_map(&null)?.values.iter().flatten().all(|x| *x == z));
    let tf = t_map(&f)?;
    println!("<Tf,Tf> = {:.12} (isometry)", smearing_inner(&tf, &tf)?.re);
    println!("unphysical input rejected: {}", t_map(&bad).is_err());
    Ok(())
}
