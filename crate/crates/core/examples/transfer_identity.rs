//! Lattice averages of `φ_x(k, l) = f(S^k T^l x)` against ergodic averages
//! along the orbit of `S^k T^l x`.

use perron_lab::discrete_maximal::RectFamily;
use perron_lab::ergodic_torus::{transfer_check, ObservedFunction, TorusSystem};
use perron_lab::geometry::{Point2, TiltedRect};

fn main() -> perron_lab::Result<()> {
    let sys = TorusSystem::default();
    let fam = RectFamily::new(vec![
        TiltedRect::axis_aligned(-3.0, 3.0, -1.0, 1.0)?,
        TiltedRect::new(Point2::ORIGIN, 8.0, 1.5, 0.25f64.atan())?,
        TiltedRect::new(Point2::ORIGIN, 5.0, 2.0, 1.0f64.atan())?,
    ])?;
    for (name, f) in [
        ("cos 2πx", ObservedFunction::cos(1)),
        ("sin 6πx", ObservedFunction::sin(3)),
        ("1[0.1, 0.4)", ObservedFunction::interval(0.1, 0.4)?),
    ] {
        let chk = transfer_check(&sys, &f, &fam, 40, 0.123)?;
        println!("{name:>12}: {} evaluations, max error {:e}", chk.evaluations, chk.max_abs_error);
    }
    Ok(())
}
