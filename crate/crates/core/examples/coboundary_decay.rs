//! Averages of `g − g∘T` over growing rectangles shrink like the share of
//! lattice points that move under the vertical shift.

use perron_lab::ergodic_torus::{coboundary_decay, ObservedFunction, TorusSystem};
use perron_lab::geometry::{Point2, TiltedRect};

fn main() -> perron_lab::Result<()> {
    let sys = TorusSystem::default();
    let g = ObservedFunction::Trig {
        constant: 0.0,
        terms: vec![(1, 1.0, 0.0), (2, 0.0, 0.5)],
    };
    for l in [10.0, 20.0, 40.0, 80.0, 160.0] {
        let r = TiltedRect::from_axes(Point2::ORIGIN, 2.0 * l, 0.5 * l, 0.3)?;
        let d = coboundary_decay(&sys, &g, &r, 0.4)?;
        println!(
            "l = {l:>5}: |M_R(g - g∘T)| = {:.3e} <= {:.3e}  ({} of {} points move)",
            d.measured, d.bound, d.symmetric_difference, d.count
        );
    }
    Ok(())
}
