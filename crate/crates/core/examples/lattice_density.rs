//! `#(δE ∩ Z²) / |δE|` for a few convex shapes as `δ` doubles, and the
//! rectangle sandwich for one tilted rectangle.

use perron_lab::geometry::{ConvexPolygon, Point2, TiltedRect};
use perron_lab::lattice::{check_density_ratio, check_process_ratio};

fn main() -> perron_lab::Result<()> {
    let deltas = [12.5, 25.0, 50.0, 100.0, 200.0, 400.0];
    let shapes = [
        ("triangle", ConvexPolygon::triangle(Point2::ORIGIN, Point2::new(1.0, 0.0), Point2::new(0.0, 1.0))?),
        ("hexagon", ConvexPolygon::regular(Point2::ORIGIN, 1.0, 6, 0.0)?),
    ];
    for (name, p) in &shapes {
        let scan = check_density_ratio(p, &deltas)?;
        for s in &scan.samples {
            println!("{name:>8} delta {:>6}: {:>7} points, area {:>10.1}, ratio {:.5}", s.delta, s.count, s.area, s.ratio);
        }
        println!("{name:>8} envelope holds from delta = {:?}", scan.delta0);
    }

    let r = TiltedRect::from_axes(Point2::new(0.3, -0.2), 40.0, 3.0, (1.0f64 / 3.0).atan())?;
    let pr = check_process_ratio(&r);
    println!("rect 6 x 80 at slope 1/3: ratio {:.4}, sandwich {:?}", pr.ratio, pr.sandwich);
    Ok(())
}
