//! The overlap `|(x+P) ∩ Δ|` across the trapezium `V`, in both orientations
//! of the rectangle, and the lattice scale at which the discrete version holds.

use perron_lab::geometry::Point2;
use perron_lab::triangle_cover::{discrete_overlap_scale, doubling_grid, verify_overlap, Construction1};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn worst(c: &Construction1, pts: &[Point2]) -> perron_lab::Result<(f64, Point2)> {
    let mut w = (f64::INFINITY, Point2::ORIGIN);
    for &x in pts {
        let r = verify_overlap(c, x)?;
        if r.measured / r.bound < w.0 {
            w = (r.measured / r.bound, x);
        }
    }
    Ok(w)
}

fn main() -> perron_lab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (near, far) in [(0.0, 1.0), (1.0, 2.0), (0.5, 5.0)] {
        let long = Construction1::with_far_c(near, far)?;
        let short = Construction1::new(far, near)?;
        let pts = long.sample_trapezium(200, &mut rng);
        let (wl, xl) = worst(&long, &pts)?;
        let (ws, xs) = worst(&short, &pts)?;
        println!("B, C at heights {near}, {far}: alpha = {:.4}", long.alpha);
        println!("  longer edge:  worst measured/bound {wl:.6} at ({:.3}, {:.3})", xl.x, xl.y);
        println!("  shorter edge: worst measured/bound {ws:.6} at ({:.3}, {:.3})", xs.x, xs.y);
        let sc = discrete_overlap_scale(&long, &pts, &doubling_grid(8.0, 1024.0))?;
        println!("  lattice scale {} (worst ratio {:.4}, threshold {:.4})", sc.delta, sc.worst_ratio, sc.threshold);
    }
    Ok(())
}
