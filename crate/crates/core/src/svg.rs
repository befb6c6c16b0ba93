//! Static SVG figures on a fixed `1000 × 1000` view box. The world-to-view
//! affine map is written into each file's `<metadata>` element.

use std::fmt::Write;

use crate::geometry::{BoundingBox, ConvexPolygon, Point2};
use crate::perron_tree::PerronBlock;
use crate::triangle_cover::Construction1;

pub const VIEW: f64 = 1000.0;
const MARGIN: f64 = 40.0;

/// Fill and stroke of one shape.
#[derive(Debug, Clone, Copy)]
pub struct Style {
    pub fill: &'static str,
    pub fill_opacity: f64,
    pub stroke: &'static str,
    pub stroke_width: f64,
}

impl Style {
    pub const fn outline(stroke: &'static str) -> Self {
        Self {
            fill: "none",
            fill_opacity: 0.0,
            stroke,
            stroke_width: 1.5,
        }
    }

    pub const fn filled(fill: &'static str, opacity: f64) -> Self {
        Self {
            fill,
            fill_opacity: opacity,
            stroke: fill,
            stroke_width: 0.5,
        }
    }

    pub const fn hatched() -> Self {
        Self {
            fill: "url(#hatch)",
            fill_opacity: 1.0,
            stroke: "#b03030",
            stroke_width: 0.8,
        }
    }
}

/// Uniform scaling plus translation, `y` flipped.
#[derive(Debug, Clone, Copy)]
pub struct ViewMap {
    pub scale: f64,
    pub tx: f64,
    pub ty: f64,
}

impl ViewMap {
    pub fn fit(world: BoundingBox) -> Self {
        let w = world.width().max(1e-12);
        let h = world.height().max(1e-12);
        let scale = (VIEW - 2.0 * MARGIN) / w.max(h);
        let tx = MARGIN + 0.5 * ((VIEW - 2.0 * MARGIN) - scale * w) - scale * world.min.x;
        let ty = MARGIN + 0.5 * ((VIEW - 2.0 * MARGIN) - scale * h) + scale * world.max.y;
        Self { scale, tx, ty }
    }

    pub fn apply(&self, p: Point2) -> (f64, f64) {
        (self.tx + self.scale * p.x, self.ty - self.scale * p.y)
    }
}

pub struct Canvas {
    map: ViewMap,
    body: String,
}

impl Canvas {
    pub fn new(world: BoundingBox) -> Self {
        Self {
            map: ViewMap::fit(world),
            body: String::new(),
        }
    }

    pub fn polygon(&mut self, p: &ConvexPolygon, style: Style) {
        let pts: Vec<String> = p
            .vertices()
            .iter()
            .map(|&v| {
                let (x, y) = self.map.apply(v);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            self.body,
            r#"  <polygon points="{}" fill="{}" fill-opacity="{}" stroke="{}" stroke-width="{}"/>"#,
            pts.join(" "),
            style.fill,
            style.fill_opacity,
            style.stroke,
            style.stroke_width
        );
    }

    pub fn label(&mut self, at: Point2, text: &str) {
        let (x, y) = self.map.apply(at);
        let _ = writeln!(
            self.body,
            r#"  <text x="{x:.3}" y="{y:.3}" font-family="sans-serif" font-size="18">{text}</text>"#
        );
    }

    pub fn finish(self, title: &str) -> String {
        let m = self.map;
        format!(
            concat!(
                r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1000 1000" width="1000" height="1000">"#,
                "\n  <title>{}</title>\n",
                r#"  <metadata>{{"world_to_view":{{"x":"{:.9} * x + {:.9}","y":"-{:.9} * y + {:.9}"}}}}</metadata>"#,
                "\n",
                r##"  <defs><pattern id="hatch" width="8" height="8" patternUnits="userSpaceOnUse" patternTransform="rotate(45)"><line x1="0" y1="0" x2="0" y2="8" stroke="#b03030" stroke-width="1.5"/></pattern></defs>"##,
                "\n",
                r#"  <rect x="0" y="0" width="1000" height="1000" fill="white"/>"#,
                "\n{}</svg>\n"
            ),
            title, m.scale, m.tx, m.scale, m.ty, self.body
        )
    }
}

fn bbox_of(polys: &[ConvexPolygon]) -> BoundingBox {
    polys
        .iter()
        .map(|p| p.bbox())
        .reduce(|a, b| a.union(&b))
        .expect("at least one polygon")
}

/// Original triangles (outlined), translated triangles (filled) and
/// translated trapezia (hatched).
pub fn block_svg(block: &PerronBlock) -> String {
    let k = block.k_members();
    let v = block.v_members();
    let mut all = block.triangles.clone();
    all.extend(k.iter().cloned());
    all.extend(v.iter().cloned());
    let mut c = Canvas::new(bbox_of(&all));
    for p in &v {
        c.polygon(p, Style::hatched());
    }
    for p in &k {
        c.polygon(p, Style::filled("#2c6fbb", 0.35));
    }
    for p in &block.triangles {
        c.polygon(p, Style::outline("#222222"));
    }
    c.finish(&format!(
        "block n = {}, {} triangles, epsilon = {:.6}",
        block.n,
        block.len(),
        block.epsilon
    ))
}

/// Triangle `ABC`, the enlarged `AB′C′`, the rectangle `P̃` and the trapezium `V`.
pub fn construction_svg(cons: &Construction1) -> String {
    let tri = cons.triangle();
    let big = cons.enlarged_triangle();
    let rect = cons.p_tilde.to_polygon();
    let mut c = Canvas::new(bbox_of(&[tri.clone(), big.clone(), rect.clone(), cons.v.clone()]));
    c.polygon(&rect, Style::filled("#2c6fbb", 0.2));
    c.polygon(&cons.v, Style::hatched());
    c.polygon(&big, Style::outline("#777777"));
    c.polygon(&tri, Style::outline("#222222"));
    for (p, name) in [
        (cons.a_pt, "A"),
        (cons.b_pt, "B"),
        (cons.c_pt, "C"),
        (cons.b_prime, "B′"),
        (cons.c_prime, "C′"),
    ] {
        c.label(p, name);
    }
    c.finish(&format!("construction b = {}, c = {}", cons.b, cons.c))
}
