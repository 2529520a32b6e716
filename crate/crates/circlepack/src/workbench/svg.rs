//! Deterministic SVG rendering of packings: circles as circle elements,
//! optional carrier edges, color roles for branch structure (branch red,
//! chaperones green/blue, fall guy black, horizon highlighted), and
//! orthographic front/back panels for spherical packings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::complex::{BlackHoleKind, Complex, Vertex};
use crate::geometry::sphere::SphericalCircle;
use crate::layout::Packing;

#[derive(Debug, Clone)]
pub struct RenderStyle {
    /// Pixel width of the drawing; height follows the aspect ratio.
    pub width: f64,
    /// Draw carrier edges (center-to-center chords) when a complex is given.
    pub carrier: bool,
    /// Stroke color overrides by vertex.
    pub colors: BTreeMap<Vertex, &'static str>,
    /// Vertices drawn filled (fall guys degenerate to points).
    pub filled: Vec<Vertex>,
    /// Edges drawn highlighted (event horizons).
    pub highlight_edges: Vec<(Vertex, Vertex)>,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            width: 800.0,
            carrier: false,
            colors: BTreeMap::new(),
            filled: Vec::new(),
            highlight_edges: Vec::new(),
        }
    }
}

/// Style encoding the branch roles of a post-surgery complex: traditional
/// branch vertices and twins red, chaperones green/blue, fall guys black and
/// filled, horizons highlighted.
pub fn role_style(k: &Complex, traditional: &[Vertex]) -> RenderStyle {
    let mut style = RenderStyle::default();
    for &v in traditional {
        style.colors.insert(v, "red");
    }
    for rec in k.surgeries() {
        style.colors.insert(rec.fall_guy, "black");
        style.filled.push(rec.fall_guy);
        let palette: [&'static str; 2] = ["green", "blue"];
        for (i, &h) in rec.chaperones.iter().enumerate() {
            style.colors.insert(h, palette[i % 2]);
        }
        if rec.kind == BlackHoleKind::Shifted {
            if let Some((t1, t2)) = rec.twins {
                style.colors.insert(t1, "red");
                style.colors.insert(t2, "red");
            }
        } else {
            for &a in &rec.anchors {
                style.colors.insert(a, "red");
            }
        }
        let n = rec.horizon.len();
        for i in 0..n {
            style
                .highlight_edges
                .push((rec.horizon[i], rec.horizon[(i + 1) % n]));
        }
    }
    style
}

fn fmt(x: f64) -> String {
    // Fixed precision keeps output deterministic and diff-friendly.
    format!("{x:.6}")
}

/// Render a plane packing. Pass the complex to draw carrier edges.
pub fn render_packing(p: &Packing, k: Option<&Complex>, style: &RenderStyle) -> String {
    let placed: Vec<(Vertex, &crate::geometry::Circle)> = p
        .circles
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.as_ref().map(|c| (i + 1, c)))
        .collect();
    if placed.is_empty() {
        return "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1 1\"/>\n".to_string();
    }
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for (_, c) in &placed {
        x0 = x0.min(c.eucl.center.re - c.eucl.radius);
        y0 = y0.min(c.eucl.center.im - c.eucl.radius);
        x1 = x1.max(c.eucl.center.re + c.eucl.radius);
        y1 = y1.max(c.eucl.center.im + c.eucl.radius);
    }
    let pad = 0.02 * (x1 - x0).max(y1 - y0).max(1e-9);
    let (x0, y0, x1, y1) = (x0 - pad, y0 - pad, x1 + pad, y1 + pad);
    let stroke = 0.003 * (x1 - x0).max(y1 - y0);
    let height = style.width * (y1 - y0) / (x1 - x0);
    let mut out = String::new();
    // The y axis is flipped so mathematical orientation reads correctly.
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" \
         viewBox=\"{} {} {} {}\">",
        fmt(style.width),
        fmt(height),
        fmt(x0),
        fmt(-y1),
        fmt(x1 - x0),
        fmt(y1 - y0)
    );
    let _ = writeln!(out, "<g stroke-width=\"{}\">", fmt(stroke));
    if style.carrier {
        if let Some(k) = k {
            for (u, v) in k.edges() {
                if let (Some(a), Some(b)) = (p.circle(u), p.circle(v)) {
                    let _ = writeln!(
                        out,
                        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"gray\"/>",
                        fmt(a.eucl.center.re),
                        fmt(-a.eucl.center.im),
                        fmt(b.eucl.center.re),
                        fmt(-b.eucl.center.im)
                    );
                }
            }
        }
    }
    for (u, v) in &style.highlight_edges {
        if let (Some(a), Some(b)) = (p.circle(*u), p.circle(*v)) {
            let _ = writeln!(
                out,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"orange\" \
                 stroke-width=\"{}\"/>",
                fmt(a.eucl.center.re),
                fmt(-a.eucl.center.im),
                fmt(b.eucl.center.re),
                fmt(-b.eucl.center.im),
                fmt(2.5 * stroke)
            );
        }
    }
    for (v, c) in &placed {
        let color = style.colors.get(v).copied().unwrap_or("black");
        let fill = if style.filled.contains(v) { color } else { "none" };
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" stroke=\"{}\" fill=\"{}\"/>",
            fmt(c.eucl.center.re),
            fmt(-c.eucl.center.im),
            fmt(c.eucl.radius.max(0.25 * stroke)),
            color,
            fill
        );
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}

const SPHERE_SAMPLES: usize = 96;

/// Render spherical circles as two orthographic panels: the front (z >= 0,
/// viewed from +z) on the left and the back (z <= 0, viewed from -z, x
/// mirrored) on the right.
pub fn render_sphere(
    circles: &[(Vertex, SphericalCircle)],
    style: &RenderStyle,
) -> String {
    let mut out = String::new();
    let w = style.width;
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" \
         viewBox=\"-1.05 -1.05 4.30 2.10\">",
        fmt(w),
        fmt(w * 2.10 / 4.30)
    );
    let _ = writeln!(out, "<g stroke-width=\"0.004\" fill=\"none\">");
    for dx in [0.0, 2.2] {
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"0.000000\" r=\"1.000000\" stroke=\"lightgray\"/>",
            fmt(dx)
        );
    }
    for (v, c) in circles {
        let color = style.colors.get(v).copied().unwrap_or("black");
        // Orthonormal frame spanning the circle's plane.
        let n = c.center;
        let pick = if n[0].abs() < 0.9 {
            [1.0, 0.0, 0.0]
        } else {
            [0.0, 1.0, 0.0]
        };
        let e1 = crate::geometry::sphere::normalize(crate::geometry::sphere::cross(n, pick));
        let e2 = crate::geometry::sphere::cross(n, e1);
        let (cr, sr) = (c.radius.cos(), c.radius.sin());
        let pts: Vec<[f64; 3]> = (0..SPHERE_SAMPLES)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / SPHERE_SAMPLES as f64;
                let (ct, st) = (t.cos(), t.sin());
                [
                    cr * n[0] + sr * (ct * e1[0] + st * e2[0]),
                    cr * n[1] + sr * (ct * e1[1] + st * e2[1]),
                    cr * n[2] + sr * (ct * e1[2] + st * e2[2]),
                ]
            })
            .collect();
        // Front panel keeps z >= 0 runs, back panel the z <= 0 runs.
        for (front, dx) in [(true, 0.0), (false, 2.2)] {
            let visible = |p: &[f64; 3]| if front { p[2] >= 0.0 } else { p[2] <= 0.0 };
            let project = |p: &[f64; 3]| {
                let x = if front { p[0] } else { -p[0] };
                (x + dx, -p[1])
            };
            let mut path = String::new();
            let mut pen_down = false;
            for i in 0..=SPHERE_SAMPLES {
                let p = &pts[i % SPHERE_SAMPLES];
                if visible(p) {
                    let (x, y) = project(p);
                    let cmd = if pen_down { 'L' } else { 'M' };
                    let _ = write!(path, "{cmd}{} {} ", fmt(x), fmt(y));
                    pen_down = true;
                } else {
                    pen_down = false;
                }
            }
            if !path.is_empty() {
                let _ = writeln!(out, "<path d=\"{}\" stroke=\"{}\"/>", path.trim_end(), color);
            }
        }
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;
    use crate::geometry::Geometry;
    use crate::layout::develop;
    use crate::solver::{Label, OverlapMap};

    fn hex_flower() -> (Complex, Packing) {
        let faces: Vec<[Vertex; 3]> = (0..6).map(|i| [1, 2 + i, 2 + (i + 1) % 6]).collect();
        let k = build_complex(faces).unwrap();
        let label = Label::uniform(Geometry::Euclidean, 7, 1.0);
        let p = develop(&k, &label, &OverlapMap::tangency()).unwrap();
        (k, p)
    }

    #[test]
    fn empty_packing_is_valid_svg() {
        let p = Packing {
            geom: Geometry::Euclidean,
            circles: Vec::new(),
            tree: Vec::new(),
        };
        let s = render_packing(&p, None, &RenderStyle::default());
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("/>"));
    }

    #[test]
    fn hex_flower_counts() {
        let (k, p) = hex_flower();
        let style = RenderStyle {
            carrier: true,
            ..RenderStyle::default()
        };
        let s = render_packing(&p, Some(&k), &style);
        assert_eq!(s.matches("<circle").count(), 7);
        assert_eq!(s.matches("<line").count(), 12);
    }

    #[test]
    fn rendering_is_deterministic() {
        let (k, p) = hex_flower();
        let style = RenderStyle {
            carrier: true,
            ..RenderStyle::default()
        };
        assert_eq!(render_packing(&p, Some(&k), &style), render_packing(&p, Some(&k), &style));
        let sph = vec![(
            1,
            SphericalCircle {
                center: [0.0, 0.0, -1.0],
                radius: 0.5,
            },
        )];
        assert_eq!(
            render_sphere(&sph, &RenderStyle::default()),
            render_sphere(&sph, &RenderStyle::default())
        );
        assert!(render_sphere(&sph, &RenderStyle::default()).contains("<path"));
    }
}
