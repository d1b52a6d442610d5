//! Minimal scatter plots in the complex plane.

use std::fmt::Write;

use num_complex::Complex64;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;

pub struct Layer<'a> {
    pub label: &'a str,
    pub color: &'a str,
    pub radius: f64,
    pub points: &'a [Complex64],
}

pub fn scatter(layers: &[Layer]) -> String {
    let all = layers.iter().flat_map(|l| l.points.iter());
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (-1e-3, 1e-3, -1e-3, 1e-3);
    for z in all {
        lo_x = f64::min(lo_x, z.re);
        hi_x = f64::max(hi_x, z.re);
        lo_y = f64::min(lo_y, z.im);
        hi_y = f64::max(hi_y, z.im);
    }
    let span = f64::max(hi_x - lo_x, hi_y - lo_y) * 1.1;
    let (cx, cy) = ((lo_x + hi_x) / 2.0, (lo_y + hi_y) / 2.0);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let px = |z: &Complex64| {
        (
            SIZE / 2.0 + (z.re - cx) * scale,
            SIZE / 2.0 - (z.im - cy) * scale,
        )
    };

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    let (ox, oy) = px(&Complex64::new(0.0, 0.0));
    writeln!(
        s,
        r##"<g stroke="#ccc"><line x1="0" y1="{oy:.3}" x2="{SIZE}" y2="{oy:.3}"/><line x1="{ox:.3}" y1="0" x2="{ox:.3}" y2="{SIZE}"/></g>"##
    )
    .unwrap();
    for (k, layer) in layers.iter().enumerate() {
        writeln!(s, r#"<g fill="{}" fill-opacity="0.7">"#, layer.color).unwrap();
        for z in layer.points {
            let (x, y) = px(z);
            writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{}"/>"#, layer.radius).unwrap();
        }
        writeln!(s, "</g>").unwrap();
        writeln!(
            s,
            r#"<text x="8" y="{}" font-family="sans-serif" font-size="12" fill="{}">{}</text>"#,
            16 + 14 * k,
            layer.color,
            layer.label
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}
