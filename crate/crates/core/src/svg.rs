//! SVG figures of torus packings: the unit square, each disk with every
//! wrapped copy that meets the square, and contact edges cut at the frame.

use std::fmt::Write as _;
use std::path::Path;

use crate::certify::contacts;
use crate::error::Result;
use crate::torus::{reduce, Configuration};

const SIZE: f64 = 400.0;
const MARGIN: f64 = 20.0;

fn px(x: f64) -> f64 {
    MARGIN + SIZE * x
}

fn py(y: f64) -> f64 {
    MARGIN + SIZE * (1.0 - y)
}

/// Pieces of the segment `a -> a + v`, each translated back into the unit
/// square.
pub fn wrap_segment(a: [f64; 2], v: [f64; 2]) -> Vec<[[f64; 2]; 2]> {
    let mut cuts = vec![0.0, 1.0];
    for k in 0..2 {
        if v[k] != 0.0 {
            let (lo, hi) = (a[k].min(a[k] + v[k]), a[k].max(a[k] + v[k]));
            let mut m = lo.floor() + 1.0;
            while m < hi {
                cuts.push((m - a[k]) / v[k]);
                m += 1.0;
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    cuts.windows(2)
        .map(|w| {
            let at = |t: f64| [a[0] + t * v[0], a[1] + t * v[1]];
            let mid = at(0.5 * (w[0] + w[1]));
            let f = [mid[0].floor(), mid[1].floor()];
            let (p, q) = (at(w[0]), at(w[1]));
            [[p[0] - f[0], p[1] - f[1]], [q[0] - f[0], q[1] - f[1]]]
        })
        .collect()
}

pub fn render_svg(c: &Configuration, d: f64) -> String {
    let r = 0.5 * d;
    let full = 2.0 * MARGIN + SIZE;
    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{full}" height="{full}" viewBox="0 0 {full} {full}">"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<defs><clipPath id="frame"><rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}"/></clipPath></defs>"#
    )
    .unwrap();
    writeln!(s, r#"<g clip-path="url(#frame)">"#).unwrap();
    for p in c.coords() {
        let p = [reduce(p[0]), reduce(p[1])];
        for a in -1..=1 {
            for b in -1..=1 {
                let q = [p[0] + a as f64, p[1] + b as f64];
                if q[0] + r > 0.0 && q[0] - r < 1.0 && q[1] + r > 0.0 && q[1] - r < 1.0 {
                    writeln!(
                        s,
                        r##"<circle cx="{:.6}" cy="{:.6}" r="{:.6}" fill="#dde6f0" stroke="#30506e" stroke-width="1"/>"##,
                        px(q[0]),
                        py(q[1]),
                        SIZE * r
                    )
                    .unwrap();
                }
            }
        }
    }
    let pts = c.coords();
    for k in contacts(c, d) {
        let a = [reduce(pts[k.i][0]), reduce(pts[k.i][1])];
        for [p, q] in wrap_segment(a, [k.unit[0] * d, k.unit[1] * d]) {
            writeln!(
                s,
                r##"<line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}" stroke="#b03030" stroke-width="1.5"/>"##,
                px(p[0]),
                py(p[1]),
                px(q[0]),
                py(q[1])
            )
            .unwrap();
        }
    }
    for p in &pts {
        writeln!(
            s,
            r#"<circle cx="{:.6}" cy="{:.6}" r="2" fill="black"/>"#,
            px(reduce(p[0])),
            py(reduce(p[1]))
        )
        .unwrap();
    }
    writeln!(s, "</g>").unwrap();
    writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" fill="none" stroke="black" stroke-width="1.5"/>"#
    )
    .unwrap();
    writeln!(s, "</svg>").unwrap();
    s
}

pub fn write_svg(c: &Configuration, d: f64, path: &Path) -> Result<()> {
    std::fs::write(path, render_svg(c, d))?;
    Ok(())
}
