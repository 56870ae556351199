//! Where can one more disk go?

use crate::interval::Interval;
use crate::torus::Configuration;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FreeBox {
    pub x: Interval,
    pub y: Interval,
    /// Every point of the box is at distance at least `d` from the
    /// configuration.
    pub inside: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FreeRegion {
    pub boxes: Vec<FreeBox>,
}

impl FreeRegion {
    /// True only when the subdivision proved there is no room.
    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn has_interior(&self) -> bool {
        self.boxes.iter().any(|b| b.inside)
    }

    pub fn area(&self) -> f64 {
        self.boxes
            .iter()
            .filter(|b| b.inside)
            .map(|b| b.x.width() * b.y.width())
            .sum()
    }
}

/// Squared distances from the box to `q` over the nine nearest translates,
/// as intervals.
fn translates(bx: Interval, by: Interval, q: [f64; 2]) -> impl Iterator<Item = Interval> {
    (-1..=1).flat_map(move |a| {
        (-1..=1).map(move |b| (bx - q[0] + a as f64).sqr() + (by - q[1] + b as f64).sqr())
    })
}

/// Enclosure of `{p : torus_dist(p, q) >= d for every q in c}` by uniform
/// subdivision of the unit square down to side `2^-depth`.
pub fn free_point_search(c: &Configuration, d: f64, depth: u32) -> FreeRegion {
    let pts: Vec<[f64; 2]> = c.coords();
    let d2 = d * d;
    let mut out = Vec::new();
    let mut stack = vec![(Interval::new(0.0, 1.0), Interval::new(0.0, 1.0), 0u32)];
    while let Some((bx, by, level)) = stack.pop() {
        let mut inside = true;
        let mut excluded = false;
        for &q in &pts {
            for t in translates(bx, by, q) {
                if t.hi() < d2 {
                    excluded = true;
                    break;
                }
                if t.lo() < d2 {
                    inside = false;
                }
            }
            if excluded {
                break;
            }
        }
        if excluded {
            continue;
        }
        if inside || level >= depth {
            out.push(FreeBox {
                x: bx,
                y: by,
                inside,
            });
            continue;
        }
        let (x0, x1) = bx.bisect();
        let (y0, y1) = by.bisect();
        for (a, b) in [(x1, y1), (x1, y0), (x0, y1), (x0, y0)] {
            stack.push((a, b, level + 1));
        }
    }
    out.sort_by(|a, b| {
        (a.x.lo(), a.y.lo())
            .partial_cmp(&(b.x.lo(), b.y.lo()))
            .unwrap()
    });
    FreeRegion { boxes: out }
}
