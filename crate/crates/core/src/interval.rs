//! Closed real intervals with outward-rounded arithmetic.
//!
//! Every elementary operation computes the float result and then steps each
//! endpoint one ulp outward. Transcendental functions step two ulps, which
//! covers the error of the platform `cos`/`sin`/`sqrt`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Rigorous lower and upper bounds on pi.
pub const PI_LO: f64 = std::f64::consts::PI;
pub const PI_HI: f64 = 3.1415926535897936;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

fn down(x: f64) -> f64 {
    if x == 0.0 {
        // The ulp below zero; keeps exact zeros exact when both sides agree.
        -f64::from_bits(1)
    } else {
        x.next_down()
    }
}

fn up(x: f64) -> f64 {
    if x == 0.0 {
        f64::from_bits(1)
    } else {
        x.next_up()
    }
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    /// Interval `[lo, hi]`. Panics if `lo > hi` or either bound is NaN.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "invalid interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    /// Interval spanning both arguments in either order.
    pub fn hull_of(a: f64, b: f64) -> Self {
        Self {
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    pub fn pi() -> Self {
        Self {
            lo: PI_LO,
            hi: PI_HI,
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        if self.lo.is_infinite() || self.hi.is_infinite() {
            return 0.5 * (self.lo.max(-f64::MAX) + self.hi.min(f64::MAX));
        }
        self.lo + 0.5 * (self.hi - self.lo)
    }

    pub fn rad(&self) -> f64 {
        0.5 * self.width()
    }

    /// Largest absolute value.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value.
    pub fn mig(&self) -> f64 {
        if self.contains(0.0) {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn bisect(&self) -> (Interval, Interval) {
        let m = self.mid();
        (
            Interval { lo: self.lo, hi: m },
            Interval { lo: m, hi: self.hi },
        )
    }

    /// Widen by `r` on both sides, rounding outward.
    pub fn inflate(&self, r: f64) -> Interval {
        Interval {
            lo: down(self.lo - r),
            hi: up(self.hi + r),
        }
    }

    fn outward(lo: f64, hi: f64) -> Interval {
        Interval {
            lo: down(lo),
            hi: up(hi),
        }
    }

    pub fn sqr(&self) -> Interval {
        let a = self.lo * self.lo;
        let b = self.hi * self.hi;
        if self.contains(0.0) {
            Interval {
                lo: 0.0,
                hi: up(a.max(b)),
            }
        } else {
            Interval {
                lo: down(a.min(b)).max(0.0),
                hi: up(a.max(b)),
            }
        }
    }

    /// Square root of the nonnegative part. Returns `None` when the interval
    /// lies entirely below zero.
    pub fn sqrt(&self) -> Option<Interval> {
        if self.hi < 0.0 {
            return None;
        }
        let lo = if self.lo <= 0.0 {
            0.0
        } else {
            down(down(self.lo.sqrt())).max(0.0)
        };
        Some(Interval {
            lo,
            hi: up(up(self.hi.sqrt())),
        })
    }

    pub fn abs(&self) -> Interval {
        Interval {
            lo: self.mig(),
            hi: self.mag(),
        }
    }

    pub fn cos(&self) -> Interval {
        if !self.lo.is_finite() || !self.hi.is_finite() || self.width() >= 2.0 * PI_LO {
            return Interval::new(-1.0, 1.0);
        }
        let a = self.lo.cos();
        let b = self.hi.cos();
        let mut lo = down(down(a.min(b)));
        let mut hi = up(up(a.max(b)));
        // Multiples of pi that may lie inside: even ones are maxima, odd ones minima.
        let t = *self / Interval::pi();
        let first = t.lo.ceil();
        let last = t.hi.floor();
        let mut k = first;
        while k <= last {
            if (k as i64).rem_euclid(2) == 0 {
                hi = 1.0;
            } else {
                lo = -1.0;
            }
            k += 1.0;
        }
        Interval {
            lo: lo.max(-1.0),
            hi: hi.min(1.0),
        }
    }

    pub fn sin(&self) -> Interval {
        let half_pi = Interval::pi() * Interval::point(0.5);
        (*self - half_pi).cos()
    }

    pub fn powi(&self, n: u32) -> Interval {
        let mut acc = Interval::ONE;
        for _ in 0..n / 2 {
            acc = acc * self.sqr();
        }
        if n % 2 == 1 {
            acc = acc * *self;
        }
        acc
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval::outward(self.lo + rhs.lo, self.hi + rhs.hi)
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval::outward(self.lo - rhs.hi, self.hi - rhs.lo)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let p = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        // 0 * inf yields NaN; treat it as 0 which is the correct limit here.
        let p = p.map(|v| if v.is_nan() { 0.0 } else { v });
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::outward(lo, hi)
    }
}

impl Div for Interval {
    type Output = Interval;
    /// Division; a divisor containing zero gives the entire line.
    fn div(self, rhs: Interval) -> Interval {
        if rhs.contains(0.0) {
            return Interval::ENTIRE;
        }
        let q = [
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ];
        let lo = q.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::outward(lo, hi)
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    fn add(self, rhs: f64) -> Interval {
        self + Interval::point(rhs)
    }
}

impl Sub<f64> for Interval {
    type Output = Interval;
    fn sub(self, rhs: f64) -> Interval {
        self - Interval::point(rhs)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, rhs: f64) -> Interval {
        self * Interval::point(rhs)
    }
}

/// Interval enclosing `2 * pi`.
pub fn two_pi() -> Interval {
    Interval::new(2.0 * PI_LO, 2.0 * PI_HI)
}
