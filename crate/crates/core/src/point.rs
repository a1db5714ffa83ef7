use std::fmt;
use std::ops::{Add, Sub};

/// A location in the plane.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Unit-circle point at angle `theta`.
    pub fn on_unit_circle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Point { x: c, y: s }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    /// Angle in `[0, 2π)`.
    pub fn angle(self) -> f64 {
        let a = self.y.atan2(self.x);
        if a < 0.0 {
            a + std::f64::consts::TAU
        } else {
            a
        }
    }

    pub fn scale(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }

    pub fn rotate(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    /// Integer coordinates, if both are integral.
    pub fn as_lattice(self) -> Option<LatticePoint> {
        if self.x.fract() == 0.0 && self.y.fract() == 0.0 && self.x.is_finite() && self.y.is_finite() {
            Some(LatticePoint::new(self.x as i64, self.y as i64))
        } else {
            None
        }
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A point of the integer lattice `Z^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LatticePoint {
    pub s: i64,
    pub t: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { s: 0, t: 0 };

    pub const fn new(s: i64, t: i64) -> Self {
        LatticePoint { s, t }
    }

    /// The four nearest neighbours.
    pub fn neighbors(self) -> [LatticePoint; 4] {
        let LatticePoint { s, t } = self;
        [
            LatticePoint::new(s + 1, t),
            LatticePoint::new(s - 1, t),
            LatticePoint::new(s, t + 1),
            LatticePoint::new(s, t - 1),
        ]
    }

    /// The eight points at Chebyshev distance one.
    pub fn king_neighbors(self) -> impl Iterator<Item = LatticePoint> {
        (-1..=1)
            .flat_map(move |ds| (-1..=1).map(move |dt| (ds, dt)))
            .filter(|&(ds, dt)| ds != 0 || dt != 0)
            .map(move |(ds, dt)| LatticePoint::new(self.s + ds, self.t + dt))
    }

    pub fn chebyshev(self, other: LatticePoint) -> i64 {
        (self.s - other.s).abs().max((self.t - other.t).abs())
    }

    pub fn manhattan(self, other: LatticePoint) -> i64 {
        (self.s - other.s).abs() + (self.t - other.t).abs()
    }

    pub fn to_point(self) -> Point {
        Point::new(self.s as f64, self.t as f64)
    }
}

impl Sub for LatticePoint {
    type Output = LatticePoint;
    fn sub(self, rhs: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.s - rhs.s, self.t - rhs.t)
    }
}

impl Add for LatticePoint {
    type Output = LatticePoint;
    fn add(self, rhs: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.s + rhs.s, self.t + rhs.t)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.s, self.t)
    }
}
