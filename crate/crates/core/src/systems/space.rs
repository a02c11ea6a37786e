use serde::{Deserialize, Serialize};

/// A point of a phase space of dimension at most two. One-dimensional
/// spaces leave the second coordinate at zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point(pub [f64; 2]);

impl Point {
    pub const fn new(x: f64) -> Self {
        Point([x, 0.0])
    }

    pub const fn xy(x: f64, y: f64) -> Self {
        Point([x, y])
    }

    #[inline]
    pub fn x(self) -> f64 {
        self.0[0]
    }

    #[inline]
    pub fn y(self) -> f64 {
        self.0[1]
    }
}

impl From<f64> for Point {
    fn from(x: f64) -> Self {
        Point::new(x)
    }
}

/// The compact phase spaces of the zoo. Periodic coordinates live in
/// `[0, 1)`; interval coordinates in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    Interval,
    Circle,
    Torus,
    /// `S^1 x [0, 1]`, base coordinate first.
    CircleInterval,
}

impl Space {
    pub fn dimension(self) -> usize {
        match self {
            Space::Interval | Space::Circle => 1,
            Space::Torus | Space::CircleInterval => 2,
        }
    }

    pub fn periodic(self) -> [bool; 2] {
        match self {
            Space::Interval => [false, false],
            Space::Circle => [true, false],
            Space::Torus => [true, true],
            Space::CircleInterval => [true, false],
        }
    }

    /// Per-coordinate separation: wrap-around on periodic axes.
    #[inline]
    pub fn axis_distance(self, axis: usize, a: f64, b: f64) -> f64 {
        let d = (a - b).abs();
        if self.periodic()[axis] {
            let d = d.rem_euclid(1.0);
            d.min(1.0 - d)
        } else {
            d
        }
    }

    pub fn distance(self, a: Point, b: Point) -> f64 {
        let dx = self.axis_distance(0, a.x(), b.x());
        if self.dimension() == 1 {
            dx
        } else {
            let dy = self.axis_distance(1, a.y(), b.y());
            dx.hypot(dy)
        }
    }

    pub fn diameter(self) -> f64 {
        match self {
            Space::Interval => 1.0,
            Space::Circle => 0.5,
            Space::Torus => 0.5f64.hypot(0.5),
            Space::CircleInterval => 0.5f64.hypot(1.0),
        }
    }

    pub fn contains(self, p: Point) -> bool {
        let periodic = self.periodic();
        (0..self.dimension()).all(|axis| {
            let v = p.0[axis];
            if periodic[axis] {
                (0.0..1.0).contains(&v)
            } else {
                (0.0..=1.0).contains(&v)
            }
        }) && (self.dimension() == 2 || p.y() == 0.0)
    }

    /// Reduces periodic coordinates mod 1 and clamps interval coordinates.
    pub fn reduce(self, mut p: Point) -> Point {
        let periodic = self.periodic();
        for axis in 0..self.dimension() {
            p.0[axis] = if periodic[axis] {
                wrap_unit(p.0[axis])
            } else {
                p.0[axis].clamp(0.0, 1.0)
            };
        }
        if self.dimension() == 1 {
            p.0[1] = 0.0;
        }
        p
    }
}

/// `x mod 1` in `[0, 1)`, guarding the rounding case where `rem_euclid`
/// returns exactly 1.
#[inline]
pub fn wrap_unit(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_distance_wraps() {
        assert!((Space::Circle.distance(Point::new(0.05), Point::new(0.95)) - 0.1).abs() < 1e-15);
        assert!((Space::Interval.distance(Point::new(0.05), Point::new(0.95)) - 0.9).abs() < 1e-15);
    }

    #[test]
    fn torus_distance_is_euclidean_of_wrapped() {
        let d = Space::Torus.distance(Point::xy(0.9, 0.1), Point::xy(0.1, 0.9));
        assert!((d - 0.2f64.hypot(0.2)).abs() < 1e-12);
    }

    #[test]
    fn distances_bounded_by_diameter() {
        for space in [Space::Interval, Space::Circle, Space::Torus, Space::CircleInterval] {
            for i in 0..50 {
                for j in 0..50 {
                    let a = Point::xy(i as f64 / 50.0, j as f64 / 49.0);
                    let b = Point::xy(j as f64 / 49.0, i as f64 / 50.0);
                    let (a, b) = (space.reduce(a), space.reduce(b));
                    assert!(space.distance(a, b) <= space.diameter() + 1e-12);
                }
            }
        }
    }

    #[test]
    fn wrap_unit_never_returns_one() {
        assert_eq!(wrap_unit(-1e-20), 0.0);
        assert_eq!(wrap_unit(2.0), 0.0);
        assert_eq!(wrap_unit(1.25), 0.25);
    }
}
