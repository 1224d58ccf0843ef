//! Exact integer predicates.
//!
//! Coordinates are `i32`; determinants are evaluated in `i128`, which holds
//! any 2x2 cross product of coordinate differences. No predicate rounds.

use serde::{Deserialize, Serialize};

/// A planar point with integer coordinates. Its identity inside a point set
/// is its index in that set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: i32,
    pub y: i32,
}

impl Point {
    pub const fn new(x: i32, y: i32) -> Self {
        Point { x, y }
    }
}

impl From<(i32, i32)> for Point {
    fn from((x, y): (i32, i32)) -> Self {
        Point { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Counterclockwise turn.
    Left,
    /// Clockwise turn.
    Right,
    Collinear,
}

impl Orientation {
    pub fn reversed(self) -> Self {
        match self {
            Orientation::Left => Orientation::Right,
            Orientation::Right => Orientation::Left,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

/// Twice the signed area of triangle `pqr`: `(q - p) x (r - p)`.
#[inline]
pub fn cross(p: Point, q: Point, r: Point) -> i128 {
    let (px, py) = (p.x as i128, p.y as i128);
    let (qx, qy) = (q.x as i128, q.y as i128);
    let (rx, ry) = (r.x as i128, r.y as i128);
    (qx - px) * (ry - py) - (qy - py) * (rx - px)
}

#[inline]
pub fn orientation(p: Point, q: Point, r: Point) -> Orientation {
    match cross(p, q, r) {
        c if c > 0 => Orientation::Left,
        c if c < 0 => Orientation::Right,
        _ => Orientation::Collinear,
    }
}

/// True iff the open segments `ab` and `cd` meet at a point interior to both.
///
/// Shared endpoints, an endpoint touching the other segment, and collinear
/// overlap all report `false`.
pub fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);
    [o1, o2, o3, o4].iter().all(|o| *o != Orientation::Collinear) && o1 != o2 && o3 != o4
}

/// True iff `a, b, c, d` (in boundary order) bound a strictly convex
/// quadrilateral: every consecutive triple turns the same way and none is
/// collinear.
pub fn is_strictly_convex_quad(a: Point, b: Point, c: Point, d: Point) -> bool {
    let turns = [
        orientation(a, b, c),
        orientation(b, c, d),
        orientation(c, d, a),
        orientation(d, a, b),
    ];
    turns[0] != Orientation::Collinear && turns.iter().all(|t| *t == turns[0])
}
