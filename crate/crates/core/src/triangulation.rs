//! Triangulations of a fixed planar point set, with flips.
//!
//! A [`Triangulation`] is an immutable value: [`Triangulation::apply_flip`]
//! returns a new triangulation. Edges and triangles are stored in canonical
//! (sorted) order so that equality, hashing and enumeration order are all
//! deterministic.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{self, cross, orientation, Orientation, Point};

pub type PointId = u32;

const NO_VERTEX: PointId = PointId::MAX;

/// Undirected edge between two distinct points, smaller id first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge(PointId, PointId);

impl Edge {
    /// Panics if `a == b`.
    pub fn new(a: PointId, b: PointId) -> Self {
        Self::try_new(a, b).expect("edge endpoints must differ")
    }

    pub fn try_new(a: PointId, b: PointId) -> Option<Self> {
        match a.cmp(&b) {
            Ordering::Less => Some(Edge(a, b)),
            Ordering::Greater => Some(Edge(b, a)),
            Ordering::Equal => None,
        }
    }

    pub fn a(self) -> PointId {
        self.0
    }

    pub fn b(self) -> PointId {
        self.1
    }

    pub fn endpoints(self) -> [PointId; 2] {
        [self.0, self.1]
    }

    pub fn contains(self, v: PointId) -> bool {
        self.0 == v || self.1 == v
    }

    /// The vertex shared with `other`, if exactly one.
    pub fn common_vertex(self, other: Edge) -> Option<PointId> {
        if self == other {
            return None;
        }
        if other.contains(self.0) {
            Some(self.0)
        } else if other.contains(self.1) {
            Some(self.1)
        } else {
            None
        }
    }

    fn other(self, v: PointId) -> PointId {
        if self.0 == v {
            self.1
        } else {
            self.0
        }
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// Triangle as a sorted vertex triple.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triangle([PointId; 3]);

impl Triangle {
    pub fn new(a: PointId, b: PointId, c: PointId) -> Self {
        let mut v = [a, b, c];
        v.sort_unstable();
        Triangle(v)
    }

    pub fn vertices(self) -> [PointId; 3] {
        self.0
    }

    pub fn edges(self) -> [Edge; 3] {
        let [a, b, c] = self.0;
        [Edge(a, b), Edge(a, c), Edge(b, c)]
    }

    pub fn contains_edge(self, e: Edge) -> bool {
        self.0.contains(&e.0) && self.0.contains(&e.1)
    }
}

impl fmt::Debug for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriangulationError {
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("points {first} and {second} coincide")]
    DuplicatePoint { first: usize, second: usize },
    #[error("all points are collinear")]
    AllCollinear,
    #[error("triangle {triangle} references point {vertex}, out of range")]
    VertexOutOfRange { triangle: usize, vertex: PointId },
    #[error("triangle {triangle} is degenerate (repeated or collinear vertices)")]
    DegenerateTriangle { triangle: usize },
    #[error("triangle {triangle} appears twice")]
    DuplicateTriangle { triangle: usize },
    #[error("edge {edge} is used by more than two triangles")]
    EdgeOverused { edge: Edge },
    #[error("triangles on edge {edge} overlap")]
    OverlappingTriangles { edge: Edge },
    #[error("edge {edge} has a single incident triangle but is not a convex hull edge")]
    BoundaryNotOnHull { edge: Edge },
    #[error("convex hull edge {edge} is missing or lies on the wrong side")]
    HullEdgeMissing { edge: Edge },
    #[error("expected {expected} triangles for n={n}, h={h}, found {found}")]
    WrongTriangleCount { n: usize, h: usize, expected: usize, found: usize },
    #[error("triangles do not tile the convex hull")]
    NotATiling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FlipError {
    #[error("edge {0} is not in the triangulation")]
    EdgeAbsent(Edge),
    #[error("edge {0} is a boundary edge")]
    BoundaryEdge(Edge),
    #[error("quadrilateral around edge {0} is not strictly convex")]
    NotConvex(Edge),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("triangulations are over different point sets")]
pub struct PointSetMismatch;

/// An immutable set of distinct points together with its convex hull.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    points: Vec<Point>,
    /// Every point on the hull boundary, counterclockwise, including points
    /// in the relative interior of hull sides.
    boundary: Vec<PointId>,
    /// Convex hull 2x area.
    hull_area2: i128,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self, TriangulationError> {
        if points.len() < 3 {
            return Err(TriangulationError::TooFewPoints(points.len()));
        }
        let mut seen: HashMap<Point, usize> = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if let Some(&first) = seen.get(p) {
                return Err(TriangulationError::DuplicatePoint { first, second: i });
            }
            seen.insert(*p, i);
        }
        let corners = strict_hull(&points);
        if corners.len() < 3 {
            return Err(TriangulationError::AllCollinear);
        }
        let mut boundary = Vec::new();
        for (i, &s) in corners.iter().enumerate() {
            let t = corners[(i + 1) % corners.len()];
            let (ps, pt) = (points[s as usize], points[t as usize]);
            let mut on_side: Vec<PointId> = (0..points.len() as PointId)
                .filter(|&v| v != s && v != t)
                .filter(|&v| on_open_segment(ps, pt, points[v as usize]))
                .collect();
            on_side.sort_by_key(|&v| dist2(ps, points[v as usize]));
            boundary.push(s);
            boundary.extend(on_side);
        }
        let hull_area2 = (1..corners.len() - 1)
            .map(|i| {
                cross(
                    points[corners[0] as usize],
                    points[corners[i] as usize],
                    points[corners[i + 1] as usize],
                )
            })
            .sum();
        Ok(PointSet { points, boundary, hull_area2 })
    }

    pub fn from_coords(coords: &[(i32, i32)]) -> Result<Self, TriangulationError> {
        Self::new(coords.iter().copied().map(Point::from).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, id: PointId) -> Point {
        self.points[id as usize]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Number of points on the convex hull boundary (h).
    pub fn hull_size(&self) -> usize {
        self.boundary.len()
    }

    /// Hull boundary points in counterclockwise order.
    pub fn hull_boundary(&self) -> &[PointId] {
        &self.boundary
    }

    pub fn hull_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let h = self.boundary.len();
        (0..h).map(move |i| Edge::new(self.boundary[i], self.boundary[(i + 1) % h]))
    }

    /// Expected triangle count `2n - h - 2`.
    pub fn triangle_count(&self) -> usize {
        2 * self.len() - self.hull_size() - 2
    }

    /// Expected edge count `3n - h - 3`.
    pub fn edge_count(&self) -> usize {
        3 * self.len() - self.hull_size() - 3
    }

    pub fn crosses(&self, e: Edge, f: Edge) -> bool {
        geom::segments_cross(self.point(e.0), self.point(e.1), self.point(f.0), self.point(f.1))
    }
}

fn dist2(a: Point, b: Point) -> i128 {
    let dx = a.x as i128 - b.x as i128;
    let dy = a.y as i128 - b.y as i128;
    dx * dx + dy * dy
}

fn on_open_segment(a: Point, b: Point, p: Point) -> bool {
    if orientation(a, b, p) != Orientation::Collinear {
        return false;
    }
    let (ax, ay, bx, by, px, py) = (a.x as i128, a.y as i128, b.x as i128, b.y as i128, p.x as i128, p.y as i128);
    let dot = (px - ax) * (bx - ax) + (py - ay) * (by - ay);
    dot > 0 && dot < dist2(a, b)
}

/// Monotone chain; returns strict corners counterclockwise.
fn strict_hull(points: &[Point]) -> Vec<PointId> {
    let mut order: Vec<PointId> = (0..points.len() as PointId).collect();
    order.sort_by_key(|&i| (points[i as usize].x, points[i as usize].y));
    let mut hull: Vec<PointId> = Vec::with_capacity(2 * points.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &PointId>> =
            if pass == 0 { Box::new(order.iter()) } else { Box::new(order.iter().rev()) };
        for &i in iter {
            while hull.len() >= start + 2 {
                let q = points[hull[hull.len() - 1] as usize];
                let p = points[hull[hull.len() - 2] as usize];
                if cross(p, q, points[i as usize]) <= 0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull
}

/// An edge together with the apex of each incident triangle.
///
/// `right` is the apex `c` with `a, c, b` counterclockwise; for hull edges
/// exactly one side is `NO_VERTEX`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct EdgeSlot {
    edge: Edge,
    right: PointId,
    left: PointId,
}

impl EdgeSlot {
    fn is_boundary(&self) -> bool {
        self.right == NO_VERTEX || self.left == NO_VERTEX
    }

    fn replace_apex(&mut self, old: PointId, new: PointId) {
        if self.right == old {
            self.right = new;
        } else {
            debug_assert_eq!(self.left, old);
            self.left = new;
        }
    }
}

/// Byte-comparable encoding of a triangulation's triangle set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalKey(Box<[PointId]>);

impl CanonicalKey {
    pub fn as_slice(&self) -> &[PointId] {
        &self.0
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().flat_map(|v| v.to_be_bytes()).collect()
    }
}

#[derive(Clone)]
pub struct Triangulation {
    points: Arc<PointSet>,
    triangles: Vec<Triangle>,
    edges: Vec<EdgeSlot>,
}

impl fmt::Debug for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Triangulation")
            .field("n", &self.points.len())
            .field("triangles", &self.triangles)
            .finish()
    }
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.same_point_set(other) && self.triangles == other.triangles
    }
}

impl Eq for Triangulation {}

impl Triangulation {
    /// Validates `triangles` as a triangulation of `points`.
    pub fn build(
        points: Arc<PointSet>,
        triangles: &[[PointId; 3]],
    ) -> Result<Self, TriangulationError> {
        let n = points.len();
        let mut tris = Vec::with_capacity(triangles.len());
        for (i, t) in triangles.iter().enumerate() {
            if let Some(&v) = t.iter().find(|&&v| v as usize >= n) {
                return Err(TriangulationError::VertexOutOfRange { triangle: i, vertex: v });
            }
            let [a, b, c] = *t;
            if a == b
                || b == c
                || a == c
                || orientation(points.point(a), points.point(b), points.point(c))
                    == Orientation::Collinear
            {
                return Err(TriangulationError::DegenerateTriangle { triangle: i });
            }
            tris.push((Triangle::new(a, b, c), i));
        }
        tris.sort();
        for w in tris.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(TriangulationError::DuplicateTriangle { triangle: w[0].1.max(w[1].1) });
            }
        }

        let mut slots: HashMap<Edge, EdgeSlot> = HashMap::new();
        for &(t, _) in &tris {
            for e in t.edges() {
                let apex = t.0.iter().copied().find(|&v| !e.contains(v)).unwrap();
                let slot = slots.entry(e).or_insert(EdgeSlot { edge: e, right: NO_VERTEX, left: NO_VERTEX });
                let side = orientation(points.point(e.0), points.point(apex), points.point(e.1));
                let cell = if side == Orientation::Left { &mut slot.right } else { &mut slot.left };
                if *cell != NO_VERTEX {
                    let both_taken = slot.right != NO_VERTEX && slot.left != NO_VERTEX;
                    return Err(if both_taken {
                        TriangulationError::EdgeOverused { edge: e }
                    } else {
                        TriangulationError::OverlappingTriangles { edge: e }
                    });
                }
                *cell = apex;
            }
        }

        let mut edges: Vec<EdgeSlot> = slots.into_values().collect();
        edges.sort_by_key(|s| s.edge);
        let boundary = points.hull_boundary();
        let hull: Vec<(Edge, bool)> = (0..boundary.len())
            .map(|i| {
                let (s, t) = (boundary[i], boundary[(i + 1) % boundary.len()]);
                // The hull interior lies left of s->t; seen from the
                // canonical direction the apex is a `right` apex iff s > t.
                (Edge::new(s, t), s > t)
            })
            .collect();
        for s in &edges {
            if s.is_boundary() && !hull.iter().any(|(e, _)| *e == s.edge) {
                return Err(TriangulationError::BoundaryNotOnHull { edge: s.edge });
            }
        }
        for &(e, interior_right) in &hull {
            let ok = edges
                .binary_search_by_key(&e, |s| s.edge)
                .ok()
                .map(|i| edges[i])
                .is_some_and(|s| s.is_boundary() && (s.right != NO_VERTEX) == interior_right);
            if !ok {
                return Err(TriangulationError::HullEdgeMissing { edge: e });
            }
        }
        let expected = points.triangle_count();
        if tris.len() != expected {
            return Err(TriangulationError::WrongTriangleCount {
                n,
                h: points.hull_size(),
                expected,
                found: tris.len(),
            });
        }
        let area2: i128 = tris
            .iter()
            .map(|(t, _)| {
                let [a, b, c] = t.0;
                cross(points.point(a), points.point(b), points.point(c)).abs()
            })
            .sum();
        if area2 != points.hull_area2 {
            return Err(TriangulationError::NotATiling);
        }

        Ok(Triangulation {
            points,
            triangles: tris.into_iter().map(|(t, _)| t).collect(),
            edges,
        })
    }

    pub fn from_coords(
        coords: &[(i32, i32)],
        triangles: &[[PointId; 3]],
    ) -> Result<Self, TriangulationError> {
        Self::build(Arc::new(PointSet::from_coords(coords)?), triangles)
    }

    pub fn point_set(&self) -> &Arc<PointSet> {
        &self.points
    }

    pub fn same_point_set(&self, other: &Triangulation) -> bool {
        Arc::ptr_eq(&self.points, &other.points) || self.points.points == other.points.points
    }

    pub fn check_same_point_set(&self, other: &Triangulation) -> Result<(), PointSetMismatch> {
        if self.same_point_set(other) {
            Ok(())
        } else {
            Err(PointSetMismatch)
        }
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn hull_size(&self) -> usize {
        self.points.hull_size()
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = Edge> + '_ {
        self.edges.iter().map(|s| s.edge)
    }

    pub fn interior_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().filter(|s| !s.is_boundary()).map(|s| s.edge)
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    fn slot(&self, e: Edge) -> Option<&EdgeSlot> {
        self.edges.binary_search_by_key(&e, |s| s.edge).ok().map(|i| &self.edges[i])
    }

    fn slot_mut(&mut self, e: Edge) -> &mut EdgeSlot {
        let i = self
            .edges
            .binary_search_by_key(&e, |s| s.edge)
            .expect("edge present");
        &mut self.edges[i]
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.slot(e).is_some()
    }

    pub fn contains_triangle(&self, t: Triangle) -> bool {
        self.triangles.binary_search(&t).is_ok()
    }

    pub fn is_boundary(&self, e: Edge) -> bool {
        self.slot(e).is_some_and(|s| s.is_boundary())
    }

    /// The quadrilateral around interior edge `e = (a, b)` as `[a, c, b, d]`,
    /// counterclockwise, where `c` and `d` are the apexes of the two incident
    /// triangles.
    pub fn quadrilateral_of(&self, e: Edge) -> Result<[PointId; 4], FlipError> {
        let s = self.slot(e).ok_or(FlipError::EdgeAbsent(e))?;
        if s.is_boundary() {
            return Err(FlipError::BoundaryEdge(e));
        }
        Ok([e.0, s.right, e.1, s.left])
    }

    pub fn is_admissible(&self, e: Edge) -> bool {
        self.check_admissible(e).is_ok()
    }

    fn check_admissible(&self, e: Edge) -> Result<[PointId; 4], FlipError> {
        let q = self.quadrilateral_of(e)?;
        let p = |v: PointId| self.points.point(v);
        if geom::is_strictly_convex_quad(p(q[0]), p(q[1]), p(q[2]), p(q[3])) {
            Ok(q)
        } else {
            Err(FlipError::NotConvex(e))
        }
    }

    /// All admissible edges in canonical order.
    pub fn admissible_edges(&self) -> Vec<Edge> {
        self.interior_edges().filter(|&e| self.is_admissible(e)).collect()
    }

    /// Flips `e`, returning the new triangulation and the new diagonal.
    pub fn apply_flip(&self, e: Edge) -> Result<(Triangulation, Edge), FlipError> {
        let mut next = self.clone();
        let phi = next.flip_in_place(e)?;
        Ok((next, phi))
    }

    /// In-place flip. Flipping the returned edge restores `self` exactly.
    pub fn flip_in_place(&mut self, e: Edge) -> Result<Edge, FlipError> {
        let [a, c, b, d] = self.check_admissible(e)?;
        let phi = Edge::new(c, d);

        let i = self.edges.binary_search_by_key(&e, |s| s.edge).unwrap();
        self.edges.remove(i);
        // Orientation of the new slot: (a, c, b, d) is counterclockwise.
        let (right, left) = if phi.0 == c { (b, a) } else { (a, b) };
        let j = self.edges.binary_search_by_key(&phi, |s| s.edge).unwrap_err();
        self.edges.insert(j, EdgeSlot { edge: phi, right, left });

        self.slot_mut(Edge::new(a, c)).replace_apex(b, d);
        self.slot_mut(Edge::new(c, b)).replace_apex(a, d);
        self.slot_mut(Edge::new(b, d)).replace_apex(a, c);
        self.slot_mut(Edge::new(d, a)).replace_apex(b, c);

        self.remove_triangle(Triangle::new(a, b, c));
        self.remove_triangle(Triangle::new(a, b, d));
        self.insert_triangle(Triangle::new(a, c, d));
        self.insert_triangle(Triangle::new(b, c, d));
        Ok(phi)
    }

    fn remove_triangle(&mut self, t: Triangle) {
        let i = self.triangles.binary_search(&t).expect("triangle present");
        self.triangles.remove(i);
    }

    fn insert_triangle(&mut self, t: Triangle) {
        let i = self.triangles.binary_search(&t).unwrap_err();
        self.triangles.insert(i, t);
    }

    /// Edges other than `e` lying in a common triangle with `e`, sorted.
    /// Four for interior edges, two for boundary edges.
    pub fn edges_sharing_triangle(&self, e: Edge) -> Result<Vec<Edge>, FlipError> {
        let s = self.slot(e).ok_or(FlipError::EdgeAbsent(e))?;
        let mut out = Vec::with_capacity(4);
        for apex in [s.right, s.left] {
            if apex != NO_VERTEX {
                out.push(Edge::new(e.0, apex));
                out.push(Edge::new(e.1, apex));
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// True iff `e` and `f` are distinct edges of one triangle.
    pub fn share_triangle(&self, e: Edge, f: Edge) -> bool {
        match e.common_vertex(f) {
            Some(v) => self.contains_triangle(Triangle::new(v, e.other(v), f.other(v))),
            None => false,
        }
    }

    /// Edges of `self` absent from `other`, sorted.
    pub fn changed_edges(&self, other: &Triangulation) -> Result<Vec<Edge>, PointSetMismatch> {
        self.check_same_point_set(other)?;
        let mut out = Vec::new();
        let mut theirs = other.edges.iter().map(|s| s.edge).peekable();
        for e in self.edges() {
            while theirs.next_if(|f| *f < e).is_some() {}
            if theirs.peek() != Some(&e) {
                out.push(e);
            }
        }
        Ok(out)
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        CanonicalKey(self.triangles.iter().flat_map(|t| t.0).collect())
    }

    pub fn triangle_triples(&self) -> Vec<[PointId; 3]> {
        self.triangles.iter().map(|t| t.0).collect()
    }

    pub fn crosses(&self, e: Edge, f: Edge) -> bool {
        self.points.crosses(e, f)
    }
}
