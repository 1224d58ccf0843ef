//! Instance files and random instance generation.
//!
//! The text format is line oriented:
//!
//! ```text
//! flipdist v1
//! points 4
//! 0 0
//! 1 0
//! 1 1
//! 0 1
//! initial 2
//! 0 1 2
//! 0 2 3
//! final 2
//! 0 1 3
//! 1 2 3
//! k 1
//! ```
//!
//! Blank lines and `#` comments are ignored. The `k` line is optional.

use std::fmt::Write as _;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{orientation, Orientation, Point};
use crate::triangulation::{PointId, PointSet, Triangulation, TriangulationError};

pub const HEADER: &str = "flipdist v1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub points: Vec<(i32, i32)>,
    pub initial: Vec<[PointId; 3]>,
    #[serde(rename = "final")]
    pub target: Vec<[PointId; 3]>,
    pub k: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid {which} triangulation: {source}")]
    Invalid {
        which: &'static str,
        #[source]
        source: TriangulationError,
    },
    #[error("invalid point set: {0}")]
    Points(#[source] TriangulationError),
}

/// A parsed instance with both triangulations built over one shared point set.
#[derive(Debug, Clone)]
pub struct Instance {
    pub file: InstanceFile,
    pub initial: Triangulation,
    pub target: Triangulation,
}

impl Instance {
    pub fn from_file(file: InstanceFile) -> Result<Self, InstanceError> {
        let points = Arc::new(PointSet::from_coords(&file.points).map_err(InstanceError::Points)?);
        let initial = Triangulation::build(points.clone(), &file.initial)
            .map_err(|source| InstanceError::Invalid { which: "initial", source })?;
        let target = Triangulation::build(points, &file.target)
            .map_err(|source| InstanceError::Invalid { which: "final", source })?;
        Ok(Instance { file, initial, target })
    }

    pub fn n(&self) -> usize {
        self.initial.num_points()
    }

    pub fn h(&self) -> usize {
        self.initial.hull_size()
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    /// Next non-blank line with comments stripped, as (line number, tokens).
    fn next_tokens(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (i, raw) in self.inner.by_ref() {
            let text = raw.split('#').next().unwrap_or("");
            let toks: Vec<&str> = text.split_whitespace().collect();
            self.last = i + 1;
            if !toks.is_empty() {
                return Some((i + 1, toks));
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, Vec<&'a str>), InstanceError> {
        self.next_tokens().ok_or_else(|| InstanceError::Syntax {
            line: self.last + 1,
            message: format!("unexpected end of input, expected {what}"),
        })
    }
}

fn syntax(line: usize, message: impl Into<String>) -> InstanceError {
    InstanceError::Syntax { line, message: message.into() }
}

fn number<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T, InstanceError> {
    tok.parse().map_err(|_| syntax(line, format!("invalid number `{tok}`")))
}

fn section(lines: &mut Lines<'_>, name: &str) -> Result<usize, InstanceError> {
    let (line, toks) = lines.expect(name)?;
    match toks.as_slice() {
        [kw, count] if *kw == name => number(line, count),
        _ => Err(syntax(line, format!("expected `{name} <count>`"))),
    }
}

fn rows<const W: usize, T: std::str::FromStr + Copy + Default>(
    lines: &mut Lines<'_>,
    count: usize,
    what: &str,
) -> Result<Vec<[T; W]>, InstanceError> {
    (0..count)
        .map(|_| {
            let (line, toks) = lines.expect(what)?;
            if toks.len() != W {
                return Err(syntax(line, format!("expected {W} values for {what}, found {}", toks.len())));
            }
            let mut row = [T::default(); W];
            for (slot, tok) in row.iter_mut().zip(&toks) {
                *slot = number(line, tok)?;
            }
            Ok(row)
        })
        .collect()
}

/// Parses and validates an instance.
pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    Instance::from_file(parse_instance_file(text)?)
}

/// Parses without building the triangulations.
pub fn parse_instance_file(text: &str) -> Result<InstanceFile, InstanceError> {
    let mut lines = Lines { inner: text.lines().enumerate(), last: 0 };
    let (line, toks) = lines.expect("header")?;
    if toks.join(" ") != HEADER {
        return Err(syntax(line, format!("expected header `{HEADER}`")));
    }
    let n = section(&mut lines, "points")?;
    let points: Vec<(i32, i32)> = rows::<2, i32>(&mut lines, n, "point")?
        .into_iter()
        .map(|[x, y]| (x, y))
        .collect();
    let m = section(&mut lines, "initial")?;
    let initial = rows::<3, PointId>(&mut lines, m, "triangle")?;
    let m = section(&mut lines, "final")?;
    let target = rows::<3, PointId>(&mut lines, m, "triangle")?;
    let mut k = None;
    if let Some((line, toks)) = lines.next_tokens() {
        match toks.as_slice() {
            ["k", v] => k = Some(number(line, v)?),
            _ => return Err(syntax(line, "expected `k <value>` or end of input")),
        }
        if let Some((line, _)) = lines.next_tokens() {
            return Err(syntax(line, "trailing content"));
        }
    }
    Ok(InstanceFile { points, initial, target, k })
}

pub fn render_instance(file: &InstanceFile) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{HEADER}");
    let _ = writeln!(s, "points {}", file.points.len());
    for (x, y) in &file.points {
        let _ = writeln!(s, "{x} {y}");
    }
    for (name, tris) in [("initial", &file.initial), ("final", &file.target)] {
        let _ = writeln!(s, "{name} {}", tris.len());
        for [a, b, c] in tris {
            let _ = writeln!(s, "{a} {b} {c}");
        }
    }
    if let Some(k) = file.k {
        let _ = writeln!(s, "k {k}");
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum HullShape {
    /// Uniform points in a square; some end up inside the hull.
    #[default]
    Random,
    /// Points in convex position.
    Polygon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    pub n: usize,
    pub shape: HullShape,
    pub scramble: usize,
    pub seed: u64,
    /// Coordinates are drawn from `0..extent`.
    pub extent: i32,
}

impl GenConfig {
    pub fn new(n: usize, shape: HullShape, scramble: usize, seed: u64) -> Self {
        GenConfig { n, shape, scramble, seed, extent: 1000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("could not place {0} points in general position")]
    CannotPlace(usize),
}

const MAX_ATTEMPTS: usize = 10_000;

/// Random points with no three collinear, an initial triangulation by
/// incremental insertion, and a target reached by `scramble` random flips.
pub fn generate_instance(cfg: &GenConfig) -> Result<InstanceFile, GenError> {
    if cfg.n < 3 {
        return Err(GenError::TooFewPoints(cfg.n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let points = match cfg.shape {
        HullShape::Random => random_points(cfg, &mut rng)?,
        HullShape::Polygon => convex_points(cfg, &mut rng)?,
    };
    let initial_tris = insertion_triangulation(&points);
    let ps = Arc::new(PointSet::new(points.clone()).expect("general position"));
    let initial = Triangulation::build(ps, &initial_tris).expect("insertion builds a triangulation");
    let target = scramble(&initial, cfg.scramble, &mut rng);
    Ok(InstanceFile {
        points: points.iter().map(|p| (p.x, p.y)).collect(),
        initial: initial.triangle_triples(),
        target: target.triangle_triples(),
        k: None,
    })
}

/// `count` random admissible flips.
pub fn scramble<R: Rng + ?Sized>(t: &Triangulation, count: usize, rng: &mut R) -> Triangulation {
    let mut t = t.clone();
    for _ in 0..count {
        let Some(&e) = t.admissible_edges().choose(rng) else {
            break;
        };
        t.flip_in_place(e).expect("admissible");
    }
    t
}

fn in_general_position(points: &[Point], p: Point) -> bool {
    if points.contains(&p) {
        return false;
    }
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            if orientation(a, b, p) == Orientation::Collinear {
                return false;
            }
        }
    }
    true
}

fn random_points<R: Rng + ?Sized>(cfg: &GenConfig, rng: &mut R) -> Result<Vec<Point>, GenError> {
    let mut points = Vec::with_capacity(cfg.n);
    let mut attempts = 0;
    while points.len() < cfg.n {
        attempts += 1;
        if attempts > MAX_ATTEMPTS {
            return Err(GenError::CannotPlace(cfg.n));
        }
        let p = Point::new(rng.gen_range(0..cfg.extent), rng.gen_range(0..cfg.extent));
        if in_general_position(&points, p) {
            points.push(p);
        }
    }
    Ok(points)
}

fn convex_points<R: Rng + ?Sized>(cfg: &GenConfig, rng: &mut R) -> Result<Vec<Point>, GenError> {
    let r = cfg.extent as f64 / 2.0;
    for _ in 0..MAX_ATTEMPTS {
        let mut angles: Vec<f64> = (0..cfg.n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let pts: Vec<Point> = angles
            .iter()
            .map(|a| Point::new((r + r * a.cos()).round() as i32, (r + r * a.sin()).round() as i32))
            .collect();
        let mut ok = true;
        for (i, &p) in pts.iter().enumerate() {
            if !in_general_position(&pts[..i], p) {
                ok = false;
                break;
            }
        }
        if ok {
            if let Ok(ps) = PointSet::new(pts.clone()) {
                if ps.hull_size() == cfg.n {
                    return Ok(pts);
                }
            }
        }
    }
    Err(GenError::CannotPlace(cfg.n))
}

/// Sweep-order insertion: each new point is outside the current hull and is
/// joined to every hull edge it sees. Needs no three points collinear.
fn insertion_triangulation(points: &[Point]) -> Vec<[PointId; 3]> {
    let mut order: Vec<PointId> = (0..points.len() as PointId).collect();
    order.sort_by_key(|&i| (points[i as usize].x, points[i as usize].y));
    let p = |i: PointId| points[i as usize];
    let (a, b, c) = (order[0], order[1], order[2]);
    let mut hull = if orientation(p(a), p(b), p(c)) == Orientation::Left { vec![a, b, c] } else { vec![a, c, b] };
    let mut tris = vec![[a, b, c]];
    for &v in &order[3..] {
        let h = hull.len();
        let visible: Vec<bool> = (0..h)
            .map(|i| orientation(p(hull[i]), p(hull[(i + 1) % h]), p(v)) == Orientation::Right)
            .collect();
        let mut next = Vec::with_capacity(h + 1);
        for i in 0..h {
            let (s, t) = (hull[i], hull[(i + 1) % h]);
            if visible[i] {
                tris.push([s, t, v]);
            }
            let before = visible[(i + h - 1) % h];
            if !(before && visible[i]) {
                next.push(s);
            }
            if visible[i] && !visible[(i + 1) % h] {
                next.push(v);
            }
        }
        hull = next;
    }
    tris
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SQUARE: &str = "flipdist v1
points 4
0 0
1 0
1 1
0 1
initial 2
0 1 2
0 2 3
final 2
0 1 3
1 2 3
k 1
";

    #[test]
    fn parse_square() {
        let inst = parse_instance(SQUARE).unwrap();
        assert_eq!(inst.file.k, Some(1));
        assert_eq!(inst.n(), 4);
        assert_eq!(inst.initial.changed_edges(&inst.target).unwrap().len(), 1);
        assert_eq!(render_instance(&inst.file), SQUARE);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = format!("# square\n\n{}", SQUARE.replace("points 4", "points 4   # four corners"));
        assert!(parse_instance(&text).is_ok());
    }

    #[test]
    fn missing_triangle_fails_validation() {
        let text = SQUARE.replace("final 2\n0 1 3\n1 2 3", "final 1\n0 1 3");
        let err = parse_instance(&text).unwrap_err();
        assert!(matches!(err, InstanceError::Invalid { which: "final", .. }), "{err}");
    }

    #[test]
    fn duplicate_point_fails() {
        let text = SQUARE.replace("1 1\n0 1\ninitial", "1 1\n1 0\ninitial");
        let err = parse_instance(&text).unwrap_err();
        assert_eq!(err, InstanceError::Points(TriangulationError::DuplicatePoint { first: 1, second: 3 }));
    }

    #[test]
    fn syntax_errors_report_lines() {
        let err = parse_instance("flipdist v2\n").unwrap_err();
        assert!(matches!(err, InstanceError::Syntax { line: 1, .. }));
        let err = parse_instance(&SQUARE.replace("1 0\n1 1", "1 x\n1 1")).unwrap_err();
        assert!(matches!(err, InstanceError::Syntax { line: 4, .. }), "{err}");
        let err = parse_instance(&SQUARE.replace("k 1", "k 1\nextra")).unwrap_err();
        assert!(matches!(err, InstanceError::Syntax { line: 14, .. }), "{err}");
        let err = parse_instance("flipdist v1\npoints 3\n0 0\n").unwrap_err();
        assert!(matches!(err, InstanceError::Syntax { line: 4, .. }), "{err}");
    }

    #[test]
    fn generate_examples() {
        let f = generate_instance(&GenConfig::new(4, HullShape::Polygon, 1, 7)).unwrap();
        let inst = Instance::from_file(f).unwrap();
        assert!(inst.initial.changed_edges(&inst.target).unwrap().len() <= 1);
        let f = generate_instance(&GenConfig::new(5, HullShape::Polygon, 3, 1)).unwrap();
        let inst = Instance::from_file(f).unwrap();
        assert_eq!(inst.h(), 5);
        assert_eq!(
            generate_instance(&GenConfig::new(2, HullShape::Random, 0, 0)),
            Err(GenError::TooFewPoints(2))
        );
    }

    #[test]
    fn generation_is_seeded() {
        let cfg = GenConfig::new(8, HullShape::Random, 4, 99);
        assert_eq!(generate_instance(&cfg).unwrap(), generate_instance(&cfg).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn generated_instances_round_trip(n in 3usize..12, scramble in 0usize..6, seed: u64, polygon: bool, k in proptest::option::of(0usize..9)) {
            let shape = if polygon { HullShape::Polygon } else { HullShape::Random };
            let mut f = generate_instance(&GenConfig::new(n, shape, scramble, seed)).unwrap();
            f.k = k;
            let text = render_instance(&f);
            let back = parse_instance(&text).unwrap();
            prop_assert_eq!(&back.file, &f);
            prop_assert!(back.initial.same_point_set(&back.target));
        }
    }
}
