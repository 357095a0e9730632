//! Planar primitives shared by the mesh, routing and tiling code.
//!
//! Coordinates are plain `f64`. Constructions upstream keep inputs in general
//! position, so predicates here are evaluated directly without exact
//! arithmetic.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("collinear segments overlap")]
    Overlap,
    #[error("angle arm coincides with the apex")]
    DegenerateArm,
    #[error("empty point set")]
    Empty,
    #[error("resample needs at least 2 points, got {0}")]
    TooFewSamples(usize),
    #[error("invalid polyline: {0}")]
    InvalidPolyline(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Exact identity key (bit patterns, with `-0.0` folded into `0.0`).
    pub fn key(&self) -> (u64, u64) {
        let fold = |v: f64| if v == 0.0 { 0u64 } else { v.to_bits() };
        (fold(self.x), fold(self.y))
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Exact at `t = 0`, `t = 1` and when both ends coincide.
    pub fn lerp(self, o: Point, t: f64) -> Point {
        if t == 0.0 || self == o {
            return self;
        }
        if t == 1.0 {
            return o;
        }
        Point::new((1.0 - t) * self.x + t * o.x, (1.0 - t) * self.y + t * o.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Point,
    pub max: Point,
}

impl Rect {
    pub fn new(min: Point, max: Point) -> Self {
        debug_assert!(min.x <= max.x && min.y <= max.y, "inverted rect");
        Rect { min, max }
    }

    /// Tight bounding box; `None` for an empty iterator.
    pub fn bounding<I: IntoIterator<Item = Point>>(pts: I) -> Option<Rect> {
        let mut it = pts.into_iter();
        let first = it.next()?;
        let (mut lo, mut hi) = (first, first);
        for p in it {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        Some(Rect::new(lo, hi))
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn diagonal(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn on_boundary(&self, p: Point) -> bool {
        self.contains(p)
            && (p.x == self.min.x || p.x == self.max.x || p.y == self.min.y || p.y == self.max.y)
    }

    /// Whether a closed segment meets this closed rectangle (Liang–Barsky clip).
    pub fn intersects_segment(&self, s: &Segment) -> bool {
        let d = s.b - s.a;
        let (mut t0, mut t1) = (0.0f64, 1.0f64);
        let checks = [
            (-d.x, s.a.x - self.min.x),
            (d.x, self.max.x - s.a.x),
            (-d.y, s.a.y - self.min.y),
            (d.y, self.max.y - s.a.y),
        ];
        for (p, q) in checks {
            if p == 0.0 {
                if q < 0.0 {
                    return false;
                }
            } else {
                let r = q / p;
                if p < 0.0 {
                    t0 = t0.max(r);
                } else {
                    t1 = t1.min(r);
                }
                if t0 > t1 {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub const fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn length(&self) -> f64 {
        dist_e(self.a, self.b)
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }
}

/// Polyline with at least two points and no repeated consecutive points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polyline(Vec<Point>);

impl Polyline {
    pub fn new(points: Vec<Point>) -> Result<Self, GeomError> {
        if points.len() < 2 {
            return Err(GeomError::InvalidPolyline("fewer than two points"));
        }
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(GeomError::InvalidPolyline("repeated consecutive point"));
        }
        Ok(Polyline(points))
    }

    pub fn points(&self) -> &[Point] {
        &self.0
    }

    pub fn into_points(self) -> Vec<Point> {
        self.0
    }

    pub fn length(&self) -> f64 {
        polyline_length(&self.0)
    }
}

pub fn dist_e(p: Point, q: Point) -> f64 {
    (p.x - q.x).hypot(p.y - q.y)
}

pub fn dist_m(p: Point, q: Point) -> f64 {
    (p.x - q.x).abs() + (p.y - q.y).abs()
}

pub fn polyline_length(pts: &[Point]) -> f64 {
    pts.windows(2).map(|w| dist_e(w[0], w[1])).sum()
}

/// Intersection of two closed segments.
///
/// Returns the single common point when the segments cross or touch, `None`
/// when they are disjoint, and [`GeomError::Overlap`] when they share more
/// than one point.
pub fn seg_intersect(s1: &Segment, s2: &Segment) -> Result<Option<Point>, GeomError> {
    let r = s1.b - s1.a;
    let s = s2.b - s2.a;
    let qp = s2.a - s1.a;
    let denom = r.cross(s);
    if denom == 0.0 {
        if qp.cross(r) != 0.0 {
            return Ok(None);
        }
        // collinear: compare parameter intervals along s1
        let rr = r.dot(r);
        let t0 = qp.dot(r) / rr;
        let t1 = (s2.b - s1.a).dot(r) / rr;
        let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        if hi < 0.0 || lo > 1.0 {
            return Ok(None);
        }
        if hi == 0.0 {
            return Ok(Some(s1.a));
        }
        if lo == 1.0 {
            return Ok(Some(s1.b));
        }
        return Err(GeomError::Overlap);
    }
    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    if !(0.0..=1.0).contains(&t) || !(0.0..=1.0).contains(&u) {
        return Ok(None);
    }
    let p = match (t, u) {
        (t, _) if t == 0.0 => s1.a,
        (t, _) if t == 1.0 => s1.b,
        (_, u) if u == 0.0 => s2.a,
        (_, u) if u == 1.0 => s2.b,
        _ => s1.a + r * t,
    };
    Ok(Some(p))
}

pub fn point_seg_dist(p: Point, s: &Segment) -> f64 {
    let d = s.b - s.a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return dist_e(p, s.a);
    }
    let t = ((p - s.a).dot(d) / len2).clamp(0.0, 1.0);
    dist_e(p, s.a + d * t)
}

/// Distance between two closed segments (0 when they meet).
pub fn seg_seg_dist(s1: &Segment, s2: &Segment) -> f64 {
    match seg_intersect(s1, s2) {
        Ok(Some(_)) | Err(_) => 0.0,
        Ok(None) => point_seg_dist(s1.a, s2)
            .min(point_seg_dist(s1.b, s2))
            .min(point_seg_dist(s2.a, s1))
            .min(point_seg_dist(s2.b, s1)),
    }
}

/// Interior angle at `v` between the arms towards `a` and `b`, in degrees.
pub fn angle_at(v: Point, a: Point, b: Point) -> Result<f64, GeomError> {
    let da = a - v;
    let db = b - v;
    if da == Point::default() || db == Point::default() {
        return Err(GeomError::DegenerateArm);
    }
    Ok(da.cross(db).abs().atan2(da.dot(db)).to_degrees())
}

fn sum_dist(pts: &[Point], q: Point) -> f64 {
    pts.iter().map(|&p| dist_e(p, q)).sum()
}

/// Weiszfeld iteration for the point minimising the sum of distances.
///
/// Starts from the centroid. An iterate landing within `eps` of an input point
/// snaps to that point.
pub fn geometric_median(pts: &[Point], eps: f64, max_iter: usize) -> Result<Point, GeomError> {
    if pts.is_empty() {
        return Err(GeomError::Empty);
    }
    let n = pts.len() as f64;
    let mut y = pts.iter().fold(Point::default(), |acc, &p| acc + p) * (1.0 / n);
    for _ in 0..max_iter {
        if let Some(&p) = pts.iter().find(|&&p| dist_e(p, y) < eps) {
            return Ok(p);
        }
        let (mut num, mut den) = (Point::default(), 0.0);
        for &p in pts {
            let w = 1.0 / dist_e(p, y);
            num = num + p * w;
            den += w;
        }
        let next = num * (1.0 / den);
        let step = dist_e(next, y);
        y = next;
        if step < eps {
            break;
        }
    }
    Ok(y)
}

/// Objective value of [`geometric_median`]: the sum of distances to `pts`.
pub fn median_cost(pts: &[Point], q: Point) -> f64 {
    sum_dist(pts, q)
}

/// Normalised arc-length parameter of every vertex (first 0, last 1).
pub fn arc_params(pts: &[Point]) -> Vec<f64> {
    let total = polyline_length(pts);
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(pts.len());
    out.push(0.0);
    for w in pts.windows(2) {
        acc += dist_e(w[0], w[1]);
        out.push(acc / total);
    }
    if let Some(last) = out.last_mut() {
        *last = 1.0;
    }
    out
}

/// Evaluate a polyline at sorted normalised arc-length parameters.
///
/// A parameter equal to one of the polyline's own vertex parameters returns
/// that vertex bit-for-bit.
pub fn sample_at(pts: &[Point], params: &[f64]) -> Vec<Point> {
    let own = arc_params(pts);
    let mut seg = 0usize;
    params
        .iter()
        .map(|&s| {
            while seg + 1 < own.len() - 1 && own[seg + 1] < s {
                seg += 1;
            }
            if let Some(j) = own.iter().position(|&o| o == s) {
                return pts[j];
            }
            let (s0, s1) = (own[seg], own[seg + 1]);
            let t = if s1 > s0 { (s - s0) / (s1 - s0) } else { 0.0 };
            pts[seg].lerp(pts[seg + 1], t.clamp(0.0, 1.0))
        })
        .collect()
}

/// `m` points spaced uniformly by arc length; endpoints are preserved exactly.
pub fn resample(pl: &Polyline, m: usize) -> Result<Polyline, GeomError> {
    if m < 2 {
        return Err(GeomError::TooFewSamples(m));
    }
    let pts = pl.points();
    let total = pl.length();
    let mut cum = Vec::with_capacity(pts.len());
    let mut acc = 0.0;
    cum.push(0.0);
    for w in pts.windows(2) {
        acc += dist_e(w[0], w[1]);
        cum.push(acc);
    }
    let mut out = Vec::with_capacity(m);
    out.push(pts[0]);
    let mut seg = 0usize;
    for k in 1..m - 1 {
        let target = total * k as f64 / (m - 1) as f64;
        while seg + 2 < cum.len() && cum[seg + 1] < target {
            seg += 1;
        }
        let len = cum[seg + 1] - cum[seg];
        let t = ((target - cum[seg]) / len).clamp(0.0, 1.0);
        out.push(pts[seg].lerp(pts[seg + 1], t));
    }
    out.push(*pts.last().expect("polyline has points"));
    Ok(Polyline(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn distances() {
        assert_eq!(dist_e(p(0., 0.), p(3., 4.)), 5.0);
        assert_eq!(dist_e(p(1., 1.), p(1., 1.)), 0.0);
        assert!(close(dist_e(p(0., 0.), p(1., 1.)), 1.4142135623730951));
        assert_eq!(dist_m(p(0., 0.), p(3., 4.)), 7.0);
        assert_eq!(dist_m(p(2., 5.), p(2., 5.)), 0.0);
        assert_eq!(dist_m(p(0., 0.), p(-1., 2.)), 3.0);
    }

    #[test]
    fn segment_intersection_cases() {
        let s = |a: Point, b: Point| Segment::new(a, b);
        assert_eq!(
            seg_intersect(&s(p(0., 0.), p(2., 0.)), &s(p(1., -1.), p(1., 1.))),
            Ok(Some(p(1., 0.)))
        );
        assert_eq!(seg_intersect(&s(p(0., 0.), p(1., 0.)), &s(p(0., 1.), p(1., 1.))), Ok(None));
        assert_eq!(
            seg_intersect(&s(p(0., 0.), p(2., 0.)), &s(p(2., 0.), p(2., 2.))),
            Ok(Some(p(2., 0.)))
        );
        assert_eq!(
            seg_intersect(&s(p(0., 0.), p(2., 0.)), &s(p(1., 0.), p(3., 0.))),
            Err(GeomError::Overlap)
        );
        assert_eq!(
            seg_intersect(&s(p(0., 0.), p(2., 0.)), &s(p(2., 0.), p(3., 0.))),
            Ok(Some(p(2., 0.)))
        );
        assert_eq!(seg_intersect(&s(p(0., 0.), p(1., 0.)), &s(p(2., 0.), p(3., 0.))), Ok(None));
    }

    #[test]
    fn point_segment_distance() {
        let s = Segment::new(p(0., 0.), p(2., 0.));
        assert_eq!(point_seg_dist(p(1., 1.), &s), 1.0);
        assert_eq!(point_seg_dist(p(3., 0.), &s), 1.0);
        assert_eq!(point_seg_dist(p(0., 0.), &Segment::new(p(0., 0.), p(5., 0.))), 0.0);
    }

    #[test]
    fn angles() {
        let o = p(0., 0.);
        assert!(close(angle_at(o, p(1., 0.), p(0., 1.)).unwrap(), 90.0));
        assert!(close(angle_at(o, p(1., 0.), p(1., 1.)).unwrap(), 45.0));
        assert!(close(angle_at(o, p(1., 0.), p(-1., 0.)).unwrap(), 180.0));
        assert_eq!(angle_at(o, o, p(1., 0.)), Err(GeomError::DegenerateArm));
    }

    #[test]
    fn median_simple_cases() {
        let m = geometric_median(&[p(0., 0.), p(2., 0.), p(1., 0.)], 1e-9, 1000).unwrap();
        assert_eq!(m, p(1., 0.));
        let m = geometric_median(&[p(0., 0.), p(2., 0.), p(0., 2.), p(2., 2.)], 1e-9, 1000).unwrap();
        assert!(close(m.x, 1.0) && close(m.y, 1.0));
        assert_eq!(geometric_median(&[], 1e-9, 10), Err(GeomError::Empty));
    }

    #[test]
    fn median_matches_grid_search() {
        let pts = [p(0., 0.), p(4., 0.), p(1., 3.)];
        // exhaustive 0.001 grid over the hull's bounding box
        let mut best = (f64::INFINITY, Point::default());
        for i in 0..=4000 {
            for j in 0..=3000 {
                let q = p(i as f64 * 1e-3, j as f64 * 1e-3);
                let c = sum_dist(&pts, q);
                if c < best.0 {
                    best = (c, q);
                }
            }
        }
        let m = geometric_median(&pts, 1e-12, 10_000).unwrap();
        assert!(dist_e(m, best.1) < 0.01, "{m:?} vs grid {:?}", best.1);
    }

    #[test]
    fn resample_cases() {
        let pl = Polyline::new(vec![p(0., 0.), p(2., 0.)]).unwrap();
        assert_eq!(resample(&pl, 3).unwrap().points(), &[p(0., 0.), p(1., 0.), p(2., 0.)]);
        let pl = Polyline::new(vec![p(0., 0.), p(1., 0.), p(1., 1.)]).unwrap();
        assert_eq!(resample(&pl, 2).unwrap().points(), &[p(0., 0.), p(1., 1.)]);
        let pl = Polyline::new(vec![p(0., 0.), p(2., 0.), p(2., 2.)]).unwrap();
        // arc length 4 split into quarters
        assert_eq!(
            resample(&pl, 5).unwrap().points(),
            &[p(0., 0.), p(1., 0.), p(2., 0.), p(2., 1.), p(2., 2.)]
        );
        assert_eq!(resample(&pl, 1), Err(GeomError::TooFewSamples(1)));
    }

    #[test]
    fn rect_segment_clip() {
        let r = Rect::new(p(0., 0.), p(1., 1.));
        assert!(r.intersects_segment(&Segment::new(p(-1., 0.5), p(2., 0.5))));
        assert!(r.intersects_segment(&Segment::new(p(1., 1.), p(2., 2.))));
        assert!(!r.intersects_segment(&Segment::new(p(1.5, 0.), p(1.5, 1.))));
        assert!(r.intersects_segment(&Segment::new(p(0.2, 0.2), p(0.3, 0.3))));
    }

    #[test]
    fn sample_at_keeps_own_vertices() {
        let pts = [p(0., 0.), p(3., 0.), p(3., 1.)];
        let params = arc_params(&pts);
        assert_eq!(sample_at(&pts, &params), pts.to_vec());
        let mid = sample_at(&pts, &[0.0, 0.5, 1.0]);
        assert_eq!(mid[1], p(2., 0.));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn pt() -> impl Strategy<Value = Point> {
            (-1e3..1e3f64, -1e3..1e3f64).prop_map(|(x, y)| Point::new(x, y))
        }

        proptest! {
            #[test]
            fn metric_sandwich(a in pt(), b in pt()) {
                let e = dist_e(a, b);
                let m = dist_m(a, b);
                prop_assert!(e <= m + 1e-9);
                prop_assert!(m <= std::f64::consts::SQRT_2 * e + 1e-9);
            }

            #[test]
            fn median_never_worse_than_centroid(pts in prop::collection::vec(pt(), 1..8)) {
                let n = pts.len() as f64;
                let c = pts.iter().fold(Point::default(), |acc, &p| acc + p) * (1.0 / n);
                let m = geometric_median(&pts, 1e-9, 500).unwrap();
                prop_assert!(sum_dist(&pts, m) <= sum_dist(&pts, c) + n * 1e-9);
            }

            #[test]
            fn resample_preserves_ends_and_length(
                pts in prop::collection::vec(pt(), 2..6),
                m in 2usize..12,
            ) {
                prop_assume!(pts.windows(2).all(|w| w[0] != w[1]));
                let pl = Polyline::new(pts.clone()).unwrap();
                let r = resample(&pl, m).unwrap();
                prop_assert_eq!(r.points().len(), m);
                prop_assert_eq!(r.points()[0], pts[0]);
                prop_assert_eq!(*r.points().last().unwrap(), *pts.last().unwrap());
                // resampled chords never exceed the original arc length
                prop_assert!(polyline_length(r.points()) <= pl.length() * (1.0 + 1e-9));
            }
        }
    }
}
