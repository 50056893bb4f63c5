//! Exact planar region model: unions of disks, simple polygons, segments and
//! the exterior of the unit disk.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::GeometryError;

/// A point of the complex plane.
pub type Point = Complex64;

/// Axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Rect { x0, y0, x1, y1 }
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn diagonal(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn union(&self, other: &Rect) -> Rect {
        Rect {
            x0: self.x0.min(other.x0),
            y0: self.y0.min(other.y0),
            x1: self.x1.max(other.x1),
            y1: self.y1.max(other.y1),
        }
    }
}

/// One member of a [`Region`] union.
#[derive(Debug, Clone, PartialEq)]
pub enum Primitive {
    Disk { center: Point, radius: f64 },
    /// Closed simple polygon; the closing edge is implicit.
    Polygon { vertices: Vec<Point> },
    Segment { a: Point, b: Point },
    /// The closed exterior of the unit disk, `{|z| >= 1}`.
    Sigma,
}

fn cross(a: Point, b: Point) -> f64 {
    a.re * b.im - a.im * b.re
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    cross(b - a, c - a)
}

fn within_box(a: Point, b: Point, p: Point) -> bool {
    p.re >= a.re.min(b.re) && p.re <= a.re.max(b.re) && p.im >= a.im.min(b.im) && p.im <= a.im.max(b.im)
}

/// Exact test for `p` on the closed segment `[a, b]`.
fn on_segment(a: Point, b: Point, p: Point) -> bool {
    orient(a, b, p) == 0.0 && within_box(a, b, p)
}

/// Closest point of the segment `[a, b]` to `p`.
pub(crate) fn segment_foot(a: Point, b: Point, p: Point) -> Point {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return a;
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    a + ab * t.clamp(0.0, 1.0)
}

fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && within_box(q1, q2, p1))
        || (d2 == 0.0 && within_box(q1, q2, p2))
        || (d3 == 0.0 && within_box(p1, p2, q1))
        || (d4 == 0.0 && within_box(p1, p2, q2))
}

fn polygon_contains(vertices: &[Point], p: Point) -> bool {
    let n = vertices.len();
    let mut inside = false;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        if on_segment(a, b, p) {
            return true;
        }
        if (a.im > p.im) != (b.im > p.im) {
            let x = a.re + (p.im - a.im) * (b.re - a.re) / (b.im - a.im);
            if p.re < x {
                inside = !inside;
            }
        }
    }
    inside
}

fn polygon_is_simple(vertices: &[Point]) -> bool {
    let n = vertices.len();
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        if a == b {
            return false;
        }
        for j in (i + 1)..n {
            let (c, d) = (vertices[j], vertices[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // Adjacent edges share exactly one vertex; reject folding back.
                let shared = if j == i + 1 { b } else { a };
                let other_a = if j == i + 1 { a } else { b };
                let other_c = if j == i + 1 { d } else { c };
                if orient(other_a, shared, other_c) == 0.0 {
                    let u = other_a - shared;
                    let v = other_c - shared;
                    if u.re * v.re + u.im * v.im > 0.0 {
                        return false;
                    }
                }
                continue;
            }
            if segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

impl Primitive {
    fn validate(&self) -> Result<(), GeometryError> {
        let finite = |p: &Point| p.re.is_finite() && p.im.is_finite();
        match self {
            Primitive::Disk { center, radius } => {
                if !finite(center) || !radius.is_finite() || *radius <= 0.0 {
                    return Err(GeometryError::Validation(format!("disk radius must be positive, got {radius}")));
                }
            }
            Primitive::Polygon { vertices } => {
                if vertices.len() < 3 {
                    return Err(GeometryError::Validation(format!(
                        "polygon needs at least 3 vertices, got {}",
                        vertices.len()
                    )));
                }
                if !vertices.iter().all(finite) {
                    return Err(GeometryError::Validation("polygon vertex is not finite".into()));
                }
                if !polygon_is_simple(vertices) {
                    return Err(GeometryError::Validation("polygon is self-intersecting".into()));
                }
            }
            Primitive::Segment { a, b } => {
                if !finite(a) || !finite(b) || a == b {
                    return Err(GeometryError::Validation("segment endpoints must be distinct and finite".into()));
                }
            }
            Primitive::Sigma => {}
        }
        Ok(())
    }

    pub fn contains(&self, p: Point) -> bool {
        match self {
            Primitive::Disk { center, radius } => (p - center).norm_sqr().sqrt() <= *radius,
            Primitive::Polygon { vertices } => polygon_contains(vertices, p),
            Primitive::Segment { a, b } => on_segment(*a, *b, p),
            Primitive::Sigma => p.norm_sqr().sqrt() >= 1.0,
        }
    }

    /// Closest point of the primitive to `p` together with the distance.
    pub fn nearest(&self, p: Point) -> (Point, f64) {
        match self {
            Primitive::Disk { center, radius } => {
                let v = p - center;
                let d = v.norm_sqr().sqrt();
                if d <= *radius {
                    (p, 0.0)
                } else {
                    (center + v * (radius / d), d - radius)
                }
            }
            Primitive::Polygon { vertices } => {
                if polygon_contains(vertices, p) {
                    return (p, 0.0);
                }
                let n = vertices.len();
                let mut best = (vertices[0], f64::INFINITY);
                for i in 0..n {
                    let f = segment_foot(vertices[i], vertices[(i + 1) % n], p);
                    let d = (f - p).norm_sqr().sqrt();
                    if d < best.1 {
                        best = (f, d);
                    }
                }
                best
            }
            Primitive::Segment { a, b } => {
                let f = segment_foot(*a, *b, p);
                (f, (f - p).norm_sqr().sqrt())
            }
            Primitive::Sigma => {
                let r = p.norm_sqr().sqrt();
                if r >= 1.0 {
                    (p, 0.0)
                } else if r == 0.0 {
                    (Complex64::new(1.0, 0.0), 1.0)
                } else {
                    (p / r, 1.0 - r)
                }
            }
        }
    }

    /// Bounding disk `(center, radius)`; `None` for unbounded primitives.
    fn bounding_disk(&self) -> Option<(Point, f64)> {
        match self {
            Primitive::Disk { center, radius } => Some((*center, *radius)),
            Primitive::Polygon { vertices } => {
                let b = bbox_of(vertices.iter().copied());
                let c = Complex64::new(0.5 * (b.x0 + b.x1), 0.5 * (b.y0 + b.y1));
                let r = vertices.iter().map(|v| (v - c).norm_sqr().sqrt()).fold(0.0, f64::max);
                Some((c, r))
            }
            Primitive::Segment { a, b } => Some(((a + b) * 0.5, 0.5 * (b - a).norm_sqr().sqrt())),
            Primitive::Sigma => None,
        }
    }

    fn bbox(&self) -> Option<Rect> {
        match self {
            Primitive::Disk { center, radius } => {
                Some(Rect::new(center.re - radius, center.im - radius, center.re + radius, center.im + radius))
            }
            Primitive::Polygon { vertices } => Some(bbox_of(vertices.iter().copied())),
            Primitive::Segment { a, b } => Some(bbox_of([*a, *b].into_iter())),
            Primitive::Sigma => None,
        }
    }

    /// Image under the similarity `z -> scale * z + shift` (`scale` complex).
    fn similarity(&self, scale: Complex64, shift: Complex64) -> Primitive {
        let m = |p: &Point| scale * p + shift;
        match self {
            Primitive::Disk { center, radius } => Primitive::Disk { center: m(center), radius: radius * scale.norm_sqr().sqrt() },
            Primitive::Polygon { vertices } => Primitive::Polygon { vertices: vertices.iter().map(m).collect() },
            Primitive::Segment { a, b } => Primitive::Segment { a: m(a), b: m(b) },
            Primitive::Sigma => Primitive::Sigma,
        }
    }
}

fn bbox_of(points: impl Iterator<Item = Point>) -> Rect {
    let mut r = Rect::new(f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        r.x0 = r.x0.min(p.re);
        r.y0 = r.y0.min(p.im);
        r.x1 = r.x1.max(p.re);
        r.y1 = r.y1.max(p.im);
    }
    r
}

#[derive(Debug, Clone, Copy)]
struct Bound {
    center: Point,
    radius: f64,
}

#[derive(Debug, Clone)]
enum NodeKind {
    Leaf { start: usize, end: usize },
    Inner { left: usize, right: usize },
}

#[derive(Debug, Clone)]
struct Node {
    bound: Bound,
    kind: NodeKind,
}

const LEAF_SIZE: usize = 4;

/// Disk containing every disk in `items`.
fn enclosing(bounds: &[Option<Bound>], items: &[usize]) -> Bound {
    let b = bbox_of(items.iter().flat_map(|&i| {
        let d = bounds[i].expect("bounded primitive");
        [d.center - Complex64::new(d.radius, d.radius), d.center + Complex64::new(d.radius, d.radius)]
    }));
    let center = Complex64::new(0.5 * (b.x0 + b.x1), 0.5 * (b.y0 + b.y1));
    let radius = items
        .iter()
        .map(|&i| {
            let d = bounds[i].expect("bounded primitive");
            (d.center - center).norm_sqr().sqrt() + d.radius
        })
        .fold(0.0, f64::max);
    Bound { center, radius }
}

/// Bounding-disk hierarchy over the bounded primitives; `order` lists
/// primitive indices so that each leaf owns a contiguous range.
#[derive(Debug, Clone, Default)]
struct Hierarchy {
    nodes: Vec<Node>,
    order: Vec<usize>,
    unbounded: Vec<usize>,
}

impl Hierarchy {
    fn build(bounds: &[Option<Bound>]) -> Self {
        let mut order: Vec<usize> = (0..bounds.len()).filter(|&i| bounds[i].is_some()).collect();
        let unbounded = (0..bounds.len()).filter(|&i| bounds[i].is_none()).collect();
        let mut nodes = Vec::new();
        if !order.is_empty() {
            let n = order.len();
            Self::split(bounds, &mut order, 0, n, &mut nodes);
        }
        Hierarchy { nodes, order, unbounded }
    }

    fn split(bounds: &[Option<Bound>], order: &mut [usize], start: usize, end: usize, nodes: &mut Vec<Node>) -> usize {
        let bound = enclosing(bounds, &order[start..end]);
        let id = nodes.len();
        nodes.push(Node { bound, kind: NodeKind::Leaf { start, end } });
        if end - start <= LEAF_SIZE {
            return id;
        }
        let c = bbox_of(order[start..end].iter().map(|&i| bounds[i].unwrap().center));
        let key = |i: &usize| {
            let p = bounds[*i].unwrap().center;
            if c.width() >= c.height() { p.re } else { p.im }
        };
        let mid = (start + end) / 2;
        order[start..end].select_nth_unstable_by(mid - start, |a, b| key(a).total_cmp(&key(b)));
        let left = Self::split(bounds, order, start, mid, nodes);
        let right = Self::split(bounds, order, mid, end, nodes);
        nodes[id].kind = NodeKind::Inner { left, right };
        id
    }
}

/// A planar set given as a union of primitives. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Region {
    primitives: Vec<Primitive>,
    bounds: Vec<Option<Bound>>,
    hierarchy: Hierarchy,
}

impl PartialEq for Region {
    fn eq(&self, other: &Self) -> bool {
        self.primitives == other.primitives
    }
}

impl Default for Region {
    fn default() -> Self {
        Region::empty()
    }
}

impl Region {
    pub fn new(primitives: Vec<Primitive>) -> Result<Self, GeometryError> {
        let mut primitives = primitives;
        for p in primitives.iter_mut() {
            if let Primitive::Polygon { vertices } = p {
                if vertices.len() > 3 && vertices.first() == vertices.last() {
                    vertices.pop();
                }
            }
            p.validate()?;
        }
        let bounds = primitives
            .iter()
            .map(|p| p.bounding_disk().map(|(center, radius)| Bound { center, radius }))
            .collect();
        Ok(Region::from_parts(primitives, bounds))
    }

    fn from_parts(primitives: Vec<Primitive>, bounds: Vec<Option<Bound>>) -> Self {
        let hierarchy = Hierarchy::build(&bounds);
        Region { primitives, bounds, hierarchy }
    }

    pub fn empty() -> Self {
        Region::from_parts(Vec::new(), Vec::new())
    }

    pub fn disk(center: Point, radius: f64) -> Result<Self, GeometryError> {
        Region::new(vec![Primitive::Disk { center, radius }])
    }

    pub fn segment(a: Point, b: Point) -> Result<Self, GeometryError> {
        Region::new(vec![Primitive::Segment { a, b }])
    }

    pub fn polygon(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        Region::new(vec![Primitive::Polygon { vertices }])
    }

    pub fn sigma() -> Self {
        Region::new(vec![Primitive::Sigma]).expect("sigma is always valid")
    }

    pub fn primitives(&self) -> &[Primitive] {
        &self.primitives
    }

    pub fn is_empty(&self) -> bool {
        self.primitives.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.bounds.iter().all(Option::is_some)
    }

    pub fn contains(&self, p: Point) -> bool {
        if self.hierarchy.unbounded.iter().any(|&i| self.primitives[i].contains(p)) {
            return true;
        }
        let nodes = &self.hierarchy.nodes;
        if nodes.is_empty() {
            return false;
        }
        // Bounding radii carry rounding error; keep a relative margin.
        let outside = |b: &Bound| (p - b.center).norm_sqr().sqrt() - b.radius > 1e-12 * (1.0 + b.radius);
        let mut stack = [0usize; 48];
        let mut top = 1;
        while top > 0 {
            top -= 1;
            let node = &nodes[stack[top]];
            if outside(&node.bound) {
                continue;
            }
            match node.kind {
                NodeKind::Leaf { start, end } => {
                    let hit = self.hierarchy.order[start..end]
                        .iter()
                        .any(|&i| !outside(&self.bounds[i].unwrap()) && self.primitives[i].contains(p));
                    if hit {
                        return true;
                    }
                }
                NodeKind::Inner { left, right } => {
                    stack[top] = left;
                    stack[top + 1] = right;
                    top += 2;
                }
            }
        }
        false
    }

    /// Membership with segments thickened to width `2 * thickening`; used by
    /// the rasterizers so that slits survive the midpoint rule.
    pub fn contains_thick(&self, p: Point, thickening: f64) -> bool {
        self.primitives.iter().any(|q| match q {
            Primitive::Segment { .. } => q.nearest(p).1 <= thickening,
            _ => q.contains(p),
        })
    }

    /// Euclidean distance from `p` to the union; zero inside.
    pub fn distance(&self, p: Point) -> Result<f64, GeometryError> {
        self.nearest(p).map(|(_, d)| d).ok_or(GeometryError::EmptyRegion)
    }

    pub fn nearest(&self, p: Point) -> Option<(Point, f64)> {
        self.nearest_within(p, f64::INFINITY)
    }

    /// Closest point among primitives strictly closer than `cap`. Primitives
    /// whose bounding disk lies at distance `>= cap` are skipped.
    pub fn nearest_within(&self, p: Point, cap: f64) -> Option<(Point, f64)> {
        let mut best: Option<(Point, f64)> = None;
        let mut best_d = cap;
        let mut consider = |i: usize, best_d: &mut f64| {
            let (q, d) = self.primitives[i].nearest(p);
            if d < *best_d {
                *best_d = d;
                best = Some((q, d));
            }
        };
        for &i in &self.hierarchy.unbounded {
            consider(i, &mut best_d);
        }
        let nodes = &self.hierarchy.nodes;
        if nodes.is_empty() || best_d == 0.0 {
            return best;
        }
        let gap = |b: &Bound| (p - b.center).norm_sqr().sqrt() - b.radius;
        // Depth is logarithmic in the primitive count; 48 slots is ample.
        let mut stack = [0usize; 48];
        let mut top = 1;
        while top > 0 {
            top -= 1;
            let id = stack[top];
            let node = &nodes[id];
            if gap(&node.bound) >= best_d {
                continue;
            }
            match node.kind {
                NodeKind::Leaf { start, end } => {
                    for &i in &self.hierarchy.order[start..end] {
                        if gap(&self.bounds[i].unwrap()) < best_d {
                            consider(i, &mut best_d);
                        }
                    }
                    if best_d == 0.0 {
                        break;
                    }
                }
                NodeKind::Inner { left, right } => {
                    let (gl, gr) = (gap(&nodes[left].bound), gap(&nodes[right].bound));
                    // Visit the nearer child first.
                    let (near, far) = if gl <= gr { (left, right) } else { (right, left) };
                    stack[top] = far;
                    stack[top + 1] = near;
                    top += 2;
                }
            }
        }
        best
    }

    /// Bounding box of the union; `None` when empty or unbounded.
    pub fn bbox(&self) -> Option<Rect> {
        let mut acc: Option<Rect> = None;
        for p in &self.primitives {
            let b = p.bbox()?;
            acc = Some(match acc {
                Some(a) => a.union(&b),
                None => b,
            });
        }
        acc
    }

    /// Largest imaginary part over the region (bounded regions only).
    pub fn sup_im(&self) -> Option<f64> {
        self.bbox().map(|b| b.y1)
    }

    /// Largest modulus over the region (bounded regions only).
    pub fn sup_norm(&self) -> Option<f64> {
        if self.is_empty() {
            return Some(0.0);
        }
        let mut m: f64 = 0.0;
        for p in &self.primitives {
            m = m.max(match p {
                Primitive::Disk { center, radius } => center.norm_sqr().sqrt() + radius,
                Primitive::Polygon { vertices } => vertices.iter().map(|v| v.norm_sqr().sqrt()).fold(0.0, f64::max),
                Primitive::Segment { a, b } => a.norm_sqr().sqrt().max(b.norm_sqr().sqrt()),
                Primitive::Sigma => return None,
            });
        }
        Some(m)
    }

    /// Diameter of the bounding box, used as the region's length scale.
    pub fn scale(&self) -> f64 {
        self.bbox().map(|b| b.diagonal()).unwrap_or(0.0)
    }

    pub fn union(&self, other: &Region) -> Region {
        let mut primitives = self.primitives.clone();
        primitives.extend(other.primitives.iter().cloned());
        let mut bounds = self.bounds.clone();
        bounds.extend(other.bounds.iter().cloned());
        Region::from_parts(primitives, bounds)
    }

    /// Image under `z -> scale * z + shift`. Sigma is only preserved by maps
    /// fixing the unit circle, so it is rejected otherwise.
    pub fn similarity(&self, scale: Complex64, shift: Complex64) -> Result<Region, GeometryError> {
        let is_rotation = (scale.norm_sqr().sqrt() - 1.0).abs() < 1e-15 && shift == Complex64::new(0.0, 0.0);
        if !is_rotation && self.primitives.iter().any(|p| matches!(p, Primitive::Sigma)) {
            return Err(GeometryError::Validation("sigma is not invariant under this map".into()));
        }
        Region::new(self.primitives.iter().map(|p| p.similarity(scale, shift)).collect())
    }

    pub fn scaled(&self, lambda: f64) -> Result<Region, GeometryError> {
        self.similarity(Complex64::new(lambda, 0.0), Complex64::new(0.0, 0.0))
    }

    /// Mirror image in the real axis.
    pub fn conj(&self) -> Region {
        let primitives = self
            .primitives
            .iter()
            .map(|p| match p {
                Primitive::Disk { center, radius } => Primitive::Disk { center: center.conj(), radius: *radius },
                Primitive::Polygon { vertices } => {
                    // Reflection reverses orientation; keep the vertex cycle valid.
                    Primitive::Polygon { vertices: vertices.iter().rev().map(|v| v.conj()).collect() }
                }
                Primitive::Segment { a, b } => Primitive::Segment { a: a.conj(), b: b.conj() },
                Primitive::Sigma => Primitive::Sigma,
            })
            .collect();
        Region::new(primitives).expect("reflection preserves validity")
    }

    pub fn to_json(&self) -> String {
        let file = RegionFile { primitives: self.primitives.iter().map(PrimitiveSpec::from).collect() };
        serde_json::to_string(&file).expect("region serialization cannot fail")
    }
}

/// Parse a region file: `{"primitives":[...]}`.
pub fn parse_region(text: &str) -> Result<Region, GeometryError> {
    let file: RegionFile = serde_json::from_str(text).map_err(|e| GeometryError::Syntax(e.to_string()))?;
    Region::new(file.primitives.into_iter().map(Primitive::from).collect())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegionFile {
    primitives: Vec<PrimitiveSpec>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum PrimitiveSpec {
    Disk { center: [f64; 2], radius: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
    Segment { a: [f64; 2], b: [f64; 2] },
    Sigma {},
}

fn pt(v: [f64; 2]) -> Point {
    Complex64::new(v[0], v[1])
}

fn arr(p: Point) -> [f64; 2] {
    [p.re, p.im]
}

impl From<PrimitiveSpec> for Primitive {
    fn from(s: PrimitiveSpec) -> Self {
        match s {
            PrimitiveSpec::Disk { center, radius } => Primitive::Disk { center: pt(center), radius },
            PrimitiveSpec::Polygon { vertices } => Primitive::Polygon { vertices: vertices.into_iter().map(pt).collect() },
            PrimitiveSpec::Segment { a, b } => Primitive::Segment { a: pt(a), b: pt(b) },
            PrimitiveSpec::Sigma {} => Primitive::Sigma,
        }
    }
}

impl From<&Primitive> for PrimitiveSpec {
    fn from(p: &Primitive) -> Self {
        match p {
            Primitive::Disk { center, radius } => PrimitiveSpec::Disk { center: arr(*center), radius: *radius },
            Primitive::Polygon { vertices } => PrimitiveSpec::Polygon { vertices: vertices.iter().map(|v| arr(*v)).collect() },
            Primitive::Segment { a, b } => PrimitiveSpec::Segment { a: arr(*a), b: arr(*b) },
            Primitive::Sigma => PrimitiveSpec::Sigma {},
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64, y: f64) -> Point {
        Complex64::new(x, y)
    }

    #[test]
    fn parses_the_documented_examples() {
        let r = parse_region(r#"{"primitives":[{"disk":{"center":[0,1],"radius":0.5}}]}"#).unwrap();
        assert_eq!(r.primitives(), &[Primitive::Disk { center: c(0.0, 1.0), radius: 0.5 }]);

        let r = parse_region(r#"{"primitives":[]}"#).unwrap();
        assert!(r.is_empty());

        let r = parse_region(r#"{"primitives":[{"segment":{"a":[0,0],"b":[0,1]}}]}"#).unwrap();
        assert_eq!(r.primitives(), &[Primitive::Segment { a: c(0.0, 0.0), b: c(0.0, 1.0) }]);

        let r = parse_region(r#"{"primitives":[{"sigma":{}}]}"#).unwrap();
        assert_eq!(r.primitives(), &[Primitive::Sigma]);
    }

    #[test]
    fn syntax_and_validation_errors_are_distinguished() {
        assert!(matches!(parse_region("{\"primitives\":[{"), Err(GeometryError::Syntax(_))));
        assert!(matches!(parse_region(r#"{"primitives":[{"blob":{}}]}"#), Err(GeometryError::Syntax(_))));
        assert!(matches!(
            parse_region(r#"{"primitives":[{"disk":{"center":[0,0],"radius":-1}}]}"#),
            Err(GeometryError::Validation(_))
        ));
        let bowtie = r#"{"primitives":[{"polygon":{"vertices":[[0,0],[1,1],[1,0],[0,1]]}}]}"#;
        assert!(matches!(parse_region(bowtie), Err(GeometryError::Validation(_))));
        assert!(matches!(
            parse_region(r#"{"primitives":[{"segment":{"a":[1,1],"b":[1,1]}}]}"#),
            Err(GeometryError::Validation(_))
        ));
    }

    #[test]
    fn membership_examples() {
        let unit = Region::disk(c(0.0, 0.0), 1.0).unwrap();
        assert!(unit.contains(c(0.0, 0.0)));
        assert!(!unit.contains(c(2.0, 0.0)));
        assert!(!Region::sigma().contains(c(0.5, 0.0)));
        assert!(Region::sigma().contains(c(0.0, -1.0)));

        let square = Region::polygon(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)]).unwrap();
        assert!(square.contains(c(1.0, 0.5)), "polygon boundary counts as inside");
        assert!(square.contains(c(0.0, 0.0)));
        assert!(!square.contains(c(1.0 + 1e-12, 0.5)));

        let slit = Region::segment(c(0.0, 0.0), c(0.0, 1.0)).unwrap();
        assert!(slit.contains(c(0.0, 0.25)));
        assert!(!slit.contains(c(1e-300, 0.25)));
    }

    #[test]
    fn distance_examples() {
        let unit = Region::disk(c(0.0, 0.0), 1.0).unwrap();
        assert_eq!(unit.distance(c(3.0, 0.0)).unwrap(), 2.0);
        let slit = Region::segment(c(0.0, 0.0), c(0.0, 1.0)).unwrap();
        assert_eq!(slit.distance(c(1.0, 0.0)).unwrap(), 1.0);
        let two = Region::disk(c(-2.0, 0.0), 1.0).unwrap().union(&Region::disk(c(3.0, 0.0), 0.5).unwrap());
        let p = c(0.5, 0.0);
        assert_eq!(two.distance(p).unwrap(), 1.5f64.min(2.0));
        assert!(matches!(Region::empty().distance(p), Err(GeometryError::EmptyRegion)));
    }

    #[test]
    fn nearest_within_respects_the_cap() {
        let unit = Region::disk(c(0.0, 0.0), 1.0).unwrap();
        assert!(unit.nearest_within(c(3.0, 0.0), 1.5).is_none());
        let (q, d) = unit.nearest_within(c(3.0, 0.0), 2.5).unwrap();
        assert_eq!(q, c(1.0, 0.0));
        assert_eq!(d, 2.0);
    }

    #[test]
    fn json_round_trip_preserves_primitives() {
        let r = Region::new(vec![
            Primitive::Disk { center: c(0.25, -0.5), radius: 0.125 },
            Primitive::Polygon { vertices: vec![c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.7)] },
            Primitive::Segment { a: c(-1.0, 0.1), b: c(0.3, 0.9) },
            Primitive::Sigma,
        ])
        .unwrap();
        let back = parse_region(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn closing_vertex_is_dropped() {
        let r = Region::polygon(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 0.0)]).unwrap();
        match &r.primitives()[0] {
            Primitive::Polygon { vertices } => assert_eq!(vertices.len(), 3),
            _ => unreachable!(),
        }
    }

    #[test]
    fn hierarchy_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut prims = Vec::new();
        for _ in 0..60 {
            let a = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            match rng.gen_range(0..3) {
                0 => prims.push(Primitive::Disk { center: a, radius: rng.gen_range(0.01..0.3) }),
                1 => prims.push(Primitive::Segment { a, b: a + c(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)) }),
                _ => prims.push(Primitive::Polygon { vertices: vec![a, a + c(0.2, 0.0), a + c(0.1, 0.25)] }),
            }
        }
        let region = Region::new(prims.clone()).unwrap();
        for _ in 0..2000 {
            let p = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let brute = prims.iter().map(|q| q.nearest(p).1).fold(f64::INFINITY, f64::min);
            let (_, d) = region.nearest(p).unwrap();
            assert!((d - brute).abs() < 1e-12);
            assert_eq!(region.contains(p), prims.iter().any(|q| q.contains(p)));
            match region.nearest_within(p, 0.2) {
                Some((_, d)) => assert!(d <= 0.2 && (d - brute).abs() < 1e-12),
                None => assert!(brute > 0.2 - 1e-12),
            }
        }
    }
}
