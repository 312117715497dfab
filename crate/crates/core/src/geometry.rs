//! Planar computational geometry for beam borders.
//!
//! Footprints are handled in the (longitude, latitude) degree plane: `x` is
//! longitude and `y` latitude, so "counter-clockwise" means counter-clockwise
//! on an ordinary map. This planar treatment is an approximation that holds
//! for footprints a few degrees across.
//!
//! [`delaunay`] builds the triangulation by lifting every point onto the
//! paraboloid `z = x^2 + y^2`, computing the 3-D convex hull of the lifted
//! points and projecting its downward-facing facets back to the plane.
//! All predicates run on coordinates rescaled into the unit square with a
//! fixed epsilon of `1e-12`.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::geo::GeoPoint;

const EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }
}

impl From<GeoPoint> for Point2 {
    fn from(p: GeoPoint) -> Self {
        Point2::new(p.lon(), p.lat())
    }
}

/// Twice the signed area of triangle `abc`; positive when counter-clockwise.
pub fn orient2d(a: Point2, b: Point2, c: Point2) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// Positive when `d` lies strictly inside the circumcircle of the
/// counter-clockwise triangle `abc`.
pub fn incircle(a: Point2, b: Point2, c: Point2, d: Point2) -> f64 {
    let (adx, ady) = (a.x - d.x, a.y - d.y);
    let (bdx, bdy) = (b.x - d.x, b.y - d.y);
    let (cdx, cdy) = (c.x - d.x, c.y - d.y);
    let ad = adx * adx + ady * ady;
    let bd = bdx * bdx + bdy * bdy;
    let cd = cdx * cdx + cdy * cdy;
    adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx)
}

/// Simple polygon, vertices in counter-clockwise order, implicitly closed.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point2>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidArgument(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        let n = vertices.len();
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(Error::InvalidArgument(format!(
                    "polygon repeats vertex {i} consecutively"
                )));
            }
        }
        Ok(Polygon { vertices })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Border latitudes, in vertex order.
    pub fn latitudes(&self) -> Vec<f64> {
        self.vertices.iter().map(|p| p.y).collect()
    }

    /// Border longitudes, in vertex order.
    pub fn longitudes(&self) -> Vec<f64> {
        self.vertices.iter().map(|p| p.x).collect()
    }

    pub fn signed_area(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
                a.x * b.y - b.x * a.y
            })
            .sum::<f64>()
            / 2.0
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    /// `(min_x, min_y, max_x, max_y)`
    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        self.vertices.iter().fold(
            (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
            |(a, b, c, d), p| (a.min(p.x), b.min(p.y), c.max(p.x), d.max(p.y)),
        )
    }

    pub fn contains(&self, p: Point2) -> bool {
        point_in_polygon(p, self)
    }

    /// True when every turn is a strict left turn.
    pub fn is_strictly_convex(&self) -> bool {
        let n = self.vertices.len();
        let norm = Normalizer::fit(&self.vertices);
        (0..n).all(|i| {
            let a = norm.apply(self.vertices[i]);
            let b = norm.apply(self.vertices[(i + 1) % n]);
            let c = norm.apply(self.vertices[(i + 2) % n]);
            orient2d(a, b, c) > EPS
        })
    }
}

/// Closed-set membership: points on an edge count as inside.
pub fn point_in_polygon(p: Point2, poly: &Polygon) -> bool {
    let (x0, y0, x1, y1) = poly.bounds();
    let tol = 1e-9 * (1.0 + (x1 - x0).max(y1 - y0));
    if p.x < x0 - tol || p.x > x1 + tol || p.y < y0 - tol || p.y > y1 + tol {
        return false;
    }
    let verts = poly.vertices();
    let n = verts.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (verts[i], verts[(i + 1) % n]);
        if segment_distance(p, a, b) <= tol {
            return true;
        }
        if (a.y > p.y) != (b.y > p.y) {
            let x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x_cross {
                inside = !inside;
            }
        }
    }
    inside
}

fn segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let (qx, qy) = (a.x + t * dx, a.y + t * dy);
    ((p.x - qx).powi(2) + (p.y - qy).powi(2)).sqrt()
}

/// Maps coordinates into a unit box centred on the origin, preserving
/// aspect ratio so circles stay circles.
#[derive(Debug, Clone, Copy)]
struct Normalizer {
    cx: f64,
    cy: f64,
    scale: f64,
}

impl Normalizer {
    fn fit(points: &[Point2]) -> Self {
        let (mut x0, mut y0, mut x1, mut y1) = (
            f64::INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::NEG_INFINITY,
        );
        for p in points {
            x0 = x0.min(p.x);
            y0 = y0.min(p.y);
            x1 = x1.max(p.x);
            y1 = y1.max(p.y);
        }
        let extent = (x1 - x0).max(y1 - y0);
        Normalizer {
            cx: (x0 + x1) / 2.0,
            cy: (y0 + y1) / 2.0,
            scale: if extent > 0.0 { 1.0 / extent } else { 1.0 },
        }
    }

    fn apply(&self, p: Point2) -> Point2 {
        Point2::new((p.x - self.cx) * self.scale, (p.y - self.cy) * self.scale)
    }
}

/// A planar triangulation. Triangles index into `points` and are
/// counter-clockwise.
#[derive(Debug, Clone)]
pub struct Triangulation {
    points: Vec<Point2>,
    triangles: Vec<[usize; 3]>,
    duplicates_removed: usize,
}

impl Triangulation {
    /// Distinct input points, in first-occurrence order.
    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Number of exact duplicate input points that were dropped.
    pub fn duplicates_removed(&self) -> usize {
        self.duplicates_removed
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        orient2d(self.points[a], self.points[b], self.points[c]) / 2.0
    }

    /// The convex hull read off the triangulation boundary: edges used by a
    /// single triangle, chained counter-clockwise, with collinear vertices
    /// dropped. Starts at the lexicographically smallest `(x, y)` vertex.
    pub fn convex_hull(&self) -> Result<Polygon> {
        let mut directed = HashSet::with_capacity(self.triangles.len() * 3);
        for t in &self.triangles {
            for k in 0..3 {
                directed.insert((t[k], t[(k + 1) % 3]));
            }
        }
        let mut next = HashMap::new();
        for &(u, v) in &directed {
            if !directed.contains(&(v, u)) {
                next.insert(u, v);
            }
        }
        let start = *next
            .keys()
            .min_by(|&&a, &&b| lex_cmp(self.points[a], self.points[b]))
            .ok_or(Error::CollinearInput)?;
        let mut ring = vec![start];
        let mut cur = next[&start];
        while cur != start {
            if ring.len() > next.len() {
                return Err(Error::Invariant("triangulation boundary is not a simple cycle".into()));
            }
            ring.push(cur);
            cur = *next
                .get(&cur)
                .ok_or_else(|| Error::Invariant("open triangulation boundary".into()))?;
        }
        let norm = Normalizer::fit(&self.points);
        let pts: Vec<Point2> = ring.iter().map(|&i| self.points[i]).collect();
        let kept = drop_collinear(&pts, &norm);
        Polygon::new(kept)
    }
}

fn lex_cmp(a: Point2, b: Point2) -> std::cmp::Ordering {
    a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y))
}

fn drop_collinear(ring: &[Point2], norm: &Normalizer) -> Vec<Point2> {
    // The first vertex is a lexicographic extreme, hence a strict corner.
    let mut out: Vec<Point2> = Vec::with_capacity(ring.len());
    let n = ring.len();
    for i in 0..n {
        let prev = ring[(i + n - 1) % n];
        let next = ring[(i + 1) % n];
        if orient2d(norm.apply(prev), norm.apply(ring[i]), norm.apply(next)) > EPS {
            out.push(ring[i]);
        }
    }
    out
}

fn dedup(points: &[Point2]) -> (Vec<Point2>, usize) {
    let key = |p: &Point2| ((p.x + 0.0).to_bits(), (p.y + 0.0).to_bits());
    let mut seen = HashSet::with_capacity(points.len());
    let unique: Vec<Point2> = points.iter().copied().filter(|p| seen.insert(key(p))).collect();
    let removed = points.len() - unique.len();
    (unique, removed)
}

/// Counter-clockwise convex hull by monotone chain. Collinear boundary
/// points are dropped; the ring starts at the lexicographically smallest
/// `(x, y)` point.
pub fn convex_hull(points: &[Point2]) -> Result<Polygon> {
    if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
        return Err(Error::InvalidArgument("non-finite point".into()));
    }
    let (mut pts, _) = dedup(points);
    if pts.len() < 3 {
        return Err(Error::CollinearInput);
    }
    let norm = Normalizer::fit(&pts);
    pts.sort_by(|a, b| lex_cmp(*a, *b));

    let mut hull: Vec<Point2> = Vec::with_capacity(pts.len() + 1);
    let turn = |h: &[Point2], p: Point2| {
        let k = h.len();
        orient2d(norm.apply(h[k - 2]), norm.apply(h[k - 1]), norm.apply(p))
    };
    for &p in &pts {
        while hull.len() >= 2 && turn(&hull, p) <= EPS {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && turn(&hull, p) <= EPS {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    if hull.len() < 3 {
        return Err(Error::CollinearInput);
    }
    Polygon::new(hull)
}

type Vec3 = [f64; 3];

fn orient3d(a: Vec3, b: Vec3, c: Vec3, d: Vec3) -> f64 {
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let w = [d[0] - a[0], d[1] - a[1], d[2] - a[2]];
    let n = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    n[0] * w[0] + n[1] * w[1] + n[2] * w[2]
}

/// Incremental 3-D convex hull over lifted points. Faces are stored with
/// outward orientation: interior points give a negative `orient3d`.
struct LiftedHull<'a> {
    pts: &'a [Vec3],
    faces: Vec<[usize; 3]>,
    alive: Vec<bool>,
    edges: HashMap<(usize, usize), usize>,
}

impl<'a> LiftedHull<'a> {
    fn new(pts: &'a [Vec3], seed: [usize; 4]) -> Self {
        let mut hull = LiftedHull {
            pts,
            faces: Vec::new(),
            alive: Vec::new(),
            edges: HashMap::new(),
        };
        let [a, b, c, d] = seed;
        for (f, opposite) in [([a, b, c], d), ([a, b, d], c), ([a, c, d], b), ([b, c, d], a)] {
            let [p, q, r] = f;
            if orient3d(pts[p], pts[q], pts[r], pts[opposite]) < 0.0 {
                hull.add_face([p, q, r]);
            } else {
                hull.add_face([p, r, q]);
            }
        }
        hull
    }

    fn add_face(&mut self, f: [usize; 3]) {
        let id = self.faces.len();
        self.faces.push(f);
        self.alive.push(true);
        for k in 0..3 {
            self.edges.insert((f[k], f[(k + 1) % 3]), id);
        }
    }

    fn height(&self, f: usize, p: usize) -> f64 {
        let [a, b, c] = self.faces[f];
        orient3d(self.pts[a], self.pts[b], self.pts[c], self.pts[p])
    }

    /// Returns false when `p` sees no face (already inside the hull).
    fn insert(&mut self, p: usize) -> bool {
        let live: Vec<usize> = (0..self.faces.len()).filter(|&f| self.alive[f]).collect();
        let mut visible: Vec<usize> = live.iter().copied().filter(|&f| self.height(f, p) > EPS).collect();
        if visible.is_empty() {
            visible = live.iter().copied().filter(|&f| self.height(f, p) > 0.0).collect();
        }
        if visible.is_empty() {
            return false;
        }
        let mut is_visible = vec![false; self.faces.len()];
        for &f in &visible {
            is_visible[f] = true;
        }
        let mut horizon = Vec::new();
        for &f in &visible {
            let t = self.faces[f];
            for k in 0..3 {
                let (u, v) = (t[k], t[(k + 1) % 3]);
                match self.edges.get(&(v, u)) {
                    Some(&twin) if is_visible[twin] => {}
                    _ => horizon.push((u, v)),
                }
            }
        }
        for &f in &visible {
            self.alive[f] = false;
            let t = self.faces[f];
            for k in 0..3 {
                let e = (t[k], t[(k + 1) % 3]);
                if self.edges.get(&e) == Some(&f) {
                    self.edges.remove(&e);
                }
            }
        }
        for (u, v) in horizon {
            self.add_face([u, v, p]);
        }
        true
    }

    /// Facets whose outward normal points down, returned counter-clockwise
    /// in the plane.
    fn lower_facets(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for (f, t) in self.faces.iter().enumerate() {
            if !self.alive[f] {
                continue;
            }
            let [a, b, c] = *t;
            let (pa, pb, pc) = (self.pts[a], self.pts[b], self.pts[c]);
            let normal_z = (pb[0] - pa[0]) * (pc[1] - pa[1]) - (pb[1] - pa[1]) * (pc[0] - pa[0]);
            if normal_z < -EPS {
                out.push([a, c, b]);
            }
        }
        out
    }
}

/// Delaunay triangulation by paraboloid lifting.
///
/// Exact duplicate points are dropped (see
/// [`Triangulation::duplicates_removed`]). Where several triangulations are
/// Delaunay (co-circular points), each such quadrilateral uses the diagonal
/// touching the lowest point index.
pub fn delaunay(points: &[Point2]) -> Result<Triangulation> {
    if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
        return Err(Error::InvalidArgument("non-finite point".into()));
    }
    let (unique, duplicates_removed) = dedup(points);
    if unique.len() < 3 {
        return Err(Error::CollinearInput);
    }
    let norm = Normalizer::fit(&unique);
    let plane: Vec<Point2> = unique.iter().map(|&p| norm.apply(p)).collect();
    let lifted: Vec<Vec3> = plane.iter().map(|p| [p.x, p.y, p.x * p.x + p.y * p.y]).collect();

    let i2 = (2..plane.len())
        .find(|&k| orient2d(plane[0], plane[1], plane[k]).abs() > EPS)
        .ok_or(Error::CollinearInput)?;
    let i3 = (2..plane.len())
        .filter(|&k| k != i2)
        .find(|&k| orient3d(lifted[0], lifted[1], lifted[i2], lifted[k]).abs() > EPS);

    let mut triangles = match i3 {
        None => cocircular_fan(&plane),
        Some(i3) => {
            let mut hull = LiftedHull::new(&lifted, [0, 1, i2, i3]);
            for p in 2..lifted.len() {
                if p != i2 && p != i3 {
                    hull.insert(p);
                }
            }
            hull.lower_facets()
        }
    };
    prefer_low_index_diagonals(&plane, &mut triangles);
    triangles.sort_unstable();

    Ok(Triangulation {
        points: unique,
        triangles,
        duplicates_removed,
    })
}

/// All points on one circle: any triangulation of the convex polygon is
/// Delaunay, so fan out from the lowest index.
fn cocircular_fan(plane: &[Point2]) -> Vec<[usize; 3]> {
    let n = plane.len() as f64;
    let cx = plane.iter().map(|p| p.x).sum::<f64>() / n;
    let cy = plane.iter().map(|p| p.y).sum::<f64>() / n;
    let mut order: Vec<usize> = (0..plane.len()).collect();
    order.sort_by(|&a, &b| {
        let ta = (plane[a].y - cy).atan2(plane[a].x - cx);
        let tb = (plane[b].y - cy).atan2(plane[b].x - cx);
        ta.total_cmp(&tb)
    });
    let lowest = order.iter().position(|&i| i == 0).unwrap_or(0);
    order.rotate_left(lowest);
    (1..order.len() - 1)
        .map(|k| [order[0], order[k], order[k + 1]])
        .collect()
}

/// Flips every co-circular quadrilateral to the diagonal with the smallest
/// endpoint index. Each flip strictly lowers the sorted list of edge
/// minimum indices, so the loop terminates.
fn prefer_low_index_diagonals(plane: &[Point2], triangles: &mut [[usize; 3]]) {
    let mut owner: HashMap<(usize, usize), usize> = HashMap::with_capacity(triangles.len() * 3);
    for (t, tri) in triangles.iter().enumerate() {
        for k in 0..3 {
            owner.insert((tri[k], tri[(k + 1) % 3]), t);
        }
    }
    loop {
        let mut flipped = false;
        for t in 0..triangles.len() {
            for k in 0..3 {
                let tri = triangles[t];
                let (u, v, w) = (tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]);
                let Some(&t2) = owner.get(&(v, u)) else { continue };
                let other = triangles[t2];
                let z = other.iter().copied().find(|&i| i != u && i != v).unwrap_or(u);
                if w.min(z) >= u.min(v) {
                    continue;
                }
                if incircle(plane[u], plane[v], plane[w], plane[z]).abs() > EPS {
                    continue;
                }
                for tri in [tri, other] {
                    for k in 0..3 {
                        owner.remove(&(tri[k], tri[(k + 1) % 3]));
                    }
                }
                // quad u, z, v, w is counter-clockwise
                triangles[t] = [u, z, w];
                triangles[t2] = [z, v, w];
                for (id, tri) in [(t, triangles[t]), (t2, triangles[t2])] {
                    for k in 0..3 {
                        owner.insert((tri[k], tri[(k + 1) % 3]), id);
                    }
                }
                flipped = true;
                break;
            }
        }
        if !flipped {
            break;
        }
    }
}
