//! Delaunay triangulation by paraboloid lifting, its convex hull, and
//! point-in-polygon queries.

use beamsim::geometry::{delaunay, Point2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> beamsim::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let points: Vec<Point2> = (0..200).map(|_| Point2::new(rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0))).collect();
    let tri = delaunay(&points)?;
    let hull = tri.convex_hull()?;
    println!("{} points -> {} triangles", tri.points().len(), tri.triangles().len());
    println!("hull: {} vertices, area {:.3}", hull.len(), hull.area());
    let covered: f64 = (0..tri.triangles().len()).map(|t| tri.triangle_area(t)).sum();
    println!("sum of triangle areas {covered:.3}");
    for q in [Point2::new(5.0, 5.0), Point2::new(-1.0, 5.0)] {
        println!("({}, {}) inside hull: {}", q.x, q.y, hull.contains(q));
    }
    Ok(())
}
