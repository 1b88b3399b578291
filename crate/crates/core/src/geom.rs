//! Small 2D vector helpers shared by the mesh and FEM layers.

pub type Point = [f64; 2];

#[inline]
pub fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn scale(a: Point, s: f64) -> Point {
    [a[0] * s, a[1] * s]
}

#[inline]
pub fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub fn norm(a: Point) -> f64 {
    a[0].hypot(a[1])
}

#[inline]
pub fn dist(a: Point, b: Point) -> f64 {
    norm(sub(a, b))
}

#[inline]
pub fn midpoint(a: Point, b: Point) -> Point {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
}

/// Twice the signed area of the triangle `a, b, c` (positive when
/// counterclockwise). Not robust; use `robust::orient2d` where the sign
/// matters near degeneracy.
#[inline]
pub fn signed_area2(a: Point, b: Point, c: Point) -> f64 {
    cross(sub(b, a), sub(c, a))
}

/// Circumcenter of a non-degenerate triangle.
pub fn circumcenter(a: Point, b: Point, c: Point) -> Point {
    let d = 2.0 * signed_area2(a, b, c);
    let a2 = dot(a, a);
    let b2 = dot(b, b);
    let c2 = dot(c, c);
    let ux = (a2 * (b[1] - c[1]) + b2 * (c[1] - a[1]) + c2 * (a[1] - b[1])) / d;
    let uy = (a2 * (c[0] - b[0]) + b2 * (a[0] - c[0]) + c2 * (b[0] - a[0])) / d;
    [ux, uy]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circumcenter_of_right_triangle() {
        let cc = circumcenter([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]);
        assert!((cc[0] - 0.5).abs() < 1e-15 && (cc[1] - 0.5).abs() < 1e-15);
    }
}
