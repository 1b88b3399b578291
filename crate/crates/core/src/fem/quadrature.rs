//! Symmetric Gauss rules on the reference triangle and unit segment.
//!
//! Triangle weights sum to the reference area 1/2. The tabulated orbits are
//! the classic symmetric rules; `monomial exactness` tests pin every rule to
//! its declared degree.

use std::sync::OnceLock;

/// Quadrature points in barycentric coordinates with weights summing to 1/2.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub degree: usize,
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    fn from_orbits(degree: usize, orbits: &[Orbit]) -> Self {
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for orbit in orbits {
            match *orbit {
                Orbit::Centroid(w) => {
                    points.push([1.0 / 3.0; 3]);
                    weights.push(0.5 * w);
                }
                Orbit::Three(a, w) => {
                    let c = 1.0 - 2.0 * a;
                    for p in [[c, a, a], [a, c, a], [a, a, c]] {
                        points.push(p);
                        weights.push(0.5 * w);
                    }
                }
                Orbit::Six(a, b, w) => {
                    let c = 1.0 - a - b;
                    for p in [[c, a, b], [c, b, a], [a, c, b], [b, c, a], [a, b, c], [b, a, c]] {
                        points.push(p);
                        weights.push(0.5 * w);
                    }
                }
            }
        }
        QuadratureRule { degree, points, weights }
    }
}

enum Orbit {
    Centroid(f64),
    Three(f64, f64),
    Six(f64, f64, f64),
}

/// Gauss–Legendre nodes and weights on [0, 1] for n = 5, in closed form.
fn gauss_legendre_01_5() -> ([f64; 5], [f64; 5]) {
    let s1 = (5.0 - 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0;
    let s2 = (5.0 + 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0;
    let w0 = 128.0 / 225.0;
    let w1 = (322.0 + 13.0 * 70.0f64.sqrt()) / 900.0;
    let w2 = (322.0 - 13.0 * 70.0f64.sqrt()) / 900.0;
    let nodes = [-s2, -s1, 0.0, s1, s2];
    let weights = [w2, w1, w0, w1, w2];
    let mut n01 = [0.0; 5];
    let mut w01 = [0.0; 5];
    for i in 0..5 {
        n01[i] = 0.5 * (nodes[i] + 1.0);
        w01[i] = 0.5 * weights[i];
    }
    (n01, w01)
}

/// Product Gauss rule on the triangle via the collapsed-square (Duffy)
/// transform: exact for total degree ≤ 2n − 2 with an n-point 1D rule.
fn collapsed_gauss_rule(degree: usize, n: usize) -> QuadratureRule {
    assert_eq!(n, 5, "only the 5-point closed-form rule is tabulated");
    let (nodes, weights) = gauss_legendre_01_5();
    let mut points = Vec::with_capacity(n * n);
    let mut wts = Vec::with_capacity(n * n);
    for (i, &u) in nodes.iter().enumerate() {
        for (j, &v) in nodes.iter().enumerate() {
            // lambda1 = u(1-v), lambda2 = v; Jacobian (1-v).
            let l1 = u * (1.0 - v);
            let l2 = v;
            points.push([1.0 - l1 - l2, l1, l2]);
            wts.push(weights[i] * weights[j] * (1.0 - v));
        }
    }
    QuadratureRule { degree, points, weights: wts }
}

/// The rule of smallest tabulated size that is exact for polynomials of
/// total degree `degree` (supported up to 8).
pub fn triangle_rule(degree: usize) -> &'static QuadratureRule {
    static RULES: OnceLock<Vec<QuadratureRule>> = OnceLock::new();
    let rules = RULES.get_or_init(|| {
        vec![
            QuadratureRule::from_orbits(1, &[Orbit::Centroid(1.0)]),
            QuadratureRule::from_orbits(2, &[Orbit::Three(1.0 / 6.0, 1.0 / 3.0)]),
            QuadratureRule::from_orbits(
                4,
                &[
                    Orbit::Three(0.445948490915965, 0.223381589678011),
                    Orbit::Three(0.091576213509771, 0.109951743655322),
                ],
            ),
            QuadratureRule::from_orbits(
                5,
                &[
                    Orbit::Centroid(0.225),
                    Orbit::Three(0.101286507323456, 0.125939180544827),
                    Orbit::Three(0.470142064105115, 0.132394152788506),
                ],
            ),
            QuadratureRule::from_orbits(
                6,
                &[
                    Orbit::Three(0.063089014491502, 0.050844906370207),
                    Orbit::Three(0.249286745170910, 0.116786275726379),
                    Orbit::Six(0.310352451033785, 0.053145049844816, 0.082851075618374),
                ],
            ),
            collapsed_gauss_rule(8, 5),
        ]
    });
    rules
        .iter()
        .find(|r| r.degree >= degree)
        .unwrap_or_else(|| panic!("no triangle rule of degree {degree}"))
}

/// Gauss rule on the unit segment [0, 1]; weights sum to 1.
#[derive(Debug, Clone)]
pub struct EdgeRule {
    pub degree: usize,
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss–Legendre rule on [0, 1] exact for polynomials of degree `degree`.
pub fn edge_rule(degree: usize) -> &'static EdgeRule {
    static RULES: OnceLock<Vec<EdgeRule>> = OnceLock::new();
    let rules = RULES.get_or_init(|| {
        let s3 = 0.5 / 3.0f64.sqrt();
        let s35 = 0.5 * (0.6f64).sqrt();
        vec![
            EdgeRule { degree: 1, points: vec![0.5], weights: vec![1.0] },
            EdgeRule {
                degree: 3,
                points: vec![0.5 - s3, 0.5 + s3],
                weights: vec![0.5, 0.5],
            },
            EdgeRule {
                degree: 5,
                points: vec![0.5 - s35, 0.5, 0.5 + s35],
                weights: vec![5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0],
            },
        ]
    });
    rules
        .iter()
        .find(|r| r.degree >= degree)
        .unwrap_or_else(|| panic!("no edge rule of degree {degree}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exact integral of x^a y^b over the reference triangle: a! b! / (a+b+2)!.
    fn exact_monomial(a: u32, b: u32) -> f64 {
        let fact = |n: u32| (1..=n as u64).product::<u64>() as f64;
        fact(a) * fact(b) / fact(a + b + 2)
    }

    #[test]
    fn triangle_rules_are_exact_to_declared_degree() {
        for degree in [1usize, 2, 4, 5, 6, 8] {
            let rule = triangle_rule(degree);
            assert_eq!(rule.degree, degree);
            let wsum: f64 = rule.weights.iter().sum();
            assert!((wsum - 0.5).abs() < 1e-14, "degree {degree} weight sum {wsum}");
            for a in 0..=degree as u32 {
                for b in 0..=(degree as u32 - a) {
                    let mut num = 0.0;
                    for (p, w) in rule.points.iter().zip(&rule.weights) {
                        let (x, y) = (p[1], p[2]);
                        num += w * x.powi(a as i32) * y.powi(b as i32);
                    }
                    let exact = exact_monomial(a, b);
                    assert!(
                        (num - exact).abs() < 1e-14,
                        "degree {degree}, x^{a} y^{b}: {num} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn edge_rules_are_exact_to_declared_degree() {
        for degree in [1usize, 3, 5] {
            let rule = edge_rule(degree);
            for k in 0..=degree as u32 {
                let num: f64 = rule
                    .points
                    .iter()
                    .zip(&rule.weights)
                    .map(|(&x, &w)| w * x.powi(k as i32))
                    .sum();
                let exact = 1.0 / (k as f64 + 1.0);
                assert!((num - exact).abs() < 1e-15, "degree {degree}, x^{k}");
            }
        }
    }
}
