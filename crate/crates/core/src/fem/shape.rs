//! Lagrange P1 and P2 bases on the reference triangle.
//!
//! Barycentric coordinates `(l0, l1, l2)` with `l0 = 1 - x - y`. P2 node
//! order is vertices then edge nodes of local edges (0,1), (1,2), (2,0).

/// P1 basis values at a barycentric point.
#[inline]
pub fn p1_values(b: [f64; 3]) -> [f64; 3] {
    b
}

/// P1 reference gradients (constant).
#[inline]
pub fn p1_ref_grads() -> [[f64; 2]; 3] {
    [[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]]
}

/// P2 basis values at a barycentric point.
#[inline]
pub fn p2_values(b: [f64; 3]) -> [f64; 6] {
    let [l0, l1, l2] = b;
    [
        l0 * (2.0 * l0 - 1.0),
        l1 * (2.0 * l1 - 1.0),
        l2 * (2.0 * l2 - 1.0),
        4.0 * l0 * l1,
        4.0 * l1 * l2,
        4.0 * l2 * l0,
    ]
}

/// P2 reference gradients at a barycentric point.
#[inline]
pub fn p2_ref_grads(b: [f64; 3]) -> [[f64; 2]; 6] {
    let [l0, l1, l2] = b;
    [
        [-(4.0 * l0 - 1.0), -(4.0 * l0 - 1.0)],
        [4.0 * l1 - 1.0, 0.0],
        [0.0, 4.0 * l2 - 1.0],
        [4.0 * (l0 - l1), -4.0 * l1],
        [4.0 * l2, 4.0 * l1],
        [-4.0 * l2, 4.0 * (l0 - l2)],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn p1_at_centroid() {
        let v = p1_values([1.0 / 3.0; 3]);
        for x in v {
            assert!((x - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn p2_lagrange_property_at_nodes() {
        let nodes: [[f64; 3]; 6] = [
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.5, 0.5, 0.0],
            [0.0, 0.5, 0.5],
            [0.5, 0.0, 0.5],
        ];
        for (i, &node) in nodes.iter().enumerate() {
            let v = p2_values(node);
            for (j, &vj) in v.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((vj - expect).abs() < 1e-15, "node {i}, basis {j}");
            }
        }
    }

    proptest! {
        #[test]
        fn p2_partition_of_unity(x in 0.0f64..1.0, y in 0.0f64..1.0) {
            prop_assume!(x + y <= 1.0);
            let b = [1.0 - x - y, x, y];
            let vsum: f64 = p2_values(b).iter().sum();
            prop_assert!((vsum - 1.0).abs() < 1e-13);
            let g = p2_ref_grads(b);
            for k in 0..2 {
                let gsum: f64 = g.iter().map(|gi| gi[k]).sum();
                prop_assert!(gsum.abs() < 1e-13);
            }
        }
    }
}
