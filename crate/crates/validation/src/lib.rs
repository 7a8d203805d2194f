//! Reference computations kept apart from the solver's own code paths.
//!
//! The enclosing-sphere oracles use barycentric algebra instead of the
//! explicit circumcentre formulas in `xdipole::geometry`.

use nalgebra::{DMatrix, DVector, Vector3};
use xdipole::em::{fill_matrix, SolveResult};
use xdipole::geometry::PortId;
use xdipole::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use xdipole::geometry::{Point, Wire, WireModel};

/// Smallest sphere with every point of `support` on its boundary and its
/// centre in their affine hull, via barycentric weights:
/// `c = sum(l_i p_i)`, `|c - p_i|^2 = r^2`, `sum(l_i) = 1`.
pub fn boundary_sphere(support: &[Point]) -> Option<(Point, f64)> {
    match support.len() {
        0 => None,
        1 => Some((support[0], 0.0)),
        n => {
            let m = n + 1;
            let mut a = DMatrix::<f64>::zeros(m, m);
            let mut b = DVector::<f64>::zeros(m);
            let p0 = support[0];
            let q: Vec<Point> = support.iter().map(|p| p - p0).collect();
            for i in 0..n {
                for j in 0..n {
                    a[(i, j)] = 2.0 * q[i].dot(&q[j]);
                }
                a[(i, n)] = 1.0;
                a[(n, i)] = 1.0;
                b[i] = q[i].norm_squared();
            }
            b[n] = 1.0;
            let scale = q.iter().map(|v| v.norm_squared()).fold(0.0, f64::max);
            let svd = a.clone().svd(true, true);
            let smallest = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
            if smallest < 1e-10 * scale.max(1.0) {
                return None;
            }
            let x = svd.solve(&b, 1e-300).ok()?;
            let c: Vector3<f64> = (0..n).map(|i| q[i] * x[i]).sum();
            Some((p0 + c, c.norm()))
        }
    }
}

fn encloses(center: &Point, r: f64, pts: &[Point]) -> bool {
    let scale = pts.iter().map(|p| p.norm()).fold(1e-300, f64::max);
    pts.iter().all(|p| (p - center).norm() <= r + 1e-9 * scale)
}

/// Exhaustive search over every subset of up to four points.
pub fn brute_force_sphere(pts: &[Point]) -> (Point, f64) {
    let n = pts.len();
    let mut best = (Point::zeros(), f64::INFINITY);
    let mut try_support = |idx: &[usize]| {
        let s: Vec<Point> = idx.iter().map(|&i| pts[i]).collect();
        if let Some((c, r)) = boundary_sphere(&s) {
            if r < best.1 && encloses(&c, r, pts) {
                best = (c, r);
            }
        }
    };
    for i in 0..n {
        try_support(&[i]);
        for j in i + 1..n {
            try_support(&[i, j]);
            for k in j + 1..n {
                try_support(&[i, j, k]);
                for l in k + 1..n {
                    try_support(&[i, j, k, l]);
                }
            }
        }
    }
    best
}

/// Welzl's recursion; expects points in general position.
pub fn welzl_sphere(pts: &[Point]) -> (Point, f64) {
    fn rec(p: &[Point], r: &mut Vec<Point>) -> (Point, f64) {
        if p.is_empty() || r.len() == 4 {
            return match r.len() {
                0 => (Point::zeros(), -1.0),
                _ => boundary_sphere(r).expect("support in general position"),
            };
        }
        let (last, rest) = p.split_last().unwrap();
        let (c, rad) = rec(rest, r);
        if rad >= 0.0 && (last - c).norm() <= rad * (1.0 + 1e-12) {
            return (c, rad);
        }
        r.push(*last);
        let out = rec(rest, r);
        r.pop();
        out
    }
    rec(pts, &mut Vec::new())
}

pub fn random_point(rng: &mut ChaCha8Rng, half: f64) -> Point {
    Point::new(rng.random_range(-half..half), rng.random_range(-half..half), rng.random_range(-half..half))
}

/// A model of `count` random thin wires inside a cube of side `2 * half`.
pub fn random_wire_model(rng: &mut ChaCha8Rng, count: usize, half: f64, frequency: f64) -> WireModel {
    let wires = (0..count)
        .map(|_| loop {
            let a = random_point(rng, half);
            let b = random_point(rng, half);
            if (a - b).norm() > 0.2 * half {
                break Wire::new(a, b, 1e-4 * half, None).unwrap();
            }
        })
        .collect();
    WireModel::from_wires(wires, 8, frequency).unwrap()
}

/// A centre-fed straight dipole along `z` on a 20-segment mesh, driven with
/// 1 V and solved by direct LU on the bare impedance matrix.
pub fn fed_dipole(length: f64, radius: f64, frequency: f64) -> (WireModel, SolveResult) {
    let half = Point::new(0.0, 0.0, length / 2.0);
    let wire = Wire::new(-half, half, radius, Some(PortId::DrivenX)).expect("valid dipole");
    let model = WireModel::from_wires(vec![wire], 20, frequency).expect("meshable dipole");
    let system = fill_matrix(&model, frequency).expect("matrix fill");
    let gap = model.port_basis(PortId::DrivenX).expect("fed wire");
    let mut rhs = DVector::zeros(model.basis_count);
    rhs[gap] = Complex64::new(1.0, 0.0);
    let x = system.z_matrix.clone().lu().solve(&rhs).expect("non-singular");
    let v = Complex64::new(1.0, 0.0);
    let i = x[gap];
    let zero = Complex64::new(0.0, 0.0);
    let result = SolveResult {
        currents: x.iter().copied().collect(),
        source_voltage: v,
        driven_port_current: i,
        input_impedance: v / i,
        input_power: 0.5 * (v * i.conj()).re,
        load_current: zero,
        load_voltage: zero,
        frequency,
    };
    (model, result)
}
