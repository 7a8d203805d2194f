use xdipole_validation::{brute_force_sphere, random_point, random_wire_model, welzl_sphere};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use xdipole::geometry::{min_enclosing_sphere, smallest_enclosing_sphere, Point};

#[test]
fn matches_brute_force_and_welzl_on_random_wire_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in 0..50 {
        let model = random_wire_model(&mut rng, 2 + case % 5, 0.05, 3.5e9);
        let pts = model.endpoints();
        let got = min_enclosing_sphere(&model);
        let (bc, br) = brute_force_sphere(&pts);
        let (wc, wr) = welzl_sphere(&pts);
        let c = Point::from(got.center);
        assert!((got.radius_a - br).abs() < 1e-9 * br, "case {case}: {} vs {br}", got.radius_a);
        assert!((got.radius_a - wr).abs() < 1e-9 * wr, "case {case}: {} vs {wr}", got.radius_a);
        assert!((c - bc).norm() < 1e-7 * br, "case {case}");
        assert!((c - wc).norm() < 1e-7 * wr, "case {case}");
    }
}

#[test]
fn support_points_lie_on_the_boundary() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for _ in 0..20 {
        let pts: Vec<Point> = (0..9).map(|_| random_point(&mut rng, 1.0)).collect();
        let s = smallest_enclosing_sphere(&pts).unwrap();
        assert!((2..=4).contains(&s.support.len()));
        for &i in &s.support {
            assert!(((pts[i] - s.center).norm() - s.radius).abs() < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn removing_a_point_never_grows_the_sphere(
        raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0), 3..10),
        drop in 0usize..10,
    ) {
        let pts: Vec<Point> = raw.iter().map(|&(x, y, z)| Point::new(x, y, z)).collect();
        let full = smallest_enclosing_sphere(&pts).unwrap();
        let mut fewer = pts.clone();
        fewer.remove(drop % pts.len());
        let sub = smallest_enclosing_sphere(&fewer).unwrap();
        prop_assert!(sub.radius <= full.radius * (1.0 + 1e-12));
        for p in &pts {
            prop_assert!((p - full.center).norm() <= full.radius * (1.0 + 1e-9) + 1e-12);
        }
    }

    #[test]
    fn radius_is_equivariant_under_rigid_motion_and_scale(
        raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0), 2..8),
        shift in (-5.0f64..5.0, -5.0f64..5.0, -5.0f64..5.0),
        scale in 0.1f64..10.0,
    ) {
        let pts: Vec<Point> = raw.iter().map(|&(x, y, z)| Point::new(x, y, z)).collect();
        let t = Point::new(shift.0, shift.1, shift.2);
        let moved: Vec<Point> = pts.iter().map(|p| p * scale + t).collect();
        let a = smallest_enclosing_sphere(&pts).unwrap().radius;
        let b = smallest_enclosing_sphere(&moved).unwrap().radius;
        prop_assert!((b - scale * a).abs() < 1e-8 * (1.0 + scale * a));
    }
}
