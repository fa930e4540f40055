//! Randomized property suites over the library invariants:
//!
//! - Hausdorff distance is a metric on finite point sets,
//! - geodesic arcs contain their endpoints and have symmetric width,
//! - every emitted boundary arc lies on the union boundary (coverage
//!   soundness) and every vertex is equidistant from two generating centers,
//! - local graph representations respect the 1/(sqrt(3) eps) slope bound and
//!   the 2/sqrt(3) curve-speed bound on random point clouds,
//! - dyadic approximating sets are nested across levels.

use epsb::analysis::{
    contributors, extremal_pairs, local_rep, mark_extremal, max_slope, outward_arc,
};
use epsb::arrangement::{disk_union_boundary, sample_boundary};
use epsb::geometry::{arc_contains, geodesic_arc, hausdorff_distance, Point2, UnitDir};
use epsb::setmodel::{finite_approximating_set, SetSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pt(x: f64, y: f64) -> Point2 {
    Point2::new(x, y).unwrap()
}

/// Random cloud with a minimum pairwise separation so that the arrangement
/// stays well-conditioned.
fn random_cloud(seed: u64, max_points: usize, min_sep: f64) -> Vec<Point2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = rng.gen_range(1..=max_points);
    let mut pts: Vec<Point2> = Vec::new();
    for _ in 0..20 * target {
        if pts.len() == target {
            break;
        }
        let c = pt(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if pts.iter().all(|q| q.dist(&c) >= min_sep) {
            pts.push(c);
        }
    }
    pts
}

fn point_vec(n: usize) -> impl Strategy<Value = Vec<Point2>> {
    prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 1..n)
        .prop_map(|v| v.into_iter().map(|(x, y)| pt(x, y)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hausdorff_symmetry(a in point_vec(12), b in point_vec(12)) {
        let dab = hausdorff_distance(&a, &b).unwrap();
        let dba = hausdorff_distance(&b, &a).unwrap();
        prop_assert!((dab - dba).abs() <= 1e-12);
        prop_assert!(dab >= 0.0);
    }

    #[test]
    fn hausdorff_triangle_inequality(
        a in point_vec(10),
        b in point_vec(10),
        c in point_vec(10),
    ) {
        let dab = hausdorff_distance(&a, &b).unwrap();
        let dbc = hausdorff_distance(&b, &c).unwrap();
        let dac = hausdorff_distance(&a, &c).unwrap();
        prop_assert!(dac <= dab + dbc + 1e-12);
    }

    #[test]
    fn geodesic_arc_endpoints_and_symmetry(t1 in 0.0f64..std::f64::consts::TAU, t2 in 0.0f64..std::f64::consts::TAU) {
        let v = UnitDir::from_angle(t1);
        let w = UnitDir::from_angle(t2);
        let arc = geodesic_arc(v, w);
        let rev = geodesic_arc(w, v);
        prop_assert!((arc.width() - rev.width()).abs() <= 1e-12);
        prop_assert!(arc_contains(&arc, &v, 1e-9));
        prop_assert!(arc_contains(&arc, &w, 1e-9));
        prop_assert!(arc_contains(&arc, &arc.mid, 1e-9));
    }
}

/// Angular sample points of every emitted arc lie at distance exactly eps
/// from the generating center and outside every other disk.
#[test]
fn coverage_soundness_random_clouds() {
    for seed in 0..40u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let eps = rng.gen_range(0.3..2.0);
        let centers = random_cloud(seed, 20, 0.1);
        let bas = disk_union_boundary(&centers, eps).unwrap();
        for arc in &bas.arcs {
            for k in 0..5 {
                let t = arc.theta_start
                    + (arc.theta_end - arc.theta_start) * (0.1 + 0.2 * k as f64);
                let p = arc.point_at_angle(t);
                assert!((p.dist(&arc.center) - eps).abs() <= 1e-9);
                let min_d = centers
                    .iter()
                    .map(|c| c.dist(&p))
                    .fold(f64::INFINITY, f64::min);
                assert!(
                    min_d >= eps - 1e-9,
                    "arc interior point inside the union (seed {seed})"
                );
            }
        }
    }
}

/// Every arrangement vertex is equidistant (at eps) from at least two
/// generating centers.
#[test]
fn vertex_equidistance_random_clouds() {
    for seed in 0..40u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(2000 + seed);
        let eps = rng.gen_range(0.3..2.0);
        let centers = random_cloud(seed, 20, 0.1);
        let bas = disk_union_boundary(&centers, eps).unwrap();
        for v in &bas.vertices {
            let on_eps = centers
                .iter()
                .filter(|c| (c.dist(v) - eps).abs() <= 1e-6)
                .count();
            assert!(on_eps >= 2, "vertex with {on_eps} generating centers (seed {seed})");
        }
    }
}

/// Slope and curve-speed bounds of local graph representations over random
/// point clouds: |df/ds| <= 1/(sqrt(3) eps) and the graph curve
/// s -> x + s xi + f(s)(x - y) moves at speed <= 2/sqrt(3).
#[test]
fn local_rep_lipschitz_random_clouds() {
    let mut checked = 0usize;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(3000 + seed);
        let eps = rng.gen_range(0.3..2.0);
        let centers = random_cloud(seed, 50, 0.1);
        let spec = SetSpec::from_points("cloud", &centers).unwrap();
        // cell*sqrt(2) < min separation: every cloud point is its own
        // dyadic representative, so samples lie on the exact eps-boundary.
        let level = (((4.0f64 / eps).ln() / 2f64.ln()).floor() as u32 + 1).max(4);
        let bas = disk_union_boundary(
            &finite_approximating_set(&spec, level, eps).unwrap().points,
            eps,
        )
        .unwrap();
        let samples = sample_boundary(&bas, eps / 4.0).unwrap();
        let slope_bound = 1.0 / (3f64.sqrt() * eps) + 1e-3;
        let speed_bound = 2.0 / 3f64.sqrt() + 1e-3;
        for s in samples.iter().step_by(3) {
            let Ok(mut cs) = contributors(&spec, &s.position, eps, 1e-6) else {
                continue;
            };
            let Ok(oa) = outward_arc(&s.position, &cs) else { continue };
            mark_extremal(&mut cs, &oa);
            for pair in extremal_pairs(&s.position, &cs, &oa) {
                let Ok(rep) = local_rep(&spec, &s.position, &pair, eps, level, 65) else {
                    continue;
                };
                assert!(
                    max_slope(&rep) <= slope_bound,
                    "slope {} > {} (seed {seed})",
                    max_slope(&rep),
                    slope_bound
                );
                // curve speed between consecutive defined samples
                let (bx, by) = (rep.base.x, rep.base.y);
                let (ex, ey) = (bx - pair.y.x, by - pair.y.y);
                let g = |s: f64, f: f64| (bx + s * pair.xi.ux + f * ex, by + s * pair.xi.uy + f * ey);
                let mut prev: Option<(f64, f64, f64)> = None;
                for &(sv, fv) in &rep.samples {
                    if let Some(f) = fv {
                        let (gx, gy) = g(sv, f);
                        if let Some((ps, px, py)) = prev {
                            let speed = ((gx - px).powi(2) + (gy - py).powi(2)).sqrt()
                                / (sv - ps);
                            assert!(
                                speed <= speed_bound,
                                "curve speed {speed} > {speed_bound} (seed {seed})"
                            );
                        }
                        prev = Some((sv, gx, gy));
                    } else {
                        prev = None;
                    }
                }
                checked += 1;
            }
        }
    }
    assert!(checked > 100, "only {checked} representations checked");
}

/// Dyadic approximating sets are nested: every level-n representative is
/// also a representative at level n+1.
#[test]
fn approximating_sets_nested() {
    for seed in 0..30u64 {
        let centers = random_cloud(seed + 4000, 30, 0.05);
        let spec = SetSpec::from_points("cloud", &centers).unwrap();
        let eps = 0.5;
        for n in 4..7u32 {
            let coarse = finite_approximating_set(&spec, n, eps).unwrap();
            let fine = finite_approximating_set(&spec, n + 1, eps).unwrap();
            for p in &coarse.points {
                assert!(
                    fine.points.iter().any(|q| q.dist(p) <= 1e-12),
                    "level-{n} representative lost at level {} (seed {seed})",
                    n + 1
                );
            }
        }
    }
}
