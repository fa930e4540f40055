//! Boundary of a union of equal-radius disks as circular arcs.
//!
//! For each circle the angular intervals covered by the *open* disks of the
//! other centers are removed; what remains becomes arcs, and arc endpoints
//! shared by at least two arcs become vertices. Strict-interior pruning keeps
//! tangency points (two centers at distance exactly 2ε) on the boundary; a
//! tangency splits the circle so the tangency point appears as a vertex.
//!
//! Neighbor lookups go through a uniform spatial hash with cell size 2ε
//! (disks farther apart than 2ε cannot interact), giving O(m·k) behavior for
//! k = mean number of neighbors. An all-pairs path is kept for equivalence
//! testing.

use crate::geometry::{wrap_angle, CircularArc, Point2, TAU};
use crate::setmodel::{finite_approximating_set, SetModelError, SetSpec};
use crate::tol;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ArrangementError {
    #[error("eps must be positive, got {0}")]
    BadEps(f64),
    #[error("empty center list")]
    EmptyCenters,
    #[error("spacing must be positive, got {0}")]
    BadSpacing(f64),
    #[error(transparent)]
    SetModel(#[from] SetModelError),
}

/// Uniform grid hash over a fixed point set.
pub struct SpatialHash {
    cell: f64,
    points: Vec<Point2>,
    map: HashMap<(i64, i64), Vec<u32>>,
}

impl SpatialHash {
    pub fn build(points: &[Point2], cell: f64) -> Self {
        let mut map: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            map.entry(Self::key_of(p, cell)).or_default().push(i as u32);
        }
        SpatialHash { cell, points: points.to_vec(), map }
    }

    fn key_of(p: &Point2, cell: f64) -> (i64, i64) {
        ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64)
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    /// Indices of stored points within distance `r` of `q`.
    pub fn indices_within(&self, q: &Point2, r: f64) -> Vec<u32> {
        let k0 = (((q.x - r) / self.cell).floor()) as i64;
        let k1 = (((q.x + r) / self.cell).floor()) as i64;
        let l0 = (((q.y - r) / self.cell).floor()) as i64;
        let l1 = (((q.y + r) / self.cell).floor()) as i64;
        let r2 = r * r;
        let mut out = Vec::new();
        for k in k0..=k1 {
            for l in l0..=l1 {
                if let Some(bucket) = self.map.get(&(k, l)) {
                    for &i in bucket {
                        if self.points[i as usize].dist2(q) <= r2 {
                            out.push(i);
                        }
                    }
                }
            }
        }
        out
    }

    /// Minimum distance from `q` to the point set, if it is ≤ `r`.
    pub fn min_dist_within(&self, q: &Point2, r: f64) -> Option<f64> {
        let mut best: Option<f64> = None;
        for i in self.indices_within(q, r) {
            let d = self.points[i as usize].dist(q);
            if best.map_or(true, |b| d < b) {
                best = Some(d);
            }
        }
        best
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundaryArcSet {
    pub eps: f64,
    pub level: u32,
    pub arcs: Vec<CircularArc>,
    pub vertices: Vec<Point2>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BoundarySample {
    pub position: Point2,
    pub generating_center: Point2,
    pub arc_id: usize,
    pub arclength_coord: f64,
}

/// Angular interval (start, end) on a circle with end > start (may extend
/// past 2π before normalization).
type AngInterval = (f64, f64);

fn merge_intervals(mut iv: Vec<AngInterval>, tol: f64) -> Vec<AngInterval> {
    if iv.is_empty() {
        return iv;
    }
    iv.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out: Vec<AngInterval> = vec![iv[0]];
    for (s, e) in iv.into_iter().skip(1) {
        let last = out.last_mut().unwrap();
        if s <= last.1 + tol {
            last.1 = last.1.max(e);
        } else {
            out.push((s, e));
        }
    }
    out
}

enum NeighborLookup<'a> {
    Hash(&'a SpatialHash),
    AllPairs,
}

fn neighbors(lookup: &NeighborLookup, centers: &[Point2], i: usize, r: f64) -> Vec<u32> {
    match lookup {
        NeighborLookup::Hash(h) => h
            .indices_within(&centers[i], r)
            .into_iter()
            .filter(|&j| j as usize != i)
            .collect(),
        NeighborLookup::AllPairs => (0..centers.len() as u32)
            .filter(|&j| j as usize != i && centers[j as usize].dist(&centers[i]) <= r)
            .collect(),
    }
}

fn boundary_with_lookup(
    centers: &[Point2],
    eps: f64,
    lookup: NeighborLookup,
) -> Result<BoundaryArcSet, ArrangementError> {
    if !(eps > 0.0) {
        return Err(ArrangementError::BadEps(eps));
    }
    if centers.is_empty() {
        return Err(ArrangementError::EmptyCenters);
    }
    // drop exact duplicates so d = 0 cannot occur below
    let mut uniq: Vec<Point2> = Vec::with_capacity(centers.len());
    for c in centers {
        if !uniq.iter().any(|q| q.dist(c) <= 1e-13) {
            uniq.push(*c);
        }
    }
    let centers = &uniq[..];

    let mut arcs: Vec<CircularArc> = Vec::new();
    let mut endpoints: Vec<Point2> = Vec::new();

    for i in 0..centers.len() {
        let ci = centers[i];
        let mut covered: Vec<AngInterval> = Vec::new();
        let mut tangency_angles: Vec<f64> = Vec::new();
        for j in neighbors(&lookup, centers, i, 2.0 * eps + tol::TANGENT_SNAP) {
            let cj = centers[j as usize];
            let d = ci.dist(&cj);
            let phi = wrap_angle((cj.y - ci.y).atan2(cj.x - ci.x));
            if (d - 2.0 * eps).abs() < tol::TANGENT_SNAP {
                tangency_angles.push(phi);
                continue;
            }
            if d >= 2.0 * eps {
                continue;
            }
            let half = (d / (2.0 * eps)).acos();
            covered.push((phi - half, phi + half));
        }
        // normalize to intervals inside [0, 2π) split at the wrap point
        let mut flat: Vec<AngInterval> = Vec::new();
        for (s0, e0) in covered {
            let width = e0 - s0;
            debug_assert!(width >= 0.0);
            let s = wrap_angle(s0);
            if s + width > TAU {
                flat.push((s, TAU));
                flat.push((0.0, s + width - TAU));
            } else {
                flat.push((s, s + width));
            }
        }
        let merged = merge_intervals(flat, tol::ANGLE);
        let total: f64 = merged.iter().map(|(s, e)| e - s).sum();
        if total >= TAU - tol::ANGLE {
            continue; // circle fully covered
        }
        // complement of the merged cover in [0, 2π)
        let mut free: Vec<AngInterval> = Vec::new();
        if merged.is_empty() {
            free.push((0.0, TAU));
        } else {
            let first_start = merged[0].0;
            let mut cursor = merged[0].1;
            for (s, e) in merged.iter().skip(1) {
                if *s > cursor + tol::ANGLE {
                    free.push((cursor, *s));
                }
                cursor = cursor.max(*e);
            }
            // wrap-around gap from the last end to the first start
            let gap = first_start + TAU - cursor;
            if gap > tol::ANGLE {
                free.push((cursor, cursor + gap));
            }
        }
        // split free intervals at tangency angles so tangency points
        // become arc endpoints
        for &phi in &tangency_angles {
            let mut split: Vec<AngInterval> = Vec::new();
            for (s, e) in free {
                let mut cut = None;
                for cand in [phi, phi + TAU, phi - TAU] {
                    if cand > s + tol::ANGLE && cand < e - tol::ANGLE {
                        cut = Some(cand);
                        break;
                    }
                }
                // a tangency on an otherwise free circle splits the full turn
                if free_is_full_circle(s, e) {
                    split.push((phi, phi + TAU));
                } else if let Some(c) = cut {
                    split.push((s, c));
                    split.push((c, e));
                } else {
                    split.push((s, e));
                }
            }
            free = split;
            // tangency point is an endpoint shared by the two split arcs
            endpoints.push(Point2::raw(ci.x + eps * phi.cos(), ci.y + eps * phi.sin()));
        }
        for (s, e) in free {
            if e - s <= tol::ANGLE {
                continue;
            }
            let arc = CircularArc::new(ci, eps, s, e - s).expect("valid pruned arc");
            if !arc.is_full_circle() {
                endpoints.push(arc.start_point());
                endpoints.push(arc.end_point());
            }
            arcs.push(arc);
        }
    }

    Ok(BoundaryArcSet { eps, level: 0, arcs, vertices: cluster_vertices(&endpoints) })
}

fn free_is_full_circle(s: f64, e: f64) -> bool {
    e - s >= TAU - tol::ANGLE
}

/// Cluster arc endpoints within the merge tolerance; clusters hit at least
/// twice are vertices.
fn cluster_vertices(endpoints: &[Point2]) -> Vec<Point2> {
    let mut reps: Vec<(Point2, usize)> = Vec::new();
    for p in endpoints {
        match reps.iter_mut().find(|(q, _)| q.dist(p) <= 100.0 * tol::VERTEX_MERGE) {
            Some((_, count)) => *count += 1,
            None => reps.push((*p, 1)),
        }
    }
    let mut verts: Vec<Point2> = reps
        .into_iter()
        .filter(|(_, count)| *count >= 2)
        .map(|(p, _)| p)
        .collect();
    verts.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).unwrap());
    verts
}

/// Boundary of ∪ B_ε(c) over `centers`, hash-accelerated.
pub fn disk_union_boundary(centers: &[Point2], eps: f64) -> Result<BoundaryArcSet, ArrangementError> {
    if !(eps > 0.0) {
        return Err(ArrangementError::BadEps(eps));
    }
    if centers.is_empty() {
        return Err(ArrangementError::EmptyCenters);
    }
    let hash = SpatialHash::build(centers, 2.0 * eps);
    boundary_with_lookup(centers, eps, NeighborLookup::Hash(&hash))
}

/// All-pairs reference path (no spatial hash); used to cross-check the
/// accelerated path.
pub fn disk_union_boundary_bruteforce(
    centers: &[Point2],
    eps: f64,
) -> Result<BoundaryArcSet, ArrangementError> {
    boundary_with_lookup(centers, eps, NeighborLookup::AllPairs)
}

/// Arclength-uniform samples per arc; endpoints always included. For a full
/// circle the duplicate closing sample is collapsed.
pub fn sample_boundary(
    bas: &BoundaryArcSet,
    spacing: f64,
) -> Result<Vec<BoundarySample>, ArrangementError> {
    if !(spacing > 0.0) {
        return Err(ArrangementError::BadSpacing(spacing));
    }
    let mut out = Vec::new();
    for (arc_id, arc) in bas.arcs.iter().enumerate() {
        let len = arc.arclength();
        let m = (len / spacing).ceil().max(1.0) as usize;
        let last = if arc.is_full_circle() { m - 1 } else { m };
        for j in 0..=last {
            let s = len * j as f64 / m as f64;
            out.push(BoundarySample {
                position: arc.point_at_arclength(s),
                generating_center: arc.center,
                arc_id,
                arclength_coord: s,
            });
        }
    }
    Ok(out)
}

/// Hausdorff distances between the sampled boundary at each level
/// n ∈ [n_lo, n_hi) and the sampled boundary at level n_hi.
pub fn boundary_convergence(
    spec: &SetSpec,
    eps: f64,
    n_lo: u32,
    n_hi: u32,
    spacing: f64,
) -> Result<Vec<(u32, f64)>, ArrangementError> {
    let sampled = |n: u32| -> Result<Vec<Point2>, ArrangementError> {
        let approx = finite_approximating_set(spec, n, eps)?;
        let mut bas = disk_union_boundary(&approx.points, eps)?;
        bas.level = n;
        Ok(sample_boundary(&bas, spacing)?
            .into_iter()
            .map(|s| s.position)
            .collect())
    };
    let reference = sampled(n_hi)?;
    let mut out = Vec::new();
    for n in n_lo..n_hi {
        let pts = sampled(n)?;
        let d = crate::geometry::hausdorff_distance(&pts, &reference)
            .expect("boundary samples are non-empty");
        out.push((n, d));
    }
    Ok(out)
}

/// Signed total turning of each closed boundary loop: sum of arc angular
/// extents plus exterior angles at vertices. For the outer loop of a simply
/// covered union this is 2π.
/// Arc-index loops of the boundary: arcs chained end point to start point,
/// one list per closed loop (same successor rule as [`total_turning`]).
pub fn boundary_loops(bas: &BoundaryArcSet) -> Vec<Vec<usize>> {
    let n = bas.arcs.len();
    let mut used = vec![false; n];
    let mut loops = Vec::new();
    for start in 0..n {
        if used[start] {
            continue;
        }
        let mut ids = Vec::new();
        let mut i = start;
        loop {
            used[i] = true;
            ids.push(i);
            let arc = &bas.arcs[i];
            if arc.is_full_circle() && bas.vertices.is_empty() {
                break;
            }
            let end = arc.end_point();
            let Some(j) = (0..n).find(|&j| {
                (j != i || bas.arcs[j].is_full_circle())
                    && !(used[j] && j != start)
                    && bas.arcs[j].start_point().dist(&end) <= 1e-7
            }) else {
                break;
            };
            if j == start {
                break;
            }
            i = j;
        }
        loops.push(ids);
    }
    loops
}

pub fn total_turning(bas: &BoundaryArcSet) -> Vec<f64> {
    let n = bas.arcs.len();
    if n == 0 {
        return Vec::new();
    }
    // successor of arc i: the arc whose start point matches i's end point
    let mut used = vec![false; n];
    let mut loops = Vec::new();
    for start in 0..n {
        if used[start] {
            continue;
        }
        let mut turning = 0.0;
        let mut i = start;
        loop {
            used[i] = true;
            let arc = &bas.arcs[i];
            turning += arc.extent();
            if arc.is_full_circle() && bas.vertices.is_empty() {
                break;
            }
            let end = arc.end_point();
            let Some(j) = (0..n).find(|&j| {
                (j != i || bas.arcs[j].is_full_circle())
                    && !(used[j] && j != start)
                    && bas.arcs[j].start_point().dist(&end) <= 1e-7
            }) else {
                break;
            };
            // exterior angle between incoming and outgoing tangents
            let t_in = bas.arcs[i].theta_end + std::f64::consts::FRAC_PI_2;
            let t_out = bas.arcs[j].theta_start + std::f64::consts::FRAC_PI_2;
            let mut delta = wrap_angle(t_out - t_in);
            if delta > std::f64::consts::PI {
                delta -= TAU;
            }
            turning += delta;
            if j == start {
                break;
            }
            i = j;
        }
        loops.push(turning);
    }
    loops
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PI;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::raw(x, y)
    }

    #[test]
    fn single_disk_full_circle() {
        let bas = disk_union_boundary(&[p(0.0, 0.0)], 1.0).unwrap();
        assert_eq!(bas.arcs.len(), 1);
        assert!(bas.arcs[0].is_full_circle());
        assert!(bas.vertices.is_empty());
    }

    #[test]
    fn two_disk_lens_vertices() {
        // (x±1)² + y² = 1.5625 meet at x = 0, y = ±0.75
        let bas = disk_union_boundary(&[p(-1.0, 0.0), p(1.0, 0.0)], 1.25).unwrap();
        assert_eq!(bas.arcs.len(), 2);
        assert_eq!(bas.vertices.len(), 2);
        assert!(bas.vertices.iter().any(|v| v.dist(&p(0.0, -0.75)) < 1e-9));
        assert!(bas.vertices.iter().any(|v| v.dist(&p(0.0, 0.75)) < 1e-9));
    }

    #[test]
    fn tangent_disks_vertex_with_zero_gap() {
        let bas = disk_union_boundary(&[p(-1.0, 0.0), p(1.0, 0.0)], 1.0).unwrap();
        assert_eq!(bas.arcs.len(), 2);
        assert_eq!(bas.vertices.len(), 1);
        assert!(bas.vertices[0].dist(&p(0.0, 0.0)) < 1e-9);
        // both arcs are full turns starting and ending at the tangency
        for arc in &bas.arcs {
            assert!((arc.extent() - TAU).abs() < 1e-9);
            assert!(arc.start_point().dist(&p(0.0, 0.0)) < 1e-9);
        }
    }

    #[test]
    fn covered_circle_dropped() {
        // middle center surrounded tightly: its circle is fully covered
        let centers = [p(0.0, 0.0), p(0.4, 0.0), p(-0.4, 0.0), p(0.0, 0.4), p(0.0, -0.4)];
        let bas = disk_union_boundary(&centers, 1.0).unwrap();
        assert!(bas.arcs.iter().all(|a| a.center.dist(&p(0.0, 0.0)) > 0.1));
    }

    #[test]
    fn coverage_soundness_bruteforce() {
        let centers: Vec<Point2> = (0..30)
            .map(|i| {
                let t = i as f64 * 0.7;
                p((t * 1.3).sin() * 2.0, (t * 0.9).cos() * 2.0)
            })
            .collect();
        let eps = 0.8;
        let bas = disk_union_boundary(&centers, eps).unwrap();
        for s in sample_boundary(&bas, 0.05).unwrap() {
            for c in &centers {
                assert!(
                    s.position.dist(c) >= eps - 1e-9,
                    "sample strictly inside a disk"
                );
            }
            assert!((s.position.dist(&s.generating_center) - eps).abs() < 1e-10);
        }
    }

    #[test]
    fn hash_matches_bruteforce() {
        let centers: Vec<Point2> = (0..50)
            .map(|i| {
                let t = i as f64;
                p((t * 0.37).sin() * 3.0, (t * 0.53).cos() * 3.0)
            })
            .collect();
        let a = disk_union_boundary(&centers, 0.6).unwrap();
        let b = disk_union_boundary_bruteforce(&centers, 0.6).unwrap();
        assert_eq!(a.arcs.len(), b.arcs.len());
        for (x, y) in a.arcs.iter().zip(&b.arcs) {
            assert!(x.center.dist(&y.center) < 1e-15);
            assert!((x.theta_start - y.theta_start).abs() < 1e-12);
            assert!((x.theta_end - y.theta_end).abs() < 1e-12);
        }
    }

    #[test]
    fn vertex_symmetry_under_reflection() {
        let centers = [p(-1.0, 0.3), p(0.0, -0.2), p(1.0, 0.3)];
        let mirrored: Vec<Point2> = centers.iter().map(|c| p(-c.x, c.y)).collect();
        let a = disk_union_boundary(&centers, 0.9).unwrap();
        let b = disk_union_boundary(&mirrored, 0.9).unwrap();
        assert_eq!(a.vertices.len(), b.vertices.len());
        for v in &a.vertices {
            let refl = p(-v.x, v.y);
            assert!(b.vertices.iter().any(|w| w.dist(&refl) < 1e-10));
        }
    }

    #[test]
    fn sample_counts() {
        let bas = disk_union_boundary(&[p(0.0, 0.0)], 1.0).unwrap();
        let samples = sample_boundary(&bas, PI / 2.0).unwrap();
        assert_eq!(samples.len(), 4); // closed-curve duplicate collapsed
        assert!(sample_boundary(&bas, 0.0).is_err());
        let empty = BoundaryArcSet { eps: 1.0, level: 0, arcs: vec![], vertices: vec![] };
        assert!(sample_boundary(&empty, 0.1).unwrap().is_empty());
    }

    #[test]
    fn wedge_samples_outside_all_disks() {
        let bas = disk_union_boundary(&[p(-1.0, 0.0), p(1.0, 0.0)], 1.25).unwrap();
        for s in sample_boundary(&bas, 0.05).unwrap() {
            assert!(s.position.dist(&p(-1.0, 0.0)) >= 1.25 - 1e-9);
            assert!(s.position.dist(&p(1.0, 0.0)) >= 1.25 - 1e-9);
        }
    }

    #[test]
    fn total_turning_single_circle() {
        let bas = disk_union_boundary(&[p(0.0, 0.0)], 1.0).unwrap();
        let loops = total_turning(&bas);
        assert_eq!(loops.len(), 1);
        assert!((loops[0] - TAU).abs() < 1e-9);
    }

    #[test]
    fn total_turning_two_disk_union() {
        let bas = disk_union_boundary(&[p(-1.0, 0.0), p(1.0, 0.0)], 1.25).unwrap();
        let loops = total_turning(&bas);
        assert_eq!(loops.len(), 1);
        assert!((loops[0] - TAU).abs() < 1e-6, "turning {}", loops[0]);
    }

    #[test]
    fn convergence_point_set_exact() {
        let spec = SetSpec::from_points("one", &[p(0.0, 0.0)]).unwrap();
        for (_, d) in boundary_convergence(&spec, 1.0, 3, 6, 0.02).unwrap() {
            assert!(d < 1e-12);
        }
    }

    #[test]
    fn convergence_segment_bound() {
        let spec = SetSpec::new(
            "seg",
            vec![crate::setmodel::Primitive::segment(p(0.0, 0.0), p(1.0, 0.0))],
        )
        .unwrap();
        let spacing = 0.01;
        for (n, d) in boundary_convergence(&spec, 0.5, 4, 8, spacing).unwrap() {
            let bound = 2f64.sqrt() * (0.5f64).powi(n as i32) + spacing;
            assert!(d <= bound, "level {n}: {d} > {bound}");
        }
    }

    #[test]
    fn spatial_hash_queries() {
        let pts = [p(0.0, 0.0), p(1.0, 0.0), p(5.0, 5.0)];
        let h = SpatialHash::build(&pts, 1.0);
        let near = h.indices_within(&p(0.1, 0.0), 1.0);
        assert_eq!(near.len(), 2);
        assert!(h.min_dist_within(&p(4.8, 5.0), 0.5).is_some());
        assert!(h.min_dist_within(&p(3.0, 0.0), 0.5).is_none());
    }
}
