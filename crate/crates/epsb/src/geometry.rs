//! Planar primitives: points, unit directions, geodesic arcs on S¹,
//! circular arcs, Hausdorff distance between finite samples.
//!
//! All angles are radians in [0, 2π); angular comparisons use [`tol::ANGLE`].

use crate::tol;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const TAU: f64 = std::f64::consts::TAU;
pub const PI: f64 = std::f64::consts::PI;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("empty sample")]
    EmptySample,
    #[error("non-unit direction ({0}, {1})")]
    NonUnit(f64, f64),
    #[error("non-finite coordinate ({0}, {1})")]
    NonFinite(f64, f64),
    #[error("invalid arc: {0}")]
    InvalidArc(String),
}

/// Normalize an angle into [0, 2π).
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta % TAU;
    if t < 0.0 {
        t += TAU;
    }
    // rem can return TAU for tiny negative inputs after the correction
    if t >= TAU {
        t -= TAU;
    }
    t
}

/// Absolute angular distance between two angles, in [0, π].
pub fn ang_dist(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    d.min(TAU - d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Result<Self, GeometryError> {
        if !x.is_finite() || !y.is_finite() {
            return Err(GeometryError::NonFinite(x, y));
        }
        Ok(Point2 { x, y })
    }

    /// Construction without the finiteness check, for internal arithmetic
    /// whose inputs are already validated.
    pub fn raw(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dist(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn dist2(&self, other: &Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    /// Vector difference self − other as (dx, dy).
    pub fn sub(&self, other: &Point2) -> (f64, f64) {
        (self.x - other.x, self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitDir {
    pub ux: f64,
    pub uy: f64,
}

impl UnitDir {
    /// Accepts a vector whose norm is within [`tol::UNIT_NORM`] of 1 and
    /// renormalizes it.
    pub fn new(ux: f64, uy: f64) -> Result<Self, GeometryError> {
        let n2 = ux * ux + uy * uy;
        if !n2.is_finite() || (n2 - 1.0).abs() > tol::UNIT_NORM {
            return Err(GeometryError::NonUnit(ux, uy));
        }
        let n = n2.sqrt();
        Ok(UnitDir { ux: ux / n, uy: uy / n })
    }

    /// Normalize an arbitrary non-zero vector.
    pub fn from_vec(x: f64, y: f64) -> Result<Self, GeometryError> {
        let n = x.hypot(y);
        if !n.is_finite() || n == 0.0 {
            return Err(GeometryError::NonUnit(x, y));
        }
        Ok(UnitDir { ux: x / n, uy: y / n })
    }

    pub fn from_angle(theta: f64) -> Self {
        UnitDir { ux: theta.cos(), uy: theta.sin() }
    }

    pub fn angle(&self) -> f64 {
        wrap_angle(self.uy.atan2(self.ux))
    }

    pub fn dot(&self, other: &UnitDir) -> f64 {
        self.ux * other.ux + self.uy * other.uy
    }

    pub fn neg(&self) -> UnitDir {
        UnitDir { ux: -self.ux, uy: -self.uy }
    }

    /// Counterclockwise perpendicular.
    pub fn perp(&self) -> UnitDir {
        UnitDir { ux: -self.uy, uy: self.ux }
    }

    /// Angular distance to another direction, in [0, π].
    pub fn ang_to(&self, other: &UnitDir) -> f64 {
        ang_dist(self.angle(), other.angle())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeodesicArcKind {
    ProperArc,
    Singleton,
    AntipodalPair,
    HalfCircle,
    FullCircle,
}

/// A geodesic arc-segment on S¹: the set {u = αa + βb : α, β ≥ 0} ∩ S¹.
///
/// `mid` is the midpoint of the arc (for `AntipodalPair` it equals `a` and
/// carries no information; for `FullCircle` it is arbitrary). For
/// `HalfCircle` the endpoints `a`, `b` are antipodal and `mid` picks the side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicArc {
    pub a: UnitDir,
    pub b: UnitDir,
    pub mid: UnitDir,
    pub kind: GeodesicArcKind,
}

impl GeodesicArc {
    pub fn singleton(v: UnitDir) -> Self {
        GeodesicArc { a: v, b: v, mid: v, kind: GeodesicArcKind::Singleton }
    }

    pub fn antipodal_pair(v: UnitDir) -> Self {
        GeodesicArc { a: v, b: v.neg(), mid: v, kind: GeodesicArcKind::AntipodalPair }
    }

    /// The closed half-circle {u : ⟨pole, u⟩ ≥ 0}, i.e. midpoint `pole`.
    pub fn half_circle(pole: UnitDir) -> Self {
        GeodesicArc {
            a: pole.perp().neg(),
            b: pole.perp(),
            mid: pole,
            kind: GeodesicArcKind::HalfCircle,
        }
    }

    pub fn full_circle() -> Self {
        let e = UnitDir { ux: 1.0, uy: 0.0 };
        GeodesicArc { a: e, b: e, mid: e, kind: GeodesicArcKind::FullCircle }
    }

    /// Angular width of the arc's point set: 0 for singletons and antipodal
    /// pairs, π for half-circles, 2π for the full circle.
    pub fn width(&self) -> f64 {
        match self.kind {
            GeodesicArcKind::Singleton | GeodesicArcKind::AntipodalPair => 0.0,
            GeodesicArcKind::HalfCircle => PI,
            GeodesicArcKind::FullCircle => TAU,
            GeodesicArcKind::ProperArc => 2.0 * self.mid.ang_to(&self.a),
        }
    }
}

/// Construct the geodesic arc-segment [v, w] on S¹.
///
/// For w = −v the point set degenerates to the pair {v, −v} (not a
/// half-circle): nonnegative combinations of v and −v only hit S¹ at the
/// two generators themselves.
pub fn geodesic_arc(v: UnitDir, w: UnitDir) -> GeodesicArc {
    if v.ang_to(&w) <= tol::ANGLE {
        return GeodesicArc::singleton(v);
    }
    if v.ang_to(&w.neg()) <= tol::ANGLE {
        return GeodesicArc::antipodal_pair(v);
    }
    let mid = UnitDir::from_vec(v.ux + w.ux, v.uy + w.uy)
        .expect("non-antipodal pair has nonzero midpoint");
    GeodesicArc { a: v, b: w, mid, kind: GeodesicArcKind::ProperArc }
}

/// True iff `u` lies within angular tolerance `tol` of the arc's point set.
pub fn arc_contains(arc: &GeodesicArc, u: &UnitDir, tol: f64) -> bool {
    match arc.kind {
        GeodesicArcKind::FullCircle => true,
        GeodesicArcKind::Singleton => u.ang_to(&arc.a) <= tol,
        GeodesicArcKind::AntipodalPair => u.ang_to(&arc.a) <= tol || u.ang_to(&arc.b) <= tol,
        GeodesicArcKind::ProperArc | GeodesicArcKind::HalfCircle => {
            u.ang_to(&arc.mid) <= arc.width() / 2.0 + tol
        }
    }
}

/// Hausdorff distance between two non-empty finite point samples.
pub fn hausdorff_distance(a: &[Point2], b: &[Point2]) -> Result<f64, GeometryError> {
    if a.is_empty() || b.is_empty() {
        return Err(GeometryError::EmptySample);
    }
    let one_sided = |from: &[Point2], to: &[Point2]| -> f64 {
        from.iter()
            .map(|p| {
                to.iter()
                    .map(|q| p.dist(q))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    Ok(one_sided(a, b).max(one_sided(b, a)))
}

/// A counterclockwise circular arc on the circle of radius `radius` around
/// `center`, from `theta_start` to `theta_end` with
/// `theta_start ≤ theta_end ≤ theta_start + 2π` (extent 2π = full circle).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircularArc {
    pub center: Point2,
    pub radius: f64,
    pub theta_start: f64,
    pub theta_end: f64,
}

impl CircularArc {
    pub fn new(
        center: Point2,
        radius: f64,
        theta_start: f64,
        extent: f64,
    ) -> Result<Self, GeometryError> {
        if radius <= 0.0 || !radius.is_finite() {
            return Err(GeometryError::InvalidArc(format!("radius {radius}")));
        }
        if !(extent > 0.0 && extent <= TAU + tol::ANGLE) {
            return Err(GeometryError::InvalidArc(format!("extent {extent}")));
        }
        let start = wrap_angle(theta_start);
        Ok(CircularArc { center, radius, theta_start: start, theta_end: start + extent.min(TAU) })
    }

    pub fn extent(&self) -> f64 {
        self.theta_end - self.theta_start
    }

    pub fn arclength(&self) -> f64 {
        self.extent() * self.radius
    }

    pub fn is_full_circle(&self) -> bool {
        self.extent() >= TAU - tol::ANGLE
    }

    pub fn point_at_angle(&self, theta: f64) -> Point2 {
        Point2::raw(
            self.center.x + self.radius * theta.cos(),
            self.center.y + self.radius * theta.sin(),
        )
    }

    /// Point at arclength coordinate `s` ∈ [0, arclength()] from the start.
    pub fn point_at_arclength(&self, s: f64) -> Point2 {
        self.point_at_angle(self.theta_start + s / self.radius)
    }

    pub fn start_point(&self) -> Point2 {
        self.point_at_angle(self.theta_start)
    }

    pub fn end_point(&self) -> Point2 {
        self.point_at_angle(self.theta_end)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::raw(x, y)
    }

    #[test]
    fn hausdorff_identical_sets() {
        assert_eq!(hausdorff_distance(&[p(0.0, 0.0)], &[p(0.0, 0.0)]).unwrap(), 0.0);
    }

    #[test]
    fn hausdorff_single_pair() {
        assert_eq!(hausdorff_distance(&[p(0.0, 0.0)], &[p(3.0, 4.0)]).unwrap(), 5.0);
    }

    #[test]
    fn hausdorff_asymmetric_sample() {
        // brute-force over all pairs gives 1
        let a = [p(0.0, 0.0), p(1.0, 0.0)];
        let b = [p(0.0, 0.0)];
        assert_eq!(hausdorff_distance(&a, &b).unwrap(), 1.0);
        assert_eq!(hausdorff_distance(&b, &a).unwrap(), 1.0);
    }

    #[test]
    fn hausdorff_empty_errors() {
        assert!(hausdorff_distance(&[], &[p(0.0, 0.0)]).is_err());
    }

    #[test]
    fn geodesic_orthogonal_quarter() {
        let v = UnitDir::new(1.0, 0.0).unwrap();
        let w = UnitDir::new(0.0, 1.0).unwrap();
        let arc = geodesic_arc(v, w);
        assert_eq!(arc.kind, GeodesicArcKind::ProperArc);
        assert!((arc.width() - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn geodesic_singleton() {
        let v = UnitDir::new(1.0, 0.0).unwrap();
        assert_eq!(geodesic_arc(v, v).kind, GeodesicArcKind::Singleton);
    }

    #[test]
    fn geodesic_antipodal_is_pair_not_half_circle() {
        let v = UnitDir::new(1.0, 0.0).unwrap();
        let arc = geodesic_arc(v, v.neg());
        assert_eq!(arc.kind, GeodesicArcKind::AntipodalPair);
        // the pair contains only ±v, not e.g. (0,1)
        assert!(arc_contains(&arc, &v, tol::ANGLE));
        assert!(arc_contains(&arc, &v.neg(), tol::ANGLE));
        assert!(!arc_contains(&arc, &UnitDir::new(0.0, 1.0).unwrap(), 1e-6));
    }

    #[test]
    fn arc_contains_midpoint_and_rejects_opposite() {
        let v = UnitDir::new(1.0, 0.0).unwrap();
        let w = UnitDir::new(0.0, 1.0).unwrap();
        let arc = geodesic_arc(v, w);
        let m = UnitDir::new(2f64.sqrt() / 2.0, 2f64.sqrt() / 2.0).unwrap();
        assert!(arc_contains(&arc, &m, tol::ANGLE));
        assert!(!arc_contains(&arc, &UnitDir::new(0.0, -1.0).unwrap(), 1e-6));
        let single = GeodesicArc::singleton(v);
        assert!(arc_contains(&single, &v, tol::ANGLE));
    }

    #[test]
    fn arc_symmetry_in_arguments() {
        let v = UnitDir::from_angle(0.3);
        let w = UnitDir::from_angle(2.1);
        let ab = geodesic_arc(v, w);
        let ba = geodesic_arc(w, v);
        for k in 0..64 {
            let u = UnitDir::from_angle(k as f64 * TAU / 64.0);
            assert_eq!(
                arc_contains(&ab, &u, tol::ANGLE),
                arc_contains(&ba, &u, tol::ANGLE)
            );
        }
    }

    #[test]
    fn half_circle_membership() {
        // {u : <pole, u> >= 0} for pole = (0,1)
        let arc = GeodesicArc::half_circle(UnitDir::new(0.0, 1.0).unwrap());
        assert!(arc_contains(&arc, &UnitDir::new(0.0, 1.0).unwrap(), tol::ANGLE));
        assert!(arc_contains(&arc, &UnitDir::new(1.0, 0.0).unwrap(), tol::ANGLE));
        assert!(arc_contains(&arc, &UnitDir::new(-1.0, 0.0).unwrap(), tol::ANGLE));
        assert!(!arc_contains(&arc, &UnitDir::new(0.0, -1.0).unwrap(), 1e-6));
        assert!((arc.width() - PI).abs() < 1e-12);
    }

    #[test]
    fn proper_arc_members_have_nonnegative_coefficients() {
        // solve u = alpha v + beta w by 2x2 inversion for sampled members
        let v = UnitDir::from_angle(0.7);
        let w = UnitDir::from_angle(1.9);
        let arc = geodesic_arc(v, w);
        let det = v.ux * w.uy - v.uy * w.ux;
        let t0 = arc.mid.angle() - arc.width() / 2.0;
        for k in 0..=20 {
            let u = UnitDir::from_angle(t0 + arc.width() * k as f64 / 20.0);
            let alpha = (u.ux * w.uy - u.uy * w.ux) / det;
            let beta = (v.ux * u.uy - v.uy * u.ux) / det;
            assert!(alpha >= -1e-9 && beta >= -1e-9, "alpha={alpha} beta={beta}");
        }
    }

    #[test]
    fn circular_arc_sampling() {
        let arc = CircularArc::new(p(1.0, 2.0), 2.0, 0.0, PI).unwrap();
        let q = arc.point_at_arclength(arc.arclength());
        assert!(q.dist(&p(-1.0, 2.0)) < 1e-12);
        assert!((arc.arclength() - TAU).abs() < 1e-12);
    }

    #[test]
    fn wrap_angle_range() {
        for t in [-7.0, -TAU, -1e-18, 0.0, 1.0, TAU, 10.0] {
            let w = wrap_angle(t);
            assert!((0.0..TAU).contains(&w), "{t} -> {w}");
        }
    }
}
