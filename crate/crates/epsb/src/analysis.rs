//! Per-boundary-point analysis.
//!
//! For a point x on the ε-boundary: the contributor set Π(x) (nearest points
//! of E at distance ε), the outward-direction arc Ξ_x (intersection of the
//! closed half-circles {u : ⟨y−x, u⟩ ≤ 0} over contributors y), extremal
//! (ξ, y) pairs with ⟨y−x, ξ⟩ = 0, sampled local boundary graphs
//! g(s) = x + sξ + f(s)(x−y), and the α-profile f¹ + f² for opposing
//! contributor pairs. α stays ≤ 0 near a true boundary point; whether it is
//! strictly negative or keeps returning to zero distinguishes sharp from
//! chain geometry.

use crate::geometry::{GeodesicArc, GeodesicArcKind, GeometryError, Point2, UnitDir, PI, TAU};
use crate::geometry::wrap_angle;
use crate::setmodel::{distance_and_projection, finite_approximating_set, SetModelError, SetSpec};
use crate::arrangement::BoundarySample;
use crate::tol;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("not a boundary point: dist {dist} vs eps {eps}")]
    NotBoundaryPoint { dist: f64, eps: f64 },
    #[error("interior point")]
    InteriorPoint,
    #[error("extremal pair inconsistent with spec")]
    PairInconsistent,
    #[error("mismatched sample grids")]
    GridMismatch,
    #[error("contributors are not opposing")]
    NonOpposing,
    #[error("isolated sample")]
    IsolatedSample,
    #[error(transparent)]
    SetModel(#[from] SetModelError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContributorSet {
    pub point: Point2,
    pub eps: f64,
    pub members: Vec<Point2>,
    /// extremal flags, parallel to `members`; filled by [`mark_extremal`]
    pub extremal: Vec<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutwardArc {
    pub arc: GeodesicArc,
    pub xi1: UnitDir,
    pub xi2: UnitDir,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ExtremalPair {
    pub xi: UnitDir,
    pub y: Point2,
}

/// Sampled local boundary graph for one extremal pair.
///
/// `samples` holds (s, f(s)) on s ∈ [0, ε/2] in the coordinates
/// p(s, t) = x + sξ + t(x − y); `None` marks arguments where no point of the
/// restricted approximating set reaches (the graph domain can have gaps).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LocalRep {
    pub pair: ExtremalPair,
    pub base: Point2,
    pub eps: f64,
    pub level: u32,
    pub samples: Vec<(f64, Option<f64>)>,
    /// approximating-set points inside the half-plane-restricted cone that
    /// generate the graph (kept for residual verification)
    pub cone_centers: Vec<Point2>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlphaProfile {
    pub samples: Vec<(f64, Option<f64>)>,
    /// arguments s > 0 where α returns to zero (within the touch tolerance),
    /// excluding the run attached to s = 0
    pub zero_touches: Vec<f64>,
    /// maximum defined α over s > 0 outside the base run at s = 0
    pub max_away_from_base: Option<f64>,
    pub touch_tol: f64,
}

/// Contributor set of `x`: all nearest points of the spec, required to be at
/// distance ε within `tol_d`.
pub fn contributors(
    spec: &SetSpec,
    x: &Point2,
    eps: f64,
    tol_d: f64,
) -> Result<ContributorSet, AnalysisError> {
    let pr = distance_and_projection(spec, x)?;
    if (pr.distance - eps).abs() > tol_d {
        return Err(AnalysisError::NotBoundaryPoint { dist: pr.distance, eps });
    }
    let n = pr.argmin.len();
    Ok(ContributorSet { point: *x, eps, members: pr.argmin, extremal: vec![false; n] })
}

/// Closed interval [start, end] of angles, end − start ∈ [0, 2π].
type Interval = (f64, f64);

fn intersect_interval_lists(current: &[Interval], other: Interval) -> Vec<Interval> {
    let mut out: Vec<Interval> = Vec::new();
    for &(a, b) in current {
        for k in [-1.0f64, 0.0, 1.0, 2.0] {
            let c = other.0 + k * TAU;
            let d = other.1 + k * TAU;
            let lo = a.max(c);
            let hi = b.min(d);
            if hi - lo >= -tol::ANGLE {
                let piece = (lo, hi.max(lo));
                if !out
                    .iter()
                    .any(|&(s, e)| (s - piece.0).abs() < tol::ANGLE && (e - piece.1).abs() < tol::ANGLE)
                {
                    out.push(piece);
                }
            }
        }
    }
    out
}

/// The outward-direction arc of x: {u : ⟨y−x, u⟩ ≤ 0 for all contributors y}.
///
/// For a single contributor this is a closed half-circle; for an opposing
/// contributor pair it degenerates to the antipodal pair of directions
/// perpendicular to y − x. An empty intersection means x is not on the
/// boundary at all.
pub fn outward_arc(x: &Point2, pi: &ContributorSet) -> Result<OutwardArc, AnalysisError> {
    if pi.members.is_empty() {
        return Err(AnalysisError::InteriorPoint);
    }
    // deduplicate contributor directions
    let mut dirs: Vec<UnitDir> = Vec::new();
    for y in &pi.members {
        let (dx, dy) = y.sub(x);
        let w = UnitDir::from_vec(dx, dy)?;
        if !dirs.iter().any(|v| v.ang_to(&w) <= tol::ANGLE) {
            dirs.push(w);
        }
    }
    if dirs.len() == 1 {
        let pole = dirs[0].neg();
        let arc = GeodesicArc::half_circle(pole);
        return Ok(OutwardArc { arc, xi1: arc.a, xi2: arc.b });
    }
    let mut pieces: Vec<Interval> = {
        let c = wrap_angle(dirs[0].neg().angle());
        vec![(c - PI / 2.0, c + PI / 2.0)]
    };
    for w in dirs.iter().skip(1) {
        let c = wrap_angle(w.neg().angle());
        pieces = intersect_interval_lists(&pieces, (c - PI / 2.0, c + PI / 2.0));
        if pieces.is_empty() {
            return Err(AnalysisError::InteriorPoint);
        }
    }
    // merge pieces that share an endpoint (tolerate wrap duplicates)
    pieces.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    let mut merged: Vec<Interval> = Vec::new();
    for piece in pieces {
        match merged.last_mut() {
            Some(last) if piece.0 <= last.1 + tol::ANGLE => last.1 = last.1.max(piece.1),
            _ => merged.push(piece),
        }
    }
    // drop a piece that is a 2π-shifted copy of another
    let mut distinct: Vec<Interval> = Vec::new();
    for &(a, b) in &merged {
        let dup = distinct.iter().any(|&(c, d)| {
            ((a - c) - TAU).abs() < 10.0 * tol::ANGLE && ((b - d) - TAU).abs() < 10.0 * tol::ANGLE
                || ((c - a) - TAU).abs() < 10.0 * tol::ANGLE && ((d - b) - TAU).abs() < 10.0 * tol::ANGLE
        });
        if !dup {
            distinct.push((a, b));
        }
    }
    let arc = match distinct.len() {
        1 => {
            let (a, b) = distinct[0];
            let width = b - a;
            let u = UnitDir::from_angle(a);
            let v = UnitDir::from_angle(b);
            if width <= tol::ANGLE {
                GeodesicArc::singleton(u)
            } else if (width - PI).abs() <= tol::ANGLE {
                GeodesicArc::half_circle(UnitDir::from_angle(0.5 * (a + b)))
            } else {
                crate::geometry::geodesic_arc(u, v)
            }
        }
        2 => {
            let mid0 = 0.5 * (distinct[0].0 + distinct[0].1);
            let mid1 = 0.5 * (distinct[1].0 + distinct[1].1);
            let w0 = distinct[0].1 - distinct[0].0;
            let w1 = distinct[1].1 - distinct[1].0;
            if w0 <= tol::ANGLE && w1 <= tol::ANGLE
                && (crate::geometry::ang_dist(mid0, mid1) - PI).abs() <= tol::ANGLE
            {
                GeodesicArc::antipodal_pair(UnitDir::from_angle(mid0))
            } else {
                return Err(AnalysisError::InteriorPoint);
            }
        }
        _ => return Err(AnalysisError::InteriorPoint),
    };
    let (xi1, xi2) = match arc.kind {
        GeodesicArcKind::Singleton => (arc.a, arc.a),
        _ => (arc.a, arc.b),
    };
    Ok(OutwardArc { arc, xi1, xi2 })
}

/// Set the extremal flags of `pi`: y is extremal when ⟨y−x, ξ⟩ = 0 for one
/// of the arc's endpoint directions (inner product scaled by 1/ε).
pub fn mark_extremal(pi: &mut ContributorSet, oa: &OutwardArc) {
    let x = pi.point;
    for (i, y) in pi.members.iter().enumerate() {
        let (dx, dy) = y.sub(&x);
        let dot1 = (dx * oa.xi1.ux + dy * oa.xi1.uy) / pi.eps;
        let dot2 = (dx * oa.xi2.ux + dy * oa.xi2.uy) / pi.eps;
        pi.extremal[i] = dot1.abs() <= tol::ORTHO || dot2.abs() <= tol::ORTHO;
    }
}

/// All (ξ, y) with ξ an endpoint direction and ⟨y−x, ξ⟩ = 0.
pub fn extremal_pairs(
    x: &Point2,
    pi: &ContributorSet,
    oa: &OutwardArc,
) -> Vec<ExtremalPair> {
    let mut dirs = vec![oa.xi1];
    if oa.xi2.ang_to(&oa.xi1) > tol::ANGLE {
        dirs.push(oa.xi2);
    }
    let mut out = Vec::new();
    for xi in dirs {
        for y in &pi.members {
            let (dx, dy) = y.sub(x);
            if ((dx * xi.ux + dy * xi.uy) / pi.eps).abs() <= tol::ORTHO {
                out.push(ExtremalPair { xi, y: *y });
            }
        }
    }
    out
}

/// Uniform sampling grid on [0, ε/2] with `num_samples` nodes (s = 0 and
/// s = ε/2 included).
pub fn uniform_grid(eps: f64, num_samples: usize) -> Vec<f64> {
    let m = num_samples.max(2);
    (0..m)
        .map(|j| 0.5 * eps * j as f64 / (m - 1) as f64)
        .collect()
}

/// Sampled local boundary graph for the pair (ξ, y) at base point x, built
/// from the level-n approximating set restricted to the half-plane cone on
/// the far side of x toward y.
pub fn local_rep(
    spec: &SetSpec,
    x: &Point2,
    pair: &ExtremalPair,
    eps: f64,
    n: u32,
    num_samples: usize,
) -> Result<LocalRep, AnalysisError> {
    local_rep_on_grid(spec, x, pair, eps, n, &uniform_grid(eps, num_samples))
}

/// [`local_rep`] with a caller-supplied grid of s-values.
pub fn local_rep_on_grid(
    spec: &SetSpec,
    x: &Point2,
    pair: &ExtremalPair,
    eps: f64,
    n: u32,
    grid: &[f64],
) -> Result<LocalRep, AnalysisError> {
    let (yx, yy) = pair.y.sub(x);
    let norm = yx.hypot(yy);
    if (norm - eps).abs() > 1e-6 * eps.max(1.0) {
        return Err(AnalysisError::PairInconsistent);
    }
    let approx = finite_approximating_set(spec, n, eps)?;
    let cone_centers = restrict_to_cone(&approx.points, x, pair, eps);
    let raw: Vec<(f64, Option<(f64, f64)>)> = grid
        .iter()
        .map(|&s| (s, graph_value(&cone_centers, x, pair, eps, s)))
        .collect();
    // The graph represents the boundary near the base point only while the
    // dominating center stays within ε/2 of the sample in the ξ-coordinate
    // (that is what caps the circle slope at 1/(√3 ε)). A dominating center
    // farther out means the graph has left the representation radius: that
    // sample and everything past it is recorded as undefined.
    let mut samples: Vec<(f64, Option<f64>)> = Vec::with_capacity(raw.len());
    let mut live = true;
    for (s, v) in raw {
        let entry = match v {
            Some((t, s_c)) if live => {
                if (s - s_c).abs() <= eps / 2.0 + 1e-9 {
                    Some(t)
                } else {
                    live = false;
                    None
                }
            }
            _ => None,
        };
        samples.push((s, entry));
    }
    Ok(LocalRep { pair: *pair, base: *x, eps, level: n, samples, cone_centers })
}

/// Points of the approximating set inside C = {x + sξ + t(x−y) :
/// s ∈ [−ε, ε], t ≤ −ε/2}.
fn restrict_to_cone(points: &[Point2], x: &Point2, pair: &ExtremalPair, eps: f64) -> Vec<Point2> {
    let (uy_x, uy_y) = cone_axis(x, pair, eps);
    points
        .iter()
        .copied()
        .filter(|c| {
            let (cx, cy) = c.sub(x);
            let s_c = cx * pair.xi.ux + cy * pair.xi.uy;
            let t_c = (cx * uy_x + cy * uy_y) / eps;
            s_c.abs() <= eps + 1e-12 && t_c <= -eps / 2.0 + 1e-12
        })
        .collect()
}

/// Unit vector along x − y.
fn cone_axis(x: &Point2, pair: &ExtremalPair, eps: f64) -> (f64, f64) {
    let (yx, yy) = pair.y.sub(x);
    (-yx / eps, -yy / eps)
}

/// f(s) = max{t : dist(x + sξ + t(x−y), centers) ≤ ε} together with the
/// ξ-coordinate of the maximizing center, None if no center reaches the
/// line at this s.
fn graph_value(
    centers: &[Point2],
    x: &Point2,
    pair: &ExtremalPair,
    eps: f64,
    s: f64,
) -> Option<(f64, f64)> {
    let (ux, uy) = cone_axis(x, pair, eps);
    let mut best: Option<(f64, f64)> = None;
    for c in centers {
        let (cx, cy) = c.sub(x);
        let s_c = cx * pair.xi.ux + cy * pair.xi.uy;
        let tau_c = cx * ux + cy * uy;
        let d = s - s_c;
        if d.abs() > eps {
            continue;
        }
        let t = (tau_c + (eps * eps - d * d).sqrt()) / eps;
        if best.map_or(true, |(b, _)| t > b) {
            best = Some((t, s_c));
        }
    }
    best
}

/// Verify that every defined sample of the graph lies on the ε-sphere of
/// some cone center: returns the worst residual |dist(g(s), centers) − ε|.
pub fn graph_residual(rep: &LocalRep) -> f64 {
    let (ux, uy) = cone_axis(&rep.base, &rep.pair, rep.eps);
    let mut worst = 0.0f64;
    for &(s, f) in &rep.samples {
        let Some(f) = f else { continue };
        let g = Point2::raw(
            rep.base.x + s * rep.pair.xi.ux + f * rep.eps * ux,
            rep.base.y + s * rep.pair.xi.uy + f * rep.eps * uy,
        );
        let d = rep
            .cone_centers
            .iter()
            .map(|c| c.dist(&g))
            .fold(f64::INFINITY, f64::min);
        worst = worst.max((d - rep.eps).abs());
    }
    worst
}

/// Worst slope |Δf/Δs| over consecutive defined sample pairs.
pub fn max_slope(rep: &LocalRep) -> f64 {
    let mut worst = 0.0f64;
    let defined: Vec<(f64, f64)> = rep
        .samples
        .iter()
        .filter_map(|&(s, f)| f.map(|v| (s, v)))
        .collect();
    for pair in defined.windows(2) {
        let ds = pair[1].0 - pair[0].0;
        if ds > 0.0 {
            worst = worst.max((pair[1].1 - pair[0].1).abs() / ds);
        }
    }
    worst
}

/// α-profile of two graphs with the same ξ and opposing contributors:
/// α(s) = f¹(s) + f²(s). `touch_tol` bounds how far below zero a sample may
/// sit and still count as a zero-touch (grid refinement can miss the exact
/// tangency argument).
pub fn alpha_profile(
    rep1: &LocalRep,
    rep2: &LocalRep,
    touch_tol: f64,
) -> Result<AlphaProfile, AnalysisError> {
    if rep1.pair.xi.ang_to(&rep2.pair.xi) > 1e-9 {
        return Err(AnalysisError::GridMismatch);
    }
    let (d1x, d1y) = rep1.pair.y.sub(&rep1.base);
    let (d2x, d2y) = rep2.pair.y.sub(&rep2.base);
    let eps = rep1.eps;
    if ((d1x + d2x).hypot(d1y + d2y)) > 1e-6 * eps {
        return Err(AnalysisError::NonOpposing);
    }
    if rep1.samples.len() != rep2.samples.len() {
        return Err(AnalysisError::GridMismatch);
    }
    let mut samples: Vec<(f64, Option<f64>)> = Vec::with_capacity(rep1.samples.len());
    for (&(s1, f1), &(s2, f2)) in rep1.samples.iter().zip(&rep2.samples) {
        if (s1 - s2).abs() > 1e-12 {
            return Err(AnalysisError::GridMismatch);
        }
        samples.push((s1, match (f1, f2) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        }));
    }
    // zero-touch runs: maximal blocks of defined samples with α ≥ −touch_tol;
    // the block containing s = 0 is the base (α(0) = 0 always) and excluded
    let mut zero_touches = Vec::new();
    let mut max_away: Option<f64> = None;
    let mut in_base = true;
    let mut run_best: Option<(f64, f64)> = None; // (alpha, s) of the current run
    for &(s, a) in &samples {
        let Some(alpha) = a else {
            if let Some((_, at)) = run_best.take() {
                zero_touches.push(at);
            }
            in_base = false;
            continue;
        };
        if alpha >= -touch_tol {
            if !in_base && run_best.map_or(true, |(b, _)| alpha > b) {
                run_best = Some((alpha, s));
            }
        } else {
            if let Some((_, at)) = run_best.take() {
                zero_touches.push(at);
            }
            in_base = false;
        }
        if !in_base && s > 0.0 {
            max_away = Some(max_away.map_or(alpha, |m: f64| m.max(alpha)));
        }
    }
    if let Some((_, at)) = run_best {
        zero_touches.push(at);
    }
    Ok(AlphaProfile { samples, zero_touches, max_away_from_base: max_away, touch_tol })
}

/// One-sided secant directions at a boundary sample: directions from the
/// sample to its `window`-th neighbor along the curve on each side. Chains
/// follow arcs and cross shared arc endpoints.
pub fn tangent_estimate(
    samples: &[BoundarySample],
    idx: usize,
    window: usize,
) -> Result<(UnitDir, UnitDir), AnalysisError> {
    assert!(window >= 1 && idx < samples.len());
    // group sample indices into per-arc chains (input is arc-ordered)
    let mut chains: Vec<Vec<usize>> = Vec::new();
    for (i, s) in samples.iter().enumerate() {
        match chains.last_mut() {
            Some(chain) if samples[chain[0]].arc_id == s.arc_id => chain.push(i),
            _ => chains.push(vec![i]),
        }
    }
    let chain_of = |i: usize| -> usize {
        chains.iter().position(|c| c.contains(&i)).expect("sample in a chain")
    };
    let here = samples[idx].position;
    let step = |dir: i64| -> Result<Point2, AnalysisError> {
        let mut ci = chain_of(idx);
        let mut pos = chains[ci].iter().position(|&i| i == idx).unwrap() as i64;
        let mut remaining = window as i64;
        loop {
            let chain = &chains[ci];
            let len = chain.len() as i64;
            let target = pos + dir * remaining;
            if target >= 0 && target < len {
                return Ok(samples[chain[target as usize]].position);
            }
            // crossing an endpoint: find another chain endpoint at the same
            // position and continue inward there
            let (exit_pos, used) = if dir > 0 { (len - 1, len - 1 - pos) } else { (0, pos) };
            let exit_pt = samples[chain[exit_pos as usize]].position;
            remaining -= used;
            // A single chain is a full circle (the only one-arc boundary)
            // and wraps onto itself. The duplicate closing sample may or
            // may not have been collapsed, so the period is len-1 or len.
            if chains.len() == 1 && len > 2 {
                let duplicate_endpoint = samples[chain[0]]
                    .position
                    .dist(&samples[chain[(len - 1) as usize]].position)
                    < 1e-7;
                let period = if duplicate_endpoint { len - 1 } else { len };
                let t = (pos + dir * (remaining + used)).rem_euclid(period);
                return Ok(samples[chain[t as usize]].position);
            }
            let next = chains.iter().enumerate().find(|(cj, other)| {
                *cj != ci
                    && (samples[*other.first().unwrap()].position.dist(&exit_pt) < 1e-7
                        || samples[*other.last().unwrap()].position.dist(&exit_pt) < 1e-7)
            });
            let Some((cj, other)) = next else {
                // no continuation; fall back to the farthest available
                // sample on this side if any ground was covered
                if used >= 1 {
                    return Ok(exit_pt);
                }
                return Err(AnalysisError::IsolatedSample);
            };
            let enters_at_start = samples[*other.first().unwrap()].position.dist(&exit_pt) < 1e-7;
            ci = cj;
            pos = if enters_at_start { 0 } else { other.len() as i64 - 1 };
            // continue moving away from the shared endpoint
            let new_dir = if enters_at_start { 1 } else { -1 };
            if new_dir != dir {
                return step_into(samples, &chains[ci], pos, new_dir, remaining, &here);
            }
        }
    };
    let back = step(-1)?;
    let fwd = step(1)?;
    let to_dir = |p: Point2| -> Result<UnitDir, AnalysisError> {
        let (dx, dy) = p.sub(&here);
        if dx == 0.0 && dy == 0.0 {
            return Err(AnalysisError::IsolatedSample);
        }
        Ok(UnitDir::from_vec(dx, dy)?)
    };
    Ok((to_dir(back)?, to_dir(fwd)?))
}

fn step_into(
    samples: &[BoundarySample],
    chain: &[usize],
    pos: i64,
    dir: i64,
    remaining: i64,
    origin: &Point2,
) -> Result<Point2, AnalysisError> {
    let target = (pos + dir * remaining).clamp(0, chain.len() as i64 - 1);
    let p = samples[chain[target as usize]].position;
    if p.dist(origin) == 0.0 {
        return Err(AnalysisError::IsolatedSample);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{disk_union_boundary, sample_boundary};
    use crate::setmodel::gen_rectangle_example;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::raw(x, y)
    }

    fn spec_points(pts: &[Point2]) -> SetSpec {
        SetSpec::from_points("pts", pts).unwrap()
    }

    #[test]
    fn contributors_single_point() {
        let spec = spec_points(&[p(0.0, 0.0)]);
        let cs = contributors(&spec, &p(1.0, 0.0), 1.0, 1e-9).unwrap();
        assert_eq!(cs.members, vec![p(0.0, 0.0)]);
    }

    #[test]
    fn contributors_two_circle_vertex() {
        let spec = spec_points(&[p(-1.0, 0.0), p(1.0, 0.0)]);
        let cs = contributors(&spec, &p(0.0, 0.75), 1.25, 1e-9).unwrap();
        assert_eq!(cs.members.len(), 2);
    }

    #[test]
    fn contributors_rectangle_corner_pair() {
        let spec = gen_rectangle_example();
        let cs = contributors(&spec, &p(3.0, 0.5), 0.5, 1e-9).unwrap();
        assert_eq!(cs.members.len(), 2);
        assert!(cs.members.iter().any(|y| y.dist(&p(3.0, 0.0)) < 1e-12));
        assert!(cs.members.iter().any(|y| y.dist(&p(3.0, 1.0)) < 1e-12));
    }

    #[test]
    fn contributors_rejects_off_boundary() {
        let spec = spec_points(&[p(0.0, 0.0)]);
        assert!(matches!(
            contributors(&spec, &p(0.5, 0.0), 1.0, 1e-9),
            Err(AnalysisError::NotBoundaryPoint { .. })
        ));
    }

    #[test]
    fn outward_arc_unp_half_circle() {
        let spec = spec_points(&[p(0.0, -1.0)]);
        let x = p(0.0, 0.0);
        let cs = contributors(&spec, &x, 1.0, 1e-9).unwrap();
        let oa = outward_arc(&x, &cs).unwrap();
        assert_eq!(oa.arc.kind, GeodesicArcKind::HalfCircle);
        assert!(oa.arc.mid.ang_to(&UnitDir::new(0.0, 1.0).unwrap()) < 1e-9);
    }

    #[test]
    fn outward_arc_wedge() {
        // contributors (−1,0),(1,0) from x=(0,0.75), ε=1.25:
        // arc [(−0.6,0.8),(0.6,0.8)], interior angle arccos(0.28)
        let spec = spec_points(&[p(-1.0, 0.0), p(1.0, 0.0)]);
        let x = p(0.0, 0.75);
        let cs = contributors(&spec, &x, 1.25, 1e-9).unwrap();
        let oa = outward_arc(&x, &cs).unwrap();
        assert_eq!(oa.arc.kind, GeodesicArcKind::ProperArc);
        let e1 = UnitDir::new(-0.6, 0.8).unwrap();
        let e2 = UnitDir::new(0.6, 0.8).unwrap();
        assert!(oa.xi1.ang_to(&e1).min(oa.xi1.ang_to(&e2)) < 1e-9);
        assert!(oa.xi2.ang_to(&e1).min(oa.xi2.ang_to(&e2)) < 1e-9);
        let angle = oa.xi1.ang_to(&oa.xi2);
        assert!((angle - 0.28f64.acos()).abs() < 1e-12);
    }

    #[test]
    fn outward_arc_antipodal_rectangle() {
        let spec = gen_rectangle_example();
        let x = p(3.0, 0.5);
        let cs = contributors(&spec, &x, 0.5, 1e-9).unwrap();
        let oa = outward_arc(&x, &cs).unwrap();
        assert_eq!(oa.arc.kind, GeodesicArcKind::AntipodalPair);
        let ex = UnitDir::new(1.0, 0.0).unwrap();
        assert!(oa.xi1.ang_to(&ex).min(oa.xi1.ang_to(&ex.neg())) < 1e-9);
    }

    #[test]
    fn outward_orientation_inequality() {
        // every u in the arc satisfies <y - x, u> <= tol for all contributors
        let spec = spec_points(&[p(-1.0, 0.0), p(1.0, 0.0)]);
        let x = p(0.0, 0.75);
        let cs = contributors(&spec, &x, 1.25, 1e-9).unwrap();
        let oa = outward_arc(&x, &cs).unwrap();
        let w = oa.arc.width();
        let t0 = oa.arc.mid.angle() - w / 2.0;
        for k in 0..=16 {
            let u = UnitDir::from_angle(t0 + w * k as f64 / 16.0);
            for y in &cs.members {
                let (dx, dy) = y.sub(&x);
                assert!((dx * u.ux + dy * u.uy) / 1.25 <= tol::ORTHO);
            }
        }
    }

    #[test]
    fn extremal_pairs_unp() {
        let spec = spec_points(&[p(0.0, -1.0)]);
        let x = p(0.0, 0.0);
        let mut cs = contributors(&spec, &x, 1.0, 1e-9).unwrap();
        let oa = outward_arc(&x, &cs).unwrap();
        mark_extremal(&mut cs, &oa);
        assert!(cs.extremal[0]);
        let pairs = extremal_pairs(&x, &cs, &oa);
        assert_eq!(pairs.len(), 2);
        for pr in &pairs {
            assert!(pr.xi.uy.abs() < 1e-9, "tangents are horizontal");
        }
    }

    #[test]
    fn extremal_pairs_antipodal_rectangle_all_four() {
        let spec = gen_rectangle_example();
        let x = p(3.0, 0.5);
        let cs = contributors(&spec, &x, 0.5, 1e-9).unwrap();
        let oa = outward_arc(&x, &cs).unwrap();
        let pairs = extremal_pairs(&x, &cs, &oa);
        assert_eq!(pairs.len(), 4);
    }

    #[test]
    fn local_rep_circle_closed_form() {
        let spec = spec_points(&[p(0.0, -1.0)]);
        let x = p(0.0, 0.0);
        let pair = ExtremalPair { xi: UnitDir::new(1.0, 0.0).unwrap(), y: p(0.0, -1.0) };
        let rep = local_rep(&spec, &x, &pair, 1.0, 4, 512).unwrap();
        for &(s, f) in &rep.samples {
            let expect = (1.0 - s * s).sqrt() - 1.0;
            assert!((f.unwrap() - expect).abs() < 1e-12, "f({s})");
        }
        let f_half = rep
            .samples
            .iter()
            .find(|(s, _)| (*s - 0.5).abs() < 1e-12)
            .unwrap()
            .1
            .unwrap();
        assert!((f_half - (-0.1339746)).abs() < 1e-7);
        assert!(graph_residual(&rep) < tol::LOCAL_REP);
    }

    #[test]
    fn local_rep_slope_approaches_bound() {
        let spec = spec_points(&[p(0.0, -1.0)]);
        let x = p(0.0, 0.0);
        let pair = ExtremalPair { xi: UnitDir::new(1.0, 0.0).unwrap(), y: p(0.0, -1.0) };
        let rep = local_rep(&spec, &x, &pair, 1.0, 4, 2048).unwrap();
        let bound = 1.0 / (3f64.sqrt());
        assert!(max_slope(&rep) <= bound + tol::LIPSCHITZ_SLACK);
        // slope between the last two samples approaches the bound from below
        let n = rep.samples.len();
        let (s1, f1) = rep.samples[n - 2];
        let (s2, f2) = rep.samples[n - 1];
        let slope = (f2.unwrap() - f1.unwrap()).abs() / (s2 - s1);
        assert!(slope < bound && slope > bound - 2e-3);
    }

    #[test]
    fn alpha_tangent_disks_sharp() {
        // disks tangent at x=(0,0): α(s) = 2(√(1−s²) − 1) < 0 on (0, 1/2]
        let spec = spec_points(&[p(0.0, -1.0), p(0.0, 1.0)]);
        let x = p(0.0, 0.0);
        let xi = UnitDir::new(1.0, 0.0).unwrap();
        let r1 = local_rep(&spec, &x, &ExtremalPair { xi, y: p(0.0, -1.0) }, 1.0, 4, 256).unwrap();
        let r2 = local_rep(&spec, &x, &ExtremalPair { xi, y: p(0.0, 1.0) }, 1.0, 4, 256).unwrap();
        let ap = alpha_profile(&r1, &r2, 1e-9).unwrap();
        assert!(ap.zero_touches.is_empty());
        for &(s, a) in &ap.samples {
            let expect = 2.0 * ((1.0 - s * s).sqrt() - 1.0);
            assert!((a.unwrap() - expect).abs() < 1e-12);
        }
        assert!(ap.max_away_from_base.unwrap() < -1e-6);
    }

    #[test]
    fn alpha_mirror_doubles() {
        let spec = spec_points(&[p(0.0, -1.0), p(0.0, 1.0)]);
        let x = p(0.0, 0.0);
        let xi = UnitDir::new(1.0, 0.0).unwrap();
        let r1 = local_rep(&spec, &x, &ExtremalPair { xi, y: p(0.0, -1.0) }, 1.0, 4, 64).unwrap();
        let r2 = local_rep(&spec, &x, &ExtremalPair { xi, y: p(0.0, 1.0) }, 1.0, 4, 64).unwrap();
        let ap = alpha_profile(&r1, &r2, 1e-9).unwrap();
        for ((&(_, a), &(_, f1)), &(_, f2)) in
            ap.samples.iter().zip(&r1.samples).zip(&r2.samples)
        {
            assert!((a.unwrap() - (f1.unwrap() + f2.unwrap())).abs() < 1e-15);
        }
    }

    #[test]
    fn alpha_zero_touch_from_reclosing_center() {
        // opposite families tangent again at s0: centers at x-offset s0 on
        // both sides re-close the gap there
        let s0 = 0.3f64;
        let spec = spec_points(&[p(0.0, -1.0), p(0.0, 1.0), p(s0, -1.0), p(s0, 1.0)]);
        let x = p(0.0, 0.0);
        let xi = UnitDir::new(1.0, 0.0).unwrap();
        let r1 = local_rep(&spec, &x, &ExtremalPair { xi, y: p(0.0, -1.0) }, 1.0, 4, 512).unwrap();
        let r2 = local_rep(&spec, &x, &ExtremalPair { xi, y: p(0.0, 1.0) }, 1.0, 4, 512).unwrap();
        let h = 0.5 / 511.0;
        let ap = alpha_profile(&r1, &r2, h * h * 1.5).unwrap();
        assert_eq!(ap.zero_touches.len(), 1, "touches: {:?}", ap.zero_touches);
        assert!((ap.zero_touches[0] - s0).abs() < 2.0 * h);
    }

    #[test]
    fn alpha_rejects_non_opposing() {
        let spec = spec_points(&[p(-1.0, 0.0), p(1.0, 0.0)]);
        let x = p(0.0, 0.75);
        let xi = UnitDir::new(-0.6, 0.8).unwrap();
        let r1 = local_rep(&spec, &x, &ExtremalPair { xi, y: p(-1.0, 0.0) }, 1.25, 4, 32).unwrap();
        let r2 = local_rep(&spec, &x, &ExtremalPair { xi, y: p(1.0, 0.0) }, 1.25, 4, 32).unwrap();
        assert!(matches!(alpha_profile(&r1, &r2, 1e-9), Err(AnalysisError::NonOpposing)));
    }

    #[test]
    fn tangent_estimate_circle() {
        let bas = disk_union_boundary(&[p(0.0, 0.0)], 1.0).unwrap();
        let samples = sample_boundary(&bas, 0.01).unwrap();
        let idx = 5;
        let (back, fwd) = tangent_estimate(&samples, idx, 1).unwrap();
        let theta = samples[idx].position.y.atan2(samples[idx].position.x);
        let tangent = UnitDir::new(-theta.sin(), theta.cos()).unwrap();
        assert!(fwd.ang_to(&tangent) < 0.02);
        assert!(back.ang_to(&tangent.neg()) < 0.02);
    }

    #[test]
    fn tangent_estimate_wedge_vertex() {
        let bas = disk_union_boundary(&[p(-1.0, 0.0), p(1.0, 0.0)], 1.25).unwrap();
        let samples = sample_boundary(&bas, 0.01).unwrap();
        let idx = samples
            .iter()
            .position(|s| s.position.dist(&p(0.0, 0.75)) < 1e-9)
            .expect("vertex sampled");
        let (back, fwd) = tangent_estimate(&samples, idx, 1).unwrap();
        let e1 = UnitDir::new(-0.6, 0.8).unwrap();
        let e2 = UnitDir::new(0.6, 0.8).unwrap();
        let hit = |u: &UnitDir| u.ang_to(&e1).min(u.ang_to(&e2)) < 0.02;
        assert!(hit(&back) && hit(&fwd));
        assert!(back.ang_to(&fwd) > 0.5, "the two secants straddle the wedge");
    }

    #[test]
    fn tangent_estimate_near_straight() {
        // huge radius arc: locally straight, secants antipodal
        use crate::geometry::CircularArc;
        let arc = CircularArc::new(p(0.0, -1e9), 1e9, PI / 2.0 - 1e-7, 2e-7).unwrap();
        let bas = crate::arrangement::BoundaryArcSet {
            eps: 1e9,
            level: 0,
            arcs: vec![arc],
            vertices: vec![],
        };
        let samples = sample_boundary(&bas, 10.0).unwrap();
        let mid = samples.len() / 2;
        let (back, fwd) = tangent_estimate(&samples, mid, 1).unwrap();
        assert!(back.ang_to(&fwd.neg()) < 1e-6);
    }
}
