//! Declarative set specifications, exact distance/projection queries, dyadic
//! finite approximating point sets, and generators for example sets.
//!
//! A `SetSpec` describes a compact set E as points and segments. The
//! approximating set at level n keeps one representative of E per dyadic
//! square of side 2⁻ⁿ; representatives are chosen deterministically so that
//! the sets are nested across levels.

use crate::geometry::{GeometryError, Point2};
use crate::tol;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SetModelError {
    #[error("empty spec")]
    EmptySpec,
    #[error("approximation level too coarse for this radius")]
    LevelBelowThreshold,
    #[error("depth out of range: {0}")]
    DepthOutOfRange(i64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Primitive {
    Point { x: f64, y: f64 },
    Segment { ax: f64, ay: f64, bx: f64, by: f64 },
}

impl Primitive {
    pub fn point(p: Point2) -> Self {
        Primitive::Point { x: p.x, y: p.y }
    }

    pub fn segment(a: Point2, b: Point2) -> Self {
        Primitive::Segment { ax: a.x, ay: a.y, bx: b.x, by: b.y }
    }

    /// Closest point of the primitive to `q` (snapped onto the primitive).
    pub fn closest_point(&self, q: &Point2) -> Point2 {
        match *self {
            Primitive::Point { x, y } => Point2::raw(x, y),
            Primitive::Segment { ax, ay, bx, by } => {
                closest_on_segment(q, ax, ay, bx, by, 0.0, 1.0)
            }
        }
    }

    fn bbox(&self) -> (f64, f64, f64, f64) {
        match *self {
            Primitive::Point { x, y } => (x, y, x, y),
            Primitive::Segment { ax, ay, bx, by } => {
                (ax.min(bx), ay.min(by), ax.max(bx), ay.max(by))
            }
        }
    }
}

/// Closest point to `q` on the sub-segment of (a,b) with parameter in
/// [t_lo, t_hi].
fn closest_on_segment(
    q: &Point2,
    ax: f64,
    ay: f64,
    bx: f64,
    by: f64,
    t_lo: f64,
    t_hi: f64,
) -> Point2 {
    let dx = bx - ax;
    let dy = by - ay;
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        t_lo
    } else {
        (((q.x - ax) * dx + (q.y - ay) * dy) / len2).clamp(t_lo, t_hi)
    };
    Point2::raw(ax + t * dx, ay + t * dy)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetSpec {
    pub label: String,
    pub primitives: Vec<Primitive>,
}

impl SetSpec {
    pub fn new(label: impl Into<String>, primitives: Vec<Primitive>) -> Result<Self, SetModelError> {
        let spec = SetSpec { label: label.into(), primitives };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), SetModelError> {
        if self.primitives.is_empty() {
            return Err(SetModelError::EmptySpec);
        }
        for prim in &self.primitives {
            let (x0, y0, x1, y1) = prim.bbox();
            Point2::new(x0, y0)?;
            Point2::new(x1, y1)?;
        }
        Ok(())
    }

    pub fn from_points(label: impl Into<String>, pts: &[Point2]) -> Result<Self, SetModelError> {
        SetSpec::new(label, pts.iter().map(|p| Primitive::point(*p)).collect())
    }

    /// Axis-aligned bounding box (min_x, min_y, max_x, max_y).
    pub fn bbox(&self) -> (f64, f64, f64, f64) {
        let mut bb = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for prim in &self.primitives {
            let (x0, y0, x1, y1) = prim.bbox();
            bb.0 = bb.0.min(x0);
            bb.1 = bb.1.min(y0);
            bb.2 = bb.2.max(x1);
            bb.3 = bb.3.max(y1);
        }
        bb
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionResult {
    pub distance: f64,
    pub argmin: Vec<Point2>,
}

/// Distance from `x` to the set and all nearest points (within relative
/// tolerance [`tol::ARGMIN_REL`] on the distance, deduplicated).
pub fn distance_and_projection(spec: &SetSpec, x: &Point2) -> Result<ProjectionResult, SetModelError> {
    spec.validate()?;
    let candidates: Vec<(f64, Point2)> = spec
        .primitives
        .iter()
        .map(|prim| {
            let p = prim.closest_point(x);
            (x.dist(&p), p)
        })
        .collect();
    let distance = candidates.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    let cutoff = distance + tol::ARGMIN_REL * distance.max(1.0);
    let mut argmin: Vec<Point2> = Vec::new();
    for (d, p) in candidates {
        if d <= cutoff && !argmin.iter().any(|q| q.dist(&p) <= tol::VERTEX_MERGE) {
            argmin.push(p);
        }
    }
    Ok(ProjectionResult { distance, argmin })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxSet {
    pub level: u32,
    pub cell_size: f64,
    pub points: Vec<Point2>,
}

/// One representative of E per dyadic cell of side 2⁻ⁿ, as a deduplicated
/// point set.
///
/// The representative of a cell is the point of E ∩ cell closest to the
/// cell's lower-left corner (ties broken lexicographically), except that a
/// child cell containing its parent cell's representative inherits it; the
/// recursion starts at level 0. This makes the point sets nested across
/// levels and independent of ε.
///
/// `eps` is only used for the level threshold check 2ⁿ > 4/ε.
pub fn finite_approximating_set(
    spec: &SetSpec,
    n: u32,
    eps: f64,
) -> Result<ApproxSet, SetModelError> {
    spec.validate()?;
    if !(eps > 0.0) || f64::from(n) <= (4.0 / eps).ln() / 2f64.ln() {
        return Err(SetModelError::LevelBelowThreshold);
    }
    let mut reps: HashMap<(i64, i64), Point2> = occupied_cells(spec, 0)
        .into_iter()
        .map(|cell| (cell, corner_representative(spec, cell, 0)))
        .collect();
    for level in 1..=n {
        let mut next: HashMap<(i64, i64), Point2> = HashMap::new();
        for cell in occupied_cells(spec, level) {
            let parent = (cell.0.div_euclid(2), cell.1.div_euclid(2));
            let inherited = reps.get(&parent).filter(|p| home_cell(p, level) == cell);
            let rep = match inherited {
                Some(p) => *p,
                None => corner_representative(spec, cell, level),
            };
            next.insert(cell, rep);
        }
        reps = next;
    }
    let mut points: Vec<Point2> = Vec::new();
    for p in reps.into_values() {
        if !points.iter().any(|q| q.dist(&p) <= 1e-12) {
            points.push(p);
        }
    }
    points.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).unwrap());
    Ok(ApproxSet { level: n, cell_size: (0.5f64).powi(n as i32), points })
}

/// The unique cell owning `p` at `level` under the half-open convention
/// (used only to route inherited representatives deterministically).
fn home_cell(p: &Point2, level: u32) -> (i64, i64) {
    let scale = (2.0f64).powi(level as i32);
    ((p.x * scale).floor() as i64, (p.y * scale).floor() as i64)
}

/// All closed cells at `level` meeting some primitive of the spec.
fn occupied_cells(spec: &SetSpec, level: u32) -> Vec<(i64, i64)> {
    let scale = (2.0f64).powi(level as i32);
    let size = 1.0 / scale;
    let mut cells: Vec<(i64, i64)> = Vec::new();
    let mut seen: std::collections::HashSet<(i64, i64)> = std::collections::HashSet::new();
    for prim in &spec.primitives {
        let (x0, y0, x1, y1) = prim.bbox();
        let k0 = (x0 * scale).floor() as i64 - 1;
        let k1 = (x1 * scale).floor() as i64 + 1;
        let l0 = (y0 * scale).floor() as i64 - 1;
        let l1 = (y1 * scale).floor() as i64 + 1;
        for k in k0..=k1 {
            for l in l0..=l1 {
                if seen.contains(&(k, l)) {
                    continue;
                }
                if primitive_meets_cell(prim, k, l, size) {
                    seen.insert((k, l));
                    cells.push((k, l));
                }
            }
        }
    }
    cells
}

fn primitive_meets_cell(prim: &Primitive, k: i64, l: i64, size: f64) -> bool {
    intersect_with_cell(prim, k, l, size).is_some()
}

/// Clip a primitive to the closed cell [k·size,(k+1)·size]×[l·size,(l+1)·size].
/// For segments returns the parameter interval of the clipped part.
fn intersect_with_cell(prim: &Primitive, k: i64, l: i64, size: f64) -> Option<(f64, f64)> {
    let cx0 = k as f64 * size;
    let cy0 = l as f64 * size;
    let cx1 = (k + 1) as f64 * size;
    let cy1 = (l + 1) as f64 * size;
    match *prim {
        Primitive::Point { x, y } => {
            (cx0 <= x && x <= cx1 && cy0 <= y && y <= cy1).then_some((0.0, 0.0))
        }
        Primitive::Segment { ax, ay, bx, by } => {
            // Liang–Barsky with closed bounds
            let mut t0 = 0.0f64;
            let mut t1 = 1.0f64;
            let dx = bx - ax;
            let dy = by - ay;
            for (p, q) in [
                (-dx, ax - cx0),
                (dx, cx1 - ax),
                (-dy, ay - cy0),
                (dy, cy1 - ay),
            ] {
                if p == 0.0 {
                    if q < 0.0 {
                        return None;
                    }
                } else {
                    let r = q / p;
                    if p < 0.0 {
                        t0 = t0.max(r);
                    } else {
                        t1 = t1.min(r);
                    }
                }
            }
            (t0 <= t1).then_some((t0, t1))
        }
    }
}

/// Point of E ∩ cell closest to the cell's lower-left corner, ties broken
/// lexicographically.
fn corner_representative(spec: &SetSpec, cell: (i64, i64), level: u32) -> Point2 {
    let size = (0.5f64).powi(level as i32);
    let corner = Point2::raw(cell.0 as f64 * size, cell.1 as f64 * size);
    let mut best: Option<(f64, Point2)> = None;
    for prim in &spec.primitives {
        let Some((t0, t1)) = intersect_with_cell(prim, cell.0, cell.1, size) else {
            continue;
        };
        let cand = match *prim {
            Primitive::Point { x, y } => Point2::raw(x, y),
            Primitive::Segment { ax, ay, bx, by } => {
                closest_on_segment(&corner, ax, ay, bx, by, t0, t1)
            }
        };
        let d = corner.dist(&cand);
        let better = match &best {
            None => true,
            Some((bd, bp)) => (d, cand.x, cand.y) < (*bd, bp.x, bp.y),
        };
        if better {
            best = Some((d, cand));
        }
    }
    best.expect("occupied cell has a representative").1
}

/// The set [2,3]×{0,1}: the top and bottom edges of a unit-height strip
/// (each edge split at its midpoint, 4 segments in total).
pub fn gen_rectangle_example() -> SetSpec {
    let c = |x, y| Point2::raw(x, y);
    SetSpec::new(
        "rectangle-example",
        vec![
            Primitive::segment(c(2.0, 0.0), c(2.5, 0.0)),
            Primitive::segment(c(2.5, 0.0), c(3.0, 0.0)),
            Primitive::segment(c(2.0, 1.0), c(2.5, 1.0)),
            Primitive::segment(c(2.5, 1.0), c(3.0, 1.0)),
        ],
    )
    .expect("static spec is valid")
}

/// Intervals of the Smith–Volterra–Cantor set after `depth` removal steps:
/// step j removes the open middle interval of length 4⁻ʲ from each piece.
pub fn fat_cantor_intervals(depth: u32) -> Vec<(f64, f64)> {
    let mut intervals = vec![(0.0f64, 1.0f64)];
    for step in 1..=depth {
        let gap = (0.25f64).powi(step as i32);
        let mut next = Vec::with_capacity(intervals.len() * 2);
        for (a, b) in intervals {
            let mid = 0.5 * (a + b);
            next.push((a, mid - gap / 2.0));
            next.push((mid + gap / 2.0, b));
        }
        intervals = next;
    }
    intervals
}

/// Open intervals removed from [0,1] by the construction up to `depth`,
/// with the step at which each was removed.
pub fn fat_cantor_gaps(depth: u32) -> Vec<(f64, f64, u32)> {
    let mut intervals = vec![(0.0f64, 1.0f64)];
    let mut gaps = Vec::new();
    for step in 1..=depth {
        let gap = (0.25f64).powi(step as i32);
        let mut next = Vec::with_capacity(intervals.len() * 2);
        for (a, b) in intervals {
            let mid = 0.5 * (a + b);
            gaps.push((mid - gap / 2.0, mid + gap / 2.0, step));
            next.push((a, mid - gap / 2.0));
            next.push((mid + gap / 2.0, b));
        }
        intervals = next;
    }
    gaps
}

/// C_k × {0,1} for the depth-k Smith–Volterra–Cantor approximation, as
/// 2·2ᵏ horizontal segments.
pub fn gen_fat_cantor(depth: u32) -> Result<SetSpec, SetModelError> {
    if depth > 12 {
        return Err(SetModelError::DepthOutOfRange(depth as i64));
    }
    let mut prims = Vec::new();
    for y in [0.0, 1.0] {
        for (a, b) in fat_cantor_intervals(depth) {
            prims.push(Primitive::segment(Point2::raw(a, y), Point2::raw(b, y)));
        }
    }
    SetSpec::new(format!("fat-cantor-{depth}"), prims)
}

/// Reduced fractions in (0,1) in denominator-major order:
/// 1/2, 1/3, 2/3, 1/4, 3/4, 1/5, ...
pub fn rational_enumeration(count: usize) -> Vec<f64> {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    let mut out = Vec::with_capacity(count);
    let mut den = 2u64;
    while out.len() < count {
        for num in 1..den {
            if gcd(num, den) == 1 {
                out.push(num as f64 / den as f64);
                if out.len() == count {
                    break;
                }
            }
        }
        den += 1;
    }
    out
}

/// One sampling site of the jump-integral construction: the graph point
/// (s, I_α(s)) and its two one-sided contributors at distance `eps`.
#[derive(Debug, Clone, Copy)]
pub struct JumpIntegralSample {
    pub s: f64,
    pub integral: f64,
    pub y_minus: Point2,
    pub y_plus: Point2,
}

/// Evaluate the jump-integral construction: amplitudes aₙ = 2⁻ⁿ at the
/// first `num_terms` enumerated rationals qₙ, slope profile
/// α(x) = Σ_{qₙ ≤ x} aₙ, integral I_α(x) = ∫₀ˣ α, and contributors
///
/// y±(s) = (s + a±(s), I_α(s) − b±(s)),
/// a±(s) = ε·D±I_α / √(1 + (D±I_α)²), b±(s) = ε / √(1 + (D±I_α)²),
///
/// where D±I_α are the one-sided derivatives of I_α. Samples are taken at
/// `grid_points` uniform nodes on [0,1] plus every jump site qₙ.
pub fn jump_integral_samples(num_terms: usize, eps: f64, grid_points: usize) -> Vec<JumpIntegralSample> {
    let rats = rational_enumeration(num_terms);
    let amps: Vec<f64> = (1..=num_terms).map(|n| (0.5f64).powi(n as i32)).collect();
    let integral = |x: f64| -> f64 {
        rats.iter()
            .zip(&amps)
            .map(|(q, a)| a * (x - q).max(0.0))
            .sum()
    };
    let slope_left = |x: f64| -> f64 {
        rats.iter().zip(&amps).filter(|(q, _)| **q < x).map(|(_, a)| a).sum()
    };
    let slope_right = |x: f64| -> f64 {
        rats.iter().zip(&amps).filter(|(q, _)| **q <= x).map(|(_, a)| a).sum()
    };
    let mut sites: Vec<f64> = (0..=grid_points)
        .map(|i| i as f64 / grid_points as f64)
        .chain(rats.iter().copied())
        .collect();
    sites.sort_by(|a, b| a.partial_cmp(b).unwrap());
    sites.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    sites
        .into_iter()
        .map(|s| {
            let ia = integral(s);
            let contributor = |slope: f64| {
                let scale = eps / (1.0 + slope * slope).sqrt();
                Point2::raw(s + slope * scale, ia - scale)
            };
            JumpIntegralSample {
                s,
                integral: ia,
                y_minus: contributor(slope_left(s)),
                y_plus: contributor(slope_right(s)),
            }
        })
        .collect()
}

/// Point-cloud spec of the jump-integral contributors (default grid of 256
/// nodes plus the jump sites).
pub fn gen_jump_integral(num_terms: usize, eps: f64) -> Result<SetSpec, SetModelError> {
    let samples = jump_integral_samples(num_terms, eps, 256);
    let mut prims = Vec::new();
    let mut push = |p: Point2| {
        // contributors from flat stretches coincide; keep the spec compact
        if prims
            .last()
            .map_or(true, |q: &Primitive| q.closest_point(&p).dist(&p) > 1e-12)
        {
            prims.push(Primitive::point(p));
        }
    };
    for s in &samples {
        push(s.y_minus);
        push(s.y_plus);
    }
    SetSpec::new(format!("jump-integral-{num_terms}"), prims)
}
