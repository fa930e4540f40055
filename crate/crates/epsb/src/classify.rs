//! Boundary-point classification.
//!
//! Every analyzed point of the computed eps-boundary gets exactly one label:
//! - S0 smooth, S1 wedge (two extremal directions at a proper angle),
//! - S2 sharp / S6 chain with a single outward direction,
//! - S3 sharp-sharp, S7 chain-chain, S8 sharp-chain for antipodal outward
//!   direction pairs,
//! - S4/S5 smooth points with one-/two-sided accumulation of non-unique
//!   projection witnesses,
//! - Unresolved when the finite-resolution evidence is ambiguous.
//!
//! Candidate points that turn out to be interior to the limit neighbourhood
//! (their outward directions are all covered by the exact set at probe scale)
//! are dropped rather than labeled; the arrangement of a finite approximating
//! set overcounts there.

use crate::analysis::{
    alpha_profile, contributors, extremal_pairs, local_rep, mark_extremal, outward_arc,
    AlphaProfile, ExtremalPair, OutwardArc,
};
use crate::arrangement::{disk_union_boundary, sample_boundary, ArrangementError};
use crate::geometry::{GeodesicArcKind, Point2, UnitDir};
use crate::setmodel::{finite_approximating_set, SetModelError, SetSpec};
use crate::tol;
use crate::topology::{
    chain_evidence, complement_components_spec, padded_bbox, ComponentMap, SetOracle,
    TopologyError,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum ClassifyError {
    #[error(transparent)]
    SetModel(#[from] SetModelError),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum Label {
    S0,
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
    S7,
    S8,
    Unresolved,
}

impl Label {
    pub const ALL: [Label; 10] = [
        Label::S0,
        Label::S1,
        Label::S2,
        Label::S3,
        Label::S4,
        Label::S5,
        Label::S6,
        Label::S7,
        Label::S8,
        Label::Unresolved,
    ];
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Per-direction classification verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// The side graph sum stays strictly negative near 0.
    Sharp,
    /// Zero-touches of the side graph sum accumulate toward 0, corroborated
    /// by a converging complement-component sequence.
    Chain,
    /// Probes along the direction stay inside the limit neighbourhood; the
    /// direction is not outward for the limit set.
    Covered,
    Unresolved,
}

/// Evidence for one candidate outward direction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DirectionReport {
    pub xi: UnitDir,
    pub verdict: Verdict,
    /// Arguments where the two-sided graph sum returns to zero.
    pub zero_touches: Vec<f64>,
    /// First argument where the graph sum is decisively negative.
    pub first_negative: Option<f64>,
    /// Bounded complement components converging along this direction.
    pub chain_component_ids: Vec<u32>,
    /// Complement component adjacent through this direction, when the
    /// direction is accessible at raster scale.
    pub adjacent_component: Option<u32>,
}

/// Structured classification evidence.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct Evidence {
    /// Distinct contributor directions of the exact set.
    pub multiplicity: usize,
    pub directions: Vec<DirectionReport>,
    /// Distances to non-unique-projection witnesses on each tangential side.
    pub unp_witnesses: (Vec<f64>, Vec<f64>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SingularityRecord {
    pub point: Point2,
    pub label: Label,
    /// Wedge angle (angular width of the outward direction set) for S1.
    pub angle: Option<f64>,
    /// Effective outward-arc kind after interior pruning.
    pub arc_kind: GeodesicArcKind,
    pub xi1: UnitDir,
    pub xi2: UnitDir,
    pub evidence: Evidence,
    pub inspection_radius: f64,
    pub level: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Inventory {
    pub eps: f64,
    pub level: u32,
    pub spacing: f64,
    pub records: Vec<SingularityRecord>,
    pub counts: BTreeMap<Label, usize>,
}

impl Inventory {
    pub fn count(&self, label: Label) -> usize {
        self.counts.get(&label).copied().unwrap_or(0)
    }
}

/// Shared configuration for per-point classification.
pub struct ClassifyContext<'a> {
    pub spec: &'a SetSpec,
    pub eps: f64,
    pub level: u32,
    /// Nodes of the one-sided graph sampling grid on [0, eps/2].
    pub alpha_samples: usize,
    /// |dist − eps| tolerance for accepting a candidate boundary point.
    pub boundary_tol: f64,
    /// Probe offset for the covered-direction test (half a dyadic cell).
    pub probe_delta: f64,
    /// Minimum links for a chain-component sequence.
    pub min_links: usize,
    pub map: Option<&'a ComponentMap>,
}

impl<'a> ClassifyContext<'a> {
    pub fn new(spec: &'a SetSpec, eps: f64, level: u32) -> Self {
        let cell = 2f64.powi(-(level as i32));
        ClassifyContext {
            spec,
            eps,
            level,
            alpha_samples: 513,
            boundary_tol: cell * std::f64::consts::SQRT_2,
            probe_delta: 0.5 * cell,
            min_links: 3,
            map: None,
        }
    }

    fn grid_step(&self) -> f64 {
        0.5 * self.eps / (self.alpha_samples.max(2) - 1) as f64
    }

    fn touch_tol(&self) -> f64 {
        let g = self.grid_step();
        2.0 * g * g / (self.eps * self.eps) + 1e-12
    }

    fn dist(&self, q: Point2) -> f64 {
        SetOracle::Spec(self.spec).dist(q)
    }

    /// True when probing along `xi` stays inside the limit neighbourhood.
    fn direction_covered(&self, x: &Point2, xi: &UnitDir) -> bool {
        let q = Point2::raw(
            x.x + self.probe_delta * xi.ux,
            x.y + self.probe_delta * xi.uy,
        );
        self.dist(q) <= self.eps + 1e-12 * self.eps.max(1.0)
    }

    /// Bounded complement components converging to `x` from the `xi` side.
    fn directional_chain(&self, x: &Point2, xi: &UnitDir) -> Vec<u32> {
        let Some(map) = self.map else { return Vec::new() };
        let filtered: Vec<_> = map
            .components
            .iter()
            .filter(|c| c.bounded && !c.samples.is_empty())
            .filter(|c| {
                let closest = c
                    .samples
                    .iter()
                    .min_by(|a, b| a.dist(x).partial_cmp(&b.dist(x)).unwrap())
                    .unwrap();
                let d = closest.dist(x);
                if d > self.eps {
                    return false;
                }
                let dot = (closest.x - x.x) * xi.ux + (closest.y - x.y) * xi.uy;
                dot > 0.3 * d
            })
            .cloned()
            .collect();
        chain_evidence(*x, &filtered, self.min_links, map.h)
            .map(|ev| ev.component_ids)
            .unwrap_or_default()
    }

    fn adjacent_component(&self, x: &Point2, xi: &UnitDir) -> Option<u32> {
        let map = self.map?;
        for delta in [2.0 * map.h, 4.0 * map.h] {
            let q = Point2::raw(x.x + delta * xi.ux, x.y + delta * xi.uy);
            if let Some(id) = map.component_near(q, 2.0 * map.h) {
                return Some(id);
            }
        }
        None
    }
}

/// Per-direction verdict from the two opposing side graphs.
fn direction_verdict(
    ctx: &ClassifyContext,
    x: &Point2,
    xi: &UnitDir,
    pairs: &[ExtremalPair],
) -> DirectionReport {
    let mut report = DirectionReport {
        xi: *xi,
        verdict: Verdict::Unresolved,
        zero_touches: Vec::new(),
        first_negative: None,
        chain_component_ids: Vec::new(),
        adjacent_component: None,
    };
    let covered = ctx.direction_covered(x, xi);
    if !covered {
        report.adjacent_component = ctx.adjacent_component(x, xi);
    }

    // Opposing contributor pair orthogonal to xi.
    let along: Vec<&ExtremalPair> = pairs
        .iter()
        .filter(|p| p.xi.ang_to(xi) <= 10.0 * tol::ANGLE)
        .collect();
    let opposing = along.iter().enumerate().find_map(|(i, p)| {
        along.iter().skip(i + 1).find_map(|q| {
            let (ax, ay) = p.y.sub(x);
            let (bx, by) = q.y.sub(x);
            if (ax + bx).hypot(ay + by) <= 1e-6 * ctx.eps {
                Some((**p, **q))
            } else {
                None
            }
        })
    });
    let alpha: Option<AlphaProfile> = opposing.and_then(|(p, q)| {
        let r1 = local_rep(ctx.spec, x, &p, ctx.eps, ctx.level, ctx.alpha_samples).ok()?;
        let r2 = local_rep(ctx.spec, x, &q, ctx.eps, ctx.level, ctx.alpha_samples).ok()?;
        alpha_profile(&r1, &r2, ctx.touch_tol()).ok()
    });
    if let Some(alpha) = &alpha {
        report.zero_touches = alpha.zero_touches.clone();
        report.first_negative = alpha
            .samples
            .iter()
            .find(|(_, a)| a.map_or(false, |v| v < -alpha.touch_tol))
            .map(|(s, _)| *s);
    }

    if covered {
        // Interior at probe scale. A converging component sequence on this
        // side is recorded as chain-candidate evidence, but the verdict stays
        // Covered: at the resolved level the direction is not outward.
        report.chain_component_ids = ctx.directional_chain(x, xi);
        report.verdict = Verdict::Covered;
        return report;
    }

    let Some(_) = alpha else {
        return report; // genuine direction but no opposing graph: unresolved
    };
    let g = ctx.grid_step();
    let innermost = report.zero_touches.first().copied();
    let accumulating = report.zero_touches.len() >= 2 && innermost.unwrap() < 4.0 * g;
    if accumulating {
        // Cross-check the graph witness against component evidence.
        report.chain_component_ids = ctx.directional_chain(x, xi);
        report.verdict = if report.chain_component_ids.len() >= ctx.min_links {
            Verdict::Chain
        } else {
            Verdict::Unresolved
        };
    } else if report.first_negative.is_some() && innermost.map_or(true, |s| s >= 4.0 * g) {
        report.verdict = Verdict::Sharp;
    }
    report
}

/// Classify a single candidate boundary point. Returns `None` when the point
/// is interior to the limit neighbourhood (all candidate outward directions
/// covered), i.e. an artifact of the finite-level arrangement.
pub fn classify_point(ctx: &ClassifyContext, x: &Point2) -> Option<SingularityRecord> {
    let mut cs = contributors(ctx.spec, x, ctx.eps, ctx.boundary_tol).ok()?;
    let oa: OutwardArc = outward_arc(x, &cs).ok()?;
    mark_extremal(&mut cs, &oa);
    let pairs = extremal_pairs(x, &cs, &oa);
    let multiplicity = distinct_directions(x, &cs);
    let r_inspect = 0.5 * ctx.eps;

    let base = |label, arc_kind, xi1: UnitDir, xi2: UnitDir, angle, dirs| SingularityRecord {
        point: *x,
        label,
        angle,
        arc_kind,
        xi1,
        xi2,
        evidence: Evidence {
            multiplicity,
            directions: dirs,
            unp_witnesses: (Vec::new(), Vec::new()),
        },
        inspection_radius: r_inspect,
        level: ctx.level,
    };

    let width = oa.arc.width();
    match oa.arc.kind {
        GeodesicArcKind::HalfCircle | GeodesicArcKind::FullCircle => {
            smooth_record(ctx, x, &oa, base)
        }
        GeodesicArcKind::ProperArc => {
            if width >= std::f64::consts::PI - tol::ANGLE_WEDGE {
                // Contributor directions nearly coincide: indistinguishable
                // from a smooth point, but multiplicity forbids S0.
                if ctx.direction_covered(x, &oa.arc.mid) {
                    return None;
                }
                return Some(base(
                    Label::Unresolved,
                    GeodesicArcKind::ProperArc,
                    oa.xi1,
                    oa.xi2,
                    Some(width),
                    Vec::new(),
                ));
            }
            if width <= tol::ANGLE_WEDGE {
                return singleton_record(ctx, x, &oa.arc.mid, &pairs, base);
            }
            if ctx.direction_covered(x, &oa.arc.mid) {
                return None;
            }
            let mut rec = base(
                Label::S1,
                GeodesicArcKind::ProperArc,
                oa.xi1,
                oa.xi2,
                Some(width),
                Vec::new(),
            );
            if let Some(map) = ctx.map {
                let mut dir = DirectionReport {
                    xi: oa.arc.mid,
                    verdict: Verdict::Sharp,
                    zero_touches: Vec::new(),
                    first_negative: None,
                    chain_component_ids: Vec::new(),
                    adjacent_component: None,
                };
                for delta in [2.0 * map.h, 4.0 * map.h] {
                    let q = Point2::raw(
                        x.x + delta * oa.arc.mid.ux,
                        x.y + delta * oa.arc.mid.uy,
                    );
                    if let Some(id) = map.component_near(q, 2.0 * map.h) {
                        dir.adjacent_component = Some(id);
                        break;
                    }
                }
                rec.evidence.directions.push(dir);
            }
            Some(rec)
        }
        GeodesicArcKind::Singleton => singleton_record(ctx, x, &oa.arc.a, &pairs, base),
        GeodesicArcKind::AntipodalPair => {
            let rep1 = direction_verdict(ctx, x, &oa.arc.a, &pairs);
            let rep2 = direction_verdict(ctx, x, &oa.arc.b, &pairs);
            let combined = match (rep1.verdict, rep2.verdict) {
                (Verdict::Covered, Verdict::Covered) => return None,
                (Verdict::Sharp, Verdict::Sharp) => (Label::S3, GeodesicArcKind::AntipodalPair),
                (Verdict::Chain, Verdict::Chain) => (Label::S7, GeodesicArcKind::AntipodalPair),
                (Verdict::Sharp, Verdict::Chain) | (Verdict::Chain, Verdict::Sharp) => {
                    (Label::S8, GeodesicArcKind::AntipodalPair)
                }
                (Verdict::Sharp, Verdict::Covered) | (Verdict::Covered, Verdict::Sharp) => {
                    (Label::S2, GeodesicArcKind::Singleton)
                }
                (Verdict::Chain, Verdict::Covered) | (Verdict::Covered, Verdict::Chain) => {
                    (Label::S6, GeodesicArcKind::Singleton)
                }
                _ => (Label::Unresolved, GeodesicArcKind::AntipodalPair),
            };
            let (label, kind) = combined;
            let (xi1, xi2) = if kind == GeodesicArcKind::Singleton {
                // Keep only the direction that survived pruning.
                let keep = if rep1.verdict == Verdict::Covered { rep2.xi } else { rep1.xi };
                (keep, keep)
            } else {
                (oa.arc.a, oa.arc.b)
            };
            Some(base(label, kind, xi1, xi2, None, vec![rep1, rep2]))
        }
    }
}

fn smooth_record(
    ctx: &ClassifyContext,
    x: &Point2,
    oa: &OutwardArc,
    base: impl Fn(Label, GeodesicArcKind, UnitDir, UnitDir, Option<f64>, Vec<DirectionReport>) -> SingularityRecord,
) -> Option<SingularityRecord> {
    let outward = oa.arc.mid;
    if ctx.direction_covered(x, &outward) {
        return None;
    }
    let mut dir = DirectionReport {
        xi: outward,
        verdict: Verdict::Sharp,
        zero_touches: Vec::new(),
        first_negative: None,
        chain_component_ids: Vec::new(),
        adjacent_component: None,
    };
    dir.adjacent_component = ctx.adjacent_component(x, &outward);
    Some(base(
        Label::S0,
        GeodesicArcKind::HalfCircle,
        oa.xi1,
        oa.xi2,
        None,
        vec![dir],
    ))
}

fn singleton_record(
    ctx: &ClassifyContext,
    x: &Point2,
    xi: &UnitDir,
    pairs: &[ExtremalPair],
    base: impl Fn(Label, GeodesicArcKind, UnitDir, UnitDir, Option<f64>, Vec<DirectionReport>) -> SingularityRecord,
) -> Option<SingularityRecord> {
    let rep = direction_verdict(ctx, x, xi, pairs);
    let label = match rep.verdict {
        Verdict::Covered => return None,
        Verdict::Sharp => Label::S2,
        Verdict::Chain => Label::S6,
        Verdict::Unresolved => Label::Unresolved,
    };
    Some(base(label, GeodesicArcKind::Singleton, *xi, *xi, None, vec![rep]))
}

/// Distinct contributor directions (unit vectors toward contributors).
fn distinct_directions(x: &Point2, cs: &crate::analysis::ContributorSet) -> usize {
    let mut dirs: Vec<UnitDir> = Vec::new();
    for y in &cs.members {
        let (dx, dy) = y.sub(x);
        if let Ok(w) = UnitDir::from_vec(dx, dy) {
            if !dirs.iter().any(|v| v.ang_to(&w) <= tol::ANGLE) {
                dirs.push(w);
            }
        }
    }
    dirs.len()
}

/// Full pipeline: approximating set, arrangement, sampled boundary plus all
/// arrangement vertices, per-point classification, projection-uniqueness
/// refinement (S4/S5), ordered inventory.
/// Snap a candidate point of the approximate arrangement onto the exact
/// eps-boundary. Arrangement vertices sit within a cell diagonal of the true
/// feature but their two contributor distances differ by more than the
/// multiplicity tolerance; intersecting the eps-circles around the two
/// nearest contributor feet recovers the exact vertex. Points with a single
/// near-eps foot are snapped radially.
fn polish_candidate(spec: &SetSpec, eps: f64, x: &Point2, window: f64) -> Point2 {
    let mut feet: Vec<(f64, Point2)> = spec
        .primitives
        .iter()
        .map(|prim| {
            let f = prim.closest_point(x);
            (x.dist(&f), f)
        })
        .collect();
    feet.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut ded: Vec<(f64, Point2)> = Vec::new();
    for (d, f) in feet {
        if !ded.iter().any(|(_, g)| g.dist(&f) <= tol::VERTEX_MERGE) {
            ded.push((d, f));
        }
    }
    let (d1, y1) = ded[0];
    if (d1 - eps).abs() > window || d1 <= tol::VERTEX_MERGE {
        return *x;
    }
    if let Some(&(d2, y2)) = ded.get(1) {
        if (d2 - eps).abs() <= window {
            let c = y1.dist(&y2);
            if c > tol::VERTEX_MERGE && c <= 2.0 * eps + window {
                let (mx, my) = (0.5 * (y1.x + y2.x), 0.5 * (y1.y + y2.y));
                let h = (eps * eps - 0.25 * c * c).max(0.0).sqrt();
                let (ux, uy) = ((y2.x - y1.x) / c, (y2.y - y1.y) / c);
                let p1 = Point2::raw(mx - h * uy, my + h * ux);
                let p2 = Point2::raw(mx + h * uy, my - h * ux);
                let cand = if p1.dist(x) <= p2.dist(x) { p1 } else { p2 };
                if cand.dist(x) <= 4.0 * window {
                    return cand;
                }
            }
        }
    }
    Point2::raw(
        y1.x + eps * (x.x - y1.x) / d1,
        y1.y + eps * (x.y - y1.y) / d1,
    )
}

pub fn classify_boundary(
    spec: &SetSpec,
    eps: f64,
    n: u32,
    spacing: f64,
) -> Result<Inventory, ClassifyError> {
    let approx = finite_approximating_set(spec, n, eps)?;
    let bas = disk_union_boundary(&approx.points, eps)?;
    let samples = sample_boundary(&bas, spacing)?;

    let bbox = padded_bbox(&SetOracle::Spec(spec), eps)?;
    let map = complement_components_spec(spec, eps, bbox, eps / 16.0)?;

    let mut ctx = ClassifyContext::new(spec, eps, n);
    ctx.map = Some(&map);

    // Candidate points: all arrangement vertices, plus arc samples that do
    // not sit on a vertex.
    let vertex_tol = 1e-6_f64.max(100.0 * tol::VERTEX_MERGE);
    let mut candidates: Vec<Point2> = bas.vertices.clone();
    for s in &samples {
        if !bas
            .vertices
            .iter()
            .any(|v| v.dist(&s.position) <= vertex_tol)
        {
            candidates.push(s.position);
        }
    }
    let mut candidates: Vec<Point2> = candidates
        .iter()
        .map(|x| polish_candidate(spec, eps, x, ctx.boundary_tol))
        .collect();
    candidates.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).unwrap());
    candidates.dedup_by(|a, b| a.dist(b) <= 1e-9);

    let mut records: Vec<SingularityRecord> = candidates
        .par_iter()
        .filter_map(|x| classify_point(&ctx, x))
        .collect();
    records.sort_by(|a, b| (a.point.x, a.point.y).partial_cmp(&(b.point.x, b.point.y)).unwrap());

    // Projection-uniqueness refinement: smooth points with accumulating
    // non-unique-projection witnesses on one/both tangential sides become
    // S4/S5. Witnesses are recorded boundary points with multiplicity >= 2.
    let witnesses: Vec<Point2> = records
        .iter()
        .filter(|r| r.evidence.multiplicity >= 2)
        .map(|r| r.point)
        .collect();
    let r_inspect = 8.0 * spacing;
    for rec in &mut records {
        if rec.label != Label::S0 {
            continue;
        }
        // Tangent = orthogonal complement of the outward normal.
        let t = rec.evidence.directions[0].xi.perp();
        let (mut left, mut right) = (Vec::new(), Vec::new());
        for w in &witnesses {
            let d = w.dist(&rec.point);
            if d <= 1e-9 || d > r_inspect {
                continue;
            }
            let side = (w.x - rec.point.x) * t.ux + (w.y - rec.point.y) * t.uy;
            if side >= 0.0 {
                right.push(d);
            } else {
                left.push(d);
            }
        }
        left.sort_by(|a, b| a.partial_cmp(b).unwrap());
        right.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // Accumulation at sampling resolution: several witnesses on the side
        // with the innermost closer than any isolated vertex can be to a
        // sample (samples keep >= spacing/2 from arrangement vertices).
        // Accumulation at the declared resolution: three witnesses inside a
        // single sampling step, geometrically nested toward the candidate.
        let accum = |v: &[f64]| {
            v.len() >= 3 && v[0] < spacing / 4.0 && v[1] < spacing / 2.0 && v[2] < spacing
        };
        let (la, ra) = (accum(&left), accum(&right));
        rec.label = match (la, ra) {
            (true, true) => Label::S5,
            (true, false) | (false, true) => Label::S4,
            (false, false) => Label::S0,
        };
        rec.inspection_radius = r_inspect;
        rec.evidence.unp_witnesses = (left, right);
    }

    let mut counts = BTreeMap::new();
    for rec in &records {
        *counts.entry(rec.label).or_insert(0) += 1;
    }
    Ok(Inventory { eps, level: n, spacing, records, counts })
}

/// Partition verification report.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionReport {
    pub ok: bool,
    pub violations: Vec<String>,
}

/// Check one-label-per-point and the label/arc-kind consistency table:
/// S1 ⇔ proper arc with angle in (1e-3, π − 1e-3); S2/S6 ⇔ singleton;
/// S3/S7/S8 ⇔ antipodal pair; S0/S4/S5 ⇔ half circle with multiplicity 1.
pub fn verify_partition(inv: &Inventory) -> PartitionReport {
    let mut violations = Vec::new();
    for rec in &inv.records {
        let ok = match rec.label {
            Label::S1 => {
                rec.arc_kind == GeodesicArcKind::ProperArc
                    && rec.angle.map_or(false, |a| {
                        a > tol::ANGLE_WEDGE && a < std::f64::consts::PI - tol::ANGLE_WEDGE
                    })
            }
            Label::S2 | Label::S6 => rec.arc_kind == GeodesicArcKind::Singleton,
            Label::S3 | Label::S7 | Label::S8 => rec.arc_kind == GeodesicArcKind::AntipodalPair,
            Label::S0 | Label::S4 | Label::S5 => {
                rec.arc_kind == GeodesicArcKind::HalfCircle && rec.evidence.multiplicity == 1
            }
            Label::Unresolved => true,
        };
        if !ok {
            violations.push(format!(
                "kind mismatch: label {:?} with arc kind {:?} (multiplicity {}) at ({:.9}, {:.9})",
                rec.label, rec.arc_kind, rec.evidence.multiplicity, rec.point.x, rec.point.y
            ));
        }
    }
    // One label per point: no duplicate record positions.
    for (i, a) in inv.records.iter().enumerate() {
        if let Some(b) = inv.records.get(i + 1) {
            if a.point.dist(&b.point) <= 1e-9 {
                violations.push(format!(
                    "duplicate record at ({:.9}, {:.9})",
                    a.point.x, a.point.y
                ));
            }
        }
    }
    PartitionReport { ok: violations.is_empty(), violations }
}

/// Singular-count stability across consecutive levels: wedge/sharp counts
/// (S1+S2+S3+S8) and the shallow/chain counts (S4, S6) must agree between
/// levels n and n+1.
pub fn count_stability(
    spec: &SetSpec,
    eps: f64,
    n: u32,
    spacing: f64,
) -> Result<(Inventory, Inventory, bool), ClassifyError> {
    let a = classify_boundary(spec, eps, n, spacing)?;
    let b = classify_boundary(spec, eps, n + 1, spacing)?;
    let sharpish =
        |inv: &Inventory| inv.count(Label::S1) + inv.count(Label::S2) + inv.count(Label::S3) + inv.count(Label::S8);
    let stable = sharpish(&a) == sharpish(&b)
        && a.count(Label::S4) == b.count(Label::S4)
        && a.count(Label::S6) == b.count(Label::S6);
    Ok((a, b, stable))
}
