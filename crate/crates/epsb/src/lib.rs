//! Planar ε-neighbourhood boundary engine.
//!
//! Given a compact planar set E (points and segments), the library computes a
//! finite approximation of the boundary of the ε-neighbourhood of E as a set
//! of circular arcs, analyses each boundary point (nearest points on E,
//! outward directions, local graph representations), classifies boundary
//! points as smooth or one of eight singularity types, and extracts the
//! topology of the complement (connected components, chain evidence).
//!
//! Pipeline: [`setmodel`] (set specs, dyadic approximating point sets) →
//! [`arrangement`] (union-of-disks boundary) → [`analysis`] (per-point data) →
//! [`classify`] (labels) + [`topology`] (complement components).

pub mod analysis;
pub mod arrangement;
pub mod classify;
pub mod geometry;
pub mod setmodel;
pub mod tol;
pub mod topology;
