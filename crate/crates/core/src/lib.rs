//! Linear codes from projective embeddings of point-line geometries.
//!
//! The pipeline has three stages. A geometry from [`zoo`] supplies points
//! and lines; [`embed`] maps the points to a projective system in some
//! `PG(D - 1, q)`; [`code`] reads the system as the generator matrix of a
//! linear code and sweeps its weight distribution and minimality. The
//! [`oracle`] module holds closed-form expectations for every supported
//! family, and [`report`] bundles computed and expected values with their
//! disagreements into a serializable report.

pub mod gf;
pub mod code;
pub mod embed;
pub mod geometry;
pub mod linalg;
pub mod oracle;
pub mod report;
pub mod zoo;

/// Enumeration budgets for the exhaustive sweeps.
///
/// The sweeps are exact, so their cost is the full message space or the full
/// set of hyperplane classes. Budgets keep accidental big inputs from
/// running for hours; every cap can be raised explicitly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Most messages `q^K` a distribution sweep may enumerate.
    pub max_messages: u64,
    /// Most functional classes `(q^K - 1) / (q - 1)` a hyperplane sweep may
    /// enumerate.
    pub max_classes: u64,
    /// Most subspaces a geometry construction may enumerate.
    pub max_subspaces: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_messages: 1 << 26,
            max_classes: 1 << 22,
            max_subspaces: 1 << 22,
        }
    }
}
