//! Flip distance between triangulations of a planar point set.
//!
//! Two engines answer the same question: [`oracle`] runs a breadth-first
//! search over the flip graph, and [`fpt`] decides whether the distance is
//! exactly `k` by simulating a bounded nondeterministic walker that moves
//! along edges, flips them, and keeps a stack of edges to jump back to.
//! [`dag`] builds the dependency graph of a flip sequence and the checks that
//! relate the two.

pub mod cli;
pub mod dag;
pub mod fpt;
pub mod geom;
pub mod instance;
pub mod oracle;
pub mod triangulation;

pub use dag::{FlipDag, FlipRecord, FlipSequence};
pub use geom::{Orientation, Point};
pub use triangulation::{CanonicalKey, Edge, FlipError, PointId, PointSet, Triangle, Triangulation};
