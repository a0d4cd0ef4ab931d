//! Exact low-area disk-counting invariants for Lagrangian tori in
//! symplectic four-manifolds, and the non-displaceability criteria built
//! on them.

pub mod abelian;
pub mod criterion;
pub mod invariants;
pub mod matrix;
pub mod potential;
pub mod probes;
pub mod report;
pub mod ring;
pub mod scenario;
pub mod subspace;
