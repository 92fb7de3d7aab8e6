//! θ-Reed–Muller rank-metric codes over abelian Galois extensions.
//!
//! The crate builds extension towers L/K (finite fields, multiquadratic
//! extensions of Q, Artin–Schreier composites over F_2(t)), encodes
//! θ-Reed–Muller codes, and decodes them with three algorithms: the
//! Dickson-matrix minor-cancellation decoder, its Gabidulin and Reed–Solomon
//! specializations, and the recursive folding decoder for binary shapes.

pub mod decode_classical;
pub mod decode_dickson;
pub mod decode_recursive;
pub mod group;
pub mod kfield;
pub mod linalg;
pub mod ops;
pub mod radius;
pub mod rmcode;
pub mod skew;
pub mod tower;
pub mod trials;
