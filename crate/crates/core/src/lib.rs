//! Lattice diagram determinants, their derivative-closure modules, the
//! shift-operator calculus and the k-hole sum spaces `M^k_{i,j}`, with the
//! explicit basis construction for the Y-degree-zero part.

pub mod determinant;
pub mod bases;
pub mod combinatorics;
pub mod diagrams;
pub mod error;
pub mod linalg;
pub mod polycore;
pub mod shiftops;
pub mod spaces;
pub mod symmetric;

pub use diagrams::{Cell, HoledDiagram, LatticeDiagram, Partition};
pub use error::{Error, Result};
pub use polycore::{Alphabet, Bidegree, Monomial, Polynomial, Rational};
