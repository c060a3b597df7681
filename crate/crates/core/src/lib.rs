//! Tight connectivity in 2-edge-coloured k-uniform hypergraphs: components,
//! density cleaning, blueprints, tightly connected matchings, constrained
//! fractional matchings and the extremal two-cycle partition verifier.

pub mod blueprint;
pub mod combin;
pub mod components;
pub mod density;
pub mod edge;
pub mod error;
pub mod extremal;
pub mod fracmatch;
pub mod graph;
pub mod harness;
pub mod io;
pub mod matching;
pub mod numeric;

pub use components::{tight_components, tight_walk, ComponentId, TightComponent, TightDecomposition};
pub use edge::{Colour, Edge, Vertex, VertexSet};
pub use error::{Error, Result};
pub use graph::ColouredKGraph;
pub use numeric::Rational;
