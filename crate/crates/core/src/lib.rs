//! Total and unit graphs of finite commutative rings, their exact Sombor
//! indices, and a harness that checks constant-time formulas against
//! edge-by-edge evaluation.
//!
//! ```
//! use sombor_core::{closed_forms, graph, indices, ring::FiniteRing};
//!
//! let z15 = FiniteRing::zn(15).unwrap();
//! let (g, _) = graph::total_graph(&z15);
//! let oracle = indices::sombor_bruteforce(&g);
//! assert_eq!(oracle, closed_forms::so_total_pq(3, 5).unwrap());
//! assert_eq!(oracle.to_string(), "218*sqrt(2) + 16*sqrt(85)");
//! ```

pub mod closed_forms;
pub mod error;
pub mod graph;
pub mod indices;
pub mod radical;
pub mod report;
pub mod ring;
pub mod verify;

pub use closed_forms::{EdgePartition, Formula, FormulaSelection, FormulaVariant};
pub use error::{Error, Result};
pub use graph::{Graph, GraphKind};
pub use radical::RadicalSum;
pub use ring::{FiniteRing, LocalRingSpec, ModulusFamily};
