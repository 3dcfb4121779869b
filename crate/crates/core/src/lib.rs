//! Catalan-Stanley trees: the plane trees whose root branches all have
//! odd depth. A tree is reduced by deleting depth-one branches and cutting
//! the deepest grandparent of every other branch; the number of reductions
//! down to the single node is its age.
//!
//! The crate enumerates and samples these trees, computes their growth
//! generating functions as truncated power series, gives exact age and
//! ancestor statistics, and evaluates the large-size expansions.

pub mod asymptotics;
pub mod cli;
pub mod enumerate;
pub mod error;
pub mod series;
pub mod stats;
pub mod tree;
pub mod verify;

pub use asymptotics::{AsymptoticEstimate, ConstantSpec, ErrorOrder};
pub use enumerate::{catalan, count_trees, enumerate_trees, sample_tree, Sampler, SamplerConfig};
pub use error::{Error, Result};
pub use series::{Bivariate, Mark, Rational, Series};
pub use stats::{DistributionKind, DistributionTable, MomentReport, MomentSource};
pub use tree::{parse_tree, DyckPath, MarkedView, PlaneTree, Step};
