//! Cone distribution functions, set-valued quantiles, set-valued Value at
//! Risk and cone stochastic dominance for empirical multivariate samples.

pub mod cli;
pub mod dominance;
pub mod empirical;
pub mod error;
pub mod generate;
pub mod geometry;
pub mod io;
pub mod quantile;
pub mod risk;

pub use empirical::{ProbabilityLevel, Sample};
pub use error::{Error, Result};
pub use geometry::{ConvexRegion2D, Direction, Halfspace, OrderingCone};
