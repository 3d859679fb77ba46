//! W-weighted m-weak group inverse of complex rectangular matrices, the
//! generalized inverses it is built from, and a verification harness that
//! cross-checks every representation against the definition.

pub mod error;
pub mod fixtures;
pub mod geninv;
pub mod harness;
pub mod io;
pub mod matrix;
pub mod spectral;
pub mod wmwg;

pub use error::{Error, Result};
pub use fixtures::FixtureName;
pub use geninv::{Norms, WeightedPair};
pub use harness::{CrossCheckReport, RandomSpec};
pub use matrix::{ComplexMatrix, C64};
pub use spectral::{IndexInfo, SvdFactors, ToleranceConfig};
pub use wmwg::{ProjectorKind, ReprMethod};
