//! Exact construction, cylinder geometry and dimension theory for
//! digit-restricted Cantor-like sets built on s-adic, nega-s-adic and
//! Cantor-series expansions.
//!
//! - [`radix`]: exact evaluation of the underlying numeral systems.
//! - [`families`]: the set families as block languages, their addresses and value maps.
//! - [`cylinders`]: cylinder intervals, a tail-extrema oracle, gaps, orientation, covering sums.
//! - [`dimension`]: Moran / block-combination roots and closed forms.
//! - [`boxcount`]: box-counting estimates from exact cylinder covers.
//! - [`cli`]: the `cantorset` command-line tool.

pub mod boxcount;
pub mod cli;
pub mod cylinders;
pub mod dimension;
pub mod error;
pub mod families;
pub mod grammar;
pub mod ifs;
pub mod radix;

pub use dimension::DimensionResult;
pub use error::{Error, Result};
pub use families::{BlockSet, CylinderAddress, FamilySpec};
pub use ifs::Interval;
pub use radix::Rational;
