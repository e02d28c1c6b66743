//! Static index for orthogonal range skyline counting and reporting.
//!
//! Points are reduced to rank space and stored in a degree-`Δ` tree whose
//! nodes keep only succinct summaries of their y-sorted point lists. A count
//! query touches `O(log_Δ n)` nodes; reporting resolves list positions back
//! to points through ball-inheritance pointers.
//!
//! ```
//! use skycount::{RawPoint, QueryRect, SkylineIndex, IndexOptions};
//!
//! let pts = vec![RawPoint::new(0, 2), RawPoint::new(1, 1), RawPoint::new(2, 0)];
//! let index = SkylineIndex::build(&pts, &IndexOptions::default()).unwrap();
//! assert_eq!(index.count(&QueryRect::new(0, 2, 0, 2)), 3);
//! ```

pub mod butterfly;
pub mod cli;
pub mod container;
pub mod index;
pub mod persist;
pub mod point;
pub mod report;
pub mod space;
pub mod succinct;
pub mod tree;

pub use index::{IndexOptions, SkylineIndex};
pub use point::{PointSet, QueryRect, RankRect, RankSpacePoint, RawPoint};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("index out of range: {0}")]
    Range(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("bad index file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
