//! Static bit-level building blocks: rank/select vectors, prefix sums and
//! range-maximum queries, each with a measurable size.

pub mod bits;
pub mod prefix;
pub mod rank_select;
pub mod rmq;
pub mod sparse;

pub use bits::{BitBuf, PackedInts};
pub use prefix::MonotoneSequence;
pub use rank_select::RankSelectBits;
pub use rmq::RangeMaxStructure;
pub use sparse::SparseBitVector;
