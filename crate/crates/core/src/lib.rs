//! h-preorder calculus on labeled forests, canonical trees indexed by
//! ordinal notations, and difference / fine hierarchies of k-partitions over
//! finite T0 spaces.

pub mod canonical;
pub mod corpus;
pub mod forest;
pub mod nested;
pub mod oracle;
pub mod ordinal;
pub mod par;
pub mod reduce;
pub mod space;
pub mod suites;
pub mod term;

pub use forest::{Forest, Label, Tree};
pub use ordinal::Ordinal;
