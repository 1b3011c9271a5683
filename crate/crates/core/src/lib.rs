//! Rank-metric codes over finite field towers and the σ-sequence invariants
//! that separate them up to semilinear equivalence.

pub mod census;
pub mod codes;
pub mod error;
pub mod ff;
pub mod invariants;
pub mod linalg;
pub mod nt;
pub mod poly;

pub use census::{AutoSet, CensusOptions, CensusReport, CensusRow, ParamTriple};
pub use codes::{AlphaSel, Code, CodeSpec, EtaSel, Family, Isometry};
pub use error::{Error, Result};
pub use ff::{FieldElem, FieldTower};
pub use invariants::{Fingerprint, FingerprintContext, SigmaSequence, Verdict};
pub use linalg::{Mat, RowSpace};
