//! Shared fixtures for the benchmarks.

use rankseq::census::{CensusField, CensusOptions, ParamTriple};
use rankseq::{codes, Code, CodeSpec, Family};

/// A one-twist code of length n inside F_{2^{2n}}, as used by the census.
pub fn census_code(n: usize, k: usize) -> Code {
    let field = CensusField::new(&CensusOptions::new(2), n).expect("census field");
    let spec = field.spec(k, ParamTriple { s: 1, h: k - 1, t: 1 });
    codes::build_resolved(&field.tower, &spec, &field.alpha, &[field.eta]).expect("census code")
}

/// A full-length Gabidulin code over F_{q^m}.
pub fn gabidulin(q: u64, m: u32, k: usize) -> Code {
    codes::build(&CodeSpec::new(Family::Gabidulin, q, m, m as usize, k)).expect("gabidulin")
}
