//! Fixtures shared by the benchmarks.

use parity_core::corpus::generate;
use parity_core::{CorpusSpec, IsogenyContext, TwoIsogenyPair, WeierstrassModel};

/// Models with a spread of reduction types at small primes.
pub fn models() -> Vec<(WeierstrassModel, u64)> {
    [
        ([0, -1, 1, -10, -20], 11),
        ([0, 0, 0, 5, 0], 5),
        ([0, 0, 0, 0, 125], 5),
        ([1, -1, 1, -1344, 18405], 2),
        ([0, 1, 0, 16, 0], 2),
        ([1, 0, 1, 4, -6], 3),
    ]
    .into_iter()
    .map(|(a, l)| (WeierstrassModel::from_ints(a).expect("nonsingular"), l))
    .collect()
}

pub fn two_pair() -> TwoIsogenyPair {
    TwoIsogenyPair::from_ints(5, -48).expect("valid pair")
}

/// The first curves of each corpus, which satisfy the hypotheses at 2 and 3.
pub fn contexts() -> Vec<IsogenyContext> {
    let two = CorpusSpec { b_mult: 16, max_curves: Some(3), ..CorpusSpec::two_default() };
    let three = CorpusSpec { max_curves: Some(3), ..CorpusSpec::three_default() };
    [two, three]
        .iter()
        .flat_map(|spec| generate(spec).expect("nonempty corpus").curves)
        .map(|c| c.ctx)
        .collect()
}
