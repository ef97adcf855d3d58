//! Fixtures shared by the kernel benchmarks.

use dihedral_iwasawa::series::{NodeGrid, TruncSeries};
use dihedral_iwasawa::PAdic;

/// Values of a fixed polynomial at the first `n` nodes u^k − 1.
pub fn node_values(grid: &NodeGrid, n: usize, prec: i64) -> Vec<PAdic> {
    let poly = TruncSeries::from_i64s(&(1..=n as i64).map(|k| k * k + 3).collect::<Vec<_>>(), prec);
    (1..=n).map(|k| poly.eval_poly(grid.node(k))).collect()
}
