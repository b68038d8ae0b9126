//! Toy-scale reduction pipeline: rich 2-to-1 games, dictatorship tests
//! over statistics-matched slices, the folding reduction to a CSP, exact
//! completeness evaluation, and influence-based decoding.

pub mod decode;
pub mod game;
pub mod reduce;
pub mod test;
pub mod value;

pub use decode::{decode, DecodeReport};
pub use game::{game_value_exact, RichGame};
pub use reduce::{reduce, CspInstance, ReduceMode};
pub use test::{even_statistics_adjust, unequal_test, DictatorshipTest, Predicate};
pub use value::{csp_value_exact, csp_value_greedy};
