//! Algebras over the finite powerset monad (join-semilattices with a
//! bottom element) and their colimits, computed two independent ways.

pub mod colimit;
pub mod semilattice;
pub mod suite;

pub use colimit::{
    colimit_coequalizer_pair, colimit_direct, colimit_via_coequalizer, tensor_coequalizer_pair, tensor_via_coequalizer,
    AlgebraDiagram, Arrow, CoequalizerPair,
};
pub use semilattice::{find_isomorphism, iso_check, Semilattice};
pub use suite::{builtin_suite, parse_suite, render_suite, verify_suite, MonadicReport, Suite};
