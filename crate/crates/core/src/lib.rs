//! Exact graded homological algebra over `Z` and `F_p`.
//!
//! The crate builds free graded-commutative algebras, their bar and
//! cyclic bar constructions, and the chain complexes these totalize to;
//! homology is computed exactly (ranks over `F_p`, Smith normal form over
//! `Z`). On top of that sit a small catalogue of loop-space models, the
//! topological Hochschild homology splitting computations, and colimits of
//! algebras over the finite powerset monad.

pub mod algebra;
pub mod bar;
pub mod complex;
pub mod error;
pub mod group;
pub mod matrix;
pub mod models;
pub mod monadic;
pub mod ring;
pub mod simplicial;
pub mod splitting;
pub mod suites;

pub use algebra::{Element, FreeGca, Generator, GeneratorKind, Monomial, PoincareVector};
pub use bar::{cyclic_bar, cyclic_bar_with, relative_bar, tensor_with_simplicial_set, two_sided_bar, CyclicFaceSign, SimplicialGradedModule};
pub use complex::ChainComplex;
pub use error::{Error, Result};
pub use group::{GradedAbelianGroup, GroupEntry};
pub use matrix::SparseMatrix;
pub use models::{circle_bundle_homology, model, DividedPowerRing, EulerClass, Presentation, SpaceModel};
pub use ring::CoefficientRing;
pub use simplicial::{FiniteSimplicialSet, Simplex};
pub use splitting::{
    bar_factorization_check, compute_thh, splitting_tensor_check, thh_em, thh_even_degenerate, CheckReport,
    SpectrumDescriptor, ThhResult, ThhTarget, ThomSetup,
};
pub use suites::{run_suite, SuiteName, SuiteReport, VerifyOptions};

// The guide's code blocks run as doctests, one module per chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/algebras.md")]
    mod algebras {}
    #[doc = include_str!("../../../book/src/homology.md")]
    mod homology {}
    #[doc = include_str!("../../../book/src/bar-constructions.md")]
    mod bar_constructions {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/splitting.md")]
    mod splitting {}
    #[doc = include_str!("../../../book/src/monadic.md")]
    mod monadic {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
