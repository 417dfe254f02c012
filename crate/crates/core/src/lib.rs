//! Exact integral Chow rings of stacks of G-zips and truncated displays.
//!
//! For a connected zip datum `(G, P, P^-, Frobenius)` with `G` one of `GL(h)`
//! or `Sp(2n)`, the Chow ring is `S^{W_L} / (f - phi(f) : f in S_+^{W_G})`
//! with `S = Z[t1, ..., tn]`. This crate computes it degree by degree as a
//! graded abelian group, together with Picard groups, rational dimensions and
//! `p`-localized reports for truncated Barsotti-Tate groups.
//!
//! ```
//! use zipchow::{picard, ZipDatum, AbelianGroup};
//!
//! let display = ZipDatum::display(2, 1, 3).unwrap();
//! assert_eq!(picard(&display).unwrap(), AbelianGroup::new(1, &[2]));
//! ```

pub mod chow;
pub mod poly;
pub mod report;
mod serde_util;
pub mod weyl;
pub mod zlinalg;

pub use chow::{
    graded_chow, graded_chow_with, graded_quotient, picard, picard_with, present, q_dimension, q_dimension_with,
    relation_data, relations, ChowError, ChowOptions, ChowPresentation, LeviBlock, Relation,
};
pub use poly::{elementary_symmetric, elementary_symmetric_squares, Monomial, Poly, PolyError};
pub use report::{
    bt_report, bt_report_with, fzip_report, fzip_report_with, localize, m11_compatibility, report, report_with,
    BtReport, ChowReport, FzipType, LocalizedReport, M11Certificate, M11Image, ReportMetadata,
};
pub use weyl::{invariant_generators, is_prime, GroupSpec, LeviSpec, Parabolic, SignedPermutation, WeylError, ZipDatum};
pub use zlinalg::{
    cokernel, rational_rank, smith_normal_form, smith_normal_form_with_certificates, smith_with, AbelianGroup,
    Certificate, GradedAbelianGroup, IntMatrix, LinalgError, SmithForm, SmithOptions, DEFAULT_MATRIX_CAP,
};
