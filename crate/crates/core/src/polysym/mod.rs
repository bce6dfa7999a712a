//! Exact reconstruction of the rod curves `f_ij`, their eliminants `F_i`, and
//! machine verification of the identities they satisfy.

pub mod build;
pub mod report;
pub mod verify;

pub use build::{build_F, build_f, curved_ring, euclid_ring, normalizer, ring_for, sym};
pub use report::{Certificate, IdentityCheck, Report, Status};
pub use verify::{
    verify_coefficient_identities, verify_counts, verify_discriminant_identities, verify_kind,
    verify_resultant_identities, Fault,
};
