//! (1;2) sector-disk (SD) and partial-MDS (PMDS) erasure codes extending
//! RAID 5 with two extra global parities.
//!
//! Data is arranged in `m x n` stripes whose columns map to storage devices.
//! Each row carries single (RAID 5) parity; two additional parity rows built
//! from powers of a generator `alpha` lift the scheme so that, on top of one
//! erasure per row, two extra erasures can be corrected:
//!
//! * the **SD** construction guarantees the extra erasures whenever they
//!   share a column with a failed device (the sector-disk failure model);
//! * the **PMDS** construction guarantees them anywhere, at the cost of a
//!   larger required generator order (`2mn` instead of `mn`).
//!
//! Both constructions work over `GF(2^b)` and over the XOR-friendly ring of
//! binary polynomials modulo `M_p(x) = 1 + x + ... + x^(p-1)`.
//!
//! The crate provides the parity-check construction ([`construction`]),
//! systematic encoding and structured erasure decoding ([`codec`]),
//! exhaustive desk-scale verification of the SD/PMDS properties
//! ([`verifier`]), and an on-disk container that shards payloads across
//! simulated device files ([`container`]).
//!
//! ```
//! use pmds::{Algebra, CodeParams, CodeVariant, StripeCodec};
//!
//! let alg = Algebra::field_default(4).unwrap();
//! let params = CodeParams::new(3, 5, CodeVariant::Sd, alg).unwrap();
//! let codec = StripeCodec::new(params);
//!
//! let data: Vec<_> = (0..codec.data_len())
//!     .map(|v| alg.symbol(v as u64 % 16).unwrap())
//!     .collect();
//! let stripe = codec.encode(&data).unwrap();
//!
//! let mut damaged = stripe.clone();
//! damaged.erase_cells([(0, 1), (1, 1), (2, 1), (1, 3)]).unwrap();
//! assert_eq!(codec.decode(&damaged).unwrap(), stripe);
//! ```

mod bits;

pub mod algebra;
pub mod codec;
pub mod construction;
pub mod container;
pub mod linalg;
pub mod verifier;

pub use algebra::{Algebra, AlgebraError, AlgebraKind, Exponent, Symbol};
pub use codec::{
    classify, parity_positions, Classification, DecodeFailure, ErasurePattern, StripeArray,
    StripeCodec, Syndromes,
};
pub use construction::{
    build_parity_check, effective_block, CodeError, CodeParams, CodeVariant, ParityCheckMatrix,
};
pub use container::{ContainerError, ContainerHeader};
pub use linalg::{
    det3_vandermonde_check, rank_via_unit_pivots, solve_with_unit_pivots, AlgMatrix, LinalgError,
    RankCertificate,
};
pub use verifier::{
    enumerate_pmds_patterns, enumerate_sd_patterns, find_sd_pmds_separator, pattern_count, verify,
    Property, VerificationReport, VerifyError, VerifyMode, VerifyOptions,
};
