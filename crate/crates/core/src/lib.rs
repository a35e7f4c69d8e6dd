//! List decoding of Barnes-Wall lattices.
pub mod arith;
pub mod bounds;
pub mod decoder;
pub mod error;
pub mod lattice;
pub mod oracle;
pub mod rm;
pub mod sample;

pub use arith::{half_relation, norm_sq, parse_rational, rsd, CVector, GVector, GaussianInt, QComplex};
pub use bounds::{validate_bounds, BoundReport};
pub use decoder::{list_decode, list_decode_parallel, DecodeList, Decoder};
pub use error::{Error, Result};
pub use lattice::{is_member, BWPoint};
pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
pub use oracle::{oracle_list, shortest_vectors, Oracle};
pub use rm::{lower_bound_instance, RMCodeword, Subspace};
