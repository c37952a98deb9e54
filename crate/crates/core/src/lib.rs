//! Exact computation of Gross lattices of maximal orders in the definite
//! quaternion algebra ramified at a prime `p`, their successive minimal
//! bases and Gram matrices, and classification of the corresponding
//! supersingular elliptic curves.

pub mod classify;
pub mod cm;
pub mod error;
pub mod exact;
pub mod gramgross;
pub mod lattice;
pub mod oracle;
pub mod orders;
pub mod quat;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{IntMatrix, Lattice};
pub use lattice::{GrossLattice, MinimaTriple, MinimalBasis};
pub use orders::{
    enumerate_types, standard_maximal_order, QuaternionOrder, TypeCatalog, TypeRecord,
};
pub use quat::{QuaternionAlgebra, QuaternionElement};
