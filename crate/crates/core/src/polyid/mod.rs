//! Exact polynomial arithmetic and the identity ledger built on it.

mod identities;
mod poly;

pub use identities::{
    identity, random_point_agreement, verify_all, verify_identity, Form, Identity, IdentityName,
    IdentityReport,
};
pub use poly::{Monomial, Poly, SymbolSet};
