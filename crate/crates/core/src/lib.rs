//! Binary Goppa codes with unique and list decoding, a McEliece pipeline in
//! generic and quasi-dyadic flavours, and the security arithmetic used to
//! size their parameters.

pub mod binmat;
pub mod decode;
pub mod dyadic;
pub mod error;
pub mod field;
pub mod goppa;
pub mod params;
pub mod rng;
pub mod scheme;
pub mod security;

pub use error::{Error, Result};
