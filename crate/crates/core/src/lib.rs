pub mod bilinears;
pub mod clifford;
pub mod conventions;
pub mod error;
pub mod exact;
pub mod form;
pub mod gstructure;
pub mod kse;
pub mod numgeom;
pub mod report;
pub mod solutions;
pub mod scalar;
pub mod spinor_text;
pub mod stabilizer;

pub use error::{Error, Result};

#[cfg(test)]
extern crate self as hetspin;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/spinors.md")]
    mod spinors {}
    #[doc = include_str!("../../../book/src/stabilizers.md")]
    mod stabilizers {}
    #[doc = include_str!("../../../book/src/bilinears.md")]
    mod bilinears {}
    #[doc = include_str!("../../../book/src/kse.md")]
    mod kse {}
    #[doc = include_str!("../../../book/src/numgeom.md")]
    mod numgeom {}
    #[doc = include_str!("../../../book/src/gstructures.md")]
    mod gstructures {}
    #[doc = include_str!("../../../book/src/solutions.md")]
    mod solutions {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
