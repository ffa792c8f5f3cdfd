pub mod confocal;
pub mod error;
pub mod harness;
pub mod hyperbolic;
pub mod input;
pub mod linalg;
pub mod metric;
pub mod pencil;
pub mod poly;
pub mod projective;
pub mod render;
pub mod sample;
pub mod spherical;
pub mod tol;

pub use error::{Error, Result};
pub use projective::*;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/projective.md")]
    pub mod projective {}
    #[doc = include_str!("../../../book/src/pencils.md")]
    pub mod pencils {}
    #[doc = include_str!("../../../book/src/spherical.md")]
    pub mod spherical {}
    #[doc = include_str!("../../../book/src/hyperbolic.md")]
    pub mod hyperbolic {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    pub mod metrics {}
    #[doc = include_str!("../../../book/src/confocal.md")]
    pub mod confocal {}
    #[doc = include_str!("../../../book/src/harness.md")]
    pub mod harness {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
