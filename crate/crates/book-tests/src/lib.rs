//! Runs the code listings of the guide in `book/src` as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/smooth-functions.md")]
pub mod smooth_functions {}

#[doc = include_str!("../../../book/src/groupoids.md")]
pub mod groupoids {}

#[doc = include_str!("../../../book/src/dirac-sections.md")]
pub mod dirac_sections {}

#[doc = include_str!("../../../book/src/hopf-laws.md")]
pub mod hopf_laws {}

#[doc = include_str!("../../../book/src/approximation.md")]
pub mod approximation {}

#[doc = include_str!("../../../book/src/reconstruction.md")]
pub mod reconstruction {}

#[doc = include_str!("../../../book/src/duality.md")]
pub mod duality {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../README.md")]
pub mod readme {}
