//! Compiles and runs every Rust snippet in `book/src` as a doc-test.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}

#[doc = include_str!("../../../book/src/measures.md")]
pub mod measures {}

#[doc = include_str!("../../../book/src/jcm.md")]
pub mod jcm {}

#[doc = include_str!("../../../book/src/multimode.md")]
pub mod multimode {}

#[doc = include_str!("../../../book/src/cavity.md")]
pub mod cavity {}

#[doc = include_str!("../../../book/src/oracle.md")]
pub mod oracle {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
