// mdbook cannot run snippets that depend on a crate, so every chapter is
// pulled in here as the docs of an empty module and `cargo test --doc`
// checks them. One module per chapter keeps failures traceable to a file.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/predimension.md")]
pub mod predimension {}
#[doc = include_str!("../../../book/src/closures.md")]
pub mod closures {}
#[doc = include_str!("../../../book/src/classes.md")]
pub mod classes {}
#[doc = include_str!("../../../book/src/gadgets.md")]
pub mod gadgets {}
#[doc = include_str!("../../../book/src/amalgams.md")]
pub mod amalgams {}
#[doc = include_str!("../../../book/src/builder.md")]
pub mod builder {}
#[doc = include_str!("../../../book/src/independence.md")]
pub mod independence {}
#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
#[doc = include_str!("../../../book/src/file-format.md")]
pub mod file_format {}
