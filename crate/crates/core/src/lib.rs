pub mod cases;
pub mod config;
pub mod dg;
pub mod diagnostics;
pub mod driver;
pub mod error;
pub mod filter;
pub mod kernel;
pub mod output;
pub mod physics;
pub mod reference;
pub mod tables;

pub use error::{Error, Result};
pub use kernel::{support_width, DeltaKernel};
pub use reference::ReferenceElement;
