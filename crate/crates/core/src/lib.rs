pub mod aisets;
pub mod ccomplex;
pub mod cli;
pub mod dot;
pub mod error;
pub mod group;
pub mod instance;
pub mod record;
pub mod regnbhd;
pub mod stallings;
pub mod subgroup;
pub mod unionfind;
pub mod verdict;

pub use error::{Error, Result};
pub use verdict::Tri;
