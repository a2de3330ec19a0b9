pub mod analysis;
pub mod cli;
pub mod cyclo;
pub mod decompose;
pub mod error;
pub mod modgroup;
pub mod rational;
pub mod ringmat;
pub mod weilrep;

pub use error::{Error, Result};
