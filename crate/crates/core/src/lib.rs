pub mod cli;
pub mod corrterm;
pub mod discform;
pub mod enumerate;
pub mod error;
pub mod exactmat;
pub mod lattice;
pub mod oracle;
pub mod overlattice;
pub mod rational;
pub mod topo;

pub use error::{Error, Result};
