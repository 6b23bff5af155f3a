pub mod chevalley;
pub mod error;
pub mod euler;
pub mod exact;
pub mod lefschetz;
pub mod nilcohomology;
pub mod rootsys;
pub mod spinor;
pub mod verify;

pub use error::{LefError, Result};
