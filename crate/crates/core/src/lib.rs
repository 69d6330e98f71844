pub mod asreduce;
pub mod error;
pub mod field;
pub mod genus;
mod ghost;
pub mod literal;
pub mod oracle;
pub mod ramfilt;
pub mod report;
pub mod sample;
pub mod series;
pub mod suite;
pub mod witt;

pub use error::{Error, Result};
pub use field::{Fe, FieldCtx};
pub use series::{LaurentSeries, Precision};
pub use witt::WittVec2;
