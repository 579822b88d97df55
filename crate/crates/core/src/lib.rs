pub mod error;
pub mod groups;
pub mod chctx;
pub mod linalg;
pub mod modctx;
pub mod stable;
pub mod precover;
pub mod localize;
pub mod oracle;

pub use error::{Error, Result};
