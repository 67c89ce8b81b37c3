pub mod error;
pub mod estimate;
pub mod linalg;
pub mod model;
pub mod montecarlo;
pub mod polymat;
pub mod serde_mat;
pub mod simulate;
pub mod verify;

pub use error::{Error, Result};
