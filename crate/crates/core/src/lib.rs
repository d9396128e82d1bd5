pub mod embeddings;
pub mod error;
pub mod export;
pub mod linalg;
pub mod normal_form;
pub mod pipeline;
pub mod symbolic;

pub use error::KernelError;
