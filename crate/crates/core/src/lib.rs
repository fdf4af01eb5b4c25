//! Classical-ML workbench for the Auto MPG data: ingestion, preprocessing,
//! linear/kernel/tree models, metrics, and the experiment harness.

pub mod error;
pub mod eval;
pub mod ingest;
pub mod linalg;
pub mod linear;
pub mod metrics;
pub mod preprocess;
pub mod rng;
pub mod svm;
pub mod tree;

pub use error::{Error, Result};
pub use ingest::{build_dataset, parse_auto_mpg, read_auto_mpg, Dataset, RawRecord, RawTable};
pub use linalg::Matrix;
pub use preprocess::{kfold, train_test_split, Standardizer};
pub use rng::SeededRng;
