//! Hermite-basis collocation of tabulated time series, τ-covariance
//! similarity between coefficient vectors, Pearson correlation, and
//! comparison reports against published reference tables.
//!
//! Modules, bottom-up:
//!
//! - [`basis`]: Hermite/monomial evaluation, change of basis, Gram matrices
//! - [`fit`]: domain mapping and collocation solves
//! - [`similarity`]: τ-covariance, Pearson, pairwise matrices
//! - [`dataio`]: wide CSV parsing/writing and bundled tables
//! - [`report`]: comparison reports and output rendering

// Dense matrix kernels read best with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod basis;
pub mod dataio;
pub mod dd;
pub mod error;
pub mod fit;
pub mod linalg;
pub mod par;
pub mod quadrature;
pub mod report;
pub mod similarity;

pub use basis::{BasisSpec, CoefficientVector, Family};
pub use dataio::{ReferenceMatrix, TimeSeries};
pub use error::{Error, Result};
pub use fit::{DomainMap, FitResult};
pub use par::Execution;
pub use similarity::{Method, SimilarityMatrix};
