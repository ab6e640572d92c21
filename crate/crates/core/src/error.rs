//! Crate-wide error with stable, module-qualified codes.

use thiserror::Error;

use crate::constructions::ConstructionError;
use crate::cospectral::CospectralError;
use crate::graph::GraphError;
use crate::integer_revival::IntegerRevivalError;
use crate::partition::PartitionError;
use crate::spectral::SpectralError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Cospectral(#[from] CospectralError),
    #[error(transparent)]
    IntegerRevival(#[from] IntegerRevivalError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error("invalid request: {0}")]
    Request(String),
}

/// Leading identifier of a `Debug` rendering, i.e. the variant name.
fn variant<T: std::fmt::Debug>(e: &T) -> String {
    format!("{e:?}").chars().take_while(|c| c.is_ascii_alphanumeric() || *c == '_').collect()
}

impl Error {
    /// `module::Variant`, e.g. `graph::AsymmetricBeyondTolerance`.
    pub fn code(&self) -> String {
        match self {
            Error::Graph(e) => format!("graph::{}", variant(e)),
            Error::Spectral(e) => format!("spectral::{}", variant(e)),
            Error::Partition(e) => format!("partition::{}", variant(e)),
            Error::Cospectral(e) => format!("cospectral::{}", variant(e)),
            Error::IntegerRevival(e) => format!("integer_revival::{}", variant(e)),
            Error::Construction(ConstructionError::Graph(e)) => Error::Graph(e.clone()).code(),
            Error::Construction(ConstructionError::Spectral(e)) => Error::Spectral(e.clone()).code(),
            Error::Construction(e) => format!("constructions::{}", variant(e)),
            Error::Request(_) => "request::Invalid".to_string(),
        }
    }
}
