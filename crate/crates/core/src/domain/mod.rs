//! Measured domains: multi-slices with the uniform measure and product
//! spaces with a product measure. Both enumerate their points in
//! lexicographic order, which fixes the coordinates used by every matrix
//! in the crate.

pub mod counting;
pub mod multislice;
pub mod partition;
pub mod product;
pub mod tail;
pub mod word;

pub use multislice::{entropy_distance_bound, slices_with_positive_counts, MultiSlice};
pub use partition::{partitions_of, Partition};
pub use product::ProductSpace;
pub use word::Word;

use crate::error::Error;
use crate::Result;
use serde::{Deserialize, Serialize};

/// A measured domain a [`crate::func::RealFunction`] can live on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Domain {
    #[serde(rename = "multislice")]
    Slice { n: usize, k: Vec<usize> },
    Product { n: usize, nu: Vec<f64> },
}

impl Domain {
    pub fn slice(s: MultiSlice) -> Domain {
        Domain::Slice {
            n: s.n(),
            k: s.counts().to_vec(),
        }
    }

    pub fn product(p: ProductSpace) -> Domain {
        Domain::Product {
            n: p.n(),
            nu: p.weights().to_vec(),
        }
    }

    pub fn as_slice(&self) -> Result<MultiSlice> {
        match self {
            Domain::Slice { k, .. } => MultiSlice::new(k.clone()),
            _ => Err(Error::Precondition("expected a multi-slice domain".into())),
        }
    }

    pub fn as_product(&self) -> Result<ProductSpace> {
        match self {
            Domain::Product { n, nu } => ProductSpace::new(*n, nu.clone()),
            _ => Err(Error::Precondition("expected a product domain".into())),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Domain::Slice { n, .. } | Domain::Product { n, .. } => *n,
        }
    }

    pub fn m(&self) -> usize {
        match self {
            Domain::Slice { k, .. } => k.len(),
            Domain::Product { nu, .. } => nu.len(),
        }
    }

    pub fn size(&self) -> Result<usize> {
        match self {
            Domain::Slice { k, .. } => MultiSlice::new(k.clone())?.size_usize(),
            Domain::Product { n, nu } => {
                ProductSpace::new(*n, nu.clone())?.size_usize()
            }
        }
    }

    /// All point probabilities in canonical order.
    pub fn measure_vec(&self) -> Result<Vec<f64>> {
        match self {
            Domain::Slice { k, .. } => {
                let s = MultiSlice::new(k.clone())?;
                let size = s.size_usize()?;
                Ok(vec![1.0 / size as f64; size])
            }
            Domain::Product { n, nu } => {
                let p = ProductSpace::new(*n, nu.clone())?;
                let size = p.size_usize()?;
                let mut out = Vec::with_capacity(size);
                for i in 0..size {
                    out.push(p.point_measure(&p.word_at(i)?));
                }
                Ok(out)
            }
        }
    }

    pub fn word_at(&self, index: usize) -> Result<Word> {
        match self {
            Domain::Slice { k, .. } => MultiSlice::new(k.clone())?.word_at(index),
            Domain::Product { n, nu } => ProductSpace::new(*n, nu.clone())?.word_at(index),
        }
    }

    pub fn index_of(&self, w: &Word) -> Result<usize> {
        match self {
            Domain::Slice { k, .. } => MultiSlice::new(k.clone())?.index_of(w),
            Domain::Product { n, nu } => ProductSpace::new(*n, nu.clone())?.index_of(w),
        }
    }

    /// All words in canonical order.
    pub fn words(&self) -> Result<Vec<Word>> {
        match self {
            Domain::Slice { k, .. } => MultiSlice::new(k.clone())?.words(),
            Domain::Product { n, nu } => {
                let p = ProductSpace::new(*n, nu.clone())?;
                let size = p.size_usize()?;
                (0..size).map(|i| p.word_at(i)).collect()
            }
        }
    }
}
