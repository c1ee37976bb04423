//! Enumeration engine: value histograms over residue boxes, exponential
//! sums, subsum decomposition, structural lemma checks and contact counts.

mod contact;
mod expsum;
mod histogram;
mod lemmas;
mod reduce;

pub use contact::{contact_counts, contact_zero_counts, ContactCounts};
pub use expsum::{exp_sum, subsum_decomposition, ExpSumValue, HistogramMeta, SubsumTriple};
pub use histogram::{build_histogram, build_histogram_with, ValueHistogram};
pub use lemmas::{lemma31_check, orbit_constancy_check, Lemma31Report, OrbitReport};

/// Cap on enumerated points per call. The default is 10^8.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u128);

impl Default for Budget {
    fn default() -> Self {
        Budget(100_000_000)
    }
}

/// How data-parallel folds execute. Either mode produces bit-identical
/// results; `Parallel` needs the `parallel` feature (on by default).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

// Not derivable across both feature configurations.
#[allow(clippy::derivable_impls)]
impl Default for ExecMode {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        {
            ExecMode::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            ExecMode::Sequential
        }
    }
}
