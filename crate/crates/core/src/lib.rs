//! Exact dyadic combinatorics, Thompson's groups, lattice gauge models,
//! states on their crossed products, and heat-kernel product measures.

/// Serialize a type through its `Display` / `FromStr` text form.
macro_rules! text_serde {
    ($($t:ty),*) => {$(
        impl serde::Serialize for $t {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }
        impl<'de> serde::Deserialize<'de> for $t {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = <std::borrow::Cow<'de, str> as serde::Deserialize>::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    )*};
}

pub mod cyclotomic;
pub mod dyadic;
pub mod error;
pub mod forest;
pub mod heatmeasure;
pub mod lattice;
pub mod sample;
pub mod state;
pub mod thompson;

pub use error::{Error, Result};

text_serde!(
    dyadic::Dyadic,
    dyadic::SDPartition,
    dyadic::DyadicArc,
    forest::Tree,
    forest::Forest,
    forest::Permutation,
    thompson::VElement,
    lattice::GroupSpec
);
