//! Serialization helpers: big integers as decimal strings, small lists as
//! flat strings so reports render identically to JSON and CSV.

use num_bigint::BigInt;
use serde::Serializer;

use crate::lattice::ShellCount;

pub fn decimal<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

pub fn joined<T: std::fmt::Display, S: Serializer>(xs: &[T], s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(&xs.iter().map(ToString::to_string).collect::<Vec<_>>().join("|"))
}

pub fn shells<S: Serializer>(xs: &[ShellCount], s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(&xs.iter().map(|c| format!("{}:{}", c.norm, c.count)).collect::<Vec<_>>().join("|"))
}
