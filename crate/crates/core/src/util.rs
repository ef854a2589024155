use std::fmt::Display;

use serde::Serializer;

/// Serializes a value through its `Display` impl (used for big integers in
/// JSON reports).
pub fn ser_display<T: Display, S: Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}
