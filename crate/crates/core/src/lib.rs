//! Exact arithmetic for (a,b) balancing and cobalancing numbers, linear
//! recurrence detection, and certified floors of reciprocal sums.

pub mod balancing;
pub mod exactnum;
pub mod gridlab;
pub mod recdetect;
pub mod recipsum;
pub mod sequences;

pub use exactnum::{Int, Rat, RatInterval};

/// Recurrences over exact rationals.
pub type Recurrence = sequences::GenericRecurrence<Rat>;
pub type SequenceWindow = sequences::SequenceWindow<Rat>;
pub type DetectionResult = recdetect::DetectionResult<Rat>;
