pub mod baseline;
pub mod corefdoc;
pub mod error;
pub mod goldkg;
pub mod kgpop;
pub mod metrics;
pub mod normalize;
pub mod standoff_io;
pub mod synth;
