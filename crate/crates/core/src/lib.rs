pub mod band;
pub mod basis;
pub mod error;
pub mod halfint;
pub mod rep;
pub mod triple;
pub mod pairing;
pub mod report;
pub mod cli;
