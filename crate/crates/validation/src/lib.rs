//! Independent checks for the einz engine: the published reference values
//! it is measured against, and brute-force oracles that enumerate deals
//! card by card.

pub mod oracle;
pub mod reference;
