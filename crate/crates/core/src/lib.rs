pub mod bits;
pub mod cli;
pub mod group;
pub mod lattice;
pub mod oracle;
pub mod product;
pub mod filters;
pub mod suite;
pub mod toposys;
