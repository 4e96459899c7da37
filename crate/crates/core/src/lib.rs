pub mod braid;
pub mod crystal;
pub mod dualbasis;
pub mod minors;
pub mod rootdata;
pub mod scalars;
pub mod wordalg;
