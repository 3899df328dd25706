pub mod domain;
pub mod poly;
