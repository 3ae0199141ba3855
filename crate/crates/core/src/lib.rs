pub mod error;
pub mod field;
pub mod groebner;
pub mod poly;
pub mod syzygy;
pub mod ideal;
pub mod factor;
pub mod primes;
pub mod linalg;
pub mod module;
pub mod homology;
pub mod loci;
pub mod cert;
pub mod construct;
pub mod corpus;
pub mod json;
