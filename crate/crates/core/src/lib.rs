//! Exact multisymmetric polynomial algebra, Gröbner bases, and the
//! S3-factor equations of the perfect cuboid system.

pub mod cuboid;
pub mod exactnum;
pub mod groebner;
pub mod linalg;
pub mod multisym;
pub mod poly;
