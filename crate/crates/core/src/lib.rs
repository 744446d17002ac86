pub mod cli;
pub mod dieudonne;
pub mod eoclass;
pub mod gf;
pub mod hwtriple;
pub mod par;
pub mod poly;
pub mod semilinear;
