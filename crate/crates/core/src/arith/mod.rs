pub mod fp;
pub mod hnf;
pub mod int;
pub mod matrix;
pub mod poly;
pub mod roots;
