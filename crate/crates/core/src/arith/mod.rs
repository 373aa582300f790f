pub mod modp;
pub mod qelem;
pub mod zpoly;
