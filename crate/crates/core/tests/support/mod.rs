#![allow(dead_code)]

pub mod certificate;
pub mod lp_checks;
pub mod naive_lp;
