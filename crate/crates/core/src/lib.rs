pub mod error;
pub mod hp;
pub mod rational;
pub mod expr;
pub mod closed;
pub mod series;
pub mod digamma;
pub mod clausen;
pub mod theorems;
pub mod report;
