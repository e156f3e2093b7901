pub mod base;
pub mod certifier;
pub mod cli;
pub mod decomposer;
pub mod hensel;
pub mod pade;
pub mod poly;
pub mod quadring;
pub mod report;
pub mod rigor;
pub mod survey;
pub mod util;
