pub mod battery;
pub mod run;
pub mod scenario;
