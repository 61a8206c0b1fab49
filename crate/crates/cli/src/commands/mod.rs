pub mod checks;
pub mod classify;
pub mod scan;
pub mod simulate;
pub mod thresholds;
pub mod verify;
