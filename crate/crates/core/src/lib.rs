pub mod classify;
pub mod curve;
pub mod field;
pub mod fixtures;
pub mod forms;
pub mod graded;
pub mod linalg;
pub mod oracle;
pub mod packed;
pub mod search;
