pub use jmd_core;
