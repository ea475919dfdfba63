//! Solver library and Monte Carlo harness for joint jammer mitigation and
//! data detection (JMD) in the multi-user MIMO uplink.

pub mod airframe;
pub mod error;
pub mod numerics;

pub use error::{Error, Result};
