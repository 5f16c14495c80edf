//! Library half of the `epitoy` binary, kept separate so the commands can be
//! driven from tests.

pub mod app;
pub mod state_file;
