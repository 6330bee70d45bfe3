//! Explicit strict Lyapunov functions for time-varying hybrid systems with
//! persistently exciting data, and numerical certification of their decay.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod funcspace;
pub mod matrosov;
pub mod pe;
pub mod quad;
pub mod strictify;
pub mod systems;
