//! Stringy E-polynomials of parabolic SL_n character varieties in exact
//! arithmetic, together with the finite-group machinery used to check every
//! closed formula against brute-force counts.

pub mod arith;
pub mod combinat;
pub mod epoly;
pub mod exactalg;
pub mod grouporacle;
