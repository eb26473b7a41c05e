//! Spacetime algebra toolkit for the lightlike zitter electron model.
//!
//! * [`sta`]: Clifford algebra of Minkowski space, rotors and spinors.
//! * [`zitter`]: particle state, equations of motion, closed-form solutions.
//! * [`channeling`]: crystal string potential, Floquet analysis, momentum scans.
//! * [`dirac`]: plane-wave checks of the real Dirac equation and its zitter projection.

pub mod channeling;
pub mod dirac;
pub mod par;
pub mod quad;
pub mod sta;
pub mod units;
pub mod zitter;

pub use sta::{Bivec, Multivector, Rotor, Spinor, StaError, Vec4};
