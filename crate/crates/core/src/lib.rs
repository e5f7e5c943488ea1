//! Temperley–Lieb algebras in mixed characteristic: exact scalars, diagram calculus,
//! Jones–Wenzl idempotents, cell modules, submodule lattices and Jantzen data.

pub mod cellmod;
pub mod diagram;
pub mod digits;
pub mod error;
pub mod jantzen;
pub mod jw;
pub mod linalg;
pub mod oracle;
pub mod qnum;
pub mod ring;
pub mod structure;

pub use error::{Error, Result};
pub use ring::{CoeffRing, FieldElem, IntPoly, LocalFrac, MixedChar, RatFunc};
