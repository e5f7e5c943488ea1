//! Benchmark fixtures shared by the criterion targets.

use tlmix_core::MixedChar;

pub fn mixed(ell: u64, p: u64) -> MixedChar {
    MixedChar::new(ell, p).expect("valid characteristic")
}
