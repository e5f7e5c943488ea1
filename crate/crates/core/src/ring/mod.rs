//! Exact scalar arithmetic: ℤ[δ], ℚ(δ), ℤ[δ]_𝔪, 𝕜 = 𝔽_p[δ]/(m̄_δ), and the finite
//! quotients ℤ/p^i[δ]/(m_δ^j).

mod coeff;
mod field;
mod mixed;
pub mod modpoly;
mod modrings;
mod poly;
mod ratfunc;
mod solve;
mod zint;

pub use coeff::{CoeffRing, IntPolyRing, PolyQuotRing, RatField};
pub use field::{FieldElem, Fq, ResidueField, FQ_MAX};
pub use mixed::{prime_power, specialize, xi, xi_poly, LocalFrac, LocalRing, MixedChar};
pub use modrings::{prime_one_mod, root_of_unity, FpPoint, ModPolyRing, ResidueSeries, SeriesRing};
pub use poly::IntPoly;
pub use ratfunc::RatFunc;
pub use solve::{quotient_ring_solve, r_span, ChainSpan, QElem, QuotientRing};
pub use zint::Zint;
