//! Exact commutative algebra for seminormality and weak normality questions
//! over finitely presented rings in mixed characteristic.

pub mod bertini;
pub mod coeff;
pub mod error;
pub mod fpring;
pub mod groebner;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod pullback;
pub mod wnlab;

pub use coeff::{Coeff, CoeffKind, CoeffRing};
pub use error::{Error, Result};
pub use fpring::{FPRing, PrimeSpot, RingMap};
pub use groebner::{buchberger, ideal_member, normal_form, GroebnerBasis, Ideal};
pub use monomial::{Monomial, MonomialOrder};
pub use parse::{parse_poly, parse_poly_list};
pub use poly::{Poly, PolyRing};
