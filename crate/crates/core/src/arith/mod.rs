//! Exact integer arithmetic: sparse polynomials, p-adic levels, valuations
//! and the polynomial text parser.

mod padic;
mod parse;
mod poly;

pub use padic::{
    checked_pow_u128, is_prime_u64, mod_pow_u64, mul_mod_u64, ord_and_ac, ord_and_ac_u128,
    PadicLevel,
};
pub use parse::parse_polynomial;
pub use poly::Polynomial;

use num_bigint::BigInt;

/// The residue box a sum ranges over.
///
/// `Full` is `(Z/p^m Z)^n`; `Shifted { y }` is the multiball
/// `y + (pZ/p^m Z)^n` with exactly `p^((m-1)n)` elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResidueBox {
    Full,
    Shifted { y: Vec<BigInt> },
}

impl ResidueBox {
    /// The origin box `(pZ/p^m Z)^n`.
    pub fn origin(nvars: usize) -> Self {
        ResidueBox::Shifted {
            y: vec![BigInt::from(0); nvars],
        }
    }

    pub fn is_full(&self) -> bool {
        matches!(self, ResidueBox::Full)
    }

    /// Number of points in the box mod `p^m`, if it fits in u128.
    pub fn points(&self, nvars: usize, level: &PadicLevel) -> Option<u128> {
        let exp = match self {
            ResidueBox::Full => level.m(),
            ResidueBox::Shifted { .. } => level.m() - 1,
        };
        checked_pow_u128(level.p() as u128, exp * nvars as u32)
    }

    pub fn label(&self) -> String {
        match self {
            ResidueBox::Full => "full".into(),
            ResidueBox::Shifted { y } => {
                if y.iter().all(|c| c == &BigInt::from(0)) {
                    "origin".into()
                } else {
                    let coords: Vec<String> = y.iter().map(|c| c.to_string()).collect();
                    format!("shifted[{}]", coords.join(","))
                }
            }
        }
    }
}
