//! Two-sided Anick resolutions of finitely presented augmented algebras,
//! built by algebraic discrete Morse theory on the bar resolution, together
//! with the Hochschild cohomology machinery that consumes them.
//!
//! All algebra is generic over an exact coefficient field `S: Scalar`. The
//! default everywhere is [`Rational`] (arbitrary precision); [`Rational64`]
//! works for small computations. Floating point types satisfy the trait
//! bounds but are not exact, so ranks and zero tests become meaningless.
//!
//! Module map:
//! - [`freealg`]: words, polynomials, rewriting, Gröbner–Shirshov checks.
//! - [`chains`]: Anick chains.
//! - [`morse`]: bar differential, Morse matching, path tracking.
//! - [`resolution`]: assembled resolutions, `δδ = 0` checks, JSON export.
//! - [`hochschild`]: finite bimodules and cohomology of the Anick complex.
//! - [`bar_oracle`]: brute-force normalized bar complex cohomology.
//! - [`weyl`]: the first Weyl algebra and Heisenberg showcases.
//! - [`conformal`]: `Cend_k` and its positive coefficient algebra.

pub mod bar_oracle;
pub mod bimodule;
pub mod chains;
pub mod conformal;
pub mod freealg;
pub mod hochschild;
pub mod linalg;
pub mod morse;
pub mod resolution;
pub mod weyl;

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_traits::{FromPrimitive, Num};

/// Coefficient field of every algebraic object in the crate.
pub trait Scalar:
    Num + Neg<Output = Self> + Clone + FromPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Parse a decimal rational such as `"-3/2"` or `"7"`.
    fn parse_decimal(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Ok(v) = Self::from_str_radix(s, 10) {
            return Some(v);
        }
        match s.split_once('/') {
            Some((n, d)) => {
                let d = Self::from_str_radix(d.trim(), 10).ok().filter(|d| !d.is_zero())?;
                Some(Self::from_str_radix(n.trim(), 10).ok()? / d)
            }
            // ratio types insist on an explicit denominator
            None => Self::from_str_radix(&format!("{s}/1"), 10).ok(),
        }
    }

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer fits the scalar type")
    }
}

impl<T> Scalar for T where
    T: Num + Neg<Output = T> + Clone + FromPrimitive + Debug + Display + Send + Sync + 'static
{
}

/// Arbitrary precision rationals; the default scalar.
pub type Rational = num_rational::BigRational;
/// Machine-word rationals. Overflow panics, so keep computations small.
pub type Rational64 = num_rational::Rational64;

pub use bimodule::BimoduleElement;
pub use chains::AnickChain;
pub use freealg::{FreePoly, Letter, Presentation, RewriteRule, RewriteSystem, Word};
pub use hochschild::FiniteBimodule;
pub use morse::{BarVertex, MatchStatus, MorseEngine};
pub use resolution::{Resolution, ResolutionSlice};

/// Presentation over the default rationals.
pub type QPresentation = Presentation<Rational>;
/// Free-algebra polynomial over the default rationals.
pub type QPoly = FreePoly<Rational>;
/// Anick-complex element over the default rationals.
pub type QChainElement = BimoduleElement<AnickChain, Rational>;
/// Finite bimodule over the default rationals.
pub type QBimodule = FiniteBimodule<Rational>;
