//! Exact coefficient rings: prime fields, finite fields, Z and F_p[t],
//! their fraction fields, localizations at primes and at single elements,
//! plus the linear algebra every later module relies on.

pub(crate) mod frac;
mod fp;
mod gf;
mod global;
mod integers;
mod kt;
pub mod linalg;
mod local;

pub use fp::{is_prime, Fp};
pub use frac::{Frac, GenericPoint};
pub use gf::Gf;
pub use global::GlobalBase;
pub use integers::Integers;
pub use kt::Kt;
pub use linalg::{det, adjugate, solve_and_syzygies, Matrix, Solution};
pub use local::{Localized, PrimePoint};

/// Shared log of elements inverted during a computation.
pub type InversionLog<E> = std::sync::Arc<std::sync::Mutex<Vec<E>>>;

/// `Z` localized at `p`.
pub type Zloc = PrimePoint<Integers>;
/// `Q`.
pub type Rationals = GenericPoint<Integers>;
/// `F_p(t)`.
pub type RatFunc = GenericPoint<Kt>;

/// Implements [`Pid`](crate::ring::Pid) and [`LocalRing`](crate::ring::LocalRing)
/// for a field, whose maximal ideal is zero.
#[macro_export]
#[doc(hidden)]
macro_rules! field_local_ring {
    ($t:ty $(, $($g:tt)*)?) => {
        impl$(<$($g)*>)? $crate::ring::Pid for $t {
            fn xgcd(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem, Self::Elem) {
                use $crate::ring::Ring;
                if !self.is_zero(a) {
                    (a.clone(), self.one(), self.zero())
                } else if !self.is_zero(b) {
                    (b.clone(), self.zero(), self.one())
                } else {
                    (self.zero(), self.one(), self.zero())
                }
            }

            fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
                use $crate::ring::{Field, Ring};
                if self.is_zero(b) {
                    return self.is_zero(a).then(|| self.zero());
                }
                self.div(a, b)
            }
        }

        impl$(<$($g)*>)? $crate::ring::LocalRing for $t {
            type Residue = Self;

            fn residue_field(&self) -> &Self {
                self
            }

            fn decide_invertible(&self, x: &Self::Elem) -> $crate::ring::Invertibility<Self::Elem> {
                use $crate::ring::Field;
                match self.inv(x) {
                    Some(i) => $crate::ring::Invertibility::Inverse(i),
                    None => $crate::ring::Invertibility::InMaximal,
                }
            }

            fn residue(&self, x: &Self::Elem) -> Self::Elem {
                x.clone()
            }

            fn lift(&self, a: &Self::Elem) -> Self::Elem {
                a.clone()
            }

            fn maximal_generators(&self) -> Vec<Self::Elem> {
                Vec::new()
            }

            fn split_maximal(&self, x: &Self::Elem) -> Option<Vec<Self::Elem>> {
                use $crate::ring::Ring;
                self.is_zero(x).then(Vec::new)
            }
        }
    };
}
