//! Ring abstractions shared by every module.
//!
//! Ring instances carry their parameters (a prime, a modulus, a bookkeeping
//! log), so arithmetic goes through `&self` and elements are plain data.

use std::fmt;

use crate::error::ParseError;
use crate::poly::{Factorization, PolyError, UniPoly};

/// A commutative ring with exact arithmetic and decidable zero test.
pub trait Ring: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.is_zero(&self.sub(a, b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        self.equal(a, &self.one())
    }

    fn pow(&self, a: &Self::Elem, mut n: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    fn scale_int(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        self.mul(&self.from_int(n), a)
    }
}

/// A field: every nonzero element has an inverse.
pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;

    /// Field size when finite.
    fn size(&self) -> Option<u128> {
        None
    }

    /// Deterministic enumeration of "small" elements; the first `size()`
    /// indices enumerate a finite field completely.
    fn element_from_index(&self, i: u64) -> Self::Elem;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// Factorization into monic irreducibles. Fields without a backend
    /// report `PolyError::Unsupported`.
    fn factor(&self, _f: &UniPoly<Self::Elem>) -> Result<Factorization<Self::Elem>, PolyError> {
        Err(PolyError::Unsupported("no factorization backend for this field".into()))
    }
}

/// Rings with a gcd-style elimination step. Every ring used for linear
/// algebra (fields, discrete valuation rings, Z, k[t]) implements this.
pub trait Pid: Ring {
    /// `(g, s, t)` with `g = s*a + t*b` and `(g) = (a, b)`.
    fn xgcd(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem, Self::Elem);

    /// `a / b` when `b` divides `a`.
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;

    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.div_exact(&self.one(), a).is_some()
    }
}

/// Outcome of the invertibility decision in a residually discrete local ring.
#[derive(Clone, Debug)]
pub enum Invertibility<E> {
    Inverse(E),
    InMaximal,
}

impl<E> Invertibility<E> {
    pub fn is_inverse(&self) -> bool {
        matches!(self, Invertibility::Inverse(_))
    }
}

/// A residually discrete local ring `R` with residue field `k = R/m`.
pub trait LocalRing: Pid {
    type Residue: Field;

    fn residue_field(&self) -> &Self::Residue;

    /// Total: either an inverse, or membership in the maximal ideal.
    fn decide_invertible(&self, x: &Self::Elem) -> Invertibility<Self::Elem>;

    fn residue(&self, x: &Self::Elem) -> <Self::Residue as Ring>::Elem;

    /// A set-theoretic section of `residue`.
    fn lift(&self, a: &<Self::Residue as Ring>::Elem) -> Self::Elem;

    /// Generators of the maximal ideal (empty for fields).
    fn maximal_generators(&self) -> Vec<Self::Elem>;

    /// Coefficients `c` with `x = sum c_i g_i` for `x` in the maximal ideal.
    fn split_maximal(&self, x: &Self::Elem) -> Option<Vec<Self::Elem>>;

    fn in_maximal(&self, x: &Self::Elem) -> bool {
        self.residue_field().is_zero(&self.residue(x))
    }

    /// A unit `u` such that `u * c_i` have smaller representatives. Used only
    /// to keep presentations small; `one` is always a valid answer.
    fn content_normalizer(&self, _coeffs: &[Self::Elem]) -> Self::Elem {
        self.one()
    }
}

/// Text encoding for certificate files.
pub trait ElemCodec: Ring {
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem, ParseError>;
}

/// Coefficient construction used by the polynomial parser.
pub trait ParseCoeff: Ring {
    /// The rational number `n/d`, when it belongs to the ring.
    fn from_ratio(&self, n: &num_bigint::BigInt, d: &num_bigint::BigInt) -> Option<Self::Elem>;

    /// Named elements of the coefficient ring itself (the `t` of `k[t]`).
    fn base_variable(&self, _name: &str) -> Option<Self::Elem> {
        None
    }
}

/// Finite fields, for the factorization backend.
pub trait FiniteField: Field {
    fn prime(&self) -> u64;
    fn order(&self) -> u128;

    /// Inverse Frobenius, `a^(q/p)`.
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem {
        let q = self.order();
        let p = self.prime() as u128;
        pow_u128(self, a, q / p)
    }
}

pub(crate) fn pow_u128<R: Ring>(r: &R, a: &R::Elem, mut n: u128) -> R::Elem {
    let mut base = a.clone();
    let mut acc = r.one();
    while n > 0 {
        if n & 1 == 1 {
            acc = r.mul(&acc, &base);
        }
        n >>= 1;
        if n > 0 {
            base = r.mul(&base, &base);
        }
    }
    acc
}
