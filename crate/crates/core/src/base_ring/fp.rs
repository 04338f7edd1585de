use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::ParseError;
use crate::poly::{factor_finite_field, Factorization, PolyError, UniPoly};
use crate::ring::{ElemCodec, Field, FiniteField, ParseCoeff, Ring};

/// The prime field `F_p` for a word-sized prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fp {
    p: u64,
}

impl Fp {
    /// Panics unless `p` is prime.
    pub fn new(p: u64) -> Self {
        assert!(is_prime(p), "{p} is not prime");
        Fp { p }
    }

    pub fn try_new(p: u64) -> Option<Self> {
        is_prime(p).then_some(Fp { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn from_bigint(&self, n: &BigInt) -> u64 {
        let m = n % BigInt::from(self.p);
        let m = if m < BigInt::from(0) { m + BigInt::from(self.p) } else { m };
        m.to_u64().expect("reduced residue")
    }

    /// Symmetric representative in `(-p/2, p/2]`.
    pub fn signed(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring for Fp {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn from_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}

impl Field for Fp {
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        Some(crate::ring::pow_u128(self, a, self.p as u128 - 2))
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn size(&self) -> Option<u128> {
        Some(self.p as u128)
    }

    fn element_from_index(&self, i: u64) -> u64 {
        i % self.p
    }

    fn factor(&self, f: &UniPoly<u64>) -> Result<Factorization<u64>, PolyError> {
        factor_finite_field(self, f)
    }
}

impl FiniteField for Fp {
    fn prime(&self) -> u64 {
        self.p
    }

    fn order(&self) -> u128 {
        self.p as u128
    }

    fn pth_root(&self, a: &u64) -> u64 {
        *a
    }
}

impl ElemCodec for Fp {
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<u64, ParseError> {
        let n: BigInt = s.trim().parse().map_err(|_| ParseError::new(format!("bad F_{} element '{s}'", self.p)))?;
        Ok(self.from_bigint(&n))
    }
}

impl ParseCoeff for Fp {
    fn from_ratio(&self, n: &BigInt, d: &BigInt) -> Option<u64> {
        let d = self.inv(&self.from_bigint(d))?;
        Some(self.mul(&self.from_bigint(n), &d))
    }
}

crate::field_local_ring!(Fp);
