use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Fp, Frac, GlobalBase};
use crate::error::ParseError;
use crate::poly::{factor_rational, Factorization, PolyError, UniPoly};
use crate::ring::{ElemCodec, ParseCoeff, Pid, Ring};

/// The integers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }

    fn one(&self) -> BigInt {
        BigInt::one()
    }

    fn from_int(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }

    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }

    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }

    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
}

impl Pid for Integers {
    fn xgcd(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
        let e = a.extended_gcd(b);
        (e.gcd, e.x, e.y)
    }

    fn div_exact(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        if b.is_zero() {
            return a.is_zero().then(BigInt::zero);
        }
        let (q, r) = a.div_rem(b);
        r.is_zero().then_some(q)
    }

    fn is_unit(&self, a: &BigInt) -> bool {
        a.abs().is_one()
    }
}

impl ElemCodec for Integers {
    fn format(&self, a: &BigInt) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<BigInt, ParseError> {
        s.trim().parse().map_err(|_| ParseError::new(format!("bad integer '{s}'")))
    }
}

impl ParseCoeff for Integers {
    fn from_ratio(&self, n: &BigInt, d: &BigInt) -> Option<BigInt> {
        self.div_exact(n, d)
    }
}

impl GlobalBase for Integers {
    type ResidueField = Fp;

    fn normal(&self, a: &BigInt) -> BigInt {
        a.abs()
    }

    fn prime_factors(&self, a: &BigInt) -> Vec<BigInt> {
        let mut n = a.abs();
        let mut out = Vec::new();
        let mut d = BigInt::from(2);
        while &d * &d <= n {
            if (&n % &d).is_zero() {
                out.push(d.clone());
                while (&n % &d).is_zero() {
                    n /= &d;
                }
            }
            d += 1;
        }
        if n > BigInt::one() {
            out.push(n);
        }
        out
    }

    fn residue_field_at(&self, prime: &BigInt) -> Fp {
        Fp::new(prime.to_u64().expect("residue characteristic must fit in a machine word"))
    }

    fn reduce_at(&self, field: &Fp, a: &BigInt) -> u64 {
        field.from_bigint(a)
    }

    fn lift_from(&self, _field: &Fp, a: &u64) -> BigInt {
        BigInt::from(*a)
    }

    fn from_bigint(&self, n: &BigInt) -> BigInt {
        n.clone()
    }

    fn small_element(&self, i: u64) -> BigInt {
        // 0, 1, -1, 2, -2, ...
        let k = BigInt::from(i.div_ceil(2));
        if i % 2 == 1 {
            k
        } else {
            -k
        }
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn format_frac(&self, num: &BigInt, den: &BigInt) -> String {
        format!("{num}/{den}")
    }

    fn frac_factor(&self, f: &UniPoly<Frac<BigInt>>) -> Result<Factorization<Frac<BigInt>>, PolyError> {
        let q: Vec<BigRational> = f.coeffs.iter().map(|c| BigRational::new(c.num.clone(), c.den.clone())).collect();
        let (unit, factors) = factor_rational(&q)?;
        let to_frac = |r: &BigRational| Frac { num: r.numer().clone(), den: r.denom().clone() };
        Ok(Factorization {
            unit: to_frac(&unit),
            factors: factors
                .into_iter()
                .map(|(g, m)| (UniPoly { coeffs: g.iter().map(to_frac).collect() }, m))
                .collect(),
        })
    }
}
