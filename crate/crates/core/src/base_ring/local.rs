use num_bigint::BigInt;

use super::frac::{frac_add, frac_format, frac_mul, frac_parse, make_frac};
use super::{Frac, GlobalBase, InversionLog};
use crate::error::ParseError;
use crate::ring::{ElemCodec, Field, Invertibility, LocalRing, ParseCoeff, Pid, Ring};

/// A global base localized at a prime: fractions whose denominator is not
/// divisible by the prime. A discrete valuation ring with finite residue field.
#[derive(Clone, Debug)]
pub struct PrimePoint<B: GlobalBase> {
    base: B,
    prime: B::Elem,
    field: B::ResidueField,
    log: Option<InversionLog<B::Elem>>,
}

impl<B: GlobalBase> PrimePoint<B> {
    /// `prime` must be a prime element of the base.
    pub fn new(base: B, prime: B::Elem) -> Self {
        let prime = base.normal(&prime);
        let field = base.residue_field_at(&prime);
        PrimePoint { base, prime, field, log: None }
    }

    pub fn with_log(base: B, prime: B::Elem, log: InversionLog<B::Elem>) -> Self {
        let mut r = Self::new(base, prime);
        r.log = Some(log);
        r
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    pub fn prime(&self) -> &B::Elem {
        &self.prime
    }

    pub fn embed(&self, a: &B::Elem) -> Frac<B::Elem> {
        Frac { num: a.clone(), den: self.base.one() }
    }

    /// `num/den`, or `None` when the prime divides the reduced denominator.
    pub fn frac(&self, num: B::Elem, den: B::Elem) -> Option<Frac<B::Elem>> {
        if self.base.is_zero(&den) {
            return None;
        }
        let f = make_frac(&self.base, num, den);
        self.base.div_exact(&f.den, &self.prime).is_none().then_some(f)
    }

    pub fn valuation(&self, a: &Frac<B::Elem>) -> u32 {
        self.base.valuation(&a.num, &self.prime)
    }

    fn record(&self, a: &B::Elem) {
        if let Some(log) = &self.log {
            if !self.base.is_unit(a) {
                log.lock().expect("log lock").push(self.base.normal(a));
            }
        }
    }

    fn strip_prime(&self, a: &B::Elem) -> B::Elem {
        let mut a = a.clone();
        while let Some(q) = self.base.div_exact(&a, &self.prime) {
            a = q;
        }
        a
    }
}

impl<B: GlobalBase> Ring for PrimePoint<B> {
    type Elem = Frac<B::Elem>;

    fn zero(&self) -> Self::Elem {
        self.embed(&self.base.zero())
    }

    fn one(&self) -> Self::Elem {
        self.embed(&self.base.one())
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.embed(&self.base.from_int(n))
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        frac_add(&self.base, a, b)
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Frac { num: self.base.neg(&a.num), den: a.den.clone() }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        frac_mul(&self.base, a, b)
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.base.is_zero(&a.num)
    }
}

impl<B: GlobalBase> Pid for PrimePoint<B> {
    fn xgcd(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem, Self::Elem) {
        if self.is_zero(a) && self.is_zero(b) {
            return (self.zero(), self.one(), self.zero());
        }
        if self.valuation(a) <= self.valuation(b) {
            (a.clone(), self.one(), self.zero())
        } else {
            (b.clone(), self.zero(), self.one())
        }
    }

    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(b) {
            return self.is_zero(a).then(|| self.zero());
        }
        if self.is_zero(a) {
            return Some(self.zero());
        }
        if self.valuation(a) < self.valuation(b) {
            return None;
        }
        self.record(&self.strip_prime(&b.num));
        Some(make_frac(&self.base, self.base.mul(&a.num, &b.den), self.base.mul(&a.den, &b.num)))
    }

    fn is_unit(&self, a: &Self::Elem) -> bool {
        !self.is_zero(a) && self.valuation(a) == 0
    }
}

impl<B: GlobalBase> LocalRing for PrimePoint<B> {
    type Residue = B::ResidueField;

    fn residue_field(&self) -> &Self::Residue {
        &self.field
    }

    fn decide_invertible(&self, x: &Self::Elem) -> Invertibility<Self::Elem> {
        if self.is_unit(x) {
            self.record(&x.num);
            Invertibility::Inverse(make_frac(&self.base, x.den.clone(), x.num.clone()))
        } else {
            Invertibility::InMaximal
        }
    }

    fn residue(&self, x: &Self::Elem) -> <Self::Residue as Ring>::Elem {
        let n = self.base.reduce_at(&self.field, &x.num);
        let d = self.base.reduce_at(&self.field, &x.den);
        self.field.mul(&n, &self.field.inv(&d).expect("denominator is a unit"))
    }

    fn lift(&self, a: &<Self::Residue as Ring>::Elem) -> Self::Elem {
        self.embed(&self.base.lift_from(&self.field, a))
    }

    fn maximal_generators(&self) -> Vec<Self::Elem> {
        vec![self.embed(&self.prime)]
    }

    fn split_maximal(&self, x: &Self::Elem) -> Option<Vec<Self::Elem>> {
        if self.is_zero(x) {
            return Some(vec![self.zero()]);
        }
        let q = self.base.div_exact(&x.num, &self.prime)?;
        Some(vec![Frac { num: q, den: x.den.clone() }])
    }

    fn content_normalizer(&self, coeffs: &[Self::Elem]) -> Self::Elem {
        // Skipped under logging: inverting the content would enlarge the
        // recorded denominators of a global run.
        if self.log.is_some() {
            return self.one();
        }
        let b = &self.base;
        let mut den = b.one();
        for c in coeffs {
            let (g, _, _) = b.xgcd(&den, &c.den);
            den = b.div_exact(&b.mul(&den, &c.den), &g).expect("gcd divides");
        }
        let mut content = b.zero();
        for c in coeffs.iter().filter(|c| !b.is_zero(&c.num)) {
            let scaled = b.mul(&c.num, &b.div_exact(&den, &c.den).expect("lcm"));
            content = b.xgcd(&content, &scaled).0;
        }
        if b.is_zero(&content) {
            return self.one();
        }
        make_frac(b, den, self.strip_prime(&content))
    }
}

impl<B: GlobalBase> ElemCodec for PrimePoint<B> {
    fn format(&self, a: &Self::Elem) -> String {
        frac_format(&self.base, a)
    }

    fn parse(&self, s: &str) -> Result<Self::Elem, ParseError> {
        let (n, d) = frac_parse(&self.base, s)?;
        self.frac(n, d).ok_or_else(|| ParseError::new(format!("'{s}' is not in the local ring")))
    }
}

impl<B: GlobalBase> ParseCoeff for PrimePoint<B> {
    fn from_ratio(&self, n: &BigInt, d: &BigInt) -> Option<Self::Elem> {
        let d = self.base.from_bigint(d);
        let out = self.frac(self.base.from_bigint(n), d.clone())?;
        self.record(&d);
        Some(out)
    }

    fn base_variable(&self, name: &str) -> Option<Self::Elem> {
        self.base.base_variable(name).map(|x| self.embed(&x))
    }
}

/// `B[1/f]`: fractions whose denominators involve only the primes of `f`.
#[derive(Clone, Debug)]
pub struct Localized<B: GlobalBase> {
    base: B,
    f: B::Elem,
}

impl<B: GlobalBase> Localized<B> {
    pub fn new(base: B, f: B::Elem) -> Self {
        assert!(!base.is_zero(&f), "cannot invert zero");
        let f = base.normal(&f);
        Localized { base, f }
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    pub fn f(&self) -> &B::Elem {
        &self.f
    }

    pub fn embed(&self, a: &B::Elem) -> Frac<B::Elem> {
        Frac { num: a.clone(), den: self.base.one() }
    }

    /// Removes from `a` every factor it shares with `f`.
    fn strip(&self, a: &B::Elem) -> B::Elem {
        let mut a = a.clone();
        loop {
            let (g, _, _) = self.base.xgcd(&a, &self.f);
            if self.base.is_unit(&g) || self.base.is_zero(&g) {
                return a;
            }
            a = self.base.div_exact(&a, &g).expect("gcd divides");
        }
    }

    fn allowed_den(&self, d: &B::Elem) -> bool {
        self.base.is_unit(&self.strip(d))
    }

    /// `num/den` when the denominator is a unit of `B[1/f]`.
    pub fn frac(&self, num: B::Elem, den: B::Elem) -> Option<Frac<B::Elem>> {
        if self.base.is_zero(&den) {
            return None;
        }
        let fr = make_frac(&self.base, num, den);
        self.allowed_den(&fr.den).then_some(fr)
    }

    /// Accepts an element of the fraction field when it lies in `B[1/f]`.
    pub fn from_frac(&self, a: &Frac<B::Elem>) -> Option<Frac<B::Elem>> {
        self.frac(a.num.clone(), a.den.clone())
    }
}

impl<B: GlobalBase> Ring for Localized<B> {
    type Elem = Frac<B::Elem>;

    fn zero(&self) -> Self::Elem {
        self.embed(&self.base.zero())
    }

    fn one(&self) -> Self::Elem {
        self.embed(&self.base.one())
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.embed(&self.base.from_int(n))
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        frac_add(&self.base, a, b)
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Frac { num: self.base.neg(&a.num), den: a.den.clone() }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        frac_mul(&self.base, a, b)
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.base.is_zero(&a.num)
    }
}

impl<B: GlobalBase> Pid for Localized<B> {
    fn xgcd(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem, Self::Elem) {
        let (g, s, t) = self.base.xgcd(&a.num, &b.num);
        (
            self.embed(&g),
            Frac { num: self.base.mul(&s, &a.den), den: self.base.one() },
            Frac { num: self.base.mul(&t, &b.den), den: self.base.one() },
        )
    }

    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(b) {
            return self.is_zero(a).then(|| self.zero());
        }
        self.frac(self.base.mul(&a.num, &b.den), self.base.mul(&a.den, &b.num))
    }

    fn is_unit(&self, a: &Self::Elem) -> bool {
        !self.is_zero(a) && self.allowed_den(&a.num)
    }
}

impl<B: GlobalBase> ElemCodec for Localized<B> {
    fn format(&self, a: &Self::Elem) -> String {
        frac_format(&self.base, a)
    }

    fn parse(&self, s: &str) -> Result<Self::Elem, ParseError> {
        let (n, d) = frac_parse(&self.base, s)?;
        self.frac(n, d).ok_or_else(|| ParseError::new(format!("'{s}' is not in the localized ring")))
    }
}

impl<B: GlobalBase> ParseCoeff for Localized<B> {
    fn from_ratio(&self, n: &BigInt, d: &BigInt) -> Option<Self::Elem> {
        self.frac(self.base.from_bigint(n), self.base.from_bigint(d))
    }

    fn base_variable(&self, name: &str) -> Option<Self::Elem> {
        self.base.base_variable(name).map(|x| self.embed(&x))
    }
}
