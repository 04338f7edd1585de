use num_bigint::BigInt;

use super::{GlobalBase, InversionLog};
use crate::error::ParseError;
use crate::poly::{Factorization, PolyError, UniPoly};
use crate::ring::{ElemCodec, Field, ParseCoeff, Ring};

/// A reduced fraction with normalized denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frac<E> {
    pub num: E,
    pub den: E,
}

/// Reduces `num/den` (den nonzero) to lowest terms with a normalized denominator.
pub(crate) fn make_frac<B: GlobalBase>(base: &B, num: B::Elem, den: B::Elem) -> Frac<B::Elem> {
    debug_assert!(!base.is_zero(&den));
    if base.is_zero(&num) {
        return Frac { num, den: base.one() };
    }
    let (g, _, _) = base.xgcd(&num, &den);
    let num = base.div_exact(&num, &g).expect("gcd divides");
    let den = base.div_exact(&den, &g).expect("gcd divides");
    let nd = base.normal(&den);
    let unit = base.div_exact(&den, &nd).expect("associate");
    let num = base.div_exact(&num, &unit).expect("unit divides");
    Frac { num, den: nd }
}

pub(crate) fn frac_add<B: GlobalBase>(base: &B, a: &Frac<B::Elem>, b: &Frac<B::Elem>) -> Frac<B::Elem> {
    if base.equal(&a.den, &b.den) {
        return make_frac(base, base.add(&a.num, &b.num), a.den.clone());
    }
    let num = base.add(&base.mul(&a.num, &b.den), &base.mul(&b.num, &a.den));
    make_frac(base, num, base.mul(&a.den, &b.den))
}

pub(crate) fn frac_mul<B: GlobalBase>(base: &B, a: &Frac<B::Elem>, b: &Frac<B::Elem>) -> Frac<B::Elem> {
    make_frac(base, base.mul(&a.num, &b.num), base.mul(&a.den, &b.den))
}

pub(crate) fn frac_format<B: GlobalBase>(base: &B, a: &Frac<B::Elem>) -> String {
    if base.is_one(&a.den) {
        base.format(&a.num)
    } else {
        base.format_frac(&a.num, &a.den)
    }
}

/// Splits `n/d` or `(n)/(d)` at the top-level slash.
pub(crate) fn frac_parse<B: GlobalBase>(base: &B, s: &str) -> Result<(B::Elem, B::Elem), ParseError> {
    let s = s.trim();
    let mut depth = 0i32;
    let mut split = None;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => split = Some(i),
            _ => {}
        }
    }
    let strip = |t: &str| -> String {
        let t = t.trim();
        match t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            Some(inner) => inner.to_string(),
            None => t.to_string(),
        }
    };
    match split {
        None => Ok((base.parse(&strip(s))?, base.one())),
        Some(i) => {
            let den = base.parse(&strip(&s[i + 1..]))?;
            if base.is_zero(&den) {
                return Err(ParseError::new("zero denominator"));
            }
            Ok((base.parse(&strip(&s[..i]))?, den))
        }
    }
}

/// The fraction field of a global base, viewed as the local ring at the
/// generic point. Every non-unit of the base that gets inverted is appended
/// to the optional log; this is how a run records its generic assumptions.
#[derive(Clone, Debug)]
pub struct GenericPoint<B: GlobalBase> {
    base: B,
    log: Option<InversionLog<B::Elem>>,
}

impl<B: GlobalBase> GenericPoint<B> {
    pub fn new(base: B) -> Self {
        GenericPoint { base, log: None }
    }

    pub fn with_log(base: B, log: InversionLog<B::Elem>) -> Self {
        GenericPoint { base, log: Some(log) }
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    pub fn log(&self) -> Option<&InversionLog<B::Elem>> {
        self.log.as_ref()
    }

    pub fn embed(&self, a: &B::Elem) -> Frac<B::Elem> {
        Frac { num: a.clone(), den: self.base.one() }
    }

    pub fn frac(&self, num: B::Elem, den: B::Elem) -> Frac<B::Elem> {
        make_frac(&self.base, num, den)
    }

    fn record(&self, a: &B::Elem) {
        if let Some(log) = &self.log {
            if !self.base.is_unit(a) {
                log.lock().expect("log lock").push(self.base.normal(a));
            }
        }
    }
}

impl<B: GlobalBase> Ring for GenericPoint<B> {
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

impl<B: GlobalBase> Field for GenericPoint<B> {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(a) {
            return None;
        }
        self.record(&a.num);
        Some(make_frac(&self.base, a.den.clone(), a.num.clone()))
    }

    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }

    fn element_from_index(&self, i: u64) -> Self::Elem {
        self.embed(&self.base.small_element(i))
    }

    fn factor(&self, f: &UniPoly<Self::Elem>) -> Result<Factorization<Self::Elem>, PolyError> {
        let out = self.base.frac_factor(f)?;
        // Monic factors have coefficients whose denominators were inverted.
        for (g, _) in &out.factors {
            for c in &g.coeffs {
                self.record(&c.den);
            }
        }
        self.record(&out.unit.num);
        Ok(out)
    }
}

impl<B: GlobalBase> ElemCodec for GenericPoint<B> {
    fn format(&self, a: &Self::Elem) -> String {
        frac_format(&self.base, a)
    }

    fn parse(&self, s: &str) -> Result<Self::Elem, ParseError> {
        let (n, d) = frac_parse(&self.base, s)?;
        Ok(make_frac(&self.base, n, d))
    }
}

impl<B: GlobalBase> ParseCoeff for GenericPoint<B> {
    fn from_ratio(&self, n: &BigInt, d: &BigInt) -> Option<Self::Elem> {
        let d = self.base.from_bigint(d);
        if self.base.is_zero(&d) {
            return None;
        }
        self.record(&d);
        Some(make_frac(&self.base, self.base.from_bigint(n), d))
    }

    fn base_variable(&self, name: &str) -> Option<Self::Elem> {
        self.base.base_variable(name).map(|x| self.embed(&x))
    }
}

crate::field_local_ring!(GenericPoint<B>, B: GlobalBase);
