use crate::ring::{Field, Pid, Ring};

use super::PolyError;

/// Dense univariate polynomial, lowest degree first. Instances produced by
/// [`PolyRing`] carry no trailing zeros, so the last coefficient is the
/// leading one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly<E> {
    pub coeffs: Vec<E>,
}

impl<E> UniPoly<E> {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero_poly(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&E> {
        self.coeffs.get(i)
    }
}

/// The polynomial ring `R[X]` over a base ring.
#[derive(Clone, Debug)]
pub struct PolyRing<R: Ring> {
    base: R,
}

impl<R: Ring> PolyRing<R> {
    pub fn new(base: R) -> Self {
        PolyRing { base }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn from_coeffs(&self, mut coeffs: Vec<R::Elem>) -> UniPoly<R::Elem> {
        while let Some(c) = coeffs.last() {
            if self.base.is_zero(c) {
                coeffs.pop();
            } else {
                break;
            }
        }
        UniPoly { coeffs }
    }

    pub fn normalize(&self, p: UniPoly<R::Elem>) -> UniPoly<R::Elem> {
        self.from_coeffs(p.coeffs)
    }

    pub fn constant(&self, c: R::Elem) -> UniPoly<R::Elem> {
        self.from_coeffs(vec![c])
    }

    pub fn x(&self) -> UniPoly<R::Elem> {
        self.monomial(self.base.one(), 1)
    }

    pub fn monomial(&self, c: R::Elem, n: usize) -> UniPoly<R::Elem> {
        let mut v = vec![self.base.zero(); n];
        v.push(c);
        self.from_coeffs(v)
    }

    /// `X - c`.
    pub fn linear(&self, c: &R::Elem) -> UniPoly<R::Elem> {
        self.from_coeffs(vec![self.base.neg(c), self.base.one()])
    }

    pub fn coeff_or_zero(&self, p: &UniPoly<R::Elem>, i: usize) -> R::Elem {
        p.coeffs.get(i).cloned().unwrap_or_else(|| self.base.zero())
    }

    pub fn is_monic(&self, p: &UniPoly<R::Elem>) -> bool {
        p.leading().is_some_and(|c| self.base.is_one(c))
    }

    pub fn scale(&self, p: &UniPoly<R::Elem>, c: &R::Elem) -> UniPoly<R::Elem> {
        self.from_coeffs(p.coeffs.iter().map(|a| self.base.mul(a, c)).collect())
    }

    pub fn derivative(&self, p: &UniPoly<R::Elem>) -> UniPoly<R::Elem> {
        let coeffs = p
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.base.scale_int(c, i as i64))
            .collect();
        self.from_coeffs(coeffs)
    }

    /// Horner evaluation of `p` at `x` in an `R`-algebra given by `embed`.
    pub fn eval_in<A: Ring>(
        &self,
        p: &UniPoly<R::Elem>,
        alg: &A,
        embed: impl Fn(&R::Elem) -> A::Elem,
        x: &A::Elem,
    ) -> A::Elem {
        let mut acc = alg.zero();
        for c in p.coeffs.iter().rev() {
            acc = alg.add(&alg.mul(&acc, x), &embed(c));
        }
        acc
    }

    pub fn eval(&self, p: &UniPoly<R::Elem>, x: &R::Elem) -> R::Elem {
        self.eval_in(p, &self.base, |c| c.clone(), x)
    }

    /// `p(g(X))`.
    pub fn compose(&self, p: &UniPoly<R::Elem>, g: &UniPoly<R::Elem>) -> UniPoly<R::Elem> {
        self.eval_in(p, self, |c| self.constant(c.clone()), g)
    }

    pub fn map_into<S: Ring>(
        &self,
        p: &UniPoly<R::Elem>,
        target: &PolyRing<S>,
        f: impl Fn(&R::Elem) -> S::Elem,
    ) -> UniPoly<S::Elem> {
        target.from_coeffs(p.coeffs.iter().map(f).collect())
    }

    /// Division by a monic divisor: `f = quot * q + rem`, `deg rem < deg q`.
    pub fn divmod_monic(
        &self,
        f: &UniPoly<R::Elem>,
        q: &UniPoly<R::Elem>,
    ) -> Result<(UniPoly<R::Elem>, UniPoly<R::Elem>), PolyError> {
        if !self.is_monic(q) {
            return Err(PolyError::NonMonic);
        }
        let dq = q.deg();
        let mut rem = f.coeffs.clone();
        if rem.len() <= dq {
            return Ok((UniPoly::zero(), self.from_coeffs(rem)));
        }
        let mut quot = vec![self.base.zero(); rem.len() - dq];
        for i in (dq..rem.len()).rev() {
            let c = rem[i].clone();
            if self.base.is_zero(&c) {
                continue;
            }
            quot[i - dq] = c.clone();
            for (j, qc) in q.coeffs.iter().enumerate() {
                let k = i - dq + j;
                rem[k] = self.base.sub(&rem[k], &self.base.mul(&c, qc));
            }
        }
        rem.truncate(dq);
        Ok((self.from_coeffs(quot), self.from_coeffs(rem)))
    }

    pub fn rem_monic(
        &self,
        f: &UniPoly<R::Elem>,
        q: &UniPoly<R::Elem>,
    ) -> Result<UniPoly<R::Elem>, PolyError> {
        self.divmod_monic(f, q).map(|(_, r)| r)
    }

    /// `q^n` reduced modulo a monic polynomial.
    pub fn pow_mod(
        &self,
        p: &UniPoly<R::Elem>,
        mut n: u128,
        modulus: &UniPoly<R::Elem>,
    ) -> Result<UniPoly<R::Elem>, PolyError> {
        let mut base = self.rem_monic(p, modulus)?;
        let mut acc = self.rem_monic(&self.one(), modulus)?;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.rem_monic(&self.mul(&acc, &base), modulus)?;
            }
            n >>= 1;
            if n > 0 {
                base = self.rem_monic(&self.mul(&base, &base), modulus)?;
            }
        }
        Ok(acc)
    }

    /// Same as [`pow_mod`](Self::pow_mod) with a big exponent given as little-endian bits.
    pub fn pow_mod_big(
        &self,
        p: &UniPoly<R::Elem>,
        exp: &num_bigint::BigUint,
        modulus: &UniPoly<R::Elem>,
    ) -> Result<UniPoly<R::Elem>, PolyError> {
        let mut acc = self.rem_monic(&self.one(), modulus)?;
        let base = self.rem_monic(p, modulus)?;
        for i in (0..exp.bits()).rev() {
            acc = self.rem_monic(&self.mul(&acc, &acc), modulus)?;
            if exp.bit(i) {
                acc = self.rem_monic(&self.mul(&acc, &base), modulus)?;
            }
        }
        Ok(acc)
    }
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = UniPoly<R::Elem>;

    fn zero(&self) -> Self::Elem {
        UniPoly::zero()
    }

    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.constant(self.base.from_int(n))
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let n = a.coeffs.len().max(b.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (a.coeffs.get(i), b.coeffs.get(i)) {
                (Some(x), Some(y)) => self.base.add(x, y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        self.from_coeffs(coeffs)
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        UniPoly { coeffs: a.coeffs.iter().map(|c| self.base.neg(c)).collect() }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.is_zero_poly() || b.is_zero_poly() {
            return UniPoly::zero();
        }
        let mut out = vec![self.base.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                out[i + j] = self.base.add(&out[i + j], &self.base.mul(x, y));
            }
        }
        self.from_coeffs(out)
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.coeffs.iter().all(|c| self.base.is_zero(c))
    }
}

/// Result of a separability test: Bezout cofactors `a*p + b*p' = 1` when separable.
#[derive(Clone, Debug)]
pub struct Separability<E> {
    pub separable: bool,
    pub bezout: Option<(UniPoly<E>, UniPoly<E>)>,
}

impl<F: Field> PolyRing<F> {
    pub fn make_monic(&self, p: &UniPoly<F::Elem>) -> UniPoly<F::Elem> {
        match p.leading() {
            Some(lc) => {
                let inv = self.base.inv(lc).expect("nonzero leading coefficient");
                self.scale(p, &inv)
            }
            None => UniPoly::zero(),
        }
    }

    /// Euclidean division; `None` when `g` is zero.
    pub fn divmod(
        &self,
        f: &UniPoly<F::Elem>,
        g: &UniPoly<F::Elem>,
    ) -> Option<(UniPoly<F::Elem>, UniPoly<F::Elem>)> {
        let lc = g.leading()?;
        let inv = self.base.inv(lc)?;
        let monic = self.scale(g, &inv);
        let (q, r) = self.divmod_monic(f, &monic).ok()?;
        Some((self.scale(&q, &inv), r))
    }

    pub fn rem(&self, f: &UniPoly<F::Elem>, g: &UniPoly<F::Elem>) -> UniPoly<F::Elem> {
        self.divmod(f, g).map(|(_, r)| r).unwrap_or_else(|| f.clone())
    }

    pub fn divides(&self, d: &UniPoly<F::Elem>, f: &UniPoly<F::Elem>) -> bool {
        match self.divmod(f, d) {
            Some((_, r)) => r.is_zero_poly(),
            None => f.is_zero_poly(),
        }
    }

    /// Exact quotient `f / d`.
    pub fn quo(&self, f: &UniPoly<F::Elem>, d: &UniPoly<F::Elem>) -> Option<UniPoly<F::Elem>> {
        let (q, r) = self.divmod(f, d)?;
        r.is_zero_poly().then_some(q)
    }

    /// Extended Euclid: `(g, s, t)` with `g = s f + t h`, `g` monic (zero
    /// only when both inputs vanish).
    pub fn xgcd_monic(
        &self,
        f: &UniPoly<F::Elem>,
        h: &UniPoly<F::Elem>,
    ) -> (UniPoly<F::Elem>, UniPoly<F::Elem>, UniPoly<F::Elem>) {
        let (mut r0, mut r1) = (f.clone(), h.clone());
        let (mut s0, mut s1) = (self.one(), self.zero());
        let (mut t0, mut t1) = (self.zero(), self.one());
        while !r1.is_zero_poly() {
            let (q, r) = self.divmod(&r0, &r1).expect("nonzero divisor");
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.leading() {
            Some(lc) => {
                let inv = self.base.inv(lc).expect("field");
                (self.scale(&r0, &inv), self.scale(&s0, &inv), self.scale(&t0, &inv))
            }
            None => (r0, s0, t0),
        }
    }

    /// Monic gcd of two polynomials over a field.
    pub fn gcd_monic(
        &self,
        f: &UniPoly<F::Elem>,
        g: &UniPoly<F::Elem>,
    ) -> Result<UniPoly<F::Elem>, PolyError> {
        if f.is_zero_poly() && g.is_zero_poly() {
            return Err(PolyError::BothZero);
        }
        Ok(self.xgcd_monic(f, g).0)
    }

    /// `gcd(p, p') = 1`, with Bezout cofactors when true.
    pub fn is_separable(&self, p: &UniPoly<F::Elem>) -> Result<Separability<F::Elem>, PolyError> {
        if p.deg() == 0 {
            return Err(PolyError::Constant);
        }
        let dp = self.derivative(p);
        let (g, a, b) = self.xgcd_monic(p, &dp);
        if g.deg() == 0 && !g.is_zero_poly() {
            Ok(Separability { separable: true, bezout: Some((a, b)) })
        } else {
            Ok(Separability { separable: false, bezout: None })
        }
    }

    /// Factorization into monic irreducibles through the field's backend.
    pub fn factor(&self, p: &UniPoly<F::Elem>) -> Result<super::Factorization<F::Elem>, PolyError> {
        if p.is_zero_poly() {
            return Err(PolyError::Constant);
        }
        self.base.factor(p)
    }

    /// Strips every irreducible factor shared with `g` from `f`: the largest
    /// divisor of `f` coprime to `g`.
    pub fn coprime_part(&self, f: &UniPoly<F::Elem>, g: &UniPoly<F::Elem>) -> UniPoly<F::Elem> {
        let mut f = self.make_monic(f);
        loop {
            let d = self.xgcd_monic(&f, g).0;
            if d.deg() == 0 {
                return f;
            }
            f = self.quo(&f, &d).expect("gcd divides");
        }
    }
}

impl<F: Field> Pid for PolyRing<F> {
    fn xgcd(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem, Self::Elem) {
        self.xgcd_monic(a, b)
    }

    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        if b.is_zero_poly() {
            return a.is_zero_poly().then(UniPoly::zero);
        }
        self.quo(a, b)
    }
}
