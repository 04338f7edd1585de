use std::collections::BTreeMap;

use crate::ring::Ring;

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u32>;

/// Sparse multivariate polynomial in a fixed number of variables. No zero
/// coefficient is ever stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly<E> {
    pub nvars: usize,
    pub terms: BTreeMap<Monomial, E>,
}

impl<E: Clone> MultiPoly<E> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn is_zero_poly(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant<R: Ring<Elem = E>>(ring: &R, nvars: usize, c: E) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(ring, vec![0; nvars], c);
        p
    }

    pub fn var<R: Ring<Elem = E>>(ring: &R, nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(ring, m, ring.one());
        p
    }

    pub fn add_term<R: Ring<Elem = E>>(&mut self, ring: &R, m: Monomial, c: E) {
        let sum = match self.terms.get(&m) {
            Some(old) => ring.add(old, &c),
            None => c,
        };
        if ring.is_zero(&sum) {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, sum);
        }
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(ring, m.clone(), c.clone());
        }
        out
    }

    pub fn neg<R: Ring<Elem = E>>(&self, ring: &R) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), ring.neg(c))).collect(),
        }
    }

    pub fn sub<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        self.add(ring, &other.neg(ring))
    }

    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(ring, m, ring.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow<R: Ring<Elem = E>>(&self, ring: &R, n: u32) -> Self {
        let mut acc = Self::constant(ring, self.nvars, ring.one());
        for _ in 0..n {
            acc = acc.mul(ring, self);
        }
        acc
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, c: &E) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, a) in &self.terms {
            out.add_term(ring, m.clone(), ring.mul(a, c));
        }
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m[var]).max().unwrap_or(0)
    }

    pub fn partial<R: Ring<Elem = E>>(&self, ring: &R, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[var] == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[var] -= 1;
            out.add_term(ring, m2, ring.scale_int(c, m[var] as i64));
        }
        out
    }

    /// Evaluation in an algebra over the coefficient ring.
    pub fn eval_in<A: Ring>(&self, alg: &A, embed: impl Fn(&E) -> A::Elem, values: &[A::Elem]) -> A::Elem {
        let mut acc = alg.zero();
        for (m, c) in &self.terms {
            let mut t = embed(c);
            for (v, &e) in values.iter().zip(m) {
                if e > 0 {
                    t = alg.mul(&t, &alg.pow(v, e as u64));
                }
            }
            acc = alg.add(&acc, &t);
        }
        acc
    }

    /// Coefficients in the single variable `var` when no other variable occurs.
    pub fn as_univariate(&self, var: usize, zero: &E) -> Option<Vec<E>> {
        let mut out: Vec<Option<E>> = Vec::new();
        for (m, c) in &self.terms {
            if m.iter().enumerate().any(|(i, &e)| i != var && e > 0) {
                return None;
            }
            let d = m[var] as usize;
            if out.len() <= d {
                out.resize(d + 1, None);
            }
            out[d] = Some(c.clone());
        }
        Some(out.into_iter().map(|c| c.unwrap_or_else(|| zero.clone())).collect())
    }

    pub fn map_coeffs<F: Clone, S: Ring<Elem = F>>(&self, target: &S, f: impl Fn(&E) -> F) -> MultiPoly<F> {
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(target, m.clone(), f(c));
        }
        out
    }
}
