//! Finitely presented algebras and the free model every computation runs in.
//!
//! Every algebra the pipeline touches is of the form `R[X]/(Q)[1/H]` with `Q`
//! monic. Elements are fractions `num / H^pow` with `num` given by its
//! coordinates in the free module `R[X]/(Q)`. Over a domain `R`, an element
//! vanishes exactly when `H^d num = 0` in `R[X]/(Q)`, `d = deg Q`, so equality
//! is decidable without any quotient construction. Ideal membership and
//! inversion are linear systems over `R` with a bounded clearing exponent.

use std::fmt::Debug;
use std::sync::{Arc, Mutex};

use crate::base_ring::linalg::{adjugate, mat_vec, solve_and_syzygies, Hermite, Matrix};
use crate::error::{AlgebraError, ParseError, Result};
use crate::poly::{parse_poly, MultiPoly, PolyRing, UniPoly};
use crate::ring::{LocalRing, ParseCoeff, Pid, Ring};

/// Extra clearing exponents allowed beyond `2 deg Q`.
pub const DEFAULT_EXTRA_BOUND: usize = 4;

/// `num / H^pow` in `R[X]/(Q)[1/H]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocElem<E> {
    pub num: Vec<E>,
    pub pow: usize,
}

/// `R[X]/(Q)[1/H]` with `Q` monic of degree at least one.
#[derive(Clone, Debug)]
pub struct MonicLocalization<R: Ring> {
    ring: PolyRing<R>,
    q: UniPoly<R::Elem>,
    h: Vec<R::Elem>,
    h_is_one: bool,
    bound: usize,
    powers: Arc<Mutex<Vec<Vec<R::Elem>>>>,
}

impl<R: Pid> MonicLocalization<R> {
    pub fn new(base: R, q: UniPoly<R::Elem>, h: &UniPoly<R::Elem>) -> Result<Self> {
        let ring = PolyRing::new(base);
        if !ring.is_monic(&q) || q.deg() == 0 {
            return Err(AlgebraError::Precondition("the modulus must be monic of positive degree".into()));
        }
        let d = q.deg();
        let mut out = MonicLocalization {
            ring,
            q,
            h: Vec::new(),
            h_is_one: false,
            bound: 2 * d + DEFAULT_EXTRA_BOUND,
            powers: Arc::new(Mutex::new(Vec::new())),
        };
        out.h = out.coords(h);
        let one = out.coords(&out.ring.one());
        out.h_is_one = out.h.iter().zip(&one).all(|(a, b)| out.base().equal(a, b));
        out.powers = Arc::new(Mutex::new(vec![one]));
        Ok(out)
    }

    /// `R[X]/(Q)` itself.
    pub fn free(base: R, q: UniPoly<R::Elem>) -> Result<Self> {
        let one = PolyRing::new(base.clone()).one();
        Self::new(base, q, &one)
    }

    /// Sets the largest clearing exponent tried by inversion and membership.
    pub fn with_bound(mut self, bound: usize) -> Self {
        self.bound = bound;
        self
    }

    pub fn base(&self) -> &R {
        self.ring.base()
    }

    pub fn poly_ring(&self) -> &PolyRing<R> {
        &self.ring
    }

    pub fn q(&self) -> &UniPoly<R::Elem> {
        &self.q
    }

    pub fn h(&self) -> &[R::Elem] {
        &self.h
    }

    pub fn h_poly(&self) -> UniPoly<R::Elem> {
        self.poly(&self.h)
    }

    pub fn h_is_one(&self) -> bool {
        self.h_is_one
    }

    pub fn deg(&self) -> usize {
        self.q.deg()
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Coordinates of `p mod Q`.
    pub fn coords(&self, p: &UniPoly<R::Elem>) -> Vec<R::Elem> {
        let r = self.ring.rem_monic(p, &self.q).expect("monic modulus");
        (0..self.deg()).map(|i| self.ring.coeff_or_zero(&r, i)).collect()
    }

    pub fn poly(&self, v: &[R::Elem]) -> UniPoly<R::Elem> {
        self.ring.from_coeffs(v.to_vec())
    }

    /// Product in `R[X]/(Q)`.
    pub fn mul_num(&self, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
        self.coords(&self.ring.mul(&self.poly(a), &self.poly(b)))
    }

    /// Numerator of `H^k`.
    pub fn h_power(&self, k: usize) -> Vec<R::Elem> {
        let k = if self.h_is_one { 0 } else { k };
        let mut powers = self.powers.lock().expect("power cache");
        while powers.len() <= k {
            let next = self.mul_num(powers.last().expect("H^0"), &self.h);
            powers.push(next);
        }
        powers[k].clone()
    }

    pub fn from_poly(&self, p: &UniPoly<R::Elem>) -> LocElem<R::Elem> {
        LocElem { num: self.coords(p), pow: 0 }
    }

    pub fn from_coords(&self, v: &[R::Elem]) -> LocElem<R::Elem> {
        LocElem { num: v.to_vec(), pow: 0 }
    }

    pub fn constant(&self, c: &R::Elem) -> LocElem<R::Elem> {
        self.from_poly(&self.ring.constant(c.clone()))
    }

    /// The class of `X`.
    pub fn x(&self) -> LocElem<R::Elem> {
        self.from_poly(&self.ring.x())
    }

    /// `1/H`.
    pub fn h_inverse(&self) -> LocElem<R::Elem> {
        LocElem { num: self.coords(&self.ring.one()), pow: if self.h_is_one { 0 } else { 1 } }
    }

    /// `p(at)` for a polynomial over `R`.
    pub fn eval(&self, p: &UniPoly<R::Elem>, at: &LocElem<R::Elem>) -> LocElem<R::Elem> {
        self.ring.eval_in(p, self, |c| self.constant(c), at)
    }

    /// `p(at)` for a polynomial with coefficients in this algebra.
    pub fn eval_elem_poly(&self, p: &[LocElem<R::Elem>], at: &LocElem<R::Elem>) -> LocElem<R::Elem> {
        p.iter().rev().fold(self.zero(), |acc, c| self.add(&self.mul(&acc, at), c))
    }

    pub fn scale(&self, a: &LocElem<R::Elem>, c: &R::Elem) -> LocElem<R::Elem> {
        LocElem { num: a.num.iter().map(|v| self.base().mul(v, c)).collect(), pow: a.pow }
    }

    /// Matrix of multiplication by `num` on `R[X]/(Q)`.
    pub fn mult_matrix(&self, num: &[R::Elem]) -> Matrix<R::Elem> {
        let d = self.deg();
        let cols: Vec<Vec<R::Elem>> = (0..d)
            .map(|j| self.coords(&self.ring.mul(&self.poly(num), &self.ring.monomial(self.base().one(), j))))
            .collect();
        (0..d).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
    }

    /// An inverse, found by solving `num z = H^e` for `e` up to the bound.
    pub fn try_invert(&self, a: &LocElem<R::Elem>) -> Option<LocElem<R::Elem>> {
        if self.is_zero(a) {
            // Only the zero ring has 0 as a unit.
            return self.is_one(&self.zero()).then(|| self.zero());
        }
        let m = Hermite::new(self.base(), &self.mult_matrix(&a.num));
        let top = if self.h_is_one { 0 } else { self.bound };
        // Solvability is monotone in the exponent, so fail fast at the top.
        m.solve(self.base(), &self.h_power(top)).ok()?;
        for e in 0..=top {
            if let Ok(x) = m.solve(self.base(), &self.h_power(e)) {
                let num = self.mul_num(&x, &self.h_power(a.pow));
                return Some(self.tidy(LocElem { num, pow: e }));
            }
        }
        None
    }

    pub fn is_unit(&self, a: &LocElem<R::Elem>) -> bool {
        self.try_invert(a).is_some()
    }

    /// Coefficients `z_i` with `c = sum z_i g_i`.
    pub fn ideal_membership(&self, c: &LocElem<R::Elem>, gens: &[LocElem<R::Elem>]) -> Result<Vec<LocElem<R::Elem>>> {
        if gens.is_empty() {
            return if self.is_zero(c) { Ok(Vec::new()) } else { Err(AlgebraError::NoSolution) };
        }
        let d = self.deg();
        let blocks: Vec<Matrix<R::Elem>> = gens.iter().map(|g| self.mult_matrix(&g.num)).collect();
        let a: Matrix<R::Elem> = (0..d).map(|i| blocks.iter().flat_map(|b| b[i].iter().cloned()).collect()).collect();
        let a = Hermite::new(self.base(), &a);
        let top = if self.h_is_one { 0 } else { self.bound };
        let exceeded = || AlgebraError::BoundExceeded(format!("ideal membership up to clearing exponent {top}"));
        a.solve(self.base(), &self.mul_num(&self.h_power(top), &c.num)).map_err(|_| exceeded())?;
        for t in 0..=top {
            let rhs = self.mul_num(&self.h_power(t), &c.num);
            if let Ok(x) = a.solve(self.base(), &rhs) {
                let out: Vec<_> = gens
                    .iter()
                    .enumerate()
                    .map(|(i, g)| {
                        let z = &x[i * d..(i + 1) * d];
                        self.tidy(LocElem { num: self.mul_num(z, &self.h_power(g.pow)), pow: c.pow + t })
                    })
                    .collect();
                debug_assert!(self.equal(c, &self.combination(&out, gens)));
                return Ok(out);
            }
        }
        Err(exceeded())
    }

    /// `sum z_i g_i`.
    pub fn combination(&self, z: &[LocElem<R::Elem>], g: &[LocElem<R::Elem>]) -> LocElem<R::Elem> {
        z.iter().zip(g).fold(self.zero(), |acc, (a, b)| self.add(&acc, &self.mul(a, b)))
    }

    /// Divides out powers of `H` from the numerator while the power is
    /// positive. Idempotent; equal elements need not get equal forms.
    pub fn normal_form(&self, a: &LocElem<R::Elem>) -> LocElem<R::Elem> {
        let mut a = self.tidy(a.clone());
        if self.h_is_one {
            return a;
        }
        let hm = self.mult_matrix(&self.h);
        while a.pow > 0 {
            match solve_and_syzygies(self.base(), &hm, &a.num) {
                Ok(sol) => a = LocElem { num: sol.x, pow: a.pow - 1 },
                Err(_) => break,
            }
        }
        a
    }

    fn tidy(&self, mut a: LocElem<R::Elem>) -> LocElem<R::Elem> {
        if self.h_is_one {
            a.pow = 0;
        }
        a
    }

    /// The same presentation over another base.
    pub fn map_base<T: Pid>(&self, target: T, f: impl Fn(&R::Elem) -> T::Elem) -> Result<MonicLocalization<T>> {
        let tr = PolyRing::new(target.clone());
        let q = tr.from_coeffs(self.q.coeffs.iter().map(&f).collect());
        let h = tr.from_coeffs(self.h.iter().map(&f).collect());
        Ok(MonicLocalization::new(target, q, &h)?.with_bound(self.bound))
    }

    pub fn map_elem<E2>(a: &LocElem<R::Elem>, f: impl Fn(&R::Elem) -> E2) -> LocElem<E2> {
        LocElem { num: a.num.iter().map(f).collect(), pow: a.pow }
    }

    /// `self[1/s]`, with `H' = H num(s)`.
    pub fn localize(&self, s: &LocElem<R::Elem>) -> Result<MonicLocalization<R>> {
        let h = self.mul_num(&self.h, &s.num);
        Ok(MonicLocalization::new(self.base().clone(), self.q.clone(), &self.poly(&h))?.with_bound(self.bound))
    }

    /// Image of an element under the canonical map into [`localize`](Self::localize)`(s)`.
    pub fn transport(&self, a: &LocElem<R::Elem>, s: &LocElem<R::Elem>) -> LocElem<R::Elem> {
        let mut num = a.num.clone();
        for _ in 0..a.pow {
            num = self.mul_num(&num, &s.num);
        }
        LocElem { num, pow: a.pow }
    }

    pub fn same_presentation(&self, other: &Self) -> bool {
        self.ring.equal(&self.q, &other.q) && self.h.iter().zip(&other.h).all(|(a, b)| self.base().equal(a, b))
    }
}

impl<R: LocalRing> MonicLocalization<R> {
    /// `dim_k` of `k[X]/(Q)[1/H]`: the degree of the part of `Q` coprime to `H`.
    pub fn residual_dimension(&self) -> usize {
        let k = self.base().residue_field().clone();
        let kr = PolyRing::new(k);
        let qb = kr.from_coeffs(self.q.coeffs.iter().map(|c| self.base().residue(c)).collect());
        let hb = kr.from_coeffs(self.h.iter().map(|c| self.base().residue(c)).collect());
        kr.coprime_part(&qb, &hb).deg()
    }
}

impl<R: Pid> Ring for MonicLocalization<R> {
    type Elem = LocElem<R::Elem>;

    fn zero(&self) -> Self::Elem {
        LocElem { num: vec![self.base().zero(); self.deg()], pow: 0 }
    }

    fn one(&self) -> Self::Elem {
        self.from_poly(&self.ring.one())
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.constant(&self.base().from_int(n))
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let base = self.base();
        if self.h_is_one || a.pow == b.pow {
            let num = a.num.iter().zip(&b.num).map(|(x, y)| base.add(x, y)).collect();
            return self.tidy(LocElem { num, pow: a.pow.max(b.pow) });
        }
        let m = a.pow.max(b.pow);
        let an = self.mul_num(&a.num, &self.h_power(m - a.pow));
        let bn = self.mul_num(&b.num, &self.h_power(m - b.pow));
        LocElem { num: an.iter().zip(&bn).map(|(x, y)| base.add(x, y)).collect(), pow: m }
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        LocElem { num: a.num.iter().map(|x| self.base().neg(x)).collect(), pow: a.pow }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.tidy(LocElem { num: self.mul_num(&a.num, &b.num), pow: a.pow + b.pow })
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        let base = self.base();
        if a.num.iter().all(|c| base.is_zero(c)) {
            return true;
        }
        if self.h_is_one {
            return false;
        }
        self.mul_num(&self.h_power(self.deg()), &a.num).iter().all(|c| base.is_zero(c))
    }
}

/// An algebra map out of `R[X]/(Q)[1/H]`, given by the images of `X` and `1/H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraMap<E> {
    pub x: LocElem<E>,
    pub h_inverse: LocElem<E>,
}

impl<E: Clone + Debug + Send + Sync> AlgebraMap<E> {
    pub fn identity<R: Pid<Elem = E>>(src: &MonicLocalization<R>) -> Self {
        AlgebraMap { x: src.x(), h_inverse: src.h_inverse() }
    }

    /// Sends `X` to `x` and computes the image of `1/H` by inversion.
    pub fn from_x<R: Pid<Elem = E>>(src: &MonicLocalization<R>, tgt: &MonicLocalization<R>, x: LocElem<E>) -> Result<Self> {
        let hx = tgt.eval(&src.h_poly(), &x);
        let h_inverse = tgt
            .try_invert(&hx)
            .ok_or_else(|| AlgebraError::CheckFailed("the image of H is not invertible in the target".into()))?;
        Ok(AlgebraMap { x, h_inverse })
    }

    pub fn apply<R: Pid<Elem = E>>(
        &self,
        src: &MonicLocalization<R>,
        tgt: &MonicLocalization<R>,
        a: &LocElem<E>,
    ) -> LocElem<E> {
        let n = tgt.eval(&src.poly(&a.num), &self.x);
        if a.pow == 0 {
            return n;
        }
        tgt.mul(&n, &tgt.pow(&self.h_inverse, a.pow as u64))
    }

    /// `Q(x) = 0` and `H(x) h_inverse = 1` in the target.
    pub fn check<R: Pid<Elem = E>>(&self, src: &MonicLocalization<R>, tgt: &MonicLocalization<R>) -> Result<()> {
        if !tgt.is_zero(&tgt.eval(src.q(), &self.x)) {
            return Err(AlgebraError::CheckFailed("the defining polynomial does not vanish at the image of X".into()));
        }
        if !tgt.is_one(&tgt.mul(&tgt.eval(&src.h_poly(), &self.x), &self.h_inverse)) {
            return Err(AlgebraError::CheckFailed("the image of 1/H is not inverse to the image of H".into()));
        }
        Ok(())
    }

    /// `then . self`.
    pub fn then<R: Pid<Elem = E>>(
        &self,
        then: &AlgebraMap<E>,
        mid: &MonicLocalization<R>,
        tgt: &MonicLocalization<R>,
    ) -> AlgebraMap<E> {
        AlgebraMap {
            x: tgt.normal_form(&then.apply(mid, tgt, &self.x)),
            h_inverse: tgt.normal_form(&then.apply(mid, tgt, &self.h_inverse)),
        }
    }
}

/// Mutually inverse maps `A -> B` and `B -> A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoCertificate<E> {
    pub forward: AlgebraMap<E>,
    pub backward: AlgebraMap<E>,
}

impl<E: Clone + Debug + Send + Sync> IsoCertificate<E> {
    /// Builds both maps from the images of the generators and checks them.
    pub fn from_generators<R: Pid<Elem = E>>(
        a: &MonicLocalization<R>,
        b: &MonicLocalization<R>,
        x_ab: LocElem<E>,
        x_ba: LocElem<E>,
    ) -> Result<Self> {
        let cert = IsoCertificate { forward: AlgebraMap::from_x(a, b, x_ab)?, backward: AlgebraMap::from_x(b, a, x_ba)? };
        cert.verify(a, b)?;
        Ok(cert)
    }

    /// Both maps are well defined and both composites fix `X` and `1/H`.
    pub fn verify<R: Pid<Elem = E>>(&self, a: &MonicLocalization<R>, b: &MonicLocalization<R>) -> Result<()> {
        self.forward.check(a, b)?;
        self.backward.check(b, a)?;
        let aa = self.forward.then(&self.backward, b, a);
        let bb = self.backward.then(&self.forward, a, b);
        if !a.equal(&aa.x, &a.x()) || !a.equal(&aa.h_inverse, &a.h_inverse()) {
            return Err(AlgebraError::CheckFailed("backward . forward is not the identity".into()));
        }
        if !b.equal(&bb.x, &b.x()) || !b.equal(&bb.h_inverse, &b.h_inverse()) {
            return Err(AlgebraError::CheckFailed("forward . backward is not the identity".into()));
        }
        Ok(())
    }

    pub fn inverse(&self) -> Self {
        IsoCertificate { forward: self.backward.clone(), backward: self.forward.clone() }
    }

    /// `A ~ B` and `B ~ C` give `A ~ C`.
    pub fn compose<R: Pid<Elem = E>>(
        &self,
        next: &IsoCertificate<E>,
        a: &MonicLocalization<R>,
        b: &MonicLocalization<R>,
        c: &MonicLocalization<R>,
    ) -> Self {
        IsoCertificate { forward: self.forward.then(&next.forward, b, c), backward: next.backward.then(&self.backward, b, a) }
    }
}

/// `R[X]/(Q)[1/G]` with `Q` monic and `cert Q'(a) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardEtalePresentation<E> {
    pub q: UniPoly<E>,
    pub g: UniPoly<E>,
    pub cert: LocElem<E>,
}

impl<E: Clone + Debug + Send + Sync> StandardEtalePresentation<E> {
    /// Finds the certificate by inverting `Q'(a)`.
    pub fn new<R: Pid<Elem = E>>(base: &R, q: UniPoly<E>, g: UniPoly<E>) -> Result<Self> {
        let loc = MonicLocalization::new(base.clone(), q.clone(), &g)?;
        let dq = loc.eval(&loc.poly_ring().derivative(&q), &loc.x());
        let cert = loc.try_invert(&dq).ok_or_else(|| AlgebraError::NotEtale("Q'(a) is not invertible".into()))?;
        Ok(StandardEtalePresentation { q, g, cert })
    }

    pub fn algebra<R: Pid<Elem = E>>(&self, base: &R) -> Result<MonicLocalization<R>> {
        MonicLocalization::new(base.clone(), self.q.clone(), &self.g)
    }

    pub fn check<R: Pid<Elem = E>>(&self, base: &R) -> Result<()> {
        let ring = PolyRing::new(base.clone());
        if !ring.is_monic(&self.q) {
            return Err(AlgebraError::CheckFailed("Q is not monic".into()));
        }
        let loc = self.algebra(base)?;
        let dq = loc.eval(&ring.derivative(&self.q), &loc.x());
        if !loc.is_one(&loc.mul(&self.cert, &dq)) {
            return Err(AlgebraError::CheckFailed("c Q'(a) != 1".into()));
        }
        Ok(())
    }
}

/// One Newton step `x0 - W adj(J(x0)) F(x0)` in an algebra `T` receiving the
/// relations through `embed`. When `F(x0)` lies in an ideal `I` and
/// `W det J(x0) = 1 mod I`, the result satisfies `F = 0 mod I^2`.
pub fn newton_section<R: Ring, T: Ring>(
    base: &R,
    target: &T,
    embed: impl Fn(&R::Elem) -> T::Elem,
    relations: &[MultiPoly<R::Elem>],
    lift0: &[T::Elem],
    det_inverse: &T::Elem,
) -> Vec<T::Elem> {
    let n = lift0.len();
    let jac: Matrix<T::Elem> = relations
        .iter()
        .map(|f| (0..n).map(|j| f.partial(base, j).eval_in(target, &embed, lift0)).collect())
        .collect();
    let f0: Vec<T::Elem> = relations.iter().map(|f| f.eval_in(target, &embed, lift0)).collect();
    let corr = mat_vec(target, &adjugate(target, &jac), &f0);
    lift0
        .iter()
        .zip(&corr)
        .map(|(x, c)| target.sub(x, &target.mul(det_inverse, c)))
        .collect()
}

/// Variables, relations and an optional inverted element.
#[derive(Clone, Debug, PartialEq)]
pub struct FPAlgebra<E> {
    pub vars: Vec<String>,
    pub relations: Vec<MultiPoly<E>>,
    pub inverted: Option<MultiPoly<E>>,
}

impl<E: Clone + Debug + Send + Sync> FPAlgebra<E> {
    pub fn parse<R: ParseCoeff<Elem = E>>(
        ring: &R,
        vars: &[String],
        relations: &[String],
        invert: Option<&str>,
    ) -> Result<Self, ParseError> {
        let relations = relations.iter().map(|s| parse_poly(ring, vars, s)).collect::<Result<_, _>>()?;
        let inverted = invert.map(|s| parse_poly(ring, vars, s)).transpose()?;
        Ok(FPAlgebra { vars: vars.to_vec(), relations, inverted })
    }

    /// `self[1/s]`; successive inversions multiply into one denominator.
    pub fn localize<R: Ring<Elem = E>>(&self, ring: &R, s: &MultiPoly<E>) -> Self {
        let inverted = match &self.inverted {
            Some(g) => g.mul(ring, s),
            None => s.clone(),
        };
        FPAlgebra { vars: self.vars.clone(), relations: self.relations.clone(), inverted: Some(inverted) }
    }

    /// The presentation with the inverse as an extra variable `z` and the
    /// relation `z s - 1`.
    pub fn explicit<R: Ring<Elem = E>>(&self, ring: &R) -> Self {
        let Some(s) = &self.inverted else { return self.clone() };
        let n = self.vars.len();
        let widen = |p: &MultiPoly<E>| {
            let mut out = MultiPoly::zero(n + 1);
            for (m, c) in &p.terms {
                let mut m2 = m.clone();
                m2.push(0);
                out.add_term(ring, m2, c.clone());
            }
            out
        };
        let mut relations: Vec<_> = self.relations.iter().map(widen).collect();
        let z = MultiPoly::var(ring, n + 1, n);
        relations.push(z.mul(ring, &widen(s)).sub(ring, &MultiPoly::constant(ring, n + 1, ring.one())));
        let mut vars = self.vars.clone();
        vars.push("z".into());
        FPAlgebra { vars, relations, inverted: None }
    }
}

/// An input algebra rewritten as `R[X]/(Q)[1/H]`, with the images of the
/// input variables and of the Jacobian determinant of the relations.
#[derive(Clone, Debug)]
pub struct EModel<R: Ring> {
    pub loc: MonicLocalization<R>,
    pub images: Vec<LocElem<R::Elem>>,
    pub jacobian: LocElem<R::Elem>,
}

impl<R: Pid> EModel<R> {
    /// Supported shapes: no variables; one variable with a single relation
    /// whose leading coefficient is a unit; one variable with a linear
    /// relation `c1 x + c0` where `c0` is a unit. Any inverted element is
    /// folded into `H`.
    pub fn normalize(base: &R, fp: &FPAlgebra<R::Elem>) -> Result<Self> {
        let ring = PolyRing::new(base.clone());
        let nonzero: Vec<&MultiPoly<R::Elem>> = fp.relations.iter().filter(|r| !r.is_zero_poly()).collect();
        let (mut loc, images, jacobian) = match fp.vars.len() {
            0 => {
                if !nonzero.is_empty() {
                    return Err(AlgebraError::Unsupported("constant relations other than 0".into()));
                }
                let loc = MonicLocalization::free(base.clone(), ring.x())?;
                let one = loc.one();
                (loc, Vec::new(), one)
            }
            1 => {
                if nonzero.len() != 1 {
                    return Err(AlgebraError::Unsupported("exactly one nonzero relation in one variable is supported".into()));
                }
                let f = ring.from_coeffs(nonzero[0].as_univariate(0, &base.zero()).expect("one variable"));
                Self::univariate(base, &f)?
            }
            _ => return Err(AlgebraError::Unsupported("more than one variable".into())),
        };
        let mut images = images;
        let mut jacobian = jacobian;
        if let Some(g) = &fp.inverted {
            let gi = g.eval_in(&loc, |c| loc.constant(c), &images);
            let next = loc.localize(&gi)?;
            images = images.iter().map(|a| loc.transport(a, &gi)).collect();
            jacobian = loc.transport(&jacobian, &gi);
            loc = next;
        }
        Ok(EModel { loc, images, jacobian })
    }

    #[allow(clippy::type_complexity)]
    fn univariate(
        base: &R,
        f: &UniPoly<R::Elem>,
    ) -> Result<(MonicLocalization<R>, Vec<LocElem<R::Elem>>, LocElem<R::Elem>)> {
        let ring = PolyRing::new(base.clone());
        let lc = f.leading().cloned().ok_or_else(|| AlgebraError::Unsupported("zero relation".into()))?;
        if f.deg() == 0 {
            return Err(AlgebraError::Unsupported("constant relation in one variable".into()));
        }
        let df = ring.derivative(f);
        if let Some(inv) = base.div_exact(&base.one(), &lc) {
            let q = ring.scale(f, &inv);
            let loc = MonicLocalization::free(base.clone(), q)?;
            let x = loc.x();
            let jac = loc.eval(&df, &x);
            return Ok((loc, vec![x], jac));
        }
        let c0 = ring.coeff_or_zero(f, 0);
        if f.deg() == 1 && base.is_unit(&c0) {
            // c1 x + c0 = 0 with c0 a unit: x = -c0/c1 and the algebra is R[1/c1].
            let loc = MonicLocalization::new(base.clone(), ring.x(), &ring.constant(lc.clone()))?;
            let x = LocElem { num: vec![base.neg(&c0)], pow: 1 };
            let jac = loc.constant(&lc);
            return Ok((loc, vec![x], jac));
        }
        Err(AlgebraError::Unsupported(
            "the relation is neither monic up to a unit nor linear with a unit constant term".into(),
        ))
    }

    /// An inverse of the Jacobian determinant, either checked from a
    /// supplied witness or found by inversion.
    pub fn etale_witness(&self, supplied: Option<&LocElem<R::Elem>>) -> Result<LocElem<R::Elem>> {
        match supplied {
            Some(w) => {
                if self.loc.is_one(&self.loc.mul(w, &self.jacobian)) {
                    Ok(w.clone())
                } else {
                    Err(AlgebraError::NotEtale("the supplied witness does not invert the Jacobian".into()))
                }
            }
            None => self
                .loc
                .try_invert(&self.jacobian)
                .ok_or_else(|| AlgebraError::NotEtale("the Jacobian determinant is not invertible".into())),
        }
    }

    /// The relations of the explicit presentation `R[x, z]/(Q(x), z H(x) - 1)`.
    pub fn explicit_relations(&self) -> Vec<MultiPoly<R::Elem>> {
        explicit_relations(&self.loc)
    }
}

/// `Q(x)` and `z H(x) - 1` as polynomials in `(x, z)`.
pub fn explicit_relations<R: Pid>(loc: &MonicLocalization<R>) -> Vec<MultiPoly<R::Elem>> {
    let base = loc.base();
    let lift = |p: &UniPoly<R::Elem>, zdeg: u32| {
        let mut out = MultiPoly::zero(2);
        for (i, c) in p.coeffs.iter().enumerate() {
            out.add_term(base, vec![i as u32, zdeg], c.clone());
        }
        out
    };
    let mut second = lift(&loc.h_poly(), 1);
    second.add_term(base, vec![0, 0], base.neg(&base.one()));
    vec![lift(loc.q(), 0), second]
}
