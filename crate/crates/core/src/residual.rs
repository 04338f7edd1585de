//! Finite algebras over a field given by structure constants: minimal
//! polynomials, the idempotent attached to an element, and the splitting of
//! an unramified algebra into monogene separable components.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::base_ring::linalg::{rank, solve_field, Matrix};
use crate::error::{AlgebraError, Result};
use crate::poly::{PolyError, PolyRing, UniPoly};
use crate::ring::{Field, Ring};

/// A commutative `k`-algebra with basis `b_0..b_{n-1}`; `table[i][j]` holds
/// the coordinates of `b_i b_j`.
#[derive(Clone, Debug)]
pub struct FiniteKAlgebra<F: Field> {
    field: F,
    table: Vec<Vec<Vec<F::Elem>>>,
    unit: Vec<F::Elem>,
    labels: Vec<String>,
}

impl<F: Field> FiniteKAlgebra<F> {
    /// Checks unit, commutativity and associativity on all basis triples.
    pub fn new(field: F, labels: Vec<String>, table: Vec<Vec<Vec<F::Elem>>>, unit: Vec<F::Elem>) -> Result<Self> {
        let alg = FiniteKAlgebra { field, table, unit, labels };
        alg.check_laws()?;
        Ok(alg)
    }

    /// `k[X]/(f)` for monic `f`, with basis `1, x, .., x^{d-1}`.
    pub fn monogenic(field: F, f: &UniPoly<F::Elem>) -> Result<Self> {
        let ring = PolyRing::new(field.clone());
        if !ring.is_monic(f) || f.deg() == 0 {
            return Err(AlgebraError::Precondition("k[X]/(f) needs a monic nonconstant f".into()));
        }
        let d = f.deg();
        let coords = |p: &UniPoly<F::Elem>| -> Vec<F::Elem> {
            let r = ring.rem_monic(p, f).expect("monic");
            (0..d).map(|i| ring.coeff_or_zero(&r, i)).collect()
        };
        let table = (0..d)
            .map(|i| (0..d).map(|j| coords(&ring.monomial(field.one(), i + j))).collect())
            .collect();
        let unit = coords(&ring.one());
        let labels = (0..d).map(|i| if i == 0 { "1".to_string() } else { format!("x^{i}") }).collect();
        Ok(FiniteKAlgebra { field, table, unit, labels })
    }

    /// Direct product `A x B`.
    pub fn product(a: &Self, b: &Self) -> Self {
        let (da, db) = (a.dim(), b.dim());
        let n = da + db;
        let field = a.field.clone();
        let mut table = vec![vec![vec![field.zero(); n]; n]; n];
        for i in 0..da {
            for j in 0..da {
                table[i][j][..da].clone_from_slice(&a.table[i][j]);
            }
        }
        for i in 0..db {
            for j in 0..db {
                table[da + i][da + j][da..].clone_from_slice(&b.table[i][j]);
            }
        }
        let mut unit = a.unit.clone();
        unit.extend(b.unit.iter().cloned());
        let labels = a
            .labels
            .iter()
            .map(|l| format!("({l},0)"))
            .chain(b.labels.iter().map(|l| format!("(0,{l})")))
            .collect();
        FiniteKAlgebra { field, table, unit, labels }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.unit.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &Vec<Vec<Vec<F::Elem>>> {
        &self.table
    }

    pub fn basis(&self, i: usize) -> Vec<F::Elem> {
        let mut v = vec![self.field.zero(); self.dim()];
        v[i] = self.field.one();
        v
    }

    pub fn scalar(&self, c: &F::Elem) -> Vec<F::Elem> {
        self.unit.iter().map(|u| self.field.mul(u, c)).collect()
    }

    pub fn scale(&self, x: &[F::Elem], c: &F::Elem) -> Vec<F::Elem> {
        x.iter().map(|v| self.field.mul(v, c)).collect()
    }

    fn check_laws(&self) -> Result<()> {
        let n = self.dim();
        if self.table.len() != n || self.table.iter().any(|r| r.len() != n || r.iter().any(|c| c.len() != n)) {
            return Err(AlgebraError::Precondition("structure constants have the wrong shape".into()));
        }
        for i in 0..n {
            let bi = self.basis(i);
            if !self.equal(&self.mul(&self.unit, &bi), &bi) {
                return Err(AlgebraError::Precondition(format!("unit law fails on basis vector {i}")));
            }
            for j in 0..n {
                if !self.equal(&self.table[i][j], &self.table[j][i]) {
                    return Err(AlgebraError::Precondition(format!("b{i} b{j} != b{j} b{i}")));
                }
                for l in 0..n {
                    let left = self.mul(&self.table[i][j], &self.basis(l));
                    let right = self.mul(&bi, &self.table[j][l]);
                    if !self.equal(&left, &right) {
                        return Err(AlgebraError::Precondition(format!("associativity fails on ({i},{j},{l})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Matrix of multiplication by `x`; column `j` holds `x b_j`.
    pub fn mult_matrix(&self, x: &[F::Elem]) -> Matrix<F::Elem> {
        let n = self.dim();
        let cols: Vec<Vec<F::Elem>> = (0..n).map(|j| self.mul(&x.to_vec(), &self.basis(j))).collect();
        (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
    }

    /// `dim_k(A x)`.
    pub fn ideal_dim(&self, x: &[F::Elem]) -> usize {
        rank(&self.field, &self.mult_matrix(x))
    }

    pub fn eval_poly(&self, p: &UniPoly<F::Elem>, x: &[F::Elem]) -> Vec<F::Elem> {
        PolyRing::new(self.field.clone()).eval_in(p, self, |c| self.scalar(c), &x.to_vec())
    }

    /// Least-degree monic `m` with `m(s) e = 0`, where `e` is an idempotent
    /// acting as the unit of the ideal `A e`.
    pub fn minimal_polynomial_rel(&self, s: &[F::Elem], e: &[F::Elem]) -> UniPoly<F::Elem> {
        let ring = PolyRing::new(self.field.clone());
        let s = self.mul(&s.to_vec(), &e.to_vec());
        let mut powers: Vec<Vec<F::Elem>> = vec![e.to_vec()];
        loop {
            let next = self.mul(powers.last().unwrap(), &s);
            let a: Matrix<F::Elem> =
                (0..self.dim()).map(|i| powers.iter().map(|p| p[i].clone()).collect()).collect();
            if let Some(c) = solve_field(&self.field, &a, &next) {
                let mut coeffs: Vec<F::Elem> = c.iter().map(|v| self.field.neg(v)).collect();
                coeffs.push(self.field.one());
                return ring.from_coeffs(coeffs);
            }
            powers.push(next);
        }
    }

    /// First linear dependence among `1, s, s^2, ...`.
    pub fn minimal_polynomial(&self, s: &[F::Elem]) -> UniPoly<F::Elem> {
        self.minimal_polynomial_rel(s, &self.unit.clone())
    }

    /// From the minimal polynomial `X^N r(X)`, `r(0) != 0`, rewrites
    /// `s^N (1 - s u) = 0` and returns `e = (s u)^N`, so `A[1/s] = A e`.
    pub fn idempotent_of(&self, s: &[F::Elem]) -> IdempotentOutcome<F::Elem> {
        let ring = PolyRing::new(self.field.clone());
        let m = self.minimal_polynomial(s);
        let n = m.coeffs.iter().take_while(|c| self.field.is_zero(c)).count();
        let r = ring.from_coeffs(m.coeffs[n..].to_vec());
        if r.deg() == 0 {
            return IdempotentOutcome::TrivialLocalization { nilpotency: n };
        }
        let r0_inv = self.field.inv(&r.coeffs[0]).expect("r(0) != 0");
        // r / r(0) = 1 - X P(X) with P = -(r - r(0)) / (X r(0)).
        let p = ring.from_coeffs(r.coeffs[1..].iter().map(|c| self.field.neg(&self.field.mul(c, &r0_inv))).collect());
        let u = self.eval_poly(&p, s);
        let e = self.pow(&self.mul(&s.to_vec(), &u), n as u64);
        IdempotentOutcome::Certificate(IdempotentCertificate { s: s.to_vec(), n, u, e })
    }

    pub fn verify_idempotent(&self, c: &IdempotentCertificate<F::Elem>) -> bool {
        let su = self.mul(&c.s, &c.u);
        let lhs = self.mul(&self.pow(&c.s, c.n as u64), &self.sub(&self.one(), &su));
        self.is_zero(&lhs) && self.equal(&c.e, &self.pow(&su, c.n as u64)) && self.equal(&self.mul(&c.e, &c.e), &c.e)
    }

    /// Monogene separable components of the whole algebra.
    pub fn monogene_components(&self) -> Result<Vec<MonogeneComponent<F::Elem>>> {
        self.monogene_components_of(&self.unit.clone())
    }

    /// Splits `A e` into components `A eps_j = k[y_j] eps_j` with `p_j`
    /// separable and `p_j(0) != 0`. Components are fields when the residue
    /// field has a factorization backend.
    pub fn monogene_components_of(&self, e: &[F::Elem]) -> Result<Vec<MonogeneComponent<F::Elem>>> {
        let mut work = vec![e.to_vec()];
        let mut done = Vec::new();
        while let Some(eps) = work.pop() {
            let r = self.ideal_dim(&eps);
            if r == 0 {
                continue;
            }
            match self.split_or_generate(&eps, r)? {
                Step::Split(parts) => work.extend(parts.into_iter().rev()),
                Step::Generator(z, p) => done.push(self.finish_component(eps, z, p)?),
            }
        }
        Ok(done)
    }

    fn split_or_generate(&self, eps: &[F::Elem], r: usize) -> Result<Step<F::Elem>> {
        let ring = PolyRing::new(self.field.clone());
        for z in self.candidates() {
            let z = self.mul(&z, &eps.to_vec());
            let m = self.minimal_polynomial_rel(&z, eps);
            let sep = if m.deg() == 0 { true } else { ring.is_separable(&m)?.separable };
            if !sep {
                return Err(AlgebraError::NotUnramified(format!(
                    "an element has inseparable minimal polynomial of degree {}",
                    m.deg()
                )));
            }
            if m.deg() <= 1 && r > 1 {
                continue;
            }
            match ring.factor(&m) {
                Ok(fac) if fac.factors.len() >= 2 => {
                    return Ok(Step::Split(self.crt_split(eps, &z, &m, &fac.factors)));
                }
                Ok(_) | Err(PolyError::Unsupported(_)) => {
                    if m.deg() == r {
                        return Ok(Step::Generator(z, m));
                    }
                }
                Err(e) => return Err(e.into()),
            }
        }
        Err(AlgebraError::BoundExceeded("no generator found for a residual component".into()))
    }

    fn crt_split(
        &self,
        eps: &[F::Elem],
        z: &[F::Elem],
        m: &UniPoly<F::Elem>,
        factors: &[(UniPoly<F::Elem>, usize)],
    ) -> Vec<Vec<F::Elem>> {
        let ring = PolyRing::new(self.field.clone());
        factors
            .iter()
            .map(|(g, k)| {
                let gk = ring.pow(g, *k as u64);
                let h = ring.quo(m, &gk).expect("factor divides");
                let (_, _, b) = ring.xgcd_monic(&gk, &h);
                let c = ring.mul(&b, &h);
                self.mul(&self.eval_poly(&c, z), &eps.to_vec())
            })
            .collect()
    }

    fn finish_component(&self, eps: Vec<F::Elem>, z: Vec<F::Elem>, p: UniPoly<F::Elem>) -> Result<MonogeneComponent<F::Elem>> {
        let (y, p) = self.adjust_constant_term(&z, &p, &eps);
        let ring = PolyRing::new(self.field.clone());
        let p0_inv = self.field.inv(&p.coeffs[0]).expect("adjusted constant term");
        let mut h = p.clone();
        h.coeffs[0] = self.field.zero();
        let h = ring.scale(&h, &self.field.neg(&p0_inv));
        let comp = MonogeneComponent { idempotent: eps, generator: y, poly: p, idempotent_poly: h };
        self.check_component(&comp)?;
        Ok(comp)
    }

    /// Makes the constant coefficient nonzero by the shift `y + c eps`,
    /// `p(X - c)`. When `p(0) != 0` the input is returned unchanged.
    pub fn adjust_constant_term(
        &self,
        y: &[F::Elem],
        p: &UniPoly<F::Elem>,
        eps: &[F::Elem],
    ) -> (Vec<F::Elem>, UniPoly<F::Elem>) {
        let ring = PolyRing::new(self.field.clone());
        if !self.field.is_zero(&ring.coeff_or_zero(p, 0)) {
            return (y.to_vec(), p.clone());
        }
        let mut i = 1;
        loop {
            let c = self.field.element_from_index(i);
            i += 1;
            if self.field.is_zero(&c) {
                continue;
            }
            let shifted = ring.compose(p, &ring.linear(&c));
            if !self.field.is_zero(&ring.coeff_or_zero(&shifted, 0)) {
                let y2 = self.add(&y.to_vec(), &self.scale(eps, &c));
                return (y2, shifted);
            }
        }
    }

    pub fn check_component(&self, c: &MonogeneComponent<F::Elem>) -> Result<()> {
        let ring = PolyRing::new(self.field.clone());
        let fail = |m: &str| Err(AlgebraError::CheckFailed(format!("monogene component: {m}")));
        let eps = &c.idempotent;
        if !self.equal(&self.mul(eps, eps), eps) {
            return fail("idempotent is not idempotent");
        }
        if self.field.is_zero(&ring.coeff_or_zero(&c.poly, 0)) {
            return fail("constant coefficient vanishes");
        }
        if !ring.is_separable(&c.poly)?.separable {
            return fail("polynomial is not separable");
        }
        if !self.is_zero(&self.mul(&self.eval_poly(&c.poly, &c.generator), eps)) {
            return fail("p(y) eps != 0");
        }
        if !self.equal(&self.eval_poly(&c.idempotent_poly, &c.generator), eps) {
            return fail("eps is not h(y)");
        }
        let mut powers = vec![eps.clone()];
        for _ in 1..c.poly.deg() {
            powers.push(self.mul(powers.last().unwrap(), &c.generator));
        }
        let span: Matrix<F::Elem> = (0..self.dim()).map(|i| powers.iter().map(|p| p[i].clone()).collect()).collect();
        if rank(&self.field, &span) != self.ideal_dim(eps) || c.poly.deg() != self.ideal_dim(eps) {
            return fail("powers of y do not span A eps");
        }
        Ok(())
    }

    /// Basis vectors, then pairwise sums with small multipliers, then
    /// pseudo-random combinations, then (finite fields) every element.
    fn candidates(&self) -> impl Iterator<Item = Vec<F::Elem>> + '_ {
        let n = self.dim();
        let basis = (0..n).map(move |i| self.basis(i));
        let pairs = (0..n).flat_map(move |i| {
            (i + 1..n).flat_map(move |j| {
                (1..4u64).map(move |c| {
                    let c = self.field.element_from_index(c);
                    self.add(&self.basis(i), &self.scale(&self.basis(j), &c))
                })
            })
        });
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cap = self.field.size().map_or(1 << 16, |q| q.min(1 << 16)) as u64;
        let random: Vec<Vec<F::Elem>> = (0..64)
            .map(|_| (0..n).map(|_| self.field.element_from_index(rng.gen_range(0..cap))).collect())
            .collect();
        let exhaustive_len = match self.field.size() {
            Some(q) if q.checked_pow(n as u32).is_some_and(|t| t <= 1 << 16) => q.pow(n as u32) as u64,
            _ => 0,
        };
        let q = self.field.size().unwrap_or(1) as u64;
        let exhaustive = (0..exhaustive_len).map(move |mut idx| {
            (0..n)
                .map(|_| {
                    let c = self.field.element_from_index(idx % q);
                    idx /= q;
                    c
                })
                .collect()
        });
        basis.chain(pairs).chain(random).chain(exhaustive)
    }
}

enum Step<E> {
    Split(Vec<Vec<E>>),
    Generator(Vec<E>, UniPoly<E>),
}

impl<F: Field> Ring for FiniteKAlgebra<F> {
    type Elem = Vec<F::Elem>;

    fn zero(&self) -> Self::Elem {
        vec![self.field.zero(); self.dim()]
    }

    fn one(&self) -> Self::Elem {
        self.unit.clone()
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.scalar(&self.field.from_int(n))
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.field.add(x, y)).collect()
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.field.neg(x)).collect()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if self.field.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if self.field.is_zero(y) {
                    continue;
                }
                let xy = self.field.mul(x, y);
                for (o, c) in out.iter_mut().zip(&self.table[i][j]) {
                    *o = self.field.add(o, &self.field.mul(&xy, c));
                }
            }
        }
        out
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|x| self.field.is_zero(x))
    }
}

/// `s^N (1 - s u) = 0` and `e = (s u)^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdempotentCertificate<E> {
    pub s: Vec<E>,
    pub n: usize,
    pub u: Vec<E>,
    pub e: Vec<E>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum IdempotentOutcome<E> {
    Certificate(IdempotentCertificate<E>),
    /// `s` is nilpotent of the given index, so `A[1/s]` is the zero ring.
    TrivialLocalization { nilpotency: usize },
}

/// `A eps = k[y] eps` with `p(y) eps = 0`, `p` separable, `p(0) != 0`, and
/// `eps = h(y)` for `h` without constant term.
#[derive(Clone, Debug, PartialEq)]
pub struct MonogeneComponent<E> {
    pub idempotent: Vec<E>,
    pub generator: Vec<E>,
    pub poly: UniPoly<E>,
    pub idempotent_poly: UniPoly<E>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_ring::{Fp, Gf};

    fn poly(p: &Fp, c: &[i64]) -> UniPoly<u64> {
        PolyRing::new(p.clone()).from_coeffs(c.iter().map(|&v| p.from_int(v)).collect())
    }

    #[test]
    fn minimal_polynomial_of_shifted_root() {
        let f5 = Fp::new(5);
        let a = FiniteKAlgebra::monogenic(f5.clone(), &poly(&f5, &[-2, 0, 1])).unwrap();
        let s = a.add(&a.one(), &a.basis(1));
        assert_eq!(a.minimal_polynomial(&s), poly(&f5, &[-1, -2, 1]));
    }

    #[test]
    fn idempotent_of_x_in_cubic() {
        let f5 = Fp::new(5);
        let a = FiniteKAlgebra::monogenic(f5.clone(), &poly(&f5, &[0, 0, -1, 1])).unwrap();
        let IdempotentOutcome::Certificate(c) = a.idempotent_of(&a.basis(1)) else { panic!() };
        assert_eq!(c.n, 2);
        assert_eq!(c.u, a.one());
        assert_eq!(c.e, a.basis(2));
        assert!(a.verify_idempotent(&c));
    }

    #[test]
    fn nilpotent_element_gives_trivial_localization() {
        let f5 = Fp::new(5);
        let a = FiniteKAlgebra::monogenic(f5.clone(), &poly(&f5, &[0, 0, 1])).unwrap();
        assert_eq!(a.idempotent_of(&a.basis(1)), IdempotentOutcome::TrivialLocalization { nilpotency: 2 });
    }

    #[test]
    fn split_quadratic_has_two_components() {
        let f7 = Fp::new(7);
        let a = FiniteKAlgebra::monogenic(f7.clone(), &poly(&f7, &[-2, 0, 1])).unwrap();
        let comps = a.monogene_components().unwrap();
        assert_eq!(comps.len(), 2);
        let total = comps.iter().fold(a.zero(), |acc, c| a.add(&acc, &c.idempotent));
        assert_eq!(total, a.one());
        for c in &comps {
            assert_eq!(c.poly.deg(), 1);
            a.check_component(c).unwrap();
        }
    }

    #[test]
    fn irreducible_quadratic_is_one_field() {
        let f5 = Fp::new(5);
        let a = FiniteKAlgebra::monogenic(f5.clone(), &poly(&f5, &[-2, 0, 1])).unwrap();
        let comps = a.monogene_components().unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].poly.deg(), 2);
    }

    #[test]
    fn dual_numbers_are_ramified() {
        let f5 = Fp::new(5);
        let a = FiniteKAlgebra::monogenic(f5.clone(), &poly(&f5, &[0, 0, 1])).unwrap();
        assert!(matches!(a.monogene_components(), Err(AlgebraError::NotUnramified(_))));
    }

    #[test]
    fn zero_constant_term_is_shifted() {
        let f5 = Fp::new(5);
        let a = FiniteKAlgebra::monogenic(f5.clone(), &poly(&f5, &[0, 1])).unwrap();
        let (y, p) = a.adjust_constant_term(&a.zero(), &poly(&f5, &[0, 1]), &a.one());
        assert_eq!(p, poly(&f5, &[-1, 1]));
        assert_eq!(y, a.one());
    }

    #[test]
    fn cube_of_f2_needs_a_non_basis_splitter() {
        let f2 = Fp::new(2);
        let k = FiniteKAlgebra::monogenic(f2.clone(), &poly(&f2, &[0, 1])).unwrap();
        let a = FiniteKAlgebra::product(&FiniteKAlgebra::product(&k, &k), &k);
        let comps = a.monogene_components().unwrap();
        assert_eq!(comps.len(), 3);
        for c in &comps {
            a.check_component(c).unwrap();
        }
    }

    #[test]
    fn components_over_extension_field() {
        let f2 = Fp::new(2);
        let gf4 = Gf::new(f2.clone(), poly(&f2, &[1, 1, 1]));
        let ring = PolyRing::new(gf4.clone());
        // X^2 + X + 1 splits over F_4.
        let f = ring.from_coeffs(vec![gf4.one(), gf4.one(), gf4.one()]);
        let a = FiniteKAlgebra::monogenic(gf4, &f).unwrap();
        assert_eq!(a.monogene_components().unwrap().len(), 2);
    }

    #[test]
    fn rejects_inconsistent_table() {
        let f3 = Fp::new(3);
        let a = FiniteKAlgebra::monogenic(f3.clone(), &poly(&f3, &[0, 0, 1])).unwrap();
        let mut table = a.table().clone();
        table[0][1] = vec![1, 1];
        assert!(FiniteKAlgebra::new(f3, a.labels().to_vec(), table, a.one()).is_err());
    }
}
