//! Finite algebras over a local ring, given by module generators and
//! structure constants, and the determinant tricks that lift statements
//! about `B/mB` back to `B`.

use crate::base_ring::linalg::{adjugate, det, solve_and_syzygies, solve_field, Matrix};
use crate::error::{AlgebraError, Result};
use crate::poly::{PolyRing, UniPoly};
use crate::residual::FiniteKAlgebra;
use crate::ring::{LocalRing, Pid, Ring};

/// An `R`-algebra spanned by `b_1..b_m`; `table[i][j]` holds the
/// coefficients of `b_i b_j`. All constructors produce free algebras, so
/// coordinates are unique.
#[derive(Clone, Debug)]
pub struct FiniteRAlgebra<R: Ring> {
    base: R,
    table: Vec<Vec<Vec<R::Elem>>>,
    unit: Vec<R::Elem>,
    labels: Vec<String>,
}

impl<R: Pid> FiniteRAlgebra<R> {
    pub fn new(base: R, labels: Vec<String>, table: Vec<Vec<Vec<R::Elem>>>, unit: Vec<R::Elem>) -> Result<Self> {
        let alg = FiniteRAlgebra { base, table, unit, labels };
        alg.check_laws()?;
        Ok(alg)
    }

    /// `R[X]/(q)` with basis `1, x, .., x^{d-1}`.
    pub fn monogenic(base: R, q: &UniPoly<R::Elem>) -> Result<Self> {
        let ring = PolyRing::new(base.clone());
        if !ring.is_monic(q) || q.deg() == 0 {
            return Err(AlgebraError::Precondition("R[X]/(q) needs a monic nonconstant q".into()));
        }
        let d = q.deg();
        let coords = |p: &UniPoly<R::Elem>| -> Vec<R::Elem> {
            let r = ring.rem_monic(p, q).expect("monic");
            (0..d).map(|i| ring.coeff_or_zero(&r, i)).collect()
        };
        let table = (0..d)
            .map(|i| (0..d).map(|j| coords(&ring.monomial(base.one(), i + j))).collect())
            .collect();
        let unit = coords(&ring.one());
        let labels = (0..d).map(|i| if i == 0 { "1".to_string() } else { format!("x^{i}") }).collect();
        Ok(FiniteRAlgebra { base, table, unit, labels })
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.unit.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn basis(&self, i: usize) -> Vec<R::Elem> {
        let mut v = vec![self.base.zero(); self.dim()];
        v[i] = self.base.one();
        v
    }

    pub fn scalar(&self, c: &R::Elem) -> Vec<R::Elem> {
        self.unit.iter().map(|u| self.base.mul(u, c)).collect()
    }

    pub fn scale(&self, x: &[R::Elem], c: &R::Elem) -> Vec<R::Elem> {
        x.iter().map(|v| self.base.mul(v, c)).collect()
    }

    fn check_laws(&self) -> Result<()> {
        let n = self.dim();
        if self.table.len() != n || self.table.iter().any(|r| r.len() != n || r.iter().any(|c| c.len() != n)) {
            return Err(AlgebraError::Precondition("structure constants have the wrong shape".into()));
        }
        for i in 0..n {
            let bi = self.basis(i);
            if !self.equal(&self.mul(&self.unit, &bi), &bi) {
                return Err(AlgebraError::Precondition(format!("unit law fails on generator {i}")));
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

    /// Column `j` holds the coordinates of `x b_j`.
    pub fn mult_matrix(&self, x: &[R::Elem]) -> Matrix<R::Elem> {
        let n = self.dim();
        let cols: Vec<Vec<R::Elem>> = (0..n).map(|j| self.mul(&x.to_vec(), &self.basis(j))).collect();
        (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
    }

    pub fn eval_poly(&self, p: &UniPoly<R::Elem>, x: &[R::Elem]) -> Vec<R::Elem> {
        PolyRing::new(self.base.clone()).eval_in(p, self, |c| self.scalar(c), &x.to_vec())
    }

    /// `det(X - M_y)`; annihilates `y` by Cayley-Hamilton.
    pub fn char_poly(&self, y: &[R::Elem]) -> UniPoly<R::Elem> {
        let ring = PolyRing::new(self.base.clone());
        let m = self.mult_matrix(y);
        let n = self.dim();
        let xm: Matrix<UniPoly<R::Elem>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = ring.constant(self.base.neg(&m[i][j]));
                        if i == j { ring.add(&c, &ring.x()) } else { c }
                    })
                    .collect()
            })
            .collect();
        det(&ring, &xm)
    }

    /// Solves `y^d = sum_{i<d} c_i y^i` over `R` and returns the monic
    /// `X^d - sum c_i X^i`.
    pub fn monic_from_generation(&self, y: &[R::Elem], d: usize) -> Result<UniPoly<R::Elem>> {
        let ring = PolyRing::new(self.base.clone());
        let mut powers = vec![self.one()];
        for _ in 0..d {
            powers.push(self.mul(powers.last().unwrap(), &y.to_vec()));
        }
        let target = powers.pop().unwrap();
        let a: Matrix<R::Elem> = (0..self.dim()).map(|i| powers.iter().map(|p| p[i].clone()).collect()).collect();
        let sol = solve_and_syzygies(&self.base, &a, &target).map_err(|_| {
            AlgebraError::Precondition(format!("1, y, .., y^{} do not generate R[y]", d.saturating_sub(1)))
        })?;
        let mut coeffs: Vec<R::Elem> = sol.x.iter().map(|c| self.base.neg(c)).collect();
        coeffs.push(self.base.one());
        let q = ring.from_coeffs(coeffs);
        debug_assert!(self.is_zero(&self.eval_poly(&q, y)));
        Ok(q)
    }
}

impl<R: LocalRing> FiniteRAlgebra<R> {
    pub fn residue_elem(&self, x: &[R::Elem]) -> Vec<<R::Residue as Ring>::Elem> {
        x.iter().map(|c| self.base.residue(c)).collect()
    }

    pub fn lift_elem(&self, a: &[<R::Residue as Ring>::Elem]) -> Vec<R::Elem> {
        a.iter().map(|c| self.base.lift(c)).collect()
    }

    pub fn residue_poly(&self, p: &UniPoly<R::Elem>) -> UniPoly<<R::Residue as Ring>::Elem> {
        PolyRing::new(self.base.residue_field().clone()).from_coeffs(p.coeffs.iter().map(|c| self.base.residue(c)).collect())
    }

    pub fn lift_poly(&self, p: &UniPoly<<R::Residue as Ring>::Elem>) -> UniPoly<R::Elem> {
        PolyRing::new(self.base.clone()).from_coeffs(p.coeffs.iter().map(|c| self.base.lift(c)).collect())
    }

    /// `B/mB`.
    pub fn residue_algebra(&self) -> Result<FiniteKAlgebra<R::Residue>> {
        let table = self
            .table
            .iter()
            .map(|row| row.iter().map(|c| self.residue_elem(c)).collect())
            .collect();
        FiniteKAlgebra::new(
            self.base.residue_field().clone(),
            self.labels.clone(),
            table,
            self.residue_elem(&self.unit),
        )
    }

    /// Writes `e b_j = q_j(y) + sum_l mu_jl b_l` with `mu_jl` in `m`, where
    /// `e = e_poly(y)`. The `q_j` come from a residual solve in powers of `y`.
    pub fn nakayama_witness(&self, e_poly: &UniPoly<R::Elem>, y: &[R::Elem]) -> Result<NakayamaWitness<R::Elem>> {
        let k = self.base.residue_field();
        let kring = PolyRing::new(k.clone());
        let a = self.residue_algebra()?;
        let m = self.dim();
        let e = self.eval_poly(e_poly, y);
        let ybar = self.residue_elem(y);
        let mut powers = vec![a.one()];
        for _ in 1..m {
            powers.push(a.mul(powers.last().unwrap(), &ybar));
        }
        let pm: Matrix<_> = (0..m).map(|i| powers.iter().map(|p| p[i].clone()).collect()).collect();
        let mut q = Vec::with_capacity(m);
        let mut mu = Vec::with_capacity(m);
        for j in 0..m {
            let ebj = self.mul(&e, &self.basis(j));
            let c = solve_field(k, &pm, &self.residue_elem(&ebj))
                .ok_or_else(|| AlgebraError::Precondition(format!("residually e b_{j} is not in k[y]")))?;
            let qj = self.lift_poly(&kring.from_coeffs(c));
            let disc = self.sub(&ebj, &self.eval_poly(&qj, y));
            if disc.iter().any(|c| !self.base.in_maximal(c)) {
                return Err(AlgebraError::Precondition("Nakayama discrepancy is not in m".into()));
            }
            q.push(qj);
            mu.push(disc);
        }
        Ok(NakayamaWitness { e_poly: e_poly.clone(), y: y.to_vec(), q, mu })
    }

    pub fn check_witness(&self, w: &NakayamaWitness<R::Elem>) -> Result<()> {
        let e = self.eval_poly(&w.e_poly, &w.y);
        for j in 0..self.dim() {
            let rhs = self.add(&self.eval_poly(&w.q[j], &w.y), &w.mu[j]);
            if !self.equal(&self.mul(&e, &self.basis(j)), &rhs) {
                return Err(AlgebraError::CheckFailed(format!("Nakayama identity fails for b_{j}")));
            }
            if w.mu[j].iter().any(|c| !self.base.in_maximal(c)) {
                return Err(AlgebraError::CheckFailed(format!("mu row {j} leaves m")));
            }
        }
        Ok(())
    }
}

impl<R: Pid> FiniteRAlgebra<R> {
    /// `P(Y) = det(e(Y) delta - mu)` and `W_j = sum_l adj_jl q_l`, so that
    /// `P(y) b_j = W_j(y)`: inverting `P(y)` makes `B` equal to `R[y]`.
    pub fn nakayama_localizer(&self, w: &NakayamaWitness<R::Elem>) -> NakayamaLocalizer<R::Elem> {
        let ring = PolyRing::new(self.base.clone());
        let m = self.dim();
        let mat: Matrix<UniPoly<R::Elem>> = (0..m)
            .map(|j| {
                (0..m)
                    .map(|l| {
                        let c = ring.constant(self.base.neg(&w.mu[j][l]));
                        if j == l { ring.add(&c, &w.e_poly) } else { c }
                    })
                    .collect()
            })
            .collect();
        let p = det(&ring, &mat);
        let adj = adjugate(&ring, &mat);
        let w_polys = adj
            .iter()
            .map(|row| row.iter().zip(&w.q).fold(ring.zero(), |acc, (a, q)| ring.add(&acc, &ring.mul(a, q))))
            .collect();
        NakayamaLocalizer { p, w: w_polys }
    }

    pub fn check_localizer(&self, y: &[R::Elem], loc: &NakayamaLocalizer<R::Elem>) -> Result<()> {
        let py = self.eval_poly(&loc.p, y);
        for (j, wj) in loc.w.iter().enumerate() {
            if !self.equal(&self.mul(&py, &self.basis(j)), &self.eval_poly(wj, y)) {
                return Err(AlgebraError::CheckFailed(format!("P(y) b_{j} != W_{j}(y)")));
            }
        }
        Ok(())
    }

    /// `sum_j x_j W_j`, so that `P(y) x = V(y)`.
    pub fn localizer_combination(&self, loc: &NakayamaLocalizer<R::Elem>, x: &[R::Elem]) -> UniPoly<R::Elem> {
        let ring = PolyRing::new(self.base.clone());
        x.iter().zip(&loc.w).fold(ring.zero(), |acc, (c, w)| ring.add(&acc, &ring.scale(w, c)))
    }
}

impl<R: Ring> Ring for FiniteRAlgebra<R> {
    type Elem = Vec<R::Elem>;

    fn zero(&self) -> Self::Elem {
        vec![self.base.zero(); self.unit.len()]
    }

    fn one(&self) -> Self::Elem {
        self.unit.clone()
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        let c = self.base.from_int(n);
        self.unit.iter().map(|u| self.base.mul(u, &c)).collect()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if self.base.is_zero(y) {
                    continue;
                }
                let xy = self.base.mul(x, y);
                for (o, c) in out.iter_mut().zip(&self.table[i][j]) {
                    if !self.base.is_zero(c) {
                        *o = self.base.add(o, &self.base.mul(&xy, c));
                    }
                }
            }
        }
        out
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|x| self.base.is_zero(x))
    }
}

/// `e b_j = q_j(y) + sum_l mu_jl b_l` with `e = e_poly(y)` and `mu` over `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct NakayamaWitness<E> {
    pub e_poly: UniPoly<E>,
    pub y: Vec<E>,
    pub q: Vec<UniPoly<E>>,
    pub mu: Matrix<E>,
}

/// `P(y) b_j = W_j(y)` for every generator.
#[derive(Clone, Debug, PartialEq)]
pub struct NakayamaLocalizer<E> {
    pub p: UniPoly<E>,
    pub w: Vec<UniPoly<E>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_ring::{Fp, Integers, Zloc};
    use num_bigint::BigInt;

    fn zloc(p: i64) -> Zloc {
        Zloc::new(Integers, BigInt::from(p))
    }

    fn poly(r: &Zloc, c: &[i64]) -> UniPoly<<Zloc as Ring>::Elem> {
        PolyRing::new(r.clone()).from_coeffs(c.iter().map(|&v| r.from_int(v)).collect())
    }

    #[test]
    fn residue_algebra_reduces_constants() {
        let r = zloc(5);
        let b = FiniteRAlgebra::monogenic(r.clone(), &poly(&r, &[-5, -1, 1])).unwrap();
        let a = b.residue_algebra().unwrap();
        let f5 = Fp::new(5);
        let expected = FiniteKAlgebra::monogenic(f5.clone(), &PolyRing::new(f5).from_coeffs(vec![0, 4, 1])).unwrap();
        assert_eq!(a.table(), expected.table());
    }

    #[test]
    fn witness_is_exact_when_y_generates() {
        let r = zloc(5);
        let b = FiniteRAlgebra::monogenic(r.clone(), &poly(&r, &[-5, -1, 1])).unwrap();
        let w = b.nakayama_witness(&poly(&r, &[1]), &b.basis(1)).unwrap();
        assert_eq!(w.q, vec![poly(&r, &[1]), poly(&r, &[0, 1])]);
        assert!(w.mu.iter().flatten().all(|c| r.is_zero(c)));
        b.check_witness(&w).unwrap();
    }

    #[test]
    fn witness_with_discrepancy() {
        // y = 6x is residually x, so q_2 = Y and x - 6x = -5x lands in mu.
        let r = zloc(5);
        let b = FiniteRAlgebra::monogenic(r.clone(), &poly(&r, &[-2, 0, 1])).unwrap();
        let y = b.scale(&b.basis(1), &r.from_int(6));
        let w = b.nakayama_witness(&poly(&r, &[1]), &y).unwrap();
        assert!(w.mu.iter().flatten().any(|c| !r.is_zero(c)));
        b.check_witness(&w).unwrap();
        let loc = b.nakayama_localizer(&w);
        b.check_localizer(&y, &loc).unwrap();
    }

    #[test]
    fn localizer_of_scalar_discrepancy() {
        let r = zloc(5);
        let b = FiniteRAlgebra::monogenic(r.clone(), &poly(&r, &[-2, 0, 1])).unwrap();
        let five = r.from_int(5);
        let w = NakayamaWitness {
            e_poly: poly(&r, &[1]),
            y: b.basis(1),
            q: vec![poly(&r, &[-4]), poly(&r, &[0, -4])],
            mu: vec![vec![five.clone(), r.zero()], vec![r.zero(), five]],
        };
        b.check_witness(&w).unwrap();
        let loc = b.nakayama_localizer(&w);
        assert_eq!(loc.p, poly(&r, &[16]));
        b.check_localizer(&w.y, &loc).unwrap();
    }

    #[test]
    fn one_by_one_localizer() {
        let r = zloc(5);
        let b = FiniteRAlgebra::monogenic(r.clone(), &poly(&r, &[0, 1])).unwrap();
        let w = b.nakayama_witness(&poly(&r, &[1]), &b.zero()).unwrap();
        assert_eq!(w.q, vec![poly(&r, &[1])]);
        assert_eq!(b.nakayama_localizer(&w).p, poly(&r, &[1]));
    }

    #[test]
    fn monic_relations_from_generation() {
        let r = zloc(5);
        for q in [&[0, -1, 1][..], &[-5, -1, 1]] {
            let q = poly(&r, q);
            let b = FiniteRAlgebra::monogenic(r.clone(), &q).unwrap();
            assert_eq!(b.monic_from_generation(&b.basis(1), 2).unwrap(), q);
            assert_eq!(b.char_poly(&b.basis(1)), q);
        }
    }

    #[test]
    fn char_poly_annihilates() {
        let r = zloc(7);
        let b = FiniteRAlgebra::monogenic(r.clone(), &poly(&r, &[1, 3, 0, 1])).unwrap();
        let y = b.add(&b.basis(2), &b.scale(&b.basis(1), &r.from_int(2)));
        let cp = b.char_poly(&y);
        assert_eq!(cp.deg(), 3);
        assert!(b.is_zero(&b.eval_poly(&cp, &y)));
    }
}
