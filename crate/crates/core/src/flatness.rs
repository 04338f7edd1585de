//! Equational flatness and the flat + unramified route to étale.

use std::fmt::Debug;

use crate::base_ring::linalg::{mat_vec, solve_and_syzygies, Matrix};
use crate::error::{AlgebraError, Result};
use crate::presentation::{EModel, FPAlgebra, IsoCertificate, LocElem, MonicLocalization};
use crate::ring::{LocalRing, Pid, Ring};
use crate::standardize::{
    check_relation_matrix, split_over_maximal, split_with_matrix, standardize_local, Mode, Splitting,
    StandardizationResult, Surjection,
};

/// An `A`-module with decidable equality.
pub trait Module<A: Ring> {
    type Elem: Clone + Debug;

    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, c: &A::Elem, x: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.scale(&self.scalars().neg(&self.scalars().one()), b))
    }

    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.is_zero(&self.sub(a, b))
    }

    /// `sum c_i x_i`.
    fn combine(&self, c: &[A::Elem], x: &[Self::Elem]) -> Self::Elem {
        c.iter().zip(x).fold(self.zero(), |acc, (c, x)| self.add(&acc, &self.scale(c, x)))
    }

    fn scalars(&self) -> &A;
}

/// `0 -> L -> M -> N -> 0` with the solvers the injectivity argument needs.
pub trait ExactSequence<A: Ring> {
    type L: Module<A>;
    type M: Module<A>;
    type N: Module<A>;

    fn l(&self) -> &Self::L;
    fn m(&self) -> &Self::M;
    fn n(&self) -> &Self::N;
    fn u(&self, x: &<Self::L as Module<A>>::Elem) -> <Self::M as Module<A>>::Elem;
    fn v(&self, x: &<Self::M as Module<A>>::Elem) -> <Self::N as Module<A>>::Elem;
    /// Some `m` with `v(m) = n`.
    fn lift_v(&self, n: &<Self::N as Module<A>>::Elem) -> Result<<Self::M as Module<A>>::Elem>;
    /// The `l` with `u(l) = m`, for `m` in the kernel of `v`.
    fn lift_u(&self, m: &<Self::M as Module<A>>::Elem) -> Result<<Self::L as Module<A>>::Elem>;
}

/// For `r w = 0` with `r` over `A` and `w` over `N`: `p` over `A` and `n`
/// over `N` with `r p = 0` and `p n = w`.
pub trait FlatnessWitness<A: Ring, N: Module<A>> {
    fn witness(&self, r: &[A::Elem], w: &[N::Elem]) -> Result<(Matrix<A::Elem>, Vec<N::Elem>)>;
}

/// `A^rank`.
#[derive(Clone, Debug)]
pub struct FreeModule<A: Ring> {
    pub ring: A,
    pub rank: usize,
}

impl<A: Ring> Module<A> for FreeModule<A> {
    type Elem = Vec<A::Elem>;

    fn zero(&self) -> Self::Elem {
        vec![self.ring.zero(); self.rank]
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.ring.add(x, y)).collect()
    }

    fn scale(&self, c: &A::Elem, x: &Self::Elem) -> Self::Elem {
        x.iter().map(|v| self.ring.mul(c, v)).collect()
    }

    fn is_zero(&self, x: &Self::Elem) -> bool {
        x.iter().all(|v| self.ring.is_zero(v))
    }

    fn scalars(&self) -> &A {
        &self.ring
    }
}

/// The columns of `p` generate the syzygies of `r`; `n` solves `p n = w`
/// coordinatewise.
pub fn free_flatness_witness<A: Pid>(ring: &A, r: &[A::Elem], w: &[Vec<A::Elem>]) -> Result<(Matrix<A::Elem>, Vec<Vec<A::Elem>>)> {
    let g = r.len();
    let rank = w.first().map_or(0, |x| x.len());
    let row = vec![r.to_vec()];
    let syz = solve_and_syzygies(ring, &row, &[ring.zero()])?.syzygies;
    let k = syz.len();
    let p: Matrix<A::Elem> = (0..g).map(|i| syz.iter().map(|col| col[i].clone()).collect()).collect();
    let mut n = vec![vec![ring.zero(); rank]; k];
    for t in 0..rank {
        let wt: Vec<A::Elem> = w.iter().map(|x| x[t].clone()).collect();
        let sol = if k == 0 {
            if wt.iter().all(|v| ring.is_zero(v)) {
                Vec::new()
            } else {
                return Err(AlgebraError::NoSolution);
            }
        } else {
            solve_and_syzygies(ring, &p, &wt)?.x
        };
        for (kk, v) in sol.into_iter().enumerate() {
            n[kk][t] = v;
        }
    }
    Ok((p, n))
}

impl<A: Pid> FlatnessWitness<A, FreeModule<A>> for FreeModule<A> {
    fn witness(&self, r: &[A::Elem], w: &[Vec<A::Elem>]) -> Result<(Matrix<A::Elem>, Vec<Vec<A::Elem>>)> {
        free_flatness_witness(&self.ring, r, w)
    }
}

/// `0 -> A^a -> A^b -> A^c -> 0` split by a unimodular `U`: `u` is the
/// first `a` columns of `U` and `v` the last `c` rows of `U^-1`.
#[derive(Clone, Debug)]
pub struct FreeSequence<A: Ring> {
    pub l: FreeModule<A>,
    pub m: FreeModule<A>,
    pub n: FreeModule<A>,
    pub u: Matrix<A::Elem>,
    pub v: Matrix<A::Elem>,
    basis: Matrix<A::Elem>,
}

impl<A: Pid> FreeSequence<A> {
    pub fn from_unimodular(ring: A, unimodular: Matrix<A::Elem>, inverse: Matrix<A::Elem>, a: usize) -> Result<Self> {
        let b = unimodular.len();
        if a > b {
            return Err(AlgebraError::Precondition("submodule rank exceeds the ambient rank".into()));
        }
        let prod = crate::base_ring::linalg::mat_mul(&ring, &inverse, &unimodular);
        let ok = prod
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, x)| ring.equal(x, &if i == j { ring.one() } else { ring.zero() })));
        if !ok {
            return Err(AlgebraError::Precondition("the given inverse is wrong".into()));
        }
        let u = unimodular.iter().map(|row| row[..a].to_vec()).collect();
        let v = inverse[a..].to_vec();
        Ok(FreeSequence {
            l: FreeModule { ring: ring.clone(), rank: a },
            m: FreeModule { ring: ring.clone(), rank: b },
            n: FreeModule { ring, rank: b - a },
            u,
            v,
            basis: unimodular,
        })
    }
}

impl<A: Pid> ExactSequence<A> for FreeSequence<A> {
    type L = FreeModule<A>;
    type M = FreeModule<A>;
    type N = FreeModule<A>;

    fn l(&self) -> &FreeModule<A> {
        &self.l
    }

    fn m(&self) -> &FreeModule<A> {
        &self.m
    }

    fn n(&self) -> &FreeModule<A> {
        &self.n
    }

    fn u(&self, x: &Vec<A::Elem>) -> Vec<A::Elem> {
        mat_vec(&self.l.ring, &self.u, x)
    }

    fn v(&self, x: &Vec<A::Elem>) -> Vec<A::Elem> {
        mat_vec(&self.l.ring, &self.v, x)
    }

    fn lift_v(&self, n: &Vec<A::Elem>) -> Result<Vec<A::Elem>> {
        let ring = &self.l.ring;
        let mut padded = vec![ring.zero(); self.l.rank];
        padded.extend(n.iter().cloned());
        Ok(mat_vec(ring, &self.basis, &padded))
    }

    fn lift_u(&self, m: &Vec<A::Elem>) -> Result<Vec<A::Elem>> {
        Ok(solve_and_syzygies(&self.l.ring, &self.u, m)?.x)
    }
}

/// From `u(x) = r m` with `r` over `J`, returns `l` with `x = r l`.
pub fn injectivity_witness<A: Ring, S: ExactSequence<A>, W: FlatnessWitness<A, S::N>>(
    seq: &S,
    flat: &W,
    r: &[A::Elem],
    m: &[<S::M as Module<A>>::Elem],
    x: &<S::L as Module<A>>::Elem,
) -> Result<Vec<<S::L as Module<A>>::Elem>> {
    let (lm, mm, nm) = (seq.l(), seq.m(), seq.n());
    let ring = lm.scalars();
    if !mm.equal(&seq.u(x), &mm.combine(r, m)) {
        return Err(AlgebraError::Precondition("u(x) != r m".into()));
    }
    let vm: Vec<_> = m.iter().map(|mi| seq.v(mi)).collect();
    let (p, n) = flat.witness(r, &vm)?;
    let cols = p.first().map_or(0, |row| row.len());
    for k in 0..cols {
        let rp = r.iter().zip(&p).fold(ring.zero(), |acc, (ri, row)| ring.add(&acc, &ring.mul(ri, &row[k])));
        if !ring.is_zero(&rp) {
            return Err(AlgebraError::CheckFailed("r p != 0".into()));
        }
    }
    for (row, w) in p.iter().zip(&vm) {
        if !nm.equal(&nm.combine(row, &n), w) {
            return Err(AlgebraError::CheckFailed("p n != v(m)".into()));
        }
    }
    let m1: Vec<_> = n.iter().map(|nk| seq.lift_v(nk)).collect::<Result<_>>()?;
    let l: Vec<_> = m
        .iter()
        .zip(&p)
        .map(|(mi, row)| seq.lift_u(&mm.sub(mi, &mm.combine(row, &m1))))
        .collect::<Result<_>>()?;
    if !lm.equal(x, &lm.combine(r, &l)) {
        return Err(AlgebraError::CheckFailed("x != r l".into()));
    }
    Ok(l)
}

/// A presented algebra viewed as a module over its base.
#[derive(Clone, Debug)]
pub struct AlgebraModule<R: Ring>(pub MonicLocalization<R>);

impl<R: Pid> Module<R> for AlgebraModule<R> {
    type Elem = LocElem<R::Elem>;

    fn zero(&self) -> Self::Elem {
        self.0.zero()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.0.add(a, b)
    }

    fn scale(&self, c: &R::Elem, x: &Self::Elem) -> Self::Elem {
        self.0.scale(x, c)
    }

    fn is_zero(&self, x: &Self::Elem) -> bool {
        self.0.is_zero(x)
    }

    fn scalars(&self) -> &R {
        self.0.base()
    }
}

/// `R[X]/(Q)[1/H]` is flat as a localization of the free `R[X]/(Q)`: a
/// relation is moved to a common denominator, cleared by `H^d`, solved in
/// the free module and divided back.
impl<R: Pid> FlatnessWitness<R, AlgebraModule<R>> for AlgebraModule<R> {
    fn witness(&self, r: &[R::Elem], w: &[LocElem<R::Elem>]) -> Result<(Matrix<R::Elem>, Vec<LocElem<R::Elem>>)> {
        let alg = &self.0;
        let top = w.iter().map(|x| x.pow).max().unwrap_or(0);
        let shift = alg.h_power(alg.deg());
        let cleared: Vec<Vec<R::Elem>> = w
            .iter()
            .map(|x| alg.mul_num(&shift, &alg.mul_num(&alg.h_power(top - x.pow), &x.num)))
            .collect();
        let (p, n) = free_flatness_witness(alg.base(), r, &cleared)?;
        let pow = top + alg.deg();
        let n = n.into_iter().map(|num| LocElem { num, pow }).collect();
        Ok((p, n))
    }
}

/// `0 -> I -> S -> T -> 0` for a surjection with known kernel generators.
pub struct KernelSequence<'a, R: Ring> {
    surj: &'a Surjection<R>,
    source: AlgebraModule<R>,
    target: AlgebraModule<R>,
}

impl<'a, R: Pid> KernelSequence<'a, R> {
    pub fn new(surj: &'a Surjection<R>) -> Self {
        KernelSequence { surj, source: AlgebraModule(surj.source.clone()), target: AlgebraModule(surj.target.clone()) }
    }
}

impl<R: Pid> ExactSequence<R> for KernelSequence<'_, R> {
    type L = AlgebraModule<R>;
    type M = AlgebraModule<R>;
    type N = AlgebraModule<R>;

    fn l(&self) -> &AlgebraModule<R> {
        &self.source
    }

    fn m(&self) -> &AlgebraModule<R> {
        &self.source
    }

    fn n(&self) -> &AlgebraModule<R> {
        &self.target
    }

    fn u(&self, x: &LocElem<R::Elem>) -> LocElem<R::Elem> {
        x.clone()
    }

    fn v(&self, x: &LocElem<R::Elem>) -> LocElem<R::Elem> {
        self.surj.image(x)
    }

    fn lift_v(&self, n: &LocElem<R::Elem>) -> Result<LocElem<R::Elem>> {
        Ok(self.surj.lift(n))
    }

    fn lift_u(&self, m: &LocElem<R::Elem>) -> Result<LocElem<R::Elem>> {
        if !self.surj.target.is_zero(&self.surj.image(m)) {
            return Err(AlgebraError::CheckFailed("element is not in the kernel".into()));
        }
        Ok(m.clone())
    }
}

/// `c = M c` with `M` over `m`, from the injectivity of `I/mI -> S/mS`.
pub fn flat_relation_matrix<R: LocalRing>(surj: &Surjection<R>, kernel: &[LocElem<R::Elem>]) -> Result<Matrix<LocElem<R::Elem>>> {
    let s = &surj.source;
    let seq = KernelSequence::new(surj);
    let flat = AlgebraModule(surj.target.clone());
    let pis = s.base().maximal_generators();
    let mut matrix = Vec::with_capacity(kernel.len());
    for c in kernel {
        let parts = split_over_maximal(s, c)?;
        let l = injectivity_witness(&seq, &flat, &pis, &parts, c)?;
        let mut row = vec![s.zero(); kernel.len()];
        for (pi, li) in pis.iter().zip(&l) {
            let lambda = s.ideal_membership(li, kernel)?;
            for (rj, lj) in row.iter_mut().zip(&lambda) {
                *rj = s.add(rj, &s.scale(lj, pi));
            }
        }
        matrix.push(row);
    }
    check_relation_matrix(s, kernel, &matrix)?;
    Ok(matrix)
}

pub fn flat_splitting<R: LocalRing>(surj: &Surjection<R>) -> Result<Splitting<R>> {
    let kernel = surj.kernel_generators();
    let matrix = flat_relation_matrix(surj, &kernel)?;
    split_with_matrix(surj, kernel, matrix)
}

/// Rejects relations whose coefficients all lie in `m`: then `pi g = 0`
/// with `g` nonzero, and no factorization through `R` exists.
pub fn flat_precheck<R: LocalRing>(base: &R, fp: &FPAlgebra<R::Elem>, labels: &[String]) -> Result<()> {
    for (i, rel) in fp.relations.iter().enumerate() {
        if rel.is_zero_poly() || rel.terms.values().any(|c| !base.in_maximal(c)) {
            continue;
        }
        let relation = labels.get(i).cloned().unwrap_or_else(|| format!("#{i}"));
        return Err(AlgebraError::FlatnessWitness {
            relation,
            reason: "every coefficient lies in the maximal ideal, so a nonzero element is killed by a non-unit".into(),
        });
    }
    Ok(())
}

/// The flat + unramified pipeline.
pub fn etale_from_flat_unramified<R: LocalRing>(model: &EModel<R>) -> Result<StandardizationResult<R>> {
    standardize_local(model, Mode::FlatUnramified, None)
}

/// For each branch, `S_flat[1/f] -> E[1/s] -> S_etale[1/f]`.
pub fn compare_results<R: LocalRing>(
    flat: &StandardizationResult<R>,
    etale: &StandardizationResult<R>,
) -> Result<Vec<IsoCertificate<R::Elem>>> {
    if flat.branches.len() != etale.branches.len() {
        return Err(AlgebraError::CheckFailed("branch counts differ".into()));
    }
    let base = flat.model.loc.base();
    flat.branches
        .iter()
        .zip(&etale.branches)
        .map(|(fb, eb)| {
            let (Some(fs), Some(es)) = (&fb.splitting, &eb.splitting) else {
                return Err(AlgebraError::CheckFailed("missing splitting".into()));
            };
            let a = fs.presentation.algebra(base)?;
            let c = es.presentation.algebra(base)?;
            if !fs.target.same_presentation(&es.target) {
                return Err(AlgebraError::CheckFailed("branches present different localizations".into()));
            }
            let iso = fs.iso.compose(&es.iso.inverse(), &a, &fs.target, &c);
            iso.verify(&a, &c)?;
            Ok(iso)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_ring::{Fp, Integers, Zloc};
    use num_bigint::BigInt;

    fn zloc() -> Zloc {
        Zloc::new(Integers, BigInt::from(5))
    }

    #[test]
    fn zero_row_gives_identity() {
        let r = zloc();
        let w = vec![vec![r.from_int(3)], vec![r.from_int(7)]];
        let (p, n) = free_flatness_witness(&r, &[r.zero(), r.zero()], &w).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p[0].len(), 2);
        let m = FreeModule { ring: r.clone(), rank: 1 };
        for (row, wi) in p.iter().zip(&w) {
            assert!(m.equal(&m.combine(row, &n), wi));
        }
    }

    #[test]
    fn syzygy_of_five_minus_five() {
        let r = zloc();
        let a = r.from_int(2);
        let (p, n) = free_flatness_witness(&r, &[r.from_int(5), r.from_int(-5)], &[vec![a.clone()], vec![a.clone()]]).unwrap();
        assert_eq!(p[0].len(), 1);
        assert!(r.equal(&r.mul(&p[0][0], &n[0][0]), &a));
        assert!(r.equal(&p[0][0], &p[1][0]));
    }

    #[test]
    fn unit_row_needs_zero() {
        let r = zloc();
        let (p, n) = free_flatness_witness(&r, &[r.one()], &[vec![r.zero()]]).unwrap();
        assert!(p[0].is_empty() && n.is_empty());
        assert!(free_flatness_witness(&r, &[r.one()], &[vec![r.one()]]).is_err());
    }

    #[test]
    fn injectivity_by_hand() {
        let r = zloc();
        let u = vec![vec![r.one(), r.zero()], vec![r.zero(), r.one()]];
        let seq = FreeSequence::from_unimodular(r.clone(), u.clone(), u, 1).unwrap();
        let c = r.from_int(3);
        let x = vec![r.mul(&r.from_int(5), &c)];
        let l = injectivity_witness(&seq, &seq.n, &[r.from_int(5)], &[vec![c.clone(), r.zero()]], &x).unwrap();
        assert_eq!(l, vec![vec![c]]);
        let zero = injectivity_witness(&seq, &seq.n, &[], &[], &vec![r.zero()]).unwrap();
        assert!(zero.is_empty());
    }

    #[test]
    fn flat_quadratic_has_zero_kernel() {
        let r = zloc();
        let fp = FPAlgebra::parse(&r, &["x".into()], &["x^2 - 2".into()], None).unwrap();
        let model = EModel::normalize(&r, &fp).unwrap();
        let flat = etale_from_flat_unramified(&model).unwrap();
        assert_eq!(flat.branches.len(), 1);
        assert!(flat.branches[0].splitting.as_ref().unwrap().kernel.is_empty());
        let etale = standardize_local(&model, Mode::Etale, None).unwrap();
        compare_results(&flat, &etale).unwrap();
    }

    #[test]
    fn flat_idempotent_branches() {
        let r = zloc();
        let fp = FPAlgebra::parse(&r, &["x".into()], &["x^2 - x".into()], None).unwrap();
        let model = EModel::normalize(&r, &fp).unwrap();
        let flat = etale_from_flat_unramified(&model).unwrap();
        assert_eq!(flat.branches.len(), 2);
        let etale = standardize_local(&model, Mode::Etale, None).unwrap();
        compare_results(&flat, &etale).unwrap();
    }

    #[test]
    fn torsion_relation_is_not_flat() {
        let r = zloc();
        let fp = FPAlgebra::parse(&r, &["x".into()], &["5*x".into()], None).unwrap();
        let err = flat_precheck(&r, &fp, &["5*x".into()]).unwrap_err();
        assert!(matches!(err, AlgebraError::FlatnessWitness { .. }));
    }

    #[test]
    fn field_base_sequence() {
        let f5 = Fp::new(5);
        let u = vec![vec![1, 2], vec![0, 1]];
        let inv = vec![vec![1, 3], vec![0, 1]];
        let seq = FreeSequence::from_unimodular(f5.clone(), u, inv, 1).unwrap();
        let l = injectivity_witness(&seq, &seq.n, &[0], &[vec![1, 1]], &vec![0]).unwrap();
        assert_eq!(l.len(), 1);
    }
}
