//! The local pipeline: from an étale (or unramified) algebra over a
//! residually discrete local ring to standard étale presentations of
//! localizations that cover it residually.
//!
//! Every algebra is kept in the form `R[X]/(Q)[1/H]`, so ideal computations
//! reduce to linear algebra over `R` in the free module `R[X]/(Q)`.

use crate::base_ring::linalg::{det, solve_field, Matrix};
use crate::error::{AlgebraError, Result};
use crate::finite_algebra::{FiniteRAlgebra, NakayamaLocalizer, NakayamaWitness};
use crate::poly::{PolyRing, UniPoly};
use crate::presentation::{
    explicit_relations, newton_section, AlgebraMap, EModel, IsoCertificate, LocElem, MonicLocalization,
    StandardEtalePresentation,
};
use crate::residual::{FiniteKAlgebra, IdempotentOutcome, MonogeneComponent};
use crate::ring::{Field, LocalRing, Pid, Ring};

/// Elements of the residue field of `R`.
pub type Res<R> = <<R as LocalRing>::Residue as Ring>::Elem;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Etale,
    Unramified,
    FlatUnramified,
}

/// A finite `B` with `B[1/s_i] = E[1/s_i]`.
#[derive(Clone, Debug)]
pub struct ZmtData<R: Ring> {
    pub b: FiniteRAlgebra<R>,
    /// Coordinates in `B`.
    pub s: Vec<Vec<R::Elem>>,
}

/// `E = R[X]/(Q)[1/H]` is already of the form `B[1/H]` with `B = R[X]/(Q)`
/// finite free, so the oracle returns `B` and `s = (H)`.
pub fn zmt_oracle<R: Pid>(model: &EModel<R>) -> Result<ZmtData<R>> {
    let b = FiniteRAlgebra::monogenic(model.loc.base().clone(), model.loc.q())?;
    Ok(ZmtData { b, s: vec![model.loc.h().to_vec()] })
}

/// One residual component lifted to `B`.
#[derive(Clone, Debug)]
pub struct LocalBranch<R: LocalRing> {
    pub component: MonogeneComponent<Res<R>>,
    /// Lift of the component generator.
    pub y: Vec<R::Elem>,
    pub witness: NakayamaWitness<R::Elem>,
    pub localizer: NakayamaLocalizer<R::Elem>,
    /// `t = P(y)`, residually the component idempotent.
    pub t: Vec<R::Elem>,
    /// `G = P V`, with `G(y) = t^2 s`.
    pub g: UniPoly<R::Elem>,
}

#[derive(Clone, Debug)]
pub struct Refinement<R: LocalRing> {
    pub residue: FiniteKAlgebra<R::Residue>,
    /// Idempotent of `A` with `A[1/s] = A e`, when nontrivial.
    pub idempotent: Option<Vec<Res<R>>>,
    pub branches: Vec<LocalBranch<R>>,
    pub discarded: Vec<String>,
}

/// Splits `B[1/s]` residually into monogene components and lifts each one.
pub fn residual_refine<R: LocalRing>(zmt: &ZmtData<R>) -> Result<Refinement<R>> {
    let b = &zmt.b;
    let a = b.residue_algebra()?;
    let ring = PolyRing::new(b.base().clone());
    let mut branches = Vec::new();
    let mut discarded = Vec::new();
    let mut idempotent = None;
    for s in &zmt.s {
        let sbar = b.residue_elem(s);
        let e = match a.idempotent_of(&sbar) {
            IdempotentOutcome::TrivialLocalization { nilpotency } => {
                discarded.push(format!("residually nilpotent localizer (index {nilpotency}): B[1/s]/mB[1/s] = 0"));
                continue;
            }
            IdempotentOutcome::Certificate(c) => c.e,
        };
        for component in a.monogene_components_of(&e)? {
            let y = b.lift_elem(&component.generator);
            let h = b.lift_poly(&component.idempotent_poly);
            let witness = b.nakayama_witness(&h, &y)?;
            let localizer = b.nakayama_localizer(&witness);
            b.check_localizer(&y, &localizer)?;
            let t = b.eval_poly(&localizer.p, &y);
            let g = ring.mul(&localizer.p, &b.localizer_combination(&localizer, s));
            branches.push(LocalBranch { component, y, witness, localizer, t, g });
        }
        idempotent = Some(e);
    }
    Ok(Refinement { residue: a, idempotent, branches, discarded })
}

/// `g^n p(y) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExponentWitness {
    pub n: usize,
}

/// The least `n <= dim A` with `g^n p(y) = 0` in `A`.
pub fn find_exponent<F: Field>(a: &FiniteKAlgebra<F>, g: &[F::Elem], p: &UniPoly<F::Elem>, y: &[F::Elem]) -> Result<ExponentWitness> {
    let mut acc = a.eval_poly(p, y);
    for n in 0..=a.dim() {
        if a.is_zero(&acc) {
            return Ok(ExponentWitness { n });
        }
        acc = a.mul(&acc, &g.to_vec());
    }
    Err(AlgebraError::NoExponent(a.dim()))
}

/// Output of the degree-reduction loop.
#[derive(Clone, Debug)]
pub struct MonicReduction<R: LocalRing> {
    pub q: UniPoly<R::Elem>,
    /// `d(Q_0), d(Q_1), ..`; the last entry is `d(Q)`.
    pub degrees: Vec<usize>,
    /// `G^n p = Q * quotient` over `k`.
    pub quotient: UniPoly<Res<R>>,
}

impl<R: LocalRing> MonicReduction<R> {
    pub fn steps(&self) -> usize {
        self.degrees.len() - 1
    }

    pub fn check(
        &self,
        b: &FiniteRAlgebra<R>,
        y: &[R::Elem],
        g: &UniPoly<R::Elem>,
        p: &UniPoly<Res<R>>,
        n: usize,
    ) -> Result<()> {
        if !PolyRing::new(b.base().clone()).is_monic(&self.q) || !b.is_zero(&b.eval_poly(&self.q, y)) {
            return Err(AlgebraError::CheckFailed("Q is not a monic annihilator of y".into()));
        }
        if self.degrees.windows(2).any(|w| w[1] > w[0]) {
            return Err(AlgebraError::CheckFailed("degree increased".into()));
        }
        let kr = PolyRing::new(b.base().residue_field().clone());
        let target = kr.mul(&kr.pow(&b.residue_poly(g), n as u64), p);
        if !kr.equal(&kr.mul(&b.residue_poly(&self.q), &self.quotient), &target) {
            return Err(AlgebraError::CheckFailed("Q does not divide G^n p residually".into()));
        }
        Ok(())
    }
}

/// Replaces `Q_l` by a monic annihilator of `y` of degree `d(gcd(Q_l, G^n p))`
/// over `k` until the degree stops dropping.
pub fn monic_reduction_loop<R: LocalRing>(
    b: &FiniteRAlgebra<R>,
    y: &[R::Elem],
    q0: &UniPoly<R::Elem>,
    g: &UniPoly<R::Elem>,
    p: &UniPoly<Res<R>>,
    n: usize,
) -> Result<MonicReduction<R>> {
    let kr = PolyRing::new(b.base().residue_field().clone());
    let target = kr.mul(&kr.pow(&b.residue_poly(g), n as u64), p);
    let mut q = q0.clone();
    let mut degrees = vec![q.deg()];
    loop {
        let gcd = kr.gcd_monic(&b.residue_poly(&q), &target)?;
        if gcd.deg() >= q.deg() {
            break;
        }
        if gcd.deg() == 0 {
            return Err(AlgebraError::Precondition("G^n p is residually coprime to the annihilator of y".into()));
        }
        q = b.monic_from_generation(y, gcd.deg())?;
        degrees.push(q.deg());
    }
    let quotient = kr
        .quo(&target, &b.residue_poly(&q))
        .ok_or_else(|| AlgebraError::CheckFailed("Q does not divide G^n p residually".into()))?;
    Ok(MonicReduction { q, degrees, quotient })
}

/// A surjection `u: S -> T` of presented algebras together with formulas
/// for preimages of the generators of `T`.
#[derive(Clone, Debug)]
pub struct Surjection<R: Ring> {
    pub source: MonicLocalization<R>,
    pub target: MonicLocalization<R>,
    pub map: AlgebraMap<R::Elem>,
    /// Images of `X` and `1/H` of `T`; a ring map only modulo the kernel.
    pub preimage: AlgebraMap<R::Elem>,
}

impl<R: Pid> Surjection<R> {
    pub fn new(
        source: MonicLocalization<R>,
        target: MonicLocalization<R>,
        map: AlgebraMap<R::Elem>,
        preimage: AlgebraMap<R::Elem>,
    ) -> Result<Self> {
        let s = Surjection { source, target, map, preimage };
        s.check()?;
        Ok(s)
    }

    pub fn check(&self) -> Result<()> {
        self.map.check(&self.source, &self.target)?;
        let t = &self.target;
        if !t.equal(&self.image(&self.preimage.x), &t.x()) || !t.equal(&self.image(&self.preimage.h_inverse), &t.h_inverse()) {
            return Err(AlgebraError::CheckFailed("recorded preimages do not map onto the generators".into()));
        }
        Ok(())
    }

    pub fn image(&self, a: &LocElem<R::Elem>) -> LocElem<R::Elem> {
        self.map.apply(&self.source, &self.target, a)
    }

    pub fn lift(&self, a: &LocElem<R::Elem>) -> LocElem<R::Elem> {
        self.preimage.apply(&self.target, &self.source, a)
    }

    /// Relations of `T` at the preimages, and `a - lift(u(a))`. Zeros and
    /// generators already in the ideal of the earlier ones are dropped.
    pub fn kernel_generators(&self) -> Vec<LocElem<R::Elem>> {
        let s = &self.source;
        let t = &self.target;
        let (xi, zeta) = (&self.preimage.x, &self.preimage.h_inverse);
        let candidates = vec![
            s.eval(t.q(), xi),
            s.sub(&s.mul(zeta, &s.eval(&t.h_poly(), xi)), &s.one()),
            s.sub(&s.x(), &self.lift(&self.map.x)),
        ];
        let mut out: Vec<LocElem<R::Elem>> = Vec::new();
        for c in candidates {
            if s.is_zero(&c) || (!out.is_empty() && s.ideal_membership(&c, &out).is_ok()) {
                continue;
            }
            out.push(c);
        }
        out
    }

    /// One Newton step on the preimages: a section `T -> S/I^2`.
    pub fn newton_section(&self) -> Result<AlgebraMap<R::Elem>> {
        let s = &self.source;
        let t = &self.target;
        let ring = t.poly_ring();
        let jac = t.mul(&t.eval(&ring.derivative(t.q()), &t.x()), &t.eval(&t.h_poly(), &t.x()));
        let jac_inv = t
            .try_invert(&jac)
            .ok_or_else(|| AlgebraError::NotEtale("Q'(x) H(x) is not invertible in the target".into()))?;
        let w = self.lift(&jac_inv);
        let lift0 = [self.preimage.x.clone(), self.preimage.h_inverse.clone()];
        let sigma = newton_section(s.base(), s, |c| s.constant(c), &explicit_relations(t), &lift0, &w);
        let [x, h_inverse]: [LocElem<R::Elem>; 2] = sigma.try_into().expect("two generators");
        Ok(AlgebraMap { x, h_inverse })
    }

}

impl<R: LocalRing> Surjection<R> {
    /// `S[1/f]` for `f` annihilating the kernel and mapping to a unit:
    /// the inverse isomorphism is given by the preimages.
    pub fn localized_iso(
        &self,
        f: &LocElem<R::Elem>,
        target: &MonicLocalization<R>,
        target_shift: Option<&LocElem<R::Elem>>,
    ) -> Result<(MonicLocalization<R>, IsoCertificate<R::Elem>)> {
        let base = self.source.base();
        let c = base.content_normalizer(&self.source.mul_num(self.source.h(), &f.num));
        let f = &self.source.scale(f, &c);
        let sf = self.source.localize(f)?;
        let x_fwd = match target_shift {
            Some(d) => self.target.transport(&self.map.x, d),
            None => self.map.x.clone(),
        };
        let x_back = self.source.transport(&self.preimage.x, f);
        let iso = IsoCertificate::from_generators(&sf, target, x_fwd, x_back)?;
        Ok((sf, iso))
    }
}

/// The monogene candidate `S = R[X]/(Q)[1/G] -> E[1/t]`.
#[derive(Clone, Debug)]
pub struct Candidate<R: LocalRing> {
    pub surjection: Surjection<R>,
    pub residual_dimension: usize,
}

impl<R: LocalRing> Candidate<R> {
    /// Surjectivity plus equal residual dimensions.
    pub fn check(&self) -> Result<()> {
        self.surjection.check()?;
        let (ds, dt) = (self.surjection.source.residual_dimension(), self.surjection.target.residual_dimension());
        if ds != dt || ds != self.residual_dimension {
            return Err(AlgebraError::CheckFailed(format!("residual dimensions differ: {ds} vs {dt}")));
        }
        Ok(())
    }
}

/// Builds `S` and the surjection onto `E[1/t]`, using `P(y) x = V_x(y)` and
/// `G(y) = P(y)^2 H` to write the generators of `E[1/t]` as fractions over `G(a)`.
pub fn build_candidate<R: LocalRing>(
    model: &EModel<R>,
    b: &FiniteRAlgebra<R>,
    branch: &LocalBranch<R>,
    q: &UniPoly<R::Elem>,
) -> Result<Candidate<R>> {
    let base = model.loc.base().clone();
    let ring = PolyRing::new(base.clone());
    let g = ring.rem_monic(&branch.g, q)?;
    let c = base.content_normalizer(&g.coeffs);
    let g = ring.scale(&g, &c);
    let source = MonicLocalization::new(base.clone(), q.clone(), &g)?;
    let e = &model.loc;
    let t_elem = e.from_coords(&branch.t);
    let target = e.localize(&t_elem)?;
    let map = AlgebraMap::from_x(&source, &target, target.from_coords(&branch.y))?;
    let x_coords = e.x().num;
    let vx = b.localizer_combination(&branch.localizer, &x_coords);
    let v = b.localizer_combination(&branch.localizer, e.h());
    let xi = source.scale(&LocElem { num: source.coords(&ring.mul(&vx, &v)), pow: 1 }, &c);
    let zeta = source.scale(&LocElem { num: source.coords(&branch.localizer.p), pow: 1 }, &c);
    let surjection = Surjection::new(source, target, map, AlgebraMap { x: xi, h_inverse: zeta })?;
    let candidate = Candidate { residual_dimension: branch.component.poly.deg(), surjection };
    candidate.check()?;
    Ok(candidate)
}

/// The idempotent splitting of `u` and the resulting standard presentation.
#[derive(Clone, Debug)]
pub struct Splitting<R: Ring> {
    pub kernel: Vec<LocElem<R::Elem>>,
    /// `c = M c` with `M` over `m + I`.
    pub matrix: Matrix<LocElem<R::Elem>>,
    /// `det(1 - M)`, annihilating the kernel.
    pub det: LocElem<R::Elem>,
    pub f: LocElem<R::Elem>,
    /// Set when `u(det)` is not a unit in the target and had to be inverted.
    pub target_shift: Option<LocElem<R::Elem>>,
    pub localized_source: MonicLocalization<R>,
    pub target: MonicLocalization<R>,
    pub presentation: StandardEtalePresentation<R::Elem>,
    pub iso: IsoCertificate<R::Elem>,
}

/// Writes each kernel generator as `c = sum_g pi_g s_g` with `s_g` in `S`,
/// from `G^N num(c) = 0 mod (m, Q)`.
pub fn split_over_maximal<R: LocalRing>(s: &MonicLocalization<R>, c: &LocElem<R::Elem>) -> Result<Vec<LocElem<R::Elem>>> {
    let base = s.base();
    let gens = base.maximal_generators();
    let n = s.deg();
    let cleared = s.mul_num(&s.h_power(n), &c.num);
    let mut parts = vec![vec![base.zero(); n]; gens.len()];
    for (i, coeff) in cleared.iter().enumerate() {
        let split = base
            .split_maximal(coeff)
            .ok_or_else(|| AlgebraError::CheckFailed("kernel element is not residually zero".into()))?;
        for (g, v) in split.into_iter().enumerate() {
            parts[g][i] = v;
        }
    }
    let out: Vec<LocElem<R::Elem>> = parts.into_iter().map(|num| LocElem { num, pow: n + c.pow }).collect();
    let pis: Vec<LocElem<R::Elem>> = gens.iter().map(|p| s.constant(p)).collect();
    if !s.equal(&s.combination(&pis, &out), c) {
        return Err(AlgebraError::CheckFailed("maximal-ideal decomposition does not reproduce c".into()));
    }
    Ok(out)
}

/// `c_i = sum_j M_ij c_j` with `M` over `m + I`, via the Newton section:
/// `s - sigma(u(s))` lies in `I`, and `sum_g pi_g sigma(u(s_g))` lies in `I^2`.
pub fn etale_relation_matrix<R: LocalRing>(
    surj: &Surjection<R>,
    kernel: &[LocElem<R::Elem>],
    section: &AlgebraMap<R::Elem>,
) -> Result<Matrix<LocElem<R::Elem>>> {
    let s = &surj.source;
    let pis: Vec<LocElem<R::Elem>> = s.base().maximal_generators().iter().map(|p| s.constant(p)).collect();
    let mut products = Vec::new();
    let mut pairs = Vec::new();
    for j in 0..kernel.len() {
        for k in j..kernel.len() {
            products.push(s.mul(&kernel[j], &kernel[k]));
            pairs.push((j, k));
        }
    }
    let mut matrix = Vec::with_capacity(kernel.len());
    for c in kernel {
        let parts = split_over_maximal(s, c)?;
        let mut row = vec![s.zero(); kernel.len()];
        let mut square = s.zero();
        for (pi, part) in pis.iter().zip(&parts) {
            let back = section.apply(&surj.target, s, &surj.image(part));
            let beta = s.ideal_membership(&s.sub(part, &back), kernel)?;
            for (r, b) in row.iter_mut().zip(&beta) {
                *r = s.add(r, &s.mul(pi, b));
            }
            square = s.add(&square, &s.mul(pi, &back));
        }
        if !products.is_empty() {
            let gamma = s.ideal_membership(&square, &products)?;
            for (z, &(j, k)) in gamma.iter().zip(&pairs) {
                row[j] = s.add(&row[j], &s.mul(z, &kernel[k]));
            }
        } else if !s.is_zero(&square) {
            return Err(AlgebraError::CheckFailed("square-zero part is nonzero with an empty kernel".into()));
        }
        matrix.push(row);
    }
    check_relation_matrix(s, kernel, &matrix)?;
    Ok(matrix)
}

pub fn check_relation_matrix<R: Pid>(
    s: &MonicLocalization<R>,
    kernel: &[LocElem<R::Elem>],
    matrix: &Matrix<LocElem<R::Elem>>,
) -> Result<()> {
    for (c, row) in kernel.iter().zip(matrix) {
        if !s.equal(c, &s.combination(row, kernel)) {
            return Err(AlgebraError::CheckFailed("c != M c".into()));
        }
    }
    Ok(())
}

/// Determinant trick: `D = det(1 - M)` kills the kernel, and `u(D)` is
/// residually one. When `u(D)` is a unit, `f = D lift(u(D)^-1)` is the
/// idempotent with `u(f) = 1`; otherwise `u(D)` is inverted in the target too.
pub fn split_with_matrix<R: LocalRing>(
    surj: &Surjection<R>,
    kernel: Vec<LocElem<R::Elem>>,
    matrix: Matrix<LocElem<R::Elem>>,
) -> Result<Splitting<R>> {
    let s = &surj.source;
    let n = kernel.len();
    let one_minus: Matrix<LocElem<R::Elem>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { s.sub(&s.one(), &matrix[i][j]) } else { s.neg(&matrix[i][j]) }).collect())
        .collect();
    let d = det(s, &one_minus);
    if kernel.iter().any(|c| !s.is_zero(&s.mul(&d, c))) {
        return Err(AlgebraError::CheckFailed("det(1 - M) does not annihilate the kernel".into()));
    }
    let ud = surj.image(&d);
    let (f, target, shift) = match surj.target.try_invert(&ud) {
        Some(inv) => {
            let f = s.mul(&d, &surj.lift(&inv));
            if !surj.target.is_one(&surj.image(&f)) {
                return Err(AlgebraError::CheckFailed("u(f) != 1".into()));
            }
            (f, surj.target.clone(), None)
        }
        None => (d.clone(), surj.target.localize(&ud)?, Some(ud)),
    };
    let (sf, iso) = surj.localized_iso(&f, &target, shift.as_ref())?;
    let presentation = StandardEtalePresentation::new(s.base(), s.q().clone(), sf.h_poly())?;
    Ok(Splitting {
        kernel,
        matrix,
        det: d,
        f,
        target_shift: shift,
        localized_source: sf,
        target,
        presentation,
        iso,
    })
}

/// Kernel, Newton section and splitting for étale targets.
pub fn idempotent_splitting<R: LocalRing>(surj: &Surjection<R>) -> Result<Splitting<R>> {
    let kernel = surj.kernel_generators();
    let section = surj.newton_section()?;
    let matrix = etale_relation_matrix(surj, &kernel, &section)?;
    split_with_matrix(surj, kernel, matrix)
}

#[derive(Clone, Debug)]
pub struct BranchResult<R: LocalRing> {
    pub branch: LocalBranch<R>,
    pub char_poly: UniPoly<R::Elem>,
    pub exponent: ExponentWitness,
    pub reduction: MonicReduction<R>,
    pub candidate: Candidate<R>,
    pub splitting: Option<Splitting<R>>,
    /// The element of `E` whose localization the branch presents.
    pub s: LocElem<R::Elem>,
}

#[derive(Clone, Debug)]
pub struct StandardizationResult<R: LocalRing> {
    pub mode: Mode,
    pub model: EModel<R>,
    pub branches: Vec<BranchResult<R>>,
    /// `a_i` with `sum a_i s_i = 1` in `E/mE`.
    pub comaximality: Vec<LocElem<R::Elem>>,
    pub discarded: Vec<String>,
}

impl<R: LocalRing> StandardizationResult<R> {
    pub fn elements(&self) -> Vec<LocElem<R::Elem>> {
        self.branches.iter().map(|b| b.s.clone()).collect()
    }

    /// Re-checks every certificate.
    pub fn verify(&self) -> Result<()> {
        let base = self.model.loc.base();
        for br in &self.branches {
            br.candidate.check()?;
            if let Some(sp) = &br.splitting {
                sp.presentation.check(base)?;
                let sf = sp.presentation.algebra(base)?;
                let target = self.model.loc.localize(&br.s)?;
                sp.iso.verify(&sf, &target)?;
            }
        }
        check_residual_comaximality(&self.model.loc, &self.elements(), &self.comaximality)
    }
}

/// `H^d (sum a_i s_i - 1)` vanishes in `R[X]/(Q)` modulo `m`.
pub fn check_residual_comaximality<R: LocalRing>(
    e: &MonicLocalization<R>,
    s: &[LocElem<R::Elem>],
    a: &[LocElem<R::Elem>],
) -> Result<()> {
    if s.len() != a.len() {
        return Err(AlgebraError::CheckFailed("coefficient count does not match the family".into()));
    }
    let diff = e.sub(&e.combination(a, s), &e.one());
    let cleared = e.mul_num(&e.h_power(e.deg()), &diff.num);
    if cleared.iter().any(|c| !e.base().in_maximal(c)) {
        return Err(AlgebraError::CheckFailed("sum a_i s_i != 1 modulo m".into()));
    }
    Ok(())
}

/// Solves `sum a_i s_i = e_H` over the residue field.
fn residual_comaximality<R: LocalRing>(
    e: &MonicLocalization<R>,
    a: &FiniteKAlgebra<R::Residue>,
    idempotent: Option<&Vec<Res<R>>>,
    s: &[LocElem<R::Elem>],
) -> Result<Vec<LocElem<R::Elem>>> {
    let Some(eh) = idempotent else {
        return Ok(Vec::new());
    };
    let base = e.base();
    let k = base.residue_field();
    let d = a.dim();
    let sbar: Vec<Vec<Res<R>>> = s.iter().map(|x| x.num.iter().map(|c| base.residue(c)).collect()).collect();
    let cols: Vec<Vec<Res<R>>> = sbar.iter().flat_map(|si| (0..d).map(move |j| (si, j))).map(|(si, j)| a.mul(si, &a.basis(j))).collect();
    let m: Matrix<Res<R>> = (0..d).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let sol = solve_field(k, &m, eh).ok_or_else(|| AlgebraError::CheckFailed("branch elements are not residually comaximal".into()))?;
    let out: Vec<LocElem<R::Elem>> = sol
        .chunks(d)
        .map(|c| LocElem { num: c.iter().map(|v| base.lift(v)).collect(), pow: 0 })
        .collect();
    check_residual_comaximality(e, s, &out)?;
    Ok(out)
}

/// Runs the whole local pipeline.
pub fn standardize_local<R: LocalRing>(model: &EModel<R>, mode: Mode, witness: Option<&LocElem<R::Elem>>) -> Result<StandardizationResult<R>> {
    if mode == Mode::Etale {
        model.etale_witness(witness)?;
    }
    let zmt = zmt_oracle(model)?;
    let refinement = residual_refine(&zmt)?;
    let b = &zmt.b;
    let mut branches = Vec::new();
    for branch in refinement.branches {
        let char_poly = b.char_poly(&branch.y);
        let ring = PolyRing::new(b.base().clone());
        let g = ring.rem_monic(&branch.g, &char_poly)?;
        let ybar = &branch.component.generator;
        let gbar = b.residue_elem(&b.eval_poly(&g, &branch.y));
        let exponent = find_exponent(&refinement.residue, &gbar, &branch.component.poly, ybar)?;
        let reduction = monic_reduction_loop(b, &branch.y, &char_poly, &g, &branch.component.poly, exponent.n)?;
        reduction.check(b, &branch.y, &g, &branch.component.poly, exponent.n)?;
        let candidate = build_candidate(model, b, &branch, &reduction.q)?;
        let mut s = model.loc.from_coords(&branch.t);
        let splitting = match mode {
            Mode::Unramified => None,
            Mode::Etale => Some(idempotent_splitting(&candidate.surjection)?),
            Mode::FlatUnramified => Some(crate::flatness::flat_splitting(&candidate.surjection)?),
        };
        if let Some(shift) = splitting.as_ref().and_then(|sp| sp.target_shift.as_ref()) {
            s = model.loc.from_coords(&model.loc.mul_num(&s.num, &shift.num));
        }
        branches.push(BranchResult { branch, char_poly, exponent, reduction, candidate, splitting, s });
    }
    let elements: Vec<LocElem<R::Elem>> = branches.iter().map(|b| b.s.clone()).collect();
    let comaximality = residual_comaximality(&model.loc, &refinement.residue, refinement.idempotent.as_ref(), &elements)?;
    let result = StandardizationResult { mode, model: model.clone(), branches, comaximality, discarded: refinement.discarded };
    result.verify()?;
    Ok(result)
}
