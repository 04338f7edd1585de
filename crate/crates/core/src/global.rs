//! Covers of an étale algebra over a global base (`Z` or `k[t]`).
//!
//! A run at the generic point inverts whatever it needs; every non-unit of the
//! base it inverts is logged. The primes of the logged product are then
//! visited one at a time as residually zero elements. Each local branch gives
//! a leaf `(s, f)` with `E[1/s]` standard étale over `B[1/f]`, and the leaves
//! are certified comaximal a posteriori.

use std::sync::{Arc, Mutex};

use crate::base_ring::frac::make_frac;
use crate::base_ring::{Frac, GenericPoint, GlobalBase, Localized, PrimePoint};
use crate::error::{AlgebraError, Result};
use crate::poly::{PolyRing, UniPoly};
use crate::presentation::{EModel, IsoCertificate, LocElem, MonicLocalization, StandardEtalePresentation};
use crate::ring::{LocalRing, Pid, Ring};
use crate::standardize::{standardize_local, Mode};

pub const DEFAULT_DEPTH_LIMIT: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision<E> {
    /// The element is assumed invertible.
    Invert(E),
    /// The element is assumed residually zero.
    Small(E),
}

/// The generic prime of a run, as the elements assumed invertible and the
/// elements assumed residually zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchState<E> {
    pub inverted: Vec<E>,
    pub small: Vec<E>,
    pub transcript: Vec<Decision<E>>,
}

impl<E: Clone> BranchState<E> {
    fn new(small: Option<E>, inverted: Vec<E>) -> Self {
        let mut transcript: Vec<Decision<E>> = small.iter().cloned().map(Decision::Small).collect();
        transcript.extend(inverted.iter().cloned().map(Decision::Invert));
        BranchState { inverted, small: small.into_iter().collect(), transcript }
    }

    pub fn depth(&self) -> usize {
        self.transcript.len()
    }
}

/// One element of the cover. Everything except `s_global` lives over `B[1/f]`.
#[derive(Clone, Debug)]
pub struct Leaf<B: GlobalBase> {
    pub state: BranchState<B::Elem>,
    pub f: B::Elem,
    /// The branch element over `B[1/f]`.
    pub s: LocElem<Frac<B::Elem>>,
    /// A multiple of `s` by a unit of `B[1/f]`, with coefficients in `B`,
    /// multiplied by `f` when `f` is not already a unit of `E[1/s]`.
    pub s_global: LocElem<B::Elem>,
    pub presentation: StandardEtalePresentation<Frac<B::Elem>>,
    /// `E[1/f][1/s]`.
    pub target: MonicLocalization<Localized<B>>,
    pub iso: IsoCertificate<Frac<B::Elem>>,
}

impl<B: GlobalBase> Leaf<B> {
    pub fn ring(&self, base: &B) -> Localized<B> {
        Localized::new(base.clone(), self.f.clone())
    }

    pub fn verify(&self, base: &B, model: &EModel<B>) -> Result<()> {
        let r = self.ring(base);
        let inverted = self.state.inverted.iter().fold(base.one(), |acc, u| base.mul(&acc, u));
        if !base.equal(&base.normal(&inverted), &base.normal(&self.f)) {
            return Err(AlgebraError::CheckFailed("f is not the product of the inverted elements".into()));
        }
        self.presentation.check(&r)?;
        let e = extend(model, &r)?;
        if !e.localize(&self.s)?.same_presentation(&self.target) {
            return Err(AlgebraError::CheckFailed("the target is not E[1/f][1/s]".into()));
        }
        if !unit_multiple(&r, &self.s, &MonicLocalization::<B>::map_elem(&self.s_global, |c| r.embed(c))) {
            return Err(AlgebraError::CheckFailed("s_global is not a unit multiple of s".into()));
        }
        let localized = model.loc.localize(&self.s_global)?;
        if !localized.is_unit(&localized.constant(&self.f)) {
            return Err(AlgebraError::CheckFailed("f is not a unit of E[1/s]".into()));
        }
        self.iso.verify(&self.presentation.algebra(&r)?, &self.target)
    }
}

/// Whether `b = c a` for a unit `c` of the base.
fn unit_multiple<B: GlobalBase>(r: &Localized<B>, a: &LocElem<Frac<B::Elem>>, b: &LocElem<Frac<B::Elem>>) -> bool {
    if a.pow != b.pow || a.num.len() != b.num.len() {
        return false;
    }
    let Some(i) = a.num.iter().position(|c| !r.is_zero(c)) else {
        return false;
    };
    let Some(c) = r.div_exact(&b.num[i], &a.num[i]) else {
        return false;
    };
    r.is_unit(&c) && a.num.iter().zip(&b.num).all(|(x, y)| r.equal(&r.mul(&c, x), y))
}

/// A comaximal family of leaves with explicit certificates in `E`.
#[derive(Clone, Debug)]
pub struct GlobalCover<B: GlobalBase> {
    pub base: B,
    pub model: EModel<B>,
    pub leaves: Vec<Leaf<B>>,
    /// `sum c_i s_i = 1` in `E`.
    pub s_certificate: Vec<LocElem<B::Elem>>,
    /// `sum d_i f_i = 1` in `E`.
    pub f_certificate: Vec<LocElem<B::Elem>>,
}

impl<B: GlobalBase> GlobalCover<B> {
    pub fn s_elements(&self) -> Vec<LocElem<B::Elem>> {
        self.leaves.iter().map(|l| l.s_global.clone()).collect()
    }

    pub fn f_elements(&self) -> Vec<LocElem<B::Elem>> {
        self.leaves.iter().map(|l| self.model.loc.constant(&l.f)).collect()
    }

    pub fn verify(&self) -> Result<()> {
        for leaf in &self.leaves {
            leaf.verify(&self.base, &self.model)?;
        }
        let e = &self.model.loc;
        for (name, cert, elems) in [("s", &self.s_certificate, self.s_elements()), ("f", &self.f_certificate, self.f_elements())] {
            if cert.len() != elems.len() || !e.is_one(&e.combination(cert, &elems)) {
                return Err(AlgebraError::CheckFailed(format!("the {name} comaximality certificate does not sum to 1")));
            }
        }
        Ok(())
    }
}

/// Base change of the model along an embedding of the base.
pub fn extend<B: GlobalBase, T: Pid<Elem = Frac<B::Elem>>>(model: &EModel<B>, target: &T) -> Result<MonicLocalization<T>> {
    let base = model.loc.base().clone();
    model.loc.map_base(target.clone(), |c| Frac { num: c.clone(), den: base.one() })
}

fn extend_model<B: GlobalBase, T: Pid<Elem = Frac<B::Elem>>>(model: &EModel<B>, target: &T) -> Result<EModel<T>> {
    let one = model.loc.base().one();
    let emb = |a: &LocElem<B::Elem>| MonicLocalization::<B>::map_elem(a, |c| Frac { num: c.clone(), den: one.clone() });
    Ok(EModel { loc: extend(model, target)?, images: model.images.iter().map(emb).collect(), jacobian: emb(&model.jacobian) })
}

fn logged<E: Clone>(log: &Arc<Mutex<Vec<E>>>) -> Vec<E> {
    log.lock().expect("log lock").clone()
}

/// The logged elements that are not already units once the earlier kept
/// ones are inverted, in order of first appearance.
fn distinct<B: GlobalBase>(base: &B, items: Vec<B::Elem>) -> Vec<B::Elem> {
    let mut out: Vec<B::Elem> = Vec::new();
    let mut f = base.one();
    for a in items {
        if !base.is_unit(&strip(base, &a, &f)) {
            let a = base.normal(&a);
            f = base.mul(&f, &a);
            out.push(a);
        }
    }
    out
}

/// `a` without the factors it shares with `f`.
fn strip<B: GlobalBase>(base: &B, a: &B::Elem, f: &B::Elem) -> B::Elem {
    let mut a = a.clone();
    loop {
        let (g, _, _) = base.xgcd(&a, f);
        if base.is_unit(&g) || base.is_zero(&g) {
            return a;
        }
        a = base.div_exact(&a, &g).expect("gcd divides");
    }
}

fn lcm<B: GlobalBase>(base: &B, a: &B::Elem, b: &B::Elem) -> B::Elem {
    let (g, _, _) = base.xgcd(a, b);
    base.normal(&base.div_exact(&base.mul(a, b), &g).expect("gcd divides the product"))
}

fn convert<B: GlobalBase>(r: &Localized<B>, c: &Frac<B::Elem>) -> Result<Frac<B::Elem>> {
    r.from_frac(c).ok_or_else(|| {
        let b = r.base();
        AlgebraError::CheckFailed(format!("the denominator of {} is not inverted in B[1/{}]", b.format_frac(&c.num, &c.den), b.format(r.f())))
    })
}

fn convert_elem<B: GlobalBase>(r: &Localized<B>, a: &LocElem<Frac<B::Elem>>) -> Result<LocElem<Frac<B::Elem>>> {
    Ok(LocElem { num: a.num.iter().map(|c| convert(r, c)).collect::<Result<_>>()?, pow: a.pow })
}

fn convert_poly<B: GlobalBase>(r: &Localized<B>, p: &UniPoly<Frac<B::Elem>>) -> Result<UniPoly<Frac<B::Elem>>> {
    Ok(PolyRing::new(r.clone()).from_coeffs(p.coeffs.iter().map(|c| convert(r, c)).collect::<Result<_>>()?))
}

fn convert_loc<B: GlobalBase, P: Pid<Elem = Frac<B::Elem>>>(
    r: &Localized<B>,
    a: &MonicLocalization<P>,
) -> Result<MonicLocalization<Localized<B>>> {
    let q = convert_poly(r, a.q())?;
    let h = convert_poly(r, &a.h_poly())?;
    Ok(MonicLocalization::new(r.clone(), q, &h)?.with_bound(a.bound()))
}

fn convert_iso<B: GlobalBase>(r: &Localized<B>, iso: &IsoCertificate<Frac<B::Elem>>) -> Result<IsoCertificate<Frac<B::Elem>>> {
    let map = |m: &crate::presentation::AlgebraMap<Frac<B::Elem>>| -> Result<_> {
        Ok(crate::presentation::AlgebraMap { x: convert_elem(r, &m.x)?, h_inverse: convert_elem(r, &m.h_inverse)? })
    };
    Ok(IsoCertificate { forward: map(&iso.forward)?, backward: map(&iso.backward)? })
}

fn denominators<B: GlobalBase>(base: &B, acc: &mut B::Elem, coeffs: &[Frac<B::Elem>]) {
    for c in coeffs {
        *acc = lcm(base, acc, &c.den);
    }
}

/// Runs the étale pipeline at one point of the base and turns its branches
/// into leaves over `B[1/f]`, where `f` is the product of the logged
/// inversions that the leaf data actually depends on.
fn leaves_at<B: GlobalBase, P: LocalRing<Elem = Frac<B::Elem>>>(
    base: &B,
    model: &EModel<B>,
    point: &P,
    log: &Arc<Mutex<Vec<B::Elem>>>,
    small: Option<B::Elem>,
    depth_limit: usize,
) -> Result<(Vec<Leaf<B>>, BranchState<B::Elem>)> {
    let local = extend_model(model, point)?;
    let result = standardize_local(&local, Mode::Etale, None)?;
    let mut splittings = Vec::new();
    let mut den = base.one();
    for a in &result.comaximality {
        denominators(base, &mut den, &a.num);
    }
    for branch in &result.branches {
        let sp = branch.splitting.as_ref().ok_or_else(|| AlgebraError::CheckFailed("étale branch without splitting".into()))?;
        denominators(base, &mut den, &branch.s.num);
        denominators(base, &mut den, &sp.target.q().coeffs);
        denominators(base, &mut den, sp.target.h());
        denominators(base, &mut den, &sp.presentation.g.coeffs);
        denominators(base, &mut den, &sp.presentation.q.coeffs);
        denominators(base, &mut den, &sp.presentation.cert.num);
        for m in [&sp.iso.forward, &sp.iso.backward] {
            denominators(base, &mut den, &m.x.num);
            denominators(base, &mut den, &m.h_inverse.num);
        }
        splittings.push((branch, sp));
    }
    let mut rest = den;
    let mut used = Vec::new();
    for u in distinct(base, logged(log)) {
        if base.is_unit(&rest) {
            break;
        }
        let stripped = strip(base, &rest, &u);
        if !base.equal(&stripped, &rest) {
            used.push(u);
            rest = stripped;
        }
    }
    if !base.is_unit(&rest) {
        return Err(AlgebraError::CheckFailed(format!("the denominator {} was never inverted", base.format(&rest))));
    }
    let state = BranchState::new(small, used);
    if state.depth() > depth_limit {
        return Err(AlgebraError::DepthExceeded(depth_limit));
    }
    let f = state.inverted.iter().fold(base.one(), |acc, u| base.mul(&acc, u));
    let r = Localized::new(base.clone(), f.clone());
    let mut leaves = Vec::new();
    for (branch, sp) in splittings {
        let s = convert_elem(&r, &branch.s)?;
        let target = convert_loc(&r, &sp.target)?;
        let presentation = StandardEtalePresentation {
            q: convert_poly(&r, &sp.presentation.q)?,
            g: convert_poly(&r, &sp.presentation.g)?,
            cert: convert_elem(&r, &sp.presentation.cert)?,
        };
        let iso = convert_iso(&r, &sp.iso)?;
        let den = s.num.iter().fold(base.one(), |acc, c| lcm(base, &acc, &c.den));
        let mut s_global = LocElem {
            num: s.num.iter().map(|c| base.div_exact(&base.mul(&c.num, &den), &c.den).expect("lcm of denominators")).collect(),
            pow: s.pow,
        };
        let localized = model.loc.localize(&s_global)?;
        if !localized.is_unit(&localized.constant(&f)) {
            s_global = model.loc.mul(&s_global, &model.loc.constant(&f));
        }
        leaves.push(Leaf { state: state.clone(), f: f.clone(), s, s_global, presentation, target, iso });
    }
    Ok((leaves, state))
}

/// Leaves from the generic point and from every prime of the generic run's
/// inverted product.
pub fn dynamic_run<B: GlobalBase>(base: &B, model: &EModel<B>, depth_limit: usize) -> Result<Vec<Leaf<B>>> {
    let log = Arc::new(Mutex::new(Vec::new()));
    let generic = GenericPoint::with_log(base.clone(), log.clone());
    let (mut leaves, state) = leaves_at(base, model, &generic, &log, None, depth_limit)?;
    let f = state.inverted.iter().fold(base.one(), |acc, u| base.mul(&acc, u));
    if base.is_unit(&f) {
        return Ok(leaves);
    }
    for q in base.prime_factors(&f) {
        let log = Arc::new(Mutex::new(Vec::new()));
        let point = PrimePoint::with_log(base.clone(), q.clone(), log.clone());
        let (more, _) = leaves_at(base, model, &point, &log, Some(q), depth_limit)?;
        leaves.extend(more);
    }
    Ok(leaves)
}

/// Re-runs the branch described by a transcript.
pub fn replay<B: GlobalBase>(base: &B, model: &EModel<B>, state: &BranchState<B::Elem>) -> Result<Vec<Leaf<B>>> {
    let log = Arc::new(Mutex::new(Vec::new()));
    let (leaves, replayed) = match state.small.first() {
        None => leaves_at(base, model, &GenericPoint::with_log(base.clone(), log.clone()), &log, None, usize::MAX)?,
        Some(q) => {
            let point = PrimePoint::with_log(base.clone(), q.clone(), log.clone());
            leaves_at(base, model, &point, &log, Some(q.clone()), usize::MAX)?
        }
    };
    let same = |a: &Decision<B::Elem>, b: &Decision<B::Elem>| match (a, b) {
        (Decision::Invert(x), Decision::Invert(y)) | (Decision::Small(x), Decision::Small(y)) => base.equal(x, y),
        _ => false,
    };
    if replayed.transcript.len() != state.transcript.len() || !replayed.transcript.iter().zip(&state.transcript).all(|(a, b)| same(a, b)) {
        return Err(AlgebraError::CheckFailed("the replayed transcript differs".into()));
    }
    Ok(leaves)
}

/// Certifies that the leaves cover `Spec E`: `1` lies in the ideal of the `s`
/// and in the ideal of the `f`.
pub fn collect_cover<B: GlobalBase>(base: &B, model: &EModel<B>, leaves: Vec<Leaf<B>>) -> Result<GlobalCover<B>> {
    let e = &model.loc;
    let solve = |elems: Vec<LocElem<B::Elem>>, name: &str| {
        e.ideal_membership(&e.one(), &elems)
            .map_err(|err| AlgebraError::CoverIncomplete(format!("1 is not in the ideal of the {name} elements ({err})")))
    };
    let s_certificate = solve(leaves.iter().map(|l| l.s_global.clone()).collect(), "s")?;
    let f_certificate = solve(leaves.iter().map(|l| e.constant(&l.f)).collect(), "f")?;
    let cover = GlobalCover { base: base.clone(), model: model.clone(), leaves, s_certificate, f_certificate };
    cover.verify()?;
    Ok(cover)
}

pub fn global_cover<B: GlobalBase>(base: &B, model: &EModel<B>, depth_limit: usize) -> Result<GlobalCover<B>> {
    let leaves = dynamic_run(base, model, depth_limit)?;
    collect_cover(base, model, leaves)
}

/// `lift(X) = f^{nd} P(X / f^n)`, monic with coefficients in `B`.
#[derive(Clone, Debug)]
pub struct MonicizationCertificate<B: GlobalBase> {
    pub f: B::Elem,
    pub n: u32,
    pub lift: UniPoly<B::Elem>,
    /// From `B[1/f][X]/(P)` to `B[1/f][X]/(lift)`: `X -> X / f^n`.
    pub iso: IsoCertificate<Frac<B::Elem>>,
}

impl<B: GlobalBase> MonicizationCertificate<B> {
    pub fn degree(&self) -> usize {
        self.lift.deg()
    }

    /// `f^{-nd} lift(f^n X)`, which must equal `P`.
    pub fn unsubstitute(&self, base: &B) -> UniPoly<Frac<B::Elem>> {
        let d = self.lift.deg();
        let fp = pow(base, &self.f, self.n as usize);
        let coeffs = self
            .lift
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| make_frac(base, c.clone(), pow(base, &fp, d - j)))
            .collect();
        PolyRing::new(Localized::new(base.clone(), self.f.clone())).from_coeffs(coeffs)
    }

    pub fn verify(&self, base: &B, p: &UniPoly<Frac<B::Elem>>) -> Result<()> {
        let r = Localized::new(base.clone(), self.f.clone());
        if !PolyRing::new(base.clone()).is_monic(&self.lift) || self.lift.deg() != p.deg() {
            return Err(AlgebraError::CheckFailed("the lift is not monic of the same degree".into()));
        }
        if !PolyRing::new(r.clone()).equal(&self.unsubstitute(base), p) {
            return Err(AlgebraError::CheckFailed("un-substitution does not recover P".into()));
        }
        let (a, b) = substitution_pair(&r, p, &self.lift, &r.one())?;
        self.iso.verify(&a, &b)
    }
}

fn pow<R: Ring>(r: &R, a: &R::Elem, k: usize) -> R::Elem {
    (0..k).fold(r.one(), |acc, _| r.mul(&acc, a))
}

fn substitution_pair<B: GlobalBase>(
    r: &Localized<B>,
    p: &UniPoly<Frac<B::Elem>>,
    lift: &UniPoly<B::Elem>,
    h: &Frac<B::Elem>,
) -> Result<(MonicLocalization<Localized<B>>, MonicLocalization<Localized<B>>)> {
    let ring = PolyRing::new(r.clone());
    let a = MonicLocalization::free(r.clone(), p.clone())?;
    let lifted = ring.from_coeffs(lift.coeffs.iter().map(|c| r.embed(c)).collect());
    let b = MonicLocalization::new(r.clone(), lifted, &ring.constant(h.clone()))?;
    Ok((a, b))
}

/// The least `n` for which `f^{nd} P(X/f^n)` has coefficients in `B`.
pub fn monicize<B: GlobalBase>(base: &B, p: &UniPoly<Frac<B::Elem>>, f: &B::Elem) -> Result<MonicizationCertificate<B>> {
    let r = Localized::new(base.clone(), f.clone());
    if !PolyRing::new(r.clone()).is_monic(p) {
        return Err(AlgebraError::Precondition("P must be monic".into()));
    }
    for c in &p.coeffs {
        convert(&r, c)?;
    }
    let d = p.deg();
    let mut n = 0u32;
    let lift = loop {
        let fp = pow(base, f, n as usize);
        let scaled: Option<Vec<B::Elem>> = p
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| base.div_exact(&base.mul(&c.num, &pow(base, &fp, d - j)), &c.den))
            .collect();
        if let Some(coeffs) = scaled {
            break PolyRing::new(base.clone()).from_coeffs(coeffs);
        }
        n += 1;
    };
    let fn_ = r.embed(&pow(base, f, n as usize));
    let (a, b) = substitution_pair(&r, p, &lift, &r.one())?;
    let inv = r.div_exact(&r.one(), &fn_).expect("f is a unit");
    let iso = IsoCertificate::from_generators(&a, &b, b.scale(&b.x(), &inv), a.scale(&a.x(), &fn_))?;
    let cert = MonicizationCertificate { f: f.clone(), n, lift, iso };
    cert.verify(base, p)?;
    Ok(cert)
}

/// A leaf whose presentation has coefficients in `B`. The isomorphism is
/// certified over `B[1/f]`, which is harmless since `f` divides `G`.
#[derive(Clone, Debug)]
pub struct RLeaf<B: GlobalBase> {
    pub leaf: Leaf<B>,
    pub monicization: MonicizationCertificate<B>,
    pub presentation: StandardEtalePresentation<B::Elem>,
    pub iso: IsoCertificate<Frac<B::Elem>>,
}

impl<B: GlobalBase> RLeaf<B> {
    pub fn verify(&self, base: &B) -> Result<()> {
        self.presentation.check(base)?;
        let r = self.leaf.ring(base);
        if !base.is_unit(&self.leaf.f) && base.div_exact(&self.presentation.g.coeffs.iter().fold(base.zero(), |g, c| base.xgcd(&g, c).0), &self.leaf.f).is_none() {
            return Err(AlgebraError::CheckFailed("f does not divide G".into()));
        }
        let s = self.presentation.algebra(base)?.map_base(r.clone(), |c| r.embed(c))?;
        self.iso.verify(&s, &self.leaf.target)
    }
}

/// Pushes every leaf presentation down from `B[1/f]` to `B`.
pub fn cover_over_r<B: GlobalBase>(cover: &GlobalCover<B>) -> Result<Vec<RLeaf<B>>> {
    let base = &cover.base;
    cover
        .leaves
        .iter()
        .map(|leaf| {
            let r = leaf.ring(base);
            let m = monicize(base, &leaf.presentation.q, &leaf.f)?;
            let fn_ = r.embed(&pow(base, &leaf.f, m.n as usize));
            let inv = r.div_exact(&r.one(), &fn_).expect("f is a unit");
            // G(X / f^n), then cleared and multiplied by f.
            let g_sub: Vec<Frac<B::Elem>> = leaf
                .presentation
                .g
                .coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| r.mul(c, &pow(&r, &inv, j)))
                .collect();
            let den = g_sub.iter().fold(base.one(), |acc, c| lcm(base, &acc, &c.den));
            let factor = if base.is_unit(&leaf.f) { den.clone() } else { base.mul(&den, &leaf.f) };
            let g_global: Vec<B::Elem> = g_sub
                .iter()
                .map(|c| base.div_exact(&base.mul(&c.num, &factor), &c.den).expect("lcm of denominators"))
                .collect();
            let g_global = PolyRing::new(base.clone()).from_coeffs(g_global);
            let presentation = StandardEtalePresentation::new(base, m.lift.clone(), g_global.clone())?;
            let a = leaf.presentation.algebra(&r)?;
            let b = presentation.algebra(base)?.map_base(r.clone(), |c| r.embed(c))?;
            let sub = IsoCertificate::from_generators(&a, &b, b.scale(&b.x(), &inv), a.scale(&a.x(), &fn_))?;
            let iso = sub.inverse().compose(&leaf.iso, &b, &a, &leaf.target);
            let out = RLeaf { leaf: leaf.clone(), monicization: m, presentation, iso };
            out.verify(base)?;
            Ok(out)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_ring::Integers;
    use crate::presentation::FPAlgebra;
    use num_bigint::BigInt;

    fn model(vars: &[&str], rels: &[&str]) -> EModel<Integers> {
        model_inv(vars, rels, None)
    }

    fn model_inv(vars: &[&str], rels: &[&str], invert: Option<&str>) -> EModel<Integers> {
        let vars: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        let rels: Vec<String> = rels.iter().map(|r| r.to_string()).collect();
        let fp = FPAlgebra::parse(&Integers, &vars, &rels, invert).unwrap();
        EModel::normalize(&Integers, &fp).unwrap()
    }

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn frac(n: i64, d: i64) -> Frac<BigInt> {
        make_frac(&Integers, int(n), int(d))
    }

    #[test]
    fn basic_example() {
        let m = model(&["x"], &["1 - 5*x"]);
        let cover = global_cover(&Integers, &m, DEFAULT_DEPTH_LIMIT).unwrap();
        assert_eq!(cover.leaves.len(), 1);
        let leaf = &cover.leaves[0];
        assert_eq!(leaf.f, int(5));
        assert!(m.loc.is_one(&leaf.s_global));
        let x = &m.images[0];
        assert!(m.loc.equal(&cover.f_certificate[0], x));
        assert!(m.loc.is_one(&m.loc.mul(x, &m.loc.constant(&int(5)))));
        cover_over_r(&cover).unwrap();
    }

    #[test]
    fn idempotent_cover() {
        let m = model(&["x"], &["x^2 - x"]);
        let cover = global_cover(&Integers, &m, DEFAULT_DEPTH_LIMIT).unwrap();
        assert_eq!(cover.leaves.len(), 2);
        assert!(cover.leaves.iter().all(|l| l.f == int(1)));
        let x = m.loc.x();
        let y = m.loc.sub(&m.loc.one(), &x);
        for leaf in &cover.leaves {
            let s = &leaf.s_global;
            assert!(m.loc.equal(s, &x) || m.loc.equal(s, &y), "{s:?}");
        }
        let over_r = cover_over_r(&cover).unwrap();
        assert!(over_r.iter().all(|l| l.monicization.n == 0));
    }

    #[test]
    fn trivial_algebra() {
        let m = model(&[], &[]);
        let cover = global_cover(&Integers, &m, DEFAULT_DEPTH_LIMIT).unwrap();
        assert_eq!(cover.leaves.len(), 1);
        assert_eq!(cover.leaves[0].f, int(1));
        assert!(m.loc.is_one(&cover.leaves[0].s_global));
    }

    #[test]
    fn replay_is_deterministic() {
        let m = model_inv(&["x"], &["x^2 - 2"], Some("2*x"));
        let a = dynamic_run(&Integers, &m, DEFAULT_DEPTH_LIMIT).unwrap();
        let b = dynamic_run(&Integers, &m, DEFAULT_DEPTH_LIMIT).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
        for leaf in &a {
            let again = replay(&Integers, &m, &leaf.state).unwrap();
            assert!(again.iter().any(|l| format!("{l:?}") == format!("{leaf:?}")));
        }
        let cover = collect_cover(&Integers, &m, a).unwrap();
        cover_over_r(&cover).unwrap();
    }

    #[test]
    fn polynomial_base() {
        use crate::base_ring::{Fp, Kt};
        let kt = Kt::new(Fp::new(5));
        let fp = FPAlgebra::parse(&kt, &["x".to_string()], &["1 - t*x".to_string()], None).unwrap();
        let m = EModel::normalize(&kt, &fp).unwrap();
        let cover = global_cover(&kt, &m, DEFAULT_DEPTH_LIMIT).unwrap();
        assert_eq!(cover.leaves.len(), 1);
        assert!(kt.equal(&cover.leaves[0].f, &kt.x()));
        cover_over_r(&cover).unwrap();
    }

    #[test]
    fn prime_branch() {
        let m = model_inv(&["x"], &["x^3 - x"], Some("x^2 + 1"));
        let cover = global_cover(&Integers, &m, DEFAULT_DEPTH_LIMIT).unwrap();
        assert_eq!(cover.leaves.len(), 4);
        let at_two: Vec<&Leaf<Integers>> = cover.leaves.iter().filter(|l| l.state.small == vec![int(2)]).collect();
        assert_eq!(at_two.len(), 1);
        assert_eq!(at_two[0].f, int(1));
        cover_over_r(&cover).unwrap();
    }

    #[test]
    fn several_covers() {
        for (rel, inv) in [("x^2 - x - 1", "5"), ("x^4 - 1", "2"), ("x^3 - 2", "6"), ("x^3 - 3*x + 1", "3"), ("x^2 - 2", "2*x")] {
            let m = model_inv(&["x"], &[rel], Some(inv));
            let cover = global_cover(&Integers, &m, DEFAULT_DEPTH_LIMIT).unwrap();
            assert!(!cover.leaves.is_empty(), "{rel}");
            for leaf in cover_over_r(&cover).unwrap() {
                leaf.verify(&Integers).unwrap();
            }
        }
    }

    #[test]
    fn not_etale_is_reported() {
        let m = model(&["x"], &["x^2 - 2"]);
        assert!(global_cover(&Integers, &m, DEFAULT_DEPTH_LIMIT).is_err());
    }

    #[test]
    fn depth_limit() {
        let m = model(&["x"], &["1 - 5*x"]);
        assert!(matches!(dynamic_run(&Integers, &m, 0), Err(AlgebraError::DepthExceeded(0))));
    }

    #[test]
    fn monicize_examples() {
        let r = Localized::new(Integers, int(2));
        let ring = PolyRing::new(r.clone());
        let p = ring.from_coeffs(vec![frac(5, 8), frac(3, 4), frac(1, 1)]);
        let m = monicize(&Integers, &p, &int(2)).unwrap();
        assert_eq!(m.n, 2);
        assert_eq!(m.lift.coeffs, vec![int(10), int(3), int(1)]);

        let p = ring.from_coeffs(vec![frac(-3, 2), frac(1, 1)]);
        let m = monicize(&Integers, &p, &int(2)).unwrap();
        assert_eq!((m.n, m.lift.coeffs.clone()), (1, vec![int(-3), int(1)]));

        let p = ring.from_coeffs(vec![frac(7, 1), frac(0, 1), frac(1, 1)]);
        assert_eq!(monicize(&Integers, &p, &int(2)).unwrap().n, 0);

        let p = ring.from_coeffs(vec![frac(1, 3), frac(1, 1)]);
        assert!(monicize(&Integers, &p, &int(2)).is_err());
    }
}
