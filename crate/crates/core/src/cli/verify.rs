//! Independent certificate checking. Everything here is recomputed from the
//! certificate with ring, polynomial and presentation arithmetic only; no
//! pipeline code is called.

use serde_json::{json, Value};

use crate::base_ring::linalg::{rank, Matrix};
use crate::base_ring::{GlobalBase, Localized};
use crate::poly::{PolyRing, UniPoly};
use crate::presentation::{EModel, FPAlgebra, LocElem, MonicLocalization};
use crate::ring::{ElemCodec, Field, LocalRing, ParseCoeff, Pid, Ring};

use super::codec::{self, array, field, read_algebra, read_elem, read_elems, read_iso, read_loc, read_locs, read_map, read_poly, usize_of, DecodeError};
use super::problem::{Problem, ProblemFile};
use super::produce::LocalBase;
use super::{digest, FORMAT, VERSION};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ok": self.ok(),
            "violations": self.violations.iter().map(|v| json!({ "path": v.path, "message": v.message })).collect::<Vec<_>>(),
            "warnings": self.warnings,
        })
    }

    fn fail(&mut self, path: &str, message: impl Into<String>) {
        self.violations.push(Violation { path: path.to_string(), message: message.into() });
    }

    fn require(&mut self, ok: bool, path: &str, message: &str) {
        if !ok {
            self.fail(path, message);
        }
    }

    /// Records a decoding failure as a violation.
    fn decoded<T>(&mut self, r: Result<T, DecodeError>) -> Option<T> {
        match r {
            Ok(x) => Some(x),
            Err(e) => {
                let (path, msg) = e.0.split_once(": ").unwrap_or(("$", &e.0));
                self.fail(path, msg.to_string());
                None
            }
        }
    }
}

pub fn verify(cert: &Value) -> Report {
    let mut rep = Report::default();
    if cert.as_object().is_some_and(|m| m.is_empty()) {
        rep.warnings.push("empty certificate: nothing to check".into());
        return rep;
    }
    if cert.get("format").and_then(Value::as_str) != Some(FORMAT) {
        rep.fail("$.format", format!("expected '{FORMAT}'"));
        return rep;
    }
    if cert.get("version").and_then(Value::as_u64) != Some(VERSION) {
        rep.fail("$.version", format!("unsupported version, expected {VERSION}"));
        return rep;
    }
    match cert.get("digest").and_then(Value::as_str) {
        None => rep.warnings.push("no digest: integrity of redundant fields is not checked".into()),
        Some(d) => rep.require(d == digest(cert), "$.digest", "the digest does not match the certificate body"),
    }
    let problem = match cert.get("base").zip(cert.get("input")) {
        None => {
            rep.fail("$", "missing 'base' or 'input'");
            return rep;
        }
        Some((base, input)) => {
            let mut file: ProblemFile = match serde_json::from_value(input.clone()) {
                Ok(f) => f,
                Err(e) => {
                    rep.fail("$.input", e.to_string());
                    return rep;
                }
            };
            file.base = base.clone();
            match Problem::from_file(file) {
                Ok(p) => p,
                Err(e) => {
                    rep.fail("$.input", e.message);
                    return rep;
                }
            }
        }
    };
    let kind = cert.get("kind").and_then(Value::as_str).unwrap_or_default().to_string();
    let mut run = || -> Result<(), super::CliError> {
        match kind.as_str() {
        "local-etale" | "local-flat-unramified" => {
            crate::with_local_base!(&problem.base, |r| {
                check_local(&mut rep, &r, &problem, cert, kind == "local-etale");
                Ok(())
            })
        }
        "local-unramified" => crate::with_local_base!(&problem.base, |r| {
            check_unramified(&mut rep, &r, &problem, cert);
            Ok(())
        }),
        "residual-decomposition" => crate::with_local_base!(&problem.base, |r| {
            check_residual(&mut rep, &r, &problem, cert);
            Ok(())
        }),
        "global-cover" | "global-cover-over-base" => crate::with_global_base!(&problem.base, |b| {
            check_global(&mut rep, &b, &problem, cert, kind == "global-cover-over-base");
            Ok(())
        }),
        other => {
            rep.fail("$.kind", format!("unknown kind '{other}'"));
            Ok(())
        }
        }
    };
    if let Err(e) = run() {
        rep.fail("$.base", e.message);
    }
    rep
}

fn get<'a>(rep: &mut Report, v: &'a Value, key: &str, path: &str) -> Option<&'a Value> {
    rep.decoded(field(v, key, path))
}

/// Re-normalizes the input and compares it with the recorded model, which
/// must match exactly.
fn check_model<R: Pid + ElemCodec + ParseCoeff>(
    rep: &mut Report,
    r: &R,
    problem: &Problem,
    cert: &Value,
    need_inverse: bool,
) -> Option<EModel<R>> {
    let fp = match FPAlgebra::parse(r, &problem.vars, &problem.relations, problem.invert.as_deref()) {
        Ok(fp) => fp,
        Err(e) => {
            rep.fail("$.input", e.to_string());
            return None;
        }
    };
    let model = match EModel::normalize(r, &fp) {
        Ok(m) => m,
        Err(e) => {
            rep.fail("$.input", e.to_string());
            return None;
        }
    };
    let m = get(rep, cert, "model", "$")?;
    let e = &model.loc;
    for (key, expected) in [
        ("algebra", codec::algebra(e)),
        ("images", codec::locs(r, &model.images)),
        ("jacobian", codec::loc(r, &model.jacobian)),
    ] {
        let path = format!("$.model.{key}");
        if let Some(found) = get(rep, m, key, "$.model") {
            rep.require(found == &expected, &path, "does not match the normalized input");
        }
    }
    match m.get("jacobian_inverse") {
        None | Some(Value::Null) => rep.require(!need_inverse, "$.model.jacobian_inverse", "missing"),
        Some(j) => {
            if let Some(j) = rep.decoded(read_loc(r, j, "$.model.jacobian_inverse")) {
                rep.require(e.is_one(&e.mul(&j, &model.jacobian)), "$.model.jacobian_inverse", "does not invert the Jacobian");
            }
        }
    }
    Some(model)
}

/// `q` monic of positive degree and `dq_inverse Q'(X) = 1` in `R[X]/(q)[1/g]`.
fn check_presentation<R: Pid + ElemCodec>(rep: &mut Report, r: &R, v: &Value, path: &str) -> Option<MonicLocalization<R>> {
    let (qv, gv, cv) = (get(rep, v, "q", path)?, get(rep, v, "g", path)?, get(rep, v, "dq_inverse", path)?);
    let q = rep.decoded(read_poly(r, qv, &format!("{path}.q")))?;
    let g = rep.decoded(read_poly(r, gv, &format!("{path}.g")))?;
    let c = rep.decoded(read_loc(r, cv, &format!("{path}.dq_inverse")))?;
    let ring = PolyRing::new(r.clone());
    if !ring.is_monic(&q) || q.deg() == 0 {
        rep.fail(&format!("{path}.q"), "not monic of positive degree");
        return None;
    }
    let a = match MonicLocalization::new(r.clone(), q.clone(), &g) {
        Ok(a) => a,
        Err(e) => {
            rep.fail(path, e.to_string());
            return None;
        }
    };
    let dq = a.eval(&ring.derivative(&q), &a.x());
    rep.require(a.is_one(&a.mul(&c, &dq)), &format!("{path}.dq_inverse"), "dq_inverse Q'(X) != 1");
    Some(a)
}

fn check_iso<R: Pid + ElemCodec>(rep: &mut Report, r: &R, a: &MonicLocalization<R>, b: &MonicLocalization<R>, v: &Value, path: &str) {
    if let Some(iso) = rep.decoded(read_iso(r, v, path)) {
        if let Err(e) = iso.verify(a, b) {
            rep.fail(path, e.to_string());
        }
    }
}

/// `E[1/s]`, which must equal the recorded target exactly.
fn check_target<R: Pid + ElemCodec>(
    rep: &mut Report,
    e: &MonicLocalization<R>,
    s: &LocElem<R::Elem>,
    v: &Value,
    path: &str,
) -> Option<MonicLocalization<R>> {
    let target = e.localize(s).ok()?;
    let recorded = get(rep, v, "target", path)?;
    rep.require(recorded == &codec::algebra(&target), &format!("{path}.target"), "is not E[1/s]");
    Some(target)
}

/// `H^d (sum a_i s_i - 1)` has coordinates in the maximal ideal.
fn check_comaximality<R: LocalRing>(rep: &mut Report, e: &MonicLocalization<R>, s: &[LocElem<R::Elem>], a: &[LocElem<R::Elem>]) {
    if s.len() != a.len() {
        rep.fail("$.result.comaximality", "one coefficient per branch is needed");
        return;
    }
    let sum = a.iter().zip(s).fold(e.zero(), |acc, (x, y)| e.add(&acc, &e.mul(x, y)));
    let diff = e.sub(&sum, &e.one());
    let cleared = e.mul_num(&e.h_power(e.deg()), &diff.num);
    rep.require(
        cleared.iter().all(|c| e.base().in_maximal(c)),
        "$.result.comaximality",
        "sum a_i s_i != 1 modulo the maximal ideal",
    );
}

fn branches<'a>(rep: &mut Report, cert: &'a Value) -> Option<(&'a Value, &'a Vec<Value>)> {
    let result = get(rep, cert, "result", "$")?;
    let lv = get(rep, result, "branches", "$.result")?;
    let list = rep.decoded(array(lv, "$.result.branches"))?;
    Some((result, list))
}

fn check_local<R: LocalBase>(rep: &mut Report, r: &R, problem: &Problem, cert: &Value, etale: bool) {
    let Some(model) = check_model(rep, r, problem, cert, etale) else { return };
    let e = &model.loc;
    let Some((result, list)) = branches(rep, cert) else { return };
    let mut family = Vec::new();
    for (i, b) in list.iter().enumerate() {
        let path = format!("$.result.branches[{i}]");
        let Some(s) = get(rep, b, "s", &path).and_then(|v| rep.decoded(read_loc(r, v, &format!("{path}.s")))) else {
            continue;
        };
        family.push(s.clone());
        let target = check_target(rep, e, &s, b, &path);
        let pres = get(rep, b, "presentation", &path).and_then(|v| check_presentation(rep, r, v, &format!("{path}.presentation")));
        if let (Some(target), Some(pres), Some(iso)) = (target, pres, get(rep, b, "iso", &path)) {
            check_iso(rep, r, &pres, &target, iso, &format!("{path}.iso"));
        }
    }
    if family.len() != list.len() {
        return;
    }
    if let Some(a) = get(rep, result, "comaximality", "$.result").and_then(|v| rep.decoded(read_locs(r, v, "$.result.comaximality"))) {
        check_comaximality(rep, e, &family, &a);
    }
}

fn check_unramified<R: LocalBase>(rep: &mut Report, r: &R, problem: &Problem, cert: &Value) {
    let Some(model) = check_model(rep, r, problem, cert, false) else { return };
    let e = &model.loc;
    let Some((result, list)) = branches(rep, cert) else { return };
    let mut family = Vec::new();
    for (i, b) in list.iter().enumerate() {
        let path = format!("$.result.branches[{i}]");
        let Some(s) = get(rep, b, "s", &path).and_then(|v| rep.decoded(read_loc(r, v, &format!("{path}.s")))) else {
            continue;
        };
        family.push(s.clone());
        let Some(target) = check_target(rep, e, &s, b, &path) else { continue };
        let Some(source) = get(rep, b, "source", &path).and_then(|v| rep.decoded(read_algebra(r, v, &format!("{path}.source")))) else {
            continue;
        };
        let map = get(rep, b, "map", &path).and_then(|v| rep.decoded(read_map(r, v, &format!("{path}.map"))));
        let pre = get(rep, b, "preimage", &path).and_then(|v| rep.decoded(read_map(r, v, &format!("{path}.preimage"))));
        let (Some(map), Some(pre)) = (map, pre) else { continue };
        if let Err(err) = map.check(&source, &target) {
            rep.fail(&format!("{path}.map"), err.to_string());
            continue;
        }
        let onto = |x: &LocElem<R::Elem>, y: &LocElem<R::Elem>| target.equal(&map.apply(&source, &target, x), y);
        rep.require(onto(&pre.x, &target.x()), &format!("{path}.preimage.x"), "does not map to X");
        rep.require(onto(&pre.h_inverse, &target.h_inverse()), &format!("{path}.preimage.h_inverse"), "does not map to 1/H");
        if let Some(d) = get(rep, b, "residual_dimension", &path).and_then(|v| rep.decoded(usize_of(v, &format!("{path}.residual_dimension")))) {
            let ok = source.residual_dimension() == d && target.residual_dimension() == d;
            rep.require(ok, &format!("{path}.residual_dimension"), "residual dimensions differ");
        }
    }
    if family.len() != list.len() {
        return;
    }
    if let Some(a) = get(rep, result, "comaximality", "$.result").and_then(|v| rep.decoded(read_locs(r, v, "$.result.comaximality"))) {
        check_comaximality(rep, e, &family, &a);
    }
}

/// Whether `b = c a` coefficientwise for a unit `c`.
fn unit_multiple<R: Pid>(r: &R, a: &LocElem<R::Elem>, b: &LocElem<R::Elem>) -> bool {
    if a.pow != b.pow || a.num.len() != b.num.len() {
        return false;
    }
    let Some(i) = a.num.iter().position(|c| !r.is_zero(c)) else { return false };
    let Some(c) = r.div_exact(&b.num[i], &a.num[i]) else { return false };
    r.is_unit(&c) && a.num.iter().zip(&b.num).all(|(x, y)| r.equal(&r.mul(&c, x), y))
}

fn check_global<B: GlobalBase>(rep: &mut Report, b: &B, problem: &Problem, cert: &Value, over_base: bool) {
    let Some(model) = check_model(rep, b, problem, cert, true) else { return };
    let e = &model.loc;
    let Some(result) = get(rep, cert, "result", "$") else { return };
    let Some(leaves) = get(rep, result, "leaves", "$.result").and_then(|v| rep.decoded(array(v, "$.result.leaves"))) else {
        return;
    };
    let mut s_family = Vec::new();
    let mut f_family = Vec::new();
    for (i, leaf) in leaves.iter().enumerate() {
        let path = format!("$.result.leaves[{i}]");
        let Some(f) = get(rep, leaf, "f", &path).and_then(|v| rep.decoded(read_elem(b, v, &format!("{path}.f")))) else {
            continue;
        };
        if b.is_zero(&f) {
            rep.fail(&format!("{path}.f"), "f is zero");
            continue;
        }
        f_family.push(e.constant(&f));
        if let Some(t) = get(rep, leaf, "transcript", &path).and_then(|v| rep.decoded(array(v, &format!("{path}.transcript")))) {
            let mut prod = b.one();
            for (j, d) in t.iter().enumerate() {
                let p = format!("{path}.transcript[{j}]");
                match (d.get("invert"), d.get("small")) {
                    (Some(x), None) => {
                        if let Some(x) = rep.decoded(read_elem(b, x, &p)) {
                            prod = b.mul(&prod, &x);
                        }
                    }
                    (None, Some(x)) => {
                        rep.decoded(read_elem(b, x, &p));
                    }
                    _ => rep.fail(&p, "expected 'invert' or 'small'"),
                }
            }
            rep.require(b.equal(&b.normal(&prod), &b.normal(&f)), &format!("{path}.f"), "not the product of the inverted elements");
        }
        let r = Localized::new(b.clone(), f.clone());
        let er = match e.map_base(r.clone(), |c| r.embed(c)) {
            Ok(x) => x,
            Err(err) => {
                rep.fail(&path, err.to_string());
                continue;
            }
        };
        let s = get(rep, leaf, "s", &path).and_then(|v| rep.decoded(read_loc(&r, v, &format!("{path}.s"))));
        let sg = get(rep, leaf, "s_global", &path).and_then(|v| rep.decoded(read_loc(b, v, &format!("{path}.s_global"))));
        let (Some(s), Some(sg)) = (s, sg) else { continue };
        s_family.push(sg.clone());
        let sg_r = MonicLocalization::<B>::map_elem(&sg, |c| r.embed(c));
        rep.require(unit_multiple(&r, &s, &sg_r), &format!("{path}.s_global"), "not a unit multiple of s");
        if let Some(fi) = get(rep, leaf, "f_inverse", &path).and_then(|v| rep.decoded(read_loc(b, v, &format!("{path}.f_inverse")))) {
            match e.localize(&sg) {
                Ok(es) => rep.require(es.is_one(&es.mul(&es.constant(&f), &fi)), &format!("{path}.f_inverse"), "f f_inverse != 1 in E[1/s]"),
                Err(err) => rep.fail(&format!("{path}.s_global"), err.to_string()),
            }
        }
        let target = check_target(rep, &er, &s, leaf, &path);
        let pres = get(rep, leaf, "presentation", &path).and_then(|v| check_presentation(rep, &r, v, &format!("{path}.presentation")));
        if let (Some(target), Some(pres), Some(iso)) = (&target, &pres, get(rep, leaf, "iso", &path)) {
            check_iso(rep, &r, pres, target, iso, &format!("{path}.iso"));
        }
        if over_base {
            if let (Some(target), Some(pres), Some(ob)) = (&target, &pres, get(rep, leaf, "over_base", &path)) {
                check_over_base(rep, b, &r, &f, pres, target, ob, &format!("{path}.over_base"));
            }
        }
    }
    if s_family.len() != leaves.len() || f_family.len() != leaves.len() {
        return;
    }
    for (key, family) in [("s_certificate", &s_family), ("f_certificate", &f_family)] {
        let path = format!("$.result.{key}");
        if let Some(c) = get(rep, result, key, "$.result").and_then(|v| rep.decoded(read_locs(b, v, &path))) {
            let ok = c.len() == family.len() && e.is_one(&c.iter().zip(family).fold(e.zero(), |acc, (x, y)| e.add(&acc, &e.mul(x, y))));
            rep.require(ok, &path, "the combination is not 1 in E");
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn check_over_base<B: GlobalBase>(
    rep: &mut Report,
    b: &B,
    r: &Localized<B>,
    f: &B::Elem,
    leaf_pres: &MonicLocalization<Localized<B>>,
    target: &MonicLocalization<Localized<B>>,
    v: &Value,
    path: &str,
) {
    let Some(pres) = get(rep, v, "presentation", path).and_then(|p| check_presentation(rep, b, p, &format!("{path}.presentation"))) else {
        return;
    };
    let g = pres.h_poly();
    let content = g.coeffs.iter().fold(b.zero(), |acc, c| b.xgcd(&acc, c).0);
    rep.require(b.is_unit(f) || b.div_exact(&content, f).is_some(), &format!("{path}.presentation.g"), "f does not divide G");
    if let Some(m) = get(rep, v, "monicization", path) {
        let mp = format!("{path}.monicization");
        let n = get(rep, m, "n", &mp).and_then(|x| rep.decoded(usize_of(x, &format!("{mp}.n"))));
        let lift = get(rep, m, "lift", &mp).and_then(|x| rep.decoded(read_poly(b, x, &format!("{mp}.lift"))));
        if let (Some(n), Some(lift)) = (n, lift) {
            rep.require(PolyRing::new(b.clone()).equal(&lift, pres.q()), &format!("{mp}.lift"), "differs from the presentation over the base");
            // f^{-n(d-j)} lift_j must be the coefficients of the leaf's Q.
            let d = lift.deg();
            let fnr = r.pow(&r.embed(f), n as u64);
            let ok = d == leaf_pres.deg()
                && (0..=d).all(|j| {
                    let c = PolyRing::new(r.clone()).coeff_or_zero(leaf_pres.q(), j);
                    let scaled = r.mul(&c, &r.pow(&fnr, (d - j) as u64));
                    r.equal(&scaled, &r.embed(&PolyRing::new(b.clone()).coeff_or_zero(&lift, j)))
                });
            rep.require(ok, &mp, "un-substitution does not recover the leaf polynomial");
        }
    }
    match pres.map_base(r.clone(), |c| r.embed(c)) {
        Ok(a) => {
            if let Some(iso) = get(rep, v, "iso", path) {
                check_iso(rep, r, &a, target, iso, &format!("{path}.iso"));
            }
        }
        Err(e) => rep.fail(path, e.to_string()),
    }
}

/// Arithmetic in `k[X]/(q)` on coordinate vectors.
struct Quotient<F: Field> {
    ring: PolyRing<F>,
    q: UniPoly<F::Elem>,
}

impl<F: Field> Quotient<F> {
    fn dim(&self) -> usize {
        self.q.deg()
    }

    fn reduce(&self, p: &UniPoly<F::Elem>) -> Vec<F::Elem> {
        let r = self.ring.rem_monic(p, &self.q).expect("monic modulus");
        (0..self.dim()).map(|i| self.ring.coeff_or_zero(&r, i)).collect()
    }

    fn poly(&self, a: &[F::Elem]) -> UniPoly<F::Elem> {
        self.ring.from_coeffs(a.to_vec())
    }

    fn mul(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        self.reduce(&self.ring.mul(&self.poly(a), &self.poly(b)))
    }

    fn one(&self) -> Vec<F::Elem> {
        self.reduce(&self.ring.one())
    }

    fn sub(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        self.reduce(&self.ring.sub(&self.poly(a), &self.poly(b)))
    }

    fn pow(&self, a: &[F::Elem], n: usize) -> Vec<F::Elem> {
        (0..n).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    fn eval(&self, p: &UniPoly<F::Elem>, a: &[F::Elem]) -> Vec<F::Elem> {
        p.coeffs.iter().rev().fold(vec![self.ring.base().zero(); self.dim()], |acc, c| {
            let scaled = self.reduce(&self.ring.constant(c.clone()));
            let m = self.mul(&acc, a);
            m.iter().zip(&scaled).map(|(x, y)| self.ring.base().add(x, y)).collect()
        })
    }

    fn is_zero(&self, a: &[F::Elem]) -> bool {
        a.iter().all(|c| self.ring.base().is_zero(c))
    }

    fn equal(&self, a: &[F::Elem], b: &[F::Elem]) -> bool {
        self.is_zero(&self.sub(a, b))
    }

    /// `dim_k (a)`, the rank of multiplication by `a`.
    fn ideal_dim(&self, a: &[F::Elem]) -> usize {
        let cols: Vec<Vec<F::Elem>> = (0..self.dim()).map(|j| self.mul(a, &self.reduce(&self.ring.monomial(self.ring.base().one(), j)))).collect();
        let m: Matrix<F::Elem> = (0..self.dim()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        rank(self.ring.base(), &m)
    }
}

fn check_residual<R: LocalBase>(rep: &mut Report, r: &R, problem: &Problem, cert: &Value) {
    let Some(model) = check_model(rep, r, problem, cert, false) else { return };
    let Some(result) = get(rep, cert, "result", "$") else { return };
    let e = &model.loc;
    let k = r.residue_field().clone();
    let kr = PolyRing::new(k.clone());
    let qbar = kr.from_coeffs(e.q().coeffs.iter().map(|c| r.residue(c)).collect());
    let hbar: Vec<_> = e.h().iter().map(|c| r.residue(c)).collect();
    if let Some(m) = get(rep, result, "modulus", "$.result") {
        rep.require(m == &codec::poly(&k, &qbar), "$.result.modulus", "is not the reduction of Q");
    }
    if let Some(h) = get(rep, result, "inverted", "$.result") {
        rep.require(h == &codec::elems(&k, &hbar), "$.result.inverted", "is not the reduction of H");
    }
    let a = Quotient { ring: kr.clone(), q: qbar };
    let d = a.dim();
    let read = |rep: &mut Report, v: &Value, path: &str| -> Option<Vec<<R::Residue as Ring>::Elem>> {
        let x = rep.decoded(read_elems(&k, v, path))?;
        if x.len() != d {
            rep.fail(path, format!("expected {d} coordinates"));
            return None;
        }
        Some(x)
    };
    let Some(idem) = get(rep, result, "idempotent", "$.result") else { return };
    let Some(comps) = get(rep, result, "components", "$.result").and_then(|v| rep.decoded(array(v, "$.result.components"))) else {
        return;
    };
    let ip = "$.result.idempotent";
    let e_total = if let Some(n) = idem.get("nilpotency") {
        let Some(n) = rep.decoded(usize_of(n, &format!("{ip}.nilpotency"))) else { return };
        rep.require(a.is_zero(&a.pow(&hbar, n)), &format!("{ip}.nilpotency"), "H^n is not zero modulo m");
        rep.require(comps.is_empty(), "$.result.components", "the residual algebra is zero");
        return;
    } else {
        let s = get(rep, idem, "s", ip).and_then(|v| read(rep, v, &format!("{ip}.s")));
        let n = get(rep, idem, "n", ip).and_then(|v| rep.decoded(usize_of(v, &format!("{ip}.n"))));
        let u = get(rep, idem, "u", ip).and_then(|v| read(rep, v, &format!("{ip}.u")));
        let ee = get(rep, idem, "e", ip).and_then(|v| read(rep, v, &format!("{ip}.e")));
        let (Some(s), Some(n), Some(u), Some(ee)) = (s, n, u, ee) else { return };
        rep.require(a.equal(&s, &hbar), &format!("{ip}.s"), "is not the reduction of H");
        let su = a.mul(&s, &u);
        rep.require(a.is_zero(&a.mul(&a.pow(&s, n), &a.sub(&a.one(), &su))), ip, "s^n (1 - s u) != 0");
        rep.require(a.equal(&ee, &a.pow(&su, n)), &format!("{ip}.e"), "e != (s u)^n");
        rep.require(a.equal(&a.mul(&ee, &ee), &ee), &format!("{ip}.e"), "e is not idempotent");
        ee
    };
    let mut idempotents = Vec::new();
    let mut total_degree = 0;
    for (i, c) in comps.iter().enumerate() {
        let path = format!("$.result.components[{i}]");
        let eps = get(rep, c, "idempotent", &path).and_then(|v| read(rep, v, &format!("{path}.idempotent")));
        let y = get(rep, c, "generator", &path).and_then(|v| read(rep, v, &format!("{path}.generator")));
        let p = get(rep, c, "poly", &path).and_then(|v| rep.decoded(read_poly(&k, v, &format!("{path}.poly"))));
        let h = get(rep, c, "idempotent_poly", &path).and_then(|v| rep.decoded(read_poly(&k, v, &format!("{path}.idempotent_poly"))));
        let bez = get(rep, c, "bezout", &path).and_then(|v| rep.decoded(array(v, &format!("{path}.bezout"))));
        let (Some(eps), Some(y), Some(p), Some(h), Some(bez)) = (eps, y, p, h, bez) else { continue };
        if bez.len() != 2 || p.deg() == 0 {
            rep.fail(&path, "malformed component");
            continue;
        }
        let Some(sa) = rep.decoded(read_poly(&k, &bez[0], &format!("{path}.bezout[0]"))) else { continue };
        let Some(sb) = rep.decoded(read_poly(&k, &bez[1], &format!("{path}.bezout[1]"))) else { continue };
        rep.require(a.equal(&a.mul(&eps, &eps), &eps), &format!("{path}.idempotent"), "not idempotent");
        rep.require(a.equal(&a.mul(&eps, &e_total), &eps), &format!("{path}.idempotent"), "not below e");
        rep.require(!k.is_zero(&kr.coeff_or_zero(&p, 0)), &format!("{path}.poly"), "constant coefficient vanishes");
        let bezout = kr.add(&kr.mul(&sa, &p), &kr.mul(&sb, &kr.derivative(&p)));
        rep.require(kr.is_one(&bezout), &format!("{path}.bezout"), "a p + b p' != 1");
        rep.require(a.is_zero(&a.mul(&a.eval(&p, &y), &eps)), &format!("{path}.poly"), "p(y) eps != 0");
        rep.require(k.is_zero(&kr.coeff_or_zero(&h, 0)), &format!("{path}.idempotent_poly"), "has a constant term");
        rep.require(a.equal(&a.eval(&h, &y), &eps), &format!("{path}.idempotent_poly"), "h(y) != eps");
        let mut powers = vec![eps.clone()];
        for _ in 1..p.deg() {
            powers.push(a.mul(powers.last().expect("nonempty"), &y));
        }
        let span: Matrix<_> = (0..d).map(|row| powers.iter().map(|v| v[row].clone()).collect()).collect();
        rep.require(rank(&k, &span) == p.deg(), &format!("{path}.generator"), "powers of y are dependent");
        total_degree += p.deg();
        idempotents.push(eps);
    }
    if idempotents.len() != comps.len() {
        return;
    }
    for i in 0..idempotents.len() {
        for j in i + 1..idempotents.len() {
            rep.require(a.is_zero(&a.mul(&idempotents[i], &idempotents[j])), "$.result.components", "idempotents are not orthogonal");
        }
    }
    let sum = idempotents.iter().fold(vec![k.zero(); d], |acc, x| acc.iter().zip(x).map(|(u, v)| k.add(u, v)).collect());
    rep.require(a.equal(&sum, &e_total), "$.result.components", "idempotents do not sum to e");
    rep.require(total_degree == a.ideal_dim(&e_total), "$.result.components", "degrees do not add up to dim A e");
}
