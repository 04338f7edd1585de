//! Runs the pipelines and writes their results as certificate JSON.

use serde_json::{json, Value};

use crate::base_ring::GlobalBase;
use crate::flatness::flat_precheck;
use crate::global::{cover_over_r, global_cover, Decision, DEFAULT_DEPTH_LIMIT};
use crate::poly::{parse_poly, PolyRing};
use crate::presentation::{EModel, FPAlgebra, LocElem, MonicLocalization, StandardEtalePresentation};
use crate::residual::{FiniteKAlgebra, IdempotentOutcome};
use crate::ring::{ElemCodec, LocalRing, ParseCoeff, Pid};
use crate::standardize::{standardize_local, Mode};

use super::codec::{algebra, elem, elems, iso, loc, locs, map, poly};
use super::problem::Problem;
use super::{seal, CliError, FORMAT, VERSION};

/// A local base whose residue field can be written out.
pub trait LocalBase: LocalRing<Residue: ElemCodec> + ElemCodec + ParseCoeff {}

impl<R: LocalRing<Residue: ElemCodec> + ElemCodec + ParseCoeff> LocalBase for R {}

pub fn envelope(kind: &str, problem: &Problem, model: Value, result: Value) -> Value {
    let mut v = json!({
        "format": FORMAT,
        "version": VERSION,
        "tool": format!("etale {}", env!("CARGO_PKG_VERSION")),
        "kind": kind,
        "base": problem.base.to_json(),
        "input": problem.to_json(),
        "model": model,
        "result": result,
    });
    seal(&mut v);
    v
}

/// The normalized model and, when given, the parsed Jacobian witness.
#[allow(clippy::type_complexity)]
pub fn build_model<R: Pid + ElemCodec + ParseCoeff>(
    r: &R,
    problem: &Problem,
) -> Result<(EModel<R>, Option<LocElem<R::Elem>>), CliError> {
    let fp = FPAlgebra::parse(r, &problem.vars, &problem.relations, problem.invert.as_deref())?;
    let model = EModel::normalize(r, &fp)?;
    let witness = match &problem.jacobian_witness {
        None => None,
        Some(w) => Some(parse_witness(r, &fp, &model, w)?),
    };
    Ok((model, witness))
}

/// A polynomial in the variables and, when an element is inverted, `z` for
/// its inverse.
fn parse_witness<R: Pid + ParseCoeff>(
    r: &R,
    fp: &FPAlgebra<R::Elem>,
    model: &EModel<R>,
    w: &str,
) -> Result<LocElem<R::Elem>, CliError> {
    let e = &model.loc;
    let mut vars = fp.vars.clone();
    let mut values = model.images.clone();
    if let Some(g) = &fp.inverted {
        let gi = g.eval_in(e, |c| e.constant(c), &model.images);
        let z = e.try_invert(&gi).ok_or_else(|| CliError::pipeline("the inverted element is not a unit of the model"))?;
        vars.push("z".into());
        values.push(z);
    }
    let p = parse_poly(r, &vars, w)?;
    Ok(p.eval_in(e, |c| e.constant(c), &values))
}

fn model_json<R: Pid + ElemCodec>(m: &EModel<R>, jacobian_inverse: Option<&LocElem<R::Elem>>) -> Value {
    let r = m.loc.base();
    json!({
        "algebra": algebra(&m.loc),
        "images": locs(r, &m.images),
        "jacobian": loc(r, &m.jacobian),
        "jacobian_inverse": jacobian_inverse.map(|j| loc(r, j)),
    })
}

fn presentation_json<R: Pid + ElemCodec>(r: &R, p: &StandardEtalePresentation<R::Elem>) -> Value {
    json!({ "q": poly(r, &p.q), "g": poly(r, &p.g), "dq_inverse": loc(r, &p.cert) })
}

pub fn kind_of(mode: Mode) -> &'static str {
    match mode {
        Mode::Etale => "local-etale",
        Mode::Unramified => "local-unramified",
        Mode::FlatUnramified => "local-flat-unramified",
    }
}

pub fn local<R: LocalBase>(r: &R, problem: &Problem, mode: Mode) -> Result<Value, CliError> {
    if mode == Mode::FlatUnramified {
        let fp = FPAlgebra::parse(r, &problem.vars, &problem.relations, problem.invert.as_deref())?;
        flat_precheck(r, &fp, &problem.relations)?;
    }
    let (model, witness) = build_model(r, problem)?;
    let jacobian_inverse = match mode {
        Mode::Etale => Some(model.etale_witness(witness.as_ref())?),
        _ => model.etale_witness(witness.as_ref()).ok(),
    };
    let res = standardize_local(&model, mode, witness.as_ref())?;
    let e = &model.loc;
    let mut branches = Vec::new();
    for br in &res.branches {
        let target = e.localize(&br.s)?;
        let v = match &br.splitting {
            Some(sp) => json!({
                "s": loc(r, &br.s),
                "presentation": presentation_json(r, &sp.presentation),
                "target": algebra(&target),
                "iso": iso(r, &sp.iso),
            }),
            None => {
                let surj = &br.candidate.surjection;
                json!({
                    "s": loc(r, &br.s),
                    "source": algebra(&surj.source),
                    "target": algebra(&surj.target),
                    "map": map(r, &surj.map),
                    "preimage": map(r, &surj.preimage),
                    "residual_dimension": br.candidate.residual_dimension,
                })
            }
        };
        branches.push(v);
    }
    let result = json!({
        "branches": branches,
        "comaximality": locs(r, &res.comaximality),
        "discarded": res.discarded,
    });
    Ok(envelope(kind_of(mode), problem, model_json(&model, jacobian_inverse.as_ref()), result))
}

pub fn global<B: GlobalBase>(b: &B, problem: &Problem, over_r: bool) -> Result<Value, CliError> {
    let (model, witness) = build_model(b, problem)?;
    let jacobian_inverse = model.etale_witness(witness.as_ref())?;
    let cover = global_cover(b, &model, DEFAULT_DEPTH_LIMIT)?;
    let pushed = if over_r { Some(cover_over_r(&cover)?) } else { None };
    let e = &model.loc;
    let mut leaves = Vec::new();
    for (i, leaf) in cover.leaves.iter().enumerate() {
        let r = leaf.ring(b);
        let transcript: Vec<Value> = leaf
            .state
            .transcript
            .iter()
            .map(|d| match d {
                Decision::Invert(x) => json!({ "invert": elem(b, x) }),
                Decision::Small(x) => json!({ "small": elem(b, x) }),
            })
            .collect();
        let f_inverse = e
            .localize(&leaf.s_global)?
            .try_invert(&e.constant(&leaf.f))
            .ok_or_else(|| CliError::pipeline("f is not a unit of E[1/s]"))?;
        let mut v = json!({
            "transcript": transcript,
            "f": elem(b, &leaf.f),
            "s": loc(&r, &leaf.s),
            "s_global": loc(b, &leaf.s_global),
            "f_inverse": loc(b, &f_inverse),
            "presentation": presentation_json(&r, &leaf.presentation),
            "target": algebra(&leaf.target),
            "iso": iso(&r, &leaf.iso),
        });
        if let Some(pushed) = &pushed {
            let rl = &pushed[i];
            v["over_base"] = json!({
                "monicization": { "n": rl.monicization.n, "lift": poly(b, &rl.monicization.lift) },
                "presentation": presentation_json(b, &rl.presentation),
                "iso": iso(&r, &rl.iso),
            });
        }
        leaves.push(v);
    }
    let result = json!({
        "leaves": leaves,
        "s_certificate": locs(b, &cover.s_certificate),
        "f_certificate": locs(b, &cover.f_certificate),
    });
    let kind = if over_r { "global-cover-over-base" } else { "global-cover" };
    Ok(envelope(kind, problem, model_json(&model, Some(&jacobian_inverse)), result))
}

/// `E/mE = k[X]/(q)[1/h]` as a product of monogene separable pieces.
pub fn residual<R: LocalBase>(r: &R, problem: &Problem) -> Result<Value, CliError> {
    let (model, _) = build_model(r, problem)?;
    let k = r.residue_field().clone();
    let kr = PolyRing::new(k.clone());
    let e: &MonicLocalization<R> = &model.loc;
    let qbar = kr.from_coeffs(e.q().coeffs.iter().map(|c| r.residue(c)).collect());
    let hbar: Vec<_> = e.h().iter().map(|c| r.residue(c)).collect();
    let a = FiniteKAlgebra::monogenic(k.clone(), &qbar)?;
    let (idempotent, components) = match a.idempotent_of(&hbar) {
        IdempotentOutcome::TrivialLocalization { nilpotency } => (json!({ "nilpotency": nilpotency }), Vec::new()),
        IdempotentOutcome::Certificate(c) => {
            let comps = a.monogene_components_of(&c.e)?;
            let mut out = Vec::new();
            for comp in &comps {
                let sep = kr.is_separable(&comp.poly)?;
                let (sa, sb) = sep.bezout.ok_or_else(|| CliError::pipeline("component polynomial is not separable"))?;
                out.push(json!({
                    "idempotent": elems(&k, &comp.idempotent),
                    "generator": elems(&k, &comp.generator),
                    "poly": poly(&k, &comp.poly),
                    "idempotent_poly": poly(&k, &comp.idempotent_poly),
                    "bezout": [poly(&k, &sa), poly(&k, &sb)],
                }));
            }
            let cert = json!({ "s": elems(&k, &c.s), "n": c.n, "u": elems(&k, &c.u), "e": elems(&k, &c.e) });
            (cert, out)
        }
    };
    let result = json!({
        "modulus": poly(&k, &qbar),
        "inverted": elems(&k, &hbar),
        "idempotent": idempotent,
        "components": components,
    });
    Ok(envelope("residual-decomposition", problem, model_json(&model, None), result))
}

/// `Z[X]/(1 - t X)`, which is `Z[1/t]`.
pub fn demo_basic(t: i64) -> Problem {
    Problem {
        base: super::problem::BaseSpec::Z,
        vars: vec!["x".into()],
        relations: vec![format!("1 - {t}*x")],
        invert: None,
        jacobian_witness: None,
    }
}
