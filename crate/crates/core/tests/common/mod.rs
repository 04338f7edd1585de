#![allow(dead_code)]

use etale_core::base_ring::{Integers, Zloc};
use etale_core::cli::problem::{BaseSpec, Problem};
use etale_core::cli::{self, CliError};
use etale_core::poly::{PolyRing, UniPoly};
use etale_core::presentation::{EModel, FPAlgebra};
use etale_core::ring::{Pid, ParseCoeff, Ring};
use etale_core::standardize::Mode;
use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

pub fn zloc(p: i64) -> Zloc {
    Zloc::new(Integers, BigInt::from(p))
}

pub fn poly<R: Ring>(r: &R, c: &[i64]) -> UniPoly<R::Elem> {
    PolyRing::new(r.clone()).from_coeffs(c.iter().map(|&v| r.from_int(v)).collect())
}

pub fn model<R: Pid + ParseCoeff>(r: &R, rel: &str, invert: Option<&str>) -> EModel<R> {
    let fp = FPAlgebra::parse(r, &["x".into()], &[rel.into()], invert).unwrap();
    EModel::normalize(r, &fp).unwrap()
}

pub fn problem(base: BaseSpec, rel: &str, invert: Option<&str>) -> Problem {
    Problem {
        base,
        vars: vec!["x".into()],
        relations: vec![rel.into()],
        invert: invert.map(str::to_string),
        jacobian_witness: None,
    }
}

#[derive(Clone, Debug)]
pub enum Run {
    Local(Mode),
    Cover { over_r: bool },
    Residual,
    Demo(i64),
}

impl Run {
    pub fn run(&self, p: &Problem) -> Result<Value, CliError> {
        match self {
            Run::Local(mode) => cli::standardize(p, *mode),
            Run::Cover { over_r } => cli::cover(p, *over_r),
            Run::Residual => cli::decompose_residual(p),
            Run::Demo(t) => cli::demo_basic(*t),
        }
    }
}

/// Every command on a spread of bases.
pub fn suite() -> Vec<(Run, Problem)> {
    use BaseSpec::*;
    let ktloc = |at: &str| KtLoc { p: 3, at: at.into() };
    vec![
        (Run::Demo(5), problem(Z, "1 - 5*x", None)),
        (Run::Cover { over_r: false }, problem(Z, "x^2 - x", None)),
        (Run::Cover { over_r: true }, problem(Z, "x^2 - x - 1", Some("5"))),
        (Run::Cover { over_r: true }, problem(Z, "1 - 6*x", None)),
        (Run::Cover { over_r: false }, problem(Kt(5), "1 - t*x", None)),
        (Run::Local(Mode::Etale), problem(Zloc(5), "x^2 - 2", None)),
        (Run::Local(Mode::Etale), problem(Zloc(7), "x^2 - 2", None)),
        (Run::Local(Mode::Etale), problem(Zloc(5), "x^2 - x", Some("x"))),
        (Run::Local(Mode::Etale), problem(Zloc(5), "x^3 - x", None)),
        (Run::Local(Mode::Etale), problem(Zloc(5), "1 - 5*x", None)),
        (Run::Local(Mode::Etale), problem(Q, "x^2 - 2", None)),
        (Run::Local(Mode::Etale), problem(Fp(7), "x^3 - 2", None)),
        (Run::Local(Mode::Etale), problem(ktloc("t"), "x^2 - t - 1", None)),
        (Run::Local(Mode::Unramified), problem(Zloc(7), "x^2 - 2", None)),
        (Run::Local(Mode::Unramified), problem(Zloc(5), "x^2 - x - 5", None)),
        (Run::Local(Mode::FlatUnramified), problem(Zloc(5), "x^2 - 2", None)),
        (Run::Local(Mode::FlatUnramified), problem(Zloc(5), "x^2 - x", None)),
        (Run::Residual, problem(Zloc(7), "x^3 - x", None)),
        (Run::Residual, problem(Zloc(5), "x^2 - 5", Some("x"))),
        (Run::Residual, problem(Fp(5), "x^4 - 1", None)),
    ]
}

/// JSON pointers of every coefficient and exponent in `model` and `result`.
pub fn coefficient_paths(cert: &Value) -> Vec<String> {
    fn walk(v: &Value, p: String, out: &mut Vec<String>) {
        match v {
            Value::Object(m) => m.iter().for_each(|(k, x)| walk(x, format!("{p}/{k}"), out)),
            Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| walk(x, format!("{p}/{i}"), out)),
            Value::String(_) | Value::Number(_) => out.push(p),
            _ => {}
        }
    }
    let mut out = Vec::new();
    for key in ["model", "result"] {
        walk(&cert[key], format!("/{key}"), &mut out);
    }
    out
}

/// Replaces the value at `path` by a different one of the same type.
pub fn corrupt(cert: &mut Value, path: &str, rng: &mut ChaCha8Rng) {
    let v = cert.pointer_mut(path).expect("path exists");
    match v {
        Value::String(s) => {
            let replacement = match s.parse::<i64>() {
                Ok(n) => (n + rng.gen_range(1..5)).to_string(),
                Err(_) if s.as_str() == "1" => "2".to_string(),
                Err(_) => "1".to_string(),
            };
            *s = replacement;
        }
        Value::Number(n) => *v = Value::from(n.as_u64().expect("exponents are unsigned") + rng.gen_range(1..3)),
        _ => unreachable!("only coefficients are corrupted"),
    }
}
