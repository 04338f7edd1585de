//! Problem descriptions and base-ring descriptors.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::base_ring::{is_prime, Fp, Integers, Kt, PrimePoint, Rationals, Zloc};
use crate::poly::PolyRing;
use crate::ring::ElemCodec;

use super::CliError;

/// A supported coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseSpec {
    Fp(u64),
    Q,
    Zloc(u64),
    /// `F_p[t]` localized at a monic irreducible `at`.
    KtLoc { p: u64, at: String },
    Z,
    Kt(u64),
}

impl BaseSpec {
    pub fn from_json(v: &Value) -> Result<Self, CliError> {
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| CliError::parse("base descriptor needs a string field 'kind'"))?;
        let prime = || -> Result<u64, CliError> {
            let p = v
                .get("p")
                .and_then(Value::as_u64)
                .ok_or_else(|| CliError::parse(format!("base '{kind}' needs an integer field 'p'")))?;
            if !is_prime(p) {
                return Err(CliError::parse(format!("{p} is not prime")));
            }
            Ok(p)
        };
        match kind {
            "Fp" => Ok(BaseSpec::Fp(prime()?)),
            "Q" => Ok(BaseSpec::Q),
            "Zloc" => Ok(BaseSpec::Zloc(prime()?)),
            "ktloc" => {
                let at = match v.get("at") {
                    None => "t".to_string(),
                    Some(a) => a.as_str().ok_or_else(|| CliError::parse("'at' must be a string"))?.to_string(),
                };
                Ok(BaseSpec::KtLoc { p: prime()?, at })
            }
            "Z" => Ok(BaseSpec::Z),
            "kt" => Ok(BaseSpec::Kt(prime()?)),
            other => Err(CliError::parse(format!("unknown base kind '{other}'"))),
        }
    }

    /// Short form used by the inline flags: `Fp:5`, `Q`, `Zloc:7`,
    /// `ktloc:3`, `ktloc:3:t^2+1`, `Z`, `kt:5`.
    pub fn from_flag(s: &str) -> Result<Self, CliError> {
        let mut parts = s.splitn(3, ':');
        let kind = parts.next().unwrap_or_default();
        let mut v = json!({ "kind": kind });
        if let Some(p) = parts.next() {
            let p: u64 = p.trim().parse().map_err(|_| CliError::parse(format!("bad prime in '{s}'")))?;
            v["p"] = json!(p);
        }
        if let Some(at) = parts.next() {
            v["at"] = json!(at);
        }
        Self::from_json(&v)
    }

    pub fn to_json(&self) -> Value {
        match self {
            BaseSpec::Fp(p) => json!({ "kind": "Fp", "p": p }),
            BaseSpec::Q => json!({ "kind": "Q" }),
            BaseSpec::Zloc(p) => json!({ "kind": "Zloc", "p": p }),
            BaseSpec::KtLoc { p, at } => json!({ "kind": "ktloc", "p": p, "at": at }),
            BaseSpec::Z => json!({ "kind": "Z" }),
            BaseSpec::Kt(p) => json!({ "kind": "kt", "p": p }),
        }
    }

    pub fn is_global(&self) -> bool {
        matches!(self, BaseSpec::Z | BaseSpec::Kt(_))
    }
}

pub fn zloc(p: u64) -> Zloc {
    PrimePoint::new(Integers, BigInt::from(p))
}

pub fn ktloc(p: u64, at: &str) -> Result<PrimePoint<Kt>, CliError> {
    let kt: Kt = PolyRing::new(Fp::new(p));
    let g = kt.parse(at).map_err(|e| CliError::parse(format!("base point '{at}': {e}")))?;
    if g.deg() == 0 || kt.factor(&g).map(|f| f.factors.len() != 1 || f.factors[0].1 != 1).unwrap_or(true) {
        return Err(CliError::parse(format!("'{at}' is not irreducible over F_{p}")));
    }
    Ok(PrimePoint::new(kt, g))
}

pub fn rationals() -> Rationals {
    Rationals::new(Integers)
}

/// Calls `$body` with `$r` bound to the local ring of the descriptor.
#[macro_export]
#[doc(hidden)]
macro_rules! with_local_base {
    ($spec:expr, |$r:ident| $body:expr) => {{
        use $crate::cli::problem::BaseSpec;
        match $spec {
            BaseSpec::Fp(p) => {
                let $r = $crate::base_ring::Fp::new(*p);
                $body
            }
            BaseSpec::Q => {
                let $r = $crate::cli::problem::rationals();
                $body
            }
            BaseSpec::Zloc(p) => {
                let $r = $crate::cli::problem::zloc(*p);
                $body
            }
            BaseSpec::KtLoc { p, at } => {
                let $r = $crate::cli::problem::ktloc(*p, at)?;
                $body
            }
            BaseSpec::Z | BaseSpec::Kt(_) => Err($crate::cli::CliError::unsupported(
                "this command needs a local base (Fp, Q, Zloc or ktloc)",
            )),
        }
    }};
}

/// Calls `$body` with `$b` bound to the global base of the descriptor.
#[macro_export]
#[doc(hidden)]
macro_rules! with_global_base {
    ($spec:expr, |$b:ident| $body:expr) => {{
        use $crate::cli::problem::BaseSpec;
        match $spec {
            BaseSpec::Z => {
                let $b = $crate::base_ring::Integers;
                $body
            }
            BaseSpec::Kt(p) => {
                let $b: $crate::base_ring::Kt = $crate::poly::PolyRing::new($crate::base_ring::Fp::new(*p));
                $body
            }
            _ => Err($crate::cli::CliError::unsupported("this command needs a global base (Z or kt)")),
        }
    }};
}

/// The input file: a base, an algebra presentation and an optional witness
/// for the inverse of the Jacobian determinant.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default)]
    pub base: Value,
    #[serde(default)]
    pub vars: Vec<String>,
    #[serde(default)]
    pub relations: Vec<String>,
    #[serde(default)]
    pub invert: Option<String>,
    /// A polynomial in the variables and `z`, the inverse of `invert`.
    #[serde(default)]
    pub jacobian_witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub base: BaseSpec,
    pub vars: Vec<String>,
    pub relations: Vec<String>,
    pub invert: Option<String>,
    pub jacobian_witness: Option<String>,
}

impl Problem {
    pub fn from_file(f: ProblemFile) -> Result<Self, CliError> {
        Ok(Problem {
            base: BaseSpec::from_json(&f.base)?,
            vars: f.vars,
            relations: f.relations,
            invert: f.invert,
            jacobian_witness: f.jacobian_witness,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, CliError> {
        let f: ProblemFile = serde_json::from_value(v.clone()).map_err(|e| CliError::parse(format!("problem: {e}")))?;
        Self::from_file(f)
    }

    /// The `input` block of a certificate.
    pub fn to_json(&self) -> Value {
        json!({
            "vars": self.vars,
            "relations": self.relations,
            "invert": self.invert,
            "jacobian_witness": self.jacobian_witness,
        })
    }
}
