//! JSON encoding of ring elements and presentation data. Coefficients are
//! strings in the ring's own text format ("n/d" for fractions).

use serde_json::{json, Value};

use crate::poly::{PolyRing, UniPoly};
use crate::presentation::{AlgebraMap, IsoCertificate, LocElem, MonicLocalization};
use crate::ring::{ElemCodec, Pid};

pub fn elem<R: ElemCodec>(r: &R, a: &R::Elem) -> Value {
    Value::String(r.format(a))
}

pub fn elems<R: ElemCodec>(r: &R, a: &[R::Elem]) -> Value {
    Value::Array(a.iter().map(|c| elem(r, c)).collect())
}

/// Coefficients from degree 0 upwards.
pub fn poly<R: ElemCodec>(r: &R, p: &UniPoly<R::Elem>) -> Value {
    elems(r, &p.coeffs)
}

pub fn loc<R: ElemCodec>(r: &R, a: &LocElem<R::Elem>) -> Value {
    json!({ "num": elems(r, &a.num), "pow": a.pow })
}

pub fn locs<R: ElemCodec>(r: &R, a: &[LocElem<R::Elem>]) -> Value {
    Value::Array(a.iter().map(|c| loc(r, c)).collect())
}

pub fn algebra<R: Pid + ElemCodec>(a: &MonicLocalization<R>) -> Value {
    json!({ "q": poly(a.base(), a.q()), "h": elems(a.base(), a.h()) })
}

pub fn map<R: ElemCodec>(r: &R, m: &AlgebraMap<R::Elem>) -> Value {
    json!({ "x": loc(r, &m.x), "h_inverse": loc(r, &m.h_inverse) })
}

pub fn iso<R: ElemCodec>(r: &R, c: &IsoCertificate<R::Elem>) -> Value {
    json!({ "forward": map(r, &c.forward), "backward": map(r, &c.backward) })
}

/// Decoding failure, with the JSON path of the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeError(pub String);

impl std::fmt::Display for DecodeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub type Decoded<T> = Result<T, DecodeError>;

fn err<T>(path: &str, what: impl std::fmt::Display) -> Decoded<T> {
    Err(DecodeError(format!("{path}: {what}")))
}

pub fn field<'a>(v: &'a Value, key: &str, path: &str) -> Decoded<&'a Value> {
    match v.get(key) {
        Some(x) => Ok(x),
        None => err(path, format!("missing field '{key}'")),
    }
}

pub fn str_field<'a>(v: &'a Value, key: &str, path: &str) -> Decoded<&'a str> {
    match field(v, key, path)?.as_str() {
        Some(s) => Ok(s),
        None => err(&format!("{path}.{key}"), "expected a string"),
    }
}

pub fn array<'a>(v: &'a Value, path: &str) -> Decoded<&'a Vec<Value>> {
    match v.as_array() {
        Some(a) => Ok(a),
        None => err(path, "expected an array"),
    }
}

pub fn usize_of(v: &Value, path: &str) -> Decoded<usize> {
    match v.as_u64() {
        Some(n) => Ok(n as usize),
        None => err(path, "expected a non-negative integer"),
    }
}

pub fn read_elem<R: ElemCodec>(r: &R, v: &Value, path: &str) -> Decoded<R::Elem> {
    match v.as_str() {
        Some(s) => r.parse(s).map_err(|e| DecodeError(format!("{path}: {e}"))),
        None => err(path, "expected a coefficient string"),
    }
}

pub fn read_elems<R: ElemCodec>(r: &R, v: &Value, path: &str) -> Decoded<Vec<R::Elem>> {
    array(v, path)?.iter().enumerate().map(|(i, c)| read_elem(r, c, &format!("{path}[{i}]"))).collect()
}

pub fn read_poly<R: ElemCodec>(r: &R, v: &Value, path: &str) -> Decoded<UniPoly<R::Elem>> {
    Ok(PolyRing::new(r.clone()).from_coeffs(read_elems(r, v, path)?))
}

pub fn read_loc<R: ElemCodec>(r: &R, v: &Value, path: &str) -> Decoded<LocElem<R::Elem>> {
    let num = read_elems(r, field(v, "num", path)?, &format!("{path}.num"))?;
    let pow = usize_of(field(v, "pow", path)?, &format!("{path}.pow"))?;
    Ok(LocElem { num, pow })
}

pub fn read_locs<R: ElemCodec>(r: &R, v: &Value, path: &str) -> Decoded<Vec<LocElem<R::Elem>>> {
    array(v, path)?.iter().enumerate().map(|(i, c)| read_loc(r, c, &format!("{path}[{i}]"))).collect()
}

pub fn read_algebra<R: Pid + ElemCodec>(r: &R, v: &Value, path: &str) -> Decoded<MonicLocalization<R>> {
    let q = read_poly(r, field(v, "q", path)?, &format!("{path}.q"))?;
    let h = read_poly(r, field(v, "h", path)?, &format!("{path}.h"))?;
    if h.coeffs.len() > q.deg() {
        return err(&format!("{path}.h"), "more coordinates than the degree of q");
    }
    MonicLocalization::new(r.clone(), q, &h).map_err(|e| DecodeError(format!("{path}: {e}")))
}

pub fn read_map<R: ElemCodec>(r: &R, v: &Value, path: &str) -> Decoded<AlgebraMap<R::Elem>> {
    Ok(AlgebraMap {
        x: read_loc(r, field(v, "x", path)?, &format!("{path}.x"))?,
        h_inverse: read_loc(r, field(v, "h_inverse", path)?, &format!("{path}.h_inverse"))?,
    })
}

pub fn read_iso<R: ElemCodec>(r: &R, v: &Value, path: &str) -> Decoded<IsoCertificate<R::Elem>> {
    Ok(IsoCertificate {
        forward: read_map(r, field(v, "forward", path)?, &format!("{path}.forward"))?,
        backward: read_map(r, field(v, "backward", path)?, &format!("{path}.backward"))?,
    })
}
