use num_bigint::BigInt;

use super::{Fp, Gf, GlobalBase};
use crate::error::ParseError;
use crate::poly::{display_poly, parse_poly, PolyRing, UniPoly};
use crate::ring::{ElemCodec, Field, ParseCoeff};

/// `F_p[t]`.
pub type Kt = PolyRing<Fp>;

impl ElemCodec for PolyRing<Fp> {
    fn format(&self, a: &UniPoly<u64>) -> String {
        display_poly(a, "t", |c| (*c != 0).then(|| self.base().signed(*c).to_string()))
    }

    fn parse(&self, s: &str) -> Result<UniPoly<u64>, ParseError> {
        let m = parse_poly(self, &[], s)?;
        Ok(m.terms.values().next().cloned().unwrap_or_else(UniPoly::zero))
    }
}

impl ParseCoeff for PolyRing<Fp> {
    fn from_ratio(&self, n: &BigInt, d: &BigInt) -> Option<UniPoly<u64>> {
        Some(self.constant(self.base().from_ratio(n, d)?))
    }

    fn base_variable(&self, name: &str) -> Option<UniPoly<u64>> {
        (name == "t").then(|| self.x())
    }
}

impl GlobalBase for PolyRing<Fp> {
    type ResidueField = Gf;

    fn normal(&self, a: &UniPoly<u64>) -> UniPoly<u64> {
        self.make_monic(a)
    }

    fn prime_factors(&self, a: &UniPoly<u64>) -> Vec<UniPoly<u64>> {
        if a.deg() == 0 {
            return Vec::new();
        }
        let f = self.base().factor(a).expect("finite field factorization");
        let mut out: Vec<UniPoly<u64>> = f.factors.into_iter().map(|(g, _)| g).collect();
        out.sort_by(|x, y| (x.deg(), &x.coeffs).cmp(&(y.deg(), &y.coeffs)));
        out.dedup();
        out
    }

    fn residue_field_at(&self, prime: &UniPoly<u64>) -> Gf {
        Gf::new(self.base().clone(), prime.clone())
    }

    fn reduce_at(&self, field: &Gf, a: &UniPoly<u64>) -> Vec<u64> {
        field.from_poly(a)
    }

    fn lift_from(&self, field: &Gf, a: &Vec<u64>) -> UniPoly<u64> {
        field.to_poly(a)
    }

    fn from_bigint(&self, n: &BigInt) -> UniPoly<u64> {
        self.constant(self.base().from_bigint(n))
    }

    fn small_element(&self, mut i: u64) -> UniPoly<u64> {
        let p = self.base().p();
        let mut coeffs = Vec::new();
        while i > 0 {
            coeffs.push(i % p);
            i /= p;
        }
        self.from_coeffs(coeffs)
    }

    fn characteristic(&self) -> u64 {
        self.base().p()
    }

    fn variable_name(&self) -> Option<&'static str> {
        Some("t")
    }
}
