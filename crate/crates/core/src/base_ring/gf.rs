use num_bigint::BigInt;

use super::Fp;
use crate::error::ParseError;
use crate::poly::{factor_finite_field, Factorization, PolyError, PolyRing, UniPoly};
use crate::ring::{ElemCodec, Field, FiniteField, ParseCoeff, Ring};

/// The finite field `F_p[t]/(m)` for a monic irreducible `m` of degree `k`.
/// Elements are coordinate vectors of length exactly `k`.
#[derive(Clone, Debug)]
pub struct Gf {
    fp: Fp,
    modulus: UniPoly<u64>,
}

impl Gf {
    /// The caller guarantees irreducibility of `modulus`; it is made monic.
    pub fn new(fp: Fp, modulus: UniPoly<u64>) -> Self {
        let ring = PolyRing::new(fp.clone());
        let modulus = ring.make_monic(&modulus);
        assert!(modulus.deg() >= 1, "modulus must be nonconstant");
        Gf { fp, modulus }
    }

    pub fn prime_field(&self) -> &Fp {
        &self.fp
    }

    pub fn modulus(&self) -> &UniPoly<u64> {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    fn poly_ring(&self) -> PolyRing<Fp> {
        PolyRing::new(self.fp.clone())
    }

    fn pad(&self, p: &UniPoly<u64>) -> Vec<u64> {
        let mut v = p.coeffs.clone();
        v.resize(self.degree(), 0);
        v
    }

    pub fn from_poly(&self, p: &UniPoly<u64>) -> Vec<u64> {
        let r = self.poly_ring().rem_monic(p, &self.modulus).expect("monic modulus");
        self.pad(&r)
    }

    pub fn to_poly(&self, a: &[u64]) -> UniPoly<u64> {
        self.poly_ring().from_coeffs(a.to_vec())
    }
}

impl Ring for Gf {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.degree()]
    }

    fn one(&self) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }

    fn from_int(&self, n: i64) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = self.fp.from_int(n);
        v
    }

    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.fp.add(x, y)).collect()
    }

    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| self.fp.neg(x)).collect()
    }

    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let r = self.poly_ring();
        self.from_poly(&r.mul(&self.to_poly(a), &self.to_poly(b)))
    }

    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|x| *x == 0)
    }
}

impl Field for Gf {
    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            return None;
        }
        let r = self.poly_ring();
        let (g, s, _) = r.xgcd_monic(&self.to_poly(a), &self.modulus);
        debug_assert_eq!(g.deg(), 0);
        Some(self.from_poly(&s))
    }

    fn characteristic(&self) -> u64 {
        self.fp.p()
    }

    fn size(&self) -> Option<u128> {
        Some(self.order())
    }

    fn element_from_index(&self, mut i: u64) -> Vec<u64> {
        let p = self.fp.p();
        let mut v = self.zero();
        for c in v.iter_mut() {
            *c = i % p;
            i /= p;
        }
        v
    }

    fn factor(&self, f: &UniPoly<Vec<u64>>) -> Result<Factorization<Vec<u64>>, PolyError> {
        factor_finite_field(self, f)
    }
}

impl FiniteField for Gf {
    fn prime(&self) -> u64 {
        self.fp.p()
    }

    fn order(&self) -> u128 {
        (self.fp.p() as u128).pow(self.degree() as u32)
    }
}

impl ElemCodec for Gf {
    fn format(&self, a: &Vec<u64>) -> String {
        if self.degree() == 1 {
            return a[0].to_string();
        }
        let parts: Vec<String> = a.iter().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(","))
    }

    fn parse(&self, s: &str) -> Result<Vec<u64>, ParseError> {
        let s = s.trim();
        let body = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')).unwrap_or(s);
        let mut coeffs = Vec::new();
        for part in body.split(',') {
            let n: BigInt = part.trim().parse().map_err(|_| ParseError::new(format!("bad field element '{s}'")))?;
            coeffs.push(self.fp.from_bigint(&n));
        }
        Ok(self.from_poly(&UniPoly { coeffs }))
    }
}

impl ParseCoeff for Gf {
    fn from_ratio(&self, n: &BigInt, d: &BigInt) -> Option<Vec<u64>> {
        let c = self.fp.from_ratio(n, d)?;
        let mut v = self.zero();
        v[0] = c;
        Some(v)
    }
}

crate::field_local_ring!(Gf);
