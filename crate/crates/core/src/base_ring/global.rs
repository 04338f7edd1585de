use num_bigint::BigInt;

use super::Frac;
use crate::poly::{Factorization, PolyError, UniPoly};
use crate::ring::{ElemCodec, FiniteField, LocalRing, ParseCoeff, Pid, Ring};

/// A global base ring (Z or F_p[t]): a Euclidean domain with computable
/// prime factorization and finite residue fields.
pub trait GlobalBase: Pid + ElemCodec + ParseCoeff {
    type ResidueField: FiniteField + LocalRing<Residue = Self::ResidueField> + ElemCodec + ParseCoeff;

    /// Canonical associate (positive integer, monic polynomial).
    fn normal(&self, a: &Self::Elem) -> Self::Elem;

    /// Distinct normalized prime factors of a nonzero element.
    fn prime_factors(&self, a: &Self::Elem) -> Vec<Self::Elem>;

    fn residue_field_at(&self, prime: &Self::Elem) -> Self::ResidueField;

    fn reduce_at(&self, field: &Self::ResidueField, a: &Self::Elem) -> <Self::ResidueField as Ring>::Elem;

    fn lift_from(&self, field: &Self::ResidueField, a: &<Self::ResidueField as Ring>::Elem) -> Self::Elem;

    fn from_bigint(&self, n: &BigInt) -> Self::Elem;

    /// Deterministic enumeration of small elements.
    fn small_element(&self, i: u64) -> Self::Elem;

    fn characteristic(&self) -> u64;

    /// Text for `num/den`.
    fn format_frac(&self, num: &Self::Elem, den: &Self::Elem) -> String {
        format!("({})/({})", self.format(num), self.format(den))
    }

    /// Factorization over the fraction field, when a backend exists.
    fn frac_factor(&self, _f: &UniPoly<Frac<Self::Elem>>) -> Result<Factorization<Frac<Self::Elem>>, PolyError> {
        Err(PolyError::Unsupported("no factorization backend for this fraction field".into()))
    }

    fn variable_name(&self) -> Option<&'static str> {
        None
    }

    /// Multiplicity of `prime` in a nonzero element.
    fn valuation(&self, a: &Self::Elem, prime: &Self::Elem) -> u32 {
        if self.is_zero(a) {
            return u32::MAX;
        }
        let mut a = a.clone();
        let mut v = 0;
        while let Some(q) = self.div_exact(&a, prime) {
            a = q;
            v += 1;
        }
        v
    }
}
