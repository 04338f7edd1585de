mod common;

use common::{poly, zloc};
use etale_core::base_ring::{Fp, Integers, Rationals};
use etale_core::poly::{parse_poly, PolyError, PolyRing, UniPoly};
use etale_core::ring::{Field, Ring};
use proptest::prelude::*;

fn f5() -> Fp {
    Fp::new(5)
}

#[test]
fn divmod_examples() {
    let r = zloc(5);
    let ring = PolyRing::new(r.clone());
    let (q, rem) = ring.divmod_monic(&poly(&r, &[0, 0, 0, 1]), &poly(&r, &[0, -1, 1])).unwrap();
    assert_eq!(q, poly(&r, &[1, 1]));
    assert_eq!(rem, poly(&r, &[0, 1]));
    let d = poly(&r, &[3, 0, 1]);
    let (q, rem) = ring.divmod_monic(&d, &d).unwrap();
    assert_eq!(q, poly(&r, &[1]));
    assert!(rem.is_zero_poly());
    let (q, rem) = ring.divmod_monic(&poly(&r, &[7]), &d).unwrap();
    assert!(q.is_zero_poly());
    assert_eq!(rem, poly(&r, &[7]));
    assert_eq!(ring.divmod_monic(&d, &poly(&r, &[1, 2])), Err(PolyError::NonMonic));
}

#[test]
fn gcd_examples() {
    let k = f5();
    let ring = PolyRing::new(k.clone());
    assert_eq!(ring.gcd_monic(&poly(&k, &[-1, 0, 1]), &poly(&k, &[0, -1, 1])).unwrap(), poly(&k, &[-1, 1]));
    let f = poly(&k, &[1, 2, 3]);
    assert_eq!(ring.gcd_monic(&f, &f).unwrap(), ring.make_monic(&f));
    assert_eq!(ring.gcd_monic(&poly(&k, &[0, -1, 0, 1]), &poly(&k, &[0, -1, 1])).unwrap(), poly(&k, &[0, -1, 1]));
    assert_eq!(ring.gcd_monic(&UniPoly::zero(), &UniPoly::zero()), Err(PolyError::BothZero));
}

#[test]
fn separability_examples() {
    let k = f5();
    let ring = PolyRing::new(k.clone());
    let p = poly(&k, &[-2, 0, 1]);
    let sep = ring.is_separable(&p).unwrap();
    assert!(sep.separable);
    let (a, b) = sep.bezout.unwrap();
    let one = ring.add(&ring.mul(&a, &p), &ring.mul(&b, &ring.derivative(&p)));
    assert!(ring.is_one(&one));
    assert!(!ring.is_separable(&poly(&k, &[0, 0, 1])).unwrap().separable);
    assert!(ring.is_separable(&poly(&k, &[0, 1])).unwrap().separable);
    assert_eq!(ring.is_separable(&poly(&k, &[3])).unwrap_err(), PolyError::Constant);
}

#[test]
fn factor_examples() {
    let f7 = Fp::new(7);
    let ring = PolyRing::new(f7.clone());
    let f = ring.factor(&poly(&f7, &[-2, 0, 1])).unwrap();
    let mut factors: Vec<_> = f.factors.iter().map(|(g, m)| (g.coeffs.clone(), *m)).collect();
    factors.sort();
    // 3^2 = 9 = 2 and 4^2 = 16 = 2 mod 7.
    assert_eq!(factors, vec![(vec![3, 1], 1), (vec![4, 1], 1)]);
    let k = f5();
    let ring5 = PolyRing::new(k.clone());
    let squares: Vec<u64> = (0..5).map(|x| x * x % 5).collect();
    assert!(!squares.contains(&2));
    let f = ring5.factor(&poly(&k, &[-2, 0, 1])).unwrap();
    assert_eq!(f.factors.len(), 1);
    let f = ring5.factor(&poly(&k, &[0, -1, 1])).unwrap();
    let mut factors: Vec<_> = f.factors.iter().map(|(g, _)| g.coeffs.clone()).collect();
    factors.sort();
    assert_eq!(factors, vec![vec![0, 1], vec![4, 1]]);
}

#[test]
fn rational_factorization() {
    let q = Rationals::new(Integers);
    let ring = PolyRing::new(q.clone());
    let p = ring.parse_in(&q, "2*x^3 - 3*x^2 - 3*x + 2");
    let f = ring.factor(&p).unwrap();
    assert!(ring.equal(&f.expand(&ring), &p));
    assert_eq!(f.factors.len(), 3);
    let p = ring.parse_in(&q, "x^4 + 1");
    assert_eq!(ring.factor(&p).unwrap().factors.len(), 1);
}

trait ParseIn<R: Ring> {
    fn parse_in(&self, r: &R, s: &str) -> UniPoly<R::Elem>;
}

impl<R: etale_core::ring::ParseCoeff> ParseIn<R> for PolyRing<R> {
    fn parse_in(&self, r: &R, s: &str) -> UniPoly<R::Elem> {
        let m = parse_poly(r, &["x".to_string()], s).unwrap();
        self.from_coeffs(m.as_univariate(0, &r.zero()).unwrap())
    }
}

#[test]
fn parser_syntax() {
    let q = Rationals::new(Integers);
    let ring = PolyRing::new(q.clone());
    let p = ring.parse_in(&q, "x^2 - x - 5");
    assert_eq!(p, poly(&q, &[-5, -1, 1]));
    let p = ring.parse_in(&q, "(x + 1/2)^2");
    assert!(ring.equal(&p, &ring.from_coeffs(vec![q.inv(&q.from_int(4)).unwrap(), q.one(), q.one()])));
    assert!(parse_poly(&q, &["x".to_string()], "x^ + 1").is_err());
    assert!(parse_poly(&q, &["x".to_string()], "y + 1").is_err());
}

fn fp_poly(max_deg: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..7, 0..=max_deg + 1)
}

proptest! {
    #[test]
    fn divmod_reconstructs(f in fp_poly(7), mut q in fp_poly(4)) {
        let k = Fp::new(7);
        let ring = PolyRing::new(k.clone());
        q.push(1);
        let (f, q) = (ring.from_coeffs(f), ring.from_coeffs(q));
        let (quot, rem) = ring.divmod_monic(&f, &q).unwrap();
        prop_assert!(rem.is_zero_poly() || rem.deg() < q.deg());
        prop_assert!(ring.equal(&ring.add(&ring.mul(&quot, &q), &rem), &f));
    }

    #[test]
    fn divmod_over_integers(f in prop::collection::vec(-30i64..30, 0..7), mut q in prop::collection::vec(-9i64..9, 0..4)) {
        q.push(1);
        let ring = PolyRing::new(Integers);
        let (f, q) = (poly(&Integers, &f), poly(&Integers, &q));
        let (quot, rem) = ring.divmod_monic(&f, &q).unwrap();
        prop_assert!(rem.is_zero_poly() || rem.deg() < q.deg());
        prop_assert!(ring.equal(&ring.add(&ring.mul(&quot, &q), &rem), &f));
    }

    #[test]
    fn gcd_divides_and_bezout(f in fp_poly(6), g in fp_poly(6)) {
        let k = Fp::new(7);
        let ring = PolyRing::new(k.clone());
        let (f, g) = (ring.from_coeffs(f), ring.from_coeffs(g));
        prop_assume!(!(f.is_zero_poly() && g.is_zero_poly()));
        let d = ring.gcd_monic(&f, &g).unwrap();
        prop_assert!(ring.is_monic(&d));
        prop_assert!(ring.divides(&d, &f) && ring.divides(&d, &g));
        let (d2, s, t) = ring.xgcd_monic(&f, &g);
        prop_assert!(ring.equal(&d, &d2));
        prop_assert!(ring.equal(&ring.add(&ring.mul(&s, &f), &ring.mul(&t, &g)), &d));
    }

    #[test]
    fn factorization_multiplies_back(f in fp_poly(8)) {
        let k = Fp::new(7);
        let ring = PolyRing::new(k.clone());
        let f = ring.from_coeffs(f);
        prop_assume!(!f.is_zero_poly());
        let fac = ring.factor(&f).unwrap();
        prop_assert!(ring.equal(&fac.expand(&ring), &f));
        for (g, _) in &fac.factors {
            prop_assert!(ring.is_monic(g));
            if g.deg() == 1 {
                let root = k.neg(&g.coeffs[0]);
                prop_assert!(k.is_zero(&ring.eval(&f, &root)));
            } else {
                prop_assert!((0..7u64).all(|x| !k.is_zero(&ring.eval(g, &x))));
            }
        }
    }
}
