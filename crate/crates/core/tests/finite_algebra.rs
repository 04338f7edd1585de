mod common;

use common::{poly, zloc};
use etale_core::base_ring::{Integers, Zloc};
use etale_core::finite_algebra::FiniteRAlgebra;
use etale_core::poly::PolyRing;
use etale_core::ring::{LocalRing, Ring};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_monic(r: &Zloc, rng: &mut ChaCha8Rng, d: usize) -> etale_core::poly::UniPoly<<Zloc as Ring>::Elem> {
    let mut c: Vec<i64> = (0..d).map(|_| rng.gen_range(-12..13)).collect();
    c.push(1);
    poly(r, &c)
}

#[test]
fn residue_algebra_reduces_the_table() {
    let r = zloc(5);
    let b = FiniteRAlgebra::monogenic(r.clone(), &poly(&r, &[-5, -1, 1])).unwrap();
    let a = b.residue_algebra().unwrap();
    assert_eq!(a.dim(), 2);
    let x = a.basis(1);
    // x^2 = x + 5 = x mod 5.
    assert_eq!(a.mul(&x, &x), x);
}

#[test]
fn witness_on_a_product() {
    let r = zloc(5);
    let labels = vec!["e0".to_string(), "e1".to_string()];
    let table = vec![
        vec![vec![r.one(), r.zero()], vec![r.zero(), r.zero()]],
        vec![vec![r.zero(), r.zero()], vec![r.zero(), r.one()]],
    ];
    let b = FiniteRAlgebra::new(r.clone(), labels, table, vec![r.one(), r.one()]).unwrap();
    let y = vec![r.zero(), r.one()];
    let w = b.nakayama_witness(&poly(&r, &[1]), &y).unwrap();
    b.check_witness(&w).unwrap();
    assert!(w.mu.iter().flatten().all(|c| r.in_maximal(c)));
    let loc = b.nakayama_localizer(&w);
    assert_eq!(b.residue_poly(&loc.p), b.residue_poly(&poly(&r, &[1])));
    b.check_localizer(&y, &loc).unwrap();
    assert_eq!(b.monic_from_generation(&y, 2).unwrap(), poly(&r, &[0, -1, 1]));
}

#[test]
fn monic_from_generation_recovers_the_relation() {
    let b = FiniteRAlgebra::monogenic(Integers, &poly(&Integers, &[-5, -1, 1])).unwrap();
    let q = b.monic_from_generation(&b.basis(1), 2).unwrap();
    assert_eq!(q, poly(&Integers, &[-5, -1, 1]));
    assert!(b.monic_from_generation(&b.basis(1), 1).is_err());
}

#[test]
fn random_witnesses_and_localizers() {
    let r = zloc(5);
    let ring = PolyRing::new(r.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..100 {
        let d = rng.gen_range(1..5);
        let q = random_monic(&r, &mut rng, d);
        let b = FiniteRAlgebra::monogenic(r.clone(), &q).unwrap();
        // y = x + 5 z generates residually.
        let z: Vec<_> = (0..d).map(|_| r.from_int(rng.gen_range(-9..10))).collect();
        let y = b.add(&b.basis(1.min(d - 1)), &b.scale(&z, &r.from_int(5)));
        let chi = b.char_poly(&y);
        assert!(ring.is_monic(&chi) && chi.deg() == d);
        assert!(b.is_zero(&b.eval_poly(&chi, &y)));
        let e = random_monic(&r, &mut rng, 1);
        let Ok(w) = b.nakayama_witness(&e, &y) else { continue };
        b.check_witness(&w).unwrap();
        let loc = b.nakayama_localizer(&w);
        b.check_localizer(&y, &loc).unwrap();
        // Residually P = e^d.
        let ed = (0..d).fold(ring.one(), |acc, _| ring.mul(&acc, &e));
        assert_eq!(b.residue_poly(&loc.p), b.residue_poly(&ed));
        let x: Vec<_> = (0..d).map(|_| r.from_int(rng.gen_range(-9..10))).collect();
        let v = b.localizer_combination(&loc, &x);
        assert!(b.equal(&b.mul(&b.eval_poly(&loc.p, &y), &x), &b.eval_poly(&v, &y)));
    }
}
