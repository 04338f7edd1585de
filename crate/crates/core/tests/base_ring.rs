mod common;

use common::zloc;
use etale_core::base_ring::linalg::{mat_vec, solve_and_syzygies};
use etale_core::base_ring::{Fp, Integers, Kt, PrimePoint, Rationals};
use etale_core::poly::PolyRing;
use etale_core::ring::{ElemCodec, Field, Invertibility, LocalRing, Ring};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn check_contract<R: LocalRing>(r: &R, sample: impl Fn(&mut ChaCha8Rng) -> R::Elem) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let k = r.residue_field();
    for _ in 0..1000 {
        let x = sample(&mut rng);
        let y = sample(&mut rng);
        match r.decide_invertible(&x) {
            Invertibility::Inverse(inv) => {
                assert!(r.is_one(&r.mul(&x, &inv)));
                assert!(!k.is_zero(&r.residue(&x)));
            }
            Invertibility::InMaximal => assert!(k.is_zero(&r.residue(&x))),
        }
        assert!(k.equal(&r.residue(&r.add(&x, &y)), &k.add(&r.residue(&x), &r.residue(&y))));
        assert!(k.equal(&r.residue(&r.mul(&x, &y)), &k.mul(&r.residue(&x), &r.residue(&y))));
        let a = r.residue(&x);
        assert!(k.equal(&r.residue(&r.lift(&a)), &a));
    }
}

#[test]
fn zloc_examples() {
    let r = zloc(5);
    assert!(matches!(r.decide_invertible(&r.from_int(10)), Invertibility::InMaximal));
    let x = r.parse("7/3").unwrap();
    match r.decide_invertible(&x) {
        Invertibility::Inverse(inv) => assert!(r.equal(&inv, &r.parse("3/7").unwrap())),
        Invertibility::InMaximal => panic!("7/3 is a unit"),
    }
    // 7 * 3^-1 = 7 * 2 = 14 = 4 mod 5.
    let three_inv = (1..5u64).find(|b| 3 * b % 5 == 1).unwrap();
    assert_eq!(r.residue(&x), 7 * three_inv % 5);
    assert_eq!(r.residue(&x), 4);
    assert_eq!(r.residue(&r.from_int(5)), 0);
    assert!(r.parse("1/5").is_err());
    assert_eq!(r.format(&x), "7/3");
}

#[test]
fn fields_have_zero_maximal_ideal() {
    let f7 = Fp::new(7);
    for a in 1..7u64 {
        match f7.decide_invertible(&a) {
            Invertibility::Inverse(b) => assert_eq!(a * b % 7, 1),
            Invertibility::InMaximal => panic!("nonzero element of a field"),
        }
        assert_eq!(f7.residue(&a), a);
    }
    let q = Rationals::new(Integers);
    let x = q.parse("-4/9").unwrap();
    assert!(q.decide_invertible(&x).is_inverse());
    assert!(q.equal(&q.inv(&x).unwrap(), &q.parse("-9/4").unwrap()));
    assert!(q.maximal_generators().is_empty());
}

#[test]
fn lift_is_the_least_residue() {
    let r = zloc(7);
    for a in 0..7u64 {
        assert_eq!(r.lift(&a).num, BigInt::from(a));
    }
}

#[test]
fn random_elements_respect_the_contract() {
    let f7 = Fp::new(7);
    check_contract(&f7, |g| g.gen_range(0..7));
    let q = Rationals::new(Integers);
    check_contract(&q, |g| q.parse(&format!("{}/{}", g.gen_range(-50..50), g.gen_range(1..30))).unwrap());
    let z5 = zloc(5);
    check_contract(&z5, |g| {
        let d = loop {
            let d: i64 = g.gen_range(1..40);
            if d % 5 != 0 {
                break d;
            }
        };
        z5.parse(&format!("{}/{}", g.gen_range(-60..60), d)).unwrap()
    });
    let kt: Kt = PolyRing::new(Fp::new(3));
    let at = kt.parse("t^2 + 1").unwrap();
    let local = PrimePoint::new(kt.clone(), at);
    check_contract(&local, |g| {
        let num = kt.from_coeffs((0..4).map(|_| g.gen_range(0..3)).collect());
        loop {
            let d = kt.from_coeffs((0..3).map(|_| g.gen_range(0..3)).collect());
            if let Some(x) = local.frac(num.clone(), d) {
                break x;
            }
        }
    });
}

#[test]
fn solver_examples() {
    let f5 = Fp::new(5);
    let sol = solve_and_syzygies(&f5, &vec![vec![1, 2], vec![0, 1]], &[0, 0]).unwrap();
    assert_eq!(sol.x, vec![0, 0]);
    assert!(sol.syzygies.is_empty());

    let r = zloc(5);
    let sol = solve_and_syzygies(&r, &vec![vec![r.from_int(5)]], &[r.from_int(10)]).unwrap();
    assert!(r.equal(&sol.x[0], &r.from_int(2)));
    assert!(sol.syzygies.is_empty());

    let a = vec![vec![r.one(), r.one()]];
    let sol = solve_and_syzygies(&r, &a, &[r.one()]).unwrap();
    assert!(r.is_one(&mat_vec(&r, &a, &sol.x)[0]));
    assert_eq!(sol.syzygies.len(), 1);
    let z = &sol.syzygies[0];
    assert!(r.is_zero(&r.add(&z[0], &z[1])));
    assert!(r.decide_invertible(&z[0]).is_inverse());

    assert!(solve_and_syzygies(&r, &vec![vec![r.from_int(5)]], &[r.one()]).is_err());
}

#[test]
fn random_solves_verify() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let r = zloc(5);
    for _ in 0..200 {
        let (rows, cols) = (rng.gen_range(1..4), rng.gen_range(1..4));
        let a: Vec<Vec<_>> = (0..rows).map(|_| (0..cols).map(|_| r.from_int(rng.gen_range(-9..10))).collect()).collect();
        let x0: Vec<_> = (0..cols).map(|_| r.from_int(rng.gen_range(-9..10))).collect();
        let b = mat_vec(&r, &a, &x0);
        let sol = solve_and_syzygies(&r, &a, &b).unwrap();
        let bx = mat_vec(&r, &a, &sol.x);
        assert!(bx.iter().zip(&b).all(|(u, v)| r.equal(u, v)));
        for z in &sol.syzygies {
            assert!(mat_vec(&r, &a, z).iter().all(|v| r.is_zero(v)));
        }
    }
}
