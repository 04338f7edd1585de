mod common;

use common::{model, poly};
use etale_core::base_ring::{Integers, Localized};
use etale_core::global::{cover_over_r, global_cover, monicize, replay, Decision, DEFAULT_DEPTH_LIMIT};
use etale_core::poly::PolyRing;
use etale_core::ring::Ring;
use num_bigint::BigInt;

#[test]
fn idempotent_algebra_needs_no_inversion() {
    let m = model(&Integers, "x^2 - x", None);
    let cover = global_cover(&Integers, &m, DEFAULT_DEPTH_LIMIT).unwrap();
    cover.verify().unwrap();
    assert_eq!(cover.leaves.len(), 2);
    let e = &m.loc;
    let x = &m.images[0];
    let mut found = [false, false];
    for leaf in &cover.leaves {
        assert_eq!(leaf.f, BigInt::from(1));
        let s = &leaf.s_global;
        // s is x or 1 - x up to a unit.
        for (i, t) in [x.clone(), e.sub(&e.one(), x)].iter().enumerate() {
            if e.is_zero(&e.mul(s, &e.sub(&e.one(), t))) && e.equal(&e.mul(s, t), s) {
                found[i] = true;
            }
        }
    }
    assert_eq!(found, [true, true]);
    for r in cover_over_r(&cover).unwrap() {
        assert_eq!(r.monicization.n, 0);
        r.verify(&Integers).unwrap();
    }
}

#[test]
fn trivial_presentation() {
    let m = model(&Integers, "x - 3", None);
    let cover = global_cover(&Integers, &m, DEFAULT_DEPTH_LIMIT).unwrap();
    cover.verify().unwrap();
    assert_eq!(cover.leaves.len(), 1);
    assert_eq!(cover.leaves[0].f, BigInt::from(1));
    assert!(m.loc.is_one(&cover.leaves[0].s_global));
}

#[test]
fn transcripts_replay_and_account_for_f() {
    for (rel, inv) in [("1 - 5*x", None), ("x^2 - x - 1", Some("5")), ("1 - 6*x", None), ("x^2 - 3", Some("6"))] {
        let m = model(&Integers, rel, inv);
        let cover = global_cover(&Integers, &m, DEFAULT_DEPTH_LIMIT).unwrap();
        cover.verify().unwrap();
        for leaf in &cover.leaves {
            let used: Vec<BigInt> = leaf
                .state
                .transcript
                .iter()
                .filter_map(|d| match d {
                    Decision::Invert(u) => Some(u.clone()),
                    Decision::Small(_) => None,
                })
                .collect();
            assert_eq!(used, leaf.state.inverted);
            let product: BigInt = used.iter().product();
            assert_eq!(product.magnitude(), leaf.f.magnitude(), "{rel}");
            let again = replay(&Integers, &m, &leaf.state).unwrap();
            assert!(again.iter().any(|l| l.state == leaf.state && l.f == leaf.f && l.s_global == leaf.s_global));
        }
        assert_eq!(global_cover(&Integers, &m, DEFAULT_DEPTH_LIMIT).unwrap().s_elements(), cover.s_elements());
    }
}

#[test]
fn monicize_linear_and_integral() {
    let f = BigInt::from(3);
    let l = Localized::new(Integers, f.clone());
    let p = PolyRing::new(l.clone()).from_coeffs(vec![l.frac(BigInt::from(-7), BigInt::from(3)).unwrap(), l.one()]);
    let m = monicize(&Integers, &p, &f).unwrap();
    assert_eq!(m.n, 1);
    assert_eq!(m.lift, poly(&Integers, &[-7, 1]));
    let p = PolyRing::new(l.clone()).from_coeffs(vec![l.from_int(4), l.from_int(-1), l.one()]);
    let m = monicize(&Integers, &p, &f).unwrap();
    assert_eq!(m.n, 0);
    assert_eq!(m.lift, poly(&Integers, &[4, -1, 1]));
}
