mod common;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};

use common::{coefficient_paths, corrupt, model, poly, suite, zloc};
use etale_core::base_ring::linalg::{mat_mul, Matrix};
use etale_core::base_ring::{Fp, Integers, Localized};
use etale_core::cli::verify::verify;
use etale_core::finite_algebra::FiniteRAlgebra;
use etale_core::flatness::{
    compare_results, etale_from_flat_unramified, flat_precheck, injectivity_witness, FreeSequence,
};
use etale_core::global::{cover_over_r, global_cover, monicize, Decision, DEFAULT_DEPTH_LIMIT};
use etale_core::poly::PolyRing;
use etale_core::presentation::{AlgebraMap, FPAlgebra, MonicLocalization};
use etale_core::residual::{FiniteKAlgebra, IdempotentOutcome};
use etale_core::ring::{Invertibility, LocalRing, Pid, Ring};
use etale_core::standardize::{
    check_residual_comaximality, idempotent_splitting, monic_reduction_loop, standardize_local, Mode, Surjection,
};
use etale_core::AlgebraError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// `Z[X]/(1 - 5X)` over `Z`: one leaf with `s = 1`, `f = 5`, and `X * 5 = 1`.
fn basic_example() {
    let m = model(&Integers, "1 - 5*x", None);
    let cover = global_cover(&Integers, &m, DEFAULT_DEPTH_LIMIT).unwrap();
    cover.verify().unwrap();
    assert_eq!(cover.leaves.len(), 1);
    let leaf = &cover.leaves[0];
    assert_eq!(leaf.f, big(5));
    assert_eq!(leaf.state.transcript, vec![Decision::Invert(big(5))]);
    let e = &m.loc;
    assert!(e.is_one(&leaf.s_global));
    assert!(e.is_one(&e.combination(&cover.s_certificate, std::slice::from_ref(&leaf.s_global))));
    // The f-certificate is X itself: X * 5 = 1 in E.
    let x = &m.images[0];
    assert!(e.equal(&cover.f_certificate[0], x));
    assert!(e.is_one(&e.mul(x, &e.constant(&big(5)))));
    // E = R[1/5]: the presentation over R is R[X]/(X - 1)[1/G] with G a power of 5.
    let over = cover_over_r(&cover).unwrap();
    over[0].verify(&Integers).unwrap();
    assert_eq!(over[0].presentation.q, poly(&Integers, &[-1, 1]));
    let g = &over[0].presentation.g;
    assert_eq!(g.deg(), 0);
    let mut c = g.coeffs[0].clone();
    while c.is_multiple_of(&big(5)) {
        c /= 5;
    }
    assert_eq!(c, big(1));
    leaf.iso.verify(&leaf.presentation.algebra(&leaf.ring(&Integers)).unwrap(), &leaf.target).unwrap();

    let cert = etale_core::cli::demo_basic(5).unwrap();
    assert!(verify(&cert).ok());
    let r = &cert["result"];
    assert_eq!(r["leaves"].as_array().unwrap().len(), 1);
    assert_eq!(r["leaves"][0]["f"], "5");
    assert_eq!(r["leaves"][0]["s_global"], serde_json::json!({ "num": ["1"], "pow": 0 }));
    assert_eq!(r["f_certificate"][0], cert["model"]["images"][0]);
}

/// Number of square roots of 2 modulo `p`, by enumeration.
fn roots_of_two(p: i64) -> usize {
    (0..p).filter(|x| (x * x - 2).rem_euclid(p) == 0).count()
}

fn local_shape() {
    for p in [5, 7] {
        let expected = match roots_of_two(p) {
            0 => 1,
            2 => 2,
            n => panic!("unexpected root count {n}"),
        };
        let r = zloc(p);
        let m = model(&r, "x^2 - 2", None);
        let res = standardize_local(&m, Mode::Etale, None).unwrap();
        assert_eq!(res.branches.len(), expected, "branches over Z_({p})");
        for br in &res.branches {
            let pres = &br.splitting.as_ref().unwrap().presentation;
            assert!(PolyRing::new(r.clone()).is_monic(&pres.q));
            pres.check(&r).unwrap();
            let s = pres.algebra(&r).unwrap();
            let dq = s.from_poly(&PolyRing::new(r.clone()).derivative(&pres.q));
            assert!(s.is_one(&s.mul(&pres.cert, &dq)));
        }
        check_residual_comaximality(&m.loc, &res.elements(), &res.comaximality).unwrap();
    }
    assert_eq!(roots_of_two(5), 0);
    assert_eq!(roots_of_two(7), 2);
}

/// Arithmetic in a finite algebra straight from its structure constants.
struct Table {
    p: u64,
    table: Vec<Vec<Vec<u64>>>,
}

impl Table {
    fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let n = x.len();
        let mut out = vec![0u64; n];
        for i in 0..n {
            for j in 0..n {
                let c = x[i] * y[j] % self.p;
                if c == 0 {
                    continue;
                }
                for (l, o) in out.iter_mut().enumerate() {
                    *o = (*o + c * self.table[i][j][l]) % self.p;
                }
            }
        }
        out
    }

    fn pow(&self, x: &[u64], k: usize, one: &[u64]) -> Vec<u64> {
        (0..k).fold(one.to_vec(), |acc, _| self.mul(&acc, x))
    }

    /// Dimension of the span of `x * b_i`.
    fn ideal_dim(&self, x: &[u64]) -> usize {
        let n = x.len();
        let rows: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut b = vec![0; n];
                b[i] = 1;
                self.mul(x, &b)
            })
            .collect();
        rank_mod(rows, self.p)
    }
}

fn rank_mod(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let inv = |a: u64| (1..p).find(|b| a * b % p == 1).unwrap();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let iv = inv(m[rank][c]);
        let pivot: Vec<u64> = m[rank].iter().map(|v| v * iv % p).collect();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c];
                for (v, pv) in row.iter_mut().zip(&pivot) {
                    *v = (*v + p * p - f * pv % p) % p;
                }
            }
        }
        m[rank] = pivot;
        rank += 1;
    }
    rank
}

fn random_monic(rng: &mut ChaCha8Rng, k: &Fp, d: usize) -> Vec<u64> {
    let mut c: Vec<u64> = (0..d).map(|_| rng.gen_range(0..k.p())).collect();
    c.push(1);
    c
}

fn idempotent_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut trivial = 0;
    for _ in 0..200 {
        let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        let k = Fp::new(p);
        let kr = PolyRing::new(k.clone());
        let (a, one) = if rng.gen_bool(0.5) {
            let d = rng.gen_range(1..=5);
            let f = kr.from_coeffs(random_monic(&mut rng, &k, d));
            let mut one = vec![0; d];
            one[0] = 1;
            (FiniteKAlgebra::monogenic(k.clone(), &f).unwrap(), one)
        } else {
            let d1 = rng.gen_range(1..=4);
            let d2 = rng.gen_range(1..=5 - d1);
            let f1 = kr.from_coeffs(random_monic(&mut rng, &k, d1));
            let f2 = kr.from_coeffs(random_monic(&mut rng, &k, d2));
            let a1 = FiniteKAlgebra::monogenic(k.clone(), &f1).unwrap();
            let a2 = FiniteKAlgebra::monogenic(k.clone(), &f2).unwrap();
            let mut one = vec![0; d1 + d2];
            one[0] = 1;
            one[d1] = 1;
            (FiniteKAlgebra::product(&a1, &a2), one)
        };
        let t = Table { p, table: a.table().clone() };
        let n = a.dim();
        let s: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        // A[1/s] = s^n A, since the images s^k A stabilize after dim A steps.
        let saturated = t.ideal_dim(&t.pow(&s, n, &one));
        match a.idempotent_of(&s) {
            IdempotentOutcome::Certificate(c) => {
                let su = t.mul(&c.s, &c.u);
                let one_minus: Vec<u64> = one.iter().zip(&su).map(|(a, b)| (a + p - b) % p).collect();
                assert!(t.mul(&t.pow(&s, c.n, &one), &one_minus).iter().all(|&v| v == 0));
                assert_eq!(c.e, t.pow(&su, c.n, &one));
                assert_eq!(t.mul(&c.e, &c.e), c.e);
                assert_eq!(t.ideal_dim(&c.e), saturated);
                assert_eq!(a.ideal_dim(&c.e), saturated);
                assert!(saturated > 0);
            }
            IdempotentOutcome::TrivialLocalization { nilpotency } => {
                trivial += 1;
                assert_eq!(saturated, 0);
                assert!(t.pow(&s, nilpotency, &one).iter().all(|&v| v == 0));
                assert!(t.pow(&s, nilpotency - 1, &one).iter().any(|&v| v != 0));
            }
        }
    }
    assert!(trivial > 0 && trivial < 200);
}

fn reduction_loop() {
    let r = zloc(5);
    let b = FiniteRAlgebra::monogenic(r.clone(), &poly(&r, &[0, -1, 1])).unwrap();
    let y = b.basis(1);
    let f5 = r.residue_field().clone();
    let p = poly(&f5, &[-1, 1]);
    let g = poly(&r, &[0, 1]);
    let red = monic_reduction_loop(&b, &y, &poly(&r, &[0, -1, 0, 1]), &g, &p, 1).unwrap();
    assert_eq!(red.degrees, vec![3, 2]);
    assert_eq!(red.steps(), 1);
    assert_eq!(red.q, poly(&r, &[0, -1, 1]));
    red.check(&b, &y, &g, &p, 1).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut instances = 0;
    while instances < 60 {
        let p = [3i64, 5, 7][rng.gen_range(0..3)];
        let r = zloc(p);
        let kr = PolyRing::new(r.residue_field().clone());
        let d = rng.gen_range(2..=4);
        let mut c: Vec<i64> = (0..d).map(|_| rng.gen_range(-12..=12)).collect();
        c.push(1);
        let q = poly(&r, &c);
        let qbar = kr.from_coeffs(q.coeffs.iter().map(|x| r.residue(x)).collect());
        if !kr.is_separable(&qbar).unwrap().separable {
            continue;
        }
        instances += 1;
        let rel: Vec<String> = c.iter().enumerate().map(|(i, v)| format!("({v})*x^{i}")).collect();
        let m = model(&r, &rel.join(" + "), None);
        let res = standardize_local(&m, Mode::Unramified, None).unwrap();
        for br in &res.branches {
            let degs = &br.reduction.degrees;
            assert!(degs.windows(2).all(|w| w[1] < w[0]), "strict decrease before the fixed point: {degs:?}");
            assert!(br.reduction.steps() <= degs[0]);
            let g = PolyRing::new(r.clone()).rem_monic(&br.branch.g, &br.char_poly).unwrap();
            let res_poly = |f: &etale_core::poly::UniPoly<_>| kr.from_coeffs(f.coeffs.iter().map(|x| r.residue(x)).collect());
            let lhs = kr.mul(&res_poly(&br.reduction.q), &br.reduction.quotient);
            let rhs = kr.mul(&kr.pow(&res_poly(&g), br.exponent.n as u64), &br.branch.component.poly);
            assert!(kr.equal(&lhs, &rhs));
        }
    }
}

fn splitting() {
    let r = zloc(5);
    let source = MonicLocalization::new(r.clone(), poly(&r, &[5, -6, 1]), &poly(&r, &[0, 1])).unwrap();
    let target = MonicLocalization::free(r.clone(), poly(&r, &[0, 1])).unwrap();
    let a1 = source.sub(&source.x(), &source.one());
    assert!(source.equal(&source.mul(&a1, &a1), &source.scale(&a1, &r.from_int(4))));
    let map = AlgebraMap::from_x(&source, &target, target.one()).unwrap();
    let pre = AlgebraMap { x: source.zero(), h_inverse: source.one() };
    let surj = Surjection::new(source.clone(), target.clone(), map, pre).unwrap();
    let sp = idempotent_splitting(&surj).unwrap();
    assert!(target.is_one(&surj.image(&sp.f)));
    let e = source.sub(&source.one(), &sp.f);
    assert!(source.equal(&source.mul(&e, &e), &e));
    assert!(!sp.kernel.is_empty());
    let localized = source.localize(&sp.f).unwrap();
    for c in &sp.kernel {
        assert!(localized.is_zero(&source.transport(c, &sp.f)));
        assert!(source.is_zero(&source.mul(c, &sp.f)));
    }
    sp.iso.verify(&sp.localized_source, &sp.target).unwrap();
    assert!(sp.target.same_presentation(&target));
}

fn ratio(n: &BigInt, d: &BigInt) -> BigRational {
    BigRational::new(n.clone(), d.clone())
}

fn monicization() {
    let l = Localized::new(Integers, big(2));
    let p = PolyRing::new(l.clone()).from_coeffs(vec![
        l.frac(big(5), big(8)).unwrap(),
        l.frac(big(3), big(4)).unwrap(),
        l.one(),
    ]);
    let m = monicize(&Integers, &p, &big(2)).unwrap();
    assert_eq!(m.n, 2);
    assert_eq!(m.lift, poly(&Integers, &[10, 3, 1]));
    m.verify(&Integers, &p).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let f = [2i64, 3, 5, 6, 10, 12][rng.gen_range(0..6)];
        let l = Localized::new(Integers, big(f));
        let d = rng.gen_range(1..=4);
        let mut coeffs: Vec<BigRational> = (0..d)
            .map(|_| ratio(&big(rng.gen_range(-20..=20)), &big(f).pow(rng.gen_range(0..4u32))))
            .collect();
        coeffs.push(BigRational::one());
        let p = PolyRing::new(l.clone()).from_coeffs(coeffs.iter().map(|c| l.frac(c.numer().clone(), c.denom().clone()).unwrap()).collect());
        let m = monicize(&Integers, &p, &big(f)).unwrap();
        // Least n making every f^{n(d-j)} c_j integral.
        let scaled = |n: u32| -> Vec<BigRational> {
            coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| c * BigRational::from_integer(big(f).pow(n * (d - j) as u32)))
                .collect()
        };
        let n = (0..).find(|&n| scaled(n).iter().all(|c| c.is_integer())).unwrap();
        assert_eq!(m.n, n);
        let expected: Vec<BigInt> = scaled(n).iter().map(|c| c.to_integer()).collect();
        assert_eq!(PolyRing::new(Integers).from_coeffs(expected), m.lift);
        assert!(PolyRing::new(l.clone()).equal(&m.unsubstitute(&Integers), &p));
        let back: Vec<BigRational> = m
            .lift
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| ratio(c, &big(f).pow(n * (d - j) as u32)))
            .collect();
        assert_eq!(back, coeffs);
        m.verify(&Integers, &p).unwrap();
    }
}

/// `U = E_1 .. E_k` for random elementary matrices, with its inverse.
fn unimodular<R: Ring>(r: &R, rng: &mut ChaCha8Rng, n: usize, scalar: impl Fn(&mut ChaCha8Rng) -> R::Elem) -> (Matrix<R::Elem>, Matrix<R::Elem>) {
    let id = etale_core::base_ring::linalg::identity(r, n);
    let (mut u, mut inv) = (id.clone(), id.clone());
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = scalar(rng);
        let mut e = id.clone();
        e[i][j] = c.clone();
        let mut ei = id.clone();
        ei[i][j] = r.neg(&c);
        u = mat_mul(r, &u, &e);
        inv = mat_mul(r, &ei, &inv);
    }
    (u, inv)
}

fn injectivity_instance<R: Pid>(r: &R, rng: &mut ChaCha8Rng, scalar: impl Fn(&mut ChaCha8Rng) -> R::Elem, ideal: impl Fn(&mut ChaCha8Rng) -> R::Elem) {
    let b = rng.gen_range(2..=4);
    let a = rng.gen_range(1..b);
    let (u, inv) = unimodular(r, rng, b, &scalar);
    let seq = FreeSequence::from_unimodular(r.clone(), u, inv, a).unwrap();
    let gens: Vec<R::Elem> = (0..2).map(|_| ideal(rng)).collect();
    let l: Vec<Vec<R::Elem>> = (0..2).map(|_| (0..a).map(|_| scalar(rng)).collect()).collect();
    let x: Vec<R::Elem> = (0..a).map(|i| r.add(&r.mul(&gens[0], &l[0][i]), &r.mul(&gens[1], &l[1][i]))).collect();
    // m_j = u(l_j) + z_j with r_1 z_1 + r_2 z_2 = 0.
    let w: Vec<R::Elem> = (0..b).map(|_| scalar(rng)).collect();
    let ul: Vec<Vec<R::Elem>> = l.iter().map(|li| etale_core::base_ring::linalg::mat_vec(r, &seq.u, li)).collect();
    let m = vec![
        ul[0].iter().zip(&w).map(|(v, wi)| r.add(v, &r.mul(&gens[1], wi))).collect::<Vec<_>>(),
        ul[1].iter().zip(&w).map(|(v, wi)| r.sub(v, &r.mul(&gens[0], wi))).collect::<Vec<_>>(),
    ];
    let out = injectivity_witness(&seq, &seq.n, &gens, &m, &x).unwrap();
    assert_eq!(out.len(), 2);
    for i in 0..a {
        let sum = r.add(&r.mul(&gens[0], &out[0][i]), &r.mul(&gens[1], &out[1][i]));
        assert!(r.equal(&sum, &x[i]));
    }
}

fn flatness() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let r = zloc(5);
    let two_inv = match r.decide_invertible(&r.from_int(2)) {
        Invertibility::Inverse(v) => v,
        Invertibility::InMaximal => unreachable!(),
    };
    for _ in 0..100 {
        let units = [r.from_int(1), r.from_int(-3), two_inv.clone()];
        injectivity_instance(
            &r,
            &mut rng,
            |g| r.mul(&r.from_int(g.gen_range(-6..=6)), &units[g.gen_range(0..3)]),
            |g| r.from_int(5 * g.gen_range(-3..=3)),
        );
    }
    let f5 = Fp::new(5);
    for _ in 0..100 {
        injectivity_instance(&f5, &mut rng, |g| g.gen_range(0..5), |g| g.gen_range(0..5));
    }

    let fp = FPAlgebra::parse(&r, &["x".into()], &["5*x".into()], None).unwrap();
    let err = flat_precheck(&r, &fp, &["5*x".into()]).unwrap_err();
    assert!(matches!(err, AlgebraError::FlatnessWitness { .. }));
    let cli_err = etale_core::cli::standardize(&common::problem(etale_core::cli::problem::BaseSpec::Zloc(5), "5*x", None), Mode::FlatUnramified)
        .unwrap_err();
    assert_eq!(cli_err.code, etale_core::cli::EXIT_PIPELINE);
    assert!(cli_err.message.contains("flatness witness"));

    let m = model(&r, "x^2 - 2", None);
    let flat = etale_from_flat_unramified(&m).unwrap();
    assert_eq!(flat.branches.len(), 1);
    assert!(flat.branches[0].splitting.as_ref().unwrap().kernel.is_empty());
    let etale = standardize_local(&m, Mode::Etale, None).unwrap();
    let isos = compare_results(&flat, &etale).unwrap();
    assert_eq!(isos.len(), 1);
}

fn end_to_end() -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut total, mut by_equations) = (0, 0);
    for (run, problem) in suite() {
        let cert = run.run(&problem).unwrap_or_else(|e| panic!("{run:?} on {problem:?}: {e}"));
        let report = verify(&cert);
        assert!(report.ok(), "{run:?} on {problem:?}: {:?}", report.violations);
        let paths = coefficient_paths(&cert);
        for _ in 0..8 {
            let path = &paths[rng.gen_range(0..paths.len())];
            let mut bad = cert.clone();
            corrupt(&mut bad, path, &mut rng);
            assert!(!verify(&bad).ok(), "corruption at {path} went unnoticed");
            total += 1;
            bad.as_object_mut().unwrap().remove("digest");
            if !verify(&bad).ok() {
                by_equations += 1;
            }
        }
    }
    (total, by_equations)
}

fn report(line: &str) {
    let mut err = std::io::stderr();
    let _ = writeln!(err, "{line}");
}

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    let mut check = |n: usize, name: &str, f: &mut dyn FnMut() -> Option<String>| {
        match catch_unwind(AssertUnwindSafe(&mut *f)) {
            Ok(extra) => report(&format!("criterion {n} pass: {name}{}", extra.map(|e| format!(" ({e})")).unwrap_or_default())),
            Err(_) => {
                report(&format!("criterion {n} FAIL: {name}"));
                failed.push(n);
            }
        }
    };
    check(1, "basic example cover", &mut || {
        basic_example();
        None
    });
    check(2, "local branch shape", &mut || {
        local_shape();
        None
    });
    check(3, "idempotents of 200 random algebras", &mut || {
        idempotent_suite();
        None
    });
    check(4, "monic reduction loop", &mut || {
        reduction_loop();
        None
    });
    check(5, "idempotent splitting", &mut || {
        splitting();
        None
    });
    check(6, "monicization", &mut || {
        monicization();
        None
    });
    check(7, "flatness lemma", &mut || {
        flatness();
        None
    });
    check(8, "end-to-end verification and mutation", &mut || {
        let (total, eq) = end_to_end();
        Some(format!("{total}/{total} mutations detected, {eq}/{total} by equations alone"))
    });
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
