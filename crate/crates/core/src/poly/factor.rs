use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Factorization, PolyError, PolyRing, UniPoly};
use crate::ring::{FiniteField, Ring};

/// Largest degree the rational backend attempts with Kronecker's method.
pub const RATIONAL_DEGREE_BOUND: usize = 6;

/// Squarefree decomposition of a monic polynomial over a finite field:
/// pairs `(g_i, i)` with `f = prod g_i^i` and each `g_i` squarefree.
pub fn squarefree_decomposition<F: FiniteField>(
    ring: &PolyRing<F>,
    f: &UniPoly<F::Elem>,
) -> Vec<(UniPoly<F::Elem>, usize)> {
    let f = ring.make_monic(f);
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let df = ring.derivative(&f);
    if df.is_zero_poly() {
        let root = pth_root_poly(ring, &f);
        let p = ring.base().prime() as usize;
        for (g, m) in squarefree_decomposition(ring, &root) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = ring.xgcd_monic(&f, &df).0;
    let mut w = ring.quo(&f, &c).expect("gcd divides");
    let mut i = 1;
    while w.deg() > 0 {
        let y = ring.xgcd_monic(&w, &c).0;
        let z = ring.quo(&w, &y).expect("gcd divides");
        if z.deg() > 0 {
            out.push((z, i));
        }
        i += 1;
        c = ring.quo(&c, &y).expect("gcd divides");
        w = y;
    }
    if c.deg() > 0 {
        let root = pth_root_poly(ring, &c);
        let p = ring.base().prime() as usize;
        for (g, m) in squarefree_decomposition(ring, &root) {
            out.push((g, m * p));
        }
    }
    out.sort_by_key(|(g, m)| (*m, g.deg()));
    out
}

fn pth_root_poly<F: FiniteField>(ring: &PolyRing<F>, f: &UniPoly<F::Elem>) -> UniPoly<F::Elem> {
    let p = ring.base().prime() as usize;
    let coeffs = f
        .coeffs
        .iter()
        .step_by(p)
        .map(|c| ring.base().pth_root(c))
        .collect();
    ring.from_coeffs(coeffs)
}

fn distinct_degree<F: FiniteField>(
    ring: &PolyRing<F>,
    f: &UniPoly<F::Elem>,
) -> Result<Vec<(UniPoly<F::Elem>, usize)>, PolyError> {
    let q = ring.base().order();
    let mut rest = f.clone();
    let x = ring.x();
    let mut h = ring.rem_monic(&x, &rest)?;
    let mut out = Vec::new();
    let mut i = 1;
    while rest.deg() >= 2 * i {
        h = ring.pow_mod(&h, q, &rest)?;
        let g = ring.xgcd_monic(&ring.sub(&h, &x), &rest).0;
        if g.deg() > 0 {
            rest = ring.quo(&rest, &g).expect("gcd divides");
            h = ring.rem_monic(&h, &rest)?;
            out.push((g, i));
        }
        i += 1;
    }
    if rest.deg() > 0 {
        let d = rest.deg();
        out.push((rest, d));
    }
    Ok(out)
}

fn equal_degree<F: FiniteField>(
    ring: &PolyRing<F>,
    f: &UniPoly<F::Elem>,
    d: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<UniPoly<F::Elem>>, PolyError> {
    let n = f.deg();
    if n == d {
        return Ok(vec![f.clone()]);
    }
    let field = ring.base();
    let q = BigUint::from(field.order());
    let qd = q.pow(d as u32);
    let size = field.size().unwrap_or(u64::MAX as u128).min(u64::MAX as u128) as u64;
    loop {
        let coeffs: Vec<F::Elem> = (0..n).map(|_| field.element_from_index(rng.gen_range(0..size))).collect();
        let a = ring.from_coeffs(coeffs);
        if a.deg() == 0 {
            continue;
        }
        let b = if field.prime() == 2 {
            // Trace map a + a^2 + ... + a^(2^(kd-1)).
            let bits = (qd.bits() - 1) as usize;
            let mut t = ring.rem_monic(&a, f)?;
            let mut acc = t.clone();
            for _ in 1..bits {
                t = ring.rem_monic(&ring.mul(&t, &t), f)?;
                acc = ring.add(&acc, &t);
            }
            acc
        } else {
            let e: BigUint = (&qd - 1u32) / 2u32;
            ring.sub(&ring.pow_mod_big(&a, &e, f)?, &ring.one())
        };
        let g = ring.xgcd_monic(&b, f).0;
        if g.deg() > 0 && g.deg() < n {
            let h = ring.quo(f, &g).expect("gcd divides");
            let mut out = equal_degree(ring, &g, d, rng)?;
            out.extend(equal_degree(ring, &h, d, rng)?);
            return Ok(out);
        }
    }
}

/// Complete factorization over a finite field into monic irreducibles,
/// sorted by (multiplicity, degree, coefficients).
pub fn factor_finite_field<F: FiniteField>(
    field: &F,
    f: &UniPoly<F::Elem>,
) -> Result<Factorization<F::Elem>, PolyError>
where
    F::Elem: Ord,
{
    let ring = PolyRing::new(field.clone());
    let unit = f.leading().cloned().ok_or(PolyError::Constant)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut factors = Vec::new();
    for (g, m) in squarefree_decomposition(&ring, f) {
        for (h, d) in distinct_degree(&ring, &g)? {
            for irr in equal_degree(&ring, &h, d, &mut rng)? {
                factors.push((irr, m));
            }
        }
    }
    factors.sort_by(|(a, ma), (b, mb)| (ma, a.deg(), &a.coeffs).cmp(&(mb, b.deg(), &b.coeffs)));
    Ok(Factorization { unit, factors })
}

// ---------------------------------------------------------------------------
// Rational backend

type QPoly = Vec<BigRational>;

fn q_trim(mut v: QPoly) -> QPoly {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn q_deg(v: &QPoly) -> usize {
    v.len().saturating_sub(1)
}

fn q_divmod(f: &QPoly, g: &QPoly) -> (QPoly, QPoly) {
    let mut rem = f.clone();
    let dg = q_deg(g);
    let lc = g.last().expect("nonzero divisor").clone();
    if rem.len() <= dg {
        return (Vec::new(), q_trim(rem));
    }
    let mut quot = vec![BigRational::zero(); rem.len() - dg];
    for i in (dg..rem.len()).rev() {
        let c = &rem[i] / &lc;
        if c.is_zero() {
            continue;
        }
        for (j, gc) in g.iter().enumerate() {
            let k = i - dg + j;
            rem[k] = &rem[k] - &c * gc;
        }
        quot[i - dg] = c;
    }
    rem.truncate(dg);
    (q_trim(quot), q_trim(rem))
}

fn q_monic(f: &QPoly) -> QPoly {
    let lc = f.last().expect("nonzero").clone();
    f.iter().map(|c| c / &lc).collect()
}

fn q_gcd(f: &QPoly, g: &QPoly) -> QPoly {
    let (mut a, mut b) = (q_trim(f.clone()), q_trim(g.clone()));
    while !b.is_empty() {
        let (_, r) = q_divmod(&a, &b);
        a = b;
        // Keep remainders primitive to limit coefficient growth.
        b = if r.is_empty() { r } else { q_primitive_rat(&r) };
    }
    q_monic(&a)
}

fn q_derivative(f: &QPoly) -> QPoly {
    q_trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect(),
    )
}

/// Primitive integer polynomial with positive leading coefficient.
fn q_primitive(f: &QPoly) -> Vec<BigInt> {
    let den = f.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = f.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if ints.last().is_some_and(|c| c.is_negative()) { -BigInt::one() } else { BigInt::one() };
    ints.into_iter().map(|c| c / &content * &sign).collect()
}

fn q_primitive_rat(f: &QPoly) -> QPoly {
    q_primitive(f).into_iter().map(BigRational::from_integer).collect()
}

fn z_eval(f: &[BigInt], x: &BigInt) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn lagrange(points: &[BigInt], values: &[BigInt]) -> QPoly {
    let mut acc: QPoly = vec![BigRational::zero(); points.len()];
    for (i, (xi, yi)) in points.iter().zip(values).enumerate() {
        let mut basis: QPoly = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, xj) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * BigRational::from_integer(xj.clone());
            }
            basis = next;
            denom *= BigRational::from_integer(xi - xj);
        }
        let scale = BigRational::from_integer(yi.clone()) / denom;
        for (k, c) in basis.iter().enumerate() {
            acc[k] += c * &scale;
        }
    }
    q_trim(acc)
}

/// Finds a factor of degree `s` of the primitive squarefree `g`, if any.
fn kronecker_factor(g: &[BigInt], s: usize) -> Option<Vec<BigInt>> {
    let mut points = Vec::new();
    let mut values = Vec::new();
    let mut k: i64 = 0;
    while points.len() <= s {
        let x = BigInt::from(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 });
        k += 1;
        let v = z_eval(g, &x);
        if !v.is_zero() {
            points.push(x);
            values.push(v);
        }
    }
    let options: Vec<Vec<BigInt>> = values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let ds = divisors(v);
            if i == 0 {
                ds
            } else {
                ds.iter().flat_map(|d| [d.clone(), -d.clone()]).collect()
            }
        })
        .collect();
    let gq: QPoly = g.iter().cloned().map(BigRational::from_integer).collect();
    let mut idx = vec![0usize; options.len()];
    loop {
        let choice: Vec<BigInt> = idx.iter().zip(&options).map(|(&i, o)| o[i].clone()).collect();
        let h = lagrange(&points, &choice);
        if q_deg(&h) == s && h.iter().all(|c| c.is_integer()) {
            let (_, r) = q_divmod(&gq, &h);
            if r.is_empty() {
                return Some(q_primitive(&h));
            }
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return None;
            }
            idx[pos] += 1;
            if idx[pos] < options[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn factor_squarefree_z(g: Vec<BigInt>, out: &mut Vec<Vec<BigInt>>) -> Result<(), PolyError> {
    let n = g.len() - 1;
    if n <= 1 {
        out.push(g);
        return Ok(());
    }
    if g[0].is_zero() {
        out.push(vec![BigInt::zero(), BigInt::one()]);
        return factor_squarefree_z(g[1..].to_vec(), out);
    }
    // Rational roots first.
    let lc = g.last().unwrap().clone();
    for p in divisors(&g[0]) {
        for q in divisors(&lc) {
            for sign in [1, -1] {
                let p = &p * BigInt::from(sign);
                if !p.gcd(&q).is_one() {
                    continue;
                }
                let root = BigRational::new(p.clone(), q.clone());
                let gq: QPoly = g.iter().cloned().map(BigRational::from_integer).collect();
                let lin = vec![-root.clone(), BigRational::one()];
                let (quo, r) = q_divmod(&gq, &lin);
                if r.is_empty() {
                    out.push(vec![-p.clone(), q.clone()]);
                    return factor_squarefree_z(q_primitive(&quo), out);
                }
            }
        }
    }
    if n > RATIONAL_DEGREE_BOUND {
        return Err(PolyError::DegreeBound(n));
    }
    for s in 2..=n / 2 {
        if let Some(h) = kronecker_factor(&g, s) {
            let gq: QPoly = g.iter().cloned().map(BigRational::from_integer).collect();
            let hq: QPoly = h.iter().cloned().map(BigRational::from_integer).collect();
            let (quo, _) = q_divmod(&gq, &hq);
            factor_squarefree_z(h, out)?;
            return factor_squarefree_z(q_primitive(&quo), out);
        }
    }
    out.push(g);
    Ok(())
}

/// Factorization over Q (coefficients lowest degree first). Factors are
/// monic; irreducibility is certified by exhaustive rational-root and
/// Kronecker search, so degrees beyond [`RATIONAL_DEGREE_BOUND`] are refused
/// once no rational root is left.
pub fn factor_rational(f: &[BigRational]) -> Result<(BigRational, Vec<(QPoly, usize)>), PolyError> {
    let f = q_trim(f.to_vec());
    let unit = f.last().cloned().ok_or(PolyError::Constant)?;
    let mut out: Vec<(QPoly, usize)> = Vec::new();
    // Yun's squarefree decomposition in characteristic zero.
    let fm = q_monic(&f);
    if q_deg(&fm) > 0 {
        let df = q_derivative(&fm);
        let mut c = q_gcd(&fm, &df);
        let mut w = q_divmod(&fm, &c).0;
        let mut i = 1;
        while q_deg(&w) > 0 {
            let y = q_gcd(&w, &c);
            let z = q_monic(&q_divmod(&w, &y).0);
            if q_deg(&z) > 0 {
                let mut parts = Vec::new();
                factor_squarefree_z(q_primitive(&z), &mut parts)?;
                for p in parts {
                    let pq: QPoly = p.into_iter().map(BigRational::from_integer).collect();
                    out.push((q_monic(&pq), i));
                }
            }
            i += 1;
            c = q_divmod(&c, &y).0;
            w = y;
        }
    }
    out.sort_by(|(a, ma), (b, mb)| (ma, a.len()).cmp(&(mb, b.len())).then_with(|| cmp_qpoly(a, b)));
    Ok((unit, out))
}

fn cmp_qpoly(a: &QPoly, b: &QPoly) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}
