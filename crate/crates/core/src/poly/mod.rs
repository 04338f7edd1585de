//! Univariate and multivariate polynomials, gcds and factorization.

mod factor;
mod multi;
mod parse;
mod uni;

pub use factor::{factor_finite_field, factor_rational, squarefree_decomposition, RATIONAL_DEGREE_BOUND};
pub use multi::{Monomial, MultiPoly};
pub use parse::{parse_poly, Expr};
pub use uni::{PolyRing, Separability, UniPoly};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("divisor is not monic")]
    NonMonic,
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("constant polynomial where a nonconstant one is required")]
    Constant,
    #[error("degree {0} exceeds the factorization bound")]
    DegreeBound(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// `unit * prod f_i^{m_i}` with monic irreducible `f_i`.
#[derive(Clone, Debug)]
pub struct Factorization<E> {
    pub unit: E,
    pub factors: Vec<(UniPoly<E>, usize)>,
}

impl<E: Clone> Factorization<E> {
    pub fn expand<R: crate::ring::Ring<Elem = E>>(&self, ring: &PolyRing<R>) -> UniPoly<E> {
        use crate::ring::Ring;
        let mut acc = ring.constant(self.unit.clone());
        for (f, m) in &self.factors {
            acc = ring.mul(&acc, &ring.pow(f, *m as u64));
        }
        acc
    }
}

/// Human-readable form such as `x^2 - 3*x + 1`, highest degree first.
/// `coeff` renders a coefficient; signs are kept inside the rendering.
pub fn display_poly<E>(p: &UniPoly<E>, var: &str, coeff: impl Fn(&E) -> Option<String>) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (i, c) in p.coeffs.iter().enumerate().rev() {
        let Some(text) = coeff(c) else { continue };
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let term = if mono.is_empty() {
            text
        } else if text == "1" {
            mono
        } else if text == "-1" {
            format!("-{mono}")
        } else if text.contains(['+', ' ']) || text[1..].contains('-') {
            format!("({text})*{mono}")
        } else {
            format!("{text}*{mono}")
        };
        parts.push(term);
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = parts[0].clone();
    for t in &parts[1..] {
        match t.strip_prefix('-') {
            Some(rest) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            None => {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
    }
    out
}
