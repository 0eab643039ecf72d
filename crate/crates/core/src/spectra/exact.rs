//! Exact characteristic polynomials and Sturm root counting.

use std::ops::Neg;

use num_traits::{Num, Signed, Zero};

use super::{InertiaMode, InertiaTriple, Polynomial, SpectraError, SymmetricMatrix};
use crate::{IntegerPolynomial, IntegerSymmetricMatrix, Rational};

/// Dimension cap for the exact kernel.
pub const EXACT_MAX_DIM: usize = 16;

/// `det(xI - m)` by Berkowitz's division-free recurrence. Works over any
/// commutative ring.
pub fn charpoly<T>(m: &SymmetricMatrix<T>) -> Polynomial<T>
where
    T: Clone + Num + Neg<Output = T>,
{
    let n = m.dim();
    // descending coefficients of the characteristic polynomial of the
    // leading k×k block
    let mut p: Vec<T> = vec![T::one()];
    for k in 0..n {
        let a = m.get(k, k).clone();
        // toeplitz column: 1, -a, -R C, -R M C, ..., -R M^{k-1} C
        let mut t = Vec::with_capacity(k + 2);
        t.push(T::one());
        t.push(-a);
        let mut v: Vec<T> = (0..k).map(|i| m.get(i, k).clone()).collect();
        for step in 0..k {
            let rv = (0..k).fold(T::zero(), |acc, j| acc + m.get(k, j).clone() * v[j].clone());
            t.push(-rv);
            if step + 1 < k {
                v = (0..k)
                    .map(|i| (0..k).fold(T::zero(), |acc, j| acc + m.get(i, j).clone() * v[j].clone()))
                    .collect();
            }
        }
        let next: Vec<T> = (0..k + 2)
            .map(|r| {
                (0..=r.min(k))
                    .fold(T::zero(), |acc, c| acc + t[r - c].clone() * p[c].clone())
            })
            .collect();
        p = next;
    }
    p.reverse();
    Polynomial::new(p)
}

/// Characteristic polynomial `det(xI - m)` with exact integer coefficients.
pub fn charpoly_exact(m: &IntegerSymmetricMatrix) -> Result<IntegerPolynomial, SpectraError> {
    if m.dim() == 0 {
        return Err(SpectraError::Dimension(0));
    }
    if m.dim() > EXACT_MAX_DIM {
        return Err(SpectraError::ExactTooLarge {
            dim: m.dim(),
            max: EXACT_MAX_DIM,
        });
    }
    Ok(charpoly(m))
}

fn to_rational(p: &IntegerPolynomial) -> Polynomial<Rational> {
    p.map(|c| Rational::from_integer(c.clone()))
}

fn sign_of(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn sturm_chain(p: &Polynomial<Rational>) -> Vec<Polynomial<Rational>> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let len = chain.len();
        if chain[len - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[len - 2].div_rem(&chain[len - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(r.scale(&-Rational::from_integer(1.into())));
    }
    chain
}

/// Evaluation point for sign variations.
#[derive(Clone, Copy)]
enum At<'a> {
    NegInf,
    Point(&'a Rational),
}

fn variations(chain: &[Polynomial<Rational>], at: At<'_>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for s in chain {
        let sign = match at {
            At::Point(x) => sign_of(&s.eval(x)),
            At::NegInf => {
                let lead = s.leading().map_or(0, sign_of);
                if s.degree().unwrap_or(0) % 2 == 1 {
                    -lead
                } else {
                    lead
                }
            }
        };
        if sign != 0 {
            if last != 0 && sign != last {
                count += 1;
            }
            last = sign;
        }
    }
    count
}

/// Distinct roots of a square-free `p` in `(lo, hi]`.
fn distinct_roots_half_open(p: &Polynomial<Rational>, lo: At<'_>, hi: At<'_>) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let chain = sturm_chain(p);
    variations(&chain, lo).saturating_sub(variations(&chain, hi))
}

fn roots_with_multiplicity(p: &IntegerPolynomial, lo: At<'_>, hi: At<'_>) -> usize {
    let rp = to_rational(p);
    rp.squarefree_factors()
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let mut c = distinct_roots_half_open(f, lo, hi);
            if let At::Point(a) = lo {
                if f.degree().unwrap_or(0) > 0 && f.eval(a).is_zero() {
                    c += 1;
                }
            }
            (i + 1) * c
        })
        .sum()
}

/// Real roots of `p` in the closed interval `[lo, hi]`, counted with
/// multiplicity.
pub fn count_roots_in(p: &IntegerPolynomial, lo: &Rational, hi: &Rational) -> usize {
    if lo > hi {
        return 0;
    }
    roots_with_multiplicity(p, At::Point(lo), At::Point(hi))
}

/// Roots of `p` in `(-∞, 0)`, with multiplicity.
pub fn negative_root_count(p: &IntegerPolynomial) -> usize {
    let (_, q) = p.deflate_zero();
    roots_with_multiplicity(&q, At::NegInf, At::Point(&Rational::zero()))
}

/// Tolerance-free inertia from the characteristic polynomial.
pub fn inertia_exact(m: &IntegerSymmetricMatrix) -> Result<InertiaTriple, SpectraError> {
    let p = charpoly_exact(m)?;
    Ok(inertia_from_charpoly(&p, m.dim()))
}

pub(crate) fn inertia_from_charpoly(p: &IntegerPolynomial, dim: usize) -> InertiaTriple {
    let (n_zero, q) = p.deflate_zero();
    let n_neg = roots_with_multiplicity(&q, At::NegInf, At::Point(&Rational::zero()));
    InertiaTriple::new(dim - n_zero - n_neg, n_zero, n_neg, InertiaMode::Exact)
}
