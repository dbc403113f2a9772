//! Multilinear polynomials over F_p in the square-free monomial basis.
//!
//! Monomials are variable masks; the reduction x_i^2 -> x_i (valid on
//! {0,1}^n) keeps everything square-free. Fractions enter F_p with
//! cleared denominators: the certificate polynomial for a pair (y, j) is
//! g(x) = prod_l (b_l <x,y> - a_l j), which differs from the fractional
//! product by the nonzero scalar prod b_l and so has the same zero set
//! whenever p divides no b_l.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::fraction::LSpec;
use crate::mask::{masks_of_cardinality, SubsetMask};

/// Arithmetic context for F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2);
        Fp { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, x: u64) -> u64 {
        x % self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    /// Inverse by Fermat; requires a nonzero mod a prime p.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.p != 0, "zero has no inverse");
        let mut acc = 1u64;
        let mut base = a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("p = {p} divides denominator {b} of fraction {a}/{b}; the construction is undefined")]
    DenominatorDivisibleByP { p: u64, a: u64, b: u64 },
    #[error("point width {point} does not match polynomial width {poly}")]
    WidthMismatch { point: u32, poly: u32 },
    #[error("swallowing preconditions need 0 <= s,j <= p-1 and s+j <= n: s={s}, j={j}, p={p}, n={n}")]
    SwallowPrecondition { n: u32, j: u64, s: u64, p: u64 },
}

/// Coefficient map from monomial masks to nonzero elements of F_p.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultilinearPoly {
    p: u64,
    n: u32,
    coeffs: BTreeMap<u64, u64>,
}

impl MultilinearPoly {
    pub fn zero(p: u64, n: u32) -> Self {
        MultilinearPoly { p, n, coeffs: BTreeMap::new() }
    }

    pub fn constant(p: u64, n: u32, c: u64) -> Self {
        let mut poly = MultilinearPoly::zero(p, n);
        poly.add_term(0, c);
        poly
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(|m| m.count_ones()).max().unwrap_or(0)
    }

    /// (monomial mask, coefficient) pairs, mask-ascending.
    pub fn terms(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.coeffs.iter().map(|(&m, &c)| (m, c))
    }

    pub fn coefficient(&self, monomial: u64) -> u64 {
        self.coeffs.get(&monomial).copied().unwrap_or(0)
    }

    fn add_term(&mut self, monomial: u64, c: u64) {
        let c = c % self.p;
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry(monomial).or_insert(0);
        *entry = (*entry + c) % self.p;
        if *entry == 0 {
            self.coeffs.remove(&monomial);
        }
    }

    /// Multiplies by the linear form (coeff * sum_{i in vars} x_i + constant)
    /// with multilinear reduction absorbed by the mask union.
    fn mul_linear(&self, vars: u64, coeff: u64, constant: u64) -> MultilinearPoly {
        let fp = Fp::new(self.p);
        let mut out = MultilinearPoly::zero(self.p, self.n);
        for (&m, &c) in &self.coeffs {
            out.add_term(m, fp.mul(c, constant));
            let mut rest = vars;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                rest &= rest - 1;
                out.add_term(m | bit, fp.mul(c, coeff));
            }
        }
        out
    }

    /// Sum over monomials contained in the point's set bits.
    pub fn evaluate(&self, point: &SubsetMask) -> Result<u64, PolyError> {
        if point.n() != self.n {
            return Err(PolyError::WidthMismatch { point: point.n(), poly: self.n });
        }
        let fp = Fp::new(self.p);
        let bits = point.bits();
        let mut acc = 0u64;
        for (&m, &c) in &self.coeffs {
            if m & !bits == 0 {
                acc = fp.add(acc, c);
            }
        }
        Ok(acc)
    }
}

/// Expands g(x) = prod_l (b_l <x,y> - a_l j) over F_p into the
/// multilinear basis. Errors when p divides any denominator.
pub fn build_polynomial(
    y: &SubsetMask,
    j: u64,
    l: &LSpec,
    p: u64,
) -> Result<MultilinearPoly, PolyError> {
    let fp = Fp::new(p);
    for f in l.fractions() {
        if f.denominator() % p == 0 {
            return Err(PolyError::DenominatorDivisibleByP {
                p,
                a: f.numerator(),
                b: f.denominator(),
            });
        }
    }
    let mut acc = MultilinearPoly::constant(p, y.n(), 1);
    for f in l.fractions() {
        let coeff = fp.reduce(f.denominator());
        let constant = fp.neg(fp.mul(fp.reduce(f.numerator()), fp.reduce(j)));
        acc = acc.mul_linear(y.bits(), coeff, constant);
    }
    Ok(acc)
}

/// Direct evaluation of the factored form prod_l (b_l |x ∩ y| - a_l j);
/// the two evaluation strategies must agree on every 0-1 point.
pub fn evaluate_factored(
    y: &SubsetMask,
    j: u64,
    l: &LSpec,
    p: u64,
    point: &SubsetMask,
) -> Result<u64, PolyError> {
    if point.n() != y.n() {
        return Err(PolyError::WidthMismatch { point: point.n(), poly: y.n() });
    }
    let fp = Fp::new(p);
    let inner = (point.bits() & y.bits()).count_ones() as u64;
    let mut acc = 1u64;
    for f in l.fractions() {
        let term = fp.sub(
            fp.mul(fp.reduce(f.denominator()), fp.reduce(inner)),
            fp.mul(fp.reduce(f.numerator()), fp.reduce(j)),
        );
        acc = fp.mul(acc, term);
    }
    Ok(acc)
}

/// The swallowing set {x_A * f : |A| <= s-1} with f(x) = sum_i x_i - j,
/// multilinear-reduced: x_A * f = sum_{i not in A} x_{A + i} + (|A| - j) x_A.
/// Requires 0 <= s, j <= p-1 and s + j <= n.
pub fn swallowing_functions(
    n: u32,
    j: u64,
    s: u64,
    p: u64,
) -> Result<Vec<MultilinearPoly>, PolyError> {
    if s > p - 1 || j > p - 1 || s + j > n as u64 {
        return Err(PolyError::SwallowPrecondition { n, j, s, p });
    }
    let fp = Fp::new(p);
    let mut out = Vec::new();
    if s == 0 {
        return Ok(out);
    }
    for d in 0..s.min(n as u64) {
        for a in masks_of_cardinality(n, d as u32) {
            let mut poly = MultilinearPoly::zero(p, n);
            let ground = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
            let mut rest = ground & !a;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                rest &= rest - 1;
                poly.add_term(a | bit, 1);
            }
            poly.add_term(a, fp.sub(fp.reduce(d), fp.reduce(j)));
            out.push(poly);
        }
    }
    Ok(out)
}
