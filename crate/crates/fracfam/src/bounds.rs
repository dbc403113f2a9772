//! Prime and primorial utilities plus the two forms of the family-size
//! upper bound: the exact prime-based integer quantity
//! t*(p_t - 1)*(r - 1)*sum_{l<=s} C(n,l) and its log-based asymptotic
//! estimate 2*(ln^2 n / ln ln n)*(r - 1)*C(n,s).
//!
//! The exact form is the primary output. The log form is only reported
//! for n >= 16 because ln ln n <= 0 makes it meaningless below that.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("the theorem requires r >= 3, got {0}")]
    RTooSmall(u32),
    #[error("s = {s} out of range: need 1 <= s <= n = {n}")]
    SOutOfRange { s: u64, n: u64 },
    #[error("the asymptotic form needs n >= 16 (ln ln n must exceed 0), got {0}")]
    NTooSmall(u64),
}

/// Sieve of Eratosthenes; all primes <= limit.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for p in 2..=limit {
        if composite[p] {
            continue;
        }
        primes.push(p as u64);
        let mut q = p * p;
        while q <= limit {
            composite[q] = true;
            q += p;
        }
    }
    primes
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    // this witness set decides primality for all n < 2^64
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The minimal prefix of the primes whose product exceeds n.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PrimeSelection {
    pub t: usize,
    pub primes: Vec<u64>,
    #[serde(serialize_with = "serialize_biguint")]
    pub product: BigUint,
}

pub(crate) fn serialize_biguint<S: serde::Serializer>(
    x: &BigUint,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub(crate) fn serialize_opt_biguint<S: serde::Serializer>(
    x: &Option<BigUint>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

/// Smallest t with p_1 * ... * p_t > n, product exact.
pub fn select_primes(n: u64) -> PrimeSelection {
    let target = BigUint::from(n);
    let mut limit = 64u64;
    loop {
        let primes = primes_up_to(limit);
        let mut product = BigUint::one();
        let mut chosen = Vec::new();
        for &p in &primes {
            product *= BigUint::from(p);
            chosen.push(p);
            if product > target {
                return PrimeSelection { t: chosen.len(), primes: chosen, product };
            }
        }
        limit *= 2;
    }
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// sum_{l=0}^{s} C(n, l).
pub fn sum_binomials(n: u64, s: u64) -> BigUint {
    let mut acc = BigUint::zero();
    let mut term = BigUint::one();
    for l in 0..=s.min(n) {
        acc += &term;
        if l < n {
            term = term * BigUint::from(n - l) / BigUint::from(l + 1);
        }
    }
    acc
}

/// s <= n + 1 - 2 ln n, evaluated in double precision on the real value.
pub fn improved_case(n: u64, s: u64) -> bool {
    (s as f64) <= (n as f64) + 1.0 - 2.0 * (n as f64).ln()
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct BoundReport {
    pub n: u64,
    pub r: u32,
    pub s: u64,
    pub prime_selection: PrimeSelection,
    #[serde(serialize_with = "serialize_biguint")]
    pub exact_bound: BigUint,
    #[serde(serialize_with = "serialize_opt_biguint")]
    pub exact_improved: Option<BigUint>,
    pub improved_case: bool,
    pub asymptotic_bound: Option<f64>,
}

/// The exact prime-based bound, plus the improved single-binomial form
/// when s <= n + 1 - 2 ln n and the asymptotic form when n >= 16.
pub fn exact_bound(n: u64, r: u32, s: u64) -> Result<BoundReport, BoundsError> {
    if r < 3 {
        return Err(BoundsError::RTooSmall(r));
    }
    if s < 1 || s > n {
        return Err(BoundsError::SOutOfRange { s, n });
    }
    let selection = select_primes(n);
    let p_t = *selection.primes.last().expect("selection is nonempty");
    let factor = BigUint::from(selection.t as u64)
        * BigUint::from(p_t - 1)
        * BigUint::from((r - 1) as u64);
    let bound_sum = &factor * sum_binomials(n, s);
    let improved = improved_case(n, s);
    let bound_binom = if improved { Some(&factor * binomial(n, s)) } else { None };
    let asymptotic = if n >= 16 { Some(asymptotic_bound(n, r, s)?) } else { None };
    Ok(BoundReport {
        n,
        r,
        s,
        prime_selection: selection,
        exact_bound: bound_sum,
        exact_improved: bound_binom,
        improved_case: improved,
        asymptotic_bound: asymptotic,
    })
}

fn biguint_to_f64(x: &BigUint) -> f64 {
    // digit-wise horner; saturates to inf for astronomically large values
    let mut acc = 0f64;
    for d in x.to_u64_digits().iter().rev() {
        acc = acc * 1.8446744073709552e19 + *d as f64;
    }
    acc
}

/// 2 (ln^2 n / ln ln n) (r - 1) C(n, s) in the improved case, else with
/// sum_{l<=s} C(n,l); binomials are exact and converted at the end.
pub fn asymptotic_bound(n: u64, r: u32, s: u64) -> Result<f64, BoundsError> {
    if n < 16 {
        return Err(BoundsError::NTooSmall(n));
    }
    if r < 3 {
        return Err(BoundsError::RTooSmall(r));
    }
    if s < 1 || s > n {
        return Err(BoundsError::SOutOfRange { s, n });
    }
    let ln_n = (n as f64).ln();
    let scale = 2.0 * ln_n * ln_n / ln_n.ln() * ((r - 1) as f64);
    let combinatorial = if improved_case(n, s) {
        binomial(n, s)
    } else {
        sum_binomials(n, s)
    };
    Ok(scale * biguint_to_f64(&combinatorial))
}

/// (ln n / ln ln n, 2 t ln t) with t from [`select_primes`]; reporting
/// only, relating the exact bound to the asymptotic one.
pub fn pnt_estimates(n: u64) -> Result<(f64, f64), BoundsError> {
    if n < 16 {
        return Err(BoundsError::NTooSmall(n));
    }
    let ln_n = (n as f64).ln();
    let t_estimate = ln_n / ln_n.ln();
    let t = select_primes(n).t as f64;
    let pt_estimate = 2.0 * t * t.ln();
    Ok((t_estimate, pt_estimate))
}
