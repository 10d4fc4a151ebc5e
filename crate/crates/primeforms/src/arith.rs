//! Modular arithmetic kernel: overflow-safe mul/pow, extended gcd,
//! deterministic 64-bit primality, Legendre/Jacobi symbols, and modular
//! square roots. Everything here is a pure function; the rest of the crate
//! builds on top.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("expected an odd prime, got {0}")]
    NotOddPrime(u64),
    #[error("jacobi denominator must be odd, got {0}")]
    EvenDenominator(u64),
    #[error("reciprocity needs two distinct primes, got {0} twice")]
    EqualPrimes(u64),
}

/// A `u64` that passed [`is_prime`]. Construction is the only validation
/// point; downstream code takes `Prime` where a theorem quantifies over
/// primes.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Prime(u64);

impl Prime {
    pub fn new(n: u64) -> Option<Prime> {
        is_prime(n).then_some(Prime(n))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn is_odd(self) -> bool {
        self.0 != 2
    }
}

impl std::fmt::Display for Prime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Value of a Legendre or Jacobi symbol: −1, 0, or +1.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Symbol {
    MinusOne,
    Zero,
    PlusOne,
}

impl Symbol {
    pub fn value(self) -> i8 {
        match self {
            Symbol::MinusOne => -1,
            Symbol::Zero => 0,
            Symbol::PlusOne => 1,
        }
    }

    fn from_sign(v: i8) -> Symbol {
        match v {
            -1 => Symbol::MinusOne,
            0 => Symbol::Zero,
            1 => Symbol::PlusOne,
            _ => unreachable!("symbol out of range"),
        }
    }
}

impl std::ops::Mul for Symbol {
    type Output = Symbol;
    fn mul(self, rhs: Symbol) -> Symbol {
        Symbol::from_sign(self.value() * rhs.value())
    }
}

/// `a * b mod m` without overflow (widening through u128).
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    debug_assert!(m >= 1);
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base ^ exponent mod modulus` by square-and-multiply. `modulus >= 1`.
pub fn pow_mod(base: u64, mut exponent: u64, modulus: u64) -> u64 {
    assert!(modulus >= 1, "pow_mod: modulus must be positive");
    let mut base = base % modulus;
    let mut acc = 1 % modulus;
    while exponent > 0 {
        if exponent & 1 == 1 {
            acc = mul_mod(acc, base, modulus);
        }
        base = mul_mod(base, base, modulus);
        exponent >>= 1;
    }
    acc
}

/// Reduce a signed value into `[0, m)`.
pub fn reduce_mod(a: i64, m: u64) -> u64 {
    debug_assert!(m >= 1);
    (a as i128).rem_euclid(m as i128) as u64
}

/// Extended Euclid: returns `(g, s, t)` with `g = gcd(a, b) = s*a + t*b`
/// and `g >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (r0, s0, t0) = (-r0, -s0, -t0);
    }
    (r0 as i64, s0 as i64, t0 as i64)
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller–Rabin. The fixed base set is exact for the whole
/// 64-bit range, so this is a primality proof, not a probabilistic test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in MR_BASES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Legendre symbol `(a|p)` by Euler's criterion. Rejects `p` even or
/// composite.
pub fn legendre(a: i64, p: u64) -> Result<Symbol, ArithError> {
    if p == 2 || !is_prime(p) {
        return Err(ArithError::NotOddPrime(p));
    }
    let a = reduce_mod(a, p);
    if a == 0 {
        return Ok(Symbol::Zero);
    }
    let e = pow_mod(a, (p - 1) / 2, p);
    if e == 1 {
        Ok(Symbol::PlusOne)
    } else {
        debug_assert_eq!(e, p - 1);
        Ok(Symbol::MinusOne)
    }
}

/// `(p|q)(q|p)` for distinct odd primes, asserted against
/// `(-1)^((p-1)/2 * (q-1)/2)`.
pub fn reciprocity_product(p: u64, q: u64) -> Result<Symbol, ArithError> {
    if p == q {
        return Err(ArithError::EqualPrimes(p));
    }
    debug_assert!(p <= i64::MAX as u64 && q <= i64::MAX as u64);
    let product = legendre(p as i64, q)? * legendre(q as i64, p)?;
    let negative = ((p - 1) / 2) % 2 == 1 && ((q - 1) / 2) % 2 == 1;
    let law = if negative { Symbol::MinusOne } else { Symbol::PlusOne };
    assert_eq!(product, law, "quadratic reciprocity violated at ({p}, {q})");
    Ok(product)
}

/// Jacobi symbol `(a|n)` for odd `n >= 1`. Agrees with [`legendre`] on
/// prime denominators.
pub fn jacobi(a: i64, n: u64) -> Result<Symbol, ArithError> {
    if n % 2 == 0 {
        return Err(ArithError::EvenDenominator(n));
    }
    let mut a = reduce_mod(a, n);
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        Ok(Symbol::from_sign(sign))
    } else {
        Ok(Symbol::Zero)
    }
}

/// Square root of `a` mod an odd prime `p`, when one exists. Returns the
/// smaller of the two roots for determinism.
pub fn sqrt_mod(a: i64, p: u64) -> Result<Option<u64>, ArithError> {
    if p == 2 || !is_prime(p) {
        return Err(ArithError::NotOddPrime(p));
    }
    let a = reduce_mod(a, p);
    if a == 0 {
        return Ok(Some(0));
    }
    if pow_mod(a, (p - 1) / 2, p) == p - 1 {
        return Ok(None);
    }
    let x = if p % 4 == 3 {
        pow_mod(a, (p - 3) / 4 + 1, p)
    } else {
        tonelli_shanks(a, p)
    };
    debug_assert_eq!(mul_mod(x, x, p), a);
    Ok(Some(x.min(p - x)))
}

/// Tonelli–Shanks for `p ≡ 1 (mod 4)`; `a` must be a nonzero quadratic
/// residue.
fn tonelli_shanks(a: u64, p: u64) -> u64 {
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let z = (2..p)
        .find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)
        .expect("odd prime has a quadratic non-residue");
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn odd_primes_below(n: u64) -> Vec<u64> {
        (3..n).filter(|&k| is_prime(k)).collect()
    }

    #[test]
    fn pow_mod_examples() {
        assert_eq!(pow_mod(2, 10, 1000), 24);
        assert_eq!(pow_mod(7, 0, 13), 1);
        assert_eq!(pow_mod(5, 3, 5), 0);
        assert_eq!(pow_mod(3, 5, 1), 0);
    }

    #[test]
    fn ext_gcd_examples() {
        let (g, s, t) = ext_gcd(240, 46);
        assert_eq!(g, 2);
        assert_eq!(s * 240 + t * 46, 2);
        assert_eq!(ext_gcd(0, 7), (7, 0, 1));
        assert_eq!(ext_gcd(1, 1).0, 1);
        let (g, s, t) = ext_gcd(-15, 35);
        assert_eq!(g, 5);
        assert_eq!(s * -15 + t * 35, 5);
    }

    #[test]
    fn is_prime_examples() {
        assert!(is_prime(2));
        assert!(!is_prime(561)); // Carmichael
        assert!(is_prime(104729));
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn is_prime_matches_trial_division_below_10000() {
        let trial = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..10_000 {
            assert_eq!(is_prime(n), trial(n), "disagree at {n}");
        }
    }

    #[test]
    fn prime_candidate_construction() {
        assert!(Prime::new(13).is_some());
        assert!(Prime::new(15).is_none());
        assert!(Prime::new(2).unwrap().get() == 2);
        assert!(!Prime::new(2).unwrap().is_odd());
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(2, 7), Ok(Symbol::PlusOne));
        assert_eq!(legendre(14, 7), Ok(Symbol::Zero));
        assert_eq!(legendre(-7, 11), Ok(Symbol::PlusOne));
        assert_eq!(legendre(2, 15), Err(ArithError::NotOddPrime(15)));
        assert_eq!(legendre(2, 2), Err(ArithError::NotOddPrime(2)));
    }

    #[test]
    fn legendre_is_multiplicative() {
        for &p in &odd_primes_below(100) {
            for a in 1..p {
                for b in 1..p {
                    let lhs = legendre(a as i64, p).unwrap() * legendre(b as i64, p).unwrap();
                    let rhs = legendre((a * b) as i64, p).unwrap();
                    assert_eq!(lhs, rhs, "multiplicativity failed at ({a},{b}) mod {p}");
                }
            }
        }
    }

    #[test]
    fn reciprocity_examples() {
        assert_eq!(reciprocity_product(3, 7), Ok(Symbol::MinusOne));
        assert_eq!(reciprocity_product(5, 13), Ok(Symbol::PlusOne));
        assert_eq!(reciprocity_product(17, 101), Ok(Symbol::PlusOne));
        assert_eq!(reciprocity_product(7, 7), Err(ArithError::EqualPrimes(7)));
    }

    #[test]
    fn reciprocity_exhaustive_below_1000() {
        let primes = odd_primes_below(1000);
        for &p in &primes {
            for &q in &primes {
                if p != q {
                    // the law itself is asserted inside
                    reciprocity_product(p, q).unwrap();
                }
            }
        }
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(1, 9), Ok(Symbol::PlusOne));
        assert_eq!(jacobi(2, 15), Ok(Symbol::PlusOne));
        assert_eq!(jacobi(0, 9), Ok(Symbol::Zero));
        assert_eq!(jacobi(7, 1), Ok(Symbol::PlusOne));
        assert_eq!(jacobi(3, 10), Err(ArithError::EvenDenominator(10)));
    }

    #[test]
    fn jacobi_agrees_with_legendre_on_primes() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x1db7);
        for &p in &odd_primes_below(10_000) {
            for _ in 0..100 {
                let a = rng.random_range(i64::MIN / 2..i64::MAX / 2);
                assert_eq!(jacobi(a, p).unwrap(), legendre(a, p).unwrap(), "a={a} p={p}");
            }
        }
    }

    #[test]
    fn sqrt_mod_examples() {
        assert_eq!(sqrt_mod(4, 11), Ok(Some(2)));
        assert_eq!(sqrt_mod(2, 7), Ok(Some(3)));
        assert_eq!(sqrt_mod(3, 5), Ok(None));
        assert_eq!(sqrt_mod(5, 9), Err(ArithError::NotOddPrime(9)));
    }

    #[test]
    fn sqrt_mod_round_trip_below_1000() {
        for &p in &odd_primes_below(1000) {
            for a in 0..p {
                if let Some(x) = sqrt_mod(a as i64, p).unwrap() {
                    assert_eq!(mul_mod(x, x, p), a, "bad root for a={a} p={p}");
                    assert!(x <= p - x || x == 0, "not the smaller root: {x} mod {p}");
                } else {
                    assert_eq!(legendre(a as i64, p).unwrap(), Symbol::MinusOne);
                }
            }
        }
    }

    #[test]
    fn euler_criterion_matches_legendre() {
        for &p in &odd_primes_below(500) {
            for a in 1..p {
                let e = pow_mod(a, (p - 1) / 2, p);
                let sym = legendre(a as i64, p).unwrap();
                match sym {
                    Symbol::PlusOne => assert_eq!(e, 1),
                    Symbol::MinusOne => assert_eq!(e, p - 1),
                    Symbol::Zero => unreachable!(),
                }
            }
        }
    }
}
