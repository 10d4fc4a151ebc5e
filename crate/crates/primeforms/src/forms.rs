//! Membership and witness search for the three representation families
//! E(q) = {a² + qb²}, H1(q) = {qb² − a²}, H2(q) = {a² − qb²}, plus the
//! constructive machinery around them: Thue small pairs, multiplier
//! descent, continued fractions of √q and Pell fundamental solutions.
//!
//! Definite searches are exhaustive and therefore complete. Indefinite
//! searches scan the unit-reduced region `b <= u * (isqrt(n) + 1)` where
//! `(t, u)` is the fundamental solution of t² − qu² = 1; the bound is
//! cross-checked against a 10x-enlarged brute-force oracle in the test
//! suite. Square q has no Pell solution and falls back to divisor-pair
//! enumeration of the factored form.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{gcd_u64, Prime};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormsError {
    #[error("n and q must be positive")]
    NonPositive,
    #[error("residue {x0} out of range [0, {p})")]
    ResidueOutOfRange { x0: u64, p: u64 },
    #[error("multiplier * n overflows 64 bits")]
    Overflow,
    #[error("search bound exceeds the 64-bit budget for q={q}, n={n}")]
    BoundExceeded { q: u64, n: u64 },
    #[error("{0} is a perfect square")]
    PerfectSquare(u64),
    #[error("family must be H1 or H2")]
    DefiniteFamily,
    #[error("no descent identity on file for q={q}, multiplier={multiplier}")]
    DescentNotApplicable { q: u64, multiplier: u64 },
    #[error("descent requires gcd(a, b) = 1")]
    WitnessNotPrimitive,
    #[error("witness does not satisfy its defining equation")]
    InvalidWitness,
    #[error("descent split failed for q={q}, multiplier={multiplier}")]
    DescentFailed { q: u64, multiplier: u64 },
}

/// The three form families.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Family {
    E,
    H1,
    H2,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::E => "E",
            Family::H1 => "H1",
            Family::H2 => "H2",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "E" | "e" => Ok(Family::E),
            "H1" | "h1" => Ok(Family::H1),
            "H2" | "h2" => Ok(Family::H2),
            other => Err(format!("unknown family {other:?} (expected E, H1 or H2)")),
        }
    }
}

/// A family together with its parameter q; names the quadratic form under
/// discussion.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FormInstance {
    family: Family,
    q: u64,
}

impl FormInstance {
    pub fn new(family: Family, q: u64) -> Result<FormInstance, FormsError> {
        if q == 0 {
            return Err(FormsError::NonPositive);
        }
        Ok(FormInstance { family, q })
    }

    pub fn family(self) -> Family {
        self.family
    }

    pub fn q(self) -> u64 {
        self.q
    }

    /// Exact value of the form at nonnegative (a, b).
    pub fn eval(self, a: u64, b: u64) -> i128 {
        let (a, b, q) = (a as i128, b as i128, self.q as i128);
        match self.family {
            Family::E => a * a + q * b * b,
            Family::H1 => q * b * b - a * a,
            Family::H2 => a * a - q * b * b,
        }
    }
}

impl std::fmt::Display for FormInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}({})", self.family, self.q)
    }
}

/// Nonnegative pair (a, b) with form(a, b) = multiplier * target.
/// multiplier = 1 is a plain representation.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Witness {
    pub a: u64,
    pub b: u64,
    pub multiplier: u64,
    pub target: u64,
}

impl Witness {
    pub fn new(a: u64, b: u64, multiplier: u64, target: u64) -> Witness {
        Witness { a, b, multiplier, target }
    }

    /// Exact check of the defining equation under `inst`.
    pub fn verify(&self, inst: FormInstance) -> bool {
        inst.eval(self.a, self.b) == self.multiplier as i128 * self.target as i128
    }
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// Small pair (a, b) with a ≡ x0·b (mod p), |a|, |b| <= isqrt(p), not both
/// zero. Uses the truncated extended Euclidean algorithm on (p, x0): stop
/// at the first remainder r <= isqrt(p); the identity
/// r_{i-1}|t_i| + r_i|t_{i-1}| = p bounds the cofactor by isqrt(p) as well.
pub fn thue_small_pair(x0: u64, p: Prime) -> Result<(i64, i64), FormsError> {
    let p = p.get();
    if x0 >= p {
        return Err(FormsError::ResidueOutOfRange { x0, p });
    }
    let m = p.isqrt();
    let (mut r0, mut r1) = (p, x0);
    let (mut t0, mut t1) = (0i128, 1i128);
    loop {
        if r1 <= m {
            debug_assert!(t1.unsigned_abs() <= m as u128);
            debug_assert!(r1 != 0 || t1 != 0);
            return Ok((r1 as i64, t1 as i64));
        }
        let quot = r0 / r1;
        (r0, r1) = (r1, r0 - quot * r1);
        (t0, t1) = (t1, t0 - quot as i128 * t1);
    }
}

/// Canonical witness for a² + qb² = multiplier·n, or None. The scan over
/// b ∈ [0, isqrt(multiplier·n / q)] is exhaustive, so absence is a proof.
/// Canonical means smallest b, then smallest a.
pub fn represent_definite(n: u64, q: u64, multiplier: u64) -> Result<Option<Witness>, FormsError> {
    if n == 0 || q == 0 || multiplier == 0 {
        return Err(FormsError::NonPositive);
    }
    let target = multiplier.checked_mul(n).ok_or(FormsError::Overflow)?;
    for b in 0..=(target / q).isqrt() {
        let rest = target - q * b * b;
        let a = rest.isqrt();
        if a * a == rest {
            let w = Witness::new(a, b, multiplier, n);
            debug_assert!(w.verify(FormInstance::new(Family::E, q)?));
            return Ok(Some(w));
        }
    }
    Ok(None)
}

// Auxiliary representations 2·multiplier = c² + q·1² used by descent_step.
const DESCENT_AUX: &[(u64, u64, u64)] = &[
    (17, 9, 1),  // 18 = 1² + 17·1²
    (17, 13, 3), // 26 = 3² + 17·1²
];

/// One multiplier-elimination step: given a primitive witness
/// a² + qb² = multiplier·p with an auxiliary representation
/// 2·multiplier = c² + q on file, split the factored difference
/// M = (2b)²·2multiplier − 4·multiplier·p = (2bc − 2a)(2bc + 2a)
/// by 2·multiplier and recombine into e² + qd² = 2p.
pub fn descent_step(w: &Witness, q: u64) -> Result<Witness, FormsError> {
    let inst = FormInstance::new(Family::E, q)?;
    if !w.verify(inst) {
        return Err(FormsError::InvalidWitness);
    }
    if gcd_u64(w.a, w.b) != 1 {
        return Err(FormsError::WitnessNotPrimitive);
    }
    let ell = w.multiplier;
    let c = DESCENT_AUX
        .iter()
        .find(|&&(dq, dl, _)| dq == q && dl == ell)
        .map(|&(_, _, c)| c)
        .ok_or(FormsError::DescentNotApplicable { q, multiplier: ell })?;
    debug_assert_eq!(c * c + q, 2 * ell);

    let (a, b) = (w.a as i128, w.b as i128);
    let (qi, ci, pi) = (q as i128, c as i128, w.target as i128);
    let two_ell = 2 * ell as i128;
    for a_signed in [a, -a] {
        let factor = 2 * b * ci - 2 * a_signed;
        if factor % two_ell == 0 {
            let d = factor / two_ell;
            let e = 2 * b - ci * d;
            if e * e + qi * d * d == 2 * pi {
                let out = Witness::new(e.unsigned_abs() as u64, d.unsigned_abs() as u64, 2, w.target);
                debug_assert!(out.verify(inst));
                return Ok(out);
            }
        }
    }
    Err(FormsError::DescentFailed { q, multiplier: ell })
}

/// Periodic continued fraction of √q for non-square q >= 2.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CfExpansion {
    pub q: u64,
    pub a0: u64,
    pub period: Vec<u64>,
}

pub fn cf_sqrt(q: u64) -> Result<CfExpansion, FormsError> {
    let a0 = q.isqrt();
    if a0 * a0 == q {
        return Err(FormsError::PerfectSquare(q));
    }
    // State (m, d) of the standard surd recursion; the period closes when
    // the state returns to its value after the first step.
    let mut m = a0;
    let mut d = q - a0 * a0;
    let first = (m, d);
    let mut period = Vec::new();
    loop {
        let a = (a0 + m) / d;
        period.push(a);
        m = a * d - m;
        d = (q - m * m) / d;
        if (m, d) == first {
            break;
        }
    }
    debug_assert_eq!(*period.last().unwrap(), 2 * a0);
    Ok(CfExpansion { q, a0, period })
}

/// Minimal (t, u) with t² − qu² = 1, u >= 1, from the convergents of √q.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PellSolution {
    pub t: u64,
    pub u: u64,
    pub q: u64,
}

pub fn pell_fundamental(q: u64) -> Result<PellSolution, FormsError> {
    let cf = cf_sqrt(q)?;
    let (mut h0, mut h1) = (1u128, cf.a0 as u128);
    let (mut k0, mut k1) = (0u128, 1u128);
    let qq = q as u128;
    for idx in 0.. {
        let a = cf.period[idx % cf.period.len()] as u128;
        let h2 = a.checked_mul(h1).and_then(|v| v.checked_add(h0)).ok_or(FormsError::Overflow)?;
        let k2 = a.checked_mul(k1).and_then(|v| v.checked_add(k0)).ok_or(FormsError::Overflow)?;
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
        let lhs = h1.checked_mul(h1).ok_or(FormsError::Overflow)?;
        let rhs = qq.checked_mul(k1 * k1).ok_or(FormsError::Overflow)?;
        if lhs == rhs + 1 {
            if h1 > u64::MAX as u128 || k1 > u64::MAX as u128 {
                return Err(FormsError::Overflow);
            }
            return Ok(PellSolution { t: h1 as u64, u: k1 as u64, q });
        }
    }
    unreachable!("Pell equation always has a solution for non-square q")
}

/// Canonical witness for qb² − a² = n (H1) or a² − qb² = n (H2), or None.
/// Non-square q scans b up to u·(isqrt(n)+1); square q = k² enumerates
/// divisor pairs of the factorization n = (kb ∓ a)(kb ± a).
pub fn represent_indefinite(n: u64, q: u64, family: Family) -> Result<Option<Witness>, FormsError> {
    if family == Family::E {
        return Err(FormsError::DefiniteFamily);
    }
    if n == 0 || q == 0 {
        return Err(FormsError::NonPositive);
    }
    let k = q.isqrt();
    if k * k == q {
        return Ok(represent_square_q(n, q, k, family));
    }
    let pell = pell_fundamental(q)?;
    let bound = pell
        .u
        .checked_mul(n.isqrt() + 1)
        .ok_or(FormsError::BoundExceeded { q, n })?;
    let budget = (bound as u128) * (bound as u128) * (q as u128) + n as u128;
    if budget > u64::MAX as u128 {
        return Err(FormsError::BoundExceeded { q, n });
    }
    for b in 0..=bound {
        let qb2 = q * b * b;
        let rest = match family {
            Family::H1 => {
                if qb2 < n {
                    continue;
                }
                qb2 - n
            }
            Family::H2 => n + qb2,
            Family::E => unreachable!(),
        };
        let a = rest.isqrt();
        if a * a == rest {
            let w = Witness::new(a, b, 1, n);
            debug_assert!(w.verify(FormInstance::new(family, q)?));
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Square q = k²: qb² − a² = (kb − a)(kb + a) and a² − qb² = (a − kb)(a + kb),
/// so enumerate divisor pairs d·e = n with matching parity.
fn represent_square_q(n: u64, q: u64, k: u64, family: Family) -> Option<Witness> {
    let mut best: Option<(u64, u64)> = None;
    let mut consider = |a: u64, b: u64| {
        if best.is_none_or(|(bb, ba)| (b, a) < (bb, ba)) {
            best = Some((b, a));
        }
    };
    for d in 1..=n.isqrt() {
        if n % d != 0 {
            continue;
        }
        let e = n / d;
        if (d + e) % 2 != 0 {
            continue;
        }
        let half_sum = (d + e) / 2;
        let half_diff = (e - d) / 2;
        match family {
            // kb = half_sum, a = half_diff
            Family::H1 => {
                if half_sum % k == 0 {
                    consider(half_diff, half_sum / k);
                }
            }
            // a = half_sum, kb = half_diff
            Family::H2 => {
                if half_diff % k == 0 {
                    consider(half_sum, half_diff / k);
                }
            }
            Family::E => unreachable!(),
        }
    }
    best.map(|(b, a)| {
        let w = Witness::new(a, b, 1, n);
        debug_assert!(w.verify(FormInstance::new(family, q).unwrap()));
        w
    })
}

/// True iff n has a plain (multiplier 1) representation in the given form.
pub fn in_set(n: u64, inst: FormInstance) -> Result<bool, FormsError> {
    let witness = match inst.family() {
        Family::E => represent_definite(n, inst.q(), 1)?,
        Family::H1 | Family::H2 => represent_indefinite(n, inst.q(), inst.family())?,
    };
    Ok(witness.is_some())
}

/// Number of nonnegative pairs with a² + qb² = p; for q = 1 pairs are
/// counted unordered.
pub fn count_canonical_witnesses(p: Prime, q: u64) -> u64 {
    assert!(q >= 1, "definite family requires q >= 1");
    let n = p.get();
    let mut count = 0;
    for b in 0..=(n / q).isqrt() {
        let rest = n - q * b * b;
        let a = rest.isqrt();
        if a * a == rest && (q != 1 || a <= b) {
            count += 1;
        }
    }
    count
}
