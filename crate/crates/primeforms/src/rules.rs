//! The characterization tables and their evaluators: residue-class rules
//! for E(q)/H1(q)/H2(q), polynomial root criteria for E(q), the
//! Barrucand–Cohn octic condition, Kaplansky's P32/P64 classification, and
//! the two-form multiplier rules for q = 17, 11, 19.
//!
//! Tables are stored expanded, exactly as published, including entries the
//! range audit shows to be defective; the harness surfaces those as
//! findings rather than silently correcting the data. Rules stated via
//! square patterns carry their generator, and the expansion is regenerated
//! and compared at load.

use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{mul_mod, reduce_mod, Prime};
use crate::forms::{represent_definite, Family, FormsError, Witness};

/// Version stamp for the exported tables and for verification reports.
pub const TABLE_VERSION: &str = "1";

/// Root-scan budget for [`poly_has_root`].
pub const POLY_SCAN_BUDGET: u64 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RulesError {
    #[error("root scan budget exceeded for p = {0} (budget {POLY_SCAN_BUDGET})")]
    ScanBudgetExceeded(u64),
    #[error("p = {p} is outside the criterion domain for q = {q}")]
    OutOfDomain { p: u64, q: u64 },
    #[error("p = {p} must exceed {floor}")]
    BelowFloor { p: u64, floor: u64 },
    #[error("p = {0} is not 1 mod 8")]
    NotOneModEight(u64),
    #[error(transparent)]
    Forms(#[from] FormsError),
}

/// How a residue set was stated: explicitly, or as squares j² (optionally
/// negated, or with both signs) of a fixed j list.
#[derive(Clone, Copy, Debug)]
enum Gen {
    Explicit,
    Squares(&'static [u64]),
    NegSquares(&'static [u64]),
    PmSquares(&'static [u64]),
}

/// A residue-class membership rule: p qualifies iff p is one of the
/// exceptional primes or p mod modulus lies in the residue set.
#[derive(Clone, Debug, Serialize)]
pub struct ResidueRule {
    pub family: Family,
    pub q: u64,
    pub modulus: u64,
    pub residues: Vec<u64>,
    #[serde(rename = "exceptions")]
    pub exceptional_primes: Vec<u64>,
    pub source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<&'static str>,
}

struct RuleDef {
    family: Family,
    q: u64,
    modulus: u64,
    residues: &'static [u64],
    exceptional: &'static [u64],
    gen: Gen,
    note: Option<&'static str>,
}

const OVERSTATED: &str =
    "necessary but not sufficient as stated: half of each residue class mod 28 has no witness; \
     kept verbatim and surfaced by the range audit";

const RULE_DEFS: &[RuleDef] = &[
    // E(q): p = a² + qb²
    RuleDef { family: Family::E, q: 1, modulus: 4, residues: &[1], exceptional: &[2], gen: Gen::Explicit, note: None },
    RuleDef { family: Family::E, q: 2, modulus: 8, residues: &[1, 3], exceptional: &[2], gen: Gen::Explicit, note: None },
    RuleDef { family: Family::E, q: 3, modulus: 6, residues: &[1], exceptional: &[3], gen: Gen::Explicit, note: None },
    RuleDef { family: Family::E, q: 4, modulus: 4, residues: &[1], exceptional: &[], gen: Gen::Explicit, note: None },
    RuleDef { family: Family::E, q: 5, modulus: 20, residues: &[1, 9], exceptional: &[5], gen: Gen::Squares(&[1, 3]), note: None },
    RuleDef { family: Family::E, q: 6, modulus: 24, residues: &[1, 7], exceptional: &[], gen: Gen::Explicit, note: None },
    RuleDef { family: Family::E, q: 7, modulus: 14, residues: &[1, 9, 11], exceptional: &[7], gen: Gen::Squares(&[1, 3, 5]), note: None },
    RuleDef { family: Family::E, q: 8, modulus: 8, residues: &[1], exceptional: &[], gen: Gen::Explicit, note: None },
    RuleDef { family: Family::E, q: 9, modulus: 36, residues: &[1, 13, 25], exceptional: &[], gen: Gen::Squares(&[1, 5, 7]), note: None },
    RuleDef { family: Family::E, q: 10, modulus: 40, residues: &[1, 9, 11, 19], exceptional: &[], gen: Gen::Explicit, note: None },
    RuleDef { family: Family::E, q: 12, modulus: 48, residues: &[1, 13, 25, 37], exceptional: &[], gen: Gen::Explicit, note: None },
    RuleDef { family: Family::E, q: 13, modulus: 52, residues: &[1, 9, 17, 25, 29, 49], exceptional: &[], gen: Gen::Squares(&[1, 3, 5, 7, 9, 11]), note: None },
    RuleDef { family: Family::E, q: 15, modulus: 60, residues: &[1, 19, 31, 49], exceptional: &[], gen: Gen::Explicit, note: None },
    RuleDef { family: Family::E, q: 16, modulus: 8, residues: &[1], exceptional: &[], gen: Gen::Explicit, note: None },
    // H1(q): p = qb² − a²
    RuleDef { family: Family::H1, q: 1, modulus: 2, residues: &[1], exceptional: &[], gen: Gen::Explicit, note: None },
    RuleDef { family: Family::H1, q: 2, modulus: 8, residues: &[1, 7], exceptional: &[2], gen: Gen::PmSquares(&[1]), note: None },
    RuleDef { family: Family::H1, q: 3, modulus: 12, residues: &[11], exceptional: &[2, 3], gen: Gen::Explicit, note: None },
    RuleDef { family: Family::H1, q: 4, modulus: 4, residues: &[3], exceptional: &[], gen: Gen::Explicit, note: None },
    RuleDef { family: Family::H1, q: 5, modulus: 20, residues: &[1, 9, 11, 19], exceptional: &[5], gen: Gen::PmSquares(&[1, 3]), note: None },
    RuleDef { family: Family::H1, q: 6, modulus: 24, residues: &[5, 23], exceptional: &[2], gen: Gen::Explicit, note: None },
    RuleDef { family: Family::H1, q: 7, modulus: 14, residues: &[3, 5, 13], exceptional: &[7], gen: Gen::Explicit, note: Some(OVERSTATED) },
    RuleDef { family: Family::H1, q: 8, modulus: 32, residues: &[7, 15, 23, 31], exceptional: &[7], gen: Gen::NegSquares(&[1, 3, 5, 7]), note: None },
    RuleDef { family: Family::H1, q: 9, modulus: 6, residues: &[5], exceptional: &[], gen: Gen::Explicit, note: None },
    RuleDef { family: Family::H1, q: 10, modulus: 40, residues: &[1, 9, 31, 39], exceptional: &[], gen: Gen::Explicit, note: None },
    RuleDef { family: Family::H1, q: 11, modulus: 44, residues: &[7, 19, 35, 39, 43], exceptional: &[2, 11], gen: Gen::NegSquares(&[1, 3, 5, 7, 9]), note: None },
    // H2(q): p = a² − qb²
    RuleDef { family: Family::H2, q: 1, modulus: 2, residues: &[1], exceptional: &[], gen: Gen::Explicit, note: None },
    RuleDef { family: Family::H2, q: 2, modulus: 8, residues: &[1, 7], exceptional: &[2], gen: Gen::PmSquares(&[1]), note: None },
    RuleDef { family: Family::H2, q: 3, modulus: 12, residues: &[1], exceptional: &[], gen: Gen::Explicit, note: None },
    RuleDef { family: Family::H2, q: 4, modulus: 4, residues: &[1], exceptional: &[], gen: Gen::Explicit, note: None },
    RuleDef { family: Family::H2, q: 5, modulus: 20, residues: &[1, 9, 11, 19], exceptional: &[5], gen: Gen::PmSquares(&[1, 3]), note: None },
    RuleDef { family: Family::H2, q: 6, modulus: 24, residues: &[1, 19], exceptional: &[3], gen: Gen::Explicit, note: None },
    RuleDef { family: Family::H2, q: 7, modulus: 14, residues: &[1, 9, 11], exceptional: &[2], gen: Gen::Squares(&[1, 3, 5]), note: Some(OVERSTATED) },
    RuleDef {
        family: Family::H2, q: 8, modulus: 32, residues: &[1, 9, 17, 25], exceptional: &[7],
        gen: Gen::Squares(&[1, 3, 5, 7]),
        note: Some("the exceptional prime 7 has no witness (squares mod 8 are 0, 1, 4); kept verbatim and surfaced by the range audit"),
    },
    RuleDef { family: Family::H2, q: 9, modulus: 6, residues: &[1], exceptional: &[], gen: Gen::Explicit, note: None },
    RuleDef { family: Family::H2, q: 10, modulus: 40, residues: &[1, 9, 31, 39], exceptional: &[], gen: Gen::Explicit, note: None },
    RuleDef { family: Family::H2, q: 11, modulus: 44, residues: &[1, 5, 9, 25, 37], exceptional: &[], gen: Gen::Squares(&[1, 3, 5, 7, 9]), note: None },
];

fn expand_squares(js: &[u64], modulus: u64, negate: bool) -> Vec<u64> {
    let mut out: Vec<u64> = js
        .iter()
        .map(|&j| {
            let sq = mul_mod(j, j, modulus);
            if negate {
                (modulus - sq) % modulus
            } else {
                sq
            }
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn build_rules() -> Vec<ResidueRule> {
    RULE_DEFS
        .iter()
        .map(|def| {
            assert!(def.residues.windows(2).all(|w| w[0] < w[1]), "unsorted residues");
            assert!(
                def.residues.iter().all(|&r| r < def.modulus),
                "residue out of range for {}({})",
                def.family,
                def.q
            );
            // coprime consistency: no listed residue class is killed by a
            // shared factor with the modulus
            assert!(
                def.residues.iter().all(|&r| crate::arith::gcd_u64(r, def.modulus) == 1),
                "non-coprime residue in {}({})",
                def.family,
                def.q
            );
            // regenerate square-pattern sets and compare with the stored
            // expansion
            let regenerated = match def.gen {
                Gen::Explicit => None,
                Gen::Squares(js) => Some(expand_squares(js, def.modulus, false)),
                Gen::NegSquares(js) => Some(expand_squares(js, def.modulus, true)),
                Gen::PmSquares(js) => {
                    let mut both = expand_squares(js, def.modulus, false);
                    both.extend(expand_squares(js, def.modulus, true));
                    both.sort_unstable();
                    both.dedup();
                    Some(both)
                }
            };
            if let Some(regen) = regenerated {
                assert_eq!(
                    regen, def.residues,
                    "square expansion mismatch for {}({})",
                    def.family, def.q
                );
            }
            let source = match def.family {
                Family::E => "thm1_E",
                Family::H1 => "thm2_H1",
                Family::H2 => "thm3_H2",
            };
            ResidueRule {
                family: def.family,
                q: def.q,
                modulus: def.modulus,
                residues: def.residues.to_vec(),
                exceptional_primes: def.exceptional.to_vec(),
                source,
                note: def.note,
            }
        })
        .collect()
}

/// All residue rules, built and validated once.
pub fn rule_table() -> &'static [ResidueRule] {
    static TABLE: OnceLock<Vec<ResidueRule>> = OnceLock::new();
    TABLE.get_or_init(build_rules)
}

/// Rule lookup by family and q.
pub fn rule_for(family: Family, q: u64) -> Option<&'static ResidueRule> {
    rule_table().iter().find(|r| r.family == family && r.q == q)
}

/// p qualifies iff it is exceptional or its residue class is listed.
pub fn residue_predicate(p: Prime, rule: &ResidueRule) -> bool {
    let p = p.get();
    rule.exceptional_primes.contains(&p) || rule.residues.binary_search(&(p % rule.modulus)).is_ok()
}

/// Dense integer polynomial, coefficient of degree i at index i.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Polynomial {
    pub coeffs: Vec<i64>,
}

impl Polynomial {
    pub fn new(coeffs: &[i64]) -> Polynomial {
        assert!(coeffs.len() >= 2, "degree must be at least 1");
        assert!(*coeffs.last().unwrap() != 0, "leading coefficient must be nonzero");
        Polynomial { coeffs: coeffs.to_vec() }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation mod p.
    pub fn eval_mod(&self, x: u64, p: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (mul_mod(acc, x, p) + reduce_mod(c, p)) % p;
        }
        acc
    }

    /// Exact evaluation over i128 (test oracle for the expansions).
    pub fn eval_exact(&self, x: i128) -> i128 {
        let mut acc = 0i128;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c as i128;
        }
        acc
    }
}

/// True iff the polynomial has a root mod p; exhaustive scan over [0, p).
pub fn poly_has_root(poly: &Polynomial, p: Prime) -> Result<bool, RulesError> {
    let p = p.get();
    if p >= POLY_SCAN_BUDGET {
        return Err(RulesError::ScanBudgetExceeded(p));
    }
    Ok((0..p).any(|x| poly.eval_mod(x, p) == 0))
}

/// A conjunction of root conditions plus side congruences characterizing
/// p = a² + qb² on its stated domain.
#[derive(Clone, Debug, Serialize)]
pub struct PolyCriterion {
    pub q: u64,
    pub conditions: Vec<Polynomial>,
    pub side_congruences: Vec<(u64, u64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub floor: Option<u64>,
    pub source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<&'static str>,
}

struct CritDef {
    q: u64,
    conditions: &'static [&'static [i64]],
    side: &'static [(u64, u64)],
    floor: Option<u64>,
    note: Option<&'static str>,
}

const CRIT_DEFS: &[CritDef] = &[
    CritDef { q: 11, conditions: &[&[44, 0, 4, 0, 4, 0, 1]], side: &[], floor: Some(2), note: None },
    CritDef { q: 14, conditions: &[&[14, 0, 1], &[-7, 0, 2, 0, 1]], side: &[], floor: None, note: None },
    CritDef { q: 17, conditions: &[&[17, 0, 1], &[17, 0, -2, 0, 1]], side: &[], floor: None, note: None },
    CritDef { q: 18, conditions: &[&[81, 0, -6, 0, 1]], side: &[], floor: None, note: None },
    CritDef {
        q: 19, conditions: &[&[304, 0, 16, 0, -8, 0, 1]], side: &[], floor: None,
        note: Some("mixed-case cubic term read as X^3 - 4X"),
    },
    CritDef { q: 20, conditions: &[&[16, 0, 0, 0, 12, 0, 0, 0, 1]], side: &[], floor: None, note: None },
    CritDef { q: 21, conditions: &[&[16, 0, 0, 0, 92, 0, 0, 0, 1]], side: &[], floor: None, note: None },
    CritDef { q: 22, conditions: &[&[361, 0, 6, 0, 1]], side: &[], floor: Some(22), note: None },
    CritDef {
        q: 23, conditions: &[&[8303, 0, 225, 0, 30, 0, 1]], side: &[], floor: None,
        note: Some("no domain floor stated; spurious roots at small primes are surfaced by the range audit"),
    },
    CritDef { q: 24, conditions: &[&[16, 0, 0, 0, 392, 0, 0, 0, 1]], side: &[], floor: None, note: None },
    CritDef { q: 25, conditions: &[&[100, 0, 0, 0, 1]], side: &[], floor: Some(25), note: None },
    CritDef { q: 27, conditions: &[&[-2, 0, 0, 1]], side: &[(3, 1)], floor: None, note: None },
    CritDef { q: 29, conditions: &[&[116, 0, 1, 0, -2, 0, 1]], side: &[(4, 1)], floor: None, note: None },
    CritDef {
        q: 31, conditions: &[&[31, 0, 38, 0, 11, 0, 1]], side: &[], floor: None,
        note: Some("no domain floor stated; spurious roots at small primes are surfaced by the range audit"),
    },
    CritDef { q: 32, conditions: &[&[2, 0, -2, 0, 1]], side: &[(8, 1)], floor: None, note: None },
    CritDef {
        q: 37, conditions: &[&[9, 0, 31, 0, 1]], side: &[], floor: None,
        note: Some("no domain floor stated; spurious roots at small primes are surfaced by the range audit"),
    },
    CritDef { q: 64, conditions: &[&[-2, 0, 0, 0, 1]], side: &[(4, 1)], floor: None, note: None },
];

fn build_criteria() -> Vec<PolyCriterion> {
    CRIT_DEFS
        .iter()
        .map(|def| PolyCriterion {
            q: def.q,
            conditions: def.conditions.iter().map(|c| Polynomial::new(c)).collect(),
            side_congruences: def.side.to_vec(),
            floor: def.floor,
            source: "thm4_poly",
            note: def.note,
        })
        .collect()
}

/// All polynomial criteria, built and validated once.
pub fn criterion_table() -> &'static [PolyCriterion] {
    static TABLE: OnceLock<Vec<PolyCriterion>> = OnceLock::new();
    TABLE.get_or_init(build_criteria)
}

pub fn criterion_for(q: u64) -> Option<&'static PolyCriterion> {
    criterion_table().iter().find(|c| c.q == q)
}

/// Evaluate a polynomial criterion at p. Domain: p odd, p not dividing 2q,
/// p above the stated floor. Violations signal an error rather than a
/// silent false.
pub fn criterion_predicate(p: Prime, crit: &PolyCriterion) -> Result<bool, RulesError> {
    let pv = p.get();
    if pv == 2 || crit.q % pv == 0 {
        return Err(RulesError::OutOfDomain { p: pv, q: crit.q });
    }
    if let Some(floor) = crit.floor {
        if pv <= floor {
            return Err(RulesError::BelowFloor { p: pv, floor });
        }
    }
    for &(m, r) in &crit.side_congruences {
        if pv % m != r {
            return Ok(false);
        }
    }
    for cond in &crit.conditions {
        if !poly_has_root(cond, p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Barrucand–Cohn condition: p ≡ 1 (mod 8) and x⁸ + 4 ≡ 0 (mod p) has a
/// solution (exhaustive scan, independent of the q = 32 criterion).
pub fn barrucand_cohn(p: Prime) -> Result<bool, RulesError> {
    if p.get() % 8 != 1 {
        return Ok(false);
    }
    static OCTIC: OnceLock<Polynomial> = OnceLock::new();
    let octic = OCTIC.get_or_init(|| Polynomial::new(&[4, 0, 0, 0, 0, 0, 0, 0, 1]));
    poly_has_root(octic, p)
}

/// Witness-search classification of p ≡ 1 (mod 8) into P32/P64.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct KaplanskyClass {
    pub p: u64,
    pub in_p32: bool,
    pub in_p64: bool,
}

/// Classify p by searching for a² + 32b² and a² + 64b² representations.
/// The sixteenth-residue dichotomy is asserted by the caller, not here.
pub fn kaplansky_classify(p: Prime) -> Result<KaplanskyClass, RulesError> {
    if p.get() % 8 != 1 {
        return Err(RulesError::NotOneModEight(p.get()));
    }
    Ok(KaplanskyClass {
        p: p.get(),
        in_p32: represent_definite(p.get(), 32, 1)?.is_some(),
        in_p64: represent_definite(p.get(), 64, 1)?.is_some(),
    })
}

/// Residues r mod 68 with r an odd square: the two-form rule for q = 17.
pub const Q17_RESIDUES_MOD_68: [u64; 8] = [1, 9, 13, 21, 25, 33, 49, 53];

/// Two-form predicate for q = 17: p > 17 qualifies iff p mod 68 is an odd
/// square mod 68.
pub fn thm17_predicate(p: Prime) -> Result<bool, RulesError> {
    if p.get() <= 17 {
        return Err(RulesError::BelowFloor { p: p.get(), floor: 17 });
    }
    Ok(Q17_RESIDUES_MOD_68.contains(&(p.get() % 68)))
}

/// Witness for the q = 17 two-form rule: the unique applicable
/// a² + 17b² = multiplier·p with multiplier 1 or 2.
pub fn thm17_witness(p: Prime) -> Result<Option<Witness>, RulesError> {
    if p.get() <= 17 {
        return Err(RulesError::BelowFloor { p: p.get(), floor: 17 });
    }
    for multiplier in [1, 2] {
        if let Some(w) = represent_definite(p.get(), 17, multiplier)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Which of the two multiplier rules for q ≡ 3 (mod 4) is under test.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QVariant {
    Q11,
    Q19,
}

/// Odd squares mod 22: the q = 11 multiplier rule residues.
pub const Q11_RESIDUES_MOD_22: [u64; 5] = [1, 3, 5, 9, 15];
/// Odd squares mod 38: the q = 19 multiplier rule residues.
pub const Q19_RESIDUES_MOD_38: [u64; 9] = [1, 5, 7, 9, 11, 17, 23, 25, 35];

/// Two-form predicate for q = 11 (p > 11, mod 22) or q = 19 (p > 19, mod 38).
pub fn thm11_19_predicate(p: Prime, variant: QVariant) -> Result<bool, RulesError> {
    let pv = p.get();
    match variant {
        QVariant::Q11 => {
            if pv <= 11 {
                return Err(RulesError::BelowFloor { p: pv, floor: 11 });
            }
            Ok(Q11_RESIDUES_MOD_22.contains(&(pv % 22)))
        }
        QVariant::Q19 => {
            if pv <= 19 {
                return Err(RulesError::BelowFloor { p: pv, floor: 19 });
            }
            Ok(Q19_RESIDUES_MOD_38.contains(&(pv % 38)))
        }
    }
}

/// Witness search for the multiplier rules: multiplier 1 or 3 at q = 11,
/// multiplier 4 at q = 19.
pub fn thm11_19_witness(p: Prime, variant: QVariant) -> Result<Option<Witness>, RulesError> {
    let (q, floor, multipliers): (u64, u64, &[u64]) = match variant {
        QVariant::Q11 => (11, 11, &[1, 3]),
        QVariant::Q19 => (19, 19, &[4]),
    };
    if p.get() <= floor {
        return Err(RulesError::BelowFloor { p: p.get(), floor });
    }
    for &multiplier in multipliers {
        if let Some(w) = represent_definite(p.get(), q, multiplier)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// The complete table set as a versioned JSON document.
pub fn tables_json() -> serde_json::Value {
    serde_json::json!({
        "table_version": TABLE_VERSION,
        "residue_rules": rule_table(),
        "poly_criteria": criterion_table(),
    })
}
