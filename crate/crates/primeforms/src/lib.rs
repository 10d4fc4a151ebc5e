//! Prime representations by the quadratic forms a² + qb², qb² − a² and
//! a² − qb², the residue-class and polynomial characterizations that
//! describe them, and a range-verification harness that cross-checks every
//! characterization against exhaustive witness search.
//!
//! Module map:
//! - [`arith`] — modular arithmetic kernel (mul/pow mod, primality,
//!   Legendre/Jacobi, modular square roots)
//! - [`forms`] — membership and canonical witnesses for E(q), H1(q), H2(q);
//!   Thue pairs, multiplier descent, continued fractions, Pell solutions
//! - [`rules`] — the characterization tables (residue rules, polynomial
//!   criteria, two-form multiplier rules) and their evaluators
//! - [`trinity`] — the sets A = {3x²−y²}, B = {x²+y²}, C = {2(x²−xy+y²)}
//!   and their inclusion structure
//! - [`harness`] — prime sieve, range verification, explorers, reports
//! - [`cli`] — command-line front end

pub mod arith;
pub mod forms;
pub mod rules;
