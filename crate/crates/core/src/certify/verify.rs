//! Independent re-verification of splitting witnesses.
//!
//! Only the polynomial kernel and the Groebner engine are used here, so a
//! certificate can be checked without trusting the criteria that produced
//! it.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::groebner::Ideal;
use crate::poly::{parse_polynomial, parse_rational, CoefficientDomain, Polynomial, Truncation};

/// A splitting witness in textual form, self-contained: the reduced triple
/// and the data proving `c d h ∉ m^[q]` with `h ∈ (I^[q] : I)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessRecord {
    /// Which ring of the certificate the witness is about (`ring`, `total`,
    /// `section`).
    pub role: String,
    pub variables: Vec<String>,
    pub base_variables: Vec<String>,
    pub p: u64,
    pub relations: Vec<String>,
    /// `(g, c)` pairs of the divisor.
    pub delta: Vec<(String, String)>,
    /// Generators of `a`; empty for the unit ideal.
    pub a: Vec<String>,
    pub lambda: String,
    pub e: u32,
    pub test_element: String,
    pub a_exponents: Vec<u64>,
    pub colon_element: String,
    pub monomial: String,
    pub coefficient: u64,
}

fn ceil_mul(c: &BigRational, n: u64) -> Option<u64> {
    let v = c * BigRational::from_integer(BigInt::from(n));
    let (q, r) = v.numer().div_rem(v.denom());
    let q = if r.is_zero() { q } else { q + 1u32 };
    q.to_u64()
}

// in(I^[q]) = in(I)^[q], so q-th powers of a Groebner basis of I form one
// of I^[q]
fn bracket(domain: CoefficientDomain, n: usize, rels: &[Polynomial], q: u64) -> Result<Ideal, String> {
    let err = |e: crate::Error| format!("{}", e);
    let i = Ideal::new(domain, n, rels.to_vec());
    let gens = rels.iter().map(|g| g.frobenius_power(q)).collect::<crate::Result<Vec<_>>>().map_err(err)?;
    let gb = i.groebner().map_err(err)?.iter().map(|g| g.frobenius_power(q)).collect::<crate::Result<Vec<_>>>().map_err(err)?;
    Ok(Ideal::with_groebner(domain, n, gens, gb))
}

/// Re-checks a witness; the error names the first failed condition.
pub fn verify_witness(w: &WitnessRecord) -> Result<(), String> {
    let domain = CoefficientDomain::prime_field(w.p).map_err(|e| format!("{}", e))?;
    let parse = |s: &str| parse_polynomial(s, &w.variables, domain).map_err(|e| format!("`{}`: {}", s, e));
    let n = w.variables.len();
    let mut base = Vec::new();
    for b in &w.base_variables {
        match w.variables.iter().position(|v| v == b) {
            Some(i) => base.push(i),
            None => return Err(format!("unknown base variable `{}`", b)),
        }
    }
    if w.e == 0 {
        return Err("e must be positive".into());
    }
    let q = w.p.checked_pow(w.e).ok_or("q overflows")?;
    // only terms outside m^[q] can contribute to the witness coefficient
    let trunc = Truncation { variables: (0..n).filter(|v| !base.contains(v)).collect(), bound: q };
    let rels = w.relations.iter().map(|r| parse(r)).collect::<Result<Vec<_>, _>>()?;

    let mut d = Polynomial::one(domain, n);
    for (g, c) in &w.delta {
        let g = parse(g)?;
        let c = parse_rational(c).map_err(|e| format!("{}", e))?;
        if c < BigRational::zero() {
            return Err("negative divisor coefficient".into());
        }
        d = d.mul_truncated(&g.pow_truncated(ceil_mul(&c, q - 1).ok_or("exponent overflow")?, &trunc), &trunc);
    }
    let a = w.a.iter().map(|g| parse(g)).collect::<Result<Vec<_>, _>>()?;
    let a_unit = a.is_empty() || a.iter().any(|g| g.is_constant() && !g.is_zero());
    if a_unit {
        if !w.a_exponents.is_empty() {
            return Err("exponents given for the unit ideal".into());
        }
    } else {
        let lambda = parse_rational(&w.lambda).map_err(|e| format!("{}", e))?;
        let total = ceil_mul(&lambda, q - 1).ok_or("exponent overflow")?;
        if w.a_exponents.len() != a.len() || w.a_exponents.iter().sum::<u64>() != total {
            return Err(format!("exponents of a must sum to {}", total));
        }
        for (g, &k) in a.iter().zip(&w.a_exponents) {
            d = d.mul_truncated(&g.pow_truncated(k, &trunc), &trunc);
        }
    }

    let h = parse(&w.colon_element)?;
    let iq = bracket(domain, n, &rels, q)?;
    for g in &rels {
        if !iq.contains(&(&h * g)).map_err(|e| format!("{}", e))? {
            return Err(format!("h * ({}) is not in I^[q]", g.format_with(&w.variables)));
        }
    }

    let mono = parse(&w.monomial)?;
    let m = match mono.terms().next() {
        Some((m, c)) if mono.num_terms() == 1 && domain.is_one(c) => m.clone(),
        _ => return Err("witness monomial is not a monomial".into()),
    };
    for v in 0..n {
        if !base.contains(&v) && m.exponents()[v] as u64 >= q {
            return Err("witness monomial lies in m^[q]".into());
        }
    }
    let c = parse(&w.test_element)?;
    let coeff = c.mul_truncated(&d, &trunc).mul_truncated(&h, &trunc).coefficient(&m);
    match coeff.as_residue() {
        Some(v) if v != 0 && u64::from(v) == w.coefficient % w.p => Ok(()),
        Some(v) => Err(format!("coefficient is {}, certificate states {}", v, w.coefficient)),
        None => Err("coefficient outside F_p".into()),
    }
}
