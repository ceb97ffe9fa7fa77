//! Splitting decided by linear algebra on graded pieces, independent of the
//! colon computation.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::criteria::{a_exponent, delta_factor, for_each_multiset};
use super::ring::TripleSpec;
use crate::error::{Error, Result};
use crate::frobenius::FrobeniusPower;
use crate::groebner::Ideal;
use crate::linalg::Echelon;
use crate::poly::{Monomial, MonomialOrder, Polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Holds,
    Fails,
    BoundTooSmall,
}

const MAX_WEIGHT: u32 = 12;

/// Smallest positive weights (by sum, then lexicographically) making every
/// polynomial homogeneous.
pub fn find_weights(polys: &[Polynomial], nvars: usize) -> Option<Vec<u32>> {
    let ones = vec![1u32; nvars];
    if polys.iter().all(|f| f.is_zero() || f.homogeneous_degree(&ones).is_some()) {
        return Some(ones);
    }
    // each polynomial gives linear conditions w.(α - β) = 0
    let mut diffs: Vec<Vec<i64>> = Vec::new();
    for f in polys {
        let mut it = f.terms().map(|(m, _)| m.exponents().to_vec());
        if let Some(first) = it.next() {
            for other in it {
                diffs.push(first.iter().zip(&other).map(|(a, b)| *a as i64 - *b as i64).collect());
            }
        }
    }
    let mut best: Option<Vec<u32>> = None;
    let mut w = vec![1u32; nvars];
    loop {
        let ok = diffs
            .iter()
            .all(|d| d.iter().zip(&w).map(|(a, b)| a * *b as i64).sum::<i64>() == 0);
        if ok {
            let s: u32 = w.iter().sum();
            let better = match &best {
                None => true,
                Some(b) => s < b.iter().sum::<u32>(),
            };
            if better {
                best = Some(w.clone());
            }
        }
        // odometer over [1, MAX_WEIGHT]^n
        let mut k = 0;
        loop {
            if k == nvars {
                return best;
            }
            w[k] += 1;
            if w[k] <= MAX_WEIGHT {
                break;
            }
            w[k] = 1;
            k += 1;
        }
    }
}

fn monomials_of_degree(weights: &[u32], degree: u64) -> Vec<Monomial> {
    fn rec(weights: &[u32], k: usize, left: u64, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if k == weights.len() {
            if left == 0 {
                out.push(Monomial::new(cur.clone()));
            }
            return;
        }
        let w = weights[k] as u64;
        let mut e = 0u64;
        while e * w <= left {
            cur.push(e as u32);
            rec(weights, k + 1, left - e * w, cur, out);
            cur.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    rec(weights, 0, degree, &mut Vec::new(), &mut out);
    out
}

/// Default degree bound: `q` times the top relation degree times the
/// number of variables.
pub fn default_degree_bound(spec: &TripleSpec, weights: &[u32], q: FrobeniusPower) -> u64 {
    let top = spec
        .ring
        .relations()
        .generators()
        .iter()
        .filter_map(|g| g.homogeneous_degree(weights))
        .max()
        .unwrap_or(1)
        .max(1);
    q.q() * top * spec.ring.nvars() as u64
}

/// Decides whether `F^e_*(d)` splits for some `d` by solving for
/// `u ∈ (I^[q] : I)` of the right degree with `Tr(u d)` a unit.
pub fn splitting_oracle(spec: &TripleSpec, e: u32, degree_bound: Option<u64>) -> Result<OracleVerdict> {
    let ring = &spec.ring;
    let p = ring.characteristic();
    if p == 0 {
        return Err(Error::WrongCharacteristic);
    }
    if !ring.base_variables().is_empty() {
        return Err(Error::Invalid("the splitting oracle does not support base variables".into()));
    }
    if e == 0 {
        return Err(Error::Invalid("e must be at least 1".into()));
    }
    let q = FrobeniusPower::new(p, e)?;
    let n = ring.nvars();
    let mut graded: Vec<Polynomial> = ring.relations().generators().to_vec();
    graded.extend(spec.delta.support().map(|c| c.g.clone()));
    if !spec.a_is_unit() {
        graded.extend(spec.a.generators().iter().cloned());
    }
    let weights = find_weights(&graded, n).ok_or(Error::NonGraded)?;
    let bound = degree_bound.unwrap_or_else(|| default_degree_bound(spec, &weights, q));

    let i = ring.relations();
    let iq = Ideal::new(
        ring.domain(),
        n,
        i.generators().iter().map(|g| g.frobenius_power(q.q())).collect::<Result<Vec<_>>>()?,
    );
    let gb: Vec<Polynomial> = if iq.is_zero() { Vec::new() } else { iq.groebner()?.to_vec() };
    let leading: Vec<Monomial> = gb
        .iter()
        .map(|g| g.leading_term(MonomialOrder::GrevLex).expect("nonzero").0.clone())
        .collect();
    let reducer = if iq.is_zero() { None } else { Some(iq.reducer()?) };
    let socle_degree: u64 = (q.q() - 1) * weights.iter().map(|&w| w as u64).sum::<u64>();
    let socle = Monomial::new(vec![(q.q() - 1) as u32; n]);

    let dfac = delta_factor(spec, q);
    let a_gens: Vec<Polynomial> = if spec.a_is_unit() { Vec::new() } else { spec.a.generators().to_vec() };
    let total = a_exponent(spec, q);
    let mut too_small = false;
    // constraint rows depend only on the degree of u
    let mut cache: BTreeMap<u64, Option<(Vec<Monomial>, Echelon)>> = BTreeMap::new();

    let mut visit = |exps: &[u64]| -> Result<Option<()>> {
        let mut d = dfac.clone();
        for (g, &k) in a_gens.iter().zip(exps) {
            if k > 0 {
                d = &d * &g.pow(k);
            }
        }
        let wd = match d.homogeneous_degree(&weights) {
            Some(w) => w,
            None => return Err(Error::NonGraded),
        };
        if wd > socle_degree {
            return Ok(None);
        }
        let deg = socle_degree - wd;
        if deg > bound {
            too_small = true;
            return Ok(None);
        }
        if let alloc::collections::btree_map::Entry::Vacant(slot) = cache.entry(deg) {
            slot.insert(build_constraints(&weights, deg, &leading, i.generators(), reducer.as_ref(), q.p())?);
        }
        let Some((unknowns, rows)) = &cache[&deg] else {
            return Ok(None);
        };
        // coefficient of the socle monomial in x^α d
        let ell: Vec<u64> = unknowns
            .iter()
            .map(|alpha| match alpha.quotient_of(&socle) {
                Some(rest) => d.coefficient(&rest).as_residue().unwrap_or(0) as u64,
                None => 0,
            })
            .collect();
        if ell.iter().all(|&x| x == 0) {
            return Ok(None);
        }
        Ok(if rows.contains(&ell) { None } else { Some(()) })
    };
    let found = for_each_multiset(a_gens.len(), total, &mut visit)?;
    Ok(if found.is_some() {
        OracleVerdict::Holds
    } else if too_small {
        OracleVerdict::BoundTooSmall
    } else {
        OracleVerdict::Fails
    })
}

// rows of the linear map u -> (NF(u g_j))_j, on standard monomials of the
// given degree; None if there are no unknowns
fn build_constraints(
    weights: &[u32],
    deg: u64,
    leading: &[Monomial],
    relations: &[Polynomial],
    reducer: Option<&crate::groebner::Reducer>,
    p: u64,
) -> Result<Option<(Vec<Monomial>, Echelon)>> {
    let unknowns: Vec<Monomial> = monomials_of_degree(weights, deg)
        .into_iter()
        .filter(|m| !leading.iter().any(|l| l.divides(m)))
        .collect();
    if unknowns.is_empty() {
        return Ok(None);
    }
    let width = unknowns.len();
    // row key: (relation, output monomial)
    let mut rows: BTreeMap<(usize, Monomial), Vec<u64>> = BTreeMap::new();
    if let Some(red) = reducer {
        for (col, alpha) in unknowns.iter().enumerate() {
            for (j, g) in relations.iter().enumerate() {
                let nf = red.reduce(&g.mul_monomial(alpha))?;
                for (m, c) in nf.terms() {
                    let row = rows.entry((j, m.clone())).or_insert_with(|| vec![0; width]);
                    row[col] = c.as_residue().expect("prime field") as u64;
                }
            }
        }
    }
    let mut ech = Echelon::new(p, width);
    for (_, r) in rows {
        ech.insert(r);
    }
    Ok(Some((unknowns, ech)))
}
