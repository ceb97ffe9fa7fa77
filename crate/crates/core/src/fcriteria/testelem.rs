//! Candidate test elements from the Jacobian ideal.

use alloc::vec::Vec;

use super::ring::RingPresentation;
use crate::error::Result;
use crate::groebner::Ideal;
use crate::poly::Polynomial;

fn determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Polynomial::zero(m[0][0].domain(), m[0][0].nvars());
    for col in 0..n {
        if m[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = &m[0][col] * &determinant(&minor);
        acc = if col % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Maximal minors of size `codim` of the Jacobian matrix with respect to
/// the point variables.
pub fn jacobian_minors(ring: &RingPresentation) -> Result<Vec<Polynomial>> {
    let n = ring.nvars();
    let h = n - ring.dimension()?;
    let rels = ring.relations().generators();
    if h == 0 || rels.is_empty() {
        return Ok(alloc::vec![Polynomial::one(ring.domain(), n)]);
    }
    let point = ring.point_variables();
    let jac: Vec<Vec<Polynomial>> = rels
        .iter()
        .map(|f| point.iter().map(|&v| f.derivative(v)).collect())
        .collect();
    let mut minors = Vec::new();
    for rows in subsets(rels.len(), h) {
        for cols in subsets(point.len(), h) {
            let m: Vec<Vec<Polynomial>> = rows
                .iter()
                .map(|&r| cols.iter().map(|&c| jac[r][c].clone()).collect())
                .collect();
            let d = determinant(&m);
            if !d.is_zero() && !minors.contains(&d) {
                minors.push(d);
            }
        }
    }
    Ok(minors)
}

/// Whether `f` lies in the radical of `j`, by the Rabinowitsch trick.
pub fn in_radical(f: &Polynomial, j: &Ideal) -> Result<bool> {
    let n = j.nvars();
    let slots: Vec<usize> = (0..n).collect();
    let mut gens: Vec<Polynomial> = j.generators().iter().map(|g| g.embed(n + 1, &slots)).collect();
    let y = Polynomial::variable(j.domain(), n + 1, n);
    let one = Polynomial::one(j.domain(), n + 1);
    gens.push(&one - &(&y * &f.embed(n + 1, &slots)));
    Ideal::new(j.domain(), n + 1, gens).is_unit()
}

/// Candidate test elements, most convenient first. Each is a nonzerodivisor
/// in the Jacobian ideal, so `R_c` is regular.
pub fn suggest_test_elements(ring: &RingPresentation) -> Result<Vec<Polynomial>> {
    let n = ring.nvars();
    let minors = jacobian_minors(ring)?;
    let mut jgens = ring.relations().generators().to_vec();
    jgens.extend(minors.iter().cloned());
    let jac = Ideal::new(ring.domain(), n, jgens);
    if jac.is_unit()? {
        return Ok(alloc::vec![Polynomial::one(ring.domain(), n)]);
    }
    let mut out: Vec<Polynomial> = Vec::new();
    for v in ring.point_variables() {
        let x = Polynomial::variable(ring.domain(), n, v);
        if in_radical(&x, &jac)? && is_nonzerodivisor(ring, &x)? {
            out.push(x);
        }
    }
    let mut rest: Vec<Polynomial> = minors
        .into_iter()
        .filter(|m| !ring.relations().contains(m).unwrap_or(true))
        .collect();
    rest.sort_by_key(|m| (m.num_terms(), m.total_degree().unwrap_or(0)));
    for m in rest {
        if !out.contains(&m) && is_nonzerodivisor(ring, &m)? {
            out.push(m);
        }
    }
    Ok(out)
}

/// `(I : c) = I`.
pub fn is_nonzerodivisor(ring: &RingPresentation, c: &Polynomial) -> Result<bool> {
    let i = ring.relations();
    if i.is_zero() {
        return Ok(!c.is_zero());
    }
    if i.contains(c)? {
        return Ok(false);
    }
    let col = i.colon_element(c)?;
    i.contains_ideal(&col)
}
