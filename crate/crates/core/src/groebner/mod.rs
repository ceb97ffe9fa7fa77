//! Ideals, Groebner bases and the ideal operations built on them.

mod buchberger;
mod field;

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use once_cell::race::OnceBox;

use crate::error::{Error, Result};
use crate::poly::{CoefficientDomain, Monomial, MonomialOrder, Polynomial};
use buchberger::{Engine, Poly};
use field::{Field, Fp, Q};

/// Reduction-step budget applied to every Groebner computation.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

static BUDGET: AtomicU64 = AtomicU64::new(DEFAULT_BUDGET);

pub fn set_budget(steps: u64) {
    BUDGET.store(steps, AtomicOrdering::Relaxed);
}

pub fn budget() -> u64 {
    BUDGET.load(AtomicOrdering::Relaxed)
}

fn gb_in<F: Field>(field: &F, gens: &[Polynomial], order: MonomialOrder, nvars: usize) -> Result<Vec<Polynomial>> {
    let mut engine = Engine::new(field, order, budget());
    let input = gens.iter().map(|g| buchberger::import(field, g, order)).collect();
    let basis = engine.basis(input)?;
    Ok(basis.iter().map(|p| buchberger::export(field, p, nvars)).collect())
}

fn compute_gb(domain: CoefficientDomain, nvars: usize, gens: &[Polynomial], order: MonomialOrder) -> Result<Vec<Polynomial>> {
    match domain {
        CoefficientDomain::Rationals => gb_in(&Q, gens, order, nvars),
        CoefficientDomain::PrimeField(p) => gb_in(&Fp(p as u64), gens, order, nvars),
    }
}

/// Normal-form reducer against a fixed Groebner basis.
pub struct Reducer {
    nvars: usize,
    order: MonomialOrder,
    kind: ReducerKind,
}

enum ReducerKind {
    Fp(Fp, Vec<Poly<u64>>),
    Q(Vec<Poly<num_rational::BigRational>>),
}

impl Reducer {
    fn new(domain: CoefficientDomain, nvars: usize, basis: &[Polynomial], order: MonomialOrder) -> Self {
        let kind = match domain {
            CoefficientDomain::Rationals => {
                ReducerKind::Q(basis.iter().map(|g| buchberger::import(&Q, g, order)).collect())
            }
            CoefficientDomain::PrimeField(p) => {
                let f = Fp(p as u64);
                let b = basis.iter().map(|g| buchberger::import(&f, g, order)).collect();
                ReducerKind::Fp(f, b)
            }
        };
        Reducer { nvars, order, kind }
    }

    pub fn reduce(&self, f: &Polynomial) -> Result<Polynomial> {
        match &self.kind {
            ReducerKind::Fp(field, basis) => {
                let refs: Vec<&Poly<u64>> = basis.iter().collect();
                let mut e = Engine::new(field, self.order, budget());
                let r = e.normal_form(buchberger::import(field, f, self.order), &refs)?;
                Ok(buchberger::export(field, &r, self.nvars))
            }
            ReducerKind::Q(basis) => {
                let refs: Vec<&Poly<_>> = basis.iter().collect();
                let mut e = Engine::new(&Q, self.order, budget());
                let r = e.normal_form(buchberger::import(&Q, f, self.order), &refs)?;
                Ok(buchberger::export(&Q, &r, self.nvars))
            }
        }
    }
}

/// An ideal of a polynomial ring, with a lazily computed grevlex basis.
pub struct Ideal {
    domain: CoefficientDomain,
    nvars: usize,
    gens: Vec<Polynomial>,
    gb: OnceBox<Vec<Polynomial>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let out = Ideal::new(self.domain, self.nvars, self.gens.clone());
        if let Some(gb) = self.gb.get() {
            let _ = out.gb.set(Box::new(gb.clone()));
        }
        out
    }
}

impl core::fmt::Debug for Ideal {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Ideal")
            .field("domain", &self.domain)
            .field("nvars", &self.nvars)
            .field("gens", &self.gens)
            .finish()
    }
}

impl Ideal {
    /// Zero generators are dropped; an empty list is the zero ideal.
    pub fn new(domain: CoefficientDomain, nvars: usize, gens: Vec<Polynomial>) -> Self {
        let mut gens: Vec<Polynomial> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        for g in &gens {
            assert!(g.domain() == domain && g.nvars() == nvars, "generator outside the ring");
        }
        gens.dedup();
        Ideal { domain, nvars, gens, gb: OnceBox::new() }
    }

    /// Ideal whose reduced grevlex basis is already known.
    pub(crate) fn with_groebner(domain: CoefficientDomain, nvars: usize, gens: Vec<Polynomial>, gb: Vec<Polynomial>) -> Self {
        let out = Ideal::new(domain, nvars, gens);
        let _ = out.gb.set(Box::new(gb));
        out
    }

    pub fn zero(domain: CoefficientDomain, nvars: usize) -> Self {
        Ideal::new(domain, nvars, Vec::new())
    }

    pub fn unit(domain: CoefficientDomain, nvars: usize) -> Self {
        Ideal::new(domain, nvars, vec![Polynomial::one(domain, nvars)])
    }

    pub fn principal(f: Polynomial) -> Self {
        Ideal::new(f.domain(), f.nvars(), vec![f])
    }

    /// Ideal generated by the given variables.
    pub fn variables(domain: CoefficientDomain, nvars: usize, vars: &[usize]) -> Self {
        Ideal::new(
            domain,
            nvars,
            vars.iter().map(|&v| Polynomial::variable(domain, nvars, v)).collect(),
        )
    }

    pub fn domain(&self) -> CoefficientDomain {
        self.domain
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    fn check(&self, other: &Ideal) -> Result<()> {
        if self.domain != other.domain || self.nvars != other.nvars {
            Err(Error::DomainMismatch)
        } else {
            Ok(())
        }
    }

    /// Reduced grevlex basis, computed once and cached.
    pub fn groebner(&self) -> Result<&[Polynomial]> {
        if let Some(gb) = self.gb.get() {
            return Ok(gb);
        }
        let gb = compute_gb(self.domain, self.nvars, &self.gens, MonomialOrder::GrevLex)?;
        let _ = self.gb.set(Box::new(gb));
        Ok(self.gb.get().expect("just initialized"))
    }

    pub fn groebner_with(&self, order: MonomialOrder) -> Result<Vec<Polynomial>> {
        if order == MonomialOrder::GrevLex {
            return Ok(self.groebner()?.to_vec());
        }
        compute_gb(self.domain, self.nvars, &self.gens, order)
    }

    pub fn reducer(&self) -> Result<Reducer> {
        Ok(Reducer::new(self.domain, self.nvars, self.groebner()?, MonomialOrder::GrevLex))
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        if f.domain() != self.domain || f.nvars() != self.nvars {
            return Err(Error::DomainMismatch);
        }
        self.reducer()?.reduce(f)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        if f.is_zero() {
            return Ok(true);
        }
        if self.gens.is_empty() {
            return Ok(false);
        }
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.groebner()?.iter().any(|g| g.is_constant() && !g.is_zero()))
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        self.check(other)?;
        if other.gens.is_empty() {
            return Ok(true);
        }
        let r = self.reducer()?;
        for g in &other.gens {
            if !r.reduce(g)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Ideal) -> Result<bool> {
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.check(other)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ok(Ideal::new(self.domain, self.nvars, gens))
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.check(other)?;
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a * b);
            }
        }
        Ok(Ideal::new(self.domain, self.nvars, gens))
    }

    pub fn scale(&self, f: &Polynomial) -> Ideal {
        Ideal::new(self.domain, self.nvars, self.gens.iter().map(|g| g * f).collect())
    }

    /// `I ∩ J` by eliminating `t` from `t*I + (1-t)*J`.
    pub fn intersection(&self, other: &Ideal) -> Result<Ideal> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Ideal::zero(self.domain, self.nvars));
        }
        let n = self.nvars + 1;
        let slots: Vec<usize> = (1..n).collect();
        let t = Polynomial::variable(self.domain, n, 0);
        let one_minus_t = &Polynomial::one(self.domain, n) - &t;
        let mut gens = Vec::new();
        for f in &self.gens {
            gens.push(&t * &f.embed(n, &slots));
        }
        for g in &other.gens {
            gens.push(&one_minus_t * &g.embed(n, &slots));
        }
        let gb = compute_gb(self.domain, n, &gens, MonomialOrder::Elimination(1))?;
        let kept = gb
            .into_iter()
            .filter(|g| !g.involves(0))
            .map(|g| {
                g.map_monomials(self.nvars, |m| Monomial::new(m.exponents()[1..].to_vec()))
            })
            .collect();
        Ok(Ideal::new(self.domain, self.nvars, kept))
    }

    /// `(I : g) = (I ∩ <g>) / g`.
    pub fn colon_element(&self, g: &Polynomial) -> Result<Ideal> {
        if g.is_zero() {
            return Ok(Ideal::unit(self.domain, self.nvars));
        }
        if self.is_zero() {
            return Ok(Ideal::zero(self.domain, self.nvars));
        }
        if self.contains(g)? {
            return Ok(Ideal::unit(self.domain, self.nvars));
        }
        let inter = self.intersection(&Ideal::principal(g.clone()))?;
        let mut gens = Vec::new();
        for h in inter.generators() {
            gens.push(exact_div(h, g)?);
        }
        Ok(Ideal::new(self.domain, self.nvars, gens))
    }

    /// `(I : J) = ∩_j (I : g_j)`.
    pub fn colon(&self, other: &Ideal) -> Result<Ideal> {
        self.check(other)?;
        let mut acc: Option<Ideal> = None;
        for g in &other.gens {
            let c = self.colon_element(g)?;
            acc = Some(match acc {
                None => c,
                Some(a) => {
                    if a.contains_ideal(&c)? {
                        c
                    } else if c.contains_ideal(&a)? {
                        a
                    } else {
                        a.intersection(&c)?
                    }
                }
            });
        }
        Ok(acc.unwrap_or_else(|| Ideal::unit(self.domain, self.nvars)))
    }

    /// Generators of `I^n`, as products of generators; monomial generating
    /// sets are kept minimal.
    pub fn power(&self, n: u64) -> Ideal {
        Ideal::new(self.domain, self.nvars, power_generators(&self.gens, n))
    }

    /// Same ideal with its reduced grevlex basis as generators.
    pub fn minimized(&self) -> Result<Ideal> {
        let gb = self.groebner()?.to_vec();
        Ok(Ideal::new(self.domain, self.nvars, gb))
    }

    pub fn map<F: Fn(&Polynomial) -> Polynomial>(&self, domain: CoefficientDomain, nvars: usize, f: F) -> Ideal {
        Ideal::new(domain, nvars, self.gens.iter().map(f).collect())
    }

    /// Krull dimension of `P / I`, from the leading monomials of the basis.
    pub fn dimension(&self) -> Result<usize> {
        if self.gens.is_empty() {
            return Ok(self.nvars);
        }
        let gb = self.groebner()?;
        if gb.iter().any(|g| g.is_constant()) {
            return Ok(0);
        }
        let supports: Vec<u64> = gb
            .iter()
            .map(|g| {
                let (m, _) = g.leading_term(MonomialOrder::GrevLex).expect("nonzero");
                m.exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .fold(0u64, |acc, (i, _)| acc | 1 << i)
            })
            .collect();
        Ok(max_independent(&supports, self.nvars, 0, 0))
    }
}

// largest set S of variables with no leading-monomial support inside S
fn max_independent(supports: &[u64], nvars: usize, next: usize, chosen: u64) -> usize {
    if next == nvars {
        return chosen.count_ones() as usize;
    }
    let with = chosen | 1 << next;
    let mut best = 0;
    if supports.iter().all(|s| s & !with != 0) {
        best = max_independent(supports, nvars, next + 1, with);
    }
    let without_bound = chosen.count_ones() as usize + (nvars - next - 1);
    if without_bound > best {
        best = best.max(max_independent(supports, nvars, next + 1, chosen));
    }
    best
}

fn is_monomial(p: &Polynomial) -> bool {
    p.num_terms() == 1
}

fn minimize_monomials(gens: Vec<Polynomial>) -> Vec<Polynomial> {
    let mut mons: Vec<Polynomial> = gens;
    mons.sort_by_key(|m| m.total_degree());
    let mut out: Vec<Polynomial> = Vec::new();
    for p in mons {
        let (m, _) = p.terms().next().expect("monomial");
        if !out.iter().any(|q| q.terms().next().expect("monomial").0.divides(m)) {
            out.push(p);
        }
    }
    out
}

/// Generators of the `n`-th power of the ideal generated by `gens`.
pub fn power_generators(gens: &[Polynomial], n: u64) -> Vec<Polynomial> {
    let gens: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let (domain, nvars) = match gens.first() {
        Some(g) => (g.domain(), g.nvars()),
        None => return Vec::new(),
    };
    if gens.iter().any(|g| g.is_constant()) {
        return vec![Polynomial::one(domain, nvars)];
    }
    if n == 0 {
        return vec![Polynomial::one(domain, nvars)];
    }
    let monomial = gens.iter().all(is_monomial);
    if gens.len() == 1 {
        return vec![gens[0].pow(n)];
    }
    // multisets as non-decreasing index sequences
    let mut cur: Vec<(usize, Polynomial)> = vec![(0, Polynomial::one(domain, nvars))];
    for _ in 0..n {
        let mut next: Vec<(usize, Polynomial)> = Vec::new();
        for (last, p) in &cur {
            for (k, g) in gens.iter().enumerate().skip(*last) {
                next.push((k, p * g));
            }
        }
        if monomial {
            // divisibility pruning keeps monomial powers small
            let mut seen: Vec<(usize, Polynomial)> = Vec::new();
            for (k, p) in next {
                if let Some(slot) = seen.iter_mut().find(|(_, q)| *q == p) {
                    slot.0 = slot.0.min(k);
                } else {
                    seen.push((k, p));
                }
            }
            next = seen;
        }
        cur = next;
    }
    let out: Vec<Polynomial> = cur.into_iter().map(|(_, p)| p).collect();
    if monomial {
        minimize_monomials(out)
    } else {
        let mut out = out;
        out.dedup();
        out
    }
}

/// Exact division `h / g`; errors if `g` does not divide `h`.
pub fn exact_div(h: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    let order = MonomialOrder::GrevLex;
    let domain = h.domain();
    let (gm, gc) = g.leading_term(order).ok_or(Error::NonUnitDivision)?;
    let gc_inv = domain.inv(gc).ok_or(Error::NonUnitDivision)?;
    let gm = gm.clone();
    let mut rem = h.clone();
    let mut quot = Polynomial::zero(domain, h.nvars());
    while let Some((m, c)) = rem.leading_term(order) {
        let q = gm
            .quotient_of(m)
            .ok_or_else(|| Error::Invalid("inexact polynomial division".into()))?;
        let t = Polynomial::term(domain, q, domain.mul(c, &gc_inv));
        rem = &rem - &(&t * g);
        quot = &quot + &t;
    }
    Ok(quot)
}

pub fn groebner_basis(ideal: &Ideal, order: MonomialOrder) -> Result<Vec<Polynomial>> {
    ideal.groebner_with(order)
}

pub fn ideal_membership(f: &Polynomial, ideal: &Ideal) -> Result<bool> {
    ideal.contains(f)
}

pub fn colon_ideal(i: &Ideal, j: &Ideal) -> Result<Ideal> {
    i.colon(j)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdealOp {
    Sum,
    Product,
    Intersection,
    Equality,
}

#[derive(Clone, Debug)]
pub enum IdealOpResult {
    Ideal(Ideal),
    Bool(bool),
}

pub fn ideal_ops(i: &Ideal, j: &Ideal, op: IdealOp) -> Result<IdealOpResult> {
    Ok(match op {
        IdealOp::Sum => IdealOpResult::Ideal(i.sum(j)?),
        IdealOp::Product => IdealOpResult::Ideal(i.product(j)?),
        IdealOp::Intersection => IdealOpResult::Ideal(i.intersection(j)?),
        IdealOp::Equality => IdealOpResult::Bool(i.equals(j)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use alloc::string::{String, ToString};

    fn vars(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn ideal(gens: &[&str], v: &[&str], d: CoefficientDomain) -> Ideal {
        let names = vars(v);
        Ideal::new(
            d,
            names.len(),
            gens.iter().map(|g| parse_polynomial(g, &names, d).unwrap()).collect(),
        )
    }

    fn poly(s: &str, v: &[&str], d: CoefficientDomain) -> Polynomial {
        parse_polynomial(s, &vars(v), d).unwrap()
    }

    const Q: CoefficientDomain = CoefficientDomain::Rationals;

    #[test]
    fn trivial_bases() {
        let i = ideal(&["x"], &["x", "y"], Q);
        assert_eq!(groebner_basis(&i, MonomialOrder::Lex).unwrap(), vec![poly("x", &["x", "y"], Q)]);
        let j = ideal(&["x", "y"], &["x", "y"], Q);
        assert_eq!(
            groebner_basis(&j, MonomialOrder::GrevLex).unwrap(),
            vec![poly("y", &["x", "y"], Q), poly("x", &["x", "y"], Q)]
        );
    }

    #[test]
    fn circle_meets_diagonal() {
        let v = ["x", "y"];
        let i = ideal(&["x^2+y^2-1", "x-y"], &v, Q);
        let gb = groebner_basis(&i, MonomialOrder::Lex).unwrap();
        // hand Buchberger: x - y, then S-reduction leaves 2y^2 - 1, made monic
        assert_eq!(gb, vec![poly("y^2 - 1/2", &v, Q), poly("x - y", &v, Q)]);
    }

    #[test]
    fn membership_examples() {
        let v = ["x", "y"];
        assert!(ideal(&["x"], &v, Q).contains(&poly("x^2", &v, Q)).unwrap());
        assert!(!ideal(&["x^2", "y^2"], &v, Q).contains(&poly("x+y", &v, Q)).unwrap());
        let f2 = CoefficientDomain::PrimeField(2);
        assert!(ideal(&["x^2", "y^2"], &v, f2).contains(&poly("(x+y)^2", &v, f2)).unwrap());
    }

    #[test]
    fn colon_examples() {
        let v = ["x", "y"];
        let c = colon_ideal(&ideal(&["x^2"], &v, Q), &ideal(&["x"], &v, Q)).unwrap();
        assert!(c.equals(&ideal(&["x"], &v, Q)).unwrap());
        let c = colon_ideal(&ideal(&["x*y"], &v, Q), &ideal(&["x"], &v, Q)).unwrap();
        assert!(c.equals(&ideal(&["y"], &v, Q)).unwrap());
    }

    #[test]
    fn sum_intersection_equality() {
        let v = ["x", "y"];
        let x = ideal(&["x"], &v, Q);
        let y = ideal(&["y"], &v, Q);
        match ideal_ops(&x, &y, IdealOp::Sum).unwrap() {
            IdealOpResult::Ideal(s) => assert!(s.equals(&ideal(&["x", "y"], &v, Q)).unwrap()),
            _ => unreachable!(),
        }
        match ideal_ops(&x, &y, IdealOp::Intersection).unwrap() {
            IdealOpResult::Ideal(s) => assert!(s.equals(&ideal(&["x*y"], &v, Q)).unwrap()),
            _ => unreachable!(),
        }
        match ideal_ops(&ideal(&["x", "y"], &v, Q), &ideal(&["x+y", "y"], &v, Q), IdealOp::Equality).unwrap() {
            IdealOpResult::Bool(b) => assert!(b),
            _ => unreachable!(),
        }
    }

    #[test]
    fn budget_exceeded_is_reported() {
        let v = ["x", "y", "z"];
        let i = ideal(&["x^3 - y*z + 1", "y^3 - x*z", "z^3 - x*y + 2"], &v, Q);
        set_budget(3);
        let r = i.groebner_with(MonomialOrder::Lex);
        set_budget(DEFAULT_BUDGET);
        assert_eq!(r, Err(Error::BudgetExceeded(3)));
    }

    #[test]
    fn dimension_counts() {
        let v = ["x", "y", "z"];
        assert_eq!(ideal(&["x^2+y^2+z^2"], &v, Q).dimension().unwrap(), 2);
        assert_eq!(ideal(&["x", "y"], &v, Q).dimension().unwrap(), 1);
        assert_eq!(Ideal::zero(Q, 3).dimension().unwrap(), 3);
        assert_eq!(ideal(&["1"], &v, Q).dimension().unwrap(), 0);
    }

    #[test]
    fn monomial_powers_are_minimal() {
        let v = ["x", "y"];
        let m = ideal(&["x", "y"], &v, Q);
        assert_eq!(m.power(3).generators().len(), 4);
        let a = ideal(&["x^2", "x*y", "y^2"], &v, Q);
        assert_eq!(a.power(2).generators().len(), 5);
    }
}
