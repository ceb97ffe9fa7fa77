//! Bracket powers, Frobenius roots and the rings `B_n = R ⊗_A A^{1/q^n}`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fcriteria::RingPresentation;
use crate::groebner::Ideal;
use crate::poly::{is_prime, Monomial, Polynomial};

/// `q = p^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FrobeniusPower {
    p: u64,
    e: u32,
    q: u64,
}

impl FrobeniusPower {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let q = p
            .checked_pow(e)
            .filter(|q| *q <= u32::MAX as u64)
            .ok_or_else(|| Error::Invalid(format!("{}^{} is too large", p, e)))?;
        Ok(FrobeniusPower { p, e, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `q^k`, i.e. exponent `e*k`.
    pub fn pow(&self, k: u32) -> Result<Self> {
        FrobeniusPower::new(self.p, self.e * k)
    }

    fn check(&self, domain_char: u64) -> Result<()> {
        if domain_char == 0 || domain_char != self.p {
            Err(Error::WrongCharacteristic)
        } else {
            Ok(())
        }
    }
}

/// `I^[q]`, generated by the `q`-th powers of the generators.
pub fn bracket_power(i: &Ideal, q: FrobeniusPower) -> Result<Ideal> {
    q.check(i.domain().characteristic())?;
    let gens = i
        .generators()
        .iter()
        .map(|g| g.frobenius_power(q.q()))
        .collect::<Result<Vec<_>>>()?;
    // in(I^[q]) = in(I)^[q], so the bracket power of a reduced basis is
    // again a reduced basis
    let gb = i
        .groebner()?
        .iter()
        .map(|g| g.frobenius_power(q.q()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Ideal::with_groebner(i.domain(), i.nvars(), gens, gb))
}

/// The `q^n` monomials with exponents in `[0, q-1]`; the first variable is the
/// fastest-moving digit.
pub fn pushforward_basis(nvars: usize, q: FrobeniusPower) -> Vec<Monomial> {
    let q = q.q() as u32;
    let total = (q as usize).pow(nvars as u32);
    let mut out = Vec::with_capacity(total);
    let mut digits = alloc::vec![0u32; nvars];
    for _ in 0..total {
        out.push(Monomial::new(digits.clone()));
        for d in digits.iter_mut() {
            *d += 1;
            if *d < q {
                break;
            }
            *d = 0;
        }
    }
    out
}

/// Writes `f = Σ_a x^a g_a^q` over the variables in `vars` and returns the
/// nonzero `g_a`, keyed by the residue exponent `a`. Exponents of the other
/// variables are kept as they are.
pub fn root_components(f: &Polynomial, q: u64, vars: &[usize]) -> BTreeMap<Vec<u32>, Polynomial> {
    let q32 = q as u32;
    let mut parts: BTreeMap<Vec<u32>, Vec<(Monomial, crate::poly::Scalar)>> = BTreeMap::new();
    for (m, c) in f.terms() {
        let mut exps = m.exponents().to_vec();
        let mut residue = Vec::with_capacity(vars.len());
        for &v in vars {
            residue.push(exps[v] % q32);
            exps[v] /= q32;
        }
        parts.entry(residue).or_default().push((Monomial::new(exps), c.clone()));
    }
    parts
        .into_iter()
        .map(|(k, terms)| (k, Polynomial::from_terms(f.domain(), f.nvars(), terms)))
        .collect()
}

/// Frobenius root taken only in the variables `vars`; the rest act as
/// coefficients whose exponents are left unchanged.
pub fn frobenius_root_partial(i: &Ideal, q: FrobeniusPower, vars: &[usize]) -> Result<Ideal> {
    q.check(i.domain().characteristic())?;
    let mut gens = Vec::new();
    for f in i.generators() {
        gens.extend(root_components(f, q.q(), vars).into_values());
    }
    Ok(Ideal::new(i.domain(), i.nvars(), shrink(gens)))
}

/// `I^[1/q]`, the smallest ideal `J` with `I ⊆ J^[q]`.
pub fn frobenius_root(i: &Ideal, q: FrobeniusPower) -> Result<Ideal> {
    let vars: Vec<usize> = (0..i.nvars()).collect();
    frobenius_root_partial(i, q, &vars)
}

/// Frobenius root of an ideal of a ring presentation; only regular
/// presentations are supported.
pub fn frobenius_root_in(ring: &RingPresentation, i: &Ideal, q: FrobeniusPower) -> Result<Ideal> {
    if !ring.is_regular() {
        return Err(Error::NonRegularAmbient);
    }
    frobenius_root(i, q)
}

// drops duplicate generators and, for monomial sets, non-minimal ones
fn shrink(mut gens: Vec<Polynomial>) -> Vec<Polynomial> {
    if gens.iter().any(|g| g.is_constant() && !g.is_zero()) {
        let g = gens.iter().find(|g| g.is_constant() && !g.is_zero()).expect("found");
        return alloc::vec![Polynomial::one(g.domain(), g.nvars())];
    }
    let mut unique: Vec<Polynomial> = Vec::with_capacity(gens.len());
    for g in gens.drain(..) {
        if !unique.contains(&g) {
            unique.push(g);
        }
    }
    let gens = unique;
    if gens.iter().all(|g| g.num_terms() == 1) {
        let mut mons: Vec<Polynomial> = gens
            .into_iter()
            .map(|g| {
                let (m, _) = g.terms().next().expect("monomial");
                Polynomial::term(g.domain(), m.clone(), g.domain().one())
            })
            .collect();
        mons.sort_by_key(|m| m.total_degree());
        let mut out: Vec<Polynomial> = Vec::new();
        for p in mons {
            let m = p.terms().next().expect("monomial").0.clone();
            if !out.iter().any(|o| o.terms().next().expect("monomial").0.divides(&m)) {
                out.push(p);
            }
        }
        return out;
    }
    gens
}

/// Base ring data for `B_n`: the designated base variables and the level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseExtension {
    pub base_variables: Vec<usize>,
    pub level: u32,
}

/// `B_n` together with the embedding `R -> B_n`.
#[derive(Clone, Debug)]
pub struct ExtendedRing {
    pub ring: RingPresentation,
    pub ext: BaseExtension,
    pub q: FrobeniusPower,
}

impl ExtendedRing {
    /// `a_{0,n}`: every base variable `t` maps to `s^{q^n}`.
    pub fn embed(&self, f: &Polynomial) -> Result<Polynomial> {
        raise_level(f, &self.ext.base_variables, self.q, 0, self.ext.level)
    }
}

/// `a_{i,n}: B_i -> B_n`, multiplying base exponents by `q^{n-i}`.
pub fn raise_level(f: &Polynomial, base: &[usize], q: FrobeniusPower, from: u32, to: u32) -> Result<Polynomial> {
    if to < from {
        return Err(Error::Invalid("cannot lower the level of a base extension".into()));
    }
    let factor = q
        .q()
        .checked_pow(to - from)
        .filter(|f| *f <= u32::MAX as u64)
        .ok_or_else(|| Error::Invalid("base extension level too large".into()))? as u32;
    if factor == 1 {
        return Ok(f.clone());
    }
    let mut overflow = false;
    let out = f.map_monomials(f.nvars(), |m| {
        let mut e = m.exponents().to_vec();
        for &b in base {
            match e[b].checked_mul(factor) {
                Some(v) => e[b] = v,
                None => overflow = true,
            }
        }
        Monomial::new(e)
    });
    if overflow {
        return Err(Error::Invalid("exponent overflow in base extension".into()));
    }
    Ok(out)
}

/// Presentation of `B_n` via `t -> s^{q^n}` on the base variables.
pub fn base_extend(r: &RingPresentation, ext: &BaseExtension, q: FrobeniusPower) -> Result<ExtendedRing> {
    q.check(r.characteristic())?;
    let mut base = ext.base_variables.clone();
    base.sort_unstable();
    base.dedup();
    if base.as_slice() != r.base_variables() {
        return Err(Error::Invalid("base variables differ from the ring's".into()));
    }
    for g in r.relations().generators() {
        if r.point_variables().iter().all(|&v| !g.involves(v)) {
            return Err(Error::NotOverBase(r.format(g)));
        }
    }
    let rels = r
        .relations()
        .generators()
        .iter()
        .map(|g| raise_level(g, &base, q, 0, ext.level))
        .collect::<Result<Vec<_>>>()?;
    let names: Vec<String> = r
        .variables()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if ext.level > 0 && base.contains(&i) {
                level_name(v, ext.level)
            } else {
                v.clone()
            }
        })
        .collect();
    let ring = RingPresentation::with_base(names, r.domain(), rels, base.clone())?;
    Ok(ExtendedRing { ring, ext: BaseExtension { base_variables: base, level: ext.level }, q })
}

/// Name of the level-`n` root of a base variable `t`, e.g. `t_2`.
pub fn level_name(base: &str, level: u32) -> String {
    let stem = match base.rfind('_') {
        Some(k) if base[k + 1..].chars().all(|c| c.is_ascii_digit()) && k + 1 < base.len() => &base[..k],
        _ => base,
    };
    format!("{}_{}", stem, level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, CoefficientDomain};
    use alloc::string::ToString;
    use alloc::vec;

    fn vars(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn ideal(gens: &[&str], v: &[&str], p: u32) -> Ideal {
        let d = CoefficientDomain::PrimeField(p);
        let names = vars(v);
        Ideal::new(d, names.len(), gens.iter().map(|g| parse_polynomial(g, &names, d).unwrap()).collect())
    }

    #[test]
    fn bracket_examples() {
        let xy = ["x", "y"];
        let q9 = FrobeniusPower::new(3, 2).unwrap();
        let b = bracket_power(&ideal(&["x", "y^2"], &xy, 3), q9).unwrap();
        assert!(b.equals(&ideal(&["x^9", "y^18"], &xy, 3)).unwrap());
        let q5 = FrobeniusPower::new(5, 1).unwrap();
        let b = bracket_power(&ideal(&["x+y"], &xy, 5), q5).unwrap();
        assert!(b.equals(&ideal(&["x^5+y^5"], &xy, 5)).unwrap());
    }

    #[test]
    fn bracket_is_smaller_than_ordinary_power() {
        let xy = ["x", "y"];
        let q4 = FrobeniusPower::new(2, 2).unwrap();
        let m = ideal(&["x", "y"], &xy, 2);
        let b = bracket_power(&m, q4).unwrap();
        let x2y2 = parse_polynomial("x^2*y^2", &vars(&xy), CoefficientDomain::PrimeField(2)).unwrap();
        assert!(!b.contains(&x2y2).unwrap());
        assert!(m.power(4).contains(&x2y2).unwrap());
        assert!(m.power(4).contains_ideal(&b).unwrap());
    }

    #[test]
    fn bracket_needs_matching_characteristic() {
        let i = ideal(&["x"], &["x"], 5);
        assert_eq!(bracket_power(&i, FrobeniusPower::new(3, 1).unwrap()).unwrap_err(), Error::WrongCharacteristic);
    }

    #[test]
    fn root_examples() {
        let xy = ["x", "y"];
        let q3 = FrobeniusPower::new(3, 1).unwrap();
        let r = frobenius_root(&ideal(&["x^9"], &["x"], 3), q3).unwrap();
        assert!(r.equals(&ideal(&["x^3"], &["x"], 3)).unwrap());
        let r = frobenius_root(&ideal(&["x^2*y^5"], &xy, 3), q3).unwrap();
        assert!(r.equals(&ideal(&["y"], &xy, 3)).unwrap());
        let f = ideal(&["x^2*y^5"], &xy, 3).generators()[0].clone();
        assert!(bracket_power(&r, q3).unwrap().contains(&f).unwrap());
        // the monomial ideals just below <y> do not work
        for smaller in [["y^2"], ["x*y"]] {
            assert!(!bracket_power(&ideal(&smaller, &xy, 3), q3).unwrap().contains(&f).unwrap());
        }
    }

    #[test]
    fn root_of_non_monomial() {
        let xy = ["x", "y"];
        let q2 = FrobeniusPower::new(2, 1).unwrap();
        // x^3 + x*y^2 = x*(x^2 + y^2) = x*(x + y)^2
        let r = frobenius_root(&ideal(&["x^3 + x*y^2"], &xy, 2), q2).unwrap();
        assert!(r.equals(&ideal(&["x + y"], &xy, 2)).unwrap());
    }

    #[test]
    fn basis_order() {
        let q2 = FrobeniusPower::new(2, 1).unwrap();
        let b = pushforward_basis(2, q2);
        let want: Vec<Monomial> = [[0, 0], [1, 0], [0, 1], [1, 1]].iter().map(|e| Monomial::new(e.to_vec())).collect();
        assert_eq!(b, want);
        assert_eq!(pushforward_basis(1, q2), vec![Monomial::new(vec![0]), Monomial::new(vec![1])]);
        assert_eq!(pushforward_basis(2, FrobeniusPower::new(3, 1).unwrap()).len(), 9);
    }

    #[test]
    fn base_extension_substitutes() {
        let d = CoefficientDomain::PrimeField(3);
        let r = RingPresentation::parse(&["t", "x"], d, &["x^2 - t*x"]).unwrap().with_base_names(&["t"]).unwrap();
        let q = FrobeniusPower::new(3, 1).unwrap();
        let b1 = base_extend(&r, &BaseExtension { base_variables: vec![0], level: 1 }, q).unwrap();
        assert_eq!(b1.ring.variables(), &["t_1".to_string(), "x".to_string()]);
        let g = &b1.ring.relations().generators()[0];
        let want = parse_polynomial("x^2 - t_1^3*x", b1.ring.variables(), d).unwrap();
        assert_eq!(g, &want);
        let b0 = base_extend(&r, &BaseExtension { base_variables: vec![0], level: 0 }, q).unwrap();
        assert_eq!(b0.ring.variables(), r.variables());
        assert_eq!(b0.ring.relations().generators(), r.relations().generators());
    }

    #[test]
    fn base_extension_composes() {
        let d = CoefficientDomain::PrimeField(3);
        let r = RingPresentation::parse(&["t", "x", "y"], d, &["x*y - t^2*x + t"]).unwrap().with_base_names(&["t"]);
        // t alone is not over the base in the point sense; use a flat relation
        assert!(r.is_err());
        let r = RingPresentation::parse(&["t", "x", "y"], d, &["x*y - t^2*x"]).unwrap().with_base_names(&["t"]).unwrap();
        let q = FrobeniusPower::new(3, 1).unwrap();
        let ext1 = BaseExtension { base_variables: vec![0], level: 1 };
        let once = base_extend(&r, &ext1, q).unwrap();
        let twice = base_extend(&once.ring, &ext1, q).unwrap();
        let direct = base_extend(&r, &BaseExtension { base_variables: vec![0], level: 2 }, q).unwrap();
        assert_eq!(twice.ring.relations().generators(), direct.ring.relations().generators());
        assert_eq!(direct.ring.variables()[0], "t_2");
    }
}
