//! Buchberger's algorithm with the sugar strategy and the Gebauer-Moeller
//! installation of both Buchberger criteria.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::field::Field;
use crate::error::{Error, Result};
use crate::poly::{Monomial, MonomialOrder, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Mono {
    e: Box<[u32]>,
    deg: u32,
    mask: u64,
}

impl Mono {
    fn new(e: Box<[u32]>) -> Self {
        let deg = e.iter().sum();
        let mut mask = 0u64;
        for (i, &x) in e.iter().enumerate() {
            if x > 0 {
                mask |= 1 << (i % 64);
            }
        }
        Mono { e, deg, mask }
    }

    fn divides(&self, other: &Mono) -> bool {
        self.mask & !other.mask == 0
            && self.deg <= other.deg
            && self.e.iter().zip(other.e.iter()).all(|(a, b)| a <= b)
    }

    fn mul(&self, other: &Mono) -> Mono {
        Mono {
            e: self.e.iter().zip(other.e.iter()).map(|(a, b)| a + b).collect(),
            deg: self.deg + other.deg,
            mask: self.mask | other.mask,
        }
    }

    fn div(&self, other: &Mono) -> Mono {
        Mono::new(self.e.iter().zip(other.e.iter()).map(|(a, b)| a - b).collect())
    }

    fn lcm(&self, other: &Mono) -> Mono {
        Mono::new(self.e.iter().zip(other.e.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    fn coprime(&self, other: &Mono) -> bool {
        self.mask & other.mask == 0
            && self.e.iter().zip(other.e.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }
}

pub(crate) fn cmp_mono(order: MonomialOrder, a: &Mono, b: &Mono) -> Ordering {
    match order {
        MonomialOrder::GrevLex => a.deg.cmp(&b.deg).then_with(|| {
            for (x, y) in a.e.iter().zip(b.e.iter()).rev() {
                if x != y {
                    return y.cmp(x);
                }
            }
            Ordering::Equal
        }),
        _ => order.cmp(&a.e, &b.e),
    }
}

/// Polynomial with terms sorted in decreasing order.
#[derive(Clone, Debug)]
pub(crate) struct Poly<E> {
    pub(crate) terms: Vec<(Mono, E)>,
    sugar: u32,
}

impl<E: Clone> Poly<E> {
    fn lm(&self) -> &Mono {
        &self.terms[0].0
    }
}

pub(crate) fn import<F: Field>(field: &F, p: &Polynomial, order: MonomialOrder) -> Poly<F::E> {
    let mut terms: Vec<(Mono, F::E)> = p
        .terms()
        .map(|(m, c)| (Mono::new(m.exponents().into()), field.import(c)))
        .collect();
    terms.sort_by(|a, b| cmp_mono(order, &b.0, &a.0));
    let sugar = terms.iter().map(|t| t.0.deg).max().unwrap_or(0);
    Poly { terms, sugar }
}

pub(crate) fn export<F: Field>(field: &F, p: &Poly<F::E>, nvars: usize) -> Polynomial {
    Polynomial::from_terms(
        field.domain(),
        nvars,
        p.terms
            .iter()
            .map(|(m, c)| (Monomial::new(m.e.to_vec()), field.export(c))),
    )
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
    sugar: u32,
}

pub(crate) struct Engine<'a, F: Field> {
    field: &'a F,
    order: MonomialOrder,
    budget: u64,
    steps: u64,
}

impl<'a, F: Field> Engine<'a, F> {
    pub(crate) fn new(field: &'a F, order: MonomialOrder, budget: u64) -> Self {
        Engine { field, order, budget, steps: 0 }
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            Err(Error::BudgetExceeded(self.budget))
        } else {
            Ok(())
        }
    }

    fn monic(&self, p: &mut Poly<F::E>) {
        if let Some((_, lc)) = p.terms.first() {
            if *lc != self.field.one() {
                let inv = self.field.inv(lc);
                for t in p.terms.iter_mut() {
                    t.1 = self.field.mul(&t.1, &inv);
                }
            }
        }
    }

    /// `h - c * m * g`, merging two sorted term lists.
    fn sub_mul(&self, h: &[(Mono, F::E)], c: &F::E, m: &Mono, g: &[(Mono, F::E)]) -> Vec<(Mono, F::E)> {
        let mut out = Vec::with_capacity(h.len() + g.len());
        let mut a = 0;
        let mut b = 0;
        let mut gb: Option<(Mono, F::E)> = None;
        loop {
            if gb.is_none() && b < g.len() {
                let (gm, gc) = &g[b];
                gb = Some((gm.mul(m), self.field.neg(&self.field.mul(c, gc))));
                b += 1;
            }
            match (h.get(a), gb.take()) {
                (None, None) => break,
                (Some(t), None) => {
                    out.push(t.clone());
                    a += 1;
                }
                (None, Some(t)) => out.push(t),
                (Some(t), Some(u)) => match cmp_mono(self.order, &t.0, &u.0) {
                    Ordering::Greater => {
                        out.push(t.clone());
                        a += 1;
                        gb = Some(u);
                    }
                    Ordering::Less => out.push(u),
                    Ordering::Equal => {
                        let s = self.field.add(&t.1, &u.1);
                        if !self.field.is_zero(&s) {
                            out.push((u.0, s));
                        }
                        a += 1;
                    }
                },
            }
        }
        out
    }

    /// Full normal form of `h` with respect to `basis`.
    pub(crate) fn normal_form(&mut self, h: Poly<F::E>, basis: &[&Poly<F::E>]) -> Result<Poly<F::E>> {
        let mut sugar = h.sugar;
        let mut cur = h.terms;
        let mut rem: Vec<(Mono, F::E)> = Vec::new();
        let mut start = 0;
        while start < cur.len() {
            let (lm, lc) = &cur[start];
            let div = basis.iter().find(|g| g.lm().divides(lm));
            match div {
                Some(g) => {
                    self.tick()?;
                    let q = lm.div(g.lm());
                    let c = self.field.mul(lc, &self.field.inv(&g.terms[0].1));
                    sugar = sugar.max(q.deg + g.sugar);
                    cur = self.sub_mul(&cur[start..], &c, &q, &g.terms);
                    start = 0;
                }
                None => {
                    rem.push(cur[start].clone());
                    start += 1;
                }
            }
        }
        Ok(Poly { terms: rem, sugar })
    }

    fn s_poly(&self, f: &Poly<F::E>, g: &Poly<F::E>, lcm: &Mono) -> Poly<F::E> {
        let mf = lcm.div(f.lm());
        let mg = lcm.div(g.lm());
        // f, g are monic
        let scaled_f: Vec<(Mono, F::E)> = f.terms[1..]
            .iter()
            .map(|(m, c)| (m.mul(&mf), c.clone()))
            .collect();
        let terms = self.sub_mul(&scaled_f, &self.field.one(), &mg, &g.terms[1..]);
        Poly { terms, sugar: (f.sugar + mf.deg).max(g.sugar + mg.deg) }
    }

    fn update(&self, polys: &[Poly<F::E>], active: &mut Vec<usize>, pairs: &mut Vec<Pair>, h: usize) {
        let lh = polys[h].lm();
        let mut c: Vec<usize> = active.clone();
        let mut d: Vec<(usize, Mono)> = Vec::new();
        while let Some(g1) = c.pop() {
            let l1 = polys[g1].lm().lcm(lh);
            let keep = polys[g1].lm().coprime(lh)
                || (!c.iter().any(|&g2| polys[g2].lm().lcm(lh).divides(&l1))
                    && !d.iter().any(|(_, l2)| l2.divides(&l1)));
            if keep {
                d.push((g1, l1));
            }
        }
        pairs.retain(|p| {
            !(lh.divides(&p.lcm)
                && polys[p.i].lm().lcm(lh) != p.lcm
                && polys[p.j].lm().lcm(lh) != p.lcm)
        });
        for (g, l) in d.into_iter().rev() {
            if polys[g].lm().coprime(lh) {
                continue;
            }
            let sugar = (polys[g].sugar + l.deg - polys[g].lm().deg)
                .max(polys[h].sugar + l.deg - lh.deg);
            pairs.push(Pair { i: g, j: h, lcm: l, sugar });
        }
        active.retain(|&g| !lh.divides(polys[g].lm()));
        active.push(h);
    }

    fn select(&self, pairs: &mut Vec<Pair>) -> Option<Pair> {
        if pairs.is_empty() {
            return None;
        }
        let mut best = 0;
        for k in 1..pairs.len() {
            let a = &pairs[k];
            let b = &pairs[best];
            let ord = a
                .sugar
                .cmp(&b.sugar)
                .then_with(|| cmp_mono(self.order, &a.lcm, &b.lcm))
                .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)));
            if ord == Ordering::Less {
                best = k;
            }
        }
        Some(pairs.swap_remove(best))
    }

    /// Reduced Groebner basis, sorted by increasing leading monomial.
    pub(crate) fn basis(&mut self, input: Vec<Poly<F::E>>) -> Result<Vec<Poly<F::E>>> {
        let mut polys: Vec<Poly<F::E>> = Vec::new();
        let mut active: Vec<usize> = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();
        let mut input = input;
        input.retain(|p| !p.terms.is_empty());
        input.sort_by(|a, b| cmp_mono(self.order, a.lm(), b.lm()));
        for f in input {
            let basis: Vec<&Poly<F::E>> = active.iter().map(|&k| &polys[k]).collect();
            let mut h = self.normal_form(f, &basis)?;
            if h.terms.is_empty() {
                continue;
            }
            self.monic(&mut h);
            polys.push(h);
            let idx = polys.len() - 1;
            self.update(&polys, &mut active, &mut pairs, idx);
        }
        while let Some(pair) = self.select(&mut pairs) {
            let s = self.s_poly(&polys[pair.i], &polys[pair.j], &pair.lcm);
            let basis: Vec<&Poly<F::E>> = active.iter().map(|&k| &polys[k]).collect();
            let mut h = self.normal_form(s, &basis)?;
            if h.terms.is_empty() {
                continue;
            }
            self.monic(&mut h);
            polys.push(h);
            let idx = polys.len() - 1;
            self.update(&polys, &mut active, &mut pairs, idx);
        }
        self.interreduce(active.into_iter().map(|k| polys[k].clone()).collect())
    }

    fn interreduce(&mut self, mut g: Vec<Poly<F::E>>) -> Result<Vec<Poly<F::E>>> {
        g.sort_by(|a, b| cmp_mono(self.order, a.lm(), b.lm()));
        // drop elements whose leading monomial is divisible by another's
        let mut minimal: Vec<Poly<F::E>> = Vec::new();
        for p in g {
            if !minimal.iter().any(|q| q.lm().divides(p.lm())) {
                minimal.push(p);
            }
        }
        let mut out = Vec::with_capacity(minimal.len());
        for k in 0..minimal.len() {
            let others: Vec<&Poly<F::E>> = minimal
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .map(|(_, p)| p)
                .collect();
            let head = minimal[k].terms[0].clone();
            let tail = Poly { terms: minimal[k].terms[1..].to_vec(), sugar: minimal[k].sugar };
            let r = self.normal_form(tail, &others)?;
            let mut terms = Vec::with_capacity(r.terms.len() + 1);
            terms.push(head);
            terms.extend(r.terms);
            let mut p = Poly { terms, sugar: minimal[k].sugar };
            self.monic(&mut p);
            out.push(p);
        }
        Ok(out)
    }
}
