//! Dense Gaussian elimination over `F_p`.

use alloc::vec::Vec;

use crate::poly::pow_mod;

/// Row-echelon basis of a subspace of `F_p^n`, built incrementally.
#[derive(Clone, Debug)]
pub struct Echelon {
    p: u64,
    width: usize,
    // (pivot column, row normalized to 1 at the pivot)
    rows: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    pub fn new(p: u64, width: usize) -> Self {
        Echelon { p, width, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [u64]) {
        for (col, row) in &self.rows {
            let c = v[*col];
            if c != 0 {
                let f = self.p - c;
                for (x, r) in v.iter_mut().zip(row.iter()) {
                    if *r != 0 {
                        *x = (*x + f * r) % self.p;
                    }
                }
            }
        }
    }

    /// Adds a vector; returns whether it enlarged the span.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        assert_eq!(v.len(), self.width);
        for x in v.iter_mut() {
            *x %= self.p;
        }
        self.reduce(&mut v);
        let Some(col) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = pow_mod(v[col], self.p - 2, self.p);
        for x in v.iter_mut() {
            *x = *x * inv % self.p;
        }
        // keep earlier rows reduced at the new pivot
        for (_, row) in self.rows.iter_mut() {
            let c = row[col];
            if c != 0 {
                let f = self.p - c;
                for (x, r) in row.iter_mut().zip(v.iter()) {
                    if *r != 0 {
                        *x = (*x + f * r) % self.p;
                    }
                }
            }
        }
        self.rows.push((col, v));
        true
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w: Vec<u64> = v.iter().map(|x| x % self.p).collect();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }
}

/// Whether `target` lies in the span of `rows`.
pub fn in_row_space(rows: &[Vec<u64>], target: &[u64], p: u64) -> bool {
    let mut e = Echelon::new(p, target.len());
    for r in rows {
        e.insert(r.clone());
    }
    e.contains(target)
}

pub fn rank(rows: &[Vec<u64>], p: u64) -> usize {
    let width = rows.first().map_or(0, |r| r.len());
    let mut e = Echelon::new(p, width);
    for r in rows {
        e.insert(r.clone());
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn span_membership() {
        let rows = vec![vec![1, 2, 0], vec![0, 1, 1]];
        assert!(in_row_space(&rows, &[1, 3, 1], 5));
        assert!(!in_row_space(&rows, &[0, 0, 1], 5));
        assert_eq!(rank(&rows, 5), 2);
        // dependent mod 3 only
        assert_eq!(rank(&[vec![1, 1], vec![1, 4]], 3), 1);
        assert_eq!(rank(&[vec![1, 1], vec![1, 4]], 5), 2);
    }
}
