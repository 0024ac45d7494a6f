//! Dense exact linear algebra over `F_p`: row reduction, nullspace bases and
//! span membership. Row-major `u32` entries, `u64` intermediates.

use crate::field::PrimeField;

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat inverse; a != 0 mod p, p prime.
    let mut e = p - 2;
    let mut base = a % p;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// A dense matrix over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatGf {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl MatGf {
    pub fn zero(field: PrimeField, rows: usize, cols: usize) -> MatGf {
        MatGf { p: field.characteristic() as u64, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = (v as u64 % self.p) as u32;
    }

    fn scale_row(&mut self, r: usize, k: u64) {
        for c in 0..self.cols {
            let idx = r * self.cols + c;
            self.data[idx] = (self.data[idx] as u64 * k % self.p) as u32;
        }
    }

    /// row[dst] -= k * row[src]
    fn subtract_scaled(&mut self, dst: usize, src: usize, k: u64) {
        if k == 0 {
            return;
        }
        for c in 0..self.cols {
            let s = self.data[src * self.cols + c] as u64;
            let idx = dst * self.cols + c;
            let cur = self.data[idx] as u64;
            let sub = k * s % self.p;
            self.data[idx] = ((cur + self.p - sub) % self.p) as u32;
        }
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pivot_row) = (row..self.rows).find(|&r| self.at(r, col) != 0) else {
                continue;
            };
            if pivot_row != row {
                for c in 0..self.cols {
                    self.data.swap(row * self.cols + c, pivot_row * self.cols + c);
                }
            }
            let inv = inv_mod(self.at(row, col) as u64, self.p);
            self.scale_row(row, inv);
            for r in 0..self.rows {
                if r != row {
                    let k = self.at(r, col) as u64;
                    self.subtract_scaled(r, row, k);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    /// Canonical basis of the right nullspace (solutions of `A v = 0`),
    /// one vector per free column, re-reduced so the basis rows are in
    /// reduced echelon form with respect to the column order.
    pub fn nullspace_basis(&self) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &c in &pivots {
                v[c] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                let coeff = m.at(r, free) as u64;
                v[pc] = ((self.p - coeff) % self.p) as u32;
            }
            basis.push(v);
        }
        rref_rows(self.p, basis)
    }
}

/// Reduced row echelon form of a list of vectors; zero rows are dropped and
/// rows are ordered by pivot column. The result is a canonical basis of the
/// span.
pub fn rref_rows(p: u64, rows: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    let mut rows: Vec<Vec<u32>> = rows.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
    if rows.is_empty() {
        return rows;
    }
    let cols = rows[0].len();
    let mut out: Vec<Vec<u32>> = Vec::new();
    for mut v in rows.drain(..) {
        reduce_against(p, &mut v, &out);
        if let Some(piv) = v.iter().position(|&x| x != 0) {
            let inv = inv_mod(v[piv] as u64, p);
            for x in v.iter_mut() {
                *x = (*x as u64 * inv % p) as u32;
            }
            // back-substitute into existing rows
            for row in out.iter_mut() {
                let k = row[piv] as u64;
                if k != 0 {
                    for c in 0..cols {
                        row[c] = ((row[c] as u64 + p - k * v[c] as u64 % p) % p) as u32;
                    }
                }
            }
            out.push(v);
            out.sort_by_key(|r| r.iter().position(|&x| x != 0).unwrap_or(cols));
        }
    }
    out
}

fn reduce_against(p: u64, v: &mut [u32], basis: &[Vec<u32>]) {
    for row in basis {
        let piv = row.iter().position(|&x| x != 0).expect("no zero rows in basis");
        let k = v[piv] as u64;
        if k != 0 {
            for c in 0..v.len() {
                v[c] = ((v[c] as u64 + p - k * row[c] as u64 % p) % p) as u32;
            }
        }
    }
}

/// Whether `v` lies in the span of `basis` (a reduced basis from
/// [`rref_rows`]).
pub fn in_span(p: u64, basis: &[Vec<u32>], v: &[u32]) -> bool {
    let mut v = v.to_vec();
    reduce_against(p, &mut v, basis);
    v.iter().all(|&x| x == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn rref_and_nullspace() {
        let f5 = PrimeField::new(5).unwrap();
        // [1 2 3; 2 4 2] over F_5 — rank 2, nullity 1
        let mut m = MatGf::zero(f5, 2, 3);
        for (r, row) in [[1u32, 2, 3], [2, 4, 2]].iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, v);
            }
        }
        let ns = m.nullspace_basis();
        assert_eq!(ns.len(), 1);
        // verify A v = 0
        let v = &ns[0];
        for r in 0..2 {
            let mut acc = 0u64;
            for c in 0..3 {
                acc = (acc + m.at(r, c) as u64 * v[c] as u64) % 5;
            }
            assert_eq!(acc, 0);
        }
    }

    #[test]
    fn span_membership() {
        let basis = rref_rows(3, vec![vec![1, 0, 2], vec![0, 1, 1]]);
        assert!(in_span(3, &basis, &[1, 1, 0]));
        assert!(in_span(3, &basis, &[2, 0, 1]));
        assert!(!in_span(3, &basis, &[0, 0, 1]));
    }

    #[test]
    fn rref_rows_canonicalizes() {
        // two generating sets of the same space reduce identically
        let a = rref_rows(2, vec![vec![1, 1, 0], vec![0, 1, 1]]);
        let b = rref_rows(2, vec![vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 0]]);
        assert_eq!(a, b);
    }
}
