//! Symmetric sparse matrices in CSR form and an envelope (skyline) Cholesky
//! factorization under reverse Cuthill-McKee ordering.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Sparsity pattern shared by several operators on the same mesh.
#[derive(Debug, Clone)]
pub struct Pattern {
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
}

impl Pattern {
    /// Pattern of the symmetric closure of `pairs` plus the diagonal.
    pub fn from_adjacency(n: usize, pairs: impl Iterator<Item = (usize, usize)>) -> Self {
        let mut adj: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        for (a, b) in pairs {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        row_ptr.push(0);
        for mut row in adj {
            row.sort_unstable();
            row.dedup();
            cols.extend(row);
            row_ptr.push(cols.len());
        }
        Self { row_ptr, cols }
    }

    pub fn n(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    /// Position of entry `(i, j)` in the value array.
    pub fn index(&self, i: usize, j: usize) -> usize {
        let row = &self.cols[self.row_ptr[i]..self.row_ptr[i + 1]];
        self.row_ptr[i] + row.binary_search(&j).expect("entry in pattern")
    }

    pub fn row(&self, i: usize) -> std::ops::Range<usize> {
        self.row_ptr[i]..self.row_ptr[i + 1]
    }
}

/// Values on a [`Pattern`].
#[derive(Debug, Clone)]
pub struct CsrMatrix<'p> {
    pub pattern: &'p Pattern,
    pub vals: Vec<f64>,
}

impl CsrMatrix<'_> {
    pub fn n(&self) -> usize {
        self.pattern.n()
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let p = self.pattern;
        (0..p.n())
            .map(|i| p.row(i).map(|k| self.vals[k] * x[p.cols[k]]).sum())
            .collect()
    }

    /// Infinity norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        let p = self.pattern;
        (0..p.n())
            .map(|i| p.row(i).map(|k| self.vals[k].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.vals[self.pattern.index(i, j)]
    }
}

/// `sum_i c_i A_i` for operators on one pattern.
pub fn combine<'p>(pattern: &'p Pattern, terms: &[(f64, &[f64])]) -> CsrMatrix<'p> {
    let mut vals = vec![0.0; pattern.nnz()];
    for (c, a) in terms {
        if *c != 0.0 {
            for (v, x) in vals.iter_mut().zip(a.iter()) {
                *v += c * x;
            }
        }
    }
    CsrMatrix { pattern, vals }
}

/// Reverse Cuthill-McKee ordering. Returns `perm` with `perm[new] = old`.
pub fn rcm_ordering(pattern: &Pattern) -> Vec<usize> {
    let n = pattern.n();
    let degree = |i: usize| pattern.row(i).len();
    let neighbours = |i: usize| {
        pattern.cols[pattern.row(i)]
            .iter()
            .copied()
            .filter(move |&j| j != i)
    };
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);

    // BFS levels from `s`; returns the last node of the deepest level
    let farthest = |s: usize| -> (usize, usize) {
        let mut dist = vec![usize::MAX; n];
        dist[s] = 0;
        let mut q = VecDeque::from([s]);
        let mut last = s;
        while let Some(u) = q.pop_front() {
            last = u;
            for v in neighbours(u) {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    q.push_back(v);
                }
            }
        }
        (last, dist[last])
    };

    while order.len() < n {
        let seed = (0..n)
            .filter(|&i| !visited[i])
            .min_by_key(|&i| (degree(i), i))
            .expect("unvisited node");
        // pseudo-peripheral start
        let (mut start, mut ecc) = farthest(seed);
        for _ in 0..4 {
            let (next, e) = farthest(start);
            if e <= ecc {
                break;
            }
            start = next;
            ecc = e;
        }
        visited[start] = true;
        let begin = order.len();
        order.push(start);
        let mut head = begin;
        while head < order.len() {
            let u = order[head];
            head += 1;
            let mut nb: Vec<usize> = neighbours(u).filter(|&v| !visited[v]).collect();
            nb.sort_by_key(|&v| (degree(v), v));
            for v in nb {
                visited[v] = true;
                order.push(v);
            }
        }
    }
    order.reverse();
    order
}

/// Cholesky factor `L` of a symmetric positive definite matrix, stored by
/// rows from the first nonzero column to the diagonal.
#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    perm: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    vals: Vec<f64>,
}

impl EnvelopeCholesky {
    pub fn factor(a: &CsrMatrix, perm: &[usize]) -> Result<Self> {
        let p = a.pattern;
        let n = p.n();
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut first: Vec<usize> = (0..n).collect();
        for old in 0..n {
            let i = inv[old];
            for k in p.row(old) {
                let j = inv[p.cols[k]];
                if j < first[i] {
                    first[i] = j;
                }
            }
        }
        let mut start = Vec::with_capacity(n + 1);
        start.push(0);
        for i in 0..n {
            start.push(start[i] + i - first[i] + 1);
        }
        let mut vals = vec![0.0; start[n]];
        for old in 0..n {
            let i = inv[old];
            for k in p.row(old) {
                let j = inv[p.cols[k]];
                if j <= i {
                    vals[start[i] + j - first[i]] = a.vals[k];
                }
            }
        }

        for i in 0..n {
            let fi = first[i];
            let row_i = start[i];
            for j in fi..i {
                let fj = first[j];
                let lo = fi.max(fj);
                let (head, tail) = vals.split_at_mut(row_i);
                let lj = &head[start[j]..start[j + 1]];
                let li = &mut tail[..i - fi + 1];
                let dot: f64 = li[lo - fi..j - fi]
                    .iter()
                    .zip(&lj[lo - fj..j - fj])
                    .map(|(x, y)| x * y)
                    .sum();
                li[j - fi] = (li[j - fi] - dot) / lj[j - fj];
            }
            let li = &mut vals[row_i..row_i + i - fi + 1];
            let sq: f64 = li[..i - fi].iter().map(|x| x * x).sum();
            let pivot = li[i - fi] - sq;
            if !(pivot > 0.0) {
                return Err(Error::NotPositiveDefinite {
                    row: perm[i],
                    pivot,
                });
            }
            li[i - fi] = pivot.sqrt();
        }
        Ok(Self {
            perm: perm.to_vec(),
            first,
            start,
            vals,
        })
    }

    pub fn n(&self) -> usize {
        self.first.len()
    }

    /// Stored entries of the factor.
    pub fn envelope_size(&self) -> usize {
        self.vals.len()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut y: Vec<f64> = self.perm.iter().map(|&o| b[o]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.vals[self.start[i]..self.start[i + 1]];
            let dot: f64 = row[..i - fi]
                .iter()
                .zip(&y[fi..i])
                .map(|(l, x)| l * x)
                .sum();
            y[i] = (y[i] - dot) / row[i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = &self.vals[self.start[i]..self.start[i + 1]];
            y[i] /= row[i - fi];
            let xi = y[i];
            for (l, yk) in row[..i - fi].iter().zip(&mut y[fi..i]) {
                *yk -= l * xi;
            }
        }
        let mut x = vec![0.0; n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
