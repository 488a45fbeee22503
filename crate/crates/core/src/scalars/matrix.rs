use std::collections::BTreeMap;

use num_integer::Integer;

use super::{Ring, Scalar};
use crate::error::{Error, Result};

type Row = BTreeMap<usize, Scalar>;

/// A sparse matrix stored as a row-major map of nonzero entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl SparseMatrix {
    pub fn zero(ring: Ring, rows: usize, cols: usize) -> Self {
        SparseMatrix { ring, rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(ring: Ring, n: usize) -> Self {
        let mut m = Self::zero(ring.clone(), n, n);
        for i in 0..n {
            m.entries.insert((i, i), ring.one());
        }
        m
    }

    /// Builds a matrix from dense integer rows (a convenience for tests and fixtures).
    pub fn from_i64_rows(ring: Ring, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zero(ring.clone(), rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, ring.from_i64(v));
            }
        }
        m
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Sets an entry; writing zero removes it.
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Scalar) {
        let cur = self.get(i, j);
        self.set(i, j, &cur + v);
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, &Scalar)> {
        self.entries.range((i, 0)..(i + 1, 0)).map(|(&(_, j), v)| (j, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn transpose(&self) -> SparseMatrix {
        SparseMatrix {
            ring: self.ring.clone(),
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(i, j), v)| ((j, i), v.clone())).collect(),
        }
    }

    /// `self - other`.
    pub fn minus(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} minus {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (&(i, j), v) in &other.entries {
            out.add_to(i, j, &-v.clone());
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                x.len(),
                self.rows
            )));
        }
        check_kinds(&self.ring, x)?;
        let mut out = vec![self.ring.zero(); self.cols];
        for (&(i, j), v) in &self.entries {
            if !x[i].is_zero() {
                out[j] += &(&x[i] * v);
            }
        }
        Ok(out)
    }

    fn check_kinds(&self) -> Result<()> {
        match self.entries.values().find(|v| !self.ring.contains(v)) {
            Some(v) => Err(Error::MixedScalarKinds(format!("entry {v} is not in {}", self.ring))),
            None => Ok(()),
        }
    }

    fn sparse_rows(&self) -> Vec<Row> {
        let mut rows = vec![Row::new(); self.rows];
        for (&(i, j), v) in &self.entries {
            rows[i].insert(j, v.clone());
        }
        rows
    }
}

fn check_kinds(ring: &Ring, xs: &[Scalar]) -> Result<()> {
    match xs.iter().find(|v| !ring.contains(v)) {
        Some(v) => Err(Error::MixedScalarKinds(format!("{v} is not in {ring}"))),
        None => Ok(()),
    }
}

/// Exact matrix product `a * b`.
pub fn mat_mul(a: &SparseMatrix, b: &SparseMatrix) -> Result<SparseMatrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} times {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    if a.ring != b.ring {
        return Err(Error::MixedScalarKinds(format!("{} times {}", a.ring, b.ring)));
    }
    a.check_kinds()?;
    b.check_kinds()?;
    let b_rows = b.sparse_rows();
    let mut acc: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
    for (&(i, k), x) in &a.entries {
        for (&j, y) in &b_rows[k] {
            let p = x * y;
            match acc.get_mut(&(i, j)) {
                Some(e) => *e += &p,
                None => {
                    acc.insert((i, j), p);
                }
            }
        }
    }
    acc.retain(|_, v| !v.is_zero());
    Ok(SparseMatrix { ring: a.ring.clone(), rows: a.rows, cols: b.cols, entries: acc })
}

/// Row echelon form `H = U * M` with `U` invertible over the ring.
struct Echelon {
    /// Reduced rows paired with the transform row that produced them.
    rows: Vec<(Row, Row)>,
    /// `(pivot column, row index)` in increasing column order.
    pivots: Vec<(usize, usize)>,
}

fn row_axpy(target: &mut Row, src: &Row, c: &Scalar) {
    for (&j, v) in src {
        let p = v * c;
        let remove = match target.get_mut(&j) {
            Some(e) => {
                *e += &p;
                e.is_zero()
            }
            None => {
                target.insert(j, p);
                false
            }
        };
        if remove {
            target.remove(&j);
        }
    }
}

fn echelon(m: &SparseMatrix) -> Echelon {
    let ring = &m.ring;
    let mut rows: Vec<(Row, Row)> = m
        .sparse_rows()
        .into_iter()
        .enumerate()
        .map(|(i, r)| (r, Row::from([(i, ring.one())])))
        .collect();
    let mut active: Vec<usize> = (0..rows.len()).collect();
    let mut pivots = Vec::new();
    loop {
        active.retain(|&i| !rows[i].0.is_empty());
        let Some(col) = active.iter().map(|&i| *rows[i].0.keys().next().unwrap()).min() else {
            break;
        };
        let mut cands: Vec<usize> =
            active.iter().copied().filter(|&i| rows[i].0.contains_key(&col)).collect();
        let pivot = if ring.is_field() {
            let p = cands[0];
            let inv = rows[p].0[&col].inverse().expect("nonzero field element");
            for &i in &cands[1..] {
                let c = -(&rows[i].0[&col] * &inv);
                let (src, src_u) = rows[p].clone();
                row_axpy(&mut rows[i].0, &src, &c);
                row_axpy(&mut rows[i].1, &src_u, &c);
            }
            p
        } else {
            // Euclidean reduction on the column until a single entry remains.
            loop {
                let p = *cands
                    .iter()
                    .min_by_key(|&&i| rows[i].0[&col].abs_int().expect("integer entry"))
                    .unwrap();
                let pv = rows[p].0[&col].as_int().unwrap().clone();
                let (src, src_u) = rows[p].clone();
                for &i in &cands {
                    if i == p {
                        continue;
                    }
                    let q = rows[i].0[&col].as_int().unwrap().div_floor(&pv);
                    let c = Scalar::Int(-q);
                    row_axpy(&mut rows[i].0, &src, &c);
                    row_axpy(&mut rows[i].1, &src_u, &c);
                }
                cands.retain(|&i| rows[i].0.contains_key(&col));
                if cands.len() == 1 {
                    break cands[0];
                }
            }
        };
        pivots.push((col, pivot));
        active.retain(|&i| i != pivot);
    }
    Echelon { rows, pivots }
}

/// Finds `x` with `x * m = v`, or `None` when `v` is not in the row space of
/// `m` over the ring.  Over the integers the system is solved integrally.
pub fn image_membership(m: &SparseMatrix, v: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if v.len() != m.cols {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} against {} columns",
            v.len(),
            m.cols
        )));
    }
    m.check_kinds()?;
    check_kinds(&m.ring, v)?;
    let ring = &m.ring;
    let ech = echelon(m);
    let mut residual: Row =
        v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, x.clone())).collect();
    let mut x = vec![ring.zero(); m.rows];
    for &(col, p) in &ech.pivots {
        let Some(a) = residual.get(&col) else { continue };
        let (h, u) = &ech.rows[p];
        let Some(q) = a.exact_div(&h[&col]) else {
            return Ok(None);
        };
        row_axpy(&mut residual, h, &-q.clone());
        for (&i, c) in u {
            x[i] += &(c * &q);
        }
    }
    if !residual.is_empty() {
        return Ok(None);
    }
    debug_assert_eq!(m.vec_mul(&x).unwrap(), v);
    Ok(Some(x))
}

/// Rank of `m` (over the fraction field when the ring is the integers).
pub fn rank(m: &SparseMatrix) -> usize {
    echelon(m).pivots.len()
}

/// A basis of the left kernel `{x : x * m = 0}`.  Over the integers the
/// returned vectors span the kernel lattice.
pub fn left_kernel(m: &SparseMatrix) -> Vec<Vec<Scalar>> {
    let ech = echelon(m);
    let ring = &m.ring;
    ech.rows
        .iter()
        .filter(|(h, _)| h.is_empty())
        .map(|(_, u)| {
            let mut x = vec![ring.zero(); m.rows];
            for (&i, c) in u {
                x[i] = c.clone();
            }
            x
        })
        .collect()
}
