//! Rank and kernel computations over Q(i) by fraction-exact row reduction.

use crate::scalar::GaussRational;

/// Dense matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<GaussRational>>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![vec![GaussRational::zero(); cols]; rows] }
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, cols: &[Vec<GaussRational>]) -> Self {
        let mut m = ExactMatrix::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                m.data[i][j] = v.clone();
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussRational {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GaussRational) {
        self.data[i][j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(|v| v.is_zero()))
    }

    pub fn mul(&self, o: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let mut m = ExactMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o.data[k][j];
                    if !b.is_zero() {
                        m.data[i][j] = m.data[i][j].add(&a.mul(b));
                    }
                }
            }
        }
        m
    }

    pub fn add(&self, o: &ExactMatrix) -> ExactMatrix {
        let mut m = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[i][j] = m.data[i][j].add(&o.data[i][j]);
            }
        }
        m
    }

    pub fn apply(&self, v: &[GaussRational]) -> Vec<GaussRational> {
        (0..self.rows)
            .map(|i| {
                self.data[i].iter().zip(v).fold(GaussRational::zero(), |acc, (a, b)| {
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        acc.add(&a.mul(b))
                    }
                })
            })
            .collect()
    }

    /// Rows restricted to `rows` and columns to `cols`.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> ExactMatrix {
        ExactMatrix {
            rows: rows.len(),
            cols: cols.len(),
            data: rows.iter().map(|&i| cols.iter().map(|&j| self.data[i][j].clone()).collect()).collect(),
        }
    }

    /// Reduced row echelon form and pivot columns.
    fn rref(&self) -> (Vec<Vec<GaussRational>>, Vec<usize>) {
        let mut a = self.data.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(row, p);
            let inv = a[row][col].inv().expect("pivot is nonzero");
            for v in a[row].iter_mut() {
                *v = v.mul(&inv);
            }
            for r in 0..self.rows {
                if r != row && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in col..self.cols {
                        let t = a[row][c].mul(&f);
                        a[r][c] = a[r][c].sub(&t);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<GaussRational>> {
        let (a, pivots) = self.rref();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![GaussRational::zero(); self.cols];
            v[free] = GaussRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = a[r][free].neg();
            }
            out.push(v);
        }
        out
    }
}

/// Dimension of the span of the vectors (each of length `dim`).
pub fn span_dim(dim: usize, vectors: &[Vec<GaussRational>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    ExactMatrix::from_columns(dim, vectors).rank()
}
