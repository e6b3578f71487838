//! Feasibility of affine slices of block Gram matrices.
//!
//! The unknowns are the packed upper triangles of one or more symmetric
//! blocks followed by optional free scalars. Linear equality constraints are
//! eliminated by an orthonormal nullspace parametrization, which turns the
//! problem into a pencil for [`solve_max_margin`].

use nalgebra::{DMatrix, DVector};

use crate::linalg::SymMatrix;
use crate::sdp::{solve_max_margin, PencilProblem, SdpOptions, SdpResult, SdpStatus};

/// Relative singular-value cutoff for rank decisions.
const RANK_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct GramSlice {
    blocks: Vec<usize>,
    free: usize,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct GramSolution {
    pub status: SdpStatus,
    pub grams: Vec<SymMatrix>,
    pub free: Vec<f64>,
    pub margin: f64,
    /// Max-norm of the constraint residual at the returned point.
    pub residual: f64,
    /// `None` when the linear constraints alone are inconsistent.
    pub sdp: Option<SdpResult>,
}

impl GramSlice {
    pub fn new(blocks: Vec<usize>, free: usize) -> Self {
        GramSlice {
            blocks,
            free,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn num_unknowns(&self) -> usize {
        self.blocks.iter().map(|n| n * (n + 1) / 2).sum::<usize>() + self.free
    }

    /// Column index of entry `(i, j)` of block `b`.
    pub fn entry(&self, b: usize, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let off: usize = self.blocks[..b].iter().map(|n| n * (n + 1) / 2).sum();
        let n = self.blocks[b];
        off + i * n - i * (i + 1) / 2 + j
    }

    pub fn free_var(&self, k: usize) -> usize {
        self.num_unknowns() - self.free + k
    }

    pub fn push_row(&mut self, row: Vec<f64>, rhs: f64) {
        assert_eq!(row.len(), self.num_unknowns());
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    fn unpack(&self, x: &[f64]) -> (Vec<SymMatrix>, Vec<f64>) {
        let mut grams = Vec::with_capacity(self.blocks.len());
        let mut k = 0;
        for &n in &self.blocks {
            let mut g = SymMatrix::zeros(n);
            for i in 0..n {
                for j in i..n {
                    g.set(i, j, x[k]);
                    k += 1;
                }
            }
            grams.push(g);
        }
        (grams, x[k..].to_vec())
    }

    fn residual(&self, x: &[f64]) -> f64 {
        self.rows
            .iter()
            .zip(&self.rhs)
            .map(|(r, b)| (r.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() - b).abs())
            .fold(0.0, f64::max)
    }

    /// Maximizes the smallest eigenvalue over all blocks on the slice.
    pub fn solve(&self, opts: &SdpOptions) -> GramSolution {
        let nu = self.num_unknowns();
        let nr = self.rows.len();
        let a = DMatrix::from_fn(nr, nu, |i, j| self.rows[i][j]);
        let rhs = DVector::from_column_slice(&self.rhs);
        let (x_p, rowspace) = least_norm(&a, &rhs);
        let residual = self.residual(x_p.as_slice());
        let rhs_scale = 1.0 + rhs.amax();
        if residual > 1e-9 * rhs_scale * (1.0 + x_p.amax()) {
            let (grams, free) = self.unpack(x_p.as_slice());
            return GramSolution {
                status: SdpStatus::Infeasible,
                grams,
                free,
                margin: f64::NEG_INFINITY,
                residual,
                sdp: None,
            };
        }
        let null = complement(&rowspace, nu);
        let null = self.drop_gram_free_directions(null);

        let block_dim: usize = self.blocks.iter().sum();
        let pack = |x: &[f64]| -> SymMatrix {
            let (grams, _) = self.unpack(x);
            let mut m = SymMatrix::zeros(block_dim);
            let mut start = 0;
            for g in &grams {
                for i in 0..g.dim() {
                    for j in i..g.dim() {
                        m.set(start + i, start + j, g.get(i, j));
                    }
                }
                start += g.dim();
            }
            m
        };
        let constant = pack(x_p.as_slice());
        let coeffs: Vec<SymMatrix> = null.column_iter().map(|c| pack(c.as_slice())).collect();
        let problem = PencilProblem::new(constant, coeffs)
            .and_then(|p| p.with_blocks(self.blocks.clone()))
            .expect("slice pencil is well formed");
        let res = solve_max_margin(&problem, opts);
        let z = DVector::from_column_slice(&res.z);
        let x = if null.ncols() > 0 { &x_p + &null * &z } else { x_p.clone() };
        let (grams, free) = self.unpack(x.as_slice());
        GramSolution {
            status: res.status,
            grams,
            free,
            margin: res.margin,
            residual: self.residual(x.as_slice()),
            sdp: Some(res),
        }
    }

    /// Nullspace directions that only move the free scalars do not change
    /// any Gram block; they are removed so the pencil has no zero matrices.
    fn drop_gram_free_directions(&self, null: DMatrix<f64>) -> DMatrix<f64> {
        if self.free == 0 || null.ncols() == 0 {
            return null;
        }
        let ng = self.num_unknowns() - self.free;
        let gpart = null.rows(0, ng).clone_owned();
        let svd = gpart.svd(false, true);
        let vt = svd.v_t.expect("requested V^T");
        let smax = svd.singular_values.max();
        let keep: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&i| svd.singular_values[i] > RANK_TOL * smax.max(1.0))
            .collect();
        let v = DMatrix::from_fn(vt.ncols(), keep.len(), |r, c| vt[(keep[c], r)]);
        null * v
    }
}

/// Least-norm solution of `A x = b` and an orthonormal basis of the row space.
fn least_norm(a: &DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let (nr, nc) = a.shape();
    if nr == 0 {
        return (DVector::zeros(nc), DMatrix::zeros(nc, 0));
    }
    let svd = a.clone().svd(true, true);
    let u = svd.u.as_ref().expect("requested U");
    let vt = svd.v_t.as_ref().expect("requested V^T");
    let smax = svd.singular_values.max();
    let mut x = DVector::zeros(nc);
    let mut cols = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > RANK_TOL * smax {
            let coef = u.column(i).dot(b) / s;
            x += vt.row(i).transpose() * coef;
            cols.push(vt.row(i).transpose());
        }
    }
    let rowspace = if cols.is_empty() {
        DMatrix::zeros(nc, 0)
    } else {
        DMatrix::from_columns(&cols)
    };
    (x, rowspace)
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// orthonormal columns of `q` in `R^n`.
pub(crate) fn complement(q: &DMatrix<f64>, n: usize) -> DMatrix<f64> {
    let r = q.ncols();
    let mut basis: Vec<DVector<f64>> = (0..r).map(|i| q.column(i).into_owned()).collect();
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(n - r);
    let mut used = vec![false; n];
    while out.len() < n.saturating_sub(r) {
        // pick the coordinate direction with the largest remaining component
        let mut best: Option<(usize, DVector<f64>, f64)> = None;
        for e in 0..n {
            if used[e] {
                continue;
            }
            let mut v = DVector::zeros(n);
            v[e] = 1.0;
            for _ in 0..2 {
                for b in &basis {
                    let c = b.dot(&v);
                    v.axpy(-c, b, 1.0);
                }
            }
            let nv = v.norm();
            if best.as_ref().is_none_or(|(_, _, bn)| nv > *bn) {
                best = Some((e, v, nv));
            }
            if nv > 0.9 {
                break;
            }
        }
        let Some((e, v, nv)) = best else { break };
        used[e] = true;
        if nv < 1e-8 {
            break;
        }
        let v = v / nv;
        basis.push(v.clone());
        out.push(v);
    }
    if out.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&out)
    }
}

/// Orthonormal basis of `{v : M v = 0}`.
pub(crate) fn nullspace(m: &DMatrix<f64>) -> DMatrix<f64> {
    let (_, rowspace) = least_norm(m, &DVector::zeros(m.nrows()));
    complement(&rowspace, m.ncols())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_is_orthonormal() {
        let q = DMatrix::from_column_slice(3, 1, &[1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt(), 0.0]);
        let c = complement(&q, 3);
        assert_eq!(c.ncols(), 2);
        let full = DMatrix::from_columns(&[q.column(0), c.column(0), c.column(1)]);
        assert!((full.transpose() * &full - DMatrix::identity(3, 3)).norm() < 1e-12);
    }

    #[test]
    fn one_by_one_slice() {
        // g00 = 2
        let mut s = GramSlice::new(vec![1], 0);
        s.push_row(vec![1.0], 2.0);
        let sol = s.solve(&SdpOptions::default());
        assert_eq!(sol.status, SdpStatus::Feasible);
        assert!((sol.margin - 2.0).abs() < 1e-9);
    }

    #[test]
    fn inconsistent_rows() {
        let mut s = GramSlice::new(vec![1], 0);
        s.push_row(vec![1.0], 2.0);
        s.push_row(vec![1.0], 3.0);
        let sol = s.solve(&SdpOptions::default());
        assert_eq!(sol.status, SdpStatus::Infeasible);
        assert!(sol.sdp.is_none());
    }

    #[test]
    fn trace_slice_has_margin_half() {
        // 2x2 Gram with trace 1: best margin is 1/2 at I/2
        let mut s = GramSlice::new(vec![2], 0);
        let mut row = vec![0.0; 3];
        row[s.entry(0, 0, 0)] = 1.0;
        row[s.entry(0, 1, 1)] = 1.0;
        s.push_row(row, 1.0);
        let sol = s.solve(&SdpOptions::default());
        assert_eq!(sol.status, SdpStatus::Feasible);
        assert!((sol.margin - 0.5).abs() < 1e-7, "{}", sol.margin);
        assert!(sol.residual < 1e-12);
    }
}
