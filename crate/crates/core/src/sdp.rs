//! Small dense SDP solver for pencils `A0 + sum_i z_i A_i >= 0`.
//!
//! Internally every problem is put in the standard dual form
//!
//! ```text
//!     maximize  b.y   s.t.  S = C - sum_i y_i F_i >= 0
//!     minimize <C,X>  s.t.  <F_i, X> = b_i,  X >= 0
//! ```
//!
//! and solved with an infeasible primal-dual path-following method using the
//! HKM search direction and Mehrotra's predictor-corrector. The Newton system
//! is the Schur complement `M_ij = tr(F_i X F_j S^-1)`, factored by Cholesky.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use thiserror::Error;

use crate::linalg::{jacobi_eigen_dense, SymMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SdpError {
    #[error("matrix {index} has dimension {found}, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    #[error("objective has length {found}, expected {expected}")]
    ObjectiveLength { expected: usize, found: usize },
    #[error("block sizes {0:?} do not partition the pencil or cut through nonzero entries")]
    BadBlocks(Vec<usize>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    Feasible,
    Infeasible,
    Indeterminate,
    IterationLimit,
    Unbounded,
}

#[derive(Clone, Copy, Debug)]
pub struct SdpOptions {
    /// Margins within `eps_feas` of zero are reported as indeterminate.
    pub eps_feas: f64,
    /// Relative duality gap at which the iteration stops.
    pub eps_gap: f64,
    pub max_iter: usize,
    /// Upper bound imposed on the margin so that it is always finite.
    pub margin_cap: f64,
    /// Stop the margin solve as soon as the sign of the margin is certain.
    pub stop_on_sign: bool,
}

impl Default for SdpOptions {
    fn default() -> Self {
        SdpOptions {
            eps_feas: 1e-7,
            eps_gap: 1e-8,
            max_iter: 200,
            margin_cap: 1e6,
            stop_on_sign: false,
        }
    }
}

/// `A0 + sum_i z_i A_i`, optionally block diagonal, with a linear objective.
#[derive(Clone, Debug)]
pub struct PencilProblem {
    constant: SymMatrix,
    coeffs: Vec<SymMatrix>,
    objective: Vec<f64>,
    labels: Vec<String>,
    blocks: Vec<usize>,
}

impl PencilProblem {
    pub fn new(constant: SymMatrix, coeffs: Vec<SymMatrix>) -> Result<Self, SdpError> {
        let n = constant.dim();
        for (i, a) in coeffs.iter().enumerate() {
            if a.dim() != n {
                return Err(SdpError::DimensionMismatch {
                    index: i + 1,
                    expected: n,
                    found: a.dim(),
                });
            }
        }
        let m = coeffs.len();
        Ok(PencilProblem {
            constant,
            coeffs,
            objective: vec![0.0; m],
            labels: (1..=m).map(|i| format!("z{i}")).collect(),
            blocks: vec![n],
        })
    }

    pub fn with_objective(mut self, c: Vec<f64>) -> Result<Self, SdpError> {
        if c.len() != self.coeffs.len() {
            return Err(SdpError::ObjectiveLength {
                expected: self.coeffs.len(),
                found: c.len(),
            });
        }
        self.objective = c;
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.coeffs.len());
        self.labels = labels;
        self
    }

    /// Declares a block-diagonal structure. Entries outside the diagonal
    /// blocks must be zero in every matrix.
    pub fn with_blocks(mut self, sizes: Vec<usize>) -> Result<Self, SdpError> {
        let n = self.dim();
        if sizes.iter().sum::<usize>() != n || sizes.contains(&0) {
            return Err(SdpError::BadBlocks(sizes));
        }
        let mut owner = Vec::with_capacity(n);
        for (b, &s) in sizes.iter().enumerate() {
            owner.extend(std::iter::repeat_n(b, s));
        }
        for a in std::iter::once(&self.constant).chain(&self.coeffs) {
            for i in 0..n {
                for j in i + 1..n {
                    if owner[i] != owner[j] && a.get(i, j) != 0.0 {
                        return Err(SdpError::BadBlocks(sizes));
                    }
                }
            }
        }
        self.blocks = sizes;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.constant.dim()
    }

    pub fn num_vars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn constant(&self) -> &SymMatrix {
        &self.constant
    }

    pub fn coeffs(&self) -> &[SymMatrix] {
        &self.coeffs
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// `A0 + sum_i z_i A_i`
    pub fn eval(&self, z: &[f64]) -> SymMatrix {
        assert_eq!(z.len(), self.coeffs.len());
        let mut m = self.constant.clone();
        for (a, &zi) in self.coeffs.iter().zip(z) {
            if zi != 0.0 {
                m.axpy(zi, a);
            }
        }
        m
    }

    /// Smallest eigenvalue of the pencil at `z`, computed blockwise.
    pub fn min_eigenvalue_at(&self, z: &[f64]) -> f64 {
        let m = self.eval(z);
        let mut start = 0;
        let mut lo = f64::INFINITY;
        for &s in &self.blocks {
            lo = lo.min(m.block(start, s).min_eigenvalue());
            start += s;
        }
        lo
    }

    fn dense_constant(&self) -> Vec<DMatrix<f64>> {
        self.split(&self.constant)
            .into_iter()
            .zip(&self.blocks)
            .map(|(b, &s)| b.unwrap_or_else(|| DMatrix::zeros(s, s)))
            .collect()
    }

    /// Splits a full matrix into dense diagonal blocks; `None` when all zero.
    fn split(&self, a: &SymMatrix) -> Vec<Option<DMatrix<f64>>> {
        let mut out = Vec::with_capacity(self.blocks.len());
        let mut start = 0;
        for &s in &self.blocks {
            let b = a.block(start, s);
            out.push(if b.is_zero() { None } else { Some(b.to_dense()) });
            start += s;
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct SdpResult {
    pub status: SdpStatus,
    pub z: Vec<f64>,
    /// Largest `t` with `A(z) - t I >= 0` at the returned `z`.
    pub margin: f64,
    pub objective: f64,
    /// PSD certificate from the primal side: proves infeasibility when
    /// `status == Infeasible`, optimality otherwise.
    pub dual: Option<SymMatrix>,
    pub iterations: usize,
}

/// `max t  s.t.  A(z) - t I >= 0`, with `t` capped at `opts.margin_cap`.
pub fn solve_max_margin(p: &PencilProblem, opts: &SdpOptions) -> SdpResult {
    let m = p.num_vars();
    let n = p.dim();
    let mut std = StandardForm {
        sizes: p.blocks.clone(),
        c: p.dense_constant(),
        f: Vec::with_capacity(m + 1),
        b: vec![0.0; m + 1],
    };
    for a in &p.coeffs {
        let mut blocks: Vec<Option<DMatrix<f64>>> =
            p.split(a).into_iter().map(|b| b.map(|d| -d)).collect();
        blocks.push(None);
        std.f.push(blocks);
    }
    let mut t_blocks: Vec<Option<DMatrix<f64>>> =
        p.blocks.iter().map(|&s| Some(DMatrix::identity(s, s))).collect();
    t_blocks.push(Some(DMatrix::from_element(1, 1, 1.0)));
    std.f.push(t_blocks);
    std.c.push(DMatrix::from_element(1, 1, opts.margin_cap));
    std.sizes.push(1);
    std.b[m] = 1.0;

    if n == 0 {
        return SdpResult {
            status: SdpStatus::Feasible,
            z: vec![0.0; m],
            margin: opts.margin_cap,
            objective: opts.margin_cap,
            dual: None,
            iterations: 0,
        };
    }

    let lam0 = p.min_eigenvalue_at(&vec![0.0; m]);
    let mut y0 = vec![0.0; m + 1];
    y0[m] = lam0 - 1.0;

    let eps = opts.eps_feas;
    let stop_on_sign = opts.stop_on_sign;
    let out = ipm(&std, y0, opts, |st| {
        stop_on_sign
            && ((st.dinf <= 1e-12 && st.y[m] > 2.0 * eps)
                || (st.pinf <= 1e-10 && st.pobj < -2.0 * eps))
    });

    let z = out.y[..m].to_vec();
    let t_dual = out.y[m];
    let capped = t_dual >= opts.margin_cap * (1.0 - 1e-9);
    let margin = if capped {
        opts.margin_cap
    } else {
        p.min_eigenvalue_at(&z).min(opts.margin_cap)
    };
    let cert_ok = out.pinf <= 1e-8 && out.pobj < -eps;
    let status = if margin > eps {
        SdpStatus::Feasible
    } else if cert_ok {
        SdpStatus::Infeasible
    } else if out.converged || out.stopped {
        SdpStatus::Indeterminate
    } else {
        SdpStatus::IterationLimit
    };
    let dual = Some(assemble(&out.x[..p.blocks.len()], &p.blocks));
    SdpResult {
        status,
        z,
        margin,
        objective: margin,
        dual,
        iterations: out.iterations,
    }
}

/// `min c.z  s.t.  A(z) >= 0` by log-det barrier path following, started
/// from the max-margin point.
pub fn solve_min_objective(p: &PencilProblem, opts: &SdpOptions) -> SdpResult {
    let m = p.num_vars();
    let start = solve_max_margin(
        p,
        &SdpOptions {
            stop_on_sign: true,
            ..*opts
        },
    );
    if start.status == SdpStatus::Infeasible {
        return SdpResult {
            objective: f64::NAN,
            ..start
        };
    }
    let mut std = StandardForm {
        sizes: p.blocks.clone(),
        c: p.dense_constant(),
        f: Vec::with_capacity(m),
        b: p.objective.iter().map(|c| -c).collect(),
    };
    for a in &p.coeffs {
        std.f.push(p.split(a).into_iter().map(|b| b.map(|d| -d)).collect());
    }
    let out = ipm(&std, start.z.clone(), opts, |st| st.dobj > 1e12);
    let z = out.y.clone();
    let objective: f64 = p.objective.iter().zip(&z).map(|(c, v)| c * v).sum();
    let status = if objective < -1e12 {
        SdpStatus::Unbounded
    } else if out.converged {
        SdpStatus::Optimal
    } else {
        SdpStatus::IterationLimit
    };
    SdpResult {
        status,
        margin: p.min_eigenvalue_at(&z),
        z,
        objective,
        dual: Some(assemble(&out.x, &p.blocks)),
        iterations: out.iterations + start.iterations,
    }
}

fn assemble(blocks: &[DMatrix<f64>], sizes: &[usize]) -> SymMatrix {
    let n: usize = sizes.iter().sum();
    let mut out = SymMatrix::zeros(n);
    let mut start = 0;
    for (b, &s) in blocks.iter().zip(sizes) {
        for i in 0..s {
            for j in i..s {
                out.set(start + i, start + j, 0.5 * (b[(i, j)] + b[(j, i)]));
            }
        }
        start += s;
    }
    out
}

struct StandardForm {
    sizes: Vec<usize>,
    c: Vec<DMatrix<f64>>,
    /// `f[i][k]`: block `k` of constraint matrix `i`
    f: Vec<Vec<Option<DMatrix<f64>>>>,
    b: Vec<f64>,
}

struct IterState<'a> {
    y: &'a [f64],
    pobj: f64,
    dobj: f64,
    pinf: f64,
    dinf: f64,
}

struct IpmOutcome {
    x: Vec<DMatrix<f64>>,
    y: Vec<f64>,
    pobj: f64,
    pinf: f64,
    iterations: usize,
    converged: bool,
    stopped: bool,
}

fn block_dot(a: &[DMatrix<f64>], b: &[DMatrix<f64>]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).sum()
}

fn opt_dot(f: &[Option<DMatrix<f64>>], b: &[DMatrix<f64>]) -> f64 {
    f.iter()
        .zip(b)
        .map(|(x, y)| x.as_ref().map_or(0.0, |x| x.dot(y)))
        .sum()
}

fn sym(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

/// Largest `alpha` with `X + alpha dX >= 0`, blockwise.
fn max_step(x: &[DMatrix<f64>], dx: &[DMatrix<f64>]) -> f64 {
    let mut alpha = f64::INFINITY;
    for (xb, db) in x.iter().zip(dx) {
        let Some(ch) = Cholesky::new(xb.clone()) else {
            return 0.0;
        };
        let l = ch.l();
        let linv = match l.clone().try_inverse() {
            Some(v) => v,
            None => return 0.0,
        };
        let w = &linv * db * linv.transpose();
        let (vals, _) = jacobi_eigen_dense(&sym(&w), 1e-12);
        let lmin = vals[vals.len() - 1];
        if lmin < 0.0 {
            alpha = alpha.min(-1.0 / lmin);
        }
    }
    alpha
}

fn spd_inverse(s: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    Cholesky::new(s.clone()).map(|c| c.inverse())
}

fn ipm<F>(p: &StandardForm, y0: Vec<f64>, opts: &SdpOptions, stop: F) -> IpmOutcome
where
    F: Fn(&IterState) -> bool,
{
    let m = p.b.len();
    let nb = p.sizes.len();
    let ntot: usize = p.sizes.iter().sum();
    let mut y = y0;

    // S = C - sum y_i F_i, shifted into the interior when needed
    let mut s: Vec<DMatrix<f64>> = p.c.clone();
    for (i, fi) in p.f.iter().enumerate() {
        for (k, fb) in fi.iter().enumerate() {
            if let Some(fb) = fb {
                s[k] -= fb * y[i];
            }
        }
    }
    for sb in s.iter_mut() {
        let (vals, _) = jacobi_eigen_dense(sb, 1e-12);
        let lmin = vals.last().copied().unwrap_or(1.0);
        if lmin < 1e-8 {
            let shift = 1.0 - lmin;
            for d in 0..sb.nrows() {
                sb[(d, d)] += shift;
            }
        }
    }
    let fnorm = p
        .f
        .iter()
        .map(|fi| fi.iter().flatten().map(|b| b.norm_squared()).sum::<f64>().sqrt())
        .fold(0.0_f64, f64::max);
    let bmax = p.b.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let xi = 1.0_f64.max((1.0 + bmax) / (1.0 + fnorm));
    let mut x: Vec<DMatrix<f64>> = p.sizes.iter().map(|&n| DMatrix::identity(n, n) * xi).collect();

    let bnorm = p.b.iter().map(|v| v * v).sum::<f64>().sqrt();
    let cnorm = p.c.iter().map(|c| c.norm_squared()).sum::<f64>().sqrt();

    let mut out = IpmOutcome {
        x: Vec::new(),
        y: Vec::new(),
        pobj: f64::NAN,
        pinf: f64::INFINITY,
        iterations: 0,
        converged: false,
        stopped: false,
    };

    for iter in 0..=opts.max_iter {
        out.iterations = iter;
        // residuals
        let mut rd: Vec<DMatrix<f64>> = p.c.clone();
        for (i, fi) in p.f.iter().enumerate() {
            for (k, fb) in fi.iter().enumerate() {
                if let Some(fb) = fb {
                    rd[k] -= fb * y[i];
                }
            }
        }
        for k in 0..nb {
            rd[k] -= &s[k];
        }
        let rp: Vec<f64> = (0..m).map(|i| p.b[i] - opt_dot(&p.f[i], &x)).collect();
        let pobj = block_dot(&p.c, &x);
        let dobj: f64 = p.b.iter().zip(&y).map(|(b, v)| b * v).sum();
        let pinf = rp.iter().map(|v| v * v).sum::<f64>().sqrt() / (1.0 + bnorm);
        let dinf = rd.iter().map(|r| r.norm_squared()).sum::<f64>().sqrt() / (1.0 + cnorm);
        let gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        let mu = block_dot(&x, &s) / ntot as f64;
        out.pobj = pobj;
        out.pinf = pinf;

        let st = IterState {
            y: &y,
            pobj,
            dobj,
            pinf,
            dinf,
        };
        if stop(&st) {
            out.stopped = true;
            break;
        }
        if pinf <= 1e-9 && dinf <= 1e-9 && gap <= opts.eps_gap {
            out.converged = true;
            break;
        }
        if iter == opts.max_iter {
            break;
        }

        let Some(sinv) = s.iter().map(spd_inverse).collect::<Option<Vec<_>>>() else {
            break;
        };

        // G_j = X F_j S^-1 and the Schur complement
        let g: Vec<Vec<Option<DMatrix<f64>>>> = p
            .f
            .iter()
            .map(|fj| {
                fj.iter()
                    .enumerate()
                    .map(|(k, fb)| fb.as_ref().map(|fb| &x[k] * fb * &sinv[k]))
                    .collect()
            })
            .collect();
        let mut mm = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let mut v = 0.0;
                for k in 0..nb {
                    if let (Some(fi), Some(gj)) = (&p.f[i][k], &g[j][k]) {
                        v += fi.dot(gj);
                    }
                }
                mm[(i, j)] = v;
                mm[(j, i)] = v;
            }
        }
        let Some(chol) = factor_schur(mm) else {
            break;
        };

        let xrd: Vec<DMatrix<f64>> = (0..nb).map(|k| &x[k] * &rd[k] * &sinv[k]).collect();

        let solve_dir = |t: Vec<DMatrix<f64>>| -> (Vec<DMatrix<f64>>, DVector<f64>, Vec<DMatrix<f64>>) {
            let rhs = DVector::from_iterator(
                m,
                (0..m).map(|i| {
                    let ft: f64 = p.f[i]
                        .iter()
                        .zip(&t)
                        .map(|(fb, tb)| fb.as_ref().map_or(0.0, |fb| fb.dot(tb)))
                        .sum();
                    rp[i] - ft
                }),
            );
            let dy = chol.solve(&rhs);
            let mut dx = t;
            for (j, gj) in g.iter().enumerate() {
                for (k, gb) in gj.iter().enumerate() {
                    if let Some(gb) = gb {
                        dx[k] += gb * dy[j];
                    }
                }
            }
            let dx: Vec<DMatrix<f64>> = dx.iter().map(sym).collect();
            let mut ds = rd.clone();
            for (j, fj) in p.f.iter().enumerate() {
                for (k, fb) in fj.iter().enumerate() {
                    if let Some(fb) = fb {
                        ds[k] -= fb * dy[j];
                    }
                }
            }
            (dx, dy, ds)
        };

        // predictor
        let t_aff: Vec<DMatrix<f64>> = (0..nb).map(|k| -&x[k] - &xrd[k]).collect();
        let (dxa, _, dsa) = solve_dir(t_aff);
        let ap = (0.95 * max_step(&x, &dxa)).min(1.0);
        let ad = (0.95 * max_step(&s, &dsa)).min(1.0);
        let mut mu_aff = 0.0;
        for k in 0..nb {
            mu_aff += (&x[k] + &dxa[k] * ap).dot(&(&s[k] + &dsa[k] * ad));
        }
        mu_aff /= ntot as f64;
        let sigma = if mu > 0.0 { (mu_aff / mu).clamp(0.0, 1.0).powi(3) } else { 0.0 };

        // corrector
        let t_cor: Vec<DMatrix<f64>> = (0..nb)
            .map(|k| {
                let n = p.sizes[k];
                let target = DMatrix::<f64>::identity(n, n) * (sigma * mu) - &dxa[k] * &dsa[k];
                target * &sinv[k] - &x[k] - &xrd[k]
            })
            .collect();
        let (dx, dy, ds) = solve_dir(t_cor);
        let ap = (0.95 * max_step(&x, &dx)).min(1.0);
        let ad = (0.95 * max_step(&s, &ds)).min(1.0);
        if ap <= 1e-14 && ad <= 1e-14 {
            break;
        }
        for k in 0..nb {
            x[k] += &dx[k] * ap;
            s[k] += &ds[k] * ad;
        }
        for i in 0..m {
            y[i] += ad * dy[i];
        }
    }
    out.x = x;
    out.y = y;
    out
}

/// Cholesky of the Schur complement; on failure a `1e-12` diagonal shift
/// (relative to the largest pivot) is tried once.
fn factor_schur(mm: DMatrix<f64>) -> Option<Cholesky<f64, Dyn>> {
    if let Some(c) = Cholesky::new(mm.clone()) {
        return Some(c);
    }
    let scale = mm.diagonal().iter().fold(1.0_f64, |a, v| a.max(v.abs()));
    let n = mm.nrows();
    Cholesky::new(mm + DMatrix::<f64>::identity(n, n) * (1e-12 * scale))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> SdpOptions {
        SdpOptions::default()
    }

    #[test]
    fn margin_identity() {
        let p = PencilProblem::new(SymMatrix::identity(3), vec![]).unwrap();
        let r = solve_max_margin(&p, &opts());
        assert_eq!(r.status, SdpStatus::Feasible);
        assert!((r.margin - 1.0).abs() < 1e-7, "{}", r.margin);
    }

    #[test]
    fn margin_infeasible_constant() {
        let p = PencilProblem::new(SymMatrix::from_diag(&[1.0, -2.0]), vec![]).unwrap();
        let r = solve_max_margin(&p, &opts());
        assert_eq!(r.status, SdpStatus::Infeasible);
        assert!((r.margin + 2.0).abs() < 1e-7);
        let y = r.dual.unwrap();
        assert!(y.min_eigenvalue() >= -1e-9);
        assert!(p.constant().inner(&y) < 0.0);
    }

    #[test]
    fn margin_unbounded_is_capped() {
        let a0 = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let p = PencilProblem::new(a0, vec![SymMatrix::identity(2)]).unwrap();
        let r = solve_max_margin(&p, &opts());
        assert_eq!(r.status, SdpStatus::Feasible);
        assert_eq!(r.margin, 1e6);
    }

    #[test]
    fn min_objective_examples() {
        // diag(z - 1, 5) >= 0
        let p = PencilProblem::new(SymMatrix::from_diag(&[-1.0, 5.0]), vec![SymMatrix::from_diag(&[1.0, 0.0])])
            .unwrap()
            .with_objective(vec![1.0])
            .unwrap();
        let r = solve_min_objective(&p, &opts());
        assert_eq!(r.status, SdpStatus::Optimal);
        assert!((r.objective - 1.0).abs() < 1e-7, "{}", r.objective);

        // [[1, z], [z, 1]] >= 0
        let a1 = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let p = PencilProblem::new(SymMatrix::identity(2), vec![a1])
            .unwrap()
            .with_objective(vec![1.0])
            .unwrap();
        let r = solve_min_objective(&p, &opts());
        assert_eq!(r.status, SdpStatus::Optimal);
        assert!((r.objective + 1.0).abs() < 1e-7, "{}", r.objective);
    }

    #[test]
    fn min_objective_unbounded() {
        // diag(z, 1) >= 0, minimize -z
        let p = PencilProblem::new(SymMatrix::from_diag(&[0.0, 1.0]), vec![SymMatrix::from_diag(&[1.0, 0.0])])
            .unwrap()
            .with_objective(vec![-1.0])
            .unwrap();
        let r = solve_min_objective(&p, &opts());
        assert_eq!(r.status, SdpStatus::Unbounded);
    }

    #[test]
    fn blocks_are_validated() {
        let a0 = SymMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        let p = PencilProblem::new(a0, vec![]).unwrap();
        assert!(p.clone().with_blocks(vec![1, 1]).is_err());
        assert!(p.with_blocks(vec![2]).is_ok());
        let p = PencilProblem::new(SymMatrix::identity(2), vec![SymMatrix::identity(3)]);
        assert!(matches!(p, Err(SdpError::DimensionMismatch { .. })));
    }
}
