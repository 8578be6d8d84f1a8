//! Newton's method on eigenfunction coefficients for the superlinear
//! elliptic problem `Delta u + lambda u + u^3 = 0` with zero boundary values.
//!
//! A function is represented by coefficients `a` in the symmetry-adapted
//! eigenbasis, `u = sum_j a_j psi_j`. Critical points of the action
//! functional
//!
//! `J(lambda, a) = sum_j (lambda_j - lambda) a_j^2 / 2 - (w/4) sum_i u(x_i)^4`
//!
//! are discrete solutions. The gradient and Hessian in coefficient space are
//!
//! `g_j  = (lambda_j - lambda) a_j - w sum_i u_i^3 psi_j(x_i)`
//! `h_jk = (lambda_j - lambda) d_jk - 3 w sum_i u_i^2 psi_j psi_k`
//!
//! Two solvers operate on a chosen coordinate subset (an invariant subspace):
//!
//! * [`newton_gnga`] — fixed `lambda`, solves `g = 0` in the subset;
//! * [`newton_pmgnga`] — fixed value of one coefficient, solves for the
//!   remaining coefficients **and** `lambda`; the Jacobian column for the
//!   `lambda` unknown is exactly `-a` in the adapted basis. Used to step onto
//!   newborn branches where no nearby fixed-`lambda` solution exists.
//!
//! Newton steps solve the linear system in the least-squares sense through an
//! SVD with a relative rank cutoff, which tolerates the singular Hessians
//! that occur at bifurcation points. The Morse index of a solution is the
//! number of negative eigenvalues of the **full** Hessian.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, NewtonFailure, Result};
use crate::geometry::SnowflakeGrid;
use crate::group::{Subgroup, SymmetryTable};
use crate::rep::Representation;
use crate::spectrum::EigenBasis;

/// Shared solver tolerances.
#[derive(Clone, Copy, Debug)]
pub struct NewtonParams {
    /// Euclidean norm of the subset gradient that counts as converged.
    pub tol: f64,
    pub max_iter: usize,
    /// Coefficient norm that counts as divergence.
    pub divergence_norm: f64,
    /// Relative singular-value cutoff for the least-squares Newton step.
    pub rank_tol: f64,
    /// Relative threshold classifying Hessian eigenvalues as zero.
    pub null_tol: f64,
}

impl Default for NewtonParams {
    fn default() -> Self {
        NewtonParams {
            tol: 1e-8,
            max_iter: 20,
            divergence_norm: 1e6,
            rank_tol: 1e-10,
            null_tol: 1e-6,
        }
    }
}

/// The discrete variational problem on a fixed grid and basis.
pub struct Problem<'a> {
    pub grid: &'a SnowflakeGrid,
    pub basis: &'a EigenBasis,
}

impl<'a> Problem<'a> {
    pub fn new(grid: &'a SnowflakeGrid, basis: &'a EigenBasis) -> Problem<'a> {
        Problem { grid, basis }
    }

    pub fn m(&self) -> usize {
        self.basis.m
    }

    /// All mode indices, the subset for unrestricted solves.
    pub fn full_subset(&self) -> Vec<usize> {
        (0..self.basis.m).collect()
    }

    /// The action functional `J`.
    pub fn functional(&self, lambda: f64, a: &DVector<f64>) -> f64 {
        let u = self.basis.evaluate(a);
        let quad: f64 = (0..self.m())
            .map(|j| (self.basis.eigenvalues[j] - lambda) * a[j] * a[j])
            .sum();
        let quart: f64 = u.iter().map(|&x| x * x * x * x).sum();
        0.5 * quad - 0.25 * self.basis.weight * quart
    }

    /// Gradient components for the given modes.
    pub fn gradient(&self, lambda: f64, a: &DVector<f64>, subset: &[usize]) -> DVector<f64> {
        let u = self.basis.evaluate(a);
        let w = self.basis.weight;
        DVector::from_fn(subset.len(), |c, _| {
            let j = subset[c];
            let proj: f64 =
                u.iter().enumerate().map(|(i, &ui)| ui * ui * ui * self.basis.modes[(i, j)]).sum();
            (self.basis.eigenvalues[j] - lambda) * a[j] - w * proj
        })
    }

    /// Hessian block for the given modes.
    pub fn hessian(&self, lambda: f64, a: &DVector<f64>, subset: &[usize]) -> DMatrix<f64> {
        let u = self.basis.evaluate(a);
        let w = self.basis.weight;
        let n = self.grid.len();
        // scaled columns: 3 w u_i^2 psi_j(x_i)
        let mut h = DMatrix::zeros(subset.len(), subset.len());
        for c in 0..subset.len() {
            let j = subset[c];
            for d in c..subset.len() {
                let k = subset[d];
                let mut s = 0.0;
                for i in 0..n {
                    s += u[i] * u[i] * self.basis.modes[(i, j)] * self.basis.modes[(i, k)];
                }
                let mut v = -3.0 * w * s;
                if j == k {
                    v += self.basis.eigenvalues[j] - lambda;
                }
                h[(c, d)] = v;
                h[(d, c)] = v;
            }
        }
        h
    }

    /// Full Hessian over all modes.
    pub fn hessian_full(&self, lambda: f64, a: &DVector<f64>) -> DMatrix<f64> {
        self.hessian(lambda, a, &self.full_subset())
    }
}

/// Eigenvalue signature of a symmetric matrix with a relative zero threshold.
#[derive(Clone, Debug)]
pub struct Signature {
    pub negatives: usize,
    pub nulls: usize,
    /// Orthonormal basis of the numerically null eigenspace.
    pub null_basis: DMatrix<f64>,
    /// All eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
}

/// Computes the signature of `h`: eigenvalues below `-null_tol * scale`
/// count as negative, those within `null_tol * scale` of zero as null, with
/// `scale = max(1, spectral norm)`.
pub fn signature(h: &DMatrix<f64>, null_tol: f64) -> Signature {
    let n = h.nrows();
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let scale = f64::max(1.0, eigenvalues.iter().fold(0.0f64, |m, &v| m.max(v.abs())));
    let thr = null_tol * scale;
    let negatives = eigenvalues.iter().filter(|&&v| v < -thr).count();
    let null_ids: Vec<usize> =
        order.iter().copied().filter(|&k| eig.eigenvalues[k].abs() <= thr).collect();
    let mut null_basis = DMatrix::zeros(n, null_ids.len());
    for (c, &k) in null_ids.iter().enumerate() {
        null_basis.set_column(c, &eig.eigenvectors.column(k));
    }
    Signature { negatives, nulls: null_ids.len(), null_basis, eigenvalues }
}

/// A converged Newton solution.
#[derive(Clone, Debug)]
pub struct NewtonSolution {
    /// Full coefficient vector (length `m`).
    pub a: DVector<f64>,
    pub lambda: f64,
    pub iterations: usize,
    pub grad_norm: f64,
    /// Morse index: negative eigenvalues of the full Hessian.
    pub mi: usize,
    /// Null eigenvalues of the full Hessian (within tolerance).
    pub null_dim: usize,
    pub functional: f64,
}

fn least_squares_step(h: &DMatrix<f64>, g: &DVector<f64>, rank_tol: f64) -> Result<DVector<f64>> {
    let svd = h.clone().svd(true, true);
    let smax = svd.singular_values.iter().fold(0.0f64, |m, &v| m.max(v));
    let eps = rank_tol * f64::max(smax, f64::MIN_POSITIVE);
    svd.solve(g, eps).map_err(|e| Error::Newton(NewtonFailure::LinearSolve(e.to_string())))
}

fn finish(
    p: &Problem,
    lambda: f64,
    a: DVector<f64>,
    iterations: usize,
    grad_norm: f64,
    params: &NewtonParams,
) -> NewtonSolution {
    let h = p.hessian_full(lambda, &a);
    let sig = signature(&h, params.null_tol);
    let functional = p.functional(lambda, &a);
    NewtonSolution {
        a,
        lambda,
        iterations,
        grad_norm,
        mi: sig.negatives,
        null_dim: sig.nulls,
        functional,
    }
}

/// Newton iteration at fixed `lambda`, restricted to the coordinate subset.
/// Coefficients outside the subset are held (and must be zero for the
/// restriction to be an invariant-subspace problem).
pub fn newton_gnga(
    p: &Problem,
    lambda: f64,
    a0: &DVector<f64>,
    subset: &[usize],
    params: &NewtonParams,
) -> Result<NewtonSolution> {
    let mut a = a0.clone();
    debug_assert!(
        (0..p.m()).filter(|j| !subset.contains(j)).all(|j| a[j] == 0.0),
        "initial point must lie in the coordinate subspace"
    );
    let mut grad_norm = f64::INFINITY;
    for it in 0..=params.max_iter {
        let g = p.gradient(lambda, &a, subset);
        grad_norm = g.norm();
        if grad_norm <= params.tol {
            return Ok(finish(p, lambda, a, it, grad_norm, params));
        }
        if it == params.max_iter {
            break;
        }
        let h = p.hessian(lambda, &a, subset);
        let chi = least_squares_step(&h, &g, params.rank_tol)?;
        for (c, &j) in subset.iter().enumerate() {
            a[j] -= chi[c];
        }
        let norm = a.norm();
        if norm >= params.divergence_norm {
            return Err(Error::Newton(NewtonFailure::Diverged { norm }));
        }
    }
    Err(Error::Newton(NewtonFailure::MaxIterations {
        iterations: params.max_iter,
        grad_norm,
    }))
}

/// Newton iteration with `lambda` unknown and the coefficient of
/// `fixed_mode` pinned at its initial value. The Jacobian is the subset
/// Hessian with the `fixed_mode` column replaced by `dg/dlambda = -a`.
pub fn newton_pmgnga(
    p: &Problem,
    lambda0: f64,
    a0: &DVector<f64>,
    subset: &[usize],
    fixed_mode: usize,
    params: &NewtonParams,
) -> Result<NewtonSolution> {
    let pos_k = subset
        .iter()
        .position(|&j| j == fixed_mode)
        .ok_or_else(|| Error::Newton(NewtonFailure::LinearSolve(
            "pinned mode is not in the subset".into(),
        )))?;
    let mut a = a0.clone();
    let mut lambda = lambda0;
    let mut grad_norm = f64::INFINITY;
    for it in 0..=params.max_iter {
        let g = p.gradient(lambda, &a, subset);
        grad_norm = g.norm();
        if grad_norm <= params.tol {
            return Ok(finish(p, lambda, a, it, grad_norm, params));
        }
        if it == params.max_iter {
            break;
        }
        let mut h = p.hessian(lambda, &a, subset);
        for (c, &j) in subset.iter().enumerate() {
            h[(c, pos_k)] = -a[j];
        }
        let chi = least_squares_step(&h, &g, params.rank_tol)?;
        for (c, &j) in subset.iter().enumerate() {
            if c != pos_k {
                a[j] -= chi[c];
            }
        }
        lambda -= chi[pos_k];
        let norm = a.norm();
        if norm >= params.divergence_norm || !lambda.is_finite() {
            return Err(Error::Newton(NewtonFailure::Diverged { norm }));
        }
    }
    Err(Error::Newton(NewtonFailure::MaxIterations {
        iterations: params.max_iter,
        grad_norm,
    }))
}

/// Precomputed symmetry data tying the 23 types to a concrete basis: the
/// coefficient representation, and for each type the modes spanning its
/// fixed-point subspace (a coordinate subspace in the adapted basis).
pub struct SymmetryContext {
    pub table: SymmetryTable,
    pub rep: Representation,
    /// For each type id, the sorted mode indices fixed by the type's
    /// canonical subgroup.
    pub invariant_modes: Vec<Vec<usize>>,
}

impl SymmetryContext {
    pub fn build(grid: &SnowflakeGrid, basis: &EigenBasis) -> Result<SymmetryContext> {
        let table = SymmetryTable::build()?;
        let rep = Representation::coefficient(basis, grid)?;
        let mut invariant_modes = Vec::with_capacity(table.types.len());
        for t in &table.types {
            let p = rep.average_projector(t.rep);
            let modes: Vec<usize> =
                (0..basis.m).filter(|&j| (p[(j, j)] - 1.0).abs() <= 1e-7).collect();
            invariant_modes.push(modes);
        }
        Ok(SymmetryContext { table, rep, invariant_modes })
    }

    /// Trace of the averaging projector of type `tid` over coefficient
    /// space; for a basis with no truncated clusters this equals the number
    /// of invariant modes.
    pub fn projector_trace(&self, tid: usize) -> f64 {
        self.rep.average_projector(self.table.types[tid].rep).trace()
    }

    /// Symmetry type of a coefficient vector: the type of its stabilizer.
    /// The zero vector has full symmetry (type 0).
    pub fn type_of_coeffs(&self, a: &DVector<f64>, tol: f64) -> Result<usize> {
        let stab = self.rep.stabilizer_in(Subgroup::FULL, a, tol);
        self.table
            .type_of(stab)
            .ok_or_else(|| Error::Group(format!("stabilizer {stab:?} is not an isotropy type")))
    }
}
