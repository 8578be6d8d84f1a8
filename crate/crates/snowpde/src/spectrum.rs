//! The discrete Dirichlet Laplacian on a snowflake grid, its lowest
//! eigenpairs, and the symmetry-adapted eigenbasis.
//!
//! The stencil on the triangular lattice is
//! `(-Delta u)(x) ~ (2/(3 h^2)) ((12 - k) u(x) - sum of the k neighbor values)`
//! where `k` is the number of neighbors inside the region; absent neighbors
//! are outside the region, where `u = 0`. Interior points (`k = 6`) get the
//! usual `4/h^2` diagonal; the enlarged diagonal near the boundary is what
//! makes the eigenvalues converge fast.
//!
//! Eigenpairs come from either a dense symmetric solve (small grids, and the
//! test oracle) or shift-invert subspace iteration: factor `L` once with a
//! banded Cholesky after reverse Cuthill-McKee reordering, then iterate a
//! block with Rayleigh-Ritz extraction until the first `m` pairs have small
//! residuals.
//!
//! The adapted basis splits every eigenvalue cluster into the six isotypic
//! components of the planar symmetry group: four one-dimensional types
//! (indexed 1-4: even/odd under rotation by 60 degrees and the two mirror
//! types) and two families of two-dimensional irreducibles (5 and 6). Each
//! adapted mode has a definite component tag and definite mirror parities,
//! which is exactly what makes every canonical fixed-point subspace a
//! coordinate subspace of coefficient space.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::SnowflakeGrid;
use crate::group::{Elem, D6_ORDER};

/// Symmetric sparse matrix in CSR form (full pattern stored).
#[derive(Clone, Debug)]
pub struct SparseSym {
    pub n: usize,
    indptr: Vec<usize>,
    indices: Vec<u32>,
    data: Vec<f64>,
}

impl SparseSym {
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for i in 0..self.n {
            let mut acc = 0.0;
            for k in self.indptr[i]..self.indptr[i + 1] {
                acc += self.data[k] * x[self.indices[k] as usize];
            }
            y[i] = acc;
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for k in self.indptr[i]..self.indptr[i + 1] {
                a[(i, self.indices[k] as usize)] = self.data[k];
            }
        }
        a
    }

    /// Row pattern (indices, values) of row `i`.
    pub fn row(&self, i: usize) -> (&[u32], &[f64]) {
        let r = self.indptr[i]..self.indptr[i + 1];
        (&self.indices[r.clone()], &self.data[r])
    }

    pub fn inf_norm(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).1.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Assembles the Dirichlet Laplacian `L` (positive definite, symmetric).
pub fn assemble_laplacian(grid: &SnowflakeGrid) -> SparseSym {
    let n = grid.len();
    let c = 2.0 / (3.0 * grid.h * grid.h);
    let mut indptr = Vec::with_capacity(n + 1);
    let mut indices = Vec::new();
    let mut data = Vec::new();
    indptr.push(0);
    for i in 0..n {
        let nb = &grid.neighbors[i];
        // row entries in ascending column order: neighbors plus diagonal
        let mut wrote_diag = false;
        for &j in nb {
            if (j as usize) > i && !wrote_diag {
                indices.push(i as u32);
                data.push(c * (12 - nb.len()) as f64);
                wrote_diag = true;
            }
            indices.push(j);
            data.push(-c);
        }
        if !wrote_diag {
            indices.push(i as u32);
            data.push(c * (12 - nb.len()) as f64);
        }
        indptr.push(indices.len());
    }
    SparseSym { n, indptr, indices, data }
}

/// Dense symmetric eigensolve: the smallest `m` eigenpairs, eigenvalues
/// ascending, eigenvectors orthonormal in the plain Euclidean sense.
pub fn dense_eigenpairs(op: &SparseSym, m: usize) -> Result<(Vec<f64>, DMatrix<f64>)> {
    if m > op.n {
        return Err(Error::Eigensolver(format!("requested {m} modes from an {}x{} matrix", op.n, op.n)));
    }
    let eig = op.to_dense().symmetric_eigen();
    let mut order: Vec<usize> = (0..op.n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals: Vec<f64> = order.iter().take(m).map(|&k| eig.eigenvalues[k]).collect();
    let mut vecs = DMatrix::zeros(op.n, m);
    for (c, &k) in order.iter().take(m).enumerate() {
        vecs.set_column(c, &eig.eigenvectors.column(k));
    }
    Ok((vals, vecs))
}

// ---------------------------------------------------------------------------
// reverse Cuthill-McKee + banded Cholesky, the factorization behind the
// shift-invert iteration
// ---------------------------------------------------------------------------

/// Reverse Cuthill-McKee ordering of a sparse symmetric pattern.
/// Returns `perm` with `perm[new] = old`.
pub fn reverse_cuthill_mckee(op: &SparseSym) -> Vec<usize> {
    let n = op.n;
    let degree = |i: usize| op.row(i).0.len();
    // pseudo-peripheral start: BFS twice from a minimum-degree node
    let mut start = (0..n).min_by_key(|&i| degree(i)).unwrap_or(0);
    for _ in 0..2 {
        let mut dist = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        dist[start] = 0;
        queue.push_back(start);
        let mut far = start;
        while let Some(u) = queue.pop_front() {
            far = u;
            for &v in op.row(u).0 {
                let v = v as usize;
                if v != u && dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        start = far;
    }
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    // the graph is connected for these grids, but be safe
    let mut remaining: Vec<usize> = (0..n).collect();
    remaining.sort_by_key(|&i| degree(i));
    let mut next_seed = 0;
    seen[start] = true;
    queue.push_back(start);
    loop {
        while let Some(u) = queue.pop_front() {
            order.push(u);
            let mut nbs: Vec<usize> =
                op.row(u).0.iter().map(|&v| v as usize).filter(|&v| v != u && !seen[v]).collect();
            nbs.sort_by_key(|&v| (degree(v), v));
            for v in nbs {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        while next_seed < n && seen[remaining[next_seed]] {
            next_seed += 1;
        }
        if next_seed == n {
            break;
        }
        let s = remaining[next_seed];
        seen[s] = true;
        queue.push_back(s);
    }
    order.reverse();
    order
}

/// Cholesky factorization of a permuted SPD matrix in banded storage.
pub struct BandCholesky {
    n: usize,
    bw: usize,
    /// lower factor, row-major: `band[i*(bw+1) + (j - i + bw)]` holds `L[i,j]`
    /// for `j` in `[i-bw, i]`.
    band: Vec<f64>,
    /// `perm[new] = old`
    perm: Vec<usize>,
}

impl BandCholesky {
    /// Factors `op` after applying the given ordering (`perm[new] = old`).
    pub fn factor(op: &SparseSym, perm: Vec<usize>) -> Result<BandCholesky> {
        let n = op.n;
        let mut inv_perm = vec![0usize; n];
        for (newi, &old) in perm.iter().enumerate() {
            inv_perm[old] = newi;
        }
        let mut bw = 0usize;
        for i in 0..n {
            for &j in op.row(i).0 {
                let d = inv_perm[i].abs_diff(inv_perm[j as usize]);
                bw = bw.max(d);
            }
        }
        let stride = bw + 1;
        let mut band = vec![0.0f64; n * stride];
        for oldi in 0..n {
            let (cols, vals) = op.row(oldi);
            let i = inv_perm[oldi];
            for (&oldj, &v) in cols.iter().zip(vals) {
                let j = inv_perm[oldj as usize];
                if j <= i {
                    band[i * stride + (j + bw - i)] = v;
                }
            }
        }
        // in-place banded Cholesky
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            for j in lo..=i {
                let klo = lo.max(j.saturating_sub(bw));
                let mut sum = band[i * stride + (j + bw - i)];
                for k in klo..j {
                    sum -= band[i * stride + (k + bw - i)] * band[j * stride + (k + bw - j)];
                }
                if i == j {
                    if sum <= 0.0 {
                        return Err(Error::Eigensolver(format!(
                            "matrix not positive definite at pivot {i} ({sum:.3e})"
                        )));
                    }
                    band[i * stride + bw] = sum.sqrt();
                } else {
                    band[i * stride + (j + bw - i)] = sum / band[j * stride + bw];
                }
            }
        }
        Ok(BandCholesky { n, bw, band, perm })
    }

    /// Solves `A x = b` (in the original, unpermuted indexing).
    pub fn solve(&self, b: &[f64], x: &mut [f64]) {
        let (n, bw) = (self.n, self.bw);
        let stride = bw + 1;
        let mut y = vec![0.0f64; n];
        // forward: L y = P b
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let mut sum = b[self.perm[i]];
            for k in lo..i {
                sum -= self.band[i * stride + (k + bw - i)] * y[k];
            }
            y[i] = sum / self.band[i * stride + bw];
        }
        // backward: L^T z = y
        for i in (0..n).rev() {
            let hi = (i + bw).min(n - 1);
            let mut sum = y[i];
            for k in (i + 1)..=hi {
                sum -= self.band[k * stride + (i + bw - k)] * y[k];
            }
            y[i] = sum / self.band[i * stride + bw];
        }
        for i in 0..n {
            x[self.perm[i]] = y[i];
        }
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }
}

/// Shift-invert subspace iteration (shift 0): smallest `m` eigenpairs of an
/// SPD operator. Deterministic for a fixed seed. Residual target is
/// `||L x - theta x|| <= tol` per pair, with unit-norm `x`.
pub fn iterative_eigenpairs(
    op: &SparseSym,
    m: usize,
    seed: u64,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = op.n;
    if m > n {
        return Err(Error::Eigensolver(format!("requested {m} modes from an {n}x{n} matrix")));
    }
    let extra = (m / 2).clamp(8, 120);
    let q = (m + extra).min(n);
    let chol = BandCholesky::factor(op, reverse_cuthill_mckee(op))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = DMatrix::from_fn(n, q, |_, _| rng.gen::<f64>() - 0.5);
    let mut col_in = vec![0.0f64; n];
    let mut col_out = vec![0.0f64; n];
    let mut best_resid = f64::INFINITY;
    let mut stall = 0usize;

    for _iter in 0..max_iter {
        // one inverse application to the whole block
        for c in 0..q {
            for i in 0..n {
                col_in[i] = x[(i, c)];
            }
            chol.solve(&col_in, &mut col_out);
            for i in 0..n {
                x[(i, c)] = col_out[i];
            }
        }
        // orthonormalize
        let qr = x.qr();
        let qmat = qr.q();
        // Rayleigh-Ritz on L
        let mut lq = DMatrix::zeros(n, q);
        for c in 0..q {
            for i in 0..n {
                col_in[i] = qmat[(i, c)];
            }
            op.matvec(&col_in, &mut col_out);
            for i in 0..n {
                lq[(i, c)] = col_out[i];
            }
        }
        let small = qmat.transpose() * &lq;
        let small = (&small + small.transpose()) * 0.5;
        let eig = small.symmetric_eigen();
        let mut order: Vec<usize> = (0..q).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let mut rot = DMatrix::zeros(q, q);
        for (c, &k) in order.iter().enumerate() {
            rot.set_column(c, &eig.eigenvectors.column(k));
        }
        x = &qmat * &rot;
        let lx = &lq * &rot;
        // residuals of the first m Ritz pairs
        let mut worst = 0.0f64;
        for c in 0..m {
            let theta = eig.eigenvalues[order[c]];
            let mut r2 = 0.0;
            for i in 0..n {
                let r = lx[(i, c)] - theta * x[(i, c)];
                r2 += r * r;
            }
            worst = worst.max(r2.sqrt());
        }
        if worst <= tol {
            let vals: Vec<f64> = order.iter().take(m).map(|&k| eig.eigenvalues[k]).collect();
            let vecs = x.columns(0, m).into_owned();
            return Ok((vals, vecs));
        }
        if worst < best_resid * 0.5 {
            best_resid = worst;
            stall = 0;
        } else {
            stall += 1;
            if stall > 40 {
                return Err(Error::Eigensolver(format!(
                    "subspace iteration stalled at residual {worst:.3e} (target {tol:.1e})"
                )));
            }
        }
    }
    Err(Error::Eigensolver(format!("no convergence in {max_iter} iterations")))
}

// ---------------------------------------------------------------------------
// symmetry adaptation
// ---------------------------------------------------------------------------

/// The symmetry-adapted, weight-orthonormal eigenbasis.
#[derive(Clone, Debug)]
pub struct EigenBasis {
    pub level: u32,
    pub m: usize,
    /// Eigenvalues ascending.
    pub eigenvalues: Vec<f64>,
    /// `N x M`; columns are eigenfunctions with `w * sum_i psi_j(x_i)^2 = 1`.
    pub modes: DMatrix<f64>,
    /// Isotypic component tag (1..=6) of each mode under the planar group.
    pub tags: Vec<u8>,
    /// Ranges of equal-eigenvalue clusters within the basis; a final cluster
    /// may have been truncated by the basis size cutoff.
    pub clusters: Vec<(usize, usize)>,
    /// Quadrature weight of the underlying grid.
    pub weight: f64,
}

/// Applies the function action of a planar element to a vector.
fn act(perm: &[u32], v: &DVector<f64>) -> DVector<f64> {
    DVector::from_fn(v.len(), |i, _| v[perm[i] as usize])
}

/// Isotypic projector for component `tag` (1..=6) applied to `v`, using the
/// 12 planar permutations.
fn project_component(perms: &[Vec<u32>], tag: u8, v: &DVector<f64>) -> DVector<f64> {
    let n = v.len();
    match tag {
        // one-dimensional types: (1/12) sum over the group of chi(g) g.v with
        // chi(rho^r sigma^s) = er^r * es^s for signs (er, es)
        1..=4 => {
            let (er, es): (f64, f64) = match tag {
                1 => (1.0, 1.0),
                2 => (1.0, -1.0),
                3 => (-1.0, 1.0),
                _ => (-1.0, -1.0),
            };
            let mut acc = DVector::zeros(n);
            for s in 0..2u8 {
                for r in 0..6u8 {
                    let g = Elem::new(r, s, false);
                    let c = er.powi(r as i32) * es.powi(s as i32);
                    let gv = act(&perms[g.index()], v);
                    acc += gv * c;
                }
            }
            acc / 12.0
        }
        // two-dimensional types: project onto the +1 (tag 5) or -1 (tag 6)
        // eigenspace of the half-turn, minus the rotation-invariant part
        5 | 6 => {
            let half = act(&perms[Elem::RHO3.index()], v);
            let sign = if tag == 5 { 1.0 } else { -1.0 };
            let mut acc = (v + half * sign) * 0.5;
            let mut rot_avg = DVector::zeros(n);
            for r in 0..6u8 {
                let g = Elem::new(r, 0, false);
                let gv = act(&perms[g.index()], v);
                rot_avg += gv * if tag == 5 { 1.0 } else { (-1.0f64).powi(r as i32) };
            }
            acc -= rot_avg / 6.0;
            acc
        }
        _ => unreachable!("tags are 1..=6"),
    }
}

/// Fixes the overall sign of a mode: the largest-magnitude entry at the
/// lowest point index is made positive.
fn fix_sign(v: &mut DVector<f64>) {
    let mx = v.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    if mx == 0.0 {
        return;
    }
    for i in 0..v.len() {
        if v[i].abs() >= mx * (1.0 - 1e-12) {
            if v[i] < 0.0 {
                *v *= -1.0;
            }
            return;
        }
    }
}

/// Groups eigenvalues into clusters by chaining the relative gap test
/// `|l_i - l_{i-1}| <= ctol * max(1, |l_i|)`.
pub fn cluster_ranges(vals: &[f64], ctol: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..vals.len() {
        if (vals[i] - vals[i - 1]).abs() > ctol * f64::max(1.0, vals[i].abs()) {
            out.push((start, i));
            start = i;
        }
    }
    if !vals.is_empty() {
        out.push((start, vals.len()));
    }
    out
}

/// Builds the symmetry-adapted basis from raw eigenpairs.
///
/// `vals`/`vecs` must hold at least `m` pairs (Euclidean-orthonormal
/// columns, eigenvalues ascending). Within each eigenvalue cluster the modes
/// are replaced by component-pure vectors ordered by component tag; for the
/// two-dimensional components each irreducible plane contributes a
/// (mirror-even, mirror-odd) pair. A cluster cut by the basis-size limit is
/// adapted within its included span.
pub fn symmetry_adapt(
    grid: &SnowflakeGrid,
    vals: &[f64],
    vecs: &DMatrix<f64>,
    m: usize,
    cluster_tol: f64,
) -> Result<EigenBasis> {
    if vals.len() < m || vecs.ncols() < m {
        return Err(Error::Eigensolver(format!(
            "need at least {m} raw eigenpairs, got {}",
            vals.len().min(vecs.ncols())
        )));
    }
    let n = grid.len();
    let perms = grid.all_permutations()?;
    let sqrt_w = grid.weight().sqrt();

    // clusters over the first m eigenvalues; determine whether the final
    // cluster is truncated by comparing against the full list if available
    let mut clusters = cluster_ranges(&vals[..m], cluster_tol);
    let truncated_last = if vals.len() > m {
        (vals[m] - vals[m - 1]).abs() <= cluster_tol * f64::max(1.0, vals[m].abs())
    } else {
        false
    };

    let mut modes = DMatrix::zeros(n, m);
    let mut tags = vec![0u8; m];
    for &(s0, s1) in &clusters {
        let width = s1 - s0;
        let u = vecs.columns(s0, width).into_owned();
        let mut col = s0;
        let mut found = 0usize;
        for tag in 1..=6u8 {
            // project every cluster column onto this component and extract an
            // orthonormal basis of the image via SVD
            let mut pu = DMatrix::zeros(n, width);
            for c in 0..width {
                let v = u.column(c).into_owned();
                pu.set_column(c, &project_component(&perms, tag, &v));
            }
            let svd = pu.svd(true, false);
            let uu = svd.u.as_ref().expect("left singular vectors requested");
            let mut comp_cols: Vec<DVector<f64>> = Vec::new();
            for k in 0..svd.singular_values.len() {
                if svd.singular_values[k] > 1e-6 {
                    comp_cols.push(uu.column(k).into_owned());
                }
            }
            found += comp_cols.len();
            if comp_cols.is_empty() {
                continue;
            }
            if tag >= 5 {
                comp_cols = orient_planes(&perms, comp_cols, tag, s1 == m && truncated_last)?;
            }
            for mut v in comp_cols {
                if col >= s1 {
                    return Err(Error::Eigensolver(
                        "isotypic projections overfill a cluster".into(),
                    ));
                }
                fix_sign(&mut v);
                modes.set_column(col, &v);
                tags[col] = tag;
                col += 1;
            }
        }
        if found != width {
            return Err(Error::Eigensolver(format!(
                "cluster {s0}..{s1}: isotypic projections span {found} of {width} directions"
            )));
        }
    }

    // weight-orthonormalize
    modes /= sqrt_w;

    // reflect truncation in the stored cluster list (bookkeeping only)
    if truncated_last {
        if let Some(last) = clusters.last_mut() {
            *last = (last.0, m);
        }
    }

    // within a cluster the true eigenvalue is one multiplet value; storing
    // the mean removes the solver's splitting noise and makes the group
    // action on coefficients exactly commute with the eigenvalue terms
    let mut eigenvalues = vals[..m].to_vec();
    for &(s0, s1) in &clusters {
        let mean = eigenvalues[s0..s1].iter().sum::<f64>() / (s1 - s0) as f64;
        for v in &mut eigenvalues[s0..s1] {
            *v = mean;
        }
    }

    Ok(EigenBasis {
        level: grid.level,
        m,
        eigenvalues,
        modes,
        tags,
        clusters,
        weight: grid.weight(),
    })
}

/// Splits a two-dimensional-component block into irreducible planes and
/// orients each plane as (mirror-even, mirror-odd).
fn orient_planes(
    perms: &[Vec<u32>],
    cols: Vec<DVector<f64>>,
    tag: u8,
    truncated: bool,
) -> Result<Vec<DVector<f64>>> {
    let d = cols.len();
    if d % 2 == 1 && !truncated {
        return Err(Error::Eigensolver(format!(
            "two-dimensional component holds {d} directions in a complete cluster"
        )));
    }
    let n = cols[0].len();
    // split into rotation-invariant planes: eigen-decompose a deterministic
    // equivariant symmetric matrix restricted to the block
    let planes: Vec<Vec<DVector<f64>>> = if d == 2 {
        vec![cols.clone()]
    } else if d == 1 {
        vec![]
    } else {
        let b = {
            let mut b = DMatrix::zeros(n, d);
            for (c, v) in cols.iter().enumerate() {
                b.set_column(c, v);
            }
            b
        };
        // averaged conjugation of a fixed symmetric seed matrix
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_ad47);
        let s0 = {
            let a = DMatrix::from_fn(d, d, |_, _| rng.gen::<f64>() - 0.5);
            (&a + a.transpose()) * 0.5
        };
        let mut avg = DMatrix::zeros(d, d);
        for gi in 0..D6_ORDER {
            // restriction of g to the block: R = B^T g(B)
            let mut gb = DMatrix::zeros(n, d);
            for c in 0..d {
                gb.set_column(c, &act(&perms[gi], &b.column(c).into_owned()));
            }
            let r = b.transpose() * gb;
            avg += r.transpose() * &s0 * &r;
        }
        avg /= D6_ORDER as f64;
        let avg = (&avg + avg.transpose()) * 0.5;
        let eig = avg.symmetric_eigen();
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &c| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[c]));
        // consecutive pairs of equal eigenvalues are the planes
        let mut planes = Vec::new();
        let mut k = 0;
        while k + 1 < d {
            let va = eig.eigenvalues[order[k]];
            let vb = eig.eigenvalues[order[k + 1]];
            if (va - vb).abs() > 1e-6 * f64::max(1.0, va.abs()) {
                return Err(Error::Eigensolver(
                    "equivariant splitter failed to pair plane directions".into(),
                ));
            }
            let mut p = Vec::new();
            for &kk in &order[k..k + 2] {
                let w = eig.eigenvectors.column(kk);
                let mut v = DVector::zeros(n);
                for (c, base) in cols.iter().enumerate() {
                    v += base * w[c];
                }
                p.push(v.normalize());
            }
            planes.push(p);
            k += 2;
        }
        if k < d {
            // odd leftover is only legal in a truncated cluster
            if !truncated {
                return Err(Error::Eigensolver("unpaired plane direction".into()));
            }
            let w = eig.eigenvectors.column(order[d - 1]);
            let mut v = DVector::zeros(n);
            for (c, base) in cols.iter().enumerate() {
                v += base * w[c];
            }
            planes.push(vec![v.normalize()]);
        }
        planes
    };

    let mut out = Vec::with_capacity(d);
    let planes = if d == 1 { vec![vec![cols[0].clone()]] } else { planes };
    let sp = &perms[Elem::SIGMA.index()];
    for plane in planes {
        if plane.len() == 1 {
            out.push(plane[0].clone());
            continue;
        }
        // mirror-even direction: maximize the norm of the sigma-even part
        let p_even =
            |v: &DVector<f64>| -> DVector<f64> { (v + act(sp, v)) * 0.5 };
        let a = {
            let mut a = DMatrix::zeros(n, 2);
            a.set_column(0, &p_even(&plane[0]));
            a.set_column(1, &p_even(&plane[1]));
            a
        };
        let svd = a.svd(false, true);
        let vt = svd.v_t.as_ref().expect("right singular vectors requested");
        let w0 = vt[(0, 0)];
        let w1 = vt[(0, 1)];
        let e1 = (&plane[0] * w0 + &plane[1] * w1).normalize();
        // orthogonal complement within the plane
        let mut e2 = &plane[0] * (-w1) + &plane[1] * w0;
        e2 -= &e1 * e1.dot(&e2);
        let e2 = e2.normalize();
        // sanity: e1 mirror-even, e2 mirror-odd
        let even_err = (&e1 - act(sp, &e1)).norm();
        let odd_err = (&e2 + act(sp, &e2)).norm();
        if even_err > 1e-6 || odd_err > 1e-6 {
            return Err(Error::Eigensolver(format!(
                "plane orientation failed (component {tag}): even {even_err:.2e}, odd {odd_err:.2e}"
            )));
        }
        out.push(e1);
        out.push(e2);
    }
    Ok(out)
}

impl EigenBasis {
    /// Grid values of the function with coefficient vector `a` (length `m`).
    pub fn evaluate(&self, a: &DVector<f64>) -> DVector<f64> {
        &self.modes * a
    }

    /// Coefficients of a grid function: `a_j = w <u, psi_j>`.
    pub fn coefficients(&self, u: &DVector<f64>) -> DVector<f64> {
        self.modes.transpose() * u * self.weight
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid3() -> SnowflakeGrid {
        SnowflakeGrid::build(3).unwrap()
    }

    #[test]
    fn laplacian_is_symmetric_positive_definite_and_equivariant() {
        let grid = grid3();
        let lap = assemble_laplacian(&grid);
        let dense = lap.to_dense();
        assert_relative_eq!(dense.clone(), dense.transpose(), epsilon = 0.0);
        // equivariance: L(g.u) = g.(L u) for a probe vector
        let n = grid.len();
        let u = DVector::from_fn(n, |i, _| ((i * 2654435761) % 97) as f64 / 97.0 - 0.5);
        let perms = grid.all_permutations().unwrap();
        let mut lu = vec![0.0; n];
        lap.matvec(u.as_slice(), &mut lu);
        let lu = DVector::from_vec(lu);
        for p in &perms {
            let gu = act(p, &u);
            let mut lgu = vec![0.0; n];
            lap.matvec(gu.as_slice(), &mut lgu);
            let lgu = DVector::from_vec(lgu);
            let glu = act(p, &lu);
            assert!((lgu - glu).norm() < 1e-9);
        }
    }

    #[test]
    fn dense_eigenvalues_match_independent_oracle() {
        // frozen values computed with an independent dense solver
        let grid = grid3();
        let lap = assemble_laplacian(&grid);
        let (vals, _) = dense_eigenpairs(&lap, 10).unwrap();
        let expected = [
            38.9541, 94.5725, 94.5725, 157.5366, 157.5366, 178.6662, 197.4064, 250.1786,
            250.1786, 281.1775,
        ];
        for (v, e) in vals.iter().zip(expected) {
            assert!((v - e).abs() < 5e-4, "{v} vs {e}");
        }
    }

    #[test]
    fn iterative_matches_dense() {
        let grid = grid3();
        let lap = assemble_laplacian(&grid);
        let m = 20;
        let (dv, dvec) = dense_eigenpairs(&lap, m).unwrap();
        let (iv, ivec) = iterative_eigenpairs(&lap, m, 7, 1e-9, 2000).unwrap();
        for k in 0..m {
            assert!(
                (dv[k] - iv[k]).abs() <= 1e-8 * dv[k].abs(),
                "eigenvalue {k}: {} vs {}",
                dv[k],
                iv[k]
            );
        }
        // residuals
        let n = grid.len();
        for k in 0..m {
            let x = ivec.column(k).into_owned();
            let mut lx = vec![0.0; n];
            lap.matvec(x.as_slice(), &mut lx);
            let mut r2 = 0.0;
            for i in 0..n {
                let r = lx[i] - iv[k] * x[i];
                r2 += r * r;
            }
            assert!(r2.sqrt() <= 1e-8, "residual {k} = {:.2e}", r2.sqrt());
        }
        let _ = dvec;
    }

    #[test]
    fn band_cholesky_solves() {
        let grid = SnowflakeGrid::build(2).unwrap();
        let lap = assemble_laplacian(&grid);
        let chol = BandCholesky::factor(&lap, reverse_cuthill_mckee(&lap)).unwrap();
        let n = grid.len();
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let mut x = vec![0.0; n];
        chol.solve(&b, &mut x);
        let mut ax = vec![0.0; n];
        lap.matvec(&x, &mut ax);
        for i in 0..n {
            assert!((ax[i] - b[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn adapted_basis_structure() {
        let grid = grid3();
        let lap = assemble_laplacian(&grid);
        let m = 20;
        let (vals, vecs) = dense_eigenpairs(&lap, m + 10).unwrap();
        let basis = symmetry_adapt(&grid, &vals, &vecs, m, 1e-6).unwrap();
        // ground state is fully symmetric
        assert_eq!(basis.tags[0], 1);
        // the double eigenvalue pair 2,3 is a two-dimensional component
        assert!(basis.tags[1] >= 5);
        assert_eq!(basis.tags[1], basis.tags[2]);
        // w-orthonormal
        let gram = basis.modes.transpose() * &basis.modes * basis.weight;
        for i in 0..m {
            for j in 0..m {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((gram[(i, j)] - want).abs() < 1e-9, "gram[{i},{j}]");
            }
        }
        // every mode is an eigenvector of L
        let n = grid.len();
        for j in 0..m {
            let x = basis.modes.column(j).into_owned();
            let mut lx = vec![0.0; n];
            lap.matvec(x.as_slice(), &mut lx);
            let mut r2 = 0.0;
            for i in 0..n {
                let r = lx[i] - basis.eigenvalues[j] * x[i];
                r2 += r * r;
            }
            assert!(r2.sqrt() * basis.weight.sqrt() < 1e-7, "mode {j}");
        }
        // modes have definite mirror parity consistent with their tag
        let perms = grid.all_permutations().unwrap();
        let sp = &perms[Elem::SIGMA.index()];
        let tp = &perms[Elem::TAU.index()];
        for j in 0..m {
            let v = basis.modes.column(j).into_owned();
            let sv = act(sp, &v);
            let tv = act(tp, &v);
            let s_even = (&v - &sv).norm() < 1e-7;
            let s_odd = (&v + &sv).norm() < 1e-7;
            let t_even = (&v - &tv).norm() < 1e-7;
            let t_odd = (&v + &tv).norm() < 1e-7;
            assert!(s_even || s_odd, "mode {j} has no sigma parity");
            assert!(t_even || t_odd, "mode {j} has no tau parity");
            match basis.tags[j] {
                1 => assert!(s_even && t_even),
                2 => assert!(s_odd && t_odd),
                3 => assert!(s_even && t_odd),
                4 => assert!(s_odd && t_even),
                _ => {}
            }
        }
    }
}
