//! Finite-dimensional representations of the full symmetry group and their
//! isotypic decompositions under arbitrary subgroups.
//!
//! Two concrete representations matter here:
//!
//! * the **twelve-point representation**: functions on a generic planar
//!   orbit, with the central element acting as `-I`. Every irreducible that
//!   can occur in a space of grid functions occurs in it, which makes it the
//!   universal model for symmetry-breaking analysis;
//! * the **coefficient representation**: the action on eigenfunction
//!   coefficients, block diagonal over eigenvalue clusters because group
//!   elements preserve each eigenspace.
//!
//! Isotypic decomposition under a subgroup uses the classical random
//! commutant trick: average a random symmetric matrix over the subgroup
//! action; its eigenspaces are the irreducible subspaces, and grouping them
//! by (integer) character yields the components. Two independent seeds must
//! agree before a decomposition is accepted.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::SnowflakeGrid;
use crate::group::{Elem, Subgroup, GROUP_ORDER};
use crate::spectrum::EigenBasis;

/// An orthogonal representation of the 24-element group: one matrix per
/// element, indexed by `Elem::index()`.
#[derive(Clone, Debug)]
pub struct Representation {
    pub dim: usize,
    mats: Vec<DMatrix<f64>>,
}

impl Representation {
    pub fn new(mats: Vec<DMatrix<f64>>) -> Result<Representation> {
        if mats.len() != GROUP_ORDER {
            return Err(Error::Representation(format!(
                "expected {GROUP_ORDER} matrices, got {}",
                mats.len()
            )));
        }
        let dim = mats[0].nrows();
        for m in &mats {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::Representation("inconsistent matrix sizes".into()));
            }
        }
        Ok(Representation { dim, mats })
    }

    pub fn mat(&self, g: Elem) -> &DMatrix<f64> {
        &self.mats[g.index()]
    }

    /// Functions on a free 12-point planar orbit; the central element acts as
    /// `-I`. Entries are exactly 0 and +-1.
    pub fn twelve_point() -> Representation {
        let mats = Elem::all()
            .map(|g| {
                let sign = if g.is_neg() { -1.0 } else { 1.0 };
                let ginv = g.d6_part().inverse();
                let mut m = DMatrix::zeros(12, 12);
                for j in 0..12 {
                    let src = ginv.compose(Elem::from_index(j)).index();
                    m[(j, src)] = sign;
                }
                m
            })
            .collect();
        Representation { dim: 12, mats }
    }

    /// The action on eigenfunction coefficients of a symmetry-adapted basis:
    /// `R(g) = w Psi^T P_g Psi`, assembled block by block over eigenvalue
    /// clusters (exact because eigenspaces are invariant). On a cluster that
    /// the basis-size limit truncated, the block is an honest contraction
    /// rather than an orthogonal matrix.
    pub fn coefficient(basis: &EigenBasis, grid: &SnowflakeGrid) -> Result<Representation> {
        let perms = grid.all_permutations()?;
        let m = basis.m;
        let mut mats = Vec::with_capacity(GROUP_ORDER);
        for g in Elem::all() {
            let sign = if g.is_neg() { -1.0 } else { 1.0 };
            let perm = &perms[g.d6_part().index()];
            let mut r = DMatrix::zeros(m, m);
            for &(s0, s1) in &basis.clusters {
                let width = s1 - s0;
                let block_modes = basis.modes.columns(s0, width);
                // permuted copy: (P_g psi)(x_k) = psi(g^{-1} x_k)
                let mut permuted = DMatrix::zeros(grid.len(), width);
                for k in 0..grid.len() {
                    let src = perm[k] as usize;
                    for c in 0..width {
                        permuted[(k, c)] = block_modes[(src, c)];
                    }
                }
                let block = block_modes.transpose() * permuted * (basis.weight * sign);
                r.view_mut((s0, s0), (width, width)).copy_from(&block);
            }
            mats.push(r);
        }
        Ok(Representation { dim: m, mats })
    }

    /// Restriction to a subspace: matrices `B^T M_g B` for an orthonormal
    /// column basis `B`.
    pub fn restricted(&self, b: &DMatrix<f64>) -> Representation {
        let mats = self.mats.iter().map(|m| b.transpose() * m * b).collect();
        Representation { dim: b.ncols(), mats }
    }

    /// `(1/|S|) sum over S of M_g`: the orthogonal projector onto the fixed
    /// subspace of `sub`.
    pub fn average_projector(&self, sub: Subgroup) -> DMatrix<f64> {
        let mut p = DMatrix::zeros(self.dim, self.dim);
        for g in sub.elements() {
            p += &self.mats[g.index()];
        }
        p / sub.order() as f64
    }

    /// Dimension of the fixed subspace of `sub` (the projector trace, which
    /// must be close to an integer).
    pub fn fix_dim(&self, sub: Subgroup) -> Result<usize> {
        let t = self.average_projector(sub).trace();
        let r = t.round();
        if (t - r).abs() > 1e-6 || r < -0.5 {
            return Err(Error::Representation(format!(
                "fixed-subspace trace {t} is not a nonnegative integer"
            )));
        }
        Ok(r as usize)
    }

    /// Orthonormal basis of the fixed subspace of `sub`.
    pub fn fixed_basis(&self, sub: Subgroup) -> DMatrix<f64> {
        let p = self.average_projector(sub);
        let svd = p.svd(true, false);
        let u = svd.u.as_ref().expect("left singular vectors requested");
        let cols: Vec<usize> =
            (0..svd.singular_values.len()).filter(|&k| svd.singular_values[k] > 0.5).collect();
        let mut b = DMatrix::zeros(self.dim, cols.len());
        for (c, &k) in cols.iter().enumerate() {
            b.set_column(c, &u.column(k));
        }
        b
    }

    /// Elements of `within` that fix `v` up to a relative tolerance.
    pub fn stabilizer_in(&self, within: Subgroup, v: &DVector<f64>, tol: f64) -> Subgroup {
        let scale = f64::max(1.0, v.norm());
        let mut s = Subgroup(0);
        for g in within.elements() {
            if (&self.mats[g.index()] * v - v).norm() <= tol * scale {
                s.insert(g);
            }
        }
        s
    }

    /// Isotypic decomposition of the representation restricted to `group`.
    /// Components are sorted canonically (irreducible dimension ascending,
    /// then character lexicographically descending, so a trivial component
    /// always comes first when present).
    pub fn isotypic_decompose(&self, group: Subgroup, seed: u64) -> Result<Vec<IsotypicComponent>> {
        for attempt in 0..6u64 {
            let a = self.decompose_once(group, seed.wrapping_add(2 * attempt))?;
            let b = self.decompose_once(group, seed.wrapping_add(2 * attempt + 1))?;
            if let (Some(ca), Some(cb)) = (a, b) {
                if Self::same_decomposition(&ca, &cb) {
                    return Ok(ca);
                }
            }
        }
        Err(Error::Representation(
            "isotypic decomposition did not stabilize across seeds".into(),
        ))
    }

    fn same_decomposition(a: &[IsotypicComponent], b: &[IsotypicComponent]) -> bool {
        if a.len() != b.len() {
            return false;
        }
        for (x, y) in a.iter().zip(b) {
            if x.character != y.character || x.multiplicity != y.multiplicity {
                return false;
            }
            // compare subspaces through their projectors
            let px = x.basis() * x.basis().transpose();
            let py = y.basis() * y.basis().transpose();
            if (px - py).norm() > 1e-7 {
                return false;
            }
        }
        true
    }

    /// One randomized decomposition attempt; `Ok(None)` signals a resolvable
    /// failure (eigenvalue collision), which the caller retries.
    #[allow(clippy::type_complexity)]
    fn decompose_once(
        &self,
        group: Subgroup,
        seed: u64,
    ) -> Result<Option<Vec<IsotypicComponent>>> {
        let n = self.dim;
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let s0 = {
            let a = DMatrix::from_fn(n, n, |_, _| rng.gen::<f64>() - 0.5);
            (&a + a.transpose()) * 0.5
        };
        let mut s = DMatrix::zeros(n, n);
        for g in group.elements() {
            let m = &self.mats[g.index()];
            s += m.transpose() * &s0 * m;
        }
        s /= group.order() as f64;
        let s = (&s + s.transpose()) * 0.5;
        let eig = s.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

        // eigenvalue clusters = irreducible subspaces (generic seed)
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for (pos, &k) in order.iter().enumerate() {
            let fresh = pos == 0 || {
                let prev = eig.eigenvalues[order[pos - 1]];
                let cur = eig.eigenvalues[k];
                (cur - prev).abs() > 1e-7 * f64::max(1.0, cur.abs())
            };
            if fresh {
                clusters.push(vec![k]);
            } else {
                clusters.last_mut().unwrap().push(k);
            }
        }

        let elems: Vec<Elem> = group.elements().collect();
        let mut pieces: Vec<(Vec<i64>, DMatrix<f64>)> = Vec::new();
        for cl in &clusters {
            let d = cl.len();
            if d > 2 {
                return Ok(None); // irreducibles here have dimension <= 2
            }
            let mut b = DMatrix::zeros(n, d);
            for (c, &k) in cl.iter().enumerate() {
                b.set_column(c, &eig.eigenvectors.column(k));
            }
            let mut character = Vec::with_capacity(elems.len());
            for &g in &elems {
                let t = (b.transpose() * &self.mats[g.index()] * &b).trace();
                let r = t.round();
                if (t - r).abs() > 1e-6 {
                    return Ok(None); // non-integer character: collision
                }
                character.push(r as i64);
            }
            // Frobenius self-pairing of the character must be 1 (real type)
            // or 2 (complex type); anything else is a collision artifact
            let norm2: i64 = character.iter().map(|&c| c * c).sum::<i64>() / elems.len() as i64;
            if !(1..=2).contains(&norm2) {
                return Ok(None);
            }
            pieces.push((character, b));
        }

        // group equal characters into components
        let mut comps: Vec<IsotypicComponent> = Vec::new();
        for (character, b) in pieces {
            if let Some(c) = comps.iter_mut().find(|c| c.character == character) {
                c.copies.push(b);
                c.multiplicity += 1;
            } else {
                let irrep_dim = character[elems.iter().position(|&g| g == Elem::E).unwrap_or(0)];
                // the identity is always the first element of a subgroup list
                debug_assert_eq!(elems[0], Elem::E);
                let mut kernel = Subgroup(0);
                for (i, &g) in elems.iter().enumerate() {
                    if character[i] == irrep_dim {
                        kernel.insert(g);
                    }
                }
                comps.push(IsotypicComponent {
                    id: 0,
                    group,
                    irrep_dim: irrep_dim as usize,
                    multiplicity: 1,
                    character,
                    kernel,
                    copies: vec![b],
                });
            }
        }
        comps.sort_by(|a, b| {
            a.irrep_dim
                .cmp(&b.irrep_dim)
                .then_with(|| b.character.cmp(&a.character))
        });
        for (i, c) in comps.iter_mut().enumerate() {
            c.id = i;
        }
        let total: usize = comps.iter().map(|c| c.dim()).sum();
        if total != n {
            return Err(Error::Representation(format!(
                "isotypic components span {total} of {n} dimensions"
            )));
        }
        Ok(Some(comps))
    }
}

/// One isotypic component of a representation restricted to a subgroup.
#[derive(Clone, Debug)]
pub struct IsotypicComponent {
    /// Position in the canonical ordering.
    pub id: usize,
    /// The subgroup the decomposition was taken under.
    pub group: Subgroup,
    pub irrep_dim: usize,
    pub multiplicity: usize,
    /// Integer character values over `group.elements()` (sorted order).
    pub character: Vec<i64>,
    /// Elements acting trivially on the component.
    pub kernel: Subgroup,
    /// One orthonormal basis per irreducible copy.
    pub copies: Vec<DMatrix<f64>>,
}

impl IsotypicComponent {
    pub fn dim(&self) -> usize {
        self.irrep_dim * self.multiplicity
    }

    pub fn is_trivial(&self) -> bool {
        self.irrep_dim == 1 && self.character.iter().all(|&c| c == 1)
    }

    /// Concatenated basis of all copies (dim x (irrep_dim * multiplicity)).
    pub fn basis(&self) -> DMatrix<f64> {
        let n = self.copies[0].nrows();
        let mut b = DMatrix::zeros(n, self.dim());
        let mut col = 0;
        for c in &self.copies {
            for k in 0..c.ncols() {
                b.set_column(col, &c.column(k));
                col += 1;
            }
        }
        b
    }
}
