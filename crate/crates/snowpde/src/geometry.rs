//! The triangular grid inside a Koch-snowflake polygon, with its exact
//! planar symmetry action.
//!
//! The level-`l` region is the polygon with `3*4^l` edges obtained by `l`
//! Koch iterations on the equilateral triangle of circumradius `sqrt(3)/3`
//! (side 1) centered at the origin, vertex up. The grid is the set of points
//! of the triangular lattice with spacing `h = 2/3^l` (one lattice direction
//! parallel to the x-axis, origin a lattice point) that lie strictly inside
//! the polygon. Its size is exactly `N = (9^l - 4^l)/5`.
//!
//! All geometry is exact. Work happens on the half-spacing lattice with
//! basis `f1 = (h/2, 0)`, `f2 = (h/4, h*sqrt(3)/4)`: polygon vertices have
//! integer coordinates there, grid points are the (even, even) pairs, and
//! every final polygon edge is a unit lattice vector, so the only lattice
//! points on the boundary are the polygon's own vertices. "Strictly inside"
//! is then an integer parity count, never a floating-point call.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::{Elem, D6_ORDER};

/// The fixed sample point used in diagram output files. It is a grid point
/// for every level >= 3.
pub const GENERIC_POINT: (f64, f64) = (2.0 / 27.0, 4.0 * 1.732_050_807_568_877_2 / 27.0);

/// Expected grid size `(9^l - 4^l)/5`.
pub fn expected_point_count(level: u32) -> usize {
    ((9u64.pow(level) - 4u64.pow(level)) / 5) as usize
}

/// Rotation by -60 degrees in half-lattice coordinates.
fn rot_cw(v: (i64, i64)) -> (i64, i64) {
    (v.0 + v.1, -v.0)
}

/// Vertices of the level-`l` Koch polygon in half-lattice coordinates,
/// counterclockwise. `3 * 4^l` vertices, all distinct.
pub fn koch_polygon(level: u32) -> Vec<(i64, i64)> {
    assert!((1..=7).contains(&level), "supported levels are 1..=7");
    let s = 3i64.pow(level - 1);
    // top, bottom-left, bottom-right: circumradius sqrt(3)/3, side 1, CCW
    let mut verts: Vec<(i64, i64)> = vec![(-s, 2 * s), (-s, -s), (2 * s, -s)];
    for _ in 0..level {
        let mut next = Vec::with_capacity(verts.len() * 4);
        let n = verts.len();
        for k in 0..n {
            let a = verts[k];
            let b = verts[(k + 1) % n];
            let d = (b.0 - a.0, b.1 - a.1);
            debug_assert!(d.0 % 3 == 0 && d.1 % 3 == 0);
            let t = (d.0 / 3, d.1 / 3);
            let p1 = (a.0 + t.0, a.1 + t.1);
            let r = rot_cw(t);
            // outward spike: the polygon is CCW, so "right of travel" is out
            let tip = (p1.0 + r.0, p1.1 + r.1);
            let p2 = (a.0 + 2 * t.0, a.1 + 2 * t.1);
            next.extend_from_slice(&[a, p1, tip, p2]);
        }
        verts = next;
    }
    verts
}

/// The grid: points, neighbor lists, and coordinate bookkeeping.
#[derive(Clone, Debug)]
pub struct SnowflakeGrid {
    pub level: u32,
    /// Lattice spacing `2/3^level`.
    pub h: f64,
    /// Lattice coordinates `(i, j)` of each grid point in spacing units
    /// (cartesian `x = (i + j/2) h`, `y = j h sqrt(3)/2`), sorted by `(j, i)`.
    pub points: Vec<(i32, i32)>,
    /// For each point, indices of its grid neighbors at distance `h`
    /// (up to six, ascending).
    pub neighbors: Vec<Vec<u32>>,
    index: HashMap<(i32, i32), u32>,
}

impl SnowflakeGrid {
    /// Builds the level-`l` grid and verifies the exact point-count formula.
    pub fn build(level: u32) -> Result<SnowflakeGrid> {
        if !(1..=7).contains(&level) {
            return Err(Error::Geometry(format!("level {level} out of range 1..=7")));
        }
        let verts = koch_polygon(level);
        let vert_set: std::collections::HashSet<(i64, i64)> = verts.iter().copied().collect();
        let b_min = verts.iter().map(|v| v.1).min().unwrap();
        let b_max = verts.iter().map(|v| v.1).max().unwrap();
        let a_min = verts.iter().map(|v| v.0).min().unwrap();
        let a_max = verts.iter().map(|v| v.0).max().unwrap();

        // Scanline crossings. Every polygon edge moves one row up or down (or
        // stays level and is skipped), so with the half-open convention
        // [min_b, max_b) each edge crosses exactly one scanline, at its lower
        // endpoint. Record that endpoint's horizontal position X = 2a + b
        // (cartesian x in units of h/4).
        let n_rows = (b_max - b_min + 1) as usize;
        let mut crossings: Vec<Vec<i64>> = vec![Vec::new(); n_rows];
        let n = verts.len();
        for k in 0..n {
            let a = verts[k];
            let b = verts[(k + 1) % n];
            if a.1 == b.1 {
                continue;
            }
            debug_assert!((a.1 - b.1).abs() == 1, "final edges span one row");
            let lower = if a.1 < b.1 { a } else { b };
            crossings[(lower.1 - b_min) as usize].push(2 * lower.0 + lower.1);
        }
        for row in &mut crossings {
            row.sort_unstable();
        }

        let mut points: Vec<(i32, i32)> = Vec::new();
        let mut b = b_min + (b_min.rem_euclid(2));
        while b <= b_max {
            let row = &crossings[(b - b_min) as usize];
            let mut a = a_min + (a_min.rem_euclid(2));
            while a <= a_max {
                if !vert_set.contains(&(a, b)) {
                    let x = 2 * a + b;
                    // count crossings strictly to the right
                    let to_right = row.len() - row.partition_point(|&c| c <= x);
                    if to_right % 2 == 1 {
                        points.push(((a / 2) as i32, (b / 2) as i32));
                    }
                }
                a += 2;
            }
            b += 2;
        }
        // already sorted by (j, i) because rows are scanned in order
        debug_assert!(points.windows(2).all(|w| (w[0].1, w[0].0) < (w[1].1, w[1].0)));

        let expected = expected_point_count(level);
        if points.len() != expected {
            return Err(Error::Geometry(format!(
                "level {level}: found {} interior lattice points, expected {expected}",
                points.len()
            )));
        }

        let index: HashMap<(i32, i32), u32> =
            points.iter().enumerate().map(|(k, &p)| (p, k as u32)).collect();
        const DIRS: [(i32, i32); 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];
        let neighbors: Vec<Vec<u32>> = points
            .iter()
            .map(|&(i, j)| {
                let mut nb: Vec<u32> = DIRS
                    .iter()
                    .filter_map(|&(di, dj)| index.get(&(i + di, j + dj)).copied())
                    .collect();
                nb.sort_unstable();
                nb
            })
            .collect();

        Ok(SnowflakeGrid { level, h: 2.0 / 3f64.powi(level as i32), points, neighbors, index })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Uniform quadrature weight: the lattice cell area `sqrt(3)/2 * h^2`.
    pub fn weight(&self) -> f64 {
        3f64.sqrt() / 2.0 * self.h * self.h
    }

    /// Cartesian coordinates of point `k`.
    pub fn cartesian(&self, k: usize) -> (f64, f64) {
        let (i, j) = self.points[k];
        let x = (i as f64 + j as f64 / 2.0) * self.h;
        let y = j as f64 * 3f64.sqrt() / 2.0 * self.h;
        (x, y)
    }

    pub fn index_of(&self, p: (i32, i32)) -> Option<u32> {
        self.index.get(&p).copied()
    }

    /// Permutation realizing the function action of the planar part of `g`:
    /// `(g u)(x_k) = u(x_perm[k]]`, i.e. `perm[k]` is the index of
    /// `g^-1 x_k`. Defined for all 24 elements (the sign factor does not move
    /// points); fails if the grid were not symmetric, which cannot happen for
    /// a correctly built grid.
    pub fn permutation(&self, g: Elem) -> Result<Vec<u32>> {
        let gi = g.inverse();
        self.points
            .iter()
            .map(|&(i, j)| {
                let q = gi.lattice_apply((i as i64, j as i64));
                self.index_of((q.0 as i32, q.1 as i32)).ok_or_else(|| {
                    Error::Geometry(format!("grid not closed under symmetry {g} at ({i},{j})"))
                })
            })
            .collect()
    }

    /// All 12 planar permutations, indexed by the `D6` element index.
    pub fn all_permutations(&self) -> Result<Vec<Vec<u32>>> {
        (0..D6_ORDER).map(|i| self.permutation(Elem::from_index(i))).collect()
    }

    /// Linear (barycentric) interpolation of grid values at an arbitrary
    /// point. Lattice vertices that are not grid points contribute zero, the
    /// Dirichlet extension. Exact at grid points.
    pub fn interpolate(&self, values: &[f64], xy: (f64, f64)) -> f64 {
        let (x, y) = xy;
        let jf = y / (self.h * 3f64.sqrt() / 2.0);
        let ifl = x / self.h - jf / 2.0;
        let i0 = ifl.floor();
        let j0 = jf.floor();
        let u = ifl - i0;
        let v = jf - j0;
        let (i0, j0) = (i0 as i32, j0 as i32);
        let val = |i: i32, j: i32| -> f64 {
            self.index_of((i, j)).map_or(0.0, |k| values[k as usize])
        };
        if u + v <= 1.0 {
            // lower triangle: (i0,j0), (i0+1,j0), (i0,j0+1)
            (1.0 - u - v) * val(i0, j0) + u * val(i0 + 1, j0) + v * val(i0, j0 + 1)
        } else {
            // upper triangle: (i0+1,j0+1), (i0,j0+1), (i0+1,j0)
            (u + v - 1.0) * val(i0 + 1, j0 + 1) + (1.0 - u) * val(i0, j0 + 1)
                + (1.0 - v) * val(i0 + 1, j0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GROUP_ORDER;

    #[test]
    fn point_counts_match_formula() {
        for level in 1..=5 {
            let grid = SnowflakeGrid::build(level).expect("grid builds");
            assert_eq!(grid.len(), expected_point_count(level));
        }
        assert_eq!(expected_point_count(1), 1);
        assert_eq!(expected_point_count(2), 13);
        assert_eq!(expected_point_count(3), 133);
        assert_eq!(expected_point_count(4), 1261);
        assert_eq!(expected_point_count(5), 11605);
    }

    #[test]
    fn polygon_has_3_times_4_to_l_distinct_vertices() {
        for level in 1..=4 {
            let verts = koch_polygon(level);
            assert_eq!(verts.len(), 3 * 4usize.pow(level));
            let set: std::collections::HashSet<_> = verts.iter().collect();
            assert_eq!(set.len(), verts.len());
        }
    }

    #[test]
    fn level_one_grid_is_the_origin() {
        let grid = SnowflakeGrid::build(1).unwrap();
        assert_eq!(grid.points, vec![(0, 0)]);
        assert!(grid.neighbors[0].is_empty());
    }

    #[test]
    fn neighbor_relation_is_symmetric_and_bounded() {
        let grid = SnowflakeGrid::build(3).unwrap();
        for (k, nb) in grid.neighbors.iter().enumerate() {
            assert!(nb.len() <= 6);
            for &m in nb {
                assert!(grid.neighbors[m as usize].contains(&(k as u32)));
            }
        }
        // the grid has a genuinely mixed boundary: some interior points
        assert!(grid.neighbors.iter().any(|nb| nb.len() == 6));
        assert!(grid.neighbors.iter().any(|nb| nb.len() < 6));
    }

    #[test]
    fn sigma_fixes_exactly_the_y_axis_points() {
        // frozen expectation: 9 grid points with x = 0 at level 3
        let grid = SnowflakeGrid::build(3).unwrap();
        let perm = grid.permutation(Elem::SIGMA).unwrap();
        let fixed: Vec<usize> = (0..grid.len()).filter(|&k| perm[k] as usize == k).collect();
        assert_eq!(fixed.len(), 9);
        for &k in &fixed {
            let (x, _) = grid.cartesian(k);
            assert!(x.abs() < 1e-14);
        }
        for k in 0..grid.len() {
            let (x, _) = grid.cartesian(k);
            if x.abs() < 1e-14 {
                assert!(fixed.contains(&k));
            }
        }
    }

    #[test]
    fn permutations_form_a_homomorphism_and_preserve_adjacency() {
        let grid = SnowflakeGrid::build(2).unwrap();
        let perms: Vec<Vec<u32>> = (0..GROUP_ORDER)
            .map(|i| grid.permutation(Elem::from_index(i)).unwrap())
            .collect();
        for a in Elem::all() {
            for b in Elem::all() {
                let ab = a.compose(b);
                // perm_g[k] = index(g^-1 x_k) gives perm_{ab}[k] = perm_b[perm_a[k]]
                let pa = &perms[a.index()];
                let pb = &perms[b.index()];
                let pab = &perms[ab.index()];
                for k in 0..grid.len() {
                    assert_eq!(pab[k], pb[pa[k] as usize]);
                }
            }
        }
        // adjacency is preserved
        let p = &perms[Elem::RHO.index()];
        for k in 0..grid.len() {
            let mut mapped: Vec<u32> =
                grid.neighbors[k].iter().map(|&m| p[m as usize]).collect();
            mapped.sort_unstable();
            let mut expect = grid.neighbors[p[k] as usize].clone();
            expect.sort_unstable();
            assert_eq!(mapped, expect);
        }
    }

    #[test]
    fn generic_point_is_a_grid_point_at_level_three() {
        let grid = SnowflakeGrid::build(3).unwrap();
        let k = grid.index_of((-1, 4)).expect("generic point present");
        let (x, y) = grid.cartesian(k as usize);
        assert!((x - GENERIC_POINT.0).abs() < 1e-15);
        assert!((y - GENERIC_POINT.1).abs() < 1e-12);
        // interpolation is exact there
        let mut vals = vec![0.0; grid.len()];
        vals[k as usize] = 2.5;
        assert!((grid.interpolate(&vals, GENERIC_POINT) - 2.5).abs() < 1e-12);
    }

    #[test]
    fn interpolation_is_linear_on_a_cell() {
        let grid = SnowflakeGrid::build(3).unwrap();
        // an affine function sampled on the grid interpolates exactly inside
        // any cell whose three vertices are all grid points
        let vals: Vec<f64> = (0..grid.len())
            .map(|k| {
                let (x, y) = grid.cartesian(k);
                1.0 + 2.0 * x - 0.5 * y
            })
            .collect();
        // a point near the origin, strictly inside the central cells
        let probe = (0.01, 0.012);
        let exact = 1.0 + 2.0 * probe.0 - 0.5 * probe.1;
        assert!((grid.interpolate(&vals, probe) - exact).abs() < 1e-12);
    }
}
