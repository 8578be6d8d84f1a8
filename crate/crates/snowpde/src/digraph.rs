//! The bifurcation digraph: which symmetry types can break into which, with
//! what multiplicity, and how the resulting branches should be seeded.
//!
//! For a solution branch with symmetry `G` (one of the 23 types), a
//! degenerate critical eigenspace `E` of the linearization carries a
//! representation of `G`. Generically `E` is one irreducible component, and
//! the symmetries of the bifurcating branches are the **maximal isotropy
//! subgroups** of vectors in `E`. Running that analysis over every type and
//! every nontrivial component of the universal twelve-point representation
//! produces the complete digraph.
//!
//! Each edge carries:
//! * a **quotient label** — the isomorphism type of `G / ker(E)`, the group
//!   that effectively acts at the bifurcation;
//! * a **style** encoding the branch structure: `solid` when the daughter's
//!   fixed line in `E` is flipped by its normalizer (one branch pair),
//!   `dashed` when the fixed line is rigid (two distinct branch pairs),
//!   `dotted` when the fixed subspace is at least a plane.
//!
//! The same geometric analysis, applied at run time to an actual null space
//! of a Hessian, yields the seed directions for newborn branches.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{quotient_kind, QuotientKind, Subgroup, SymmetryTable};
use crate::rep::Representation;

/// How branches emerge at an edge (see module docs).
#[derive(Clone, Copy, PartialEq, Eq, Debug, PartialOrd, Ord, Hash)]
pub enum EdgeStyle {
    Solid,
    Dashed,
    Dotted,
}

impl fmt::Display for EdgeStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EdgeStyle::Solid => "solid",
            EdgeStyle::Dashed => "dashed",
            EdgeStyle::Dotted => "dotted",
        };
        write!(f, "{s}")
    }
}

/// One daughter symmetry discovered in an invariant space `E`.
#[derive(Clone, Debug)]
pub struct DaughterBranch {
    /// The concrete isotropy subgroup (a subgroup of the mother).
    pub sub: Subgroup,
    /// Its symmetry type id.
    pub type_id: usize,
    pub style: EdgeStyle,
    /// Dimension of `fix(sub, E)`.
    pub fix_dim: usize,
    /// Orthonormal basis of `fix(sub, E)` in the coordinates of `E`.
    pub fix_basis: DMatrix<f64>,
}

/// Full symmetry analysis of one invariant space.
#[derive(Clone, Debug)]
pub struct BranchingGeometry {
    /// Elements of the mother acting trivially on the space.
    pub kernel: Subgroup,
    /// `mother / kernel`, or `None` when the whole action is trivial (the
    /// degeneracy is then a fold, not a symmetry-breaking bifurcation).
    pub quotient: Option<QuotientKind>,
    /// Maximal isotropy types, one entry per type.
    pub daughters: Vec<DaughterBranch>,
}

/// Analyzes the action of `mother` on a space `E`, given the restricted
/// representation (an orthogonal action on the coordinates of `E`).
///
/// Finds every maximal isotropy subgroup, its fixed subspace, and the edge
/// style. Maximality is with respect to the isotropy subgroups of `E`
/// excluding `mother` itself; when the action is trivial there are none.
pub fn branching_geometry(
    rep_e: &Representation,
    mother: Subgroup,
    table: &SymmetryTable,
    seed: u64,
) -> Result<BranchingGeometry> {
    let d = rep_e.dim;
    let eye = DMatrix::<f64>::identity(d, d);
    let mut kernel = Subgroup(0);
    for g in mother.elements() {
        if (rep_e.mat(g) - &eye).norm() <= 1e-8 * (d as f64).sqrt() {
            kernel.insert(g);
        }
    }
    let quotient = if kernel == mother { None } else { Some(quotient_kind(mother, kernel)?) };

    // isotropy subgroups: exact stabilizers of generic vectors in their own
    // fixed subspaces
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut isotropy: Vec<Subgroup> = Vec::new();
    for &sub in &table.subgroups {
        if sub == mother || !sub.is_subset_of(mother) || !kernel.is_subset_of(sub) {
            continue;
        }
        if rep_e.fix_dim(sub)? == 0 {
            continue;
        }
        let p = rep_e.average_projector(sub);
        for _ in 0..4 {
            let v = DVector::from_fn(d, |_, _| rng.gen::<f64>() - 0.5);
            let pv = &p * v;
            if pv.norm() < 1e-9 {
                continue;
            }
            if rep_e.stabilizer_in(mother, &pv, 1e-8) == sub {
                isotropy.push(sub);
                break;
            }
        }
    }
    let maximal: Vec<Subgroup> = isotropy
        .iter()
        .copied()
        .filter(|&s| !isotropy.iter().any(|&t| s != t && s.is_subset_of(t)))
        .collect();

    // one daughter per symmetry type; prefer the canonical representative
    // subgroup when it occurs among the conjugates
    let mut by_type: BTreeMap<usize, Subgroup> = BTreeMap::new();
    for &s in &maximal {
        let tid = table
            .type_of(s)
            .ok_or_else(|| Error::Group(format!("stabilizer {s:?} has no symmetry type")))?;
        by_type
            .entry(tid)
            .and_modify(|e| {
                let canon = table.rep(tid);
                let better = s == canon || (*e != canon && s.0 < e.0);
                if better {
                    *e = s;
                }
            })
            .or_insert(s);
    }

    let mut daughters = Vec::with_capacity(by_type.len());
    for (&type_id, &sub) in &by_type {
        let fix_dim = rep_e.fix_dim(sub)?;
        let style = if fix_dim >= 2 {
            EdgeStyle::Dotted
        } else {
            let nz = sub.normalizer_in(mother);
            if nz == sub {
                EdgeStyle::Dashed
            } else {
                debug_assert_eq!(nz.order(), 2 * sub.order(), "normalizer acts on a line by signs");
                EdgeStyle::Solid
            }
        };
        daughters.push(DaughterBranch {
            sub,
            type_id,
            style,
            fix_dim,
            fix_basis: rep_e.fixed_basis(sub),
        });
    }
    Ok(BranchingGeometry { kernel, quotient, daughters })
}

/// One edge of the digraph.
#[derive(Clone, Debug)]
pub struct DigraphEdge {
    /// Mother symmetry type id.
    pub mother: usize,
    /// Component id within the mother's decomposition of the twelve-point
    /// representation (canonical ordering, trivial component included in the
    /// numbering).
    pub component: usize,
    /// Dimension of one irreducible copy of the component.
    pub irrep_dim: usize,
    /// Daughter symmetry type id.
    pub daughter: usize,
    pub style: EdgeStyle,
    /// Isomorphism type of mother / kernel-of-component.
    pub quotient: QuotientKind,
    /// Dimension of the daughter's fixed subspace in one copy.
    pub fix_dim: usize,
}

impl DigraphEdge {
    /// Stable label, e.g. `S1:E4->S9`.
    pub fn label(&self) -> String {
        format!("S{}:E{}->S{}", self.mother, self.component, self.daughter)
    }
}

/// Summary of one nontrivial isotypic component of a mother type's action.
#[derive(Clone, Debug)]
pub struct ComponentSummary {
    pub id: usize,
    pub irrep_dim: usize,
    pub multiplicity: usize,
    /// Integer character of one irreducible copy over the mother's elements
    /// in sorted order; used to match run-time center spaces to this
    /// component.
    pub character: Vec<i64>,
}

/// The full digraph over the 23 symmetry types.
#[derive(Clone, Debug)]
pub struct BifurcationDigraph {
    pub edges: Vec<DigraphEdge>,
    /// Nontrivial components per type id.
    pub components: Vec<Vec<ComponentSummary>>,
}

/// The presentation grouping of the 23 types into 9 boxes of structurally
/// identical rows.
pub const BOXES: [&[usize]; 9] = [
    &[0],
    &[1, 2, 3, 4],
    &[5, 6, 7, 8],
    &[9, 10, 11, 12],
    &[13, 14],
    &[15, 16, 17, 18],
    &[19, 20],
    &[21],
    &[22],
];

/// Box index of a type id.
pub fn box_of(type_id: usize) -> usize {
    BOXES.iter().position(|b| b.contains(&type_id)).expect("every type is boxed")
}

/// A deduplicated box-to-box arrow of the condensed digraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondensedArrow {
    pub from_box: usize,
    pub to_box: usize,
    pub quotient: QuotientKind,
    pub style: EdgeStyle,
    /// Number of full-digraph edges collapsed into this arrow.
    pub edge_count: usize,
}

/// Builds the digraph by decomposing the twelve-point representation under
/// every canonical symmetry type and analyzing each nontrivial component.
pub fn build_digraph(table: &SymmetryTable) -> Result<BifurcationDigraph> {
    let rep12 = Representation::twelve_point();
    let mut edges = Vec::new();
    let mut components = vec![Vec::new(); table.types.len()];
    for t in &table.types {
        let mother = t.rep;
        let comps = rep12.isotypic_decompose(mother, 0xD16A_0000 + t.id as u64)?;
        for comp in comps.iter().filter(|c| !c.is_trivial()) {
            components[t.id].push(ComponentSummary {
                id: comp.id,
                irrep_dim: comp.irrep_dim,
                multiplicity: comp.multiplicity,
                character: comp.character.clone(),
            });
            let rep_e = rep12.restricted(&comp.copies[0]);
            let geo = branching_geometry(&rep_e, mother, table, 0xBEE5_0000 + comp.id as u64)?;
            let quotient = geo.quotient.ok_or_else(|| {
                Error::Representation("nontrivial component with trivial action".into())
            })?;
            for dg in &geo.daughters {
                edges.push(DigraphEdge {
                    mother: t.id,
                    component: comp.id,
                    irrep_dim: comp.irrep_dim,
                    daughter: dg.type_id,
                    style: dg.style,
                    quotient,
                    fix_dim: dg.fix_dim,
                });
            }
        }
    }
    Ok(BifurcationDigraph { edges, components })
}

impl BifurcationDigraph {
    /// Number of distinct (mother type, component) pairs with at least one
    /// edge: the count of distinct bifurcation types.
    pub fn bifurcation_type_count(&self) -> usize {
        let mut pairs: Vec<(usize, usize)> =
            self.edges.iter().map(|e| (e.mother, e.component)).collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs.len()
    }

    /// Collapses edges into box-to-box arrows.
    pub fn condensed(&self) -> Vec<CondensedArrow> {
        let mut count: BTreeMap<(usize, usize, QuotientKind, EdgeStyle), usize> = BTreeMap::new();
        for e in &self.edges {
            *count.entry((box_of(e.mother), box_of(e.daughter), e.quotient, e.style)).or_insert(0) +=
                1;
        }
        count
            .into_iter()
            .map(|((from_box, to_box, quotient, style), edge_count)| CondensedArrow {
                from_box,
                to_box,
                quotient,
                style,
                edge_count,
            })
            .collect()
    }

    /// GraphViz rendering of the full digraph.
    pub fn to_dot(&self, table: &SymmetryTable) -> String {
        let mut s = String::from("digraph symmetry_breaking {\n  rankdir=TB;\n  node [shape=box];\n");
        for t in &table.types {
            s.push_str(&format!("  S{} [label=\"S{} ({})\"];\n", t.id, t.id, t.iso));
        }
        for e in &self.edges {
            s.push_str(&format!(
                "  S{} -> S{} [style={}, label=\"{} E{}\"];\n",
                e.mother, e.daughter, e.style, e.quotient, e.component
            ));
        }
        s.push_str("}\n");
        s
    }

    /// GraphViz rendering of the condensed digraph.
    pub fn condensed_to_dot(&self, table: &SymmetryTable) -> String {
        let mut s = String::from("digraph condensed {\n  rankdir=TB;\n  node [shape=box];\n");
        for (i, b) in BOXES.iter().enumerate() {
            let names: Vec<String> = b.iter().map(|&t| format!("S{t}")).collect();
            let iso = table.types[b[0]].iso;
            s.push_str(&format!("  B{i} [label=\"{} ({})\"];\n", names.join(" "), iso));
        }
        for a in self.condensed() {
            s.push_str(&format!(
                "  B{} -> B{} [style={}, label=\"{} x{}\"];\n",
                a.from_box, a.to_box, a.style, a.quotient, a.edge_count
            ));
        }
        s.push_str("}\n");
        s
    }

    /// Tab-separated edge list.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("mother\tcomponent\tirrep_dim\tdaughter\tquotient\tstyle\tfix_dim\n");
        for e in &self.edges {
            s.push_str(&format!(
                "S{}\tE{}\t{}\tS{}\t{}\t{}\t{}\n",
                e.mother, e.component, e.irrep_dim, e.daughter, e.quotient, e.style, e.fix_dim
            ));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> Vec<(usize, usize, QuotientKind, EdgeStyle, usize)> {
        // hand-verified condensed digraph: (from box, to box, quotient,
        // style, collapsed edge count)
        use EdgeStyle::*;
        use QuotientKind::*;
        vec![
            (0, 1, Z2, Solid, 4),
            (0, 2, D6, Solid, 4),
            (1, 2, D3, Dashed, 4),
            (1, 3, Z2, Solid, 8),
            (1, 4, Z2, Solid, 4),
            (1, 5, D6, Solid, 8),
            (2, 5, Z2, Solid, 8),
            (2, 6, Z2, Solid, 4),
            (3, 5, D3, Dashed, 4),
            (3, 7, Z2, Solid, 4),
            (4, 6, Z3, Dotted, 2),
            (4, 7, Z2, Solid, 2),
            (4, 8, Z6, Dotted, 2),
            (5, 8, Z2, Solid, 4),
            (6, 8, Z2, Solid, 2),
            (7, 8, Z3, Dotted, 1),
        ]
    }

    #[test]
    fn digraph_census() {
        let table = SymmetryTable::build().unwrap();
        let dg = build_digraph(&table).unwrap();
        assert_eq!(dg.edges.len(), 65, "total edges");
        assert_eq!(dg.bifurcation_type_count(), 59, "distinct (type, component) pairs");
        let arrows = dg.condensed();
        assert_eq!(arrows.len(), 16, "condensed arrows");
        let got: Vec<(usize, usize, QuotientKind, EdgeStyle, usize)> = arrows
            .iter()
            .map(|a| (a.from_box, a.to_box, a.quotient, a.style, a.edge_count))
            .collect();
        let mut want = fixture();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn full_group_row_breaks_to_the_eight_maximal_types() {
        let table = SymmetryTable::build().unwrap();
        let dg = build_digraph(&table).unwrap();
        let mut daughters: Vec<usize> =
            dg.edges.iter().filter(|e| e.mother == 0).map(|e| e.daughter).collect();
        daughters.sort_unstable();
        assert_eq!(daughters, vec![1, 2, 3, 4, 5, 6, 7, 8]);
        // the four one-dimensional components give pitchforks to the
        // order-12 types; the two planar components give the order-4 types
        for e in dg.edges.iter().filter(|e| e.mother == 0) {
            if e.daughter <= 4 {
                assert_eq!(e.quotient, QuotientKind::Z2);
                assert_eq!(e.style, EdgeStyle::Solid);
                assert_eq!(e.fix_dim, 1);
            } else {
                assert_eq!(e.quotient, QuotientKind::D6);
                assert_eq!(e.style, EdgeStyle::Solid);
            }
        }
    }

    #[test]
    fn first_maximal_row_matches_hand_analysis() {
        let table = SymmetryTable::build().unwrap();
        let dg = build_digraph(&table).unwrap();
        let row: Vec<&DigraphEdge> = dg.edges.iter().filter(|e| e.mother == 1).collect();
        assert_eq!(row.len(), 6);
        let mut daughters: Vec<usize> = row.iter().map(|e| e.daughter).collect();
        daughters.sort_unstable();
        assert_eq!(daughters, vec![5, 9, 10, 13, 15, 16]);
        for e in &row {
            match e.daughter {
                5 => {
                    assert_eq!(e.style, EdgeStyle::Dashed);
                    assert_eq!(e.quotient, QuotientKind::D3);
                }
                15 | 16 => {
                    assert_eq!(e.style, EdgeStyle::Solid);
                    assert_eq!(e.quotient, QuotientKind::D6);
                }
                _ => {
                    assert_eq!(e.style, EdgeStyle::Solid);
                    assert_eq!(e.quotient, QuotientKind::Z2);
                }
            }
        }
    }

    #[test]
    fn boxes_have_structurally_identical_rows() {
        let table = SymmetryTable::build().unwrap();
        let dg = build_digraph(&table).unwrap();
        for b in BOXES {
            let row_of = |tid: usize| {
                let mut row: Vec<(usize, QuotientKind, EdgeStyle)> = dg
                    .edges
                    .iter()
                    .filter(|e| e.mother == tid)
                    .map(|e| (box_of(e.daughter), e.quotient, e.style))
                    .collect();
                row.sort();
                row
            };
            for &tid in b {
                assert_eq!(row_of(tid), row_of(b[0]), "box member S{tid} differs from S{}", b[0]);
            }
        }
    }

    #[test]
    fn terminal_type_has_no_edges_and_digraph_is_deterministic() {
        let table = SymmetryTable::build().unwrap();
        let dg = build_digraph(&table).unwrap();
        assert!(dg.edges.iter().all(|e| e.mother != 22), "the trivial type is a sink");
        assert!(dg.edges.iter().all(|e| e.daughter != 0), "nothing breaks into full symmetry");
        let dg2 = build_digraph(&table).unwrap();
        let k1: Vec<String> = dg.edges.iter().map(|e| e.label()).collect();
        let k2: Vec<String> = dg2.edges.iter().map(|e| e.label()).collect();
        assert_eq!(k1, k2);
    }

    #[test]
    fn dot_and_tsv_exports_are_well_formed() {
        let table = SymmetryTable::build().unwrap();
        let dg = build_digraph(&table).unwrap();
        let dot = dg.to_dot(&table);
        assert!(dot.starts_with("digraph"));
        assert_eq!(dot.matches(" -> ").count(), 65);
        let cdot = dg.condensed_to_dot(&table);
        assert_eq!(cdot.matches(" -> ").count(), 16);
        let tsv = dg.to_tsv();
        assert_eq!(tsv.lines().count(), 66); // header + edges
    }
}
