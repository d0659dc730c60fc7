//! Isomorphism-reduced enumeration of decorated graphs: genus-zero trees,
//! rooted trees (genus-one root), one-loop graphs, stars, ordered colored
//! partitions and the refined tuples that index the reduced root
//! contributions.
//!
//! Everything here is purely combinatorial. Equality of two star weights
//! `ω_s = α_{i,j_s}/d_s` is decided from the pair `(j_s, d_s)`, never from
//! specialized numbers.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::Serialize;

use crate::gkm::GkmSpace;

/// A connected decorated graph with vertex labels (fixed points), vertex
/// genera, a multiset of degree-weighted edges, mark positions and an
/// optional root.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DecoratedGraph {
    /// Fixed point `𝔪(v)` of each vertex.
    pub labels: Vec<usize>,
    /// Genus `𝔤(v)` of each vertex.
    pub genus: Vec<u8>,
    /// Edges `(v1, v2, degree)` with `v1 < v2`, sorted.
    pub edges: Vec<(usize, usize, u32)>,
    /// Vertex carrying mark `j`, for `j = 0..|J|`.
    pub marks: Vec<usize>,
    /// The genus-one root of a rooted tree (always vertex 0 when present).
    pub root: Option<usize>,
}

/// One isomorphism class with its automorphism order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphClass {
    /// Canonical representative.
    pub graph: DecoratedGraph,
    /// `|Aut(Γ)|`: decoration-preserving vertex permutations times the
    /// permutations of identical parallel edges.
    pub aut: u64,
    /// The vertex-permutation part of `aut` alone.
    pub vertex_aut: u64,
}

/// Which family to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFamily {
    /// Genus-zero trees (all vertices genus zero).
    Trees,
    /// Trees with a distinguished genus-one root.
    RootedTrees,
    /// Graphs with one cycle and all vertex genera zero.
    OneLoop,
}

impl DecoratedGraph {
    /// Number of vertices.
    pub fn n_vertices(&self) -> usize {
        self.labels.len()
    }

    /// Total degree `Σ d(e)`.
    pub fn degree(&self) -> u32 {
        self.edges.iter().map(|e| e.2).sum()
    }

    /// Arithmetic genus `1 - |Ver| + |Edg| + Σ 𝔤(v)`.
    pub fn total_genus(&self) -> i64 {
        1 - self.labels.len() as i64
            + self.edges.len() as i64
            + self.genus.iter().map(|&g| g as i64).sum::<i64>()
    }

    /// Neighbors of `v` with the degree of the connecting edge, one entry
    /// per incident edge.
    pub fn incident(&self, v: usize) -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        for &(a, b, d) in &self.edges {
            if a == v {
                out.push((b, d));
            } else if b == v {
                out.push((a, d));
            }
        }
        out
    }

    /// Number of marks carried by `v`.
    pub fn marks_at(&self, v: usize) -> usize {
        self.marks.iter().filter(|&&u| u == v).count()
    }

    /// Indices of the marks carried by `v`.
    pub fn mark_indices_at(&self, v: usize) -> Vec<usize> {
        (0..self.marks.len())
            .filter(|&j| self.marks[j] == v)
            .collect()
    }

    /// Edges plus marks at `v`.
    pub fn valence(&self, v: usize) -> usize {
        self.incident(v).len() + self.marks_at(v)
    }

    /// The decorated star around the root of a rooted tree.
    pub fn root_star(&self) -> Option<DecoratedStar> {
        let r = self.root?;
        let mut edges: Vec<(usize, u32)> = self
            .incident(r)
            .iter()
            .map(|&(u, d)| (self.labels[u], d))
            .collect();
        edges.sort_unstable();
        Some(DecoratedStar {
            root: self.labels[r],
            edges,
            marks: self.marks_at(r),
        })
    }

    /// Structural checks: connectivity, label condition, genus and degree.
    pub fn validate(&self, genus: i64, degree: u32) -> bool {
        let v = self.labels.len();
        let connected = is_connected(v, &self.edges);
        let labels_ok = self
            .edges
            .iter()
            .all(|&(a, b, d)| a < b && b < v && d >= 1 && self.labels[a] != self.labels[b]);
        let root_ok = match self.root {
            Some(r) => {
                self.genus[r] == 1
                    && self
                        .genus
                        .iter()
                        .enumerate()
                        .all(|(u, &g)| u == r || g == 0)
                    && self.edges.len() + 1 == v
            }
            None => self.genus.iter().all(|&g| g == 0),
        };
        connected && labels_ok && root_ok && self.total_genus() == genus && self.degree() == degree
    }
}

fn is_connected(v: usize, edges: &[(usize, usize, u32)]) -> bool {
    if v == 0 {
        return false;
    }
    let mut seen = vec![false; v];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(x) = stack.pop() {
        for &(a, b, _) in edges {
            let y = if a == x {
                b
            } else if b == x {
                a
            } else {
                continue;
            };
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn factorial_u64(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn parallel_edge_factor(edges: &[(usize, usize, u32)]) -> u64 {
    edges
        .iter()
        .counts()
        .values()
        .map(|&c| factorial_u64(c))
        .product()
}

type Key = (Vec<usize>, Vec<(usize, usize, u32)>, Vec<usize>);

fn relabel(p: &[usize], labels: &[usize], edges: &[(usize, usize, u32)], marks: &[usize]) -> Key {
    let mut lab = vec![0; labels.len()];
    for (v, &l) in labels.iter().enumerate() {
        lab[p[v]] = l;
    }
    let mut e: Vec<(usize, usize, u32)> = edges
        .iter()
        .map(|&(a, b, d)| (p[a].min(p[b]), p[a].max(p[b]), d))
        .collect();
    e.sort_unstable();
    (lab, e, marks.iter().map(|&u| p[u]).collect())
}

/// Canonical key (root sent to vertex 0) and vertex automorphism count.
fn canonicalize(
    labels: &[usize],
    edges: &[(usize, usize, u32)],
    marks: &[usize],
    root: Option<usize>,
) -> (Key, u64) {
    let v = labels.len();
    let mut sorted_edges = edges.to_vec();
    sorted_edges.sort_unstable();
    let own = (labels.to_vec(), sorted_edges, marks.to_vec());
    let mut best: Option<Key> = None;
    let mut auts = 0u64;
    for p in (0..v).permutations(v) {
        let key = relabel(&p, labels, edges, marks);
        if root.is_none_or(|r| p[r] == r) && key == own {
            auts += 1;
        }
        if root.is_none_or(|r| p[r] == 0) && best.as_ref().is_none_or(|b| &key < b) {
            best = Some(key);
        }
    }
    (best.expect("at least one permutation"), auts)
}

/// Compositions of `d` into `k` positive parts.
fn compositions(d: u32, k: usize) -> Vec<Vec<u32>> {
    if k == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=d.saturating_sub(k as u32 - 1) {
        for mut rest in compositions(d - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All maps `[len] → [base]`, in lexicographic order.
fn all_maps(len: usize, base: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(len)];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..base).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

/// Enumerate one representative per isomorphism class of the requested
/// family, in canonical order.
pub fn enumerate(space: &GkmSpace, d: u32, n_marks: usize, family: GraphFamily) -> Vec<GraphClass> {
    let mut classes: BTreeMap<Key, u64> = BTreeMap::new();
    let n = space.n_fixed();
    for e in 1..=d as usize {
        let v = match family {
            GraphFamily::Trees | GraphFamily::RootedTrees => e + 1,
            GraphFamily::OneLoop => e,
        };
        if v < 2 {
            continue;
        }
        let pairs: Vec<(usize, usize)> = (0..v).tuple_combinations().collect();
        for shape in pairs.iter().copied().combinations_with_replacement(e) {
            let bare: Vec<(usize, usize, u32)> = shape.iter().map(|&(a, b)| (a, b, 0)).collect();
            if !is_connected(v, &bare) {
                continue;
            }
            for degs in compositions(d, e) {
                let edges: Vec<(usize, usize, u32)> = shape
                    .iter()
                    .zip(&degs)
                    .map(|(&(a, b), &dd)| (a, b, dd))
                    .collect();
                for labels in all_maps(v, n) {
                    if edges
                        .iter()
                        .any(|&(a, b, _)| !space.adjacent(labels[a], labels[b]))
                    {
                        continue;
                    }
                    let roots: Vec<Option<usize>> = match family {
                        GraphFamily::RootedTrees => (0..v).map(Some).collect(),
                        _ => vec![None],
                    };
                    for root in roots {
                        for marks in all_maps(n_marks, v) {
                            let (key, auts) = canonicalize(&labels, &edges, &marks, root);
                            classes.entry(key).or_insert(auts);
                        }
                    }
                }
            }
        }
    }
    classes
        .into_iter()
        .map(|((labels, edges, marks), vertex_aut)| {
            let v = labels.len();
            let root = (family == GraphFamily::RootedTrees).then_some(0);
            let mut genus = vec![0u8; v];
            if let Some(r) = root {
                genus[r] = 1;
            }
            let aut = vertex_aut * parallel_edge_factor(&edges);
            GraphClass {
                graph: DecoratedGraph {
                    labels,
                    genus,
                    edges,
                    marks,
                    root,
                },
                aut,
                vertex_aut,
            }
        })
        .collect()
}

/// Genus-zero decorated trees of degree `d` with `n_marks` marks.
pub fn enumerate_trees(space: &GkmSpace, d: u32, n_marks: usize) -> Vec<GraphClass> {
    enumerate(space, d, n_marks, GraphFamily::Trees)
}

/// Decorated rooted trees of degree `d` with `n_marks` marks.
pub fn enumerate_rooted_trees(space: &GkmSpace, d: u32, n_marks: usize) -> Vec<GraphClass> {
    enumerate(space, d, n_marks, GraphFamily::RootedTrees)
}

/// Decorated one-loop graphs of degree `d` with `n_marks` marks.
pub fn enumerate_one_loop(space: &GkmSpace, d: u32, n_marks: usize) -> Vec<GraphClass> {
    enumerate(space, d, n_marks, GraphFamily::OneLoop)
}

/// JSON adjacency dump of graph classes (for debugging).
pub fn graphs_to_json(classes: &[GraphClass]) -> String {
    serde_json::to_string_pretty(classes).expect("plain data serializes")
}

/// A star: root fixed point, multiset of `(target, degree)` edges (sorted)
/// and the number of marks at the root.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DecoratedStar {
    /// Root fixed point `i`.
    pub root: usize,
    /// `(j_s, d_s)` for `s = 1..r`, sorted.
    pub edges: Vec<(usize, u32)>,
    /// Number of marks `|J|` at the root.
    pub marks: usize,
}

impl DecoratedStar {
    /// Build a star, sorting its edges.
    pub fn new(root: usize, mut edges: Vec<(usize, u32)>, marks: usize) -> Self {
        edges.sort_unstable();
        DecoratedStar { root, edges, marks }
    }

    /// Number of edges `r`.
    pub fn r(&self) -> usize {
        self.edges.len()
    }

    /// Total degree.
    pub fn degree(&self) -> u32 {
        self.edges.iter().map(|e| e.1).sum()
    }

    /// All degrees one and all targets distinct.
    pub fn is_simply_decorated(&self) -> bool {
        self.edges.iter().all(|e| e.1 == 1) && self.edges.iter().map(|e| e.0).all_unique()
    }

    /// Weight class of edge `s`: two edges have equal `ω` exactly when their
    /// classes are equal.
    pub fn class(&self, s: usize) -> (usize, u32) {
        self.edges[s]
    }

    /// Symmetry factor `Π (multiplicity)!` of repeated edges.
    pub fn aut(&self) -> u64 {
        self.edges
            .iter()
            .counts()
            .values()
            .map(|&c| factorial_u64(c))
            .product()
    }
}

/// All stars of total degree `d` at every root, edges up to reordering.
pub fn star_configs(space: &GkmSpace, d: u32, n_marks: usize) -> Vec<DecoratedStar> {
    fn rec(
        items: &[(usize, u32)],
        start: usize,
        left: u32,
        cur: &mut Vec<(usize, u32)>,
        out: &mut Vec<Vec<(usize, u32)>>,
    ) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for (idx, &(j, dd)) in items.iter().enumerate().skip(start) {
            if dd <= left {
                cur.push((j, dd));
                rec(items, idx, left - dd, cur, out);
                cur.pop();
            }
        }
    }
    let mut stars = Vec::new();
    for i in 0..space.n_fixed() {
        let items: Vec<(usize, u32)> = space
            .neighbors(i)
            .iter()
            .flat_map(|&j| (1..=d).map(move |dd| (j, dd)))
            .collect();
        let mut found = Vec::new();
        rec(&items, 0, d, &mut Vec::new(), &mut found);
        stars.extend(found.into_iter().map(|e| DecoratedStar::new(i, e, n_marks)));
    }
    stars.sort();
    stars
}

/// An ordered sequence of `m` blocks partitioning a finite set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ColoredPartition {
    /// Blocks `I_(1) .. I_(m)`, each sorted.
    pub blocks: Vec<Vec<usize>>,
}

impl ColoredPartition {
    /// Number of colors `m`.
    pub fn m(&self) -> usize {
        self.blocks.len()
    }
}

/// `𝒜_m(S)` (all blocks nonempty) or, with `allow_empty`, `𝒜⁰_m(S)`.
pub fn colored_partitions(set: &[usize], m: usize, allow_empty: bool) -> Vec<ColoredPartition> {
    assert!(m >= 1, "colored partitions need m >= 1");
    all_maps(set.len(), m)
        .into_iter()
        .filter_map(|assign| {
            let mut blocks = vec![Vec::new(); m];
            for (&x, &b) in set.iter().zip(&assign) {
                blocks[b].push(x);
            }
            (allow_empty || blocks.iter().all(|b| !b.is_empty()))
                .then_some(ColoredPartition { blocks })
        })
        .collect()
}

/// One element of the refined index set: colored partitions `I` of the
/// edges and `K` of the unsplit marks, the block sets `U` (the distinguished
/// common-weight singletons) and `V` (the other singletons), and the marks
/// `J'` split off.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RefinedTuple {
    /// Number of colors.
    pub m: usize,
    /// Partition of the edge indices `0..r`.
    pub i: ColoredPartition,
    /// Partition (blocks may be empty) of the marks in `J - J'`.
    pub k: ColoredPartition,
    /// Blocks whose single edge carries the common weight.
    pub u: Vec<usize>,
    /// The remaining singleton blocks.
    pub v: Vec<usize>,
    /// Marks split off.
    pub j_prime: Vec<usize>,
}

impl RefinedTuple {
    /// Edge indices lying in the `U` blocks.
    pub fn u_edges(&self) -> Vec<usize> {
        self.u.iter().map(|&s| self.i.blocks[s][0]).collect()
    }
}

/// All refined tuples of a star for a given split-off mark set `J'`: every
/// `m`, every `I ∈ 𝒜_m([r])` and `K ∈ 𝒜⁰_m(J - J')`, and every weight class
/// among the singleton mark-free blocks chosen as `U` (so `U ≠ ∅`).
pub fn refined_tuples(star: &DecoratedStar, j_prime: &[usize]) -> Vec<RefinedTuple> {
    let r = star.r();
    let edges: Vec<usize> = (0..r).collect();
    let rest: Vec<usize> = (0..star.marks).filter(|j| !j_prime.contains(j)).collect();
    let mut out = Vec::new();
    for m in 1..=r {
        for i in colored_partitions(&edges, m, false) {
            for k in colored_partitions(&rest, m, true) {
                let singles: Vec<usize> = (0..m)
                    .filter(|&s| i.blocks[s].len() == 1 && k.blocks[s].is_empty())
                    .collect();
                let classes: Vec<(usize, u32)> = singles
                    .iter()
                    .map(|&s| star.class(i.blocks[s][0]))
                    .unique()
                    .collect();
                for c in classes {
                    let (u, v): (Vec<usize>, Vec<usize>) = singles
                        .iter()
                        .partition(|&&s| star.class(i.blocks[s][0]) == c);
                    out.push(RefinedTuple {
                        m,
                        i: i.clone(),
                        k: k.clone(),
                        u,
                        v,
                        j_prime: j_prime.to_vec(),
                    });
                }
            }
        }
    }
    out
}

/// All subsets of `0..n` as (sorted) index lists, in mask order.
pub fn subsets(n: usize) -> Vec<Vec<usize>> {
    (0..1usize << n)
        .map(|mask| (0..n).filter(|t| mask >> t & 1 == 1).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::q;
    use crate::gkm::{projective_space, Specialization};

    fn pn(n: usize) -> GkmSpace {
        let alpha = [3, -1, 8, -12, 25].iter().take(n).map(|&x| q(x)).collect();
        projective_space(n, &Specialization { alpha, seed: 0 }).unwrap()
    }

    #[test]
    fn tree_counts_on_the_line() {
        let p1 = pn(2);
        let one = enumerate_rooted_trees(&p1, 1, 0);
        assert_eq!(one.len(), 2);
        assert!(one.iter().all(|c| c.graph.edges.len() == 1 && c.aut == 1));
        let two = enumerate_rooted_trees(&p1, 2, 0);
        let double = two
            .iter()
            .find(|c| c.graph.labels == vec![0, 1, 1] && c.graph.edges.len() == 2)
            .expect("root at P1 with two degree-one edges");
        assert_eq!(double.aut, 2);
        assert_eq!(two.len(), 6);
    }

    #[test]
    fn one_loop_on_the_line() {
        let p1 = pn(2);
        assert!(enumerate_one_loop(&p1, 1, 0).is_empty());
        let two = enumerate_one_loop(&p1, 2, 0);
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].aut, 2);
        let p2 = pn(3);
        let loops = enumerate_one_loop(&p2, 2, 0);
        assert_eq!(loops.len(), 3);
        assert!(loops.iter().all(|c| c.graph.n_vertices() == 2));
    }

    #[test]
    fn emitted_graphs_are_valid() {
        let p2 = pn(3);
        for d in 1..=3 {
            for c in enumerate_trees(&p2, d, 1) {
                assert!(c.graph.validate(0, d));
            }
            for c in enumerate_rooted_trees(&p2, d, 1) {
                assert!(c.graph.validate(1, d));
            }
            for c in enumerate_one_loop(&p2, d, 1) {
                assert!(c.graph.validate(1, d));
            }
        }
    }

    #[test]
    fn star_examples() {
        let p1 = pn(2);
        let s: Vec<_> = star_configs(&p1, 2, 0)
            .into_iter()
            .filter(|s| s.root == 0)
            .collect();
        assert_eq!(
            s,
            vec![
                DecoratedStar::new(0, vec![(1, 1), (1, 1)], 0),
                DecoratedStar::new(0, vec![(1, 2)], 0)
            ]
        );
        let p2 = pn(3);
        assert_eq!(
            star_configs(&p2, 2, 0)
                .iter()
                .filter(|s| s.root == 0)
                .count(),
            5
        );
        assert!(DecoratedStar::new(0, vec![(1, 1), (2, 1)], 0).is_simply_decorated());
        assert!(!DecoratedStar::new(0, vec![(1, 2)], 0).is_simply_decorated());
    }

    #[test]
    fn refined_tuple_counts() {
        assert_eq!(
            refined_tuples(&DecoratedStar::new(0, vec![(1, 1), (1, 1)], 0), &[]).len(),
            2
        );
        assert_eq!(
            refined_tuples(&DecoratedStar::new(0, vec![(1, 1), (2, 1)], 0), &[]).len(),
            4
        );
        let one = refined_tuples(&DecoratedStar::new(0, vec![(1, 3)], 0), &[]);
        assert_eq!(one.len(), 1);
        assert_eq!(
            (one[0].m, one[0].u.clone(), one[0].v.clone()),
            (1, vec![0], vec![])
        );
    }

    #[test]
    fn colored_partition_examples() {
        assert_eq!(colored_partitions(&[0, 1], 2, false).len(), 2);
        assert_eq!(colored_partitions(&[0, 1], 1, false).len(), 1);
        assert_eq!(colored_partitions(&[0, 1, 2], 2, false).len(), 6);
        assert_eq!(colored_partitions(&[], 2, true).len(), 1);
    }
}
