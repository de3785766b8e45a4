//! Finite quivers (directed multigraphs) with the vertex filtration that
//! witnesses rootedness.
//!
//! Declaration order is semantically load-bearing throughout the crate:
//! vertices and arrows keep the order in which they were declared, incident
//! arrow lists and path enumerations are reported in that order, and the
//! representation-level constructions index direct-sum summands by it.

use crate::error::Error;
use std::collections::HashSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub src: usize,
    pub tgt: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Into,
    OutOf,
}

/// The ascending chain V_0 ⊆ V_1 ⊆ … computed from the empty set by
/// repeatedly admitting every vertex all of whose incoming arrows start
/// inside the previous level.  `levels[k]` holds V_k as sorted vertex
/// indices; the chain is stored up to the first repeat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexFiltration {
    pub levels: Vec<Vec<usize>>,
    pub stabilized_at: usize,
}

impl VertexFiltration {
    pub fn reaches(&self, vertex_count: usize) -> bool {
        self.levels.last().map_or(vertex_count == 0, |l| l.len() == vertex_count)
    }

    /// Vertices in `levels[k]` but not `levels[k-1]`.
    pub fn new_at_level(&self, k: usize) -> Vec<usize> {
        let prev: HashSet<usize> =
            if k == 0 { HashSet::new() } else { self.levels[k - 1].iter().copied().collect() };
        self.levels[k].iter().copied().filter(|v| !prev.contains(v)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Rootedness {
    pub rooted: bool,
    pub filtration: VertexFiltration,
}

impl Quiver {
    pub fn new<S: Into<String>>(
        vertices: Vec<S>,
        arrows: Vec<(S, S, S)>,
    ) -> Result<Quiver, Error> {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for v in &vertices {
            if !seen.insert(v.clone()) {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let index = |name: &str| -> Result<usize, Error> {
            vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::UnknownVertex(name.to_string()))
        };
        let mut ids = HashSet::new();
        let mut built = Vec::new();
        for (id, src, tgt) in arrows {
            let id = id.into();
            if !ids.insert(id.clone()) {
                return Err(Error::DuplicateArrow(id));
            }
            built.push(Arrow { id, src: index(&src.into())?, tgt: index(&tgt.into())? });
        }
        Ok(Quiver { vertices, arrows: built })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_name(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize, Error> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn arrow_index(&self, id: &str) -> Result<usize, Error> {
        self.arrows
            .iter()
            .position(|a| a.id == id)
            .ok_or_else(|| Error::UnknownArrow(id.to_string()))
    }

    /// Same vertices and arrow ids, with every arrow reversed.
    pub fn opposite(&self) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow { id: a.id.clone(), src: a.tgt, tgt: a.src })
                .collect(),
        }
    }

    /// Arrow indices incident to `vertex` on the given side, in declaration
    /// order.  A loop shows up on both sides.
    pub fn incident_arrows(&self, vertex: usize, side: Side) -> Vec<usize> {
        self.arrows
            .iter()
            .enumerate()
            .filter(|(_, a)| match side {
                Side::Into => a.tgt == vertex,
                Side::OutOf => a.src == vertex,
            })
            .map(|(i, _)| i)
            .collect()
    }

    pub fn left_filtration(&self) -> VertexFiltration {
        let mut levels: Vec<Vec<usize>> = vec![Vec::new()];
        loop {
            let cur: HashSet<usize> = levels.last().unwrap().iter().copied().collect();
            let next: Vec<usize> = (0..self.vertices.len())
                .filter(|&i| {
                    self.arrows.iter().all(|a| a.tgt != i || cur.contains(&a.src))
                })
                .collect();
            if next.len() == cur.len() {
                break;
            }
            levels.push(next);
        }
        let stabilized_at = levels.len() - 1;
        VertexFiltration { levels, stabilized_at }
    }

    pub fn rootedness(&self, side: Side) -> Rootedness {
        let filtration = match side {
            Side::Into => self.left_filtration(),
            Side::OutOf => self.opposite().left_filtration(),
        };
        Rootedness { rooted: filtration.reaches(self.vertices.len()), filtration }
    }

    pub fn is_left_rooted(&self) -> bool {
        self.rootedness(Side::Into).rooted
    }

    pub fn is_right_rooted(&self) -> bool {
        self.rootedness(Side::OutOf).rooted
    }

    /// Acyclicity as witnessed by the filtration pair; for finite quivers this
    /// coincides with the absence of oriented cycles (the DFS cross-check
    /// lives in the test suites).
    pub fn is_acyclic(&self) -> bool {
        self.is_left_rooted() && self.is_right_rooted()
    }

    pub fn require_acyclic(&self) -> Result<(), Error> {
        if self.is_acyclic() {
            Ok(())
        } else {
            let left = self.left_filtration();
            let inside: HashSet<usize> = left.levels.last().unwrap().iter().copied().collect();
            let stalled: Vec<String> = (0..self.vertices.len())
                .filter(|v| !inside.contains(v))
                .map(|v| self.vertices[v].clone())
                .collect();
            Err(Error::CyclicQuiver(format!("filtration never admits {stalled:?}")))
        }
    }

    /// Vertex indices in an order where every arrow goes forward, breaking
    /// ties by declaration order.
    pub fn topological_order(&self) -> Result<Vec<usize>, Error> {
        self.require_acyclic()?;
        let mut indeg = vec![0usize; self.vertices.len()];
        for a in &self.arrows {
            indeg[a.tgt] += 1;
        }
        let mut placed = vec![false; self.vertices.len()];
        let mut order = Vec::with_capacity(self.vertices.len());
        while order.len() < self.vertices.len() {
            let next = (0..self.vertices.len())
                .find(|&v| !placed[v] && indeg[v] == 0)
                .expect("acyclic quiver always has a source among the rest");
            placed[next] = true;
            order.push(next);
            for a in &self.arrows {
                if a.src == next {
                    indeg[a.tgt] -= 1;
                }
            }
        }
        Ok(order)
    }

    /// All directed paths from `i` to `j` as arrow-index sequences, in
    /// lexicographic order with respect to arrow declaration order.  The
    /// trivial path is the empty sequence when `i == j`.
    pub fn enumerate_paths(&self, i: usize, j: usize) -> Result<Vec<Vec<usize>>, Error> {
        self.require_acyclic()?;
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.path_dfs(i, j, &mut prefix, &mut out);
        Ok(out)
    }

    fn path_dfs(&self, at: usize, goal: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if at == goal {
            out.push(prefix.clone());
            // acyclicity: no extension of a path at `goal` returns to `goal`
        }
        for (k, a) in self.arrows.iter().enumerate() {
            if a.src == at {
                prefix.push(k);
                self.path_dfs(a.tgt, goal, prefix, out);
                prefix.pop();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn demo() -> Quiver {
        // 1 → 3 ← 2, 3 → 4: the worked example used across the crate
        Quiver::new(
            vec!["1", "2", "3", "4"],
            vec![("a", "1", "3"), ("b", "2", "3"), ("c", "3", "4")],
        )
        .unwrap()
    }

    #[test]
    fn filtration_of_demo_quiver() {
        let f = demo().left_filtration();
        assert_eq!(f.levels, vec![vec![], vec![0, 1], vec![0, 1, 2], vec![0, 1, 2, 3]]);
        assert_eq!(f.stabilized_at, 3);
        assert!(f.reaches(4));
        assert_eq!(f.new_at_level(2), vec![2]);
    }

    #[test]
    fn loop_quiver_is_not_rooted() {
        let q = Quiver::new(vec!["v"], vec![("l", "v", "v")]).unwrap();
        let f = q.left_filtration();
        assert_eq!(f.levels, vec![Vec::<usize>::new()]);
        assert_eq!(f.stabilized_at, 0);
        assert!(!q.is_left_rooted());
        assert!(!q.is_right_rooted());
        assert!(q.require_acyclic().is_err());
    }

    #[test]
    fn arrowless_quiver_roots_in_one_step() {
        let q = Quiver::new(vec!["x", "y"], vec![]).unwrap();
        let f = q.left_filtration();
        assert_eq!(f.levels, vec![vec![], vec![0, 1]]);
        assert!(q.is_acyclic());
    }

    #[test]
    fn two_cycle_stalls_completely() {
        let q = Quiver::new(vec!["x", "y"], vec![("f", "x", "y"), ("g", "y", "x")]).unwrap();
        assert_eq!(q.left_filtration().levels, vec![Vec::<usize>::new()]);
        assert!(!q.is_left_rooted());
    }

    #[test]
    fn opposite_is_an_involution() {
        let q = demo();
        assert_eq!(q.opposite().opposite(), q);
        let op = q.opposite();
        assert_eq!(op.arrows()[0].src, 2);
        assert_eq!(op.arrows()[0].tgt, 0);
        assert_eq!(op.arrows()[0].id, "a");
    }

    #[test]
    fn incident_arrows_in_declaration_order() {
        let q = demo();
        assert_eq!(q.incident_arrows(2, Side::Into), vec![0, 1]);
        assert_eq!(q.incident_arrows(2, Side::OutOf), vec![2]);
        assert_eq!(q.incident_arrows(0, Side::Into), Vec::<usize>::new());
        let lp = Quiver::new(vec!["v"], vec![("l", "v", "v")]).unwrap();
        assert_eq!(lp.incident_arrows(0, Side::Into), vec![0]);
        assert_eq!(lp.incident_arrows(0, Side::OutOf), vec![0]);
    }

    #[test]
    fn paths_in_demo_quiver() {
        let q = demo();
        assert_eq!(q.enumerate_paths(0, 3).unwrap(), vec![vec![0, 2]]);
        assert_eq!(q.enumerate_paths(0, 0).unwrap(), vec![Vec::<usize>::new()]);
        assert_eq!(q.enumerate_paths(3, 0).unwrap(), Vec::<Vec<usize>>::new());
    }

    #[test]
    fn parallel_paths_enumerate_lexicographically() {
        let q = Quiver::new(
            vec!["s", "m", "t"],
            vec![("a1", "s", "m"), ("a2", "s", "m"), ("b", "m", "t"), ("d", "s", "t")],
        )
        .unwrap();
        // lexicographic in arrow indices: [a1 b] < [a2 b] < [d]
        assert_eq!(q.enumerate_paths(0, 2).unwrap(), vec![vec![0, 2], vec![1, 2], vec![3]]);
    }

    #[test]
    fn paths_reject_cycles() {
        let q = Quiver::new(vec!["v"], vec![("l", "v", "v")]).unwrap();
        assert!(matches!(q.enumerate_paths(0, 0), Err(Error::CyclicQuiver(_))));
    }

    #[test]
    fn topological_order_respects_arrows() {
        let q = demo();
        let ord = q.topological_order().unwrap();
        assert_eq!(ord, vec![0, 1, 2, 3]);
    }

    /// Independent oracle: three-color DFS over the declaration-order
    /// adjacency, entirely separate from the filtration computation.
    fn dfs_acyclic(q: &Quiver) -> bool {
        #[derive(Clone, Copy, PartialEq)]
        enum Color {
            White,
            Gray,
            Black,
        }
        fn visit(q: &Quiver, v: usize, color: &mut Vec<Color>) -> bool {
            color[v] = Color::Gray;
            for a in q.arrows() {
                if a.src == v {
                    match color[a.tgt] {
                        Color::Gray => return false,
                        Color::White => {
                            if !visit(q, a.tgt, color) {
                                return false;
                            }
                        }
                        Color::Black => {}
                    }
                }
            }
            color[v] = Color::Black;
            true
        }
        let mut color = vec![Color::White; q.vertex_count()];
        (0..q.vertex_count()).all(|v| color[v] != Color::White || visit(q, v, &mut color))
    }

    fn arb_quiver() -> impl Strategy<Value = Quiver> {
        (1usize..=5).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..=6).prop_map(move |pairs| {
                let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
                let arrows: Vec<(String, String, String)> = pairs
                    .iter()
                    .enumerate()
                    .map(|(k, &(s, t))| (format!("a{k}"), format!("v{s}"), format!("v{t}")))
                    .collect();
                Quiver::new(vertices, arrows).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rooted_both_sides_iff_dfs_acyclic(q in arb_quiver()) {
            prop_assert_eq!(q.is_left_rooted() && q.is_right_rooted(), dfs_acyclic(&q));
        }

        #[test]
        fn filtration_is_monotone_and_source_closed(q in arb_quiver()) {
            let f = q.left_filtration();
            for k in 1..f.levels.len() {
                let prev: std::collections::HashSet<usize> =
                    f.levels[k - 1].iter().copied().collect();
                prop_assert!(f.levels[k - 1].len() < f.levels[k].len());
                prop_assert!(f.levels[k - 1].iter().all(|v| f.levels[k].contains(v)));
                // every arrow into a level-k vertex starts in level k-1
                for &v in &f.levels[k] {
                    for a in q.arrows() {
                        if a.tgt == v {
                            prop_assert!(prev.contains(&a.src));
                        }
                    }
                }
            }
            prop_assert!(f.levels.len() <= q.vertex_count() + 1);
        }

        #[test]
        fn opposite_involution_and_mirrored_rootedness(q in arb_quiver()) {
            prop_assert_eq!(q.opposite().opposite(), q.clone());
            prop_assert_eq!(q.is_right_rooted(), q.opposite().is_left_rooted());
        }
    }
}
