use crate::bits::VertexSet;
use crate::error::{Error, Result};
use crate::search::{Budget, SearchResult};
use serde::{Deserialize, Serialize};

/// Simple undirected graph on dense vertex ids `0..n`.
///
/// Adjacency is stored as fixed-width bit rows (one row per vertex), so
/// neighbourhood unions and intersections are word-parallel. Graphs are
/// immutable after construction by convention: every algorithm in this crate
/// takes `&Graph` and values are safe to share across threads.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    row_words: usize,
    rows: Vec<u64>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        let row_words = n.div_ceil(64).max(1);
        Graph { n, row_words, rows: vec![0; row_words * n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        let mut g = Graph::new(n);
        for v in 0..n {
            g.add_edge(v, (v + 1) % n);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n);
        for v in 1..n {
            g.add_edge(v - 1, v);
        }
        g
    }

    /// Disjoint union of complete graphs with the given orders.
    pub fn disjoint_cliques(sizes: &[usize]) -> Self {
        let n: usize = sizes.iter().sum();
        let mut g = Graph::new(n);
        let mut base = 0;
        for &s in sizes {
            for u in 0..s {
                for v in (u + 1)..s {
                    g.add_edge(base + u, base + v);
                }
            }
            base += s;
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange(v, self.n))
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.try_add_edge(u, v).expect("invalid edge");
    }

    pub fn try_add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.rows[u * self.row_words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.row_words + u / 64] |= 1 << (u % 64);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        if u < self.n && v < self.n && u != v {
            self.rows[u * self.row_words + v / 64] &= !(1 << (v % 64));
            self.rows[v * self.row_words + u / 64] &= !(1 << (u % 64));
        }
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        debug_assert!(u < self.n && v < self.n);
        self.rows[u * self.row_words + v / 64] & (1 << (v % 64)) != 0
    }

    #[inline]
    pub(crate) fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.row_words..(v + 1) * self.row_words]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        let mut s = VertexSet::new(self.n);
        s.or_word_slice(self.row(v));
        s
    }

    pub fn neighbor_ids(&self, v: usize) -> Vec<usize> {
        self.neighbors(v).to_vec()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.neighbors(u).iter() {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// External neighbourhood: vertices outside `a` with a neighbour in `a`.
    pub fn external_neighborhood(&self, a: &VertexSet) -> Result<VertexSet> {
        if a.universe() != self.n {
            return Err(Error::invalid(format!(
                "set universe {} does not match graph order {}",
                a.universe(),
                self.n
            )));
        }
        let mut out = VertexSet::new(self.n);
        for v in a.iter() {
            out.or_word_slice(self.row(v));
        }
        out.subtract(a);
        Ok(out)
    }

    /// Edge-complement; an involution that preserves the vertex count.
    pub fn complement(&self) -> Graph {
        let mut g = Graph::new(self.n);
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Induced subgraph on `keep`, together with the map from new ids back to
    /// the ids of `self`.
    pub fn induced(&self, keep: &VertexSet) -> (Graph, Vec<usize>) {
        let ids: Vec<usize> = keep.iter().collect();
        let mut g = Graph::new(ids.len());
        for (i, &u) in ids.iter().enumerate() {
            for (j, &v) in ids.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        (g, ids)
    }

    /// Length of a shortest `u`-`v` path; `None` when unreachable.
    pub fn distance(&self, u: usize, v: usize) -> Result<Option<usize>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Ok(Some(0));
        }
        let dist = self.bfs_distances(u, None);
        Ok(dist[v].map(|d| d as usize))
    }

    /// BFS distances from `src`, optionally confined to vertices in `within`.
    pub(crate) fn bfs_distances(&self, src: usize, within: Option<&VertexSet>) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n];
        if let Some(w) = within {
            if !w.contains(src) {
                return dist;
            }
        }
        dist[src] = Some(0);
        let mut frontier = vec![src];
        let mut d = 0u32;
        while !frontier.is_empty() {
            d += 1;
            let mut next = Vec::new();
            for &x in &frontier {
                for y in self.neighbors(x).iter() {
                    if dist[y].is_none() && within.is_none_or(|w| w.contains(y)) {
                        dist[y] = Some(d);
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        dist
    }

    /// Connected components as a partition of the vertex set.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::new(self.n);
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen.contains(s) {
                continue;
            }
            let mut comp = VertexSet::new(self.n);
            comp.insert(s);
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for y in self.neighbors(x).iter() {
                    if !comp.contains(y) {
                        comp.insert(y);
                        stack.push(y);
                    }
                }
            }
            seen.union_with(&comp);
            out.push(comp);
        }
        out
    }

    /// Components of the subgraph induced on `within` (host vertex ids).
    pub fn components_within(&self, within: &VertexSet) -> Vec<VertexSet> {
        let mut seen = VertexSet::new(self.n);
        let mut out = Vec::new();
        for s in within.iter() {
            if seen.contains(s) {
                continue;
            }
            let mut comp = VertexSet::new(self.n);
            comp.insert(s);
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                let mut nb = self.neighbors(x);
                nb.intersect_with(within);
                for y in nb.iter() {
                    if !comp.contains(y) {
                        comp.insert(y);
                        stack.push(y);
                    }
                }
            }
            seen.union_with(&comp);
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Searches for a cycle of length exactly `len`.
    ///
    /// DFS over candidate cycles rooted at their minimum vertex, pruned by
    /// distance-to-root and component size, counted against `budget` nodes.
    /// `NoneFound` is exact: it is only reported when the search completed.
    pub fn find_cycle_of_length(&self, len: usize, budget: &mut Budget) -> SearchResult<Cycle> {
        assert!(len >= 3, "cycles have length at least 3");
        if self.n < len {
            return SearchResult::NoneFound;
        }
        for comp in self.components() {
            if comp.len() < len {
                continue;
            }
            let verts: Vec<usize> = comp.iter().collect();
            for &root in &verts {
                // Cycles are canonically rooted at their minimum vertex, so
                // only vertices >= root may appear.
                let dist = self.bfs_distances(root, Some(&comp));
                let mut path = vec![root];
                let mut on_path = VertexSet::new(self.n);
                on_path.insert(root);
                match self.cycle_dfs(root, len, &dist, &mut path, &mut on_path, budget) {
                    SearchResult::Found(c) => return SearchResult::Found(c),
                    SearchResult::BudgetExhausted => return SearchResult::BudgetExhausted,
                    SearchResult::NoneFound => {}
                }
            }
        }
        SearchResult::NoneFound
    }

    fn cycle_dfs(
        &self,
        root: usize,
        len: usize,
        dist_root: &[Option<u32>],
        path: &mut Vec<usize>,
        on_path: &mut VertexSet,
        budget: &mut Budget,
    ) -> SearchResult<Cycle> {
        if !budget.spend(1) {
            return SearchResult::BudgetExhausted;
        }
        let cur = *path.last().unwrap();
        let remaining = len - path.len();
        if remaining == 0 {
            if self.has_edge(cur, root) {
                return SearchResult::Found(Cycle { verts: path.clone() });
            }
            return SearchResult::NoneFound;
        }
        for y in self.neighbors(cur).iter() {
            if y <= root || on_path.contains(y) {
                continue;
            }
            // Must still be able to get back to the root in time.
            match dist_root[y] {
                Some(d) if (d as usize) <= remaining => {}
                _ => continue,
            }
            path.push(y);
            on_path.insert(y);
            match self.cycle_dfs(root, len, dist_root, path, on_path, budget) {
                SearchResult::NoneFound => {}
                other => return other,
            }
            path.pop();
            on_path.remove(y);
        }
        SearchResult::NoneFound
    }

    pub fn is_bipartite(&self) -> bool {
        let mut color = vec![None; self.n];
        for s in 0..self.n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                let cx = color[x].unwrap();
                for y in self.neighbors(x).iter() {
                    match color[y] {
                        None => {
                            color[y] = Some(!cx);
                            stack.push(y);
                        }
                        Some(cy) if cy == cx => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n, self.edge_count())
    }
}

// Graphs serialize to the JSON wire form {"n": .., "edges": [[u,v],..]} with
// edges sorted, matching the external interface.
impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            n: usize,
            edges: Vec<(usize, usize)>,
        }
        Repr { n: self.n, edges: self.edges() }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            n: usize,
            edges: Vec<(usize, usize)>,
        }
        let repr = Repr::deserialize(de)?;
        Graph::from_edges(repr.n, &repr.edges).map_err(serde::de::Error::custom)
    }
}

/// Path as an ordered vertex list; length is the edge count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path {
    verts: Vec<usize>,
}

impl Path {
    pub fn new(g: &Graph, verts: Vec<usize>) -> Result<Self> {
        if verts.is_empty() {
            return Err(Error::invalid("a path needs at least one vertex"));
        }
        let mut seen = VertexSet::new(g.vertex_count());
        for &v in &verts {
            g.check_vertex(v)?;
            if seen.contains(v) {
                return Err(Error::invalid(format!("repeated vertex {} in path", v)));
            }
            seen.insert(v);
        }
        for w in verts.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return Err(Error::invalid(format!("missing edge {}-{}", w[0], w[1])));
            }
        }
        Ok(Path { verts })
    }

    pub(crate) fn from_vec_unchecked(verts: Vec<usize>) -> Self {
        Path { verts }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.verts
    }

    /// Edge count.
    pub fn len(&self) -> usize {
        self.verts.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> usize {
        self.verts[0]
    }

    pub fn last(&self) -> usize {
        *self.verts.last().unwrap()
    }

    pub fn reversed(&self) -> Path {
        let mut v = self.verts.clone();
        v.reverse();
        Path { verts: v }
    }

    pub fn vertex_set(&self, universe: usize) -> VertexSet {
        VertexSet::from_iter_n(universe, self.verts.iter().copied())
    }
}

/// Cycle as an ordered vertex list; the first vertex is the successor of the
/// last, and the length equals the vertex count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cycle {
    verts: Vec<usize>,
}

impl Cycle {
    pub fn new(g: &Graph, verts: Vec<usize>) -> Result<Self> {
        if verts.len() < 3 {
            return Err(Error::invalid("a cycle needs at least three vertices"));
        }
        let mut seen = VertexSet::new(g.vertex_count());
        for &v in &verts {
            g.check_vertex(v)?;
            if seen.contains(v) {
                return Err(Error::invalid(format!("repeated vertex {} in cycle", v)));
            }
            seen.insert(v);
        }
        for i in 0..verts.len() {
            let u = verts[i];
            let v = verts[(i + 1) % verts.len()];
            if !g.has_edge(u, v) {
                return Err(Error::invalid(format!("missing edge {}-{}", u, v)));
            }
        }
        Ok(Cycle { verts })
    }

    pub(crate) fn from_vec_unchecked(verts: Vec<usize>) -> Self {
        Cycle { verts }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.verts
    }

    /// Edge count, equal to the vertex count.
    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: usize) -> bool {
        self.verts.contains(&v)
    }

    pub fn vertex_set(&self, universe: usize) -> VertexSet {
        VertexSet::from_iter_n(universe, self.verts.iter().copied())
    }

    /// Distance between two cycle vertices measured along the cycle.
    pub fn cycle_distance(&self, u: usize, v: usize) -> Option<usize> {
        let pu = self.verts.iter().position(|&x| x == u)?;
        let pv = self.verts.iter().position(|&x| x == v)?;
        let d = pu.abs_diff(pv);
        Some(d.min(self.verts.len() - d))
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        Cycle::new(g, self.verts.clone()).map(|_| ())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn external_neighborhood_complete() {
        let g = Graph::complete(4);
        let a = VertexSet::from_iter_n(4, [0]);
        let nb = g.external_neighborhood(&a).unwrap();
        assert_eq!(nb.to_vec(), vec![1, 2, 3]);
    }

    #[test]
    fn external_neighborhood_empty_set() {
        let g = Graph::cycle(5);
        let a = VertexSet::new(5);
        assert!(g.external_neighborhood(&a).unwrap().is_empty());
    }

    #[test]
    fn external_neighborhood_path_interior() {
        // P_4 path 0-1-2-3, a={1,2} -> {0,3}, checked against hand enumeration.
        let g = Graph::path(4);
        let a = VertexSet::from_iter_n(4, [1, 2]);
        assert_eq!(g.external_neighborhood(&a).unwrap().to_vec(), vec![0, 3]);
    }

    #[test]
    fn external_neighborhood_out_of_range() {
        let g = Graph::complete(3);
        let a = VertexSet::from_iter_n(5, [4]);
        assert!(g.external_neighborhood(&a).is_err());
    }

    #[test]
    fn complement_of_complete_is_empty() {
        let g = Graph::complete(5).complement();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn complement_involution() {
        let g = Graph::from_edges(6, &[(0, 1), (2, 3), (1, 4)]).unwrap();
        assert_eq!(g.complement().complement(), g);
    }

    #[test]
    fn complement_of_two_cliques_is_complete_bipartite() {
        let g = Graph::disjoint_cliques(&[4, 4]).complement();
        // K_{4,4}: every cross pair adjacent, no edges within sides.
        for u in 0..4 {
            for v in 4..8 {
                assert!(g.has_edge(u, v));
            }
        }
        for u in 0..4 {
            for v in (u + 1)..4 {
                assert!(!g.has_edge(u, v));
                assert!(!g.has_edge(u + 4, v + 4));
            }
        }
    }

    #[test]
    fn distance_cases() {
        let g = Graph::cycle(6);
        assert_eq!(g.distance(0, 3).unwrap(), Some(3));
        assert_eq!(g.distance(2, 2).unwrap(), Some(0));
        let h = Graph::disjoint_cliques(&[3, 3]);
        assert_eq!(h.distance(0, 4).unwrap(), None);
        assert!(h.distance(0, 99).is_err());
    }

    #[test]
    fn components_cases() {
        assert_eq!(Graph::cycle(5).components().len(), 1);
        assert_eq!(Graph::new(5).components().len(), 5);
        let comps = Graph::disjoint_cliques(&[3, 3]).components();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.len() == 3));
    }

    #[test]
    fn find_cycle_in_k5() {
        let g = Graph::complete(5);
        let mut b = Budget::unlimited();
        let c = g.find_cycle_of_length(5, &mut b).found().unwrap();
        assert_eq!(c.len(), 5);
        c.validate(&g).unwrap();
    }

    #[test]
    fn no_odd_cycle_in_even_cycle() {
        let g = Graph::cycle(6);
        let mut b = Budget::unlimited();
        assert!(g.find_cycle_of_length(5, &mut b).is_none_found());
    }

    #[test]
    fn budget_exhaustion_reported() {
        let g = Graph::complete(12);
        let mut b = Budget::new(3);
        assert_eq!(g.find_cycle_of_length(12, &mut b), SearchResult::BudgetExhausted);
    }
}
