//! Explicit Hata graphs for feasible levels: connectivity, cut vertices,
//! the tail statistic chi, and essential cut vertices. This module is the
//! ground truth the window automaton is checked against.
//!
//! Vertices are the level-n words in canonical order; edges join words
//! whose cells intersect. Edge enumeration goes through a lattice index on
//! grid positions, so only the at most eight neighbor squares of each
//! vertex are ever inspected.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::adjacency::neighbor_table;
use crate::gsc::{CellWord, Digit, Direction, GscSpec};

/// Default cap on the number of vertices of an explicit graph.
pub const DEFAULT_VERTEX_CAP: u64 = 2_000_000;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum HataError {
    #[error("LevelTooLarge: |D|^{level} = {cells} exceeds the cap of {cap} vertices")]
    LevelTooLarge { level: u32, cells: u128, cap: u64 },
    #[error("BadLevel: level must be at least 1")]
    BadLevel,
    #[error("DisconnectedGraph: this statistic needs a connected graph")]
    DisconnectedGraph,
}

/// An explicit Hata graph.
#[derive(Clone, Debug)]
pub struct HataGraph {
    level: u32,
    digit_count: usize,
    adj: Vec<Vec<u32>>,
    edge_count: u64,
    digits: Vec<Digit>,
}

/// A cut vertex together with the component sizes its removal leaves and the
/// essential flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutVertexReport {
    pub vertex: CellWord,
    /// Sizes of the components of the graph minus the vertex, descending.
    pub component_sizes: Vec<u64>,
    pub essential: bool,
}

/// The two tail thresholds of a level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LongTail {
    pub chi: u64,
    /// chi >= |D|^(n-1) - 1
    pub long_tail: bool,
    /// chi >= |D|^(n-1)
    pub strict: bool,
}

impl HataGraph {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    /// The word of a vertex id; ids enumerate words in canonical order with
    /// the first letter most significant.
    pub fn word_of(&self, v: usize) -> CellWord {
        let mut letters = vec![self.digits[0]; self.level as usize];
        let mut c = v;
        for slot in letters.iter_mut().rev() {
            *slot = self.digits[c % self.digit_count];
            c /= self.digit_count;
        }
        CellWord::new(letters)
    }

    /// The vertex id of a word of the graph's level.
    pub fn vertex_of(&self, w: &CellWord) -> Option<usize> {
        if w.level() != self.level as usize {
            return None;
        }
        let mut id = 0usize;
        for d in w.letters() {
            let k = self.digits.binary_search(d).ok()?;
            id = id * self.digit_count + k;
        }
        Some(id)
    }

    /// Component label per vertex, labels assigned in first-seen order.
    pub fn component_labels(&self) -> Vec<u32> {
        let mut label = vec![u32::MAX; self.adj.len()];
        let mut next = 0;
        for start in 0..self.adj.len() {
            if label[start] != u32::MAX {
                continue;
            }
            let mut stack = vec![start as u32];
            label[start] = next;
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v as usize] {
                    if label[w as usize] == u32::MAX {
                        label[w as usize] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.component_labels().iter().all(|&l| l == 0)
    }

    /// Articulation analysis: for each cut vertex, the sizes of the
    /// components its removal leaves, via one iterative depth-first pass.
    pub fn cut_vertex_analysis(&self) -> CutAnalysis {
        let n = self.adj.len();
        let mut disc = vec![0u32; n];
        let mut low = vec![0u32; n];
        let mut parent = vec![u32::MAX; n];
        let mut subtree = vec![1u64; n];
        let mut tin = vec![0u32; n];
        let mut tout = vec![0u32; n];
        let mut visited = vec![false; n];
        // per vertex: children whose subtree separates when the vertex is removed
        let mut separated: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut component_root = vec![u32::MAX; n];
        let mut timer: u32 = 0;

        for root in 0..n {
            if visited[root] {
                continue;
            }
            let comp_size_slot = root as u32;
            // frames: (vertex, next neighbor index)
            let mut stack: Vec<(u32, usize)> = vec![(root as u32, 0)];
            visited[root] = true;
            disc[root] = timer;
            low[root] = timer;
            tin[root] = timer;
            timer += 1;
            component_root[root] = comp_size_slot;
            while let Some(&mut (v, ref mut idx)) = stack.last_mut() {
                let vu = v as usize;
                if *idx < self.adj[vu].len() {
                    let w = self.adj[vu][*idx];
                    *idx += 1;
                    let wu = w as usize;
                    if !visited[wu] {
                        visited[wu] = true;
                        parent[wu] = v;
                        disc[wu] = timer;
                        low[wu] = timer;
                        tin[wu] = timer;
                        timer += 1;
                        component_root[wu] = comp_size_slot;
                        stack.push((w, 0));
                    } else if w != parent[vu] {
                        low[vu] = low[vu].min(disc[wu]);
                    }
                } else {
                    stack.pop();
                    tout[vu] = timer;
                    if let Some(&(p, _)) = stack.last() {
                        let pu = p as usize;
                        subtree[pu] += subtree[vu];
                        low[pu] = low[pu].min(low[vu]);
                        if low[vu] >= disc[pu] {
                            separated[pu].push(v);
                        }
                    }
                }
            }
        }

        CutAnalysis {
            graph_size: n as u64,
            parent,
            subtree,
            tin,
            tout,
            separated,
            component_root,
        }
    }

    /// DOT rendering with stable vertex and edge order. Vertex names list the
    /// word's digits as `a,b|c,d|...`.
    pub fn to_dot(&self) -> String {
        let name = |v: usize| {
            let w = self.word_of(v);
            w.letters()
                .iter()
                .map(|d| format!("{},{}", d.x, d.y))
                .collect::<Vec<_>>()
                .join("|")
        };
        let mut out = String::new();
        writeln!(out, "graph hata_{} {{", self.level).unwrap();
        for v in 0..self.adj.len() {
            writeln!(out, "  \"{}\";", name(v)).unwrap();
        }
        for v in 0..self.adj.len() {
            for &w in &self.adj[v] {
                if (w as usize) > v {
                    writeln!(out, "  \"{}\" -- \"{}\";", name(v), name(w as usize)).unwrap();
                }
            }
        }
        writeln!(out, "}}").unwrap();
        out
    }

    /// One `u v` line per edge, vertices named as in the DOT output.
    pub fn to_edge_list(&self) -> String {
        let name = |v: usize| {
            let w = self.word_of(v);
            w.letters()
                .iter()
                .map(|d| format!("{},{}", d.x, d.y))
                .collect::<Vec<_>>()
                .join("|")
        };
        let mut out = String::new();
        for v in 0..self.adj.len() {
            for &w in &self.adj[v] {
                if (w as usize) > v {
                    writeln!(out, "{} {}", name(v), name(w as usize)).unwrap();
                }
            }
        }
        out
    }
}

/// Result of the articulation pass, with enough tree data to answer
/// per-cut-vertex component queries.
pub struct CutAnalysis {
    graph_size: u64,
    parent: Vec<u32>,
    subtree: Vec<u64>,
    tin: Vec<u32>,
    tout: Vec<u32>,
    separated: Vec<Vec<u32>>,
    component_root: Vec<u32>,
}

impl CutAnalysis {
    pub fn is_cut_vertex(&self, v: usize) -> bool {
        if self.parent[v] == u32::MAX {
            self.separated[v].len() >= 2
        } else {
            !self.separated[v].is_empty()
        }
    }

    pub fn cut_vertices(&self) -> Vec<usize> {
        (0..self.parent.len())
            .filter(|&v| self.is_cut_vertex(v))
            .collect()
    }

    /// Sizes of the components of the graph minus `v`, descending. Only the
    /// component containing `v` splits; all other components survive whole.
    pub fn component_sizes_without(&self, v: usize) -> Vec<u64> {
        let mut sizes = Vec::new();
        let mut separated_total = 0u64;
        for &c in &self.separated[v] {
            sizes.push(self.subtree[c as usize]);
            separated_total += self.subtree[c as usize];
        }
        let own_root = self.component_root[v] as usize;
        let own_component = self.subtree[own_root];
        let rest = own_component - 1 - separated_total;
        if rest > 0 {
            sizes.push(rest);
        }
        // components not containing v survive unchanged
        for r in 0..self.parent.len() {
            if self.component_root[r] as usize == r && r != own_root {
                sizes.push(self.subtree[r]);
            }
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        debug_assert_eq!(sizes.iter().sum::<u64>(), self.graph_size - 1);
        sizes
    }

    /// Component label of vertex `u` in the graph minus `v`: the separated
    /// child of `v` whose subtree holds `u`, or `None` for the remainder.
    /// `u` must differ from `v`.
    fn component_of_without(&self, v: usize, u: usize) -> Option<u32> {
        for &c in &self.separated[v] {
            let cu = c as usize;
            if self.tin[cu] <= self.tin[u] && self.tin[u] < self.tout[cu] {
                return Some(c);
            }
        }
        None
    }
}

/// Builds the explicit level-n graph.
pub fn build_hata(spec: &GscSpec, n: u32) -> Result<HataGraph, HataError> {
    build_hata_capped(spec, n, DEFAULT_VERTEX_CAP)
}

/// Builds the explicit level-n graph under a vertex cap.
pub fn build_hata_capped(spec: &GscSpec, n: u32, cap: u64) -> Result<HataGraph, HataError> {
    if n < 1 {
        return Err(HataError::BadLevel);
    }
    let cells = spec.cell_count(n).unwrap_or(u128::MAX);
    if cells > cap as u128 {
        return Err(HataError::LevelTooLarge {
            level: n,
            cells,
            cap,
        });
    }
    // lattice coordinates must fit u64
    if (spec.n_base() as u128)
        .checked_pow(n)
        .is_none_or(|side| side > u64::MAX as u128)
    {
        return Err(HataError::LevelTooLarge {
            level: n,
            cells,
            cap,
        });
    }
    let table = neighbor_table(spec);
    let count = cells as usize;
    let digit_count = spec.digit_count();
    let n_base = spec.n_base() as u64;

    // grid position of every vertex, plus the lattice index
    let mut grid = vec![(0u64, 0u64); count];
    let mut index: HashMap<(u64, u64), u32> = HashMap::with_capacity(count);
    for (v, slot) in grid.iter_mut().enumerate() {
        let mut x = 0u64;
        let mut y = 0u64;
        let mut c = v;
        // letters most significant first: walk the id digits in reverse
        let mut stack = [0usize; 64];
        for entry in stack.iter_mut().take(n as usize) {
            *entry = c % digit_count;
            c /= digit_count;
        }
        for k in (0..n as usize).rev() {
            let d = spec.digits()[stack[k]];
            x = x * n_base + d.x as u64;
            y = y * n_base + d.y as u64;
        }
        *slot = (x, y);
        index.insert((x, y), v as u32);
    }

    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); count];
    let mut edge_count = 0u64;
    let side = n_base.pow(n) - 1;
    for v in 0..count {
        let (x, y) = grid[v];
        for dir in Direction::ALL {
            if !table.touches(dir) {
                continue;
            }
            let (dx, dy) = dir.offset();
            let nx = x as i128 + dx as i128;
            let ny = y as i128 + dy as i128;
            if nx < 0 || ny < 0 || nx > side as i128 || ny > side as i128 {
                continue;
            }
            if let Some(&w) = index.get(&(nx as u64, ny as u64)) {
                adj[v].push(w);
                if (w as usize) > v {
                    edge_count += 1;
                }
            }
        }
        adj[v].sort_unstable();
    }

    Ok(HataGraph {
        level: n,
        digit_count,
        adj,
        edge_count,
        digits: spec.digits().to_vec(),
    })
}

/// The tail statistic: the largest second-largest component size over all
/// cut vertices, or 0 when the graph has none.
pub fn chi(graph: &HataGraph) -> Result<u64, HataError> {
    if !graph.is_connected() {
        return Err(HataError::DisconnectedGraph);
    }
    let analysis = graph.cut_vertex_analysis();
    let mut best = 0u64;
    for v in analysis.cut_vertices() {
        let sizes = analysis.component_sizes_without(v);
        if sizes.len() >= 2 {
            best = best.max(sizes[1]);
        }
    }
    Ok(best)
}

/// Chi together with both tail thresholds of the level.
pub fn long_tail(spec: &GscSpec, n: u32) -> Result<LongTail, HataError> {
    let graph = build_hata(spec, n)?;
    let chi = chi(&graph)?;
    let threshold = spec
        .cell_count(n - 1)
        .expect("cell count fits once the graph was built") as u64;
    Ok(LongTail {
        chi,
        long_tail: chi >= threshold.saturating_sub(1),
        strict: chi >= threshold,
    })
}

/// All cut vertices of the level-n graph with their component sizes and
/// essential flags, in canonical vertex order.
///
/// A cut vertex `i1...in` with `n >= 2` is essential when two whole level-1
/// subtrees, neither starting with `i1`, land in different components after
/// its removal. Each subtree is connected, so one representative per
/// subtree (its least word) suffices. Every cut vertex of the level-1 graph
/// counts as essential by convention.
pub fn essential_cut_vertices(spec: &GscSpec, n: u32) -> Result<Vec<CutVertexReport>, HataError> {
    let graph = build_hata(spec, n)?;
    essential_cut_vertices_of(spec, &graph)
}

/// As [`essential_cut_vertices`], on an already-built graph.
pub fn essential_cut_vertices_of(
    spec: &GscSpec,
    graph: &HataGraph,
) -> Result<Vec<CutVertexReport>, HataError> {
    let analysis = graph.cut_vertex_analysis();
    let n = graph.level;
    let digit_count = spec.digit_count();
    let subtree_size = digit_count.pow(n - 1);
    let mut reports = Vec::new();
    for v in analysis.cut_vertices() {
        let essential = if n == 1 {
            true
        } else {
            // representative of subtree w D^(n-1): its least word, at id
            // w_index * |D|^(n-1)
            let first_of_v = v / subtree_size;
            let mut labels: Vec<Option<u32>> = Vec::new();
            for w in 0..digit_count {
                if w == first_of_v {
                    continue;
                }
                labels.push(analysis.component_of_without(v, w * subtree_size));
            }
            labels.sort_unstable();
            labels.dedup();
            labels.len() >= 2
        };
        reports.push(CutVertexReport {
            vertex: graph.word_of(v),
            component_sizes: analysis.component_sizes_without(v),
            essential,
        });
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn sierpinski() -> GscSpec {
        let digits = (0..3)
            .flat_map(|x| (0..3).map(move |y| (x, y)))
            .filter(|&(x, y)| !(x == 1 && y == 1));
        GscSpec::new(3, digits).unwrap()
    }

    fn goodcp() -> GscSpec {
        let digits = (0..3)
            .flat_map(|x| (0..3).map(move |y| (x, y)))
            .filter(|&p| p != (1, 1) && p != (1, 2));
        GscSpec::new(3, digits).unwrap()
    }

    fn words(reports: &[CutVertexReport]) -> Vec<String> {
        reports.iter().map(|r| r.vertex.to_string()).collect()
    }

    #[test]
    fn sierpinski_level_1() {
        let g = build_hata(&sierpinski(), 1).unwrap();
        assert_eq!(g.vertex_count(), 8);
        assert!(g.is_connected());
        assert!(g.cut_vertex_analysis().cut_vertices().is_empty());
        // 8 side contacts plus 4 diagonal contacts across the hole
        assert_eq!(g.edge_count(), 12);
        assert_eq!(chi(&g).unwrap(), 0);
    }

    #[test]
    fn goodcp_level_1() {
        let spec = goodcp();
        let g = build_hata(&spec, 1).unwrap();
        assert_eq!(g.vertex_count(), 7);
        assert!(g.is_connected());
        assert_eq!(chi(&g).unwrap(), 3);
        let reports = essential_cut_vertices(&spec, 1).unwrap();
        // every level-1 cut vertex is essential by convention
        assert_eq!(words(&reports), vec!["(0,1)", "(1,0)", "(2,1)"]);
        assert!(reports.iter().all(|r| r.essential));
        let bridge = reports.iter().find(|r| r.vertex.to_string() == "(1,0)").unwrap();
        assert_eq!(bridge.component_sizes, vec![3, 3]);
    }

    #[test]
    fn goodcp_level_2_cut_vertices() {
        let spec = goodcp();
        let reports = essential_cut_vertices(&spec, 2).unwrap();
        assert_eq!(
            words(&reports),
            vec![
                "(0,2)(0,1)",
                "(0,2)(2,1)",
                "(1,0)(1,0)",
                "(2,2)(0,1)",
                "(2,2)(2,1)"
            ]
        );
        let essential: Vec<String> = reports
            .iter()
            .filter(|r| r.essential)
            .map(|r| r.vertex.to_string())
            .collect();
        assert_eq!(essential, vec!["(1,0)(1,0)"]);
        let bridge = reports.iter().find(|r| r.essential).unwrap();
        assert_eq!(bridge.component_sizes, vec![24, 24]);
    }

    #[test]
    fn goodcp_level_2_chi() {
        let g = build_hata(&goodcp(), 2).unwrap();
        assert_eq!(g.vertex_count(), 49);
        assert_eq!(chi(&g).unwrap(), 24);
    }

    #[test]
    fn sierpinski_level_2_has_no_cut_vertices() {
        let spec = sierpinski();
        assert!(essential_cut_vertices(&spec, 2).unwrap().is_empty());
        let g = build_hata(&spec, 2).unwrap();
        assert_eq!(chi(&g).unwrap(), 0);
    }

    #[test]
    fn long_tail_thresholds() {
        let lt = long_tail(&goodcp(), 2).unwrap();
        assert!(lt.long_tail && lt.strict);
        assert_eq!(lt.chi, 24);

        let lt_s = long_tail(&sierpinski(), 2).unwrap();
        assert!(!lt_s.long_tail && !lt_s.strict);

        let segment = GscSpec::new(3, [(0, 0), (1, 0), (2, 0)]).unwrap();
        let lt_seg = long_tail(&segment, 2).unwrap();
        assert!(lt_seg.long_tail && lt_seg.strict);
    }

    #[test]
    fn level_cap_is_enforced() {
        let spec = sierpinski();
        let err = build_hata_capped(&spec, 9, 1000).unwrap_err();
        assert!(matches!(err, HataError::LevelTooLarge { cap: 1000, .. }));
        assert!(matches!(build_hata(&spec, 0), Err(HataError::BadLevel)));
    }

    #[test]
    fn chi_requires_connected() {
        let spec = GscSpec::new(3, [(0, 0), (2, 2)]).unwrap();
        let g = build_hata(&spec, 1).unwrap();
        assert!(matches!(chi(&g), Err(HataError::DisconnectedGraph)));
    }

    #[test]
    fn subtree_embedding_is_isomorphic() {
        // the induced subgraph on any fixed-first-digit subtree matches the
        // graph one level down
        for spec in [sierpinski(), goodcp()] {
            for n in 2..=3u32 {
                let g = build_hata(&spec, n).unwrap();
                let h = build_hata(&spec, n - 1).unwrap();
                let sub = spec.digit_count().pow(n - 1);
                for w in 0..spec.digit_count() {
                    let base = w * sub;
                    for u in 0..sub {
                        let expect: Vec<u32> = h.neighbors(u).to_vec();
                        let got: Vec<u32> = g
                            .neighbors(base + u)
                            .iter()
                            .filter(|&&x| (x as usize) / sub == w)
                            .map(|&x| (x as usize - base) as u32)
                            .collect();
                        assert_eq!(got, expect);
                    }
                }
            }
        }
    }

    #[test]
    fn connected_base_implies_connected_levels() {
        for spec in [sierpinski(), goodcp(), GscSpec::new(3, [(0, 0), (1, 1), (2, 2)]).unwrap()] {
            for n in 1..=3 {
                assert!(build_hata(&spec, n).unwrap().is_connected());
            }
        }
    }

    #[test]
    fn component_sizes_match_slow_recount() {
        let mut rng = oracle::SplitMix64::new(2024);
        let mut specs = vec![sierpinski(), goodcp()];
        for _ in 0..6 {
            let n = 3 + rng.below(2) as u32;
            specs.push(oracle::random_connected_spec(&mut rng, n, 9));
        }
        for spec in specs {
            for n in 1..=2u32 {
                let g = build_hata(&spec, n).unwrap();
                let analysis = g.cut_vertex_analysis();
                let slow_cuts: Vec<usize> = (0..g.vertex_count())
                    .filter(|&v| oracle::slow_component_sizes_without(&g.adj, v).len() > 1)
                    .collect();
                assert_eq!(analysis.cut_vertices(), slow_cuts, "spec {spec:?} level {n}");
                for v in slow_cuts {
                    assert_eq!(
                        analysis.component_sizes_without(v),
                        oracle::slow_component_sizes_without(&g.adj, v)
                    );
                }
            }
        }
    }

    #[test]
    fn component_sizes_sum_to_all_but_one() {
        let spec = goodcp();
        let g = build_hata(&spec, 2).unwrap();
        let analysis = g.cut_vertex_analysis();
        for v in analysis.cut_vertices() {
            let sizes = analysis.component_sizes_without(v);
            assert_eq!(sizes.iter().sum::<u64>(), g.vertex_count() as u64 - 1);
        }
    }

    #[test]
    fn every_component_touches_the_removed_vertex() {
        // removing a cut vertex leaves only components that contain one of
        // its neighbors
        for spec in [sierpinski(), goodcp()] {
            for n in 1..=2u32 {
                let g = build_hata(&spec, n).unwrap();
                let analysis = g.cut_vertex_analysis();
                for v in analysis.cut_vertices() {
                    let sizes = analysis.component_sizes_without(v);
                    assert!(sizes.len() <= g.neighbors(v).len());
                }
            }
        }
    }

    #[test]
    fn dot_export_is_stable_and_complete() {
        let spec = goodcp();
        let g = build_hata(&spec, 1).unwrap();
        let dot = g.to_dot();
        assert_eq!(dot, g.to_dot());
        assert_eq!(dot.matches(";").count() as u64, 7 + g.edge_count());
        assert!(dot.starts_with("graph hata_1 {"));
        assert!(dot.contains("\"1,0\""));

        let s = build_hata(&sierpinski(), 1).unwrap();
        let dot_s = s.to_dot();
        assert_eq!(dot_s.matches(" -- ").count() as u64, s.edge_count());
        assert_eq!(s.edge_count(), 12);

        let edges = s.to_edge_list();
        assert_eq!(edges.lines().count() as u64, s.edge_count());
    }
}
