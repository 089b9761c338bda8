//! The finite window automaton behind the cut-point decider.
//!
//! Deleting one nested cell per level, the complement at level k is a union
//! of cells whose components can only merge as the level grows, and merges
//! can only happen through the at most eight same-level neighbor cells of
//! the deleted cell (twelve for the multi-cell centers used by per-point
//! tests): every future cell is a subset of the current deleted cell, and a
//! component meets that cell exactly when it owns one of those neighbor
//! cells. A [`WindowState`] therefore records just the occupied neighbor
//! positions, their partition into components, a subtree flag per component
//! (does it contain a whole level-1 cell outside the deleted branch), and
//! saturating counters of components that have permanently departed. The
//! per-digit transition is deterministic and the state space is finite, so
//! reachability questions about arbitrarily deep levels become decidable.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::adjacency::{neighbor_table, NeighborTable};
use crate::gsc::{Digit, Direction, GscSpec};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum WindowError {
    #[error("InvalidDigit: {digit} is not a digit of this carpet")]
    InvalidDigit { digit: Digit },
    #[error("BadCenterShape: {0}")]
    BadCenterShape(String),
}

type Pos = (i8, i8);
type Pos32 = (i32, i32);

/// Abstract state of the deleted region's surroundings at some level.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct WindowState {
    /// Grid offsets of the deleted cells, bounding box translated to the
    /// origin. One cell for the essential-cut-vertex decision, up to four
    /// for per-point runs.
    centers: Vec<Pos>,
    /// Occupied neighbor positions with non-empty contact, sorted.
    window: Vec<Pos>,
    /// Component class per window position; ids numbered by first
    /// occurrence along the sorted window.
    block_of: Vec<u8>,
    /// Whether the block's component contains a whole level-1 cell from
    /// outside the deleted branch.
    block_subtree: Vec<bool>,
    /// Departed components that carry such a subtree; saturates at 2.
    frozen_with_subtree: u8,
    /// All departed components; saturates at 2.
    frozen_any: u8,
}

impl WindowState {
    pub fn window_len(&self) -> usize {
        self.window.len()
    }

    pub fn block_count(&self) -> usize {
        self.block_subtree.len()
    }

    pub fn blocks_with_subtree(&self) -> usize {
        self.block_subtree.iter().filter(|&&b| b).count()
    }

    pub fn frozen_with_subtree(&self) -> u8 {
        self.frozen_with_subtree
    }

    pub fn frozen_any(&self) -> u8 {
        self.frozen_any
    }

    /// Whether two whole level-1 subtrees already sit in distinct
    /// components: the separation test behind essential cut vertices.
    pub fn sep(&self) -> bool {
        let live = self.blocks_with_subtree();
        self.frozen_with_subtree >= 2
            || (self.frozen_with_subtree >= 1 && live >= 1)
            || live >= 2
    }

    /// Component count visible in the state (window blocks plus saturated
    /// frozen counter).
    pub fn component_count_saturating(&self) -> usize {
        self.block_count() + self.frozen_any as usize
    }
}

/// Outcome of one transition.
#[derive(Clone, Debug)]
pub struct StepOutcome {
    pub state: WindowState,
    /// Exact number of components that departed in this step.
    pub freezes: u32,
    pub freezes_with_subtree: u32,
    /// For each old center (in state order) a map from kept child digit to
    /// the index of the corresponding new center.
    pub center_map: Vec<BTreeMap<Digit, usize>>,
}

/// Window-automaton driver for one carpet; owns the neighbor table.
pub struct WindowEngine<'a> {
    spec: &'a GscSpec,
    table: NeighborTable,
}

fn chebyshev(a: Pos32, b: Pos32) -> i32 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

fn dir_between(from: Pos32, to: Pos32) -> Option<Direction> {
    Direction::from_offset(to.0 - from.0, to.1 - from.1)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins, keeping class ids deterministic
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

impl<'a> WindowEngine<'a> {
    pub fn new(spec: &'a GscSpec) -> Self {
        WindowEngine {
            spec,
            table: neighbor_table(spec),
        }
    }

    pub fn spec(&self) -> &GscSpec {
        self.spec
    }

    fn touches(&self, from: Pos32, to: Pos32) -> bool {
        match dir_between(from, to) {
            Some(dir) => self.table.touches(dir),
            None => false,
        }
    }

    /// State after deleting the level-1 cells in `centers` (distinct digits
    /// sharing a common point, so pairwise grid distance at most 1).
    pub fn initial(&self, centers: &[Digit]) -> Result<WindowState, WindowError> {
        if centers.is_empty() {
            return Err(WindowError::BadCenterShape("no center cells".into()));
        }
        let mut seen = BTreeSet::new();
        for &c in centers {
            if !self.spec.contains(c) {
                return Err(WindowError::InvalidDigit { digit: c });
            }
            if !seen.insert(c) {
                return Err(WindowError::BadCenterShape(format!(
                    "duplicate center cell {c}"
                )));
            }
        }
        let cpos: Vec<Pos32> = seen
            .iter()
            .map(|d| (d.x as i32, d.y as i32))
            .collect();
        for a in &cpos {
            for b in &cpos {
                if chebyshev(*a, *b) > 1 {
                    return Err(WindowError::BadCenterShape(
                        "center cells must share a point".into(),
                    ));
                }
            }
        }

        let outside: Vec<Pos32> = self
            .spec
            .digits()
            .iter()
            .filter(|d| !seen.contains(d))
            .map(|d| (d.x as i32, d.y as i32))
            .collect();
        // components of the level-1 graph minus the centers
        let mut label = vec![usize::MAX; outside.len()];
        let index: HashMap<Pos32, usize> =
            outside.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut next_label = 0;
        for start in 0..outside.len() {
            if label[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            label[start] = next_label;
            while let Some(v) = stack.pop() {
                let p = outside[v];
                for dir in Direction::ALL {
                    let (dx, dy) = dir.offset();
                    let q = (p.0 + dx, p.1 + dy);
                    if let Some(&w) = index.get(&q) {
                        if label[w] == usize::MAX && self.table.touches(dir) {
                            label[w] = next_label;
                            stack.push(w);
                        }
                    }
                }
            }
            next_label += 1;
        }

        let in_window = |p: Pos32| {
            cpos.iter()
                .any(|&c| chebyshev(p, c) == 1 && self.touches(p, c))
        };
        let mut window: Vec<(Pos32, usize)> = outside
            .iter()
            .enumerate()
            .filter(|&(_, &p)| in_window(p))
            .map(|(i, &p)| (p, label[i]))
            .collect();
        window.sort_unstable();

        let mut frozen_any = 0u32;
        for comp in 0..next_label {
            if !window.iter().any(|&(_, l)| l == comp) {
                // a component with no window presence never merges again;
                // level-1 components always carry whole level-1 cells
                frozen_any += 1;
            }
        }

        let origin = (
            cpos.iter().map(|c| c.0).min().unwrap(),
            cpos.iter().map(|c| c.1).min().unwrap(),
        );
        let state = assemble_state(
            cpos.iter().map(|&c| (c.0 - origin.0, c.1 - origin.1)).collect(),
            window
                .iter()
                .map(|&(p, l)| ((p.0 - origin.0, p.1 - origin.1), l))
                .collect(),
            |_| true,
            frozen_any.min(2) as u8,
            frozen_any.min(2) as u8,
        );
        check_window_bound(&state);
        Ok(state)
    }

    /// Deterministic successor: each old center keeps the child cells in
    /// `kept` (one per center for the essential decision, the cells still
    /// containing the point for per-point runs); all other children join
    /// the complement as new material.
    pub fn step(
        &self,
        s: &WindowState,
        kept: &[Vec<Digit>],
    ) -> Result<StepOutcome, WindowError> {
        assert_eq!(
            kept.len(),
            s.centers.len(),
            "one kept-children list per center"
        );
        let n = self.spec.n_base() as i32;
        let mut kept_sets: Vec<BTreeSet<Digit>> = Vec::with_capacity(kept.len());
        for (ci, list) in kept.iter().enumerate() {
            if list.is_empty() {
                return Err(WindowError::BadCenterShape(format!(
                    "center {ci} keeps no children"
                )));
            }
            let mut set = BTreeSet::new();
            for &d in list {
                if !self.spec.contains(d) {
                    return Err(WindowError::InvalidDigit { digit: d });
                }
                set.insert(d);
            }
            kept_sets.push(set);
        }

        let old_centers: Vec<Pos32> = s.centers.iter().map(|&(x, y)| (x as i32, y as i32)).collect();
        let center_at: HashMap<Pos32, usize> = old_centers
            .iter()
            .enumerate()
            .map(|(i, &p)| (p, i))
            .collect();
        let window_at: HashMap<Pos32, usize> = s
            .window
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| (((x as i32), (y as i32)), i))
            .collect();

        // new centers, in (center, digit) order
        let mut new_centers: Vec<Pos32> = Vec::new();
        let mut new_center_source: Vec<(usize, Digit)> = Vec::new();
        for (ci, set) in kept_sets.iter().enumerate() {
            let o = old_centers[ci];
            for &q in set {
                new_centers.push((o.0 * n + q.x as i32, o.1 * n + q.y as i32));
                new_center_source.push((ci, q));
            }
        }
        let new_center_set: BTreeSet<Pos32> = new_centers.iter().copied().collect();
        for a in &new_centers {
            for b in &new_centers {
                if chebyshev(*a, *b) > 1 {
                    return Err(WindowError::BadCenterShape(
                        "kept children drift apart".into(),
                    ));
                }
            }
        }

        // sibling cells: remaining children of the old centers
        let mut siblings: Vec<Pos32> = Vec::new();
        for (ci, set) in kept_sets.iter().enumerate() {
            let o = old_centers[ci];
            for &d in self.spec.digits() {
                if !set.contains(&d) {
                    siblings.push((o.0 * n + d.x as i32, o.1 * n + d.y as i32));
                }
            }
        }
        siblings.sort_unstable();
        let sib_at: HashMap<Pos32, usize> = siblings
            .iter()
            .enumerate()
            .map(|(i, &p)| (p, i))
            .collect();

        let block_count = s.block_count();
        let mut uf = UnionFind::new(block_count + siblings.len());

        // contacts of a sibling: other siblings, or children of old window
        // cells. Children of two distinct old window cells are never merged
        // here: if they touched, their parents already touched and so were
        // already in one block.
        for (si, &p) in siblings.iter().enumerate() {
            for dir in Direction::ALL {
                if !self.table.touches(dir) {
                    continue;
                }
                let (dx, dy) = dir.offset();
                let q = (p.0 + dx, p.1 + dy);
                if let Some(&sj) = sib_at.get(&q) {
                    uf.union(block_count + si, block_count + sj);
                    continue;
                }
                let parent = (q.0.div_euclid(n), q.1.div_euclid(n));
                if center_at.contains_key(&parent) {
                    continue; // a new center or a non-existent child slot
                }
                if let Some(&wi) = window_at.get(&parent) {
                    let child = Digit::new(
                        (q.0 - parent.0 * n) as u32,
                        (q.1 - parent.1 * n) as u32,
                    );
                    if self.spec.contains(child) {
                        uf.union(block_count + si, s.block_of[wi] as usize);
                    }
                }
            }
        }

        // the new window: cells adjacent to a new center with a real contact
        let mut new_window: Vec<(Pos32, usize)> = Vec::new();
        let mut candidates: BTreeSet<Pos32> = BTreeSet::new();
        for &nc in &new_centers {
            for dir in Direction::ALL {
                let (dx, dy) = dir.offset();
                let cand = (nc.0 + dx, nc.1 + dy);
                if !new_center_set.contains(&cand) {
                    candidates.insert(cand);
                }
            }
        }
        for cand in candidates {
            let node = if let Some(&si) = sib_at.get(&cand) {
                Some(block_count + si)
            } else {
                let parent = (cand.0.div_euclid(n), cand.1.div_euclid(n));
                if center_at.contains_key(&parent) {
                    None // a missing child slot of an old center
                } else if let Some(&wi) = window_at.get(&parent) {
                    let child = Digit::new(
                        (cand.0 - parent.0 * n) as u32,
                        (cand.1 - parent.1 * n) as u32,
                    );
                    if self.spec.contains(child) {
                        Some(s.block_of[wi] as usize)
                    } else {
                        None
                    }
                } else {
                    None // outside the old neighborhood: no possible contact
                }
            };
            let Some(node) = node else { continue };
            let contact = new_centers
                .iter()
                .any(|&nc| chebyshev(cand, nc) == 1 && self.touches(cand, nc));
            if contact {
                new_window.push((cand, node));
            }
        }
        new_window.sort_unstable();

        // classes and freezes
        let total = block_count + siblings.len();
        let mut class_subtree: HashMap<usize, bool> = HashMap::new();
        for node in 0..total {
            let root = uf.find(node);
            let flag = node < block_count && s.block_subtree[node];
            *class_subtree.entry(root).or_insert(false) |= flag;
        }
        let mut present: BTreeSet<usize> = BTreeSet::new();
        for &(_, node) in &new_window {
            present.insert(uf.find(node));
        }
        let mut freezes = 0u32;
        let mut freezes_with_subtree = 0u32;
        let mut roots: Vec<usize> = class_subtree.keys().copied().collect();
        roots.sort_unstable();
        for root in roots {
            if !present.contains(&root) {
                freezes += 1;
                if class_subtree[&root] {
                    freezes_with_subtree += 1;
                }
            }
        }

        // canonical translation to the new centers' bounding box
        let origin = (
            new_centers.iter().map(|c| c.0).min().unwrap(),
            new_centers.iter().map(|c| c.1).min().unwrap(),
        );
        let mut centers_rel: Vec<Pos32> = new_centers
            .iter()
            .map(|&c| (c.0 - origin.0, c.1 - origin.1))
            .collect();
        let window_rel: Vec<(Pos32, usize)> = new_window
            .iter()
            .map(|&(p, node)| ((p.0 - origin.0, p.1 - origin.1), uf.find(node)))
            .collect();

        let state = assemble_state(
            {
                let mut c = centers_rel.clone();
                c.sort_unstable();
                c
            },
            window_rel,
            |root| class_subtree[&root],
            saturate(s.frozen_any, freezes),
            saturate(s.frozen_with_subtree, freezes_with_subtree),
        );
        check_window_bound(&state);

        // map (old center, kept digit) to the canonical new center index
        centers_rel.sort_unstable();
        let canonical_index: HashMap<Pos32, usize> = centers_rel
            .iter()
            .enumerate()
            .map(|(i, &p)| (p, i))
            .collect();
        let mut center_map: Vec<BTreeMap<Digit, usize>> = vec![BTreeMap::new(); kept.len()];
        for (raw, &(ci, q)) in new_center_source.iter().enumerate() {
            let rel = (
                new_centers[raw].0 - origin.0,
                new_centers[raw].1 - origin.1,
            );
            center_map[ci].insert(q, canonical_index[&rel]);
        }

        Ok(StepOutcome {
            state,
            freezes,
            freezes_with_subtree,
            center_map,
        })
    }
}

fn saturate(current: u8, add: u32) -> u8 {
    ((current as u32 + add).min(2)) as u8
}

/// Builds a canonical state from relative positions and raw class keys.
fn assemble_state(
    centers: Vec<Pos32>,
    window: Vec<(Pos32, usize)>,
    class_subtree: impl Fn(usize) -> bool,
    frozen_any: u8,
    frozen_with_subtree: u8,
) -> WindowState {
    let mut window = window;
    window.sort_unstable();
    let mut block_ids: BTreeMap<usize, u8> = BTreeMap::new();
    let mut block_of = Vec::with_capacity(window.len());
    let mut block_subtree = Vec::new();
    for &(_, class) in &window {
        let next = block_ids.len() as u8;
        let id = *block_ids.entry(class).or_insert(next);
        if id as usize == block_subtree.len() {
            block_subtree.push(class_subtree(class));
        }
        block_of.push(id);
    }
    let to_i8 = |p: Pos32| -> Pos {
        debug_assert!(p.0.abs() <= 100 && p.1.abs() <= 100);
        (p.0 as i8, p.1 as i8)
    };
    WindowState {
        centers: centers.into_iter().map(to_i8).collect(),
        window: window.into_iter().map(|(p, _)| to_i8(p)).collect(),
        block_of,
        block_subtree,
        frozen_with_subtree,
        frozen_any,
    }
}

fn check_window_bound(state: &WindowState) {
    let cap = if state.centers.len() == 1 { 8 } else { 12 };
    assert!(
        state.window.len() <= cap,
        "window of {} positions exceeds the bound {}",
        state.window.len(),
        cap
    );
    assert!(state.block_count() <= state.window.len().max(1));
}

/// State after deleting the single level-1 cell `i1`.
pub fn window_initial(spec: &GscSpec, i1: Digit) -> Result<WindowState, WindowError> {
    WindowEngine::new(spec).initial(&[i1])
}

/// Successor of a single-center state when the deletion descends into
/// `next_digit`.
pub fn window_step(
    spec: &GscSpec,
    s: &WindowState,
    next_digit: Digit,
) -> Result<WindowState, WindowError> {
    assert_eq!(s.centers.len(), 1, "single-center step");
    Ok(WindowEngine::new(spec)
        .step(s, &[vec![next_digit]])?
        .state)
}
