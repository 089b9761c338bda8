//! Independent brute-force oracles used by the test and acceptance suites.
//!
//! Everything here recomputes answers from first principles (interval
//! refinement, box subdivision, exhaustive bipartition scans) so the main
//! algorithms can be checked against a second route. None of it is needed
//! for production analysis.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};

use crate::adjacency::{cells_intersection_class, IntersectionClass};
use crate::gsc::{CellWord, Digit, GscSpec, RationalPoint};
use crate::radix::SetClass;

/// Depth of the interval-refinement oracle. The survivor structure is
/// determined by at most three carry states, so it stabilizes well before
/// this depth.
pub const INTERVAL_ORACLE_DEPTH: u32 = 12;

/// Decides the cardinality class of `C_A ∩ C_B` by refining prefix
/// intervals.
///
/// A surviving pair at depth k is a pair of digit prefixes whose value
/// intervals `[v, v + N^-k]` overlap at every depth, including all deeper
/// refinements (pairs whose descendants die out are discarded). The class
/// is Empty when no pair survives, Multiple when two survivors at some
/// depth sit more than `2 N^-k` apart, and Singleton otherwise. Surviving
/// pairs are compressed by their interval offset `va - vb in {-1,0,1}`
/// together with the least and greatest A-side value per offset, which
/// loses nothing for either check.
pub fn interval_intersect_class(a: &BTreeSet<u32>, b: &BTreeSet<u32>, n_base: u32) -> SetClass {
    let n = n_base as i64;
    // An interval offset can refine indefinitely iff it can take one more
    // step into an offset with the same ability; the offset transition
    // structure does not depend on the depth, so prune to a fixed point.
    let mut alive: BTreeSet<i64> = [-1i64, 0, 1].into_iter().collect();
    loop {
        let next: BTreeSet<i64> = alive
            .iter()
            .filter(|&&d| {
                a.iter().any(|&da| {
                    b.iter().any(|&db| {
                        let nd = d * n + da as i64 - db as i64;
                        nd.abs() <= 1 && alive.contains(&nd)
                    })
                })
            })
            .copied()
            .collect();
        if next == alive {
            break;
        }
        alive = next;
    }
    if !alive.contains(&0) {
        return SetClass::Empty;
    }
    // forward value bounds over surviving pairs only
    let mut bounds: BTreeMap<i64, (i64, i64)> = BTreeMap::new();
    bounds.insert(0, (0, 0));
    for _ in 0..INTERVAL_ORACLE_DEPTH {
        let mut next: BTreeMap<i64, (i64, i64)> = BTreeMap::new();
        for (&d, &(lo, hi)) in &bounds {
            for &da in a {
                for &db in b {
                    let nd = d * n + da as i64 - db as i64;
                    if nd.abs() > 1 || !alive.contains(&nd) {
                        continue;
                    }
                    let slot = next.entry(nd).or_insert((i64::MAX, i64::MIN));
                    slot.0 = slot.0.min(lo * n + da as i64);
                    slot.1 = slot.1.max(hi * n + da as i64);
                }
            }
        }
        bounds = next;
        let lo = bounds.values().map(|&(l, _)| l).min().unwrap();
        let hi = bounds.values().map(|&(_, h)| h).max().unwrap();
        if hi - lo > 2 {
            return SetClass::Multiple;
        }
    }
    SetClass::Singleton
}

/// Whether a rational value admits a base-N expansion using only the given
/// digits. Remainders of a rational form a finite set, so this is an exact
/// reachability question: the value is in the system iff an infinite digit
/// path exists, i.e. iff the remainder graph from `v` reaches a cycle.
pub fn value_in_digit_system(
    v: &BigRational,
    digits: &BTreeSet<u32>,
    n_base: u32,
    state_cap: usize,
) -> bool {
    let zero = BigRational::zero();
    let one = BigRational::one();
    if *v < zero || *v > one {
        return false;
    }
    let n = BigRational::from_integer(BigInt::from(n_base));
    let mut nodes: Vec<BigRational> = vec![v.clone()];
    let mut index: BTreeMap<BigRational, usize> = BTreeMap::new();
    index.insert(v.clone(), 0);
    let mut edges: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier = vec![0usize];
    while let Some(i) = frontier.pop() {
        let r = nodes[i].clone();
        for &d in digits {
            let next = &r * &n - BigRational::from_integer(BigInt::from(d));
            if next < zero || next > one {
                continue;
            }
            let j = *index.entry(next.clone()).or_insert_with(|| {
                nodes.push(next.clone());
                edges.push(Vec::new());
                frontier.push(nodes.len() - 1);
                nodes.len() - 1
            });
            edges[i].push(j);
        }
        if nodes.len() > state_cap {
            // denominators not compatible with the base blow up; such a
            // value is never expressible, but guard anyway
            return false;
        }
    }
    // prune states with no outgoing edge into live states
    let mut alive = vec![true; nodes.len()];
    loop {
        let mut changed = false;
        for i in 0..nodes.len() {
            if alive[i] && !edges[i].iter().any(|&j| alive[j]) {
                alive[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    alive[0]
}

/// Depth of the square-subdivision oracle for cell intersections.
pub const SUBDIVISION_ORACLE_DEPTH: u32 = 8;

/// Decides whether two same-level cells intersect by refining pairs of
/// overlapping closed sub-squares.
pub fn subdivision_cells_intersect(spec: &GscSpec, u: &CellWord, v: &CellWord) -> bool {
    assert_eq!(u.level(), v.level());
    let gu = spec.word_to_grid(u);
    let gv = spec.word_to_grid(v);
    let overlap =
        |a: (u64, u64), b: (u64, u64)| a.0.abs_diff(b.0) <= 1 && a.1.abs_diff(b.1) <= 1;
    let mut pairs: HashSet<((u64, u64), (u64, u64))> = HashSet::new();
    if overlap((gu.x, gu.y), (gv.x, gv.y)) {
        pairs.insert(((gu.x, gu.y), (gv.x, gv.y)));
    }
    let n = spec.n_base() as u64;
    for _ in 0..SUBDIVISION_ORACLE_DEPTH {
        if pairs.is_empty() {
            return false;
        }
        let mut next = HashSet::new();
        for &(pa, pb) in &pairs {
            for da in spec.digits() {
                let ca = (pa.0 * n + da.x as u64, pa.1 * n + da.y as u64);
                for db in spec.digits() {
                    let cb = (pb.0 * n + db.x as u64, pb.1 * n + db.y as u64);
                    if overlap(ca, cb) {
                        next.insert((ca, cb));
                    }
                }
            }
        }
        pairs = next;
    }
    !pairs.is_empty()
}

/// Result of the exhaustive fragility scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanWitness {
    pub point: RationalPoint,
    pub part_one: Vec<Digit>,
    pub part_two: Vec<Digit>,
}

/// Scans all `2^(|D|-1) - 1` bipartitions of the digit set for a split whose
/// crossing cells meet in exactly one point. Exponential by construction;
/// used only to validate the production fragility search.
pub fn fragile_bipartition_scan(spec: &GscSpec) -> Option<ScanWitness> {
    let digits = spec.digits();
    let count = digits.len();
    assert!(count <= 20, "bipartition scan is exponential in |D|");
    let words: Vec<CellWord> = digits.iter().map(|&d| CellWord::new(vec![d])).collect();
    let mut class = vec![vec![IntersectionClass::Empty; count]; count];
    for i in 0..count {
        for j in 0..count {
            if i != j {
                class[i][j] = cells_intersection_class(spec, &words[i], &words[j]).unwrap();
            }
        }
    }
    let mut best: Option<ScanWitness> = None;
    // digit 0 always goes into the first part; mask picks the rest of it
    for mask in 0u32..(1 << (count - 1)) {
        let in_one: Vec<bool> = std::iter::once(true)
            .chain((0..count - 1).map(|i| mask & (1 << i) != 0))
            .collect();
        if in_one.iter().all(|&b| b) {
            continue;
        }
        let mut point: Option<RationalPoint> = None;
        let mut ok = true;
        'pairs: for i in 0..count {
            if !in_one[i] {
                continue;
            }
            for j in 0..count {
                if in_one[j] {
                    continue;
                }
                match &class[i][j] {
                    IntersectionClass::Empty => {}
                    IntersectionClass::Singleton(p) => match &point {
                        None => point = Some(p.clone()),
                        Some(q) if q == p => {}
                        Some(_) => {
                            ok = false;
                            break 'pairs;
                        }
                    },
                    IntersectionClass::Multiple => {
                        ok = false;
                        break 'pairs;
                    }
                }
            }
        }
        let Some(point) = point else { continue };
        if !ok {
            continue;
        }
        let part_one: Vec<Digit> = (0..count).filter(|&i| in_one[i]).map(|i| digits[i]).collect();
        let part_two: Vec<Digit> = (0..count).filter(|&i| !in_one[i]).map(|i| digits[i]).collect();
        let candidate = ScanWitness {
            point,
            part_one,
            part_two,
        };
        let better = match &best {
            None => true,
            Some(b) => {
                (candidate.point.clone(), candidate.part_one.clone())
                    < (b.point.clone(), b.part_one.clone())
            }
        };
        if better {
            best = Some(candidate);
        }
    }
    best
}

/// Existence-only version of the bipartition scan, stopping at the first
/// valid split. Still exponential, but usable for somewhat larger digit
/// sets when only the yes/no answer matters.
pub fn fragile_split_exists(spec: &GscSpec) -> bool {
    let digits = spec.digits();
    let count = digits.len();
    assert!(count <= 26, "bipartition scan is exponential in |D|");
    let words: Vec<CellWord> = digits.iter().map(|&d| CellWord::new(vec![d])).collect();
    let mut class = vec![vec![IntersectionClass::Empty; count]; count];
    for i in 0..count {
        for j in 0..count {
            if i != j {
                class[i][j] = cells_intersection_class(spec, &words[i], &words[j]).unwrap();
            }
        }
    }
    for mask in 0u64..(1 << (count - 1)) {
        let in_one: Vec<bool> = std::iter::once(true)
            .chain((0..count - 1).map(|i| mask & (1 << i) != 0))
            .collect();
        if in_one.iter().all(|&b| b) {
            continue;
        }
        let mut point: Option<&RationalPoint> = None;
        let mut ok = true;
        'pairs: for i in 0..count {
            if !in_one[i] {
                continue;
            }
            for j in 0..count {
                if in_one[j] {
                    continue;
                }
                match &class[i][j] {
                    IntersectionClass::Empty => {}
                    IntersectionClass::Singleton(p) => match point {
                        None => point = Some(p),
                        Some(q) if q == p => {}
                        Some(_) => {
                            ok = false;
                            break 'pairs;
                        }
                    },
                    IntersectionClass::Multiple => {
                        ok = false;
                        break 'pairs;
                    }
                }
            }
        }
        if ok && point.is_some() {
            return true;
        }
    }
    false
}

/// Component sizes of a small graph after deleting one vertex; recomputed
/// from scratch so articulation analysis can be cross-checked.
pub fn slow_component_sizes_without(adj: &[Vec<u32>], removed: usize) -> Vec<u64> {
    let n = adj.len();
    let mut seen = vec![false; n];
    seen[removed] = true;
    let mut sizes = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        seen[start] = true;
        let mut size = 0u64;
        while let Some(v) = stack.pop() {
            size += 1;
            for &w in &adj[v] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w as usize);
                }
            }
        }
        sizes.push(size);
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// Deterministic 64-bit generator for reproducible random corpora.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}

/// Draws a random valid specification with `2 <= |D| <= max_digits`.
pub fn random_spec(rng: &mut SplitMix64, n_base: u32, max_digits: usize) -> GscSpec {
    let cells = (n_base * n_base) as usize;
    let max = max_digits.min(cells - 1);
    loop {
        let size = 2 + rng.below((max - 1) as u64) as usize;
        let mut pool: Vec<(u32, u32)> = (0..n_base)
            .flat_map(|x| (0..n_base).map(move |y| (x, y)))
            .collect();
        for i in (1..pool.len()).rev() {
            let j = rng.below((i + 1) as u64) as usize;
            pool.swap(i, j);
        }
        pool.truncate(size);
        if let Ok(spec) = GscSpec::new(n_base, pool) {
            return spec;
        }
    }
}

/// Draws a random connected specification. Digit sets grow as random
/// clusters (mostly side-adjacent) so that connected carpets appear at
/// every base, then the carpet-level connectivity is verified.
pub fn random_connected_spec(rng: &mut SplitMix64, n_base: u32, max_digits: usize) -> GscSpec {
    let cells = (n_base * n_base) as usize;
    let max = max_digits.min(cells - 1);
    loop {
        let size = 2 + rng.below((max - 1) as u64) as usize;
        let mut chosen: Vec<(u32, u32)> = Vec::with_capacity(size);
        let start = (
            rng.below(n_base as u64) as u32,
            rng.below(n_base as u64) as u32,
        );
        chosen.push(start);
        while chosen.len() < size {
            let base = chosen[rng.below(chosen.len() as u64) as usize];
            let side_only = rng.below(5) != 0;
            let (dx, dy) = if side_only {
                [(0i64, 1i64), (0, -1), (1, 0), (-1, 0)][rng.below(4) as usize]
            } else {
                let d = [(1i64, 1i64), (1, -1), (-1, 1), (-1, -1)];
                d[rng.below(4) as usize]
            };
            let nx = base.0 as i64 + dx;
            let ny = base.1 as i64 + dy;
            if nx < 0 || ny < 0 || nx >= n_base as i64 || ny >= n_base as i64 {
                continue;
            }
            let cell = (nx as u32, ny as u32);
            if !chosen.contains(&cell) {
                chosen.push(cell);
            }
        }
        // cells only ever touch through opposing extreme columns, rows, or
        // corners; without one of those pairs the level-1 graph is edgeless
        let last = n_base - 1;
        let col0 = chosen.iter().any(|c| c.0 == 0);
        let col_last = chosen.iter().any(|c| c.0 == last);
        let row0 = chosen.iter().any(|c| c.1 == 0);
        let row_last = chosen.iter().any(|c| c.1 == last);
        let corner = |x, y| chosen.contains(&(x, y));
        let contact_possible = (col0 && col_last)
            || (row0 && row_last)
            || (corner(0, 0) && corner(last, last))
            || (corner(last, 0) && corner(0, last));
        if !contact_possible {
            continue;
        }
        if let Ok(spec) = GscSpec::new(n_base, chosen) {
            if crate::fragility::is_connected_gsc(&spec) {
                return spec;
            }
        }
    }
}

/// Tries to draw a random connected, non-fragile specification within a
/// bounded number of attempts. Sparse bases may admit none at all: at
/// base 5 every connected carpet with at most ten digits is fragile
/// (checked by exhaustive enumeration), so callers should re-roll the base
/// on failure.
pub fn random_nonfragile_spec(
    rng: &mut SplitMix64,
    n_base: u32,
    max_digits: usize,
    attempts: usize,
) -> Option<GscSpec> {
    for _ in 0..attempts {
        let spec = random_connected_spec(rng, n_base, max_digits);
        if crate::fragility::fragility_witness(&spec).unwrap().is_none() {
            return Some(spec);
        }
    }
    None
}

/// A reproducible corpus of connected non-fragile specifications with bases
/// drawn from `{3, 4, 5}`; draws that find nothing at their base re-roll.
pub fn nonfragile_corpus(seed: u64, count: usize, max_digits: usize) -> Vec<GscSpec> {
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = 3 + rng.below(3) as u32;
        if let Some(spec) = random_nonfragile_spec(&mut rng, n, max_digits, 20) {
            out.push(spec);
        }
    }
    out
}

/// A reproducible corpus of connected specifications with bases drawn from
/// `{3, 4, 5}`.
pub fn connected_corpus(seed: u64, count: usize, max_digits: usize) -> Vec<GscSpec> {
    let mut rng = SplitMix64::new(seed);
    (0..count)
        .map(|_| {
            let n = 3 + rng.below(3) as u32;
            random_connected_spec(&mut rng, n, max_digits)
        })
        .collect()
}
