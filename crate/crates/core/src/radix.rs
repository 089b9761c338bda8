//! Decides emptiness and cardinality of `C_A ∩ C_B`, where
//! `C_A = { sum a_k N^-k : a_k in A }` for a digit set `A ⊆ {0..N-1}`.
//!
//! Every boundary-intersection question in this crate reduces to this
//! one-dimensional problem.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum RadixError {
    #[error("EmptyDigitSet: both digit sets must be non-empty")]
    EmptyDigitSet,
    #[error("BadBase: base must be at least 2, got {got}")]
    BadBase { got: u32 },
    #[error("DigitOutOfRange: digit {digit} does not fit base {n_base}")]
    DigitOutOfRange { digit: u32, n_base: u32 },
    #[error("NotSingleton: the intersection is not a single value")]
    NotSingleton,
}

/// Cardinality class of a set intersection.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SetClass {
    Empty,
    Singleton,
    Multiple,
}

/// The carry automaton for a pair of digit systems.
///
/// Tracking two expansions digit by digit, let `s_k = N^k * sum_{j<=k}
/// (a_j - b_j) N^-j`, an integer with `s_0 = 0` and `s_k = N*s_{k-1} +
/// (a_k - b_k)`. The two values are equal exactly when `s_k * N^-k -> 0`.
/// The unseen tail satisfies `|sum_{j>k} (a_j - b_j) N^-j| <= (N-1) *
/// sum_{j>k} N^-j = N^-k`, so equality forces `|s_k| <= 1` for every k;
/// and `s_k = ±1` is only consistent with the forced tail `a_j - b_j =
/// ∓(N-1)` for all later j. States outside `{-1, 0, 1}` can therefore be
/// pruned: once `|s| >= 2`, `|N*s + (a-b)| >= 2N - (N-1) = N+1 > 2`, so
/// the carry never returns.
///
/// `bound` is normally 1; tests widen it to 2 to confirm the pruning
/// never changes an answer.
#[derive(Clone, Debug)]
pub struct CarryAutomaton {
    n_base: u32,
    a: Vec<u32>,
    b: Vec<u32>,
    bound: i32,
    /// survivors[state + bound] = state admits an infinite run.
    survivors: Vec<bool>,
}

impl CarryAutomaton {
    pub fn new(a: &BTreeSet<u32>, b: &BTreeSet<u32>, n_base: u32) -> Result<Self, RadixError> {
        Self::with_bound(a, b, n_base, 1)
    }

    /// Builds the automaton over carry states `{-bound, ..., bound}`.
    pub fn with_bound(
        a: &BTreeSet<u32>,
        b: &BTreeSet<u32>,
        n_base: u32,
        bound: i32,
    ) -> Result<Self, RadixError> {
        if n_base < 2 {
            return Err(RadixError::BadBase { got: n_base });
        }
        if a.is_empty() || b.is_empty() {
            return Err(RadixError::EmptyDigitSet);
        }
        for &d in a.iter().chain(b.iter()) {
            if d >= n_base {
                return Err(RadixError::DigitOutOfRange { digit: d, n_base });
            }
        }
        let mut auto = CarryAutomaton {
            n_base,
            a: a.iter().copied().collect(),
            b: b.iter().copied().collect(),
            bound,
            survivors: vec![true; (2 * bound + 1) as usize],
        };
        auto.prune();
        Ok(auto)
    }

    fn idx(&self, s: i32) -> usize {
        (s + self.bound) as usize
    }

    fn in_range(&self, s: i64) -> bool {
        s.abs() <= self.bound as i64
    }

    /// Prune states with no outgoing transition into surviving states,
    /// iterating to a fixed point.
    fn prune(&mut self) {
        loop {
            let mut changed = false;
            for s in -self.bound..=self.bound {
                if !self.survivors[self.idx(s)] {
                    continue;
                }
                let alive = self.transitions(s).next().is_some();
                if !alive {
                    let idx = self.idx(s);
                    self.survivors[idx] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Legal transitions from `s` into surviving states, in (a, b) order.
    fn transitions(&self, s: i32) -> impl Iterator<Item = (u32, u32, i32)> + '_ {
        let n = self.n_base as i64;
        self.a.iter().flat_map(move |&da| {
            self.b.iter().filter_map(move |&db| {
                let next = s as i64 * n + da as i64 - db as i64;
                if self.in_range(next) && self.survivors[self.idx(next as i32)] {
                    Some((da, db, next as i32))
                } else {
                    None
                }
            })
        })
    }

    /// Whether the two digit systems share at least one value.
    pub fn intersection_nonempty(&self) -> bool {
        self.survivors[self.idx(0)]
    }

    /// Cardinality class of the intersection.
    ///
    /// Multiplicity is decided by tracking two simultaneous runs plus a
    /// saturating difference counter of their A-side values: `d_k =
    /// clamp(N*d_{k-1} + (a_k - a'_k))`. When `|d| <= 1` forever the two
    /// values coincide (`|x - x'| <= 2 N^-k` for every k); when `|d|`
    /// reaches 2 they differ by at least `N^-k`. Saturation at 2 is sound
    /// because from `|d| >= 2` the counter can never shrink below 2.
    pub fn intersection_class(&self) -> SetClass {
        if !self.intersection_nonempty() {
            return SetClass::Empty;
        }
        // BFS over (s, s', d) from (0, 0, 0).
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert((0i32, 0i32, 0i32));
        queue.push_back((0i32, 0i32, 0i32));
        let n = self.n_base as i64;
        while let Some((s1, s2, d)) = queue.pop_front() {
            for (a1, _, t1) in self.transitions(s1) {
                for (a2, _, t2) in self.transitions(s2) {
                    let nd = (d as i64 * n + a1 as i64 - a2 as i64).clamp(-2, 2) as i32;
                    if nd.abs() >= 2 {
                        return SetClass::Multiple;
                    }
                    if seen.insert((t1, t2, nd)) {
                        queue.push_back((t1, t2, nd));
                    }
                }
            }
        }
        SetClass::Singleton
    }

    /// The unique common value when the class is Singleton.
    ///
    /// Follows the lexicographically least (a, b) transition through the
    /// survivor graph until a carry state repeats, then sums the preperiod
    /// and the geometric period exactly.
    pub fn singleton_value(&self) -> Result<BigRational, RadixError> {
        if self.intersection_class() != SetClass::Singleton {
            return Err(RadixError::NotSingleton);
        }
        let mut state = 0i32;
        let mut path: Vec<(i32, u32)> = Vec::new(); // (state entered from, digit a)
        let mut seen_at: Vec<Option<usize>> = vec![None; self.survivors.len()];
        seen_at[self.idx(0)] = Some(0);
        loop {
            let (da, _, next) = self
                .transitions(state)
                .next()
                .expect("survivor state has a transition");
            path.push((state, da));
            if let Some(start) = seen_at[self.idx(next)] {
                let pre_digits: Vec<u32> = path[..start].iter().map(|&(_, d)| d).collect();
                let per_digits: Vec<u32> = path[start..].iter().map(|&(_, d)| d).collect();
                return Ok(eventually_periodic_value(
                    &pre_digits,
                    &per_digits,
                    self.n_base,
                ));
            }
            seen_at[self.idx(next)] = Some(path.len());
            state = next;
        }
    }
}

/// Exact value of `0.(pre)(per)(per)...` in base N. The period may be empty
/// only if the value terminates with the preperiod.
pub fn eventually_periodic_value(pre: &[u32], per: &[u32], n_base: u32) -> BigRational {
    let n = BigInt::from(n_base);
    let mut pre_val = BigInt::zero();
    let mut pre_scale = BigInt::one();
    for &d in pre {
        pre_val = &pre_val * &n + BigInt::from(d);
        pre_scale *= &n;
    }
    let mut out = BigRational::new(pre_val, pre_scale.clone());
    if !per.is_empty() {
        let mut per_val = BigInt::zero();
        let mut per_scale = BigInt::one();
        for &d in per {
            per_val = &per_val * &n + BigInt::from(d);
            per_scale *= &n;
        }
        // period contributes per_val / (N^p - 1) scaled below the preperiod
        let tail = BigRational::new(per_val, per_scale - BigInt::one());
        out += tail / BigRational::from_integer(pre_scale);
    }
    out
}

/// Cardinality class of `C_A ∩ C_B`.
pub fn intersect_class(
    a: &BTreeSet<u32>,
    b: &BTreeSet<u32>,
    n_base: u32,
) -> Result<SetClass, RadixError> {
    Ok(CarryAutomaton::new(a, b, n_base)?.intersection_class())
}

/// The unique element of `C_A ∩ C_B`; errors unless the class is Singleton.
pub fn singleton_value(
    a: &BTreeSet<u32>,
    b: &BTreeSet<u32>,
    n_base: u32,
) -> Result<BigRational, RadixError> {
    CarryAutomaton::new(a, b, n_base)?.singleton_value()
}
