//! Decides the existence of cut points of a connected carpet, and tests
//! individual eventually-periodic points for cut-point-hood.
//!
//! Fragile carpets are settled by the fragility witness. Non-fragile ones
//! reduce to: cut points exist iff every level has an essential cut vertex.
//! The window automaton turns that unbounded family of questions into a
//! finite reachability problem, and a positive answer is made constructive
//! by a repetition certificate: a word `w` and a split of its same-level
//! complement whose four conditions prove the fixed point of `w` is a cut
//! point.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num::rational::BigRational;
use num::traits::{One, Zero};
use thiserror::Error;

use crate::fragility::{self, FragilityWitness};
use crate::gsc::{neighbor_square_letters, CellWord, Digit, Direction, GscSpec, RationalPoint, WordError};
use crate::hata::{self, HataError};
use crate::window::{WindowEngine, WindowError, WindowState};

/// Hard stop for any depth iteration. The pigeonhole bound on window-state
/// pairs guarantees a repetition within this many levels; in practice
/// repetitions appear within a handful.
pub const DEFAULT_MAX_DEPTH: usize = 6564; // 3^8 + 3

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DeciderError {
    #[error("DisconnectedInput: this operation needs a connected carpet")]
    DisconnectedInput,
    #[error("FragileInput: this operation needs a non-fragile carpet")]
    FragileInput,
    #[error("PointNotInCarpet: the point has no digit address inside the carpet")]
    PointNotInCarpet,
    #[error("BadPartition: {0}")]
    BadPartition(String),
    #[error("PreconditionUnverified: {0}")]
    PreconditionUnverified(String),
    #[error("InvalidWord: {0}")]
    InvalidWord(#[from] WordError),
    #[error("InvalidDigit: {digit} is not a digit of this carpet")]
    InvalidDigit { digit: Digit },
    #[error("Inconclusive: {0}")]
    Inconclusive(String),
}

impl From<WindowError> for DeciderError {
    fn from(e: WindowError) -> Self {
        match e {
            WindowError::InvalidDigit { digit } => DeciderError::InvalidDigit { digit },
            WindowError::BadCenterShape(msg) => DeciderError::Inconclusive(msg),
        }
    }
}

impl From<HataError> for DeciderError {
    fn from(e: HataError) -> Self {
        DeciderError::Inconclusive(e.to_string())
    }
}

/// Tunable limits of the decision pipeline.
#[derive(Clone, Debug)]
pub struct DeciderConfig {
    /// Hard stop for depth iterations of the window automaton.
    pub max_depth: usize,
    /// Vertex cap for explicit graphs built during fallbacks.
    pub max_graph_vertices: u64,
    /// Cap on `|D|^|w|` for certificate words `w`.
    pub certificate_cell_cap: u64,
    /// Cap on the length of certificate words.
    pub certificate_len_cap: usize,
}

impl Default for DeciderConfig {
    fn default() -> Self {
        DeciderConfig {
            max_depth: DEFAULT_MAX_DEPTH,
            max_graph_vertices: hata::DEFAULT_VERTEX_CAP,
            certificate_cell_cap: 100_000,
            certificate_len_cap: 8,
        }
    }
}

/// The eventually periodic answer to "does level n have an essential cut
/// vertex", for every n at once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EssentialBits {
    /// Bits for depths `1..=preperiod.len()`.
    pub preperiod: Vec<bool>,
    /// Bits repeating forever after the preperiod.
    pub period: Vec<bool>,
}

impl EssentialBits {
    /// The bit for a depth `n >= 1`.
    pub fn bit(&self, depth: usize) -> bool {
        assert!(depth >= 1);
        let idx = depth - 1;
        if idx < self.preperiod.len() {
            self.preperiod[idx]
        } else {
            self.period[(idx - self.preperiod.len()) % self.period.len()]
        }
    }

    /// Least depth `>= from` whose bit is false, if any exists at all.
    pub fn first_false_depth(&self, from: usize) -> Option<usize> {
        let horizon = self.preperiod.len() + self.period.len();
        (from..=horizon.max(from)).find(|&n| !self.bit(n))
    }
}

/// The constructive cut-point witness: a word and a validated split of its
/// same-level complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepetitionCertificate {
    pub word: CellWord,
    pub lambda: Vec<CellWord>,
    pub lambda_prime: Vec<CellWord>,
}

/// The decision outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Disconnected,
    Fragile(FragilityWitness),
    NoCutPoints {
        level: usize,
    },
    HasCutPoints {
        omega: CellWord,
        point: RationalPoint,
        certificate: RepetitionCertificate,
    },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Disconnected => write!(f, "Disconnected"),
            Verdict::Fragile(w) => write!(f, "Fragile {w}"),
            Verdict::NoCutPoints { level } => write!(f, "NoCutPoints level={level}"),
            Verdict::HasCutPoints { omega, point, .. } => {
                write!(f, "HasCutPoints omega={omega} point={point}")
            }
        }
    }
}

/// An eventually periodic digit address `preperiod . period^inf` of a point
/// of the carpet.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EventuallyPeriodicAddress {
    pub preperiod: Vec<Digit>,
    pub period: Vec<Digit>,
}

impl EventuallyPeriodicAddress {
    /// The k-th digit, 1-based.
    pub fn digit(&self, k: usize) -> Digit {
        assert!(k >= 1);
        let idx = k - 1;
        if idx < self.preperiod.len() {
            self.preperiod[idx]
        } else {
            self.period[(idx - self.preperiod.len()) % self.period.len()]
        }
    }

    /// The encoded point.
    pub fn value(&self, n_base: u32) -> RationalPoint {
        let xs: Vec<u32> = self.preperiod.iter().map(|d| d.x).collect();
        let xp: Vec<u32> = self.period.iter().map(|d| d.x).collect();
        let ys: Vec<u32> = self.preperiod.iter().map(|d| d.y).collect();
        let yp: Vec<u32> = self.period.iter().map(|d| d.y).collect();
        RationalPoint::new(
            crate::radix::eventually_periodic_value(&xs, &xp, n_base),
            crate::radix::eventually_periodic_value(&ys, &yp, n_base),
        )
        .expect("address values stay in the unit square")
    }
}

impl fmt::Display for EventuallyPeriodicAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.preperiod {
            write!(f, "{d}")?;
        }
        write!(f, "[")?;
        for d in &self.period {
            write!(f, "{d}")?;
        }
        write!(f, "]*")
    }
}

fn ensure_connected(spec: &GscSpec) -> Result<(), DeciderError> {
    if fragility::is_connected_gsc(spec) {
        Ok(())
    } else {
        Err(DeciderError::DisconnectedInput)
    }
}

/// Eventually periodic sequence of "level n has an essential cut vertex"
/// bits, computed without ever building a deep graph.
///
/// For each starting digit the window automaton is advanced through all
/// digit choices at once; the set of reachable states per depth follows a
/// deterministic successor map over a finite space, so the sequence of sets
/// is eventually periodic and the separation bit per depth comes along.
pub fn essential_exists_at_depth(spec: &GscSpec) -> Result<EssentialBits, DeciderError> {
    essential_exists_at_depth_with(spec, &DeciderConfig::default())
}

/// As [`essential_exists_at_depth`] with explicit limits.
pub fn essential_exists_at_depth_with(
    spec: &GscSpec,
    config: &DeciderConfig,
) -> Result<EssentialBits, DeciderError> {
    ensure_connected(spec)?;
    if fragility::fragility_witness(spec)
        .expect("connectivity was just checked")
        .is_some()
    {
        return Err(DeciderError::FragileInput);
    }
    essential_bits_unchecked(spec, config)
}

fn essential_bits_unchecked(
    spec: &GscSpec,
    config: &DeciderConfig,
) -> Result<EssentialBits, DeciderError> {
    let engine = WindowEngine::new(spec);
    let mut reachable: BTreeSet<WindowState> = BTreeSet::new();
    for &d in spec.digits() {
        reachable.insert(engine.initial(&[d])?);
    }
    let mut bits: Vec<bool> = Vec::new();
    let mut seen: HashMap<Vec<WindowState>, usize> = HashMap::new();
    loop {
        let key: Vec<WindowState> = reachable.iter().cloned().collect();
        if let Some(&start) = seen.get(&key) {
            let preperiod = bits[..start].to_vec();
            let period = bits[start..].to_vec();
            return Ok(EssentialBits { preperiod, period });
        }
        if bits.len() >= config.max_depth {
            return Err(DeciderError::Inconclusive(format!(
                "no repetition of the reachable window-state set within {} levels",
                config.max_depth
            )));
        }
        seen.insert(key, bits.len());
        bits.push(reachable.iter().any(|s| s.sep()));
        let mut next: BTreeSet<WindowState> = BTreeSet::new();
        for s in &reachable {
            for &d in spec.digits() {
                next.insert(engine.step(s, &[vec![d]])?.state);
            }
        }
        reachable = next;
    }
}

/// Checks the four conditions of a repetition certificate for the word `i`
/// and the split `lambda` / `lambda_prime` of its same-level complement.
/// A true result proves that the fixed point of `i` is a cut point.
pub fn check_repetition_certificate(
    spec: &GscSpec,
    i: &CellWord,
    lambda: &[CellWord],
    lambda_prime: &[CellWord],
) -> Result<bool, DeciderError> {
    if i.is_empty() {
        return Err(DeciderError::BadPartition("the center word is empty".into()));
    }
    spec.check_word(i)?;
    let level = i.level();
    let mut side: HashMap<&[Digit], bool> = HashMap::new();
    for (words, is_lambda) in [(lambda, true), (lambda_prime, false)] {
        for w in words {
            if w.level() != level {
                return Err(DeciderError::BadPartition(format!(
                    "word {w} has level {} instead of {level}",
                    w.level()
                )));
            }
            spec.check_word(w)?;
            if w == i {
                return Err(DeciderError::BadPartition(format!(
                    "the center word {i} appears in the partition"
                )));
            }
            if side.insert(w.letters(), is_lambda).is_some() {
                return Err(DeciderError::BadPartition(format!("word {w} listed twice")));
            }
        }
    }

    let table = crate::adjacency::neighbor_table(spec);

    // (1) the two sides partition all other level-n cells
    let total = spec.cell_count(level as u32);
    let covers_all = total == Some((lambda.len() + lambda_prime.len() + 1) as u128);
    if !covers_all {
        return Ok(false);
    }

    // (2) the closed sides are disjoint: no crossing contact at all
    for w in lambda {
        for dir in Direction::ALL {
            if !table.touches(dir) {
                continue;
            }
            let Some(neighbor) = neighbor_square_letters(w, dir, spec.n_base()) else {
                continue;
            };
            if side.get(neighbor.as_slice()) == Some(&false) {
                return Ok(false);
            }
        }
    }

    // (3) neither image of a side under the center map may touch both sides
    for words in [lambda, lambda_prime] {
        let mut touches_lambda = false;
        let mut touches_prime = false;
        for w in words {
            let child = i.concat(w);
            for dir in Direction::ALL {
                if !table.touches(dir) {
                    continue;
                }
                let Some(neighbor) = neighbor_square_letters(&child, dir, spec.n_base()) else {
                    continue;
                };
                if neighbor[..level] == *i.letters() {
                    continue; // stays inside the center cell
                }
                if neighbor[level..].iter().any(|&d| !spec.contains(d)) {
                    continue; // the neighbor square holds no cell
                }
                match side.get(&neighbor[..level]) {
                    Some(&true) => touches_lambda = true,
                    Some(&false) => touches_prime = true,
                    None => {}
                }
            }
            if touches_lambda && touches_prime {
                return Ok(false);
            }
        }
    }

    // (4) each side contains a whole level-1 subtree
    let subtree = spec
        .cell_count(level as u32 - 1)
        .expect("smaller power of a representable count");
    let has_full_subtree = |words: &[CellWord]| {
        let mut counts: BTreeMap<Digit, u128> = BTreeMap::new();
        for w in words {
            *counts.entry(w.letters()[0]).or_insert(0) += 1;
        }
        counts.values().any(|&c| c == subtree)
    };
    Ok(has_full_subtree(lambda) && has_full_subtree(lambda_prime))
}

/// The double-repetition test of an essential cut vertex whose removal
/// leaves exactly two components: when `i i` is essential one level pair
/// up, every power of `i` is essential and cut points exist.
pub fn corollary_double_check(spec: &GscSpec, i: &CellWord) -> Result<bool, DeciderError> {
    corollary_double_check_with(spec, i, &DeciderConfig::default())
}

/// As [`corollary_double_check`] with explicit limits.
pub fn corollary_double_check_with(
    spec: &GscSpec,
    i: &CellWord,
    config: &DeciderConfig,
) -> Result<bool, DeciderError> {
    if i.is_empty() {
        return Err(DeciderError::PreconditionUnverified("empty word".into()));
    }
    spec.check_word(i)?;
    let level = i.level() as u32;
    let cells = spec.cell_count(level).unwrap_or(u128::MAX);
    if cells > config.max_graph_vertices as u128 {
        return Err(DeciderError::PreconditionUnverified(format!(
            "level {level} too large to verify the precondition explicitly"
        )));
    }
    let graph = hata::build_hata_capped(spec, level, config.max_graph_vertices)?;
    let reports = hata::essential_cut_vertices_of(spec, &graph)?;
    let report = reports.iter().find(|r| r.vertex == *i);
    match report {
        Some(r) if r.essential && r.component_sizes.len() == 2 => {}
        _ => {
            return Err(DeciderError::PreconditionUnverified(format!(
                "{i} is not an essential cut vertex with exactly two components"
            )));
        }
    }
    let doubled = i.concat(i);
    let cells2 = spec.cell_count(2 * level).unwrap_or(u128::MAX);
    if cells2 <= config.max_graph_vertices as u128 {
        let graph2 = hata::build_hata_capped(spec, 2 * level, config.max_graph_vertices)?;
        let reports2 = hata::essential_cut_vertices_of(spec, &graph2)?;
        Ok(reports2
            .iter()
            .any(|r| r.vertex == doubled && r.essential))
    } else {
        // follow the window automaton along the doubled word
        let engine = WindowEngine::new(spec);
        let letters = doubled.letters();
        let mut state = engine.initial(&[letters[0]])?;
        for &d in &letters[1..] {
            state = engine.step(&state, &[vec![d]])?.state;
        }
        Ok(state.sep())
    }
}

/// Looks for a valid certificate split around the word `omega`, trying the
/// canonical bipartitions of the components of its deleted-level graph.
fn try_certificate(
    spec: &GscSpec,
    config: &DeciderConfig,
    omega: &CellWord,
) -> Result<Option<RepetitionCertificate>, DeciderError> {
    let level = omega.level() as u32;
    let cells = spec.cell_count(level).unwrap_or(u128::MAX);
    if cells > config.certificate_cell_cap as u128
        || cells > config.max_graph_vertices as u128
    {
        return Ok(None);
    }
    let graph = hata::build_hata_capped(spec, level, config.max_graph_vertices)?;
    let center = graph
        .vertex_of(omega)
        .expect("validated words address a vertex");
    // components of the level graph minus the center vertex
    let count = graph.vertex_count();
    let mut label = vec![usize::MAX; count];
    label[center] = usize::MAX - 1;
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for start in 0..count {
        if label[start] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut members = vec![start];
        label[start] = id;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in graph.neighbors(v) {
                let w = w as usize;
                if label[w] == usize::MAX {
                    label[w] = id;
                    members.push(w);
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }
    if comps.len() < 2 || comps.len() > 12 {
        return Ok(None);
    }
    let words_of = |ids: &[usize]| -> Vec<CellWord> {
        ids.iter().map(|&v| graph.word_of(v)).collect()
    };
    let free = comps.len() - 1;
    for mask in 0u32..(1 << free) {
        if mask == (1 << free) - 1 {
            continue; // all components on one side
        }
        let mut lambda_ids = comps[0].clone();
        let mut prime_ids = Vec::new();
        for (k, comp) in comps.iter().enumerate().skip(1) {
            if mask & (1 << (k - 1)) != 0 {
                lambda_ids.extend_from_slice(comp);
            } else {
                prime_ids.extend_from_slice(comp);
            }
        }
        lambda_ids.sort_unstable();
        prime_ids.sort_unstable();
        let lambda = words_of(&lambda_ids);
        let lambda_prime = words_of(&prime_ids);
        if check_repetition_certificate(spec, omega, &lambda, &lambda_prime)? {
            return Ok(Some(RepetitionCertificate {
                word: omega.clone(),
                lambda,
                lambda_prime,
            }));
        }
    }
    Ok(None)
}

/// Enumerates candidate certificate words: short words whose repetition
/// drives the window automaton into a separated fixed point.
fn certificate_from_lasso(
    spec: &GscSpec,
    config: &DeciderConfig,
) -> Result<Option<RepetitionCertificate>, DeciderError> {
    let engine = WindowEngine::new(spec);
    let digit_count = spec.digit_count() as u128;
    for len in 1..=config.certificate_len_cap {
        let cells = digit_count.checked_pow(len as u32);
        match cells {
            Some(c) if c <= config.certificate_cell_cap as u128 => {}
            _ => break,
        }
        let words = len as u32;
        let total = digit_count.pow(words) as usize;
        'next_word: for code in 0..total {
            let mut letters = vec![spec.digits()[0]; len];
            let mut c = code;
            for slot in letters.iter_mut().rev() {
                *slot = spec.digits()[c % spec.digit_count()];
                c /= spec.digit_count();
            }
            let omega = CellWord::new(letters);
            // trajectory of omega repeated; a separated fixed point makes
            // omega a lasso cycle candidate
            let run = |state: &WindowState| -> Result<WindowState, DeciderError> {
                let mut s = state.clone();
                for &d in omega.letters() {
                    s = engine.step(&s, &[vec![d]])?.state;
                }
                Ok(s)
            };
            let mut current = {
                let mut s = engine.initial(&[omega.letters()[0]])?;
                for &d in &omega.letters()[1..] {
                    s = engine.step(&s, &[vec![d]])?.state;
                }
                s
            };
            for _ in 0..40 {
                let next = run(&current)?;
                if next == current {
                    if current.sep() {
                        if let Some(cert) = try_certificate(spec, config, &omega)? {
                            return Ok(Some(cert));
                        }
                    }
                    continue 'next_word;
                }
                current = next;
            }
        }
    }
    Ok(None)
}

/// Fallback: scan explicit graphs level by level for an essential cut
/// vertex whose component split validates as a certificate.
fn certificate_from_explicit_scan(
    spec: &GscSpec,
    config: &DeciderConfig,
) -> Result<Option<RepetitionCertificate>, DeciderError> {
    let digit_count = spec.digit_count() as u128;
    let mut level = 1u32;
    loop {
        let cells = digit_count.checked_pow(level);
        match cells {
            Some(c)
                if c <= config.certificate_cell_cap as u128
                    && c <= config.max_graph_vertices as u128 => {}
            _ => return Ok(None),
        }
        let reports = hata::essential_cut_vertices(spec, level)?;
        for report in reports.iter().filter(|r| r.essential) {
            if let Some(cert) = try_certificate(spec, config, &report.vertex)? {
                return Ok(Some(cert));
            }
        }
        level += 1;
    }
}

/// Full decision pipeline for the existence of cut points.
pub fn decide_cut_points(spec: &GscSpec) -> Result<Verdict, DeciderError> {
    decide_cut_points_with(spec, &DeciderConfig::default())
}

/// As [`decide_cut_points`] with explicit limits.
pub fn decide_cut_points_with(
    spec: &GscSpec,
    config: &DeciderConfig,
) -> Result<Verdict, DeciderError> {
    if !fragility::is_connected_gsc(spec) {
        return Ok(Verdict::Disconnected);
    }
    if let Some(witness) = fragility::fragility_witness(spec).expect("connectivity checked") {
        return Ok(Verdict::Fragile(witness));
    }
    let bits = essential_bits_unchecked(spec, config)?;
    if let Some(level) = bits.first_false_depth(2) {
        return Ok(Verdict::NoCutPoints { level });
    }
    let certificate = match certificate_from_lasso(spec, config)? {
        Some(cert) => cert,
        None => match certificate_from_explicit_scan(spec, config)? {
            Some(cert) => cert,
            None => {
                return Err(DeciderError::Inconclusive(
                    "every level has an essential cut vertex, but no certificate word \
                     validated within the configured caps"
                        .into(),
                ))
            }
        },
    };
    let omega = certificate.word.clone();
    let point = spec.fixed_point(&omega)?;
    Ok(Verdict::HasCutPoints {
        omega,
        point,
        certificate,
    })
}

/// All base-N digit addresses of a rational point, filtered to the carpet's
/// digit set. An empty result means the point lies outside the carpet.
pub fn addresses_of(spec: &GscSpec, p: &RationalPoint) -> Vec<EventuallyPeriodicAddress> {
    let xs = coordinate_expansions(p.x(), spec.n_base());
    let ys = coordinate_expansions(p.y(), spec.n_base());
    let mut out = BTreeSet::new();
    for ex in &xs {
        for ey in &ys {
            if let Some(addr) = combine_expansions(spec, ex, ey) {
                out.insert(addr);
            }
        }
    }
    out.into_iter().collect()
}

/// Base-N expansions of a rational in `[0, 1]` as (preperiod, period) digit
/// strings; terminating values get both representations.
fn coordinate_expansions(v: &BigRational, n_base: u32) -> Vec<(Vec<u32>, Vec<u32>)> {
    let one = BigRational::one();
    if v == &one {
        return vec![(Vec::new(), vec![n_base - 1])];
    }
    let n = BigRational::from_integer(n_base.into());
    let mut digits: Vec<u32> = Vec::new();
    let mut seen: HashMap<BigRational, usize> = HashMap::new();
    let mut r = v.clone();
    let (pre, per) = loop {
        if let Some(&start) = seen.get(&r) {
            break (digits[..start].to_vec(), digits[start..].to_vec());
        }
        seen.insert(r.clone(), digits.len());
        let scaled = &r * &n;
        let d = scaled.floor().to_integer();
        let d: u32 = u32::try_from(&d).expect("digit below the base");
        digits.push(d);
        r = scaled - BigRational::from_integer(d.into());
    };
    let mut out = vec![(pre.clone(), per.clone())];
    // terminating expansions also read as (pre - 1 on the last digit) (N-1)*
    if per == [0] && !v.is_zero() {
        let mut alt = pre;
        while alt.last() == Some(&0) {
            alt.pop();
        }
        let last = alt.last_mut().expect("a positive value has a nonzero digit");
        *last -= 1;
        out.push((alt, vec![n_base - 1]));
    }
    out
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn combine_expansions(
    spec: &GscSpec,
    ex: &(Vec<u32>, Vec<u32>),
    ey: &(Vec<u32>, Vec<u32>),
) -> Option<EventuallyPeriodicAddress> {
    let digit_at = |(pre, per): &(Vec<u32>, Vec<u32>), k: usize| -> u32 {
        if k < pre.len() {
            pre[k]
        } else {
            per[(k - pre.len()) % per.len()]
        }
    };
    let pre_len = ex.0.len().max(ey.0.len());
    let per_len = lcm(ex.1.len(), ey.1.len());
    let mut preperiod = Vec::with_capacity(pre_len);
    let mut period = Vec::with_capacity(per_len);
    for k in 0..pre_len + per_len {
        let d = Digit::new(digit_at(ex, k), digit_at(ey, k));
        if !spec.contains(d) {
            return None;
        }
        if k < pre_len {
            preperiod.push(d);
        } else {
            period.push(d);
        }
    }
    Some(EventuallyPeriodicAddress { preperiod, period })
}

/// What a per-point run observed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointCutReport {
    pub is_cut_point: bool,
    /// Number of components the carpet splits into at the point.
    pub components: usize,
}

/// Whether removing the point disconnects the carpet.
pub fn is_cut_point(spec: &GscSpec, p: &RationalPoint) -> Result<bool, DeciderError> {
    Ok(point_cut_report(spec, p)?.is_cut_point)
}

/// Runs the window automaton with the point's cells as the deleted region,
/// along the merged eventually periodic digit schedule of all its
/// addresses, and counts the components that persist in the limit.
pub fn point_cut_report(spec: &GscSpec, p: &RationalPoint) -> Result<PointCutReport, DeciderError> {
    point_cut_report_with(spec, p, &DeciderConfig::default())
}

/// As [`point_cut_report`] with explicit limits.
pub fn point_cut_report_with(
    spec: &GscSpec,
    p: &RationalPoint,
    config: &DeciderConfig,
) -> Result<PointCutReport, DeciderError> {
    ensure_connected(spec)?;
    let addresses = addresses_of(spec, p);
    if addresses.is_empty() {
        return Err(DeciderError::PointNotInCarpet);
    }
    let engine = WindowEngine::new(spec);

    let schedule_pre = addresses
        .iter()
        .map(|a| a.preperiod.len())
        .max()
        .unwrap()
        .max(1);
    let schedule_period = addresses
        .iter()
        .map(|a| a.period.len())
        .fold(1usize, lcm);

    // level-1 centers: the distinct first digits, with each address mapped
    // to its center slot (initial() keeps sorted digit order)
    let mut first_digits: Vec<Digit> = addresses.iter().map(|a| a.digit(1)).collect();
    first_digits.sort_unstable();
    first_digits.dedup();
    let mut addr_center: Vec<usize> = addresses
        .iter()
        .map(|a| first_digits.binary_search(&a.digit(1)).unwrap())
        .collect();
    let mut state = engine.initial(&first_digits)?;
    let mut center_count = first_digits.len();

    let mut frozen_total: u64 = 0;
    let mut seen: HashMap<(WindowState, Vec<usize>, usize), (usize, u64)> = HashMap::new();
    let mut level = 1usize;
    loop {
        if level >= schedule_pre {
            let phase = (level - schedule_pre) % schedule_period;
            let key = (state.clone(), addr_center.clone(), phase);
            if let Some(&(_, frozen_then)) = seen.get(&key) {
                if frozen_total != frozen_then {
                    return Err(DeciderError::Inconclusive(
                        "components kept departing along the periodic regime".into(),
                    ));
                }
                let components = frozen_total as usize + state.block_count();
                if components > 8 {
                    return Err(DeciderError::Inconclusive(format!(
                        "{components} persistent components exceed the split bound of 8"
                    )));
                }
                return Ok(PointCutReport {
                    is_cut_point: components >= 2,
                    components,
                });
            }
            seen.insert(key, (level, frozen_total));
        }
        if level > config.max_depth {
            return Err(DeciderError::Inconclusive(format!(
                "no periodic window state within {} levels",
                config.max_depth
            )));
        }
        // children of each center that still contain the point
        let mut kept: Vec<Vec<Digit>> = vec![Vec::new(); center_count];
        for (a, addr) in addresses.iter().enumerate() {
            let d = addr.digit(level + 1);
            let slot = &mut kept[addr_center[a]];
            if !slot.contains(&d) {
                slot.push(d);
            }
        }
        for slot in &mut kept {
            slot.sort_unstable();
        }
        let outcome = engine.step(&state, &kept)?;
        for (a, addr) in addresses.iter().enumerate() {
            let d = addr.digit(level + 1);
            addr_center[a] = outcome.center_map[addr_center[a]][&d];
        }
        frozen_total += outcome.freezes as u64;
        if frozen_total as usize + outcome.state.block_count() > 8 {
            return Err(DeciderError::Inconclusive(format!(
                "{} persistent components exceed the split bound of 8",
                frozen_total as usize + outcome.state.block_count()
            )));
        }
        state = outcome.state;
        center_count = kept.iter().map(|s| s.len()).sum();
        level += 1;
    }
}

/// A level-1 fixed point together with its cut-point verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutPointCandidate {
    pub digit: Digit,
    pub point: RationalPoint,
    pub is_cut_point: bool,
}

/// The fixed points of the level-1 maps, each tested for cut-point-hood.
/// Whenever the carpet has exactly one cut point, it appears in this list.
pub fn unique_cutpoint_candidates(spec: &GscSpec) -> Result<Vec<CutPointCandidate>, DeciderError> {
    ensure_connected(spec)?;
    let mut out = Vec::with_capacity(spec.digit_count());
    for &d in spec.digits() {
        let word = CellWord::new(vec![d]);
        let point = spec.fixed_point(&word)?;
        let is_cut_point = is_cut_point(spec, &point)?;
        out.push(CutPointCandidate {
            digit: d,
            point,
            is_cut_point,
        });
    }
    Ok(out)
}
