//! Carpet specifications and the word/coordinate arithmetic everything else
//! is built on.
//!
//! A carpet is described by a subdivision base `N >= 2` and a digit set
//! `D` of pairs `(a, b)` with `0 <= a, b < N`. Each digit `i` names the
//! contraction `x -> (x + i) / N`, and the attractor of that system is the
//! carpet. Digits use mathematical orientation: `a` grows rightwards, `b`
//! grows upwards.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};
use serde::Deserialize;
use thiserror::Error;

/// A single subdivision digit `(x, y)` with both coordinates below the base.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Digit {
    pub x: u32,
    pub y: u32,
}

impl Digit {
    pub fn new(x: u32, y: u32) -> Self {
        Digit { x, y }
    }
}

impl fmt::Display for Digit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Errors raised while validating a carpet specification.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("TrivialDigitSet: need 1 < |D| < N^2, got |D| = {got} with N = {n_base}")]
    TrivialDigitSet { got: usize, n_base: u32 },
    #[error("DigitOutOfRange: digit {digit} does not fit base {n_base}")]
    DigitOutOfRange { digit: Digit, n_base: u32 },
    #[error("DuplicateDigit: digit {digit} listed more than once")]
    DuplicateDigit { digit: Digit },
    #[error("BadBase: subdivision base must be at least 2, got {got}")]
    BadBase { got: u32 },
    #[error("ParseError: {0}")]
    Parse(String),
}

/// Errors raised by word-level operations.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("LetterNotInDigitSet: letter {letter} is not a digit of this carpet")]
    LetterNotInDigitSet { letter: Digit },
    #[error("LevelMismatch: expected words of equal length, got {left} and {right}")]
    LevelMismatch { left: usize, right: usize },
    #[error("EmptyWord: this operation needs a word of length at least 1")]
    EmptyWord,
}

/// One of the four sides of the unit square.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Side {
    Left,
    Right,
    Top,
    Bottom,
}

/// One of the four corners of the unit square.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Corner {
    BottomLeft,
    BottomRight,
    TopLeft,
    TopRight,
}

impl Corner {
    pub const ALL: [Corner; 4] = [
        Corner::BottomLeft,
        Corner::BottomRight,
        Corner::TopLeft,
        Corner::TopRight,
    ];

    /// The corner as a point of the unit square, `(0|1, 0|1)`.
    pub fn unit(self) -> (u32, u32) {
        match self {
            Corner::BottomLeft => (0, 0),
            Corner::BottomRight => (1, 0),
            Corner::TopLeft => (0, 1),
            Corner::TopRight => (1, 1),
        }
    }

    /// The extreme digit whose presence puts this corner of the square in the carpet.
    pub fn extreme_digit(self, n_base: u32) -> Digit {
        let (cx, cy) = self.unit();
        Digit::new(cx * (n_base - 1), cy * (n_base - 1))
    }
}

/// One of the eight neighbor positions of a grid square.
///
/// Canonical order is ascending by `(dx, dy)` offset so every table and
/// traversal below is deterministic.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Direction {
    DownLeft,
    Left,
    UpLeft,
    Down,
    Up,
    DownRight,
    Right,
    UpRight,
}

impl Direction {
    pub const ALL: [Direction; 8] = [
        Direction::DownLeft,
        Direction::Left,
        Direction::UpLeft,
        Direction::Down,
        Direction::Up,
        Direction::DownRight,
        Direction::Right,
        Direction::UpRight,
    ];

    pub fn offset(self) -> (i32, i32) {
        match self {
            Direction::DownLeft => (-1, -1),
            Direction::Left => (-1, 0),
            Direction::UpLeft => (-1, 1),
            Direction::Down => (0, -1),
            Direction::Up => (0, 1),
            Direction::DownRight => (1, -1),
            Direction::Right => (1, 0),
            Direction::UpRight => (1, 1),
        }
    }

    pub fn from_offset(dx: i32, dy: i32) -> Option<Direction> {
        match (dx, dy) {
            (-1, -1) => Some(Direction::DownLeft),
            (-1, 0) => Some(Direction::Left),
            (-1, 1) => Some(Direction::UpLeft),
            (0, -1) => Some(Direction::Down),
            (0, 1) => Some(Direction::Up),
            (1, -1) => Some(Direction::DownRight),
            (1, 0) => Some(Direction::Right),
            (1, 1) => Some(Direction::UpRight),
            _ => None,
        }
    }

    pub fn reverse(self) -> Direction {
        let (dx, dy) = self.offset();
        Direction::from_offset(-dx, -dy).unwrap()
    }

    /// True for the four side positions, false for the diagonals.
    pub fn is_edge(self) -> bool {
        let (dx, dy) = self.offset();
        dx == 0 || dy == 0
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Direction::Up => "up",
            Direction::Down => "down",
            Direction::Left => "left",
            Direction::Right => "right",
            Direction::UpLeft => "up-left",
            Direction::UpRight => "up-right",
            Direction::DownLeft => "down-left",
            Direction::DownRight => "down-right",
        };
        f.write_str(s)
    }
}

/// Relation between two same-level grid squares.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RelativePosition {
    Same,
    Edge(Direction),
    Corner(Direction),
    Far,
}

/// A finite word over the digit set; level 0 (the empty word) is legal and
/// names the whole carpet.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CellWord {
    letters: Vec<Digit>,
}

impl CellWord {
    pub fn new(letters: Vec<Digit>) -> Self {
        CellWord { letters }
    }

    pub fn empty() -> Self {
        CellWord { letters: Vec::new() }
    }

    pub fn letters(&self) -> &[Digit] {
        &self.letters
    }

    pub fn level(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The prefix of length `k`.
    pub fn prefix(&self, k: usize) -> CellWord {
        CellWord::new(self.letters[..k].to_vec())
    }

    /// The suffix starting at position `k`.
    pub fn suffix(&self, k: usize) -> CellWord {
        CellWord::new(self.letters[k..].to_vec())
    }

    pub fn is_prefix_of(&self, other: &CellWord) -> bool {
        other.letters.len() >= self.letters.len()
            && other.letters[..self.letters.len()] == self.letters[..]
    }

    pub fn concat(&self, other: &CellWord) -> CellWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        CellWord::new(letters)
    }

    pub fn push(&self, d: Digit) -> CellWord {
        let mut letters = self.letters.clone();
        letters.push(d);
        CellWord::new(letters)
    }

    /// The word repeated `k` times.
    pub fn repeat(&self, k: usize) -> CellWord {
        let mut letters = Vec::with_capacity(self.letters.len() * k);
        for _ in 0..k {
            letters.extend_from_slice(&self.letters);
        }
        CellWord::new(letters)
    }
}

impl fmt::Display for CellWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("()");
        }
        for d in &self.letters {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Lattice coordinates of the level-`k` square addressed by a word: the
/// square spans `[x, x+1] x [y, y+1]` in units of `N^-k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GridPosition {
    pub x: u64,
    pub y: u64,
    pub level: u32,
}

/// An exact point of the unit square.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RationalPoint {
    x: BigRational,
    y: BigRational,
}

impl RationalPoint {
    pub fn new(x: BigRational, y: BigRational) -> Option<RationalPoint> {
        let zero = BigRational::zero();
        let one = BigRational::one();
        if x < zero || x > one || y < zero || y > one {
            return None;
        }
        Some(RationalPoint { x, y })
    }

    pub fn from_ints(xn: i64, xd: i64, yn: i64, yd: i64) -> Option<RationalPoint> {
        RationalPoint::new(
            BigRational::new(BigInt::from(xn), BigInt::from(xd)),
            BigRational::new(BigInt::from(yn), BigInt::from(yd)),
        )
    }

    pub fn x(&self) -> &BigRational {
        &self.x
    }

    pub fn y(&self) -> &BigRational {
        &self.y
    }
}

/// Renders a rational without a denominator when it is an integer.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses "P/Q" or a bare integer into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => {
            let n = BigInt::from_str(s).ok()?;
            Some(BigRational::from_integer(n))
        }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", format_rational(&self.x), format_rational(&self.y))
    }
}

#[derive(Deserialize)]
struct SpecDoc {
    n: u32,
    digits: Vec<(u32, u32)>,
}

/// A validated carpet specification.
///
/// Digits are stored sorted by `(x, y)`, and every enumeration in the crate
/// follows that order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GscSpec {
    n_base: u32,
    digits: Vec<Digit>,
}

impl GscSpec {
    /// Validates and canonicalizes a specification.
    pub fn new(
        n_base: u32,
        digits: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<GscSpec, SpecError> {
        if n_base < 2 {
            return Err(SpecError::BadBase { got: n_base });
        }
        let mut seen = BTreeSet::new();
        for (x, y) in digits {
            let digit = Digit::new(x, y);
            if x >= n_base || y >= n_base {
                return Err(SpecError::DigitOutOfRange { digit, n_base });
            }
            if !seen.insert(digit) {
                return Err(SpecError::DuplicateDigit { digit });
            }
        }
        let count = seen.len();
        if count <= 1 || count as u64 >= n_base as u64 * n_base as u64 {
            return Err(SpecError::TrivialDigitSet { got: count, n_base });
        }
        Ok(GscSpec {
            n_base,
            digits: seen.into_iter().collect(),
        })
    }

    /// Reads the structured text form `{"n": 3, "digits": [[0,0],[1,0],...]}`.
    pub fn from_json_str(text: &str) -> Result<GscSpec, SpecError> {
        let doc: SpecDoc =
            serde_json::from_str(text).map_err(|e| SpecError::Parse(e.to_string()))?;
        GscSpec::new(doc.n, doc.digits)
    }

    pub fn n_base(&self) -> u32 {
        self.n_base
    }

    /// Digits in canonical order.
    pub fn digits(&self) -> &[Digit] {
        &self.digits
    }

    pub fn digit_count(&self) -> usize {
        self.digits.len()
    }

    pub fn contains(&self, d: Digit) -> bool {
        self.digits.binary_search(&d).is_ok()
    }

    pub fn digit_index(&self, d: Digit) -> Option<usize> {
        self.digits.binary_search(&d).ok()
    }

    /// Builds a word, checking every letter against the digit set.
    pub fn word(&self, letters: &[(u32, u32)]) -> Result<CellWord, WordError> {
        let mut out = Vec::with_capacity(letters.len());
        for &(x, y) in letters {
            let d = Digit::new(x, y);
            if !self.contains(d) {
                return Err(WordError::LetterNotInDigitSet { letter: d });
            }
            out.push(d);
        }
        Ok(CellWord::new(out))
    }

    /// Checks that every letter of `w` belongs to this digit set.
    pub fn check_word(&self, w: &CellWord) -> Result<(), WordError> {
        for &d in w.letters() {
            if !self.contains(d) {
                return Err(WordError::LetterNotInDigitSet { letter: d });
            }
        }
        Ok(())
    }

    /// `|D|^n` as a u128; `None` on overflow.
    pub fn cell_count(&self, n: u32) -> Option<u128> {
        (self.digit_count() as u128).checked_pow(n)
    }

    /// Lattice coordinates of a word's square. Componentwise this is the
    /// base-N value of the digit string, most significant letter first.
    ///
    /// Panics when the coordinates exceed `u64` range; all in-scope callers
    /// stay far below that (the explicit-graph cap bounds the level).
    pub fn word_to_grid(&self, w: &CellWord) -> GridPosition {
        let n = self.n_base as u64;
        let mut x: u64 = 0;
        let mut y: u64 = 0;
        for d in w.letters() {
            x = x
                .checked_mul(n)
                .and_then(|v| v.checked_add(d.x as u64))
                .expect("grid coordinate exceeds u64");
            y = y
                .checked_mul(n)
                .and_then(|v| v.checked_add(d.y as u64))
                .expect("grid coordinate exceeds u64");
        }
        GridPosition {
            x,
            y,
            level: w.level() as u32,
        }
    }

    /// Inverse of `word_to_grid` at the same level; `None` when the square at
    /// that position is not addressed by digits of this carpet.
    pub fn grid_to_word(&self, pos: GridPosition) -> Option<CellWord> {
        let n = self.n_base as u64;
        let mut letters = vec![Digit::new(0, 0); pos.level as usize];
        let (mut x, mut y) = (pos.x, pos.y);
        for slot in letters.iter_mut().rev() {
            *slot = Digit::new((x % n) as u32, (y % n) as u32);
            x /= n;
            y /= n;
        }
        if x != 0 || y != 0 {
            return None;
        }
        let word = CellWord::new(letters);
        self.check_word(&word).ok()?;
        Some(word)
    }

    /// The digit set of the one-dimensional self-similar set carried by one
    /// side of the carpet, e.g. `{b : (N-1, b) in D}` for the right side.
    pub fn boundary_digit_set(&self, side: Side) -> BTreeSet<u32> {
        let last = self.n_base - 1;
        self.digits
            .iter()
            .filter_map(|d| match side {
                Side::Left if d.x == 0 => Some(d.y),
                Side::Right if d.x == last => Some(d.y),
                Side::Bottom if d.y == 0 => Some(d.x),
                Side::Top if d.y == last => Some(d.x),
                _ => None,
            })
            .collect()
    }

    /// Whether the given corner of the unit square belongs to the carpet.
    pub fn corner_in_f(&self, corner: Corner) -> bool {
        self.contains(corner.extreme_digit(self.n_base))
    }

    /// The unique fixed point of the contraction named by a non-empty word,
    /// i.e. the value of the purely periodic radix expansion `w^inf`.
    pub fn fixed_point(&self, w: &CellWord) -> Result<RationalPoint, WordError> {
        if w.is_empty() {
            return Err(WordError::EmptyWord);
        }
        self.check_word(w)?;
        let n = BigInt::from(self.n_base);
        let mut ox = BigInt::zero();
        let mut oy = BigInt::zero();
        let mut scale = BigInt::one();
        for d in w.letters() {
            ox = &ox * &n + BigInt::from(d.x);
            oy = &oy * &n + BigInt::from(d.y);
            scale *= &n;
        }
        let den = scale - BigInt::one();
        let point = RationalPoint::new(
            BigRational::new(ox, den.clone()),
            BigRational::new(oy, den),
        )
        .expect("fixed point always lies in the unit square");
        Ok(point)
    }
}

/// Classifies two same-level squares by their grid offset.
pub fn relative_position(
    a: &CellWord,
    b: &CellWord,
    n_base: u32,
) -> Result<RelativePosition, WordError> {
    if a.level() != b.level() {
        return Err(WordError::LevelMismatch {
            left: a.level(),
            right: b.level(),
        });
    }
    let (dx, dy) = grid_offset_saturating(a, b, n_base);
    Ok(classify_offset(dx, dy))
}

pub(crate) fn classify_offset(dx: i32, dy: i32) -> RelativePosition {
    if dx.abs() > 1 || dy.abs() > 1 {
        RelativePosition::Far
    } else if dx == 0 && dy == 0 {
        RelativePosition::Same
    } else {
        let dir = Direction::from_offset(dx, dy).unwrap();
        if dir.is_edge() {
            RelativePosition::Edge(dir)
        } else {
            RelativePosition::Corner(dir)
        }
    }
}

/// Componentwise grid offset `b - a` of two same-level squares, saturated to
/// `[-2, 2]`. Once a partial offset leaves `[-1, 1]` it can never come back
/// (the next step multiplies by N and adds at most N-1 in absolute value),
/// so saturating at 2 preserves the adjacency classification at any depth
/// without big integers.
pub(crate) fn grid_offset_saturating(a: &CellWord, b: &CellWord, n_base: u32) -> (i32, i32) {
    debug_assert_eq!(a.level(), b.level());
    let n = n_base as i64;
    let clamp = |v: i64| v.clamp(-2, 2);
    let mut dx: i64 = 0;
    let mut dy: i64 = 0;
    for (da, db) in a.letters().iter().zip(b.letters()) {
        dx = clamp(dx * n + (db.x as i64 - da.x as i64));
        dy = clamp(dy * n + (db.y as i64 - da.y as i64));
    }
    (dx as i32, dy as i32)
}

/// The grid square adjacent to `w`'s square in direction `dir`, as a raw
/// digit string (letters may fall outside the digit set). `None` when the
/// neighbor square lies outside the unit square.
pub(crate) fn neighbor_square_letters(
    w: &CellWord,
    dir: Direction,
    n_base: u32,
) -> Option<Vec<Digit>> {
    let (dx, dy) = dir.offset();
    let xs = shift_digit_string(w.letters().iter().map(|d| d.x), dx, n_base)?;
    let ys = shift_digit_string(w.letters().iter().map(|d| d.y), dy, n_base)?;
    Some(
        xs.into_iter()
            .zip(ys)
            .map(|(x, y)| Digit::new(x, y))
            .collect(),
    )
}

/// Adds `delta` (in `{-1, 0, 1}`) to a base-N digit string, least significant
/// digit last. `None` when the result would leave `[0, N^k)`.
fn shift_digit_string(
    digits: impl Iterator<Item = u32>,
    delta: i32,
    n_base: u32,
) -> Option<Vec<u32>> {
    let mut out: Vec<u32> = digits.collect();
    match delta {
        0 => Some(out),
        1 => {
            for i in (0..out.len()).rev() {
                if out[i] + 1 < n_base {
                    out[i] += 1;
                    return Some(out);
                }
                out[i] = 0;
            }
            None
        }
        -1 => {
            for i in (0..out.len()).rev() {
                if out[i] > 0 {
                    out[i] -= 1;
                    return Some(out);
                }
                out[i] = n_base - 1;
            }
            None
        }
        _ => unreachable!("only unit shifts are used"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

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

    #[test]
    fn validate_accepts_sierpinski() {
        let spec = sierpinski();
        assert_eq!(spec.digit_count(), 8);
        assert_eq!(spec.n_base(), 3);
    }

    #[test]
    fn validate_rejects_full_grid() {
        let all = (0..3).flat_map(|x| (0..3).map(move |y| (x, y)));
        assert!(matches!(
            GscSpec::new(3, all),
            Err(SpecError::TrivialDigitSet { got: 9, .. })
        ));
    }

    #[test]
    fn validate_rejects_out_of_range() {
        assert!(matches!(
            GscSpec::new(3, [(0, 0), (3, 1)]),
            Err(SpecError::DigitOutOfRange { .. })
        ));
    }

    #[test]
    fn validate_rejects_duplicates_and_singletons() {
        assert!(matches!(
            GscSpec::new(3, [(0, 0), (0, 0), (1, 1)]),
            Err(SpecError::DuplicateDigit { .. })
        ));
        assert!(matches!(
            GscSpec::new(3, [(0, 0)]),
            Err(SpecError::TrivialDigitSet { got: 1, .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let spec = GscSpec::from_json_str(r#"{"n": 3, "digits": [[0,0],[1,0],[2,0]]}"#).unwrap();
        assert_eq!(spec.n_base(), 3);
        assert_eq!(spec.digit_count(), 3);
    }

    #[test]
    fn word_to_grid_examples() {
        let spec = sierpinski();
        let w = spec.word(&[(1, 0), (1, 0)]).unwrap();
        let g = spec.word_to_grid(&w);
        assert_eq!((g.x, g.y, g.level), (4, 0, 2));

        let empty = spec.word(&[]).unwrap();
        let g0 = spec.word_to_grid(&empty);
        assert_eq!((g0.x, g0.y, g0.level), (0, 0, 0));

        let spec6 = GscSpec::new(6, [(2, 3), (5, 0), (0, 0)]).unwrap();
        let w6 = spec6.word(&[(2, 3), (5, 0)]).unwrap();
        let g6 = spec6.word_to_grid(&w6);
        assert_eq!((g6.x, g6.y), (17, 18));
    }

    #[test]
    fn grid_round_trip_exhaustive_small_levels() {
        for spec in [
            sierpinski(),
            goodcp(),
            GscSpec::new(3, [(0, 0), (1, 1), (2, 2)]).unwrap(),
        ] {
            let d = spec.digit_count();
            for level in 0..=4usize {
                let total = d.pow(level as u32);
                for code in 0..total {
                    let mut letters = Vec::with_capacity(level);
                    let mut c = code;
                    for _ in 0..level {
                        letters.push(spec.digits()[c % d]);
                        c /= d;
                    }
                    let w = CellWord::new(letters);
                    let g = spec.word_to_grid(&w);
                    assert_eq!(spec.grid_to_word(g).as_ref(), Some(&w));
                }
            }
        }
    }

    #[test]
    fn relative_position_examples() {
        let spec = sierpinski();
        let a = spec.word(&[(0, 0)]).unwrap();
        let b = spec.word(&[(1, 0)]).unwrap();
        assert_eq!(
            relative_position(&a, &b, 3).unwrap(),
            RelativePosition::Edge(Direction::Right)
        );

        let c = spec.word(&[(0, 1)]).unwrap();
        assert_eq!(
            relative_position(&c, &b, 3).unwrap(),
            RelativePosition::Corner(Direction::DownRight)
        );

        let u = spec.word(&[(0, 0), (0, 0)]).unwrap();
        let v = spec.word(&[(2, 2), (0, 0)]).unwrap();
        assert_eq!(relative_position(&u, &v, 3).unwrap(), RelativePosition::Far);

        assert!(matches!(
            relative_position(&a, &u, 3),
            Err(WordError::LevelMismatch { .. })
        ));
    }

    #[test]
    fn relative_position_symmetry() {
        // pos(i, j) is pos(j, i) with the direction reversed.
        let spec = goodcp();
        let words: Vec<CellWord> = {
            let d = spec.digit_count();
            (0..d * d)
                .map(|c| CellWord::new(vec![spec.digits()[c % d], spec.digits()[c / d]]))
                .collect()
        };
        for a in &words {
            for b in &words {
                let ab = relative_position(a, b, 3).unwrap();
                let ba = relative_position(b, a, 3).unwrap();
                match (ab, ba) {
                    (RelativePosition::Same, RelativePosition::Same) => {}
                    (RelativePosition::Far, RelativePosition::Far) => {}
                    (RelativePosition::Edge(d1), RelativePosition::Edge(d2)) => {
                        assert_eq!(d1.reverse(), d2)
                    }
                    (RelativePosition::Corner(d1), RelativePosition::Corner(d2)) => {
                        assert_eq!(d1.reverse(), d2)
                    }
                    other => panic!("asymmetric classification: {other:?}"),
                }
            }
        }
    }

    #[test]
    fn boundary_digit_sets() {
        assert_eq!(
            sierpinski().boundary_digit_set(Side::Right),
            BTreeSet::from([0, 1, 2])
        );
        assert_eq!(goodcp().boundary_digit_set(Side::Top), BTreeSet::from([0, 2]));
        let diag = GscSpec::new(3, [(0, 0), (1, 1), (2, 2)]).unwrap();
        assert_eq!(diag.boundary_digit_set(Side::Left), BTreeSet::from([0]));
    }

    #[test]
    fn corners() {
        assert!(sierpinski().corner_in_f(Corner::TopRight));
        assert!(goodcp().corner_in_f(Corner::TopLeft));
        let bottom = GscSpec::new(3, [(0, 0), (1, 0), (2, 0)]).unwrap();
        assert!(!bottom.corner_in_f(Corner::TopLeft));
    }

    #[test]
    fn fixed_points() {
        let spec = goodcp();
        let w = spec.word(&[(1, 0)]).unwrap();
        let p = spec.fixed_point(&w).unwrap();
        assert_eq!(p, RationalPoint::from_ints(1, 2, 0, 1).unwrap());

        let z = spec.word(&[(0, 0)]).unwrap();
        assert_eq!(
            spec.fixed_point(&z).unwrap(),
            RationalPoint::from_ints(0, 1, 0, 1).unwrap()
        );

        let spec2 = GscSpec::new(3, [(1, 0), (2, 1), (0, 0)]).unwrap();
        let w2 = spec2.word(&[(1, 0), (2, 1)]).unwrap();
        assert_eq!(
            spec2.fixed_point(&w2).unwrap(),
            RationalPoint::from_ints(5, 8, 1, 8).unwrap()
        );

        assert!(matches!(
            spec.fixed_point(&CellWord::empty()),
            Err(WordError::EmptyWord)
        ));
    }

    #[test]
    fn fixed_point_of_repeated_word_is_unchanged() {
        let spec = goodcp();
        for letters in [
            vec![(1, 0)],
            vec![(1, 0), (2, 1)],
            vec![(0, 2), (2, 2), (1, 0)],
        ] {
            let w = spec.word(&letters).unwrap();
            let p = spec.fixed_point(&w).unwrap();
            for k in 2..=4 {
                assert_eq!(spec.fixed_point(&w.repeat(k)).unwrap(), p);
            }
        }
    }

    #[test]
    fn neighbor_square_arithmetic() {
        let spec = sierpinski();
        let w = spec.word(&[(0, 0), (2, 2)]).unwrap();
        // x digits 02 + 1 = 10, y digits 02 unchanged
        let right = neighbor_square_letters(&w, Direction::Right, 3).unwrap();
        assert_eq!(right, vec![Digit::new(1, 0), Digit::new(0, 2)]);
        // stepping left from x = 00 leaves the unit square
        let w0 = spec.word(&[(0, 0), (0, 0)]).unwrap();
        assert!(neighbor_square_letters(&w0, Direction::Left, 3).is_none());
    }

    #[test]
    fn rational_formatting() {
        let p = RationalPoint::from_ints(1, 2, 0, 1).unwrap();
        assert_eq!(p.to_string(), "1/2,0");
        assert_eq!(parse_rational("2/4"), parse_rational("1/2"));
        assert_eq!(
            parse_rational("3").unwrap(),
            BigRational::from_integer(3.into())
        );
        assert!(parse_rational("1/0").is_none());
    }
}
