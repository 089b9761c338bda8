//! Classifies intersections of carpet cells (equal or unequal levels) as
//! empty, a single point, or more.
//!
//! Two same-level cells in adjacent grid squares meet inside the shared
//! boundary piece of the squares, and by self-similarity the class of that
//! intersection depends only on the relative position of the squares. The
//! eight classes are precomputed once per carpet in a [`NeighborTable`]:
//! side positions intersect the opposing one-dimensional boundary systems,
//! diagonal positions meet in the shared corner when both carpets contain
//! the respective corner point.

use num::bigint::BigInt;
use num::rational::BigRational;
use thiserror::Error;

use crate::gsc::{
    classify_offset, grid_offset_saturating, neighbor_square_letters, CellWord, Direction,
    GscSpec, RationalPoint, RelativePosition, Side, WordError,
};
use crate::radix::{self, SetClass};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AdjacencyError {
    #[error("InvalidWord: {0}")]
    InvalidWord(#[from] WordError),
}

/// Intersection class of two cells, with the exact contact point of a
/// singleton intersection.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IntersectionClass {
    Empty,
    Singleton(RationalPoint),
    Multiple,
}

impl IntersectionClass {
    pub fn is_empty(&self) -> bool {
        matches!(self, IntersectionClass::Empty)
    }

    pub fn kind(&self) -> SetClass {
        match self {
            IntersectionClass::Empty => SetClass::Empty,
            IntersectionClass::Singleton(_) => SetClass::Singleton,
            IntersectionClass::Multiple => SetClass::Multiple,
        }
    }
}

/// Per-direction intersection classes for a pair of same-level cells, with
/// singleton contact points in the center cell's unit coordinates.
#[derive(Clone, Debug)]
pub struct NeighborTable {
    entries: [IntersectionClass; 8],
}

impl NeighborTable {
    pub fn entry(&self, dir: Direction) -> &IntersectionClass {
        &self.entries[dir.index()]
    }

    /// True when cells in this relative position intersect at all.
    pub fn touches(&self, dir: Direction) -> bool {
        !self.entries[dir.index()].is_empty()
    }
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the eight per-direction intersection classes of a carpet.
pub fn neighbor_table(spec: &GscSpec) -> NeighborTable {
    let n = spec.n_base();
    let side_entry = |ours: Side, theirs: Side, place: &dyn Fn(BigRational) -> RationalPoint| {
        let a = spec.boundary_digit_set(ours);
        let b = spec.boundary_digit_set(theirs);
        if a.is_empty() || b.is_empty() {
            return IntersectionClass::Empty;
        }
        match radix::intersect_class(&a, &b, n).unwrap() {
            SetClass::Empty => IntersectionClass::Empty,
            SetClass::Multiple => IntersectionClass::Multiple,
            SetClass::Singleton => {
                let v = radix::singleton_value(&a, &b, n).unwrap();
                IntersectionClass::Singleton(place(v))
            }
        }
    };
    let corner_entry = |ours: crate::gsc::Corner, theirs: crate::gsc::Corner| {
        if spec.corner_in_f(ours) && spec.corner_in_f(theirs) {
            let (cx, cy) = ours.unit();
            IntersectionClass::Singleton(
                RationalPoint::new(ratio(cx as i64, 1), ratio(cy as i64, 1)).unwrap(),
            )
        } else {
            IntersectionClass::Empty
        }
    };
    use crate::gsc::Corner::*;
    let mut entries = std::array::from_fn(|_| IntersectionClass::Empty);
    for dir in Direction::ALL {
        let entry = match dir {
            Direction::Right => side_entry(Side::Right, Side::Left, &|v| {
                RationalPoint::new(ratio(1, 1), v).unwrap()
            }),
            Direction::Left => side_entry(Side::Left, Side::Right, &|v| {
                RationalPoint::new(ratio(0, 1), v).unwrap()
            }),
            Direction::Up => side_entry(Side::Top, Side::Bottom, &|v| {
                RationalPoint::new(v, ratio(1, 1)).unwrap()
            }),
            Direction::Down => side_entry(Side::Bottom, Side::Top, &|v| {
                RationalPoint::new(v, ratio(0, 1)).unwrap()
            }),
            Direction::UpRight => corner_entry(TopRight, BottomLeft),
            Direction::UpLeft => corner_entry(TopLeft, BottomRight),
            Direction::DownRight => corner_entry(BottomRight, TopLeft),
            Direction::DownLeft => corner_entry(BottomLeft, TopRight),
        };
        entries[dir.index()] = entry;
    }
    NeighborTable { entries }
}

/// Lower-left corner of a word's square in unit coordinates.
fn cell_origin(spec: &GscSpec, w: &CellWord) -> (BigRational, BigRational) {
    let n = BigInt::from(spec.n_base());
    let mut x = BigInt::from(0);
    let mut y = BigInt::from(0);
    let mut scale = BigInt::from(1);
    for d in w.letters() {
        x = &x * &n + BigInt::from(d.x);
        y = &y * &n + BigInt::from(d.y);
        scale *= &n;
    }
    (
        BigRational::new(x, scale.clone()),
        BigRational::new(y, scale),
    )
}

/// Maps a point from a cell's local unit coordinates to absolute ones.
fn to_absolute(spec: &GscSpec, w: &CellWord, local: &RationalPoint) -> RationalPoint {
    let (ox, oy) = cell_origin(spec, w);
    let scale = BigRational::new(
        BigInt::from(1),
        BigInt::from(spec.n_base()).pow(w.level() as u32),
    );
    RationalPoint::new(ox + local.x() * &scale, oy + local.y() * &scale)
        .expect("contact point stays inside the unit square")
}

/// Intersection class of two arbitrary cells.
///
/// When one word is a prefix of the other (or they are equal) the finer cell
/// is contained in the coarser one and the intersection has more than one
/// point, so the answer is Multiple by convention.
pub fn cells_intersection_class(
    spec: &GscSpec,
    i: &CellWord,
    j: &CellWord,
) -> Result<IntersectionClass, AdjacencyError> {
    let table = neighbor_table(spec);
    cells_intersection_class_with(spec, &table, i, j)
}

/// As [`cells_intersection_class`], reusing a precomputed table.
pub fn cells_intersection_class_with(
    spec: &GscSpec,
    table: &NeighborTable,
    i: &CellWord,
    j: &CellWord,
) -> Result<IntersectionClass, AdjacencyError> {
    spec.check_word(i).map_err(AdjacencyError::from)?;
    spec.check_word(j).map_err(AdjacencyError::from)?;
    if i.is_prefix_of(j) || j.is_prefix_of(i) {
        return Ok(IntersectionClass::Multiple);
    }
    let (coarse, fine) = if i.level() <= j.level() { (i, j) } else { (j, i) };
    if coarse.level() == fine.level() {
        let (dx, dy) = grid_offset_saturating(coarse, fine, spec.n_base());
        return Ok(match classify_offset(dx, dy) {
            RelativePosition::Same => unreachable!("equal words handled above"),
            RelativePosition::Far => IntersectionClass::Empty,
            RelativePosition::Edge(dir) | RelativePosition::Corner(dir) => {
                match table.entry(dir) {
                    IntersectionClass::Empty => IntersectionClass::Empty,
                    IntersectionClass::Multiple => IntersectionClass::Multiple,
                    IntersectionClass::Singleton(p) => {
                        IntersectionClass::Singleton(to_absolute(spec, coarse, p))
                    }
                }
            }
        });
    }
    // Cross-level: the coarse square must be adjacent to the fine cell's
    // ancestor square at the coarse level, otherwise the boxes are disjoint.
    let ancestor = fine.prefix(coarse.level());
    let (dx, dy) = grid_offset_saturating(coarse, &ancestor, spec.n_base());
    if matches!(classify_offset(dx, dy), RelativePosition::Far) {
        return Ok(IntersectionClass::Empty);
    }
    // Only the <= 8 same-level neighbors of the fine square can meet it; keep
    // the ones lying inside the coarse cell.
    let mut points: Vec<RationalPoint> = Vec::new();
    for dir in Direction::ALL {
        let entry = table.entry(dir);
        if entry.is_empty() {
            continue;
        }
        let Some(neighbor) = neighbor_square_letters(fine, dir, spec.n_base()) else {
            continue;
        };
        if neighbor[..coarse.level()] != *coarse.letters() {
            continue;
        }
        if neighbor.iter().any(|&d| !spec.contains(d)) {
            continue;
        }
        match entry {
            IntersectionClass::Multiple => return Ok(IntersectionClass::Multiple),
            IntersectionClass::Singleton(p) => {
                let abs = to_absolute(spec, fine, p);
                if !points.contains(&abs) {
                    points.push(abs);
                }
            }
            IntersectionClass::Empty => unreachable!(),
        }
    }
    Ok(match points.len() {
        0 => IntersectionClass::Empty,
        1 => IntersectionClass::Singleton(points.pop().unwrap()),
        _ => IntersectionClass::Multiple,
    })
}

/// The neighbor word `w(t)`: the same-level cell in position `t` whose cell
/// actually meets `w`'s cell. `None` when the square leaves the unit square,
/// is not addressed by the digit set, or has empty contact.
pub fn position_neighbor(spec: &GscSpec, w: &CellWord, t: Direction) -> Option<CellWord> {
    let table = neighbor_table(spec);
    position_neighbor_with(spec, &table, w, t)
}

/// As [`position_neighbor`], reusing a precomputed table.
pub fn position_neighbor_with(
    spec: &GscSpec,
    table: &NeighborTable,
    w: &CellWord,
    t: Direction,
) -> Option<CellWord> {
    if !table.touches(t) {
        return None;
    }
    let letters = neighbor_square_letters(w, t, spec.n_base())?;
    if letters.iter().any(|&d| !spec.contains(d)) {
        return None;
    }
    Some(CellWord::new(letters))
}

/// All existing neighbor cells of `w` with their directions.
pub fn position_neighbors(
    spec: &GscSpec,
    table: &NeighborTable,
    w: &CellWord,
) -> Vec<(Direction, CellWord)> {
    Direction::ALL
        .into_iter()
        .filter_map(|t| position_neighbor_with(spec, table, w, t).map(|n| (t, n)))
        .collect()
}
