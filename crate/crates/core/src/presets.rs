//! Named digit sets, including the parametric families with a prescribed
//! number of cut points.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::gsc::GscSpec;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PresetError {
    #[error("UnknownPreset: no preset named {0:?}")]
    UnknownPreset(String),
    #[error("BadParameter: {0}")]
    BadParameter(String),
}

/// A named specification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PresetId {
    /// The standard carpet: base 3 without the center.
    Sierpinski,
    /// Two towers joined by a bottom bridge; exactly one cut point.
    Goodcp,
    /// Countably many cut points.
    Countable,
    /// The unit interval as a carpet; uncountably many cut points.
    Segment,
    /// Three diagonal cells; fragile.
    Diag3,
    /// Zigzag family with exactly `2m - 3` cut points, `m >= 3`.
    OddCuts(u32),
    /// The zigzag family with an extra column: exactly `2m - 4` cut points.
    EvenCuts(u32),
}

impl fmt::Display for PresetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresetId::Sierpinski => write!(f, "sierpinski"),
            PresetId::Goodcp => write!(f, "goodcp"),
            PresetId::Countable => write!(f, "countable"),
            PresetId::Segment => write!(f, "segment"),
            PresetId::Diag3 => write!(f, "diag3"),
            PresetId::OddCuts(m) => write!(f, "oddcuts:{m}"),
            PresetId::EvenCuts(m) => write!(f, "evencuts:{m}"),
        }
    }
}

impl FromStr for PresetId {
    type Err = PresetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse_m = |arg: &str| -> Result<u32, PresetError> {
            let m: u32 = arg
                .parse()
                .map_err(|_| PresetError::BadParameter(format!("bad family parameter {arg:?}")))?;
            if m < 3 {
                return Err(PresetError::BadParameter(format!(
                    "family parameter must be at least 3, got {m}"
                )));
            }
            Ok(m)
        };
        match s {
            "sierpinski" => Ok(PresetId::Sierpinski),
            "goodcp" => Ok(PresetId::Goodcp),
            "countable" => Ok(PresetId::Countable),
            "segment" => Ok(PresetId::Segment),
            "diag3" => Ok(PresetId::Diag3),
            other => match other.split_once(':') {
                Some(("oddcuts", arg)) => Ok(PresetId::OddCuts(parse_m(arg)?)),
                Some(("evencuts", arg)) => Ok(PresetId::EvenCuts(parse_m(arg)?)),
                _ => Err(PresetError::UnknownPreset(other.to_string())),
            },
        }
    }
}

/// The digit set of a preset.
pub fn resolve(id: &PresetId) -> Result<GscSpec, PresetError> {
    let spec = match id {
        PresetId::Sierpinski => GscSpec::new(
            3,
            (0..3)
                .flat_map(|x| (0..3).map(move |y| (x, y)))
                .filter(|&p| p != (1, 1)),
        ),
        PresetId::Goodcp => GscSpec::new(
            3,
            (0..3)
                .flat_map(|x| (0..3).map(move |y| (x, y)))
                .filter(|&p| p != (1, 1) && p != (1, 2)),
        ),
        PresetId::Countable => GscSpec::new(
            3,
            [(0, 1), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)],
        ),
        PresetId::Segment => GscSpec::new(3, [(0, 0), (1, 0), (2, 0)]),
        PresetId::Diag3 => GscSpec::new(3, [(0, 0), (1, 1), (2, 2)]),
        PresetId::OddCuts(m) => GscSpec::new(2 * m, zigzag_digits(*m)),
        PresetId::EvenCuts(m) => {
            let m = *m;
            let mut digits = zigzag_digits(m);
            digits.extend((m..2 * m).map(|i| (2 * m - 2, i)));
            GscSpec::new(2 * m, digits)
        }
    };
    spec.map_err(|e| PresetError::BadParameter(e.to_string()))
}

/// The zigzag digit set: full columns on both outer edges, and staircase
/// column pairs `(k, lower half) + (k+1, upper half)` for even k.
fn zigzag_digits(m: u32) -> Vec<(u32, u32)> {
    let mut digits: Vec<(u32, u32)> = Vec::new();
    digits.extend((m..2 * m).map(|i| (0, i)));
    digits.extend((0..m).map(|i| (2 * m - 1, i)));
    for k in (0..2 * m - 1).step_by(2) {
        digits.extend((0..m).map(|i| (k, i)));
        digits.extend((m..2 * m).map(|i| (k + 1, i)));
    }
    digits.sort_unstable();
    digits.dedup();
    digits
}

/// The fixed presets, for corpus-style tests.
pub fn fixed_presets() -> Vec<(PresetId, GscSpec)> {
    [
        PresetId::Sierpinski,
        PresetId::Goodcp,
        PresetId::Countable,
        PresetId::Segment,
        PresetId::Diag3,
        PresetId::OddCuts(3),
        PresetId::EvenCuts(3),
    ]
    .into_iter()
    .map(|id| {
        let spec = resolve(&id).expect("fixed presets are valid");
        (id, spec)
    })
    .collect()
}

/// One-line summaries for the preset listing.
pub fn listing() -> Vec<String> {
    let mut out: Vec<String> = fixed_presets()
        .iter()
        .filter(|(id, _)| !matches!(id, PresetId::OddCuts(_) | PresetId::EvenCuts(_)))
        .map(|(id, spec)| format!("{id} N={} |D|={}", spec.n_base(), spec.digit_count()))
        .collect();
    out.push("oddcuts:m N=2m |D|=2m^2+2m (m>=3)".into());
    out.push("evencuts:m N=2m |D|=2m^2+3m (m>=3)".into());
    out
}
