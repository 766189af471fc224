//! Versioned JSON serialization for atoms.
//!
//! Numeric pieces are stored as a named builder plus parameters and are
//! reconstructed from those names on load; evaluator code is never
//! serialized.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

use super::atom::{NumericBuilder, NumericPiece, Piece, PiecewiseAtom, Smoothness, TrigPiece};

const FORMAT: &str = "gaborlab-atom";
const VERSION: u32 = 1;

#[derive(Debug)]
pub enum SerialError {
    Parse(String),
    WrongFormat(String),
    UnsupportedVersion(u32),
    Invalid(String),
}

impl fmt::Display for SerialError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SerialError::Parse(m) => write!(f, "atom file parse error: {m}"),
            SerialError::WrongFormat(m) => write!(f, "not an atom file (format tag {m:?})"),
            SerialError::UnsupportedVersion(v) => write!(f, "unsupported atom format version {v}"),
            SerialError::Invalid(m) => write!(f, "invalid atom contents: {m}"),
        }
    }
}

impl std::error::Error for SerialError {}

#[derive(Serialize, Deserialize)]
struct ComplexDto {
    re: f64,
    im: f64,
}

impl From<Complex64> for ComplexDto {
    fn from(c: Complex64) -> Self {
        ComplexDto { re: c.re, im: c.im }
    }
}

impl From<&ComplexDto> for Complex64 {
    fn from(c: &ComplexDto) -> Self {
        Complex64::new(c.re, c.im)
    }
}

#[derive(Serialize, Deserialize)]
struct TermDto {
    re: f64,
    im: f64,
    freq: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum BuilderDto {
    Poly { coeffs: Vec<ComplexDto> },
    RootComplement { level: f64, inner: Box<AtomDto> },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum PieceDto {
    Trig {
        interval: [f64; 2],
        terms: Vec<TermDto>,
    },
    Numeric {
        interval: [f64; 2],
        builder: BuilderDto,
        offset: f64,
        scale: ComplexDto,
        mod_freq: f64,
        smoothness: String,
    },
}

#[derive(Serialize, Deserialize)]
struct AtomDto {
    format: String,
    version: u32,
    pieces: Vec<PieceDto>,
}

fn atom_to_dto(atom: &PiecewiseAtom) -> AtomDto {
    let pieces = atom
        .pieces()
        .iter()
        .map(|p| match p {
            Piece::Trig(t) => {
                let (a, b) = t.interval();
                PieceDto::Trig {
                    interval: [a, b],
                    terms: t
                        .terms()
                        .iter()
                        .map(|&(c, f)| TermDto {
                            re: c.re,
                            im: c.im,
                            freq: f,
                        })
                        .collect(),
                }
            }
            Piece::Numeric(n) => {
                let (a, b) = n.interval();
                let (offset, scale, mod_freq) = n.wrappers();
                let builder = match n.builder() {
                    NumericBuilder::Poly { coeffs } => BuilderDto::Poly {
                        coeffs: coeffs.iter().map(|&c| c.into()).collect(),
                    },
                    NumericBuilder::RootComplement { level, inner } => {
                        BuilderDto::RootComplement {
                            level: *level,
                            inner: Box::new(atom_to_dto(inner)),
                        }
                    }
                };
                PieceDto::Numeric {
                    interval: [a, b],
                    builder,
                    offset,
                    scale: scale.into(),
                    mod_freq,
                    smoothness: match n.smoothness() {
                        Smoothness::Continuous => "continuous".into(),
                        Smoothness::PiecewiseContinuous => "piecewise_continuous".into(),
                    },
                }
            }
        })
        .collect();
    AtomDto {
        format: FORMAT.into(),
        version: VERSION,
        pieces,
    }
}

fn atom_from_dto(dto: &AtomDto) -> Result<PiecewiseAtom, SerialError> {
    if dto.format != FORMAT {
        return Err(SerialError::WrongFormat(dto.format.clone()));
    }
    if dto.version != VERSION {
        return Err(SerialError::UnsupportedVersion(dto.version));
    }
    let mut pieces = Vec::with_capacity(dto.pieces.len());
    for p in &dto.pieces {
        match p {
            PieceDto::Trig { interval, terms } => {
                let terms = terms
                    .iter()
                    .map(|t| (Complex64::new(t.re, t.im), t.freq))
                    .collect();
                let piece = TrigPiece::new(interval[0], interval[1], terms)
                    .map_err(|e| SerialError::Invalid(e.to_string()))?;
                pieces.push(Piece::Trig(piece));
            }
            PieceDto::Numeric {
                interval,
                builder,
                offset,
                scale,
                mod_freq,
                smoothness,
            } => {
                let builder = match builder {
                    BuilderDto::Poly { coeffs } => NumericBuilder::Poly {
                        coeffs: coeffs.iter().map(Complex64::from).collect(),
                    },
                    BuilderDto::RootComplement { level, inner } => {
                        NumericBuilder::RootComplement {
                            level: *level,
                            inner: Box::new(atom_from_dto(inner)?),
                        }
                    }
                };
                let smoothness = match smoothness.as_str() {
                    "continuous" => Smoothness::Continuous,
                    "piecewise_continuous" => Smoothness::PiecewiseContinuous,
                    other => {
                        return Err(SerialError::Invalid(format!(
                            "unknown smoothness hint {other:?}"
                        )))
                    }
                };
                let piece = NumericPiece::with_wrappers(
                    interval[0],
                    interval[1],
                    builder,
                    *offset,
                    scale.into(),
                    *mod_freq,
                    smoothness,
                )
                .map_err(|e| SerialError::Invalid(e.to_string()))?;
                pieces.push(Piece::Numeric(piece));
            }
        }
    }
    PiecewiseAtom::new(pieces).map_err(|e| SerialError::Invalid(e.to_string()))
}

pub fn atom_to_json(atom: &PiecewiseAtom) -> String {
    serde_json::to_string_pretty(&atom_to_dto(atom)).expect("atom DTOs always serialize")
}

pub fn atom_from_json(text: &str) -> Result<PiecewiseAtom, SerialError> {
    let dto: AtomDto =
        serde_json::from_str(text).map_err(|e| SerialError::Parse(e.to_string()))?;
    atom_from_dto(&dto)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tfcore::atom::{box_atom, triangle_atom};

    #[test]
    fn trig_round_trip() {
        let atom = box_atom(0.0, 1.0).unwrap().modulate(3.0).translate(0.5);
        let json = atom_to_json(&atom);
        let back = atom_from_json(&json).unwrap();
        for i in 0..16 {
            let x = -0.5 + 0.2 * i as f64;
            assert!((atom.evaluate(x) - back.evaluate(x)).norm() < 1e-15);
        }
    }

    #[test]
    fn numeric_round_trip() {
        let atom = triangle_atom().scale(Complex64::new(0.5, 0.25));
        let json = atom_to_json(&atom);
        let back = atom_from_json(&json).unwrap();
        for i in 0..32 {
            let x = -0.25 + 0.1 * i as f64;
            assert!((atom.evaluate(x) - back.evaluate(x)).norm() < 1e-15);
        }
    }

    #[test]
    fn rejects_garbage_and_wrong_version() {
        assert!(matches!(
            atom_from_json("not json"),
            Err(SerialError::Parse(_))
        ));
        let atom = box_atom(0.0, 1.0).unwrap();
        let json = atom_to_json(&atom).replace("\"version\": 1", "\"version\": 99");
        assert!(matches!(
            atom_from_json(&json),
            Err(SerialError::UnsupportedVersion(99))
        ));
    }
}
