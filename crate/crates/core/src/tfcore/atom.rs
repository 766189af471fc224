//! Piecewise atoms: trig-polynomial and numeric pieces.

use num_complex::Complex64;

use super::TfError;
use crate::phase::unit_phase;

const TAU_OVERLAP: f64 = 1e-12;

/// A finite exponential sum `x ↦ Σ_m c_m · e^{2πi f_m x}` restricted to the
/// half-open interval `[a, b)`. Frequencies need not be integers.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPiece {
    a: f64,
    b: f64,
    terms: Vec<(Complex64, f64)>,
}

impl TrigPiece {
    pub fn new(a: f64, b: f64, terms: Vec<(Complex64, f64)>) -> Result<Self, TfError> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(TfError::InvalidInterval { a, b });
        }
        Ok(TrigPiece { a, b, terms })
    }

    /// Indicator-style piece: the constant `c` on `[a, b)`.
    pub fn constant(a: f64, b: f64, c: Complex64) -> Result<Self, TfError> {
        TrigPiece::new(a, b, vec![(c, 0.0)])
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn terms(&self) -> &[(Complex64, f64)] {
        &self.terms
    }

    /// Pointwise value; exactly zero off `[a, b)`.
    pub fn eval(&self, x: f64) -> Complex64 {
        if x < self.a || x >= self.b {
            return Complex64::new(0.0, 0.0);
        }
        self.eval_unclipped(x)
    }

    pub(crate) fn eval_unclipped(&self, x: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(c, f) in &self.terms {
            acc += c * unit_phase(f * x);
        }
        acc
    }

    fn translate(&self, x0: f64) -> TrigPiece {
        // T_{x0}: interval shifts; each coefficient picks up e^{-2πi f x0}.
        let terms = self
            .terms
            .iter()
            .map(|&(c, f)| (c * unit_phase(-f * x0), f))
            .collect();
        TrigPiece {
            a: self.a + x0,
            b: self.b + x0,
            terms,
        }
    }

    fn modulate(&self, xi: f64) -> TrigPiece {
        let terms = self.terms.iter().map(|&(c, f)| (c, f + xi)).collect();
        TrigPiece {
            a: self.a,
            b: self.b,
            terms,
        }
    }

    fn scale(&self, c: Complex64) -> TrigPiece {
        let terms = self.terms.iter().map(|&(t, f)| (c * t, f)).collect();
        TrigPiece {
            a: self.a,
            b: self.b,
            terms,
        }
    }

    fn conj(&self) -> TrigPiece {
        let terms = self.terms.iter().map(|&(c, f)| (c.conj(), -f)).collect();
        TrigPiece {
            a: self.a,
            b: self.b,
            terms,
        }
    }
}

/// Smoothness hint for numeric pieces, used to steer quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothness {
    Continuous,
    PiecewiseContinuous,
}

/// Named pointwise constructors for content outside the trig-polynomial
/// class. Serialization reconstructs evaluators from these names and their
/// parameters; closures are never serialized.
#[derive(Debug, Clone, PartialEq)]
pub enum NumericBuilder {
    /// `x ↦ Σ_i coeffs[i] · x^i`.
    Poly { coeffs: Vec<Complex64> },
    /// `x ↦ sqrt(level − |inner(x)|²)`, clamped at zero against rounding.
    RootComplement {
        level: f64,
        inner: Box<PiecewiseAtom>,
    },
}

impl NumericBuilder {
    fn base_eval(&self, x: f64) -> Complex64 {
        match self {
            NumericBuilder::Poly { coeffs } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for &c in coeffs.iter().rev() {
                    acc = acc * x + c;
                }
                acc
            }
            NumericBuilder::RootComplement { level, inner } => {
                let v = inner.evaluate(x);
                let rem = level - v.norm_sqr();
                Complex64::new(rem.max(0.0).sqrt(), 0.0)
            }
        }
    }
}

/// A pointwise-evaluable piece on `[a, b)`: `scale · e^{2πi·mod_freq·x} ·
/// builder(x − offset)`. The `offset`/`mod_freq`/`scale` wrappers keep the
/// class closed under translation, modulation, and scalar multiples.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericPiece {
    a: f64,
    b: f64,
    builder: NumericBuilder,
    offset: f64,
    scale: Complex64,
    mod_freq: f64,
    smoothness: Smoothness,
}

impl NumericPiece {
    pub fn new(
        a: f64,
        b: f64,
        builder: NumericBuilder,
        smoothness: Smoothness,
    ) -> Result<Self, TfError> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(TfError::InvalidInterval { a, b });
        }
        Ok(NumericPiece {
            a,
            b,
            builder,
            offset: 0.0,
            scale: Complex64::new(1.0, 0.0),
            mod_freq: 0.0,
            smoothness,
        })
    }

    pub(crate) fn with_wrappers(
        a: f64,
        b: f64,
        builder: NumericBuilder,
        offset: f64,
        scale: Complex64,
        mod_freq: f64,
        smoothness: Smoothness,
    ) -> Result<Self, TfError> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(TfError::InvalidInterval { a, b });
        }
        Ok(NumericPiece {
            a,
            b,
            builder,
            offset,
            scale,
            mod_freq,
            smoothness,
        })
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn builder(&self) -> &NumericBuilder {
        &self.builder
    }

    pub(crate) fn wrappers(&self) -> (f64, Complex64, f64) {
        (self.offset, self.scale, self.mod_freq)
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        if x < self.a || x >= self.b {
            return Complex64::new(0.0, 0.0);
        }
        self.eval_unclipped(x)
    }

    pub(crate) fn eval_unclipped(&self, x: f64) -> Complex64 {
        let mut v = self.builder.base_eval(x - self.offset);
        if self.mod_freq != 0.0 {
            v *= unit_phase(self.mod_freq * x);
        }
        self.scale * v
    }

    fn translate(&self, x0: f64) -> NumericPiece {
        let mut out = self.clone();
        out.a += x0;
        out.b += x0;
        out.offset += x0;
        if self.mod_freq != 0.0 {
            out.scale *= unit_phase(-self.mod_freq * x0);
        }
        out
    }

    fn modulate(&self, xi: f64) -> NumericPiece {
        let mut out = self.clone();
        out.mod_freq += xi;
        out
    }

    fn scale_by(&self, c: Complex64) -> NumericPiece {
        let mut out = self.clone();
        out.scale *= c;
        out
    }
}

/// One piece of an atom.
#[derive(Debug, Clone, PartialEq)]
pub enum Piece {
    Trig(TrigPiece),
    Numeric(NumericPiece),
}

impl Piece {
    pub fn interval(&self) -> (f64, f64) {
        match self {
            Piece::Trig(p) => p.interval(),
            Piece::Numeric(p) => p.interval(),
        }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        match self {
            Piece::Trig(p) => p.eval(x),
            Piece::Numeric(p) => p.eval(x),
        }
    }

    pub(crate) fn eval_unclipped(&self, x: f64) -> Complex64 {
        match self {
            Piece::Trig(p) => p.eval_unclipped(x),
            Piece::Numeric(p) => p.eval_unclipped(x),
        }
    }
}

/// A compactly supported function made of pairwise-disjoint half-open
/// pieces, kept sorted by left endpoint. Endpoint values follow the piece
/// that owns the point (pieces are `[a, b)`).
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseAtom {
    pieces: Vec<Piece>,
}

impl PiecewiseAtom {
    pub fn new(mut pieces: Vec<Piece>) -> Result<Self, TfError> {
        pieces.sort_by(|p, q| {
            p.interval()
                .0
                .partial_cmp(&q.interval().0)
                .expect("finite endpoints")
        });
        for w in pieces.windows(2) {
            let (_, b0) = w[0].interval();
            let (a1, _) = w[1].interval();
            if a1 < b0 - TAU_OVERLAP {
                return Err(TfError::OverlappingPieces {
                    first_end: b0,
                    second_start: a1,
                });
            }
        }
        Ok(PiecewiseAtom { pieces })
    }

    pub fn from_trig(piece: TrigPiece) -> Self {
        PiecewiseAtom {
            pieces: vec![Piece::Trig(piece)],
        }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Smallest closed interval containing the support.
    pub fn support(&self) -> (f64, f64) {
        let lo = self.pieces.first().map(|p| p.interval().0).unwrap_or(0.0);
        let hi = self
            .pieces
            .iter()
            .map(|p| p.interval().1)
            .fold(f64::NEG_INFINITY, f64::max);
        if self.pieces.is_empty() {
            (0.0, 0.0)
        } else {
            (lo, hi)
        }
    }

    pub fn support_len(&self) -> f64 {
        let (lo, hi) = self.support();
        hi - lo
    }

    /// All piece endpoints, sorted and deduplicated.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .pieces
            .iter()
            .flat_map(|p| {
                let (a, b) = p.interval();
                [a, b]
            })
            .collect();
        pts.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
        pts.dedup_by(|x, y| (*x - *y).abs() <= TAU_OVERLAP);
        pts
    }

    /// Pointwise value; exactly zero off the support.
    pub fn evaluate(&self, x: f64) -> Complex64 {
        for p in &self.pieces {
            let (a, b) = p.interval();
            if x >= a && x < b {
                return p.eval_unclipped(x);
            }
            if x < a {
                break;
            }
        }
        Complex64::new(0.0, 0.0)
    }

    pub fn is_all_trig(&self) -> bool {
        self.pieces.iter().all(|p| matches!(p, Piece::Trig(_)))
    }

    /// `T_{x0}`: `(T_{x0} f)(t) = f(t − x0)`.
    pub fn translate(&self, x0: f64) -> PiecewiseAtom {
        let pieces = self
            .pieces
            .iter()
            .map(|p| match p {
                Piece::Trig(t) => Piece::Trig(t.translate(x0)),
                Piece::Numeric(n) => Piece::Numeric(n.translate(x0)),
            })
            .collect();
        PiecewiseAtom { pieces }
    }

    /// `M_ξ`: `(M_ξ f)(t) = e^{2πiξt} f(t)`.
    pub fn modulate(&self, xi: f64) -> PiecewiseAtom {
        let pieces = self
            .pieces
            .iter()
            .map(|p| match p {
                Piece::Trig(t) => Piece::Trig(t.modulate(xi)),
                Piece::Numeric(n) => Piece::Numeric(n.modulate(xi)),
            })
            .collect();
        PiecewiseAtom { pieces }
    }

    pub fn scale(&self, c: Complex64) -> PiecewiseAtom {
        let pieces = self
            .pieces
            .iter()
            .map(|p| match p {
                Piece::Trig(t) => Piece::Trig(t.scale(c)),
                Piece::Numeric(n) => Piece::Numeric(n.scale_by(c)),
            })
            .collect();
        PiecewiseAtom { pieces }
    }

    /// Complex conjugate atom. Only available for trig content, where it
    /// stays in class; numeric pieces are conjugated at evaluation sites
    /// instead.
    pub fn conj_trig(&self) -> Option<PiecewiseAtom> {
        if !self.is_all_trig() {
            return None;
        }
        let pieces = self
            .pieces
            .iter()
            .map(|p| match p {
                Piece::Trig(t) => Piece::Trig(t.conj()),
                Piece::Numeric(_) => unreachable!(),
            })
            .collect();
        Some(PiecewiseAtom { pieces })
    }
}

/// The box `χ_{[a,b)}`.
pub fn box_atom(a: f64, b: f64) -> Result<PiecewiseAtom, TfError> {
    Ok(PiecewiseAtom::from_trig(TrigPiece::constant(
        a,
        b,
        Complex64::new(1.0, 0.0),
    )?))
}

/// The reference hat `x/2` on `[0,1)` and `1 − x/2` on `[1,2)`.
pub fn triangle_atom() -> PiecewiseAtom {
    let rising = NumericPiece::new(
        0.0,
        1.0,
        NumericBuilder::Poly {
            coeffs: vec![Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)],
        },
        Smoothness::Continuous,
    )
    .expect("static interval");
    let falling = NumericPiece::new(
        1.0,
        2.0,
        NumericBuilder::Poly {
            coeffs: vec![Complex64::new(1.0, 0.0), Complex64::new(-0.5, 0.0)],
        },
        Smoothness::Continuous,
    )
    .expect("static interval");
    PiecewiseAtom::new(vec![Piece::Numeric(rising), Piece::Numeric(falling)])
        .expect("disjoint by construction")
}
