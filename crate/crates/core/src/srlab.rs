//! Shapiro-Rudin sign polynomials and the constructions built on them.
//!
//! The generator follows the concatenation recursion `P_n = P_{n-1} ‖
//! Q_{n-1}`, `Q_n = P_{n-1} ‖ (−Q_{n-1})` starting from `P_0 = Q_0 = [1]`.
//! From it come:
//!
//! - [`block_poly`]: the dyadic frequency block `f_n`, a `±1`-coefficient
//!   exponential sum on frequencies `2^{n-1}..2^n−1`,
//! - [`gp_atom`]: the geometric sum `Σ_n 2^{-n/p} f_n` truncated at `N`
//!   blocks,
//! - [`h_atom`]: a dilated copy of `g_p` squeezed into an interval of
//!   length `1/L` and divided by a certified scale so it is bounded by one
//!   while its diagonal `q`-norm stays under a requested budget,
//! - [`counterexample_atom`]: dyadic cells of `h`-type content riding on a
//!   constant, with per-cell geometric norm budgets,
//! - [`parseval_atom`]: the two-interval completion `h + sqrt(β − |h|²)`
//!   whose integer translates have constant squared sum `β`,
//! - [`divergence_profile`] and [`dichotomy_table`]: running coefficient
//!   sums over a sparse frequency sublattice against certified geometric
//!   tails.
//!
//! Everything here is coefficient-exact: atoms stay in the trig-polynomial
//! class (apart from the square-root completion piece), so downstream norm
//! computations reduce to finite sums of `±2^{-n/p}` values.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::fmt;

use crate::phase::unit_phase;
use crate::tfcore::{
    NumericBuilder, NumericPiece, Piece, PiecewiseAtom, Smoothness, TrigPiece,
};

/// Hard ceiling on the recursion depth (vector length `2^24`).
pub const MAX_SR_DEPTH: u32 = 24;
/// Hard ceiling on truncation depths of the geometric constructions.
pub const MAX_BLOCKS: u32 = 20;
/// Hard ceiling on counterexample cells.
pub const MAX_CELLS: u32 = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum SrError {
    /// A depth/size parameter exceeds its budget guard.
    BudgetExceeded {
        what: &'static str,
        got: u64,
        limit: u64,
    },
    /// A parameter is outside its mathematical domain.
    ParameterDomain(String),
    /// The geometric tail bound cannot certify the requested norm budget at
    /// this truncation depth.
    TruncationTooShallow { requested: f64, certified: f64 },
    /// A grid-verified pointwise precondition failed.
    PreconditionFailed { at: f64, detail: String },
}

impl fmt::Display for SrError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SrError::BudgetExceeded { what, got, limit } => {
                write!(f, "budget exceeded: {what} = {got} > {limit}")
            }
            SrError::ParameterDomain(m) => write!(f, "parameter outside domain: {m}"),
            SrError::TruncationTooShallow {
                requested,
                certified,
            } => write!(
                f,
                "truncation too shallow: cannot certify norm budget {requested:.3e} (best certified {certified:.3e})"
            ),
            SrError::PreconditionFailed { at, detail } => {
                write!(f, "precondition failed at x = {at}: {detail}")
            }
        }
    }
}

impl std::error::Error for SrError {}

/// `±1` coefficient vector of length `2^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignVector {
    signs: Vec<i8>,
}

impl SignVector {
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }
}

/// The pair `(P_n, Q_n)` by the concatenation recursion.
pub fn shapiro_rudin(n: u32) -> Result<(SignVector, SignVector), SrError> {
    if n > MAX_SR_DEPTH {
        return Err(SrError::BudgetExceeded {
            what: "shapiro_rudin depth",
            got: n as u64,
            limit: MAX_SR_DEPTH as u64,
        });
    }
    let mut p: Vec<i8> = vec![1];
    let mut q: Vec<i8> = vec![1];
    for _ in 0..n {
        let mut p_next = Vec::with_capacity(2 * p.len());
        p_next.extend_from_slice(&p);
        p_next.extend_from_slice(&q);
        let mut q_next = Vec::with_capacity(2 * p.len());
        q_next.extend_from_slice(&p);
        q_next.extend(q.iter().map(|s| -s));
        p = p_next;
        q = q_next;
    }
    Ok((SignVector { signs: p }, SignVector { signs: q }))
}

/// The block `f_n = (P_n − P_{n-1})·χ_{[0,1)}`: coefficients `±1` exactly on
/// frequencies `2^{n-1}..2^n−1` (the upper half of `P_n`, which is
/// `Q_{n-1}`).
pub fn block_poly(n: u32) -> Result<TrigPiece, SrError> {
    if n == 0 {
        return Err(SrError::ParameterDomain("block index must be >= 1".into()));
    }
    if n > MAX_SR_DEPTH {
        return Err(SrError::BudgetExceeded {
            what: "block index",
            got: n as u64,
            limit: MAX_SR_DEPTH as u64,
        });
    }
    let (_, q_prev) = shapiro_rudin(n - 1)?;
    let base = 1u64 << (n - 1);
    let terms = q_prev
        .signs()
        .iter()
        .enumerate()
        .map(|(j, &s)| (Complex64::new(s as f64, 0.0), (base + j as u64) as f64))
        .collect();
    TrigPiece::new(0.0, 1.0, terms).map_err(|e| SrError::ParameterDomain(e.to_string()))
}

fn validate_gp_params(p: f64, blocks: u32) -> Result<(), SrError> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(SrError::ParameterDomain(format!(
            "block weight exponent must lie in (1, 2], got {p}"
        )));
    }
    if blocks == 0 {
        return Err(SrError::ParameterDomain("need at least one block".into()));
    }
    if blocks > MAX_BLOCKS {
        return Err(SrError::BudgetExceeded {
            what: "blocks",
            got: blocks as u64,
            limit: MAX_BLOCKS as u64,
        });
    }
    Ok(())
}

/// Weighted coefficient list of `Σ_{n=1}^{N} 2^{-n/p} f_n`: `(coeff, freq)`
/// with `freq = 1..2^N−1` and `|coeff|` equal to `2^{-n/p}` on block `n`.
fn gp_terms(p: f64, blocks: u32) -> Result<Vec<(Complex64, f64)>, SrError> {
    let mut terms = Vec::with_capacity((1usize << blocks) - 1);
    for n in 1..=blocks {
        let w = 2f64.powf(-(n as f64) / p);
        let block = block_poly(n)?;
        for &(c, f) in block.terms() {
            terms.push((c * w, f));
        }
    }
    Ok(terms)
}

/// `g_p` truncated at `N` blocks, as a single trig piece on `[0, 1)`.
pub fn gp_atom(p: f64, blocks: u32) -> Result<PiecewiseAtom, SrError> {
    validate_gp_params(p, blocks)?;
    let terms = gp_terms(p, blocks)?;
    Ok(PiecewiseAtom::from_trig(
        TrigPiece::new(0.0, 1.0, terms).expect("unit interval"),
    ))
}

/// Values of an integer-frequency term list on the dyadic grid
/// `x_j = j / 2^log2n`, `j = 0..2^log2n`, via one unnormalized inverse FFT.
/// Exact evaluation (frequency folding `m mod 2^log2n` is an identity at the
/// grid points). Non-integer frequencies are not supported here.
pub(crate) fn trig_values_on_dyadic_grid(
    terms: &[(Complex64, f64)],
    log2n: u32,
) -> Vec<Complex64> {
    let n = 1usize << log2n;
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for &(c, f) in terms {
        let m = f.round() as i64;
        debug_assert!((f - m as f64).abs() < 1e-9, "non-integer frequency {f}");
        let idx = m.rem_euclid(n as i64) as usize;
        buf[idx] += c;
    }
    let mut planner = FftPlanner::new();
    let ifft = planner.plan_fft_inverse(n);
    ifft.process(&mut buf);
    buf
}

/// Largest sample modulus of an integer-frequency term list over one period.
fn sampled_sup(terms: &[(Complex64, f64)], log2n: u32) -> f64 {
    trig_values_on_dyadic_grid(terms, log2n)
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max)
}

/// Certified upper bound for the true sup of an integer-frequency trig
/// polynomial with maximum frequency `nu_max`.
///
/// Uses the dyadic-sampled sup corrected by the Bernstein derivative bound
/// (`‖f‖_∞ ≤ sampled / (1 − πν/G)` for grid size `G > πν`) when a 16x
/// oversampled grid is affordable, otherwise the coefficient `ℓ¹` bound.
fn sup_certificate(terms: &[(Complex64, f64)], nu_max: u64) -> f64 {
    let l1: f64 = terms.iter().map(|(c, _)| c.norm()).sum();
    if nu_max == 0 {
        return l1;
    }
    let want = 16 * nu_max.next_power_of_two();
    if want <= 1 << 20 {
        let log2n = (64 - want.leading_zeros() - 1).max(10);
        let g = (1u64 << log2n) as f64;
        let correction = 1.0 - std::f64::consts::PI * nu_max as f64 / g;
        let bernstein = sampled_sup(terms, log2n) / correction;
        bernstein.min(l1)
    } else {
        l1
    }
}

/// Exact per-block `q`-power sums of `g_p` coefficients: block `n`
/// contributes `2^{n-1} · 2^{-nq/p} = r^n / 2` with `r = 2^{1-q/p}`.
fn q_power_block(p: f64, q: f64, n: u32) -> f64 {
    0.5 * 2f64.powf(n as f64 * (1.0 - q / p))
}

fn q_power_finite(p: f64, q: f64, blocks: u32) -> f64 {
    (1..=blocks).map(|n| q_power_block(p, q, n)).sum()
}

/// Geometric tail `Σ_{n>N} r^n / 2` of the `q`-power block sums; requires
/// `r = 2^{1-q/p} < 1`, i.e. `q > p`.
fn q_power_tail(p: f64, q: f64, blocks: u32) -> f64 {
    let r = 2f64.powf(1.0 - q / p);
    0.5 * r.powi(blocks as i32 + 1) / (1.0 - r)
}

/// A localized atom of `h` type together with its certification data.
#[derive(Debug, Clone)]
pub struct HAtom {
    pub atom: PiecewiseAtom,
    /// The power-of-two divisor applied to the dilated block sum.
    pub scale: f64,
    /// Finite part of the diagonal `q`-power coefficient sum (prefactor
    /// `1/(L·M)^q` included).
    pub q_power_sum: f64,
    /// Certified geometric bound on the truncated tail, same normalization.
    pub q_tail_bound: f64,
    pub blocks: u32,
}

impl HAtom {
    /// Certified bound on the full (untruncated) diagonal `q`-norm.
    pub fn certified_q_norm(&self, q: f64) -> f64 {
        (self.q_power_sum + self.q_tail_bound).powf(1.0 / q)
    }
}

/// Builds `h(x) = g_p(L(x − a)) / M · χ_{[a,b)}` with `b − a = 1/L`.
///
/// `M` is the smallest power of two for which (i) the certified sup of the
/// scaled atom is at most one and (ii) the diagonal `q`-norm, including the
/// geometric tail beyond the truncation, is certified below `epsilon`.
pub fn h_atom(
    p: f64,
    q: f64,
    a: f64,
    b: f64,
    l: u32,
    epsilon: f64,
    blocks: u32,
) -> Result<HAtom, SrError> {
    if !(p > 1.0 && p < q && q <= 2.0) {
        return Err(SrError::ParameterDomain(format!(
            "need 1 < p < q <= 2, got p = {p}, q = {q}"
        )));
    }
    validate_gp_params(p, blocks)?;
    if epsilon <= 0.0 {
        return Err(SrError::ParameterDomain("epsilon must be positive".into()));
    }
    if l == 0 {
        return Err(SrError::ParameterDomain(
            "dilation factor must be >= 1".into(),
        ));
    }
    if ((b - a) * l as f64 - 1.0).abs() > 1e-9 {
        return Err(SrError::ParameterDomain(format!(
            "interval length must be 1/L: got b - a = {} with L = {l}",
            b - a
        )));
    }

    let base_terms = gp_terms(p, blocks)?;
    let nu_max = (1u64 << blocks) - 1;
    let sup = sup_certificate(&base_terms, nu_max);
    let finite = q_power_finite(p, q, blocks);
    let tail = q_power_tail(p, q, blocks);

    let mut chosen: Option<f64> = None;
    for j in 0..=40u32 {
        let m = 2f64.powi(j as i32);
        let pref = (1.0 / (l as f64 * m)).powf(q);
        if sup <= m && (pref * (finite + tail)).powf(1.0 / q) < epsilon {
            chosen = Some(m);
            break;
        }
    }
    let m = chosen.ok_or_else(|| {
        let pref = (1.0 / (l as f64 * 2f64.powi(40))).powf(q);
        SrError::TruncationTooShallow {
            requested: epsilon,
            certified: (pref * (finite + tail)).powf(1.0 / q),
        }
    })?;

    // dilate: c·e^{2πi m t} at t = L(x−a) becomes c·e^{-2πi mLa}·e^{2πi(mL)x}
    let lf = l as f64;
    let dilated: Vec<(Complex64, f64)> = base_terms
        .iter()
        .map(|&(c, f)| (c * unit_phase(-f * lf * a) / m, f * lf))
        .collect();
    let piece =
        TrigPiece::new(a, b, dilated).map_err(|e| SrError::ParameterDomain(e.to_string()))?;
    let pref = (1.0 / (lf * m)).powf(q);
    Ok(HAtom {
        atom: PiecewiseAtom::from_trig(piece),
        scale: m,
        q_power_sum: pref * finite,
        q_tail_bound: pref * tail,
        blocks,
    })
}

/// Per-cell certification record of the counterexample construction.
#[derive(Debug, Clone)]
pub struct CellReport {
    pub index: u32,
    pub interval: (f64, f64),
    pub dilation: u32,
    pub exponent: f64,
    pub scale: f64,
    /// Certified diagonal `q`-norm of the cell content (tail included).
    pub q_norm_certified: f64,
    /// The budget `2^{-k}` the cell was built against.
    pub budget: f64,
}

/// The frame atom assembled from dyadic cells of `h`-type content plus the
/// constant `2` on `[0, 1)`.
#[derive(Debug, Clone)]
pub struct CounterexampleAtom {
    pub atom: PiecewiseAtom,
    pub cells: Vec<CellReport>,
    pub q: f64,
}

/// Cell exponents increase strictly to `q`: `p_k = q − (q−1)/(k+1)`.
pub fn cell_exponent(q: f64, k: u32) -> f64 {
    q - (q - 1.0) / (k as f64 + 1.0)
}

/// Builds the counterexample atom: on each dyadic cell
/// `I_k = [1−2^{-k}, 1−2^{-(k+1)})` a localized block sum with exponent
/// `p_k ↑ q`, scaled so its certified `q`-norm stays below `2^{-k}`, all
/// riding on the constant `2`. The sampled modulus lies in `[1, 3]`.
pub fn counterexample_atom(
    q: f64,
    cells: u32,
    blocks: u32,
) -> Result<CounterexampleAtom, SrError> {
    if !(q > 1.0 && q <= 2.0) {
        return Err(SrError::ParameterDomain(format!("need 1 < q <= 2, got {q}")));
    }
    if cells > MAX_CELLS {
        return Err(SrError::BudgetExceeded {
            what: "cells",
            got: cells as u64,
            limit: MAX_CELLS as u64,
        });
    }
    let two = Complex64::new(2.0, 0.0);
    if cells == 0 {
        let piece = TrigPiece::constant(0.0, 1.0, two).expect("unit interval");
        return Ok(CounterexampleAtom {
            atom: PiecewiseAtom::from_trig(piece),
            cells: vec![],
            q,
        });
    }

    let mut pieces = vec![Piece::Trig(
        TrigPiece::constant(0.0, 0.5, two).expect("static"),
    )];
    let mut reports = Vec::new();
    for k in 1..=cells {
        let a = 1.0 - 2f64.powi(-(k as i32));
        let b = 1.0 - 2f64.powi(-(k as i32) - 1);
        let l = 1u32 << (k + 1);
        let p_k = cell_exponent(q, k);
        let budget = 2f64.powi(-(k as i32));
        let h = h_atom(p_k, q, a, b, l, budget, blocks)?;
        let Piece::Trig(content) = &h.atom.pieces()[0] else {
            unreachable!("h_atom builds trig content")
        };
        let mut terms = vec![(two, 0.0)];
        terms.extend_from_slice(content.terms());
        pieces.push(Piece::Trig(
            TrigPiece::new(a, b, terms).expect("cell interval"),
        ));
        reports.push(CellReport {
            index: k,
            interval: (a, b),
            dilation: l,
            exponent: p_k,
            scale: h.scale,
            q_norm_certified: h.certified_q_norm(q),
            budget,
        });
    }
    let tail_start = 1.0 - 2f64.powi(-(cells as i32) - 1);
    pieces.push(Piece::Trig(
        TrigPiece::constant(tail_start, 1.0, two).expect("static"),
    ));
    let atom = PiecewiseAtom::new(pieces).expect("cells are disjoint by construction");
    Ok(CounterexampleAtom {
        atom,
        cells: reports,
        q,
    })
}

/// Completes `h` on `[0, 1)` to an atom on `[0, 2)` whose integer translates
/// have constant squared sum `β`: `g = h + sqrt(β − |h(·−1)|²)·χ_{[1,2)}`.
///
/// Requires `0 < β ≤ 1/2` and, grid-verified, `δ < |h(x)|² ≤ β` on `[0, 1)`.
pub fn parseval_atom(beta: f64, h: &PiecewiseAtom, delta: f64) -> Result<PiecewiseAtom, SrError> {
    if !(beta > 0.0 && beta <= 0.5) {
        return Err(SrError::ParameterDomain(format!(
            "translation-step-one completion requires 0 < beta <= 1/2, got {beta}"
        )));
    }
    if delta <= 0.0 {
        return Err(SrError::ParameterDomain("delta must be positive".into()));
    }
    let (lo, hi) = h.support();
    if lo < -1e-12 || hi > 1.0 + 1e-12 {
        return Err(SrError::ParameterDomain(format!(
            "h must be supported in [0, 1], got [{lo}, {hi}]"
        )));
    }
    const GRID: usize = 1 << 14;
    for i in 0..GRID {
        let x = i as f64 / GRID as f64;
        let v = h.evaluate(x).norm_sqr();
        if v <= delta {
            return Err(SrError::PreconditionFailed {
                at: x,
                detail: format!("|h(x)|^2 = {v:.6e} <= delta = {delta:.6e}"),
            });
        }
        if v > beta + 1e-12 {
            return Err(SrError::PreconditionFailed {
                at: x,
                detail: format!("|h(x)|^2 = {v:.6e} > beta = {beta:.6e}"),
            });
        }
    }
    let root = NumericPiece::with_wrappers(
        1.0,
        2.0,
        NumericBuilder::RootComplement {
            level: beta,
            inner: Box::new(h.clone()),
        },
        1.0, // evaluate the inner atom at x − 1
        Complex64::new(1.0, 0.0),
        0.0,
        Smoothness::Continuous,
    )
    .expect("static interval");
    let mut pieces: Vec<Piece> = h.pieces().to_vec();
    pieces.push(Piece::Numeric(root));
    PiecewiseAtom::new(pieces).map_err(|e| SrError::ParameterDomain(e.to_string()))
}

/// Running partial sums of `|coef|^p` over one sparse frequency sublattice.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceProfile {
    pub block_index: Vec<u32>,
    pub partial_sum: Vec<f64>,
}

impl DivergenceProfile {
    pub fn increments(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.partial_sum
            .iter()
            .map(|&s| {
                let d = s - prev;
                prev = s;
                d
            })
            .collect()
    }
}

/// Partial sums of `|coef|^p` over frequencies divisible by `l`, grouped by
/// the dyadic block of the stored frequency. Non-integer frequencies are
/// skipped (the constructions only produce integer lattices).
pub fn divergence_profile(atom: &PiecewiseAtom, p: f64, l: u32, blocks: u32) -> DivergenceProfile {
    let mut per_block = vec![0.0f64; blocks as usize + 1];
    let mut comp = vec![0.0f64; blocks as usize + 1];
    for piece in atom.pieces() {
        let Piece::Trig(t) = piece else { continue };
        for &(c, f) in t.terms() {
            let m = f.round();
            if (f - m).abs() > 1e-9 || m < 1.0 {
                continue;
            }
            let m = m as u64;
            if !m.is_multiple_of(l as u64) {
                continue;
            }
            let block = 64 - m.leading_zeros() as u64; // floor(log2 m) + 1
            if block as usize > blocks as usize {
                continue;
            }
            // compensated accumulation: blocks hold up to 2^19 terms
            let b = block as usize;
            let y = c.norm().powf(p) - comp[b];
            let t2 = per_block[b] + y;
            comp[b] = (t2 - per_block[b]) - y;
            per_block[b] = t2;
        }
    }
    let mut acc = 0.0;
    let mut block_index = Vec::with_capacity(blocks as usize);
    let mut partial_sum = Vec::with_capacity(blocks as usize);
    for b in 1..=blocks {
        acc += per_block[b as usize];
        block_index.push(b);
        partial_sum.push(acc);
    }
    DivergenceProfile {
        block_index,
        partial_sum,
    }
}

/// One row of the convergence/divergence table for `g_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct DichotomyRow {
    pub block: u32,
    /// Running `p`-power sum over the `l`-divisible sublattice.
    pub partial_sum_p: f64,
    /// Running `q`-power sum over all frequencies.
    pub partial_sum_q_power: f64,
    /// Certified geometric tail of the `q`-power sum beyond this block.
    pub tail_bound_q: f64,
}

/// Per-block table for `gp_atom(p, blocks)`: the diverging `p`-profile on
/// the `l`-divisible sublattice next to the converging `q`-power sums with
/// their geometric tail bounds. Computed from the actual atom coefficients;
/// the tail bounds are analytic.
pub fn dichotomy_table(p: f64, q: f64, l: u32, blocks: u32) -> Result<Vec<DichotomyRow>, SrError> {
    if q <= p {
        return Err(SrError::ParameterDomain(format!(
            "the table requires q > p, got p = {p}, q = {q}"
        )));
    }
    let atom = gp_atom(p, blocks)?;
    let p_profile = divergence_profile(&atom, p, l, blocks);
    let q_profile = divergence_profile(&atom, q, 1, blocks);
    let rows = (0..blocks as usize)
        .map(|i| DichotomyRow {
            block: (i + 1) as u32,
            partial_sum_p: p_profile.partial_sum[i],
            partial_sum_q_power: q_profile.partial_sum[i],
            tail_bound_q: q_power_tail(p, q, (i + 1) as u32),
        })
        .collect();
    Ok(rows)
}

/// CSV with columns `block,partial_sum_p,partial_sum_q_power,tail_bound_q`.
pub fn dichotomy_csv(rows: &[DichotomyRow]) -> String {
    let mut out = String::from("block,partial_sum_p,partial_sum_q_power,tail_bound_q\n");
    for r in rows {
        out.push_str(&format!(
            "{},{:.17e},{:.17e},{:.17e}\n",
            r.block, r.partial_sum_p, r.partial_sum_q_power, r.tail_bound_q
        ));
    }
    out
}

/// Sampled moduli of an atom on the dyadic grid `x_j = j/2^log2n` restricted
/// to `[0, 1)`. Trig pieces with integer frequencies go through the FFT
/// evaluation path; anything else is evaluated directly.
pub fn dyadic_modulus_samples(atom: &PiecewiseAtom, log2n: u32) -> Vec<f64> {
    let n = 1usize << log2n;
    let mut out = vec![0.0f64; n];
    for piece in atom.pieces() {
        let (a, b) = piece.interval();
        let j_lo = (a.max(0.0) * n as f64).ceil() as usize;
        let j_hi = ((b.min(1.0) * n as f64).ceil() as usize).min(n);
        if j_lo >= j_hi {
            continue;
        }
        let integer_trig = match piece {
            Piece::Trig(t) => t.terms().iter().all(|&(_, f)| (f - f.round()).abs() < 1e-9),
            Piece::Numeric(_) => false,
        };
        if let (Piece::Trig(t), true) = (piece, integer_trig) {
            let values = trig_values_on_dyadic_grid(t.terms(), log2n);
            for j in j_lo..j_hi {
                out[j] = values[j].norm();
            }
        } else {
            for (j, slot) in out.iter_mut().enumerate().take(j_hi).skip(j_lo) {
                *slot = piece.eval(j as f64 / n as f64).norm();
            }
        }
    }
    out
}
