//! Gabor systems `{M_{βn} T_{αk} g}` on the lattice `αZ × βZ`.
//!
//! For compactly supported atoms with `supp(g) ⊆ [0, 1/β]` the frame
//! operator acts by pointwise multiplication with the periodization
//! `D(x) = Σ_k |g(x − αk)|²`, so frame bounds are the essential range of
//! `D/β` and the canonical dual window is the quotient `βg/D`. This module
//! computes those objects on grids, runs analysis/synthesis on finite index
//! rectangles (exactly, when both operands are trig polynomials), measures
//! reconstruction error, and checks the translate-correlation identity that
//! certifies a pair of windows as duals.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::fmt;

use crate::phase::unit_phase;
use crate::tfcore::{
    adaptive_simpson, CoeffGrid, GridSpec, Piece, PiecewiseAtom, QuadOpts, SampledSignal, TfError,
};

/// Grid-inf threshold deciding `is_frame`: separates true zeros of the
/// periodization from rounding noise.
pub const EPS_FRAME: f64 = 1e-10;

/// Default number of periodization samples per period `[0, α)`.
pub const DEFAULT_RESOLUTION: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq)]
pub enum GaborError {
    InvalidParameter(String),
    /// `αβ > 1`: no frame is possible on this lattice.
    InvalidLattice { alpha: f64, beta: f64 },
    /// The compact-support criterion needs `supp(g) ⊆ [0, 1/β]`.
    NotPainlessEligible {
        support: (f64, f64),
        inv_beta: f64,
    },
    /// The periodization vanishes at a grid point of the support.
    FrameLowerBoundZero { at: f64 },
    Quadrature(TfError),
}

impl fmt::Display for GaborError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaborError::InvalidParameter(m) => write!(f, "invalid parameter: {m}"),
            GaborError::InvalidLattice { alpha, beta } => {
                write!(f, "invalid lattice: alpha*beta = {} > 1", alpha * beta)
            }
            GaborError::NotPainlessEligible { support, inv_beta } => write!(
                f,
                "atom support [{}, {}] not contained in [0, {inv_beta}]",
                support.0, support.1
            ),
            GaborError::FrameLowerBoundZero { at } => {
                write!(f, "periodization vanishes at x = {at}")
            }
            GaborError::Quadrature(e) => write!(f, "quadrature failure: {e}"),
        }
    }
}

impl std::error::Error for GaborError {}

impl From<TfError> for GaborError {
    fn from(e: TfError) -> Self {
        GaborError::Quadrature(e)
    }
}

/// A system `{M_{βn} T_{αk} g}` with translation step `α` and modulation
/// step `β`.
#[derive(Debug, Clone)]
pub struct GaborSystem {
    atom: PiecewiseAtom,
    alpha: f64,
    beta: f64,
    painless_eligible: bool,
}

impl GaborSystem {
    pub fn new(atom: PiecewiseAtom, alpha: f64, beta: f64) -> Result<Self, GaborError> {
        if !(alpha.is_finite() && alpha > 0.0 && beta.is_finite() && beta > 0.0) {
            return Err(GaborError::InvalidParameter(format!(
                "lattice steps must be positive, got alpha = {alpha}, beta = {beta}"
            )));
        }
        let (lo, hi) = atom.support();
        let painless_eligible = lo >= -1e-12 && hi <= 1.0 / beta + 1e-12;
        Ok(GaborSystem {
            atom,
            alpha,
            beta,
            painless_eligible,
        })
    }

    pub fn atom(&self) -> &PiecewiseAtom {
        &self.atom
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Whether `supp(g) ⊆ [0, 1/β]` (computed at construction).
    pub fn painless_eligible(&self) -> bool {
        self.painless_eligible
    }
}

/// The canonical dual window `x ↦ β·g(x)/D(x)` on `supp(g)`, zero elsewhere.
#[derive(Debug, Clone)]
pub struct QuotientAtom {
    numerator: PiecewiseAtom,
    alpha: f64,
    beta: f64,
}

impl QuotientAtom {
    /// Builds the quotient, verifying on a grid that the denominator stays
    /// above [`EPS_FRAME`] across the numerator's support.
    pub fn new(
        numerator: PiecewiseAtom,
        alpha: f64,
        beta: f64,
        resolution: usize,
    ) -> Result<Self, GaborError> {
        let (lo, hi) = numerator.support();
        let n = resolution.max(16);
        for i in 0..n {
            let x = lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
            if numerator.evaluate(x).norm_sqr() > 0.0
                && periodization_at(&numerator, alpha, x) <= EPS_FRAME
            {
                return Err(GaborError::FrameLowerBoundZero { at: x });
            }
        }
        Ok(QuotientAtom {
            numerator,
            alpha,
            beta,
        })
    }

    pub fn numerator(&self) -> &PiecewiseAtom {
        &self.numerator
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let v = self.numerator.evaluate(x);
        if v.re == 0.0 && v.im == 0.0 {
            return v;
        }
        let d = periodization_at(&self.numerator, self.alpha, x);
        v * (self.beta / d)
    }

    pub fn support(&self) -> (f64, f64) {
        self.numerator.support()
    }
}

/// `D(x) = Σ_k |g(x − αk)|²`; the sum truncates exactly via support bounds.
pub fn periodization_at(atom: &PiecewiseAtom, alpha: f64, x: f64) -> f64 {
    let (lo, hi) = atom.support();
    let k_lo = ((x - hi) / alpha - 1e-9).ceil() as i64;
    let k_hi = ((x - lo) / alpha + 1e-9).floor() as i64;
    let mut acc = 0.0;
    for k in k_lo..=k_hi {
        acc += atom.evaluate(x - alpha * k as f64).norm_sqr();
    }
    acc
}

/// The periodization sampled on a grid.
pub fn periodization(system: &GaborSystem, grid: GridSpec) -> SampledSignal {
    let samples = grid
        .points()
        .map(|x| Complex64::new(periodization_at(&system.atom, system.alpha, x), 0.0))
        .collect();
    SampledSignal::new(grid.start, grid.step, samples).expect("grid validated")
}

/// Result of the compact-support frame criterion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PainlessReport {
    pub is_frame: bool,
    /// Lower frame bound `A = inf D / β`.
    pub lower: f64,
    /// Upper frame bound `B = sup D / β`.
    pub upper: f64,
}

/// Frame bounds from the periodization: `A = inf D/β`, `B = sup D/β` over
/// one period, sampled at `resolution` points plus the exact piece
/// endpoints folded into `[0, α)`.
pub fn painless_check(
    system: &GaborSystem,
    resolution: usize,
) -> Result<PainlessReport, GaborError> {
    if !system.painless_eligible {
        return Err(GaborError::NotPainlessEligible {
            support: system.atom.support(),
            inv_beta: 1.0 / system.beta,
        });
    }
    if system.alpha * system.beta > 1.0 + 1e-12 {
        return Err(GaborError::InvalidLattice {
            alpha: system.alpha,
            beta: system.beta,
        });
    }
    let alpha = system.alpha;
    let r = resolution.max(2);
    let mut inf = f64::INFINITY;
    let mut sup = f64::NEG_INFINITY;
    let mut record = |x: f64| {
        let d = periodization_at(&system.atom, alpha, x);
        inf = inf.min(d);
        sup = sup.max(d);
    };
    for i in 0..r {
        record(alpha * i as f64 / r as f64);
    }
    // endpoint sampling removes grid bias at piece boundaries
    for e in system.atom.breakpoints() {
        record(e.rem_euclid(alpha));
    }
    Ok(PainlessReport {
        is_frame: inf > EPS_FRAME,
        lower: inf / system.beta,
        upper: sup / system.beta,
    })
}

/// The canonical dual window `βg/D` of a painless frame.
pub fn canonical_dual(system: &GaborSystem) -> Result<QuotientAtom, GaborError> {
    let report = painless_check(system, DEFAULT_RESOLUTION)?;
    if !report.is_frame {
        return Err(GaborError::FrameLowerBoundZero { at: f64::NAN });
    }
    QuotientAtom::new(
        system.atom.clone(),
        system.alpha,
        system.beta,
        DEFAULT_RESOLUTION,
    )
}

/// Which window to analyze/synthesize with.
#[derive(Clone, Copy)]
pub enum WindowRef<'a> {
    Atom(&'a PiecewiseAtom),
    Quotient(&'a QuotientAtom),
}

impl<'a> WindowRef<'a> {
    pub fn eval(&self, x: f64) -> Complex64 {
        match self {
            WindowRef::Atom(a) => a.evaluate(x),
            WindowRef::Quotient(q) => q.eval(x),
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match self {
            WindowRef::Atom(a) => a.support(),
            WindowRef::Quotient(q) => q.support(),
        }
    }

    fn as_trig_atom(&self) -> Option<&'a PiecewiseAtom> {
        match self {
            WindowRef::Atom(a) if a.is_all_trig() => Some(a),
            _ => None,
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match self {
            WindowRef::Atom(a) => a.breakpoints(),
            WindowRef::Quotient(q) => q.numerator().breakpoints(),
        }
    }
}

/// Translate indices `k` for which `T_{αk} w` overlaps the interval.
pub fn overlapping_translates(
    interval: (f64, f64),
    window_support: (f64, f64),
    alpha: f64,
) -> (i64, i64) {
    let k_lo = ((interval.0 - window_support.1) / alpha - 1e-9).ceil() as i64;
    let k_hi = ((interval.1 - window_support.0) / alpha + 1e-9).floor() as i64;
    (k_lo, k_hi)
}

/// `C_w(f)` on a finite index rectangle for an exact atom `f`:
/// `entry(k, n) = ⟨f, M_{βn} T_{αk} w⟩`. Exact when both `f` and the window
/// are trig polynomials, adaptive quadrature otherwise.
pub fn analysis_atom(
    f: &PiecewiseAtom,
    window: WindowRef,
    alpha: f64,
    beta: f64,
    k_range: (i64, i64),
    n_range: (i64, i64),
    opts: QuadOpts,
) -> Result<CoeffGrid, GaborError> {
    let mut grid = CoeffGrid::zeros(k_range, n_range);
    if let (true, Some(wa)) = (f.is_all_trig(), window.as_trig_atom()) {
        for k in k_range.0..=k_range.1 {
            // product term list of f · conj(T_{αk} w) over piece overlaps
            let shifted = wa.translate(alpha * k as f64);
            let mut products: Vec<(Complex64, f64, f64, f64)> = Vec::new();
            for pf in f.pieces() {
                let Piece::Trig(tf) = pf else { unreachable!() };
                for pw in shifted.pieces() {
                    let Piece::Trig(tw) = pw else { unreachable!() };
                    let (a1, b1) = tf.interval();
                    let (a2, b2) = tw.interval();
                    let a = a1.max(a2);
                    let b = b1.min(b2);
                    if a >= b {
                        continue;
                    }
                    for &(cf, ff) in tf.terms() {
                        for &(cw, fw) in tw.terms() {
                            products.push((cf * cw.conj(), ff - fw, a, b));
                        }
                    }
                }
            }
            for n in n_range.0..=n_range.1 {
                let omega = beta * n as f64;
                let mut acc = Complex64::new(0.0, 0.0);
                for &(c, freq, a, b) in &products {
                    acc += c * box_integral(a, b, omega - freq);
                }
                grid.set(k, n, acc);
            }
        }
        return Ok(grid);
    }

    // quadrature route: integrate f(x)·conj(w(x−αk))·e^{-2πiβnx} between
    // the combined breakpoints of both operands
    let w_support = window.support();
    let w_breaks = window.breakpoints();
    for k in k_range.0..=k_range.1 {
        let shift = alpha * k as f64;
        let mut cuts: Vec<f64> = f.breakpoints();
        cuts.extend(w_breaks.iter().map(|e| e + shift));
        cuts.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
        cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-14);
        let (flo, fhi) = f.support();
        let lo = flo.max(w_support.0 + shift);
        let hi = fhi.min(w_support.1 + shift);
        if lo >= hi {
            continue;
        }
        for n in n_range.0..=n_range.1 {
            let omega = beta * n as f64;
            let integrand =
                |x: f64| f.evaluate(x) * window.eval(x - shift).conj() * unit_phase(-omega * x);
            let mut acc = Complex64::new(0.0, 0.0);
            for w in cuts.windows(2) {
                let a = w[0].max(lo);
                let b = w[1].min(hi);
                if a >= b {
                    continue;
                }
                let panels = ((omega.abs() * (b - a)).ceil() as usize).clamp(1, 1 << 10);
                for i in 0..panels {
                    let pa = a + (b - a) * i as f64 / panels as f64;
                    let pb = a + (b - a) * (i + 1) as f64 / panels as f64;
                    acc += adaptive_simpson(
                        &integrand,
                        pa,
                        pb,
                        opts.abs_tol / panels as f64,
                        (opts.max_evals / panels).max(16),
                    )?;
                }
            }
            grid.set(k, n, acc);
        }
    }
    Ok(grid)
}

fn box_integral(a: f64, b: f64, delta: f64) -> Complex64 {
    let len = b - a;
    let mid = 0.5 * (a + b);
    let s = if delta.abs() < crate::tfcore::EPS_DEGENERATE {
        1.0
    } else {
        crate::phase::sinc(delta * len)
    };
    unit_phase(-delta * mid) * (len * s)
}

/// `C_w(f)` for a sampled `f`: trapezoid quadrature on the signal's own
/// grid.
pub fn analysis_sampled(
    f: &SampledSignal,
    window: WindowRef,
    alpha: f64,
    beta: f64,
    k_range: (i64, i64),
    n_range: (i64, i64),
) -> CoeffGrid {
    let mut grid = CoeffGrid::zeros(k_range, n_range);
    let step = f.step();
    let last = f.len() - 1;
    for k in k_range.0..=k_range.1 {
        let shift = alpha * k as f64;
        // nonzero window samples: f_j · conj(w(x_j − αk)) · weight
        let mut contrib: Vec<(f64, Complex64)> = Vec::new();
        for j in 0..f.len() {
            let x = f.x(j);
            let wv = window.eval(x - shift);
            if wv.re == 0.0 && wv.im == 0.0 {
                continue;
            }
            let weight = if j == 0 || j == last { 0.5 } else { 1.0 };
            contrib.push((x, f.samples()[j] * wv.conj() * (weight * step)));
        }
        for n in n_range.0..=n_range.1 {
            let omega = beta * n as f64;
            let mut acc = Complex64::new(0.0, 0.0);
            for &(x, u) in &contrib {
                acc += u * unit_phase(-omega * x);
            }
            grid.set(k, n, acc);
        }
    }
    grid
}

/// `C_w(f)` over one full discrete modulation period.
///
/// Requires the grid step to divide the period: `β·step·P = 1` for an
/// integer `P`. The trapezoid coefficients of [`analysis_sampled`] are then
/// periodic in `n` with period `P`, and this routine returns the rectangle
/// `k_range × [−P/2, P/2)` computed by FFT. Used by the frame-energy
/// checks, where the full-period `ℓ²` mass obeys a discrete Parseval
/// identity.
pub fn analysis_period(
    f: &SampledSignal,
    window: WindowRef,
    alpha: f64,
    beta: f64,
    k_range: (i64, i64),
) -> Result<CoeffGrid, GaborError> {
    let step = f.step();
    let p = (1.0 / (beta * step)).round() as usize;
    if p == 0 || (beta * step * p as f64 - 1.0).abs() > 1e-9 {
        return Err(GaborError::InvalidParameter(format!(
            "grid step {step} does not divide the modulation period 1/beta = {}",
            1.0 / beta
        )));
    }
    let (w_lo, w_hi) = window.support();
    if w_hi - w_lo > 1.0 / beta + 1e-9 {
        return Err(GaborError::NotPainlessEligible {
            support: (w_lo, w_hi),
            inv_beta: 1.0 / beta,
        });
    }
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(p);
    let n_lo = -(p as i64) / 2;
    let n_hi = n_lo + p as i64 - 1;
    let mut grid = CoeffGrid::zeros(k_range, (n_lo, n_hi));
    let last = f.len() - 1;
    let mut buf = vec![Complex64::new(0.0, 0.0); p];
    for k in k_range.0..=k_range.1 {
        let shift = alpha * k as f64;
        buf.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for j in 0..f.len() {
            let x = f.x(j);
            let wv = window.eval(x - shift);
            if wv.re == 0.0 && wv.im == 0.0 {
                continue;
            }
            let weight = if j == 0 || j == last { 0.5 } else { 1.0 };
            buf[j % p] += f.samples()[j] * wv.conj() * (weight * step);
        }
        fft.process(&mut buf);
        for n in n_lo..=n_hi {
            let idx = n.rem_euclid(p as i64) as usize;
            // e^{-2πiβn·x_0} realigns the DFT to the grid origin
            grid.set(k, n, buf[idx] * unit_phase(-beta * n as f64 * f.start()));
        }
    }
    Ok(grid)
}

/// `Σ c_{kn} M_{βn} T_{αk} w` evaluated on a grid in the given index
/// order, with compensated (Kahan) accumulation per point.
pub fn synthesis_ordered<I>(
    window: WindowRef,
    alpha: f64,
    beta: f64,
    coeffs: &CoeffGrid,
    grid: GridSpec,
    order: I,
) -> SampledSignal
where
    I: Iterator<Item = (i64, i64)>,
{
    let mut sums = vec![Complex64::new(0.0, 0.0); grid.count];
    let mut comps = vec![Complex64::new(0.0, 0.0); grid.count];
    for (k, n) in order {
        let c = coeffs.get(k, n);
        if c.re == 0.0 && c.im == 0.0 {
            continue;
        }
        let shift = alpha * k as f64;
        let freq = beta * n as f64;
        for (i, x) in grid.points().enumerate() {
            let wv = window.eval(x - shift);
            if wv.re == 0.0 && wv.im == 0.0 {
                continue;
            }
            let term = c * unit_phase(freq * x) * wv;
            // Kahan step
            let y = term - comps[i];
            let t = sums[i] + y;
            comps[i] = (t - sums[i]) - y;
            sums[i] = t;
        }
    }
    SampledSignal::new(grid.start, grid.step, sums).expect("grid validated")
}

/// Synthesis in the deterministic k-major, then n, order.
pub fn synthesis(
    window: WindowRef,
    alpha: f64,
    beta: f64,
    coeffs: &CoeffGrid,
    grid: GridSpec,
) -> SampledSignal {
    let (k_lo, k_hi) = coeffs.k_range();
    let (n_lo, n_hi) = coeffs.n_range();
    let order = (k_lo..=k_hi).flat_map(move |k| (n_lo..=n_hi).map(move |n| (k, n)));
    synthesis_ordered(window, alpha, beta, coeffs, grid, order)
}

/// Outcome of a reconstruction run.
#[derive(Debug, Clone)]
pub struct ReconstructionReport {
    pub fhat: SampledSignal,
    pub rel_err_l2: f64,
}

/// Analysis with the dual window followed by synthesis with the system
/// atom, compared to `f` in grid `L²`. The error is reported, not thrown.
pub fn reconstruct(
    f: &PiecewiseAtom,
    system: &GaborSystem,
    dual: WindowRef,
    k_range: (i64, i64),
    n_range: (i64, i64),
    out_grid: GridSpec,
    opts: QuadOpts,
) -> Result<ReconstructionReport, GaborError> {
    let coeffs = analysis_atom(f, dual, system.alpha, system.beta, k_range, n_range, opts)?;
    let fhat = synthesis(
        WindowRef::Atom(&system.atom),
        system.alpha,
        system.beta,
        &coeffs,
        out_grid,
    );
    let reference = SampledSignal::from_atom(f, out_grid);
    let denom = reference.l2_norm();
    let rel_err_l2 = if denom == 0.0 {
        fhat.l2_norm()
    } else {
        fhat.l2_distance(&reference) / denom
    };
    Ok(ReconstructionReport { fhat, rel_err_l2 })
}

/// One row of the translate-correlation duality table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalnutRow {
    pub n: i64,
    pub max_deviation: f64,
}

/// For each `|n| ≤ n_max`, the maximum over a grid on `[0, α)` of
/// `|Σ_k g(x − αk − shift·n)·h(x − αk) − β·δ_{n,0}|` with `β = 1/shift`.
/// Duality of the two windows on the lattice `(α, 1/shift)` makes every
/// row vanish.
pub fn walnut_check(
    g: &PiecewiseAtom,
    h: &PiecewiseAtom,
    alpha: f64,
    shift: f64,
    n_max: i64,
    grid_points: usize,
) -> Vec<WalnutRow> {
    let beta = 1.0 / shift;
    let (g_lo, g_hi) = g.support();
    let (h_lo, h_hi) = h.support();
    let points = grid_points.max(1);
    let mut rows = Vec::with_capacity((2 * n_max + 1) as usize);
    for n in -n_max..=n_max {
        let off = shift * n as f64;
        let target = if n == 0 { beta } else { 0.0 };
        let mut worst = 0.0f64;
        for i in 0..points {
            let x = alpha * i as f64 / points as f64;
            let k_lo = (((x - off - g_hi) / alpha).max((x - h_hi) / alpha) - 1e-9).ceil() as i64;
            let k_hi = (((x - off - g_lo) / alpha).min((x - h_lo) / alpha) + 1e-9).floor() as i64;
            let mut sum = Complex64::new(0.0, 0.0);
            for k in k_lo..=k_hi {
                let t = x - alpha * k as f64;
                sum += g.evaluate(t - off) * h.evaluate(t);
            }
            let dev = (sum - Complex64::new(target, 0.0)).norm();
            worst = worst.max(dev);
        }
        rows.push(WalnutRow {
            n,
            max_deviation: worst,
        });
    }
    rows
}

/// CSV with columns `n,max_deviation`.
pub fn walnut_csv(rows: &[WalnutRow]) -> String {
    let mut out = String::from("n,max_deviation\n");
    for r in rows {
        out.push_str(&format!("{},{:.17e}\n", r.n, r.max_deviation));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::srlab::block_poly;
    use crate::tfcore::{box_atom, triangle_atom, TrigPiece};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn box_system(alpha: f64, beta: f64) -> GaborSystem {
        GaborSystem::new(box_atom(0.0, 1.0).unwrap(), alpha, beta).unwrap()
    }

    #[test]
    fn periodization_of_box() {
        let sys = box_system(1.0, 1.0);
        let d = periodization(&sys, GridSpec::over(0.0, 1.0, 64).unwrap());
        assert!(d.samples().iter().all(|v| (v.re - 1.0).abs() < 1e-15));

        let sys_half = box_system(0.5, 1.0);
        let d = periodization(&sys_half, GridSpec::over(0.0, 0.5, 64).unwrap());
        assert!(d.samples().iter().all(|v| (v.re - 2.0).abs() < 1e-15));
    }

    #[test]
    fn periodization_of_triangle_range() {
        // D(x) = x²/4 + (1−x)²/4 on [0,1): range [1/8, 1/4]
        let sys = GaborSystem::new(triangle_atom(), 1.0, 0.5).unwrap();
        let d = periodization(&sys, GridSpec::over(0.0, 1.0, 1 << 12).unwrap());
        let min = d.samples().iter().map(|v| v.re).fold(f64::INFINITY, f64::min);
        let max = d.samples().iter().map(|v| v.re).fold(0.0, f64::max);
        assert!((min - 0.125).abs() < 1e-12, "min {min}");
        assert!((max - 0.25).abs() < 1e-12, "max {max}");
    }

    #[test]
    fn painless_box_lattices() {
        let r = painless_check(&box_system(1.0, 1.0), 1 << 12).unwrap();
        assert!(r.is_frame);
        assert!((r.lower - 1.0).abs() < 1e-12 && (r.upper - 1.0).abs() < 1e-12);

        let r = painless_check(&box_system(0.5, 1.0), 1 << 12).unwrap();
        assert!((r.lower - 2.0).abs() < 1e-12 && (r.upper - 2.0).abs() < 1e-12);
    }

    #[test]
    fn painless_triangle_bounds() {
        let sys = GaborSystem::new(triangle_atom(), 1.0, 0.5).unwrap();
        let r = painless_check(&sys, 1 << 14).unwrap();
        assert!(r.is_frame);
        assert!((r.lower - 0.25).abs() < 1e-9, "A = {}", r.lower);
        assert!((r.upper - 0.5).abs() < 1e-9, "B = {}", r.upper);
    }

    #[test]
    fn painless_rejections() {
        // support length 1 > 1/β = 1/2
        let sys = box_system(1.0, 2.0);
        assert!(matches!(
            painless_check(&sys, 256),
            Err(GaborError::NotPainlessEligible { .. })
        ));
        // αβ = 1.5 > 1
        let sys = box_system(1.5, 1.0);
        assert!(matches!(
            painless_check(&sys, 256),
            Err(GaborError::InvalidLattice { .. })
        ));
        // sparse translates: periodization vanishes on half the period
        let sys = GaborSystem::new(box_atom(0.0, 1.0).unwrap(), 2.0, 0.5).unwrap();
        let r = painless_check(&sys, 256).unwrap();
        assert!(!r.is_frame);
    }

    #[test]
    fn canonical_dual_of_boxes() {
        let dual = canonical_dual(&box_system(1.0, 1.0)).unwrap();
        for x in [0.0, 0.25, 0.5, 0.99] {
            assert_eq!(dual.eval(x), c(1.0, 0.0));
        }
        assert_eq!(dual.eval(1.5), c(0.0, 0.0));

        let dual_half = canonical_dual(&box_system(0.5, 1.0)).unwrap();
        for x in [0.1, 0.6] {
            assert!((dual_half.eval(x) - c(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn canonical_dual_idempotence_on_scaled_boxes() {
        // dual of (χ_{[0,c)}, α=c, β=1/c) is χ/c exactly at grid points
        for cc in [0.5, 1.0, 2.0] {
            let atom = box_atom(0.0, cc).unwrap();
            let sys = GaborSystem::new(atom, cc, 1.0 / cc).unwrap();
            let dual = canonical_dual(&sys).unwrap();
            for i in 0..32 {
                let x = cc * i as f64 / 32.0;
                assert_eq!(dual.eval(x), c(1.0 / cc, 0.0), "c={cc} x={x}");
            }
        }
    }

    #[test]
    fn canonical_dual_of_triangle_at_peak() {
        // g̃(1) = β·g(1)/D(1) = (1/2·1/2)/(1/4) = 1
        let sys = GaborSystem::new(triangle_atom(), 1.0, 0.5).unwrap();
        let dual = canonical_dual(&sys).unwrap();
        assert!((dual.eval(1.0) - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn analysis_orthonormal_box_exact() {
        // f = e^{2πix}χ: entry(0,1) = 1, everything else in a 5×5 window 0
        let f =
            PiecewiseAtom::from_trig(TrigPiece::new(0.0, 1.0, vec![(c(1.0, 0.0), 1.0)]).unwrap());
        let sys = box_system(1.0, 1.0);
        let grid = analysis_atom(
            &f,
            WindowRef::Atom(sys.atom()),
            1.0,
            1.0,
            (-2, 2),
            (-2, 2),
            QuadOpts::default(),
        )
        .unwrap();
        for (k, n, v) in grid.iter() {
            if k == 0 && n == 1 {
                assert_eq!(v, c(1.0, 0.0));
            } else {
                assert_eq!(v, c(0.0, 0.0), "entry ({k},{n})");
            }
        }
    }

    #[test]
    fn analysis_of_zero_is_zero() {
        let f = box_atom(0.0, 1.0).unwrap().scale(c(0.0, 0.0));
        let sys = box_system(1.0, 1.0);
        let grid = analysis_atom(
            &f,
            WindowRef::Atom(sys.atom()),
            1.0,
            1.0,
            (-1, 1),
            (-1, 1),
            QuadOpts::default(),
        )
        .unwrap();
        assert!(grid.iter().all(|(_, _, v)| v == c(0.0, 0.0)));
    }

    #[test]
    fn analysis_of_second_block() {
        // f = f_2: |entry(0, m)| = 1 exactly for m ∈ {2, 3}, 0 otherwise
        let f = PiecewiseAtom::from_trig(block_poly(2).unwrap());
        let sys = box_system(1.0, 1.0);
        let grid = analysis_atom(
            &f,
            WindowRef::Atom(sys.atom()),
            1.0,
            1.0,
            (0, 0),
            (-4, 8),
            QuadOpts::default(),
        )
        .unwrap();
        for (_, n, v) in grid.iter() {
            let expect = if n == 2 || n == 3 { 1.0 } else { 0.0 };
            assert_eq!(v.norm(), expect, "n = {n}");
        }
    }

    #[test]
    fn synthesis_of_deltas() {
        let sys = box_system(1.0, 1.0);
        let grid_spec = GridSpec::over(-1.0, 3.0, 256).unwrap();
        let mut coeffs = CoeffGrid::zeros((0, 1), (0, 0));
        coeffs.set(0, 0, c(1.0, 0.0));
        let out = synthesis(WindowRef::Atom(sys.atom()), 1.0, 1.0, &coeffs, grid_spec);
        let direct = SampledSignal::from_atom(sys.atom(), grid_spec);
        assert!(out.l2_distance(&direct) < 1e-14);

        let mut coeffs = CoeffGrid::zeros((0, 1), (0, 0));
        coeffs.set(1, 0, c(1.0, 0.0));
        let out = synthesis(WindowRef::Atom(sys.atom()), 1.0, 1.0, &coeffs, grid_spec);
        let shifted = SampledSignal::from_atom(&sys.atom().translate(1.0), grid_spec);
        assert!(out.l2_distance(&shifted) < 1e-14);
    }

    #[test]
    fn round_trip_on_the_orthonormal_box() {
        // coefficients of χ under (χ,1,1) resynthesize χ exactly
        let f = box_atom(0.0, 1.0).unwrap();
        let sys = box_system(1.0, 1.0);
        let report = reconstruct(
            &f,
            &sys,
            WindowRef::Atom(sys.atom()),
            (-2, 2),
            (-8, 8),
            GridSpec::over(-0.5, 1.5, 512).unwrap(),
            QuadOpts::default(),
        )
        .unwrap();
        assert!(report.rel_err_l2 < 1e-12, "err {}", report.rel_err_l2);
    }

    #[test]
    fn synthesis_order_invariance() {
        let f = PiecewiseAtom::from_trig(block_poly(3).unwrap());
        let sys = box_system(1.0, 1.0);
        let coeffs = analysis_atom(
            &f,
            WindowRef::Atom(sys.atom()),
            1.0,
            1.0,
            (-2, 2),
            (-2, 8),
            QuadOpts::default(),
        )
        .unwrap();
        let grid_spec = GridSpec::over(-0.5, 1.5, 128).unwrap();
        let baseline = synthesis(WindowRef::Atom(sys.atom()), 1.0, 1.0, &coeffs, grid_spec);
        // a few deterministic shuffles of the index rectangle
        let (k_lo, k_hi) = coeffs.k_range();
        let (n_lo, n_hi) = coeffs.n_range();
        let mut indices: Vec<(i64, i64)> = (k_lo..=k_hi)
            .flat_map(|k| (n_lo..=n_hi).map(move |n| (k, n)))
            .collect();
        indices.reverse();
        let rev = synthesis_ordered(
            WindowRef::Atom(sys.atom()),
            1.0,
            1.0,
            &coeffs,
            grid_spec,
            indices.iter().copied(),
        );
        assert!(baseline.l2_distance(&rev) < 1e-10);
        // stride-permuted order
        indices.sort_by_key(|&(k, n)| (n.rem_euclid(3), k, n));
        let strided = synthesis_ordered(
            WindowRef::Atom(sys.atom()),
            1.0,
            1.0,
            &coeffs,
            grid_spec,
            indices.iter().copied(),
        );
        assert!(baseline.l2_distance(&strided) < 1e-10);
    }

    #[test]
    fn covariance_shifts_indices_up_to_phase() {
        let f = PiecewiseAtom::from_trig(
            TrigPiece::new(0.0, 1.0, vec![(c(0.7, -0.2), 2.0), (c(-0.5, 0.3), 5.0)]).unwrap(),
        );
        let sys = box_system(1.0, 1.0);
        let base = analysis_atom(
            &f,
            WindowRef::Atom(sys.atom()),
            1.0,
            1.0,
            (-3, 3),
            (-2, 8),
            QuadOpts::default(),
        )
        .unwrap();
        let (k0, n0) = (1i64, 2i64);
        let shifted_f = f.modulate(n0 as f64).translate(k0 as f64);
        let shifted = analysis_atom(
            &shifted_f,
            WindowRef::Atom(sys.atom()),
            1.0,
            1.0,
            (-2, 4),
            (0, 10),
            QuadOpts::default(),
        )
        .unwrap();
        for k in -2..=3 {
            for n in 0..=8 {
                let lhs = shifted.get(k, n).norm();
                let rhs = base.get(k - k0, n - n0).norm();
                assert!((lhs - rhs).abs() < 1e-12, "({k},{n})");
            }
        }
    }

    #[test]
    fn walnut_duality_for_the_hat_pair() {
        // unit-partition hat (2× the reference triangle) against χ_{[0,2]}/2
        let hat = triangle_atom().scale(c(2.0, 0.0));
        let half_box = box_atom(0.0, 2.0).unwrap().scale(c(0.5, 0.0));
        let rows = walnut_check(&hat, &half_box, 1.0, 2.0, 4, 1 << 10);
        for r in &rows {
            assert!(r.max_deviation <= 1e-12, "n = {}: {}", r.n, r.max_deviation);
        }
        // moving the scalar to the other side gives the same products
        let rows2 = walnut_check(
            &triangle_atom(),
            &box_atom(0.0, 2.0).unwrap(),
            1.0,
            2.0,
            4,
            1 << 10,
        );
        for (a, b) in rows.iter().zip(&rows2) {
            assert!((a.max_deviation - b.max_deviation).abs() < 1e-15);
        }
    }

    #[test]
    fn walnut_box_identity() {
        let b = box_atom(0.0, 1.0).unwrap();
        let rows = walnut_check(&b, &b, 1.0, 1.0, 3, 512);
        for r in rows {
            assert!(r.max_deviation <= 1e-15, "n = {}", r.n);
        }
        let csv = walnut_csv(&walnut_check(&b, &b, 1.0, 1.0, 2, 64));
        assert!(csv.starts_with("n,max_deviation\n"));
        assert_eq!(csv.lines().count(), 6);
    }

    #[test]
    fn full_period_analysis_satisfies_discrete_parseval() {
        // Parseval lattice (χ, 1, 1): full-period coefficient energy equals
        // the signal energy to rounding
        let sys = box_system(1.0, 1.0);
        let n = 512usize;
        let step = 1.0 / 256.0;
        let mut samples = vec![c(0.0, 0.0); n];
        for (j, s) in samples.iter_mut().enumerate() {
            let x = -0.5 + step * j as f64;
            // smooth bump with a couple of oscillations, vanishing at edges
            let env = (std::f64::consts::PI * (j as f64) / (n as f64 - 1.0)).sin();
            *s = unit_phase(3.0 * x) * env * env;
        }
        let f = SampledSignal::new(-0.5, step, samples).unwrap();
        let k_range = overlapping_translates((-0.5, 1.5), (0.0, 1.0), 1.0);
        let coeffs = analysis_period(&f, WindowRef::Atom(sys.atom()), 1.0, 1.0, k_range).unwrap();
        let energy = coeffs.energy();
        let f_energy = f.l2_norm().powi(2);
        assert!(
            (energy - f_energy).abs() <= 1e-10 * f_energy,
            "{energy} vs {f_energy}"
        );
    }

    #[test]
    fn full_period_entries_match_direct_trapezoid() {
        // the FFT route must agree with the plain trapezoid sums entry by
        // entry, triangle window included
        let tri = triangle_atom();
        let n = 1024usize;
        let step = 1.0 / 256.0;
        let samples: Vec<Complex64> = (0..n)
            .map(|j| {
                let x = -1.0 + step * j as f64;
                let env = (std::f64::consts::PI * j as f64 / (n as f64 - 1.0)).sin();
                unit_phase(2.0 * x) * (env * env)
            })
            .collect();
        let f = SampledSignal::new(-1.0, step, samples).unwrap();
        let fast = analysis_period(&f, WindowRef::Atom(&tri), 1.0, 0.5, (-2, 2)).unwrap();
        let direct = analysis_sampled(&f, WindowRef::Atom(&tri), 1.0, 0.5, (-2, 2), (-6, 6));
        for k in -2..=2 {
            for nn in -6..=6 {
                let d = (fast.get(k, nn) - direct.get(k, nn)).norm();
                assert!(d < 1e-12, "entry ({k},{nn}) differs by {d}");
            }
        }
    }

    #[test]
    fn full_period_analysis_rejects_incompatible_grids() {
        let sys = box_system(1.0, 1.0);
        let f = SampledSignal::new(0.0, 0.3, vec![c(1.0, 0.0); 8]).unwrap();
        assert!(analysis_period(&f, WindowRef::Atom(sys.atom()), 1.0, 1.0, (0, 0)).is_err());
    }

    #[test]
    fn sampled_analysis_agrees_with_exact_route() {
        let f = PiecewiseAtom::from_trig(
            TrigPiece::new(0.0, 1.0, vec![(c(0.8, 0.1), 2.0), (c(-0.3, 0.4), 4.0)]).unwrap(),
        );
        let sys = box_system(1.0, 1.0);
        let exact = analysis_atom(
            &f,
            WindowRef::Atom(sys.atom()),
            1.0,
            1.0,
            (0, 0),
            (0, 5),
            QuadOpts::default(),
        )
        .unwrap();
        let sampled_f = SampledSignal::from_atom(&f, GridSpec::over(-0.25, 1.25, 6144).unwrap());
        let approx =
            analysis_sampled(&sampled_f, WindowRef::Atom(sys.atom()), 1.0, 1.0, (0, 0), (0, 5));
        for n in 0..=5 {
            let d = (exact.get(0, n) - approx.get(0, n)).norm();
            assert!(d < 1e-6, "n = {n}: {d}");
        }
    }

    #[test]
    fn quadrature_analysis_on_the_triangle_window() {
        // numeric window forces the quadrature route; cross-check one
        // coefficient against the closed form ∫₀¹ (x/2)e^{-2πinx}dx at n=0
        let f = box_atom(0.0, 1.0).unwrap();
        let tri = triangle_atom();
        let grid = analysis_atom(
            &f,
            WindowRef::Atom(&tri),
            1.0,
            0.5,
            (0, 0),
            (0, 0),
            QuadOpts::default(),
        )
        .unwrap();
        // ⟨χ_{[0,1]}, T_0 tri⟩ = ∫₀¹ x/2 dx = 1/4
        assert!((grid.get(0, 0) - c(0.25, 0.0)).norm() < 1e-9);
    }
}

#[cfg(test)]
mod dual_route_tests {
    use super::*;
    use crate::tfcore::{box_atom, NumericBuilder, NumericPiece, Smoothness, TrigPiece};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exact_and_quadrature_analysis_agree_on_the_same_window() {
        // encode the box window a second time as a degree-zero polynomial
        // piece: same function, but routed through adaptive quadrature
        let trig_box = box_atom(0.0, 1.0).unwrap();
        let numeric_box = PiecewiseAtom::new(vec![Piece::Numeric(
            NumericPiece::new(
                0.0,
                1.0,
                NumericBuilder::Poly {
                    coeffs: vec![c(1.0, 0.0)],
                },
                Smoothness::Continuous,
            )
            .unwrap(),
        )])
        .unwrap();
        let f = PiecewiseAtom::from_trig(
            TrigPiece::new(0.0, 1.0, vec![(c(0.6, -0.4), 1.0), (c(-0.2, 0.9), 3.0)]).unwrap(),
        );
        let exact = analysis_atom(
            &f,
            WindowRef::Atom(&trig_box),
            1.0,
            1.0,
            (-1, 1),
            (-2, 4),
            QuadOpts::default(),
        )
        .unwrap();
        let quad = analysis_atom(
            &f,
            WindowRef::Atom(&numeric_box),
            1.0,
            1.0,
            (-1, 1),
            (-2, 4),
            QuadOpts::default(),
        )
        .unwrap();
        for (k, n, v) in exact.iter() {
            let d = (v - quad.get(k, n)).norm();
            assert!(d < 1e-9, "entry ({k},{n}) differs by {d}");
        }
    }

    #[test]
    fn reconstruction_through_the_canonical_quotient_dual() {
        // triangle system at (1, 1/2): analysis with the quotient dual and
        // synthesis with the primal window reproduce a smooth in-band
        // signal up to the modulation tail
        let sys = GaborSystem::new(crate::tfcore::triangle_atom(), 1.0, 0.5).unwrap();
        let dual = canonical_dual(&sys).unwrap();
        let f = PiecewiseAtom::from_trig(
            TrigPiece::new(0.25, 1.75, vec![(c(1.0, 0.0), 0.0)]).unwrap(),
        );
        let coarse = reconstruct(
            &f,
            &sys,
            WindowRef::Quotient(&dual),
            (-2, 3),
            (-4, 4),
            GridSpec::over(-0.5, 2.5, 384).unwrap(),
            QuadOpts {
                abs_tol: 1e-8,
                max_evals: 1 << 20,
            },
        )
        .unwrap();
        let fine = reconstruct(
            &f,
            &sys,
            WindowRef::Quotient(&dual),
            (-2, 3),
            (-12, 12),
            GridSpec::over(-0.5, 2.5, 384).unwrap(),
            QuadOpts {
                abs_tol: 1e-8,
                max_evals: 1 << 20,
            },
        )
        .unwrap();
        // widening the modulation window shrinks the error, and the fine
        // window already tracks the box signal closely
        assert!(
            fine.rel_err_l2 < coarse.rel_err_l2,
            "{} vs {}",
            fine.rel_err_l2,
            coarse.rel_err_l2
        );
        assert!(fine.rel_err_l2 < 0.12, "{}", fine.rel_err_l2);
    }
}
