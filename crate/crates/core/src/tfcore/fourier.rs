//! Fourier coefficients over intervals: exact closed forms for trig pieces,
//! adaptive quadrature for numeric pieces.

use num_complex::Complex64;

use super::atom::{Piece, PiecewiseAtom};
use super::TfError;
use crate::phase::{sinc, unit_phase};

/// Below this value of `|ω − freq|` the exponential-integral formula switches
/// to the interval-length branch, avoiding cancellation near `ω = freq`.
pub const EPS_DEGENERATE: f64 = 1e-12;

/// Quadrature controls for numeric-piece integrals.
#[derive(Debug, Clone, Copy)]
pub struct QuadOpts {
    /// Absolute tolerance on the integral.
    pub abs_tol: f64,
    /// Evaluation budget across the whole call.
    pub max_evals: usize,
}

impl Default for QuadOpts {
    fn default() -> Self {
        QuadOpts {
            abs_tol: 1e-10,
            max_evals: 1 << 20,
        }
    }
}

/// `∫_{a'}^{b'} e^{-2πi δ x} dx` over `[a', b')` in a cancellation-free form:
/// `len · sinc(δ·len) · e^{-2πi δ·mid}`, exact when `δ·len` is an integer.
fn oscillatory_box_integral(a: f64, b: f64, delta: f64) -> Complex64 {
    let len = b - a;
    let mid = 0.5 * (a + b);
    let s = if delta.abs() < EPS_DEGENERATE {
        1.0
    } else {
        sinc(delta * len)
    };
    unit_phase(-delta * mid) * (len * s)
}

/// Adaptive Simpson integration of a complex-valued function.
///
/// Subdivides until the local Richardson estimate meets the tolerance,
/// spending at most `budget` evaluations.
pub fn adaptive_simpson<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    budget: usize,
) -> Result<Complex64, TfError> {
    struct Panel {
        a: f64,
        b: f64,
        fa: Complex64,
        fm: Complex64,
        fb: Complex64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    }

    let mut evals: usize = 0;
    let eval = |x: f64, evals: &mut usize| {
        *evals += 1;
        f(x)
    };

    let fa = eval(a, &mut evals);
    let m = 0.5 * (a + b);
    let fm = eval(m, &mut evals);
    let fb = eval(b, &mut evals);
    let whole = (fa + fm * 4.0 + fb) * ((b - a) / 6.0);

    let mut stack = vec![Panel {
        a,
        b,
        fa,
        fm,
        fb,
        whole,
        tol,
        depth: 0,
    }];
    let mut acc = Complex64::new(0.0, 0.0);
    let mut worst = 0.0f64;

    while let Some(p) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let lm = 0.5 * (p.a + m);
        let rm = 0.5 * (m + p.b);
        if evals + 2 > budget {
            return Err(TfError::QuadratureFailure {
                a,
                b,
                requested_tol: tol,
                achieved: worst.max(p.tol),
            });
        }
        let flm = eval(lm, &mut evals);
        let frm = eval(rm, &mut evals);
        let left = (p.fa + flm * 4.0 + p.fm) * ((m - p.a) / 6.0);
        let right = (p.fm + frm * 4.0 + p.fb) * ((p.b - m) / 6.0);
        let err = (left + right - p.whole).norm();
        if err <= 15.0 * p.tol || p.depth >= 48 {
            // Richardson extrapolation of the two half-panels
            acc += left + right + (left + right - p.whole) / 15.0;
            worst = worst.max(err / 15.0);
        } else {
            let half_tol = 0.5 * p.tol;
            stack.push(Panel {
                a: p.a,
                b: m,
                fa: p.fa,
                fm: flm,
                fb: p.fm,
                whole: left,
                tol: half_tol,
                depth: p.depth + 1,
            });
            stack.push(Panel {
                a: m,
                b: p.b,
                fa: p.fm,
                fm: frm,
                fb: p.fb,
                whole: right,
                tol: half_tol,
                depth: p.depth + 1,
            });
        }
    }
    Ok(acc)
}

/// Quadrature of `g` over `[a, b]` pre-split into panels so the adaptive
/// pass starts below the oscillation scale `osc` (cycles per unit length).
fn oscillation_aware_quadrature<F: Fn(f64) -> Complex64>(
    g: &F,
    a: f64,
    b: f64,
    osc: f64,
    opts: QuadOpts,
) -> Result<Complex64, TfError> {
    let len = b - a;
    let panels = ((osc.abs() * len).ceil() as usize).clamp(1, 1 << 12);
    let panel_tol = opts.abs_tol / panels as f64;
    let panel_budget = (opts.max_evals / panels).max(16);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..panels {
        let pa = a + len * (i as f64 / panels as f64);
        let pb = a + len * ((i + 1) as f64 / panels as f64);
        acc += adaptive_simpson(g, pa, pb, panel_tol, panel_budget)?;
    }
    Ok(acc)
}

/// `∫_I atom(x) · e^{-2πiωx} dx`.
///
/// Trig pieces contribute in closed form; numeric pieces go through adaptive
/// quadrature at `opts.abs_tol`.
pub fn fourier_coefficient(
    atom: &PiecewiseAtom,
    interval: (f64, f64),
    omega: f64,
    opts: QuadOpts,
) -> Result<Complex64, TfError> {
    let (lo, hi) = interval;
    let mut acc = Complex64::new(0.0, 0.0);
    for piece in atom.pieces() {
        let (a, b) = piece.interval();
        let a2 = a.max(lo);
        let b2 = b.min(hi);
        if a2 >= b2 {
            continue;
        }
        match piece {
            Piece::Trig(t) => {
                for &(c, f) in t.terms() {
                    acc += c * oscillatory_box_integral(a2, b2, omega - f);
                }
            }
            Piece::Numeric(n) => {
                let (_, _, mod_freq) = n.wrappers();
                // a piecewise-continuous evaluator gets a denser initial
                // split so the adaptive pass can localize its jumps
                let roughness = match n.smoothness() {
                    super::atom::Smoothness::Continuous => 1.0,
                    super::atom::Smoothness::PiecewiseContinuous => 8.0,
                };
                let osc = (omega - mod_freq).abs().max(roughness);
                let g = |x: f64| n.eval_unclipped(x) * unit_phase(-omega * x);
                acc += oscillation_aware_quadrature(&g, a2, b2, osc, opts)?;
            }
        }
    }
    Ok(acc)
}

/// `⟨f, g⟩ = ∫ f(x) · conj(g(x)) dx`, exact when both atoms are trig-only.
pub fn inner_product(
    f: &PiecewiseAtom,
    g: &PiecewiseAtom,
    opts: QuadOpts,
) -> Result<Complex64, TfError> {
    if f.is_all_trig() && g.is_all_trig() {
        return Ok(inner_product_trig(f, g));
    }
    // Integrate between combined breakpoints so each panel is smooth inside.
    let mut cuts: Vec<f64> = f
        .breakpoints()
        .into_iter()
        .chain(g.breakpoints())
        .collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-14);
    let (flo, fhi) = f.support();
    let (glo, ghi) = g.support();
    let lo = flo.max(glo);
    let hi = fhi.min(ghi);
    let mut acc = Complex64::new(0.0, 0.0);
    for w in cuts.windows(2) {
        let a = w[0].max(lo);
        let b = w[1].min(hi);
        if a >= b {
            continue;
        }
        let h = |x: f64| f.evaluate(x) * g.evaluate(x).conj();
        acc += oscillation_aware_quadrature(&h, a, b, 0.0, opts)?;
    }
    Ok(acc)
}

fn inner_product_trig(f: &PiecewiseAtom, g: &PiecewiseAtom) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for pf in f.pieces() {
        let Piece::Trig(tf) = pf else { unreachable!() };
        for pg in g.pieces() {
            let Piece::Trig(tg) = pg else { unreachable!() };
            let (fa, fb) = tf.interval();
            let (ga, gb) = tg.interval();
            let a = fa.max(ga);
            let b = fb.min(gb);
            if a >= b {
                continue;
            }
            for &(cf, ff) in tf.terms() {
                for &(cg, fg) in tg.terms() {
                    // f·conj(g) carries frequency ff − fg; integrate it
                    acc += cf * cg.conj() * oscillatory_box_integral(a, b, fg - ff);
                }
            }
        }
    }
    acc
}

/// `‖f‖₂² = ∫ |f|²`, exact for trig-only atoms.
pub fn l2_norm_sq(f: &PiecewiseAtom, opts: QuadOpts) -> Result<f64, TfError> {
    Ok(inner_product(f, f, opts)?.re)
}
