//! Convergence instrumentation: discrete Hilbert transform, Rademacher /
//! Khintchine ratio checks, and seeded permutation probes of unconditional
//! convergence.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::fmt;

use crate::phase::sin_pi;
use crate::tfcore::SampledSignal;

#[derive(Debug, Clone, PartialEq)]
pub enum ProbeError {
    /// `sin(2^n π x)` vanishes (within 1e-14): the sign is undefined there.
    DyadicBreakpoint { n: u32, x: f64 },
    InvalidArgument(String),
}

impl fmt::Display for ProbeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProbeError::DyadicBreakpoint { n, x } => {
                write!(f, "x = {x} is a dyadic breakpoint of index-{n} sign function")
            }
            ProbeError::InvalidArgument(m) => write!(f, "invalid argument: {m}"),
        }
    }
}

impl std::error::Error for ProbeError {}

/// xorshift64* generator (Marsaglia xorshift with a multiplicative
/// finalizer). Fixed, documented algorithm so acceptance runs are portable
/// across platforms.
#[derive(Debug, Clone)]
pub struct Xorshift64Star {
    state: u64,
}

impl Xorshift64Star {
    pub fn new(seed: u64) -> Self {
        // the all-zero state is a fixed point; displace it
        let state = if seed == 0 { 0x9E3779B97F4A7C15 } else { seed };
        Xorshift64Star { state }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform `±1`.
    pub fn next_sign(&mut self) -> f64 {
        if self.next_u64() & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Standard normal via Box-Muller.
    pub fn next_normal(&mut self) -> f64 {
        let u = (1.0 - self.next_f64()).max(f64::MIN_POSITIVE);
        let v = self.next_f64();
        (-2.0 * u.ln()).sqrt() * crate::phase::cos_pi(2.0 * v)
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = (self.next_u64() % (i as u64 + 1)) as usize;
            items.swap(i, j);
        }
    }
}

/// Direct `O(N²)` evaluation of `out(m) = Σ_{n≠m} c_n / (m − n)` over the
/// declared window, with compensated accumulation. Guarded at `N ≤ 2^14`.
pub fn discrete_hilbert_direct(c: &[Complex64]) -> Vec<Complex64> {
    assert!(c.len() <= 1 << 14, "direct path guarded at 2^14 entries");
    let n = c.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (m, slot) in out.iter_mut().enumerate() {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut comp = Complex64::new(0.0, 0.0);
        for (j, &v) in c.iter().enumerate() {
            if j == m {
                continue;
            }
            let term = v / (m as f64 - j as f64);
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        *slot = sum;
    }
    out
}

/// FFT fast path: linear convolution with the kernel `1/d`, `d ≠ 0`.
pub fn discrete_hilbert_fft(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len();
    if n <= 1 {
        return vec![Complex64::new(0.0, 0.0); n];
    }
    let size = (2 * n).next_power_of_two();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(size);
    let ifft = planner.plan_fft_inverse(size);

    let mut sig = vec![Complex64::new(0.0, 0.0); size];
    sig[..n].copy_from_slice(c);
    let mut ker = vec![Complex64::new(0.0, 0.0); size];
    for d in 1..n as i64 {
        ker[d as usize] = Complex64::new(1.0 / d as f64, 0.0);
        ker[size - d as usize] = Complex64::new(-1.0 / d as f64, 0.0);
    }
    fft.process(&mut sig);
    fft.process(&mut ker);
    for (s, k) in sig.iter_mut().zip(&ker) {
        *s *= k;
    }
    ifft.process(&mut sig);
    let scale = 1.0 / size as f64;
    sig[..n].iter().map(|v| v * scale).collect()
}

/// The windowed discrete Hilbert transform; direct evaluation for short
/// inputs, FFT convolution (validated against direct) beyond 1024 entries.
pub fn discrete_hilbert(c: &[Complex64]) -> Vec<Complex64> {
    if c.len() <= 1024 {
        discrete_hilbert_direct(c)
    } else {
        discrete_hilbert_fft(c)
    }
}

/// `R_n(x) = sign(sin(2^n π x))` for `x ∈ (0, 1)`.
pub fn rademacher(n: u32, x: f64) -> Result<f64, ProbeError> {
    if !(x > 0.0 && x < 1.0) {
        return Err(ProbeError::InvalidArgument(format!(
            "x must lie in (0, 1), got {x}"
        )));
    }
    if n >= 52 {
        return Err(ProbeError::InvalidArgument(format!(
            "index {n} exceeds double-precision dyadic resolution"
        )));
    }
    let v = sin_pi((1u64 << n) as f64 * x);
    if v.abs() < 1e-14 {
        return Err(ProbeError::DyadicBreakpoint { n, x });
    }
    Ok(if v > 0.0 { 1.0 } else { -1.0 })
}

/// Ratio estimate `‖Σ c_n R_n‖_{L^p([0,1])} / ‖c‖_{ℓ²}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KhintchineReport {
    pub low_ratio: f64,
    pub high_ratio: f64,
}

/// Estimates the Khintchine ratio for real coefficients `c` and exponent
/// `p ≥ 1`.
///
/// For up to 22 coefficients the integral is evaluated exactly on dyadic
/// midpoints at resolution `max(2^(ceil(log2 N)+6), 2^N)`, where every sign
/// function in play is constant on each cell. Beyond that the cell count
/// would exceed the double mantissa, so the ratio is estimated through the
/// distributional identity with `trials` seeded random sign vectors (the
/// two report fields coincide in both deterministic regimes).
pub fn khintchine_check(c: &[f64], p: f64, trials: u32, seed: u64) -> KhintchineReport {
    assert!(p >= 1.0, "exponent must be >= 1");
    assert!(!c.is_empty(), "coefficients must be nonzero");
    let l2: f64 = c.iter().map(|v| v * v).sum::<f64>().sqrt();
    if l2 == 0.0 {
        return KhintchineReport {
            low_ratio: 0.0,
            high_ratio: 0.0,
        };
    }
    let n = c.len();
    let ratio = if n <= 22 {
        let k = (usize::BITS - (n - 1).leading_zeros()).max(1) + 6;
        let k = (k as usize).max(n) as u32;
        let cells = 1u64 << k;
        let mut acc = 0.0f64;
        for i in 0..cells {
            let x = (i as f64 + 0.5) / cells as f64;
            let mut s = 0.0;
            for (j, &cj) in c.iter().enumerate() {
                // R_j is constant on each cell, so the midpoint is never a
                // breakpoint here
                s += cj * rademacher(j as u32, x).expect("midpoint off the breakpoint set");
            }
            acc += s.abs().powf(p);
        }
        (acc / cells as f64).powf(1.0 / p)
    } else {
        let mut rng = Xorshift64Star::new(seed);
        let samples = if trials == 0 { 1u32 << 16 } else { trials };
        let mut acc = 0.0f64;
        for _ in 0..samples {
            let mut s = 0.0;
            for &cj in c {
                s += cj * rng.next_sign();
            }
            acc += s.abs().powf(p);
        }
        (acc / samples as f64).powf(1.0 / p)
    };
    KhintchineReport {
        low_ratio: ratio / l2,
        high_ratio: ratio / l2,
    }
}

/// Per-trial record of the permutation probe.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRow {
    pub trial: u32,
    pub permutation_seed: u64,
    /// Max over prefixes of `norm(prefix − its own signed/permuted limit)`.
    pub max_prefix_deviation: f64,
    /// `norm(permuted full sum − natural full sum)`; zero up to rounding
    /// for finite sums.
    pub full_sum_deviation: f64,
}

/// Aggregate of the permutation/sign-flip probe. Deterministic given the
/// seed.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub trials: u32,
    pub max_deviation: f64,
    pub mean_deviation: f64,
    pub seed: u64,
    pub rows: Vec<TrialRow>,
}

fn kahan_sum_signals(
    terms: &[SampledSignal],
    order: &[usize],
    signs: Option<&[f64]>,
) -> Vec<Complex64> {
    let len = terms[0].len();
    let mut sums = vec![Complex64::new(0.0, 0.0); len];
    let mut comps = vec![Complex64::new(0.0, 0.0); len];
    for &idx in order {
        let sign = signs.map_or(1.0, |s| s[idx]);
        for (i, &v) in terms[idx].samples().iter().enumerate() {
            let term = v * sign;
            let y = term - comps[i];
            let t = sums[i] + y;
            comps[i] = (t - sums[i]) - y;
            sums[i] = t;
        }
    }
    sums
}

fn to_signal(template: &SampledSignal, samples: Vec<Complex64>) -> SampledSignal {
    SampledSignal::new(template.start(), template.step(), samples).expect("template grid valid")
}

/// Natural-order prefix deviations `norm(prefix_j − full sum)`.
pub fn prefix_deviation_profile(
    terms: &[SampledSignal],
    norm_fn: &dyn Fn(&SampledSignal) -> f64,
) -> Vec<f64> {
    assert!(!terms.is_empty());
    let order: Vec<usize> = (0..terms.len()).collect();
    let full = kahan_sum_signals(terms, &order, None);
    let len = terms[0].len();
    let mut running = vec![Complex64::new(0.0, 0.0); len];
    let mut comps = vec![Complex64::new(0.0, 0.0); len];
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        for (i, &v) in t.samples().iter().enumerate() {
            let y = v - comps[i];
            let s = running[i] + y;
            comps[i] = (s - running[i]) - y;
            running[i] = s;
        }
        let diff: Vec<Complex64> = running.iter().zip(&full).map(|(a, b)| a - b).collect();
        out.push(norm_fn(&to_signal(&terms[0], diff)));
    }
    out
}

/// Permutation/sign-flip probe of a truncated series.
///
/// Each trial draws a uniform permutation (Fisher-Yates over xorshift64*)
/// and a uniform `±1` sign pattern, then records the maximal prefix
/// deviation of the rearranged signed series from its own limit, plus the
/// deviation of the unsigned permuted full sum from the natural-order sum
/// (zero up to accumulation rounding: finite sums commute).
pub fn unconditional_probe(
    terms: &[SampledSignal],
    norm_fn: &dyn Fn(&SampledSignal) -> f64,
    trials: u32,
    seed: u64,
) -> ProbeReport {
    assert!(!terms.is_empty(), "need at least one term");
    let len = terms[0].len();
    for t in terms {
        assert_eq!(t.len(), len, "terms must share one grid");
    }
    let natural: Vec<usize> = (0..terms.len()).collect();
    let full = kahan_sum_signals(terms, &natural, None);

    let mut root = Xorshift64Star::new(seed);
    let mut rows = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let permutation_seed = root.next_u64();
        let mut rng = Xorshift64Star::new(permutation_seed);
        let mut order = natural.clone();
        rng.shuffle(&mut order);
        let signs: Vec<f64> = (0..terms.len()).map(|_| rng.next_sign()).collect();

        let limit = kahan_sum_signals(terms, &order, Some(&signs));
        let mut running = vec![Complex64::new(0.0, 0.0); len];
        let mut comps = vec![Complex64::new(0.0, 0.0); len];
        let mut max_prefix = 0.0f64;
        for &idx in &order {
            let sign = signs[idx];
            for (i, &v) in terms[idx].samples().iter().enumerate() {
                let term = v * sign;
                let y = term - comps[i];
                let s = running[i] + y;
                comps[i] = (s - running[i]) - y;
                running[i] = s;
            }
            let diff: Vec<Complex64> = running.iter().zip(&limit).map(|(a, b)| a - b).collect();
            max_prefix = max_prefix.max(norm_fn(&to_signal(&terms[0], diff)));
        }

        let permuted_full = kahan_sum_signals(terms, &order, None);
        let diff: Vec<Complex64> = permuted_full.iter().zip(&full).map(|(a, b)| a - b).collect();
        let full_sum_deviation = norm_fn(&to_signal(&terms[0], diff));
        rows.push(TrialRow {
            trial,
            permutation_seed,
            max_prefix_deviation: max_prefix,
            full_sum_deviation,
        });
    }
    let max_deviation = rows
        .iter()
        .map(|r| r.max_prefix_deviation)
        .fold(0.0, f64::max);
    let mean_deviation = if rows.is_empty() {
        0.0
    } else {
        rows.iter().map(|r| r.max_prefix_deviation).sum::<f64>() / rows.len() as f64
    };
    ProbeReport {
        trials,
        max_deviation,
        mean_deviation,
        seed,
        rows,
    }
}

/// CSV with columns `trial,permutation_seed,max_prefix_deviation,full_sum_deviation`.
pub fn probe_csv(report: &ProbeReport) -> String {
    let mut out = String::from("trial,permutation_seed,max_prefix_deviation,full_sum_deviation\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{:.17e},{:.17e}\n",
            r.trial, r.permutation_seed, r.max_prefix_deviation, r.full_sum_deviation
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn hilbert_of_a_delta_is_the_kernel() {
        // 1 at the center of a [-4,4] window: out(m) = 1/(m - center)
        let mut input = vec![c(0.0); 9];
        input[4] = c(1.0);
        let out = discrete_hilbert_direct(&input);
        for (m, v) in out.iter().enumerate() {
            let expect = if m == 4 { 0.0 } else { 1.0 / (m as f64 - 4.0) };
            assert_eq!(v.re, expect, "m = {m}");
            assert_eq!(v.im, 0.0);
        }
    }

    #[test]
    fn hilbert_two_term_sum() {
        // c = (1 at 0, 1 at 1): out(2) = 1/2 + 1/1 = 3/2
        let input = vec![c(1.0), c(1.0), c(0.0), c(0.0)];
        let out = discrete_hilbert_direct(&input);
        assert!((out[2].re - 1.5).abs() < 1e-15);
    }

    #[test]
    fn hilbert_antisymmetric_under_reflection() {
        let mut rng = Xorshift64Star::new(7);
        let input: Vec<Complex64> = (0..33)
            .map(|_| Complex64::new(rng.next_normal(), rng.next_normal()))
            .collect();
        let reversed: Vec<Complex64> = input.iter().rev().copied().collect();
        let lhs = discrete_hilbert_direct(&reversed);
        let rhs: Vec<Complex64> = discrete_hilbert_direct(&input)
            .into_iter()
            .rev()
            .map(|v| -v)
            .collect();
        let scale: f64 = input.iter().map(|v| v.norm()).sum();
        for (a, b) in lhs.iter().zip(&rhs) {
            assert!((a - b).norm() <= 1e-14 * scale);
        }
    }

    #[test]
    fn hilbert_linearity() {
        let mut rng = Xorshift64Star::new(11);
        let u: Vec<Complex64> = (0..40).map(|_| c(rng.next_normal())).collect();
        let v: Vec<Complex64> = (0..40).map(|_| c(rng.next_normal())).collect();
        let a = Complex64::new(1.7, -0.4);
        let combined: Vec<Complex64> = u.iter().zip(&v).map(|(x, y)| a * x + y).collect();
        let lhs = discrete_hilbert_direct(&combined);
        let hu = discrete_hilbert_direct(&u);
        let hv = discrete_hilbert_direct(&v);
        for i in 0..40 {
            let rhs = a * hu[i] + hv[i];
            assert!((lhs[i] - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn hilbert_fft_matches_direct() {
        let mut rng = Xorshift64Star::new(3);
        for n in [16usize, 100, 512, 1500] {
            let input: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.next_normal(), rng.next_normal()))
                .collect();
            let fast = discrete_hilbert_fft(&input);
            let slow = discrete_hilbert_direct(&input);
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).norm() < 1e-10, "n = {n}");
            }
        }
    }

    #[test]
    fn hilbert_ratio_stable_across_lengths() {
        // small-scale version of the boundedness evidence
        let mut rng = Xorshift64Star::new(2024);
        let mut max_ratio = vec![0.0f64; 2];
        for (idx, n) in [256usize, 1024].iter().enumerate() {
            for _ in 0..20 {
                let v: Vec<Complex64> = (0..*n).map(|_| c(rng.next_normal())).collect();
                let h = discrete_hilbert(&v);
                let num: f64 = h.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                let den: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                max_ratio[idx] = max_ratio[idx].max(num / den);
            }
        }
        assert!(max_ratio[1] <= 1.10 * max_ratio[0], "{max_ratio:?}");
    }

    #[test]
    fn rademacher_values() {
        assert_eq!(rademacher(0, 0.5).unwrap(), 1.0);
        assert_eq!(rademacher(1, 0.3).unwrap(), 1.0);
        assert_eq!(rademacher(1, 0.7).unwrap(), -1.0);
        assert_eq!(rademacher(2, 0.3).unwrap(), -1.0);
    }

    #[test]
    fn rademacher_breakpoints_and_domain() {
        assert!(matches!(
            rademacher(1, 0.5),
            Err(ProbeError::DyadicBreakpoint { .. })
        ));
        assert!(matches!(
            rademacher(3, 0.375),
            Err(ProbeError::DyadicBreakpoint { .. })
        ));
        assert!(rademacher(0, 0.0).is_err());
        assert!(rademacher(0, 1.0).is_err());
    }

    #[test]
    fn rademacher_integrates_to_zero_on_dyadic_midpoints() {
        // the index-0 sign function is identically +1, so zero mean starts
        // at index 1
        for n in 1..=6u32 {
            let cells = 1u64 << 10;
            let mut sum = 0.0;
            for i in 0..cells {
                let x = (i as f64 + 0.5) / cells as f64;
                sum += rademacher(n, x).unwrap();
            }
            assert_eq!(sum, 0.0, "n = {n}");
        }
    }

    #[test]
    fn khintchine_single_coefficient_is_one_for_every_p() {
        for p in [1.0, 1.5, 2.0, 3.0, 7.0] {
            let r = khintchine_check(&[0.0, 2.5, 0.0], p, 0, 1);
            assert!((r.low_ratio - 1.0).abs() < 1e-12, "p = {p}");
            assert_eq!(r.low_ratio, r.high_ratio);
        }
    }

    #[test]
    fn khintchine_p2_is_exactly_one() {
        let mut rng = Xorshift64Star::new(5);
        for trial in 0..20 {
            let n = 1 + (rng.next_u64() % 10) as usize;
            let cvec: Vec<f64> = (0..n).map(|_| rng.next_normal()).collect();
            if cvec.iter().all(|v| *v == 0.0) {
                continue;
            }
            let r = khintchine_check(&cvec, 2.0, 0, 1);
            assert!(
                (r.low_ratio - 1.0).abs() < 1e-10,
                "trial {trial}: {}",
                r.low_ratio
            );
        }
    }

    #[test]
    fn khintchine_p1_flat_vector_near_gaussian_mean() {
        let n = 64usize;
        let cvec = vec![1.0 / (n as f64).sqrt(); n];
        let r = khintchine_check(&cvec, 1.0, 1 << 16, 42);
        assert!(r.low_ratio >= 0.5 && r.low_ratio <= 1.0, "{}", r.low_ratio);
        let gauss = (2.0 / std::f64::consts::PI).sqrt();
        assert!((r.low_ratio - gauss).abs() < 0.05, "{}", r.low_ratio);
    }

    fn scalar_terms(values: &[f64]) -> Vec<SampledSignal> {
        values
            .iter()
            .map(|&v| SampledSignal::new(0.0, 1.0, vec![c(v)]).unwrap())
            .collect()
    }

    fn abs_norm(s: &SampledSignal) -> f64 {
        s.samples()[0].norm()
    }

    #[test]
    fn permuted_full_sums_commute() {
        let terms = scalar_terms(&(1..=200).map(|n| 1.0 / n as f64).collect::<Vec<_>>());
        let report = unconditional_probe(&terms, &abs_norm, 8, 99);
        for row in &report.rows {
            assert!(row.full_sum_deviation < 1e-12, "trial {}", row.trial);
        }
    }

    #[test]
    fn alternating_harmonic_oscillates_under_permutation() {
        let n = 10_000usize;
        let values: Vec<f64> = (1..=n)
            .map(|k| if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64)
            .collect();
        let terms = scalar_terms(&values);

        // natural order: beyond prefix 100 the tail stays below 0.1
        let profile = prefix_deviation_profile(&terms, &abs_norm);
        for (j, dev) in profile.iter().enumerate().skip(100) {
            assert!(*dev < 0.1, "prefix {j}: {dev}");
        }

        // random permutations wander far with high probability
        let report = unconditional_probe(&terms, &abs_norm, 32, 7);
        let exceeding = report
            .rows
            .iter()
            .filter(|r| r.max_prefix_deviation > 1.0)
            .count();
        assert!(exceeding * 10 >= report.rows.len() * 8, "{exceeding}/32");
    }

    #[test]
    fn probe_is_reproducible() {
        let terms = scalar_terms(&(1..=50).map(|n| 1.0 / (n * n) as f64).collect::<Vec<_>>());
        let a = unconditional_probe(&terms, &abs_norm, 16, 1234);
        let b = unconditional_probe(&terms, &abs_norm, 16, 1234);
        assert_eq!(a, b);
        let c = unconditional_probe(&terms, &abs_norm, 16, 1235);
        assert_ne!(a.rows, c.rows);
    }

    #[test]
    fn probe_csv_layout() {
        let terms = scalar_terms(&[1.0, 0.5, 0.25]);
        let report = unconditional_probe(&terms, &abs_norm, 3, 1);
        let csv = probe_csv(&report);
        assert!(csv.starts_with(
            "trial,permutation_seed,max_prefix_deviation,full_sum_deviation\n"
        ));
        assert_eq!(csv.lines().count(), 4);
    }

    #[test]
    fn xorshift_is_deterministic_and_uniformish() {
        let mut a = Xorshift64Star::new(77);
        let mut b = Xorshift64Star::new(77);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut rng = Xorshift64Star::new(1);
        let mean: f64 = (0..10_000).map(|_| rng.next_f64()).sum::<f64>() / 10_000.0;
        assert!((mean - 0.5).abs() < 0.02, "{mean}");
    }
}
