//! Argument-reduced trigonometry for unit phases.
//!
//! The exact Fourier machinery in [`crate::tfcore`] relies on identities like
//! `∫₀¹ e^{2πi(m−k)x} dx = δ_{mk}` holding bit-exactly for integer `m`, `k`.
//! Evaluating `sin(π·n)` through the raw libm path returns `n·π·ε` noise
//! instead of zero, which accumulates into spurious coefficients. Reducing
//! the argument against the nearest integer first makes `sin_pi` and
//! `cos_pi` exact at integers and half-integers.

use num_complex::Complex64;
use std::f64::consts::PI;

/// `sin(π x)` with exact integer reduction: `sin_pi(n) == 0.0` for integer `n`.
pub fn sin_pi(x: f64) -> f64 {
    let r = x.round();
    let f = x - r;
    let s = (PI * f).sin();
    if (r as i64) & 1 == 0 {
        s
    } else {
        -s
    }
}

/// `cos(π x)` with exact integer reduction: `cos_pi(n) == ±1.0` for integer
/// `n` and `cos_pi(n + 1/2) == 0.0` exactly.
pub fn cos_pi(x: f64) -> f64 {
    let r = x.round();
    let f = x - r;
    if f.abs() == 0.5 {
        return 0.0;
    }
    let c = (PI * f).cos();
    if (r as i64) & 1 == 0 {
        c
    } else {
        -c
    }
}

/// `e^{2πi t}` as a unit complex number, exact at integer and half-integer `t`.
pub fn unit_phase(t: f64) -> Complex64 {
    Complex64::new(cos_pi(2.0 * t), sin_pi(2.0 * t))
}

/// Normalized sinc `sin(π u)/(π u)`, with `sinc(0) = 1` and exact zeros at
/// nonzero integers.
pub fn sinc(u: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else {
        sin_pi(u) / (PI * u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sin_pi_exact_at_integers() {
        for n in -100i64..=100 {
            assert_eq!(sin_pi(n as f64), 0.0);
        }
        assert_eq!(sin_pi(0.5), 1.0);
        assert_eq!(sin_pi(-0.5), -1.0);
        assert_eq!(sin_pi(1.5), -1.0);
    }

    #[test]
    fn cos_pi_exact_at_integers_and_halves() {
        assert_eq!(cos_pi(0.0), 1.0);
        assert_eq!(cos_pi(1.0), -1.0);
        assert_eq!(cos_pi(2.0), 1.0);
        assert_eq!(cos_pi(0.5), 0.0);
        assert_eq!(cos_pi(-2.5), 0.0);
    }

    #[test]
    fn unit_phase_quarter_turns() {
        let i = unit_phase(0.25);
        assert_eq!(i, Complex64::new(0.0, 1.0));
        let minus_one = unit_phase(0.5);
        assert_eq!(minus_one, Complex64::new(-1.0, 0.0));
        assert_eq!(unit_phase(-3.0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn sinc_zeros_and_peak() {
        assert_eq!(sinc(0.0), 1.0);
        for n in 1i64..40 {
            assert_eq!(sinc(n as f64), 0.0);
            assert_eq!(sinc(-(n as f64)), 0.0);
        }
        assert!((sinc(0.5) - 2.0 / PI).abs() < 1e-15);
    }
}
