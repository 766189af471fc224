//! Property tests for the structural invariants: linearity and branch
//! agreement of the Fourier machinery, Parseval identities, mixed-norm
//! axioms, serialization round-trips, and accumulation-order invariance.

use num_complex::Complex64;
use proptest::prelude::*;

use gaborlab_core::gabor::{analysis_atom, synthesis, synthesis_ordered, WindowRef};
use gaborlab_core::phase::unit_phase;
use gaborlab_core::probes::{discrete_hilbert_direct, khintchine_check, Xorshift64Star};
use gaborlab_core::tfcore::{
    adaptive_simpson, atom_from_json, atom_to_json, box_atom, fourier_coefficient, l2_norm_sq,
    lpq_norm, CoeffGrid, GridSpec, MixedNormParams, PiecewiseAtom, QuadOpts, TrigPiece,
};

fn complex_strategy() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn trig_piece_strategy(integer_freqs: bool) -> impl Strategy<Value = TrigPiece> {
    let freq = if integer_freqs {
        (-8i32..=8).prop_map(|m| m as f64).boxed()
    } else {
        (-8.0f64..8.0).boxed()
    };
    (
        -2.0f64..2.0,
        0.25f64..2.0,
        prop::collection::vec((complex_strategy(), freq), 1..6),
    )
        .prop_map(|(a, len, terms)| TrigPiece::new(a, a + len, terms).unwrap())
}

fn atom_strategy(integer_freqs: bool) -> impl Strategy<Value = PiecewiseAtom> {
    trig_piece_strategy(integer_freqs).prop_map(PiecewiseAtom::from_trig)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fourier_coefficient_is_linear_in_the_atom(
        f in trig_piece_strategy(false),
        g in trig_piece_strategy(false),
        a in complex_strategy(),
        omega in -6.0f64..6.0,
    ) {
        // restrict both to a shared interval so the sum stays one piece
        let (lo, hi) = f.interval();
        let shared_g = TrigPiece::new(lo, hi, g.terms().to_vec()).unwrap();
        let mut combined_terms: Vec<(Complex64, f64)> =
            f.terms().iter().map(|&(c, fr)| (a * c, fr)).collect();
        combined_terms.extend_from_slice(shared_g.terms());
        let combined = PiecewiseAtom::from_trig(TrigPiece::new(lo, hi, combined_terms).unwrap());
        let fa = PiecewiseAtom::from_trig(f);
        let ga = PiecewiseAtom::from_trig(shared_g);

        let opts = QuadOpts::default();
        let window = (lo, hi);
        let lhs = fourier_coefficient(&combined, window, omega, opts).unwrap();
        let rhs = a * fourier_coefficient(&fa, window, omega, opts).unwrap()
            + fourier_coefficient(&ga, window, omega, opts).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn closed_form_matches_quadrature(
        atom in atom_strategy(false),
        omega in -4.0f64..4.0,
    ) {
        let (lo, hi) = atom.support();
        let exact = fourier_coefficient(&atom, (lo, hi), omega, QuadOpts::default()).unwrap();
        let integrand = |x: f64| atom.evaluate(x) * unit_phase(-omega * x);
        // split at the piece boundary structure like the numeric branch does
        let mut oracle = Complex64::new(0.0, 0.0);
        let panels = 64usize;
        for i in 0..panels {
            let a = lo + (hi - lo) * i as f64 / panels as f64;
            let b = lo + (hi - lo) * (i + 1) as f64 / panels as f64;
            oracle += adaptive_simpson(&integrand, a, b, 1e-12, 1 << 16).unwrap();
        }
        prop_assert!((exact - oracle).norm() <= 1e-9 * (1.0 + exact.norm()));
    }

    #[test]
    fn parseval_on_one_box_is_exact_for_integer_frequencies(
        atom in atom_strategy(true),
    ) {
        // an integer-frequency sum over the whole unit interval is its own
        // Fourier polynomial: the windowed coefficient energy matches
        // ‖f·χ_{[0,1]}‖₂² exactly once the window covers every frequency
        let terms: Vec<(Complex64, f64)> = match &atom.pieces()[0] {
            gaborlab_core::tfcore::Piece::Trig(t) => t.terms().to_vec(),
            _ => unreachable!(),
        };
        let unit = PiecewiseAtom::from_trig(TrigPiece::new(0.0, 1.0, terms).unwrap());
        let opts = QuadOpts::default();
        let mut energy = 0.0;
        for k in -12..=12 {
            energy += fourier_coefficient(&unit, (0.0, 1.0), k as f64, opts)
                .unwrap()
                .norm_sqr();
        }
        let reference = l2_norm_sq(&unit, opts).unwrap();
        prop_assert!((energy - reference).abs() <= 1e-11 * reference.max(1.0));
    }

    #[test]
    fn mixed_norm_is_monotone_and_diagonal_is_plain_lp(
        values in prop::collection::vec(0.0f64..3.0, 9),
        bump in 0.01f64..2.0,
        p in 1.0f64..4.0,
        q in 1.0f64..4.0,
    ) {
        let mut small = CoeffGrid::zeros((0, 2), (0, 2));
        let mut big = CoeffGrid::zeros((0, 2), (0, 2));
        for (i, v) in values.iter().enumerate() {
            let (k, n) = ((i % 3) as i64, (i / 3) as i64);
            small.set(k, n, Complex64::new(*v, 0.0));
            big.set(k, n, Complex64::new(v + bump, 0.0));
        }
        let params = MixedNormParams::new(p, q).unwrap();
        prop_assert!(lpq_norm(&small, params) <= lpq_norm(&big, params) + 1e-12);

        let diag = MixedNormParams::new(p, p).unwrap();
        let plain = values
            .iter()
            .map(|v| v.powf(p))
            .sum::<f64>()
            .powf(1.0 / p);
        prop_assert!((lpq_norm(&small, diag) - plain).abs() <= 1e-10 * plain.max(1.0));
    }

    #[test]
    fn serialization_round_trip_preserves_values(
        atom in atom_strategy(false),
        xs in prop::collection::vec(-4.0f64..4.0, 8),
    ) {
        let json = atom_to_json(&atom);
        let back = atom_from_json(&json).unwrap();
        for x in xs {
            prop_assert!((atom.evaluate(x) - back.evaluate(x)).norm() < 1e-15);
        }
    }

    #[test]
    fn synthesis_is_permutation_invariant(
        seed in any::<u64>(),
    ) {
        // coefficients of a fixed atom under the orthonormal box system,
        // resynthesized in a random accumulation order
        let f = PiecewiseAtom::from_trig(
            TrigPiece::new(
                0.0,
                1.0,
                vec![
                    (Complex64::new(1.0, 0.25), 1.0),
                    (Complex64::new(-0.5, 0.75), 3.0),
                    (Complex64::new(0.25, -1.0), 6.0),
                ],
            )
            .unwrap(),
        );
        let window = box_atom(0.0, 1.0).unwrap();
        let coeffs = analysis_atom(
            &f,
            WindowRef::Atom(&window),
            1.0,
            1.0,
            (-1, 1),
            (-2, 8),
            QuadOpts::default(),
        )
        .unwrap();
        let grid = GridSpec::over(-0.5, 1.5, 128).unwrap();
        let base = synthesis(WindowRef::Atom(&window), 1.0, 1.0, &coeffs, grid);
        let (k_lo, k_hi) = coeffs.k_range();
        let (n_lo, n_hi) = coeffs.n_range();
        let mut order: Vec<(i64, i64)> = (k_lo..=k_hi)
            .flat_map(|k| (n_lo..=n_hi).map(move |n| (k, n)))
            .collect();
        let mut rng = Xorshift64Star::new(seed);
        rng.shuffle(&mut order);
        let permuted = synthesis_ordered(
            WindowRef::Atom(&window),
            1.0,
            1.0,
            &coeffs,
            grid,
            order.into_iter(),
        );
        prop_assert!(base.l2_distance(&permuted) <= 1e-10);
    }

    #[test]
    fn khintchine_p2_ratio_is_one(
        coeffs in prop::collection::vec(-3.0f64..3.0, 1..9),
    ) {
        prop_assume!(coeffs.iter().map(|v| v * v).sum::<f64>() > 1e-6);
        let report = khintchine_check(&coeffs, 2.0, 0, 7);
        prop_assert!((report.low_ratio - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn hilbert_reflection_antisymmetry(
        values in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 2..48),
    ) {
        let input: Vec<Complex64> = values
            .iter()
            .map(|&(re, im)| Complex64::new(re, im))
            .collect();
        let reversed: Vec<Complex64> = input.iter().rev().copied().collect();
        let lhs = discrete_hilbert_direct(&reversed);
        let rhs: Vec<Complex64> = discrete_hilbert_direct(&input)
            .into_iter()
            .rev()
            .map(|v| -v)
            .collect();
        let scale: f64 = input.iter().map(|v| v.norm()).sum::<f64>().max(1.0);
        for (a, b) in lhs.iter().zip(&rhs) {
            prop_assert!((a - b).norm() <= 1e-13 * scale);
        }
    }
}
