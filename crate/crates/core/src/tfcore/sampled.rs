//! Uniform-grid sampled signals.

use num_complex::Complex64;

use super::atom::PiecewiseAtom;
use super::TfError;

/// Descriptor of a uniform grid: `x_i = start + i·step`, `i = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self, TfError> {
        if !(step.is_finite() && step > 0.0) {
            return Err(TfError::InvalidStep(step));
        }
        if count == 0 {
            return Err(TfError::EmptySignal);
        }
        Ok(GridSpec { start, step, count })
    }

    /// `count` points covering `[lo, hi)` evenly.
    pub fn over(lo: f64, hi: f64, count: usize) -> Result<Self, TfError> {
        if count == 0 {
            return Err(TfError::EmptySignal);
        }
        GridSpec::new(lo, (hi - lo) / count as f64, count)
    }

    pub fn x(&self, i: usize) -> f64 {
        self.start + self.step * i as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.x(i))
    }

    pub fn end(&self) -> f64 {
        self.x(self.count)
    }
}

/// Complex samples on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    start: f64,
    step: f64,
    samples: Vec<Complex64>,
}

impl SampledSignal {
    pub fn new(start: f64, step: f64, samples: Vec<Complex64>) -> Result<Self, TfError> {
        if !(step.is_finite() && step > 0.0) {
            return Err(TfError::InvalidStep(step));
        }
        if samples.is_empty() {
            return Err(TfError::EmptySignal);
        }
        Ok(SampledSignal {
            start,
            step,
            samples,
        })
    }

    /// Sample an atom pointwise on a grid.
    pub fn from_atom(atom: &PiecewiseAtom, grid: GridSpec) -> Self {
        let samples = grid.points().map(|x| atom.evaluate(x)).collect();
        SampledSignal {
            start: grid.start,
            step: grid.step,
            samples,
        }
    }

    pub fn zeros(grid: GridSpec) -> Self {
        SampledSignal {
            start: grid.start,
            step: grid.step,
            samples: vec![Complex64::new(0.0, 0.0); grid.count],
        }
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.start + self.step * i as f64
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn grid(&self) -> GridSpec {
        GridSpec {
            start: self.start,
            step: self.step,
            count: self.samples.len(),
        }
    }

    /// Grid L² norm `sqrt(step · Σ|s_i|²)`.
    pub fn l2_norm(&self) -> f64 {
        (self.step * self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// Largest sample modulus.
    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(|s| s.norm()).fold(0.0, f64::max)
    }

    /// Grid L² distance to another signal on the same grid. Panics if grids
    /// differ; callers align grids by construction.
    pub fn l2_distance(&self, other: &SampledSignal) -> f64 {
        assert_eq!(self.samples.len(), other.samples.len(), "grid mismatch");
        assert!(
            (self.start - other.start).abs() <= 1e-12 && (self.step - other.step).abs() <= 1e-15,
            "grid mismatch"
        );
        let sum: f64 = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        (self.step * sum).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tfcore::atom::box_atom;

    #[test]
    fn grid_points() {
        let g = GridSpec::new(-1.0, 0.5, 5).unwrap();
        let pts: Vec<f64> = g.points().collect();
        assert_eq!(pts, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn invalid_grids_rejected() {
        assert!(GridSpec::new(0.0, 0.0, 4).is_err());
        assert!(GridSpec::new(0.0, -1.0, 4).is_err());
        assert!(GridSpec::new(0.0, 1.0, 0).is_err());
        assert!(SampledSignal::new(0.0, 1.0, vec![]).is_err());
    }

    #[test]
    fn sampling_a_box() {
        let atom = box_atom(0.0, 1.0).unwrap();
        let sig = SampledSignal::from_atom(&atom, GridSpec::over(-1.0, 2.0, 6).unwrap());
        let mods: Vec<f64> = sig.samples().iter().map(|s| s.re).collect();
        assert_eq!(mods, vec![0.0, 0.0, 1.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn l2_norm_of_unit_box_sampling() {
        let atom = box_atom(0.0, 1.0).unwrap();
        let sig = SampledSignal::from_atom(&atom, GridSpec::over(0.0, 1.0, 1024).unwrap());
        assert!((sig.l2_norm() - 1.0).abs() < 1e-12);
    }
}
