//! Coefficient rectangles and discrete mixed norms.

use num_complex::Complex64;

use super::TfError;

/// Exponent pair for `ℓ^{p,q}`; `f64::INFINITY` selects the sup norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedNormParams {
    pub p: f64,
    pub q: f64,
}

impl MixedNormParams {
    pub fn new(p: f64, q: f64) -> Result<Self, TfError> {
        for e in [p, q] {
            if e < 1.0 || e.is_nan() {
                return Err(TfError::InvalidExponent(e));
            }
        }
        Ok(MixedNormParams { p, q })
    }

    /// Conjugate exponents with the convention `1' = ∞` and `∞' = 1`.
    pub fn conjugate(&self) -> MixedNormParams {
        MixedNormParams {
            p: conjugate_exponent(self.p),
            q: conjugate_exponent(self.q),
        }
    }
}

pub(crate) fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// Dense complex matrix over an index rectangle `k ∈ [k_lo, k_hi]`,
/// `n ∈ [n_lo, n_hi]`, housing Gabor coefficients `c_{kn}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffGrid {
    k_lo: i64,
    k_hi: i64,
    n_lo: i64,
    n_hi: i64,
    entries: Vec<Complex64>,
}

impl CoeffGrid {
    pub fn zeros(k_range: (i64, i64), n_range: (i64, i64)) -> Self {
        assert!(k_range.0 <= k_range.1 && n_range.0 <= n_range.1, "empty range");
        let nk = (k_range.1 - k_range.0 + 1) as usize;
        let nn = (n_range.1 - n_range.0 + 1) as usize;
        CoeffGrid {
            k_lo: k_range.0,
            k_hi: k_range.1,
            n_lo: n_range.0,
            n_hi: n_range.1,
            entries: vec![Complex64::new(0.0, 0.0); nk * nn],
        }
    }

    pub fn k_range(&self) -> (i64, i64) {
        (self.k_lo, self.k_hi)
    }

    pub fn n_range(&self) -> (i64, i64) {
        (self.n_lo, self.n_hi)
    }

    pub fn k_count(&self) -> usize {
        (self.k_hi - self.k_lo + 1) as usize
    }

    pub fn n_count(&self) -> usize {
        (self.n_hi - self.n_lo + 1) as usize
    }

    fn index(&self, k: i64, n: i64) -> usize {
        debug_assert!(k >= self.k_lo && k <= self.k_hi && n >= self.n_lo && n <= self.n_hi);
        let row = (n - self.n_lo) as usize;
        let col = (k - self.k_lo) as usize;
        row * self.k_count() + col
    }

    pub fn get(&self, k: i64, n: i64) -> Complex64 {
        self.entries[self.index(k, n)]
    }

    pub fn set(&mut self, k: i64, n: i64, v: Complex64) {
        let i = self.index(k, n);
        self.entries[i] = v;
    }

    /// The `k`-slice at fixed `n` (the inner mixed-norm index).
    pub fn row(&self, n: i64) -> &[Complex64] {
        let start = (n - self.n_lo) as usize * self.k_count();
        &self.entries[start..start + self.k_count()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, i64, Complex64)> + '_ {
        let kc = self.k_count() as i64;
        self.entries.iter().enumerate().map(move |(i, &v)| {
            let n = self.n_lo + (i as i64) / kc;
            let k = self.k_lo + (i as i64) % kc;
            (k, n, v)
        })
    }

    /// Squared Frobenius (= `ℓ²`) mass of the rectangle.
    pub fn energy(&self) -> f64 {
        self.entries.iter().map(|c| c.norm_sqr()).sum()
    }

    /// CSV with columns `k,n,re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,n,re,im\n");
        for (k, n, v) in self.iter() {
            out.push_str(&format!("{},{},{:.17e},{:.17e}\n", k, n, v.re, v.im));
        }
        out
    }
}

/// `ℓ^{p,q}` norm of a coefficient rectangle: inner index `k`, outer index
/// `n`, i.e. `(Σ_n (Σ_k |c_{kn}|^p)^{q/p})^{1/q}`, with sup for `∞`.
pub fn lpq_norm(grid: &CoeffGrid, params: MixedNormParams) -> f64 {
    let (n_lo, n_hi) = grid.n_range();
    let inner = |row: &[Complex64]| -> f64 {
        if params.p.is_infinite() {
            row.iter().map(|c| c.norm()).fold(0.0, f64::max)
        } else {
            row.iter()
                .map(|c| c.norm().powf(params.p))
                .sum::<f64>()
                .powf(1.0 / params.p)
        }
    };
    if params.q.is_infinite() {
        (n_lo..=n_hi)
            .map(|n| inner(grid.row(n)))
            .fold(0.0, f64::max)
    } else {
        (n_lo..=n_hi)
            .map(|n| inner(grid.row(n)).powf(params.q))
            .sum::<f64>()
            .powf(1.0 / params.q)
    }
}
