//! Truncated harmonic-oscillator matrices, used as an independent check of
//! the composition law and the closed-form Fock values.
//!
//! `W(u, P) = exp(i (u p + P(q)))` is built from `N x N` truncations of
//! `q = (a + a^dag) / sqrt 2` and `p = (a - a^dag) / (i sqrt 2)`. The generator
//! is Hermitian, so the exponential comes from its eigen-decomposition.
//! Only vacuum expectations are compared; they converge quickly in `N` for
//! small parameters while operator norms do not.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_degree, Error, Result};
use crate::fock::{fock_eval, StateSpec};
use crate::group::GroupElement;
use crate::regions::Region;
use crate::scalar::{int, rat_to_f64, ComplexValue};

/// Tail weight of `W|0>` above which the truncation is reported as too small.
pub const TAIL_WARNING: f64 = 1e-8;

/// Truncated `q` and `p`.
pub fn position_momentum(n_trunc: usize) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let mut a = DMatrix::<Complex64>::zeros(n_trunc, n_trunc);
    for k in 1..n_trunc {
        a[(k - 1, k)] = Complex64::new((k as f64).sqrt(), 0.0);
    }
    let ad = a.adjoint();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let q = (&a + &ad) * Complex64::new(s, 0.0);
    let p = (&a - &ad) * Complex64::new(0.0, -s);
    (q, p)
}

/// `exp(i (u p + sum_j a_j q^j))` as a dense matrix.
pub fn weyl_matrix(g: &GroupElement, n_trunc: usize) -> DMatrix<Complex64> {
    let (q, p) = position_momentum(n_trunc);
    let mut h = &p * Complex64::new(rat_to_f64(&g.u), 0.0);
    let mut q_pow = DMatrix::<Complex64>::identity(n_trunc, n_trunc);
    for a in g.p.coeffs() {
        h += &q_pow * Complex64::new(rat_to_f64(a), 0.0);
        q_pow = &q_pow * &q;
    }
    let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let phases = DVector::from_iterator(
        n_trunc,
        eig.eigenvalues.iter().map(|l| Complex64::from_polar(1.0, *l)),
    );
    let v = &eig.eigenvectors;
    v * DMatrix::from_diagonal(&phases) * v.adjoint()
}

fn tail_weight(w: &DMatrix<Complex64>) -> f64 {
    let n = w.nrows();
    (n - n / 4..n).map(|k| w[(k, 0)].norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub n: usize,
    pub truncation: usize,
    /// `<0| W(g) W(h) |0>`.
    #[serde(with = "crate::json::complex")]
    pub product: ComplexValue,
    /// `<0| W(g o h) |0>`.
    #[serde(with = "crate::json::complex")]
    pub composed: ComplexValue,
    pub compose_error: f64,
    /// `<0| W(g) |0>`.
    #[serde(with = "crate::json::complex")]
    pub matrix_state: ComplexValue,
    /// The closed form on an interval of length one.
    #[serde(with = "crate::json::complex")]
    pub formula_state: ComplexValue,
    pub state_error: f64,
    /// Largest norm of the top quarter of `W|0>` over `g`, `h`, `g o h`.
    pub residual: f64,
    pub warning: Option<String>,
}

impl OracleReport {
    pub fn within(&self, tol: f64) -> bool {
        self.compose_error <= tol && self.state_error <= tol
    }
}

/// Compares `W(g) W(h)` with `W(g o h)` and `<0|W(g)|0>` with the Fock
/// closed form, both in the vacuum.
pub fn oracle_matrix_check(n: usize, g: &GroupElement, h: &GroupElement, n_trunc: usize) -> Result<OracleReport> {
    if !(1..=2).contains(&n) {
        return Err(Error::UnsupportedState(format!("oracle runs for n = 1 or 2, got {n}")));
    }
    check_degree(n, g.degree_bound())?;
    check_degree(n, h.degree_bound())?;
    if n_trunc < 2 {
        return Err(Error::Domain("truncation must be at least 2".into()));
    }
    let gh = g.compose(h)?;
    let (wg, wh, wgh) = (weyl_matrix(g, n_trunc), weyl_matrix(h, n_trunc), weyl_matrix(&gh, n_trunc));
    let product = (0..n_trunc).map(|m| wg[(0, m)] * wh[(m, 0)]).sum::<Complex64>();
    let composed = wgh[(0, 0)];
    let matrix_state = wg[(0, 0)];
    let unit = Region::interval(int(0), int(1))?;
    let formula_state = fock_eval(&StateSpec::fock(n)?, &unit, g)?;
    let residual = [&wg, &wh, &wgh].into_iter().map(tail_weight).fold(0.0, f64::max);
    let warning = (residual > TAIL_WARNING).then(|| {
        format!("truncation {n_trunc} may be too small: tail weight {residual:.3e}")
    });
    Ok(OracleReport {
        n,
        truncation: n_trunc,
        product,
        composed,
        compose_error: (product - composed).norm(),
        matrix_state,
        formula_state,
        state_error: (matrix_state - formula_state).norm(),
        residual,
        warning,
    })
}
