//! Fock and density-weighted Fock states on localized generators and tensor
//! words, the factorizability defect, and the no-go experiment.
//!
//! For `n = 1` the vacuum characteristic function of `W(k_I(u, P))` is
//! `exp(-m (u^2 + a_1^2) / 4) exp(i a_0 m)` with `m = a_I |I|`; it factorizes
//! over partitions exactly when `I -> a_I |I|` is additive. For `n = 2`
//!
//! ```text
//! (1 - 2iA)^(-1/2) exp(i a_0 |I|) exp(|I| (4 C^2 (A^2 + 2iA) - 3 |M|^2) / (6 (1 - 2iA)))
//! ```
//!
//! with `A = a_2 / 2`, `B = a_1 / sqrt 2`, `C = u / sqrt 2`, `M = B + iC`
//! (normalization `q = (a + a^dag) / sqrt 2`, matching the `n = 1` formula).
//! The prefactor does not scale with `|I|`, so a product over `k` cells picks
//! up `(1 - 2iA)^(-(k-1)/2)` relative to the whole interval.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::TensorElement;
use crate::error::{check_degree, Error, Result};
use crate::group::GroupElement;
use crate::lie::StepFunction;
use crate::poly::Poly;
use crate::regions::{Partition, Region};
use crate::scalar::{complex_principal_sqrt, ensure_finite, rat, rat_to_f64, ComplexValue, Rational};

/// How the weight `a_I` of a region is determined.
#[derive(Debug, Clone, PartialEq)]
pub enum Weighting {
    /// `p == 1`, so `a_I = 1`.
    Uniform,
    /// `a_I = (1/|I|) int_I p` for a strictly positive step density `p`.
    Density(StepFunction),
    /// `a_I = |I|`; not induced by any density, used as the non-additive
    /// counterexample.
    LengthProportional,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    n: usize,
    weighting: Weighting,
}

impl StateSpec {
    pub fn new(n: usize, weighting: Weighting) -> Result<Self> {
        if !(1..=2).contains(&n) {
            return Err(Error::UnsupportedState(format!(
                "Fock states are evaluated for n = 1 or 2, got {n}"
            )));
        }
        if let Weighting::Density(p) = &weighting {
            if p.is_zero() || p.pieces().iter().any(|(_, v)| v <= &Rational::zero()) {
                return Err(Error::Domain("density must be strictly positive on its support".into()));
            }
        }
        Ok(StateSpec { n, weighting })
    }

    /// The unweighted Fock state.
    pub fn fock(n: usize) -> Result<Self> {
        Self::new(n, Weighting::Uniform)
    }

    pub fn degree_bound(&self) -> usize {
        self.n
    }

    pub fn weighting(&self) -> &Weighting {
        &self.weighting
    }

    /// `a_I`.
    pub fn weight(&self, region: &Region) -> Result<Rational> {
        let len = region.length();
        if len.is_zero() {
            return Err(Error::Domain("weight of an empty region".into()));
        }
        let w = match &self.weighting {
            Weighting::Uniform => Rational::one(),
            Weighting::Density(p) => p.integral_over(region) / &len,
            Weighting::LengthProportional => len,
        };
        if w <= Rational::zero() {
            return Err(Error::Domain(format!("region {region} lies outside the density support")));
        }
        Ok(w)
    }

    /// `a_I |I|`.
    pub fn mass(&self, region: &Region) -> Result<Rational> {
        Ok(self.weight(region)? * region.length())
    }
}

/// `A, B, C` and `M = B + iC` for an `n = 2` label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockQuadParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl FockQuadParams {
    pub fn from_element(g: &GroupElement) -> Self {
        let r2 = std::f64::consts::SQRT_2;
        FockQuadParams {
            a: rat_to_f64(&(g.p.coeff(2) / rat(2, 1))),
            b: rat_to_f64(&g.p.coeff(1)) / r2,
            c: rat_to_f64(&g.u) / r2,
        }
    }

    pub fn m(&self) -> ComplexValue {
        Complex64::new(self.b, self.c)
    }

    /// `1 - 2iA`.
    pub fn denominator(&self) -> ComplexValue {
        Complex64::new(1.0, -2.0 * self.a)
    }
}

/// `(1 - 2iA)^(-k/2)` on the principal branch.
pub fn quad_prefactor_power(a: f64, k: i32) -> ComplexValue {
    complex_principal_sqrt(Complex64::new(1.0, -2.0 * a)).powi(-k)
}

pub fn fock_eval_n1(spec: &StateSpec, region: &Region, g: &GroupElement) -> Result<ComplexValue> {
    check_degree(1, g.degree_bound())?;
    let m = spec.mass(region)?;
    let (u, a0, a1) = (&g.u, g.p.coeff(0), g.p.coeff(1));
    let damping = -(&m * (u * u + &a1 * &a1)) / rat(4, 1);
    let phase = &a0 * &m;
    let z = Complex64::from_polar(rat_to_f64(&damping).exp(), rat_to_f64(&phase));
    ensure_finite(z, "n = 1 Fock evaluation")
}

pub fn fock_eval_n2(spec: &StateSpec, region: &Region, g: &GroupElement) -> Result<ComplexValue> {
    check_degree(2, g.degree_bound())?;
    if spec.weighting != Weighting::Uniform {
        return Err(Error::UnsupportedState(
            "weighted densities are only defined for n = 1".into(),
        ));
    }
    let len = region.length();
    if len.is_zero() {
        return Err(Error::Domain("evaluation on an empty region".into()));
    }
    let q = FockQuadParams::from_element(g);
    let d = q.denominator();
    let c2 = rat_to_f64(&(&g.u * &g.u / rat(2, 1)));
    let m2 = rat_to_f64(&((&g.u * &g.u + g.p.coeff(1) * g.p.coeff(1)) / rat(2, 1)));
    let a = q.a;
    let numer = Complex64::new(a * a, 2.0 * a) * (4.0 * c2) - Complex64::new(3.0 * m2, 0.0);
    let exponent = numer / (d * 6.0) * rat_to_f64(&len);
    let phase = rat_to_f64(&(g.p.coeff(0) * &len));
    let z = complex_principal_sqrt(d).inv() * Complex64::from_polar(1.0, phase) * exponent.exp();
    ensure_finite(z, "n = 2 Fock evaluation")
}

/// Dispatches on the degree of the state.
pub fn fock_eval(spec: &StateSpec, region: &Region, g: &GroupElement) -> Result<ComplexValue> {
    check_degree(spec.n, g.degree_bound())?;
    match spec.n {
        1 => fock_eval_n1(spec, region, g),
        2 => fock_eval_n2(spec, region, g),
        n => Err(Error::UnsupportedState(format!("no closed form for n = {n}"))),
    }
}

/// `sum_words coeff * prod_cells phi_cell(label)`.
pub fn state_eval(spec: &StateSpec, t: &TensorElement) -> Result<ComplexValue> {
    check_degree(spec.n, t.degree_bound())?;
    let cells = t.partition().cells();
    let mut total = Complex64::zero();
    for (word, c) in t.words() {
        let mut prod = *c;
        for (cell, g) in cells.iter().zip(word) {
            prod *= fock_eval(spec, cell, g)?;
        }
        total += prod;
    }
    ensure_finite(total, "state evaluation")
}

/// `prod_cells phi(cell, g)`.
pub fn product_over_cells(spec: &StateSpec, partition: &Partition, g: &GroupElement) -> Result<ComplexValue> {
    partition
        .cells()
        .iter()
        .try_fold(Complex64::one(), |acc, cell| Ok(acc * fock_eval(spec, cell, g)?))
}

/// `|phi(I, g) - prod_cells phi(cell, g)|`.
pub fn factorizability_defect(spec: &StateSpec, region: &Region, partition: &Partition, g: &GroupElement) -> Result<f64> {
    if partition.of() != region {
        return Err(Error::RegionMismatch(format!(
            "partition covers {}, expected {region}",
            partition.of()
        )));
    }
    let whole = fock_eval(spec, region, g)?;
    Ok((whole - product_over_cells(spec, partition, g)?).norm())
}

/// Parameters of a no-go sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct NogoConfig {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Fixed number of cells; random in `1..=8` when absent.
    pub cells: Option<usize>,
    /// Fixed quadratic coefficient `a_2`; random when absent.
    pub a2: Option<Rational>,
    /// Pass threshold; `1e-12` on the defect for `n = 1`, `1e-9` on the
    /// ratio law otherwise.
    pub tolerance: Option<f64>,
}

impl NogoConfig {
    pub fn new(n: usize, trials: usize, seed: u64) -> Self {
        NogoConfig {
            n,
            trials,
            seed,
            cells: None,
            a2: None,
            tolerance: None,
        }
    }

    pub fn effective_tolerance(&self) -> f64 {
        self.tolerance
            .unwrap_or(if self.n == 1 { 1e-12 } else { 1e-9 })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioCheck {
    #[serde(rename = "A")]
    pub a: f64,
    pub cells: usize,
    #[serde(with = "crate::json::complex")]
    pub predicted: ComplexValue,
    #[serde(with = "crate::json::complex")]
    pub measured: ComplexValue,
    pub abs_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NogoReport {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub max_defect: f64,
    pub ratio_checks: Vec<RatioCheck>,
    pub max_ratio_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

struct Trial {
    region: Region,
    partition: Partition,
    g: GroupElement,
}

fn small_rational(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    rat(rng.random_range(-bound..=bound), rng.random_range(1..=bound))
}

fn sample_trial(cfg: &NogoConfig, trial: usize) -> Result<Trial> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(trial as u64);
    // n = 1 sweeps the full data range; the ratio law needs values away from
    // underflow, so higher degrees use smaller parameters
    let bound = if cfg.n == 1 { 16 } else { 2 };
    let lo = small_rational(&mut rng, if cfg.n == 1 { 16 } else { 4 });
    let length = rat(rng.random_range(1..=bound * 2), rng.random_range(1..=bound));
    let hi = &lo + &length;
    let k = cfg.cells.unwrap_or_else(|| rng.random_range(1..=8)).max(1);
    // k - 1 distinct cut points on a grid of 97 steps
    let mut steps: Vec<i64> = Vec::with_capacity(k - 1);
    while steps.len() < k - 1 {
        let s = rng.random_range(1..97);
        if !steps.contains(&s) {
            steps.push(s);
        }
    }
    let cuts: Vec<Rational> = steps.iter().map(|s| &lo + &length * rat(*s, 97)).collect();
    let partition = Partition::from_cuts(lo.clone(), hi.clone(), &cuts)?;
    let u = small_rational(&mut rng, bound);
    let mut coeffs: Vec<Rational> = (0..=cfg.n.min(2))
        .map(|_| small_rational(&mut rng, bound))
        .collect();
    if let (Some(a2), true) = (&cfg.a2, cfg.n >= 2) {
        coeffs[2] = a2.clone();
    }
    // degrees above 2 are embedded with vanishing top coefficients
    coeffs.resize(cfg.n + 1, Rational::zero());
    Ok(Trial {
        region: partition.of().clone(),
        partition,
        g: GroupElement::new(u, Poly::new(cfg.n, coeffs)?),
    })
}

/// Random sweep over `(g, I, pi)`. For `n = 1` reports the largest
/// factorizability defect; for `n >= 2` (evaluated on the embedded
/// `heis(1,2)` copy) additionally measures `prod phi / phi_whole` against
/// `(1 - 2iA)^(-(|pi|-1)/2)`. Deterministic for a given seed.
pub fn nogo_experiment(cfg: &NogoConfig) -> Result<NogoReport> {
    if cfg.n == 0 {
        return Err(Error::Shape("degree bound must be at least 1".into()));
    }
    let eval_n = cfg.n.min(2);
    let spec = StateSpec::fock(eval_n)?;
    let outcomes: Vec<(f64, Option<RatioCheck>)> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let trial = sample_trial(cfg, i)?;
            let g = trial.g.restricted(eval_n)?;
            let whole = fock_eval(&spec, &trial.region, &g)?;
            let prod = product_over_cells(&spec, &trial.partition, &g)?;
            let defect = (whole - prod).norm();
            let check = (eval_n == 2).then(|| {
                let q = FockQuadParams::from_element(&g);
                let cells = trial.partition.len();
                let predicted = quad_prefactor_power(q.a, cells as i32 - 1);
                let measured = prod / whole;
                RatioCheck {
                    a: q.a,
                    cells,
                    predicted,
                    measured,
                    abs_err: (measured - predicted).norm(),
                }
            });
            Ok((defect, check))
        })
        .collect::<Result<_>>()?;
    let max_defect = outcomes.iter().map(|o| o.0).fold(0.0, f64::max);
    let ratio_checks: Vec<RatioCheck> = outcomes.into_iter().filter_map(|o| o.1).collect();
    let max_ratio_error = ratio_checks.iter().map(|c| c.abs_err).fold(0.0, f64::max);
    let tolerance = cfg.effective_tolerance();
    let passed = if eval_n == 1 {
        max_defect < tolerance
    } else {
        ratio_checks.iter().all(|c| c.abs_err <= tolerance && c.abs_err.is_finite())
    };
    Ok(NogoReport {
        n: cfg.n,
        trials: cfg.trials,
        seed: cfg.seed,
        max_defect,
        ratio_checks,
        max_ratio_error,
        tolerance,
        passed,
    })
}

/// Smallest eigenvalue of the Gram matrix `[phi(W_{g_i}^* W_{g_j})]` on `I`.
pub fn gram_psd_check(spec: &StateSpec, elems: &[GroupElement], region: &Region) -> Result<f64> {
    if elems.is_empty() {
        return Err(Error::Shape("need at least one element".into()));
    }
    let k = elems.len();
    let mut gram = DMatrix::<Complex64>::zeros(k, k);
    for (i, gi) in elems.iter().enumerate() {
        let gi_inv = gi.inverse();
        for (j, gj) in elems.iter().enumerate() {
            gram[(i, j)] = fock_eval(spec, region, &gi_inv.compose(gj)?)?;
        }
    }
    let hermitian = (&gram + gram.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = hermitian.symmetric_eigen();
    Ok(eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min))
}
