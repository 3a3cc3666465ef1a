//! The polynomial Heisenberg group `Heis(1,n)` on pairs `(u, P)`.
//!
//! Composition:
//!
//! ```text
//! (u, P) o (v, Q) = (u + v, T_{u+v}^{-1}(T_u P + T_v S_u Q))
//! ```
//!
//! For `n = 1` this is the classical Weyl cocycle
//! `(u + v, (a1 + b1) X + a0 + b0 + (u b1 - v a1) / 2)`.

use num_traits::Zero;

use crate::error::{check_degree, Error, Result};
use crate::poly::{s_apply, t_apply, t_inv_apply, Poly};
use crate::scalar::{format_rational, pow_half_int, ExactOrFloat, Rational, Scalar};

/// A group element `(u, P)`; `u` multiplies the momentum-like generator
/// `L_{n+1}` and `P` collects the coefficients of `L_0..L_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement<T = Rational> {
    pub u: T,
    pub p: Poly<T>,
}

impl<T: Scalar> GroupElement<T> {
    pub fn new(u: T, p: Poly<T>) -> Self {
        GroupElement { u, p }
    }

    pub fn identity(n: usize) -> Self {
        GroupElement {
            u: T::zero(),
            p: Poly::zero(n),
        }
    }

    pub fn degree_bound(&self) -> usize {
        self.p.degree_bound()
    }

    pub fn is_identity(&self) -> bool {
        self.u.is_zero() && self.p.is_zero()
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_degree(self.degree_bound(), other.degree_bound())?;
        let (u, v) = (&self.u, &other.u);
        let w = u.clone() + v.clone();
        let sum = t_apply(u, &self.p).add(&t_apply(v, &s_apply(u, &other.p)));
        Ok(GroupElement {
            u: w.clone(),
            p: t_inv_apply(&w, &sum),
        })
    }

    /// `(-u, -P)`; the two-sided inverse under [`GroupElement::compose`].
    pub fn inverse(&self) -> Self {
        GroupElement {
            u: -self.u.clone(),
            p: self.p.neg(),
        }
    }

    /// Embeds into a larger degree bound by zero-padding `P`.
    pub fn padded(&self, n: usize) -> Self {
        GroupElement {
            u: self.u.clone(),
            p: self.p.padded(n),
        }
    }

    /// Restricts to a smaller degree bound; the dropped coefficients must vanish.
    pub fn restricted(&self, n: usize) -> Result<Self> {
        let coeffs = self.p.coeffs();
        if n == 0 || n > self.degree_bound() {
            return Err(Error::Shape(format!(
                "cannot restrict degree {} to {n}",
                self.degree_bound()
            )));
        }
        if coeffs[n + 1..].iter().any(|c| !c.is_zero()) {
            return Err(Error::Shape(format!(
                "coefficients above degree {n} are nonzero"
            )));
        }
        Ok(GroupElement {
            u: self.u.clone(),
            p: Poly::new(n, coeffs[..=n].to_vec())?,
        })
    }
}

impl GroupElement<Rational> {
    pub fn to_f64(&self) -> GroupElement<f64> {
        GroupElement {
            u: f64::from_rational(&self.u),
            p: self.p.to_f64(),
        }
    }
}

/// The rescaling `k_I(u, P) = (u |I|^(1/2), (a_j |I|^(1 - j/2))_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RescaleMap {
    length: Rational,
}

/// Result of a rescaling: exact when every weight is rational.
#[derive(Debug, Clone, PartialEq)]
pub enum Rescaled {
    Exact(GroupElement),
    Approx(GroupElement<f64>),
}

impl Rescaled {
    pub fn is_exact(&self) -> bool {
        matches!(self, Rescaled::Exact(_))
    }

    pub fn exact(&self) -> Option<&GroupElement> {
        match self {
            Rescaled::Exact(g) => Some(g),
            Rescaled::Approx(_) => None,
        }
    }

    pub fn to_f64(&self) -> GroupElement<f64> {
        match self {
            Rescaled::Exact(g) => g.to_f64(),
            Rescaled::Approx(g) => g.clone(),
        }
    }
}

impl RescaleMap {
    pub fn new(length: Rational) -> Result<Self> {
        if length <= Rational::zero() {
            return Err(Error::Domain(format!(
                "rescale length must be positive, got {}",
                format_rational(&length)
            )));
        }
        Ok(RescaleMap { length })
    }

    pub fn length(&self) -> &Rational {
        &self.length
    }

    pub fn inverse(&self) -> RescaleMap {
        RescaleMap {
            length: self.length.recip(),
        }
    }

    /// Weights `(|I|^(1/2), [|I|^(1 - j/2)]_{j=0..n})`.
    pub fn weights(&self, n: usize) -> (ExactOrFloat, Vec<ExactOrFloat>) {
        let w = |k: i64| pow_half_int(&self.length, k).expect("length is positive");
        (w(1), (0..=n as i64).map(|j| w(2 - j)).collect())
    }

    pub fn apply(&self, g: &GroupElement) -> Rescaled {
        let (wu, wa) = self.weights(g.degree_bound());
        let all_exact = wu.is_exact() && wa.iter().all(ExactOrFloat::is_exact);
        if all_exact {
            let u = &g.u * wu.exact().unwrap();
            let coeffs = g
                .p
                .coeffs()
                .iter()
                .zip(&wa)
                .map(|(a, w)| a * w.exact().unwrap())
                .collect();
            Rescaled::Exact(GroupElement::new(u, Poly::new(g.degree_bound(), coeffs).unwrap()))
        } else {
            let u = f64::from_rational(&g.u) * wu.to_f64();
            let coeffs = g
                .p
                .coeffs()
                .iter()
                .zip(&wa)
                .map(|(a, w)| match w {
                    ExactOrFloat::Exact(q) => f64::from_rational(&(a * q)),
                    ExactOrFloat::Float(x) => f64::from_rational(a) * x,
                })
                .collect();
            Rescaled::Approx(GroupElement::new(u, Poly::new(g.degree_bound(), coeffs).unwrap()))
        }
    }

    /// `k_I^{-1}`, i.e. the rescaling by `1 / |I|`.
    pub fn apply_inverse(&self, g: &GroupElement) -> Rescaled {
        self.inverse().apply(g)
    }

    /// Polynomial part of the rescaling for a known square root `r = |I|^(1/2)`,
    /// over any scalar field: `a_j -> a_j r^(2 - j)`.
    pub fn apply_poly_with_root<T: Scalar>(root: &T, p: &Poly<T>) -> Poly<T> {
        let n = p.degree_bound();
        let coeffs = p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(j, a)| a.clone() * root_power(root, 2 - j as i64))
            .collect();
        Poly::new(n, coeffs).unwrap()
    }
}

fn root_power<T: Scalar>(root: &T, k: i64) -> T {
    let mut acc = T::one();
    for _ in 0..k.unsigned_abs() {
        acc = acc * root.clone();
    }
    if k < 0 {
        T::one() / acc
    } else {
        acc
    }
}

/// Free-function form of [`RescaleMap::apply`].
pub fn khat_apply(m: &RescaleMap, g: &GroupElement) -> Rescaled {
    m.apply(g)
}

/// Free-function form of [`RescaleMap::apply_inverse`].
pub fn khat_inverse(m: &RescaleMap, g: &GroupElement) -> Rescaled {
    m.apply_inverse(g)
}
