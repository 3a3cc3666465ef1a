//! Polynomials of bounded degree and the transport operators acting on them.
//!
//! `T_w` is unipotent: it fixes the leading monomial of every `X^k` and adds
//! strictly lower-degree corrections, so its inverse is obtained by
//! back-substitution from the top degree down. `S_u` is the translation
//! `P(X) -> P(X + u)`.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// A polynomial `a_0 + a_1 X + ... + a_n X^n` with a structural degree bound `n`.
///
/// Trailing zero coefficients are allowed; `n` is the dimension parameter of
/// the ambient space, not the exact degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly<T = Rational> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    /// Builds a polynomial with degree bound `n`; `coeffs` must hold exactly
    /// `n + 1` entries, index `j` being the coefficient of `X^j`.
    pub fn new(n: usize, coeffs: Vec<T>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Shape("degree bound must be at least 1".into()));
        }
        if coeffs.len() != n + 1 {
            return Err(Error::Shape(format!(
                "degree bound {n} needs {} coefficients, got {}",
                n + 1,
                coeffs.len()
            )));
        }
        Ok(Poly { coeffs })
    }

    pub fn zero(n: usize) -> Self {
        Poly {
            coeffs: vec![T::zero(); n.max(1) + 1],
        }
    }

    pub fn constant(n: usize, c: T) -> Self {
        let mut p = Self::zero(n);
        p.coeffs[0] = c;
        p
    }

    /// `c X^k` inside the space of degree bound `n`.
    pub fn monomial(n: usize, k: usize, c: T) -> Result<Self> {
        if k > n {
            return Err(Error::Shape(format!("X^{k} exceeds degree bound {n}")));
        }
        let mut p = Self::zero(n);
        p.coeffs[k] = c;
        Ok(p)
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `X^j`; zero above the degree bound.
    pub fn coeff(&self, j: usize) -> T {
        self.coeffs.get(j).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Zero-pads to a larger degree bound. Never truncates.
    pub fn padded(&self, n: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        if n + 1 > coeffs.len() {
            coeffs.resize(n + 1, T::zero());
        }
        Poly { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.degree_bound().max(other.degree_bound());
        let coeffs = (0..=n)
            .map(|j| self.coeff(j) + other.coeff(j))
            .collect();
        Poly { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Poly<U> {
        Poly {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }
}

impl Poly<Rational> {
    pub fn to_f64(&self) -> Poly<f64> {
        self.map(f64::from_rational)
    }
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Coefficient `k! / ((k+1-h)! h!)` of `w^(k-h) X^h` in `T_w(X^k)`, for `h < k`.
pub fn transport_coefficient(k: usize, h: usize) -> Rational {
    debug_assert!(h < k);
    Rational::new(factorial(k), factorial(k + 1 - h) * factorial(h))
}

fn binomial(k: usize, h: usize) -> Rational {
    Rational::new(factorial(k), factorial(k - h) * factorial(h))
}

fn powers<T: Scalar>(w: &T, n: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(T::one());
    for i in 1..=n {
        let next = out[i - 1].clone() * w.clone();
        out.push(next);
    }
    out
}

/// Matrix entry `[X^h] T_w(X^k)`.
fn t_entry<T: Scalar>(w_pow: &[T], k: usize, h: usize) -> T {
    match h.cmp(&k) {
        std::cmp::Ordering::Less => T::from_rational(&transport_coefficient(k, h)) * w_pow[k - h].clone(),
        std::cmp::Ordering::Equal => T::one(),
        std::cmp::Ordering::Greater => T::zero(),
    }
}

/// Applies `T_w`, the linear extension of
/// `T_w(X^k) = sum_{h<k} k!/((k+1-h)! h!) w^(k-h) X^h + X^k`, `T_w 1 = 1`.
pub fn t_apply<T: Scalar>(w: &T, p: &Poly<T>) -> Poly<T> {
    let n = p.degree_bound();
    let w_pow = powers(w, n);
    let mut out = vec![T::zero(); n + 1];
    for (k, a) in p.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (h, slot) in out.iter_mut().enumerate().take(k + 1) {
            *slot = slot.clone() + a.clone() * t_entry(&w_pow, k, h);
        }
    }
    Poly { coeffs: out }
}

/// Solves `T_w Q = P` by back-substitution from the top degree.
pub fn t_inv_apply<T: Scalar>(w: &T, p: &Poly<T>) -> Poly<T> {
    let n = p.degree_bound();
    let w_pow = powers(w, n);
    let mut rest = p.coeffs.clone();
    let mut q = vec![T::zero(); n + 1];
    for k in (0..=n).rev() {
        let qk = rest[k].clone();
        if !qk.is_zero() {
            for (h, slot) in rest.iter_mut().enumerate().take(k) {
                *slot = slot.clone() - qk.clone() * t_entry(&w_pow, k, h);
            }
        }
        q[k] = qk;
    }
    Poly { coeffs: q }
}

/// Translation `(S_u P)(X) = P(X + u)` by binomial expansion.
pub fn s_apply<T: Scalar>(u: &T, p: &Poly<T>) -> Poly<T> {
    let n = p.degree_bound();
    let u_pow = powers(u, n);
    let mut out = vec![T::zero(); n + 1];
    for (k, a) in p.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (h, slot) in out.iter_mut().enumerate().take(k + 1) {
            let c = T::from_rational(&binomial(k, h)) * u_pow[k - h].clone();
            *slot = slot.clone() + a.clone() * c;
        }
    }
    Poly { coeffs: out }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use proptest::prelude::*;

    fn poly(coeffs: &[Rational]) -> Poly {
        Poly::new(coeffs.len() - 1, coeffs.to_vec()).unwrap()
    }

    fn arb_rat() -> impl Strategy<Value = Rational> {
        (-16i64..=16, 1i64..=16).prop_map(|(a, b)| rat(a, b))
    }

    fn arb_poly(n: usize) -> impl Strategy<Value = Poly> {
        proptest::collection::vec(arb_rat(), n + 1).prop_map(move |c| Poly::new(n, c).unwrap())
    }

    #[test]
    fn shape_is_checked() {
        assert!(Poly::<Rational>::new(2, vec![int(1), int(2)]).is_err());
        assert!(Poly::<Rational>::new(0, vec![int(1)]).is_err());
        assert!(Poly::<Rational>::monomial(2, 3, int(1)).is_err());
    }

    #[test]
    fn t_examples() {
        let w = rat(3, 5);
        let one = Poly::constant(3, int(1));
        assert_eq!(t_apply(&w, &one), one);

        let x = Poly::monomial(3, 1, int(1)).unwrap();
        assert_eq!(t_apply(&w, &x), poly(&[&w / int(2), int(1), int(0), int(0)]));

        let x2 = Poly::monomial(3, 2, int(1)).unwrap();
        let w2 = &w * &w;
        assert_eq!(
            t_apply(&w, &x2),
            poly(&[&w2 / int(3), w.clone(), int(1), int(0)])
        );

        let p = poly(&[rat(1, 2), int(-3), rat(7, 4), int(2)]);
        assert_eq!(t_apply(&int(0), &p), p);
    }

    #[test]
    fn t_inverse_examples() {
        assert_eq!(
            t_inv_apply(&rat(5, 7), &Poly::constant(2, int(1))),
            Poly::constant(2, int(1))
        );
        let p = poly(&[rat(1, 3), int(1), int(1)]);
        assert_eq!(t_inv_apply(&int(1), &p), poly(&[int(0), int(0), int(1)]));
    }

    #[test]
    fn s_examples() {
        let u = rat(-2, 3);
        assert_eq!(s_apply(&u, &Poly::constant(2, int(1))), Poly::constant(2, int(1)));
        let x2 = Poly::monomial(2, 2, int(1)).unwrap();
        assert_eq!(
            s_apply(&u, &x2),
            poly(&[&u * &u, &u * int(2), int(1)])
        );
        let p = poly(&[int(4), rat(1, 9), int(-1)]);
        assert_eq!(s_apply(&int(0), &p), p);
    }

    #[test]
    fn t_does_not_compose_additively() {
        // T_u T_v != T_{u+v} already at n = 2
        let x2 = Poly::monomial(2, 2, int(1)).unwrap();
        let (u, v) = (int(1), int(1));
        let lhs = t_apply(&u, &t_apply(&v, &x2));
        let rhs = t_apply(&(&u + &v), &x2);
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn mixed_degree_bounds_pad() {
        let a = poly(&[int(1), int(2)]);
        let b = poly(&[int(0), int(0), int(5)]);
        let s = a.add(&b);
        assert_eq!(s.degree_bound(), 2);
        assert_eq!(s, poly(&[int(1), int(2), int(5)]));
        assert_eq!(a.padded(1), a);
    }

    #[test]
    fn unipotent_diagonal() {
        for n in 1..=6 {
            for k in 0..=n {
                let m = Poly::monomial(n, k, int(1)).unwrap();
                assert_eq!(t_apply(&rat(7, 3), &m).coeff(k), int(1));
            }
        }
    }

    proptest! {
        #[test]
        fn t_roundtrip(p in (1usize..=5).prop_flat_map(arb_poly), w in arb_rat()) {
            prop_assert_eq!(t_inv_apply(&w, &t_apply(&w, &p)), p.clone());
            prop_assert_eq!(t_apply(&w, &t_inv_apply(&w, &p)), p);
        }

        #[test]
        fn linearity(p in arb_poly(4), q in arb_poly(4), a in arb_rat(), b in arb_rat(), w in arb_rat()) {
            let combo = p.scale(&a).add(&q.scale(&b));
            prop_assert_eq!(
                t_apply(&w, &combo),
                t_apply(&w, &p).scale(&a).add(&t_apply(&w, &q).scale(&b))
            );
            prop_assert_eq!(
                s_apply(&w, &combo),
                s_apply(&w, &p).scale(&a).add(&s_apply(&w, &q).scale(&b))
            );
        }

        #[test]
        fn shift_semigroup(p in arb_poly(5), u in arb_rat(), v in arb_rat()) {
            prop_assert_eq!(s_apply(&u, &s_apply(&v, &p)), s_apply(&(&u + &v), &p));
        }

        #[test]
        fn shift_matches_evaluation(p in arb_poly(3), u in arb_rat(), x in arb_rat()) {
            prop_assert_eq!(s_apply(&u, &p).eval(&x), p.eval(&(&x + &u)));
        }
    }
}
