//! The Lie algebra `heis(1,n)`, its current algebra over step functions, and
//! the rescaling isomorphisms onto `heis(1,n)`.
//!
//! Brackets: `[L_i, L_j] = 0` for `i, j <= n` and `[L_{n+1}, L_k] = k L_{k-1}`
//! with `L_{-1} = 0`. In the current algebra the test functions multiply
//! pointwise, and `L_0(f)` collapses to `(integral of f) L_0`.

use num_traits::{One, Zero};

use crate::error::{check_degree, Error, Result};
use crate::poly::Poly;
use crate::regions::{Interval, Region};
use crate::scalar::{format_rational, int, pow_half_int, ExactOrFloat, Rational, Scalar};

/// `u L_{n+1} + sum_k a_k L_k` in `heis(1,n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LieElement<T = Rational> {
    pub u: T,
    pub a: Vec<T>,
}

impl<T: Scalar> LieElement<T> {
    pub fn new(u: T, a: Vec<T>) -> Result<Self> {
        if a.len() < 2 {
            return Err(Error::Shape("need coefficients a_0..a_n with n >= 1".into()));
        }
        Ok(LieElement { u, a })
    }

    pub fn zero(n: usize) -> Self {
        LieElement {
            u: T::zero(),
            a: vec![T::zero(); n + 1],
        }
    }

    /// Basis element `L_k`, `k` in `0..=n+1`.
    pub fn basis(n: usize, k: usize) -> Result<Self> {
        let mut x = Self::zero(n);
        match k {
            k if k <= n => x.a[k] = T::one(),
            k if k == n + 1 => x.u = T::one(),
            _ => return Err(Error::Shape(format!("L_{k} does not exist for n = {n}"))),
        }
        Ok(x)
    }

    pub fn degree_bound(&self) -> usize {
        self.a.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.a.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_degree(self.degree_bound(), other.degree_bound())?;
        Ok(LieElement {
            u: self.u.clone() + other.u.clone(),
            a: self
                .a
                .iter()
                .zip(&other.a)
                .map(|(x, y)| x.clone() + y.clone())
                .collect(),
        })
    }

    pub fn scale(&self, s: &T) -> Self {
        LieElement {
            u: self.u.clone() * s.clone(),
            a: self.a.iter().map(|x| x.clone() * s.clone()).collect(),
        }
    }
}

/// The one-mode bracket, bilinear extension of `[L_{n+1}, L_k] = k L_{k-1}`.
pub fn bracket_one_mode<T: Scalar>(x: &LieElement<T>, y: &LieElement<T>) -> Result<LieElement<T>> {
    check_degree(x.degree_bound(), y.degree_bound())?;
    let n = x.degree_bound();
    let mut out = LieElement::zero(n);
    let mut k_scalar = T::zero();
    for k in 1..=n {
        k_scalar = k_scalar + T::one();
        let coeff = x.u.clone() * y.a[k].clone() - y.u.clone() * x.a[k].clone();
        out.a[k - 1] = k_scalar.clone() * coeff;
    }
    Ok(out)
}

/// A finitely supported step function with rational breakpoints and values.
///
/// Canonical form: pieces sorted, disjoint, non-zero, and adjacent pieces
/// with equal values merged.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct StepFunction {
    pieces: Vec<(Interval, Rational)>,
}

impl StepFunction {
    pub fn zero() -> Self {
        StepFunction::default()
    }

    pub fn new(mut pieces: Vec<(Interval, Rational)>) -> Result<Self> {
        pieces.sort_by(|a, b| a.0.cmp(&b.0));
        for w in pieces.windows(2) {
            if w[1].0.lo() < w[0].0.hi() {
                return Err(Error::Overlap(format!(
                    "step pieces {} and {}",
                    w[0].0, w[1].0
                )));
            }
        }
        Ok(Self::canonical(pieces))
    }

    fn canonical(pieces: Vec<(Interval, Rational)>) -> Self {
        let mut out: Vec<(Interval, Rational)> = Vec::with_capacity(pieces.len());
        for (iv, v) in pieces.into_iter().filter(|(_, v)| !v.is_zero()) {
            if let Some((last, lv)) = out.last_mut() {
                if last.hi() == iv.lo() && *lv == v {
                    *last = Interval::new(last.lo().clone(), iv.hi().clone()).unwrap();
                    continue;
                }
            }
            out.push((iv, v));
        }
        StepFunction { pieces: out }
    }

    pub fn constant_on(region: &Region, value: Rational) -> Self {
        Self::canonical(
            region
                .intervals()
                .iter()
                .map(|iv| (iv.clone(), value.clone()))
                .collect(),
        )
    }

    /// The indicator function of a region.
    pub fn indicator(region: &Region) -> Self {
        Self::constant_on(region, Rational::one())
    }

    pub fn pieces(&self) -> &[(Interval, Rational)] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn value_at(&self, x: &Rational) -> Rational {
        self.pieces
            .iter()
            .find(|(iv, _)| iv.contains_point(x))
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> Region {
        Region::new(self.pieces.iter().map(|(iv, _)| iv.clone()).collect())
    }

    pub fn integral(&self) -> Rational {
        self.pieces
            .iter()
            .fold(Rational::zero(), |acc, (iv, v)| acc + iv.length() * v)
    }

    /// Integral over a region.
    pub fn integral_over(&self, region: &Region) -> Rational {
        self.mul(&StepFunction::indicator(region)).integral()
    }

    fn combine(&self, other: &StepFunction, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let mut points: Vec<Rational> = self
            .pieces
            .iter()
            .chain(&other.pieces)
            .flat_map(|(iv, _)| [iv.lo().clone(), iv.hi().clone()])
            .collect();
        points.sort();
        points.dedup();
        let pieces = points
            .windows(2)
            .map(|w| {
                let v = f(&self.value_at(&w[0]), &other.value_at(&w[0]));
                (Interval::new(w[0].clone(), w[1].clone()).unwrap(), v)
            })
            .collect();
        Self::canonical(pieces)
    }

    pub fn add(&self, other: &StepFunction) -> Self {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &StepFunction) -> Self {
        self.combine(other, |a, b| a - b)
    }

    /// Pointwise product on the common refinement of the breakpoints.
    pub fn mul(&self, other: &StepFunction) -> Self {
        self.combine(other, |a, b| a * b)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::canonical(
            self.pieces
                .iter()
                .map(|(iv, v)| (iv.clone(), v * s))
                .collect(),
        )
    }

    pub fn translate(&self, t: &Rational) -> Self {
        StepFunction {
            pieces: self
                .pieces
                .iter()
                .map(|(iv, v)| (iv.translate(t), v.clone()))
                .collect(),
        }
    }

    /// `Some((R, c))` when the function equals `c * chi_R`.
    pub fn as_indicator_multiple(&self) -> Option<(Region, Rational)> {
        let c = self.pieces.first()?.1.clone();
        self.pieces
            .iter()
            .all(|(_, v)| *v == c)
            .then(|| (self.support(), c))
    }
}

/// `L_{n+1}(f_{n+1}) + sum_{k=1..n} L_k(f_k) + l0 L_0` in the current algebra.
///
/// The `L_0` part is stored as its scalar coefficient: `L_0(f) = (int f) L_0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CurrentElement {
    l0: Rational,
    /// `fields[k - 1]` multiplies `L_k`, for `k = 1..=n+1`.
    fields: Vec<StepFunction>,
}

impl CurrentElement {
    pub fn zero(n: usize) -> Self {
        CurrentElement {
            l0: Rational::zero(),
            fields: vec![StepFunction::zero(); n + 1],
        }
    }

    pub fn new(n: usize, l0: Rational, fields: Vec<StepFunction>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Shape("degree bound must be at least 1".into()));
        }
        if fields.len() != n + 1 {
            return Err(Error::Shape(format!(
                "expected {} step-function components, got {}",
                n + 1,
                fields.len()
            )));
        }
        Ok(CurrentElement { l0, fields })
    }

    /// The generator `L_k(f)`, `k` in `0..=n+1`.
    pub fn generator(n: usize, k: usize, f: StepFunction) -> Result<Self> {
        let mut x = Self::zero(n);
        match k {
            0 => x.l0 = f.integral(),
            k if k <= n + 1 => x.fields[k - 1] = f,
            _ => return Err(Error::Shape(format!("L_{k} does not exist for n = {n}"))),
        }
        Ok(x)
    }

    /// `l_I(u, P) = u L_{n+1}(chi_I) + a_0 |I| L_0 + sum_j a_j L_j(chi_I)`.
    pub fn local(region: &Region, u: &Rational, p: &Poly) -> Result<Self> {
        if region.is_empty() {
            return Err(Error::Shape("localization region is empty".into()));
        }
        let n = p.degree_bound();
        let chi = StepFunction::indicator(region);
        let mut fields: Vec<StepFunction> = (1..=n).map(|j| chi.scale(&p.coeff(j))).collect();
        fields.push(chi.scale(u));
        Ok(CurrentElement {
            l0: p.coeff(0) * region.length(),
            fields,
        })
    }

    pub fn degree_bound(&self) -> usize {
        self.fields.len() - 1
    }

    pub fn l0(&self) -> &Rational {
        &self.l0
    }

    /// Step function multiplying `L_k`, `k` in `1..=n+1`.
    pub fn field(&self, k: usize) -> &StepFunction {
        &self.fields[k - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.l0.is_zero() && self.fields.iter().all(StepFunction::is_zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_degree(self.degree_bound(), other.degree_bound())?;
        Ok(CurrentElement {
            l0: &self.l0 + &other.l0,
            fields: self
                .fields
                .iter()
                .zip(&other.fields)
                .map(|(f, g)| f.add(g))
                .collect(),
        })
    }

    pub fn scale(&self, s: &Rational) -> Self {
        CurrentElement {
            l0: &self.l0 * s,
            fields: self.fields.iter().map(|f| f.scale(s)).collect(),
        }
    }

    /// Coordinates `(u, a)` of an element of the form `l_I(u, P)` with
    /// `|I| = length`; errors if the element is not of that shape.
    pub fn local_coordinates(&self, length: &Rational) -> Result<(Rational, Vec<Rational>)> {
        if length <= &Rational::zero() {
            return Err(Error::Domain("length must be positive".into()));
        }
        let mut region: Option<Region> = None;
        let mut coords = Vec::with_capacity(self.fields.len());
        for f in &self.fields {
            if f.is_zero() {
                coords.push(Rational::zero());
                continue;
            }
            let (r, c) = f.as_indicator_multiple().ok_or_else(|| {
                Error::Shape("component is not a multiple of an indicator".into())
            })?;
            match &region {
                Some(existing) if existing != &r => {
                    return Err(Error::Shape(format!(
                        "components supported on {existing} and {r}"
                    )))
                }
                _ => region = Some(r),
            }
            coords.push(c);
        }
        if let Some(r) = &region {
            if &r.length() != length {
                return Err(Error::Shape(format!(
                    "support {r} has length {}, expected {}",
                    format_rational(&r.length()),
                    format_rational(length)
                )));
            }
        }
        let u = coords.pop().unwrap();
        let mut a = vec![&self.l0 / length];
        a.extend(coords);
        Ok((u, a))
    }
}

/// Bracket in the current algebra:
/// `[L_{n+1}(f), L_k(g)] = k L_{k-1}(f g)`, all other generator brackets vanish.
pub fn bracket_current(x: &CurrentElement, y: &CurrentElement) -> Result<CurrentElement> {
    check_degree(x.degree_bound(), y.degree_bound())?;
    let n = x.degree_bound();
    let mut out = CurrentElement::zero(n);
    let (xt, yt) = (x.field(n + 1), y.field(n + 1));
    for k in 1..=n {
        let fg = xt.mul(y.field(k)).sub(&yt.mul(x.field(k))).scale(&int(k as i64));
        if k == 1 {
            out.l0 = fg.integral();
        } else {
            out.fields[k - 2] = fg;
        }
    }
    Ok(out)
}

/// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]`; identically zero.
pub fn jacobi_defect(x: &CurrentElement, y: &CurrentElement, z: &CurrentElement) -> Result<CurrentElement> {
    let a = bracket_current(x, &bracket_current(y, z)?)?;
    let b = bracket_current(y, &bracket_current(z, x)?)?;
    let c = bracket_current(z, &bracket_current(x, y)?)?;
    a.add(&b)?.add(&c)
}

/// Constants `a_I, b_I, c_{k,I}` of a rescaling isomorphism onto `heis(1,n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RescalingParams<T = Rational> {
    pub length: Rational,
    pub a: Rational,
    pub b: T,
    /// `c[k - 1] = c_{k,I}`.
    pub c: Vec<T>,
}

impl<T: Scalar> RescalingParams<T> {
    pub fn new(length: Rational, a: Rational, b: T, c: Vec<T>) -> Result<Self> {
        if length <= Rational::zero() {
            return Err(Error::Domain("length must be positive".into()));
        }
        if a.is_zero() || b.is_zero() || c.iter().any(|x| x.is_zero()) {
            return Err(Error::Domain("rescaling constants must be non-zero".into()));
        }
        if c.is_empty() {
            return Err(Error::Shape("need c_1..c_n with n >= 1".into()));
        }
        Ok(RescalingParams { length, a, b, c })
    }

    pub fn degree_bound(&self) -> usize {
        self.c.len()
    }

    /// `b c_1 = |I| a_I` and `b c_k = c_{k-1}`, the conditions under which the
    /// map preserves brackets.
    pub fn satisfies_structure(&self) -> bool {
        let la = T::from_rational(&(&self.length * &self.a));
        if !(self.b.clone() * self.c[0].clone()).near(&la) {
            return false;
        }
        self.c
            .windows(2)
            .all(|w| (self.b.clone() * w[1].clone()).near(&w[0]))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Rescaling {
    Exact(RescalingParams<Rational>),
    Approx(RescalingParams<f64>),
}

impl Rescaling {
    pub fn exact(&self) -> Option<&RescalingParams<Rational>> {
        match self {
            Rescaling::Exact(p) => Some(p),
            Rescaling::Approx(_) => None,
        }
    }
}

/// Constants under the convention `c_1 = b`:
/// `b = (|I| a_I)^(1/2)`, `c_k = (|I| a_I)^(1 - k/2)`.
pub fn rescaling_constants(length: &Rational, a_i: &Rational, n: usize) -> Result<Rescaling> {
    if length <= &Rational::zero() || a_i <= &Rational::zero() {
        return Err(Error::Domain(format!(
            "length and a_I must be positive, got {} and {}",
            format_rational(length),
            format_rational(a_i)
        )));
    }
    if n == 0 {
        return Err(Error::Shape("degree bound must be at least 1".into()));
    }
    let la = length * a_i;
    let b = pow_half_int(&la, 1)?;
    let c: Vec<ExactOrFloat> = (1..=n as i64)
        .map(|k| pow_half_int(&la, 2 - k))
        .collect::<Result<_>>()?;
    if b.is_exact() && c.iter().all(ExactOrFloat::is_exact) {
        Ok(Rescaling::Exact(RescalingParams::new(
            length.clone(),
            a_i.clone(),
            b.exact().unwrap().clone(),
            c.iter().map(|x| x.exact().unwrap().clone()).collect(),
        )?))
    } else {
        Ok(Rescaling::Approx(RescalingParams::new(
            length.clone(),
            a_i.clone(),
            b.to_f64(),
            c.iter().map(ExactOrFloat::to_f64).collect(),
        )?))
    }
}

/// Image of `l_I(u, P)` under the rescaling isomorphism, in the coordinates
/// of `heis(1,n)`: `(u b, (a_0 |I| a_I, a_1 c_1, ..., a_n c_n))`.
pub fn shat_apply<T: Scalar>(params: &RescalingParams<T>, x: &CurrentElement) -> Result<LieElement<T>> {
    check_degree(params.degree_bound(), x.degree_bound())?;
    let (u, a) = x.local_coordinates(&params.length)?;
    let mut out = Vec::with_capacity(a.len());
    out.push(T::from_rational(&(&a[0] * &params.length * &params.a)));
    for (ak, ck) in a[1..].iter().zip(&params.c) {
        out.push(T::from_rational(ak) * ck.clone());
    }
    Ok(LieElement {
        u: T::from_rational(&u) * params.b.clone(),
        a: out,
    })
}

/// Checks `s([x, y]) = [s x, s y]` on every pair of generators `L_k(chi_I)`.
pub fn preserves_brackets<T: Scalar>(params: &RescalingParams<T>, region: &Region) -> Result<bool> {
    let n = params.degree_bound();
    let chi = StepFunction::indicator(region);
    let gens: Vec<CurrentElement> = (0..=n + 1)
        .map(|k| {
            if k == 0 {
                // L_0 itself, not L_0(chi_I)
                Ok(CurrentElement {
                    l0: Rational::one(),
                    ..CurrentElement::zero(n)
                })
            } else {
                CurrentElement::generator(n, k, chi.clone())
            }
        })
        .collect::<Result<_>>()?;
    for x in &gens {
        for y in &gens {
            let lhs = shat_apply(params, &bracket_current(x, y)?)?;
            let rhs = bracket_one_mode(&shat_apply(params, x)?, &shat_apply(params, y)?)?;
            let same = lhs.u.near(&rhs.u) && lhs.a.iter().zip(&rhs.a).all(|(p, q)| p.near(q));
            if !same {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
