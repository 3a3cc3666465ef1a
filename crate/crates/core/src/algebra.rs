//! The free group *-algebra over `Heis(1,n)`, its localized copies, and the
//! partition-indexed tensor words forming the inductive system.
//!
//! Elements are finite sums `sum c_g W_g` keyed by exact group labels, so
//! equality is decidable. A [`TensorElement`] is a finite sum of elementary
//! tensors `W_{g_1} (x) ... (x) W_{g_m}`, one label per partition cell, and
//! refining the partition copies each label diagonally into the sub-cells.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{check_degree, Error, Result};
use crate::group::GroupElement;
use crate::regions::{common_refinement, merge_partitions, Partition, Region};
use crate::scalar::ComplexValue;

fn insert_term<K: Ord>(terms: &mut BTreeMap<K, ComplexValue>, key: K, c: ComplexValue) {
    if c == Complex64::new(0.0, 0.0) {
        return;
    }
    *terms.entry(key).or_insert(Complex64::new(0.0, 0.0)) += c;
}

fn prune<K: Ord + Clone>(terms: &mut BTreeMap<K, ComplexValue>) {
    terms.retain(|_, c| *c != Complex64::new(0.0, 0.0));
}

/// A finite linear combination of group generators `W_g`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    n: usize,
    terms: BTreeMap<GroupElement, ComplexValue>,
}

impl AlgebraElement {
    pub fn zero(n: usize) -> Self {
        AlgebraElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// The unit `W_e`.
    pub fn unit(n: usize) -> Self {
        Self::generator(GroupElement::identity(n))
    }

    pub fn generator(g: GroupElement) -> Self {
        Self::term(g, Complex64::new(1.0, 0.0))
    }

    pub fn term(g: GroupElement, c: ComplexValue) -> Self {
        let mut x = Self::zero(g.degree_bound());
        insert_term(&mut x.terms, g, c);
        x
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (GroupElement, ComplexValue)>) -> Result<Self> {
        let mut x = Self::zero(n);
        for (g, c) in terms {
            check_degree(n, g.degree_bound())?;
            insert_term(&mut x.terms, g, c);
        }
        prune(&mut x.terms);
        Ok(x)
    }

    pub fn degree_bound(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &ComplexValue)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_degree(self.n, other.n)?;
        let mut out = self.clone();
        for (g, c) in &other.terms {
            insert_term(&mut out.terms, g.clone(), *c);
        }
        prune(&mut out.terms);
        Ok(out)
    }

    pub fn scale(&self, s: ComplexValue) -> Self {
        let mut out = Self::zero(self.n);
        for (g, c) in &self.terms {
            insert_term(&mut out.terms, g.clone(), c * s);
        }
        prune(&mut out.terms);
        out
    }

    /// Bilinear extension of `W_g W_h = W_{g o h}`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_degree(self.n, other.n)?;
        let mut out = Self::zero(self.n);
        for (g, a) in &self.terms {
            for (h, b) in &other.terms {
                insert_term(&mut out.terms, g.compose(h)?, a * b);
            }
        }
        prune(&mut out.terms);
        Ok(out)
    }

    /// `(c W_g)^* = conj(c) W_{g^{-1}}`, extended antilinearly.
    pub fn star(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (g, c) in &self.terms {
            insert_term(&mut out.terms, g.inverse(), c.conj());
        }
        out
    }
}

pub fn alg_mul(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    x.mul(y)
}

pub fn alg_star(x: &AlgebraElement) -> AlgebraElement {
    x.star()
}

/// An algebra element attached to a region `I`: a word in the generators
/// `W^0_I(u, P)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizedElement {
    region: Region,
    elem: AlgebraElement,
}

impl LocalizedElement {
    pub fn new(region: Region, elem: AlgebraElement) -> Result<Self> {
        if region.is_empty() {
            return Err(Error::Shape("localization region is empty".into()));
        }
        Ok(LocalizedElement { region, elem })
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn elem(&self) -> &AlgebraElement {
        &self.elem
    }
}

/// A tensor label: one group element per partition cell, in cell order.
pub type Word = Vec<GroupElement>;

/// A finite sum of elementary tensor words over the cells of a partition.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorElement {
    n: usize,
    partition: Partition,
    words: BTreeMap<Word, ComplexValue>,
}

impl TensorElement {
    pub fn zero(n: usize, partition: Partition) -> Self {
        TensorElement {
            n,
            partition,
            words: BTreeMap::new(),
        }
    }

    /// `1 (x) ... (x) 1`.
    pub fn unit(n: usize, partition: Partition) -> Self {
        let word = vec![GroupElement::identity(n); partition.len()];
        let mut t = Self::zero(n, partition);
        t.words.insert(word, Complex64::new(1.0, 0.0));
        t
    }

    /// Builds a tensor element from words given as `(coeff, labels)`.
    pub fn from_words(n: usize, partition: Partition, words: impl IntoIterator<Item = (ComplexValue, Word)>) -> Result<Self> {
        let mut t = Self::zero(n, partition);
        for (c, w) in words {
            t.check_word(&w)?;
            insert_term(&mut t.words, w, c);
        }
        prune(&mut t.words);
        Ok(t)
    }

    /// Expands `factor_0 (x) factor_1 (x) ...` multilinearly.
    pub fn elementary(partition: Partition, factors: &[AlgebraElement]) -> Result<Self> {
        if factors.len() != partition.len() {
            return Err(Error::Shape(format!(
                "{} factors for {} cells",
                factors.len(),
                partition.len()
            )));
        }
        let n = factors
            .first()
            .map(AlgebraElement::degree_bound)
            .ok_or_else(|| Error::Shape("no factors".into()))?;
        let mut acc: Vec<(ComplexValue, Word)> = vec![(Complex64::new(1.0, 0.0), Vec::new())];
        for f in factors {
            check_degree(n, f.degree_bound())?;
            acc = acc
                .into_iter()
                .flat_map(|(c, w)| {
                    f.terms().map(move |(g, d)| {
                        let mut w = w.clone();
                        w.push(g.clone());
                        (c * d, w)
                    })
                })
                .collect();
        }
        Self::from_words(n, partition, acc)
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        if w.len() != self.partition.len() {
            return Err(Error::Shape(format!(
                "word of length {} over {} cells",
                w.len(),
                self.partition.len()
            )));
        }
        for g in w {
            check_degree(self.n, g.degree_bound())?;
        }
        Ok(())
    }

    pub fn degree_bound(&self) -> usize {
        self.n
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn words(&self) -> impl Iterator<Item = (&Word, &ComplexValue)> {
        self.words.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_degree(self.n, other.n)?;
        let (a, b) = align(self, other)?;
        let mut out = a;
        for (w, c) in b.words {
            insert_term(&mut out.words, w, c);
        }
        prune(&mut out.words);
        Ok(out)
    }

    pub fn scale(&self, s: ComplexValue) -> Self {
        let mut out = Self::zero(self.n, self.partition.clone());
        for (w, c) in &self.words {
            insert_term(&mut out.words, w.clone(), c * s);
        }
        prune(&mut out.words);
        out
    }

    /// Cellwise star.
    pub fn star(&self) -> Self {
        let mut out = Self::zero(self.n, self.partition.clone());
        for (w, c) in &self.words {
            let inv = w.iter().map(GroupElement::inverse).collect();
            insert_term(&mut out.words, inv, c.conj());
        }
        out
    }

    /// Equality in the inductive limit: both sides refined to the common
    /// refinement and compared word by word.
    pub fn equivalent(&self, other: &Self) -> Result<bool> {
        check_degree(self.n, other.n)?;
        let (a, b) = align(self, other)?;
        Ok(a.words == b.words)
    }
}

fn align(a: &TensorElement, b: &TensorElement) -> Result<(TensorElement, TensorElement)> {
    if a.partition == b.partition {
        return Ok((a.clone(), b.clone()));
    }
    let common = common_refinement(&a.partition, &b.partition)?;
    Ok((embed_refine(a, &common)?, embed_refine(b, &common)?))
}

/// `z_{I,pi}`: each generator `W_I(u, P)` becomes `(x)_{I' in pi} W_{I'}(u, P)`;
/// extended linearly over the terms of `w`.
pub fn embed_generator(target: &Partition, w: &LocalizedElement) -> Result<TensorElement> {
    if target.of() != w.region() {
        return Err(Error::RegionMismatch(format!(
            "element lives on {}, partition covers {}",
            w.region(),
            target.of()
        )));
    }
    let cells = target.len();
    TensorElement::from_words(
        w.elem().degree_bound(),
        target.clone(),
        w.elem().terms().map(|(g, c)| (*c, vec![g.clone(); cells])),
    )
}

/// `z_{pi, pi'}`: copies each cell's label into every sub-cell of `finer`.
pub fn embed_refine(t: &TensorElement, finer: &Partition) -> Result<TensorElement> {
    if finer == &t.partition {
        return Ok(t.clone());
    }
    let parent = finer.parent_map(&t.partition)?;
    let mut out = TensorElement::zero(t.n, finer.clone());
    for (w, c) in &t.words {
        let refined: Word = parent.iter().map(|&j| w[j].clone()).collect();
        insert_term(&mut out.words, refined, *c);
    }
    prune(&mut out.words);
    Ok(out)
}

/// Product in the tensor algebra: refine both factors to the common
/// refinement, then multiply cellwise.
pub fn tensor_mul(t1: &TensorElement, t2: &TensorElement) -> Result<TensorElement> {
    check_degree(t1.n, t2.n)?;
    let (a, b) = align(t1, t2)?;
    let mut out = TensorElement::zero(a.n, a.partition.clone());
    for (w1, c1) in &a.words {
        for (w2, c2) in &b.words {
            let w = w1
                .iter()
                .zip(w2)
                .map(|(g, h)| g.compose(h))
                .collect::<Result<Word>>()?;
            insert_term(&mut out.words, w, c1 * c2);
        }
    }
    prune(&mut out.words);
    Ok(out)
}

/// Tensor product of elements on disjoint regions `I` and `J`, living on the
/// merged partition of `I u J`.
pub fn merge_factorize(t_i: &TensorElement, t_j: &TensorElement) -> Result<TensorElement> {
    check_degree(t_i.n, t_j.n)?;
    let merged = merge_partitions(&t_i.partition, &t_j.partition)?;
    // position of every merged cell in the source partitions
    let source: Vec<(bool, usize)> = merged
        .cells()
        .iter()
        .map(|cell| {
            match t_i.partition.cells().iter().position(|c| c == cell) {
                Some(k) => (true, k),
                None => (
                    false,
                    t_j.partition
                        .cells()
                        .iter()
                        .position(|c| c == cell)
                        .expect("merged cell comes from one side"),
                ),
            }
        })
        .collect();
    let mut out = TensorElement::zero(t_i.n, merged);
    for (wi, ci) in &t_i.words {
        for (wj, cj) in &t_j.words {
            let w: Word = source
                .iter()
                .map(|&(left, k)| if left { wi[k].clone() } else { wj[k].clone() })
                .collect();
            insert_term(&mut out.words, w, ci * cj);
        }
    }
    prune(&mut out.words);
    Ok(out)
}

/// `w_I (x) 1_{J \ I}`: pads the complement with the unit.
pub fn ambient_embed(t: &TensorElement, target: &Region) -> Result<TensorElement> {
    let region = t.partition.of();
    if !target.contains(region) {
        return Err(Error::RegionMismatch(format!("{target} does not contain {region}")));
    }
    if target == region {
        return Ok(t.clone());
    }
    let rest = target.difference(region);
    let pad = TensorElement::unit(t.n, Partition::trivial(rest)?);
    merge_factorize(t, &pad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use crate::regions::{is_refinement, split_partition};
    use crate::scalar::{int, rat, Rational};
    use proptest::prelude::*;

    fn c(re: f64) -> ComplexValue {
        Complex64::new(re, 0.0)
    }

    fn ge(u: Rational, coeffs: &[Rational]) -> GroupElement {
        GroupElement::new(u, Poly::new(coeffs.len() - 1, coeffs.to_vec()).unwrap())
    }

    fn cuts(lo: i64, hi: i64, at: &[Rational]) -> Partition {
        Partition::from_cuts(int(lo), int(hi), at).unwrap()
    }

    fn region(lo: i64, hi: i64) -> Region {
        Region::interval(int(lo), int(hi)).unwrap()
    }

    #[test]
    fn generator_times_inverse_is_unit() {
        let g = ge(rat(1, 2), &[int(1), rat(-2, 3), int(3)]);
        let w = AlgebraElement::generator(g.clone());
        assert_eq!(w.mul(&w.star()).unwrap(), AlgebraElement::unit(2));
        assert_eq!(w.star().mul(&w).unwrap(), AlgebraElement::unit(2));
        assert_eq!(AlgebraElement::unit(2).mul(&w).unwrap(), w);
    }

    #[test]
    fn bilinearity_and_star() {
        let g = ge(int(1), &[int(0), int(1)]);
        let h = ge(int(-1), &[int(2), int(0)]);
        let k = ge(rat(1, 3), &[int(1), int(1)]);
        let sum = AlgebraElement::generator(g.clone())
            .add(&AlgebraElement::generator(h.clone()))
            .unwrap();
        let prod = sum.mul(&AlgebraElement::generator(k.clone())).unwrap();
        let expected = AlgebraElement::from_terms(
            1,
            [(g.compose(&k).unwrap(), c(1.0)), (h.compose(&k).unwrap(), c(1.0))],
        )
        .unwrap();
        assert_eq!(prod, expected);

        let z = AlgebraElement::term(g.clone(), Complex64::new(2.0, 3.0));
        assert_eq!(z.star(), AlgebraElement::term(g.inverse(), Complex64::new(2.0, -3.0)));
        assert_eq!(z.star().star(), z);
    }

    #[test]
    fn cancelling_terms_are_dropped() {
        let g = ge(int(1), &[int(0), int(1)]);
        let x = AlgebraElement::generator(g.clone());
        let y = AlgebraElement::term(g, c(-1.0));
        assert!(x.add(&y).unwrap().is_empty());
    }

    #[test]
    fn degree_mismatch() {
        let a = AlgebraElement::unit(1);
        let b = AlgebraElement::unit(2);
        assert!(matches!(a.mul(&b), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn embed_generator_examples() {
        let g = ge(int(1), &[int(0), int(1)]);
        let w = LocalizedElement::new(region(0, 2), AlgebraElement::generator(g.clone())).unwrap();
        let halves = cuts(0, 2, &[int(1)]);
        let t = embed_generator(&halves, &w).unwrap();
        let words: Vec<_> = t.words().collect();
        assert_eq!(words.len(), 1);
        assert_eq!(words[0].0, &vec![g.clone(), g.clone()]);

        let trivial = Partition::trivial(region(0, 2)).unwrap();
        let t1 = embed_generator(&trivial, &w).unwrap();
        assert_eq!(t1.words().next().unwrap().0, &vec![g.clone()]);

        // linear, not multiplicative: no cross terms
        let h = ge(int(2), &[int(1), int(0)]);
        let sum = AlgebraElement::from_terms(1, [(g.clone(), c(2.0)), (h.clone(), c(5.0))]).unwrap();
        let w2 = LocalizedElement::new(region(0, 2), sum).unwrap();
        let t2 = embed_generator(&halves, &w2).unwrap();
        let expected = TensorElement::from_words(
            1,
            halves.clone(),
            [(c(2.0), vec![g.clone(), g.clone()]), (c(5.0), vec![h.clone(), h.clone()])],
        )
        .unwrap();
        assert_eq!(t2, expected);

        assert!(matches!(
            embed_generator(&cuts(0, 3, &[]), &w),
            Err(Error::RegionMismatch(_))
        ));
    }

    #[test]
    fn refine_twice_equals_direct() {
        let g = ge(rat(1, 2), &[int(1), int(-1), int(2)]);
        let w = LocalizedElement::new(region(0, 2), AlgebraElement::generator(g.clone())).unwrap();
        let coarse = Partition::trivial(region(0, 2)).unwrap();
        let halves = cuts(0, 2, &[int(1)]);
        let quarters = cuts(0, 2, &[rat(1, 2), int(1), rat(3, 2)]);
        let t = embed_generator(&coarse, &w).unwrap();
        let two_step = embed_refine(&embed_refine(&t, &halves).unwrap(), &quarters).unwrap();
        let direct = embed_refine(&t, &quarters).unwrap();
        assert_eq!(two_step, direct);
        assert_eq!(direct.words().next().unwrap().0, &vec![g; 4]);
        assert_eq!(embed_refine(&t, &coarse).unwrap(), t);
        assert!(matches!(
            embed_refine(&direct, &halves),
            Err(Error::NotRefinement(_))
        ));
    }

    #[test]
    fn tensor_mul_examples() {
        let g = ge(int(1), &[int(0), int(1)]);
        let h = ge(int(-1), &[int(1), int(1)]);
        let whole = Partition::trivial(region(0, 2)).unwrap();
        let halves = cuts(0, 2, &[int(1)]);

        let unit = TensorElement::unit(1, whole.clone());
        let tg = TensorElement::elementary(whole.clone(), &[AlgebraElement::generator(g.clone())]).unwrap();
        assert_eq!(tensor_mul(&unit, &tg).unwrap(), tg);

        let th = TensorElement::elementary(
            halves.clone(),
            &[AlgebraElement::generator(h.clone()), AlgebraElement::generator(g.clone())],
        )
        .unwrap();
        let prod = tensor_mul(&tg, &th).unwrap();
        let expected = TensorElement::from_words(
            1,
            halves,
            [(c(1.0), vec![g.compose(&h).unwrap(), g.compose(&g).unwrap()])],
        )
        .unwrap();
        assert_eq!(prod, expected);
    }

    #[test]
    fn merge_and_ambient() {
        let g = ge(int(1), &[int(0), int(1)]);
        let h = ge(int(2), &[int(3), int(0)]);
        let a = TensorElement::elementary(Partition::trivial(region(0, 1)).unwrap(), &[AlgebraElement::generator(g.clone())]).unwrap();
        let b = TensorElement::elementary(Partition::trivial(region(1, 2)).unwrap(), &[AlgebraElement::generator(h.clone())]).unwrap();
        let m = merge_factorize(&a, &b).unwrap();
        assert_eq!(m.partition(), &cuts(0, 2, &[int(1)]));
        assert_eq!(m.words().next().unwrap().0, &vec![g.clone(), h.clone()]);
        // order of arguments does not matter for the result
        assert_eq!(merge_factorize(&b, &a).unwrap(), m);
        assert!(matches!(merge_factorize(&a, &a), Err(Error::Overlap(_))));

        let u1 = TensorElement::unit(1, Partition::trivial(region(0, 1)).unwrap());
        let u2 = TensorElement::unit(1, Partition::trivial(region(1, 2)).unwrap());
        let uu = merge_factorize(&u1, &u2).unwrap();
        assert!(uu.equivalent(&TensorElement::unit(1, Partition::trivial(region(0, 2)).unwrap())).unwrap());

        let padded = ambient_embed(&a, &region(0, 2)).unwrap();
        assert_eq!(padded.partition(), &cuts(0, 2, &[int(1)]));
        assert_eq!(
            padded.words().next().unwrap().0,
            &vec![g.clone(), GroupElement::identity(1)]
        );
        assert_eq!(ambient_embed(&a, &region(0, 1)).unwrap(), a);
        assert!(ambient_embed(&a, &region(1, 3)).is_err());

        let two_step = ambient_embed(&padded, &region(0, 3)).unwrap();
        let one_step = ambient_embed(&a, &region(0, 3)).unwrap();
        assert!(two_step.equivalent(&one_step).unwrap());
        assert_ne!(two_step.partition(), one_step.partition());
    }

    #[test]
    fn split_recovers_factors() {
        let g = ge(int(1), &[int(0), int(1)]);
        let a = TensorElement::elementary(cuts(0, 2, &[int(1)]), &[
            AlgebraElement::generator(g.clone()),
            AlgebraElement::generator(g.inverse()),
        ])
        .unwrap();
        let b = TensorElement::unit(1, Partition::trivial(region(2, 3)).unwrap());
        let m = merge_factorize(&a, &b).unwrap();
        assert_eq!(split_partition(m.partition(), &region(0, 2)).unwrap(), *a.partition());
        assert!(is_refinement(m.partition(), m.partition()).unwrap());
    }

    fn arb_rat() -> impl Strategy<Value = Rational> {
        (-6i64..=6, 1i64..=4).prop_map(|(a, b)| rat(a, b))
    }

    fn arb_ge(n: usize) -> impl Strategy<Value = GroupElement> {
        (arb_rat(), proptest::collection::vec(arb_rat(), n + 1))
            .prop_map(move |(u, c)| GroupElement::new(u, Poly::new(n, c).unwrap()))
    }

    // small integer coefficients keep complex sums exact in f64
    fn arb_elem(n: usize) -> impl Strategy<Value = AlgebraElement> {
        proptest::collection::vec((arb_ge(n), -3i32..=3, -3i32..=3), 1..=4).prop_map(move |ts| {
            AlgebraElement::from_terms(
                n,
                ts.into_iter()
                    .map(|(g, re, im)| (g, Complex64::new(re as f64, im as f64))),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn algebra_laws((x, y, z) in (1usize..=3).prop_flat_map(|n| (arb_elem(n), arb_elem(n), arb_elem(n)))) {
            let left = x.mul(&y).unwrap().mul(&z).unwrap();
            let right = x.mul(&y.mul(&z).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            prop_assert_eq!(x.star().star(), x.clone());
            prop_assert_eq!(x.mul(&y).unwrap().star(), y.star().mul(&x.star()).unwrap());
            let n = x.degree_bound();
            prop_assert_eq!(AlgebraElement::unit(n).mul(&x).unwrap(), x.clone());
            prop_assert_eq!(x.mul(&AlgebraElement::unit(n)).unwrap(), x);
        }

        #[test]
        fn generators_unitary(g in (1usize..=4).prop_flat_map(arb_ge)) {
            let w = AlgebraElement::generator(g.clone());
            prop_assert_eq!(w.star().mul(&w).unwrap(), AlgebraElement::unit(g.degree_bound()));
        }

        #[test]
        fn refine_is_star_homomorphism(x in arb_elem(2), y in arb_elem(2), k in 1i64..4) {
            let coarse = cuts(0, 4, &[int(2)]);
            let finer = cuts(0, 4, &[rat(k, 2), int(2), rat(4 + k, 2)]);
            let tx = TensorElement::elementary(coarse.clone(), &[x.clone(), y.clone()]).unwrap();
            let ty = TensorElement::elementary(coarse, &[y.clone(), x.clone()]).unwrap();
            let lhs = embed_refine(&tensor_mul(&tx, &ty).unwrap(), &finer).unwrap();
            let rhs = tensor_mul(&embed_refine(&tx, &finer).unwrap(), &embed_refine(&ty, &finer).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(embed_refine(&tx.star(), &finer).unwrap(), embed_refine(&tx, &finer).unwrap().star());
        }
    }
}
