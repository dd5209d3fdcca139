//! Sparse Laurent polynomials with exponent vectors in `Z^n`.

use std::collections::BTreeMap;

use crate::field::Field;

pub type Exponent = Vec<i64>;

#[derive(Clone, Debug)]
pub struct LaurentPoly<F: Field> {
    field: F,
    nvars: usize,
    terms: BTreeMap<Exponent, F::Elem>,
}

impl<F: Field> PartialEq for LaurentPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl<F: Field> LaurentPoly<F> {
    pub fn zero(field: &F, nvars: usize) -> Self {
        LaurentPoly { field: field.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: &F, nvars: usize, c: F::Elem) -> Self {
        Self::monomial(field, vec![0; nvars], c)
    }

    pub fn monomial(field: &F, exp: Exponent, c: F::Elem) -> Self {
        let mut p = Self::zero(field, exp.len());
        p.add_term(exp, c);
        p
    }

    pub fn from_terms(field: &F, nvars: usize, terms: impl IntoIterator<Item = (Exponent, F::Elem)>) -> Self {
        let mut p = Self::zero(field, nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, F::Elem> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exp: &[i64]) -> F::Elem {
        self.terms.get(exp).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, exp: Exponent, c: F::Elem) {
        assert_eq!(exp.len(), self.nvars, "exponent length");
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(old) => {
                let s = self.field.add(old, &c);
                if self.field.is_zero(&s) {
                    self.terms.remove(&exp);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Self::from_terms(f, self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f.neg(c))))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &F::Elem) -> Self {
        let f = &self.field;
        Self::from_terms(f, self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f.mul(c, k))))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f, self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, f.mul(c1, c2));
            }
        }
        out
    }

    /// Multiplies by the monomial `X^shift`.
    pub fn shift(&self, shift: &[i64]) -> Self {
        self.map_exponents(self.nvars, |e| e.iter().zip(shift).map(|(a, b)| a + b).collect())
    }

    /// Re-expresses exponents through `f`; colliding terms are added.
    pub fn map_exponents(&self, nvars: usize, f: impl Fn(&[i64]) -> Exponent) -> Self {
        Self::from_terms(&self.field, nvars, self.terms.iter().map(|(e, c)| (f(e), c.clone())))
    }

    /// Value at a point of the torus; `None` if a needed inverse does not exist.
    pub fn eval(&self, point: &[F::Elem]) -> Option<F::Elem> {
        let f = &self.field;
        let mut acc = f.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k != 0 {
                    t = f.mul(&t, &f.pow(x, k)?);
                }
            }
            acc = f.add(&acc, &t);
        }
        Some(acc)
    }

    /// Substitutes values for the variables listed in `fixed`; the result keeps
    /// the remaining variables in their original order.
    pub fn specialize(&self, fixed: &[(usize, F::Elem)]) -> Option<Self> {
        let f = &self.field;
        let keep: Vec<usize> = (0..self.nvars).filter(|i| fixed.iter().all(|(j, _)| j != i)).collect();
        let mut out = Self::zero(f, keep.len());
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (j, v) in fixed {
                if e[*j] != 0 {
                    t = f.mul(&t, &f.pow(v, e[*j])?);
                }
            }
            out.add_term(keep.iter().map(|&i| e[i]).collect(), t);
        }
        Some(out)
    }

    /// Componentwise minimum and maximum exponents, `None` for the zero polynomial.
    pub fn exponent_range(&self) -> Option<(Exponent, Exponent)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let (mut lo, mut hi) = (first.clone(), first.clone());
        for e in it {
            for i in 0..self.nvars {
                lo[i] = lo[i].min(e[i]);
                hi[i] = hi[i].max(e[i]);
            }
        }
        Some((lo, hi))
    }

    /// Total degrees of the terms, as a sorted set.
    pub fn total_degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.terms.keys().map(|e| e.iter().sum()).collect();
        d.sort();
        d.dedup();
        d
    }

    /// Whether `self = X^m * other` for a single monomial `X^m`, returning `m`.
    pub fn monomial_multiple_of(&self, other: &Self) -> Option<Exponent> {
        let (a, _) = self.terms.iter().next()?;
        let (b, _) = other.terms.iter().next()?;
        if self.len() != other.len() {
            return None;
        }
        let m: Exponent = a.iter().zip(b).map(|(x, y)| x - y).collect();
        (other.shift(&m) == *self).then_some(m)
    }

    /// Whether `self = k * X^m * other` for some unit `k` and monomial `X^m`.
    pub fn unit_multiple_of(&self, other: &Self) -> bool {
        let (Some((a, ca)), Some((b, cb))) = (self.terms.iter().next(), other.terms.iter().next()) else {
            return self.is_zero() && other.is_zero();
        };
        let f = &self.field;
        let Some(k) = f.div(ca, cb) else { return false };
        let m: Exponent = a.iter().zip(b).map(|(x, y)| x - y).collect();
        other.shift(&m).scale(&k) == *self
    }

    /// Terms as `(exponent, rendered coefficient)` pairs in exponent order.
    pub fn render_terms(&self) -> Vec<(Exponent, String)> {
        self.terms.iter().map(|(e, c)| (e.clone(), self.field.render(c))).collect()
    }

    /// Log-derivative `x_i d/dx_i`.
    pub fn log_derivative(&self, i: usize) -> Self {
        let f = &self.field;
        Self::from_terms(f, self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f.mul(c, &f.from_i64(e[i])))))
    }
}

/// Determinant by cofactor expansion along rows, memoized over the set of
/// remaining columns.
pub fn det_cofactor<F: Field>(m: &[Vec<LaurentPoly<F>>], field: &F, nvars: usize) -> LaurentPoly<F> {
    let n = m.len();
    if n == 0 {
        return LaurentPoly::constant(field, nvars, field.one());
    }
    assert!(n <= 20, "matrix too large for subset memoization");
    let mut memo: Vec<Option<LaurentPoly<F>>> = vec![None; 1 << n];
    fn go<F: Field>(
        m: &[Vec<LaurentPoly<F>>],
        cols: usize,
        memo: &mut Vec<Option<LaurentPoly<F>>>,
        field: &F,
        nvars: usize,
    ) -> LaurentPoly<F> {
        let n = m.len();
        let row = cols.count_ones() as usize;
        if row == n {
            return LaurentPoly::constant(field, nvars, field.one());
        }
        if let Some(v) = &memo[cols] {
            return v.clone();
        }
        let mut acc = LaurentPoly::zero(field, nvars);
        let mut sign_pos = true;
        for c in 0..n {
            if cols & (1 << c) != 0 {
                continue;
            }
            if !m[row][c].is_zero() {
                let minor = go(m, cols | (1 << c), memo, field, nvars);
                let term = m[row][c].mul(&minor);
                acc = if sign_pos { acc.add(&term) } else { acc.sub(&term) };
            }
            sign_pos = !sign_pos;
        }
        memo[cols] = Some(acc.clone());
        acc
    }
    go(m, 0, &mut memo, field, nvars)
}

/// Determinant as a signed sum over permutations.
pub fn det_leibniz<F: Field>(m: &[Vec<LaurentPoly<F>>], field: &F, nvars: usize) -> LaurentPoly<F> {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut acc = LaurentPoly::zero(field, nvars);
    loop {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        let mut term = LaurentPoly::constant(field, nvars, field.one());
        for (i, &j) in perm.iter().enumerate() {
            term = term.mul(&m[i][j]);
            if term.is_zero() {
                break;
            }
        }
        acc = if inversions % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        if !next_permutation(&mut perm) {
            break;
        }
    }
    acc
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn poly(terms: &[(&[i64], i64)]) -> LaurentPoly<Rationals> {
        let n = terms[0].0.len();
        LaurentPoly::from_terms(&Rationals, n, terms.iter().map(|(e, c)| (e.to_vec(), q(*c))))
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let a = poly(&[(&[1, 0], 1), (&[0, -1], 2)]);
        let b = poly(&[(&[1, 0], -1), (&[0, 0], 3)]);
        let s = a.add(&b);
        assert_eq!(s, poly(&[(&[0, -1], 2), (&[0, 0], 3)]));
        // (x + 2/y)(x - 2/y) = x^2 - 4/y^2
        let c = poly(&[(&[1, 0], 1), (&[0, -1], -2)]);
        assert_eq!(a.mul(&c), poly(&[(&[2, 0], 1), (&[0, -2], -4)]));
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.shift(&[-1, 1]), poly(&[(&[0, 1], 1), (&[-1, 0], 2)]));
    }

    #[test]
    fn evaluation_and_specialization() {
        let a = poly(&[(&[2, -1], 3), (&[0, 1], -1)]);
        // 3 * 4 / 3 - 3 = 1
        assert_eq!(a.eval(&[q(2), q(3)]), Some(q(1)));
        assert_eq!(a.eval(&[q(2), q(0)]), None);
        let s = a.specialize(&[(0, q(2))]).unwrap();
        assert_eq!(s, LaurentPoly::from_terms(&Rationals, 1, [(vec![-1], q(12)), (vec![1], q(-1))]));
        assert_eq!(s.eval(&[q(3)]), Some(q(1)));
        let f = PrimeField::new(7).unwrap();
        let p = LaurentPoly::from_terms(&f, 1, [(vec![-1], 1u64), (vec![1], 1u64)]);
        // x + 1/x at x = 3: 3 + 5 = 1 mod 7
        assert_eq!(p.eval(&[3]), Some(1));
    }

    #[test]
    fn monomial_multiples() {
        let a = poly(&[(&[1, 0], 1), (&[0, 1], 2)]);
        let b = a.shift(&[3, -2]);
        assert_eq!(b.monomial_multiple_of(&a), Some(vec![3, -2]));
        assert!(b.scale(&q(5)).unit_multiple_of(&a));
        assert!(b.scale(&q(5)).monomial_multiple_of(&a).is_none());
        assert!(!poly(&[(&[1, 0], 1), (&[0, 1], 3)]).unit_multiple_of(&a));
    }

    #[test]
    fn determinants_agree() {
        let x = |e: &[i64], c: i64| poly(&[(e, c)]);
        let m = vec![
            vec![x(&[1, 0], 1).add(&x(&[0, 0], 2)), x(&[0, 1], 3), x(&[0, 0], 1)],
            vec![x(&[0, 0], 4), x(&[1, 1], -1), x(&[-1, 0], 5)],
            vec![x(&[0, -1], 1), x(&[0, 0], 7), x(&[2, 0], 1).add(&x(&[0, 0], -1))],
        ];
        let a = det_cofactor(&m, &Rationals, 2);
        let b = det_leibniz(&m, &Rationals, 2);
        assert_eq!(a, b);
        // numeric check at a point against the evaluated matrix
        let pt = [q(2), q(3)];
        let v: Vec<Vec<BigRational>> = m.iter().map(|r| r.iter().map(|e| e.eval(&pt).unwrap()).collect()).collect();
        let num = &v[0][0] * (&v[1][1] * &v[2][2] - &v[1][2] * &v[2][1])
            - &v[0][1] * (&v[1][0] * &v[2][2] - &v[1][2] * &v[2][0])
            + &v[0][2] * (&v[1][0] * &v[2][1] - &v[1][1] * &v[2][0]);
        assert_eq!(a.eval(&pt), Some(num));
    }

    #[test]
    fn log_derivative() {
        let a = poly(&[(&[2, -1], 3), (&[0, 1], -1)]);
        assert_eq!(a.log_derivative(0), poly(&[(&[2, -1], 6)]));
        assert_eq!(a.log_derivative(1), poly(&[(&[2, -1], -3), (&[0, 1], -1)]));
    }
}
