//! Truncated multivariate formal power series with exact rational
//! coefficients.
//!
//! The coefficient ring of everything in this crate: the coordinate ring of
//! `n` copies of the formal dual group, presented as the power-series ring
//! in the variables `(x_i, w_i, y_i)` for each factor `i`, where
//! `z_i = 1 + w_i`.  Inverse powers of `z` are always derived values,
//! obtained through [`Series::invert_unit`]; the ring itself is an honest
//! power-series ring.
//!
//! Invariants:
//! - no stored coefficient is zero;
//! - every stored exponent vector has total degree `<= order`;
//! - two series are equal iff signatures, orders and coefficient maps are
//!   all equal.
//!
//! Truncation is by total degree across all variables.  A series of order
//! `N` carries every monomial of total degree `<= N` of the element it
//! represents, exactly.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Zero};
use smallvec::SmallVec;

use crate::{Error, Result};

/// Exact rational scalar used throughout the crate.
pub type Rat = BigRational;

/// Rational from an integer pair. Panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rat_int(num: i64) -> Rat {
    Rat::from(BigInt::from(num))
}

/// The ambient ring: `factors` copies of the dual group, coordinates
/// `(x_i, w_i, y_i)` per factor in that canonical order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct RingSignature {
    factors: usize,
}

impl RingSignature {
    pub fn new(factors: usize) -> Self {
        assert!(factors >= 1, "a ring needs at least one factor");
        RingSignature { factors }
    }

    pub fn factors(&self) -> usize {
        self.factors
    }

    /// Total number of variables, three per factor.
    pub fn vars(&self) -> usize {
        3 * self.factors
    }

    /// Index of `x_i` (factor index 0-based).
    pub fn x(&self, factor: usize) -> usize {
        assert!(factor < self.factors);
        3 * factor
    }

    /// Index of `w_i = z_i - 1`.
    pub fn w(&self, factor: usize) -> usize {
        assert!(factor < self.factors);
        3 * factor + 1
    }

    /// Index of `y_i`.
    pub fn y(&self, factor: usize) -> usize {
        assert!(factor < self.factors);
        3 * factor + 2
    }

    /// Printable name of a variable, e.g. `x1`, `w2`, `y3`.
    pub fn var_name(&self, index: usize) -> String {
        assert!(index < self.vars());
        let stem = ["x", "w", "y"][index % 3];
        format!("{}{}", stem, index / 3 + 1)
    }
}

/// Exponent vector of a monomial; entries follow the signature's variable
/// order. Lexicographic `Ord` is the display order within a degree.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Exponents(SmallVec<[u8; 12]>);

impl Exponents {
    pub fn zero(vars: usize) -> Self {
        Exponents(SmallVec::from_elem(0, vars))
    }

    pub fn unit(vars: usize, index: usize) -> Self {
        assert!(index < vars);
        let mut e = Self::zero(vars);
        e.0[index] = 1;
        e
    }

    pub fn from_slice(exps: &[u8]) -> Self {
        Exponents(SmallVec::from_slice(exps))
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn get(&self, index: usize) -> u8 {
        self.0[index]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Exponents) -> Exponents {
        debug_assert_eq!(self.0.len(), other.0.len());
        Exponents(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
                .collect(),
        )
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().copied()
    }
}

/// A truncated formal power series: a finite map from exponent vectors to
/// nonzero rationals, bucketed by total degree, plus the truncation order.
#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    sig: RingSignature,
    order: usize,
    /// `terms[d]` holds the homogeneous degree-`d` slice; length `order + 1`.
    terms: Vec<BTreeMap<Exponents, Rat>>,
}

impl Series {
    pub fn zero(sig: RingSignature, order: usize) -> Self {
        Series {
            sig,
            order,
            terms: vec![BTreeMap::new(); order + 1],
        }
    }

    pub fn constant(sig: RingSignature, order: usize, value: Rat) -> Self {
        let mut s = Self::zero(sig, order);
        if !value.is_zero() {
            s.terms[0].insert(Exponents::zero(sig.vars()), value);
        }
        s
    }

    pub fn one(sig: RingSignature, order: usize) -> Self {
        Self::constant(sig, order, Rat::one())
    }

    /// The variable with the given index, as a series (zero when `order == 0`).
    pub fn var(sig: RingSignature, order: usize, index: usize) -> Self {
        assert!(index < sig.vars(), "variable index out of range");
        let mut s = Self::zero(sig, order);
        if order >= 1 {
            s.terms[1].insert(Exponents::unit(sig.vars(), index), Rat::one());
        }
        s
    }

    /// A single monomial `coeff * vars^exps` (dropped if beyond the order).
    pub fn monomial(sig: RingSignature, order: usize, exps: &[u8], coeff: Rat) -> Self {
        assert_eq!(exps.len(), sig.vars(), "exponent vector length mismatch");
        let mut s = Self::zero(sig, order);
        let e = Exponents::from_slice(exps);
        let d = e.degree();
        if d <= order && !coeff.is_zero() {
            s.terms[d].insert(e, coeff);
        }
        s
    }

    pub fn signature(&self) -> RingSignature {
        self.sig
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|m| m.is_empty())
    }

    /// Smallest total degree carrying a term, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.terms.iter().position(|m| !m.is_empty())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.iter().map(|m| m.len()).sum()
    }

    pub fn coeff(&self, exps: &Exponents) -> Rat {
        let d = exps.degree();
        if d > self.order {
            return Rat::zero();
        }
        self.terms[d].get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.terms[0]
            .get(&Exponents::zero(self.sig.vars()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// All terms, ordered by (total degree, lexicographic exponents).
    pub fn iter_terms(&self) -> impl Iterator<Item = (&Exponents, &Rat)> {
        self.terms.iter().flat_map(|m| m.iter())
    }

    /// The homogeneous degree-`d` slice.
    pub fn homogeneous_part(&self, d: usize) -> impl Iterator<Item = (&Exponents, &Rat)> {
        self.terms.get(d).into_iter().flat_map(|m| m.iter())
    }

    /// Re-truncate to `order <= self.order()`.
    pub fn truncate(&self, order: usize) -> Series {
        assert!(
            order <= self.order,
            "cannot extend a series beyond its certified order"
        );
        Series {
            sig: self.sig,
            order,
            terms: self.terms[..=order].to_vec(),
        }
    }

    fn insert_term(&mut self, e: Exponents, c: Rat) {
        let d = e.degree();
        if d > self.order || c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms[d].entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Series) -> Series {
        assert_eq!(self.sig, other.sig, "signature mismatch in add");
        let order = self.order.min(other.order);
        let mut out = self.truncate(order);
        for d in 0..=order {
            for (e, c) in &other.terms[d] {
                out.insert_term(e.clone(), c.clone());
            }
        }
        out
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        let mut out = self.clone();
        for m in &mut out.terms {
            for c in m.values_mut() {
                *c = -c.clone();
            }
        }
        out
    }

    pub fn scale(&self, q: &Rat) -> Series {
        if q.is_zero() {
            return Series::zero(self.sig, self.order);
        }
        let mut out = self.clone();
        for m in &mut out.terms {
            for c in m.values_mut() {
                *c = &*c * q;
            }
        }
        out
    }

    /// Truncated product; monomials of total degree beyond the result order
    /// are never formed.
    pub fn mul(&self, other: &Series) -> Series {
        assert_eq!(self.sig, other.sig, "signature mismatch in mul");
        let order = self.order.min(other.order);
        let mut out = Series::zero(self.sig, order);
        for d1 in 0..=order {
            if self.terms[d1].is_empty() {
                continue;
            }
            for d2 in 0..=(order - d1) {
                if other.terms[d2].is_empty() {
                    continue;
                }
                let bucket = d1 + d2;
                for (e1, c1) in &self.terms[d1] {
                    for (e2, c2) in &other.terms[d2] {
                        let e = e1.mul(e2);
                        let c = c1 * c2;
                        use std::collections::btree_map::Entry;
                        match out.terms[bucket].entry(e) {
                            Entry::Vacant(v) => {
                                if !c.is_zero() {
                                    v.insert(c);
                                }
                            }
                            Entry::Occupied(mut o) => {
                                let sum = o.get() + &c;
                                if sum.is_zero() {
                                    o.remove();
                                } else {
                                    *o.get_mut() = sum;
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Product emitted up to `order`, consuming every stored slice of both
    /// operands regardless of their certified orders.
    ///
    /// The caller is responsible for the certification argument; this is
    /// used by the Poisson bracket, where the factor with the smaller order
    /// is multiplied by a series of positive valuation so the top output
    /// degree is still exact.
    pub(crate) fn mul_with_order(&self, other: &Series, order: usize) -> Series {
        assert_eq!(self.sig, other.sig, "signature mismatch in mul");
        let mut out = Series::zero(self.sig, order);
        for d1 in 0..=self.order.min(order) {
            if self.terms[d1].is_empty() {
                continue;
            }
            for d2 in 0..=other.order.min(order - d1) {
                if other.terms[d2].is_empty() {
                    continue;
                }
                for (e1, c1) in &self.terms[d1] {
                    for (e2, c2) in &other.terms[d2] {
                        out.insert_term(e1.mul(e2), c1 * c2);
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, exp: usize) -> Series {
        let mut out = Series::one(self.sig, self.order);
        for _ in 0..exp {
            out = out.mul(self);
        }
        out
    }

    /// Multiplicative inverse of a series with invertible constant term.
    ///
    /// Degree-by-degree: with `a = a_0 + a_+`, the degree-`d` slice of the
    /// inverse is `-a_0^{-1} * sum_{k=1..=d} a_k * b_{d-k}`.
    pub fn invert_unit(&self) -> Result<Series> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NotAUnit);
        }
        let inv0 = Rat::one() / &c0;
        let mut out = Series::constant(self.sig, self.order, inv0.clone());
        for d in 1..=self.order {
            let mut slice: BTreeMap<Exponents, Rat> = BTreeMap::new();
            for k in 1..=d {
                mul_homog_into(&mut slice, &self.terms[k], &out.terms[d - k]);
            }
            let neg_inv0 = -inv0.clone();
            for (e, c) in slice {
                let v = &c * &neg_inv0;
                if !v.is_zero() {
                    out.terms[d].insert(e, v);
                }
            }
        }
        Ok(out)
    }

    /// Square root of a series with constant term 1, normalized to constant
    /// term 1. Degree-by-degree: `2 s_d = a_d - sum_{0<i<d} s_i s_{d-i}`.
    pub fn sqrt_unit(&self) -> Result<Series> {
        let c0 = self.constant_term();
        if !c0.is_one() {
            return Err(Error::ConstantTermNotOne(c0.to_string()));
        }
        let mut out = Series::one(self.sig, self.order);
        let half = rat(1, 2);
        for d in 1..=self.order {
            let mut slice: BTreeMap<Exponents, Rat> = BTreeMap::new();
            for i in 1..d {
                mul_homog_into(&mut slice, &out.terms[i], &out.terms[d - i]);
            }
            let mut target = self.terms[d].clone();
            for (e, c) in slice {
                sub_into(&mut target, e, c);
            }
            for (e, c) in target {
                let v = &c * &half;
                if !v.is_zero() {
                    out.terms[d].insert(e, v);
                }
            }
        }
        Ok(out)
    }

    /// Logarithm of a series with constant term 1.
    pub fn log_unit(&self) -> Result<Series> {
        let c0 = self.constant_term();
        if !c0.is_one() {
            return Err(Error::ConstantTermNotOne(c0.to_string()));
        }
        let u = self.sub(&Series::one(self.sig, self.order));
        let mut out = Series::zero(self.sig, self.order);
        let mut power = u.clone();
        for k in 1..=self.order {
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.scale(&rat(sign, k as i64)));
            if k < self.order {
                power = power.mul(&u);
            }
        }
        Ok(out)
    }

    /// Exponential of a series with zero constant term.
    pub fn exp_small(&self) -> Result<Series> {
        let c0 = self.constant_term();
        if !c0.is_zero() {
            return Err(Error::ConstantTermNotZero(c0.to_string()));
        }
        let mut out = Series::one(self.sig, self.order);
        let mut power = Series::one(self.sig, self.order);
        let mut factorial = Rat::one();
        for k in 1..=self.order {
            power = power.mul(self);
            if power.is_zero() {
                break;
            }
            factorial *= rat_int(k as i64);
            out = out.add(&power.scale(&(Rat::one() / &factorial)));
        }
        Ok(out)
    }

    /// Formal partial derivative. One degree of certified precision is
    /// consumed: the result order is `order - 1` (saturating at 0).
    pub fn partial(&self, var: usize) -> Result<Series> {
        if var >= self.sig.vars() {
            return Err(Error::InvalidVariable {
                index: var,
                vars: self.sig.vars(),
            });
        }
        let order = self.order.saturating_sub(1);
        let mut out = Series::zero(self.sig, order);
        for d in 1..=self.order {
            if d - 1 > order {
                break;
            }
            for (e, c) in &self.terms[d] {
                let k = e.get(var);
                if k == 0 {
                    continue;
                }
                let mut exps: SmallVec<[u8; 12]> = e.0.clone();
                exps[var] -= 1;
                out.terms[d - 1]
                    .insert(Exponents(exps), c * rat_int(k as i64));
            }
        }
        Ok(out)
    }

    /// Continuous unital substitution: each variable is replaced by its
    /// image (which must have zero constant term, so the substitution is
    /// well defined on formal series).  The result order is the minimum of
    /// the argument's and the images' orders.
    pub fn substitute(&self, images: &[Series]) -> Result<Series> {
        let vars = self.sig.vars();
        if images.len() != vars {
            return Err(Error::MissingImage {
                expected: vars,
                got: images.len(),
            });
        }
        let target = images[0].sig;
        let mut order = self.order;
        for (i, img) in images.iter().enumerate() {
            assert_eq!(img.sig, target, "substitution images mix signatures");
            if !img.constant_term().is_zero() {
                return Err(Error::ImageNotPointed(i));
            }
            order = order.min(img.order);
        }
        // Power cache per variable, built lazily up to the needed exponent.
        let mut powers: Vec<Vec<Series>> =
            vec![vec![Series::one(target, order)]; vars];
        let mut out = Series::zero(target, order);
        for d in 0..=order.min(self.order) {
            for (e, c) in &self.terms[d] {
                let mut prod = Series::constant(target, order, c.clone());
                for v in 0..vars {
                    let k = e.get(v) as usize;
                    if k == 0 {
                        continue;
                    }
                    while powers[v].len() <= k {
                        let next = powers[v].last().unwrap().mul(&images[v]);
                        powers[v].push(next);
                    }
                    prod = prod.mul(&powers[v][k]);
                    if prod.is_zero() {
                        break;
                    }
                }
                out = out.add(&prod);
            }
        }
        Ok(out)
    }

    /// Relabel tensor factors: factor `i` of `self` becomes factor
    /// `leg_map[i]` of the target ring.  Purely an exponent shuffle.
    pub fn relabel_factors(&self, target: RingSignature, leg_map: &[usize]) -> Series {
        assert_eq!(leg_map.len(), self.sig.factors(), "leg map length mismatch");
        assert!(
            leg_map.iter().all(|&l| l < target.factors()),
            "leg map target out of range"
        );
        let mut out = Series::zero(target, self.order);
        for d in 0..=self.order {
            for (e, c) in &self.terms[d] {
                let mut exps = SmallVec::<[u8; 12]>::from_elem(0, target.vars());
                for f in 0..self.sig.factors() {
                    for k in 0..3 {
                        exps[3 * leg_map[f] + k] = e.get(3 * f + k);
                    }
                }
                out.terms[d].insert(Exponents(exps), c.clone());
            }
        }
        out
    }

    /// `(1 + w_factor)^k` for any integer `k`, the only sanctioned way to
    /// form powers of `z`.
    pub fn z_power(sig: RingSignature, order: usize, factor: usize, k: i64) -> Series {
        let z = Series::one(sig, order).add(&Series::var(sig, order, sig.w(factor)));
        if k >= 0 {
            z.pow(k as usize)
        } else {
            z.invert_unit()
                .expect("1 + w is a unit")
                .pow((-k) as usize)
        }
    }
}

/// Accumulate the product of two homogeneous slices into `acc`.
fn mul_homog_into(
    acc: &mut BTreeMap<Exponents, Rat>,
    a: &BTreeMap<Exponents, Rat>,
    b: &BTreeMap<Exponents, Rat>,
) {
    for (e1, c1) in a {
        for (e2, c2) in b {
            let e = e1.mul(e2);
            let c = c1 * c2;
            add_into(acc, e, c);
        }
    }
}

fn add_into(acc: &mut BTreeMap<Exponents, Rat>, e: Exponents, c: Rat) {
    use std::collections::btree_map::Entry;
    match acc.entry(e) {
        Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
        Entry::Occupied(mut o) => {
            let sum = o.get() + &c;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

fn sub_into(acc: &mut BTreeMap<Exponents, Rat>, e: Exponents, c: Rat) {
    add_into(acc, e, -c);
}

impl fmt::Display for Series {
    /// Stable debug text format: monomials sorted by (total degree, then
    /// lexicographic exponent), coefficients printed as `p/q`, variables as
    /// `x1 w1 y1 x2 ...` with explicit exponents.  Used by golden-file
    /// tests; do not change lightly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.iter_terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}/{}", c.numer(), c.denom())?;
            if !e.is_constant() {
                write!(f, " *")?;
                for v in 0..e.len() {
                    let k = e.get(v);
                    if k > 0 {
                        write!(f, " {}^{}", self.sig.var_name(v), k)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[order {}]({})", self.order, self)
    }
}

impl std::ops::Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        Series::add(self, rhs)
    }
}

impl std::ops::Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        Series::sub(self, rhs)
    }
}

impl std::ops::Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        Series::mul(self, rhs)
    }
}

impl std::ops::Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig1() -> RingSignature {
        RingSignature::new(1)
    }

    fn sig2() -> RingSignature {
        RingSignature::new(2)
    }

    #[test]
    fn unit_times_inverse_is_one() {
        let s = sig1();
        let z = Series::one(s, 8).add(&Series::var(s, 8, s.w(0)));
        let inv = z.invert_unit().unwrap();
        assert_eq!(z.mul(&inv), Series::one(s, 8));
    }

    #[test]
    fn monomial_product_across_factors() {
        let s = sig2();
        let x1 = Series::var(s, 6, s.x(0));
        let y2 = Series::var(s, 6, s.y(1));
        let p = x1.mul(&y2);
        let mut exps = vec![0u8; 6];
        exps[s.x(0)] = 1;
        exps[s.y(1)] = 1;
        assert_eq!(p, Series::monomial(s, 6, &exps, rat_int(1)));
    }

    #[test]
    fn z_inverse_square_minus_square_expansion() {
        // Oracle: the geometric series (1+w)^-2 = sum (-1)^k (k+1) w^k,
        // minus the polynomial 1 + 2w + w^2, built term by term.
        let s = sig1();
        let n = 7;
        let mut oracle = Series::zero(s, n);
        for k in 0..=n {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let mut exps = vec![0u8; 3];
            exps[s.w(0)] = k as u8;
            oracle = oracle.add(&Series::monomial(
                s,
                n,
                &exps,
                rat_int(sign * (k as i64 + 1)),
            ));
        }
        for (k, c) in [(0usize, -1i64), (1, -2), (2, -1)] {
            let mut exps = vec![0u8; 3];
            exps[s.w(0)] = k as u8;
            oracle = oracle.add(&Series::monomial(s, n, &exps, rat_int(c)));
        }

        let diff = Series::z_power(s, n, 0, -2).sub(&Series::z_power(s, n, 0, 2));
        assert_eq!(diff, oracle);

        // Spot-check the leading coefficients -4w + 2w^2 - 4w^3 + 5w^4.
        for (k, c) in [(1i64, -4i64), (2, 2), (3, -4), (4, 5)] {
            let mut exps = vec![0u8; 3];
            exps[s.w(0)] = k as u8;
            assert_eq!(diff.coeff(&Exponents::from_slice(&exps)), rat_int(c));
        }
    }

    #[test]
    fn invert_constant() {
        let s = sig1();
        let two = Series::constant(s, 4, rat_int(2));
        assert_eq!(
            two.invert_unit().unwrap(),
            Series::constant(s, 4, rat(1, 2))
        );
    }

    #[test]
    fn invert_one_plus_xy() {
        let s = sig1();
        let u = Series::var(s, 8, s.x(0)).mul(&Series::var(s, 8, s.y(0)));
        let a = Series::one(s, 8).add(&u);
        let inv = a.invert_unit().unwrap();
        assert_eq!(a.mul(&inv), Series::one(s, 8));
        // 1 - xy + (xy)^2 - ...
        let mut expected = Series::zero(s, 8);
        for k in 0..=4usize {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            expected = expected.add(&u.pow(k).scale(&rat_int(sign)));
        }
        assert_eq!(inv, expected);
    }

    #[test]
    fn invert_rejects_non_unit() {
        let s = sig1();
        let x = Series::var(s, 4, s.x(0));
        assert_eq!(x.invert_unit(), Err(Error::NotAUnit));
    }

    #[test]
    fn sqrt_of_one_plus_degree_two_monomial() {
        let s = sig1();
        let u = Series::var(s, 8, s.x(0)).mul(&Series::var(s, 8, s.y(0)));
        let a = Series::one(s, 8).add(&u);
        let r = a.sqrt_unit().unwrap();
        assert_eq!(r.mul(&r), a);
        // 1 + u/2 - u^2/8 + u^3/16 - 5u^4/128
        let expected = Series::one(s, 8)
            .add(&u.scale(&rat(1, 2)))
            .add(&u.pow(2).scale(&rat(-1, 8)))
            .add(&u.pow(3).scale(&rat(1, 16)))
            .add(&u.pow(4).scale(&rat(-5, 128)));
        assert_eq!(r, expected);
    }

    #[test]
    fn log_of_one_is_zero() {
        let s = sig1();
        assert_eq!(
            Series::one(s, 6).log_unit().unwrap(),
            Series::zero(s, 6)
        );
    }

    #[test]
    fn log_exp_round_trip_on_z() {
        let s = sig1();
        let z = Series::one(s, 9).add(&Series::var(s, 9, s.w(0)));
        let l = z.log_unit().unwrap();
        // w - w^2/2 + w^3/3 - ...
        let mut expected = Series::zero(s, 9);
        let w = Series::var(s, 9, s.w(0));
        for k in 1..=9i64 {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            expected = expected.add(&w.pow(k as usize).scale(&rat(sign, k)));
        }
        assert_eq!(l, expected);
        assert_eq!(l.exp_small().unwrap(), z);
    }

    #[test]
    fn partial_derivatives() {
        let s = sig2();
        // d/dx1 (x1^2 y2) = 2 x1 y2
        let mut exps = vec![0u8; 6];
        exps[s.x(0)] = 2;
        exps[s.y(1)] = 1;
        let f = Series::monomial(s, 6, &exps, rat_int(1));
        let df = f.partial(s.x(0)).unwrap();
        let mut exps2 = vec![0u8; 6];
        exps2[s.x(0)] = 1;
        exps2[s.y(1)] = 1;
        assert_eq!(df, Series::monomial(s, 5, &exps2, rat_int(2)));

        // constants die
        let c = Series::constant(s, 6, rat_int(7));
        assert!(c.partial(s.w(0)).unwrap().is_zero());

        // d/dw (1+w)^-1 = -(1+w)^-2, against the termwise-differentiated
        // geometric series.
        let s1 = sig1();
        let n = 8;
        let zinv = Series::z_power(s1, n, 0, -1);
        let d = zinv.partial(s1.w(0)).unwrap();
        let mut oracle = Series::zero(s1, n - 1);
        for k in 1..=n {
            // d/dw (-1)^k w^k = (-1)^k k w^{k-1}
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let mut exps = vec![0u8; 3];
            exps[s1.w(0)] = (k - 1) as u8;
            oracle = oracle.add(&Series::monomial(
                s1,
                n - 1,
                &exps,
                rat_int(sign * k as i64),
            ));
        }
        assert_eq!(d, oracle);
        assert_eq!(d, Series::z_power(s1, n - 1, 0, -2).neg());
    }

    #[test]
    fn partial_rejects_bad_variable() {
        let s = sig1();
        let x = Series::var(s, 3, 0);
        assert!(matches!(
            x.partial(5),
            Err(Error::InvalidVariable { index: 5, vars: 3 })
        ));
    }

    #[test]
    fn substitute_identity_and_flip() {
        let s = sig2();
        let ident: Vec<Series> = (0..6).map(|v| Series::var(s, 6, v)).collect();
        let f = Series::z_power(s, 6, 0, -1).mul(&Series::var(s, 6, s.x(1)));
        assert_eq!(f.substitute(&ident).unwrap(), f);

        // flip x1<->x2, w1<->w2, y1<->y2 sends w1 to w2
        let flip: Vec<Series> = (0..6).map(|v| Series::var(s, 6, (v + 3) % 6)).collect();
        let w1 = Series::var(s, 6, s.w(0));
        assert_eq!(w1.substitute(&flip).unwrap(), Series::var(s, 6, s.w(1)));
    }

    #[test]
    fn substitute_rejects_unpointed_image() {
        let s = sig1();
        let f = Series::var(s, 4, 0);
        let images = vec![
            Series::one(s, 4),
            Series::var(s, 4, 1),
            Series::var(s, 4, 2),
        ];
        assert_eq!(f.substitute(&images), Err(Error::ImageNotPointed(0)));
    }

    #[test]
    fn display_format_is_stable() {
        let s = sig1();
        let f = Series::constant(s, 4, rat(1, 2))
            .add(&Series::var(s, 4, s.x(0)).scale(&rat_int(-4)))
            .add(&Series::var(s, 4, s.w(0)).mul(&Series::var(s, 4, s.y(0))));
        assert_eq!(format!("{}", f), "1/2 + -4/1 * x1^1 + 1/1 * w1^1 y1^1");
        assert_eq!(format!("{}", Series::zero(s, 2)), "0");
    }
}
