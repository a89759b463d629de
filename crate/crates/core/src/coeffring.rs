//! Exact arithmetic in `Z[i][s^±1, z^±1, a^±1]` with `q = s^2`.
//!
//! Every matrix entry and every invariant produced by the crate lives in this
//! ring. Exponents of `s` are stored doubled relative to `q`, so `q^k` has
//! `s`-exponent `2k` and half-integer powers of `q` are the odd ones.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use crate::Error;

/// A Gaussian integer `re + im·i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussInt {
    pub re: i64,
    pub im: i64,
}

impl GaussInt {
    pub const ZERO: GaussInt = GaussInt { re: 0, im: 0 };
    pub const ONE: GaussInt = GaussInt { re: 1, im: 0 };
    pub const I: GaussInt = GaussInt { re: 0, im: 1 };

    pub const fn new(re: i64, im: i64) -> Self {
        GaussInt { re, im }
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn norm(self) -> i64 {
        self.re * self.re + self.im * self.im
    }

    pub fn conj(self) -> Self {
        GaussInt::new(self.re, -self.im)
    }

    pub fn is_unit(self) -> bool {
        self.norm() == 1
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => GaussInt::new(1, 0),
            1 => GaussInt::new(0, 1),
            2 => GaussInt::new(-1, 0),
            _ => GaussInt::new(0, -1),
        }
    }

    /// Exact quotient, if `other` divides `self` in `Z[i]`.
    pub fn checked_div(self, other: GaussInt) -> Option<GaussInt> {
        let n = other.norm();
        if n == 0 {
            return None;
        }
        let p = self * other.conj();
        if p.re % n == 0 && p.im % n == 0 {
            Some(GaussInt::new(p.re / n, p.im / n))
        } else {
            None
        }
    }
}

impl Add for GaussInt {
    type Output = GaussInt;
    fn add(self, o: GaussInt) -> GaussInt {
        GaussInt::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussInt {
    type Output = GaussInt;
    fn sub(self, o: GaussInt) -> GaussInt {
        GaussInt::new(self.re - o.re, self.im - o.im)
    }
}

impl Neg for GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt::new(-self.re, -self.im)
    }
}

impl Mul for GaussInt {
    type Output = GaussInt;
    fn mul(self, o: GaussInt) -> GaussInt {
        GaussInt::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl From<i64> for GaussInt {
    fn from(v: i64) -> Self {
        GaussInt::new(v, 0)
    }
}

/// Exponent triple `(e_s, e_z, e_a)`; ordered lexicographically.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exp {
    pub s: i32,
    pub z: i32,
    pub a: i32,
}

impl Exp {
    pub const ZERO: Exp = Exp { s: 0, z: 0, a: 0 };

    pub const fn new(s: i32, z: i32, a: i32) -> Self {
        Exp { s, z, a }
    }
}

impl Add for Exp {
    type Output = Exp;
    fn add(self, o: Exp) -> Exp {
        Exp::new(self.s + o.s, self.z + o.z, self.a + o.a)
    }
}

impl Sub for Exp {
    type Output = Exp;
    fn sub(self, o: Exp) -> Exp {
        Exp::new(self.s - o.s, self.z - o.z, self.a - o.a)
    }
}

/// The three Laurent generators of the coefficient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// `s = q^{1/2}`
    S,
    Z,
    A,
}

/// A Laurent polynomial in `s, z, a` with Gaussian-integer coefficients.
///
/// Terms are kept sorted by exponent with no zero coefficients, so structural
/// equality is ring equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RingElem {
    terms: Vec<(Exp, GaussInt)>,
}

impl RingElem {
    pub fn zero() -> Self {
        RingElem { terms: Vec::new() }
    }

    pub fn one() -> Self {
        RingElem::monomial(GaussInt::ONE, Exp::ZERO)
    }

    pub fn int(v: i64) -> Self {
        RingElem::monomial(GaussInt::from(v), Exp::ZERO)
    }

    pub fn gauss(c: GaussInt) -> Self {
        RingElem::monomial(c, Exp::ZERO)
    }

    /// The imaginary unit.
    pub fn iota() -> Self {
        RingElem::gauss(GaussInt::I)
    }

    pub fn monomial(c: GaussInt, e: Exp) -> Self {
        if c.is_zero() {
            RingElem::zero()
        } else {
            RingElem { terms: alloc::vec![(e, c)] }
        }
    }

    /// `q^k`.
    pub fn q_pow(k: i32) -> Self {
        RingElem::s_pow(2 * k)
    }

    /// `s^k = q^{k/2}`.
    pub fn s_pow(k: i32) -> Self {
        RingElem::monomial(GaussInt::ONE, Exp::new(k, 0, 0))
    }

    pub fn z_pow(k: i32) -> Self {
        RingElem::monomial(GaussInt::ONE, Exp::new(0, k, 0))
    }

    pub fn a_pow(k: i32) -> Self {
        RingElem::monomial(GaussInt::ONE, Exp::new(0, 0, k))
    }

    /// `(-1)^k q^e`, a frequent scalar in braiding formulas.
    pub fn signed_q_pow(sign_exp: i64, e: i32) -> Self {
        let c = if sign_exp.rem_euclid(2) == 0 { 1 } else { -1 };
        RingElem::monomial(GaussInt::from(c), Exp::new(2 * e, 0, 0))
    }

    /// Builds an element from arbitrary `(exponent, coefficient)` pairs,
    /// combining duplicates.
    pub fn from_terms<I: IntoIterator<Item = (Exp, GaussInt)>>(it: I) -> Self {
        let mut v: Vec<(Exp, GaussInt)> = it.into_iter().collect();
        normalize(&mut v);
        RingElem { terms: v }
    }

    pub fn terms(&self) -> &[(Exp, GaussInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0] == (Exp::ZERO, GaussInt::ONE)
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lex-leading term, if any.
    pub fn leading(&self) -> Option<(Exp, GaussInt)> {
        self.terms.last().copied()
    }

    /// True for `c · s^i z^j a^k` with `c` a unit of `Z[i]`.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1.is_unit()
    }

    /// Multiplicative inverse of a unit.
    pub fn unit_inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let (e, c) = self.terms[0];
        // c is ±1 or ±i, so its inverse is its conjugate.
        Some(RingElem::monomial(c.conj(), Exp::ZERO - e))
    }

    /// Nonnegative power by repeated squaring; negative powers only for units.
    pub fn pow(&self, k: i64) -> Result<Self, Error> {
        if k < 0 {
            let inv = self.unit_inverse().ok_or(Error::NonUnitSubstitution)?;
            return inv.pow(-k);
        }
        let mut base = self.clone();
        let mut acc = RingElem::one();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, c: GaussInt) -> Self {
        if c.is_zero() {
            return RingElem::zero();
        }
        RingElem { terms: self.terms.iter().map(|&(e, x)| (e, x * c)).collect() }
    }

    /// Multiply by the monomial `s^e.s z^e.z a^e.a`.
    pub fn shift(&self, e: Exp) -> Self {
        RingElem { terms: self.terms.iter().map(|&(x, c)| (x + e, c)).collect() }
    }

    /// The bar involution `s -> s^{-1}` (so `q -> q^{-1}`); `z`, `a`, `i` fixed.
    pub fn bar(&self) -> Self {
        let mut v: Vec<(Exp, GaussInt)> = self
            .terms
            .iter()
            .map(|&(e, c)| (Exp::new(-e.s, e.z, e.a), c))
            .collect();
        v.sort_by_key(|x| x.0);
        RingElem { terms: v }
    }

    /// Substitution homomorphism. Every assigned value must be a unit so that
    /// negative exponents remain defined.
    pub fn specialize(&self, assignments: &BTreeMap<Generator, RingElem>) -> Result<Self, Error> {
        if assignments.is_empty() {
            return Ok(self.clone());
        }
        for v in assignments.values() {
            if !v.is_unit() {
                return Err(Error::NonUnitSubstitution);
            }
        }
        let mut acc = RingElem::zero();
        for &(e, c) in &self.terms {
            let mut t = RingElem::monomial(c, Exp::ZERO);
            for (g, exp) in [(Generator::S, e.s), (Generator::Z, e.z), (Generator::A, e.a)] {
                let factor = match assignments.get(&g) {
                    Some(v) => v.pow(exp as i64)?,
                    None => match g {
                        Generator::S => RingElem::s_pow(exp),
                        Generator::Z => RingElem::z_pow(exp),
                        Generator::A => RingElem::a_pow(exp),
                    },
                };
                t = &t * &factor;
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Exact quotient `self / den`.
    ///
    /// Runs multivariate long division on lex-leading terms. The quotient of an
    /// exact division has its minimum exponent in each variable equal to the
    /// difference of the operands' minima, which bounds the search when the
    /// division is not exact.
    pub fn exact_div(&self, den: &RingElem) -> Result<RingElem, Error> {
        if den.is_zero() {
            return Err(Error::DivisionNotExact);
        }
        if self.is_zero() {
            return Ok(RingElem::zero());
        }
        if den.terms.len() == 1 {
            let (de, dc) = den.terms[0];
            let mut out = Vec::with_capacity(self.terms.len());
            for &(e, c) in &self.terms {
                let q = c.checked_div(dc).ok_or(Error::DivisionNotExact)?;
                out.push((e - de, q));
            }
            return Ok(RingElem { terms: out });
        }
        let lo = min_exps(self) - min_exps(den);
        let (dl_e, dl_c) = den.leading().expect("nonzero");
        let mut rem = self.clone();
        let mut quot: Vec<(Exp, GaussInt)> = Vec::new();
        while let Some((re, rc)) = rem.leading() {
            let qe = re - dl_e;
            if qe.s < lo.s || qe.z < lo.z || qe.a < lo.a {
                return Err(Error::DivisionNotExact);
            }
            let qc = rc.checked_div(dl_c).ok_or(Error::DivisionNotExact)?;
            quot.push((qe, qc));
            let sub = den.shift(qe).scale(qc);
            rem -= &sub;
        }
        quot.reverse();
        Ok(RingElem::from_terms(quot))
    }

    /// Largest `s`-exponent present, if nonzero.
    pub fn max_s(&self) -> Option<i32> {
        self.terms.iter().map(|t| t.0.s).max()
    }

    /// Sum of all terms having the given `z`- and `a`-exponents, as a
    /// polynomial in `s` alone.
    pub fn za_part(&self, z: i32, a: i32) -> RingElem {
        RingElem {
            terms: self.terms.iter().copied().filter(|(e, _)| e.z == z && e.a == a).collect(),
        }
    }
}

fn min_exps(x: &RingElem) -> Exp {
    let mut m = Exp::new(i32::MAX, i32::MAX, i32::MAX);
    for (e, _) in &x.terms {
        m.s = m.s.min(e.s);
        m.z = m.z.min(e.z);
        m.a = m.a.min(e.a);
    }
    m
}

fn normalize(v: &mut Vec<(Exp, GaussInt)>) {
    v.sort_by_key(|x| x.0);
    let mut out: Vec<(Exp, GaussInt)> = Vec::with_capacity(v.len());
    for &(e, c) in v.iter() {
        match out.last_mut() {
            Some(last) if last.0 == e => last.1 = last.1 + c,
            _ => out.push((e, c)),
        }
    }
    out.retain(|t| !t.1.is_zero());
    *v = out;
}

fn merge(x: &[(Exp, GaussInt)], y: &[(Exp, GaussInt)], negate_y: bool) -> Vec<(Exp, GaussInt)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let ord = match (x.get(i), y.get(j)) {
            (Some(a), Some(b)) => a.0.cmp(&b.0),
            (Some(_), None) => Ordering::Less,
            _ => Ordering::Greater,
        };
        match ord {
            Ordering::Less => {
                out.push(x[i]);
                i += 1;
            }
            Ordering::Greater => {
                let c = if negate_y { -y[j].1 } else { y[j].1 };
                out.push((y[j].0, c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_y { x[i].1 - y[j].1 } else { x[i].1 + y[j].1 };
                if !c.is_zero() {
                    out.push((x[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

impl<'a> Add<&'a RingElem> for &'a RingElem {
    type Output = RingElem;
    fn add(self, o: &RingElem) -> RingElem {
        RingElem { terms: merge(&self.terms, &o.terms, false) }
    }
}

impl<'a> Sub<&'a RingElem> for &'a RingElem {
    type Output = RingElem;
    fn sub(self, o: &RingElem) -> RingElem {
        RingElem { terms: merge(&self.terms, &o.terms, true) }
    }
}

impl<'a> Mul<&'a RingElem> for &'a RingElem {
    type Output = RingElem;
    fn mul(self, o: &RingElem) -> RingElem {
        if self.is_zero() || o.is_zero() {
            return RingElem::zero();
        }
        let mut v = Vec::with_capacity(self.terms.len() * o.terms.len());
        for &(e1, c1) in &self.terms {
            for &(e2, c2) in &o.terms {
                v.push((e1 + e2, c1 * c2));
            }
        }
        normalize(&mut v);
        RingElem { terms: v }
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem { terms: self.terms.iter().map(|&(e, c)| (e, -c)).collect() }
    }
}

impl Add for RingElem {
    type Output = RingElem;
    fn add(self, o: RingElem) -> RingElem {
        &self + &o
    }
}

impl Sub for RingElem {
    type Output = RingElem;
    fn sub(self, o: RingElem) -> RingElem {
        &self - &o
    }
}

impl Mul for RingElem {
    type Output = RingElem;
    fn mul(self, o: RingElem) -> RingElem {
        &self * &o
    }
}

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        -&self
    }
}

impl AddAssign<&RingElem> for RingElem {
    fn add_assign(&mut self, o: &RingElem) {
        self.terms = merge(&self.terms, &o.terms, false);
    }
}

impl SubAssign<&RingElem> for RingElem {
    fn sub_assign(&mut self, o: &RingElem) {
        self.terms = merge(&self.terms, &o.terms, true);
    }
}

impl MulAssign<&RingElem> for RingElem {
    fn mul_assign(&mut self, o: &RingElem) {
        *self = &*self * o;
    }
}

impl core::iter::Sum for RingElem {
    fn sum<I: Iterator<Item = RingElem>>(iter: I) -> Self {
        let mut acc = RingElem::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}

impl core::iter::Product for RingElem {
    fn product<I: Iterator<Item = RingElem>>(iter: I) -> Self {
        let mut acc = RingElem::one();
        for x in iter {
            acc = &acc * &x;
        }
        acc
    }
}

/// The balanced quantum integer `[k] = (q^k - q^-k)/(q - q^-1)`.
pub fn qint(k: i64) -> RingElem {
    if k == 0 {
        return RingElem::zero();
    }
    let sign = if k < 0 { -1 } else { 1 };
    let k = k.abs() as i32;
    let terms = (0..k).map(|j| (Exp::new(2 * (k - 1 - 2 * j), 0, 0), GaussInt::from(sign)));
    RingElem::from_terms(terms)
}

/// `[k]! = [k][k-1]...[1]`, with `[0]! = 1`.
pub fn qfact(k: u32) -> RingElem {
    (1..=k as i64).map(qint).product()
}

/// Quantum binomial `[p choose k]` for any integer `p`, defined as
/// `[p][p-1]...[p-k+1] / [k]!`.
pub fn qbinom(p: i64, k: u32) -> RingElem {
    if k == 0 {
        return RingElem::one();
    }
    let num: RingElem = (0..k as i64).map(|j| qint(p - j)).product();
    num.exact_div(&qfact(k)).expect("quantum binomials are Laurent polynomials")
}

impl fmt::Display for RingElem {
    /// Canonical rendering: terms ascending by `(e_s, e_z, e_a)`, real part
    /// before imaginary part, joined by `" + "`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for &(e, c) in &self.terms {
            for (val, imag) in [(c.re, false), (c.im, true)] {
                if val == 0 {
                    continue;
                }
                if !first {
                    f.write_str(" + ")?;
                }
                first = false;
                write!(f, "{}", val)?;
                if imag {
                    f.write_str("*I")?;
                }
                if e.s != 0 {
                    if e.s % 2 == 0 {
                        write!(f, "*q^({})", e.s / 2)?;
                    } else {
                        write!(f, "*q^({}/2)", e.s)?;
                    }
                }
                if e.z != 0 {
                    write!(f, "*z^{}", e.z)?;
                }
                if e.a != 0 {
                    write!(f, "*a^{}", e.a)?;
                }
            }
        }
        Ok(())
    }
}

impl FromStr for RingElem {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self, Error> {
        let text = text.trim();
        if text == "0" {
            return Ok(RingElem::zero());
        }
        let bad = || Error::Parse(String::from(text));
        let mut acc = RingElem::zero();
        for term in text.split(" + ") {
            let mut parts = term.trim().split('*');
            let coeff: i64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let mut c = GaussInt::from(coeff);
            let mut e = Exp::ZERO;
            for p in parts {
                if p == "I" || p == "I^1" {
                    c = c * GaussInt::I;
                } else if let Some(rest) = p.strip_prefix("q^") {
                    let inner = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
                    e.s += match inner.strip_suffix("/2") {
                        Some(num) => num.parse::<i32>().map_err(|_| bad())?,
                        None => 2 * inner.parse::<i32>().map_err(|_| bad())?,
                    };
                } else if let Some(rest) = p.strip_prefix("z^") {
                    e.z += parse_exp(rest).ok_or_else(bad)?;
                } else if let Some(rest) = p.strip_prefix("a^") {
                    e.a += parse_exp(rest).ok_or_else(bad)?;
                } else {
                    return Err(bad());
                }
            }
            acc += &RingElem::monomial(c, e);
        }
        Ok(acc)
    }
}

fn parse_exp(s: &str) -> Option<i32> {
    let inner = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(s);
    inner.parse().ok()
}
