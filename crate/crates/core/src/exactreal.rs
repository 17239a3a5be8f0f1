//! Exact arithmetic in the rational span of square roots of integers.
//!
//! A [`SurdReal`] is `q_0 + Σ q_k √k` with rational `q_k` and distinct
//! square-free radicands `k ≥ 2`. The square roots of distinct square-free
//! integers are linearly independent over `Q`, so the representation is unique,
//! equality is structural, and every nonzero value has a decidable sign. Signs
//! and floors are computed by refining dyadic enclosures.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Environment variable overriding the default precision cap in bits.
pub const PRECISION_CAP_ENV: &str = "STURMIAN_PRECISION_CAP";

const DEFAULT_START_BITS: u32 = 64;
const DEFAULT_CAP_BITS: u32 = 16384;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactRealError {
    #[error("cannot parse surd literal {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("precision cap of {cap} bits exhausted before the value was resolved")]
    PrecisionExhausted { cap: u32 },
    #[error("division by a non-rational quantity is not supported")]
    DivisionBySurd,
    #[error("division by zero")]
    DivisionByZero,
    #[error("radicand {0} is out of range")]
    RadicandOutOfRange(String),
}

/// Bounds of the refinement ladder: the first rung and the largest allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    pub start_bits: u32,
    pub cap_bits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        static CAP: OnceLock<u32> = OnceLock::new();
        let cap = *CAP.get_or_init(|| {
            std::env::var(PRECISION_CAP_ENV)
                .ok()
                .and_then(|s| s.trim().parse().ok())
                .unwrap_or(DEFAULT_CAP_BITS)
        });
        Precision {
            start_bits: DEFAULT_START_BITS.min(cap.max(1)),
            cap_bits: cap,
        }
    }
}

/// An element of `Q(√2, √3, √5, ...)` lying in the rational span of square roots.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SurdReal {
    rational: BigRational,
    /// Square-free radicand -> nonzero coefficient.
    terms: BTreeMap<u64, BigRational>,
}

impl SurdReal {
    pub fn zero() -> Self {
        SurdReal {
            rational: BigRational::zero(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        SurdReal {
            rational: q,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `√k` for a nonnegative integer `k`.
    pub fn sqrt_of(k: u64) -> Self {
        let (s, f) = square_free_split(k);
        let c = BigRational::from_integer(BigInt::from(s));
        Self::term(f, c)
    }

    /// `√q` for a nonnegative rational `q`.
    pub fn sqrt_rational(q: &BigRational) -> Result<Self, ExactRealError> {
        if q.is_negative() {
            return Err(ExactRealError::RadicandOutOfRange(q.to_string()));
        }
        // √(p/r) = √(p r) / r
        let prod = q.numer() * q.denom();
        let k = prod
            .to_u64()
            .ok_or_else(|| ExactRealError::RadicandOutOfRange(q.to_string()))?;
        let root = Self::sqrt_of(k);
        Ok(root.scale(&BigRational::new(BigInt::one(), q.denom().clone())))
    }

    fn term(radicand: u64, coeff: BigRational) -> Self {
        let mut x = Self::zero();
        x.add_term(radicand, coeff);
        x
    }

    fn add_term(&mut self, radicand: u64, coeff: BigRational) {
        if coeff.is_zero() || radicand == 0 {
            return;
        }
        if radicand == 1 {
            self.rational += coeff;
            return;
        }
        let entry = self.terms.entry(radicand).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&radicand);
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    /// Radicand/coefficient pairs of the irrational part, by increasing radicand.
    pub fn surd_terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn radicands(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms.keys().copied()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.rational.is_zero()
    }

    /// Coordinates in the basis `(1, √k_1, ..., √k_m)`.
    pub fn coordinates(&self, radicands: &[u64]) -> Vec<BigRational> {
        let mut v = vec![self.rational.clone()];
        v.extend(
            radicands
                .iter()
                .map(|k| self.terms.get(k).cloned().unwrap_or_else(BigRational::zero)),
        );
        v
    }

    pub fn from_coordinates(radicands: &[u64], coords: &[BigRational]) -> Self {
        let mut x = Self::from_rational(coords[0].clone());
        for (k, c) in radicands.iter().zip(&coords[1..]) {
            x.add_term(*k, c.clone());
        }
        x
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        SurdReal {
            rational: &self.rational * q,
            terms: self.terms.iter().map(|(k, c)| (*k, c * q)).collect(),
        }
    }

    pub fn mul_int(&self, n: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(n)))
    }

    /// Product of two surds; `√a √b` is reduced to `s √f`.
    pub fn checked_mul(&self, other: &SurdReal) -> Result<Self, ExactRealError> {
        let mut out = Self::zero();
        let lhs = self.all_terms();
        let rhs = other.all_terms();
        for (a, ca) in &lhs {
            for (b, cb) in &rhs {
                let prod = a
                    .checked_mul(*b)
                    .ok_or_else(|| ExactRealError::RadicandOutOfRange(format!("{}*{}", a, b)))?;
                let (s, f) = square_free_split(prod);
                out.add_term(f, ca * cb * BigRational::from_integer(BigInt::from(s)));
            }
        }
        Ok(out)
    }

    pub fn checked_div(&self, other: &SurdReal) -> Result<Self, ExactRealError> {
        if !other.is_rational() {
            return Err(ExactRealError::DivisionBySurd);
        }
        if other.rational.is_zero() {
            return Err(ExactRealError::DivisionByZero);
        }
        Ok(self.scale(&other.rational.recip()))
    }

    fn all_terms(&self) -> Vec<(u64, BigRational)> {
        let mut v = Vec::new();
        if !self.rational.is_zero() {
            v.push((1, self.rational.clone()));
        }
        v.extend(self.terms.iter().map(|(k, c)| (*k, c.clone())));
        v
    }

    /// A dyadic enclosure `lo <= self <= hi` of width at most `Σ|q_k| 2^-bits`.
    pub fn enclosure(&self, bits: u32) -> (BigRational, BigRational) {
        let mut lo = self.rational.clone();
        let mut hi = self.rational.clone();
        let scale = BigInt::one() << bits;
        for (k, c) in &self.terms {
            let s = BigInt::from((BigUint::from(*k) << (2 * bits as usize)).sqrt());
            let a = BigRational::new(s.clone(), scale.clone());
            let b = BigRational::new(s + 1, scale.clone());
            if c.is_positive() {
                lo += c * &a;
                hi += c * &b;
            } else {
                lo += c * &b;
                hi += c * &a;
            }
        }
        (lo, hi)
    }

    pub fn signum(&self) -> Result<Ordering, ExactRealError> {
        self.signum_with(Precision::default())
    }

    pub fn signum_with(&self, prec: Precision) -> Result<Ordering, ExactRealError> {
        if self.terms.is_empty() {
            return Ok(self.rational.cmp(&BigRational::zero()));
        }
        let zero = BigRational::zero();
        let mut bits = prec.start_bits.max(1);
        loop {
            let (lo, hi) = self.enclosure(bits);
            if lo > zero {
                return Ok(Ordering::Greater);
            }
            if hi < zero {
                return Ok(Ordering::Less);
            }
            if bits >= prec.cap_bits {
                return Err(ExactRealError::PrecisionExhausted {
                    cap: prec.cap_bits,
                });
            }
            bits = (bits * 2).min(prec.cap_bits);
        }
    }

    pub fn compare(&self, other: &SurdReal) -> Result<Ordering, ExactRealError> {
        (self - other).signum()
    }

    pub fn floor(&self) -> Result<BigInt, ExactRealError> {
        self.floor_with(Precision::default())
    }

    pub fn floor_with(&self, prec: Precision) -> Result<BigInt, ExactRealError> {
        if self.terms.is_empty() {
            return Ok(self.rational.floor().to_integer());
        }
        // the value is irrational, so a bracket inside [k, k+1) exists
        let mut bits = prec.start_bits.max(1);
        loop {
            let (lo, hi) = self.enclosure(bits);
            let fl = lo.floor().to_integer();
            if fl == hi.floor().to_integer() {
                return Ok(fl);
            }
            if bits >= prec.cap_bits {
                return Err(ExactRealError::PrecisionExhausted {
                    cap: prec.cap_bits,
                });
            }
            bits = (bits * 2).min(prec.cap_bits);
        }
    }

    pub fn ceil(&self) -> Result<BigInt, ExactRealError> {
        Ok(-(-self).floor()?)
    }

    /// `self - floor(self)`, in `[0, 1)`.
    pub fn fract(&self) -> Result<SurdReal, ExactRealError> {
        let f = self.floor()?;
        Ok(self - &SurdReal::from_rational(BigRational::from_integer(f)))
    }

    /// A nearby `f64`, for display and plotting only.
    pub fn to_f64_approx(&self) -> f64 {
        let (lo, hi) = self.enclosure(64);
        let mid = (lo + hi) / BigRational::from_integer(BigInt::from(2));
        mid.numer().to_f64().unwrap_or(f64::NAN) / mid.denom().to_f64().unwrap_or(f64::NAN)
    }

    pub fn parse(input: &str) -> Result<Self, ExactRealError> {
        Parser::new(input).parse_all()
    }
}

impl fmt::Debug for SurdReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for SurdReal {
    /// Canonical literal, re-readable by [`SurdReal::parse`], e.g. `-4 + sqrt(19)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if !self.rational.is_zero() || self.terms.is_empty() {
            write!(f, "{}", self.rational)?;
            first = false;
        }
        for (k, c) in &self.terms {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            first = false;
            if mag.is_one() {
                write!(f, "sqrt({})", k)?;
            } else {
                write!(f, "{}*sqrt({})", mag, k)?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a SurdReal> for &'a SurdReal {
    type Output = SurdReal;
    fn add(self, o: &SurdReal) -> SurdReal {
        let mut out = self.clone();
        out.rational += &o.rational;
        for (k, c) in &o.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a SurdReal> for &'a SurdReal {
    type Output = SurdReal;
    fn sub(self, o: &SurdReal) -> SurdReal {
        self + &(-o)
    }
}

impl Add for SurdReal {
    type Output = SurdReal;
    fn add(self, o: SurdReal) -> SurdReal {
        &self + &o
    }
}

impl Sub for SurdReal {
    type Output = SurdReal;
    fn sub(self, o: SurdReal) -> SurdReal {
        &self - &o
    }
}

impl Neg for &SurdReal {
    type Output = SurdReal;
    fn neg(self) -> SurdReal {
        SurdReal {
            rational: -&self.rational,
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Neg for SurdReal {
    type Output = SurdReal;
    fn neg(self) -> SurdReal {
        -&self
    }
}

impl std::str::FromStr for SurdReal {
    type Err = ExactRealError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SurdReal::parse(s)
    }
}

/// Splits `k = s^2 f` with `f` square-free; returns `(s, f)`.
pub fn square_free_split(k: u64) -> (u64, u64) {
    if k == 0 {
        return (0, 0);
    }
    let mut s = 1u64;
    let mut f = 1u64;
    let mut m = k;
    let mut p = 2u64;
    // after removing primes up to the cube root, the cofactor is 1, q, q r or q^2
    while p.saturating_mul(p).saturating_mul(p) <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            s *= p.pow(e / 2);
            if e % 2 == 1 {
                f *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let r = m.sqrt();
    if r > 1 && r * r == m {
        s *= r;
    } else {
        f *= m;
    }
    (s, f)
}

struct Parser<'a> {
    input: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Parser {
            input,
            chars: input.chars().collect(),
            pos: 0,
        }
    }

    fn err(&self, reason: impl Into<String>) -> ExactRealError {
        ExactRealError::Parse {
            input: self.input.to_string(),
            reason: reason.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<SurdReal, ExactRealError> {
        let v = self.expr()?;
        if self.peek().is_some() {
            return Err(self.err(format!("unexpected character at position {}", self.pos)));
        }
        Ok(v)
    }

    fn expr(&mut self) -> Result<SurdReal, ExactRealError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                '-' | '−' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<SurdReal, ExactRealError> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                '*' | '·' => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = acc.checked_mul(&rhs)?;
                }
                '/' => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = acc.checked_div(&rhs)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<SurdReal, ExactRealError> {
        match self.peek() {
            Some('-') | Some('−') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<SurdReal, ExactRealError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some('√') => {
                self.pos += 1;
                let arg = if self.peek() == Some('(') {
                    self.primary()?
                } else {
                    self.number()?
                };
                self.sqrt_of(arg)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                if name != "sqrt" {
                    return Err(self.err(format!("unknown function {:?}", name)));
                }
                self.expect('(')?;
                let arg = self.expr()?;
                self.expect(')')?;
                self.sqrt_of(arg)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) => Err(self.err(format!("unexpected character {:?}", c))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn sqrt_of(&self, arg: SurdReal) -> Result<SurdReal, ExactRealError> {
        if !arg.is_rational() {
            return Err(self.err("nested square roots are not supported"));
        }
        SurdReal::sqrt_rational(arg.rational_part())
            .map_err(|_| self.err("square root of a negative or oversized number"))
    }

    fn expect(&mut self, c: char) -> Result<(), ExactRealError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {:?}", c)))
        }
    }

    fn number(&mut self) -> Result<SurdReal, ExactRealError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_ascii_digit() || self.chars[self.pos] == '.')
        {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        let (int, frac) = match text.split_once('.') {
            Some((a, b)) => (a, b),
            None => (text.as_str(), ""),
        };
        if (int.is_empty() && frac.is_empty()) || frac.contains('.') {
            return Err(self.err(format!("malformed number {:?}", text)));
        }
        let digits = format!("{}{}", int, frac);
        let num: BigInt = digits
            .parse()
            .map_err(|_| self.err(format!("malformed number {:?}", text)))?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        Ok(SurdReal::from_rational(BigRational::new(num, den)))
    }
}

/// The union of radicands over several values, sorted.
pub fn common_radicands<'a>(values: impl IntoIterator<Item = &'a SurdReal>) -> Vec<u64> {
    let mut ks: Vec<u64> = values.into_iter().flat_map(|v| v.radicands()).collect();
    ks.sort_unstable();
    ks.dedup();
    ks
}

/// Outcome of the total irrationality test for `(1, α_1, ..., α_d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Irrationality {
    Proven,
    /// Integer coefficients `(c_0, c_1, ..., c_d)` with `c_0 + Σ c_i α_i = 0`.
    Refuted { relation: Vec<BigInt> },
}

impl Irrationality {
    pub fn is_proven(&self) -> bool {
        matches!(self, Irrationality::Proven)
    }
}

/// Renders a relation `(c_0, ..., c_d)` as e.g. `2·α₁ − 1 = 0`.
pub fn describe_relation(relation: &[BigInt]) -> String {
    fn sub(i: usize) -> String {
        const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
        i.to_string()
            .chars()
            .map(|c| DIGITS[c.to_digit(10).unwrap() as usize])
            .collect()
    }
    let mut s = String::new();
    let mut order: Vec<usize> = (1..relation.len()).collect();
    order.push(0);
    for i in order {
        let c = &relation[i];
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if s.is_empty() {
            if c.is_negative() {
                s.push('−');
            }
        } else {
            s.push_str(if c.is_negative() { " − " } else { " + " });
        }
        if i == 0 {
            s.push_str(&mag.to_string());
        } else if mag.is_one() {
            s.push_str(&format!("α{}", sub(i)));
        } else {
            s.push_str(&format!("{}·α{}", mag, sub(i)));
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s.push_str(" = 0");
    s
}

/// Decides whether `1, α_1, ..., α_d` are linearly independent over `Q`.
///
/// On failure the returned relation has coprime integer coefficients and its
/// first nonzero `α` coefficient is positive.
pub fn is_totally_irrational(alpha: &[SurdReal]) -> Irrationality {
    let ks = common_radicands(alpha);
    let mut rows = vec![SurdReal::one().coordinates(&ks)];
    rows.extend(alpha.iter().map(|a| a.coordinates(&ks)));
    match left_null_vector(&rows) {
        None => Irrationality::Proven,
        Some(v) => {
            let mut rel = integer_normalize(&v);
            let lead = rel[1..].iter().find(|c| !c.is_zero()).or(rel.first());
            if lead.is_some_and(|c| c.is_negative()) {
                rel.iter_mut().for_each(|c| *c = -c.clone());
            }
            Irrationality::Refuted { relation: rel }
        }
    }
}

/// Clears denominators and divides out the content.
pub fn integer_normalize(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|q| (q * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// A nonzero `v` with `Σ v_i rows_i = 0`, if the rows are dependent.
pub fn left_null_vector(rows: &[Vec<BigRational>]) -> Option<Vec<BigRational>> {
    let n = rows.len();
    let cols = rows.first().map_or(0, |r| r.len());
    // columns of the transpose are the rows; solve M^T v = 0
    let mut t: Vec<Vec<BigRational>> = (0..cols)
        .map(|j| (0..n).map(|i| rows[i][j].clone()).collect())
        .collect();
    let pivots = rref(&mut t);
    let free = (0..n).find(|c| !pivots.contains(c))?;
    let mut v = vec![BigRational::zero(); n];
    v[free] = BigRational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -t[r][free].clone();
    }
    Some(v)
}

/// Solves `Σ x_i rows_i = target` for rational `x`, if possible.
pub fn solve_combination(
    rows: &[Vec<BigRational>],
    target: &[BigRational],
) -> Option<Vec<BigRational>> {
    let n = rows.len();
    let cols = target.len();
    let mut aug: Vec<Vec<BigRational>> = (0..cols)
        .map(|j| {
            let mut r: Vec<BigRational> = (0..n).map(|i| rows[i][j].clone()).collect();
            r.push(target[j].clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][n].clone();
    }
    Some(x)
}

const FIX_BITS: u32 = 64;

/// A common frame `(1, √k_1, ..., √k_m) / D` for a family of surds, with
/// coordinates stored as `i128` so that hot loops avoid big integers.
///
/// Every decision is certified: fast enclosures use floor square roots at 64
/// fractional bits, and inconclusive cases fall back to [`SurdReal`] refinement.
#[derive(Debug, Clone)]
pub struct LinearFrame {
    radicands: Vec<u64>,
    denom: i128,
    /// `floor(√k · 2^64)`.
    roots: Vec<i128>,
    precision: Precision,
}

impl LinearFrame {
    /// Builds a frame and the integer coordinates of `values`, or `None`
    /// when the coordinates do not fit comfortably in `i128`.
    pub fn new(values: &[SurdReal], precision: Precision) -> Option<(LinearFrame, Vec<Vec<i128>>)> {
        let radicands = common_radicands(values);
        if radicands.iter().any(|&k| k >= 1 << 60) {
            return None;
        }
        let coords: Vec<Vec<BigRational>> = values.iter().map(|v| v.coordinates(&radicands)).collect();
        let denom = coords
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let limit = BigInt::one() << 40;
        if denom > limit {
            return None;
        }
        let mut ints = Vec::with_capacity(values.len());
        for row in &coords {
            let mut r = Vec::with_capacity(row.len());
            for q in row {
                let v = (q * BigRational::from_integer(denom.clone())).to_integer();
                if v.abs() > limit {
                    return None;
                }
                r.push(v.to_i128()?);
            }
            ints.push(r);
        }
        let roots = radicands
            .iter()
            .map(|&k| ((BigUint::from(k) << (2 * FIX_BITS as usize)).sqrt()).to_i128())
            .collect::<Option<Vec<_>>>()?;
        Some((
            LinearFrame {
                radicands,
                denom: denom.to_i128()?,
                roots,
                precision,
            },
            ints,
        ))
    }

    pub fn radicands(&self) -> &[u64] {
        &self.radicands
    }

    pub fn denom(&self) -> i128 {
        self.denom
    }

    pub fn to_surd(&self, v: &[i128]) -> SurdReal {
        let d = BigInt::from(self.denom);
        let coords: Vec<BigRational> = v
            .iter()
            .map(|&c| BigRational::new(BigInt::from(c), d.clone()))
            .collect();
        SurdReal::from_coordinates(&self.radicands, &coords)
    }

    /// `(N, E)` with `value · D · 2^64 ∈ [N - E, N + E]`.
    fn scaled(&self, v: &[i128]) -> Option<(i128, i128)> {
        let mut n = v[0].checked_mul(1i128 << FIX_BITS)?;
        let mut e = 0i128;
        for (c, r) in v[1..].iter().zip(&self.roots) {
            n = n.checked_add(c.checked_mul(*r)?)?;
            e = e.checked_add(c.abs())?;
        }
        Some((n, e))
    }

    pub fn signum(&self, v: &[i128]) -> Result<Ordering, ExactRealError> {
        if v[1..].iter().all(|&c| c == 0) {
            return Ok(v[0].cmp(&0));
        }
        if let Some((n, e)) = self.scaled(v) {
            if n.checked_sub(e).is_some_and(|lo| lo > 0) {
                return Ok(Ordering::Greater);
            }
            if n.checked_add(e).is_some_and(|hi| hi < 0) {
                return Ok(Ordering::Less);
            }
        }
        self.to_surd(v).signum_with(self.precision)
    }

    pub fn floor(&self, v: &[i128]) -> Result<i128, ExactRealError> {
        if v[1..].iter().all(|&c| c == 0) {
            return Ok(v[0].div_euclid(self.denom));
        }
        if let (Some((n, e)), Some(scale)) = (self.scaled(v), self.denom.checked_mul(1i128 << FIX_BITS)) {
            if let (Some(lo), Some(hi)) = (n.checked_sub(e), n.checked_add(e)) {
                let (fl, fh) = (lo.div_euclid(scale), hi.div_euclid(scale));
                if fl == fh {
                    return Ok(fl);
                }
            }
        }
        let f = self.to_surd(v).floor_with(self.precision)?;
        f.to_i128().ok_or(ExactRealError::PrecisionExhausted {
            cap: self.precision.cap_bits,
        })
    }
}

/// Helper for tests and oracles: `BigRational` from a pair of integers.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl From<i64> for SurdReal {
    fn from(n: i64) -> Self {
        SurdReal::from_integer(n)
    }
}

impl From<BigRational> for SurdReal {
    fn from(q: BigRational) -> Self {
        SurdReal::from_rational(q)
    }
}

/// Sign of a `BigInt` as an ordering against zero.
pub fn bigint_sign(x: &BigInt) -> Ordering {
    match x.sign() {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> SurdReal {
        SurdReal::parse(x).unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(s("sqrt(3)-1").to_string(), "-1 + sqrt(3)");
        assert_eq!(s("-4 + 1*sqrt(19)"), s("sqrt(19) - 4"));
        assert_eq!(s("sqrt(8)"), s("2*sqrt(2)"));
        assert_eq!(s("sqrt(4)"), SurdReal::from_integer(2));
        assert_eq!(s("(sqrt(5)-1)/2").to_string(), "-1/2 + 1/2*sqrt(5)");
        assert_eq!(s("sqrt(2)/2"), s("sqrt(1/2)"));
        assert_eq!(s("0.25"), SurdReal::from_ratio(1, 4));
        assert!(SurdReal::parse("sqrt(2").is_err());
        assert!(SurdReal::parse("1/sqrt(2)").is_err());
        assert!(SurdReal::parse("cbrt(2)").is_err());
    }

    #[test]
    fn products_reduce() {
        let a = s("sqrt(2)");
        let b = s("sqrt(6)");
        assert_eq!(a.checked_mul(&b).unwrap(), s("2*sqrt(3)"));
        let c = s("1 + sqrt(2)");
        assert_eq!(c.checked_mul(&c).unwrap(), s("3 + 2*sqrt(2)"));
    }

    #[test]
    fn floors_and_signs() {
        assert_eq!(s("sqrt(2)").floor().unwrap(), BigInt::from(1));
        assert_eq!(s("-sqrt(2)").floor().unwrap(), BigInt::from(-2));
        assert_eq!(s("-sqrt(2)").ceil().unwrap(), BigInt::from(-1));
        assert_eq!(s("sqrt(19) - 4").floor().unwrap(), BigInt::from(0));
        assert_eq!(s("7/2").floor().unwrap(), BigInt::from(3));
        assert_eq!(s("-7/2").ceil().unwrap(), BigInt::from(-3));
        // sqrt(2) + sqrt(3) - sqrt(10) ≈ -0.016
        assert_eq!(s("sqrt(2)+sqrt(3)-sqrt(10)").signum().unwrap(), Ordering::Less);
        // 99/70 approximates sqrt(2) from above to about 7e-5
        assert_eq!(s("sqrt(2) - 99/70").signum().unwrap(), Ordering::Less);
    }

    #[test]
    fn precision_cap_is_reported() {
        // 665857/470832 matches sqrt(2) to about 1.6e-12
        let x = s("sqrt(2) - 665857/470832");
        let tight = Precision {
            start_bits: 8,
            cap_bits: 16,
        };
        assert!(matches!(
            x.signum_with(tight),
            Err(ExactRealError::PrecisionExhausted { cap: 16 })
        ));
        assert_eq!(x.signum().unwrap(), Ordering::Less);
    }

    #[test]
    fn irrationality_certificates() {
        assert!(is_totally_irrational(&[s("sqrt(3)-1"), s("sqrt(2)-1")]).is_proven());
        assert!(is_totally_irrational(&[s("sqrt(2)/2"), s("sqrt(19)-4")]).is_proven());
        match is_totally_irrational(&[s("1/2"), s("sqrt(2)-1")]) {
            Irrationality::Refuted { relation } => {
                assert_eq!(describe_relation(&relation), "2·α₁ − 1 = 0");
            }
            _ => panic!("expected a relation"),
        }
        match is_totally_irrational(&[s("sqrt(2)-1"), s("2-sqrt(2)")]) {
            Irrationality::Refuted { relation } => {
                assert_eq!(describe_relation(&relation), "α₁ + α₂ − 1 = 0");
            }
            _ => panic!("expected a relation"),
        }
    }

    #[test]
    fn square_free() {
        assert_eq!(square_free_split(72), (6, 2));
        assert_eq!(square_free_split(49), (7, 1));
        assert_eq!(square_free_split(1_000_003 * 1_000_003), (1_000_003, 1));
        assert_eq!(square_free_split(999_983 * 1_000_003), (1, 999_983 * 1_000_003));
        assert_eq!(square_free_split(19), (1, 19));
    }

    #[test]
    fn frame_matches_exact_floor() {
        let vals = [s("sqrt(2)/2"), s("sqrt(19)-4"), s("1/3 + sqrt(5)")];
        let (frame, coords) = LinearFrame::new(&vals, Precision::default()).unwrap();
        for (v, c) in vals.iter().zip(&coords) {
            assert_eq!(frame.to_surd(c), *v);
            assert_eq!(BigInt::from(frame.floor(c).unwrap()), v.floor().unwrap());
        }
    }
}
