//! Codings of `Z^d`-rotations: the configurations `c_α`, `c'_α` and their
//! pattern intervals on the circle.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::exactreal::{
    describe_relation, is_totally_irrational, solve_combination, common_radicands,
    Irrationality, LinearFrame, Precision, SurdReal,
};
use crate::lattice::{Pattern, Point, Support, Symbol};
use crate::pairs::{Configuration, Grid};

/// Which of the two codings: `⌊·⌋` (windows `[a,b)`) or `⌈·⌉` (windows `(a,b]`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Lower,
    Upper,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Lower => "lower",
            Side::Upper => "upper",
        })
    }
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lower" => Ok(Side::Lower),
            "upper" => Ok(Side::Upper),
            _ => Err(Error::InvalidArgument(format!("unknown side {:?}", s))),
        }
    }
}

/// How the total irrationality of a slope is known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certification {
    /// Decided by the rank test.
    Proven,
    /// Accepted on the caller's word; results built on it are watermarked.
    Asserted,
}

/// A slope `α ∈ [0,1)^d` with pairwise distinct entries.
#[derive(Clone, PartialEq, Eq)]
pub struct SlopeVector {
    entries: Vec<SurdReal>,
    certification: Certification,
}

impl SlopeVector {
    /// Accepts the slope only if `1, α_1, ..., α_d` are proven independent.
    pub fn new(entries: Vec<SurdReal>) -> Result<Self> {
        Self::validate(&entries)?;
        match is_totally_irrational(&entries) {
            Irrationality::Proven => Ok(SlopeVector {
                entries,
                certification: Certification::Proven,
            }),
            Irrationality::Refuted { relation } => Err(Error::NotTotallyIrrational {
                relation: describe_relation(&relation),
            }),
        }
    }

    /// Skips the irrationality proof. Range and distinctness are still checked.
    pub fn asserted(entries: Vec<SurdReal>) -> Result<Self> {
        Self::validate(&entries)?;
        let certification = if is_totally_irrational(&entries).is_proven() {
            Certification::Proven
        } else {
            Certification::Asserted
        };
        Ok(SlopeVector {
            entries,
            certification,
        })
    }

    /// Parses a comma separated list of surd literals.
    pub fn parse_entries(list: &str) -> Result<Vec<SurdReal>> {
        list.split(',')
            .map(|t| SurdReal::parse(t.trim()).map_err(Error::from))
            .collect()
    }

    fn validate(entries: &[SurdReal]) -> Result<()> {
        if entries.is_empty() {
            return Err(Error::DegenerateSlope("empty slope".into()));
        }
        let one = SurdReal::one();
        for (i, a) in entries.iter().enumerate() {
            if a.signum()? == Ordering::Less || a.compare(&one)? != Ordering::Less {
                return Err(Error::DegenerateSlope(format!(
                    "entry {} = {} is outside [0,1)",
                    i + 1,
                    a
                )));
            }
            if entries[..i].contains(a) {
                return Err(Error::DegenerateSlope(format!(
                    "entry {} = {} is repeated",
                    i + 1,
                    a
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[SurdReal] {
        &self.entries
    }

    pub fn certification(&self) -> &Certification {
        &self.certification
    }

    pub fn is_proven(&self) -> bool {
        self.certification == Certification::Proven
    }

    /// Indices sorted so that `α_{τ(1)} > ... > α_{τ(d)}` (0-based).
    pub fn descending_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.dim()).collect();
        idx.sort_by(|&i, &j| {
            self.entries[j]
                .compare(&self.entries[i])
                .expect("distinct surds are comparable")
        });
        idx
    }

    pub fn is_ordered(&self) -> bool {
        self.descending_order().iter().enumerate().all(|(k, &i)| k == i)
    }

    /// `n · α`.
    pub fn dot(&self, n: &Point) -> SurdReal {
        let mut acc = SurdReal::zero();
        for (a, &k) in self.entries.iter().zip(n.coords()) {
            if k != 0 {
                acc = &acc + &a.mul_int(k);
            }
        }
        acc
    }

    /// The slope `(α_2, ..., α_d)`.
    pub fn tail(&self) -> Result<SlopeVector> {
        if self.dim() < 2 {
            return Err(Error::InvalidArgument("slope of dimension 1 has no tail".into()));
        }
        let entries = self.entries[1..].to_vec();
        match self.certification {
            Certification::Proven => SlopeVector::new(entries),
            Certification::Asserted => SlopeVector::asserted(entries),
        }
    }
}

impl fmt::Debug for SlopeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for SlopeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// The windows `W_0, ..., W_d` partitioning `[0, 1)`.
#[derive(Debug, Clone)]
pub struct WindowPartition {
    /// `τ`, 0-based.
    pub order: Vec<usize>,
    /// `0 = b_0 ≤ b_1 ≤ ... ≤ b_{d+1} = 1` with `b_i = 1 - α_{τ(i)}`.
    pub boundaries: Vec<SurdReal>,
}

impl WindowPartition {
    pub fn new(slope: &SlopeVector) -> Self {
        let order = slope.descending_order();
        let one = SurdReal::one();
        let mut boundaries = vec![SurdReal::zero()];
        boundaries.extend(order.iter().map(|&i| &one - &slope.entries[i]));
        boundaries.push(one);
        WindowPartition { order, boundaries }
    }

    pub fn len(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Start and length of `W_i`.
    pub fn window(&self, i: usize) -> (SurdReal, SurdReal) {
        let a = self.boundaries[i].clone();
        let len = &self.boundaries[i + 1] - &a;
        (a, len)
    }

    /// The index `i` with `x ∈ W_i` (lower) or `x ∈ W'_i` (upper), for `x ∈ [0,1)`.
    pub fn cell_of(&self, x: &SurdReal, side: Side) -> Result<Symbol> {
        let d = self.len() - 1;
        let inner = &self.boundaries[1..=d];
        let mut count = 0;
        for b in inner {
            let c = x.compare(b)?;
            let hit = match side {
                Side::Lower => c != Ordering::Less,
                Side::Upper => c == Ordering::Greater,
            };
            if hit {
                count += 1;
            }
        }
        if side == Side::Upper && x.is_zero() {
            // 0 is identified with 1, the right end of W'_d
            return Ok(d as Symbol);
        }
        Ok(count as Symbol)
    }
}

/// Integer coordinates of `α` and `ρ` in a common surd frame.
#[derive(Debug, Clone)]
struct FastEval {
    frame: LinearFrame,
    alpha: Vec<Vec<i128>>,
    rho: Vec<i128>,
}

type Coords = SmallVec<[i128; 6]>;

impl FastEval {
    fn position(&self, n: &Point) -> Option<Coords> {
        let mut t: Coords = self.rho.iter().copied().collect();
        for (row, &k) in self.alpha.iter().zip(n.coords()) {
            if k == 0 {
                continue;
            }
            let k = k as i128;
            for (tj, aj) in t.iter_mut().zip(row) {
                *tj = tj.checked_add(aj.checked_mul(k)?)?;
            }
        }
        Some(t)
    }

    fn symbol(&self, t: &[i128], side: Side) -> Option<Result<Symbol>> {
        let mut buf: Coords = t.iter().copied().collect();
        let base = match self.rounded(&buf, side) {
            Ok(v) => v,
            Err(e) => return Some(Err(e)),
        };
        let mut count = 0i128;
        for row in &self.alpha {
            for (b, (tj, aj)) in buf.iter_mut().zip(t.iter().zip(row)) {
                *b = tj.checked_add(*aj)?;
            }
            match self.rounded(&buf, side) {
                Ok(v) => count += v - base,
                Err(e) => return Some(Err(e)),
            }
        }
        Some(Ok(count as Symbol))
    }

    fn rounded(&self, v: &[i128], side: Side) -> Result<i128> {
        match side {
            Side::Lower => Ok(self.frame.floor(v)?),
            Side::Upper => {
                let neg: Coords = v.iter().map(|x| -x).collect();
                Ok(-self.frame.floor(&neg)?)
            }
        }
    }
}

/// The configuration `n ↦ Σ_i (⌊α_i + n·α + ρ⌋ - ⌊n·α + ρ⌋)` or its ceiling twin.
#[derive(Clone)]
pub struct SturmianConfig {
    slope: Arc<SlopeVector>,
    intercept: SurdReal,
    side: Side,
    fast: Option<FastEval>,
}

impl SturmianConfig {
    pub fn new(slope: SlopeVector, intercept: SurdReal, side: Side) -> Self {
        Self::with_shared(Arc::new(slope), intercept, side)
    }

    /// `c_α` (lower) or `c'_α` (upper), with intercept 0.
    pub fn characteristic(slope: SlopeVector, side: Side) -> Self {
        Self::new(slope, SurdReal::zero(), side)
    }

    pub fn with_shared(slope: Arc<SlopeVector>, intercept: SurdReal, side: Side) -> Self {
        let mut values: Vec<SurdReal> = slope.entries().to_vec();
        values.push(intercept.clone());
        let fast = LinearFrame::new(&values, Precision::default()).map(|(frame, mut coords)| {
            let rho = coords.pop().expect("intercept row");
            FastEval {
                frame,
                alpha: coords,
                rho,
            }
        });
        SturmianConfig {
            slope,
            intercept,
            side,
            fast,
        }
    }

    pub fn slope(&self) -> &SlopeVector {
        &self.slope
    }

    pub fn shared_slope(&self) -> Arc<SlopeVector> {
        self.slope.clone()
    }

    pub fn intercept(&self) -> &SurdReal {
        &self.intercept
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// The same slope and intercept with the other rounding.
    pub fn twin(&self) -> SturmianConfig {
        let side = match self.side {
            Side::Lower => Side::Upper,
            Side::Upper => Side::Lower,
        };
        SturmianConfig {
            side,
            ..self.clone()
        }
    }

    /// `n · α + ρ`.
    pub fn position(&self, n: &Point) -> SurdReal {
        &self.slope.dot(n) + &self.intercept
    }

    /// Evaluation through the floor (or ceiling) sum, in exact arithmetic only.
    pub fn eval_exact(&self, n: &Point) -> Result<Symbol> {
        let t = self.position(n);
        let round = |x: &SurdReal| -> Result<BigInt> {
            Ok(match self.side {
                Side::Lower => x.floor()?,
                Side::Upper => x.ceil()?,
            })
        };
        let base = round(&t)?;
        let mut count = BigInt::zero();
        for a in self.slope.entries() {
            count += round(&(a + &t))? - &base;
        }
        Ok(count.to_u8().expect("symbol fits the alphabet"))
    }

    /// Evaluation through the window partition, in exact arithmetic only.
    pub fn eval_by_window(&self, n: &Point) -> Result<Symbol> {
        let x = self.position(n).fract()?;
        WindowPartition::new(&self.slope).cell_of(&x, self.side)
    }

    fn eval(&self, n: &Point) -> Result<Symbol> {
        if n.dim() != self.slope.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.slope.dim(),
                found: n.dim(),
            });
        }
        if let Some(fast) = &self.fast {
            if let Some(t) = fast.position(n) {
                if let Some(r) = fast.symbol(&t, self.side) {
                    return r;
                }
            }
        }
        self.eval_exact(n)
    }

    /// The set `F` where this configuration and its twin differ.
    ///
    /// Writing `ρ = c_0 + Σ c_i α_i`, the two codings differ at `n` exactly
    /// when `n·α + ρ ≡ 0` or `≡ -α_j (mod 1)`; this happens iff `c_0` and all
    /// `c_i` are integers, and then `F = -c + {0, -e_1, ..., -e_d}`.
    pub fn difference_set(&self) -> Result<Support> {
        let d = self.slope.dim();
        if !self.slope.is_proven() {
            return Err(Error::NoDifferenceSet(
                "the slope is not proven totally irrational".into(),
            ));
        }
        let mut values: Vec<&SurdReal> = self.slope.entries().iter().collect();
        values.push(&self.intercept);
        let ks = common_radicands(values);
        let mut rows = vec![SurdReal::one().coordinates(&ks)];
        rows.extend(self.slope.entries().iter().map(|a| a.coordinates(&ks)));
        let target = self.intercept.coordinates(&ks);
        let Some(c) = solve_combination(&rows, &target) else {
            return Ok(Support::empty(d));
        };
        if !c.iter().all(|q| q.is_integer()) {
            return Ok(Support::empty(d));
        }
        let shift: Option<Vec<i64>> = c[1..].iter().map(|q| (-q.to_integer()).to_i64()).collect();
        let shift = shift.ok_or_else(|| Error::InvalidArgument("intercept too large".into()))?;
        Ok(Support::canonical_difference_set(d).translate(&Point::new(&shift)))
    }
}

impl fmt::Debug for SturmianConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SturmianConfig({} slope [{}], intercept {})",
            self.side, self.slope, self.intercept
        )
    }
}

impl Configuration for SturmianConfig {
    fn dim(&self) -> usize {
        self.slope.dim()
    }

    fn alphabet_size(&self) -> usize {
        self.slope.dim() + 1
    }

    fn at(&self, n: &Point) -> Result<Symbol> {
        self.eval(n)
    }

    fn sample(&self, lo: &[i64], hi: &[i64]) -> Result<Grid> {
        // positions are updated incrementally along the last coordinate
        let Some(fast) = &self.fast else {
            return Grid::from_fn(lo, hi, |p| self.eval(p));
        };
        let d = self.dim();
        let last = d - 1;
        Grid::from_rows(lo, hi, |row_start, len, out| {
            let Some(mut t) = fast.position(row_start) else {
                for k in 0..len {
                    let mut p = row_start.clone();
                    p.0[last] += k as i64;
                    out.push(self.eval(&p)?);
                }
                return Ok(());
            };
            for k in 0..len {
                match fast.symbol(&t, self.side) {
                    Some(r) => out.push(r?),
                    None => {
                        let mut p = row_start.clone();
                        p.0[last] += k as i64;
                        out.push(self.eval_exact(&p)?);
                    }
                }
                for (tj, aj) in t.iter_mut().zip(&fast.alpha[last]) {
                    *tj = tj.saturating_add(*aj);
                }
            }
            Ok(())
        })
    }
}

/// A subset of the circle `R/Z` given as disjoint arcs, all closed on the
/// left for the lower side and closed on the right for the upper side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternInterval {
    pub side: Side,
    /// `(start, end)` with `0 ≤ start < 1` and `start < end ≤ start + 1`.
    pub arcs: Vec<(SurdReal, SurdReal)>,
}

impl PatternInterval {
    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// The left endpoint when the set is a single arc.
    pub fn left_endpoint(&self) -> Option<&SurdReal> {
        match self.arcs.as_slice() {
            [(a, _)] => Some(a),
            _ => None,
        }
    }

    pub fn length(&self) -> SurdReal {
        self.arcs
            .iter()
            .fold(SurdReal::zero(), |acc, (a, b)| &acc + &(b - a))
    }

    /// Membership of a point of the circle.
    pub fn contains(&self, x: &SurdReal) -> Result<bool> {
        let x = x.fract()?;
        for (a, b) in &self.arcs {
            for shift in [0i64, 1] {
                let y = &x + &SurdReal::from_integer(shift);
                let ca = y.compare(a)?;
                let cb = y.compare(b)?;
                let inside = match self.side {
                    Side::Lower => ca != Ordering::Less && cb == Ordering::Less,
                    Side::Upper => ca == Ordering::Greater && cb != Ordering::Greater,
                };
                if inside {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

type Pieces = Vec<(SurdReal, SurdReal)>;

/// Splits the arc `[start, start + len)` mod 1 into pieces of `[0, 1]`.
fn arc_pieces(start: &SurdReal, len: &SurdReal) -> Result<Pieces> {
    if len.signum()? != Ordering::Greater {
        return Ok(Vec::new());
    }
    let start = start.fract()?;
    let end = &start + len;
    let one = SurdReal::one();
    if end.compare(&one)? != Ordering::Greater {
        Ok(vec![(start, end)])
    } else {
        Ok(vec![(start, one.clone()), (SurdReal::zero(), &end - &one)])
    }
}

fn intersect_pieces(a: &Pieces, b: &Pieces) -> Result<Pieces> {
    let mut out = Vec::new();
    for (a0, a1) in a {
        for (b0, b1) in b {
            let lo = if a0.compare(b0)? == Ordering::Less { b0 } else { a0 };
            let hi = if a1.compare(b1)? == Ordering::Less { a1 } else { b1 };
            if lo.compare(hi)? == Ordering::Less {
                out.push((lo.clone(), hi.clone()));
            }
        }
    }
    sort_pieces(&mut out)?;
    Ok(out)
}

fn sort_pieces(p: &mut Pieces) -> Result<()> {
    // insertion sort keeps comparisons fallible
    for i in 1..p.len() {
        let mut j = i;
        while j > 0 && p[j].0.compare(&p[j - 1].0)? == Ordering::Less {
            p.swap(j, j - 1);
            j -= 1;
        }
    }
    Ok(())
}

/// `I_p = ∩_{n ∈ S} (W_{p(n)} - α·n)` on the circle.
pub fn pattern_interval(slope: &SlopeVector, p: &Pattern, side: Side) -> Result<PatternInterval> {
    let part = WindowPartition::new(slope);
    let mut acc: Pieces = vec![(SurdReal::zero(), SurdReal::one())];
    for (n, v) in p.iter() {
        if (v as usize) >= part.len() {
            return Ok(PatternInterval {
                side,
                arcs: Vec::new(),
            });
        }
        let (a, len) = part.window(v as usize);
        let start = &a - &slope.dot(n);
        let pieces = arc_pieces(&start, &len)?;
        acc = intersect_pieces(&acc, &pieces)?;
        if acc.is_empty() {
            break;
        }
    }
    let zero = SurdReal::zero();
    let one = SurdReal::one();
    let wraps = acc.len() > 1 && acc[0].0 == zero && acc[acc.len() - 1].1 == one;
    let arcs = if wraps {
        let (first_hi, last_lo) = (acc[0].1.clone(), acc[acc.len() - 1].0.clone());
        let mut arcs: Vec<_> = acc[1..acc.len() - 1].to_vec();
        arcs.push((last_lo, &first_hi + &one));
        arcs
    } else {
        acc
    };
    Ok(PatternInterval { side, arcs })
}

/// `L_S(c_α)` for a connected support, via the bijection `F - S → L_S`,
/// `u ↦ σ^u(c_α)|_S`. The result is sorted and has exactly `|F - S|` elements.
pub fn language(slope: &SlopeVector, s: &Support) -> Result<Vec<Pattern>> {
    Ok(language_with_occurrences(slope, s)?
        .into_iter()
        .map(|(p, _)| p)
        .collect())
}

/// As [`language`], each pattern paired with its unique occurrence in `F - S`.
pub fn language_with_occurrences(slope: &SlopeVector, s: &Support) -> Result<Vec<(Pattern, Point)>> {
    let d = slope.dim();
    if s.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: s.dim(),
        });
    }
    if s.is_empty() {
        return Ok(vec![(Pattern::empty(d), Point::zero(d))]);
    }
    if !s.is_connected() {
        return Err(Error::DisconnectedSupport(s.clone()));
    }
    let c = SturmianConfig::characteristic(slope.clone(), Side::Lower);
    let fs = Support::canonical_difference_set(d).minus(s);
    let mut out = Vec::with_capacity(fs.len());
    let mut seen = BTreeSet::new();
    for u in fs.iter() {
        let p = c.pattern_at(u, s)?;
        if !seen.insert(p.clone()) {
            return Err(Error::NotInjective { support: s.clone() });
        }
        out.push((p, u.clone()));
    }
    out.sort();
    Ok(out)
}

/// `L_S(c_α)` read off the circle: the points `b_j - α·n` (`n ∈ S`) cut
/// `[0, 1)` into arcs and each arc carries one pattern. Works for any `S`
/// and uses only the window partition, never the floor formula.
pub fn language_by_intervals(slope: &SlopeVector, s: &Support) -> Result<Vec<Pattern>> {
    let d = slope.dim();
    if s.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: s.dim(),
        });
    }
    if s.is_empty() {
        return Ok(vec![Pattern::empty(d)]);
    }
    let part = WindowPartition::new(slope);
    let shifts: Vec<SurdReal> = s.iter().map(|n| slope.dot(n)).collect();
    let mut cuts = Vec::with_capacity(s.len() * (d + 1));
    for sh in &shifts {
        for b in &part.boundaries[..=d] {
            cuts.push((b - sh).fract()?);
        }
    }
    let mut err = None;
    cuts.sort_by(|a, b| {
        a.compare(b).unwrap_or_else(|e| {
            err.get_or_insert(e);
            Ordering::Equal
        })
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    cuts.dedup();
    let mut out = BTreeSet::new();
    for t in &cuts {
        let mut values = Vec::with_capacity(s.len());
        for sh in &shifts {
            values.push(part.cell_of(&(t + sh).fract()?, Side::Lower)?);
        }
        out.insert(Pattern::new(s.clone(), values)?);
    }
    Ok(out.into_iter().collect())
}
