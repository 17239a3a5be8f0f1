//! Configurations as maps `Z^d -> Σ`, asymptotic pairs and the
//! indistinguishability test.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactreal::SurdReal;
use crate::lattice::{
    enumerate_boxes, enumerate_connected_supports, for_each_in_box, integer_rank,
    is_lattice_basis, AffineMap, Pattern, Point, Support, Symbol,
};
use crate::sturmian::{SlopeVector, SturmianConfig, Side};

/// A configuration `x ∈ Σ^{Z^d}` evaluated on demand.
pub trait Configuration: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;

    /// Size `k` of the alphabet `{0, ..., k-1}`.
    fn alphabet_size(&self) -> usize;

    fn at(&self, n: &Point) -> Result<Symbol>;

    /// `σ^u(x)|_S`, i.e. the pattern `s ↦ x(u + s)`.
    fn pattern_at(&self, u: &Point, s: &Support) -> Result<Pattern> {
        let mut values = Vec::with_capacity(s.len());
        for p in s.iter() {
            values.push(self.at(&(u + p))?);
        }
        Ok(Pattern::new(s.clone(), values)?)
    }

    /// The restriction to the box `lo <= n <= hi`.
    fn sample(&self, lo: &[i64], hi: &[i64]) -> Result<Grid> {
        Grid::from_fn(lo, hi, |p| self.at(p))
    }
}

pub type Config = Arc<dyn Configuration>;

/// Symbols on a box of `Z^d`, stored with the last coordinate fastest.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct Grid {
    lo: Vec<i64>,
    shape: Vec<usize>,
    data: Vec<Symbol>,
}

impl Grid {
    pub fn from_fn(lo: &[i64], hi: &[i64], mut f: impl FnMut(&Point) -> Result<Symbol>) -> Result<Grid> {
        let shape = box_shape(lo, hi);
        let mut data = Vec::with_capacity(shape.iter().product());
        let mut err = None;
        for_each_in_box(lo, hi, |p| {
            if err.is_none() {
                match f(&p) {
                    Ok(v) => data.push(v),
                    Err(e) => err = Some(e),
                }
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(Grid {
                lo: lo.to_vec(),
                shape,
                data,
            }),
        }
    }

    /// Fills the grid one row (last coordinate) at a time.
    pub fn from_rows(
        lo: &[i64],
        hi: &[i64],
        mut row: impl FnMut(&Point, usize, &mut Vec<Symbol>) -> Result<()>,
    ) -> Result<Grid> {
        let shape = box_shape(lo, hi);
        let d = lo.len();
        let mut data = Vec::with_capacity(shape.iter().product());
        if shape.iter().all(|&s| s > 0) {
            let mut row_hi = hi.to_vec();
            row_hi[d - 1] = lo[d - 1];
            let mut err = None;
            for_each_in_box(lo, &row_hi, |p| {
                if err.is_none() {
                    if let Err(e) = row(&p, shape[d - 1], &mut data) {
                        err = Some(e);
                    }
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
        Ok(Grid {
            lo: lo.to_vec(),
            shape,
            data,
        })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> Vec<i64> {
        self.lo
            .iter()
            .zip(&self.shape)
            .map(|(l, s)| l + *s as i64 - 1)
            .collect()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[Symbol] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    fn strides(&self) -> Vec<usize> {
        let d = self.dim();
        let mut st = vec![1usize; d];
        for i in (0..d.saturating_sub(1)).rev() {
            st[i] = st[i + 1] * self.shape[i + 1];
        }
        st
    }

    pub fn index(&self, p: &Point) -> Option<usize> {
        let st = self.strides();
        let mut idx = 0;
        for i in 0..self.dim() {
            let off = p[i] - self.lo[i];
            if off < 0 || off as usize >= self.shape[i] {
                return None;
            }
            idx += off as usize * st[i];
        }
        Some(idx)
    }

    pub fn get(&self, p: &Point) -> Option<Symbol> {
        self.index(p).map(|i| self.data[i])
    }

    pub fn points(&self) -> Vec<Point> {
        let mut out = Vec::with_capacity(self.len());
        for_each_in_box(&self.lo, &self.hi(), |p| out.push(p));
        out
    }

    /// All patterns `σ^u(x)|_S` with `u + S` inside the grid, as value vectors.
    pub fn scan(&self, s: &Support) -> HashSet<Vec<Symbol>> {
        let mut out = HashSet::new();
        self.for_each_occurrence(s, |_, vals| {
            if !out.contains(vals) {
                out.insert(vals.to_vec());
            }
        });
        out
    }

    /// Calls `f(u, values)` for every `u` with `u + S` inside the grid.
    pub fn for_each_occurrence(&self, s: &Support, mut f: impl FnMut(&Point, &[Symbol])) {
        let Some((slo, shi)) = s.bounding_box() else {
            return;
        };
        let d = self.dim();
        let hi = self.hi();
        let ulo: Vec<i64> = (0..d).map(|i| self.lo[i] - slo[i]).collect();
        let uhi: Vec<i64> = (0..d).map(|i| hi[i] - shi[i]).collect();
        let st = self.strides();
        let offsets: Vec<isize> = s
            .iter()
            .map(|p| (0..d).map(|i| p[i] as isize * st[i] as isize).sum())
            .collect();
        if (0..d).any(|i| ulo[i] > uhi[i]) {
            return;
        }
        let mut vals = vec![0 as Symbol; s.len()];
        let mut row_hi = uhi.clone();
        row_hi[d - 1] = ulo[d - 1];
        // walk each row along the last coordinate, whose stride is 1
        for_each_in_box(&ulo, &row_hi, |start| {
            let mut u = start;
            let mut base: isize = (0..d)
                .map(|i| (u[i] - self.lo[i]) as isize * st[i] as isize)
                .sum();
            for k in ulo[d - 1]..=uhi[d - 1] {
                u.0[d - 1] = k;
                for (v, off) in vals.iter_mut().zip(&offsets) {
                    *v = self.data[(base + off) as usize];
                }
                f(&u, &vals);
                base += 1;
            }
        });
    }

    /// Renders a two-dimensional grid with the top row at the largest `y`.
    pub fn render_2d(&self) -> String {
        assert_eq!(self.dim(), 2, "render_2d needs a planar grid");
        let hi = self.hi();
        let mut s = String::new();
        for y in (self.lo[1]..=hi[1]).rev() {
            let row: Vec<String> = (self.lo[0]..=hi[0])
                .map(|x| self.get(&Point::new(&[x, y])).unwrap().to_string())
                .collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Grid(lo {:?}, shape {:?})", self.lo, self.shape)
    }
}

fn box_shape(lo: &[i64], hi: &[i64]) -> Vec<usize> {
    lo.iter()
        .zip(hi)
        .map(|(l, h)| if h >= l { (h - l + 1) as usize } else { 0 })
        .collect()
}

/// The constant configuration.
#[derive(Debug, Clone)]
pub struct ConstantConfig {
    pub dim: usize,
    pub alphabet: usize,
    pub symbol: Symbol,
}

impl Configuration for ConstantConfig {
    fn dim(&self) -> usize {
        self.dim
    }
    fn alphabet_size(&self) -> usize {
        self.alphabet
    }
    fn at(&self, _: &Point) -> Result<Symbol> {
        Ok(self.symbol)
    }
}

/// A configuration given by a closure.
pub struct FnConfig<F> {
    pub dim: usize,
    pub alphabet: usize,
    pub f: F,
}

impl<F> fmt::Debug for FnConfig<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FnConfig(dim {}, alphabet {})", self.dim, self.alphabet)
    }
}

impl<F> Configuration for FnConfig<F>
where
    F: Fn(&Point) -> Symbol + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn alphabet_size(&self) -> usize {
        self.alphabet
    }
    fn at(&self, n: &Point) -> Result<Symbol> {
        Ok((self.f)(n))
    }
}

/// `base` with the symbols of `patch` written over it.
#[derive(Debug, Clone)]
pub struct Overridden {
    pub base: Config,
    pub patch: Pattern,
}

impl Configuration for Overridden {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn alphabet_size(&self) -> usize {
        let top = self.patch.values().iter().max().map_or(0, |&m| m as usize + 1);
        self.base.alphabet_size().max(top)
    }
    fn at(&self, n: &Point) -> Result<Symbol> {
        match self.patch.get(n) {
            Some(v) => Ok(v),
            None => self.base.at(n),
        }
    }
}

/// `σ^u(x)`, i.e. `n ↦ x(n + u)`.
#[derive(Debug, Clone)]
pub struct Shifted {
    pub base: Config,
    pub shift: Point,
}

impl Configuration for Shifted {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn alphabet_size(&self) -> usize {
        self.base.alphabet_size()
    }
    fn at(&self, n: &Point) -> Result<Symbol> {
        self.base.at(&(n + &self.shift))
    }
}

/// `x ∘ A`.
#[derive(Debug, Clone)]
pub struct Transformed {
    pub base: Config,
    pub map: AffineMap,
}

impl Configuration for Transformed {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn alphabet_size(&self) -> usize {
        self.base.alphabet_size()
    }
    fn at(&self, n: &Point) -> Result<Symbol> {
        self.base.at(&self.map.apply(n))
    }
}

/// `τ ∘ x` for a symbol table `τ`.
#[derive(Debug, Clone)]
pub struct Relabeled {
    pub base: Config,
    pub table: Vec<Symbol>,
    pub alphabet: usize,
}

impl Configuration for Relabeled {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn alphabet_size(&self) -> usize {
        self.alphabet
    }
    fn at(&self, n: &Point) -> Result<Symbol> {
        let v = self.base.at(n)?;
        self.table
            .get(v as usize)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("symbol {} has no image", v)))
    }
}

/// `x ∘ ℓ_{v,B}` with `ℓ_{v,B}(n) = v + Σ n_i b_i`.
#[derive(Debug, Clone)]
pub struct Restricted {
    pub base: Config,
    pub offset: Point,
    pub basis: Vec<Point>,
}

impl Configuration for Restricted {
    fn dim(&self) -> usize {
        self.basis.len()
    }
    fn alphabet_size(&self) -> usize {
        self.base.alphabet_size()
    }
    fn at(&self, n: &Point) -> Result<Symbol> {
        let mut p = self.offset.clone();
        for (b, &k) in self.basis.iter().zip(n.coords()) {
            p = &p + &b.scale(k);
        }
        self.base.at(&p)
    }
}

/// `π(0) = 0`, `π(j) = j - 1`.
pub fn pi_table(alphabet: usize) -> Vec<Symbol> {
    (0..alphabet).map(|j| j.saturating_sub(1) as Symbol).collect()
}

pub fn project_pi(x: &Config) -> Config {
    let k = x.alphabet_size();
    Arc::new(Relabeled {
        base: x.clone(),
        table: pi_table(k),
        alphabet: k.saturating_sub(1).max(1),
    })
}

/// `x ∘ ℓ_{v,B}`; fails if the vectors of `B` are linearly dependent.
pub fn restrict_sublattice(x: &Config, offset: Point, basis: Vec<Point>) -> Result<Config> {
    if basis.is_empty() {
        return Err(Error::InvalidArgument("empty basis".into()));
    }
    if let Some(b) = basis.iter().chain([&offset]).find(|b| b.dim() != x.dim()) {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: b.dim(),
        });
    }
    if integer_rank(&basis) < basis.len() {
        return Err(crate::lattice::LatticeError::LinearlyDependent.into());
    }
    Ok(Arc::new(Restricted {
        base: x.clone(),
        offset,
        basis,
    }))
}

/// `e_1^⊥ = {e_2, ..., e_d}`.
pub fn e1_perp(d: usize) -> Vec<Point> {
    (2..=d).map(|i| Point::unit(d, i)).collect()
}

/// How the difference set of a pair is known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum DifferenceSetSource {
    /// Derived from the construction.
    Certified,
    /// Supplied by the user and checked on a finite window.
    Declared { checked_margin: i64 },
}

/// Two configurations that differ exactly on the finite set `F`.
#[derive(Clone)]
pub struct AsymptoticPair {
    pub x: Config,
    pub y: Config,
    difference_set: Support,
    source: DifferenceSetSource,
    watermark: Option<String>,
}

impl fmt::Debug for AsymptoticPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AsymptoticPair")
            .field("x", &self.x)
            .field("y", &self.y)
            .field("difference_set", &self.difference_set)
            .field("source", &self.source)
            .finish()
    }
}

impl AsymptoticPair {
    /// `(c_{α,ρ}, c'_{α,ρ})` with its certified difference set.
    pub fn sturmian(slope: SlopeVector, intercept: SurdReal) -> Result<Self> {
        let asserted = !slope.is_proven();
        let lower = SturmianConfig::new(slope, intercept, Side::Lower);
        if asserted {
            return Err(Error::NoDifferenceSet(
                "the difference set of an asserted slope cannot be certified".into(),
            ));
        }
        let f = lower.difference_set()?;
        let upper = lower.twin();
        Ok(AsymptoticPair {
            x: Arc::new(lower),
            y: Arc::new(upper),
            difference_set: f,
            source: DifferenceSetSource::Certified,
            watermark: None,
        })
    }

    /// `(c_α, c'_α)`.
    pub fn characteristic(slope: SlopeVector) -> Result<Self> {
        Self::sturmian(slope, SurdReal::zero())
    }

    /// A pair whose difference set is taken on trust and checked on the box
    /// spanned by `F` widened by `margin`.
    pub fn declared(x: Config, y: Config, f: Support, margin: i64) -> Result<Self> {
        if x.dim() != y.dim() || f.dim() != x.dim() {
            return Err(Error::DimensionMismatch {
                expected: x.dim(),
                found: if y.dim() != x.dim() { y.dim() } else { f.dim() },
            });
        }
        let d = x.dim();
        let (lo, hi) = f
            .bounding_box()
            .unwrap_or((vec![0; d], vec![0; d]));
        let lo: Vec<i64> = lo.iter().map(|v| v - margin).collect();
        let hi: Vec<i64> = hi.iter().map(|v| v + margin).collect();
        let gx = x.sample(&lo, &hi)?;
        let gy = y.sample(&lo, &hi)?;
        for (p, (a, b)) in gx.points().into_iter().zip(gx.data().iter().zip(gy.data())) {
            let inside = f.contains(&p);
            if inside && a == b {
                return Err(Error::DifferenceSetMismatch {
                    point: p,
                    detail: format!("x and y agree ({}) on a declared point", a),
                });
            }
            if !inside && a != b {
                return Err(Error::DifferenceSetMismatch {
                    point: p,
                    detail: format!("x = {} and y = {} differ outside F", a, b),
                });
            }
        }
        Ok(AsymptoticPair {
            x,
            y,
            difference_set: f,
            source: DifferenceSetSource::Declared {
                checked_margin: margin,
            },
            watermark: None,
        })
    }

    /// Builds a pair without any check; for derived pairs whose `F` is known.
    pub fn from_parts(x: Config, y: Config, f: Support, source: DifferenceSetSource) -> Self {
        AsymptoticPair {
            x,
            y,
            difference_set: f,
            source,
            watermark: None,
        }
    }

    pub fn with_watermark(mut self, note: impl Into<String>) -> Self {
        self.watermark = Some(note.into());
        self
    }

    pub fn watermark(&self) -> Option<&str> {
        self.watermark.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    pub fn alphabet_size(&self) -> usize {
        self.x.alphabet_size().max(self.y.alphabet_size())
    }

    pub fn difference_set(&self) -> &Support {
        &self.difference_set
    }

    pub fn source(&self) -> &DifferenceSetSource {
        &self.source
    }

    pub fn swapped(&self) -> Self {
        AsymptoticPair {
            x: self.y.clone(),
            y: self.x.clone(),
            ..self.clone()
        }
    }

    /// `(σ^u x, σ^u y)`, whose difference set is `F - u`.
    pub fn shifted(&self, u: &Point) -> Self {
        AsymptoticPair {
            x: Arc::new(Shifted {
                base: self.x.clone(),
                shift: u.clone(),
            }),
            y: Arc::new(Shifted {
                base: self.y.clone(),
                shift: u.clone(),
            }),
            difference_set: self.difference_set.translate(&-u),
            ..self.clone()
        }
    }

    /// `(x ∘ A, y ∘ A)`, whose difference set is `A^{-1}(F)`.
    pub fn transformed(&self, a: &AffineMap) -> Self {
        AsymptoticPair {
            x: Arc::new(Transformed {
                base: self.x.clone(),
                map: a.clone(),
            }),
            y: Arc::new(Transformed {
                base: self.y.clone(),
                map: a.clone(),
            }),
            difference_set: a.inverse().apply_support(&self.difference_set),
            ..self.clone()
        }
    }

    /// `(τ ∘ x, τ ∘ y)` for a bijective table `τ`.
    pub fn relabeled(&self, table: &[Symbol]) -> Self {
        let k = table.len();
        let wrap = |c: &Config| -> Config {
            Arc::new(Relabeled {
                base: c.clone(),
                table: table.to_vec(),
                alphabet: k,
            })
        };
        AsymptoticPair {
            x: wrap(&self.x),
            y: wrap(&self.y),
            ..self.clone()
        }
    }

    /// `(π ∘ x, π ∘ y)`; the difference set shrinks to where the images differ.
    pub fn projected(&self) -> Result<Self> {
        let x = project_pi(&self.x);
        let y = project_pi(&self.y);
        let mut kept = Vec::new();
        for n in self.difference_set.iter() {
            if x.at(n)? != y.at(n)? {
                kept.push(n.clone());
            }
        }
        Ok(AsymptoticPair {
            x,
            y,
            difference_set: Support::new(self.dim(), kept)?,
            ..self.clone()
        })
    }
}

/// Which supports a verification run enumerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SupportMode {
    Connected,
    Boxes,
}

/// Default bound on the support size for verification runs.
pub fn default_verify_guard(d: usize) -> usize {
    match d {
        1 => 16,
        2 => 6,
        3 => 4,
        _ => 3,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PatternRecord {
    pub pattern: Pattern,
    /// `occ_p(x) \ occ_p(y)`, which equals `occ_p(x) ∩ (F - S)`.
    pub occ_x: Vec<Point>,
    pub occ_y: Vec<Point>,
    /// `Δ_p = |occ_p(y) \ occ_p(x)| - |occ_p(x) \ occ_p(y)|`.
    pub delta: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SupportResult {
    pub support: Support,
    pub records: Vec<PatternRecord>,
}

impl SupportResult {
    pub fn all_zero(&self) -> bool {
        self.records.iter().all(|r| r.delta == 0)
    }

    /// Every pattern seen near `F` occurs exactly once there in `x` and in `y`.
    pub fn singletons(&self) -> bool {
        self.records
            .iter()
            .all(|r| r.occ_x.len() == 1 && r.occ_y.len() == 1)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub support: Support,
    pub pattern: Pattern,
    pub delta: i64,
    pub occ_x: Vec<Point>,
    pub occ_y: Vec<Point>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub dim: usize,
    pub max_support_size: usize,
    pub mode: SupportMode,
    pub difference_set: Support,
    pub results: Vec<SupportResult>,
    pub watermark: Option<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.all_zero())
    }

    pub fn singletons(&self) -> bool {
        self.results.iter().all(|r| r.singletons())
    }

    pub fn patterns_checked(&self) -> usize {
        self.results.iter().map(|r| r.records.len()).sum()
    }

    pub fn witness(&self) -> Option<Witness> {
        self.results.iter().find_map(|r| {
            r.records.iter().find(|p| p.delta != 0).map(|p| Witness {
                support: r.support.clone(),
                pattern: p.pattern.clone(),
                delta: p.delta,
                occ_x: p.occ_x.clone(),
                occ_y: p.occ_y.clone(),
            })
        })
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub max_support_size: usize,
    pub mode: SupportMode,
    /// Overrides [`default_verify_guard`].
    pub guard: Option<usize>,
}

impl VerifyOptions {
    pub fn connected(max_support_size: usize) -> Self {
        VerifyOptions {
            max_support_size,
            mode: SupportMode::Connected,
            guard: None,
        }
    }
}

/// Occurrence records of every pattern over `S` met at `F - S`.
pub fn support_result(pair: &AsymptoticPair, s: &Support) -> Result<SupportResult> {
    let fs = pair.difference_set.minus(s);
    let mut map: BTreeMap<Pattern, (Vec<Point>, Vec<Point>)> = BTreeMap::new();
    for u in fs.iter() {
        let px = pair.x.pattern_at(u, s)?;
        let py = pair.y.pattern_at(u, s)?;
        map.entry(px).or_default().0.push(u.clone());
        map.entry(py).or_default().1.push(u.clone());
    }
    let records = map
        .into_iter()
        .map(|(pattern, (occ_x, occ_y))| PatternRecord {
            delta: occ_y.len() as i64 - occ_x.len() as i64,
            pattern,
            occ_x,
            occ_y,
        })
        .collect();
    Ok(SupportResult {
        support: s.clone(),
        records,
    })
}

/// Checks `Δ_p = 0` for every pattern over every enumerated support.
///
/// Only positions in `F - S` can tell `x` and `y` apart, so the pattern
/// universe is exactly the set of patterns seen there and the test is exact.
pub fn verify_indistinguishable(pair: &AsymptoticPair, opts: &VerifyOptions) -> Result<VerificationReport> {
    let d = pair.dim();
    let limit = opts.guard.unwrap_or_else(|| default_verify_guard(d));
    if opts.max_support_size > limit {
        return Err(Error::GuardExceeded {
            what: "support size".into(),
            requested: opts.max_support_size,
            limit,
        });
    }
    let supports = match opts.mode {
        SupportMode::Connected => enumerate_connected_supports(d, opts.max_support_size, limit)?,
        SupportMode::Boxes => enumerate_boxes(d, opts.max_support_size),
    };
    let results = supports
        .par_iter()
        .map(|s| support_result(pair, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport {
        dim: d,
        max_support_size: opts.max_support_size,
        mode: opts.mode,
        difference_set: pair.difference_set.clone(),
        results,
        watermark: pair.watermark.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlipReport {
    pub holds: bool,
    pub reason: Option<String>,
}

impl FlipReport {
    fn ok() -> Self {
        FlipReport {
            holds: true,
            reason: None,
        }
    }
    fn fail(reason: impl Into<String>) -> Self {
        FlipReport {
            holds: false,
            reason: Some(reason.into()),
        }
    }
}

fn values_on(c: &Config, f: &Support) -> Result<Vec<Symbol>> {
    f.iter().map(|n| c.at(n)).collect()
}

/// `F = {0, -e_i}`, `x|_F` bijective onto `{0..d}`, `x_0 = 0`, `y = x - 1 mod (d+1)` on `F`.
pub fn check_flip(pair: &AsymptoticPair) -> Result<FlipReport> {
    let d = pair.dim();
    let f = &pair.difference_set;
    if *f != Support::canonical_difference_set(d) {
        return Ok(FlipReport::fail(format!("difference set {} is not canonical", f)));
    }
    if pair.alphabet_size() != d + 1 {
        return Ok(FlipReport::fail(format!(
            "alphabet has {} symbols, expected {}",
            pair.alphabet_size(),
            d + 1
        )));
    }
    let xs = values_on(&pair.x, f)?;
    let ys = values_on(&pair.y, f)?;
    let distinct: BTreeSet<_> = xs.iter().collect();
    if distinct.len() != d + 1 || xs.iter().any(|&v| v as usize > d) {
        return Ok(FlipReport::fail("x restricted to F is not a bijection onto the alphabet"));
    }
    let zero = Point::zero(d);
    if pair.x.at(&zero)? != 0 {
        return Ok(FlipReport::fail("x_0 is not 0"));
    }
    let k = (d + 1) as i64;
    for ((n, &a), &b) in f.iter().zip(&xs).zip(&ys) {
        if (a as i64 - 1).rem_euclid(k) != b as i64 {
            return Ok(FlipReport::fail(format!(
                "y_{} = {} but x_{} - 1 = {} mod {}",
                n,
                b,
                n,
                (a as i64 - 1).rem_euclid(k),
                k
            )));
        }
    }
    Ok(FlipReport::ok())
}

/// The flip condition with `x_{-e_i} = i` (hence `y_0 = d`, `y_{-e_i} = i - 1`).
pub fn check_ordered_flip(pair: &AsymptoticPair) -> Result<FlipReport> {
    let base = check_flip(pair)?;
    if !base.holds {
        return Ok(base);
    }
    let d = pair.dim();
    if pair.y.at(&Point::zero(d))? as usize != d {
        return Ok(FlipReport::fail("y_0 is not d"));
    }
    for i in 1..=d {
        let n = -Point::unit(d, i);
        let (a, b) = (pair.x.at(&n)?, pair.y.at(&n)?);
        if a as usize != i || b as usize != i - 1 {
            return Ok(FlipReport::fail(format!(
                "(x, y) at -e_{} is ({}, {}), expected ({}, {})",
                i,
                a,
                b,
                i,
                i - 1
            )));
        }
    }
    Ok(FlipReport::ok())
}

/// Whether `x|_F` is a bijection onto `{0..d}`; returns the inverse table.
fn inverse_on(pair: &AsymptoticPair) -> Result<Option<Vec<Point>>> {
    let d = pair.dim();
    let f = &pair.difference_set;
    if f.len() != d + 1 {
        return Ok(None);
    }
    let mut inv: Vec<Option<Point>> = vec![None; d + 1];
    for n in f.iter() {
        let v = pair.x.at(n)? as usize;
        if v > d || inv[v].is_some() {
            return Ok(None);
        }
        inv[v] = Some(n.clone());
    }
    Ok(inv.into_iter().collect())
}

/// The permutation `x_n ↦ y_n` of `{0..d}` on `F`.
fn flip_permutation(pair: &AsymptoticPair, inv: &[Point]) -> Result<Vec<Symbol>> {
    inv.iter().map(|n| pair.y.at(n)).collect()
}

fn is_single_cycle(perm: &[Symbol]) -> bool {
    let k = perm.len();
    if perm.iter().any(|&v| v as usize >= k) {
        return false;
    }
    let mut seen = vec![false; k];
    let mut i = 0usize;
    for _ in 0..k {
        if seen[i] {
            return false;
        }
        seen[i] = true;
        i = perm[i] as usize;
    }
    i == 0 && seen.iter().all(|&b| b)
}

/// `|F| = d + 1`, `F - m` minus `0` is a basis for some `m ∈ F`,
/// `x|_F` is bijective and `x_n ↦ y_n` is a cyclic permutation.
pub fn check_affine_flip(pair: &AsymptoticPair) -> Result<FlipReport> {
    let d = pair.dim();
    let f = &pair.difference_set;
    if f.len() != d + 1 {
        return Ok(FlipReport::fail(format!("|F| = {} instead of {}", f.len(), d + 1)));
    }
    let m = &f.points()[0];
    let diffs: Vec<Point> = f.iter().filter(|n| *n != m).map(|n| n - m).collect();
    if !is_lattice_basis(&diffs) {
        return Ok(FlipReport::fail("F - m is not a basis of Z^d"));
    }
    let Some(inv) = inverse_on(pair)? else {
        return Ok(FlipReport::fail("x restricted to F is not a bijection onto the alphabet"));
    };
    let perm = flip_permutation(pair, &inv)?;
    if !is_single_cycle(&perm) {
        return Ok(FlipReport::fail(format!("x -> y on F is {:?}, not a cycle", perm)));
    }
    Ok(FlipReport::ok())
}

/// Output of [`normalize_affine`].
#[derive(Debug, Clone)]
pub struct Normalization {
    /// `A` with `x' = τ^{-1} ∘ x ∘ A^{-1}`.
    pub map: AffineMap,
    /// `τ`, mapping new symbols to old ones.
    pub relabel: Vec<Symbol>,
    pub pair: AsymptoticPair,
}

/// Brings a pair with the affine flip condition to the ordered flip condition.
pub fn normalize_affine(pair: &AsymptoticPair) -> Result<Normalization> {
    let report = check_affine_flip(pair)?;
    if !report.holds {
        return Err(Error::FlipConditionFails(report.reason.unwrap_or_default()));
    }
    let d = pair.dim();
    let inv = inverse_on(pair)?.expect("checked bijective");
    let sigma = flip_permutation(pair, &inv)?;
    let mut sigma_inv = vec![0 as Symbol; d + 1];
    for (a, &b) in sigma.iter().enumerate() {
        sigma_inv[b as usize] = a as Symbol;
    }
    // τ(j) = σ^{-j}(0), so that σ(τ(j)) = τ(j - 1)
    let mut tau = vec![0 as Symbol; d + 1];
    for j in 1..=d {
        tau[j] = sigma_inv[tau[j - 1] as usize];
    }
    let f: Vec<&Point> = tau.iter().map(|&s| &inv[s as usize]).collect();
    // B(n) = f_0 + M n with M(-e_i) = f_i - f_0
    let cols: Vec<Point> = (1..=d).map(|i| f[0] - f[i]).collect();
    let matrix: Vec<Vec<i64>> = (0..d).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    let b = AffineMap::new(matrix, f[0].clone())?;
    let mut tau_inv = vec![0 as Symbol; d + 1];
    for (j, &s) in tau.iter().enumerate() {
        tau_inv[s as usize] = j as Symbol;
    }
    let moved = pair.transformed(&b).relabeled(&tau_inv);
    Ok(Normalization {
        map: b.inverse(),
        relabel: tau,
        pair: moved,
    })
}

/// `π ∘ c_α ∘ ℓ_{0, e_1^⊥}` beside `c_{(α_2, ..., α_d)}` on a window.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionReport {
    pub restricted: Grid,
    pub reduced: Grid,
    pub mismatches: Vec<Point>,
}

impl ReductionReport {
    pub fn equal(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// One step of dimension reduction for an ordered slope, compared on the
/// box `lo ..= hi` of `Z^{d-1}`.
pub fn reduction_check(slope: &SlopeVector, side: Side, lo: &[i64], hi: &[i64]) -> Result<ReductionReport> {
    let d = slope.dim();
    if d < 2 {
        return Err(Error::InvalidArgument("reduction needs d >= 2".into()));
    }
    if !slope.is_ordered() {
        return Err(Error::InvalidArgument(
            "slope is not descending; normalize the pair first".into(),
        ));
    }
    let c: Config = Arc::new(SturmianConfig::characteristic(slope.clone(), side));
    let restricted = restrict_sublattice(&project_pi(&c), Point::zero(d), e1_perp(d))?;
    let reduced = SturmianConfig::characteristic(slope.tail()?, side);
    let a = restricted.sample(lo, hi)?;
    let b = reduced.sample(lo, hi)?;
    let mismatches = a
        .points()
        .into_iter()
        .zip(a.data().iter().zip(b.data()))
        .filter(|(_, (u, v))| u != v)
        .map(|(p, _)| p)
        .collect();
    Ok(ReductionReport {
        restricted: a,
        reduced: b,
        mismatches,
    })
}

/// A vector `v` with `|v|_∞ ≤ radius` and `y = σ^v(x)` on a window around `F`.
pub fn detect_shift_relation(pair: &AsymptoticPair, radius: i64, margin: i64) -> Result<Option<Point>> {
    let d = pair.dim();
    let (lo, hi) = pair
        .difference_set
        .bounding_box()
        .unwrap_or((vec![0; d], vec![0; d]));
    let r = radius + margin;
    let wlo: Vec<i64> = lo.iter().map(|v| v - r).collect();
    let whi: Vec<i64> = hi.iter().map(|v| v + r).collect();
    let xlo: Vec<i64> = wlo.iter().map(|v| v - radius).collect();
    let xhi: Vec<i64> = whi.iter().map(|v| v + radius).collect();
    let gx = pair.x.sample(&xlo, &xhi)?;
    let gy = pair.y.sample(&wlo, &whi)?;
    let pts = gy.points();
    let mut found = None;
    for_each_in_box(&vec![-radius; d], &vec![radius; d], |v| {
        if found.is_some() {
            return;
        }
        let ok = pts
            .iter()
            .zip(gy.data())
            .all(|(n, &b)| gx.get(&(n + &v)) == Some(b));
        if ok {
            found = Some(v);
        }
    });
    Ok(found)
}

#[derive(Debug, Clone, Serialize)]
pub struct EtaleReport {
    /// Least index from which every `x_n`, `y_n` agrees with the last one on the window.
    pub stabilization_index: usize,
    /// Whether at least the last two members agree on the window.
    pub stabilized: bool,
    /// `∪_{n ≥ N} F_n` when it lies inside the window.
    pub uniform_difference_set: Option<Support>,
    pub limit_x: Grid,
    pub limit_y: Grid,
    /// Where the limiting patches differ.
    pub limit_difference: Support,
}

impl EtaleReport {
    pub fn is_etale(&self) -> bool {
        self.stabilized && self.uniform_difference_set.is_some()
    }
}

/// Finite-scale check of étale convergence of a sequence of pairs.
pub fn etale_consistency(seq: &[AsymptoticPair], lo: &[i64], hi: &[i64]) -> Result<EtaleReport> {
    let last = seq
        .last()
        .ok_or_else(|| Error::InvalidArgument("empty sequence".into()))?;
    let d = last.dim();
    let grids: Vec<(Grid, Grid)> = seq
        .par_iter()
        .map(|p| Ok((p.x.sample(lo, hi)?, p.y.sample(lo, hi)?)))
        .collect::<Result<Vec<_>>>()?;
    let (lx, ly) = grids.last().expect("nonempty").clone();
    let mut n0 = grids.len() - 1;
    while n0 > 0 && grids[n0 - 1].0 == lx && grids[n0 - 1].1 == ly {
        n0 -= 1;
    }
    let union = seq[n0..]
        .iter()
        .fold(Support::empty(d), |acc, p| acc.union(p.difference_set()));
    let inside = union
        .iter()
        .all(|p| (0..d).all(|i| p[i] >= lo[i] && p[i] <= hi[i]));
    let diff: Vec<Point> = lx
        .points()
        .into_iter()
        .zip(lx.data().iter().zip(ly.data()))
        .filter(|(_, (a, b))| a != b)
        .map(|(p, _)| p)
        .collect();
    Ok(EtaleReport {
        stabilization_index: n0,
        stabilized: n0 + 1 < grids.len(),
        uniform_difference_set: if inside { Some(union) } else { None },
        limit_x: lx,
        limit_y: ly,
        limit_difference: Support::new(d, diff)?,
    })
}

/// Symbol counts on a box.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Frequencies {
    pub counts: Vec<u64>,
    pub total: u64,
}

impl Frequencies {
    pub fn ratio(&self, i: usize) -> Ratio<u64> {
        Ratio::new(self.counts[i], self.total.max(1))
    }

    pub fn as_float<F: num_traits::Float>(&self, i: usize) -> F {
        let c = F::from(self.counts[i]).expect("count fits a float");
        let t = F::from(self.total.max(1)).expect("total fits a float");
        c / t
    }
}

/// Empirical symbol frequencies of `x` on the box `lo ..= hi`.
pub fn frequencies(x: &dyn Configuration, lo: &[i64], hi: &[i64]) -> Result<Frequencies> {
    let g = x.sample(lo, hi)?;
    let mut counts = vec![0u64; x.alphabet_size()];
    for &v in g.data() {
        if v as usize >= counts.len() {
            counts.resize(v as usize + 1, 0);
        }
        counts[v as usize] += 1;
    }
    Ok(Frequencies {
        counts,
        total: g.len() as u64,
    })
}

/// Patterns over `S` seen with `u ∈ [lo, hi]`.
pub fn scan_language(x: &dyn Configuration, s: &Support, lo: &[i64], hi: &[i64]) -> Result<BTreeSet<Pattern>> {
    let d = x.dim();
    let Some((slo, shi)) = s.bounding_box() else {
        return Ok(BTreeSet::from([Pattern::empty(d)]));
    };
    let glo: Vec<i64> = (0..d).map(|i| lo[i] + slo[i]).collect();
    let ghi: Vec<i64> = (0..d).map(|i| hi[i] + shi[i]).collect();
    let g = x.sample(&glo, &ghi)?;
    g.scan(s)
        .into_iter()
        .map(|v| Pattern::new(s.clone(), v).map_err(Error::from))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct RecurrenceReport {
    pub patterns: usize,
    pub subwindows: usize,
    /// Corners of subwindows missing some pattern, with that pattern.
    pub failures: Vec<(Point, Pattern)>,
}

impl RecurrenceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Every subwindow of side `sub` inside a sample of side `side` contains
/// every pattern over `S` that the sample contains.
pub fn uniform_recurrence_smoke(
    x: &dyn Configuration,
    s: &Support,
    side: usize,
    sub: usize,
) -> Result<RecurrenceReport> {
    let d = x.dim();
    let g = x.sample(&vec![0; d], &vec![side as i64 - 1; d])?;
    let Some((_, shi)) = s.bounding_box() else {
        return Err(Error::InvalidArgument("empty support".into()));
    };
    // occurrence corners u range over [0, side - 1 - shi]
    let ushape: Vec<usize> = (0..d).map(|i| side - shi[i] as usize).collect();
    let mut by_pattern: BTreeMap<Vec<Symbol>, Vec<u32>> = BTreeMap::new();
    let total: usize = ushape.iter().product();
    let ust = strides_of(&ushape);
    g.for_each_occurrence(s, |u, vals| {
        let idx: usize = (0..d).map(|i| u[i] as usize * ust[i]).sum();
        by_pattern
            .entry(vals.to_vec())
            .or_insert_with(|| vec![0; total])[idx] = 1;
    });
    let wshape = vec![side - sub + 1; d];
    let subwindows = wshape.iter().product();
    let mut failures = Vec::new();
    for (vals, ind) in &by_pattern {
        let prefix = prefix_sums(ind, &ushape);
        let span: Vec<usize> = (0..d).map(|i| sub - shi[i] as usize).collect();
        for_each_in_box(&vec![0; d], &wshape.iter().map(|&w| w as i64 - 1).collect::<Vec<_>>(), |c| {
            if failures.len() >= 16 {
                return;
            }
            let lo: Vec<usize> = (0..d).map(|i| c[i] as usize).collect();
            let hi: Vec<usize> = (0..d).map(|i| lo[i] + span[i]).collect();
            if box_sum(&prefix, &ushape, &lo, &hi) == 0 {
                failures.push((c.clone(), Pattern::new(s.clone(), vals.clone()).expect("sized")));
            }
        });
    }
    Ok(RecurrenceReport {
        patterns: by_pattern.len(),
        subwindows,
        failures,
    })
}

fn strides_of(shape: &[usize]) -> Vec<usize> {
    let d = shape.len();
    let mut st = vec![1usize; d];
    for i in (0..d.saturating_sub(1)).rev() {
        st[i] = st[i + 1] * shape[i + 1];
    }
    st
}

/// Inclusive prefix sums on a grid of shape `shape + 1` (with a zero border).
fn prefix_sums(ind: &[u32], shape: &[usize]) -> Vec<u32> {
    let d = shape.len();
    let pshape: Vec<usize> = shape.iter().map(|s| s + 1).collect();
    let pst = strides_of(&pshape);
    let st = strides_of(shape);
    let mut p = vec![0u32; pshape.iter().product()];
    for_each_in_box(&vec![0; d], &shape.iter().map(|&s| s as i64 - 1).collect::<Vec<_>>(), |u| {
        let src: usize = (0..d).map(|i| u[i] as usize * st[i]).sum();
        let dst: usize = (0..d).map(|i| (u[i] as usize + 1) * pst[i]).sum();
        p[dst] = ind[src];
    });
    for axis in 0..d {
        for_each_in_box(&vec![0; d], &pshape.iter().map(|&s| s as i64 - 1).collect::<Vec<_>>(), |u| {
            if u[axis] > 0 {
                let idx: usize = (0..d).map(|i| u[i] as usize * pst[i]).sum();
                p[idx] += p[idx - pst[axis]];
            }
        });
    }
    p
}

/// Sum of the indicator over `lo <= u < hi`.
fn box_sum(p: &[u32], shape: &[usize], lo: &[usize], hi: &[usize]) -> i64 {
    let d = shape.len();
    let pshape: Vec<usize> = shape.iter().map(|s| s + 1).collect();
    let pst = strides_of(&pshape);
    let mut total = 0i64;
    for mask in 0..(1usize << d) {
        let mut idx = 0;
        let mut sign = 1i64;
        for i in 0..d {
            if mask >> i & 1 == 1 {
                idx += lo[i] * pst[i];
                sign = -sign;
            } else {
                idx += hi[i].min(shape[i]) * pst[i];
            }
        }
        total += sign * p[idx] as i64;
    }
    total
}
