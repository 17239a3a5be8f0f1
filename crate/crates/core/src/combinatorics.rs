//! Pattern complexity, extension graphs and bispecial patterns.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{Pattern, Point, Support, Symbol};
use crate::pairs::{scan_language, AsymptoticPair, Configuration};
use crate::sturmian::{language, SlopeVector};

/// How a language was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Evidence {
    /// Exact, through the bijection `F - S → L_S`.
    Exact,
    /// Scanned on a finite window; a lower bound on the true language.
    Windowed,
}

/// Anything that can list `L_S(x, y)` for finite supports `S`.
pub trait LanguageSource: Sync {
    fn dim(&self) -> usize;
    fn evidence(&self) -> Evidence;
    fn language(&self, s: &Support) -> Result<Arc<BTreeSet<Pattern>>>;
}

/// The language of `c_α` (equal to that of `c'_α`), exact on connected supports.
pub struct ExactSturmian {
    slope: SlopeVector,
    cache: Mutex<HashMap<Support, Arc<BTreeSet<Pattern>>>>,
}

impl ExactSturmian {
    pub fn new(slope: SlopeVector) -> Self {
        ExactSturmian {
            slope,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn slope(&self) -> &SlopeVector {
        &self.slope
    }
}

impl LanguageSource for ExactSturmian {
    fn dim(&self) -> usize {
        self.slope.dim()
    }

    fn evidence(&self) -> Evidence {
        Evidence::Exact
    }

    fn language(&self, s: &Support) -> Result<Arc<BTreeSet<Pattern>>> {
        if let Some(l) = self.cache.lock().expect("cache lock").get(s) {
            return Ok(l.clone());
        }
        let l: Arc<BTreeSet<Pattern>> = Arc::new(language(&self.slope, s)?.into_iter().collect());
        self.cache
            .lock()
            .expect("cache lock")
            .insert(s.clone(), l.clone());
        Ok(l)
    }
}

/// `L_S(x) ∪ L_S(y)` scanned on a box of occurrence positions.
pub struct WindowedPair {
    pair: AsymptoticPair,
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl WindowedPair {
    pub fn new(pair: AsymptoticPair, lo: Vec<i64>, hi: Vec<i64>) -> Self {
        WindowedPair { pair, lo, hi }
    }
}

impl LanguageSource for WindowedPair {
    fn dim(&self) -> usize {
        self.pair.dim()
    }

    fn evidence(&self) -> Evidence {
        Evidence::Windowed
    }

    fn language(&self, s: &Support) -> Result<Arc<BTreeSet<Pattern>>> {
        let mut l = scan_language(self.pair.x.as_ref(), s, &self.lo, &self.hi)?;
        l.extend(scan_language(self.pair.y.as_ref(), s, &self.lo, &self.hi)?);
        Ok(Arc::new(l))
    }
}

pub fn complexity(source: &dyn LanguageSource, s: &Support) -> Result<usize> {
    Ok(source.language(s)?.len())
}

/// `m_1 ⋯ m_d (1 + Σ 1/m_i)` for the box of side lengths `m`.
pub fn rectangular_complexity(m: &[u64]) -> u64 {
    let prod: u64 = m.iter().product();
    let sum: u64 = (0..m.len())
        .map(|i| {
            m.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, v)| v)
                .product::<u64>()
        })
        .sum();
    prod + sum
}

fn check_position(s: &Support, pos: &Point) -> Result<()> {
    if s.contains(pos) {
        return Err(Error::InvalidArgument(format!("position {} lies in the support", pos)));
    }
    Ok(())
}

/// `E^pos(w)`: symbols `a` with `w ∪ {pos ↦ a}` in the language.
pub fn extensions(source: &dyn LanguageSource, w: &Pattern, pos: &Point) -> Result<BTreeSet<Symbol>> {
    let s = w.support();
    check_position(s, pos)?;
    let big = s.with_point(pos.clone());
    let lang = source.language(&big)?;
    Ok(lang
        .iter()
        .filter(|p| p.restrict(s).as_ref() == Some(w))
        .map(|p| p.get(pos).expect("position in support"))
        .collect())
}

/// The bipartite graph on `E^ℓ(w) ⊔ E^r(w)` with edge set `E^{ℓ,r}(w)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionGraph {
    pub left: BTreeSet<Symbol>,
    pub right: BTreeSet<Symbol>,
    pub edges: BTreeSet<(Symbol, Symbol)>,
}

/// Sign of the multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Kind {
    Strong,
    Neutral,
    Weak,
}

impl ExtensionGraph {
    pub fn multiplicity(&self) -> i64 {
        self.edges.len() as i64 - self.left.len() as i64 - self.right.len() as i64 + 1
    }

    pub fn kind(&self) -> Kind {
        match self.multiplicity() {
            m if m > 0 => Kind::Strong,
            0 => Kind::Neutral,
            _ => Kind::Weak,
        }
    }

    /// Connected components, counting isolated vertices.
    pub fn components(&self) -> usize {
        let (left, right) = self.index_maps();
        let n = left.len() + right.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while p[r] != r {
                r = p[r];
            }
            let mut j = i;
            while p[j] != r {
                let next = p[j];
                p[j] = r;
                j = next;
            }
            r
        }
        let mut comps = n;
        for (a, b) in &self.edges {
            let (Some(&i), Some(&j)) = (left.get(a), right.get(b)) else {
                continue;
            };
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri] = rj;
                comps -= 1;
            }
        }
        comps
    }

    /// Cycle detection by depth-first search, independent of edge counting.
    pub fn is_acyclic(&self) -> bool {
        let (left, right) = self.index_maps();
        let n = left.len() + right.len();
        let mut adj = vec![Vec::new(); n];
        for (k, (a, b)) in self.edges.iter().enumerate() {
            if let (Some(&i), Some(&j)) = (left.get(a), right.get(b)) {
                adj[i].push((j, k));
                adj[j].push((i, k));
            }
        }
        let mut visited = vec![false; n];
        for root in 0..n {
            if visited[root] {
                continue;
            }
            // (vertex, edge used to reach it)
            let mut stack = vec![(root, usize::MAX)];
            while let Some((v, via)) = stack.pop() {
                if visited[v] {
                    return false;
                }
                visited[v] = true;
                for &(u, e) in &adj[v] {
                    if e != via {
                        if visited[u] {
                            return false;
                        }
                        stack.push((u, e));
                    }
                }
            }
        }
        true
    }

    fn index_maps(&self) -> (BTreeMap<Symbol, usize>, BTreeMap<Symbol, usize>) {
        let left: BTreeMap<Symbol, usize> = self.left.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let off = left.len();
        let right = self
            .right
            .iter()
            .enumerate()
            .map(|(i, &b)| (b, off + i))
            .collect();
        (left, right)
    }
}

pub fn extension_graph(
    source: &dyn LanguageSource,
    w: &Pattern,
    l: &Point,
    r: &Point,
) -> Result<ExtensionGraph> {
    if l == r {
        return Err(Error::InvalidArgument("left and right positions coincide".into()));
    }
    let s = w.support();
    check_position(s, l)?;
    check_position(s, r)?;
    let both = s.with_point(l.clone()).with_point(r.clone());
    let lang = source.language(&both)?;
    let edges = lang
        .iter()
        .filter(|p| p.restrict(s).as_ref() == Some(w))
        .map(|p| (p.get(l).expect("in support"), p.get(r).expect("in support")))
        .collect();
    Ok(ExtensionGraph {
        left: extensions(source, w, l)?,
        right: extensions(source, w, r)?,
        edges,
    })
}

/// Some `t` with `{t + ℓ, t + r} ⊆ F` and `(t + S) ∩ F = ∅`; never for empty `S`.
pub fn is_evil_triple(s: &Support, l: &Point, r: &Point, f: &Support) -> Option<Point> {
    if s.is_empty() {
        return None;
    }
    f.iter()
        .map(|a| a - l)
        .filter(|t| f.contains(&(t + r)))
        .find(|t| !s.translate(t).intersects(f))
}

/// `σ^t(x)|_S` for the `t` of an evil triple.
pub fn evil_pattern(
    x: &dyn Configuration,
    s: &Support,
    l: &Point,
    r: &Point,
    f: &Support,
) -> Result<Option<Pattern>> {
    match is_evil_triple(s, l, r, f) {
        Some(t) => Ok(Some(x.pattern_at(&t, s)?)),
        None => Ok(None),
    }
}

/// One line of a bispecial scan.
#[derive(Debug, Clone, Serialize)]
pub struct MultiplicityRecord {
    pub support: Support,
    pub left: Point,
    pub right: Point,
    pub pattern: Pattern,
    pub e_left: usize,
    pub e_right: usize,
    pub e_both: usize,
    pub multiplicity: i64,
    pub components: usize,
    pub acyclic: bool,
    pub evil: bool,
    pub evidence: Evidence,
}

impl MultiplicityRecord {
    pub fn header() -> &'static str {
        "support\tleft\tright\tpattern\t|E^l|\t|E^r|\t|E^lr|\tm\tcomponents\tevil"
    }

    pub fn to_tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.support,
            self.left,
            self.right,
            self.pattern,
            self.e_left,
            self.e_right,
            self.e_both,
            self.multiplicity,
            self.components,
            self.evil
        )
    }
}

/// Records for every `w ∈ L_S` with at least two left and two right extensions.
///
/// `evil_reference` supplies `x` and `F` to flag the evil pattern, if any.
pub fn bispecial_scan(
    source: &dyn LanguageSource,
    s: &Support,
    l: &Point,
    r: &Point,
    evil_reference: Option<(&dyn Configuration, &Support)>,
) -> Result<Vec<MultiplicityRecord>> {
    Ok(multiplicity_records(source, s, l, r, evil_reference)?
        .into_iter()
        .filter(|rec| rec.e_left >= 2 && rec.e_right >= 2)
        .collect())
}

/// Records for every `w ∈ L_S`, bispecial or not.
pub fn multiplicity_records(
    source: &dyn LanguageSource,
    s: &Support,
    l: &Point,
    r: &Point,
    evil_reference: Option<(&dyn Configuration, &Support)>,
) -> Result<Vec<MultiplicityRecord>> {
    if l == r {
        return Err(Error::InvalidArgument("left and right positions coincide".into()));
    }
    check_position(s, l)?;
    check_position(s, r)?;
    let evil = match evil_reference {
        Some((x, f)) => evil_pattern(x, s, l, r, f)?,
        None => None,
    };
    let sl = s.with_point(l.clone());
    let sr = s.with_point(r.clone());
    let slr = sl.with_point(r.clone());
    // group each extended language by its restriction to S in one pass
    let mut graphs: BTreeMap<Pattern, ExtensionGraph> = source
        .language(s)?
        .iter()
        .map(|w| {
            (
                w.clone(),
                ExtensionGraph {
                    left: BTreeSet::new(),
                    right: BTreeSet::new(),
                    edges: BTreeSet::new(),
                },
            )
        })
        .collect();
    let mut group = |big: &Support, f: &mut dyn FnMut(&mut ExtensionGraph, &Pattern)| -> Result<()> {
        for p in source.language(big)?.iter() {
            let w = p.restrict(s).expect("S is contained in the extension");
            if let Some(g) = graphs.get_mut(&w) {
                f(g, p);
            }
        }
        Ok(())
    };
    group(&sl, &mut |g, p| {
        g.left.insert(p.get(l).expect("in support"));
    })?;
    group(&sr, &mut |g, p| {
        g.right.insert(p.get(r).expect("in support"));
    })?;
    group(&slr, &mut |g, p| {
        g.edges
            .insert((p.get(l).expect("in support"), p.get(r).expect("in support")));
    })?;
    Ok(graphs
        .into_iter()
        .map(|(w, g)| MultiplicityRecord {
            support: s.clone(),
            left: l.clone(),
            right: r.clone(),
            e_left: g.left.len(),
            e_right: g.right.len(),
            e_both: g.edges.len(),
            multiplicity: g.multiplicity(),
            components: g.components(),
            acyclic: g.is_acyclic(),
            evil: evil.as_ref() == Some(&w),
            evidence: source.evidence(),
            pattern: w,
        })
        .collect())
}

/// Both sides of `Σ_w m(w) = |L_{S∪{ℓ,r}}| - |L_{S∪{ℓ}}| - |L_{S∪{r}}| + |L_S|`.
pub fn summation_identity(
    source: &dyn LanguageSource,
    s: &Support,
    l: &Point,
    r: &Point,
) -> Result<(i64, i64)> {
    let lhs = multiplicity_records(source, s, l, r, None)?
        .iter()
        .map(|rec| rec.multiplicity)
        .sum();
    let sl = s.with_point(l.clone());
    let sr = s.with_point(r.clone());
    let slr = sl.with_point(r.clone());
    let size = |t: &Support| -> Result<i64> { Ok(source.language(t)?.len() as i64) };
    let rhs = size(&slr)? - size(&sl)? - size(&sr)? + size(s)?;
    Ok((lhs, rhs))
}

/// Positions `ℓ ≠ r` outside `S` such that `S ∪ {ℓ}`, `S ∪ {r}` and
/// `S ∪ {ℓ, r}` are connected.
pub fn path_positions(s: &Support) -> Vec<(Point, Point)> {
    let mut boundary = BTreeSet::new();
    for p in s.iter() {
        for q in p.neighbors() {
            if !s.contains(&q) {
                boundary.insert(q);
            }
        }
    }
    let boundary: Vec<Point> = boundary.into_iter().collect();
    let mut out = Vec::new();
    for a in &boundary {
        for b in &boundary {
            if a != b {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// The edge sets `Γ_ℓ(w)`, `Γ_r(w)`, `Γ_⋆(w)` classifying how occurrences of
/// extensions of `w` in `x` meet the difference set. Diagnostic only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaSets {
    pub left: BTreeSet<(Symbol, Symbol)>,
    pub right: BTreeSet<(Symbol, Symbol)>,
    pub star: BTreeSet<(Symbol, Symbol)>,
}

pub fn gamma_sets(pair: &AsymptoticPair, w: &Pattern, l: &Point, r: &Point) -> Result<GammaSets> {
    let f = pair.difference_set();
    let s = w.support();
    let all = s.with_point(l.clone()).with_point(r.clone());
    let sl = s.with_point(l.clone());
    let sr = s.with_point(r.clone());
    let mut out = GammaSets {
        left: BTreeSet::new(),
        right: BTreeSet::new(),
        star: BTreeSet::new(),
    };
    // every condition forces t + (S ∪ {ℓ, r}) to meet F
    for t in f.minus(&all).iter() {
        if pair.x.pattern_at(t, s)? != *w {
            continue;
        }
        let edge = (pair.x.at(&(t + l))?, pair.x.at(&(t + r))?);
        let in_f = |p: &Point| f.contains(&(t + p));
        let s_hits = s.translate(t).intersects(f);
        if in_f(l) && !sr.translate(t).intersects(f) {
            out.left.insert(edge);
        }
        if in_f(r) && !sl.translate(t).intersects(f) {
            out.right.insert(edge);
        }
        if s_hits || (in_f(l) && in_f(r)) {
            out.star.insert(edge);
        }
    }
    Ok(out)
}

/// `|{(a, f(a))} ∪ {(π(a), f(a))}| ≥ |A| + |B|` for `π` cyclic on `U`,
/// `A ⊊ U` and `f: A → B` onto.
pub fn cyclic_permutation_bound(pi: &[usize], a: &[usize], f: &[usize]) -> bool {
    let b: BTreeSet<usize> = f.iter().copied().collect();
    let mut pairs = BTreeSet::new();
    for (&x, &y) in a.iter().zip(f) {
        pairs.insert((x, y));
        pairs.insert((pi[x], y));
    }
    pairs.len() >= a.len() + b.len()
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct LemmaReport {
    pub cases: u64,
    pub failures: u64,
}

/// Exhaustive check of [`cyclic_permutation_bound`] for `|U| ≤ max_u`.
pub fn check_cyclic_permutation_lemma(max_u: usize) -> LemmaReport {
    let mut rep = LemmaReport::default();
    for n in 1..=max_u {
        for pi in cyclic_permutations(n) {
            for mask in 0..(1u32 << n) - 1 {
                let a: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                let k = a.len();
                // every f: A → {0..k-1}; its image plays the role of B
                let total = (k as u64).pow(k as u32).max(1);
                for code in 0..total {
                    let mut c = code;
                    let f: Vec<usize> = (0..k)
                        .map(|_| {
                            let v = (c % k as u64) as usize;
                            c /= k as u64;
                            v
                        })
                        .collect();
                    rep.cases += 1;
                    if !cyclic_permutation_bound(&pi, &a, &f) {
                        rep.failures += 1;
                    }
                }
            }
        }
    }
    rep
}

/// All permutations of `{0..n-1}` consisting of a single `n`-cycle.
pub fn cyclic_permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![vec![0]];
    }
    // cycles (0 a_1 ... a_{n-1}) for all orders of 1..n-1
    let rest: Vec<usize> = (1..n).collect();
    let mut out = Vec::new();
    permute(&rest, &mut Vec::new(), &mut vec![false; n - 1], &mut |order| {
        let mut pi = vec![0; n];
        let mut prev = 0;
        for &v in order {
            pi[prev] = v;
            prev = v;
        }
        pi[prev] = 0;
        out.push(pi);
    });
    out
}

fn permute(items: &[usize], acc: &mut Vec<usize>, used: &mut [bool], f: &mut impl FnMut(&[usize])) {
    if acc.len() == items.len() {
        f(acc);
        return;
    }
    for i in 0..items.len() {
        if !used[i] {
            used[i] = true;
            acc.push(items[i]);
            permute(items, acc, used, f);
            acc.pop();
            used[i] = false;
        }
    }
}

/// `m ≥ 1 - c` with equality iff acyclic, on `trials` random bipartite graphs.
pub fn check_multiplicity_bound<R: Rng>(rng: &mut R, trials: usize, max_side: u8) -> LemmaReport {
    let mut rep = LemmaReport::default();
    for _ in 0..trials {
        let nl = rng.gen_range(1..=max_side);
        let nr = rng.gen_range(1..=max_side);
        let density: f64 = rng.gen();
        let mut edges = BTreeSet::new();
        while edges.is_empty() {
            for a in 0..nl {
                for b in 0..nr {
                    if rng.gen_bool(density) {
                        edges.insert((a, b));
                    }
                }
            }
        }
        // extension graphs have no isolated vertices
        let left: BTreeSet<Symbol> = edges.iter().map(|e| e.0).collect();
        let right: BTreeSet<Symbol> = edges.iter().map(|e| e.1).collect();
        let g = ExtensionGraph { left, right, edges };
        let m = g.multiplicity();
        let c = g.components() as i64;
        rep.cases += 1;
        if m < 1 - c || ((m == 1 - c) != g.is_acyclic()) {
            rep.failures += 1;
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rectangular_formula() {
        assert_eq!(rectangular_complexity(&[2, 3]), 11);
        assert_eq!(rectangular_complexity(&[3, 3, 3]), 54);
        assert_eq!(rectangular_complexity(&[5, 5]), 35);
        assert_eq!(rectangular_complexity(&[7]), 8);
    }

    #[test]
    fn cyclic_permutation_count() {
        assert_eq!(cyclic_permutations(4).len(), 6);
        for pi in cyclic_permutations(5) {
            let mut i = 0;
            let mut steps = 0;
            loop {
                i = pi[i];
                steps += 1;
                if i == 0 {
                    break;
                }
            }
            assert_eq!(steps, 5);
        }
    }

    #[test]
    fn lemma_small_exhaustive() {
        let rep = check_cyclic_permutation_lemma(4);
        assert!(rep.cases > 0);
        assert_eq!(rep.failures, 0);
    }

    #[test]
    fn acyclicity_and_components() {
        let g = ExtensionGraph {
            left: [0, 1].into(),
            right: [0, 1].into(),
            edges: [(0, 0), (0, 1), (1, 0), (1, 1)].into(),
        };
        assert!(!g.is_acyclic());
        assert_eq!(g.components(), 1);
        assert_eq!(g.multiplicity(), 1);
        let h = ExtensionGraph {
            left: [1, 2].into(),
            right: [0, 1].into(),
            edges: [(1, 0), (2, 0), (2, 1)].into(),
        };
        assert!(h.is_acyclic());
        assert_eq!(h.multiplicity(), 0);
        assert_eq!(h.kind(), Kind::Neutral);
    }

    #[test]
    fn evil_triples_from_the_figure() {
        let f = Support::canonical_difference_set(2);
        let s = Support::rectangle(&[5, 3]);
        let p = |x: i64, y: i64| Point::new(&[x, y]);
        assert_eq!(is_evil_triple(&s, &p(4, 3), &p(5, 2), &f), Some(p(-5, -3)));
        assert_eq!(is_evil_triple(&s, &p(3, 3), &p(5, 2), &f), None);
        assert_eq!(is_evil_triple(&s, &p(-1, 0), &p(0, -1), &f), None);
        assert_eq!(is_evil_triple(&Support::empty(2), &p(0, 0), &p(1, 0), &f), None);
    }
}
