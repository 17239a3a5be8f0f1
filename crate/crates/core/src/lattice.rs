//! Lattice points, finite supports, patterns and affine maps of `Z^d`.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

/// A symbol of the alphabet `{0, ..., k-1}`.
pub type Symbol = u8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("support size guard exceeded: {requested} > {limit}")]
    GuardExceeded { requested: usize, limit: usize },
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(i128),
    #[error("vectors are linearly dependent")]
    LinearlyDependent,
    #[error("pattern has {values} values for a support of size {support}")]
    PatternLength { values: usize, support: usize },
    #[error("arithmetic overflow in lattice computation")]
    Overflow,
}

/// A point of `Z^d`. Ordering is lexicographic on coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point(pub SmallVec<[i64; 4]>);

impl Point {
    pub fn new(coords: &[i64]) -> Self {
        Point(SmallVec::from_slice(coords))
    }

    pub fn zero(d: usize) -> Self {
        Point(SmallVec::from_elem(0, d))
    }

    /// The standard basis vector `e_i`, with `i` counted from 1.
    pub fn unit(d: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= d, "basis index out of range");
        let mut p = Self::zero(d);
        p.0[i - 1] = 1;
        p
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn norm_inf(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    pub fn scale(&self, k: i64) -> Point {
        Point(self.0.iter().map(|&c| c * k).collect())
    }

    /// The `2d` nearest neighbours `self ± e_i`.
    pub fn neighbors(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.dim()).flat_map(move |i| {
            [-1i64, 1].into_iter().map(move |s| {
                let mut q = self.clone();
                q.0[i] += s;
                q
            })
        })
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

impl Index<usize> for Point {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl<'a> Add<&'a Point> for &'a Point {
    type Output = Point;
    fn add(self, o: &Point) -> Point {
        debug_assert_eq!(self.dim(), o.dim());
        Point(self.0.iter().zip(o.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a Point> for &'a Point {
    type Output = Point;
    fn sub(self, o: &Point) -> Point {
        debug_assert_eq!(self.dim(), o.dim());
        Point(self.0.iter().zip(o.0.iter()).map(|(a, b)| a - b).collect())
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        &self + &o
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        &self - &o
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point(self.0.iter().map(|c| -c).collect())
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        -&self
    }
}

/// A finite subset of `Z^d`, kept sorted and without repetitions.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Support {
    dim: usize,
    points: Vec<Point>,
}

impl Support {
    pub fn new(dim: usize, points: impl IntoIterator<Item = Point>) -> Result<Self, LatticeError> {
        if dim == 0 {
            return Err(LatticeError::ZeroDimension);
        }
        let mut pts: Vec<Point> = points.into_iter().collect();
        if let Some(p) = pts.iter().find(|p| p.dim() != dim) {
            return Err(LatticeError::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        pts.sort();
        pts.dedup();
        Ok(Support { dim, points: pts })
    }

    pub fn empty(dim: usize) -> Self {
        Support {
            dim,
            points: Vec::new(),
        }
    }

    pub fn singleton(p: Point) -> Self {
        Support {
            dim: p.dim(),
            points: vec![p],
        }
    }

    /// The box `[0, m_1) x ... x [0, m_d)`.
    pub fn rectangle(sizes: &[usize]) -> Self {
        let d = sizes.len();
        let mut pts = Vec::new();
        for_each_in_box(&vec![0; d], &sizes.iter().map(|&m| m as i64 - 1).collect::<Vec<_>>(), |p| {
            pts.push(p)
        });
        Support::new(d, pts).expect("box has consistent dimension")
    }

    /// The canonical difference set `{0, -e_1, ..., -e_d}`.
    pub fn canonical_difference_set(d: usize) -> Self {
        let mut pts = vec![Point::zero(d)];
        pts.extend((1..=d).map(|i| -Point::unit(d, i)));
        Support::new(d, pts).expect("consistent dimension")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.binary_search(p).is_ok()
    }

    /// Position of `p` in the sorted point list.
    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.points.binary_search(p).ok()
    }

    pub fn translate(&self, v: &Point) -> Support {
        // translation preserves lexicographic order
        Support {
            dim: self.dim,
            points: self.points.iter().map(|p| p + v).collect(),
        }
    }

    pub fn with_point(&self, p: Point) -> Support {
        let mut pts = self.points.clone();
        pts.push(p);
        Support::new(self.dim, pts).expect("consistent dimension")
    }

    pub fn union(&self, other: &Support) -> Support {
        Support::new(self.dim, self.points.iter().chain(other.points.iter()).cloned())
            .expect("consistent dimension")
    }

    pub fn intersects(&self, other: &Support) -> bool {
        self.points.iter().any(|p| other.contains(p))
    }

    /// The Minkowski difference `self - other = {a - b}`.
    pub fn minus(&self, other: &Support) -> Support {
        let pts = self
            .points
            .iter()
            .flat_map(|a| other.points.iter().map(move |b| a - b));
        Support::new(self.dim, pts).expect("consistent dimension")
    }

    pub fn lex_min(&self) -> Option<&Point> {
        self.points.first()
    }

    /// Translate so that the lexicographically least point is the origin.
    pub fn normalized(&self) -> Support {
        match self.lex_min() {
            Some(m) => self.translate(&-m),
            None => self.clone(),
        }
    }

    /// Connectivity in the nearest-neighbour graph of `Z^d`.
    pub fn is_connected(&self) -> bool {
        if self.points.len() <= 1 {
            return true;
        }
        let mut seen = vec![false; self.points.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = queue.pop_front() {
            for q in self.points[i].neighbors() {
                if let Some(j) = self.index_of(&q) {
                    if !seen[j] {
                        seen[j] = true;
                        count += 1;
                        queue.push_back(j);
                    }
                }
            }
        }
        count == self.points.len()
    }

    /// Per-coordinate minima and maxima, or `None` for the empty set.
    pub fn bounding_box(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let first = self.points.first()?;
        let mut lo = first.coords().to_vec();
        let mut hi = lo.clone();
        for p in &self.points {
            for i in 0..self.dim {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        Some((lo, hi))
    }

    pub fn radius(&self) -> i64 {
        self.points.iter().map(|p| p.norm_inf()).max().unwrap_or(0)
    }
}

impl fmt::Debug for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", p)?;
        }
        write!(f, "}}")
    }
}

/// Calls `f` on every point of the box `lo <= p <= hi`, in lexicographic order.
pub fn for_each_in_box(lo: &[i64], hi: &[i64], mut f: impl FnMut(Point)) {
    let d = lo.len();
    if (0..d).any(|i| lo[i] > hi[i]) {
        return;
    }
    let mut cur = Point::new(lo);
    loop {
        f(cur.clone());
        let mut i = d;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if cur.0[i] < hi[i] {
                cur.0[i] += 1;
                break;
            }
            cur.0[i] = lo[i];
        }
    }
}

/// A pattern: a finite support together with one symbol per point.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pattern {
    support: Support,
    values: Vec<Symbol>,
}

impl Pattern {
    pub fn new(support: Support, values: Vec<Symbol>) -> Result<Self, LatticeError> {
        if support.len() != values.len() {
            return Err(LatticeError::PatternLength {
                values: values.len(),
                support: support.len(),
            });
        }
        Ok(Pattern { support, values })
    }

    /// The empty pattern over `Z^d`.
    pub fn empty(d: usize) -> Self {
        Pattern {
            support: Support::empty(d),
            values: Vec::new(),
        }
    }

    pub fn from_fn(support: Support, mut f: impl FnMut(&Point) -> Symbol) -> Self {
        let values = support.iter().map(&mut f).collect();
        Pattern { support, values }
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn values(&self) -> &[Symbol] {
        &self.values
    }

    pub fn get(&self, p: &Point) -> Option<Symbol> {
        self.support.index_of(p).map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, Symbol)> {
        self.support.iter().zip(self.values.iter().copied())
    }

    /// Restriction to a subset of the support.
    pub fn restrict(&self, sub: &Support) -> Option<Pattern> {
        let values = sub.iter().map(|p| self.get(p)).collect::<Option<Vec<_>>>()?;
        Some(Pattern {
            support: sub.clone(),
            values,
        })
    }

    pub fn translate(&self, v: &Point) -> Pattern {
        Pattern {
            support: self.support.translate(v),
            values: self.values.clone(),
        }
    }
}

impl PartialOrd for Pattern {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pattern {
    fn cmp(&self, other: &Self) -> Ordering {
        self.support
            .points
            .cmp(&other.support.points)
            .then_with(|| self.values.cmp(&other.values))
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (p, v)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}:{}", p, v)?;
        }
        write!(f, "}}")
    }
}

/// An affine map `n -> M n + t` of `Z^d` with `M` in `GL_d(Z)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineMap {
    /// Row-major `d x d` matrix.
    matrix: Vec<Vec<i64>>,
    translation: Point,
}

impl AffineMap {
    pub fn new(matrix: Vec<Vec<i64>>, translation: Point) -> Result<Self, LatticeError> {
        let d = translation.dim();
        if matrix.len() != d {
            return Err(LatticeError::DimensionMismatch {
                expected: d,
                found: matrix.len(),
            });
        }
        if let Some(r) = matrix.iter().find(|r| r.len() != d) {
            return Err(LatticeError::DimensionMismatch {
                expected: d,
                found: r.len(),
            });
        }
        let det = determinant(&matrix);
        if det.abs() != 1 {
            return Err(LatticeError::NotUnimodular(det));
        }
        Ok(AffineMap {
            matrix,
            translation,
        })
    }

    pub fn identity(d: usize) -> Self {
        let matrix = (0..d)
            .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
            .collect();
        AffineMap {
            matrix,
            translation: Point::zero(d),
        }
    }

    pub fn translation_by(v: Point) -> Self {
        let mut a = Self::identity(v.dim());
        a.translation = v;
        a
    }

    pub fn dim(&self) -> usize {
        self.translation.dim()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn translation(&self) -> &Point {
        &self.translation
    }

    pub fn apply(&self, n: &Point) -> Point {
        let d = self.dim();
        Point(
            (0..d)
                .map(|i| {
                    self.translation[i]
                        + (0..d).map(|j| self.matrix[i][j] * n[j]).sum::<i64>()
                })
                .collect(),
        )
    }

    /// Only the linear part.
    pub fn apply_linear(&self, n: &Point) -> Point {
        let d = self.dim();
        Point(
            (0..d)
                .map(|i| (0..d).map(|j| self.matrix[i][j] * n[j]).sum::<i64>())
                .collect(),
        )
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let d = self.dim();
        let matrix = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).map(|k| self.matrix[i][k] * other.matrix[k][j]).sum())
                    .collect()
            })
            .collect();
        AffineMap {
            matrix,
            translation: self.apply(&other.translation),
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let inv = unimodular_inverse(&self.matrix).expect("matrix checked unimodular");
        let lin = AffineMap {
            matrix: inv,
            translation: Point::zero(self.dim()),
        };
        let t = -lin.apply(&self.translation);
        AffineMap {
            matrix: lin.matrix,
            translation: t,
        }
    }

    pub fn apply_support(&self, s: &Support) -> Support {
        Support::new(s.dim(), s.iter().map(|p| self.apply(p))).expect("consistent dimension")
    }
}

impl fmt::Debug for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AffineMap({:?} + {})", self.matrix, self.translation)
    }
}

/// Determinant of a small integer matrix by fraction-free elimination.
pub fn determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * a[n - 1][n - 1]
    }
}

/// Inverse of a unimodular matrix via cofactors.
pub fn unimodular_inverse(m: &[Vec<i64>]) -> Result<Vec<Vec<i64>>, LatticeError> {
    let n = m.len();
    let det = determinant(m);
    if det.abs() != 1 {
        return Err(LatticeError::NotUnimodular(det));
    }
    let mut inv = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i64>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| m[r][c]).collect())
                .collect();
            let cof = if (i + j) % 2 == 0 { 1 } else { -1 } * determinant(&minor);
            inv[j][i] = i64::try_from(cof * det).map_err(|_| LatticeError::Overflow)?;
        }
    }
    Ok(inv)
}

/// Rank of a list of integer vectors.
pub fn integer_rank(vectors: &[Point]) -> usize {
    let mut rows: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| v.coords().iter().map(|&c| c as i128).collect())
        .collect();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let (a, b) = (rows[rank][c], rows[r][c]);
                let g = num_integer::Integer::gcd(&a, &b);
                let (fa, fb) = (b / g, a / g);
                for k in 0..cols {
                    rows[r][k] = rows[r][k] * fb - rows[rank][k] * fa;
                }
                let g = rows[r].iter().fold(0i128, |acc, &x| num_integer::Integer::gcd(&acc, &x));
                if g > 1 {
                    rows[r].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Whether `vectors` form a basis of `Z^d`.
pub fn is_lattice_basis(vectors: &[Point]) -> bool {
    let d = match vectors.first() {
        Some(v) => v.dim(),
        None => return false,
    };
    if vectors.len() != d {
        return false;
    }
    let m: Vec<Vec<i64>> = (0..d)
        .map(|i| vectors.iter().map(|v| v[i]).collect())
        .collect();
    determinant(&m).abs() == 1
}

/// All connected supports of `Z^d` with at most `max_size` points whose
/// lexicographically least point is the origin, sorted by size and then by points.
///
/// Uses Redelmeier's method, so each support is produced exactly once.
pub fn enumerate_connected_supports(
    d: usize,
    max_size: usize,
    guard: usize,
) -> Result<Vec<Support>, LatticeError> {
    if d == 0 {
        return Err(LatticeError::ZeroDimension);
    }
    if max_size > guard {
        return Err(LatticeError::GuardExceeded {
            requested: max_size,
            limit: guard,
        });
    }
    let mut out = Vec::new();
    if max_size == 0 {
        return Ok(out);
    }
    let origin = Point::zero(d);
    let mut seen: HashSet<Point> = HashSet::from([origin.clone()]);
    let mut current = Vec::with_capacity(max_size);
    redelmeier(vec![origin], &mut current, &mut seen, max_size, d, &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.points.cmp(&b.points)));
    Ok(out)
}

fn redelmeier(
    mut untried: Vec<Point>,
    current: &mut Vec<Point>,
    seen: &mut HashSet<Point>,
    max_size: usize,
    d: usize,
    out: &mut Vec<Support>,
) {
    let origin = Point::zero(d);
    while let Some(cell) = untried.pop() {
        current.push(cell.clone());
        out.push(Support::new(d, current.iter().cloned()).expect("consistent dimension"));
        if current.len() < max_size {
            let mut added = Vec::new();
            for q in cell.neighbors() {
                if q > origin && !seen.contains(&q) {
                    seen.insert(q.clone());
                    added.push(q);
                }
            }
            let mut next = untried.clone();
            next.extend(added.iter().cloned());
            redelmeier(next, current, seen, max_size, d, out);
            for q in &added {
                seen.remove(q);
            }
        }
        current.pop();
    }
}

/// All boxes `[0,m_1) x ... x [0,m_d)` with volume at most `max_volume`.
pub fn enumerate_boxes(d: usize, max_volume: usize) -> Vec<Support> {
    fn rec(d: usize, left: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == d {
            out.push(acc.clone());
            return;
        }
        for m in 1..=left {
            acc.push(m);
            rec(d, left / m, acc, out);
            acc.pop();
        }
    }
    let mut shapes = Vec::new();
    rec(d, max_volume, &mut Vec::new(), &mut shapes);
    let mut out: Vec<Support> = shapes.iter().map(|s| Support::rectangle(s)).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.points.cmp(&b.points)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Point {
        Point::new(c)
    }

    #[test]
    fn small_enumeration_in_the_plane() {
        let all = enumerate_connected_supports(2, 2, 10).unwrap();
        let expected = vec![
            Support::new(2, [p(&[0, 0])]).unwrap(),
            Support::new(2, [p(&[0, 0]), p(&[0, 1])]).unwrap(),
            Support::new(2, [p(&[0, 0]), p(&[1, 0])]).unwrap(),
        ];
        assert_eq!(all, expected);
    }

    #[test]
    fn guard_is_enforced() {
        assert!(matches!(
            enumerate_connected_supports(2, 11, 10),
            Err(LatticeError::GuardExceeded { .. })
        ));
    }

    #[test]
    fn minkowski_difference_with_canonical_set() {
        let f = Support::canonical_difference_set(2);
        let s = Support::new(2, [p(&[0, 0]), p(&[1, 0])]).unwrap();
        let fs = f.minus(&s);
        assert_eq!(fs.len(), 5);
        assert!(fs.contains(&p(&[-2, 0])));
        assert!(fs.contains(&p(&[-1, -1])));
    }

    #[test]
    fn affine_inverse_round_trip() {
        let a = AffineMap::new(vec![vec![2, 1], vec![1, 1]], p(&[3, -2])).unwrap();
        let b = a.inverse();
        for q in [p(&[0, 0]), p(&[5, -7]), p(&[-1, 4])] {
            assert_eq!(b.apply(&a.apply(&q)), q);
            assert_eq!(a.compose(&b).apply(&q), q);
        }
        assert!(AffineMap::new(vec![vec![2, 0], vec![0, 1]], p(&[0, 0])).is_err());
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(determinant(&[vec![1, 2, 3], vec![0, 1, 4], vec![5, 6, 0]]), 1);
        assert_eq!(determinant(&[vec![2, 4], vec![1, 2]]), 0);
    }

    #[test]
    fn ranks() {
        assert_eq!(integer_rank(&[p(&[1, 2, 3]), p(&[2, 4, 6])]), 1);
        assert_eq!(integer_rank(&[p(&[1, 0, 0]), p(&[0, 1, 0])]), 2);
        assert!(is_lattice_basis(&[p(&[1, 1]), p(&[0, 1])]));
        assert!(!is_lattice_basis(&[p(&[2, 0]), p(&[0, 1])]));
    }

    #[test]
    fn connectivity() {
        assert!(Support::rectangle(&[3, 2]).is_connected());
        assert!(!Support::new(2, [p(&[0, 0]), p(&[1, 1])]).unwrap().is_connected());
        assert!(Support::empty(2).is_connected());
    }

    #[test]
    fn boxes() {
        let b = enumerate_boxes(2, 4);
        // 1x1,1x2,2x1,1x3,3x1,1x4,2x2,4x1
        assert_eq!(b.len(), 8);
    }
}
