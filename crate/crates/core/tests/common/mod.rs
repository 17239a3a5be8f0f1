#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};


use sturmian::lattice::{Point, Support};
use sturmian::{Side, SlopeVector};

const BITS: u32 = 160;

/// A slope whose entries are `(p + q·√k) / r`, evaluated with fixed-point
/// integer square roots only.
#[derive(Debug, Clone)]
pub struct QuadSlope {
    pub entries: Vec<(i64, i64, u64, i64)>,
}

impl QuadSlope {
    pub fn new(entries: &[(i64, i64, u64, i64)]) -> Self {
        QuadSlope {
            entries: entries.to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn literal(&self) -> String {
        self.entries
            .iter()
            .map(|&(p, q, k, r)| format!("({} + {}*sqrt({}))/{}", p, q, k, r))
            .collect::<Vec<_>>()
            .join(", ")
    }

    pub fn slope(&self) -> SlopeVector {
        SlopeVector::new(SlopeVector::parse_entries(&self.literal()).unwrap()).unwrap()
    }

    pub fn approx(&self) -> Vec<f64> {
        self.entries
            .iter()
            .map(|&(p, q, k, r)| (p as f64 + q as f64 * (k as f64).sqrt()) / r as f64)
            .collect()
    }

    /// `2^BITS · (c·α_i)` rounded down, error in `(-2, 0]`.
    fn term(&self, i: usize, c: i64) -> BigInt {
        let (p, q, k, r) = self.entries[i];
        let one = BigInt::from(1) << BITS;
        let rat = BigInt::from(c) * BigInt::from(p) * &one;
        let m = BigInt::from(c) * BigInt::from(q);
        let sq = (&m * &m * BigInt::from(k) * &one * &one).sqrt();
        let irr = if m.is_negative() { -sq - 1 } else { sq };
        (rat + irr).div_floor(&BigInt::from(r))
    }

    /// `⌊Σ c_i α_i + e⌋` for integer `e`; panics when too close to call.
    pub fn floor_combination(&self, c: &[i64], e: i64) -> i64 {
        let one = BigInt::from(1) << BITS;
        let mut x = BigInt::from(e) * &one;
        for (i, &ci) in c.iter().enumerate() {
            if ci != 0 {
                x += self.term(i, ci);
            }
        }
        let slack = BigInt::from(2 * c.len() as i64 + 2);
        let (fl, rem) = x.div_mod_floor(&one);
        assert!(
            rem > slack && rem < &one - &slack,
            "oracle cannot decide the floor of {:?}·α + {}",
            c,
            e
        );
        fl.to_i64().unwrap()
    }

    fn ceil_combination(&self, c: &[i64], e: i64) -> i64 {
        let neg: Vec<i64> = c.iter().map(|v| -v).collect();
        -self.floor_combination(&neg, -e)
    }

    /// `c_α(n)` or `c'_α(n)` from the floor (ceiling) sum; `n ≠ 0`, `n ≠ -e_i`.
    pub fn eval(&self, side: Side, n: &[i64]) -> u8 {
        let d = self.dim();
        if n.iter().all(|&v| v == 0) {
            return match side {
                Side::Lower => 0,
                Side::Upper => d as u8,
            };
        }
        let round = |c: &[i64]| match side {
            Side::Lower => self.floor_combination(c, 0),
            Side::Upper => self.ceil_combination(c, 0),
        };
        let base = round(n);
        let mut s = 0;
        for i in 0..d {
            let mut c = n.to_vec();
            c[i] += 1;
            if c.iter().all(|&v| v == 0) {
                // α_i + n·α = 0
                s -= base;
            } else {
                s += round(&c) - base;
            }
        }
        s as u8
    }
}

pub fn fig1() -> QuadSlope {
    QuadSlope::new(&[(0, 1, 2, 2), (-4, 1, 19, 1)])
}

pub fn fig4() -> QuadSlope {
    QuadSlope::new(&[(-1, 1, 3, 1), (-1, 1, 2, 1)])
}

pub fn golden() -> QuadSlope {
    QuadSlope::new(&[(-1, 1, 5, 2)])
}

pub fn three_dim() -> QuadSlope {
    QuadSlope::new(&[(-1, 1, 3, 1), (-2, 1, 7, 1), (-1, 1, 2, 1)])
}

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

/// `(x, y) -> symbol` from a two-dimensional patch file.
pub fn read_grid(name: &str) -> BTreeMap<(i64, i64), u8> {
    let text = std::fs::read_to_string(data(name)).unwrap();
    text.lines()
        .skip(2)
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let v: Vec<i64> = l.split_whitespace().map(|t| t.parse().unwrap()).collect();
            ((v[0], v[1]), v[2] as u8)
        })
        .collect()
}

/// `F - S` by brute force.
pub fn minkowski(f: &Support, s: &Support) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    for a in f.iter() {
        for b in s.iter() {
            out.insert(a.coords().iter().zip(b.coords()).map(|(x, y)| x - y).collect());
        }
    }
    out
}

/// Patterns over `S` (as value vectors in support order) seen at positions
/// `u` with `lo <= u <= hi`, using `f` as the configuration.
pub fn brute_language(
    s: &Support,
    lo: &[i64],
    hi: &[i64],
    f: impl Fn(&[i64]) -> u8,
) -> BTreeSet<Vec<u8>> {
    let mut out = BTreeSet::new();
    let mut u = lo.to_vec();
    loop {
        out.insert(
            s.iter()
                .map(|p| {
                    let n: Vec<i64> = u.iter().zip(p.coords()).map(|(a, b)| a + b).collect();
                    f(&n)
                })
                .collect(),
        );
        let mut i = u.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if u[i] < hi[i] {
                u[i] += 1;
                break;
            }
            u[i] = lo[i];
        }
    }
}

pub fn pt(c: &[i64]) -> Point {
    Point::new(c)
}

pub fn is_zero(b: &BigInt) -> bool {
    b.is_zero()
}

/// Oracle values on the cube `[-r, r]^d`, computed once.
pub struct OracleGrid {
    pub d: usize,
    pub r: i64,
    values: Vec<u8>,
}

impl OracleGrid {
    pub fn new(q: &QuadSlope, side: Side, r: i64) -> Self {
        let d = q.dim();
        let w = (2 * r + 1) as usize;
        let mut values = Vec::with_capacity(w.pow(d as u32));
        let mut n = vec![-r; d];
        for _ in 0..w.pow(d as u32) {
            values.push(q.eval(side, &n));
            for i in (0..d).rev() {
                if n[i] < r {
                    n[i] += 1;
                    break;
                }
                n[i] = -r;
            }
        }
        OracleGrid { d, r, values }
    }

    pub fn get(&self, n: &[i64]) -> u8 {
        let w = 2 * self.r + 1;
        let mut idx = 0i64;
        for &c in n {
            assert!(c.abs() <= self.r, "{:?} outside the oracle grid", n);
            idx = idx * w + (c + self.r);
        }
        self.values[idx as usize]
    }
}

/// A random unimodular affine map with small entries.
pub fn random_affine<R: rand::Rng>(rng: &mut R, d: usize) -> sturmian::AffineMap {
    let mut m: Vec<Vec<i64>> = (0..d)
        .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..rng.gen_range(1..=4) {
        let i = rng.gen_range(0..d);
        let j = rng.gen_range(0..d);
        match rng.gen_range(0..3) {
            0 if i != j => {
                let k = rng.gen_range(-2..=2);
                for r in 0..d {
                    m[r][i] += k * m[r][j];
                }
            }
            1 => m.swap(i, j),
            _ => m[i].iter_mut().for_each(|v| *v = -*v),
        }
    }
    let t: Vec<i64> = (0..d).map(|_| rng.gen_range(-3..=3)).collect();
    sturmian::AffineMap::new(m, Point::new(&t)).unwrap()
}

/// A random permutation of `0..k`.
pub fn random_permutation<R: rand::Rng>(rng: &mut R, k: usize) -> Vec<u8> {
    use rand::seq::SliceRandom;
    let mut v: Vec<u8> = (0..k as u8).collect();
    v.shuffle(rng);
    v
}
