//! Text formats: patches, supports and pair files.
//!
//! A patch file is
//!
//! ```text
//! dim 2
//! alphabet 3
//! -1 0 2
//! 0 0 1
//! ```
//!
//! with one `<coords> <symbol>` line per cell, sorted lexicographically.
//! A support file has the same header without `alphabet` and one point per
//! line. A pair file holds `X:` and `Y:` patch blocks, an `F:` support block
//! and optional `background:` lines:
//!
//! ```text
//! background: sturmian <slope> <intercept> <lower|upper>
//! background: constant <symbol>
//! ```
//!
//! Slope entries are comma separated and no token may contain whitespace.
//! A background line inside an `X:` or `Y:` block applies to that block;
//! anywhere else it applies to both. Lines starting with `#` are comments.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactreal::SurdReal;
use crate::lattice::{Pattern, Point, Support, Symbol};
use crate::pairs::{AsymptoticPair, ConstantConfig, Config, Configuration, Grid, Overridden};
use crate::sturmian::{Side, SlopeVector, SturmianConfig};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Comma-separated integers, e.g. `3,-1`.
pub fn parse_point(s: &str) -> Result<Point> {
    let coords: std::result::Result<Vec<i64>, _> =
        s.split(',').map(|t| t.trim().parse::<i64>()).collect();
    coords
        .map(|c| Point::new(&c))
        .map_err(|_| Error::InvalidArgument(format!("bad point '{}'", s)))
}

/// `box:3x2` for a rectangle at the origin, or `;`-separated points.
pub fn parse_support_spec(d: usize, s: &str) -> Result<Support> {
    let s = s.trim();
    if let Some(dims) = s.strip_prefix("box:") {
        let sizes = parse_shape(dims)?;
        if sizes.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: sizes.len(),
            });
        }
        return Ok(Support::rectangle(&sizes));
    }
    if s.is_empty() || s == "empty" {
        return Ok(Support::empty(d));
    }
    let pts = s.split(';').map(parse_point).collect::<Result<Vec<_>>>()?;
    Ok(Support::new(d, pts)?)
}

/// `3x2` as `[3, 2]`.
pub fn parse_shape(s: &str) -> Result<Vec<usize>> {
    s.split('x')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| Error::InvalidArgument(format!("bad shape '{}'", s)))
        })
        .collect()
}

/// A patch together with its declared alphabet size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatchFile {
    pub alphabet: usize,
    pub pattern: Pattern,
}

impl PatchFile {
    pub fn from_grid(grid: &Grid, alphabet: usize) -> Self {
        let pts = grid.points();
        let support = Support::new(grid.dim(), pts).expect("grid points share a dimension");
        let pattern = Pattern::new(support, grid.data().to_vec()).expect("one value per cell");
        PatchFile { alphabet, pattern }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<(usize, &str)> = content_lines(text).collect();
        parse_patch_lines(&lines, 0)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "dim {}", self.pattern.support().dim()).unwrap();
        writeln!(out, "alphabet {}", self.alphabet).unwrap();
        for (p, v) in self.pattern.iter() {
            for c in p.coords() {
                write!(out, "{} ", c).unwrap();
            }
            writeln!(out, "{}", v).unwrap();
        }
        out
    }
}

pub fn parse_support_file(text: &str) -> Result<Support> {
    let lines: Vec<(usize, &str)> = content_lines(text).collect();
    parse_support_lines(&lines, 0)
}

pub fn support_to_text(s: &Support) -> String {
    let mut out = String::new();
    writeln!(out, "dim {}", s.dim()).unwrap();
    for p in s.iter() {
        let coords: Vec<String> = p.coords().iter().map(|c| c.to_string()).collect();
        writeln!(out, "{}", coords.join(" ")).unwrap();
    }
    out
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn header(lines: &[(usize, &str)], idx: usize, key: &str, at: usize) -> Result<usize> {
    let (no, l) = lines
        .get(idx)
        .ok_or_else(|| parse_err(at, format!("missing '{}' line", key)))?;
    let rest = l
        .strip_prefix(key)
        .ok_or_else(|| parse_err(*no, format!("expected '{} <n>'", key)))?;
    rest.trim()
        .parse()
        .map_err(|_| parse_err(*no, format!("bad value for '{}'", key)))
}

fn integers(no: usize, l: &str) -> Result<Vec<i64>> {
    l.split_whitespace()
        .map(|t| t.parse::<i64>().map_err(|_| parse_err(no, format!("bad integer '{}'", t))))
        .collect()
}

fn parse_patch_lines(lines: &[(usize, &str)], at: usize) -> Result<PatchFile> {
    let d = header(lines, 0, "dim", at)?;
    let alphabet = header(lines, 1, "alphabet", at)?;
    if d == 0 || alphabet == 0 || alphabet > Symbol::MAX as usize + 1 {
        return Err(parse_err(at, "dimension and alphabet must be positive"));
    }
    let mut cells = Vec::with_capacity(lines.len().saturating_sub(2));
    for &(no, l) in &lines[2..] {
        let v = integers(no, l)?;
        if v.len() != d + 1 {
            return Err(parse_err(no, format!("expected {} integers", d + 1)));
        }
        let sym = v[d];
        if sym < 0 || sym as usize >= alphabet {
            return Err(parse_err(no, format!("symbol {} outside the alphabet", sym)));
        }
        cells.push((Point::new(&v[..d]), sym as Symbol, no));
    }
    cells.sort_by(|a, b| a.0.cmp(&b.0));
    if let Some(w) = cells.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(parse_err(w[1].2, format!("duplicate cell {}", w[1].0)));
    }
    let values = cells.iter().map(|c| c.1).collect();
    let support = Support::new(d, cells.into_iter().map(|c| c.0))?;
    Ok(PatchFile {
        alphabet,
        pattern: Pattern::new(support, values)?,
    })
}

fn parse_support_lines(lines: &[(usize, &str)], at: usize) -> Result<Support> {
    let d = header(lines, 0, "dim", at)?;
    let mut pts = Vec::new();
    for &(no, l) in &lines[1..] {
        let v = integers(no, l)?;
        if v.len() != d {
            return Err(parse_err(no, format!("expected {} integers", d)));
        }
        pts.push(Point::new(&v));
    }
    Ok(Support::new(d, pts)?)
}

/// What a configuration looks like away from its patch.
#[derive(Debug, Clone, PartialEq)]
pub enum Background {
    Sturmian {
        slope: Vec<SurdReal>,
        intercept: SurdReal,
        side: Side,
    },
    Constant(Symbol),
}

impl Background {
    pub fn parse(line: usize, s: &str) -> Result<Self> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        match toks.as_slice() {
            ["constant", v] => v
                .parse()
                .map(Background::Constant)
                .map_err(|_| parse_err(line, format!("bad symbol '{}'", v))),
            ["sturmian", slope, intercept, side] => Ok(Background::Sturmian {
                slope: SlopeVector::parse_entries(slope).map_err(|e| parse_err(line, e.to_string()))?,
                intercept: intercept
                    .parse()
                    .map_err(|e: crate::exactreal::ExactRealError| parse_err(line, e.to_string()))?,
                side: side.parse().map_err(|e: Error| parse_err(line, e.to_string()))?,
            }),
            _ => Err(parse_err(
                line,
                "expected 'sturmian <slope> <intercept> <side>' or 'constant <symbol>'",
            )),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            Background::Constant(v) => format!("constant {}", v),
            Background::Sturmian {
                slope,
                intercept,
                side,
            } => {
                let entries: Vec<String> = slope.iter().map(compact).collect();
                format!("sturmian {} {} {}", entries.join(","), compact(intercept), side)
            }
        }
    }

    pub fn config(&self, dim: usize, alphabet: usize) -> Result<Config> {
        match self {
            Background::Constant(v) => Ok(Arc::new(ConstantConfig {
                dim,
                alphabet,
                symbol: *v,
            })),
            Background::Sturmian {
                slope,
                intercept,
                side,
            } => {
                let slope = SlopeVector::new(slope.clone())?;
                if slope.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: slope.dim(),
                    });
                }
                Ok(Arc::new(SturmianConfig::new(slope, intercept.clone(), *side)))
            }
        }
    }
}

fn compact(x: &SurdReal) -> String {
    x.to_string().chars().filter(|c| !c.is_whitespace()).collect()
}

/// A patch with no background; reading outside it is an error.
#[derive(Debug, Clone)]
pub struct PatchOnly {
    pub alphabet: usize,
    pub pattern: Pattern,
}

impl Configuration for PatchOnly {
    fn dim(&self) -> usize {
        self.pattern.support().dim()
    }
    fn alphabet_size(&self) -> usize {
        self.alphabet
    }
    fn at(&self, n: &Point) -> Result<Symbol> {
        self.pattern.get(n).ok_or_else(|| {
            Error::InvalidArgument(format!("cell {} lies outside the patch and no background is set", n))
        })
    }
}

/// One `X:` or `Y:` block.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSide {
    pub patch: PatchFile,
    pub background: Option<Background>,
}

impl PairSide {
    pub fn config(&self, shared: Option<&Background>) -> Result<Config> {
        let d = self.patch.pattern.support().dim();
        match self.background.as_ref().or(shared) {
            None => Ok(Arc::new(PatchOnly {
                alphabet: self.patch.alphabet,
                pattern: self.patch.pattern.clone(),
            })),
            Some(bg) => Ok(Arc::new(Overridden {
                base: bg.config(d, self.patch.alphabet)?,
                patch: self.patch.pattern.clone(),
            })),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairFile {
    pub x: PairSide,
    pub y: PairSide,
    pub difference_set: Support,
    pub background: Option<Background>,
}

#[derive(Clone, Copy, PartialEq)]
enum Block {
    None,
    X,
    Y,
    F,
}

impl PairFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut block = Block::None;
        let mut bodies: [Vec<(usize, &str)>; 3] = Default::default();
        let mut starts = [0usize; 3];
        let mut bgs: [Option<Background>; 3] = Default::default();
        for (no, l) in content_lines(text) {
            let next = match l {
                "X:" => Some(Block::X),
                "Y:" => Some(Block::Y),
                "F:" => Some(Block::F),
                _ => None,
            };
            if let Some(b) = next {
                let i = b as usize - 1;
                if starts[i] != 0 {
                    return Err(parse_err(no, format!("repeated block '{}'", l)));
                }
                starts[i] = no;
                block = b;
                continue;
            }
            if let Some(rest) = l.strip_prefix("background:") {
                let bg = Background::parse(no, rest)?;
                let slot = match block {
                    Block::X => 0,
                    Block::Y => 1,
                    _ => 2,
                };
                if bgs[slot].is_some() {
                    return Err(parse_err(no, "repeated background line"));
                }
                bgs[slot] = Some(bg);
                continue;
            }
            match block {
                Block::None => return Err(parse_err(no, "content before the first block")),
                b => bodies[b as usize - 1].push((no, l)),
            }
        }
        for (i, name) in ["X:", "Y:", "F:"].iter().enumerate() {
            if starts[i] == 0 {
                return Err(parse_err(0, format!("missing block '{}'", name)));
            }
        }
        let [bx, by, bshared] = bgs;
        let x = parse_patch_lines(&bodies[0], starts[0])?;
        let y = parse_patch_lines(&bodies[1], starts[1])?;
        let f = parse_support_lines(&bodies[2], starts[2])?;
        let d = x.pattern.support().dim();
        for found in [y.pattern.support().dim(), f.dim()] {
            if found != d {
                return Err(Error::DimensionMismatch { expected: d, found });
            }
        }
        Ok(PairFile {
            x: PairSide {
                patch: x,
                background: bx,
            },
            y: PairSide {
                patch: y,
                background: by,
            },
            difference_set: f,
            background: bshared,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, side) in [("X:", &self.x), ("Y:", &self.y)] {
            writeln!(out, "{}", name).unwrap();
            out.push_str(&side.patch.to_text());
            if let Some(bg) = &side.background {
                writeln!(out, "background: {}", bg.to_text()).unwrap();
            }
        }
        writeln!(out, "F:").unwrap();
        out.push_str(&support_to_text(&self.difference_set));
        if let Some(bg) = &self.background {
            writeln!(out, "background: {}", bg.to_text()).unwrap();
        }
        out
    }

    /// The pair, with `F` checked on its bounding box widened by `margin`.
    pub fn to_pair(&self, margin: i64) -> Result<AsymptoticPair> {
        let shared = self.background.as_ref();
        let x = self.x.config(shared)?;
        let y = self.y.config(shared)?;
        AsymptoticPair::declared(x, y, self.difference_set.clone(), margin)
    }
}
