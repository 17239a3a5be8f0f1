//! Rhombus tilings of two-dimensional Sturmian configurations.
//!
//! Each cell `n` is lifted to a point of the discrete plane with normal
//! `(1 - α_1, α_1 - α_2, α_2)` and its symbol `i` picks the unit square face
//! of `Z^3` that omits `e_{i+1}`. Faces are drawn under the isometric
//! projection `e_1 ↦ (-√3/2, -1/2)`, `e_2 ↦ (√3/2, -1/2)`, `e_3 ↦ (0, 1)`.

use std::fmt::Write as _;

use num_traits::{Float, ToPrimitive};

use crate::error::{Error, Result};
use crate::lattice::{for_each_in_box, Point, Symbol};
use crate::pairs::Configuration;
use crate::sturmian::{Side, SturmianConfig};

/// A unit face of `Z^3`: the square at `base` spanned by the two unit
/// vectors other than `e_{omit+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub base: [i64; 3],
    pub omit: usize,
}

impl Face {
    pub fn corners3(&self) -> [[i64; 3]; 4] {
        let (a, b) = match self.omit {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let mut p1 = self.base;
        p1[a] += 1;
        let mut p2 = p1;
        p2[b] += 1;
        let mut p3 = self.base;
        p3[b] += 1;
        [self.base, p1, p2, p3]
    }

    pub fn corners<F: Float>(&self) -> [(F, F); 4] {
        self.corners3().map(project::<F>)
    }
}

/// The isometric projection of a point of `Z^3`.
pub fn project<F: Float>(p: [i64; 3]) -> (F, F) {
    let c = |v: f64| F::from(v).expect("representable constant");
    let h = c(3.0).sqrt() / c(2.0);
    let half = c(0.5);
    let [a, b, z] = p.map(|v| F::from(v).expect("representable coordinate"));
    ((b - a) * h, z - (a + b) * half)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tile {
    pub cell: Point,
    pub symbol: Symbol,
    pub face: Face,
}

#[derive(Debug, Clone)]
pub struct Tiling {
    pub side: Side,
    pub tiles: Vec<Tile>,
}

/// Lifts every cell of the box `lo <= n <= hi` to its face.
pub fn tiling(config: &SturmianConfig, lo: &[i64], hi: &[i64]) -> Result<Tiling> {
    if config.slope().dim() != 2 || lo.len() != 2 || hi.len() != 2 {
        return Err(Error::InvalidArgument("tilings are drawn for d = 2 only".into()));
    }
    if !config.slope().is_ordered() {
        return Err(Error::InvalidArgument(
            "tilings need a descending slope α_1 > α_2".into(),
        ));
    }
    let mut tiles = Vec::new();
    let mut err = None;
    for_each_in_box(lo, hi, |n| {
        if err.is_some() {
            return;
        }
        match tile_at(config, &n) {
            Ok(t) => tiles.push(t),
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(Tiling {
        side: config.side(),
        tiles,
    })
}

fn tile_at(config: &SturmianConfig, n: &Point) -> Result<Tile> {
    let t = config.position(n);
    // lower: <x, v> in [0, 1); upper: <x, v> in (0, 1]
    let k = match config.side() {
        Side::Lower => t.floor()?,
        Side::Upper => t.ceil()? - 1,
    };
    let k = k
        .to_i64()
        .ok_or_else(|| Error::InvalidArgument("cell too far from the origin".into()))?;
    let (n1, n2) = (n[0], n[1]);
    let mut base = [-k, n1 - k, n1 + n2 - k];
    let symbol = config.at(n)?;
    for b in base.iter_mut().take(symbol as usize) {
        *b -= 1;
    }
    Ok(Tile {
        cell: n.clone(),
        symbol,
        face: Face {
            base,
            omit: symbol as usize,
        },
    })
}

const FILLS: [&str; 3] = ["#e8c547", "#5c80bc", "#cdd1c4"];

impl Tiling {
    pub fn faces(&self) -> Vec<Face> {
        let mut f: Vec<Face> = self.tiles.iter().map(|t| t.face).collect();
        f.sort();
        f
    }

    /// A standalone SVG document, `scale` pixels per unit edge.
    pub fn to_svg(&self, scale: f64) -> String {
        let pts: Vec<[(f64, f64); 4]> = self.tiles.iter().map(|t| t.face.corners::<f64>()).collect();
        let (mut x0, mut y0, mut x1, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for (i, c) in pts.iter().flatten().enumerate() {
            if i == 0 {
                (x0, y0, x1, y1) = (c.0, c.1, c.0, c.1);
            }
            x0 = x0.min(c.0);
            x1 = x1.max(c.0);
            y0 = y0.min(c.1);
            y1 = y1.max(c.1);
        }
        let pad = 0.5;
        let (w, h) = ((x1 - x0 + 2.0 * pad) * scale, (y1 - y0 + 2.0 * pad) * scale);
        let mut out = String::new();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.1}" height="{:.1}" viewBox="0 0 {:.1} {:.1}">"#,
            w, h, w, h
        )
        .unwrap();
        writeln!(out, r##"<g stroke="#222" stroke-width="{:.2}" stroke-linejoin="round">"##, scale / 40.0).unwrap();
        for (t, c) in self.tiles.iter().zip(&pts) {
            let coords: Vec<String> = c
                .iter()
                .map(|&(x, y)| format!("{:.3},{:.3}", (x - x0 + pad) * scale, (y1 - y + pad) * scale))
                .collect();
            writeln!(
                out,
                r#"<polygon data-cell="{}" data-symbol="{}" fill="{}" points="{}"/>"#,
                t.cell,
                t.symbol,
                FILLS[t.symbol as usize % 3],
                coords.join(" ")
            )
            .unwrap();
        }
        out.push_str("</g>\n</svg>\n");
        out
    }
}
