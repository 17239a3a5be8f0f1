use std::fmt::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sturmian::combinatorics::{
    multiplicity_records, path_positions, rectangular_complexity, ExactSturmian, MultiplicityRecord,
};
use sturmian::io::{parse_point, parse_shape, parse_support_spec, Background, PairFile, PairSide, PatchFile};
use sturmian::lattice::{enumerate_connected_supports, Support};
use sturmian::pairs::{
    check_affine_flip, check_flip, etale_consistency, DifferenceSetSource, frequencies as count_symbols, reduction_check,
    scan_language, verify_indistinguishable, AsymptoticPair, Grid, SupportMode, VerifyOptions, Witness,
};
use sturmian::sturmian::{language, Certification, WindowPartition};
use sturmian::tiling::tiling as lift;
use sturmian::{Configuration, Error, Result, Side, SlopeVector, SturmianConfig, SurdReal};

use crate::{
    BispecialArgs, ComplexityArgs, EtaleArgs, Format, FrequenciesArgs, GenerateArgs, ReduceArgs, SlopeArgs,
    TilingArgs, VerifyArgs,
};

type Outcome = Result<bool>;

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn parse_slope(lit: &str, dim: Option<usize>, assume: bool) -> Result<SlopeVector> {
    let entries = SlopeVector::parse_entries(lit)?;
    if let Some(d) = dim {
        if d != entries.len() {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: entries.len(),
            });
        }
    }
    if assume {
        SlopeVector::asserted(entries)
    } else {
        SlopeVector::new(entries)
    }
}

fn parse_surd(lit: &str) -> Result<SurdReal> {
    Ok(SurdReal::parse(lit)?)
}

impl SlopeArgs {
    fn config(&self, side: Side, assume: bool) -> Result<SturmianConfig> {
        let slope = parse_slope(&self.alpha, self.dim, assume)?;
        Ok(SturmianConfig::new(slope, parse_surd(&self.intercept)?, side))
    }
}

/// `-7:7,-3:4` as corner vectors; `None` gives `-r..=r` on every axis.
fn parse_box(spec: Option<&str>, d: usize, r: i64) -> Result<(Vec<i64>, Vec<i64>)> {
    let Some(spec) = spec else {
        return Ok((vec![-r; d], vec![r; d]));
    };
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for part in spec.split(',') {
        let (a, b) = part
            .split_once(':')
            .ok_or_else(|| bad(format!("bad range '{}', expected lo:hi", part)))?;
        let a: i64 = a.trim().parse().map_err(|_| bad(format!("bad range '{}'", part)))?;
        let b: i64 = b.trim().parse().map_err(|_| bad(format!("bad range '{}'", part)))?;
        if a > b {
            return Err(bad(format!("empty range '{}'", part)));
        }
        lo.push(a);
        hi.push(b);
    }
    if lo.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: lo.len(),
        });
    }
    Ok((lo, hi))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| bad(format!("cannot write {}: {}", p.display(), e))),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn certificate(slope: &SlopeVector) -> String {
    match slope.certification() {
        Certification::Proven => format!("certificate: 1, α_1..α_{} proven independent over Q", slope.dim()),
        Certification::Asserted => "certificate: asserted, not proven; output is watermarked".into(),
    }
}

pub fn generate(a: &GenerateArgs) -> Outcome {
    let side = Side::from(a.side);
    let c = match a.slope.config(side, a.assume_irrational) {
        Err(Error::NotTotallyIrrational { relation }) => {
            return Err(bad(format!("refuted: 1, α_1..α_d satisfy {}", relation)));
        }
        other => other?,
    };
    let d = c.slope().dim();
    eprintln!("{}", certificate(c.slope()));
    let (lo, hi) = parse_box(a.window.as_deref(), d, 7)?;
    let mut text = String::new();
    if a.slope.intercept.trim() != "0" || !c.slope().is_proven() {
        writeln!(text, "# slope {} intercept {}", c.slope(), c.intercept()).unwrap();
    }
    if !c.slope().is_proven() {
        writeln!(text, "# watermark: irrationality asserted").unwrap();
    }
    if a.emit_pair {
        let pair = AsymptoticPair::sturmian(c.slope().clone(), c.intercept().clone())?;
        let side_of = |cfg: &dyn Configuration, s: Side| -> Result<PairSide> {
            Ok(PairSide {
                patch: PatchFile::from_grid(&cfg.sample(&lo, &hi)?, d + 1),
                background: Some(Background::Sturmian {
                    slope: c.slope().entries().to_vec(),
                    intercept: c.intercept().clone(),
                    side: s,
                }),
            })
        };
        let file = PairFile {
            x: side_of(pair.x.as_ref(), Side::Lower)?,
            y: side_of(pair.y.as_ref(), Side::Upper)?,
            difference_set: pair.difference_set().clone(),
            background: None,
        };
        text.push_str(&file.to_text());
    } else {
        text.push_str(&PatchFile::from_grid(&c.sample(&lo, &hi)?, d + 1).to_text());
    }
    emit(a.output.as_deref(), &text)?;
    Ok(true)
}

#[derive(Serialize)]
struct Clause {
    holds: Option<bool>,
    detail: String,
}

#[derive(Serialize)]
struct VerifySummary {
    dim: usize,
    difference_set: Support,
    difference_set_source: String,
    watermark: Option<String>,
    flip: Clause,
    affine_flip: Clause,
    supports: usize,
    max_support_size: usize,
    mode: SupportMode,
    patterns: usize,
    singletons: Clause,
    indistinguishable: Clause,
    complexity: Clause,
    passed: bool,
    witness: Option<Witness>,
}

fn flip_clause(r: Result<sturmian::pairs::FlipReport>) -> Clause {
    match r {
        Ok(f) => Clause {
            holds: Some(f.holds),
            detail: f.reason.unwrap_or_default(),
        },
        Err(e) => Clause {
            holds: None,
            detail: e.to_string(),
        },
    }
}

/// `#L_S(x) = #L_S(y) = #(F - S)` from a window scan around `F`.
fn complexity_clause(pair: &AsymptoticPair, supports: &[Support], r: i64) -> Clause {
    let d = pair.dim();
    let (flo, fhi) = pair.difference_set().bounding_box().unwrap_or((vec![0; d], vec![0; d]));
    let lo: Vec<i64> = flo.iter().map(|v| v - r).collect();
    let hi: Vec<i64> = fhi.iter().map(|v| v + r).collect();
    let mut bad_support = None;
    for s in supports {
        let want = pair.difference_set().minus(s).len();
        let got = scan_language(pair.x.as_ref(), s, &lo, &hi)
            .and_then(|lx| Ok((lx.len(), scan_language(pair.y.as_ref(), s, &lo, &hi)?.len())));
        match got {
            Err(e) => {
                return Clause {
                    holds: None,
                    detail: format!("unavailable: {}", e),
                }
            }
            Ok((nx, ny)) if nx != want || ny != want => {
                bad_support = Some(format!("{}: #L_S(x) = {}, #L_S(y) = {}, #(F - S) = {}", s, nx, ny, want));
                break;
            }
            Ok(_) => {}
        }
    }
    let window = format!("window of half-side {} around F", r);
    match bad_support {
        None => Clause {
            holds: Some(true),
            detail: window,
        },
        Some(m) => Clause {
            holds: Some(false),
            detail: format!("{}; {}", m, window),
        },
    }
}

fn load_pair(a: &VerifyArgs) -> Result<AsymptoticPair> {
    match (&a.pair, &a.alpha) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| bad(format!("cannot read {}: {}", path.display(), e)))?;
            PairFile::parse(&text)?.to_pair(a.margin)
        }
        (None, Some(alpha)) => AsymptoticPair::sturmian(parse_slope(alpha, None, false)?, parse_surd(&a.intercept)?),
        _ => Err(bad("give either a pair file or --alpha")),
    }
}

fn mark(c: &Clause) -> &'static str {
    match c.holds {
        Some(true) => "holds",
        Some(false) => "fails",
        None => "unknown",
    }
}

pub fn verify(a: &VerifyArgs) -> Outcome {
    let pair = load_pair(a)?;
    let opts = VerifyOptions {
        max_support_size: a.max_size,
        mode: if a.boxes { SupportMode::Boxes } else { SupportMode::Connected },
        guard: a.guard,
    };
    let rep = verify_indistinguishable(&pair, &opts)?;
    let supports: Vec<Support> = rep.results.iter().map(|r| r.support.clone()).collect();
    let witness = rep.witness();
    let passed = rep.passed();
    let summary = VerifySummary {
        dim: pair.dim(),
        difference_set: pair.difference_set().clone(),
        difference_set_source: match pair.source() {
            DifferenceSetSource::Certified => "certified".into(),
            DifferenceSetSource::Declared { checked_margin } => format!("declared, checked with margin {}", checked_margin),
        },
        watermark: pair.watermark().map(str::to_string),
        flip: flip_clause(check_flip(&pair)),
        affine_flip: flip_clause(check_affine_flip(&pair)),
        supports: supports.len(),
        max_support_size: a.max_size,
        mode: opts.mode,
        patterns: rep.patterns_checked(),
        singletons: Clause {
            holds: Some(rep.singletons()),
            detail: "#(occ_p(x) \\ occ_p(y)) = 1 = #(occ_p(y) \\ occ_p(x))".into(),
        },
        indistinguishable: Clause {
            holds: Some(passed),
            detail: "Δ_p = 0 for every pattern".into(),
        },
        complexity: complexity_clause(&pair, &supports, a.window),
        passed,
        witness,
    };
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n",
        Format::Text => verify_text(&summary),
    };
    emit(a.output.as_deref(), &text)?;
    if !passed && a.output.is_some() {
        if let Some(w) = &summary.witness {
            eprintln!("witness: pattern {} over {} with Δ = {}", w.pattern, w.support, w.delta);
        }
    }
    Ok(passed)
}

fn verify_text(s: &VerifySummary) -> String {
    let mut out = String::new();
    writeln!(out, "dimension: {}", s.dim).unwrap();
    writeln!(out, "difference set: {} ({})", s.difference_set, s.difference_set_source).unwrap();
    if let Some(w) = &s.watermark {
        writeln!(out, "watermark: {}", w).unwrap();
    }
    for (name, c) in [("flip condition", &s.flip), ("affine flip condition", &s.affine_flip)] {
        if c.detail.is_empty() {
            writeln!(out, "{}: {}", name, mark(c)).unwrap();
        } else {
            writeln!(out, "{}: {} ({})", name, mark(c), c.detail).unwrap();
        }
    }
    let mode = match s.mode {
        SupportMode::Connected => "connected supports",
        SupportMode::Boxes => "boxes",
    };
    writeln!(
        out,
        "supports: {} {} with |S| <= {}, {} patterns",
        s.supports, mode, s.max_support_size, s.patterns
    )
    .unwrap();
    for (name, c) in [
        ("(i) occurrence singletons", &s.singletons),
        ("(ii) indistinguishable", &s.indistinguishable),
        ("(iii) complexity #L_S = #(F - S)", &s.complexity),
    ] {
        writeln!(out, "{}: {} [{}]", name, mark(c), c.detail).unwrap();
    }
    if let Some(w) = &s.witness {
        let pts = |v: &[sturmian::Point]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
        writeln!(out, "witness: pattern {} over {}", w.pattern, w.support).unwrap();
        writeln!(out, "  Δ = {}, occ in x only: [{}], occ in y only: [{}]", w.delta, pts(&w.occ_x), pts(&w.occ_y))
            .unwrap();
    }
    writeln!(out, "verdict: {}", if s.passed { "pass" } else { "fail" }).unwrap();
    out
}

pub fn complexity(a: &ComplexityArgs) -> Outcome {
    let slope = parse_slope(&a.alpha, None, false)?;
    let d = slope.dim();
    let shapes: Vec<Vec<usize>> = a.shapes.split(',').map(|t| parse_shape(t.trim())).collect::<Result<_>>()?;
    let mut out = String::from("shape\tmeasured\tpredicted\tmatch\n");
    let mut all = true;
    for m in &shapes {
        if m.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: m.len(),
            });
        }
        let measured = language(&slope, &Support::rectangle(m))?.len();
        let sizes: Vec<u64> = m.iter().map(|&v| v as u64).collect();
        let predicted = rectangular_complexity(&sizes) as usize;
        let ok = measured == predicted;
        all &= ok;
        let name: Vec<String> = m.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}\t{}\t{}\t{}", name.join("x"), measured, predicted, if ok { "yes" } else { "no" }).unwrap();
    }
    print!("{}", out);
    Ok(all)
}

pub fn bispecial(a: &BispecialArgs) -> Outcome {
    let slope = parse_slope(&a.alpha, None, false)?;
    let d = slope.dim();
    let pair = AsymptoticPair::characteristic(slope.clone())?;
    let src = ExactSturmian::new(slope);
    let triples: Vec<(Support, sturmian::Point, sturmian::Point)> = match (a.sample, &a.support) {
        (Some(n), None) => {
            let supports = enumerate_connected_supports(d, a.max_size, a.max_size.max(1))?;
            let mut all = Vec::new();
            for s in &supports {
                for (l, r) in path_positions(s) {
                    all.push((s.clone(), l, r));
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let mut idx = rand::seq::index::sample(&mut rng, all.len(), n.min(all.len())).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| all[i].clone()).collect()
        }
        (None, Some(spec)) => {
            let s = parse_support_spec(d, spec)?;
            let l = a.left.as_deref().map(parse_point).transpose()?;
            let r = a.right.as_deref().map(parse_point).transpose()?;
            match (l, r) {
                (Some(l), Some(r)) => vec![(s, l, r)],
                (None, None) => path_positions(&s).into_iter().map(|(l, r)| (s.clone(), l, r)).collect(),
                _ => return Err(bad("give both --left and --right, or neither")),
            }
        }
        _ => return Err(bad("give either --support or --sample")),
    };
    let mut out = String::new();
    writeln!(out, "{}", MultiplicityRecord::header()).unwrap();
    let mut count = 0;
    for (s, l, r) in &triples {
        let recs = multiplicity_records(&src, s, l, r, Some((pair.x.as_ref(), pair.difference_set())))?;
        for rec in recs.iter().filter(|r| a.all || (r.e_left >= 2 && r.e_right >= 2)) {
            writeln!(out, "{}", rec.to_tsv()).unwrap();
            count += 1;
        }
    }
    emit(a.output.as_deref(), &out)?;
    eprintln!("{} records from {} (support, left, right) triples", count, triples.len());
    Ok(true)
}

pub fn tiling(a: &TilingArgs) -> Outcome {
    let c = a.slope.config(Side::from(a.side), false)?;
    let d = c.slope().dim();
    if d != 2 {
        return Err(bad(format!("tilings need d = 2, got d = {}", d)));
    }
    let (lo, hi) = parse_box(a.window.as_deref(), d, 7)?;
    let t = lift(&c, &lo, &hi)?;
    emit(a.output.as_deref(), &t.to_svg(a.scale))?;
    Ok(true)
}

fn render(g: &Grid) -> String {
    match g.dim() {
        1 => {
            let row: Vec<String> = g.data().iter().map(|v| v.to_string()).collect();
            row.join(" ") + "\n"
        }
        2 => g.render_2d(),
        _ => format!("{:?}\n", g),
    }
}

pub fn reduce(a: &ReduceArgs) -> Outcome {
    let mut slope = parse_slope(&a.alpha, None, false)?;
    let d = slope.dim();
    if d < 2 {
        return Err(bad("reduction needs d >= 2"));
    }
    if !slope.is_ordered() {
        return Err(bad(
            "slope is not descending (α_1 > ... > α_d); normalize the pair with the ordered flip condition first",
        ));
    }
    let levels = a.levels.unwrap_or(d - 1);
    if levels == 0 || levels > d - 1 {
        return Err(bad(format!("levels must lie in 1..={}", d - 1)));
    }
    let side = Side::from(a.side);
    let mut all = true;
    for level in 1..=levels {
        let k = slope.dim() - 1;
        // a cube of about `cells` cells in Z^k
        let mut side_len = 1i64;
        while (side_len + 1).pow(k as u32) <= a.cells as i64 {
            side_len += 1;
        }
        let lo = vec![-(side_len / 2); k];
        let hi: Vec<i64> = lo.iter().map(|v| v + side_len - 1).collect();
        let rep = reduction_check(&slope, side, &lo, &hi)?;
        let n = rep.restricted.len();
        println!(
            "level {}: d = {} -> {}, {} cells: {}",
            level,
            k + 1,
            k,
            n,
            if rep.equal() { "equal" } else { "differ" }
        );
        if !rep.equal() {
            let pts: Vec<String> = rep.mismatches.iter().take(8).map(|p| p.to_string()).collect();
            println!("  mismatches at {}", pts.join(" "));
        }
        if a.show {
            print!("restricted:\n{}reduced:\n{}", render(&rep.restricted), render(&rep.reduced));
        }
        all &= rep.equal();
        slope = slope.tail()?;
    }
    Ok(all)
}

pub fn etale(a: &EtaleArgs) -> Outcome {
    let slopes: Vec<String> = match &a.sequence {
        Some(t) => {
            if !t.contains("{n}") {
                return Err(bad("the sequence template needs a {n} placeholder"));
            }
            if a.from > a.to {
                return Err(bad("--from exceeds --to"));
            }
            (a.from..=a.to).map(|n| t.replace("{n}", &n.to_string())).collect()
        }
        None => a.terms.clone(),
    };
    if slopes.is_empty() {
        return Err(bad("give --sequence or at least one --term"));
    }
    let seq = slopes
        .iter()
        .map(|s| AsymptoticPair::characteristic(parse_slope(s, None, false)?))
        .collect::<Result<Vec<_>>>()?;
    let d = seq[0].dim();
    let (lo, hi) = parse_box(a.window.as_deref(), d, 7)?;
    let rep = etale_consistency(&seq, &lo, &hi)?;
    println!("terms: {}", seq.len());
    println!("stabilization index: {}", rep.stabilization_index);
    println!("stabilized: {}", rep.stabilized);
    match &rep.uniform_difference_set {
        Some(f) => println!("uniform difference set: {}", f),
        None => println!("uniform difference set: none inside the window"),
    }
    println!("limit patches differ on: {}", rep.limit_difference);
    println!("evidence: finite window {:?}..={:?}", lo, hi);
    if let Some(path) = &a.output {
        let file = PairFile {
            x: PairSide {
                patch: PatchFile::from_grid(&rep.limit_x, d + 1),
                background: None,
            },
            y: PairSide {
                patch: PatchFile::from_grid(&rep.limit_y, d + 1),
                background: None,
            },
            difference_set: rep.limit_difference.clone(),
            background: None,
        };
        emit(Some(path), &file.to_text())?;
    }
    Ok(rep.is_etale())
}

pub fn frequencies(a: &FrequenciesArgs) -> Outcome {
    let c = a.slope.config(Side::from(a.side), false)?;
    let d = c.slope().dim();
    let (lo, hi) = parse_box(a.window.as_deref(), d, 49)?;
    let fr = count_symbols(&c, &lo, &hi)?;
    let part = WindowPartition::new(c.slope());
    println!("symbol\tcount\tfrequency\twindow length\twindow length (approx)");
    for i in 0..=d {
        let (_, len) = part.window(i);
        println!(
            "{}\t{}\t{:.6}\t{}\t{:.6}",
            i,
            fr.counts[i],
            fr.as_float::<f64>(i),
            len,
            len.to_f64_approx()
        );
    }
    println!("total\t{}", fr.total);
    Ok(true)
}
