use std::path::PathBuf;
use std::process::{Command, Output};

const FIG4: &str = "sqrt(3)-1,sqrt(2)-1";
const FIG1: &str = "sqrt(2)/2, sqrt(19)-4";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sturmian"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn core_data(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data").join(name);
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn generate_reproduces_the_figure_grids() {
    for (side, name) in [("lower", "sqrt3_sqrt2_lower.txt"), ("upper", "sqrt3_sqrt2_upper.txt")] {
        let o = run(&["generate", "-d", "2", "--alpha", FIG4, "--side", side, "--box", "-7:7,-7:7"]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), core_data(name));
        assert!(stderr(&o).contains("proven independent"));
    }
}

#[test]
fn rational_slope_is_refuted() {
    let o = run(&["generate", "--alpha", "1/2,1/3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("refuted"), "{}", stderr(&o));
    let o = run(&["generate", "-d", "3", "--alpha", FIG4]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let o = run(&["verify", "--alpha", FIG4, "--max-size", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    for clause in ["(i) occurrence singletons: holds", "(ii) indistinguishable: holds", "(iii) complexity"] {
        assert!(text.contains(clause), "{}", text);
    }
    assert!(text.ends_with("verdict: pass\n"));
    let o = run(&["verify", "--alpha", FIG4, "--max-size", "20"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("guard"));
    let o = run(&["verify", "/nonexistent/pair.txt"]);
    assert_eq!(o.status.code(), Some(2));
}

fn pair_text(alpha: &str) -> String {
    let o = run(&["generate", "--alpha", alpha, "--emit-pair", "--box", "-5:5,-5:5"]);
    assert_eq!(o.status.code(), Some(0));
    stdout(&o)
}

/// Flips one symbol of the `Y:` patch at `(2, 0)` and declares it in `F`.
fn corrupt(text: &str) -> String {
    let mut out = Vec::new();
    let mut block = "";
    for line in text.lines() {
        if line.ends_with(':') && line.len() == 2 {
            block = line;
        }
        if block == "Y:" && line.starts_with("2 0 ") {
            let v: u8 = line[4..].parse().unwrap();
            out.push(format!("2 0 {}", (v + 1) % 3));
            continue;
        }
        out.push(line.to_string());
        if block == "F:" && line.starts_with("dim") {
            out.push("2 0".to_string());
        }
    }
    out.join("\n") + "\n"
}

#[test]
fn corrupted_pair_fails_with_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, corrupt(&pair_text(FIG1))).unwrap();
    let o = run(&["verify", path.to_str().unwrap(), "--max-size", "3"]);
    assert_eq!(o.status.code(), Some(1), "{}{}", stdout(&o), stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("(ii) indistinguishable: fails"));
    assert!(text.contains("witness: pattern"));
    assert!(text.contains("flip condition: fails"));
    let o = run(&["verify", path.to_str().unwrap(), "--max-size", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], false);
    assert!(v["witness"]["delta"].as_i64().unwrap() != 0);
}

#[test]
fn generated_pair_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for alpha in [FIG1, FIG4] {
        let path = dir.path().join("pair.txt");
        std::fs::write(&path, pair_text(alpha)).unwrap();
        let from_file = run(&["verify", path.to_str().unwrap()]);
        let direct = run(&["verify", "--alpha", alpha]);
        assert_eq!(from_file.status.code(), Some(0));
        // identical apart from how F is known
        let strip = |o: &Output| -> Vec<String> {
            stdout(o)
                .lines()
                .filter(|l| !l.starts_with("difference set"))
                .map(str::to_string)
                .collect()
        };
        assert_eq!(strip(&from_file), strip(&direct));
    }
}

#[test]
fn complexity_tables() {
    let o = run(&["complexity", "--alpha", FIG4, "--shapes", "1x3,3x1,2x2,2x3,3x2,5x5"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<Vec<String>> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split('\t').map(str::to_string).collect())
        .collect();
    let measured: Vec<&str> = rows.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(measured, ["7", "7", "8", "11", "11", "35"]);
    assert!(rows.iter().all(|r| r[3] == "yes"));
    let o = run(&["complexity", "--alpha", "(sqrt(5)-1)/2", "--shapes", "1,2,3,4,5,6,7,8,9,10"]);
    let measured: Vec<usize> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split('\t').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(measured, (2..=11).collect::<Vec<_>>());
}

fn records(o: &Output) -> Vec<Vec<String>> {
    stdout(o)
        .lines()
        .skip(1)
        .map(|l| l.split('\t').map(str::to_string).collect())
        .collect()
}

#[test]
fn bispecial_records() {
    let l_shape = "1,0;2,0;3,0;4,0;4,1;4,2;4,3;4,4";
    let o = run(&["bispecial", "--alpha", FIG1, "--support", l_shape, "--left", "0,0", "--right", "4,5"]);
    assert_eq!(o.status.code(), Some(0));
    let recs = records(&o);
    let target = "{(1,0):1,(2,0):0,(3,0):2,(4,0):1,(4,1):2,(4,2):0,(4,3):1,(4,4):2}";
    let rec = recs.iter().find(|r| r[3] == target).expect("L-shaped pattern is bispecial");
    assert_eq!((rec[4].as_str(), rec[5].as_str(), rec[7].as_str()), ("2", "2", "0"));

    let o = run(&["bispecial", "--alpha", FIG1, "--support", "empty", "--left", "0,0", "--right", "1,0", "--all"]);
    let recs = records(&o);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0][6], "5");
    assert_eq!(recs[0][7], "0");

    let o = run(&["bispecial", "--alpha", FIG4, "--sample", "60", "--max-size", "4", "--seed", "7", "--all"]);
    let recs = records(&o);
    assert!(!recs.is_empty());
    for r in &recs {
        let m: i64 = r[7].parse().unwrap();
        assert!(m == 0 || (m == -1 && r[9] == "true"), "{:?}", r);
    }
    assert_eq!(
        stdout(&o),
        stdout(&run(&["bispecial", "--alpha", FIG4, "--sample", "60", "--max-size", "4", "--seed", "7", "--all"]))
    );
}

fn polygons(svg: &str) -> Vec<String> {
    svg.lines().filter(|l| l.contains("<polygon")).map(str::to_string).collect()
}

#[test]
fn tilings_differ_by_one_hexagon_flip() {
    let lower = stdout(&run(&["tiling", "--alpha", FIG1, "--box", "-7:7,-7:7"]));
    let upper = stdout(&run(&["tiling", "--alpha", FIG1, "--side", "upper", "--box", "-7:7,-7:7"]));
    let (a, b) = (polygons(&lower), polygons(&upper));
    assert_eq!(a.len(), 225);
    assert_eq!(b.len(), 225);
    let only_a: Vec<&String> = a.iter().filter(|p| !b.contains(p)).collect();
    let only_b: Vec<&String> = b.iter().filter(|p| !a.contains(p)).collect();
    assert_eq!(only_a.len(), 3);
    assert_eq!(only_b.len(), 3);
    let single = stdout(&run(&["tiling", "--alpha", FIG1, "--box", "0:0,0:0"]));
    assert_eq!(polygons(&single).len(), 1);
    let o = run(&["tiling", "--alpha", "sqrt(3)-1, sqrt(7)-2, sqrt(2)-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reduction_levels_and_refusal() {
    let o = run(&["reduce", "--alpha", FIG1]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "level 1: d = 2 -> 1, 200 cells: equal\n");
    let o = run(&["reduce", "--alpha", "sqrt(3)-1, sqrt(7)-2, sqrt(2)-1", "--levels", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.ends_with("equal")).count(), 2);
    let o = run(&["reduce", "--alpha", "sqrt(7)-2, sqrt(3)-1, sqrt(2)-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("normalize"));
}

#[test]
fn etale_sequences() {
    let o = run(&["etale", "--sequence", "(sqrt(2)-1)/{n}, (sqrt(3)-1)/{n}", "--from", "2", "--to", "64"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("uniform difference set: {(-1,0),(0,-1),(0,0)}"), "{}", text);
    let o = run(&["etale", "--term", FIG4, "--term", FIG4, "--term", FIG4]);
    assert!(stdout(&o).contains("stabilization index: 0"));
    let o = run(&["etale", "--term", FIG1, "--term", FIG4]);
    assert!(stdout(&o).contains("stabilization index: 1"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn frequencies_table() {
    let o = run(&["frequencies", "--alpha", FIG1]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let total: u64 = text.lines().last().unwrap().split('\t').nth(1).unwrap().parse().unwrap();
    assert_eq!(total, 99 * 99);
    for l in text.lines().skip(1).take(3) {
        let cols: Vec<&str> = l.split('\t').collect();
        let got: f64 = cols[2].parse().unwrap();
        let want: f64 = cols[4].parse().unwrap();
        assert!((got - want).abs() < 0.01, "{}", l);
    }
}
