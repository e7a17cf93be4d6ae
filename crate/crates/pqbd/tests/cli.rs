use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_pqbd");

fn pqbd(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn attr<'a>(tag: &'a str, name: &str) -> &'a str {
    let key = format!(" {name}=\"");
    let start = tag.find(&key).unwrap() + key.len();
    &tag[start..start + tag[start..].find('"').unwrap()]
}

#[test]
fn figure_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig.out");
    let o = pqbd(&["figure", "--out", out.to_str().unwrap(), "--format", "both"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = read_csv(&dir.path().join("fig.csv"));
    assert_eq!(header, ["x", "f", "B_n98", "B_n100"]);
    assert_eq!(rows.len(), 201);
    for row in &rows {
        assert!(row.iter().all(|c| c.parse::<f64>().unwrap().is_finite()));
    }
    let svg = std::fs::read_to_string(dir.path().join("fig.svg")).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert!(svg.contains("version=\"1.1\""));
    assert_eq!(svg.matches("<polyline").count(), 3);
}

#[test]
fn svg_round_trips_to_csv_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig");
    assert_eq!(
        code(&pqbd(&[
            "figure",
            "--out",
            out.to_str().unwrap(),
            "--format",
            "both"
        ])),
        0
    );
    let (header, rows) = read_csv(&dir.path().join("fig.csv"));
    let svg = std::fs::read_to_string(dir.path().join("fig.svg")).unwrap();

    let g = &svg[svg.find("<g class=\"plot\"").unwrap()..];
    let g = &g[..g.find('>').unwrap()];
    let bound = |name| attr(g, name).parse::<f64>().unwrap();
    let (x_min, x_max, y_min, y_max) = (
        bound("data-x-min"),
        bound("data-x-max"),
        bound("data-y-min"),
        bound("data-y-max"),
    );
    // plot area of the 800x500 canvas
    let (left, top, width, height) = (80.0, 40.0, 550.0, 410.0);
    let to_pixel = |x: f64, y: f64| {
        (
            left + (x - x_min) / (x_max - x_min) * width,
            top + (y_max - y) / (y_max - y_min) * height,
        )
    };

    let polylines: Vec<&str> = svg
        .match_indices("<polyline")
        .map(|(i, _)| &svg[i..i + svg[i..].find("/>").unwrap()])
        .collect();
    assert_eq!(polylines.len(), header.len() - 1);
    for (col, line) in polylines.iter().enumerate() {
        let pts: Vec<(f64, f64)> = attr(line, "points")
            .split_whitespace()
            .map(|p| {
                let (a, b) = p.split_once(',').unwrap();
                (a.parse().unwrap(), b.parse().unwrap())
            })
            .collect();
        assert_eq!(pts.len(), rows.len());
        for (row, (px, py)) in rows.iter().zip(pts) {
            let x: f64 = row[0].parse().unwrap();
            let y: f64 = row[col + 1].parse().unwrap();
            let (ex, ey) = to_pixel(x, y);
            assert!(
                (px - ex).abs() <= 0.5 && (py - ey).abs() <= 0.5,
                "column {col} x={x}"
            );
        }
    }
}

#[test]
fn reruns_are_byte_identical() {
    let runs: Vec<Vec<u8>> = (0..2).map(|_| pqbd(&["figure"]).stdout).collect();
    assert!(!runs[0].is_empty());
    assert_eq!(runs[0], runs[1]);
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|_| pqbd(&["converge", "--n", "5", "--n", "10", "--grid", "0:2:0.1"]).stdout)
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn moments_exit_codes() {
    let args = ["moments", "--n", "5", "--grid", "0:1:0.5"];
    let o = pqbd(&[&args[..], &["--p", "1", "--q", "0.9"]].concat());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    // away from p = 1 the published closed forms are not the operator's moments
    let o = pqbd(&args);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stdout).contains("mismatch"));
    let o = pqbd(&[&args[..], &["--reference", "operator"]].concat());
    assert_eq!(code(&o), 0);
}

#[test]
fn moments_table_columns() {
    let o = pqbd(&[
        "moments",
        "--n",
        "3",
        "--grid",
        "0:1:1",
        "--reference",
        "operator",
    ]);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "p,q,alpha,beta,n,x,order,numeric,closed_form,abs_err,rel_err,status"
    );
    assert_eq!(lines.count(), 6);
}

#[test]
fn config_errors_exit_one() {
    assert_eq!(code(&pqbd(&["figure", "--p", "0.95"])), 1);
    assert_eq!(code(&pqbd(&["converge", "--q", "1.2"])), 1);
    assert_eq!(code(&pqbd(&["converge", "--grid", "0:1"])), 1);
    assert_eq!(code(&pqbd(&["converge", "--function", "expr:y+1"])), 1);
    assert_eq!(code(&pqbd(&["figure", "--format", "svg"])), 1);
    assert_eq!(
        code(&pqbd(&["moments", "--config", "/nonexistent/cfg.json"])),
        1
    );
    assert_eq!(code(&pqbd(&["frobnicate"])), 1);
}

#[test]
fn lattice_cap_is_numerical_failure() {
    let args = [
        "converge",
        "--n",
        "5",
        "--grid",
        "0:1:0.5",
        "--max-nodes",
        "20",
        "--preset",
        "custom",
    ];
    let o = pqbd(&args);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("skipped"));
    let o = pqbd(&[&args[..], &["--strict"]].concat());
    assert_eq!(code(&o), 2);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"preset": "custom", "p": 1.0, "q": 0.9, "n": [4], "grid": "0:1:0.5"}"#,
    )
    .unwrap();
    let o = pqbd(&["converge", "--config", cfg.to_str().unwrap(), "--n", "6"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("6,"), "{row}");
    assert!(
        row.contains(",1.0000000000000000e0,9.0000000000000002e-1,"),
        "{row}"
    );

    std::fs::write(&cfg, r#"{"bogus": 1}"#).unwrap();
    assert_eq!(
        code(&pqbd(&["converge", "--config", cfg.to_str().unwrap()])),
        1
    );
}

#[test]
fn custom_expression_function() {
    let args = [
        "converge",
        "--preset",
        "custom",
        "--p",
        "1",
        "--q",
        "0.99",
        "--n",
        "20",
        "--grid",
        "0:1:0.25",
        "--function",
        "expr:1 + 2*x",
    ];
    // 1 + 2x exceeds the default constant 1 in |f| <= M(1 + x^2)
    assert_eq!(code(&pqbd(&args)), 2);
    let o = pqbd(&[&args[..], &["--growth-constant", "3"]].concat());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let sup: f64 = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!(sup.is_finite() && sup < 1.0);
}
