use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn spinqec(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinqec"))
        .args(args)
        .env("SPINQEC_OUT_DIR", dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        spinqec(dir.path(), &["codegen", "--order", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        spinqec(dir.path(), &["resources", "--max-order", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        spinqec(dir.path(), &["codegen", "--order", "1", "--family", "both"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        spinqec(dir.path(), &["simulate", "--t-over-T", "0:1:log10"])
            .status
            .code(),
        Some(2)
    );

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"format\": \"spinqec.codeword.v1\", \"spins\": [").unwrap();
    let out = spinqec(dir.path(), &["verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));
    let missing = dir.path().join("missing.json");
    assert_eq!(
        spinqec(dir.path(), &["verify", missing.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn codegen_writes_second_order_even_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = spinqec(
        dir.path(),
        &["codegen", "--order", "2", "--family", "even", "--seed", "3"],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("codeword-N2-d24.json")).unwrap())
            .unwrap();
    assert_eq!(doc["spins"][0].as_f64(), Some(11.5));
    assert_eq!(doc["order"].as_u64(), Some(2));
    assert_eq!(doc["kl"]["passed"].as_bool(), Some(true));
    assert_eq!(doc["metadata"]["seed"].as_u64(), Some(3));
    assert_eq!(doc["metadata"]["command"].as_str(), Some("codegen"));
    let amps: Vec<f64> = doc["zero_logical"]["amplitudes_re"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    let squares: Vec<String> = doc["construction"]["exact_squares"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert_eq!(amps.len(), squares.len());
    for (a, s) in amps.iter().zip(&squares) {
        let (n, d) = s.split_once('/').unwrap_or((s, "1"));
        let exact = n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap();
        assert!((a * a - exact).abs() < 1e-12);
    }
    assert!((amps.iter().map(|a| a * a).sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn codegen_first_order_odd_code_has_quarter_split() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("odd.json");
    let out = spinqec(
        dir.path(),
        &[
            "codegen",
            "--order",
            "1",
            "--family",
            "odd",
            "--output",
            path.to_str().unwrap(),
        ],
    );
    assert!(out.status.success());
    let doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["spins"][0].as_f64(), Some(4.5));
    let sq: Vec<f64> = doc["zero_logical"]["amplitudes_re"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap().powi(2))
        .collect();
    assert_eq!(sq.len(), 2);
    assert!((sq[0] - 0.25).abs() < 1e-12 && (sq[1] - 0.75).abs() < 1e-12);

    // the file round-trips through verify
    let out = spinqec(dir.path(), &["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("PASS"));
}

#[test]
fn verify_exit_status_follows_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = spinqec(
        dir.path(),
        &[
            "verify",
            "--catalog",
            "spin72-primary",
            "--output",
            report.to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert!(doc["max_cross_violation"].as_f64().unwrap() < 1e-12);
    assert!(doc["max_diag_violation"].as_f64().unwrap() < 1e-12);

    let out = spinqec(
        dir.path(),
        &["verify", "--catalog", "spin72-primary", "--order", "2"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));

    let out = spinqec(dir.path(), &["verify", "--multi", "three-spin-3/2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("collective"));
}

#[test]
fn sequence_listing_and_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = spinqec(dir.path(), &["sequence", "--which", "enc"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("encode: 12 pulses"));
    assert!(!text.contains("output:"));
    assert!(fs::read_dir(dir.path()).unwrap().next().is_none());

    let out = spinqec(
        dir.path(),
        &[
            "sequence", "--which", "enc", "--alpha", "1", "--beta", "0", "--trace",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("trace-enc.csv")).unwrap();
    let rows = data_lines(&csv);
    assert_eq!(rows[0], "pulse_index,basis_level,amplitude_re,amplitude_im");
    assert_eq!(rows.len(), 1 + 13 * 8);
    // final row block equals |0_L> = sqrt(3/10)|-7/2> + sqrt(7/10)|+3/2>
    let last: Vec<(f64, f64)> = rows[rows.len() - 8..]
        .iter()
        .map(|r| {
            let f: Vec<&str> = r.split(',').collect();
            (f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect();
    for (m, re) in last {
        let expected = match m {
            x if x == -3.5 => 0.3f64.sqrt(),
            x if x == 1.5 => 0.7f64.sqrt(),
            _ => 0.0,
        };
        assert!((re - expected).abs() < 1e-12, "m = {m}: {re}");
    }

    let out = spinqec(
        dir.path(),
        &[
            "sequence", "--which", "dec", "--inject", "Z", "--alpha", "0.6", "--beta", "0.8",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let output = text.split("output:").nth(1).unwrap();
    assert!(output.contains("|-5/2>  +0.600000000000"));
    assert!(output.contains("|+5/2>  +0.800000000000"));
    assert_eq!(output.lines().filter(|l| !l.trim().is_empty()).count(), 2);

    let json = dir.path().join("dec.json");
    let out = spinqec(
        dir.path(),
        &[
            "sequence",
            "--which",
            "dec",
            "--alphabet",
            "extended",
            "--json",
            json.to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["pulses"].as_array().unwrap().len(), 9);
    assert_eq!(doc["metadata"]["command"].as_str(), Some("sequence"));
}

#[test]
fn resources_csv_has_four_rows_per_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = spinqec(
        dir.path(),
        &["resources", "--max-order", "1", "--format", "csv"],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows = data_lines(&text);
    assert_eq!(rows[0], "scheme,order,family,hilbert_dim,physical_units");
    assert_eq!(
        &rows[1..],
        [
            "qubit-code,1,-,32,5",
            "gkp-style,1,-,18,1",
            "spin-qudit,1,even,8,1",
            "spin-qudit,1,odd,10,1"
        ]
    );
    assert!(text.contains("# seed: 0"));

    let out = spinqec(dir.path(), &["resources", "--max-order", "2"]);
    let text = stdout(&out);
    for value in ["32", "18", "50", "8", "24", "26"] {
        assert!(
            text.split_whitespace().any(|w| w == value),
            "missing {value}"
        );
    }
}

fn sweep_rows(text: &str) -> Vec<Vec<String>> {
    data_lines(text)[1..]
        .iter()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn simulate_scaling_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "simulate",
        "--t-over-T",
        "0.001:0.1:log10,5",
        "--pulse-fidelity",
        "1.0",
        "--trials",
        "2000",
        "--seed",
        "7",
    ];
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let run = |p: &Path| {
        let mut full: Vec<&str> = args.to_vec();
        full.extend(["--output", p.to_str().unwrap()]);
        let out = spinqec(dir.path(), &full);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        stdout(&out)
    };
    let summary = run(&a);
    run(&b);
    let (ta, tb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ta, tb);

    let text = String::from_utf8(ta).unwrap();
    assert!(text.contains("# seed: 7"));
    let rows = sweep_rows(&text);
    assert_eq!(rows.len(), 5);
    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r[0].parse().unwrap(), 1.0 - r[3].parse::<f64>().unwrap()))
        .collect();
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let slope = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / lx.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!((slope - 2.0).abs() < 0.15, "slope {slope}");
    assert!(summary.contains("corrected infidelity slope"));
}

#[test]
fn simulate_orders_curves_by_pulse_fidelity() {
    let dir = tempfile::tempdir().unwrap();
    let out = spinqec(
        dir.path(),
        &[
            "simulate",
            "--pulse-fidelity",
            "0.999,0.995,0.99",
            "--t-over-T",
            "0.001,0.01,0.1",
            "--trials",
            "1000",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let rows = sweep_rows(&text);
    assert_eq!(rows.len(), 9);
    for t in ["0.001", "0.01", "0.1"] {
        let fc: Vec<f64> = rows
            .iter()
            .filter(|r| r[0] == t)
            .map(|r| r[3].parse().unwrap())
            .collect();
        assert_eq!(fc.len(), 3);
        assert!(fc[0] > fc[1] && fc[1] > fc[2], "t/T = {t}: {fc:?}");
    }

    let json = dir.path().join("sweep.json");
    let out = spinqec(
        dir.path(),
        &[
            "simulate",
            "--mode",
            "exact",
            "--pulse-fidelity",
            "0.99",
            "--t-over-T",
            "0.01",
            "--format",
            "json",
            "--output",
            json.to_str().unwrap(),
        ],
    );
    assert!(out.status.success());
    let doc: Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 1);
    assert_eq!(doc["metadata"]["config"]["mode"].as_str(), Some("exact"));
}
