use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use resonet::extraction::{singly_loaded_resonator, weakly_coupled_pair};
use resonet::io::design::DesignFile;
use resonet::io::{csv, touchstone};
use resonet::response::sweep;
use resonet::FilterSpec;

fn resonet(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resonet"))
        .args(args)
        .current_dir(dir)
        .env_remove("RESONET_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

/// First number following `key` in `text`.
fn number_after(text: &str, key: &str) -> f64 {
    let rest = &text[text.find(key).unwrap_or_else(|| panic!("`{key}` not in:\n{text}")) + key.len()..];
    rest.split_whitespace().next().unwrap().parse().unwrap()
}

fn synthesized(dir: &Path, name: &str) -> String {
    let out = format!("{name}.toml");
    let o = resonet(dir, &["synthesize", "--config", name, "--out", &out]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    out
}

#[test]
fn synthesize_reports_four_pole_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = resonet(dir.path(), &["synthesize", "--config", "xband-4pole", "--out", "d.toml"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("Q_e = 18.628"), "{text}");
    assert!(text.contains("18.628    18.628   0.046   0.035   0.046"), "{text}");
    assert!(dir.path().join("d.toml").exists());
}

#[test]
fn synthesize_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("y.toml"),
        "order = 4\nf0 = 300e9\nfbw = 0.02\nripple_db = 0.04321\n",
    )
    .unwrap();
    let o = resonet(dir.path(), &["synthesize", "--config", "y.toml"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("Q_e = 46.57"));
    assert!(dir.path().join("y.design.toml").exists());
}

#[test]
fn missing_order_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.toml"), "f0 = 10e9\nbandwidth = 0.5e9\nripple_db = 0.1\n").unwrap();
    let o = resonet(dir.path(), &["synthesize", "--config", "c.toml"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("order"), "{}", stderr(&o));
}

#[test]
fn malformed_toml_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.toml"), "order = 4\nf0 = = 1\n").unwrap();
    let o = resonet(dir.path(), &["synthesize", "--config", "c.toml"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn invalid_spec_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("c.toml"),
        "order = 4\nf0 = 10e9\nbandwidth = 0.5e9\nripple_db = -1\n",
    )
    .unwrap();
    assert_eq!(code(&resonet(dir.path(), &["synthesize", "--config", "c.toml"])), 3);
}

#[test]
fn csv_sweep_is_lossless_on_every_row() {
    let dir = tempfile::tempdir().unwrap();
    let d = synthesized(dir.path(), "xband-4pole");
    let o = resonet(
        dir.path(),
        &["sweep", "--design", &d, "--f-start", "9", "--f-stop", "11", "--points", "1001", "--format", "csv", "--out", "s.csv"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert_eq!(text.lines().count(), 1002);
    assert_eq!(text.lines().next().unwrap(), "freq_hz,s11_re,s11_im,s21_re,s21_im");
    for line in text.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let power = v[1] * v[1] + v[2] * v[2] + v[3] * v[3] + v[4] * v[4];
        assert!((power - 1.0).abs() <= 1e-9, "{line}");
    }
}

#[test]
fn touchstone_sweep_matches_library_response() {
    let dir = tempfile::tempdir().unwrap();
    let d = synthesized(dir.path(), "xband-4pole");
    let o = resonet(
        dir.path(),
        &["sweep", "--design", &d, "--f-start", "9", "--f-stop", "11", "--points", "401", "--out", "s.s2p"],
    );
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(dir.path().join("s.s2p")).unwrap();
    assert!(text.lines().any(|l| l == "# GHz S RI R 50"));
    let file = touchstone::parse(&text).unwrap();
    let design = DesignFile::parse(&fs::read_to_string(dir.path().join(&d)).unwrap()).unwrap();
    let direct = sweep(&design.matrix, &design.spec, 9e9, 11e9, 401).unwrap();
    for i in 0..direct.len() {
        assert!((file.grid[i] - direct.grid[i]).abs() <= 1e-12 * direct.grid[i]);
        assert!((file.s11[i] - direct.s11[i]).norm() <= 1e-12);
        assert!((file.s21[i] - direct.s21[i]).norm() <= 1e-12);
    }
}

#[test]
fn sweep_rejects_single_point_and_unwritable_output() {
    let dir = tempfile::tempdir().unwrap();
    let d = synthesized(dir.path(), "xband-4pole");
    assert_eq!(code(&resonet(dir.path(), &["sweep", "--design", &d, "--points", "1", "--out", "a.csv"])), 3);
    assert_eq!(code(&resonet(dir.path(), &["sweep", "--design", &d, "--out", "no/such/dir/a.csv"])), 4);
    assert!(!dir.path().join("a.csv").exists());
}

fn write_pair_response(dir: &Path, name: &str, m12: f64) {
    let spec = FilterSpec::with_fbw(2, 10e9, 0.05, 0.1).unwrap();
    let cm = weakly_coupled_pair(m12).unwrap();
    let resp = sweep(&cm, &spec, 9.5e9, 10.5e9, 4001).unwrap();
    fs::write(dir.join(name), touchstone::to_string(&resp)).unwrap();
}

fn write_single_resonator(dir: &Path, name: &str, q: f64) {
    let fbw = 0.05;
    let spec = FilterSpec::with_fbw(2, 10e9, fbw, 0.1).unwrap();
    let cm = singly_loaded_resonator(q * fbw).unwrap();
    let resp = sweep(&cm, &spec, 9e9, 11e9, 4001).unwrap();
    fs::write(dir.join(name), csv::to_string(&resp)).unwrap();
}

#[test]
fn extract_k_from_coupled_pair() {
    let dir = tempfile::tempdir().unwrap();
    write_pair_response(dir.path(), "pair.s2p", 0.92);
    let o = resonet(dir.path(), &["extract", "--response", "pair.s2p", "--mode", "k"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    let k = number_after(&text, "k =");
    assert!((k - 0.046).abs() < 5e-4, "{text}");
    assert!(text.contains("f_p1 =") && text.contains("f_p2 ="));
}

#[test]
fn single_resonator_has_no_peak_pair() {
    let dir = tempfile::tempdir().unwrap();
    write_single_resonator(dir.path(), "one.csv", 18.628);
    let o = resonet(dir.path(), &["extract", "--response", "one.csv", "--mode", "k"]);
    assert_eq!(code(&o), 5);
    assert!(stderr(&o).contains("found 1"), "{}", stderr(&o));
}

#[test]
fn extract_external_q() {
    let dir = tempfile::tempdir().unwrap();
    write_single_resonator(dir.path(), "one.csv", 18.628);
    let o = resonet(dir.path(), &["extract", "--response", "one.csv", "--mode", "qe"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let q = number_after(&stdout(&o), "Q_e =");
    assert!((q - 18.628).abs() / 18.628 < 0.02, "{q}");
    let o = resonet(dir.path(), &["extract", "--response", "one.csv", "--mode", "qe", "--f0-ghz", "10"]);
    assert!((number_after(&stdout(&o), "Q_e =") - 18.628).abs() / 18.628 < 0.02);
}

#[test]
fn optimize_recovers_perturbed_design() {
    let dir = tempfile::tempdir().unwrap();
    let d = synthesized(dir.path(), "xband-4pole");
    fs::write(dir.path().join("o.toml"), "perturb = 0.1\nmax_iter = 5000\ntol = 1e-14\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_resonet"))
        .args(["optimize", "--design", &d, "--config", "o.toml", "--out", "out.toml"])
        .current_dir(dir.path())
        .env("RESONET_SEED", "17")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("seed 17"));
    assert!(text.lines().filter(|l| l.starts_with("iter")).count() > 1);
    let original = DesignFile::parse(&fs::read_to_string(dir.path().join(&d)).unwrap()).unwrap();
    let tuned = DesignFile::parse(&fs::read_to_string(dir.path().join("out.toml")).unwrap()).unwrap();
    for (a, b) in tuned.matrix.mainline().iter().zip(original.matrix.mainline()) {
        assert!((a - b).abs() < 1e-3);
    }
    for (a, b) in tuned.targets.k.iter().zip(&original.targets.k) {
        assert!((a - b).abs() < 1e-4);
    }
}

#[test]
fn seed_makes_optimization_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let d = synthesized(dir.path(), "xband-4pole");
    fs::write(dir.path().join("o.toml"), "perturb = 0.05\nmax_iter = 50\n").unwrap();
    let run = |out: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_resonet"))
            .args(["optimize", "--design", &d, "--config", "o.toml", "--out", out])
            .current_dir(dir.path())
            .env("RESONET_SEED", "3")
            .output()
            .unwrap();
        assert_eq!(code(&o), 0);
        DesignFile::parse(&fs::read_to_string(dir.path().join(out)).unwrap()).unwrap()
    };
    assert_eq!(run("a.toml").matrix, run("b.toml").matrix);
}

#[test]
fn optimal_design_converges_immediately() {
    let dir = tempfile::tempdir().unwrap();
    let d = synthesized(dir.path(), "xband-8pole");
    let o = resonet(dir.path(), &["optimize", "--design", &d, "--out", "same.toml"]);
    assert_eq!(code(&o), 0);
    let iterations = number_after(&stdout(&o), "converged after");
    assert!(iterations <= 2.0);
}

#[test]
fn zero_iterations_is_invalid() {
    let dir = tempfile::tempdir().unwrap();
    let d = synthesized(dir.path(), "xband-4pole");
    fs::write(dir.path().join("z.toml"), "max_iter = 0\n").unwrap();
    let o = resonet(dir.path(), &["optimize", "--design", &d, "--config", "z.toml", "--out", "z.out"]);
    assert_eq!(code(&o), 3);
    assert!(!dir.path().join("z.out").exists());
}

#[test]
fn unknown_optimizer_key_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let d = synthesized(dir.path(), "xband-4pole");
    fs::write(dir.path().join("z.toml"), "max_iters = 10\n").unwrap();
    let o = resonet(dir.path(), &["optimize", "--design", &d, "--config", "z.toml", "--out", "z.out"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn waveguide_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = resonet(dir.path(), &["waveguide", "WG16"]);
    assert_eq!(code(&o), 0);
    assert!((number_after(&stdout(&o), "cutoff =") - 6.557).abs() < 1e-3);

    let o = resonet(dir.path(), &["waveguide", "--a-mm", "45.72"]);
    assert!((number_after(&stdout(&o), "cutoff =") - 3.28).abs() < 5e-3);

    let o = resonet(dir.path(), &["waveguide", "WR3", "--at-ghz", "300"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("guided wavelength at 300 GHz"));

    assert_eq!(code(&resonet(dir.path(), &["waveguide", "WR3", "--at-ghz", "100"])), 3);
    let o = resonet(dir.path(), &["waveguide", "WG99"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("WG16") && stderr(&o).contains("WR3"));
}

#[test]
fn analyze_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let d = synthesized(dir.path(), "xband-4pole");
    resonet(
        dir.path(),
        &["sweep", "--design", &d, "--f-start", "9", "--f-stop", "11", "--points", "2001", "--out", "s.csv"],
    );
    let o = resonet(dir.path(), &["analyze", "--response", "s.csv"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(number_after(&text, "reflection zeros ="), 4.0);
    assert!((number_after(&text, "center frequency =") - 10.003).abs() < 0.01);
    let o = resonet(dir.path(), &["analyze", "--response", "s.csv", "--level-db", "-80"]);
    assert_eq!(code(&o), 5);
}

#[test]
fn bundled_reference_designs_synthesize() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["xband-4pole", "xband-8pole", "yband-4pole"] {
        synthesized(dir.path(), name);
    }
    let o = resonet(dir.path(), &["synthesize", "--config", "xband-5pole"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn usage_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&resonet(dir.path(), &["sweep"])), 3);
    assert_eq!(code(&resonet(dir.path(), &["extract", "--response", "x", "--mode", "z"])), 3);
    assert_eq!(code(&resonet(dir.path(), &["--help"])), 0);
}
