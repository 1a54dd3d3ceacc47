//! The installed binary, driven as a separate process.

use std::path::Path;
use std::process::{Command, Output};

fn klimited(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_klimited"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn bounds_for_the_full_six_dimensional_space() {
    let o = klimited(&["bounds", "--n", "63", "--t", "6", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for line in [
        "t_star=11",
        "uncoded=63",
        "theorem1_ub=16",
        "scr_best=42",
        "scr_worst=60",
    ] {
        assert!(
            text.lines().any(|l| l == line),
            "{line} missing from\n{text}"
        );
    }
}

#[test]
fn construct_then_verify_whole_space() {
    let dir = tempfile::tempdir().unwrap();
    let scheme = dir.path().join("scheme.txt");
    let o = klimited(&[
        "construct",
        "scheme1",
        "--t",
        "8",
        "--k",
        "3",
        "-o",
        path(&scheme),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let o = klimited(&["verify", "--full-space", "8", path(&scheme)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("255/255 ok"), "{}", stdout(&o));
}

#[test]
fn every_scheme_round_trips_on_a_nested_instance() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    std::fs::write(
        &g,
        "# two chains\n9 6\n100000\n010000\n001000\n000100\n000010\n000001\n111100\n110000\n111000\n",
    )
    .unwrap();
    for (name, rows) in [
        ("scheme1-adapted", None),
        ("scr", None),
        ("bs", Some(6)),
        ("brute", Some(6)),
    ] {
        let out = dir.path().join(format!("{name}.txt"));
        let mut args = vec![
            "construct",
            name,
            "--k",
            "2",
            "-i",
            path(&g),
            "-o",
            path(&out),
        ];
        if name == "brute" {
            args.extend(["--brute-max-dim", "6"]);
        }
        let o = klimited(&args);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{name}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let o = klimited(&["verify", path(&out), path(&g)]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        assert!(stdout(&o).starts_with("9/9 ok"), "{name}: {}", stdout(&o));
        if let Some(rows) = rows {
            let text = std::fs::read_to_string(&out).unwrap();
            let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
            assert_eq!(header, format!("2 {rows} 6"), "{name}");
        }
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(klimited(&["bounds", "--n", "63"]).status.code(), Some(2));
    assert_eq!(
        klimited(&["construct", "scr", "--k", "3", "-i", "x"])
            .status
            .code(),
        Some(2)
    );

    let g = dir.path().join("g.txt");
    std::fs::write(&g, "3 3\n100\n010\n0a1\n").unwrap();
    let o = klimited(&["construct", "scr", "--k", "2", "-i", path(&g)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4, column 2"));

    std::fs::write(&g, "5 3\n100\n010\n001\n110\n111\n").unwrap();
    let limited = [
        "construct",
        "brute",
        "--k",
        "2",
        "-i",
        path(&g),
        "--max-nodes",
        "1",
    ];
    assert_eq!(klimited(&limited).status.code(), Some(3));

    let scheme = dir.path().join("s.txt");
    let o = klimited(&[
        "construct",
        "scheme1-adapted",
        "--k",
        "3",
        "-i",
        path(&g),
        "-o",
        path(&scheme),
    ]);
    assert_eq!(o.status.code(), Some(0));
    std::fs::write(&g, "1 3\n011\n").unwrap();
    let o = klimited(&["verify", path(&scheme), path(&g)]);
    assert_eq!(o.status.code(), Some(4), "{}", stdout(&o));
}

#[test]
fn bench_output_is_reproducible() {
    let args = [
        "bench",
        "--t",
        "4",
        "--k",
        "2",
        "--n",
        "5,8",
        "--trials",
        "3",
        "--seed",
        "9",
        "--no-timing",
    ];
    let a = klimited(&args);
    let b = klimited(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("scheme,n,t,k,seed,t_k,elapsed_ms,status\n"));
    assert_eq!(text.lines().count(), 1 + 2 * 3 * 7);
}
