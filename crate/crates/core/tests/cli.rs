use std::path::PathBuf;
use std::process::Command;

fn golden(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("goldens")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn multidet(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_multidet"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = multidet(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

#[test]
fn dimer_probability() {
    let m = golden("three_dimer_measure.json");
    assert_eq!(ok(&["prob", &m, "--coloring", "132"]), "1/3\n");
    assert_eq!(ok(&["prob", &m, "--coloring", "111"]), "0\n");
    assert_eq!(ok(&["marginal", &m, "--at", "1=1", "--at", "2=2"]), "1/3\n");
    assert_eq!(ok(&["enum", &m]), "coloring,probability\n123,1/3\n132,1/3\n213,1/3\n");
    assert_eq!(ok(&["charpoly", &m]).trim_end(), "(1,1,1): 1");
}

#[test]
fn heawood_validates() {
    let out = ok(&["validate", &golden("heawood_measure.json")]);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines.contains(&"total: 1"), "{out}");
    assert!(lines.contains(&"support: 24"), "{out}");
    assert!(lines.contains(&"valid: true"), "{out}");
}

#[test]
fn perm_support_csv() {
    let out = ok(&["perm-support", &golden("heawood_matrix.json")]);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "permutation,probability");
    assert_eq!(rows.len(), 25);
    assert!(rows.contains(&"1732645,1/24"));
    assert!(rows[1..].iter().all(|r| r.ends_with(",1/24")));
}

#[test]
fn constructions_match_goldens() {
    let cases = [
        ("dimer", "three_dimer_graph.json", "three_dimer_measure.json"),
        ("perm", "heawood_matrix.json", "heawood_measure.json"),
        ("tree", "triangle_graph.json", "triangle_measure.json"),
        ("tree", "k8_tree_graph.json", "k8_tree_measure.json"),
    ];
    for (kind, input, expected) in cases {
        let out = ok(&["construct", kind, &golden(input)]);
        assert_eq!(
            out,
            std::fs::read_to_string(golden(expected)).unwrap(),
            "{kind} {input}"
        );
    }
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let p = path.to_str().unwrap();
    assert_eq!(
        ok(&["construct", "dimer", &golden("three_dimer_graph.json"), "-o", p]),
        ""
    );
    assert_eq!(ok(&["prob", p, "--coloring", "213"]), "1/3\n");
}

#[test]
fn triangle_tree_is_uniform() {
    let out = ok(&["enum", &golden("triangle_measure.json")]);
    assert_eq!(out, "coloring,probability\n11,1/4\n12,1/4\n21,1/4\n22,1/4\n");
}

#[test]
fn single_color_charpoly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k1.json");
    std::fs::write(
        &path,
        r#"{"type": "measure", "k": 1, "n": 2, "matrices": [[[1, 0], [0, 1]]]}"#,
    )
    .unwrap();
    assert_eq!(ok(&["charpoly", path.to_str().unwrap()]).trim_end(), "(2): 1");
}

#[test]
fn sampling_is_deterministic() {
    let m = golden("three_dimer_measure.json");
    let a = ok(&["sample", &m, "--seed", "42", "--samples", "50"]);
    assert_eq!(a, ok(&["sample", &m, "--seed", "42", "--samples", "50"]));
    let rows: Vec<&str> = a.lines().collect();
    assert_eq!(rows[0], "coloring");
    assert_eq!(rows.len(), 51);
    assert!(rows[1..].iter().all(|r| ["123", "132", "213"].contains(r)));

    let g = golden("triangular_grid.json");
    let w = ok(&["sample", &g, "--seed", "5", "--samples", "3"]);
    assert_eq!(w, ok(&["sample", &g, "--seed", "5", "--samples", "3"]));
    assert_eq!(w.lines().count(), 4);
}

#[test]
fn vinnikov_interlaces() {
    let m = golden("interlace_measure.json");
    let out = ok(&["vinnikov", &m, "--grid", "-2,2,5", "--interlace", "1,2,3"]);
    let mut by_x: std::collections::BTreeMap<String, (Vec<f64>, Vec<f64>)> = Default::default();
    for row in out.lines().skip(1) {
        let f: Vec<&str> = row.split(',').collect();
        let entry = by_x.entry(f[1].to_string()).or_default();
        let y: f64 = f[2].parse().unwrap();
        if f[0] == "P" {
            entry.0.push(y)
        } else {
            entry.1.push(y)
        }
    }
    assert_eq!(by_x.len(), 5);
    for (p, r) in by_x.values() {
        assert_eq!((p.len(), r.len()), (4, 3));
        for i in 0..3 {
            assert!(p[i] <= r[i] + 1e-9 && r[i] <= p[i + 1] + 1e-9, "{p:?} {r:?}");
        }
    }
}

#[test]
fn exit_codes() {
    let (code, _, err) = multidet(&["prob", "/nonexistent/m.json", "--coloring", "1"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error[FileNotFound]"), "{err}");

    let (code, _, err) = multidet(&["prob", &golden("three_dimer_measure.json"), "--coloring", "12"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error["), "{err}");

    let (code, _, err) = multidet(&["charpoly", &golden("three_dimer_graph.json")]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error[SchemaViolation]"), "{err}");

    let (code, _, _) = multidet(&["frobnicate"]);
    assert_eq!(code, 2);
    let (code, _, _) = multidet(&["prob", &golden("three_dimer_measure.json")]);
    assert_eq!(code, 2);
    let (code, out, _) = multidet(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("vinnikov"));
}
