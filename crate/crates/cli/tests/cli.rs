use std::process::{Command, Output};

fn genus1(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genus1"))
        .args(args)
        .env("GENUS1_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn stability_prints_summary_line() {
    let o = genus1(&["stability", "--a", "0", "--b", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("N=2 d=0 residual="), "{}", stdout(&o));
}

#[test]
fn stability_outside_parameter_set_exits_2() {
    let o = genus1(&["stability", "--a", "0", "--b", "-2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn stability_budget_exits_3() {
    // N = 10 on this curve needs d = 16
    let o = genus1(&["stability", "--a", "1.9", "--b", "0.9001", "--dmax", "4"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn gamma_table_header_and_rows() {
    let o = genus1(&["gamma-table", "--nmax", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,gamma_max,markov_cap");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("3,2.57"));
    assert!(lines[2].ends_with(",16"));
}

#[test]
fn pencil_writes_sdpa() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.dat-s");
    let o = genus1(&["pencil", "--a", "0", "--b", "2", "--k", "2", "--L", "1,x,y", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "size=4 coords=2 lifted=5");
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.starts_with("7\n1\n4\n"));
}

#[test]
fn pencil_rejects_bad_subspace() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.dat-s");
    for l in ["1,x,z", "1,x^9"] {
        let o = genus1(&["pencil", "--a", "0", "--b", "2", "--k", "2", "--L", l, "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{l}");
    }
}

#[test]
fn member_exit_codes() {
    let o = genus1(&["member", "--a", "0", "--b", "1", "--x", "0.2", "--y", "-0.3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("inside margin="));
    let o = genus1(&["member", "--a", "0", "--b", "1", "--x", "-2", "--y", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "outside");
}

#[test]
fn support_reports_exact_regime() {
    let o = genus1(&["support", "--a", "0", "--b", "1", "--cx", "1", "--cy", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("regime=exact"), "{text}");
    let value: f64 = text.split_whitespace().next().unwrap().trim_start_matches("value=").parse().unwrap();
    assert!((value - 1.0).abs() < 1e-6);
}

#[test]
fn hull_rows_in_direction_order() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("hull.csv");
    let svg = dir.path().join("hull.svg");
    let o = genus1(&[
        "hull", "--a", "0", "--b", "1", "--directions", "8", "--out", csv.to_str().unwrap(), "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "dir_x,dir_y,value,opt_x,opt_y");
    assert_eq!(lines.len(), 9);
    assert!(lines[1].starts_with("1,0,"));
    assert!(std::fs::read_to_string(svg).unwrap().contains("<polygon"));
}

#[test]
fn region_small_grid_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = genus1(&["region", "--grid", "8", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let (ta, tb) = (std::fs::read_to_string(a).unwrap(), std::fs::read_to_string(b).unwrap());
    assert_eq!(ta, tb);
    assert!(ta.starts_with("a,b,N,predicted_le3\n"));
}

#[test]
fn tangent_cert_round_trips() {
    let o = genus1(&["tangent-cert", "--a", "0", "--b", "2", "--x0", "0.3", "--branch", "lower"]);
    assert_eq!(o.status.code(), Some(0));
    let parsed = genus1_core::tangent::parse_certificate(&stdout(&o)).unwrap();
    assert!(parsed.point.y < 0.0);
    assert!(parsed.residual < 1e-6);
}

#[test]
fn tangent_cert_off_curve_exits_2() {
    let o = genus1(&["tangent-cert", "--a", "0", "--b", "2", "--x0", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
}
