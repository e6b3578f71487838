use genus1_core::lasserre::{build_pencil, moment_substitution, SubspaceSpec};
use genus1_core::sdpa::{export_sdpa, parse_sdpa};
use genus1_core::{CurveParams, RealPoint};

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn plane_pencil_matches_golden() {
    // y^2 + x^4 + x^2 - 2 = 0, so A = 1, B = -2 and the corner is 2 - u2 - u4
    let c = CurveParams::new(0.0, 2.0).unwrap();
    let p = build_pencil(&c, &SubspaceSpec::plane(), 2).unwrap();
    assert_eq!(p.render(), golden("pencil_plane_k2_a0_b2.txt"));
}

#[test]
fn figure_eight_pencil_matches_golden() {
    let c = CurveParams::new(0.0, 1.0).unwrap();
    let p = build_pencil(&c, &"1,x,x*y".parse().unwrap(), 3).unwrap();
    assert_eq!(p.render(), golden("pencil_eight_k3.txt"));
    assert_eq!(p.num_lifted(), 9);
}

#[test]
fn sdpa_header_and_round_trip() {
    let c = CurveParams::new(0.0, 1.0).unwrap();
    let p = build_pencil(&c, &SubspaceSpec::plane(), 2).unwrap();
    let text = p.export_sdpa(None).unwrap();
    assert!(text.starts_with("7\n1\n4\n"));
    let back = parse_sdpa(&text).unwrap();
    let orig = p.to_problem(None).unwrap();
    assert_eq!(back.constant(), orig.constant());
    assert_eq!(back.coeffs(), orig.coeffs());
    assert_eq!(export_sdpa(&back), text);

    let fixed = p.export_sdpa(Some(&[0.25, -0.5])).unwrap();
    assert!(fixed.starts_with("5\n1\n4\n"));
}

#[test]
fn substituted_moment_matrices_are_psd() {
    let c = CurveParams::new(0.5, 1.5).unwrap();
    let p = build_pencil(&c, &SubspaceSpec::plane(), 3).unwrap();
    for pt in genus1_core::curve::sample_real_points(&c, 40).unwrap() {
        let m = p.eval(&moment_substitution(&p, RealPoint { x: pt.x, y: pt.y }).unwrap());
        let (vals, _) = genus1_core::linalg::jacobi_eigen(&m, 1e-15);
        assert!(*vals.last().unwrap() >= -1e-10);
        assert!(vals[1] <= 1e-8 * vals[0]);
    }
}
