use std::process::Command;

use proptest::prelude::*;

use tanglescope::{fixtures, Canvas, Picture, PixelSet};
use tanglescope_cli::fixture_files::{self, NAMES};
use tanglescope_cli::render::{render_mask, render_svg};
use tanglescope_cli::{analyze, parse_grid, parse_pgm, AnalysisReport, AnalyzeOptions, CliError};

fn fixture_report(name: &str) -> AnalysisReport {
    let (wc, _) = fixture_files::fixture(name).unwrap();
    let opts = AnalyzeOptions {
        offset: Some(wc.offset()),
        ..AnalyzeOptions::default()
    };
    analyze(wc.picture().clone(), &opts).unwrap()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tanglescope"))
}

#[test]
fn grid_and_gray_map_inputs() {
    let grid = parse_grid("2 2 1\n1 0\n0 0\n").unwrap();
    assert_eq!(grid.values(), fixtures::mono2x2().picture().values());
    let pgm = parse_pgm(b"P2\n2 2\n255\n255 0 0 0\n", 1).unwrap();
    assert_eq!(pgm.values(), grid.values());
    assert!(matches!(
        parse_grid("2 2 1\n1 0 0\n"),
        Err(CliError::TokenCount { expected: 4, actual: 3 })
    ));
}

#[test]
fn mono2x2_report() {
    let r = fixture_report("mono2x2");
    assert!(r.passed());
    assert_eq!(r.duality.max_supported_resolution, 2);
    assert_eq!(r.regions.len(), 1);
    assert_eq!(r.regions[0].kernel.as_deref(), Some("e"));
    assert_eq!(r.tree_set.len(), 1);
    assert_eq!(r.tree_set[0].order, 0);
}

#[test]
fn mini_l_report() {
    let r = fixture_report("miniL");
    assert!(r.passed());
    assert_eq!(r.regions.iter().filter(|x| x.complexity == 1).count(), 2);
    assert_eq!(r.tree_set.len(), 1);
    assert_eq!(r.tree_set[0].order, 0);
    assert_eq!(r.decode(&r.tree_set[0].side).unwrap(), fixtures::mini_l_figure());
    // Too large for chop tree search.
    assert!(r.duality.verdicts.is_empty());
}

#[test]
fn quad4x4_report() {
    let r = fixture_report("quad4x4");
    assert!(r.passed());
    assert_eq!(r.tree_set.len(), 3);
    assert_eq!(r.splitting_stars.len(), 4);
    let quadrants: Vec<_> = r.regions.iter().filter(|x| x.complexity == 3).collect();
    assert_eq!(quadrants.len(), 4);
    let mut outlines: Vec<_> = quadrants.iter().map(|x| x.outline.clone()).collect();
    outlines.sort();
    outlines.dedup();
    assert_eq!(outlines.len(), 4);
    for o in &outlines {
        assert!(r.splitting_stars.contains(o));
    }
    for q in &quadrants {
        let halves: Vec<_> = q.refines.iter().map(|&i| r.regions[i].complexity).collect();
        assert!(halves.contains(&1));
    }
}

#[test]
fn every_fixture_verifies() {
    for name in NAMES {
        assert!(fixture_report(name).passed(), "{name}");
    }
}

#[test]
fn renders() {
    let mono = render_svg(&fixture_report("mono2x2")).unwrap();
    assert_eq!(mono.matches("<polyline").count(), 1);
    assert!(mono.contains(r#"points="0,1 1,1 1,0""#));
    let quad = fixture_report("quad4x4");
    let svg = render_svg(&quad).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 3);
    assert_eq!(svg, render_svg(&quad).unwrap());
    let mask = render_mask(&quad).unwrap();
    assert!(mask.starts_with("P2\n"));
    assert_eq!(mask, render_mask(&quad).unwrap());

    let white = Picture::new(Canvas::grid(2, 2).unwrap(), 1, vec![0; 4]).unwrap();
    let opts = AnalyzeOptions {
        offset: Some(1),
        ..AnalyzeOptions::default()
    };
    let empty = analyze(white, &opts).unwrap();
    assert!(empty.tree_set.is_empty());
    let svg = render_svg(&empty).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 0);
    assert!(svg.trim_end().ends_with("</svg>"));
}

#[test]
fn fixture_files_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for name in NAMES {
        let pa = fixture_files::write_fixture(name, a.path()).unwrap();
        let pb = fixture_files::write_fixture(name, b.path()).unwrap();
        for (x, y) in pa.iter().zip(&pb) {
            assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap());
        }
        // Both encodings load back to the same codes.
        let (wc, _) = fixture_files::fixture(name).unwrap();
        let grid = parse_grid(&std::fs::read_to_string(&pa[0]).unwrap()).unwrap();
        let pgm = parse_pgm(&std::fs::read(&pa[1]).unwrap(), wc.picture().n()).unwrap();
        assert_eq!(grid.values(), wc.picture().values(), "{name}");
        assert_eq!(pgm.values(), wc.picture().values(), "{name}");
    }
    let text = std::fs::read_to_string(a.path().join("noisedisc4x4.grid")).unwrap();
    assert!(text.starts_with("# ") && text.contains("seed 15"));
    let l = parse_grid(&std::fs::read_to_string(a.path().join("miniL.grid")).unwrap()).unwrap();
    assert_eq!((l.canvas().width(), l.canvas().height(), l.n()), (5, 5, 1));
    assert_eq!(l.values().iter().filter(|&&v| v == 1).count(), 7);
    let c = parse_grid(&std::fs::read_to_string(a.path().join("checker4x4.grid")).unwrap()).unwrap();
    for (p, &v) in c.values().iter().enumerate() {
        assert_eq!(v, ((p / 4 + p % 4) % 2) as u64);
    }
    assert!(matches!(
        fixture_files::write_fixture("nope", a.path()),
        Err(CliError::UnknownFixture(_))
    ));
}

#[test]
fn reports_reject_bad_masks_and_schemas() {
    let mut r = fixture_report("mono2x2");
    r.tree_set[0].side = "10".into();
    assert!(matches!(
        AnalysisReport::from_json(&r.to_json().unwrap()),
        Err(CliError::Bitmask(_))
    ));
    let mut r = fixture_report("mono2x2");
    r.schema = 2;
    assert!(matches!(
        AnalysisReport::from_json(&r.to_json().unwrap()),
        Err(CliError::Schema(2))
    ));
    let mut r = fixture_report("mono2x2");
    r.tree_set_checks.minimality = false;
    assert!(!r.passed());
}

#[test]
fn command_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin().args(["fixtures", "quad4x4", "-o"]).arg(dir.path()).output().unwrap();
    assert!(out.status.success());
    let json = dir.path().join("quad.json");
    let out = bin()
        .arg("analyze")
        .arg(dir.path().join("quad4x4.grid"))
        .arg("--json")
        .arg(&json)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let printed = AnalysisReport::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let saved = AnalysisReport::from_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(printed, saved);

    let svg = dir.path().join("quad.svg");
    let status = bin().arg("render").arg(&json).args(["--style", "svg", "-o"]).arg(&svg).status();
    assert!(status.unwrap().success());
    assert_eq!(std::fs::read_to_string(&svg).unwrap(), render_svg(&saved).unwrap());

    let pgm = dir.path().join("quad4x4.pgm");
    let out = bin().arg("analyze").arg(&pgm).args(["--bits", "2"]).output().unwrap();
    let from_pgm = AnalysisReport::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(from_pgm, saved);

    let out = bin().args(["fixtures", "noisedisc4x4", "-o"]).arg(dir.path()).output().unwrap();
    assert!(out.status.success());
    let noise = dir.path().join("noisedisc4x4.grid");
    let res = |mask: &str| {
        let out = bin().arg("resolution").arg(&noise).args(["--subset", mask]).output().unwrap();
        String::from_utf8(out.stdout).unwrap().trim().parse::<u64>().unwrap()
    };
    let block = fixtures::noise_disc_block().to_hex();
    let ring = fixtures::noise_disc_ring().to_hex();
    assert!(res(&block) > res(&ring));

    let bad = dir.path().join("bad.grid");
    std::fs::write(&bad, "2 2 1\n1 0 0\n").unwrap();
    let out = bin().arg("analyze").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("expected 4"));
    let out = bin().arg("resolution").arg(&noise).args(["--subset", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

fn small_picture() -> impl Strategy<Value = Picture> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(w, h)| {
        proptest::collection::vec(0..4u64, w * h)
            .prop_map(move |v| Picture::new(Canvas::grid(w, h).unwrap(), 2, v).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn reports_round_trip(pic in small_picture()) {
        let r = analyze(pic, &AnalyzeOptions::default()).unwrap();
        prop_assert!(r.passed());
        let back = AnalysisReport::from_json(&r.to_json().unwrap()).unwrap();
        prop_assert_eq!(&back, &r);
        let full = PixelSet::full(r.pixel_count());
        for l in &r.tree_set {
            let s = r.decode(&l.side).unwrap();
            prop_assert!(!s.is_empty() && s != full);
        }
        prop_assert_eq!(render_svg(&back).unwrap(), render_svg(&r).unwrap());
    }
}
