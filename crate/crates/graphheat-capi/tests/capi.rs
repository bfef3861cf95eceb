//! Exercises the exported C ABI from Rust, including the generated
//! header and a compiled C smoke program.

use graphheat_capi::*;
use std::ffi::CString;
use std::path::PathBuf;
use std::ptr;

const STAR5: &str = r#"{"vertices": ["c", "t0", "t1", "t2", "t3", "t4"],
  "edges": [
    {"id": "e0", "from": "c", "to": "t0", "length": 1.0},
    {"id": "e1", "from": "c", "to": "t1", "length": 1.0},
    {"id": "e2", "from": "c", "to": "t2", "length": 1.0},
    {"id": "e3", "from": "c", "to": "t3", "length": 1.0},
    {"id": "e4", "from": "c", "to": "t4", "length": 1.0}
  ]}"#;

fn parse(json: &str) -> *mut GhGraph {
    let text = CString::new(json).unwrap();
    let mut handle: *mut GhGraph = ptr::null_mut();
    let status = unsafe { gh_graph_parse_json(text.as_ptr(), &mut handle) };
    assert_eq!(status, GhStatus::Ok);
    assert!(!handle.is_null());
    handle
}

#[test]
fn parse_query_and_free() {
    let g = parse(STAR5);
    unsafe {
        assert_eq!(gh_graph_vertex_count(g), 6);
        assert_eq!(gh_graph_edge_count(g), 5);
        assert!((gh_graph_total_length(g) - 5.0).abs() < 1e-15);
        gh_graph_free(g);
    }
}

#[test]
fn parse_error_sets_message() {
    let text = CString::new(r#"{"vertices": [], "edges": []}"#).unwrap();
    let mut handle: *mut GhGraph = ptr::null_mut();
    let status = unsafe { gh_graph_parse_json(text.as_ptr(), &mut handle) };
    assert_eq!(status, GhStatus::ParseError);
    assert!(handle.is_null());
    let message = unsafe { std::ffi::CStr::from_ptr(gh_last_error_message()) };
    assert!(message.to_str().unwrap().contains("no edges"));

    let status = unsafe { gh_graph_parse_json(ptr::null(), &mut handle) };
    assert_eq!(status, GhStatus::NullArgument);
}

#[test]
fn heat_values_match_core_library() {
    let g = parse(STAR5);
    let edge = CString::new("e0").unwrap();
    let mut value = 0.0;
    let mut bound = 0.0;
    let status = unsafe {
        gh_heat_diagonal(g, 0.05, edge.as_ptr(), 0.3, 1e-10, &mut value, &mut bound)
    };
    assert_eq!(status, GhStatus::Ok);
    assert!(bound <= 1e-10);

    let core = graphheat::heat::heat_diagonal(
        &graphheat::zoo::star(5, 1.0),
        0.05,
        graphheat::graph::GraphPoint::new(graphheat::graph::EdgeId(0), 0.3),
        graphheat::heat::Truncation::Auto { tol: 1e-10 },
    )
    .unwrap();
    assert_eq!(value, core.value);

    let missing = CString::new("nope").unwrap();
    let status = unsafe {
        gh_heat_diagonal(g, 0.05, missing.as_ptr(), 0.3, 1e-10, &mut value, &mut bound)
    };
    assert_eq!(status, GhStatus::InvalidArgument);
    unsafe { gh_graph_free(g) };
}

#[test]
fn grid_and_trace_and_spectrum() {
    let g = parse(STAR5);
    let edge = CString::new("e0").unwrap();
    let samples = 10usize;
    let mut xs = vec![0.0f64; samples + 1];
    let mut values = vec![0.0f64; samples + 1];
    let mut bound = 0.0f64;
    let status = unsafe {
        gh_heat_diagonal_grid(
            g,
            0.02,
            edge.as_ptr(),
            samples,
            1e-9,
            xs.as_mut_ptr(),
            values.as_mut_ptr(),
            &mut bound,
        )
    };
    assert_eq!(status, GhStatus::Ok);
    assert_eq!(xs[0], 0.0);
    assert!((xs[samples] - 1.0).abs() < 1e-15);
    // Center value is 2/d of the interior plateau at small t.
    assert!((values[0] * (4.0 * std::f64::consts::PI * 0.02).sqrt() - 0.4).abs() < 1e-3);

    let mut trace_value = 0.0f64;
    let status = unsafe { gh_roth_trace(g, 0.1, 10.0, &mut trace_value) };
    assert_eq!(status, GhStatus::Ok);
    assert!(trace_value > 0.0);

    let mut spectrum: *mut GhSpectrum = ptr::null_mut();
    let status = unsafe { gh_spectrum_secular(g, 5.0, &mut spectrum) };
    assert_eq!(status, GhStatus::Ok);
    unsafe {
        let n = gh_spectrum_level_count(spectrum);
        assert_eq!(n, 4);
        let mut sigma = 0.0;
        let mut mult = 0usize;
        assert_eq!(
            gh_spectrum_level(spectrum, 1, &mut sigma, &mut mult),
            GhStatus::Ok
        );
        assert!((sigma - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
        assert_eq!(mult, 4);
        assert_eq!(
            gh_spectrum_level(spectrum, 99, &mut sigma, &mut mult),
            GhStatus::InvalidArgument
        );
        gh_spectrum_free(spectrum);
        gh_graph_free(g);
    }
}

#[test]
fn generated_header_compiles_and_runs_as_c() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include/graphheat.h");
    let header_text = std::fs::read_to_string(&header).expect("header generated at build time");
    for symbol in [
        "gh_graph_parse_json",
        "gh_heat_diagonal",
        "gh_spectrum_secular",
        "GhStatus",
    ] {
        assert!(header_text.contains(symbol), "header lacks {symbol}");
    }

    // Locate the staticlib next to the test executable's target dir.
    let exe = std::env::current_exe().unwrap();
    let debug_dir = exe.parent().unwrap().parent().unwrap();
    let staticlib = debug_dir.join("libgraphheat_capi.a");
    if !staticlib.exists() {
        eprintln!("staticlib not found at {staticlib:?}; skipping C link test");
        return;
    }
    let cc = which_cc();
    let Some(cc) = cc else {
        eprintln!("no C compiler found; skipping C link test");
        return;
    };
    let dir = debug_dir.join("capi-smoke");
    std::fs::create_dir_all(&dir).unwrap();
    let smoke = manifest.join("examples/smoke.c");
    let out = dir.join("smoke");
    let status = std::process::Command::new(cc)
        .arg(&smoke)
        .arg(&staticlib)
        .args(["-I", manifest.join("include").to_str().unwrap()])
        .args(["-lm", "-lpthread", "-ldl"])
        .arg("-o")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "C smoke program failed to compile/link");
    let run = std::process::Command::new(&out).output().unwrap();
    assert!(run.status.success(), "C smoke program exited nonzero");
    let text = String::from_utf8_lossy(&run.stdout);
    assert!(text.contains("ok"), "unexpected smoke output: {text}");
}

fn which_cc() -> Option<&'static str> {
    for cc in ["cc", "gcc", "clang"] {
        if std::process::Command::new(cc)
            .arg("--version")
            .output()
            .map(|o| o.status.success())
            .unwrap_or(false)
        {
            return Some(cc);
        }
    }
    None
}
