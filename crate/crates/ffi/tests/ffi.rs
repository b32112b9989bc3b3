use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use seedopt_ffi::*;

fn star(p: f64) -> *mut SeedoptGraph {
    let tails = [0u32; 4];
    let heads = [1u32, 2, 3, 4];
    let probs = [p; 4];
    let mut g = ptr::null_mut();
    let st = unsafe { seedopt_graph_from_arcs(5, tails.as_ptr(), heads.as_ptr(), probs.as_ptr(), 4, &mut g) };
    assert_eq!(st, SeedoptStatus::Ok);
    g
}

fn last_error() -> String {
    let p = seedopt_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn graph_lifecycle_and_counts() {
    let g = star(1.0);
    unsafe {
        assert_eq!(seedopt_graph_node_count(g), 5);
        assert_eq!(seedopt_graph_arc_count(g), 4);
        let mut wc = ptr::null_mut();
        assert_eq!(seedopt_graph_assign_weighted_cascade(g, &mut wc), SeedoptStatus::Ok);
        let mut exact = 0.0;
        assert_eq!(seedopt_exact_spread(wc, SeedoptModel::Ic, [0u32].as_ptr(), 1, -1, &mut exact), SeedoptStatus::Ok);
        assert_eq!(exact, 5.0);
        seedopt_graph_free(wc);
        seedopt_graph_free(g);
        seedopt_graph_free(ptr::null_mut());
        assert_eq!(seedopt_graph_node_count(ptr::null()), 0);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        let st = seedopt_graph_from_arcs(2, [0u32].as_ptr(), [0u32].as_ptr(), [0.5].as_ptr(), 1, &mut g);
        assert_eq!(st, SeedoptStatus::Parse);
        assert!(last_error().contains("self-loop"));
        assert!(g.is_null());

        let path = CString::new("/nonexistent/graph.tsv").unwrap();
        assert_eq!(seedopt_graph_load(path.as_ptr(), -1.0, false, &mut g), SeedoptStatus::Io);
        assert_eq!(seedopt_graph_load(ptr::null(), -1.0, false, &mut g), SeedoptStatus::NullPointer);

        let g = star(1.0);
        let mut uni = ptr::null_mut();
        assert_eq!(seedopt_graph_assign_uniform(g, 1.5, &mut uni), SeedoptStatus::InvalidArgument);
        let (mut m, mut s) = (0.0, 0.0);
        let st = seedopt_estimate_spread(g, SeedoptModel::Ic, [7u32].as_ptr(), 1, -1, 10, 0, &mut m, &mut s);
        assert_eq!(st, SeedoptStatus::InvalidArgument);
        let st = seedopt_estimate_spread(ptr::null(), SeedoptModel::Ic, ptr::null(), 0, -1, 10, 0, &mut m, &mut s);
        assert_eq!(st, SeedoptStatus::NullPointer);
        seedopt_graph_free(g);
    }
}

#[test]
fn optimizers_through_the_abi() {
    let g = star(1.0);
    unsafe {
        let mut seeds = [u32::MAX; 5];
        let mut value = 0.0;
        let st = seedopt_greedy_maxinf(g, SeedoptModel::Ic, 1, -1, 10, 3, true, seeds.as_mut_ptr(), &mut value);
        assert_eq!((st, seeds[0], value), (SeedoptStatus::Ok, 0, 5.0));

        let (mut len, mut cov, mut feasible) = (0usize, 0.0, false);
        let st = seedopt_greedy_mintss(
            g, SeedoptModel::Ic, 5.0, 0.5, -1, 10, 3, false, seeds.as_mut_ptr(), 5, &mut len, &mut cov, &mut feasible,
        );
        assert_eq!((st, len, seeds[0], feasible), (SeedoptStatus::Ok, 1, 0, true));

        let mut time = 0i64;
        let st = seedopt_mintime(
            g, SeedoptModel::Ic, 1, 5.0, 0.5, 10, 3, seeds.as_mut_ptr(), 5, &mut len, &mut time, &mut cov,
        );
        assert_eq!((st, time, len), (SeedoptStatus::Ok, 1, 1));

        // budget ceil(1 + ln 10) = 4 leaves a p = 0 star short of 5
        let z = star(0.0);
        let st = seedopt_mintime(
            z, SeedoptModel::Ic, 1, 5.0, 0.5, 10, 3, seeds.as_mut_ptr(), 5, &mut len, &mut time, &mut cov,
        );
        assert_eq!((st, time, len), (SeedoptStatus::Ok, -1, 4));
        let st = seedopt_mintime(
            z, SeedoptModel::Ic, 1, 5.0, 0.5, 10, 3, seeds.as_mut_ptr(), 2, &mut len, &mut time, &mut cov,
        );
        assert_eq!((st, len), (SeedoptStatus::BufferTooSmall, 4));
        seedopt_graph_free(z);
        seedopt_graph_free(g);
    }
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_the_abi() {
    let header = std::fs::read_to_string(crate_dir().join("include/seedopt.h")).unwrap();
    for name in [
        "typedef struct SeedoptGraph SeedoptGraph",
        "SEEDOPT_STATUS_OK = 0",
        "seedopt_graph_from_arcs",
        "seedopt_graph_load",
        "seedopt_graph_free",
        "seedopt_estimate_spread",
        "seedopt_exact_spread",
        "seedopt_greedy_maxinf",
        "seedopt_greedy_mintss",
        "seedopt_mintime",
        "seedopt_last_error_message",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

/// Static library next to the test binary (`target/<profile>/deps/..`).
fn static_lib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let profile_dir = exe.parent()?.parent()?;
    let lib = profile_dir.join("libseedopt_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn c_program_links_against_the_header() {
    let lib = static_lib().unwrap_or_else(|| {
        // integration tests only build the rlib; produce the archive on demand
        let status = Command::new(env!("CARGO"))
            .args(["build", "-p", "seedopt-ffi", "--lib"])
            .current_dir(crate_dir())
            .status()
            .expect("run cargo");
        assert!(status.success());
        static_lib().expect("static library after build")
    });
    let out = tempfile_path("smoke");
    let status = Command::new("cc")
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("run cc");
    assert!(status.success(), "C compile failed");
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "C smoke test exited with {:?}", run.status.code());
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(stdout.starts_with("5 5.0 unknown node 99"), "{stdout}");
    let _ = std::fs::remove_file(out);
}

fn tempfile_path(stem: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(format!("{stem}-{}", std::process::id()))
}
