use std::ffi::CStr;
use std::process::Command;
use std::ptr;

use batched_bandits_ffi::*;

fn last_error() -> String {
    let p = bb_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn grid(family: BbGridFamily, horizon: u64, batches: usize, arms: usize) -> *mut BbGrid {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { bb_grid_new(family, horizon, batches, arms, &mut g) }, BbStatus::Ok);
    g
}

fn times(g: *const BbGrid) -> Vec<u64> {
    let mut n = 0;
    let mut buf = vec![0u64; unsafe { bb_grid_len(g) }];
    assert_eq!(unsafe { bb_grid_times(g, buf.as_mut_ptr(), buf.len(), &mut n) }, BbStatus::Ok);
    assert_eq!(n, buf.len());
    buf
}

#[test]
fn grid_round_trip() {
    let g = grid(BbGridFamily::Minimax, 50_000, 3, 3);
    assert_eq!(times(g), [484, 10_658, 50_000]);

    let mut small = [0u64; 2];
    let mut n = 0;
    assert_eq!(unsafe { bb_grid_times(g, small.as_mut_ptr(), 2, &mut n) }, BbStatus::BufferTooSmall);
    assert_eq!(n, 3);
    unsafe { bb_grid_free(g) };

    let g = grid(BbGridFamily::Geometric, 1000, 3, 2);
    assert_eq!(times(g), [10, 100, 1000]);
    unsafe { bb_grid_free(g) };
}

#[test]
fn explicit_grid_errors_carry_messages() {
    let mut g = ptr::null_mut();
    let bad = [5u64, 3, 10];
    bb_clear_error();
    assert!(bb_last_error().is_null());
    let s = unsafe { bb_grid_from_times(bad.as_ptr(), bad.len(), 10, 2, &mut g) };
    assert_eq!(s, BbStatus::InvalidGrid);
    assert!(g.is_null());
    assert!(last_error().contains("index 1"), "{}", last_error());

    let s = unsafe { bb_grid_new(BbGridFamily::Minimax, 2, 1, 3, &mut g) };
    assert_eq!(s, BbStatus::InfeasibleGrid);
}

#[test]
fn null_pointers_are_rejected() {
    let mut out = 0.0;
    assert_eq!(unsafe { bb_static_lb(ptr::null(), 0.1, 2, &mut out) }, BbStatus::NullPointer);
    assert_eq!(
        unsafe { bb_grid_new(BbGridFamily::Minimax, 100, 2, 2, ptr::null_mut()) },
        BbStatus::NullPointer
    );
    assert_eq!(unsafe { bb_grid_len(ptr::null()) }, 0);
    unsafe {
        bb_grid_free(ptr::null_mut());
        bb_instance_free(ptr::null_mut());
    }
}

#[test]
fn regret_matches_uniform_closed_form() {
    // Round-robin over two arms: regret is exactly Δ·T/2 regardless of noise.
    let g = grid(BbGridFamily::Minimax, 10, 1, 2);
    let means = [0.6, 0.5];
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { bb_instance_new(means.as_ptr(), 2, &mut inst) }, BbStatus::Ok);
    let (mut mean, mut se) = (f64::NAN, f64::NAN);
    let s = unsafe { bb_mean_regret(BbPolicy::Uniform, 1.0, g, inst, 4, 7, &mut mean, &mut se) };
    assert_eq!(s, BbStatus::Ok);
    assert!((mean - 0.5).abs() < 1e-12);

    let s = unsafe { bb_mean_regret(BbPolicy::Base, 1.0, g, inst, 3, 7, &mut mean, &mut se) };
    assert_eq!(s, BbStatus::Ok);
    let first = mean;
    unsafe { bb_mean_regret(BbPolicy::Base, 1.0, g, inst, 3, 7, &mut mean, &mut se) };
    assert_eq!(first, mean);

    assert_eq!(
        unsafe { bb_mean_regret(BbPolicy::Base, -1.0, g, inst, 3, 7, &mut mean, &mut se) },
        BbStatus::InvalidArgument
    );
    unsafe {
        bb_grid_free(g);
        bb_instance_free(inst);
    }
}

#[test]
fn etc_needs_two_arms() {
    let g = grid(BbGridFamily::Minimax, 100, 2, 3);
    let means = [0.6, 0.5, 0.5];
    let mut inst = ptr::null_mut();
    unsafe { bb_instance_new(means.as_ptr(), 3, &mut inst) };
    let (mut mean, mut se) = (0.0, 0.0);
    let s = unsafe { bb_mean_regret(BbPolicy::Etc, 1.0, g, inst, 2, 0, &mut mean, &mut se) };
    assert_eq!(s, BbStatus::Unsupported);
    unsafe {
        bb_grid_free(g);
        bb_instance_free(inst);
    }
}

#[test]
fn degenerate_instance() {
    let means = [0.5];
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { bb_instance_new(means.as_ptr(), 1, &mut inst) }, BbStatus::DegenerateInstance);
    let nan = [f64::NAN, 0.0];
    assert_ne!(unsafe { bb_instance_new(nan.as_ptr(), 2, &mut inst) }, BbStatus::Ok);
}

#[test]
fn lower_bound_and_divergences() {
    let g = grid(BbGridFamily::Minimax, 100, 2, 2);
    let mut v = 0.0;
    assert_eq!(unsafe { bb_static_lb(g, 0.2, 2, &mut v) }, BbStatus::Ok);
    // Direct sum over {21, 100}: 0.2·(21/4 + 79/4·exp(−2·21·0.04)).
    let want = 0.2 * (21.0 / 4.0 + 79.0 / 4.0 * (-2.0f64 * 21.0 * 0.04).exp());
    assert!((v - want).abs() < 1e-12, "{v} vs {want}");
    assert_eq!(unsafe { bb_static_lb(g, 2.0, 2, &mut v) }, BbStatus::Domain);
    unsafe { bb_grid_free(g) };

    let p = [0.5, 0.5];
    let q = [1.0, 0.0];
    assert_eq!(unsafe { bb_tv_distance(p.as_ptr(), q.as_ptr(), 2, &mut v) }, BbStatus::Ok);
    assert!((v - 0.5).abs() < 1e-15);
    assert_eq!(unsafe { bb_kl_divergence(q.as_ptr(), p.as_ptr(), 2, &mut v) }, BbStatus::Ok);
    assert!((v - 2f64.ln()).abs() < 1e-15);
    assert_eq!(unsafe { bb_kl_divergence(p.as_ptr(), q.as_ptr(), 2, &mut v) }, BbStatus::Ok);
    assert!(v.is_infinite());
    let bad = [0.7, 0.7];
    assert_eq!(unsafe { bb_tv_distance(p.as_ptr(), bad.as_ptr(), 2, &mut v) }, BbStatus::Domain);
}

#[test]
fn version_is_package_version() {
    let v = unsafe { CStr::from_ptr(bb_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export_and_compiles() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/batched_bandits.h");
    let text = std::fs::read_to_string(header).expect("header generated by build script");
    for name in [
        "bb_version", "bb_last_error", "bb_clear_error", "bb_grid_new", "bb_grid_from_times",
        "bb_grid_len", "bb_grid_times", "bb_grid_free", "bb_instance_new", "bb_instance_free",
        "bb_mean_regret", "bb_static_lb", "bb_tv_distance", "bb_kl_divergence",
        "BB_STATUS_BUFFER_TOO_SMALL", "typedef struct BbGrid BbGrid",
    ] {
        assert!(text.contains(name), "missing {name}");
    }
    let Ok(cc) = Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler; skipping syntax check");
        return;
    };
    assert!(cc.status.success());
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c", header])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
