use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use absgrid_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { absgrid_string_free(s) };
    out
}

fn last_error() -> String {
    let p = absgrid_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

const FIG1C: &str = "n=8 b=2; x=1..4 y=1..4; x=5..8 y=1..4; x=1..4 y=5..8; x=5..6 y=5..6; x=7 y=5; x=8 y=5; x=7 y=6; x=8 y=6; x=5 y=7; x=6 y=7; x=5 y=8; x=6 y=8; x=7..8 y=7..8";

#[test]
fn mapping_handles() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(absgrid_mapping_parse(c(FIG1C).as_ptr(), &mut m), AbsgridStatus::Ok);
        let mut cost = 0.0;
        assert_eq!(absgrid_mapping_cost(m, false, &mut cost), AbsgridStatus::Ok);
        assert_eq!(cost, 0.1125);
        let mut leaves = 0;
        assert_eq!(absgrid_mapping_leaf_count(m, &mut leaves), AbsgridStatus::Ok);
        assert_eq!(leaves, 13);

        let mut split = ptr::null_mut();
        assert_eq!(absgrid_mapping_split_at(m, 8, 8, &mut split), AbsgridStatus::Ok);
        let mut finer = 0.0;
        absgrid_mapping_cost(split, false, &mut finer);
        assert!(finer > cost);
        let mut text = ptr::null_mut();
        assert_eq!(absgrid_mapping_to_string(split, &mut text), AbsgridStatus::Ok);
        assert!(take(text).ends_with("x=8..8 y=8..8"));
        absgrid_mapping_free(split);
        absgrid_mapping_free(m);

        let mut init = ptr::null_mut();
        assert_eq!(absgrid_mapping_initial(4, 2, &mut init), AbsgridStatus::Ok);
        absgrid_mapping_cost(init, false, &mut cost);
        assert_eq!(cost, 0.0);
        absgrid_mapping_free(init);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(absgrid_mapping_parse(ptr::null(), &mut m), AbsgridStatus::NullArgument);
        assert_eq!(absgrid_mapping_parse(c("n=8 b=2; x=1..3 y=1..4").as_ptr(), &mut m), AbsgridStatus::Grid);
        assert!(last_error().contains("grid"));
        assert_eq!(absgrid_mapping_parse(c("nonsense").as_ptr(), &mut m), AbsgridStatus::Grid);
        assert!(m.is_null());
        let mut i = ptr::null_mut();
        assert_eq!(absgrid_instance_generate(c("chess").as_ptr(), 8, 0, false, &mut i), AbsgridStatus::Parse);
        assert!(last_error().contains("chess"));
        let mut cost = 0.0;
        assert_eq!(absgrid_mapping_cost(ptr::null(), false, &mut cost), AbsgridStatus::NullArgument);
        assert_eq!(absgrid_instance_parse(c("p.").as_ptr(), &mut i), AbsgridStatus::Parse);
        absgrid_mapping_free(ptr::null_mut());
        absgrid_instance_free(ptr::null_mut());
        absgrid_outcome_free(ptr::null_mut());
        absgrid_string_free(ptr::null_mut());
    }
}

#[test]
fn refine_and_render() {
    unsafe {
        let mut inst = ptr::null_mut();
        assert_eq!(absgrid_instance_generate(c("r").as_ptr(), 8, 1, true, &mut inst), AbsgridStatus::Ok);
        let mut lp = ptr::null_mut();
        absgrid_instance_to_lp(inst, &mut lp);
        let lp = c(&take(lp));
        let mut again = ptr::null_mut();
        assert_eq!(absgrid_instance_parse(lp.as_ptr(), &mut again), AbsgridStatus::Ok);
        absgrid_instance_free(again);

        let mut bad = ptr::null_mut();
        assert_eq!(absgrid_refine(inst, c("fastest").as_ptr(), 0, &mut bad), AbsgridStatus::Parse);

        let mut out = ptr::null_mut();
        assert_eq!(absgrid_refine(inst, c("two-phase").as_ptr(), 0, &mut out), AbsgridStatus::Ok);
        let mut status = AbsgridRunStatus::Unknown;
        absgrid_outcome_status(out, &mut status);
        assert_eq!(status, AbsgridRunStatus::AbstractUnsat);
        let mut json = ptr::null_mut();
        absgrid_outcome_report_json(out, &mut json);
        let report = absgrid::report::RunReport::from_json(&take(json)).unwrap();
        let mut steps = 0;
        absgrid_outcome_steps(out, &mut steps);
        assert_eq!(report.outcome.steps, steps);

        let mut m = ptr::null_mut();
        absgrid_outcome_final_mapping(out, &mut m);
        let mut pic = ptr::null_mut();
        assert_eq!(absgrid_render(m, inst, false, &mut pic), AbsgridStatus::Ok);
        assert!(take(pic).contains('@'));
        assert_eq!(absgrid_render(m, inst, true, &mut pic), AbsgridStatus::Ok);
        assert!(take(pic).starts_with("<svg"));
        absgrid_mapping_free(m);
        absgrid_outcome_free(out);
        absgrid_instance_free(inst);
    }
}

#[test]
fn header_compiles_and_links_from_c() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found, skipping");
        return;
    };
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // test builds leave the static library next to this executable in
    // target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap();
    let lib = [deps, deps.parent().unwrap()]
        .iter()
        .map(|d| d.join("libabsgrid_ffi.a"))
        .find(|p| p.exists())
        .expect("libabsgrid_ffi.a is built with the tests");
    let out_dir = tempfile::tempdir().unwrap();
    let bin = out_dir.path().join("smoke");
    let status = Command::new(&cc)
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg("-Wall")
        .arg("-Werror")
        .arg("-o")
        .arg(&bin)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("steps="));
}

fn which_cc() -> Result<String, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc).arg("--version").output().is_ok_and(|o| o.status.success()) {
            return Ok(cc.to_string());
        }
    }
    Err(())
}
