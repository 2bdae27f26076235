use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use dlcodes_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(dlc_last_error()) }.to_string_lossy().into_owned()
}

fn build_example() -> *mut DlcCode {
    let m = [1u32, 1, 1];
    let mut code = ptr::null_mut();
    let st = unsafe { dlc_code_build_a2(2, 1, 3, 3, m.as_ptr(), 3, m.as_ptr(), 3, &mut code) };
    assert_eq!(st, DlcStatus::Ok, "{}", last_error());
    code
}

#[test]
fn field_handle_arithmetic() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(dlc_field_new(2, 2, &mut f), DlcStatus::Ok);
        assert_eq!(dlc_field_order(f), 4);
        let mut r = 0;
        // in GF(4) every nonzero element cubes to 1
        for a in 1..4 {
            assert_eq!(dlc_field_op(f, 2, a, a, &mut r), DlcStatus::Ok);
            assert_eq!(dlc_field_op(f, 2, r, a, &mut r), DlcStatus::Ok);
            assert_eq!(r, 1);
            assert_eq!(dlc_field_op(f, 0, a, a, &mut r), DlcStatus::Ok);
            assert_eq!(r, 0);
        }
        assert_eq!(dlc_field_op(f, 3, 1, 0, &mut r), DlcStatus::InvalidArgument);
        assert!(!last_error().is_empty());
        assert_eq!(dlc_field_op(f, 7, 1, 1, &mut r), DlcStatus::InvalidArgument);
        assert_eq!(dlc_field_op(f, 0, 9, 1, &mut r), DlcStatus::InvalidArgument);
        dlc_field_free(f);

        let desc = CString::new("3^2/101").unwrap();
        assert_eq!(dlc_field_from_descriptor(desc.as_ptr(), &mut f), DlcStatus::Ok);
        assert_eq!(dlc_field_order(f), 9);
        dlc_field_free(f);
        let bad = CString::new("6^1/01").unwrap();
        assert_eq!(dlc_field_from_descriptor(bad.as_ptr(), &mut f), DlcStatus::Parse);
        assert_eq!(dlc_field_new(6, 1, &mut f), DlcStatus::InvalidArgument);
    }
}

#[test]
fn null_pointers_are_reported() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(dlc_field_new(2, 1, ptr::null_mut()), DlcStatus::NullPointer);
        assert_eq!(dlc_field_from_descriptor(ptr::null(), &mut f), DlcStatus::NullPointer);
        let mut r = 0;
        assert_eq!(dlc_field_op(ptr::null(), 0, 0, 0, &mut r), DlcStatus::NullPointer);
        assert_eq!(dlc_field_order(ptr::null()), 0);
        assert_eq!(dlc_code_length(ptr::null()), 0);
        let mut d = 0;
        assert_eq!(dlc_code_min_distance(ptr::null(), 0, &mut d), DlcStatus::NullPointer);
        assert_eq!(last_error(), "null code");
        let mut p = DlcParams::default();
        assert_eq!(dlc_params_a2(2, 1, 3, 3, ptr::null(), 2, ptr::null(), 0, &mut p), DlcStatus::NullPointer);
        dlc_field_free(ptr::null_mut());
        dlc_code_free(ptr::null_mut());
    }
}

#[test]
fn params_match_the_examples() {
    unsafe {
        let m = [1u32, 1, 1];
        let mut p = DlcParams::default();
        assert_eq!(dlc_params_a2(2, 1, 3, 3, m.as_ptr(), 3, m.as_ptr(), 3, &mut p), DlcStatus::Ok);
        assert_eq!(p, DlcParams { n: 63, k: 14, d_lower: 42, hypotheses_hold: 1 });
        assert_eq!(dlc_params_2a4(2, 2, 4, 4, &mut p), DlcStatus::Ok);
        assert_eq!((p.n, p.k, p.d_lower), (7425, 1107, 4455));
        assert_eq!(dlc_params_2a4(2, 1, 1, 1, &mut p), DlcStatus::HypothesisViolation);
        assert_eq!(dlc_params_a2(6, 1, 3, 3, m.as_ptr(), 3, m.as_ptr(), 3, &mut p), DlcStatus::InvalidArgument);
    }
}

#[test]
fn example_code_through_handles() {
    unsafe {
        let code = build_example();
        assert_eq!((dlc_code_length(code), dlc_code_dimension(code)), (63, 14));
        let mut d = 0;
        assert_eq!(dlc_code_min_distance(code, 0, &mut d), DlcStatus::Ok);
        assert_eq!(d, 6);
        let mut s = 0;
        assert_eq!(dlc_code_sampled_min_weight(code, 500, 3, &mut s), DlcStatus::Ok);
        assert!(s >= d);
        assert_eq!(dlc_code_min_distance(code, 10, &mut d), DlcStatus::BudgetExceeded);
        assert!(last_error().contains("budget"), "{}", last_error());
        let mut e = 0;
        assert_eq!(dlc_code_entry(code, 0, 0, &mut e), DlcStatus::Ok);
        assert_eq!(dlc_code_entry(code, 14, 0, &mut e), DlcStatus::InvalidArgument);
        assert_eq!(dlc_code_sampled_min_weight(code, 0, 3, &mut s), DlcStatus::InvalidArgument);
        dlc_code_free(code);
    }
}

#[test]
fn build_errors_map_to_status_codes() {
    unsafe {
        let mut code = ptr::null_mut();
        assert_eq!(dlc_code_build_a2(2, 1, 0, 0, ptr::null(), 0, ptr::null(), 0, &mut code), DlcStatus::HypothesisViolation);
        assert_eq!(dlc_code_build_a2(3, 3, 2, 1, ptr::null(), 0, ptr::null(), 0, &mut code), DlcStatus::RankDeficient);
        assert!(last_error().contains("74"), "{}", last_error());
        assert_eq!(dlc_code_build_a2(6, 1, 3, 3, ptr::null(), 0, ptr::null(), 0, &mut code), DlcStatus::InvalidArgument);
        assert!(code.is_null());
    }
}

#[test]
fn write_then_read_roundtrip() {
    let dir = std::env::temp_dir().join(format!("dlcodes-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mat = CString::new(dir.join("a2.mat").to_str().unwrap()).unwrap();
    let labels = CString::new(dir.join("a2.labels").to_str().unwrap()).unwrap();
    unsafe {
        let code = build_example();
        assert_eq!(dlc_code_write(code, mat.as_ptr(), labels.as_ptr()), DlcStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(dlc_code_read(mat.as_ptr(), labels.as_ptr(), &mut back), DlcStatus::Ok, "{}", last_error());
        assert_eq!(dlc_code_dimension(back), 14);
        let (mut a, mut b) = (0, 0);
        for r in 0..14 {
            for c in 0..63 {
                dlc_code_entry(code, r, c, &mut a);
                dlc_code_entry(back, r, c, &mut b);
                assert_eq!(a, b);
            }
        }
        dlc_code_free(code);
        dlc_code_free(back);

        let missing = CString::new("/nonexistent/x.mat").unwrap();
        assert_eq!(dlc_code_read(missing.as_ptr(), ptr::null(), &mut back), DlcStatus::Io);
        std::fs::write(dir.join("bad.mat"), "not a matrix\n").unwrap();
        let bad = CString::new(dir.join("bad.mat").to_str().unwrap()).unwrap();
        assert_eq!(dlc_code_read(bad.as_ptr(), ptr::null(), &mut back), DlcStatus::Parse);
    }
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(dlc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

const HEADER: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/include/dlcodes.h");

#[test]
fn header_declares_every_export() {
    let text = std::fs::read_to_string(HEADER).unwrap();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exported: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert_eq!(exported.len(), 19);
    for name in exported {
        assert!(text.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(text.contains("DLC_STATUS_BUDGET_EXCEEDED = 7"));
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(cc.status.success());
    let dir = std::env::temp_dir().join(format!("dlcodes-ffi-cc-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("use.c");
    std::fs::write(
        &file,
        "#include \"dlcodes.h\"\n\
         int main(void) {\n\
           DlcField *f = NULL;\n\
           if (dlc_field_new(2, 2, &f) != DLC_STATUS_OK) return 1;\n\
           uint32_t r; dlc_field_op(f, 2, 2, 3, &r); dlc_field_free(f);\n\
           DlcParams p; dlc_params_2a4(2, 2, 4, 4, &p);\n\
           return p.k == 1107 ? 0 : 1;\n\
         }\n",
    )
    .unwrap();
    let include = Path::new(HEADER).parent().unwrap();
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(include)
        .arg(&file)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
