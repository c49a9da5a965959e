use std::ffi::{CStr, CString};
use std::ptr;

use ncjet_ffi::*;

fn data(name: &str) -> CString {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../ncjet/data").join(name);
    CString::new(std::fs::read_to_string(path).unwrap()).unwrap()
}

fn last_error() -> String {
    let p = ncjet_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn quaternion_jets_through_the_c_api() {
    unsafe {
        let mut alg = ptr::null_mut();
        assert_eq!(ncjet_algebra_from_json(data("quaternions.json").as_ptr(), &mut alg), NcjetStatus::Ok);
        assert_eq!(ncjet_algebra_dim(alg), 4);
        let mut calc = ptr::null_mut();
        assert_eq!(ncjet_calculus_from_json(alg, data("quaternion_ij.json").as_ptr(), &mut calc), NcjetStatus::Ok);
        assert_eq!(ncjet_calculus_omega1_dim(calc), 8);

        let mut dims = [0usize; 4];
        let st = ncjet_jet_dims(calc, ptr::null(), NcjetFlavor::Holonomic, 3, 3, dims.as_mut_ptr(), dims.len());
        assert_eq!(st, NcjetStatus::Ok);
        assert_eq!(dims, [4, 12, 16, 16]);
        let mut dims = [0usize; 3];
        let st = ncjet_jet_dims(calc, ptr::null(), NcjetFlavor::Semiholonomic, 2, 3, dims.as_mut_ptr(), dims.len());
        assert_eq!(st, NcjetStatus::Ok);
        assert_eq!(dims, [4, 12, 28]);
        let st = ncjet_jet_dims(calc, ptr::null(), NcjetFlavor::Holonomic, 3, 3, dims.as_mut_ptr(), dims.len());
        assert_eq!(st, NcjetStatus::BufferTooSmall);

        let mut m = ptr::null_mut();
        let regular = CString::new("regular").unwrap();
        assert_eq!(ncjet_module_from_json(alg, regular.as_ptr(), &mut m), NcjetStatus::Ok);
        assert_eq!(ncjet_module_dim(m), 4);
        let mut dims = [0usize; 2];
        let st = ncjet_jet_dims(calc, m, NcjetFlavor::Nonholonomic, 1, 2, dims.as_mut_ptr(), 2);
        assert_eq!((st, dims), (NcjetStatus::Ok, [4, 12]));

        ncjet_module_free(m);
        ncjet_calculus_free(calc);
        ncjet_algebra_free(alg);
    }
}

#[test]
fn errors_are_reported_with_codes_and_messages() {
    unsafe {
        let mut alg = ptr::null_mut();
        let bad = CString::new("{ nope").unwrap();
        assert_eq!(ncjet_algebra_from_json(bad.as_ptr(), &mut alg), NcjetStatus::Parse);
        assert!(alg.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(ncjet_algebra_from_json(ptr::null(), &mut alg), NcjetStatus::NullArgument);

        assert_eq!(ncjet_algebra_from_json(data("dual_numbers.json").as_ptr(), &mut alg), NcjetStatus::Ok);
        let mut m = ptr::null_mut();
        let inv = CString::new(r#"{"dim": 1, "left_action": [[["1"]], [["1"]]]}"#).unwrap();
        assert_eq!(ncjet_module_from_json(alg, inv.as_ptr(), &mut m), NcjetStatus::Validation);
        let point = CString::new("point").unwrap();
        assert_eq!(ncjet_module_from_json(alg, point.as_ptr(), &mut m), NcjetStatus::Ok);
        assert_eq!(ncjet_module_dim(m), 1);
        assert!(ncjet_last_error().is_null());
        ncjet_module_free(m);
        ncjet_algebra_free(alg);

        // null handles are tolerated by the accessors and destructors
        assert_eq!(ncjet_algebra_dim(ptr::null()), 0);
        ncjet_algebra_free(ptr::null_mut());
        ncjet_string_free(ptr::null_mut());
    }
}

#[test]
fn reports_through_the_c_api() {
    unsafe {
        let mut s = ptr::null_mut();
        let name = CString::new("infinitesimal").unwrap();
        assert_eq!(ncjet_report(name.as_ptr(), &mut s), NcjetStatus::Ok);
        let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
        ncjet_string_free(s);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["dims"]["J1"], 3);
        let golden = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../ncjet/tests/golden/infinitesimal.json");
        assert_eq!(text, std::fs::read_to_string(golden).unwrap());

        let other = CString::new("torus").unwrap();
        assert_eq!(ncjet_report(other.as_ptr(), &mut s), NcjetStatus::Parse);
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ncjet.h")).unwrap();
    for name in [
        "ncjet_algebra_from_json",
        "ncjet_algebra_free",
        "ncjet_calculus_from_json",
        "ncjet_module_from_json",
        "ncjet_jet_dims",
        "ncjet_report",
        "ncjet_string_free",
        "ncjet_last_error",
        "NCJET_STATUS_OK",
        "NCJET_FLAVOR_HOLONOMIC",
        "typedef struct NcjetAlgebra NcjetAlgebra",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else { return };
    let dir = std::env::temp_dir().join(format!("ncjet-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("smoke.c");
    std::fs::write(
        &src,
        "#include \"ncjet.h\"\nint main(void) { NcjetAlgebra *a = 0; return ncjet_algebra_from_json(\"{}\", &a) == NCJET_STATUS_OK; }\n",
    )
    .unwrap();
    let status = std::process::Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success());
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| std::process::Command::new(c).arg("--version").output().is_ok())
        .ok_or(())
}
