use sigkit_ffi::*;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { sigkit_string_free(p) };
    s
}

fn last_error() -> Option<String> {
    let p = sigkit_last_error_message();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string())
}

struct Toolkit(*mut SigkitToolkit);

impl Drop for Toolkit {
    fn drop(&mut self) {
        unsafe { sigkit_toolkit_free(self.0) };
    }
}

fn toolkit() -> Toolkit {
    Toolkit(sigkit_toolkit_new_default())
}

#[test]
fn parse_returns_annotation_json() {
    let tk = toolkit();
    let text = CString::new("Simvas(40) 1x1 po pc").unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { sigkit_parse(tk.0, text.as_ptr(), &mut out) };
    assert_eq!(status, SigkitStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    let anns = v.as_array().unwrap();
    assert_eq!(anns[0]["type"], "Medication");
    assert_eq!(anns[0]["text"], "Simvas");
    assert!(anns.iter().any(|a| a["type"] == "Mode" && a["text"] == "po"));
}

#[test]
fn expand_and_table_row() {
    let tk = toolkit();
    let text = CString::new("Hidil Cap(300) 1x1").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { sigkit_expand(tk.0, text.as_ptr(), &mut out) }, SigkitStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["record"]["active_ingredients"][0], "gemfibrozil");
    assert_eq!(v["record"]["dose_form"], "capsule");

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { sigkit_table_row(tk.0, text.as_ptr(), &mut out) }, SigkitStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["medication"], "Hidil Cap");
    assert_eq!(v["strength"], "300");
}

#[test]
fn null_arguments_are_reported() {
    let tk = toolkit();
    let mut out = ptr::null_mut();
    let status = unsafe { sigkit_parse(tk.0, ptr::null(), &mut out) };
    assert_eq!(status, SigkitStatus::NullArgument);
    assert!(out.is_null());
    assert!(last_error().unwrap().contains("text"));
    let text = CString::new("x").unwrap();
    let status = unsafe { sigkit_parse(ptr::null(), text.as_ptr(), &mut out) };
    assert_eq!(status, SigkitStatus::NullArgument);
}

#[test]
fn invalid_utf8_is_reported() {
    let tk = toolkit();
    let bytes = [0xffu8, 0xfe, 0];
    let mut out = ptr::null_mut();
    let status = unsafe { sigkit_parse(tk.0, bytes.as_ptr().cast(), &mut out) };
    assert_eq!(status, SigkitStatus::InvalidUtf8);
}

#[test]
fn interval_and_prf() {
    let (mut lo, mut hi) = (0.0, 0.0);
    assert_eq!(unsafe { sigkit_clopper_pearson(20, 25, 0.95, &mut lo, &mut hi) }, SigkitStatus::Ok);
    assert!((lo - 0.59296).abs() < 1e-4 && (hi - 0.93169).abs() < 1e-4);
    assert_eq!(unsafe { sigkit_clopper_pearson(3, 2, 0.95, &mut lo, &mut hi) }, SigkitStatus::InvalidInput);
    assert!(last_error().is_some());

    let (mut p, mut r, mut f) = (0.0, 0.0, 0.0);
    assert_eq!(unsafe { sigkit_prf(3, 1, 2, &mut p, &mut r, &mut f) }, SigkitStatus::Ok);
    assert_eq!((p, r), (0.75, 0.6));
    assert!((f - 2.0 * 0.75 * 0.6 / 1.35).abs() < 1e-12);
    assert!(last_error().is_none());
}

#[test]
fn equivalence_lookup() {
    let tk = toolkit();
    let a = CString::new("after meal").unwrap();
    let b = CString::new("pc").unwrap();
    let mut eq = false;
    assert_eq!(unsafe { sigkit_equivalent(tk.0, a.as_ptr(), b.as_ptr(), &mut eq) }, SigkitStatus::Ok);
    assert!(eq);
}

#[test]
fn toolkit_from_missing_file_fails() {
    let path = CString::new("/nonexistent/lexicon.json").unwrap();
    let mut tk = ptr::null_mut();
    let status = unsafe { sigkit_toolkit_from_files(path.as_ptr(), ptr::null(), ptr::null(), &mut tk) };
    assert_eq!(status, SigkitStatus::Io);
    assert!(tk.is_null());
    assert!(last_error().unwrap().contains("lexicon"));

    let status = unsafe { sigkit_toolkit_from_files(ptr::null(), ptr::null(), ptr::null(), &mut tk) };
    assert_eq!(status, SigkitStatus::Ok);
    unsafe { sigkit_toolkit_free(tk) };
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(sigkit_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/sigkit.h")).unwrap();
    for name in [
        "sigkit_toolkit_new_default",
        "sigkit_toolkit_from_files",
        "sigkit_toolkit_free",
        "sigkit_parse",
        "sigkit_expand",
        "sigkit_table_row",
        "sigkit_equivalent",
        "sigkit_clopper_pearson",
        "sigkit_prf",
        "sigkit_string_free",
        "sigkit_last_error_message",
        "sigkit_version",
        "SIGKIT_STATUS_NULL_ARGUMENT",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
